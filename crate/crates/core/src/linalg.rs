//! Exact spans of sparse rational vectors, kept in reduced row echelon form.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::graded::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Subspace {
    // (pivot, row); the pivot coefficient is 1 and no other row touches it.
    rows: Vec<(usize, SparseVec)>,
}

impl Subspace {
    pub fn new() -> Subspace {
        Subspace::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> + '_ {
        self.rows.iter().map(|(_, r)| r)
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            let Some(c) = v.get(pivot).cloned() else {
                continue;
            };
            for (k, x) in row {
                let e = v.entry(*k).or_insert_with(Rational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let row: SparseVec = r.iter().map(|(&k, x)| (k, x * &inv)).collect();
        for (_, other) in &mut self.rows {
            let Some(c) = other.get(&pivot).cloned() else {
                continue;
            };
            for (k, x) in &row {
                let e = other.entry(*k).or_insert_with(Rational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    other.remove(k);
                }
            }
        }
        self.rows.push((pivot, row));
        true
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().all(|v| self.contains(v))
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut s = Subspace::new();
    for v in vectors {
        s.insert(v);
    }
    s.rank()
}

/// Basis of the kernel of the linear map sending coordinate `k` (one of
/// `domain`) to `images[k]`.
pub fn kernel(domain: &[usize], images: &[SparseVec]) -> Vec<SparseVec> {
    // Gaussian elimination on the augmented rows [image | e_k].
    let image_width = images
        .iter()
        .flat_map(|v| v.keys().copied())
        .max()
        .map_or(0, |m| m + 1);
    let tag = |pos: usize| image_width + pos;
    let mut pivots: Vec<(usize, SparseVec)> = Vec::new();
    let mut kernel = Vec::new();
    for (pos, img) in images.iter().enumerate() {
        let mut row = img.clone();
        row.insert(tag(pos), Rational::from_integer(1.into()));
        for (pivot, prow) in &pivots {
            let Some(c) = row.get(pivot).cloned() else {
                continue;
            };
            for (j, x) in prow {
                let e = row.entry(*j).or_insert_with(Rational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    row.remove(j);
                }
            }
        }
        match row.iter().next() {
            Some((&p, lead)) if p < image_width => {
                let inv = lead.recip();
                let row = row.iter().map(|(&j, x)| (j, x * &inv)).collect();
                pivots.push((p, row));
            }
            _ => {
                kernel.push(
                    row.into_iter()
                        .filter(|(j, _)| *j >= image_width)
                        .map(|(j, x)| (domain[j - image_width], x))
                        .collect(),
                );
            }
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries
            .iter()
            .map(|&(k, x)| (k, Rational::from_integer(x.into())))
            .collect()
    }

    #[test]
    fn span_membership() {
        let mut s = Subspace::new();
        assert!(s.insert(&v(&[(0, 1), (1, 2)])));
        assert!(s.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!s.insert(&v(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(s.rank(), 2);
        assert!(!s.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn kernel_of_a_rank_one_map() {
        // e0 -> f0, e1 -> 2 f0, e2 -> 0
        let images = vec![v(&[(0, 1)]), v(&[(0, 2)]), v(&[])];
        let k = kernel(&[0, 1, 2], &images);
        assert_eq!(k.len(), 2);
        for vec in &k {
            let mut img = Rational::zero();
            for (j, x) in vec {
                img += x * images[*j].get(&0).cloned().unwrap_or_else(Rational::zero);
            }
            assert!(img.is_zero());
        }
        assert_eq!(rank(&k), 2);
    }
}
