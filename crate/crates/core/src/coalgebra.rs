//! The weight-truncated cofree cocommutative coalgebra `C(L)`.
//!
//! Computations here run in the desuspended picture: the basis vector of a
//! canonical word `g1 ... gn` is the symmetric monomial
//! `s⁻¹g1 ⊙ ... ⊙ s⁻¹gn`, every factor carries the shifted degree `|g| - 1`,
//! and all signs are ordinary Koszul signs for those degrees. The wedge
//! monomial `g1 ∧ ... ∧ gn` equals the décalage sign times this basis vector
//! ([`Chain::from_wedge`]).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::sign::symmetric_transposition_sign;
use crate::graded::word::{canonicalize_symmetric, decalage_sign};
use crate::graded::{Element, GradedSpace, GradedVector, Rational, Sign, Word};

/// A finite linear combination of coalgebra basis monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chain {
    terms: BTreeMap<Word, Rational>,
}

impl Chain {
    pub fn zero() -> Chain {
        Chain::default()
    }

    pub fn monomial(word: Word) -> Chain {
        Chain {
            terms: BTreeMap::from([(word, Rational::one())]),
        }
    }

    /// The wedge monomial of a canonical word, in the symmetric basis.
    pub fn from_wedge(word: &Word, space: &GradedSpace) -> Chain {
        let mut c = Chain::zero();
        c.add_term(word.clone(), decalage_sign(word, space).to_rational());
        c
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(word.clone())
            .or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &Chain) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), c * x);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Chain {
        let mut out = Chain::zero();
        out.add_scaled(c, self);
        out
    }

    /// The part of weight exactly `n`.
    pub fn weight_part(&self, n: usize) -> Chain {
        Chain {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Projection onto cogenerators, as an element of `L` of degree `degree`.
    pub fn cogenerator_part(&self, space: &Arc<GradedSpace>, degree: i64) -> Element {
        let mut out = Element::zero(space, degree);
        for (w, c) in &self.terms {
            if w.weight() == 1 {
                let i = w.indices()[0];
                debug_assert_eq!(space.degree(i), degree);
                out.add_term(i, c);
            }
        }
        out
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(Word::weight).max().unwrap_or(0)
    }
}

/// Sign of reordering the positions of `word` into the order prescribed by
/// a block assignment (blocks in increasing label order, positions inside a
/// block kept in order).
fn assignment_sign(word: &Word, space: &GradedSpace, labels: &[usize]) -> Sign {
    let idx = word.indices();
    let mut sign = Sign::Plus;
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            if labels[i] > labels[j] {
                sign *= symmetric_transposition_sign(
                    space.shifted_degree(idx[i]),
                    space.shifted_degree(idx[j]),
                );
            }
        }
    }
    sign
}

fn blocks_of(word: &Word, labels: &[usize], count: usize) -> Vec<Word> {
    let mut blocks = vec![Vec::new(); count];
    for (&i, &b) in word.indices().iter().zip(labels) {
        blocks[b].push(i);
    }
    blocks.into_iter().map(Word::from_sorted).collect()
}

/// All ordered splittings of the positions of `word` into `n` nonempty
/// blocks, with their Koszul signs. Repeated factors are distinguished by
/// position, so a square splits twice.
pub fn ordered_splittings(word: &Word, space: &GradedSpace, n: usize) -> Vec<(Sign, Vec<Word>)> {
    let m = word.weight();
    if n == 0 || n > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; m];
    loop {
        let mut used = vec![false; n];
        for &l in &labels {
            used[l] = true;
        }
        if used.iter().all(|&u| u) {
            out.push((
                assignment_sign(word, space, &labels),
                blocks_of(word, &labels, n),
            ));
        }
        // odometer
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            labels[k] += 1;
            if labels[k] < n {
                break;
            }
            labels[k] = 0;
        }
    }
}

/// Unordered partitions of the positions of `word` into nonempty blocks,
/// blocks ordered by their first position. This is the cotriple coproduct
/// `ν` of the cofree coalgebra.
pub fn set_partitions(word: &Word, space: &GradedSpace) -> Vec<(Sign, Vec<Word>)> {
    let m = word.weight();
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    // restricted growth strings
    let mut labels = vec![0usize; m];
    fn rec(
        k: usize,
        max: usize,
        labels: &mut Vec<usize>,
        word: &Word,
        space: &GradedSpace,
        out: &mut Vec<(Sign, Vec<Word>)>,
    ) {
        if k == labels.len() {
            out.push((
                assignment_sign(word, space, labels),
                blocks_of(word, labels, max + 1),
            ));
            return;
        }
        for l in 0..=(max + 1) {
            labels[k] = l;
            rec(k + 1, max.max(l), labels, word, space, out);
        }
    }
    labels[0] = 0;
    if m == 1 {
        out.push((Sign::Plus, vec![word.clone()]));
        return out;
    }
    rec(1, 0, &mut labels, word, space, &mut out);
    out
}

/// Ways of choosing `k` positions of `word` to move to the front.
pub fn unshuffles(word: &Word, space: &GradedSpace, k: usize) -> Vec<(Sign, Word, Word)> {
    let m = word.weight();
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    for mask in 0u64..(1u64 << m) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let labels: Vec<usize> = (0..m)
            .map(|p| if mask >> p & 1 == 1 { 0 } else { 1 })
            .collect();
        out.push((
            assignment_sign(word, space, &labels),
            word.select(mask),
            word.select(!mask),
        ));
    }
    out
}

/// Reduced iterated coproduct `Δ⁽ⁿ⁾` of a monomial: a signed sum of
/// ordered `n`-fold tensors of nonempty monomials.
pub fn iterated_coproduct(
    word: &Word,
    space: &GradedSpace,
    n: usize,
) -> Result<BTreeMap<Vec<Word>, Rational>> {
    if n < 2 {
        return Err(Error::Invalid(format!(
            "iterated coproduct needs at least 2 factors, got {n}"
        )));
    }
    let mut out: BTreeMap<Vec<Word>, Rational> = BTreeMap::new();
    for (sign, blocks) in ordered_splittings(word, space, n) {
        let e = out.entry(blocks).or_insert_with(Rational::zero);
        *e += sign.to_rational();
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// A two-fold tensor of chains.
pub type TensorChain = BTreeMap<(Word, Word), Rational>;

fn add_tensor_term(t: &mut TensorChain, key: (Word, Word), c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

/// Reduced coproduct of a chain.
pub fn coproduct(chain: &Chain, space: &GradedSpace) -> TensorChain {
    let mut out = TensorChain::new();
    for (w, c) in chain.terms() {
        for (sign, mut blocks) in ordered_splittings(w, space, 2) {
            let right = blocks.pop().expect("two blocks");
            let left = blocks.pop().expect("two blocks");
            add_tensor_term(&mut out, (left, right), sign.apply(c.clone()));
        }
    }
    out
}

/// Applies `left ⊗ right` to a tensor, with the Koszul sign of `right`
/// passing the left factor. `None` stands for the identity.
pub fn apply_tensor(
    left: Option<&CoalgebraMap>,
    right: Option<&CoalgebraMap>,
    tensor: &TensorChain,
    left_space: &GradedSpace,
) -> TensorChain {
    let mut out = TensorChain::new();
    let right_degree = right.map_or(0, |r| r.degree);
    for ((a, b), c) in tensor {
        let sign = Sign::parity(right_degree * a.shifted_degree(left_space));
        let la = left.map_or_else(|| Chain::monomial(a.clone()), |l| l.apply_word(a));
        let rb = right.map_or_else(|| Chain::monomial(b.clone()), |r| r.apply_word(b));
        for (x, cx) in la.terms() {
            for (y, cy) in rb.terms() {
                add_tensor_term(&mut out, (x.clone(), y.clone()), sign.apply(c * cx * cy));
            }
        }
    }
    out
}

pub fn tensor_add_scaled(t: &mut TensorChain, c: &Rational, other: &TensorChain) {
    for (k, x) in other {
        add_tensor_term(t, k.clone(), c * x);
    }
}

/// Symmetric product of homogeneous elements of `L`, read as elements of
/// the desuspension, expanded in the monomial basis.
pub fn product_of_elements(factors: &[&Element], space: &GradedSpace) -> Chain {
    let mut out = Chain::zero();
    if factors.iter().any(|f| f.is_zero()) {
        return out;
    }
    fn rec(
        factors: &[&Element],
        space: &GradedSpace,
        indices: &mut Vec<usize>,
        coeff: Rational,
        out: &mut Chain,
    ) {
        let k = indices.len();
        if k == factors.len() {
            if let Some((w, s)) = canonicalize_symmetric(indices.clone(), space) {
                out.add_term(w, s.apply(coeff));
            }
            return;
        }
        for (i, c) in factors[k].terms() {
            indices.push(i);
            rec(factors, space, indices, &coeff * c, out);
            indices.pop();
        }
    }
    rec(factors, space, &mut Vec::new(), Rational::one(), &mut out);
    out
}

/// Product of a monomial with an element: `s⁻¹y ⊙ word`.
pub(crate) fn element_times_word(y: &Element, word: &Word, space: &GradedSpace) -> Chain {
    let mut out = Chain::zero();
    for (i, c) in y.terms() {
        let mut idx = Vec::with_capacity(word.weight() + 1);
        idx.push(i);
        idx.extend_from_slice(word.indices());
        if let Some((w, s)) = canonicalize_symmetric(idx, space) {
            out.add_term(w, s.apply(c.clone()));
        }
    }
    out
}

/// A linear map between truncated coalgebras, tabulated on every canonical
/// word of weight at most `cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalgebraMap {
    pub(crate) source: Arc<GradedSpace>,
    pub(crate) target: Arc<GradedSpace>,
    pub(crate) cap: usize,
    pub(crate) degree: i64,
    pub(crate) table: BTreeMap<Word, Chain>,
}

impl CoalgebraMap {
    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Degree in the desuspended grading.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn apply_word(&self, word: &Word) -> Chain {
        self.table.get(word).cloned().unwrap_or_default()
    }

    pub fn apply(&self, chain: &Chain) -> Chain {
        let mut out = Chain::zero();
        for (w, c) in chain.terms() {
            if let Some(img) = self.table.get(w) {
                out.add_scaled(c, img);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &CoalgebraMap) -> CoalgebraMap {
        CoalgebraMap {
            source: other.source.clone(),
            target: self.target.clone(),
            cap: other.cap,
            degree: self.degree + other.degree,
            table: other
                .table
                .iter()
                .map(|(w, c)| (w.clone(), self.apply(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn difference(&self, other: &CoalgebraMap) -> CoalgebraMap {
        let mut table = self.table.clone();
        for (w, c) in &other.table {
            let entry = table.entry(w.clone()).or_default();
            entry.add_scaled(&-Rational::one(), c);
        }
        table.retain(|_, c| !c.is_zero());
        CoalgebraMap {
            table,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.table.values().all(Chain::is_zero)
    }

    pub fn images(&self) -> impl Iterator<Item = (&Word, &Chain)> + '_ {
        self.table.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::wedge_basis;

    #[test]
    fn coproduct_of_a_cogenerator_vanishes() {
        let v = GradedSpace::new([("a", 0), ("b", 1)]).unwrap();
        let w = wedge_basis(&v, 1).unwrap()[0].clone();
        assert!(iterated_coproduct(&w, &v, 2).unwrap().is_empty());
    }

    #[test]
    fn coproduct_of_a_two_letter_word() {
        let v = GradedSpace::new([("a", 0), ("b", 1)]).unwrap();
        let ab = Word::from_sorted(vec![0, 1]);
        let d = iterated_coproduct(&ab, &v, 2).unwrap();
        // s⁻¹b has even shifted degree, so both splittings carry +1.
        let a = Word::from_sorted(vec![0]);
        let b = Word::from_sorted(vec![1]);
        assert_eq!(d.len(), 2);
        assert_eq!(d[&vec![a.clone(), b.clone()]], Rational::one());
        assert_eq!(d[&vec![b, a]], Rational::one());
        assert!(iterated_coproduct(&ab, &v, 3).unwrap().is_empty());
    }

    #[test]
    fn squares_split_with_multiplicity() {
        let v = GradedSpace::new([("b", 1)]).unwrap();
        let bb = Word::from_sorted(vec![0, 0]);
        let d = iterated_coproduct(&bb, &v, 2).unwrap();
        let b = Word::from_sorted(vec![0]);
        assert_eq!(d[&vec![b.clone(), b]], Rational::from_integer(2.into()));
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let v = GradedSpace::new([("a", 0), ("b", 1), ("c", 2), ("d", 3)]).unwrap();
        let w = Word::from_sorted(vec![0, 1, 2, 3]);
        assert_eq!(set_partitions(&w, &v).len(), 15);
        assert_eq!(set_partitions(&w.select(0b111), &v).len(), 5);
    }
}
