use std::fmt;

use crate::error::{Error, Result};
use crate::graded::sign::{symmetric_transposition_sign, transposition_sign, Sign};
use crate::graded::GradedSpace;

/// A canonical word: basis indices sorted by the space's total order, with
/// no even-degree index repeated. Words index the monomial basis of the
/// weight-graded coalgebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    /// Wraps indices that are already known to be canonical.
    pub(crate) fn from_sorted(indices: Vec<usize>) -> Word {
        debug_assert!(indices.windows(2).all(|w| w[0] <= w[1]));
        Word(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    /// Sum of the factor degrees.
    pub fn degree(&self, space: &GradedSpace) -> i64 {
        self.0.iter().map(|&i| space.degree(i)).sum()
    }

    /// Sum of the factor degrees in the desuspended picture.
    pub fn shifted_degree(&self, space: &GradedSpace) -> i64 {
        self.0.iter().map(|&i| space.shifted_degree(i)).sum()
    }

    pub fn names<'a>(&'a self, space: &'a GradedSpace) -> impl Iterator<Item = &'a str> + 'a {
        self.0.iter().map(move |&i| space.name(i))
    }

    pub fn display<'a>(&'a self, space: &'a GradedSpace) -> WordDisplay<'a> {
        WordDisplay { word: self, space }
    }

    /// Sub-word picked out by a set of positions (given as a bit mask).
    pub(crate) fn select(&self, mask: u64) -> Word {
        Word(
            self.0
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &i)| i)
                .collect(),
        )
    }

    /// Parses whitespace-separated basis names into a canonical word with
    /// its canonicalization sign.
    pub fn parse(text: &str, space: &GradedSpace) -> Result<Option<(Word, Sign)>> {
        let names: Vec<&str> = text.split_whitespace().collect();
        canonicalize_word(&names, space)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    space: &'a GradedSpace,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, name) in self.word.names(self.space).enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(name)?;
        }
        Ok(())
    }
}

/// Sorts a tuple of basis indices, accumulating `pair_sign` for every
/// adjacent exchange. Returns `None` if an even-degree index repeats.
fn sort_with_sign(
    mut indices: Vec<usize>,
    space: &GradedSpace,
    pair_sign: impl Fn(usize, usize) -> Sign,
) -> Option<(Word, Sign)> {
    let mut sign = Sign::Plus;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            sign *= pair_sign(indices[j - 1], indices[j]);
            indices.swap(j - 1, j);
            j -= 1;
        }
    }
    if indices
        .windows(2)
        .any(|w| w[0] == w[1] && space.degree(w[0]) % 2 == 0)
    {
        return None;
    }
    Some((Word(indices), sign))
}

/// Canonical form of an index tuple under the antisymmetric convention.
pub fn canonicalize_indices(indices: Vec<usize>, space: &GradedSpace) -> Option<(Word, Sign)> {
    sort_with_sign(indices, space, |a, b| {
        transposition_sign(space.degree(a), space.degree(b))
    })
}

/// Canonical form of an index tuple read as a monomial of the symmetric
/// algebra on the desuspension, where exchanges carry `(-1)^{(p-1)(q-1)}`.
pub fn canonicalize_symmetric(indices: Vec<usize>, space: &GradedSpace) -> Option<(Word, Sign)> {
    sort_with_sign(indices, space, |a, b| {
        symmetric_transposition_sign(space.shifted_degree(a), space.shifted_degree(b))
    })
}

/// Canonicalizes a tuple of basis names: sorted word plus the Koszul sign
/// of the sorting permutation, or `None` when the tuple vanishes.
pub fn canonicalize_word(factors: &[&str], space: &GradedSpace) -> Result<Option<(Word, Sign)>> {
    let indices = factors
        .iter()
        .map(|name| space.index_of(name))
        .collect::<Result<Vec<_>>>()?;
    Ok(canonicalize_indices(indices, space))
}

/// The décalage sign relating the wedge monomial `g1 ∧ ... ∧ gn` to the
/// symmetric monomial of the desuspended factors:
/// `g1 ∧ ... ∧ gn = (-1)^{Σ_i (n-i)(|g_i|-1)} s⁻¹g1 ⊙ ... ⊙ s⁻¹gn`.
///
/// It is compatible with both exchange rules, so it is well defined on
/// arbitrary tuples, and it is trivial on tuples of degree-1 elements.
pub fn decalage_sign_of_degrees(degrees: impl ExactSizeIterator<Item = i64>) -> Sign {
    let n = degrees.len() as i64;
    let exponent: i64 = degrees
        .enumerate()
        .map(|(i, d)| (n - 1 - i as i64) * (d - 1))
        .sum();
    Sign::parity(exponent)
}

pub fn decalage_sign(word: &Word, space: &GradedSpace) -> Sign {
    decalage_sign_of_degrees(word.0.iter().map(|&i| space.degree(i)))
}

/// Canonical basis words of the weight-`n` part: sorted multisets of basis
/// indices without repeated even-degree elements, in lexicographic order.
pub fn wedge_basis(space: &GradedSpace, n: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::ZeroWeight(0));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    extend_words(space, n, 0, &mut current, &mut out);
    Ok(out)
}

fn extend_words(
    space: &GradedSpace,
    n: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Word>,
) {
    if current.len() == n {
        out.push(Word(current.clone()));
        return;
    }
    for i in start..space.dim() {
        let next = if space.degree(i) % 2 == 0 { i + 1 } else { i };
        current.push(i);
        extend_words(space, n, next, current, out);
        current.pop();
    }
}

/// All canonical words of weight `1..=cap`, by weight then lexicographically.
pub fn words_up_to(space: &GradedSpace, cap: usize) -> Vec<Word> {
    (1..=cap)
        .flat_map(|n| wedge_basis(space, n).expect("weight is positive"))
        .collect()
}
