use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::word::{canonicalize_indices, decalage_sign};
use crate::graded::{Element, GradedSpace, GradedVector, Rational, Word};

/// A graded-antisymmetric multilinear map `source^{⊗n} → target` of degree
/// `d`, stored by its values on canonical words.
///
/// Evaluation on an arbitrary ordered tuple is the canonicalization sign
/// times the stored value, and zero when the tuple repeats an even-degree
/// element.
#[derive(Clone, PartialEq)]
pub struct MultiMap {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    weight: usize,
    degree: i64,
    values: BTreeMap<Word, Element>,
}

impl MultiMap {
    pub fn new(
        source: &Arc<GradedSpace>,
        target: &Arc<GradedSpace>,
        weight: usize,
        degree: i64,
    ) -> Result<MultiMap> {
        if weight == 0 {
            return Err(Error::ZeroWeight(0));
        }
        Ok(MultiMap {
            source: source.clone(),
            target: target.clone(),
            weight,
            degree,
            values: BTreeMap::new(),
        })
    }

    /// The identity of a space, as a weight-1 map of degree 0.
    pub fn identity(space: &Arc<GradedSpace>) -> MultiMap {
        let mut m = MultiMap::new(space, space, 1, 0).expect("weight 1");
        for i in 0..space.dim() {
            m.values
                .insert(Word::from_sorted(vec![i]), Element::basis(space, i));
        }
        m
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Nonzero values on canonical words.
    pub fn values(&self) -> impl Iterator<Item = (&Word, &Element)> + '_ {
        self.values.iter()
    }

    pub fn value(&self, word: &Word) -> Option<&Element> {
        self.values.get(word)
    }

    /// Value on a canonical word, zero if unset.
    pub fn value_or_zero(&self, word: &Word) -> Element {
        self.values
            .get(word)
            .cloned()
            .unwrap_or_else(|| Element::zero(&self.target, word.degree(&self.source) + self.degree))
    }

    /// Value on the symmetric monomial of the desuspended factors of `word`,
    /// i.e. the décalage sign times the stored value.
    pub(crate) fn shifted_value(&self, word: &Word) -> Option<Element> {
        self.values.get(word).map(|v| {
            let s = decalage_sign(word, &self.source);
            let mut out = v.clone();
            if !s.is_plus() {
                out = out.scaled(&-Rational::one());
            }
            out
        })
    }

    /// Sets the value on the tuple named by `factors` (any order).
    pub fn set(&mut self, factors: &[&str], value: Element) -> Result<()> {
        let indices = factors
            .iter()
            .map(|n| self.source.index_of(n))
            .collect::<Result<Vec<_>>>()?;
        self.set_indices(indices, value)
    }

    pub fn set_indices(&mut self, indices: Vec<usize>, value: Element) -> Result<()> {
        if indices.len() != self.weight {
            return Err(Error::LengthMismatch {
                what: "argument tuple",
                got: indices.len(),
                expected: self.weight,
            });
        }
        let tuple_degree: i64 = indices.iter().map(|&i| self.source.degree(i)).sum();
        if value.degree() != tuple_degree + self.degree {
            return Err(Error::DegreeMismatch {
                context: format!(
                    "value of a weight-{} map of degree {}",
                    self.weight, self.degree
                ),
                expected: tuple_degree + self.degree,
                got: value.degree(),
            });
        }
        if value.space().as_ref() != self.target.as_ref() {
            return Err(Error::SpaceMismatch(
                "value is not in the target space".into(),
            ));
        }
        match canonicalize_indices(indices, &self.source) {
            None if value.is_zero() => Ok(()),
            None => Err(Error::Invalid(
                "a tuple repeating an even-degree element must map to zero".into(),
            )),
            Some((word, sign)) => {
                let value = if sign.is_plus() {
                    value
                } else {
                    value.scaled(&-Rational::one())
                };
                self.set_word(word, value);
                Ok(())
            }
        }
    }

    pub(crate) fn set_word(&mut self, word: Word, value: Element) {
        if value.is_zero() {
            self.values.remove(&word);
        } else {
            self.values.insert(word, value);
        }
    }

    pub(crate) fn add_to_word(&mut self, word: &Word, c: &Rational, value: &Element) {
        if value.is_zero() || c.is_zero() {
            return;
        }
        match self.values.get_mut(word) {
            Some(v) => {
                v.add_scaled(c, value);
                if v.is_zero() {
                    self.values.remove(word);
                }
            }
            None => {
                self.values.insert(word.clone(), value.scaled(c));
            }
        }
    }

    /// Evaluation on a tuple of basis indices.
    pub fn eval_indices(&self, indices: &[usize]) -> Element {
        let degree: i64 = indices.iter().map(|&i| self.source.degree(i)).sum::<i64>() + self.degree;
        match canonicalize_indices(indices.to_vec(), &self.source) {
            None => Element::zero(&self.target, degree),
            Some((word, sign)) => match self.values.get(&word) {
                None => Element::zero(&self.target, degree),
                Some(v) => v.scaled(&sign.to_rational()),
            },
        }
    }

    /// Multilinear evaluation on homogeneous elements.
    pub fn eval(&self, args: &[&Element]) -> Result<Element> {
        if args.len() != self.weight {
            return Err(Error::LengthMismatch {
                what: "argument list",
                got: args.len(),
                expected: self.weight,
            });
        }
        for a in args {
            if a.space().as_ref() != self.source.as_ref() {
                return Err(Error::SpaceMismatch(
                    "argument is not in the source space".into(),
                ));
            }
        }
        let degree = args.iter().map(|a| a.degree()).sum::<i64>() + self.degree;
        let mut out = Element::zero(&self.target, degree);
        if args.iter().any(|a| a.is_zero()) || self.values.is_empty() {
            return Ok(out);
        }
        let mut indices = Vec::with_capacity(args.len());
        self.eval_rec(args, &mut indices, Rational::one(), &mut out);
        Ok(out)
    }

    fn eval_rec(
        &self,
        args: &[&Element],
        indices: &mut Vec<usize>,
        coeff: Rational,
        out: &mut Element,
    ) {
        let k = indices.len();
        if k == args.len() {
            if let Some((word, sign)) = canonicalize_indices(indices.clone(), &self.source) {
                if let Some(v) = self.values.get(&word) {
                    out.add_scaled(&sign.apply(coeff), v);
                }
            }
            return;
        }
        for (i, c) in args[k].terms() {
            indices.push(i);
            self.eval_rec(args, indices, &coeff * c, out);
            indices.pop();
        }
    }

    pub fn scaled(&self, c: &Rational) -> MultiMap {
        let mut out = self.clone();
        out.values = BTreeMap::new();
        if !c.is_zero() {
            for (w, v) in &self.values {
                out.values.insert(w.clone(), v.scaled(c));
            }
        }
        out
    }

    pub fn checked_add(&self, other: &MultiMap) -> Result<MultiMap> {
        if self.weight != other.weight || self.degree != other.degree {
            return Err(Error::Invalid(
                "adding multilinear maps of different shape".into(),
            ));
        }
        let mut out = self.clone();
        for (w, v) in &other.values {
            out.add_to_word(w, &Rational::one(), v);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.checked_add(&other.scaled(&-Rational::one()))
    }
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultiMap[weight {}, degree {}]{{",
            self.weight, self.degree
        )?;
        for (k, (w, v)) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} -> {}", w.display(&self.source), v)?;
        }
        f.write_str("}")
    }
}
