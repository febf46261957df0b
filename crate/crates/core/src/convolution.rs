//! The convolution algebra `U` of maps from the truncated coalgebra of a
//! source structure into a target algebra.
//!
//! An element of `U`-degree `u` is a family of components
//! `α_n : ∧^n L → L°` of degree `u - n`. Brackets are computed on the
//! desuspended side, where an element becomes the map
//! `φ(x_1 ⊙ ... ⊙ x_n) = c̃(w) α_n(e_w)` of degree `u - 1`:
//!
//! * `d_1 φ = d°_1 ∘ φ - (-1)^{u-1} φ ∘ D`;
//! * `d_n(φ_1, ..., φ_n) = d°_n ∘ (φ_1 ⊗ ... ⊗ φ_n) ∘ Δ⁽ⁿ⁾` for `n ≥ 2`.
//!
//! The results are turned back into wedge components with the décalage
//! sign of the input word and the décalage sign of the `U`-degrees. With
//! these conventions the Maurer-Cartan curvature of the element attached to
//! a family of morphism components equals its morphism residual on the
//! nose, weight by weight.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::algebra::{lift_coderivation, make_linfty, LInfty, LInftyStructure};
use crate::coalgebra::{
    ordered_splittings, product_of_elements, set_partitions, Chain, CoalgebraMap,
};
use crate::error::{Error, Result};
use crate::graded::word::{decalage_sign, decalage_sign_of_degrees};
use crate::graded::{Element, GradedSpace, GradedVector, MultiMap, Rational, Sign, Word};
use crate::morphism::MorphismComponents;

/// An element of the convolution algebra: components on canonical source
/// words, in the wedge convention.
#[derive(Debug, Clone, PartialEq)]
pub struct HomElement<E> {
    source: Arc<GradedSpace>,
    u_degree: i64,
    components: BTreeMap<Word, E>,
}

impl<E: GradedVector> HomElement<E> {
    pub fn zero(source: &Arc<GradedSpace>, u_degree: i64) -> HomElement<E> {
        HomElement {
            source: source.clone(),
            u_degree,
            components: BTreeMap::new(),
        }
    }

    pub fn u_degree(&self) -> i64 {
        self.u_degree
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    /// Degree a component on `word` must have.
    pub fn component_degree(&self, word: &Word) -> i64 {
        word.degree(&self.source) + self.u_degree - word.weight() as i64
    }

    pub fn component(&self, word: &Word) -> Option<&E> {
        self.components.get(word)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Word, &E)> + '_ {
        self.components.iter()
    }

    /// Sets the component on a canonical word.
    pub fn set(&mut self, word: Word, value: E) -> Result<()> {
        let expected = self.component_degree(&word);
        if value.degree() != expected {
            return Err(Error::DegreeMismatch {
                context: format!("component on `{}`", word.display(&self.source)),
                expected,
                got: value.degree(),
            });
        }
        if value.is_zero() {
            self.components.remove(&word);
        } else {
            self.components.insert(word, value);
        }
        Ok(())
    }

    /// Least weight carrying a nonzero component; `cap + 1` for zero.
    pub fn filtration_level(&self, cap: usize) -> usize {
        self.components
            .keys()
            .map(Word::weight)
            .min()
            .unwrap_or(cap + 1)
    }

    /// Drops components of weight above `cap`.
    pub fn truncated(&self, cap: usize) -> HomElement<E> {
        HomElement {
            components: self
                .components
                .iter()
                .filter(|(w, _)| w.weight() <= cap)
                .map(|(w, e)| (w.clone(), e.clone()))
                .collect(),
            ..self.clone()
        }
    }

    /// The desuspended value on the monomial of `word`.
    pub(crate) fn shifted(&self, word: &Word) -> Option<E> {
        self.components
            .get(word)
            .map(|v| v.scaled(&decalage_sign(word, &self.source).to_rational()))
    }

    /// Keeps the components on words of one weight.
    pub fn weight_part(&self, n: usize) -> HomElement<E> {
        HomElement {
            components: self
                .components
                .iter()
                .filter(|(w, _)| w.weight() == n)
                .map(|(w, e)| (w.clone(), e.clone()))
                .collect(),
            ..self.clone()
        }
    }
}

impl HomElement<Element> {
    /// Collects multilinear maps (one per weight) into an element of
    /// `U`-degree `u`.
    pub fn from_maps(
        source: &Arc<GradedSpace>,
        u_degree: i64,
        maps: impl IntoIterator<Item = MultiMap>,
    ) -> Result<HomElement<Element>> {
        let mut out = HomElement::zero(source, u_degree);
        for m in maps {
            if m.source().as_ref() != source.as_ref() {
                return Err(Error::SpaceMismatch(
                    "component has the wrong source".into(),
                ));
            }
            let expected = u_degree - m.weight() as i64;
            if m.degree() != expected {
                return Err(Error::DegreeMismatch {
                    context: format!(
                        "weight-{} component of a U-degree {u_degree} element",
                        m.weight()
                    ),
                    expected,
                    got: m.degree(),
                });
            }
            for (w, v) in m.values() {
                out.set(w.clone(), v.clone())?;
            }
        }
        Ok(out)
    }

    /// The weight-`n` component as a multilinear map into `target`.
    pub fn to_map(&self, target: &Arc<GradedSpace>, n: usize) -> Result<MultiMap> {
        let mut m = MultiMap::new(&self.source, target, n, self.u_degree - n as i64)?;
        for (w, v) in &self.components {
            if w.weight() == n {
                m.set_indices(w.indices().to_vec(), v.clone())?;
            }
        }
        Ok(m)
    }
}

impl<E: GradedVector> GradedVector for HomElement<E> {
    fn degree(&self) -> i64 {
        self.u_degree
    }

    fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn add_scaled(&mut self, c: &Rational, other: &Self) {
        assert_eq!(
            self.u_degree, other.u_degree,
            "adding elements of different degrees"
        );
        for (w, v) in &other.components {
            match self.components.get_mut(w) {
                Some(x) => {
                    x.add_scaled(c, v);
                    if x.is_zero() {
                        self.components.remove(w);
                    }
                }
                None => {
                    let v = v.scaled(c);
                    if !v.is_zero() {
                        self.components.insert(w.clone(), v);
                    }
                }
            }
        }
    }

    fn zero_like(&self) -> Self {
        HomElement::zero(&self.source, self.u_degree)
    }
}

impl<E: GradedVector + fmt::Display> fmt::Display for HomElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(w, e)| format!("{} -> {e}", w.display(&self.source)))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// The convolution algebra `U / F^{cap+1} U`.
/// Signed ordered splittings of a word into blocks.
type Splittings = Vec<(Sign, Vec<Word>)>;

#[derive(Debug, Clone)]
pub struct ConvolutionAlgebra<T: LInfty> {
    source: Arc<LInftyStructure>,
    target: T,
    lift: CoalgebraMap,
    words: Vec<Word>,
    // splittings[word][n - 2]: ordered splittings into n blocks
    splittings: BTreeMap<Word, Vec<Splittings>>,
}

impl<T: LInfty> ConvolutionAlgebra<T> {
    pub fn new(source: &Arc<LInftyStructure>, target: T) -> ConvolutionAlgebra<T> {
        let words = source.words();
        let space = source.space();
        let splittings = words
            .iter()
            .map(|w| {
                let per_n = (2..=w.weight())
                    .map(|n| ordered_splittings(w, space, n))
                    .collect();
                (w.clone(), per_n)
            })
            .collect();
        ConvolutionAlgebra {
            source: source.clone(),
            target,
            lift: lift_coderivation(source),
            words,
            splittings,
        }
    }

    pub fn source(&self) -> &Arc<LInftyStructure> {
        &self.source
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    pub fn cap(&self) -> usize {
        self.source.cap()
    }

    /// Canonical source words indexing components.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    fn shifted_on_chain(&self, phi: &HomElement<T::Elem>, chain: &Chain, degree: i64) -> T::Elem {
        let mut out = self.target.zero(degree);
        for (v, c) in chain.terms() {
            if let Some(y) = phi.shifted(v) {
                out.add_scaled(c, &y);
            }
        }
        out
    }

    /// `d°_n` on desuspended target elements.
    fn target_shifted_bracket(&self, ys: &[&T::Elem]) -> Result<T::Elem> {
        let s = decalage_sign_of_degrees(
            ys.iter()
                .map(|y| y.degree())
                .collect::<Vec<_>>()
                .into_iter(),
        );
        Ok(self.target.bracket(ys)?.scaled(&s.to_rational()))
    }

    fn differential(&self, alpha: &HomElement<T::Elem>) -> Result<HomElement<T::Elem>> {
        let space = self.source.space();
        let u = alpha.u_degree;
        let mut out = HomElement::zero(space, u + 1);
        let outer = Sign::parity(u - 1);
        for w in &self.words {
            let degree = out.component_degree(w);
            let mut val = self.target.zero(degree);
            if let Some(y) = alpha.shifted(w) {
                val.add_scaled(&Rational::one(), &self.target.bracket(&[&y])?);
            }
            let back = self.shifted_on_chain(alpha, &self.lift.apply_word(w), degree);
            val.add_scaled(&(-outer).to_rational(), &back);
            if !val.is_zero() {
                let v = val.scaled(&decalage_sign(w, space).to_rational());
                out.components.insert(w.clone(), v);
            }
        }
        Ok(out)
    }

    fn higher(&self, args: &[&HomElement<T::Elem>]) -> Result<HomElement<T::Elem>> {
        let space = self.source.space();
        let n = args.len();
        let us: Vec<i64> = args.iter().map(|a| a.u_degree).collect();
        let u_out = us.iter().sum::<i64>() + 2 - n as i64;
        let u_sign = decalage_sign_of_degrees(us.iter().copied());
        let mut out = HomElement::zero(space, u_out);
        if args.iter().any(|a| a.is_zero()) {
            return Ok(out);
        }
        for w in &self.words {
            if w.weight() < n {
                continue;
            }
            let degree = out.component_degree(w);
            let mut val = self.target.zero(degree);
            'split: for (eps, blocks) in &self.splittings[w][n - 2] {
                let mut ys = Vec::with_capacity(n);
                for (a, b) in args.iter().zip(blocks) {
                    match a.shifted(b) {
                        Some(y) => ys.push(y),
                        None => continue 'split,
                    }
                }
                let mut exponent = 0;
                for i in 0..n {
                    for b in &blocks[..i] {
                        exponent += (us[i] - 1) * b.shifted_degree(space);
                    }
                }
                let refs: Vec<&T::Elem> = ys.iter().collect();
                let term = self.target_shifted_bracket(&refs)?;
                val.add_scaled(&(*eps * Sign::parity(exponent)).to_rational(), &term);
            }
            if !val.is_zero() {
                let s = decalage_sign(w, space) * u_sign;
                out.components
                    .insert(w.clone(), val.scaled(&s.to_rational()));
            }
        }
        Ok(out)
    }
}

impl<T: LInfty> LInfty for ConvolutionAlgebra<T> {
    type Elem = HomElement<T::Elem>;

    fn max_arity(&self) -> usize {
        self.cap()
    }

    fn zero(&self, degree: i64) -> HomElement<T::Elem> {
        HomElement::zero(self.source.space(), degree)
    }

    fn bracket(&self, args: &[&HomElement<T::Elem>]) -> Result<HomElement<T::Elem>> {
        for a in args {
            if a.source.as_ref() != self.source.space().as_ref() {
                return Err(Error::SpaceMismatch("element has the wrong source".into()));
            }
        }
        match args.len() {
            0 => Err(Error::ZeroWeight(0)),
            1 => self.differential(args[0]),
            n if n > self.cap() => {
                let u = args.iter().map(|a| a.u_degree).sum::<i64>() + 2 - n as i64;
                Ok(HomElement::zero(self.source.space(), u))
            }
            _ => self.higher(args),
        }
    }
}

/// Builds `U` for a pair of finite structures with a shared cap.
pub fn build_convolution(
    source: &Arc<LInftyStructure>,
    target: &Arc<LInftyStructure>,
) -> Result<ConvolutionAlgebra<LInftyStructure>> {
    if source.cap() != target.cap() {
        return Err(Error::CapMismatch(source.cap(), target.cap()));
    }
    Ok(ConvolutionAlgebra::new(source, target.as_ref().clone()))
}

/// The degree-1 element of `U` carrying the components of `F`.
pub fn morphism_to_mc(f: &MorphismComponents) -> HomElement<Element> {
    let mut out = HomElement::zero(f.source().space(), 1);
    for (_, m) in f.components() {
        for (w, v) in m.values() {
            out.components.insert(w.clone(), v.clone());
        }
    }
    out
}

/// Reads a degree-1 element of `U` as morphism components.
pub fn mc_to_morphism(
    source: &Arc<LInftyStructure>,
    target: &Arc<LInftyStructure>,
    alpha: &HomElement<Element>,
) -> Result<MorphismComponents> {
    if alpha.u_degree != 1 {
        return Err(Error::DegreeMismatch {
            context: "element of the convolution algebra read as a morphism".into(),
            expected: 1,
            got: alpha.u_degree,
        });
    }
    let maps = (1..=source.cap())
        .map(|n| alpha.to_map(target.space(), n))
        .collect::<Result<Vec<_>>>()?;
    MorphismComponents::new(source, target, maps)
}

/// `∂(b, f)` on one ordered block decomposition: the sum over slots `i` of
/// `f(B_1) ⊙ ... ⊙ b(B_i) ⊙ ... ⊙ f(B_r)`, with the sign
/// `(-1)^{‖b‖ (‖B_1‖ + ... + ‖B_{i-1}‖)}` for moving `b` past the earlier
/// blocks (`‖·‖` is the desuspended degree, `‖b‖ = u_b - 1`).
pub fn partial_derivation(
    b: &HomElement<Element>,
    f: &HomElement<Element>,
    blocks: &[Word],
    target: &Arc<GradedSpace>,
) -> Result<Chain> {
    if f.u_degree != 1 {
        return Err(Error::DegreeMismatch {
            context: "the map f in ∂(b, f)".into(),
            expected: 1,
            got: f.u_degree,
        });
    }
    let space = &b.source;
    let mut out = Chain::zero();
    let mut passed = 0;
    for i in 0..blocks.len() {
        let mut factors = Vec::with_capacity(blocks.len());
        let mut vanishes = false;
        for (j, blk) in blocks.iter().enumerate() {
            let v = if i == j {
                b.shifted(blk)
            } else {
                f.shifted(blk)
            };
            match v {
                Some(v) => factors.push(v),
                None => {
                    vanishes = true;
                    break;
                }
            }
        }
        if !vanishes {
            let sign = Sign::parity((b.u_degree - 1) * passed);
            let refs: Vec<&Element> = factors.iter().collect();
            out.add_scaled(&sign.to_rational(), &product_of_elements(&refs, target));
        }
        passed += blocks[i].shifted_degree(space);
    }
    Ok(out)
}

/// `∂(b, f) ∘ ν` on a monomial: [`partial_derivation`] summed over the set
/// partitions of the word.
pub fn partial_derivation_on_word(
    b: &HomElement<Element>,
    f: &HomElement<Element>,
    word: &Word,
    target: &Arc<GradedSpace>,
) -> Result<Chain> {
    let mut out = Chain::zero();
    for (sign, blocks) in set_partitions(word, &b.source) {
        out.add_scaled(
            &sign.to_rational(),
            &partial_derivation(b, f, &blocks, target)?,
        );
    }
    Ok(out)
}

impl ConvolutionAlgebra<LInftyStructure> {
    /// Basis of the truncated convolution algebra as (word, target index,
    /// `U`-degree) triples.
    pub fn hom_basis(&self) -> Vec<(Word, usize, i64)> {
        let src = self.source.space();
        let tgt = self.target.space();
        let mut out = Vec::new();
        for w in &self.words {
            for j in 0..tgt.dim() {
                let u = tgt.degree(j) - w.degree(src) + w.weight() as i64;
                out.push((w.clone(), j, u));
            }
        }
        out
    }

    /// The basis element sending `e_w` to the `j`-th target basis vector.
    pub fn basis_element(&self, word: &Word, j: usize) -> HomElement<Element> {
        let src = self.source.space();
        let tgt = self.target.space();
        let u = tgt.degree(j) - word.degree(src) + word.weight() as i64;
        let mut out = HomElement::zero(src, u);
        out.components.insert(word.clone(), Element::basis(tgt, j));
        out
    }

    /// `U / F^{cap+1} U` as a finite structure on the space spanned by the
    /// basis elements, named `w1.w2>t`.
    pub fn materialize(&self) -> Result<LInftyStructure> {
        let src = self.source.space();
        let tgt = self.target.space();
        let basis = self.hom_basis();
        let names: Vec<(String, i64)> = basis
            .iter()
            .map(|(w, j, u)| {
                let word: Vec<&str> = w.names(src).collect();
                (format!("{}>{}", word.join("."), tgt.name(*j)), *u)
            })
            .collect();
        let uspace = GradedSpace::new(names)?;
        let index: BTreeMap<(Word, usize), usize> = basis
            .iter()
            .enumerate()
            .map(|(k, (w, j, _))| ((w.clone(), *j), k))
            .collect();
        let elems: Vec<HomElement<Element>> = basis
            .iter()
            .map(|(w, j, _)| self.basis_element(w, *j))
            .collect();
        let mut maps = Vec::new();
        for n in 1..=self.cap() {
            let mut m = MultiMap::new(&uspace, &uspace, n, 2 - n as i64)?;
            for uw in crate::graded::wedge_basis(&uspace, n)? {
                let args: Vec<&HomElement<Element>> =
                    uw.indices().iter().map(|&k| &elems[k]).collect();
                let value = self.bracket(&args)?;
                let mut terms = Vec::new();
                for (w, e) in value.components() {
                    for (j, c) in e.terms() {
                        terms.push((index[&(w.clone(), j)], c.clone()));
                    }
                }
                let v = Element::from_terms(&uspace, value.u_degree, terms)?;
                m.set_indices(uw.indices().to_vec(), v)?;
            }
            maps.push(m);
        }
        make_linfty(&uspace, maps, self.cap())
    }
}
