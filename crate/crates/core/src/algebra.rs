//! L∞-algebra structures on finite graded spaces, truncated at a weight cap.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::coalgebra::{element_times_word, unshuffles, Chain, CoalgebraMap};
use crate::error::{Error, Result};
use crate::graded::sign::transposition_sign;
use crate::graded::word::{decalage_sign, words_up_to};
use crate::graded::{Element, GradedSpace, GradedVector, MultiMap, Rational, Sign, Word};
use crate::linalg::{SparseVec, Subspace};

/// Anything with graded-antisymmetric brackets `Q_n` of degree `2 - n`.
///
/// The generic algorithms (curvature, twisting, gauge flows, the unshuffle
/// identity) only need this interface, so they run unchanged on a finite
/// structure, on a convolution algebra and on a path algebra.
pub trait LInfty {
    type Elem: GradedVector;

    /// Brackets of larger arity vanish.
    fn max_arity(&self) -> usize;

    fn zero(&self, degree: i64) -> Self::Elem;

    /// `Q_n(args)` with `n = args.len() ≥ 1`.
    fn bracket(&self, args: &[&Self::Elem]) -> Result<Self::Elem>;
}

/// A graded space with structure maps `Q_1, ..., Q_cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct LInftyStructure {
    space: Arc<GradedSpace>,
    cap: usize,
    maps: BTreeMap<usize, MultiMap>,
}

/// Builds a structure, checking that `Q_n` has degree `2 - n`, lives on
/// `space` and has weight at most `cap`. Missing weights are zero.
pub fn make_linfty(
    space: &Arc<GradedSpace>,
    maps: impl IntoIterator<Item = MultiMap>,
    cap: usize,
) -> Result<LInftyStructure> {
    if cap == 0 {
        return Err(Error::ZeroWeight(0));
    }
    let mut table = BTreeMap::new();
    for m in maps {
        let n = m.weight();
        let expected = 2 - n as i64;
        if m.degree() != expected {
            return Err(Error::StructureDegree {
                weight: n,
                expected,
                got: m.degree(),
            });
        }
        if m.source().as_ref() != space.as_ref() || m.target().as_ref() != space.as_ref() {
            return Err(Error::SpaceMismatch(format!(
                "Q_{n} is not an operation on the structure's space"
            )));
        }
        if n > cap {
            return Err(Error::AboveCap { weight: n, cap });
        }
        if table.insert(n, m).is_some() {
            return Err(Error::Invalid(format!("Q_{n} given twice")));
        }
    }
    table.retain(|_, m: &mut MultiMap| !m.is_zero());
    Ok(LInftyStructure {
        space: space.clone(),
        cap,
        maps: table,
    })
}

/// A differential graded Lie algebra as an L∞-structure with `Q_n = 0`
/// for `n ≥ 3`.
pub fn from_dgla(
    space: &Arc<GradedSpace>,
    differential: MultiMap,
    bracket: MultiMap,
    cap: usize,
) -> Result<LInftyStructure> {
    if differential.weight() != 1 {
        return Err(Error::Invalid("the differential must have weight 1".into()));
    }
    if bracket.weight() != 2 {
        return Err(Error::Invalid("the bracket must have weight 2".into()));
    }
    make_linfty(space, [differential, bracket], cap.max(2))
}

impl LInftyStructure {
    /// The zero structure.
    pub fn abelian(space: &Arc<GradedSpace>, cap: usize) -> Result<LInftyStructure> {
        make_linfty(space, [], cap)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn map(&self, n: usize) -> Option<&MultiMap> {
        self.maps.get(&n)
    }

    /// Nonzero structure maps by weight.
    pub fn maps(&self) -> impl Iterator<Item = (usize, &MultiMap)> + '_ {
        self.maps.iter().map(|(&n, m)| (n, m))
    }

    /// Same maps under another cap; maps above the new cap are dropped.
    pub fn with_cap(&self, cap: usize) -> Result<LInftyStructure> {
        make_linfty(
            &self.space,
            self.maps.values().filter(|m| m.weight() <= cap).cloned(),
            cap,
        )
    }

    /// `d_n` on the monomial of `word`: the décalage sign times `Q_n(word)`.
    pub(crate) fn shifted_value(&self, word: &Word) -> Option<Element> {
        self.maps
            .get(&word.weight())
            .and_then(|m| m.shifted_value(word))
    }

    /// Canonical words of weight `1..=cap`.
    pub fn words(&self) -> Vec<Word> {
        words_up_to(&self.space, self.cap)
    }

    /// `Q_1(x)`.
    pub fn differential(&self, x: &Element) -> Element {
        match self.maps.get(&1) {
            Some(q) => q.eval(&[x]).expect("argument from the structure's space"),
            None => Element::zero(&self.space, x.degree() + 1),
        }
    }
}

impl LInfty for LInftyStructure {
    type Elem = Element;

    fn max_arity(&self) -> usize {
        self.cap
    }

    fn zero(&self, degree: i64) -> Element {
        Element::zero(&self.space, degree)
    }

    fn bracket(&self, args: &[&Element]) -> Result<Element> {
        let n = args.len();
        if n == 0 {
            return Err(Error::ZeroWeight(0));
        }
        let degree = args.iter().map(|a| a.degree()).sum::<i64>() + 2 - n as i64;
        match self.maps.get(&n) {
            Some(q) => q.eval(args),
            None => {
                for a in args {
                    if a.space().as_ref() != self.space.as_ref() {
                        return Err(Error::SpaceMismatch(
                            "argument is not in the structure's space".into(),
                        ));
                    }
                }
                Ok(Element::zero(&self.space, degree))
            }
        }
    }
}

/// Extends the structure maps to the unique coderivation of the truncated
/// coalgebra, tabulated in the monomial basis.
///
/// On a monomial `x_1 ⊙ ... ⊙ x_m` of desuspended generators the lift is the
/// sum over all ways of pulling `k` factors to the front (with their Koszul
/// sign) of `d_k(front) ⊙ rest`. In the wedge basis this differs from the
/// naive `Q_k(γ_S) ∧ γ_{S^c}` by the factor `(-1)^{m-k}` coming from the
/// décalage.
pub fn lift_coderivation(l: &LInftyStructure) -> CoalgebraMap {
    let mut table = BTreeMap::new();
    for w in l.words() {
        let mut image = Chain::zero();
        for k in 1..=w.weight() {
            if !l.maps.contains_key(&k) {
                continue;
            }
            for (sign, front, rest) in unshuffles(&w, &l.space, k) {
                if let Some(y) = l.shifted_value(&front) {
                    image.add_scaled(
                        &sign.to_rational(),
                        &element_times_word(&y, &rest, &l.space),
                    );
                }
            }
        }
        if !image.is_zero() {
            table.insert(w, image);
        }
    }
    CoalgebraMap {
        source: l.space.clone(),
        target: l.space.clone(),
        cap: l.cap,
        degree: 1,
        table,
    }
}

impl CoalgebraMap {
    /// The table conjugated into the wedge basis: the image of `e_w` as a
    /// combination of wedge monomials.
    pub fn wedge_table(&self) -> BTreeMap<Word, Chain> {
        self.table
            .iter()
            .map(|(w, c)| {
                let s = decalage_sign(w, &self.source);
                let mut out = Chain::zero();
                for (v, x) in c.terms() {
                    out.add_term(
                        v.clone(),
                        (s * decalage_sign(v, &self.target)).apply(x.clone()),
                    );
                }
                (w.clone(), out)
            })
            .collect()
    }
}

/// Cogenerator part of a chain under the shifted structure maps, i.e.
/// `pr ∘ D` applied to the chain.
pub(crate) fn project_through(l: &LInftyStructure, chain: &Chain, degree: i64) -> Element {
    let mut out = Element::zero(&l.space, degree);
    for (v, c) in chain.terms() {
        if let Some(y) = l.shifted_value(v) {
            out.add_scaled(c, &y);
        }
    }
    out
}

/// Outcome of a relation check: nonzero residuals of `pr ∘ Q ∘ Q`, by weight.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub cap: usize,
    pub residuals: BTreeMap<usize, Vec<(Word, Element)>>,
}

impl RelationReport {
    pub fn passes(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn residual(&self, word: &Word) -> Option<&Element> {
        self.residuals
            .get(&word.weight())
            .and_then(|v| v.iter().find(|(w, _)| w == word).map(|(_, e)| e))
    }
}

/// Renders `weight n: word -> value` lines for a residual table.
pub(crate) fn write_residuals(
    f: &mut fmt::Formatter<'_>,
    space: &GradedSpace,
    residuals: &BTreeMap<usize, Vec<(Word, Element)>>,
) -> fmt::Result {
    for (n, rows) in residuals {
        for (w, e) in rows {
            writeln!(f, "  weight {n}: {} -> {e}", w.display(space))?;
        }
    }
    Ok(())
}

/// `pr ∘ Q ∘ Q` on every canonical word of weight at most the cap, reported
/// in the wedge basis.
pub fn check_relations(l: &LInftyStructure) -> RelationReport {
    let d = lift_coderivation(l);
    let mut residuals: BTreeMap<usize, Vec<(Word, Element)>> = BTreeMap::new();
    for w in l.words() {
        let degree = w.degree(&l.space) - w.weight() as i64 + 3;
        let r = project_through(l, &d.apply_word(&w), degree);
        if !r.is_zero() {
            let r = r.scaled(&decalage_sign(&w, &l.space).to_rational());
            residuals.entry(w.weight()).or_default().push((w, r));
        }
    }
    RelationReport {
        cap: l.cap,
        residuals,
    }
}

/// The generalized Jacobi expression
/// `Σ_{i+j=n+1} (-1)^{j-1} Σ_S ε(S) Q_j(Q_i(x_S), x_{S^c})`
/// over subsets `S` of size `i` moved to the front with the antisymmetric
/// Koszul sign. It vanishes for all arguments exactly when the structure
/// satisfies its relations.
pub fn unshuffle_identity<A: LInfty>(alg: &A, args: &[&A::Elem]) -> Result<A::Elem> {
    let n = args.len();
    if n == 0 || n > 63 {
        return Err(Error::ZeroWeight(n));
    }
    let degrees: Vec<i64> = args.iter().map(|a| a.degree()).collect();
    let total = degrees.iter().sum::<i64>() + 3 - n as i64;
    let mut out = alg.zero(total);
    for i in 1..=n {
        let j = n + 1 - i;
        if i > alg.max_arity() || j > alg.max_arity() {
            continue;
        }
        let outer = Sign::parity(j as i64 - 1);
        for mask in 0u64..(1u64 << n) {
            if mask.count_ones() as usize != i {
                continue;
            }
            let front: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
            let rest: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 0).collect();
            let mut sign = outer;
            for &a in &front {
                for &b in &rest {
                    if b < a {
                        sign *= transposition_sign(degrees[a], degrees[b]);
                    }
                }
            }
            let inner_args: Vec<&A::Elem> = front.iter().map(|&p| args[p]).collect();
            let inner = alg.bracket(&inner_args)?;
            if inner.is_zero() {
                continue;
            }
            let mut outer_args = vec![&inner];
            outer_args.extend(rest.iter().map(|&p| args[p]));
            let term = alg.bracket(&outer_args)?;
            out.add_scaled(&sign.to_rational(), &term);
        }
    }
    Ok(out)
}

/// The lower central filtration `F^1 ⊇ F^2 ⊇ ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationChain {
    /// Spanning sets of `F^1, F^2, ...`; the last entry is either zero or a
    /// repeat of its predecessor.
    pub subspaces: Vec<Vec<Element>>,
    /// `F^i = F^{i-1} ≠ 0` was observed.
    pub stabilized: bool,
    /// Least `i` with `F^i = 0`, when found within the bound.
    pub nilpotent_depth: Option<usize>,
    pub depth_bound: usize,
}

impl FiltrationChain {
    pub fn is_nilpotent(&self) -> bool {
        self.nilpotent_depth.is_some()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(Vec::len).collect()
    }
}

fn to_sparse(e: &Element) -> SparseVec {
    e.terms().map(|(i, c)| (i, c.clone())).collect()
}

fn from_sparse(space: &Arc<GradedSpace>, v: &SparseVec) -> Element {
    let degree = space.degree(*v.keys().next().expect("nonzero vector"));
    Element::from_terms(space, degree, v.iter().map(|(&i, c)| (i, c.clone())))
        .expect("homogeneous vector")
}

/// Reduced rows of a span of homogeneous generators are homogeneous, since
/// elimination only combines rows with overlapping support.
fn homogeneous_basis(space: &Arc<GradedSpace>, s: &Subspace) -> Vec<Element> {
    s.basis().map(|v| from_sparse(space, v)).collect()
}

/// Calls `f` on every index tuple `pick` with `pick[i] < lens[i]`.
pub(crate) fn for_each_pick(lens: &[usize], mut f: impl FnMut(&[usize])) {
    if lens.contains(&0) {
        return;
    }
    let mut pick = vec![0usize; lens.len()];
    loop {
        f(&pick);
        let mut slot = lens.len();
        loop {
            if slot == 0 {
                return;
            }
            slot -= 1;
            pick[slot] += 1;
            if pick[slot] < lens[slot] {
                break;
            }
            pick[slot] = 0;
        }
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if total >= 1 {
            vec![vec![total]]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Computes `F^i` as the least subspace containing every
/// `Q_k(F^{i_1}, ..., F^{i_k})` with `i_1 + ... + i_k = i`, `k ≥ 2`, and
/// closed under `Q_1`. Stops at the first zero term, at the first repeat, or
/// after `depth_bound` terms.
pub fn lower_central_series(l: &LInftyStructure, depth_bound: usize) -> FiltrationChain {
    let space = &l.space;
    let mut full = Subspace::new();
    for i in 0..space.dim() {
        full.insert(&to_sparse(&Element::basis(space, i)));
    }
    let mut levels: Vec<Vec<Element>> = vec![homogeneous_basis(space, &full)];
    let mut stabilized = false;
    let mut depth = if full.is_zero() { Some(1) } else { None };
    let mut spans = vec![full];
    let mut i = 1;
    while depth.is_none() && !stabilized && i < depth_bound.max(1) {
        i += 1;
        let mut s = Subspace::new();
        for (&k, q) in &l.maps {
            if k < 2 || k > i {
                continue;
            }
            for comp in compositions(i, k) {
                let factors: Vec<&Vec<Element>> = comp.iter().map(|&p| &levels[p - 1]).collect();
                if factors.iter().any(|f| f.is_empty()) {
                    continue;
                }
                for_each_pick(
                    &factors.iter().map(|f| f.len()).collect::<Vec<_>>(),
                    |pick| {
                        let args: Vec<&Element> =
                            pick.iter().zip(&factors).map(|(&p, f)| &f[p]).collect();
                        let img = q.eval(&args).expect("elements of the structure's space");
                        if !img.is_zero() {
                            s.insert(&to_sparse(&img));
                        }
                    },
                );
            }
        }
        // close under Q_1
        let mut frontier = homogeneous_basis(space, &s);
        while let Some(x) = frontier.pop() {
            let y = l.differential(&x);
            if !y.is_zero() && s.insert(&to_sparse(&y)) {
                frontier.push(y);
            }
        }
        let basis = homogeneous_basis(space, &s);
        if s.is_zero() {
            depth = Some(i);
        } else if s.rank() == spans[spans.len() - 1].rank() {
            stabilized = true;
        }
        levels.push(basis);
        spans.push(s);
    }
    FiltrationChain {
        subspaces: levels,
        stabilized,
        nilpotent_depth: depth,
        depth_bound,
    }
}

/// `Σ_{n ≥ 1} 1/n! Q_n(x, ..., x)`, summed up to the arity bound.
pub fn curvature<A: LInfty>(alg: &A, x: &A::Elem) -> Result<A::Elem> {
    let mut out = alg.zero(x.degree() + 1);
    let mut args: Vec<&A::Elem> = Vec::new();
    let mut fact = Rational::one();
    for n in 1..=alg.max_arity() {
        args.push(x);
        fact /= Rational::from_integer(n.into());
        let term = alg.bracket(&args)?;
        out.add_scaled(&fact, &term);
    }
    Ok(out)
}

/// The twisted bracket `Q^π_n(args) = Σ_{m ≥ 0} 1/m! Q_{m+n}(π, ..., π, args)`.
pub fn twisted_bracket<A: LInfty>(alg: &A, pi: &A::Elem, args: &[&A::Elem]) -> Result<A::Elem> {
    let mut total = alg.bracket(args)?;
    let mut fact = Rational::one();
    for m in 1..=alg.max_arity().saturating_sub(args.len()) {
        fact /= Rational::from_integer(m.into());
        let mut full: Vec<&A::Elem> = vec![pi; m];
        full.extend_from_slice(args);
        total.add_scaled(&fact, &alg.bracket(&full)?);
    }
    Ok(total)
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            write!(f, "relations hold up to weight cap {}", self.cap)
        } else {
            let count: usize = self.residuals.values().map(Vec::len).sum();
            write!(
                f,
                "relations fail up to weight cap {}: {count} nonzero residual(s)",
                self.cap
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> LInftyStructure {
        let v = GradedSpace::new([("x", 1), ("y", 1), ("z", 2)]).unwrap();
        let mut q2 = MultiMap::new(&v, &v, 2, 0).unwrap();
        q2.set(&["x", "y"], Element::basis_named(&v, "z").unwrap())
            .unwrap();
        make_linfty(&v, [q2], 4).unwrap()
    }

    #[test]
    fn degree_rule_is_enforced() {
        let v = GradedSpace::new([("x", 1), ("z", 2)]).unwrap();
        let mut q1 = MultiMap::new(&v, &v, 1, 1).unwrap();
        q1.set(&["x"], Element::basis_named(&v, "z").unwrap())
            .unwrap();
        assert!(make_linfty(&v, [q1], 3).is_ok());
        let bad = MultiMap::new(&v, &v, 2, 1).unwrap();
        assert_eq!(
            make_linfty(&v, [bad], 3).unwrap_err(),
            Error::StructureDegree {
                weight: 2,
                expected: 0,
                got: 1
            }
        );
        let q3 = MultiMap::new(&v, &v, 3, -1).unwrap();
        assert!(matches!(
            make_linfty(&v, [q3], 2),
            Err(Error::AboveCap { .. })
        ));
    }

    #[test]
    fn lift_of_the_heisenberg_bracket() {
        let l = heisenberg();
        let d = lift_coderivation(&l);
        let xy = Word::parse("x y", l.space()).unwrap().unwrap().0;
        let z = Word::parse("z", l.space()).unwrap().unwrap().0;
        assert_eq!(d.wedge_table()[&xy], Chain::monomial(z));
        assert!(check_relations(&l).passes());
    }

    #[test]
    fn failing_differential_is_reported_at_weight_one() {
        let v = GradedSpace::new([("a", 0), ("b", 1), ("c", 2)]).unwrap();
        let mut q1 = MultiMap::new(&v, &v, 1, 1).unwrap();
        q1.set(&["a"], Element::basis_named(&v, "b").unwrap())
            .unwrap();
        q1.set(&["b"], Element::basis_named(&v, "c").unwrap())
            .unwrap();
        let l = make_linfty(&v, [q1], 2).unwrap();
        let r = check_relations(&l);
        let a = Word::parse("a", &v).unwrap().unwrap().0;
        assert_eq!(r.residual(&a).unwrap().to_string(), "1*c");
        assert_eq!(r.residuals[&1].len(), 1);
    }

    #[test]
    fn lower_central_series_examples() {
        let l = heisenberg();
        let f = lower_central_series(&l, 10);
        assert_eq!(f.nilpotent_depth, Some(3));
        assert_eq!(f.dims(), vec![3, 1, 0]);

        let v = GradedSpace::new([("w", 0), ("v", 1)]).unwrap();
        let mut q2 = MultiMap::new(&v, &v, 2, 0).unwrap();
        q2.set(&["w", "v"], Element::basis_named(&v, "v").unwrap())
            .unwrap();
        let l = make_linfty(&v, [q2], 3).unwrap();
        let f = lower_central_series(&l, 10);
        assert!(f.stabilized);
        assert!(!f.is_nilpotent());
        assert_eq!(f.subspaces.last().unwrap()[0].to_string(), "1*v");
    }
}
