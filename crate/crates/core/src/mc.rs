//! Maurer-Cartan elements, twisting and gauge flows.
//!
//! Time is a formal variable: a path is a polynomial in `t` with
//! coefficients in the algebra, integration is antidifferentiation from
//! `t = 0`, and flows are solved by Picard iteration until the iterate
//! repeats.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{for_each_pick, lower_central_series, LInfty, LInftyStructure};
use crate::error::{Error, Result};
use crate::graded::{wedge_basis, Element, GradedVector, MultiMap, Rational};

/// A polynomial `Σ_k c_k t^k` with homogeneous coefficients of one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPath<E> {
    zero: E,
    coeffs: BTreeMap<usize, E>,
}

impl<E: GradedVector> PolyPath<E> {
    /// The zero path with coefficients shaped like `zero`.
    pub fn zero(zero: E) -> PolyPath<E> {
        PolyPath {
            zero: zero.zero_like(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(e: E) -> PolyPath<E> {
        PolyPath::monomial(0, e)
    }

    /// `e·t^k`.
    pub fn monomial(k: usize, e: E) -> PolyPath<E> {
        let mut p = PolyPath::zero(e.zero_like());
        p.add_term(k, &Rational::one(), &e);
        p
    }

    pub fn from_coefficients(zero: E, coeffs: impl IntoIterator<Item = (usize, E)>) -> PolyPath<E> {
        let mut p = PolyPath::zero(zero);
        for (k, e) in coeffs {
            p.add_term(k, &Rational::one(), &e);
        }
        p
    }

    pub fn coefficient(&self, k: usize) -> E {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (usize, &E)> + '_ {
        self.coeffs.iter().map(|(&k, e)| (k, e))
    }

    /// Highest power of `t` present; `None` for the zero path.
    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn zero_coefficient(&self) -> &E {
        &self.zero
    }

    pub(crate) fn add_term(&mut self, k: usize, c: &Rational, e: &E) {
        if c.is_zero() || e.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(|| self.zero.clone());
        entry.add_scaled(c, e);
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Exact value at a rational time.
    pub fn eval(&self, t: &Rational) -> E {
        let mut out = self.zero.clone();
        for (&k, e) in &self.coeffs {
            let mut p = Rational::one();
            for _ in 0..k {
                p *= t;
            }
            out.add_scaled(&p, e);
        }
        out
    }

    pub fn derivative(&self) -> PolyPath<E> {
        let mut out = PolyPath::zero(self.zero.clone());
        for (&k, e) in &self.coeffs {
            if k > 0 {
                out.add_term(k - 1, &Rational::from_integer(k.into()), e);
            }
        }
        out
    }

    /// The antiderivative vanishing at `t = 0`.
    pub fn integral(&self) -> PolyPath<E> {
        let mut out = PolyPath::zero(self.zero.clone());
        for (&k, e) in &self.coeffs {
            out.add_term(k + 1, &Rational::new(1.into(), (k + 1).into()), e);
        }
        out
    }

    pub fn map<F: GradedVector>(&self, zero: F, f: impl Fn(&E) -> F) -> PolyPath<F> {
        PolyPath::from_coefficients(zero, self.coeffs.iter().map(|(&k, e)| (k, f(e))))
    }
}

impl<E: GradedVector> GradedVector for PolyPath<E> {
    fn degree(&self) -> i64 {
        self.zero.degree()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_scaled(&mut self, c: &Rational, other: &Self) {
        for (&k, e) in &other.coeffs {
            self.add_term(k, c, e);
        }
    }

    fn zero_like(&self) -> Self {
        PolyPath::zero(self.zero.clone())
    }
}

impl<E: GradedVector + fmt::Display> fmt::Display for PolyPath<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&k, e)| match k {
                0 => format!("({e})"),
                1 => format!("t*({e})"),
                _ => format!("t^{k}*({e})"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Q_n` applied to polynomial arguments, expanded over powers of `t`.
pub fn bracket_poly<A: LInfty>(alg: &A, args: &[&PolyPath<A::Elem>]) -> Result<PolyPath<A::Elem>> {
    let degree = args.iter().map(|a| a.degree()).sum::<i64>() + 2 - args.len() as i64;
    let mut out = PolyPath::zero(alg.zero(degree));
    if args.len() > alg.max_arity() {
        return Ok(out);
    }
    let lists: Vec<Vec<(usize, &A::Elem)>> =
        args.iter().map(|a| a.coefficients().collect()).collect();
    let lens: Vec<usize> = lists.iter().map(Vec::len).collect();
    let mut err = None;
    for_each_pick(&lens, |pick| {
        if err.is_some() {
            return;
        }
        let power: usize = pick.iter().zip(&lists).map(|(&p, l)| l[p].0).sum();
        let elems: Vec<&A::Elem> = pick.iter().zip(&lists).map(|(&p, l)| l[p].1).collect();
        match alg.bracket(&elems) {
            Ok(v) => out.add_term(power, &Rational::one(), &v),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `Σ 1/m! Q_{m+n}(p, ..., p, args)` with polynomial entries.
pub fn twisted_bracket_poly<A: LInfty>(
    alg: &A,
    p: &PolyPath<A::Elem>,
    args: &[&PolyPath<A::Elem>],
) -> Result<PolyPath<A::Elem>> {
    let mut total = bracket_poly(alg, args)?;
    let mut fact = Rational::one();
    for m in 1..=alg.max_arity().saturating_sub(args.len()) {
        fact /= Rational::from_integer(m.into());
        let mut full: Vec<&PolyPath<A::Elem>> = vec![p; m];
        full.extend_from_slice(args);
        total.add_scaled(&fact, &bracket_poly(alg, &full)?);
    }
    Ok(total)
}

/// `Σ 1/n! Q_n(p, ..., p)` for a polynomial path.
pub fn curvature_poly<A: LInfty>(alg: &A, p: &PolyPath<A::Elem>) -> Result<PolyPath<A::Elem>> {
    let mut out = PolyPath::zero(alg.zero(p.degree() + 1));
    let mut fact = Rational::one();
    for n in 1..=alg.max_arity() {
        fact /= Rational::from_integer(n.into());
        out.add_scaled(&fact, &bracket_poly(alg, &vec![p; n])?);
    }
    Ok(out)
}

/// A solved gauge flow.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFlow<E> {
    pub path: PolyPath<E>,
    /// Index of the first Picard iterate equal to its predecessor.
    pub iterations: usize,
}

/// Solves `dπ_t/dt = Q^{π_t}_1(ξ)`, `π_0 = pi0` by Picard iteration
/// `p_k = π_0 + ∫_0^t Q^{p_{k-1}}_1(ξ)`, stopping at the first repeat.
pub fn gauge_flow<A: LInfty>(
    alg: &A,
    pi0: &A::Elem,
    xi: &A::Elem,
    bound: usize,
) -> Result<GaugeFlow<A::Elem>> {
    if xi.degree() != 0 {
        return Err(Error::DegreeMismatch {
            context: "gauge parameter".into(),
            expected: 0,
            got: xi.degree(),
        });
    }
    let start = PolyPath::constant(pi0.clone());
    let xi = PolyPath::constant(xi.clone());
    let mut current = start.clone();
    for k in 1..=bound {
        let rhs = twisted_bracket_poly(alg, &current, &[&xi])?;
        let mut next = start.clone();
        next.add_scaled(&Rational::one(), &rhs.integral());
        if next == current {
            return Ok(GaugeFlow {
                path: next,
                iterations: k,
            });
        }
        current = next;
    }
    Err(Error::NonTermination { bound })
}

/// Why the Maurer-Cartan sum is finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    /// Require the lower central series to vanish within the bound.
    Nilpotent { depth_bound: usize },
    /// Accept the convention that maps above the cap vanish.
    CapTruncation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McResidual {
    pub value: Element,
    /// The nonzero terms `1/n! Q_n(π, ..., π)`, keyed by `n`.
    pub by_weight: BTreeMap<usize, Element>,
    /// The lower central depth when nilpotency was established.
    pub nilpotent_depth: Option<usize>,
    pub cap: usize,
}

impl McResidual {
    pub fn vanishes(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for McResidual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.nilpotent_depth {
            Some(d) => format!("nilpotent of depth {d}"),
            None => "truncated at the cap".to_string(),
        };
        if self.vanishes() {
            return write!(
                f,
                "Maurer-Cartan equation holds up to weight cap {} ({why})",
                self.cap
            );
        }
        let terms: Vec<String> = self
            .by_weight
            .iter()
            .map(|(n, e)| format!("{e} at weight {n}"))
            .collect();
        write!(
            f,
            "Maurer-Cartan residual {} ({}) up to weight cap {} ({why})",
            self.value,
            terms.join(", "),
            self.cap
        )
    }
}

fn check_degree_one(pi: &Element) -> Result<()> {
    if pi.degree() != 1 {
        return Err(Error::DegreeMismatch {
            context: "Maurer-Cartan candidate".into(),
            expected: 1,
            got: pi.degree(),
        });
    }
    Ok(())
}

/// `Σ_{n ≥ 1} 1/n! Q_n(π, ..., π)`.
pub fn mc_residual(l: &LInftyStructure, pi: &Element, evidence: Evidence) -> Result<McResidual> {
    check_degree_one(pi)?;
    if pi.space().as_ref() != l.space().as_ref() {
        return Err(Error::SpaceMismatch("element is not in the algebra".into()));
    }
    let nilpotent_depth = match evidence {
        Evidence::CapTruncation => None,
        Evidence::Nilpotent { depth_bound } => {
            let f = lower_central_series(l, depth_bound);
            match f.nilpotent_depth {
                Some(d) => Some(d),
                None => return Err(Error::NotNilpotent { depth_bound }),
            }
        }
    };
    let mut by_weight = BTreeMap::new();
    let mut fact = Rational::one();
    let mut args: Vec<&Element> = Vec::new();
    for n in 1..=l.cap() {
        args.push(pi);
        fact /= Rational::from_integer(n.into());
        let term = l.bracket(&args)?.scaled(&fact);
        if !term.is_zero() {
            by_weight.insert(n, term);
        }
    }
    Ok(McResidual {
        by_weight,
        value: crate::algebra::curvature(l, pi)?,
        nilpotent_depth,
        cap: l.cap(),
    })
}

/// A degree-1 element whose curvature vanishes up to the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct McElement {
    value: Element,
}

impl McElement {
    pub fn verify(l: &LInftyStructure, value: Element) -> Result<McElement> {
        let r = mc_residual(l, &value, Evidence::CapTruncation)?;
        if !r.vanishes() {
            return Err(Error::NotMaurerCartan {
                residual: r.value.to_string(),
            });
        }
        Ok(McElement { value })
    }

    pub fn value(&self) -> &Element {
        &self.value
    }
}

/// The structure twisted by a Maurer-Cartan element.
pub fn twist(l: &LInftyStructure, pi: &McElement) -> Result<LInftyStructure> {
    let pi = McElement::verify(l, pi.value.clone())?;
    let space = l.space();
    let mut maps = Vec::new();
    for n in 1..=l.cap() {
        let mut m = MultiMap::new(space, space, n, 2 - n as i64)?;
        for w in wedge_basis(space, n)? {
            let args: Vec<Element> = w
                .indices()
                .iter()
                .map(|&i| Element::basis(space, i))
                .collect();
            let refs: Vec<&Element> = args.iter().collect();
            let v = crate::algebra::twisted_bracket(l, &pi.value, &refs)?;
            m.set_indices(w.indices().to_vec(), v)?;
        }
        maps.push(m);
    }
    crate::algebra::make_linfty(space, maps, l.cap())
}

/// Default Picard bound: lower central depth plus two, or a bound past
/// which a non-nilpotent flow is reported as non-terminating.
pub fn default_flow_bound(l: &LInftyStructure) -> usize {
    let depth_bound = l.space().dim() + 2;
    match lower_central_series(l, depth_bound).nilpotent_depth {
        Some(d) => d + 2,
        None => l.space().dim() + l.cap() + 2,
    }
}

/// Gauge flow of a verified Maurer-Cartan element along a degree-0 element.
pub fn flow_mc(
    l: &LInftyStructure,
    pi0: &McElement,
    xi: &Element,
    bound: Option<usize>,
) -> Result<GaugeFlow<Element>> {
    let bound = bound.unwrap_or_else(|| default_flow_bound(l));
    gauge_flow(l, &pi0.value, xi, bound)
}
