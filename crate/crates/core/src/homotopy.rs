//! Homotopies between morphisms through the polynomial path algebra
//! `L° ⊗ Ω`, where `Ω = Q[t] ⊕ Q[t] dt` with `|dt| = 1` and `dt·dt = 0`.
//!
//! The extended brackets move every form to the right:
//! `Q_n(x_1 ω_1, ..., x_n ω_n) = ± Q°_n(x_1, ..., x_n) ω_1 ⋯ ω_n`, the sign
//! being `(-1)^{|ω_i||x_j|}` for each `i < j`. The differential picks up the
//! de Rham term: `Q_1(x ω) = Q°_1(x) ω + (-1)^{|x|} x dω`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{lower_central_series, LInfty, LInftyStructure};
use crate::convolution::{
    build_convolution, mc_to_morphism, morphism_to_mc, ConvolutionAlgebra, HomElement,
};
use crate::error::{Error, Result};
use crate::graded::{Element, GradedSpace, GradedVector, Rational, Sign, Word};
use crate::mc::{curvature_poly, gauge_flow, twisted_bracket_poly, PolyPath};
use crate::morphism::MorphismComponents;

/// `Σ_k x_k t^k + Σ_k y_k t^k dt` of total degree `degree`; the `x_k` have
/// degree `degree` and the `y_k` degree `degree - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathElement {
    space: Arc<GradedSpace>,
    degree: i64,
    plain: BTreeMap<usize, Element>,
    dt: BTreeMap<usize, Element>,
}

fn add_into(map: &mut BTreeMap<usize, Element>, k: usize, c: &Rational, e: &Element) {
    if c.is_zero() || e.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(x) => {
            x.add_scaled(c, e);
            if x.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            map.insert(k, e.scaled(c));
        }
    }
}

impl PathElement {
    pub fn zero(space: &Arc<GradedSpace>, degree: i64) -> PathElement {
        PathElement {
            space: space.clone(),
            degree,
            plain: BTreeMap::new(),
            dt: BTreeMap::new(),
        }
    }

    /// `x t^k`.
    pub fn plain(x: &Element, k: usize) -> PathElement {
        let mut out = PathElement::zero(x.space(), x.degree());
        add_into(&mut out.plain, k, &Rational::one(), x);
        out
    }

    /// `y t^k dt`.
    pub fn with_dt(y: &Element, k: usize) -> PathElement {
        let mut out = PathElement::zero(y.space(), y.degree() + 1);
        add_into(&mut out.dt, k, &Rational::one(), y);
        out
    }

    pub fn plain_part(&self) -> &BTreeMap<usize, Element> {
        &self.plain
    }

    pub fn dt_part(&self) -> &BTreeMap<usize, Element> {
        &self.dt
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.plain.keys().chain(self.dt.keys()).max().copied()
    }

    // (element, power of t, carries dt)
    fn monomials(&self) -> Vec<(&Element, usize, bool)> {
        self.plain
            .iter()
            .map(|(&k, x)| (x, k, false))
            .chain(self.dt.iter().map(|(&k, y)| (y, k, true)))
            .collect()
    }
}

impl GradedVector for PathElement {
    fn degree(&self) -> i64 {
        self.degree
    }

    fn is_zero(&self) -> bool {
        self.plain.is_empty() && self.dt.is_empty()
    }

    fn add_scaled(&mut self, c: &Rational, other: &Self) {
        assert_eq!(
            self.degree, other.degree,
            "adding elements of different degrees"
        );
        for (&k, x) in &other.plain {
            add_into(&mut self.plain, k, c, x);
        }
        for (&k, y) in &other.dt {
            add_into(&mut self.dt, k, c, y);
        }
    }

    fn zero_like(&self) -> Self {
        PathElement::zero(&self.space, self.degree)
    }
}

impl fmt::Display for PathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, x) in &self.plain {
            parts.push(format!("t^{k}*({x})"));
        }
        for (k, y) in &self.dt {
            parts.push(format!("t^{k}*dt*({y})"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `L° ⊗ Ω` with polynomial degrees bounded by `t_cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathAlgebra {
    base: Arc<LInftyStructure>,
    t_cap: usize,
}

impl PathAlgebra {
    pub fn new(base: &Arc<LInftyStructure>, t_cap: usize) -> PathAlgebra {
        PathAlgebra {
            base: base.clone(),
            t_cap,
        }
    }

    /// `t_cap = (lower central depth) × cap + 2`, with the dimension standing
    /// in for the depth when the base is not nilpotent.
    pub fn with_default_cap(base: &Arc<LInftyStructure>) -> PathAlgebra {
        let depth = lower_central_series(base, base.space().dim() + 2)
            .nilpotent_depth
            .unwrap_or(base.space().dim() + 1);
        PathAlgebra::new(base, depth * base.cap() + 2)
    }

    pub fn base(&self) -> &Arc<LInftyStructure> {
        &self.base
    }

    pub fn t_cap(&self) -> usize {
        self.t_cap
    }

    /// The constant embedding `x ↦ x ⊗ 1`.
    pub fn iota(&self, x: &Element) -> PathElement {
        PathElement::plain(x, 0)
    }

    /// Evaluation at `t = 0` (forms with `dt` are dropped).
    pub fn p0(&self, x: &PathElement) -> Element {
        self.evaluate(x, &Rational::zero())
    }

    /// Evaluation at `t = 1`.
    pub fn p1(&self, x: &PathElement) -> Element {
        self.evaluate(x, &Rational::one())
    }

    pub fn evaluate(&self, x: &PathElement, t: &Rational) -> Element {
        let mut out = Element::zero(self.base.space(), x.degree);
        for (&k, e) in &x.plain {
            let mut p = Rational::one();
            for _ in 0..k {
                p *= t;
            }
            out.add_scaled(&p, e);
        }
        out
    }

    fn check_power(&self, k: usize) -> Result<()> {
        if k > self.t_cap {
            return Err(Error::PolynomialOverflow {
                degree: k,
                t_cap: self.t_cap,
            });
        }
        Ok(())
    }
}

impl LInfty for PathAlgebra {
    type Elem = PathElement;

    fn max_arity(&self) -> usize {
        self.base.cap()
    }

    fn zero(&self, degree: i64) -> PathElement {
        PathElement::zero(self.base.space(), degree)
    }

    fn bracket(&self, args: &[&PathElement]) -> Result<PathElement> {
        let n = args.len();
        if n == 0 {
            return Err(Error::ZeroWeight(0));
        }
        let degree = args.iter().map(|a| a.degree).sum::<i64>() + 2 - n as i64;
        let mut out = PathElement::zero(self.base.space(), degree);
        if n > self.max_arity() {
            return Ok(out);
        }
        let lists: Vec<Vec<(&Element, usize, bool)>> = args.iter().map(|a| a.monomials()).collect();
        let lens: Vec<usize> = lists.iter().map(Vec::len).collect();
        let mut err = None;
        crate::algebra::for_each_pick(&lens, |pick| {
            if err.is_some() {
                return;
            }
            let picked: Vec<(&Element, usize, bool)> =
                pick.iter().zip(&lists).map(|(&p, l)| l[p]).collect();
            if picked.iter().filter(|m| m.2).count() > 1 {
                return;
            }
            let power: usize = picked.iter().map(|m| m.1).sum();
            if let Err(e) = self.check_power(power) {
                err = Some(e);
                return;
            }
            let mut exponent = 0;
            for i in 0..n {
                if picked[i].2 {
                    exponent += picked[i + 1..].iter().map(|m| m.0.degree()).sum::<i64>();
                }
            }
            let xs: Vec<&Element> = picked.iter().map(|m| m.0).collect();
            let value = match self.base.bracket(&xs) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            };
            let c = Sign::parity(exponent).to_rational();
            if picked.iter().any(|m| m.2) {
                add_into(&mut out.dt, power, &c, &value);
            } else {
                add_into(&mut out.plain, power, &c, &value);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if n == 1 {
            for (&k, x) in &args[0].plain {
                if k > 0 {
                    let c = Sign::parity(x.degree()).apply(Rational::from_integer(k.into()));
                    add_into(&mut out.dt, k - 1, &c, x);
                }
            }
        }
        Ok(out)
    }
}

/// A homotopy `h = h⁰ + h¹ dt`: `h⁰` is a path of degree-1 elements of the
/// convolution algebra and `h¹` a path of degree-0 elements.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyElement {
    pub h0: PolyPath<HomElement<Element>>,
    pub h1: PolyPath<HomElement<Element>>,
}

impl HomotopyElement {
    /// The constant homotopy at a morphism.
    pub fn constant(f: &MorphismComponents) -> HomotopyElement {
        let alpha = morphism_to_mc(f);
        HomotopyElement {
            h1: PolyPath::zero(HomElement::zero(f.source().space(), 0)),
            h0: PolyPath::constant(alpha),
        }
    }

    /// The element of `Hom(C(L), L° ⊗ Ω)` it stands for. The `dt` part of the
    /// component on a word `w` is `(-1)^{‖w‖} h¹(w) dt`, with `‖w‖` the
    /// desuspended degree of `w`, which is the sign of moving `dt` past the
    /// input.
    pub fn to_path_element(&self, source: &Arc<GradedSpace>) -> Result<HomElement<PathElement>> {
        let mut out: HomElement<PathElement> = HomElement::zero(source, 1);
        let mut values: BTreeMap<Word, PathElement> = BTreeMap::new();
        for (k, a) in self.h0.coefficients() {
            for (w, x) in a.components() {
                let entry = values
                    .entry(w.clone())
                    .or_insert_with(|| PathElement::zero(x.space(), x.degree()));
                entry.add_scaled(&Rational::one(), &PathElement::plain(x, k));
            }
        }
        for (k, a) in self.h1.coefficients() {
            for (w, y) in a.components() {
                let s = Sign::parity(w.shifted_degree(source)).to_rational();
                let entry = values
                    .entry(w.clone())
                    .or_insert_with(|| PathElement::zero(y.space(), y.degree() + 1));
                entry.add_scaled(&s, &PathElement::with_dt(y, k));
            }
        }
        for (w, v) in values {
            out.set(w, v)?;
        }
        Ok(out)
    }
}

/// Packages a gauge flow as a homotopy: `h⁰ = α_t`, `h¹ = ξ`. Returns the
/// homotopy and the morphism at the far end.
pub fn gauge_to_homotopy(
    f: &MorphismComponents,
    xi: &HomElement<Element>,
) -> Result<(HomotopyElement, MorphismComponents)> {
    let u = build_convolution(f.source(), f.target())?;
    let flow = gauge_flow(&u, &morphism_to_mc(f), xi, f.cap() + 2)?;
    let end = mc_to_morphism(f.source(), f.target(), &flow.path.eval(&Rational::one()))?;
    Ok((
        HomotopyElement {
            h0: flow.path,
            h1: PolyPath::constant(xi.clone()),
        },
        end,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyReport {
    pub cap: usize,
    /// Curvature of `h⁰` as a polynomial in `t`.
    pub curvature: PolyPath<HomElement<Element>>,
    /// Curvature of `h⁰` at the sample times `0, 1/2, 1`.
    pub curvature_samples: Vec<(Rational, HomElement<Element>)>,
    /// `∂h⁰/∂t - Σ 1/m! Q_{m+1}(h⁰, ..., h⁰, h¹)`.
    pub flow_residual: PolyPath<HomElement<Element>>,
    pub start_matches: bool,
    pub end_matches: bool,
}

impl HomotopyReport {
    pub fn passes(&self) -> bool {
        self.curvature.is_zero()
            && self.curvature_samples.iter().all(|(_, r)| r.is_zero())
            && self.flow_residual.is_zero()
            && self.start_matches
            && self.end_matches
    }
}

impl fmt::Display for HomotopyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return write!(f, "homotopy verified up to weight cap {}", self.cap);
        }
        writeln!(f, "homotopy fails up to weight cap {}:", self.cap)?;
        if !self.curvature.is_zero() {
            writeln!(f, "  curvature of h0: {}", self.curvature)?;
        }
        if !self.flow_residual.is_zero() {
            writeln!(f, "  flow equation residual: {}", self.flow_residual)?;
        }
        if !self.start_matches {
            writeln!(f, "  h0 at t = 0 is not the first morphism")?;
        }
        if !self.end_matches {
            writeln!(f, "  h0 at t = 1 is not the second morphism")?;
        }
        Ok(())
    }
}

fn same_pair(f: &MorphismComponents, g: &MorphismComponents) -> Result<()> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::SpaceMismatch(
            "the morphisms do not share source and target".into(),
        ));
    }
    Ok(())
}

/// Checks that `h` joins `F` to `G`: the curvature of `h⁰` vanishes, `h⁰`
/// moves by the flow equation along `h¹`, and the endpoints are `F`, `G`.
pub fn check_homotopy(
    f: &MorphismComponents,
    g: &MorphismComponents,
    h: &HomotopyElement,
) -> Result<HomotopyReport> {
    same_pair(f, g)?;
    let u = build_convolution(f.source(), f.target())?;
    let curvature = curvature_poly(&u, &h.h0)?;
    let curvature_samples = [
        Rational::zero(),
        Rational::new(1.into(), 2.into()),
        Rational::one(),
    ]
    .into_iter()
    .map(|t| {
        let r = crate::algebra::curvature(&u, &h.h0.eval(&t))?;
        Ok((t, r))
    })
    .collect::<Result<Vec<_>>>()?;
    let mut flow_residual = h.h0.derivative();
    flow_residual.add_scaled(
        &-Rational::one(),
        &twisted_bracket_poly(&u, &h.h0, &[&h.h1])?,
    );
    Ok(HomotopyReport {
        cap: f.cap(),
        curvature,
        curvature_samples,
        flow_residual,
        start_matches: h.h0.eval(&Rational::zero()) == morphism_to_mc(f),
        end_matches: h.h0.eval(&Rational::one()) == morphism_to_mc(g),
    })
}

/// A polynomial path in the convolution algebra.
pub type HomPath = PolyPath<HomElement<Element>>;

/// The curvature of `h` in `Hom(C(L), L° ⊗ Ω)`, split by `dt`-degree into
/// polynomial paths of elements of the convolution algebra.
pub fn unsplit_residual(
    f: &MorphismComponents,
    h: &HomotopyElement,
    path: &PathAlgebra,
) -> Result<(HomPath, HomPath)> {
    if path.base() != f.target() {
        return Err(Error::SpaceMismatch(
            "the path algebra is not built on the target".into(),
        ));
    }
    let source = f.source().space();
    let uh = ConvolutionAlgebra::new(f.source(), path.clone());
    let curv = crate::algebra::curvature(&uh, &h.to_path_element(source)?)?;
    let mut plain = PolyPath::zero(HomElement::zero(source, 2));
    let mut dt = PolyPath::zero(HomElement::zero(source, 1));
    for (w, pe) in curv.components() {
        for (&k, x) in pe.plain_part() {
            let mut a = HomElement::zero(source, 2);
            a.set(w.clone(), x.clone())?;
            plain.add_scaled(&Rational::one(), &PolyPath::monomial(k, a));
        }
        for (&k, y) in pe.dt_part() {
            let mut a = HomElement::zero(source, 1);
            a.set(w.clone(), y.clone())?;
            dt.add_scaled(&Rational::one(), &PolyPath::monomial(k, a));
        }
    }
    Ok((plain, dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_linfty;
    use crate::graded::MultiMap;
    use crate::mc::PolyPath;

    fn two_term() -> Arc<LInftyStructure> {
        let v = GradedSpace::new([("a", 0), ("b", 1)]).unwrap();
        let mut q1 = MultiMap::new(&v, &v, 1, 1).unwrap();
        q1.set(&["a"], Element::basis_named(&v, "b").unwrap())
            .unwrap();
        Arc::new(make_linfty(&v, [q1], 3).unwrap())
    }

    #[test]
    fn de_rham_term_of_the_differential() {
        let l = two_term();
        let p = PathAlgebra::new(&l, 4);
        let a = Element::basis_named(l.space(), "a").unwrap();
        let d = p.bracket(&[&PathElement::plain(&a, 1)]).unwrap();
        // d(t a) = t Q_1(a) + (-1)^{|a|} a dt
        assert_eq!(d.plain_part()[&1].to_string(), "1*b");
        assert_eq!(d.dt_part()[&0].to_string(), "1*a");
    }

    #[test]
    fn overflow_is_an_error() {
        let l = two_term();
        let p = PathAlgebra::new(&l, 1);
        let a = Element::basis_named(l.space(), "a").unwrap();
        let x = PathElement::plain(&a, 2);
        assert!(matches!(
            p.bracket(&[&x]),
            Err(Error::PolynomialOverflow { .. })
        ));
    }

    #[test]
    fn constant_homotopy_verifies() {
        let l = two_term();
        let id = MorphismComponents::identity(&l);
        let report = check_homotopy(&id, &id, &HomotopyElement::constant(&id)).unwrap();
        assert!(report.passes());
    }

    fn worked_homotopy() -> (MorphismComponents, MorphismComponents, HomotopyElement) {
        let l = two_term();
        let v = l.space().clone();
        let id = MorphismComponents::identity(&l);
        let mut h = MultiMap::new(&v, &v, 2, -2).unwrap();
        h.set(&["b", "b"], Element::basis_named(&v, "a").unwrap())
            .unwrap();
        let xi = HomElement::from_maps(&v, 0, [h]).unwrap();
        let (hom, end) = gauge_to_homotopy(&id, &xi).unwrap();
        (id, end, hom)
    }

    // The dt part of the curvature at `w` is `-(-1)^{‖w‖}` times the flow
    // equation residual at `w`.
    fn expected_dt(
        source: &Arc<GradedSpace>,
        flow_residual: &PolyPath<HomElement<Element>>,
    ) -> PolyPath<HomElement<Element>> {
        let mut out = PolyPath::zero(HomElement::zero(source, 1));
        for (k, a) in flow_residual.coefficients() {
            let mut b = HomElement::zero(source, 1);
            for (w, y) in a.components() {
                let s = -Sign::parity(w.shifted_degree(source));
                b.set(w.clone(), y.scaled(&s.to_rational())).unwrap();
            }
            out.add_scaled(&Rational::one(), &PolyPath::monomial(k, b));
        }
        out
    }

    #[test]
    fn gauge_flow_gives_a_homotopy() {
        let (id, end, hom) = worked_homotopy();
        let report = check_homotopy(&id, &end, &hom).unwrap();
        assert!(report.passes(), "{report}");
        let path = PathAlgebra::with_default_cap(id.target());
        let (plain, dt) = unsplit_residual(&id, &hom, &path).unwrap();
        assert!(plain.is_zero());
        assert!(dt.is_zero());
    }

    #[test]
    fn corrupted_h1_shows_up_in_the_dt_part() {
        let (id, end, mut hom) = worked_homotopy();
        let v = id.source().space().clone();
        let mut extra = MultiMap::new(&v, &v, 1, -1).unwrap();
        extra
            .set(&["b"], Element::basis_named(&v, "a").unwrap())
            .unwrap();
        let bump = HomElement::from_maps(&v, 0, [extra]).unwrap();
        hom.h1
            .add_scaled(&Rational::one(), &PolyPath::constant(bump));
        let report = check_homotopy(&id, &end, &hom).unwrap();
        assert!(!report.flow_residual.is_zero());
        assert!(report.curvature.is_zero());
        let path = PathAlgebra::with_default_cap(id.target());
        let (plain, dt) = unsplit_residual(&id, &hom, &path).unwrap();
        assert_eq!(plain, report.curvature);
        assert_eq!(dt, expected_dt(&v, &report.flow_residual));
    }

    #[test]
    fn path_algebra_relations_on_low_degree_forms() {
        let l = two_term();
        let p = PathAlgebra::new(&l, 6);
        let mut gens = Vec::new();
        for i in 0..l.space().dim() {
            let x = Element::basis(l.space(), i);
            for k in 0..2 {
                gens.push(PathElement::plain(&x, k));
                gens.push(PathElement::with_dt(&x, k));
            }
        }
        for a in &gens {
            assert!(crate::algebra::unshuffle_identity(&p, &[a])
                .unwrap()
                .is_zero());
            for b in &gens {
                let r = crate::algebra::unshuffle_identity(&p, &[a, b]).unwrap();
                assert!(r.is_zero(), "{a} , {b}: {r}");
            }
        }
    }

    #[test]
    fn evaluation_inverts_the_constant_embedding() {
        let l = two_term();
        let p = PathAlgebra::new(&l, 3);
        let a = Element::basis_named(l.space(), "a").unwrap();
        assert_eq!(p.p0(&p.iota(&a)), a);
        assert_eq!(p.p1(&p.iota(&a)), a);
    }
}
