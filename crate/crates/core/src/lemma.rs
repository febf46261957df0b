//! Perturbing a morphism at one weight by a prescribed homotopy.
//!
//! Given a morphism `F`, a weight `n` and a map `H̃ : ∧^n L → L°` of degree
//! `-n`, the element `ξ ∈ U` with the single component `H̃` has degree 0 and
//! sits in filtration level `n`. Flowing the Maurer-Cartan element of `F`
//! along `ξ` for unit time yields a new morphism `F̃` with `F̃_m = F_m` for
//! `m < n`, whose weight-`n` component differs from `F_n` by the
//! commutator of `H̃` with the differentials.

use std::fmt;

use crate::algebra::check_relations;
use crate::convolution::{build_convolution, mc_to_morphism, morphism_to_mc, HomElement};
use crate::error::{Error, Result};
use crate::graded::{Element, MultiMap, Rational};
use crate::mc::{gauge_flow, GaugeFlow};
use crate::morphism::{check_morphism, is_quasi_iso, MorphismComponents, MorphismReport};

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationRequest {
    pub morphism: MorphismComponents,
    pub n: usize,
    pub h: MultiMap,
}

impl PerturbationRequest {
    pub fn new(morphism: MorphismComponents, h: MultiMap) -> Result<PerturbationRequest> {
        let n = h.weight();
        let req = PerturbationRequest { morphism, n, h };
        req.validate()?;
        Ok(req)
    }

    /// Checks degrees, spaces and the cap; the morphism itself is checked
    /// by [`perturb`].
    pub fn validate(&self) -> Result<()> {
        let f = &self.morphism;
        if self.h.weight() != self.n || self.n == 0 {
            return Err(Error::Invalid(format!(
                "the homotopy has weight {} but the request names weight {}",
                self.h.weight(),
                self.n
            )));
        }
        if self.h.degree() != -(self.n as i64) {
            return Err(Error::DegreeMismatch {
                context: format!("homotopy of weight {}", self.n),
                expected: -(self.n as i64),
                got: self.h.degree(),
            });
        }
        if self.h.source().as_ref() != f.source().space().as_ref()
            || self.h.target().as_ref() != f.target().space().as_ref()
        {
            return Err(Error::SpaceMismatch(
                "the homotopy does not match the morphism".into(),
            ));
        }
        if f.cap() < self.n + 1 {
            return Err(Error::Invalid(format!(
                "cap {} is too small for a weight-{} perturbation (need at least {})",
                f.cap(),
                self.n,
                self.n + 1
            )));
        }
        Ok(())
    }

    /// The degree-0 element of the convolution algebra carrying `H̃`.
    pub fn xi(&self) -> Result<HomElement<Element>> {
        HomElement::from_maps(self.morphism.source().space(), 0, [self.h.clone()])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub morphism: MorphismComponents,
    pub flow: GaugeFlow<HomElement<Element>>,
    pub report: MorphismReport,
    pub quasi_iso_before: bool,
    pub quasi_iso_after: bool,
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "flow reached its fixpoint after {} iteration(s)",
            self.flow.iterations
        )?;
        writeln!(f, "{}", self.report)?;
        write!(
            f,
            "quasi-isomorphism: before {}, after {}",
            self.quasi_iso_before, self.quasi_iso_after
        )
    }
}

/// Flows the Maurer-Cartan element of the morphism along `ξ` and reads the
/// value at `t = 1` back as a morphism.
pub fn perturb(req: &PerturbationRequest) -> Result<Perturbation> {
    req.validate()?;
    let f = &req.morphism;
    for (what, l) in [("source", f.source()), ("target", f.target())] {
        if !check_relations(l).passes() {
            return Err(Error::Invalid(format!(
                "the {what} structure fails its relations"
            )));
        }
    }
    let before = check_morphism(f);
    if !before.passes() {
        return Err(Error::Invalid(format!(
            "the input is not a morphism: {before}"
        )));
    }
    let u = build_convolution(f.source(), f.target())?;
    let alpha = morphism_to_mc(f);
    let xi = req.xi()?;
    let flow = gauge_flow(&u, &alpha, &xi, f.cap() + 2)?;
    let end = flow.path.eval(&Rational::from_integer(1.into()));
    let morphism = mc_to_morphism(f.source(), f.target(), &end)?;
    let report = check_morphism(&morphism);
    Ok(Perturbation {
        quasi_iso_before: is_quasi_iso(f)?.is_quasi_iso(),
        quasi_iso_after: is_quasi_iso(&morphism)?.is_quasi_iso(),
        morphism,
        flow,
        report,
    })
}

/// Convenience wrapper building the request.
pub fn perturb_morphism(f: &MorphismComponents, h: &MultiMap) -> Result<Perturbation> {
    perturb(&PerturbationRequest::new(f.clone(), h.clone())?)
}
