//! Exact computations with finite-dimensional, weight-truncated
//! L∞-algebras.

pub mod algebra;
pub mod cli;
pub mod coalgebra;
pub mod convolution;
pub mod error;
pub mod graded;
pub mod homotopy;
pub mod lemma;
pub mod linalg;
pub mod manifest;
pub mod mc;
pub mod morphism;

pub use algebra::{
    check_relations, curvature, from_dgla, lift_coderivation, lower_central_series, make_linfty,
    twisted_bracket, unshuffle_identity, FiltrationChain, LInfty, LInftyStructure, RelationReport,
};
pub use convolution::{
    build_convolution, mc_to_morphism, morphism_to_mc, partial_derivation,
    partial_derivation_on_word, ConvolutionAlgebra, HomElement,
};
pub use error::{Error, Result};
pub use graded::{Element, GradedSpace, GradedVector, MultiMap, Rational, Sign, Word};
pub use homotopy::{
    check_homotopy, gauge_to_homotopy, unsplit_residual, HomotopyElement, HomotopyReport,
    PathAlgebra, PathElement,
};
pub use lemma::{perturb, perturb_morphism, Perturbation, PerturbationRequest};
pub use mc::{
    bracket_poly, curvature_poly, flow_mc, gauge_flow, mc_residual, twist, Evidence, GaugeFlow,
    McElement, McResidual, PolyPath,
};
pub use morphism::{
    check_morphism, cohomology, compose, is_quasi_iso, lift_morphism, lift_residual,
    CohomologyReport, MorphismComponents, MorphismReport, QuasiIsoReport,
};
