#![allow(dead_code)]

use std::sync::Arc;

use linfty::graded::wedge_basis;
use linfty::{
    make_linfty, Element, GradedSpace, GradedVector, LInftyStructure, MultiMap, Rational,
};
use rand::rngs::StdRng;
use rand::Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn space(basis: &[(&str, i64)]) -> Arc<GradedSpace> {
    GradedSpace::new(basis.iter().map(|&(n, d)| (n, d))).unwrap()
}

pub fn elem(v: &Arc<GradedSpace>, text: &str) -> Element {
    Element::parse(text, v, None).unwrap()
}

/// `{a:0, b:1}` with `Q_1(a) = b`.
pub fn two_term(cap: usize) -> LInftyStructure {
    let v = space(&[("a", 0), ("b", 1)]);
    let mut q1 = MultiMap::new(&v, &v, 1, 1).unwrap();
    q1.set(&["a"], elem(&v, "b")).unwrap();
    make_linfty(&v, [q1], cap).unwrap()
}

/// `{x:1, y:1, z:2}` with `Q_2(x, y) = z`.
pub fn heisenberg(cap: usize) -> LInftyStructure {
    let v = space(&[("x", 1), ("y", 1), ("z", 2)]);
    let mut q2 = MultiMap::new(&v, &v, 2, 0).unwrap();
    q2.set(&["x", "y"], elem(&v, "z")).unwrap();
    make_linfty(&v, [q2], cap).unwrap()
}

/// `{w:0, x:1, y:1}` with `Q_2(w, x) = y`.
pub fn wxy(cap: usize) -> LInftyStructure {
    let v = space(&[("w", 0), ("x", 1), ("y", 1)]);
    let mut q2 = MultiMap::new(&v, &v, 2, 0).unwrap();
    q2.set(&["w", "x"], elem(&v, "y")).unwrap();
    make_linfty(&v, [q2], cap).unwrap()
}

/// `{w:0, v:1}` with `Q_2(w, v) = v`; not nilpotent.
pub fn runaway(cap: usize) -> LInftyStructure {
    let v = space(&[("w", 0), ("v", 1)]);
    let mut q2 = MultiMap::new(&v, &v, 2, 0).unwrap();
    q2.set(&["w", "v"], elem(&v, "v")).unwrap();
    make_linfty(&v, [q2], cap).unwrap()
}

pub fn random_space(rng: &mut StdRng, max_dim: usize) -> Arc<GradedSpace> {
    let dim = rng.gen_range(1..=max_dim);
    let names = ["a", "b", "c", "d"];
    GradedSpace::new((0..dim).map(|i| (names[i], rng.gen_range(-1..=2i64)))).unwrap()
}

/// A random element of `target` in `degree` with small integer coefficients.
pub fn random_element(
    rng: &mut StdRng,
    target: &Arc<GradedSpace>,
    degree: i64,
    density: f64,
) -> Element {
    let mut terms = Vec::new();
    for i in target.basis_in_degree(degree) {
        if rng.gen_bool(density) {
            terms.push((i, q(rng.gen_range(-2..=2))));
        }
    }
    Element::from_terms(target, degree, terms).unwrap()
}

/// A random multilinear map of the given weight and degree.
pub fn random_map(
    rng: &mut StdRng,
    source: &Arc<GradedSpace>,
    target: &Arc<GradedSpace>,
    weight: usize,
    degree: i64,
    density: f64,
) -> MultiMap {
    let mut m = MultiMap::new(source, target, weight, degree).unwrap();
    for w in wedge_basis(source, weight).unwrap() {
        let value = random_element(rng, target, w.degree(source) + degree, density);
        m.set_indices(w.indices().to_vec(), value).unwrap();
    }
    m
}

/// Random structure-map candidates (relations usually fail).
pub fn random_candidate(rng: &mut StdRng, max_dim: usize, cap: usize) -> LInftyStructure {
    let v = random_space(rng, max_dim);
    let maps: Vec<_> = (1..=cap)
        .map(|n| random_map(rng, &v, &v, n, 2 - n as i64, 0.5))
        .collect();
    make_linfty(&v, maps, cap).unwrap()
}

/// Expected weight-`n` component of a morphism perturbed by `h`, evaluated
/// directly on the basis tuple `gammas`:
/// `F_n + Q_1∘H - Σ_i (-1)^{n + |γ_1| + ... + |γ_{i-1}|} H(γ_1, ..., Q_1 γ_i, ..., γ_n)`.
pub fn perturbed_component(
    source: &LInftyStructure,
    target: &LInftyStructure,
    f_n: &MultiMap,
    h: &MultiMap,
    gammas: &[usize],
) -> Element {
    let n = gammas.len();
    let args: Vec<Element> = gammas
        .iter()
        .map(|&i| Element::basis(source.space(), i))
        .collect();
    let refs: Vec<&Element> = args.iter().collect();
    let mut out = f_n.eval(&refs).unwrap();
    out.add_scaled(&q(1), &target.differential(&h.eval(&refs).unwrap()));
    let mut prefix = 0i64;
    for i in 0..n {
        let mut shifted: Vec<Element> = args.clone();
        shifted[i] = source.differential(&args[i]);
        let shifted_refs: Vec<&Element> = shifted.iter().collect();
        let sign = if (n as i64 + prefix).rem_euclid(2) == 0 {
            q(-1)
        } else {
            q(1)
        };
        out.add_scaled(&sign, &h.eval(&shifted_refs).unwrap());
        prefix += args[i].degree();
    }
    out
}
