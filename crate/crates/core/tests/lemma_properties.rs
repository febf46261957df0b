mod common;

use std::sync::Arc;

use common::*;
use linfty::{
    build_convolution, morphism_to_mc, perturb, perturb_morphism, Error, GradedVector, LInfty,
    LInftyStructure, MorphismComponents, MultiMap, PerturbationRequest,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn fixtures(cap: usize) -> Vec<Arc<LInftyStructure>> {
    vec![
        Arc::new(two_term(cap)),
        Arc::new(heisenberg(cap)),
        Arc::new(wxy(cap)),
        Arc::new(runaway(cap)),
    ]
}

/// A random morphism obtained from the identity by a few random perturbations.
fn random_morphism(rng: &mut StdRng, l: &Arc<LInftyStructure>) -> MorphismComponents {
    let mut f = MorphismComponents::identity(l);
    for _ in 0..rng.gen_range(0..=2) {
        let n = rng.gen_range(1..l.cap());
        let h = random_map(rng, l.space(), l.space(), n, -(n as i64), 0.5);
        f = perturb_morphism(&f, &h).unwrap().morphism;
    }
    f
}

#[test]
fn perturbation_properties_on_random_requests() {
    let mut rng = StdRng::seed_from_u64(51);
    let mut moved = 0;
    for round in 0..60 {
        let cap = rng.gen_range(2..=4);
        let fx = fixtures(cap);
        let l = fx[round % fx.len()].clone();
        let f = random_morphism(&mut rng, &l);
        let n = rng.gen_range(1..cap);
        let h = random_map(&mut rng, l.space(), l.space(), n, -(n as i64), 0.6);
        let p = perturb_morphism(&f, &h).unwrap();
        let g = &p.morphism;

        assert!(p.report.passes(), "{}", p.report);
        assert_eq!(p.quasi_iso_before, p.quasi_iso_after);
        for m in 1..n {
            assert_eq!(g.component_or_zero(m), f.component_or_zero(m), "weight {m}");
        }
        let f_n = f.component_or_zero(n);
        let g_n = g.component_or_zero(n);
        for w in linfty::graded::wedge_basis(l.space(), n).unwrap() {
            let expected = perturbed_component(&l, &l, &f_n, &h, w.indices());
            assert_eq!(
                g_n.value_or_zero(&w),
                expected,
                "word {}",
                w.display(l.space())
            );
        }

        let u = build_convolution(&l, &l).unwrap();
        let xi = PerturbationRequest::new(f.clone(), h.clone())
            .unwrap()
            .xi()
            .unwrap();
        let mut diff = morphism_to_mc(g);
        diff.add_scaled(&q(-1), &morphism_to_mc(&f));
        assert!(diff.filtration_level(cap) >= n);
        diff.add_scaled(&q(-1), &u.bracket(&[&xi]).unwrap());
        assert!(diff.filtration_level(cap) > n);
        moved += (g != &f) as usize;
    }
    assert!(moved > 20, "only {moved} requests changed the morphism");
}

#[test]
fn weight_one_perturbation_of_the_identity() {
    let l = Arc::new(two_term(3));
    let v = l.space();
    let mut h = MultiMap::new(v, v, 1, -1).unwrap();
    h.set(&["b"], elem(v, "a")).unwrap();
    let g = perturb_morphism(&MorphismComponents::identity(&l), &h)
        .unwrap()
        .morphism;
    let g1 = g.component_or_zero(1);
    // F_1 + Q_1 H + H Q_1 = id + 1 on both basis vectors
    assert_eq!(g1.value_or_zero(&word(v, "a")).to_string(), "2*a");
    assert_eq!(g1.value_or_zero(&word(v, "b")).to_string(), "2*b");
}

#[test]
fn worked_example_at_weight_two() {
    let l = Arc::new(two_term(3));
    let v = l.space();
    let mut h = MultiMap::new(v, v, 2, -2).unwrap();
    h.set(&["b", "b"], elem(v, "a")).unwrap();
    let g = perturb_morphism(&MorphismComponents::identity(&l), &h)
        .unwrap()
        .morphism;
    let g2 = g.component_or_zero(2);
    assert_eq!(g2.value_or_zero(&word(v, "b b")).to_string(), "1*b");
    assert_eq!(g2.value_or_zero(&word(v, "a b")).to_string(), "-1*a");
    assert_eq!(
        g.component_or_zero(1),
        MorphismComponents::identity(&l).component_or_zero(1)
    );
}

#[test]
fn malformed_requests_are_rejected() {
    let l = Arc::new(two_term(2));
    let v = l.space();
    let id = MorphismComponents::identity(&l);
    let wrong_degree = MultiMap::new(v, v, 1, 0).unwrap();
    assert!(matches!(
        PerturbationRequest::new(id.clone(), wrong_degree),
        Err(Error::DegreeMismatch { .. })
    ));
    let too_heavy = MultiMap::new(v, v, 2, -2).unwrap();
    assert!(matches!(
        PerturbationRequest::new(id.clone(), too_heavy),
        Err(Error::Invalid(_))
    ));

    let mut f1 = MultiMap::new(v, v, 1, 0).unwrap();
    f1.set(&["a"], elem(v, "a")).unwrap();
    let bogus = MorphismComponents::new(&l, &l, [f1]).unwrap();
    let h = MultiMap::new(v, v, 1, -1).unwrap();
    let req = PerturbationRequest::new(bogus, h).unwrap();
    assert!(matches!(perturb(&req), Err(Error::Invalid(_))));
}

fn word(v: &Arc<linfty::GradedSpace>, text: &str) -> linfty::Word {
    linfty::Word::parse(text, v).unwrap().unwrap().0
}
