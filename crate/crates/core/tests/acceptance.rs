//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Each criterion must also finish within its time budget.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use linfty::cli::{run, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use linfty::graded::sign::inverse_factorial;
use linfty::manifest::{canonical_text, Document};
use linfty::{
    bracket_poly, build_convolution, check_homotopy, check_morphism, check_relations, curvature,
    flow_mc, gauge_to_homotopy,
    graded::{koszul_sign, wedge_basis},
    is_quasi_iso, lower_central_series, mc_to_morphism, perturb_morphism, twist,
    unshuffle_identity, unsplit_residual, Element, Error, GradedVector, HomElement,
    LInftyStructure, McElement, MorphismComponents, MultiMap, PathAlgebra, PolyPath, Rational,
    Sign,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Sign of a permutation by counting inversions, each contributing
/// `-(-1)^{pq}` for the degrees `p`, `q` of the pair it swaps.
fn inversion_sign(perm: &[usize], degrees: &[i64]) -> Sign {
    let mut negative = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && (degrees[perm[a]] * degrees[perm[b]]).rem_euclid(2) == 0 {
                negative = !negative;
            }
        }
    }
    if negative {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

fn sign_conventions() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1001);
    let cases = 1000;
    for case in 0..cases {
        let n = rng.gen_range(1..=6);
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let mut sigma: Vec<usize> = (0..n).collect();
        let mut tau: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut rng);
        tau.shuffle(&mut rng);
        let after_tau: Vec<i64> = tau.iter().map(|&i| degrees[i]).collect();
        let composite: Vec<usize> = sigma.iter().map(|&k| tau[k]).collect();
        let whole = koszul_sign(&composite, &degrees).unwrap();
        let parts = koszul_sign(&sigma, &after_tau).unwrap() * koszul_sign(&tau, &degrees).unwrap();
        ensure(whole == parts, || {
            format!("multiplicativity fails in case {case}: {degrees:?} {sigma:?} {tau:?}")
        })?;
        ensure(whole == inversion_sign(&composite, &degrees), || {
            format!("inversion count disagrees in case {case}")
        })?;
    }
    for case in 0..cases {
        let dim = rng.gen_range(1..=4);
        let v = space_of(&(0..dim).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>());
        let n = rng.gen_range(2..=4);
        let degree = rng.gen_range(-1..=1);
        let m = random_map(&mut rng, &v, &v, n, degree, 0.7);
        let tuple: Vec<usize> = (0..n).map(|_| rng.gen_range(0..dim)).collect();
        let i = rng.gen_range(0..n - 1);
        let mut swapped = tuple.clone();
        swapped.swap(i, i + 1);
        let c = -Sign::parity(v.degree(tuple[i]) * v.degree(tuple[i + 1]));
        ensure(
            m.eval_indices(&tuple) == m.eval_indices(&swapped).scaled(&c.to_rational()),
            || format!("antisymmetry fails in case {case}"),
        )?;
    }
    Ok(format!(
        "{cases} permutation pairs and {cases} transpositions"
    ))
}

fn space_of(degrees: &[i64]) -> Arc<linfty::GradedSpace> {
    let names = ["a", "b", "c", "d"];
    linfty::GradedSpace::new(degrees.iter().enumerate().map(|(i, &d)| (names[i], d))).unwrap()
}

fn oracle_duality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1002);
    let candidates = 120;
    let mut failing = 0;
    let mut words = 0;
    for k in 0..candidates {
        let cap = rng.gen_range(1..=4);
        let l = random_candidate(&mut rng, 3, cap);
        let report = check_relations(&l);
        let mut all_zero = true;
        for w in l.words() {
            let args: Vec<Element> = w
                .indices()
                .iter()
                .map(|&i| Element::basis(l.space(), i))
                .collect();
            let refs: Vec<&Element> = args.iter().collect();
            let oracle = unshuffle_identity(&l, &refs).unwrap();
            let got = report
                .residual(&w)
                .cloned()
                .unwrap_or_else(|| oracle.zero_like());
            ensure(got == oracle, || {
                format!(
                    "candidate {k}, word {}: {got} vs {oracle}",
                    w.display(l.space())
                )
            })?;
            all_zero &= oracle.is_zero();
            words += 1;
        }
        ensure(report.passes() == all_zero, || {
            format!("candidate {k}: verdicts differ")
        })?;
        failing += !all_zero as usize;
    }
    Ok(format!(
        "{candidates} candidates, {words} words, {failing} violate the relations"
    ))
}

fn twist_closure() -> Outcome {
    let mut found = 0;
    for l in [heisenberg(4), two_term(4)] {
        let dim = l.space().dim();
        let odd: Vec<usize> = (0..dim).filter(|&i| l.space().degree(i) == 1).collect();
        let mut coeffs = vec![-2i64; odd.len()];
        loop {
            let pi = Element::from_terms(
                l.space(),
                1,
                odd.iter().zip(&coeffs).map(|(&i, &c)| (i, q(c))),
            )
            .unwrap();
            if let Ok(mc) = McElement::verify(&l, pi.clone()) {
                let t = twist(&l, &mc).map_err(|e| e.to_string())?;
                let report = check_relations(&t);
                ensure(report.passes(), || format!("twist by {pi}: {report}"))?;
                found += 1;
            }
            let Some(pos) = coeffs.iter().position(|&c| c < 2) else {
                break;
            };
            coeffs[pos] += 1;
            for c in &mut coeffs[..pos] {
                *c = -2;
            }
        }
    }
    ensure(found > 10, || {
        format!("only {found} Maurer-Cartan elements found")
    })?;
    Ok(format!("{found} Maurer-Cartan elements twisted"))
}

/// Every element of `U` whose components are sums of distinct basis
/// elements, when there are few enough of them, and all sums of at most two
/// basis elements otherwise.
fn basis_supported(basis: &[HomElement<Element>]) -> Vec<HomElement<Element>> {
    let zero = HomElement::zero(basis[0].source(), 1);
    let mut out = Vec::new();
    if basis.len() <= 10 {
        for mask in 0u32..(1 << basis.len()) {
            let mut a = zero.clone();
            for (i, b) in basis.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.add_scaled(&q(1), b);
                }
            }
            out.push(a);
        }
    } else {
        out.push(zero.clone());
        for i in 0..basis.len() {
            out.push(basis[i].clone());
            for j in i + 1..basis.len() {
                let mut a = basis[i].clone();
                a.add_scaled(&q(1), &basis[j]);
                out.push(a);
            }
        }
    }
    out
}

fn correspondence() -> Outcome {
    let pairs = [
        (two_term(4), two_term(4)),
        (wxy(3), wxy(3)),
        (heisenberg(3), heisenberg(3)),
        (two_term(3), wxy(3)),
        (wxy(3), heisenberg(3)),
        (heisenberg(2), two_term(2)),
    ];
    let mut checked = 0;
    let mut morphisms = 0;
    for (l, t) in pairs {
        let (l, t) = (Arc::new(l), Arc::new(t));
        let u = build_convolution(&l, &t).unwrap();
        let basis: Vec<HomElement<Element>> = u
            .hom_basis()
            .into_iter()
            .filter(|(_, _, d)| *d == 1)
            .map(|(w, j, _)| u.basis_element(&w, j))
            .collect();
        for alpha in basis_supported(&basis) {
            let f = mc_to_morphism(&l, &t, &alpha).unwrap();
            let curv = curvature(&u, &alpha).unwrap();
            let report = check_morphism(&f);
            ensure(curv.is_zero() == report.passes(), || {
                format!("verdicts differ at {alpha}")
            })?;
            for w in l.words() {
                let expected = report.residual_or_zero(&w);
                let got = curv
                    .component(&w)
                    .cloned()
                    .unwrap_or_else(|| expected.zero_like());
                ensure(got == expected, || {
                    format!("residuals differ on {} at {alpha}", w.display(l.space()))
                })?;
            }
            checked += 1;
            morphisms += report.passes() as usize;
        }
    }
    Ok(format!(
        "{checked} elements, {morphisms} of them morphisms, zero mismatches"
    ))
}

fn lemma_one() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1005);
    let requests = 60;
    for k in 0..requests {
        let cap = rng.gen_range(2..=4);
        let l = Arc::new(match k % 4 {
            0 => two_term(cap),
            1 => heisenberg(cap),
            2 => wxy(cap),
            _ => runaway(cap),
        });
        let mut f = MorphismComponents::identity(&l);
        for _ in 0..rng.gen_range(0..=2) {
            let m = rng.gen_range(1..cap);
            let h = random_map(&mut rng, l.space(), l.space(), m, -(m as i64), 0.5);
            f = perturb_morphism(&f, &h)
                .map_err(|e| e.to_string())?
                .morphism;
        }
        let n = rng.gen_range(1..cap);
        let h = random_map(&mut rng, l.space(), l.space(), n, -(n as i64), 0.6);
        let p = perturb_morphism(&f, &h).map_err(|e| e.to_string())?;
        let g = &p.morphism;
        for m in 1..n {
            ensure(g.component_or_zero(m) == f.component_or_zero(m), || {
                format!("request {k}: weight {m} moved")
            })?;
        }
        let (f_n, g_n) = (f.component_or_zero(n), g.component_or_zero(n));
        for w in wedge_basis(l.space(), n).unwrap() {
            let expected = perturbed_component(&l, &l, &f_n, &h, w.indices());
            ensure(g_n.value_or_zero(&w) == expected, || {
                format!(
                    "request {k}: weight {n} differs on {}",
                    w.display(l.space())
                )
            })?;
        }
        ensure(check_morphism(g).passes(), || {
            format!("request {k}: output is not a morphism")
        })?;
        let before = is_quasi_iso(&f).unwrap().is_quasi_iso();
        let after = is_quasi_iso(g).unwrap().is_quasi_iso();
        ensure(before == after, || {
            format!("request {k}: quasi-isomorphism verdict changed")
        })?;
    }

    let l = Arc::new(two_term(3));
    let v = l.space();
    let mut h = MultiMap::new(v, v, 2, -2).unwrap();
    h.set(&["b", "b"], elem(v, "a")).unwrap();
    let g = perturb_morphism(&MorphismComponents::identity(&l), &h)
        .unwrap()
        .morphism;
    let g2 = g.component_or_zero(2);
    let ab = linfty::Word::parse("a b", v).unwrap().unwrap().0;
    let bb = linfty::Word::parse("b b", v).unwrap().unwrap().0;
    ensure(
        g2.value_or_zero(&ab) == h.value_or_zero(&bb).scaled(&q(-1)),
        || format!("worked example gives {}", g2.value_or_zero(&ab)),
    )?;
    Ok(format!("{requests} requests and the worked example"))
}

fn gauge_flow() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1006);
    let mut flows = 0;
    let half = Rational::new(1.into(), 2.into());
    for l in [two_term(4), heisenberg(4), wxy(4)] {
        let depth = lower_central_series(&l, 8)
            .nilpotent_depth
            .ok_or("fixture is not nilpotent")?;
        for _ in 0..20 {
            let Ok(pi0) = McElement::verify(&l, random_element(&mut rng, l.space(), 1, 0.7)) else {
                continue;
            };
            let xi = random_element(&mut rng, l.space(), 0, 0.9);
            let flow = flow_mc(&l, &pi0, &xi, None).map_err(|e| e.to_string())?;
            ensure(flow.iterations <= depth, || {
                format!("{} iterations with depth {depth}", flow.iterations)
            })?;
            for t in [q(0), half.clone(), q(1)] {
                ensure(
                    curvature(&l, &flow.path.eval(&t)).unwrap().is_zero(),
                    || format!("curvature at t = {t}"),
                )?;
            }
            flows += 1;
        }
    }
    let l = runaway(4);
    let v = McElement::verify(&l, elem(l.space(), "v")).unwrap();
    match flow_mc(&l, &v, &elem(l.space(), "w"), None) {
        Err(Error::NonTermination { .. }) => {}
        other => return Err(format!("runaway flow gave {other:?}")),
    }
    ensure(flows >= 30, || format!("only {flows} flows"))?;
    Ok(format!("{flows} flows, runaway rejected"))
}

fn random_xi(rng: &mut StdRng, l: &LInftyStructure) -> HomElement<Element> {
    let maps: Vec<_> = (1..=l.cap())
        .map(|n| random_map(rng, l.space(), l.space(), n, -(n as i64), 0.5))
        .collect();
    HomElement::from_maps(l.space(), 0, maps).unwrap()
}

/// `-(-1)^{‖w‖}` times each component.
fn dt_signed(
    p: &PolyPath<HomElement<Element>>,
    source: &Arc<linfty::GradedSpace>,
) -> PolyPath<HomElement<Element>> {
    p.map(HomElement::zero(source, 1), |a| {
        let mut out = HomElement::zero(source, 1);
        for (w, x) in a.components() {
            out.set(
                w.clone(),
                x.scaled(&-Sign::parity(w.shifted_degree(source)).to_rational()),
            )
            .unwrap();
        }
        out
    })
}

/// Residual of the flow equation added by moving `h¹` to `h¹ + δ` while
/// keeping `h⁰`: `-Σ_m 1/m! Q_{m+1}(h⁰, ..., h⁰, δ)`.
fn corruption_residual(
    l: &Arc<LInftyStructure>,
    h0: &PolyPath<HomElement<Element>>,
    delta: &PolyPath<HomElement<Element>>,
) -> PolyPath<HomElement<Element>> {
    let u = build_convolution(l, l).unwrap();
    let mut out = PolyPath::zero(HomElement::zero(l.space(), 1));
    for m in 0..l.cap() {
        let mut args: Vec<&PolyPath<HomElement<Element>>> = vec![h0; m];
        args.push(delta);
        out.add_scaled(&-inverse_factorial(m), &bracket_poly(&u, &args).unwrap());
    }
    out
}

fn homotopy_split() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1007);
    let mut homotopies = 0;
    let mut visible = 0;
    for k in 0..30 {
        let cap = rng.gen_range(2..=3);
        let l = Arc::new(match k % 3 {
            0 => two_term(cap),
            1 => heisenberg(cap),
            _ => wxy(cap),
        });
        let f = MorphismComponents::identity(&l);
        let xi = random_xi(&mut rng, &l);
        let (hom, g) = gauge_to_homotopy(&f, &xi).map_err(|e| e.to_string())?;
        let path = PathAlgebra::with_default_cap(&l);
        let delta = PolyPath::monomial(rng.gen_range(0..=1), random_xi(&mut rng, &l));
        let expected = corruption_residual(&l, &hom.h0, &delta);
        let mut bad = hom.clone();
        bad.h1.add_scaled(&q(1), &delta);
        for (label, h) in [("gauge", &hom), ("corrupted", &bad)] {
            let report = check_homotopy(&f, &g, h).map_err(|e| e.to_string())?;
            let (plain, dt) = unsplit_residual(&f, h, &path).map_err(|e| e.to_string())?;
            ensure(plain == report.curvature, || {
                format!("{label} homotopy {k}: plain part differs")
            })?;
            ensure(dt == dt_signed(&report.flow_residual, l.space()), || {
                format!("{label} homotopy {k}: dt part differs")
            })?;
            if label == "gauge" {
                ensure(report.passes(), || format!("gauge homotopy {k}: {report}"))?;
            } else {
                ensure(report.flow_residual == expected, || {
                    format!("corrupted homotopy {k}: unexpected residual")
                })?;
                ensure(report.passes() == expected.is_zero(), || {
                    format!("corrupted homotopy {k}: wrong verdict")
                })?;
                visible += !expected.is_zero() as usize;
            }
        }
        homotopies += 1;
    }
    ensure(visible >= 20, || {
        format!("only {visible} corruptions change the residual")
    })?;
    Ok(format!(
        "{homotopies} gauge homotopies, {visible} corruptions with nonzero residual, all detected"
    ))
}

fn cli_determinism() -> Outcome {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = fs::read_dir(&corpus)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    ensure(files.len() >= 12, || {
        format!("corpus has {} documents", files.len())
    })?;
    for path in &files {
        let text = fs::read_to_string(path).unwrap();
        let again = canonical_text(path).map_err(|e| e.to_string())?;
        ensure(again == text, || {
            format!("{} does not round-trip", path.display())
        })?;
        let doc = Document::parse(&text).map_err(|e| e.to_string())?;
        ensure(doc.to_text() == text, || {
            format!("{} does not reserialize", path.display())
        })?;
    }
    let at = |name: &str| corpus.join(name).to_string_lossy().into_owned();
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["check-linfty".into(), at("heisenberg.alg")], EXIT_PASS),
        (
            vec!["check-morphism".into(), at("perturbed.mor")],
            EXIT_PASS,
        ),
        (vec!["homotopy-check".into(), at("homotopy.hom")], EXIT_PASS),
        (vec!["check-linfty".into(), at("broken.alg")], EXIT_FAIL),
        (
            vec!["check-morphism".into(), at("not-a-morphism.mor")],
            EXIT_FAIL,
        ),
        (
            vec!["homotopy-check".into(), at("bad-homotopy.hom")],
            EXIT_FAIL,
        ),
        (
            vec![
                "gauge-flow".into(),
                at("runaway.alg"),
                "--pi".into(),
                "v".into(),
                "--xi".into(),
                "w".into(),
            ],
            EXIT_FAIL,
        ),
        (vec!["check-linfty".into(), at("missing.alg")], EXIT_INPUT),
        (vec!["check-morphism".into(), at("abelian.alg")], EXIT_INPUT),
        (vec!["no-such-command".into()], EXIT_INPUT),
    ];
    for (args, expected) in &cases {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let argv = std::iter::once("linfty".to_string()).chain(args.iter().cloned());
            let code = run(argv, &mut out, &mut err);
            ensure(code == *expected, || {
                format!("{args:?} exited {code}, expected {expected}")
            })?;
            outputs.push((out, err));
        }
        ensure(outputs[0] == outputs[1], || {
            format!("{args:?} is not deterministic")
        })?;
    }
    Ok(format!(
        "{} documents round-trip, {} command lines",
        files.len(),
        cases.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("sign conventions", sign_conventions),
        ("oracle duality", oracle_duality),
        ("twist closure", twist_closure),
        ("morphisms as Maurer-Cartan elements", correspondence),
        ("weight-n perturbation", lemma_one),
        ("gauge flow", gauge_flow),
        ("homotopy split", homotopy_split),
        ("CLI determinism", cli_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed > BUDGET {
                Err(format!("{detail}, but took {elapsed:.1?}"))
            } else {
                Ok(detail)
            }
        });
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
