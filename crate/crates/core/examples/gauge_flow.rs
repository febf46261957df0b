//! Moves a Maurer-Cartan element along a gauge flow and shows the failure
//! on an algebra that is not nilpotent.

use linfty::{flow_mc, make_linfty, Element, GradedSpace, McElement, MultiMap, Rational};

fn main() -> linfty::Result<()> {
    let v = GradedSpace::new([("w", 0), ("x", 1), ("y", 1)])?;
    let mut q2 = MultiMap::new(&v, &v, 2, 0)?;
    q2.set(&["w", "x"], Element::parse("y", &v, None)?)?;
    let l = make_linfty(&v, [q2], 4)?;
    let pi0 = McElement::verify(&l, Element::parse("x", &v, None)?)?;
    let flow = flow_mc(&l, &pi0, &Element::parse("w", &v, None)?, None)?;
    println!("pi_t = {} after {} iterations", flow.path, flow.iterations);
    println!(
        "pi_1 = {}",
        flow.path.eval(&Rational::from_integer(1.into()))
    );

    let r = GradedSpace::new([("w", 0), ("v", 1)])?;
    let mut q2 = MultiMap::new(&r, &r, 2, 0)?;
    q2.set(&["w", "v"], Element::parse("v", &r, None)?)?;
    let runaway = make_linfty(&r, [q2], 4)?;
    let start = McElement::verify(&runaway, Element::parse("v", &r, None)?)?;
    match flow_mc(&runaway, &start, &Element::parse("w", &r, None)?, Some(20)) {
        Ok(flow) => println!("unexpected fixpoint: {}", flow.path),
        Err(e) => println!("runaway: {e}"),
    }
    Ok(())
}
