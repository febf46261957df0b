//! Evaluates Maurer-Cartan residuals on the Heisenberg algebra and twists
//! it by a solution.

use linfty::{
    check_relations, make_linfty, mc_residual, twist, Element, Evidence, GradedSpace, McElement,
    MultiMap,
};

fn main() -> linfty::Result<()> {
    let v = GradedSpace::new([("x", 1), ("y", 1), ("z", 2)])?;
    let mut q2 = MultiMap::new(&v, &v, 2, 0)?;
    q2.set(&["x", "y"], Element::parse("z", &v, None)?)?;
    let l = make_linfty(&v, [q2], 4)?;

    for text in ["x", "2*x + 3*y", "-y"] {
        let pi = Element::parse(text, &v, None)?;
        println!(
            "{text}: {}",
            mc_residual(&l, &pi, Evidence::Nilpotent { depth_bound: 4 })?
        );
    }

    let pi = McElement::verify(&l, Element::parse("x", &v, None)?)?;
    let twisted = twist(&l, &pi)?;
    println!(
        "twisted Q1(y) = {}",
        twisted.differential(&Element::parse("y", &v, None)?)
    );
    println!("twisted: {}", check_relations(&twisted));
    Ok(())
}
