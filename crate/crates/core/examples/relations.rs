//! Builds a small differential graded Lie algebra, checks its relations and
//! shows how a broken Jacobi identity is reported.

use linfty::{
    check_relations, cohomology, from_dgla, lower_central_series, Element, GradedSpace, MultiMap,
};

fn main() -> linfty::Result<()> {
    // sl2 in degree 0 with zero differential
    let v = GradedSpace::new([("e", 0), ("f", 0), ("h", 0)])?;
    let d = MultiMap::new(&v, &v, 1, 1)?;
    let mut bracket = MultiMap::new(&v, &v, 2, 0)?;
    bracket.set(&["e", "f"], Element::parse("h", &v, None)?)?;
    bracket.set(&["h", "e"], Element::parse("2*e", &v, None)?)?;
    bracket.set(&["h", "f"], Element::parse("-2*f", &v, None)?)?;
    let sl2 = from_dgla(&v, d.clone(), bracket.clone(), 4)?;
    println!("sl2: {}", check_relations(&sl2));
    println!(
        "sl2 nilpotent: {}",
        lower_central_series(&sl2, 5).is_nilpotent()
    );

    // drop [h, f] and the Jacobi identity fails in weight 3
    let mut broken = MultiMap::new(&v, &v, 2, 0)?;
    broken.set(&["e", "f"], Element::parse("h", &v, None)?)?;
    broken.set(&["h", "e"], Element::parse("2*e", &v, None)?)?;
    println!("broken: {}", check_relations(&from_dgla(&v, d, broken, 4)?));

    let complex = GradedSpace::new([("a", 0), ("b", 1), ("c", 1)])?;
    let mut q1 = MultiMap::new(&complex, &complex, 1, 1)?;
    q1.set(&["a"], Element::parse("b", &complex, None)?)?;
    let l = linfty::make_linfty(&complex, [q1], 2)?;
    println!("{}", cohomology(&l)?);
    Ok(())
}
