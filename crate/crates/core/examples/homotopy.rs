//! Turns a gauge flow into a homotopy between two morphisms, verifies it in
//! split form and in the path algebra, then breaks it.

use std::sync::Arc;

use linfty::{
    check_homotopy, gauge_to_homotopy, make_linfty, unsplit_residual, Element, GradedSpace,
    GradedVector, HomElement, MorphismComponents, MultiMap, PathAlgebra, PolyPath,
};

fn main() -> linfty::Result<()> {
    let v = GradedSpace::new([("a", 0), ("b", 1)])?;
    let mut q1 = MultiMap::new(&v, &v, 1, 1)?;
    q1.set(&["a"], Element::parse("b", &v, None)?)?;
    let l = Arc::new(make_linfty(&v, [q1], 3)?);
    let id = MorphismComponents::identity(&l);

    let mut h = MultiMap::new(&v, &v, 2, -2)?;
    h.set(&["b", "b"], Element::parse("a", &v, None)?)?;
    let xi = HomElement::from_maps(&v, 0, [h])?;
    let (hom, end) = gauge_to_homotopy(&id, &xi)?;
    println!("h0 = {}", hom.h0);
    println!("{}", check_homotopy(&id, &end, &hom)?);

    let path = PathAlgebra::with_default_cap(&l);
    let (plain, dt) = unsplit_residual(&id, &hom, &path)?;
    println!("path algebra residual: {plain} + ({dt}) dt");

    let mut bad = hom.clone();
    let mut extra = MultiMap::new(&v, &v, 1, -1)?;
    extra.set(&["b"], Element::parse("a", &v, None)?)?;
    bad.h1.add_scaled(
        &linfty::Rational::from_integer(1.into()),
        &PolyPath::constant(HomElement::from_maps(&v, 0, [extra])?),
    );
    print!("{}", check_homotopy(&id, &end, &bad)?);
    Ok(())
}
