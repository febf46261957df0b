//! Perturbs the identity of a two-term complex at weight 2 and compares the
//! new component with the old one.

use std::sync::Arc;

use linfty::{
    make_linfty, morphism_to_mc, perturb_morphism, Element, GradedSpace, MorphismComponents,
    MultiMap,
};

fn main() -> linfty::Result<()> {
    let v = GradedSpace::new([("a", 0), ("b", 1)])?;
    let mut q1 = MultiMap::new(&v, &v, 1, 1)?;
    q1.set(&["a"], Element::parse("b", &v, None)?)?;
    let l = Arc::new(make_linfty(&v, [q1], 3)?);

    let mut h = MultiMap::new(&v, &v, 2, -2)?;
    h.set(&["b", "b"], Element::parse("a", &v, None)?)?;
    let p = perturb_morphism(&MorphismComponents::identity(&l), &h)?;
    println!("{p}");
    println!("F~ = {}", morphism_to_mc(&p.morphism));
    Ok(())
}
