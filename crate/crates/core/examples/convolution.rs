//! A morphism seen as a Maurer-Cartan element of the convolution algebra:
//! its curvature there is the failure of the morphism equations.

use std::sync::Arc;

use linfty::{
    build_convolution, check_morphism, check_relations, curvature, make_linfty, morphism_to_mc,
    Element, GradedSpace, MorphismComponents, MultiMap,
};

fn main() -> linfty::Result<()> {
    let v = GradedSpace::new([("a", 0), ("b", 1)])?;
    let mut q1 = MultiMap::new(&v, &v, 1, 1)?;
    q1.set(&["a"], Element::parse("b", &v, None)?)?;
    let l = Arc::new(make_linfty(&v, [q1], 3)?);
    let u = build_convolution(&l, &l)?;

    let id = MorphismComponents::identity(&l);
    let alpha = morphism_to_mc(&id);
    println!(
        "identity: alpha = {alpha}, curvature = {}",
        curvature(&u, &alpha)?
    );

    // F1 = projection onto a is not a chain map
    let mut f1 = MultiMap::new(&v, &v, 1, 0)?;
    f1.set(&["a"], Element::parse("a", &v, None)?)?;
    let f = MorphismComponents::new(&l, &l, [f1])?;
    println!(
        "projection: curvature = {}",
        curvature(&u, &morphism_to_mc(&f))?
    );
    println!("{}", check_morphism(&f));

    let finite = u.materialize()?;
    println!(
        "truncated Hom space of dimension {}: {}",
        finite.space().dim(),
        check_relations(&finite)
    );
    Ok(())
}
