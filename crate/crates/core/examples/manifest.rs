//! Writes an algebra document, loads it back and runs a command on it
//! through the same entry point as the binary.

use std::fs;

use linfty::manifest::{algebra_to_doc, canonical_text, Document};
use linfty::{make_linfty, Element, GradedSpace, MultiMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v = GradedSpace::new([("x", 1), ("y", 1), ("z", 2)])?;
    let mut q2 = MultiMap::new(&v, &v, 2, 0)?;
    q2.set(&["x", "y"], Element::parse("z", &v, None)?)?;
    let l = make_linfty(&v, [q2], 4)?;

    let dir = std::env::temp_dir().join("linfty-manifest-example");
    fs::create_dir_all(&dir)?;
    let path = dir.join("heisenberg.alg");
    fs::write(&path, Document::Algebra(algebra_to_doc(&l)).to_text())?;
    print!("{}", fs::read_to_string(&path)?);
    assert_eq!(canonical_text(&path)?, fs::read_to_string(&path)?);

    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = [
        "linfty",
        "mc-check",
        path.to_str().unwrap(),
        "--pi",
        "x + y",
    ];
    let code = linfty::cli::run(args, &mut out, &mut err);
    print!("{}", String::from_utf8(out)?);
    println!("exit code {code}");
    Ok(())
}
