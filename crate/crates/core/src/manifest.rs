//! Text documents describing algebras, morphisms and the inputs of the
//! command-line tool.
//!
//! Every document is a TOML table with a `kind` tag. Multilinear maps are
//! written as lists of entries `"x y -> 1*z - 1/2*w"`: a tuple of basis
//! names, then its value as a linear combination with rational
//! coefficients. Documents refer to each other by paths relative to their
//! own directory.
//!
//! ```toml
//! kind = "algebra"
//! cap = 4
//! basis = ["x", "y", "z"]
//! degrees = [1, 1, 2]
//!
//! [[map]]
//! arity = 2
//! entries = ["x y -> 1*z"]
//! ```
//!
//! [`canonical_text`] re-emits a document from the objects it describes, so
//! a document in canonical form reproduces itself byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{make_linfty, LInftyStructure};
use crate::convolution::HomElement;
use crate::error::{Error, Result};
use crate::graded::{Element, GradedSpace, GradedVector, MultiMap, Word};
use crate::homotopy::HomotopyElement;
use crate::mc::PolyPath;
use crate::morphism::MorphismComponents;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Algebra(AlgebraDoc),
    Morphism(MorphismDoc),
    McElement(McElementDoc),
    Map(MapDoc),
    Homotopy(HomotopyDoc),
    Request(RequestDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "algebra",
            Document::Morphism(_) => "morphism",
            Document::McElement(_) => "mc-element",
            Document::Map(_) => "map",
            Document::Homotopy(_) => "homotopy",
            Document::Request(_) => "request",
        }
    }

    pub fn parse(text: &str) -> Result<Document> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("documents always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub cap: usize,
    pub basis: Vec<String>,
    pub degrees: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub map: Vec<Entries>,
}

/// The entries of one structure map or morphism component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entries {
    pub arity: usize,
    pub entries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub component: Vec<Entries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McElementDoc {
    pub algebra: String,
    pub value: String,
}

/// A single multilinear map between the spaces of two algebra documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    pub arity: usize,
    pub degree: i64,
    #[serde(default)]
    pub entries: Vec<String>,
}

/// One power of `t` in a polynomial path of convolution elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathTerm {
    pub power: usize,
    pub entries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyDoc {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h0: Vec<PathTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h1: Vec<PathTerm>,
}

/// Input of the weight-`n` perturbation: a morphism and a map document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestDoc {
    pub morphism: String,
    pub n: usize,
    pub h: String,
}

/// Splits `"x y -> 1*z"` into its tuple and value.
fn split_entry(entry: &str) -> Result<(&str, &str)> {
    entry
        .split_once("->")
        .map(|(l, r)| (l.trim(), r.trim()))
        .ok_or_else(|| Error::Parse(format!("entry `{entry}` has no `->`")))
}

/// The canonical word of a tuple, with its reordering sign. Tuples that
/// vanish by symmetry are rejected.
fn entry_word(tuple: &str, space: &GradedSpace) -> Result<(Word, crate::graded::Sign)> {
    Word::parse(tuple, space)?
        .ok_or_else(|| Error::Invalid(format!("the tuple `{tuple}` repeats an even element")))
}

fn parse_map(
    source: &Arc<GradedSpace>,
    target: &Arc<GradedSpace>,
    arity: usize,
    degree: i64,
    entries: &[String],
) -> Result<MultiMap> {
    let mut m = MultiMap::new(source, target, arity, degree)?;
    let mut seen = std::collections::BTreeSet::new();
    for entry in entries {
        let (tuple, value) = split_entry(entry)?;
        let (word, _) = entry_word(tuple, source)?;
        if !seen.insert(word.clone()) {
            return Err(Error::Invalid(format!(
                "the tuple `{tuple}` is given twice"
            )));
        }
        let value = Element::parse(value, target, Some(word.degree(source) + degree))?;
        let names: Vec<&str> = tuple.split_whitespace().collect();
        m.set(&names, value)?;
    }
    Ok(m)
}

fn map_entries(m: &MultiMap) -> Vec<String> {
    m.values()
        .map(|(w, v)| format!("{} -> {v}", w.display(m.source())))
        .collect()
}

fn parse_hom(
    source: &Arc<GradedSpace>,
    target: &Arc<GradedSpace>,
    u: i64,
    entries: &[String],
) -> Result<HomElement<Element>> {
    let mut out = HomElement::zero(source, u);
    for entry in entries {
        let (tuple, value) = split_entry(entry)?;
        let (word, sign) = entry_word(tuple, source)?;
        if out.component(&word).is_some() {
            return Err(Error::Invalid(format!(
                "the tuple `{tuple}` is given twice"
            )));
        }
        let value = Element::parse(value, target, Some(out.component_degree(&word)))?;
        out.set(word, value.scaled(&sign.to_rational()))?;
    }
    Ok(out)
}

fn hom_entries(h: &HomElement<Element>) -> Vec<String> {
    h.components()
        .map(|(w, v)| format!("{} -> {v}", w.display(h.source())))
        .collect()
}

fn parse_path(
    source: &Arc<GradedSpace>,
    target: &Arc<GradedSpace>,
    u: i64,
    terms: &[PathTerm],
) -> Result<PolyPath<HomElement<Element>>> {
    let mut coeffs = BTreeMap::new();
    for term in terms {
        if coeffs.contains_key(&term.power) {
            return Err(Error::Invalid(format!("t^{} is given twice", term.power)));
        }
        coeffs.insert(term.power, parse_hom(source, target, u, &term.entries)?);
    }
    Ok(PolyPath::from_coefficients(
        HomElement::zero(source, u),
        coeffs,
    ))
}

fn path_terms(p: &PolyPath<HomElement<Element>>) -> Vec<PathTerm> {
    p.coefficients()
        .map(|(power, a)| PathTerm {
            power,
            entries: hom_entries(a),
        })
        .collect()
}

/// Builds the structure described by an algebra document.
pub fn algebra_from_doc(doc: &AlgebraDoc, cap_override: Option<usize>) -> Result<LInftyStructure> {
    if doc.basis.len() != doc.degrees.len() {
        return Err(Error::LengthMismatch {
            what: "degree list",
            got: doc.degrees.len(),
            expected: doc.basis.len(),
        });
    }
    let space = GradedSpace::new(doc.basis.iter().cloned().zip(doc.degrees.iter().copied()))?;
    let cap = cap_override.unwrap_or(doc.cap);
    let mut arities = std::collections::BTreeSet::new();
    let mut maps = Vec::new();
    for e in &doc.map {
        if !arities.insert(e.arity) {
            return Err(Error::Invalid(format!("Q{} is given twice", e.arity)));
        }
        if e.arity == 0 {
            return Err(Error::ZeroWeight(0));
        }
        if cap_override.is_some() && e.arity > cap {
            continue;
        }
        maps.push(parse_map(
            &space,
            &space,
            e.arity,
            2 - e.arity as i64,
            &e.entries,
        )?);
    }
    make_linfty(&space, maps, cap)
}

pub fn algebra_to_doc(l: &LInftyStructure) -> AlgebraDoc {
    let space = l.space();
    AlgebraDoc {
        cap: l.cap(),
        basis: space.basis().map(|(n, _)| n.to_string()).collect(),
        degrees: space.basis().map(|(_, d)| d).collect(),
        map: l
            .maps()
            .map(|(n, m)| Entries {
                arity: n,
                entries: map_entries(m),
            })
            .collect(),
    }
}

pub fn morphism_to_doc(f: &MorphismComponents, source: &str, target: &str) -> MorphismDoc {
    MorphismDoc {
        source: source.to_string(),
        target: target.to_string(),
        component: f
            .components()
            .map(|(n, m)| Entries {
                arity: n,
                entries: map_entries(m),
            })
            .collect(),
    }
}

pub fn map_to_doc(m: &MultiMap, source: &str, target: &str) -> MapDoc {
    MapDoc {
        source: source.to_string(),
        target: target.to_string(),
        arity: m.weight(),
        degree: m.degree(),
        entries: map_entries(m),
    }
}

pub fn homotopy_to_doc(h: &HomotopyElement, from: &str, to: &str) -> HomotopyDoc {
    HomotopyDoc {
        from: from.to_string(),
        to: to.to_string(),
        h0: path_terms(&h.h0),
        h1: path_terms(&h.h1),
    }
}

/// A loaded morphism together with the references it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedMorphism {
    pub morphism: MorphismComponents,
    pub source_ref: String,
    pub target_ref: String,
    pub source_path: PathBuf,
    pub target_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedHomotopy {
    pub from: LoadedMorphism,
    pub to: LoadedMorphism,
    pub homotopy: HomotopyElement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedRequest {
    pub morphism: LoadedMorphism,
    pub n: usize,
    pub h: MultiMap,
}

/// Reads documents from disk, applying an optional cap override to every
/// algebra it loads.
#[derive(Debug, Clone, Copy, Default)]
pub struct Loader {
    pub cap_override: Option<usize>,
}

fn resolve(base: &Path, reference: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(reference)
}

fn expect_kind(path: &Path, doc: &Document, kind: &str) -> Error {
    Error::Invalid(format!(
        "{} is a {} document, expected {kind}",
        path.display(),
        doc.kind()
    ))
}

impl Loader {
    pub fn new(cap_override: Option<usize>) -> Loader {
        Loader { cap_override }
    }

    pub fn read(&self, path: &Path) -> Result<Document> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Document::parse(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn algebra(&self, path: &Path) -> Result<Arc<LInftyStructure>> {
        match self.read(path)? {
            Document::Algebra(doc) => Ok(Arc::new(algebra_from_doc(&doc, self.cap_override)?)),
            other => Err(expect_kind(path, &other, "algebra")),
        }
    }

    fn morphism_from_doc(&self, path: &Path, doc: &MorphismDoc) -> Result<LoadedMorphism> {
        let source_path = resolve(path, &doc.source);
        let target_path = resolve(path, &doc.target);
        let source = self.algebra(&source_path)?;
        let target = self.algebra(&target_path)?;
        let mut arities = std::collections::BTreeSet::new();
        let mut components = Vec::new();
        for e in &doc.component {
            if !arities.insert(e.arity) {
                return Err(Error::Invalid(format!("F{} is given twice", e.arity)));
            }
            if e.arity == 0 {
                return Err(Error::ZeroWeight(0));
            }
            if self.cap_override.is_some() && e.arity > source.cap() {
                continue;
            }
            components.push(parse_map(
                source.space(),
                target.space(),
                e.arity,
                1 - e.arity as i64,
                &e.entries,
            )?);
        }
        Ok(LoadedMorphism {
            morphism: MorphismComponents::new(&source, &target, components)?,
            source_ref: doc.source.clone(),
            target_ref: doc.target.clone(),
            source_path,
            target_path,
        })
    }

    pub fn morphism(&self, path: &Path) -> Result<LoadedMorphism> {
        match self.read(path)? {
            Document::Morphism(doc) => self.morphism_from_doc(path, &doc),
            other => Err(expect_kind(path, &other, "morphism")),
        }
    }

    /// The algebra and the degree-1 element of an `mc-element` document.
    pub fn mc_element(&self, path: &Path) -> Result<(Arc<LInftyStructure>, Element)> {
        match self.read(path)? {
            Document::McElement(doc) => {
                let l = self.algebra(&resolve(path, &doc.algebra))?;
                let value = Element::parse(&doc.value, l.space(), Some(1))?;
                Ok((l, value))
            }
            other => Err(expect_kind(path, &other, "mc-element")),
        }
    }

    pub fn map(&self, path: &Path) -> Result<MultiMap> {
        match self.read(path)? {
            Document::Map(doc) => {
                let source = self.algebra(&resolve(path, &doc.source))?;
                let target = self.algebra(&resolve(path, &doc.target))?;
                parse_map(
                    source.space(),
                    target.space(),
                    doc.arity,
                    doc.degree,
                    &doc.entries,
                )
            }
            other => Err(expect_kind(path, &other, "map")),
        }
    }

    pub fn homotopy(&self, path: &Path) -> Result<LoadedHomotopy> {
        match self.read(path)? {
            Document::Homotopy(doc) => {
                let from = self.morphism(&resolve(path, &doc.from))?;
                let to = self.morphism(&resolve(path, &doc.to))?;
                let src = from.morphism.source().space().clone();
                let tgt = from.morphism.target().space().clone();
                let homotopy = HomotopyElement {
                    h0: parse_path(&src, &tgt, 1, &doc.h0)?,
                    h1: parse_path(&src, &tgt, 0, &doc.h1)?,
                };
                Ok(LoadedHomotopy { from, to, homotopy })
            }
            other => Err(expect_kind(path, &other, "homotopy")),
        }
    }

    pub fn request(&self, path: &Path) -> Result<LoadedRequest> {
        match self.read(path)? {
            Document::Request(doc) => Ok(LoadedRequest {
                morphism: self.morphism(&resolve(path, &doc.morphism))?,
                n: doc.n,
                h: self.map(&resolve(path, &doc.h))?,
            }),
            other => Err(expect_kind(path, &other, "request")),
        }
    }

    /// Loads a document and everything it refers to, then writes it back
    /// from the loaded objects.
    pub fn canonical_text(&self, path: &Path) -> Result<String> {
        let doc = match self.read(path)? {
            Document::Algebra(doc) => {
                Document::Algebra(algebra_to_doc(&algebra_from_doc(&doc, self.cap_override)?))
            }
            Document::Morphism(doc) => {
                let m = self.morphism_from_doc(path, &doc)?;
                Document::Morphism(morphism_to_doc(&m.morphism, &doc.source, &doc.target))
            }
            Document::McElement(doc) => {
                let (_, value) = self.mc_element(path)?;
                Document::McElement(McElementDoc {
                    algebra: doc.algebra,
                    value: value.to_string(),
                })
            }
            Document::Map(doc) => {
                Document::Map(map_to_doc(&self.map(path)?, &doc.source, &doc.target))
            }
            Document::Homotopy(doc) => {
                let h = self.homotopy(path)?;
                Document::Homotopy(homotopy_to_doc(&h.homotopy, &doc.from, &doc.to))
            }
            Document::Request(doc) => {
                self.request(path)?;
                Document::Request(doc)
            }
        };
        Ok(doc.to_text())
    }
}

/// Canonical text of the document at `path`, without a cap override.
pub fn canonical_text(path: &Path) -> Result<String> {
    Loader::default().canonical_text(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEISENBERG: &str = "kind = \"algebra\"\ncap = 4\nbasis = [\"x\", \"y\", \"z\"]\ndegrees = [1, 1, 2]\n\n[[map]]\narity = 2\nentries = [\"x y -> 1*z\"]\n";

    #[test]
    fn algebra_document_round_trips() {
        let Document::Algebra(doc) = Document::parse(HEISENBERG).unwrap() else {
            panic!("wrong kind")
        };
        let l = algebra_from_doc(&doc, None).unwrap();
        assert_eq!(Document::Algebra(algebra_to_doc(&l)).to_text(), HEISENBERG);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = HEISENBERG.replace("cap = 4", "cap = 4\ncolour = 1");
        assert!(matches!(Document::parse(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn entries_are_canonicalized() {
        let text = HEISENBERG.replace("x y -> 1*z", "y x -> 2/2*z");
        let Document::Algebra(doc) = Document::parse(&text).unwrap() else {
            panic!("wrong kind")
        };
        let l = algebra_from_doc(&doc, None).unwrap();
        // swapping two degree-1 elements costs (-1)^{1 + 1·1} = +1
        assert_eq!(
            algebra_to_doc(&l).map[0].entries,
            vec!["x y -> 1*z".to_string()]
        );
    }

    #[test]
    fn cap_override_drops_higher_maps() {
        let Document::Algebra(doc) = Document::parse(HEISENBERG).unwrap() else {
            panic!("wrong kind")
        };
        let l = algebra_from_doc(&doc, Some(1)).unwrap();
        assert_eq!(l.cap(), 1);
        assert!(l.map(2).is_none());
    }
}
