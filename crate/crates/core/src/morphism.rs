//! L∞-morphisms given by their components `F_n : ∧^n L → L°` of degree
//! `1 - n`, their coalgebra lifts, cohomology and quasi-isomorphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{lift_coderivation, project_through, write_residuals, LInftyStructure};
use crate::coalgebra::{product_of_elements, set_partitions, Chain, CoalgebraMap};
use crate::error::{Error, Result};
use crate::graded::word::decalage_sign;
use crate::graded::{Element, GradedSpace, GradedVector, MultiMap, Word};
use crate::linalg::{kernel, SparseVec, Subspace};

#[derive(Debug, Clone, PartialEq)]
pub struct MorphismComponents {
    source: Arc<LInftyStructure>,
    target: Arc<LInftyStructure>,
    components: BTreeMap<usize, MultiMap>,
}

impl MorphismComponents {
    pub fn new(
        source: &Arc<LInftyStructure>,
        target: &Arc<LInftyStructure>,
        components: impl IntoIterator<Item = MultiMap>,
    ) -> Result<MorphismComponents> {
        if source.cap() != target.cap() {
            return Err(Error::CapMismatch(source.cap(), target.cap()));
        }
        let mut table = BTreeMap::new();
        for f in components {
            let n = f.weight();
            if f.degree() != 1 - n as i64 {
                return Err(Error::DegreeMismatch {
                    context: format!("morphism component F_{n}"),
                    expected: 1 - n as i64,
                    got: f.degree(),
                });
            }
            if f.source().as_ref() != source.space().as_ref()
                || f.target().as_ref() != target.space().as_ref()
            {
                return Err(Error::SpaceMismatch(format!(
                    "F_{n} has the wrong source or target"
                )));
            }
            if n > source.cap() {
                return Err(Error::AboveCap {
                    weight: n,
                    cap: source.cap(),
                });
            }
            if table.insert(n, f).is_some() {
                return Err(Error::Invalid(format!("F_{n} given twice")));
            }
        }
        table.retain(|_, f: &mut MultiMap| !f.is_zero());
        Ok(MorphismComponents {
            source: source.clone(),
            target: target.clone(),
            components: table,
        })
    }

    /// `F_1 = id`, all higher components zero.
    pub fn identity(l: &Arc<LInftyStructure>) -> MorphismComponents {
        MorphismComponents::new(l, l, [MultiMap::identity(l.space())])
            .expect("identity is well formed")
    }

    pub fn zero(
        source: &Arc<LInftyStructure>,
        target: &Arc<LInftyStructure>,
    ) -> Result<MorphismComponents> {
        MorphismComponents::new(source, target, [])
    }

    pub fn source(&self) -> &Arc<LInftyStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LInftyStructure> {
        &self.target
    }

    pub fn cap(&self) -> usize {
        self.source.cap()
    }

    pub fn component(&self, n: usize) -> Option<&MultiMap> {
        self.components.get(&n)
    }

    /// The component of weight `n`, zero when absent.
    pub fn component_or_zero(&self, n: usize) -> MultiMap {
        self.components.get(&n).cloned().unwrap_or_else(|| {
            MultiMap::new(self.source.space(), self.target.space(), n, 1 - n as i64)
                .expect("positive weight")
        })
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &MultiMap)> + '_ {
        self.components.iter().map(|(&n, f)| (n, f))
    }

    /// The component on the desuspended monomial of `word`.
    pub(crate) fn shifted_value(&self, word: &Word) -> Option<Element> {
        self.components
            .get(&word.weight())
            .and_then(|f| f.shifted_value(word))
    }

    /// `pr ∘ F̂` on a chain.
    pub(crate) fn project(&self, chain: &Chain, degree: i64) -> Element {
        let mut out = Element::zero(self.target.space(), degree);
        for (v, c) in chain.terms() {
            if let Some(y) = self.shifted_value(v) {
                out.add_scaled(c, &y);
            }
        }
        out
    }

    /// The image of one monomial under the coalgebra lift.
    pub(crate) fn lift_word(&self, word: &Word) -> Chain {
        let src = self.source.space();
        let mut out = Chain::zero();
        'partitions: for (sign, blocks) in set_partitions(word, src) {
            let mut factors = Vec::with_capacity(blocks.len());
            for b in &blocks {
                match self.shifted_value(b) {
                    Some(y) => factors.push(y),
                    None => continue 'partitions,
                }
            }
            let refs: Vec<&Element> = factors.iter().collect();
            out.add_scaled(
                &sign.to_rational(),
                &product_of_elements(&refs, self.target.space()),
            );
        }
        out
    }
}

/// The coalgebra map determined by the components: a sum over set
/// partitions of the input word, each block fed to the component of its
/// size and the results multiplied together.
pub fn lift_morphism(f: &MorphismComponents) -> CoalgebraMap {
    let table = f
        .source
        .words()
        .into_iter()
        .map(|w| {
            let img = f.lift_word(&w);
            (w, img)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    CoalgebraMap {
        source: f.source.space().clone(),
        target: f.target.space().clone(),
        cap: f.cap(),
        degree: 0,
        table,
    }
}

/// Residuals of `pr ∘ (Q°F - FQ)` per weight, in the wedge basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphismReport {
    pub cap: usize,
    pub residuals: BTreeMap<usize, Vec<(Word, Element)>>,
    target: Arc<GradedSpace>,
    source: Arc<GradedSpace>,
}

impl MorphismReport {
    pub fn passes(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn residual(&self, word: &Word) -> Option<&Element> {
        self.residuals
            .get(&word.weight())
            .and_then(|v| v.iter().find(|(w, _)| w == word).map(|(_, e)| e))
    }

    /// The residual on a word, zero when it vanishes.
    pub fn residual_or_zero(&self, word: &Word) -> Element {
        self.residual(word).cloned().unwrap_or_else(|| {
            Element::zero(
                &self.target,
                word.degree(&self.source) - word.weight() as i64 + 2,
            )
        })
    }
}

impl fmt::Display for MorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return write!(f, "morphism equations hold up to weight cap {}", self.cap);
        }
        writeln!(f, "morphism equations fail up to weight cap {}:", self.cap)?;
        write_residuals(f, &self.source, &self.residuals)
    }
}

/// `pr ∘ (Q°F - FQ)` on every canonical word up to the cap.
pub fn check_morphism(f: &MorphismComponents) -> MorphismReport {
    let src = f.source.space();
    let d = lift_coderivation(&f.source);
    let mut residuals: BTreeMap<usize, Vec<(Word, Element)>> = BTreeMap::new();
    for w in f.source.words() {
        let degree = w.degree(src) - w.weight() as i64 + 2;
        let mut r = project_through(&f.target, &f.lift_word(&w), degree);
        r.add_scaled(
            &-crate::graded::Rational::from_integer(1.into()),
            &f.project(&d.apply_word(&w), degree),
        );
        if !r.is_zero() {
            let r = r.scaled(&decalage_sign(&w, src).to_rational());
            residuals.entry(w.weight()).or_default().push((w, r));
        }
    }
    MorphismReport {
        cap: f.cap(),
        residuals,
        target: f.target.space().clone(),
        source: src.clone(),
    }
}

/// The full lift-level defect `Q° ∘ F̂ - F̂ ∘ Q` on the truncated coalgebra.
pub fn lift_residual(f: &MorphismComponents) -> CoalgebraMap {
    let fl = lift_morphism(f);
    let d = lift_coderivation(&f.source);
    let d0 = lift_coderivation(&f.target);
    d0.after(&fl).difference(&fl.after(&d))
}

/// Components of `G ∘ F`: project `Ĝ ∘ F̂` to cogenerators.
pub fn compose(g: &MorphismComponents, f: &MorphismComponents) -> Result<MorphismComponents> {
    if f.target.as_ref() != g.source.as_ref() {
        return Err(Error::SpaceMismatch(
            "the target of F is not the source of G".into(),
        ));
    }
    let src = f.source.space();
    let mut comps: BTreeMap<usize, MultiMap> = BTreeMap::new();
    for w in f.source.words() {
        let n = w.weight();
        let degree = w.degree(src) + 1 - n as i64;
        let v = g.project(&f.lift_word(&w), degree);
        if v.is_zero() {
            continue;
        }
        let v = v.scaled(&decalage_sign(&w, src).to_rational());
        let m = comps.entry(n).or_insert_with(|| {
            MultiMap::new(src, g.target.space(), n, 1 - n as i64).expect("positive weight")
        });
        m.set_indices(w.indices().to_vec(), v)?;
    }
    MorphismComponents::new(&f.source, &g.target, comps.into_values())
}

/// Cohomology of `(L, Q_1)` in one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeCohomology {
    pub cycles: usize,
    pub boundaries: usize,
    /// Cycles whose classes form a basis of the cohomology.
    pub representatives: Vec<Element>,
}

impl DegreeCohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyReport {
    pub degrees: BTreeMap<i64, DegreeCohomology>,
}

impl CohomologyReport {
    pub fn dim(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, DegreeCohomology::dim)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(DegreeCohomology::dim).sum()
    }
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, h) in &self.degrees {
            write!(f, "H^{d}: dim {}", h.dim())?;
            if !h.representatives.is_empty() {
                let reps: Vec<String> = h.representatives.iter().map(|r| r.to_string()).collect();
                write!(f, " [{}]", reps.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn sparse(e: &Element) -> SparseVec {
    e.terms().map(|(i, c)| (i, c.clone())).collect()
}

struct Complex {
    cycles: BTreeMap<i64, Vec<SparseVec>>,
    boundaries: BTreeMap<i64, Subspace>,
}

fn complex(l: &LInftyStructure) -> Result<Complex> {
    let space = l.space();
    let mut cycles = BTreeMap::new();
    let mut boundaries: BTreeMap<i64, Subspace> = BTreeMap::new();
    for d in space.degrees_present() {
        let domain = space.basis_in_degree(d);
        let images: Vec<SparseVec> = domain
            .iter()
            .map(|&i| sparse(&l.differential(&Element::basis(space, i))))
            .collect();
        for img in &images {
            boundaries.entry(d + 1).or_default().insert(img);
        }
        cycles.insert(d, kernel(&domain, &images));
    }
    for (d, b) in &boundaries {
        let z = cycles.get(d).cloned().unwrap_or_default();
        let mut zs = Subspace::new();
        for v in &z {
            zs.insert(v);
        }
        if !zs.contains_subspace(b) {
            return Err(Error::NotADifferential(*d - 1));
        }
    }
    Ok(Complex { cycles, boundaries })
}

fn element_of(space: &Arc<GradedSpace>, degree: i64, v: &SparseVec) -> Element {
    Element::from_terms(space, degree, v.iter().map(|(&i, c)| (i, c.clone()))).expect("homogeneous")
}

/// Exact cohomology of `Q_1`, degree by degree.
pub fn cohomology(l: &LInftyStructure) -> Result<CohomologyReport> {
    let c = complex(l)?;
    let space = l.space();
    let mut degrees = BTreeMap::new();
    for (&d, z) in &c.cycles {
        let mut span = c.boundaries.get(&d).cloned().unwrap_or_default();
        let boundaries = span.rank();
        let representatives = z
            .iter()
            .filter(|v| span.insert(v))
            .map(|v| element_of(space, d, v))
            .collect();
        degrees.insert(
            d,
            DegreeCohomology {
                cycles: z.len(),
                boundaries,
                representatives,
            },
        );
    }
    Ok(CohomologyReport { degrees })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVerdict {
    pub source_dim: usize,
    pub target_dim: usize,
    /// Rank of the induced map on cohomology.
    pub rank: usize,
}

impl DegreeVerdict {
    pub fn bijective(&self) -> bool {
        self.source_dim == self.target_dim && self.rank == self.source_dim
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiIsoReport {
    pub degrees: BTreeMap<i64, DegreeVerdict>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.values().all(DegreeVerdict::bijective)
    }
}

impl fmt::Display for QuasiIsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, v) in &self.degrees {
            writeln!(
                f,
                "degree {d}: H(source) dim {}, H(target) dim {}, induced rank {} ({})",
                v.source_dim,
                v.target_dim,
                v.rank,
                if v.bijective() { "iso" } else { "not iso" }
            )?;
        }
        Ok(())
    }
}

/// The map induced by `F_1` on cohomology, degree by degree.
pub fn is_quasi_iso(f: &MorphismComponents) -> Result<QuasiIsoReport> {
    let hs = cohomology(&f.source)?;
    let ht = complex(&f.target)?;
    let hts = cohomology(&f.target)?;
    let f1 = f.component_or_zero(1);
    let mut degrees = BTreeMap::new();
    let all: std::collections::BTreeSet<i64> = hs
        .degrees
        .keys()
        .chain(hts.degrees.keys())
        .copied()
        .collect();
    for d in all {
        let mut span = ht.boundaries.get(&d).cloned().unwrap_or_default();
        let mut cycles = Subspace::new();
        for z in ht.cycles.get(&d).into_iter().flatten() {
            cycles.insert(z);
        }
        let mut rank = 0;
        let reps = hs
            .degrees
            .get(&d)
            .map(|h| h.representatives.clone())
            .unwrap_or_default();
        for r in &reps {
            let img = sparse(&f1.eval(&[r])?);
            if !cycles.contains(&img) {
                return Err(Error::NotAChainMap(format!("F_1({r}) is not a cycle")));
            }
            if span.insert(&img) {
                rank += 1;
            }
        }
        degrees.insert(
            d,
            DegreeVerdict {
                source_dim: reps.len(),
                target_dim: hts.dim(d),
                rank,
            },
        );
    }
    Ok(QuasiIsoReport { degrees })
}
