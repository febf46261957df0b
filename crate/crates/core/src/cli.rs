//! The `linfty` command-line tool.
//!
//! Each subcommand reads documents (see [`crate::manifest`]), runs one
//! computation and prints a report. Exit status 0 means the check passed,
//! 1 means a mathematical failure (the report names the residual) and 2
//! means the input could not be used.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{check_relations, curvature, LInftyStructure, RelationReport};
use crate::convolution::{build_convolution, morphism_to_mc};
use crate::error::{Error, Result};
use crate::graded::{format_rational, Element, GradedSpace, GradedVector, Rational, Word};
use crate::homotopy::{check_homotopy, gauge_to_homotopy};
use crate::lemma::{perturb, PerturbationRequest};
use crate::manifest::{
    algebra_to_doc, homotopy_to_doc, morphism_to_doc, Document, LoadedMorphism, Loader,
};
use crate::mc::{flow_mc, mc_residual, twist, Evidence, McElement};
use crate::morphism::{check_morphism, cohomology, is_quasi_iso, MorphismReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "linfty",
    version,
    about = "Exact computations with weight-truncated L-infinity algebras"
)]
pub struct Cli {
    /// Override the weight cap of every loaded algebra.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the generalized Jacobi relations up to the cap.
    CheckLinfty { algebra: PathBuf },
    /// Check the morphism equations up to the cap.
    CheckMorphism { morphism: PathBuf },
    /// Cohomology of the differential Q1, degree by degree.
    Cohomology { algebra: PathBuf },
    /// Whether F1 induces an isomorphism on cohomology.
    QuasiIso { morphism: PathBuf },
    /// Evaluate the Maurer-Cartan curvature of a degree-1 element.
    McCheck {
        /// An algebra document, or an mc-element document.
        input: PathBuf,
        #[arg(long)]
        pi: Option<String>,
        /// Also require the lower central series to vanish within this many steps.
        #[arg(long)]
        nilpotent: Option<usize>,
    },
    /// Twist an algebra by a Maurer-Cartan element and print the result.
    Twist {
        input: PathBuf,
        #[arg(long)]
        pi: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the gauge flow along a degree-0 element by Picard iteration.
    GaugeFlow {
        algebra: PathBuf,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Perturb a morphism at weight n by a homotopy map.
    Lemma1 {
        /// A morphism document, or a request document.
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "H", value_name = "MAP")]
        h: Option<PathBuf>,
        /// Where to write the perturbed morphism (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the homotopy joining the two morphisms.
        #[arg(long)]
        homotopy_out: Option<PathBuf>,
    },
    /// Verify that a homotopy joins its two morphisms.
    HomotopyCheck { homotopy: PathBuf },
    /// The Maurer-Cartan element of a morphism in the convolution algebra.
    ConvolutionMc { morphism: PathBuf },
}

/// What a command produced: a verdict, a text report and the same content
/// as structured data.
struct Outcome {
    passed: bool,
    cap: usize,
    text: String,
    data: Value,
    /// A document to write instead of (or in addition to) the report.
    document: Option<(Option<PathBuf>, String)>,
}

impl Outcome {
    fn new(passed: bool, cap: usize, text: String, data: Value) -> Outcome {
        Outcome {
            passed,
            cap,
            text,
            data,
            document: None,
        }
    }
}

fn residual_rows(
    space: &GradedSpace,
    residuals: &std::collections::BTreeMap<usize, Vec<(Word, Element)>>,
) -> Value {
    Value::Array(
        residuals
            .iter()
            .flat_map(|(n, rows)| {
                rows.iter().map(move |(w, e)| {
                    json!({
                        "weight": n,
                        "word": w.display(space).to_string(),
                        "value": e.to_string(),
                    })
                })
            })
            .collect(),
    )
}

fn relations_outcome(l: &LInftyStructure, report: &RelationReport) -> Outcome {
    let text = if report.passes() {
        report.to_string()
    } else {
        let mut s = format!("relations fail up to weight cap {}:\n", report.cap);
        for (n, rows) in &report.residuals {
            for (w, e) in rows {
                s.push_str(&format!("  weight {n}: {} -> {e}\n", w.display(l.space())));
            }
        }
        s.trim_end().to_string()
    };
    Outcome::new(
        report.passes(),
        report.cap,
        text,
        json!({ "residuals": residual_rows(l.space(), &report.residuals) }),
    )
}

fn morphism_outcome(f: &LoadedMorphism, report: &MorphismReport) -> Outcome {
    Outcome::new(
        report.passes(),
        report.cap,
        report.to_string().trim_end().to_string(),
        json!({ "residuals": residual_rows(f.morphism.source().space(), &report.residuals) }),
    )
}

/// The structure and element named by an algebra document plus `--pi`, or
/// by an mc-element document.
fn algebra_and_element(
    loader: &Loader,
    input: &Path,
    pi: Option<&str>,
) -> Result<(std::sync::Arc<LInftyStructure>, Element)> {
    match loader.read(input)? {
        Document::Algebra(_) => {
            let l = loader.algebra(input)?;
            let text = pi.ok_or_else(|| {
                Error::Invalid("--pi is required with an algebra document".into())
            })?;
            let value = Element::parse(text, l.space(), Some(1))?;
            Ok((l, value))
        }
        Document::McElement(_) => {
            if pi.is_some() {
                return Err(Error::Invalid(
                    "--pi conflicts with an mc-element document".into(),
                ));
            }
            loader.mc_element(input)
        }
        other => Err(Error::Invalid(format!(
            "{} is a {} document, expected algebra or mc-element",
            input.display(),
            other.kind()
        ))),
    }
}

fn directory_of(path: &Path) -> Option<PathBuf> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    dir.canonicalize().ok()
}

/// How a document written to `out` should refer to `path`: by file name
/// when both share a directory, by absolute path otherwise.
fn reference_from(out: &Path, path: &Path) -> String {
    if let (Some(a), Some(b), Some(name)) =
        (directory_of(out), directory_of(path), path.file_name())
    {
        if a == b {
            return name.to_string_lossy().into_owned();
        }
    }
    path.canonicalize()
        .unwrap_or_else(|_| path.to_path_buf())
        .to_string_lossy()
        .into_owned()
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let loader = Loader::new(cli.cap);
    match &cli.command {
        Command::CheckLinfty { algebra } => {
            let l = loader.algebra(algebra)?;
            Ok(relations_outcome(&l, &check_relations(&l)))
        }
        Command::CheckMorphism { morphism } => {
            let f = loader.morphism(morphism)?;
            Ok(morphism_outcome(&f, &check_morphism(&f.morphism)))
        }
        Command::Cohomology { algebra } => {
            let l = loader.algebra(algebra)?;
            let h = cohomology(&l)?;
            let degrees: Vec<Value> = h
                .degrees
                .iter()
                .map(|(d, c)| {
                    json!({
                        "degree": d,
                        "dim": c.dim(),
                        "representatives": c.representatives.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let text = format!(
                "cohomology of Q1 (weight cap {}):\n{}",
                l.cap(),
                h.to_string().trim_end()
            );
            Ok(Outcome::new(
                true,
                l.cap(),
                text,
                json!({ "degrees": degrees }),
            ))
        }
        Command::QuasiIso { morphism } => {
            let f = loader.morphism(morphism)?;
            let r = is_quasi_iso(&f.morphism)?;
            let verdict = if r.is_quasi_iso() {
                "is a quasi-isomorphism"
            } else {
                "is not a quasi-isomorphism"
            };
            let text = format!(
                "F1 {verdict} (weight cap {}):\n{}",
                f.morphism.cap(),
                r.to_string().trim_end()
            );
            let degrees: Vec<Value> = r
                .degrees
                .iter()
                .map(|(d, v)| {
                    json!({
                        "degree": d,
                        "source_dim": v.source_dim,
                        "target_dim": v.target_dim,
                        "rank": v.rank,
                    })
                })
                .collect();
            Ok(Outcome::new(
                r.is_quasi_iso(),
                f.morphism.cap(),
                text,
                json!({ "degrees": degrees }),
            ))
        }
        Command::McCheck {
            input,
            pi,
            nilpotent,
        } => {
            let (l, value) = algebra_and_element(&loader, input, pi.as_deref())?;
            let evidence = match nilpotent {
                Some(depth_bound) => Evidence::Nilpotent {
                    depth_bound: *depth_bound,
                },
                None => Evidence::CapTruncation,
            };
            let r = mc_residual(&l, &value, evidence)?;
            let by_weight: Vec<Value> = r
                .by_weight
                .iter()
                .map(|(n, e)| json!({ "weight": n, "value": e.to_string() }))
                .collect();
            Ok(Outcome::new(
                r.vanishes(),
                r.cap,
                r.to_string(),
                json!({ "element": value.to_string(), "residual": r.value.to_string(), "by_weight": by_weight }),
            ))
        }
        Command::Twist { input, pi, out } => {
            let (l, value) = algebra_and_element(&loader, input, pi.as_deref())?;
            let mc = McElement::verify(&l, value)?;
            let twisted = twist(&l, &mc)?;
            let relations = check_relations(&twisted);
            let text = format!("twisted by {}: {relations}", mc.value());
            let doc = Document::Algebra(algebra_to_doc(&twisted)).to_text();
            let mut o = Outcome::new(
                relations.passes(),
                l.cap(),
                text,
                json!({ "document": doc.clone() }),
            );
            o.document = Some((out.clone(), doc));
            Ok(o)
        }
        Command::GaugeFlow {
            algebra,
            pi,
            xi,
            bound,
        } => {
            let l = loader.algebra(algebra)?;
            let pi0 = McElement::verify(&l, Element::parse(pi, l.space(), Some(1))?)?;
            let xi = Element::parse(xi, l.space(), Some(0))?;
            let flow = flow_mc(&l, &pi0, &xi, *bound)?;
            let samples = [
                Rational::from_integer(0.into()),
                Rational::new(1.into(), 2.into()),
                Rational::from_integer(1.into()),
            ];
            let mut all_mc = true;
            let mut lines = vec![
                format!("pi_t = {}", flow.path),
                format!("fixpoint after {} iteration(s)", flow.iterations),
            ];
            for t in &samples {
                let r = curvature(&*l, &flow.path.eval(t))?;
                all_mc &= r.is_zero();
                lines.push(format!("t = {}: curvature {r}", format_rational(t)));
            }
            lines.push(format!(
                "pi_1 = {} ({} up to weight cap {})",
                flow.path.eval(&samples[2]),
                if all_mc {
                    "Maurer-Cartan"
                } else {
                    "not Maurer-Cartan"
                },
                l.cap()
            ));
            Ok(Outcome::new(
                all_mc,
                l.cap(),
                lines.join("\n"),
                json!({
                    "path": flow.path.to_string(),
                    "iterations": flow.iterations,
                    "endpoint": flow.path.eval(&samples[2]).to_string(),
                }),
            ))
        }
        Command::Lemma1 {
            input,
            n,
            h,
            out,
            homotopy_out,
        } => {
            let (f, n, h) = match loader.read(input)? {
                Document::Request(_) => {
                    if n.is_some() || h.is_some() {
                        return Err(Error::Invalid(
                            "--n and --H conflict with a request document".into(),
                        ));
                    }
                    let r = loader.request(input)?;
                    (r.morphism, r.n, r.h)
                }
                Document::Morphism(_) => {
                    let n = n.ok_or_else(|| {
                        Error::Invalid("--n is required with a morphism document".into())
                    })?;
                    let h = h.as_ref().ok_or_else(|| {
                        Error::Invalid("--H is required with a morphism document".into())
                    })?;
                    (loader.morphism(input)?, n, loader.map(h)?)
                }
                other => {
                    return Err(Error::Invalid(format!(
                        "{} is a {} document, expected morphism or request",
                        input.display(),
                        other.kind()
                    )))
                }
            };
            let req = PerturbationRequest {
                morphism: f.morphism.clone(),
                n,
                h,
            };
            let result = perturb(&req)?;
            let (source_ref, target_ref) = match out {
                Some(o) => (
                    reference_from(o, &f.source_path),
                    reference_from(o, &f.target_path),
                ),
                None => (f.source_ref.clone(), f.target_ref.clone()),
            };
            let doc =
                Document::Morphism(morphism_to_doc(&result.morphism, &source_ref, &target_ref))
                    .to_text();
            if let (Some(hpath), Some(o)) = (homotopy_out, out) {
                let (homotopy, _) = gauge_to_homotopy(&f.morphism, &req.xi()?)?;
                let from = reference_from(hpath, &input_morphism_path(input, &loader)?);
                let to = reference_from(hpath, o);
                let text = Document::Homotopy(homotopy_to_doc(&homotopy, &from, &to)).to_text();
                write_file(hpath, &text)?;
            } else if homotopy_out.is_some() {
                return Err(Error::Invalid("--homotopy-out needs --out".into()));
            }
            let text = result.to_string();
            let mut o = Outcome::new(
                result.report.passes(),
                f.morphism.cap(),
                text,
                json!({
                    "iterations": result.flow.iterations,
                    "quasi_iso_before": result.quasi_iso_before,
                    "quasi_iso_after": result.quasi_iso_after,
                    "document": doc.clone(),
                }),
            );
            o.document = Some((out.clone(), doc));
            Ok(o)
        }
        Command::HomotopyCheck { homotopy } => {
            let h = loader.homotopy(homotopy)?;
            let r = check_homotopy(&h.from.morphism, &h.to.morphism, &h.homotopy)?;
            Ok(Outcome::new(
                r.passes(),
                r.cap,
                r.to_string().trim_end().to_string(),
                json!({
                    "curvature": r.curvature.to_string(),
                    "flow_residual": r.flow_residual.to_string(),
                    "start_matches": r.start_matches,
                    "end_matches": r.end_matches,
                }),
            ))
        }
        Command::ConvolutionMc { morphism } => {
            let f = loader.morphism(morphism)?;
            let u = build_convolution(f.morphism.source(), f.morphism.target())?;
            let alpha = morphism_to_mc(&f.morphism);
            let curv = curvature(&u, &alpha)?;
            let report = check_morphism(&f.morphism);
            let agrees = f.morphism.source().words().iter().all(|w| {
                let expected = report.residual_or_zero(w);
                curv.component(w)
                    .cloned()
                    .unwrap_or_else(|| expected.zero_like())
                    == expected
            });
            let verdict = if curv.is_zero() {
                format!(
                    "alpha_F is Maurer-Cartan up to weight cap {}",
                    f.morphism.cap()
                )
            } else {
                format!(
                    "alpha_F has curvature {curv} up to weight cap {}",
                    f.morphism.cap()
                )
            };
            let text = format!(
                "alpha_F = {alpha}\n{verdict}\ncurvature agrees with the morphism residual: {agrees}"
            );
            Ok(Outcome::new(
                curv.is_zero() && agrees,
                f.morphism.cap(),
                text,
                json!({ "alpha": alpha.to_string(), "curvature": curv.to_string(), "agrees": agrees }),
            ))
        }
    }
}

fn input_morphism_path(input: &Path, loader: &Loader) -> Result<PathBuf> {
    match loader.read(input)? {
        Document::Request(doc) => Ok(input.parent().unwrap_or(Path::new(".")).join(doc.morphism)),
        _ => Ok(input.to_path_buf()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckLinfty { .. } => "check-linfty",
        Command::CheckMorphism { .. } => "check-morphism",
        Command::Cohomology { .. } => "cohomology",
        Command::QuasiIso { .. } => "quasi-iso",
        Command::McCheck { .. } => "mc-check",
        Command::Twist { .. } => "twist",
        Command::GaugeFlow { .. } => "gauge-flow",
        Command::Lemma1 { .. } => "lemma1",
        Command::HomotopyCheck { .. } => "homotopy-check",
        Command::ConvolutionMc { .. } => "convolution-mc",
    }
}

/// Runs one command and returns its exit status.
pub fn run_cli(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let name = command_name(&cli.command);
    match execute(cli) {
        Ok(o) => {
            let code = if o.passed { EXIT_PASS } else { EXIT_FAIL };
            let mut print_report = true;
            if let Some((target, doc)) = &o.document {
                match target {
                    Some(path) => {
                        if let Err(e) = write_file(path, doc) {
                            let _ = writeln!(err, "error: {e}");
                            return EXIT_INPUT;
                        }
                    }
                    None if cli.format == Format::Text => {
                        let _ = write!(out, "{doc}");
                        print_report = false;
                        let _ = writeln!(err, "{}", o.text);
                    }
                    None => {}
                }
            }
            match cli.format {
                Format::Text if print_report => {
                    let _ = writeln!(out, "{}", o.text);
                }
                Format::Text => {}
                Format::Json => {
                    let v = json!({
                        "command": name,
                        "cap": o.cap,
                        "passed": o.passed,
                        "report": o.text,
                        "data": o.data,
                    });
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&v).expect("json values serialize")
                    );
                }
            }
            code
        }
        Err(e) => {
            let code = if e.is_mathematical() {
                EXIT_FAIL
            } else {
                EXIT_INPUT
            };
            match cli.format {
                Format::Text => {
                    let _ = writeln!(err, "{name}: {e}");
                }
                Format::Json => {
                    let v = json!({
                        "command": name,
                        "passed": false,
                        "error": e.to_string(),
                        "mathematical": e.is_mathematical(),
                    });
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&v).expect("json values serialize")
                    );
                }
            }
            code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Usage errors exit with status 2, `--help` and `--version` with 0.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}
