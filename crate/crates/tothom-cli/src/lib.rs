//! Command dispatch for the `tothom` binary.
//!
//! Every invocation runs exactly one [`Command`], reads and fully
//! validates its input files, and produces a canonical JSON report:
//! sorted keys, fixed number formatting, a `"fmt": 1` schema key, and a
//! SHA-256 digest of each file read. Reports are byte-identical across
//! runs for identical inputs and seeds; wall-clock timing is printed to
//! stderr only, so it never perturbs the report bytes.
//!
//! Exit codes: 0 on success, 1 when the posed mathematical question is
//! answered negatively (a validator violation, a non-acyclic verdict, a
//! failed contraction or identification, fuzz-sample failures), 2 when an
//! input cannot be read, parsed, or is used with an unsupported ring.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use tothom::bicomplex::{contract_lt, contract_rt, verify_witness, DoubleComplexWindow, TotCocycle};
use tothom::complexes::{
    cohomology_field, cohomology_fraction_ranks, cohomology_int, cone, ChainMap, CochainComplex,
    CohomologyReport, DegreeCohomology,
};
use tothom::json as tj;
use tothom::novikov::{
    check_tot_sum_is_torus, mapping_torus, novikov_verdict_field, novikov_verdict_int,
    ranicki_check, TorusVar,
};
use tothom::rings::{RingTag, SeriesDir};
use tothom::suites::{torus_field_suite, torus_int_iso_suite, GenShape};
use tothom::{Error, Result};

/// Deterministic generator behind the `fuzz` command: a valid complex and
/// a commuting self-map from a seed and shape parameters.
pub use tothom::gen::random_complex_with_endo as fuzz_generate;

/// One invocation's worth of work.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// Parse a document and run its type's validators.
    Validate { path: PathBuf },
    /// Cohomology of a complex over its own coefficient ring.
    Cohomology { path: PathBuf },
    /// Mapping cone of a chain map.
    Cone { map_path: PathBuf },
    /// Mapping torus of a chain self-map.
    Torus {
        complex_path: PathBuf,
        map_path: PathBuf,
        var: TorusVar,
    },
    /// Directional Novikov acyclicity verdict.
    Novikov { path: PathBuf, dir: SeriesDir },
    /// Both directional verdicts and the finite-domination flag.
    Ranicki { path: PathBuf },
    /// Contract a totalisation cocycle on a double complex window.
    Contract {
        bicomplex_path: PathBuf,
        cocycle_path: PathBuf,
        dir: SeriesDir,
    },
    /// Run the seeded mapping-torus property suite.
    Fuzz {
        seed: u64,
        samples: usize,
        ring: RingTag,
        shape: GenShape,
    },
    /// Check that a torus window totalises to the mapping torus.
    Identify {
        complex_path: PathBuf,
        map_path: PathBuf,
        window: (i64, i64),
    },
}

/// A finished command: the report to print, an optional artifact document
/// (a produced complex or witness) for `--out`, and the exit code (0 or 1).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub artifact: Option<Value>,
    pub exit_code: i32,
}

/// Parses a `--dir` value.
pub fn parse_dir(s: &str) -> Result<SeriesDir> {
    match s {
        "lt" => Ok(SeriesDir::Lt),
        "rt" => Ok(SeriesDir::Rt),
        _ => Err(Error::Parse(format!("--dir must be lt or rt, got {:?}", s))),
    }
}

/// Parses a `--var` value.
pub fn parse_var(s: &str) -> Result<TorusVar> {
    match s {
        "z" => Ok(TorusVar::Z),
        "zinv" => Ok(TorusVar::ZInv),
        _ => Err(Error::Parse(format!("--var must be z or zinv, got {:?}", s))),
    }
}

/// Parses a `--window pLo:pHi` value.
pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("--window must look like pLo:pHi, got {:?}", s)))?;
    let lo = lo
        .parse::<i64>()
        .map_err(|_| Error::Parse(format!("--window bound {:?} is not an integer", lo)))?;
    let hi = hi
        .parse::<i64>()
        .map_err(|_| Error::Parse(format!("--window bound {:?} is not an integer", hi)))?;
    if lo > hi {
        return Err(Error::Parse(format!("--window {}:{} is empty", lo, hi)));
    }
    Ok((lo, hi))
}

/// Any of the document types a file may hold.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Complex(CochainComplex),
    Map(ChainMap),
    Window(DoubleComplexWindow),
    Cocycle(TotCocycle),
}

impl Document {
    fn kind(&self) -> &'static str {
        match self {
            Document::Complex(_) => "complex",
            Document::Map(_) => "chain map",
            Document::Window(_) => "double complex",
            Document::Cocycle(_) => "cocycle",
        }
    }
}

/// Files read during a run, in read order, with their SHA-256 digests;
/// the list is embedded in the report under `"inputs"`.
pub struct Inputs {
    records: Vec<Value>,
}

impl Default for Inputs {
    fn default() -> Inputs {
        Inputs::new()
    }
}

impl Inputs {
    pub fn new() -> Inputs {
        Inputs { records: Vec::new() }
    }

    fn read(&mut self, role: &str, path: &Path) -> Result<Value> {
        let bytes = fs::read(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
        self.records.push(json!({
            "role": role,
            "path": path.display().to_string(),
            "sha256": format!("{:x}", Sha256::digest(&bytes)),
        }));
        let text = String::from_utf8(bytes)
            .map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
        tj::from_str(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
    }

    fn to_value(&self) -> Value {
        Value::Array(self.records.clone())
    }
}

fn load_complex(inputs: &mut Inputs, role: &str, path: &Path) -> Result<CochainComplex> {
    let v = inputs.read(role, path)?;
    tj::complex_from_value(&v).map_err(|e| locate(path, e))
}

/// Loads a chain map document, resolving its source and target complex
/// references relative to the map file's directory.
fn load_map(inputs: &mut Inputs, role: &str, path: &Path) -> Result<ChainMap> {
    let v = inputs.read(role, path)?;
    let (source_ref, target_ref) = tj::chain_map_refs(&v).map_err(|e| locate(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let source = load_complex(inputs, &format!("{}.source", role), &base.join(&source_ref))?;
    let target = if target_ref == source_ref {
        source.clone()
    } else {
        load_complex(inputs, &format!("{}.target", role), &base.join(&target_ref))?
    };
    tj::chain_map_from_value(&v, source, target).map_err(|e| locate(path, e))
}

fn load_window(inputs: &mut Inputs, role: &str, path: &Path) -> Result<DoubleComplexWindow> {
    let v = inputs.read(role, path)?;
    let w = tj::window_from_value(&v).map_err(|e| locate(path, e))?;
    w.verify_laws().map_err(|e| locate(path, e))?;
    Ok(w)
}

fn locate(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {}", path.display(), msg)),
        other => other,
    }
}

/// Detects a document's type from its shape and runs its validators. Used
/// by the `validate` command; other commands load the type they expect.
pub fn parse_input(inputs: &mut Inputs, path: &Path) -> Result<Document> {
    let v = inputs.read("document", path)?;
    let m = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("{}: document must be a JSON object", path.display())))?;
    if m.contains_key("comps") {
        // Re-read through the map loader so the referenced complexes are
        // validated and digested too.
        inputs.records.pop();
        return Ok(Document::Map(load_map(inputs, "document", path)?));
    }
    if m.contains_key("dh") || m.contains_key("dv") || m.contains_key("p_lo") {
        let w = tj::window_from_value(&v).map_err(|e| locate(path, e))?;
        w.verify_laws().map_err(|e| locate(path, e))?;
        return Ok(Document::Window(w));
    }
    if m.contains_key("diff") {
        return Ok(Document::Complex(tj::complex_from_value(&v).map_err(|e| locate(path, e))?));
    }
    if m.contains_key("terms") {
        let ring = tj::embedded_ring(&v, "cocycle")
            .map_err(|e| locate(path, e))?
            .ok_or_else(|| {
                Error::Parse(format!(
                    "{}: a standalone cocycle needs a \"ring\" key",
                    path.display()
                ))
            })?;
        return Ok(Document::Cocycle(
            tj::cocycle_from_value(&v, &ring).map_err(|e| locate(path, e))?,
        ));
    }
    Err(Error::Parse(format!(
        "{}: unrecognized document shape",
        path.display()
    )))
}

/// True for errors that refute the mathematical question a command poses,
/// as opposed to rejecting its inputs.
fn is_refutation(e: &Error) -> bool {
    matches!(
        e,
        Error::ComplexViolation { .. }
            | Error::ChainMapViolation { .. }
            | Error::LawViolation { .. }
            | Error::NotACocycle { .. }
            | Error::ColumnsNotExact { .. }
            | Error::RowsNotExact { .. }
            | Error::NoPreimage { .. }
            | Error::WitnessMismatch { .. }
            | Error::TorusMismatch { .. }
            | Error::DimensionMismatch(_)
            | Error::RingMismatch(_)
    )
}

fn command_echo(cmd: &Command) -> Value {
    let path_str = |p: &PathBuf| p.display().to_string();
    match cmd {
        Command::Validate { path } => json!({ "name": "validate", "path": path_str(path) }),
        Command::Cohomology { path } => json!({ "name": "cohomology", "path": path_str(path) }),
        Command::Cone { map_path } => json!({ "name": "cone", "map": path_str(map_path) }),
        Command::Torus { complex_path, map_path, var } => json!({
            "name": "torus",
            "complex": path_str(complex_path),
            "map": path_str(map_path),
            "var": match var {
                TorusVar::Z => "z",
                TorusVar::ZInv => "zinv",
            },
        }),
        Command::Novikov { path, dir } => json!({
            "name": "novikov",
            "path": path_str(path),
            "dir": dir_str(*dir),
        }),
        Command::Ranicki { path } => json!({ "name": "ranicki", "path": path_str(path) }),
        Command::Contract { bicomplex_path, cocycle_path, dir } => json!({
            "name": "contract",
            "bicomplex": path_str(bicomplex_path),
            "cocycle": path_str(cocycle_path),
            "dir": dir_str(*dir),
        }),
        Command::Fuzz { seed, samples, ring, shape } => json!({
            "name": "fuzz",
            "seed": seed,
            "samples": samples,
            "ring": ring.to_string(),
            "lo": shape.lo,
            "hi": shape.hi,
            "max_rank": shape.max_rank,
        }),
        Command::Identify { complex_path, map_path, window } => json!({
            "name": "identify",
            "complex": path_str(complex_path),
            "map": path_str(map_path),
            "p_lo": window.0,
            "p_hi": window.1,
        }),
    }
}

fn dir_str(dir: SeriesDir) -> &'static str {
    match dir {
        SeriesDir::Lt => "lt",
        SeriesDir::Rt => "rt",
    }
}

fn envelope(cmd: &Command, inputs: &Inputs, ok: bool, result: Value) -> Value {
    json!({
        "fmt": tj::FMT_VERSION,
        "command": command_echo(cmd),
        "inputs": inputs.to_value(),
        "ok": ok,
        "result": result,
    })
}

fn cohomology_report(c: &CochainComplex) -> Result<CohomologyReport> {
    match c.ring() {
        ring if ring.is_field() => cohomology_field(c),
        RingTag::ZZ => cohomology_int(c),
        RingTag::Laurent(_) => {
            let ranks = cohomology_fraction_ranks(c)?;
            let entries: BTreeMap<i64, DegreeCohomology> = ranks
                .into_iter()
                .map(|(n, r)| (n, DegreeCohomology { free_rank: r, torsion: Vec::new() }))
                .collect();
            Ok(CohomologyReport { ring: c.ring().clone(), entries })
        }
        other => Err(Error::UnsupportedRing("cohomology".into(), other.to_string())),
    }
}

/// Ensures `h` is a self-map of exactly the complex loaded from the
/// companion file.
fn require_endo_of(c: &CochainComplex, h: &ChainMap) -> Result<()> {
    if h.source() != h.target() {
        return Err(Error::NotAnEndomorphism(
            "the map file's source and target differ".into(),
        ));
    }
    if h.source() != c {
        return Err(Error::NotAnEndomorphism(
            "the map file's complex differs from the complex file".into(),
        ));
    }
    Ok(())
}

/// Runs one command to completion. `Err` means the inputs could not be
/// read or were unsupported (exit code 2); a mathematically negative
/// answer is a normal [`Outcome`] with exit code 1.
pub fn run(cmd: &Command) -> Result<Outcome> {
    let mut inputs = Inputs::new();
    match cmd {
        Command::Validate { path } => {
            // File and syntax problems propagate as input errors; a
            // validator refutation is this command's own subject.
            match parse_input(&mut inputs, path) {
                Ok(doc) => Ok(Outcome {
                    report: envelope(cmd, &inputs, true, json!({ "valid": true, "kind": doc.kind() })),
                    artifact: None,
                    exit_code: 0,
                }),
                Err(e) if is_refutation(&e) => Ok(Outcome {
                    report: envelope(
                        cmd,
                        &inputs,
                        false,
                        json!({ "valid": false, "violation": e.to_string() }),
                    ),
                    artifact: None,
                    exit_code: 1,
                }),
                Err(e) => Err(e),
            }
        }
        Command::Cohomology { path } => {
            let c = load_complex(&mut inputs, "complex", path)?;
            let report = cohomology_report(&c)?;
            Ok(Outcome {
                report: envelope(cmd, &inputs, true, tj::cohomology_to_value(&report)),
                artifact: None,
                exit_code: 0,
            })
        }
        Command::Cone { map_path } => {
            let f = load_map(&mut inputs, "map", map_path)?;
            let c = cone(&f);
            let doc = tj::complex_to_value(&c);
            Ok(Outcome {
                report: envelope(cmd, &inputs, true, json!({ "complex": doc })),
                artifact: Some(doc),
                exit_code: 0,
            })
        }
        Command::Torus { complex_path, map_path, var } => {
            let c = load_complex(&mut inputs, "complex", complex_path)?;
            let h = load_map(&mut inputs, "map", map_path)?;
            require_endo_of(&c, &h)?;
            let t = mapping_torus(&c, &h, *var)?;
            let doc = tj::complex_to_value(&t);
            Ok(Outcome {
                report: envelope(cmd, &inputs, true, json!({ "complex": doc })),
                artifact: Some(doc),
                exit_code: 0,
            })
        }
        Command::Novikov { path, dir } => {
            let c = load_complex(&mut inputs, "complex", path)?;
            let verdict = match c.ring() {
                RingTag::Laurent(base) if base.is_field() => novikov_verdict_field(&c, *dir)?,
                RingTag::Laurent(base) if **base == RingTag::ZZ => novikov_verdict_int(&c, *dir)?,
                other => {
                    return Err(Error::UnsupportedRing(
                        "the novikov command".into(),
                        other.to_string(),
                    ))
                }
            };
            let ok = !verdict.has_non_acyclic();
            Ok(Outcome {
                report: envelope(cmd, &inputs, ok, tj::verdict_to_value(&verdict)),
                artifact: None,
                exit_code: if ok { 0 } else { 1 },
            })
        }
        Command::Ranicki { path } => {
            let c = load_complex(&mut inputs, "complex", path)?;
            let report = ranicki_check(&c)?;
            let ok = report.finitely_dominated_possible;
            Ok(Outcome {
                report: envelope(cmd, &inputs, ok, tj::ranicki_to_value(&report)),
                artifact: None,
                exit_code: if ok { 0 } else { 1 },
            })
        }
        Command::Contract { bicomplex_path, cocycle_path, dir } => {
            let w = load_window(&mut inputs, "bicomplex", bicomplex_path)?;
            let raw = inputs.read("cocycle", cocycle_path)?;
            let x = tj::cocycle_from_value(&raw, w.ring()).map_err(|e| locate(cocycle_path, e))?;
            let contracted = match dir {
                SeriesDir::Lt => contract_lt(&w, &x),
                SeriesDir::Rt => contract_rt(&w, &x),
            }
            .and_then(|y| verify_witness(&w, &x, &y).map(|()| y));
            match contracted {
                Ok(y) => {
                    let doc = tj::witness_to_value(&y, w.ring());
                    let (lo, hi) = y.verified_range();
                    Ok(Outcome {
                        report: envelope(
                            cmd,
                            &inputs,
                            true,
                            json!({ "witness": doc, "verified_range": [lo, hi] }),
                        ),
                        artifact: Some(doc),
                        exit_code: 0,
                    })
                }
                Err(e) if is_refutation(&e) => Ok(Outcome {
                    report: envelope(cmd, &inputs, false, json!({ "violation": e.to_string() })),
                    artifact: None,
                    exit_code: 1,
                }),
                Err(e) => Err(e),
            }
        }
        Command::Fuzz { seed, samples, ring, shape } => {
            if !ring.is_base() {
                return Err(Error::UnsupportedRing(
                    "the fuzz command".into(),
                    ring.to_string(),
                ));
            }
            let suite = if ring.is_field() {
                torus_field_suite(*seed, *samples, std::slice::from_ref(ring), shape)
            } else {
                torus_int_iso_suite(*seed, *samples, shape)
            };
            let ok = suite.all_ok();
            Ok(Outcome {
                report: envelope(cmd, &inputs, ok, tj::suite_to_value(&suite)),
                artifact: None,
                exit_code: if ok { 0 } else { 1 },
            })
        }
        Command::Identify { complex_path, map_path, window } => {
            let c = load_complex(&mut inputs, "complex", complex_path)?;
            let h = load_map(&mut inputs, "map", map_path)?;
            require_endo_of(&c, &h)?;
            match check_tot_sum_is_torus(&c, &h, window.0, window.1) {
                Ok(()) => Ok(Outcome {
                    report: envelope(cmd, &inputs, true, json!({ "matches": true })),
                    artifact: None,
                    exit_code: 0,
                }),
                Err(Error::TorusMismatch { p, q, part }) => Ok(Outcome {
                    report: envelope(
                        cmd,
                        &inputs,
                        false,
                        json!({ "matches": false, "p": p, "q": q, "part": part }),
                    ),
                    artifact: None,
                    exit_code: 1,
                }),
                Err(e) => Err(e),
            }
        }
    }
}
