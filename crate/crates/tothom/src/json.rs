//! Canonical JSON forms for complexes, maps, windows, cocycles and reports.
//!
//! Documents carry the schema version key `"fmt": 1`. Ring elements use
//! their text forms — decimal for `ZZ`, `a/b` or `a` for `QQ`, a residue
//! in `[0, p)` for `F_p` — and Laurent polynomials are lists of
//! `[exponent, coefficient]` pairs with strictly increasing exponents.
//! Degree keys are stringified (`"0"`, `"-1"`, `"0,-2"` for positions of a
//! double complex). Objects serialize with sorted keys and documents end
//! in a newline, so equal values always print as equal bytes.
//!
//! Parsing splits failures into two kinds: malformed syntax or text forms
//! raise [`Error::Parse`], while structurally well-formed documents that
//! break a mathematical law (a differential that does not square to zero,
//! say) surface the constructor's own error. Callers can branch on the
//! variant to tell bad files from refuted laws.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::bicomplex::{DoubleComplexWindow, TotCocycle, Witness};
use crate::complexes::{ChainMap, CochainComplex, CohomologyReport};
use crate::linalg::Matrix;
use crate::novikov::{Certificate, DegreeVerdict, NovikovVerdict, RanickiReport};
use crate::rings::{Elem, LaurentPoly, RingTag, Scalar, SeriesDir};
use crate::suites::SuiteReport;
use crate::{Error, Result};

/// Schema version written into every document.
pub const FMT_VERSION: u64 = 1;

/// Renders a value with sorted keys, two-space indentation and a trailing
/// newline — the byte form used for golden files and reports.
pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values contain no non-strings");
    s.push('\n');
    s
}

/// Parses a document from text.
pub fn from_str(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {}", e)))
}

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{} must be a JSON object", what)))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::Parse(format!("{} is missing the {:?} key", what, key)))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Parse(format!("{} must be an integer", what)))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    let n = as_i64(v, what)?;
    usize::try_from(n).map_err(|_| Error::Parse(format!("{} must be non-negative", what)))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("{} must be a string", what)))
}

fn check_fmt(m: &Map<String, Value>, what: &str) -> Result<()> {
    match m.get("fmt") {
        None => Ok(()),
        Some(v) if v.as_u64() == Some(FMT_VERSION) => Ok(()),
        Some(v) => Err(Error::Parse(format!(
            "{} declares unsupported fmt {}, expected {}",
            what, v, FMT_VERSION
        ))),
    }
}

/// Parses a ring name: `ZZ`, `QQ`, `F<p>`, or `<base>[z,z^-1]`.
pub fn ring_from_str(s: &str) -> Result<RingTag> {
    if let Some(base) = s.strip_suffix("[z,z^-1]") {
        let base = ring_from_str(base)?;
        return RingTag::laurent(base);
    }
    match s {
        "ZZ" => Ok(RingTag::ZZ),
        "QQ" => Ok(RingTag::QQ),
        _ => match s.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
            Some(p) => RingTag::fp(p),
            None => Err(Error::Parse(format!("unknown ring {:?}", s))),
        },
    }
}

fn laurent_to_value(f: &LaurentPoly) -> Value {
    Value::Array(
        f.terms()
            .map(|(e, c)| json!([e, c.to_string()]))
            .collect(),
    )
}

/// Serializes one matrix entry: a text scalar, or an exponent/coefficient
/// pair list for Laurent rings.
pub fn elem_to_value(e: &Elem) -> Value {
    match e {
        Elem::Scalar(s) => Value::String(s.to_string()),
        Elem::Laurent(f) => laurent_to_value(f),
    }
}

/// Parses one matrix entry of the given ring.
pub fn elem_from_value(v: &Value, ring: &RingTag, what: &str) -> Result<Elem> {
    match ring {
        RingTag::Laurent(base) => {
            let pairs = v
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{} must be a list of [exponent, coefficient] pairs", what)))?;
            let mut terms = Vec::with_capacity(pairs.len());
            let mut last: Option<i64> = None;
            for pair in pairs {
                let pair = pair
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse(format!("{}: each term must be an [exponent, coefficient] pair", what)))?;
                let exp = as_i64(&pair[0], &format!("{}: exponent", what))?;
                if last.is_some_and(|prev| prev >= exp) {
                    return Err(Error::Parse(format!(
                        "{}: exponents must be strictly increasing",
                        what
                    )));
                }
                last = Some(exp);
                let coeff = Scalar::parse(as_str(&pair[1], &format!("{}: coefficient", what))?, base)?;
                terms.push((exp, coeff));
            }
            Ok(Elem::Laurent(LaurentPoly::from_terms(terms)))
        }
        base => Ok(Elem::Scalar(Scalar::parse(as_str(v, what)?, base)?)),
    }
}

/// Serializes a matrix as `{"rows", "cols", "entries"}` with row-major
/// entry lists. The ring is carried by the enclosing document.
pub fn matrix_to_value(m: &Matrix) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| elem_to_value(m.get(i, j))).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

/// Parses a matrix over the given ring, checking the declared shape.
pub fn matrix_from_value(v: &Value, ring: &RingTag, what: &str) -> Result<Matrix> {
    let m = obj(v, what)?;
    let rows = as_usize(field(m, "rows", what)?, &format!("{}: rows", what))?;
    let cols = as_usize(field(m, "cols", what)?, &format!("{}: cols", what))?;
    let entries = field(m, "entries", what)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{}: entries must be a list of rows", what)))?;
    if entries.len() != rows {
        return Err(Error::Parse(format!(
            "{}: declared {} rows but entries has {}",
            what,
            rows,
            entries.len()
        )));
    }
    let mut out = Matrix::zero(ring.clone(), rows, cols);
    for (i, row) in entries.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("{}: row {} must be a list", what, i)))?;
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "{}: declared {} cols but row {} has {}",
                what,
                cols,
                i,
                row.len()
            )));
        }
        for (j, cell) in row.iter().enumerate() {
            out.set(i, j, elem_from_value(cell, ring, &format!("{}[{},{}]", what, i, j))?);
        }
    }
    Ok(out)
}

fn degree_key(v: i64) -> String {
    v.to_string()
}

fn parse_degree(key: &str, what: &str) -> Result<i64> {
    key.parse::<i64>()
        .map_err(|_| Error::Parse(format!("{}: {:?} is not a degree", what, key)))
}

fn position_key(p: i64, q: i64) -> String {
    format!("{},{}", p, q)
}

fn parse_position(key: &str, what: &str) -> Result<(i64, i64)> {
    let (p, q) = key
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("{}: {:?} is not a \"p,q\" position", what, key)))?;
    Ok((parse_degree(p, what)?, parse_degree(q, what)?))
}

/// Serializes a complex as
/// `{"fmt", "ring", "lo", "hi", "ranks": {deg: n}, "diff": {deg: Matrix}}`.
pub fn complex_to_value(c: &CochainComplex) -> Value {
    let ranks: Map<String, Value> = c
        .ranks()
        .iter()
        .map(|(n, r)| (degree_key(*n), json!(r)))
        .collect();
    let diff: Map<String, Value> = c
        .diffs()
        .iter()
        .map(|(n, d)| (degree_key(*n), matrix_to_value(d)))
        .collect();
    json!({
        "fmt": FMT_VERSION,
        "ring": c.ring().to_string(),
        "lo": c.lo(),
        "hi": c.hi(),
        "ranks": ranks,
        "diff": diff,
    })
}

/// Parses and fully validates a complex document. The declared `lo`/`hi`
/// must match the support of the declared ranks.
pub fn complex_from_value(v: &Value) -> Result<CochainComplex> {
    let m = obj(v, "complex")?;
    check_fmt(m, "complex")?;
    let ring = ring_from_str(as_str(field(m, "ring", "complex")?, "complex: ring")?)?;
    let lo = as_i64(field(m, "lo", "complex")?, "complex: lo")?;
    let hi = as_i64(field(m, "hi", "complex")?, "complex: hi")?;
    let mut ranks = BTreeMap::new();
    for (key, val) in obj(field(m, "ranks", "complex")?, "complex: ranks")? {
        let n = parse_degree(key, "complex: ranks")?;
        ranks.insert(n, as_usize(val, &format!("complex: rank at {}", n))?);
    }
    let mut diffs = BTreeMap::new();
    for (key, val) in obj(field(m, "diff", "complex")?, "complex: diff")? {
        let n = parse_degree(key, "complex: diff")?;
        diffs.insert(n, matrix_from_value(val, &ring, &format!("complex: diff at {}", n))?);
    }
    let c = CochainComplex::new(ring, ranks, diffs)?;
    if (c.lo(), c.hi()) != (lo, hi) {
        return Err(Error::Parse(format!(
            "declared degree window [{}, {}] disagrees with the ranks' support [{}, {}]",
            lo,
            hi,
            c.lo(),
            c.hi()
        )));
    }
    Ok(c)
}

/// Serializes a chain map as `{"fmt", "source", "target", "comps"}`, where
/// `source` and `target` are references (paths) to complex documents.
pub fn chain_map_to_value(f: &ChainMap, source_ref: &str, target_ref: &str) -> Value {
    let comps: Map<String, Value> = f
        .comps()
        .iter()
        .map(|(n, m)| (degree_key(*n), matrix_to_value(m)))
        .collect();
    json!({
        "fmt": FMT_VERSION,
        "source": source_ref,
        "target": target_ref,
        "comps": comps,
    })
}

/// Reads the source and target references of a chain map document.
pub fn chain_map_refs(v: &Value) -> Result<(String, String)> {
    let m = obj(v, "chain map")?;
    check_fmt(m, "chain map")?;
    let source = as_str(field(m, "source", "chain map")?, "chain map: source")?;
    let target = as_str(field(m, "target", "chain map")?, "chain map: target")?;
    Ok((source.into(), target.into()))
}

/// Parses the components of a chain map document against already-loaded
/// source and target complexes, and validates the chain-map laws.
pub fn chain_map_from_value(
    v: &Value,
    source: CochainComplex,
    target: CochainComplex,
) -> Result<ChainMap> {
    let m = obj(v, "chain map")?;
    check_fmt(m, "chain map")?;
    let ring = source.ring().clone();
    let mut comps = BTreeMap::new();
    for (key, val) in obj(field(m, "comps", "chain map")?, "chain map: comps")? {
        let n = parse_degree(key, "chain map: comps")?;
        comps.insert(n, matrix_from_value(val, &ring, &format!("chain map: comp at {}", n))?);
    }
    ChainMap::new(source, target, comps)
}

/// Serializes a double complex window; ranks and differentials are keyed
/// by `"p,q"` positions. Mapping-torus metadata, when present, appears
/// under the optional `"torus_ranks"` key and is re-validated on load.
pub fn window_to_value(w: &DoubleComplexWindow) -> Value {
    let ranks: Map<String, Value> = w
        .ranks()
        .iter()
        .map(|((p, q), r)| (position_key(*p, *q), json!(r)))
        .collect();
    let grid = |map: &BTreeMap<(i64, i64), Matrix>| -> Map<String, Value> {
        map.iter()
            .map(|((p, q), m)| (position_key(*p, *q), matrix_to_value(m)))
            .collect()
    };
    let (p_lo, p_hi) = w.p_window();
    let (q_lo, q_hi) = w.q_window();
    let mut out = json!({
        "fmt": FMT_VERSION,
        "ring": w.ring().to_string(),
        "p_lo": p_lo,
        "p_hi": p_hi,
        "q_lo": q_lo,
        "q_hi": q_hi,
        "ranks": ranks,
        "dh": grid(w.dh_map()),
        "dv": grid(w.dv_map()),
    });
    if let Some(tr) = w.torus_ranks() {
        let tr: Map<String, Value> = tr.iter().map(|(n, r)| (degree_key(*n), json!(r))).collect();
        out["torus_ranks"] = Value::Object(tr);
    }
    out
}

/// Parses and fully validates a double complex window document.
pub fn window_from_value(v: &Value) -> Result<DoubleComplexWindow> {
    let m = obj(v, "double complex")?;
    check_fmt(m, "double complex")?;
    let ring = ring_from_str(as_str(field(m, "ring", "double complex")?, "double complex: ring")?)?;
    let bound = |key: &str| -> Result<i64> {
        as_i64(field(m, key, "double complex")?, &format!("double complex: {}", key))
    };
    let (p_lo, p_hi) = (bound("p_lo")?, bound("p_hi")?);
    let (q_lo, q_hi) = (bound("q_lo")?, bound("q_hi")?);
    let mut ranks = BTreeMap::new();
    for (key, val) in obj(field(m, "ranks", "double complex")?, "double complex: ranks")? {
        let pos = parse_position(key, "double complex: ranks")?;
        ranks.insert(pos, as_usize(val, &format!("double complex: rank at {}", key))?);
    }
    let grid = |name: &str| -> Result<BTreeMap<(i64, i64), Matrix>> {
        let mut out = BTreeMap::new();
        for (key, val) in obj(field(m, name, "double complex")?, &format!("double complex: {}", name))? {
            let pos = parse_position(key, &format!("double complex: {}", name))?;
            out.insert(
                pos,
                matrix_from_value(val, &ring, &format!("double complex: {} at {}", name, key))?,
            );
        }
        Ok(out)
    };
    let dh = grid("dh")?;
    let dv = grid("dv")?;
    let w = DoubleComplexWindow::new(ring, (p_lo, p_hi), (q_lo, q_hi), ranks, dh, dv)?;
    match m.get("torus_ranks") {
        None => Ok(w),
        Some(v) => {
            let mut tr = BTreeMap::new();
            for (key, val) in obj(v, "double complex: torus_ranks")? {
                let n = parse_degree(key, "double complex: torus_ranks")?;
                tr.insert(n, as_usize(val, &format!("double complex: torus rank at {}", n))?);
            }
            w.with_torus_ranks(tr)
        }
    }
}

fn terms_to_value(terms: &BTreeMap<i64, Vec<Elem>>) -> Map<String, Value> {
    terms
        .iter()
        .map(|(p, v)| {
            (
                degree_key(*p),
                Value::Array(v.iter().map(elem_to_value).collect()),
            )
        })
        .collect()
}

/// Serializes a total cocycle as `{"fmt", "ring", "n", "terms": {p: vector}}`.
/// The ring key lets the document be parsed standing alone; when a cocycle
/// is read against a double complex the two rings must agree.
pub fn cocycle_to_value(x: &TotCocycle, ring: &RingTag) -> Value {
    json!({
        "fmt": FMT_VERSION,
        "ring": ring.to_string(),
        "n": x.n(),
        "terms": terms_to_value(x.comps()),
    })
}

/// Reads the optional embedded `"ring"` key of a document.
pub fn embedded_ring(v: &Value, what: &str) -> Result<Option<RingTag>> {
    match obj(v, what)?.get("ring") {
        None => Ok(None),
        Some(r) => Ok(Some(ring_from_str(as_str(r, &format!("{}: ring", what))?)?)),
    }
}

/// Parses a total cocycle over the given ring (normally the ring of the
/// double complex the cocycle lives on). A mismatching embedded ring key
/// is rejected.
pub fn cocycle_from_value(v: &Value, ring: &RingTag) -> Result<TotCocycle> {
    let m = obj(v, "cocycle")?;
    check_fmt(m, "cocycle")?;
    if let Some(embedded) = embedded_ring(v, "cocycle")? {
        if embedded != *ring {
            return Err(Error::Parse(format!(
                "cocycle is declared over {} but is being read over {}",
                embedded, ring
            )));
        }
    }
    let n = as_i64(field(m, "n", "cocycle")?, "cocycle: n")?;
    let mut terms = BTreeMap::new();
    for (key, val) in obj(field(m, "terms", "cocycle")?, "cocycle: terms")? {
        let p = parse_degree(key, "cocycle: terms")?;
        let vec = val
            .as_array()
            .ok_or_else(|| Error::Parse(format!("cocycle: term at {} must be a vector", p)))?
            .iter()
            .enumerate()
            .map(|(i, cell)| elem_from_value(cell, ring, &format!("cocycle: terms[{}][{}]", p, i)))
            .collect::<Result<Vec<Elem>>>()?;
        terms.insert(p, vec);
    }
    Ok(TotCocycle::new(n, terms))
}

/// Serializes a contraction witness in the same shape as a cocycle.
pub fn witness_to_value(y: &Witness, ring: &RingTag) -> Value {
    json!({
        "fmt": FMT_VERSION,
        "ring": ring.to_string(),
        "n": y.n(),
        "terms": terms_to_value(y.terms()),
    })
}

/// Serializes a cohomology report with per-degree free ranks and torsion
/// invariant lists (decimal strings).
pub fn cohomology_to_value(r: &CohomologyReport) -> Value {
    let entries: Map<String, Value> = r
        .entries
        .iter()
        .map(|(n, h)| {
            let torsion: Vec<Value> = h.torsion.iter().map(|t| json!(t.to_string())).collect();
            (
                degree_key(*n),
                json!({ "free_rank": h.free_rank, "torsion": torsion }),
            )
        })
        .collect();
    json!({ "ring": r.ring.to_string(), "entries": entries })
}

fn dir_str(dir: SeriesDir) -> &'static str {
    match dir {
        SeriesDir::Lt => "lt",
        SeriesDir::Rt => "rt",
    }
}

fn certificate_to_value(c: &Certificate) -> Value {
    match c {
        Certificate::UnitDet { det, pivot_exp, pivot_coeff } => json!({
            "kind": "unit_det",
            "det": laurent_to_value(det),
            "pivot_exp": pivot_exp,
            "pivot_coeff": pivot_coeff.to_string(),
        }),
        Certificate::InjectiveDet { det } => json!({
            "kind": "injective_det",
            "det": laurent_to_value(det),
        }),
        Certificate::FieldRanks { module_rank, rank_d_in, rank_d_out } => json!({
            "kind": "field_ranks",
            "module_rank": module_rank,
            "rank_d_in": rank_d_in,
            "rank_d_out": rank_d_out,
        }),
        Certificate::ZeroModule => json!({ "kind": "zero_module" }),
    }
}

/// Serializes a directional acyclicity verdict with per-degree statuses,
/// certificate payloads and reason strings.
pub fn verdict_to_value(v: &NovikovVerdict) -> Value {
    let per_degree: Map<String, Value> = v
        .per_degree()
        .iter()
        .map(|(n, d)| {
            let body = match d {
                DegreeVerdict::Acyclic(c) => json!({
                    "status": "acyclic",
                    "certificate": certificate_to_value(c),
                }),
                DegreeVerdict::NonAcyclic(w) => json!({
                    "status": "non_acyclic",
                    "reason": w.reason,
                    "presentation": w.presentation,
                }),
                DegreeVerdict::Inconclusive(reason) => json!({
                    "status": "inconclusive",
                    "reason": reason,
                }),
            };
            (degree_key(*n), body)
        })
        .collect();
    let ring_name = match v.ring() {
        RingTag::Laurent(base) => crate::novikov::novikov_ring_name(base, v.dir()),
        other => other.to_string(),
    };
    json!({
        "dir": dir_str(v.dir()),
        "ring": ring_name,
        "acyclic": v.is_acyclic(),
        "per_degree": per_degree,
    })
}

/// Serializes the two-directional finite-domination report.
pub fn ranicki_to_value(r: &RanickiReport) -> Value {
    json!({
        "pos": verdict_to_value(&r.pos),
        "neg": verdict_to_value(&r.neg),
        "finitely_dominated_possible": r.finitely_dominated_possible,
    })
}

/// Serializes a suite run with its per-sample outcomes.
pub fn suite_to_value(r: &SuiteReport) -> Value {
    let samples: Vec<Value> = r
        .samples
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "seed": s.seed,
                "ok": s.ok,
                "detail": s.detail,
            })
        })
        .collect();
    json!({
        "name": r.name,
        "ok": r.all_ok(),
        "failures": r.failure_count(),
        "samples": samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::cohomology_field;
    use crate::novikov::{mapping_torus, novikov_verdict_int, ranicki_check, TorusVar};
    use crate::rings::SeriesDir;

    fn laurent_ring() -> RingTag {
        RingTag::laurent(RingTag::ZZ).unwrap()
    }

    fn two_minus_z_complex() -> CochainComplex {
        let ring = laurent_ring();
        let d = Matrix::from_rows(
            ring.clone(),
            vec![vec![Elem::Laurent(LaurentPoly::from_terms(vec![
                (0, Scalar::int(2)),
                (1, Scalar::int(-1)),
            ]))]],
        )
        .unwrap();
        CochainComplex::new(
            ring,
            BTreeMap::from([(-1, 1), (0, 1)]),
            BTreeMap::from([(-1, d)]),
        )
        .unwrap()
    }

    #[test]
    fn ring_names_round_trip() {
        for ring in [
            RingTag::ZZ,
            RingTag::QQ,
            RingTag::Fp(7),
            RingTag::laurent(RingTag::Fp(5)).unwrap(),
        ] {
            assert_eq!(ring_from_str(&ring.to_string()).unwrap(), ring);
        }
        assert!(matches!(ring_from_str("F9"), Err(Error::NotPrime(9))));
        assert!(matches!(ring_from_str("R"), Err(Error::Parse(_))));
        assert!(matches!(
            ring_from_str("ZZ[z,z^-1][z,z^-1]"),
            Err(Error::NestedLaurent)
        ));
    }

    #[test]
    fn matrices_round_trip_over_each_ring() {
        let cases = vec![
            Matrix::from_rows(
                RingTag::QQ,
                vec![
                    vec![Elem::Scalar(Scalar::rat(1, 2)), Elem::Scalar(Scalar::rat(-3, 1))],
                    vec![Elem::Scalar(Scalar::rat(0, 1)), Elem::Scalar(Scalar::rat(7, 5))],
                ],
            )
            .unwrap(),
            Matrix::from_rows(
                RingTag::Fp(5),
                vec![vec![Elem::Scalar(Scalar::fp(5, 3)), Elem::Scalar(Scalar::fp(5, 0))]],
            )
            .unwrap(),
            Matrix::zero(RingTag::ZZ, 0, 2),
            Matrix::from_rows(
                laurent_ring(),
                vec![vec![Elem::Laurent(LaurentPoly::from_terms(vec![
                    (-2, Scalar::int(3)),
                    (1, Scalar::int(-1)),
                ]))]],
            )
            .unwrap(),
        ];
        for m in cases {
            let v = matrix_to_value(&m);
            let back = matrix_from_value(&v, m.ring(), "test").unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn laurent_entries_must_have_increasing_exponents() {
        let v = json!({ "rows": 1, "cols": 1, "entries": [[[[1, "2"], [0, "1"]]]] });
        let err = matrix_from_value(&v, &laurent_ring(), "test").unwrap_err();
        assert!(matches!(err, Error::Parse(ref s) if s.contains("strictly increasing")));
    }

    #[test]
    fn matrix_shape_must_match_entries() {
        let v = json!({ "rows": 2, "cols": 1, "entries": [["3"]] });
        assert!(matches!(
            matrix_from_value(&v, &RingTag::ZZ, "test"),
            Err(Error::Parse(_))
        ));
        let v = json!({ "rows": 1, "cols": 2, "entries": [["3"]] });
        assert!(matches!(
            matrix_from_value(&v, &RingTag::ZZ, "test"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn complexes_round_trip() {
        let c = two_minus_z_complex();
        let v = complex_to_value(&c);
        assert_eq!(complex_from_value(&v).unwrap(), c);
        let zero = CochainComplex::zero_complex(RingTag::QQ);
        let v = complex_to_value(&zero);
        assert_eq!(complex_from_value(&v).unwrap(), zero);
    }

    #[test]
    fn declared_window_must_match_support() {
        let mut v = complex_to_value(&two_minus_z_complex());
        v["hi"] = json!(4);
        assert!(matches!(complex_from_value(&v), Err(Error::Parse(_))));
    }

    #[test]
    fn law_violations_are_not_parse_errors() {
        let d = json!({ "rows": 1, "cols": 1, "entries": [["1"]] });
        let v = json!({
            "fmt": 1,
            "ring": "ZZ",
            "lo": 0,
            "hi": 2,
            "ranks": { "0": 1, "1": 1, "2": 1 },
            "diff": { "0": d, "1": d },
        });
        assert!(matches!(
            complex_from_value(&v),
            Err(Error::ComplexViolation { degree: 0, .. })
        ));
    }

    #[test]
    fn chain_maps_round_trip() {
        let c = two_minus_z_complex();
        let id = ChainMap::new(
            c.clone(),
            c.clone(),
            BTreeMap::from([
                (-1, Matrix::identity(laurent_ring(), 1)),
                (0, Matrix::identity(laurent_ring(), 1)),
            ]),
        )
        .unwrap();
        let v = chain_map_to_value(&id, "c.json", "c.json");
        assert_eq!(chain_map_refs(&v).unwrap(), ("c.json".into(), "c.json".into()));
        let back = chain_map_from_value(&v, c.clone(), c.clone()).unwrap();
        assert_eq!(back.comps(), id.comps());
    }

    #[test]
    fn windows_and_cocycles_round_trip() {
        use crate::bicomplex::torus_bicomplex;
        let ring = RingTag::Fp(5);
        let c = CochainComplex::new(
            ring.clone(),
            BTreeMap::from([(0, 1), (1, 1)]),
            BTreeMap::from([(
                0,
                Matrix::from_rows(ring.clone(), vec![vec![Elem::Scalar(Scalar::fp(5, 2))]]).unwrap(),
            )]),
        )
        .unwrap();
        let h = ChainMap::new(
            c.clone(),
            c.clone(),
            BTreeMap::from([
                (0, Matrix::identity(ring.clone(), 1)),
                (1, Matrix::identity(ring.clone(), 1)),
            ]),
        )
        .unwrap();
        let w = torus_bicomplex(&c, &h, -2, 1).unwrap();
        let v = window_to_value(&w);
        assert_eq!(window_from_value(&v).unwrap(), w);

        let mut tampered = v.clone();
        tampered["torus_ranks"]["0"] = json!(2);
        assert!(matches!(
            window_from_value(&tampered),
            Err(Error::TorusMismatch { .. })
        ));

        let x = TotCocycle::new(
            0,
            BTreeMap::from([(-1, vec![Elem::Scalar(Scalar::fp(5, 1)), Elem::Scalar(Scalar::fp(5, 0))])]),
        );
        let xv = cocycle_to_value(&x, &ring);
        assert_eq!(cocycle_from_value(&xv, &ring).unwrap(), x);
        assert_eq!(embedded_ring(&xv, "cocycle").unwrap(), Some(ring.clone()));
        assert!(matches!(
            cocycle_from_value(&xv, &RingTag::QQ),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn canonical_bytes_are_stable() {
        let c = two_minus_z_complex();
        let a = to_canonical_string(&complex_to_value(&c));
        let b = to_canonical_string(&complex_to_value(&c));
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
        let m = Matrix::identity(RingTag::ZZ, 1);
        assert_eq!(
            to_canonical_string(&matrix_to_value(&m)),
            "{\n  \"cols\": 1,\n  \"entries\": [\n    [\n      \"1\"\n    ]\n  ],\n  \"rows\": 1\n}\n"
        );
    }

    #[test]
    fn reports_serialize_with_expected_fields() {
        let base = CochainComplex::new(
            RingTag::ZZ,
            BTreeMap::from([(0, 1)]),
            BTreeMap::new(),
        )
        .unwrap();
        let double = ChainMap::new(
            base.clone(),
            base.clone(),
            BTreeMap::from([(0, Matrix::from_rows(RingTag::ZZ, vec![vec![Elem::Scalar(Scalar::int(2))]]).unwrap())]),
        )
        .unwrap();
        let t = mapping_torus(&base, &double, TorusVar::Z).unwrap();
        let verdict = novikov_verdict_int(&t, SeriesDir::Rt).unwrap();
        let vv = verdict_to_value(&verdict);
        assert_eq!(vv["dir"], "rt");
        assert_eq!(vv["acyclic"], true);
        assert_eq!(vv["per_degree"]["-1"]["status"], "acyclic");
        assert_eq!(vv["per_degree"]["-1"]["certificate"]["kind"], "unit_det");

        let rep = ranicki_to_value(&ranicki_check(&t).unwrap());
        assert_eq!(rep["finitely_dominated_possible"], false);
        assert_eq!(rep["pos"]["dir"], "lt");
        assert_eq!(rep["neg"]["dir"], "rt");

        let coh = cohomology_to_value(&cohomology_field(&{
            let ring = RingTag::Fp(2);
            CochainComplex::new(ring, BTreeMap::from([(0, 2)]), BTreeMap::new()).unwrap()
        })
        .unwrap());
        assert_eq!(coh["entries"]["0"]["free_rank"], 2);

        let suite = crate::suites::torus_int_iso_suite(1, 2, &crate::suites::GenShape::default());
        let sv = suite_to_value(&suite);
        assert_eq!(sv["ok"], true);
        assert_eq!(sv["samples"].as_array().unwrap().len(), 2);
    }
}
