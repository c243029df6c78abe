//! Mapping tori and Novikov cohomology.
//!
//! The mapping torus of a chain self-map `h` of a complex over a base ring
//! `R` is the cone of `h - z·id` over `R[z,z⁻¹]`. Base-changing to one of
//! the two Novikov rings — power series `R((z))` going left-to-right, or
//! `R((z⁻¹))` going right-to-left — asks whether the torus is acyclic in
//! that direction. Over field coefficients the answer is an exact rank
//! computation; over `ZZ` it is certified by unit determinants where
//! possible and reported as inconclusive otherwise. The module also houses
//! the coefficientwise isomorphisms [`phi_free`] / [`phi_fp`] between
//! `M ⊗ ZZ((z))` and series with coefficients in `M`, the expansion check
//! [`check_tot_sum_is_torus`] identifying the torus with the totalisation
//! of its column grid, and [`ranicki_check`], the necessary condition for
//! finite domination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::bicomplex::{torus_bicomplex, DoubleComplexWindow};
use crate::complexes::{
    cohomology_fraction_ranks, cone, ChainMap, CochainComplex, CohomologyReport, DegreeCohomology,
};
use crate::linalg::{det, inverse_unimodular, rank, smith_normal_form, Matrix};
use crate::rings::{novikov_unit, Elem, LaurentPoly, RingTag, Scalar, SeriesDir, SeriesWindow};
use crate::{Error, Result};

/// Which variable the torus differential subtracts: `h - z·id` or
/// `h - z⁻¹·id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusVar {
    Z,
    ZInv,
}

impl TorusVar {
    /// Exponent of the subtracted monomial.
    pub fn exponent(&self) -> i64 {
        match self {
            TorusVar::Z => 1,
            TorusVar::ZInv => -1,
        }
    }

    /// Lower-case name used in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            TorusVar::Z => "z",
            TorusVar::ZInv => "z_inv",
        }
    }
}

/// Display name of the Novikov ring over `base` in the given direction.
pub fn novikov_ring_name(base: &RingTag, dir: SeriesDir) -> String {
    match dir {
        SeriesDir::Lt => format!("{}((z))", base),
        SeriesDir::Rt => format!("{}((z^-1))", base),
    }
}

/// Mapping torus of a chain self-map: the cone of `h - z^±·id` over the
/// Laurent ring of the base.
///
/// Degree `n` of the torus is `C^{n+1} ⊕ C^n` with differential blocks
/// `[[-d, 0], [h - z·id, d]]`.
pub fn mapping_torus(
    c: &CochainComplex,
    h: &ChainMap,
    var: TorusVar,
) -> Result<CochainComplex> {
    if h.source() != c || h.target() != c {
        return Err(Error::NotAnEndomorphism(
            "the mapping torus needs a chain self-map of the given complex".into(),
        ));
    }
    let lring = RingTag::laurent(c.ring().clone())?;
    let cl = c.base_change(&lring)?;
    let hl = h.base_change(&lring)?;
    let z = Elem::Laurent(LaurentPoly::monomial(
        var.exponent(),
        Scalar::one(c.ring()),
    ));
    let comps: BTreeMap<i64, Matrix> = cl
        .ranks()
        .iter()
        .map(|(&n, &r)| {
            let shifted = hl.comp(n).sub(&Matrix::scalar_diag(lring.clone(), r, &z));
            (n, shifted)
        })
        .collect();
    let g = ChainMap::new(cl.clone(), cl, comps)
        .expect("h - z·id commutes with the differential whenever h does");
    Ok(cone(&g))
}

/// Re-checkable reason one degree is acyclic over a Novikov ring.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// The relevant square map has unit determinant; the pivot term can be
    /// re-tested with `novikov_unit`.
    UnitDet {
        det: LaurentPoly,
        pivot_exp: i64,
        pivot_coeff: Scalar,
    },
    /// The incoming square map has nonzero determinant over an integral
    /// domain, hence is injective.
    InjectiveDet { det: LaurentPoly },
    /// Exact dimension count over the Novikov field:
    /// `module_rank - rank_d_out - rank_d_in = 0`.
    FieldRanks {
        module_rank: usize,
        rank_d_in: usize,
        rank_d_out: usize,
    },
    /// Nothing lives at this degree.
    ZeroModule,
}

/// Description of a degree whose Novikov cohomology is provably nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct NonAcyclicWitness {
    /// Why the degree cannot vanish.
    pub reason: String,
    /// Presentation of the offending module, when one is available.
    pub presentation: Option<String>,
}

/// Verdict for a single degree.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeVerdict {
    Acyclic(Certificate),
    NonAcyclic(NonAcyclicWitness),
    Inconclusive(String),
}

/// Per-degree acyclicity verdict for a complex over the Novikov ring in one
/// direction.
#[derive(Debug, Clone, PartialEq)]
pub struct NovikovVerdict {
    dir: SeriesDir,
    ring: RingTag,
    per_degree: BTreeMap<i64, DegreeVerdict>,
}

impl NovikovVerdict {
    /// Series direction the verdict is about.
    pub fn dir(&self) -> SeriesDir {
        self.dir
    }

    /// Laurent ring of the judged complex.
    pub fn ring(&self) -> &RingTag {
        &self.ring
    }

    /// Verdicts by degree.
    pub fn per_degree(&self) -> &BTreeMap<i64, DegreeVerdict> {
        &self.per_degree
    }

    /// True when every degree carries an acyclicity certificate.
    pub fn is_acyclic(&self) -> bool {
        self.per_degree
            .values()
            .all(|v| matches!(v, DegreeVerdict::Acyclic(_)))
    }

    /// True when some degree is provably non-acyclic.
    pub fn has_non_acyclic(&self) -> bool {
        self.per_degree
            .values()
            .any(|v| matches!(v, DegreeVerdict::NonAcyclic(_)))
    }

    /// True when some degree could not be decided.
    pub fn has_inconclusive(&self) -> bool {
        self.per_degree
            .values()
            .any(|v| matches!(v, DegreeVerdict::Inconclusive(_)))
    }
}

fn require_laurent_base(c: &CochainComplex, op: &str) -> Result<RingTag> {
    match c.ring() {
        RingTag::Laurent(inner) => Ok((**inner).clone()),
        other => Err(Error::UnsupportedRing(op.to_string(), other.to_string())),
    }
}

/// Cohomology dimensions after base change to the Novikov field of a field
/// base.
///
/// Both Novikov fields contain the rational function field `k(z)`, over
/// which the dimensions are computed by fraction-free rank; flat base
/// change then gives the dimensions over either Novikov field, so the
/// report does not depend on the direction. The unused parameter records
/// which ring the caller asked about.
pub fn novikov_cohomology_field(
    b: &CochainComplex,
    _dir: SeriesDir,
) -> Result<CohomologyReport> {
    let base = require_laurent_base(b, "novikov_cohomology_field")?;
    if !base.is_field() {
        return Err(Error::NotAField(
            "novikov_cohomology_field".into(),
            b.ring().to_string(),
        ));
    }
    let entries = cohomology_fraction_ranks(b)?
        .into_iter()
        .map(|(n, dim)| {
            (
                n,
                DegreeCohomology {
                    free_rank: dim,
                    torsion: vec![],
                },
            )
        })
        .collect();
    Ok(CohomologyReport {
        ring: b.ring().clone(),
        entries,
    })
}

/// Per-degree verdict over a field base, with rank data as certificates.
pub fn novikov_verdict_field(b: &CochainComplex, dir: SeriesDir) -> Result<NovikovVerdict> {
    let base = require_laurent_base(b, "novikov_verdict_field")?;
    if !base.is_field() {
        return Err(Error::NotAField(
            "novikov_verdict_field".into(),
            b.ring().to_string(),
        ));
    }
    let mut per_degree = BTreeMap::new();
    if !b.is_zero_complex() {
        let mut rank_d = BTreeMap::new();
        for n in (b.lo() - 1)..=b.hi() {
            rank_d.insert(n, rank(&b.d(n))?);
        }
        for n in b.lo()..=b.hi() {
            let r = b.rank(n);
            if r == 0 {
                per_degree.insert(n, DegreeVerdict::Acyclic(Certificate::ZeroModule));
                continue;
            }
            let rank_d_in = rank_d[&(n - 1)];
            let rank_d_out = rank_d[&n];
            let dim = r - rank_d_out - rank_d_in;
            let verdict = if dim == 0 {
                DegreeVerdict::Acyclic(Certificate::FieldRanks {
                    module_rank: r,
                    rank_d_in,
                    rank_d_out,
                })
            } else {
                DegreeVerdict::NonAcyclic(NonAcyclicWitness {
                    reason: format!(
                        "H^{} has dimension {} over {}",
                        n,
                        dim,
                        novikov_ring_name(&base, dir)
                    ),
                    presentation: None,
                })
            };
            per_degree.insert(n, verdict);
        }
    }
    Ok(NovikovVerdict {
        dir,
        ring: b.ring().clone(),
        per_degree,
    })
}

/// The two nonzero degrees and the square differential of a two-term
/// complex, when the complex has that shape.
fn two_term_square(b: &CochainComplex) -> Option<(i64, Matrix)> {
    let nz: Vec<(i64, usize)> = b.ranks().iter().map(|(&n, &r)| (n, r)).collect();
    match nz.as_slice() {
        [(n0, r0), (n1, r1)] if *n1 == n0 + 1 && r0 == r1 => Some((*n0, b.d(*n0))),
        _ => None,
    }
}

/// Splitting data recovered when `b` is, entry for entry, the cone of a
/// chain self-map in the standard cone basis: ranks `c_n` with
/// `b.rank(n) = c_{n+1} + c_n` and the square blocks `g_n`.
struct ConeShape {
    c_ranks: BTreeMap<i64, usize>,
    g: BTreeMap<i64, Matrix>,
}

fn detect_cone(b: &CochainComplex) -> Option<ConeShape> {
    let (lo, hi) = (b.lo(), b.hi());
    let mut c_ranks = BTreeMap::new();
    let mut above = 0usize;
    for n in (lo..=hi).rev() {
        let r = b.rank(n);
        if r < above {
            return None;
        }
        let cn = r - above;
        c_ranks.insert(n, cn);
        above = cn;
    }
    if c_ranks[&lo] != 0 {
        return None;
    }
    let c_at = |n: i64| c_ranks.get(&n).copied().unwrap_or(0);
    let mut g = BTreeMap::new();
    for n in lo..hi {
        let d = b.d(n);
        let (rows_top, rows_bottom) = (c_at(n + 2), c_at(n + 1));
        let cols_left = c_at(n + 1);
        if !d
            .submatrix(0, rows_top, cols_left, d.cols())
            .is_zero()
        {
            return None;
        }
        g.insert(
            n + 1,
            d.submatrix(rows_top, rows_top + rows_bottom, 0, cols_left),
        );
    }
    // The copy of the column differential in the top-left of d(n) must agree
    // with the one in the bottom-right of d(n+1), up to the cone sign.
    for n in lo..(hi - 1) {
        let top_left = b.d(n).submatrix(0, c_at(n + 2), 0, c_at(n + 1));
        let bottom_right = b.d(n + 1).submatrix(
            c_at(n + 3),
            c_at(n + 3) + c_at(n + 2),
            c_at(n + 2),
            c_at(n + 2) + c_at(n + 1),
        );
        if top_left != bottom_right.neg() {
            return None;
        }
    }
    Some(ConeShape { c_ranks, g })
}

/// Per-degree verdict over `ZZ[z,z⁻¹]`, by certificate rather than full
/// computation.
///
/// Three shapes are decided: the zero complex; two-term complexes with a
/// square differential, where the determinant answers exactly; and
/// complexes that are visibly the cone of a degreewise square map whose
/// determinants are all units in the chosen direction. Everything else is
/// reported degree by degree as inconclusive.
pub fn novikov_verdict_int(b: &CochainComplex, dir: SeriesDir) -> Result<NovikovVerdict> {
    let base = require_laurent_base(b, "novikov_verdict_int")?;
    if base != RingTag::ZZ {
        return Err(Error::UnsupportedRing(
            "novikov_verdict_int".into(),
            b.ring().to_string(),
        ));
    }
    let name = novikov_ring_name(&base, dir);
    let mut per_degree = BTreeMap::new();
    let done = |per_degree: BTreeMap<i64, DegreeVerdict>| {
        Ok(NovikovVerdict {
            dir,
            ring: b.ring().clone(),
            per_degree,
        })
    };
    if b.is_zero_complex() {
        return done(per_degree);
    }
    if let Some((n0, a)) = two_term_square(b) {
        let det_a = match det(&a)? {
            Elem::Laurent(f) => f,
            Elem::Scalar(_) => unreachable!("determinant over a Laurent ring is Laurent"),
        };
        if det_a.is_zero() {
            per_degree.insert(
                n0,
                DegreeVerdict::NonAcyclic(NonAcyclicWitness {
                    reason: format!(
                        "the determinant vanishes, so the map has nonzero kernel over {}",
                        name
                    ),
                    presentation: None,
                }),
            );
            per_degree.insert(
                n0 + 1,
                DegreeVerdict::NonAcyclic(NonAcyclicWitness {
                    reason: format!(
                        "the determinant vanishes, so the map is not surjective over {}",
                        name
                    ),
                    presentation: None,
                }),
            );
            return done(per_degree);
        }
        let report = novikov_unit(&det_a, dir)?;
        if report.unit {
            let cert = Certificate::UnitDet {
                det: det_a,
                pivot_exp: report.pivot_exp,
                pivot_coeff: report.pivot_coeff,
            };
            per_degree.insert(n0, DegreeVerdict::Acyclic(cert.clone()));
            per_degree.insert(n0 + 1, DegreeVerdict::Acyclic(cert));
        } else {
            per_degree.insert(
                n0,
                DegreeVerdict::Acyclic(Certificate::InjectiveDet {
                    det: det_a.clone(),
                }),
            );
            let presentation = if a.rows() == 1 {
                Some(format!("{}/({})", name, det_a))
            } else {
                None
            };
            per_degree.insert(
                n0 + 1,
                DegreeVerdict::NonAcyclic(NonAcyclicWitness {
                    reason: format!(
                        "a surjection between free modules of equal rank over {} is \
                         invertible, but the determinant pivot {} at exponent {} is \
                         not a unit",
                        name, report.pivot_coeff, report.pivot_exp
                    ),
                    presentation,
                }),
            );
        }
        done(per_degree)
    } else if let Some(shape) = detect_cone(b) {
        let c_at = |n: i64| shape.c_ranks.get(&n).copied().unwrap_or(0);
        let mut dets: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        let mut all_units = true;
        for (&m, gm) in &shape.g {
            if c_at(m) == 0 {
                continue;
            }
            let dg = match det(gm)? {
                Elem::Laurent(f) => f,
                Elem::Scalar(_) => unreachable!("determinant over a Laurent ring is Laurent"),
            };
            match novikov_unit(&dg, dir) {
                Ok(report) if report.unit => {
                    dets.insert(m, dg);
                }
                Ok(_) | Err(Error::ZeroPivot) => {
                    all_units = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if all_units {
            let one = LaurentPoly::constant(Scalar::one(&base));
            for n in b.lo()..=b.hi() {
                if b.rank(n) == 0 {
                    per_degree.insert(n, DegreeVerdict::Acyclic(Certificate::ZeroModule));
                    continue;
                }
                let upper = dets.get(&(n + 1)).unwrap_or(&one);
                let lower = dets.get(&n).unwrap_or(&one);
                let product = upper.mul(lower);
                let report = novikov_unit(&product, dir)
                    .expect("a product of Novikov units is a Novikov unit");
                per_degree.insert(
                    n,
                    DegreeVerdict::Acyclic(Certificate::UnitDet {
                        det: product,
                        pivot_exp: report.pivot_exp,
                        pivot_coeff: report.pivot_coeff,
                    }),
                );
            }
            return done(per_degree);
        }
        inconclusive_everywhere(b, &mut per_degree);
        done(per_degree)
    } else {
        inconclusive_everywhere(b, &mut per_degree);
        done(per_degree)
    }
}

fn inconclusive_everywhere(b: &CochainComplex, per_degree: &mut BTreeMap<i64, DegreeVerdict>) {
    for n in b.lo()..=b.hi() {
        let verdict = if b.rank(n) == 0 {
            DegreeVerdict::Acyclic(Certificate::ZeroModule)
        } else {
            DegreeVerdict::Inconclusive(
                "acyclicity over the Novikov ring of ZZ is only decided for two-term \
                 square complexes and cones of degreewise unit-determinant maps"
                    .into(),
            )
        };
        per_degree.insert(n, verdict);
    }
}

/// Outcome of the necessary-condition check for finite domination.
#[derive(Debug, Clone, PartialEq)]
pub struct RanickiReport {
    /// Verdict over the positive Novikov ring `R((z))`.
    pub pos: NovikovVerdict,
    /// Verdict over the negative Novikov ring `R((z⁻¹))`.
    pub neg: NovikovVerdict,
    /// False exactly when some degree is provably non-acyclic in either
    /// direction; true never confirms finite domination, it only fails to
    /// rule it out.
    pub finitely_dominated_possible: bool,
}

/// Runs the appropriate verdict in both directions and combines them into
/// the necessary condition: a finitely dominated complex has trivial
/// Novikov cohomology on both sides.
pub fn ranicki_check(c: &CochainComplex) -> Result<RanickiReport> {
    let base = require_laurent_base(c, "ranicki_check")?;
    let (pos, neg) = if base.is_field() {
        (
            novikov_verdict_field(c, SeriesDir::Lt)?,
            novikov_verdict_field(c, SeriesDir::Rt)?,
        )
    } else {
        (
            novikov_verdict_int(c, SeriesDir::Lt)?,
            novikov_verdict_int(c, SeriesDir::Rt)?,
        )
    };
    let finitely_dominated_possible = !pos.has_non_acyclic() && !neg.has_non_acyclic();
    Ok(RanickiReport {
        pos,
        neg,
        finitely_dominated_possible,
    })
}

/// Entry-wise coefficient of `z^k`, as a matrix over the base ring.
fn coeff_matrix(m: &Matrix, k: i64, base: &RingTag) -> Matrix {
    m.map_entries(base.clone(), |e| {
        Elem::Scalar(e.as_laurent().coeff_or_zero(k, base))
    })
}

/// Exponents carrying a nonzero coefficient somewhere in the matrix.
fn exponent_support(m: &Matrix) -> Vec<i64> {
    let mut exps = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            exps.extend(m.get(i, j).as_laurent().terms().map(|(e, _)| e));
        }
    }
    exps.sort_unstable();
    exps.dedup();
    exps
}

/// Compares a double complex window block for block with the z-coefficient
/// expansion of a complex over the Laurent ring: at every position the
/// vertical map must be the `z⁰` coefficient of the differential, the
/// horizontal map its `z¹` coefficient, and no other power may appear.
pub fn compare_torus_expansion(w: &DoubleComplexWindow, t: &CochainComplex) -> Result<()> {
    let base = require_laurent_base(t, "compare_torus_expansion")?;
    if *w.ring() != base {
        return Err(Error::RingMismatch(format!(
            "window lives in {}, torus in {}",
            w.ring(),
            t.ring()
        )));
    }
    let (p_lo, p_hi) = w.p_window();
    let (q_lo, q_hi) = w.q_window();
    for p in p_lo..=p_hi {
        for q in q_lo..=q_hi {
            if w.rank(p, q) != t.rank(p + q) {
                return Err(Error::TorusMismatch {
                    p,
                    q,
                    part: "rank".into(),
                });
            }
        }
    }
    for p in p_lo..=p_hi {
        for q in q_lo..=q_hi {
            let n = p + q;
            let a = t.d(n);
            for k in exponent_support(&a) {
                if k != 0 && k != 1 {
                    return Err(Error::TorusMismatch {
                        p,
                        q,
                        part: format!("z^{} coefficient", k),
                    });
                }
            }
            if q < q_hi && w.dv(p, q) != coeff_matrix(&a, 0, &base) {
                return Err(Error::TorusMismatch {
                    p,
                    q,
                    part: "dv".into(),
                });
            }
            if p < p_hi && w.dh(p, q) != coeff_matrix(&a, 1, &base) {
                return Err(Error::TorusMismatch {
                    p,
                    q,
                    part: "dh".into(),
                });
            }
        }
    }
    Ok(())
}

/// Identifies the totalisation of the torus column grid with the mapping
/// torus itself on the given column window, matrix for matrix.
pub fn check_tot_sum_is_torus(
    c: &CochainComplex,
    h: &ChainMap,
    p_lo: i64,
    p_hi: i64,
) -> Result<()> {
    let w = torus_bicomplex(c, h, p_lo, p_hi)?;
    let t = mapping_torus(c, h, TorusVar::Z)?;
    compare_torus_expansion(&w, &t)
}

/// A window of vector-valued series coefficients: one length-`width` vector
/// over the base ring per exponent, with the same one-sided knowledge
/// semantics as a scalar series window.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorWindow {
    dir: SeriesDir,
    base: RingTag,
    width: usize,
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, Vec<Scalar>>,
}

impl VectorWindow {
    /// Builds a window, checking the base ring, bounds and vector shapes;
    /// all-zero vectors are dropped.
    pub fn new(
        dir: SeriesDir,
        base: RingTag,
        width: usize,
        lo: i64,
        hi: i64,
        coeffs: BTreeMap<i64, Vec<Scalar>>,
    ) -> Result<VectorWindow> {
        base.validate()?;
        if !base.is_base() {
            return Err(Error::RingMismatch(
                "vector windows take base-ring coefficients".into(),
            ));
        }
        if lo > hi {
            return Err(Error::EmptyWindow(format!("lo {} > hi {}", lo, hi)));
        }
        let mut clean = BTreeMap::new();
        for (e, v) in coeffs {
            if e < lo || e > hi {
                return Err(Error::Parse(format!(
                    "coefficient exponent {} outside window [{},{}]",
                    e, lo, hi
                )));
            }
            if v.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient vector at exponent {} has length {}, expected {}",
                    e,
                    v.len(),
                    width
                )));
            }
            for s in &v {
                if !s.fits(&base) {
                    return Err(Error::RingMismatch(format!(
                        "coefficient {} does not live in {}",
                        s, base
                    )));
                }
            }
            if !v.iter().all(Scalar::is_zero) {
                clean.insert(e, v);
            }
        }
        Ok(VectorWindow {
            dir,
            base,
            width,
            lo,
            hi,
            coeffs: clean,
        })
    }

    /// Series direction.
    pub fn dir(&self) -> SeriesDir {
        self.dir
    }

    /// Coefficient ring.
    pub fn base(&self) -> &RingTag {
        &self.base
    }

    /// Length of each coefficient vector.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Lowest exponent of the window.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest exponent of the window.
    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Coefficient vector at `exp`: a value inside the window or on the
    /// known-zero side, `None` on the unknown side.
    pub fn coeff(&self, exp: i64) -> Option<Vec<Scalar>> {
        let zero = || vec![Scalar::zero(&self.base); self.width];
        if exp >= self.lo && exp <= self.hi {
            return Some(self.coeffs.get(&exp).cloned().unwrap_or_else(zero));
        }
        match self.dir {
            SeriesDir::Lt if exp < self.lo => Some(zero()),
            SeriesDir::Rt if exp > self.hi => Some(zero()),
            _ => None,
        }
    }

    /// Stored (nonzero) coefficient vectors.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Vec<Scalar>)> {
        self.coeffs.iter().map(|(&e, v)| (e, v))
    }
}

/// Combined window bounds for a family of series sharing one direction:
/// the coefficient of the sum is known exactly where every summand is.
fn combined_window<'a, I>(dir: SeriesDir, windows: I) -> (i64, i64)
where
    I: Iterator<Item = &'a SeriesWindow>,
{
    let bounds: Vec<(i64, i64)> = windows.map(|f| (f.lo(), f.hi())).collect();
    match dir {
        SeriesDir::Lt => (
            bounds.iter().map(|b| b.0).min().unwrap(),
            bounds.iter().map(|b| b.1).min().unwrap(),
        ),
        SeriesDir::Rt => (
            bounds.iter().map(|b| b.0).max().unwrap(),
            bounds.iter().map(|b| b.1).max().unwrap(),
        ),
    }
}

/// Reassembles an element `Σ_j e_j ⊗ f_j` of `R^t ⊗ R((z))` into a single
/// series whose coefficients are coordinate vectors.
///
/// All windows must share a direction and base ring; the result is known on
/// the intersection of their known regions. The inverse is coordinate
/// projection ([`phi_free_inverse`]).
pub fn phi_free(t: usize, x: &[(usize, SeriesWindow)]) -> Result<VectorWindow> {
    let first = x
        .first()
        .ok_or_else(|| Error::EmptyWindow("phi_free needs at least one term".into()))?;
    let dir = first.1.dir();
    let base = first.1.base().clone();
    for (j, f) in x {
        if *j >= t {
            return Err(Error::DimensionMismatch(format!(
                "basis index {} out of range for rank {}",
                j, t
            )));
        }
        if f.dir() != dir {
            return Err(Error::DirMismatch);
        }
        if *f.base() != base {
            return Err(Error::RingMismatch(format!(
                "windows live in {} and {}",
                base,
                f.base()
            )));
        }
    }
    let (lo, hi) = combined_window(dir, x.iter().map(|(_, f)| f));
    let mut coeffs = BTreeMap::new();
    for e in lo..=hi {
        let mut v = vec![Scalar::zero(&base); t];
        for (j, f) in x {
            let c = f
                .coeff(e)
                .expect("exponents inside the combined window are known in every term");
            v[*j] = v[*j].add(&c);
        }
        coeffs.insert(e, v);
    }
    VectorWindow::new(dir, base, t, lo, hi, coeffs)
}

/// Coordinate projection of a vector window onto a scalar window.
fn project(v: &VectorWindow, j: usize) -> SeriesWindow {
    let coeffs = v
        .terms()
        .map(|(e, vec)| (e, vec[j].clone()))
        .collect::<BTreeMap<i64, Scalar>>();
    SeriesWindow::new(v.dir(), v.base().clone(), v.lo(), v.hi(), coeffs)
        .expect("a coordinate of a valid vector window is a valid window")
}

/// The evident inverse of [`phi_free`]: coordinate projections, listed per
/// basis vector.
pub fn phi_free_inverse(v: &VectorWindow) -> Vec<(usize, SeriesWindow)> {
    (0..v.width()).map(|j| (j, project(v, j))).collect()
}

/// A finitely generated `ZZ`-module presented by relations among `t`
/// generators: each row of `relations` is one relation, so the module is
/// `ZZ^t` modulo the row span.
///
/// Construction runs Smith normal form once; coset representatives are
/// canonicalised in the diagonal coordinates (torsion coordinates reduced
/// into `[0, d_i)`, free coordinates untouched) and mapped back.
#[derive(Debug, Clone)]
pub struct FpPresentation {
    relations: Matrix,
    u: Matrix,
    u_inv: Matrix,
    diag: Vec<BigInt>,
}

impl FpPresentation {
    /// Validates the relation matrix and computes the canonical-form data.
    pub fn new(relations: Matrix) -> Result<FpPresentation> {
        if *relations.ring() != RingTag::ZZ {
            return Err(Error::UnsupportedRing(
                "module presentations".into(),
                relations.ring().to_string(),
            ));
        }
        if relations.cols() == 0 {
            return Err(Error::DimensionMismatch(
                "a presentation needs at least one generator".into(),
            ));
        }
        let snf = smith_normal_form(&relations.transpose())?;
        let diag = snf.invariants();
        let u_inv = inverse_unimodular(&snf.u)?;
        Ok(FpPresentation {
            relations,
            u: snf.u,
            u_inv,
            diag,
        })
    }

    /// Number of generators `t`.
    pub fn generators(&self) -> usize {
        self.relations.cols()
    }

    /// The relation matrix.
    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    /// Invariant factors of the relation lattice, in divisibility order
    /// (factors equal to one collapse their generator).
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diag
    }

    /// Rank of the free part.
    pub fn free_rank(&self) -> usize {
        self.generators() - self.diag.len()
    }

    /// Canonical representative of the coset of `x`: unique per coset, so
    /// equality of cosets is equality of canonical forms.
    pub fn canonical(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.generators() {
            return Err(Error::DimensionMismatch(format!(
                "representative has length {}, expected {}",
                x.len(),
                self.generators()
            )));
        }
        let as_elems: Vec<Elem> = x
            .iter()
            .map(|s| match s {
                Scalar::Int(_) => Ok(Elem::Scalar(s.clone())),
                other => Err(Error::RingMismatch(format!(
                    "representative entry {} is not an integer",
                    other
                ))),
            })
            .collect::<Result<_>>()?;
        let w = self.u.mul_vec(&as_elems);
        let reduced: Vec<Elem> = w
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                let b = match e {
                    Elem::Scalar(Scalar::Int(b)) => b,
                    _ => unreachable!("integer matrices map integer vectors to integers"),
                };
                let r = if i < self.diag.len() {
                    b.mod_floor(&self.diag[i])
                } else {
                    b
                };
                Elem::Scalar(Scalar::Int(r))
            })
            .collect();
        Ok(self
            .u_inv
            .mul_vec(&reduced)
            .into_iter()
            .map(|e| match e {
                Elem::Scalar(s) => s,
                _ => unreachable!("integer matrices map integer vectors to integers"),
            })
            .collect())
    }

    /// Whether two representatives name the same coset.
    pub fn same_coset(&self, a: &[Scalar], b: &[Scalar]) -> Result<bool> {
        Ok(self.canonical(a)? == self.canonical(b)?)
    }
}

/// Reassembles an element `Σ_k m_k ⊗ f_k` of `M ⊗ ZZ((z))` into a series
/// with canonical coset representatives as coefficients.
///
/// Representatives are vectors of length `t` over `ZZ`; windows must share
/// the stated direction. The output coefficients are canonical forms, so
/// equal module elements produce equal windows.
pub fn phi_fp(
    m: &FpPresentation,
    x: &[(Vec<Scalar>, SeriesWindow)],
    dir: SeriesDir,
) -> Result<VectorWindow> {
    let t = m.generators();
    if x.is_empty() {
        return Err(Error::EmptyWindow("phi_fp needs at least one term".into()));
    }
    for (rep, f) in x {
        if rep.len() != t {
            return Err(Error::DimensionMismatch(format!(
                "representative has length {}, expected {}",
                rep.len(),
                t
            )));
        }
        if f.dir() != dir {
            return Err(Error::DirMismatch);
        }
        if *f.base() != RingTag::ZZ {
            return Err(Error::RingMismatch(format!(
                "phi_fp works over ZZ, got coefficients in {}",
                f.base()
            )));
        }
    }
    let (lo, hi) = combined_window(dir, x.iter().map(|(_, f)| f));
    let mut coeffs = BTreeMap::new();
    for e in lo..=hi {
        let mut acc = vec![Scalar::zero(&RingTag::ZZ); t];
        for (rep, f) in x {
            let c = f
                .coeff(e)
                .expect("exponents inside the combined window are known in every term");
            for (slot, r) in acc.iter_mut().zip(rep) {
                *slot = slot.add(&r.mul(&c));
            }
        }
        coeffs.insert(e, m.canonical(&acc)?);
    }
    VectorWindow::new(dir, RingTag::ZZ, t, lo, hi, coeffs)
}

/// The constructed inverse of [`phi_fp`]: one term per generator, carrying
/// that generator's coordinate series.
pub fn phi_fp_inverse(
    m: &FpPresentation,
    v: &VectorWindow,
) -> Result<Vec<(Vec<Scalar>, SeriesWindow)>> {
    let t = m.generators();
    if v.width() != t {
        return Err(Error::DimensionMismatch(format!(
            "window has width {}, expected {}",
            v.width(),
            t
        )));
    }
    if *v.base() != RingTag::ZZ {
        return Err(Error::RingMismatch(format!(
            "phi_fp works over ZZ, got coefficients in {}",
            v.base()
        )));
    }
    Ok((0..t)
        .map(|j| {
            let mut rep = vec![Scalar::zero(&RingTag::ZZ); t];
            rep[j] = Scalar::one(&RingTag::ZZ);
            (rep, project(v, j))
        })
        .collect())
}
