//! Cochain complexes of finitely generated free modules, chain maps
//! between them, shifts, mapping cones, and cohomology.
//!
//! A complex stores a rank per degree on a finite support window and the
//! differentials `d(n): C^n -> C^(n+1)`; everything outside the window is
//! zero. Construction validates `d(n+1) * d(n) = 0`, so any value of this
//! type is a genuine complex.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::linalg::{
    cokernel_invariants, kernel_basis, rank, rank_field, solve_exact_int, Matrix,
};
use crate::rings::RingTag;
use crate::{Error, Result};

/// A bounded cochain complex with degree-raising differential.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainComplex {
    ring: RingTag,
    lo: i64,
    hi: i64,
    ranks: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, Matrix>,
}

impl CochainComplex {
    /// Builds and fully validates a complex. Zero ranks are dropped, the
    /// degree window shrinks to the support, and `d(n+1) * d(n) = 0` is
    /// checked at every degree.
    pub fn new(
        ring: RingTag,
        ranks: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<CochainComplex> {
        ring.validate()?;
        let ranks: BTreeMap<i64, usize> =
            ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let (lo, hi) = match (ranks.keys().next(), ranks.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, 0),
        };
        let rank_at = |n: i64| ranks.get(&n).copied().unwrap_or(0);
        let mut kept = BTreeMap::new();
        for (n, d) in diffs {
            if *d.ring() != ring {
                return Err(Error::RingMismatch(format!(
                    "differential at degree {} lives in {}, complex in {}",
                    n,
                    d.ring(),
                    ring
                )));
            }
            if d.rows() != rank_at(n + 1) || d.cols() != rank_at(n) {
                return Err(Error::DimensionMismatch(format!(
                    "differential at degree {} is {}x{}, expected {}x{}",
                    n,
                    d.rows(),
                    d.cols(),
                    rank_at(n + 1),
                    rank_at(n)
                )));
            }
            if d.rows() > 0 && d.cols() > 0 {
                kept.insert(n, d);
            }
        }
        let c = CochainComplex { ring, lo, hi, ranks, diffs: kept };
        for n in c.lo..c.hi {
            let dd = c.d(n + 1).mul(&c.d(n));
            if !dd.is_zero() {
                return Err(Error::ComplexViolation {
                    degree: n,
                    kind: "composite of consecutive differentials is nonzero".into(),
                });
            }
        }
        Ok(c)
    }

    /// The complex that is zero everywhere.
    pub fn zero_complex(ring: RingTag) -> CochainComplex {
        CochainComplex { ring, lo: 0, hi: 0, ranks: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn ring(&self) -> &RingTag {
        &self.ring
    }

    /// Lowest degree with nonzero rank (0 for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree with nonzero rank (0 for the zero complex).
    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn rank(&self, n: i64) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    /// The stored, nonzero-shaped differentials.
    pub fn diffs(&self) -> &BTreeMap<i64, Matrix> {
        &self.diffs
    }

    pub fn is_zero_complex(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .map(|(n, r)| if n.rem_euclid(2) == 0 { *r as i64 } else { -(*r as i64) })
            .sum()
    }

    /// The differential out of degree `n`, synthesizing a zero matrix of
    /// the right shape when none is stored.
    pub fn d(&self, n: i64) -> Matrix {
        match self.diffs.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.ring.clone(), self.rank(n + 1), self.rank(n)),
        }
    }

    /// The shifted complex: degree `n` holds what was in degree `n + k`,
    /// with differentials scaled by `(-1)^k`.
    pub fn shift(&self, k: i64) -> CochainComplex {
        let ranks = self.ranks.iter().map(|(n, r)| (n - k, *r)).collect();
        let flip = k.rem_euclid(2) == 1;
        let diffs = self
            .diffs
            .iter()
            .map(|(n, d)| (n - k, if flip { d.neg() } else { d.clone() }))
            .collect();
        CochainComplex::new(self.ring.clone(), ranks, diffs).expect("shift preserves validity")
    }

    /// Pushes the complex through the canonical ring map into `to`.
    pub fn base_change(&self, to: &RingTag) -> Result<CochainComplex> {
        let ranks = self.ranks.clone();
        let mut diffs = BTreeMap::new();
        for (n, d) in &self.diffs {
            diffs.insert(*n, d.cast(to)?);
        }
        CochainComplex::new(to.clone(), ranks, diffs)
    }
}

/// A degree-wise map of complexes commuting with the differentials.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    source: CochainComplex,
    target: CochainComplex,
    comps: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    /// Builds and fully validates a chain map: component shapes, ring
    /// agreement, and the commutation `d_Y(n) f(n) = f(n+1) d_X(n)` at
    /// every degree.
    pub fn new(
        source: CochainComplex,
        target: CochainComplex,
        comps: BTreeMap<i64, Matrix>,
    ) -> Result<ChainMap> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch(format!(
                "source lives in {}, target in {}",
                source.ring(),
                target.ring()
            )));
        }
        let mut kept = BTreeMap::new();
        for (n, m) in comps {
            if m.ring() != source.ring() {
                return Err(Error::RingMismatch(format!(
                    "component at degree {} lives in {}, complexes in {}",
                    n,
                    m.ring(),
                    source.ring()
                )));
            }
            if m.rows() != target.rank(n) || m.cols() != source.rank(n) {
                return Err(Error::DimensionMismatch(format!(
                    "component at degree {} is {}x{}, expected {}x{}",
                    n,
                    m.rows(),
                    m.cols(),
                    target.rank(n),
                    source.rank(n)
                )));
            }
            if m.rows() > 0 && m.cols() > 0 {
                kept.insert(n, m);
            }
        }
        let f = ChainMap { source, target, comps: kept };
        let lo = f.source.lo().min(f.target.lo()) - 1;
        let hi = f.source.hi().max(f.target.hi());
        for n in lo..=hi {
            let left = f.target.d(n).mul(&f.comp(n));
            let right = f.comp(n + 1).mul(&f.source.d(n));
            if left != right {
                return Err(Error::ChainMapViolation {
                    degree: n,
                    kind: "square against the differentials does not commute".into(),
                });
            }
        }
        Ok(f)
    }

    /// The identity on `c`.
    pub fn identity(c: &CochainComplex) -> ChainMap {
        let comps = c
            .ranks()
            .iter()
            .map(|(n, r)| (*n, Matrix::identity(c.ring().clone(), *r)))
            .collect();
        ChainMap::new(c.clone(), c.clone(), comps).expect("identity commutes")
    }

    /// The zero map between two complexes over the same ring.
    pub fn zero_map(source: CochainComplex, target: CochainComplex) -> Result<ChainMap> {
        ChainMap::new(source, target, BTreeMap::new())
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn comps(&self) -> &BTreeMap<i64, Matrix> {
        &self.comps
    }

    /// The component at degree `n`, synthesizing zeros when absent.
    pub fn comp(&self, n: i64) -> Matrix {
        match self.comps.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.source.ring().clone(), self.target.rank(n), self.source.rank(n)),
        }
    }

    /// Pushes the map through the canonical ring map into `to`.
    pub fn base_change(&self, to: &RingTag) -> Result<ChainMap> {
        let source = self.source.base_change(to)?;
        let target = self.target.base_change(to)?;
        let mut comps = BTreeMap::new();
        for (n, m) in &self.comps {
            comps.insert(*n, m.cast(to)?);
        }
        ChainMap::new(source, target, comps)
    }
}

/// The mapping cone of `f: X -> Y`: degree `n` is `X^(n+1) (+) Y^n`, with
/// differential `[[-d_X, 0], [f, d_Y]]`.
pub fn cone(f: &ChainMap) -> CochainComplex {
    let x = f.source();
    let y = f.target();
    let ring = x.ring().clone();
    let lo = (x.lo() - 1).min(y.lo());
    let hi = (x.hi() - 1).max(y.hi());
    let mut ranks = BTreeMap::new();
    for n in lo..=hi {
        let r = x.rank(n + 1) + y.rank(n);
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    let mut diffs = BTreeMap::new();
    for n in lo..=hi {
        let a = x.d(n + 1).neg();
        let b = Matrix::zero(ring.clone(), x.rank(n + 2), y.rank(n));
        let c = f.comp(n + 1);
        let d = y.d(n);
        let block = Matrix::from_blocks(&[vec![&a, &b], vec![&c, &d]]);
        if block.rows() > 0 && block.cols() > 0 {
            diffs.insert(n, block);
        }
    }
    CochainComplex::new(ring, ranks, diffs).expect("the cone of a chain map is a complex")
}

/// Cohomology in one degree: free rank plus torsion orders (torsion is
/// empty over fields).
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeCohomology {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl DegreeCohomology {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Cohomology of a complex, degree by degree over its support window.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyReport {
    pub ring: RingTag,
    pub entries: BTreeMap<i64, DegreeCohomology>,
}

impl CohomologyReport {
    pub fn is_trivial(&self) -> bool {
        self.entries.values().all(DegreeCohomology::is_trivial)
    }
}

/// Cohomology dimensions over a field, via rank-nullity:
/// `dim H^n = rank C^n - rank d(n) - rank d(n-1)`.
pub fn cohomology_field(c: &CochainComplex) -> Result<CohomologyReport> {
    if !c.ring().is_field() {
        return Err(Error::NotAField("cohomology over a field".into(), c.ring().to_string()));
    }
    let mut entries = BTreeMap::new();
    for n in c.lo()..=c.hi() {
        let dim = c.rank(n) - rank_field(&c.d(n))? - rank_field(&c.d(n - 1))?;
        entries.insert(n, DegreeCohomology { free_rank: dim, torsion: Vec::new() });
    }
    Ok(CohomologyReport { ring: c.ring().clone(), entries })
}

/// Integral cohomology: free rank and torsion orders per degree, computed
/// by expressing the image of `d(n-1)` in a kernel basis of `d(n)` and
/// reading off the cokernel's invariant factors.
pub fn cohomology_int(c: &CochainComplex) -> Result<CohomologyReport> {
    if *c.ring() != RingTag::ZZ {
        return Err(Error::UnsupportedRing("integral cohomology".into(), c.ring().to_string()));
    }
    let mut entries = BTreeMap::new();
    for n in c.lo()..=c.hi() {
        let k = kernel_basis(&c.d(n))?;
        let x = solve_exact_int(&k, &c.d(n - 1))?
            .expect("the image of a differential lies in the next kernel");
        let (free_rank, torsion) = cokernel_invariants(&x)?;
        entries.insert(n, DegreeCohomology { free_rank, torsion });
    }
    Ok(CohomologyReport { ring: c.ring().clone(), entries })
}

/// Whether `f` induces isomorphisms on all cohomology, decided through the
/// acyclicity of its cone: field ranks over QQ and F_p, Smith normal forms
/// over ZZ. Laurent rings are not supported here.
pub fn is_quasi_iso(f: &ChainMap) -> Result<bool> {
    let c = cone(f);
    match c.ring() {
        RingTag::QQ | RingTag::Fp(_) => Ok(cohomology_field(&c)?.is_trivial()),
        RingTag::ZZ => Ok(cohomology_int(&c)?.is_trivial()),
        other => Err(Error::UnsupportedRing("quasi-isomorphism test".into(), other.to_string())),
    }
}

/// Ranks over the fraction field, degree by degree — the right notion of
/// "dimension of cohomology" for complexes over ZZ or Laurent rings when
/// only vanishing is in question.
pub fn cohomology_fraction_ranks(c: &CochainComplex) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for n in c.lo()..=c.hi() {
        let dim = c.rank(n) - rank(&c.d(n))? - rank(&c.d(n - 1))?;
        out.insert(n, dim);
    }
    Ok(out)
}

/// Presents `H^n` over ZZ as `ZZ^free (+) sum of ZZ/d`, as a display string.
pub fn describe_cohomology(h: &DegreeCohomology) -> String {
    if h.is_trivial() {
        return "0".into();
    }
    let mut parts = Vec::new();
    match h.free_rank {
        0 => {}
        1 => parts.push("ZZ".to_string()),
        r => parts.push(format!("ZZ^{}", r)),
    }
    for d in &h.torsion {
        if d.is_one() {
            continue;
        }
        parts.push(format!("ZZ/{}", d));
    }
    parts.join(" (+) ")
}
