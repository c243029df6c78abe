//! Double complexes on finite rectangular windows.
//!
//! A [`DoubleComplexWindow`] stores ranks and both differentials of a double
//! complex for positions `(p, q)` inside a rectangle, subject to the laws
//! `dh∘dh = 0`, `dv∘dv = 0` and `dh∘dv + dv∘dh = 0`. Windows are built from
//! a family of columns ([`from_columns`], which installs the usual `(-1)^p`
//! sign twist) or as the column grid of a mapping torus
//! ([`torus_bicomplex`]). [`totalise`] collapses a window to an ordinary
//! cochain complex, and the two sweeps [`contract_lt`] / [`contract_rt`]
//! cobound totalisation cocycles column by column, returning a [`Witness`]
//! that [`verify_witness`] re-checks by independent matrix arithmetic.

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, CochainComplex};
use crate::linalg::{rank, solve_field, Matrix};
use crate::rings::{Elem, RingTag};
use crate::{Error, Result};

/// Flavour of totalisation. On a finite window all four produce the same
/// complex; the tag records which one the caller asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotChoice {
    /// Direct sum over each antidiagonal.
    Sum,
    /// Direct product over each antidiagonal.
    Prod,
    /// Sum in the column direction, product in the row direction.
    Lt,
    /// Product in the column direction, sum in the row direction.
    Rt,
}

impl TotChoice {
    /// Lower-case name used in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            TotChoice::Sum => "sum",
            TotChoice::Prod => "prod",
            TotChoice::Lt => "lt",
            TotChoice::Rt => "rt",
        }
    }
}

/// A double complex restricted to the rectangle
/// `p_lo ≤ p ≤ p_hi`, `q_lo ≤ q ≤ q_hi`.
///
/// `dh(p, q)` maps position `(p, q)` to `(p+1, q)` and `dv(p, q)` maps
/// `(p, q)` to `(p, q+1)`; both are synthesized as zero matrices wherever no
/// entry is stored. Construction checks shapes only; the laws are a separate
/// pass ([`DoubleComplexWindow::verify_laws`]) so that deliberately broken
/// windows can be built and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleComplexWindow {
    ring: RingTag,
    p_lo: i64,
    p_hi: i64,
    q_lo: i64,
    q_hi: i64,
    ranks: BTreeMap<(i64, i64), usize>,
    dh: BTreeMap<(i64, i64), Matrix>,
    dv: BTreeMap<(i64, i64), Matrix>,
    /// Degreewise ranks of the underlying complex when this window is the
    /// column grid of a mapping torus; enables ring-independent contraction.
    torus_ranks: Option<BTreeMap<i64, usize>>,
}

impl DoubleComplexWindow {
    /// Builds a window from raw data, checking ring tags and matrix shapes
    /// but not the double complex laws.
    pub fn new(
        ring: RingTag,
        p_window: (i64, i64),
        q_window: (i64, i64),
        ranks: BTreeMap<(i64, i64), usize>,
        dh: BTreeMap<(i64, i64), Matrix>,
        dv: BTreeMap<(i64, i64), Matrix>,
    ) -> Result<DoubleComplexWindow> {
        ring.validate()?;
        let (p_lo, p_hi) = p_window;
        let (q_lo, q_hi) = q_window;
        if p_lo > p_hi || q_lo > q_hi {
            return Err(Error::DimensionMismatch(format!(
                "window [{}, {}] x [{}, {}] is empty",
                p_lo, p_hi, q_lo, q_hi
            )));
        }
        let ranks: BTreeMap<(i64, i64), usize> =
            ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        for &(p, q) in ranks.keys() {
            if p < p_lo || p > p_hi || q < q_lo || q > q_hi {
                return Err(Error::DimensionMismatch(format!(
                    "rank given at ({}, {}) outside the window",
                    p, q
                )));
            }
        }
        let rank_at = |p: i64, q: i64| ranks.get(&(p, q)).copied().unwrap_or(0);
        let keep = |name: &str,
                        raw: BTreeMap<(i64, i64), Matrix>,
                        target: &dyn Fn(i64, i64) -> (i64, i64)|
         -> Result<BTreeMap<(i64, i64), Matrix>> {
            let mut kept = BTreeMap::new();
            for ((p, q), m) in raw {
                if *m.ring() != ring {
                    return Err(Error::RingMismatch(format!(
                        "{}({}, {}) lives in {}, window in {}",
                        name,
                        p,
                        q,
                        m.ring(),
                        ring
                    )));
                }
                let (tp, tq) = target(p, q);
                let (want_r, want_c) = (rank_at(tp, tq), rank_at(p, q));
                if m.rows() != want_r || m.cols() != want_c {
                    return Err(Error::DimensionMismatch(format!(
                        "{}({}, {}) is {}x{}, expected {}x{}",
                        name,
                        p,
                        q,
                        m.rows(),
                        m.cols(),
                        want_r,
                        want_c
                    )));
                }
                if !m.is_zero() {
                    kept.insert((p, q), m);
                }
            }
            Ok(kept)
        };
        let dh = keep("dh", dh, &|p, q| (p + 1, q))?;
        let dv = keep("dv", dv, &|p, q| (p, q + 1))?;
        Ok(DoubleComplexWindow {
            ring,
            p_lo,
            p_hi,
            q_lo,
            q_hi,
            ranks,
            dh,
            dv,
            torus_ranks: None,
        })
    }

    /// Coefficient ring of every entry.
    pub fn ring(&self) -> &RingTag {
        &self.ring
    }

    /// Column window `(p_lo, p_hi)`.
    pub fn p_window(&self) -> (i64, i64) {
        (self.p_lo, self.p_hi)
    }

    /// Row window `(q_lo, q_hi)`.
    pub fn q_window(&self) -> (i64, i64) {
        (self.q_lo, self.q_hi)
    }

    /// Rank at a position; zero outside the window.
    pub fn rank(&self, p: i64, q: i64) -> usize {
        self.ranks.get(&(p, q)).copied().unwrap_or(0)
    }

    /// All stored (nonzero) ranks.
    pub fn ranks(&self) -> &BTreeMap<(i64, i64), usize> {
        &self.ranks
    }

    /// Horizontal differential `(p, q) -> (p+1, q)`, synthesized as zero
    /// where absent.
    pub fn dh(&self, p: i64, q: i64) -> Matrix {
        match self.dh.get(&(p, q)) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.ring.clone(), self.rank(p + 1, q), self.rank(p, q)),
        }
    }

    /// Vertical differential `(p, q) -> (p, q+1)`, synthesized as zero where
    /// absent.
    pub fn dv(&self, p: i64, q: i64) -> Matrix {
        match self.dv.get(&(p, q)) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.ring.clone(), self.rank(p, q + 1), self.rank(p, q)),
        }
    }

    /// Stored horizontal differentials.
    pub fn dh_map(&self) -> &BTreeMap<(i64, i64), Matrix> {
        &self.dh
    }

    /// Stored vertical differentials.
    pub fn dv_map(&self) -> &BTreeMap<(i64, i64), Matrix> {
        &self.dv
    }

    /// Degreewise ranks of the torus column, when this window came from
    /// [`torus_bicomplex`].
    pub fn torus_ranks(&self) -> Option<&BTreeMap<i64, usize>> {
        self.torus_ranks.as_ref()
    }

    /// Attaches torus metadata after checking it against the stored grid:
    /// every rank must split as `tr(p+q+1) + tr(p+q)` and every horizontal
    /// differential must be the standard block `[[0, 0], [-I, 0]]`.
    pub fn with_torus_ranks(
        mut self,
        tr: BTreeMap<i64, usize>,
    ) -> Result<DoubleComplexWindow> {
        let tr_at = |m: i64| tr.get(&m).copied().unwrap_or(0);
        for p in self.p_lo..=self.p_hi {
            for q in self.q_lo..=self.q_hi {
                let m = p + q;
                if self.rank(p, q) != tr_at(m + 1) + tr_at(m) {
                    return Err(Error::TorusMismatch {
                        p,
                        q,
                        part: "rank".into(),
                    });
                }
                if p < self.p_hi && self.dh(p, q) != torus_dh(&self.ring, tr_at(m + 2), tr_at(m + 1), tr_at(m)) {
                    return Err(Error::TorusMismatch {
                        p,
                        q,
                        part: "dh".into(),
                    });
                }
            }
        }
        self.torus_ranks = Some(tr);
        Ok(self)
    }

    /// Checks the three double complex laws on every square that fits in the
    /// window, naming the first offending position.
    pub fn verify_laws(&self) -> Result<()> {
        for p in self.p_lo..=self.p_hi {
            for q in self.q_lo..=self.q_hi {
                if p + 2 <= self.p_hi && !self.dh(p + 1, q).mul(&self.dh(p, q)).is_zero() {
                    return Err(Error::LawViolation {
                        law: "dh∘dh = 0".into(),
                        p,
                        q,
                    });
                }
                if q + 2 <= self.q_hi && !self.dv(p, q + 1).mul(&self.dv(p, q)).is_zero() {
                    return Err(Error::LawViolation {
                        law: "dv∘dv = 0".into(),
                        p,
                        q,
                    });
                }
                if p + 1 <= self.p_hi && q + 1 <= self.q_hi {
                    let mixed = self
                        .dv(p + 1, q)
                        .mul(&self.dh(p, q))
                        .add(&self.dh(p, q + 1).mul(&self.dv(p, q)));
                    if !mixed.is_zero() {
                        return Err(Error::LawViolation {
                            law: "dh∘dv + dv∘dh = 0".into(),
                            p,
                            q,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Standard torus horizontal block `[[0, 0], [-I, 0]]` with row split
/// `(a, b)` and column split `(b, c)`.
fn torus_dh(ring: &RingTag, a: usize, b: usize, c: usize) -> Matrix {
    let mut m = Matrix::zero(ring.clone(), a + b, b + c);
    for i in 0..b {
        m.set(a + i, i, ring.one().neg());
    }
    m
}

/// Assembles a double complex from a family of columns and horizontal maps.
///
/// Column `p` contributes its ranks and `(-1)^p` times its differential as
/// the vertical data; the horizontal matrices are taken as given. The sign
/// twist turns maps that commute with the column differentials into a lawful
/// double complex; the laws are verified and the first offending square is
/// reported.
pub fn from_columns(
    cols: BTreeMap<i64, CochainComplex>,
    dh: BTreeMap<(i64, i64), Matrix>,
) -> Result<DoubleComplexWindow> {
    let first = cols
        .values()
        .next()
        .ok_or_else(|| Error::EmptyWindow("no columns given".into()))?;
    let ring = first.ring().clone();
    for c in cols.values() {
        if *c.ring() != ring {
            return Err(Error::RingMismatch(format!(
                "columns live in {} and {}",
                ring,
                c.ring()
            )));
        }
    }
    let p_lo = *cols.keys().next().unwrap();
    let p_hi = *cols.keys().next_back().unwrap();
    let q_lo = cols.values().map(|c| c.lo()).min().unwrap();
    let q_hi = cols.values().map(|c| c.hi()).max().unwrap();
    let mut ranks = BTreeMap::new();
    let mut dv = BTreeMap::new();
    for (&p, c) in &cols {
        for (&q, &r) in c.ranks() {
            ranks.insert((p, q), r);
        }
        for (&q, d) in c.diffs() {
            let twisted = if p.rem_euclid(2) == 1 { d.neg() } else { d.clone() };
            dv.insert((p, q), twisted);
        }
    }
    let w = DoubleComplexWindow::new(ring, (p_lo, p_hi), (q_lo, q_hi), ranks, dh, dv)?;
    w.verify_laws()?;
    Ok(w)
}

/// Column grid of the mapping torus of an endomorphism `h` of `c`.
///
/// Position `(p, q)` carries `C^{p+q+1} ⊕ C^{p+q}`; the vertical
/// differential is the mapping cone differential `[[-d, 0], [h, d]]` of `h`
/// and the horizontal one is the constant block `[[0, 0], [-I, 0]]`. The row
/// window is chosen so that every nonzero position with `p_lo ≤ p ≤ p_hi`
/// is inside the rectangle.
pub fn torus_bicomplex(
    c: &CochainComplex,
    h: &ChainMap,
    p_lo: i64,
    p_hi: i64,
) -> Result<DoubleComplexWindow> {
    if h.source() != c || h.target() != c {
        return Err(Error::NotAnEndomorphism(
            "the torus needs a chain self-map of the given complex".into(),
        ));
    }
    if p_lo > p_hi {
        return Err(Error::DimensionMismatch(format!(
            "column window [{}, {}] is empty",
            p_lo, p_hi
        )));
    }
    let ring = c.ring().clone();
    let q_lo = c.lo() - 1 - p_hi;
    let q_hi = c.hi() - p_lo;
    let tr = |m: i64| c.rank(m);
    let mut ranks = BTreeMap::new();
    let mut dh = BTreeMap::new();
    let mut dv = BTreeMap::new();
    for p in p_lo..=p_hi {
        for q in q_lo..=q_hi {
            let m = p + q;
            let r = tr(m + 1) + tr(m);
            if r == 0 {
                continue;
            }
            ranks.insert((p, q), r);
            if p < p_hi {
                dh.insert((p, q), torus_dh(&ring, tr(m + 2), tr(m + 1), tr(m)));
            }
            let neg_d = c.d(m + 1).neg();
            let zero = Matrix::zero(ring.clone(), tr(m + 2), tr(m));
            let h_next = h.comp(m + 1);
            let d_here = c.d(m);
            let rows = vec![vec![&neg_d, &zero], vec![&h_next, &d_here]];
            dv.insert((p, q), Matrix::from_blocks(&rows));
        }
    }
    let w = DoubleComplexWindow::new(ring, (p_lo, p_hi), (q_lo, q_hi), ranks, dh, dv)?
        .with_torus_ranks(c.ranks().clone())?;
    w.verify_laws()
        .expect("the torus grid of a valid chain map satisfies the double complex laws");
    Ok(w)
}

/// Collapses the window to a cochain complex along antidiagonals.
///
/// Degree `n` collects the positions `(p, n-p)` in ascending `p`; the
/// differential places `dv` on the diagonal blocks and `dh` on the
/// subdiagonal. On a finite window every [`TotChoice`] yields the same
/// complex, so the choice only labels the construction. The laws are
/// verified first.
pub fn totalise(w: &DoubleComplexWindow, _choice: TotChoice) -> Result<CochainComplex> {
    w.verify_laws()?;
    let (p_lo, p_hi) = w.p_window();
    let (q_lo, q_hi) = w.q_window();
    let mut ranks = BTreeMap::new();
    for n in (p_lo + q_lo)..=(p_hi + q_hi) {
        let r: usize = (p_lo..=p_hi).map(|p| w.rank(p, n - p)).sum();
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    let mut diffs = BTreeMap::new();
    for n in (p_lo + q_lo)..(p_hi + q_hi) {
        let srcs: Vec<i64> = (p_lo..=p_hi).filter(|&p| w.rank(p, n - p) > 0).collect();
        let tgts: Vec<i64> = (p_lo..=p_hi)
            .filter(|&p| w.rank(p, n + 1 - p) > 0)
            .collect();
        if srcs.is_empty() || tgts.is_empty() {
            continue;
        }
        let blocks: Vec<Vec<Matrix>> = tgts
            .iter()
            .map(|&pt| {
                srcs.iter()
                    .map(|&ps| {
                        if pt == ps {
                            w.dv(ps, n - ps)
                        } else if pt == ps + 1 {
                            w.dh(ps, n - ps)
                        } else {
                            Matrix::zero(
                                w.ring().clone(),
                                w.rank(pt, n + 1 - pt),
                                w.rank(ps, n - ps),
                            )
                        }
                    })
                    .collect()
            })
            .collect();
        let refs: Vec<Vec<&Matrix>> = blocks.iter().map(|r| r.iter().collect()).collect();
        diffs.insert(n, Matrix::from_blocks(&refs));
    }
    Ok(CochainComplex::new(w.ring().clone(), ranks, diffs)
        .expect("the totalisation of a lawful window is a complex"))
}

/// A degree-`n` element of the totalisation, stored column by column:
/// `comps[p]` is the coordinate vector at position `(p, n-p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TotCocycle {
    n: i64,
    comps: BTreeMap<i64, Vec<Elem>>,
}

impl TotCocycle {
    /// Wraps raw column vectors; all-zero columns are dropped so equal
    /// cocycles compare equal.
    pub fn new(n: i64, comps: BTreeMap<i64, Vec<Elem>>) -> TotCocycle {
        let comps = comps
            .into_iter()
            .filter(|(_, v)| !is_zero_vec(v))
            .collect();
        TotCocycle { n, comps }
    }

    /// Total degree.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Stored (nonzero) column vectors.
    pub fn comps(&self) -> &BTreeMap<i64, Vec<Elem>> {
        &self.comps
    }

    /// Column vector at `p`, synthesized as zero where absent.
    fn vector(&self, w: &DoubleComplexWindow, p: i64) -> Vec<Elem> {
        match self.comps.get(&p) {
            Some(v) => v.clone(),
            None => zeros(w.ring(), w.rank(p, self.n - p)),
        }
    }
}

/// Checks that `x` is a well-shaped cocycle of the totalisation: every
/// stored column fits the window, and `dv(x_p) + dh(x_{p-1}) = 0` holds at
/// every position whose target lies in the window. The leftmost column has
/// no left neighbour inside the window, so its horizontal term is taken as
/// unknown and that equation is not checked.
pub fn check_cocycle(w: &DoubleComplexWindow, x: &TotCocycle) -> Result<()> {
    let (p_lo, p_hi) = w.p_window();
    let n = x.n();
    for (&p, v) in x.comps() {
        if p < p_lo || p > p_hi {
            return Err(Error::NotACocycle {
                p,
                kind: "column outside the window".into(),
            });
        }
        if v.len() != w.rank(p, n - p) {
            return Err(Error::NotACocycle {
                p,
                kind: format!(
                    "coordinate vector has length {}, expected {}",
                    v.len(),
                    w.rank(p, n - p)
                ),
            });
        }
        for e in v {
            if !e.fits(w.ring()) {
                return Err(Error::RingMismatch(format!(
                    "cocycle entry at column {} does not lie in {}",
                    p,
                    w.ring()
                )));
            }
        }
    }
    for p in (p_lo + 1)..=p_hi {
        if w.rank(p, n + 1 - p) == 0 {
            continue;
        }
        let lhs = add_vec(
            &w.dv(p, n - p).mul_vec(&x.vector(w, p)),
            &w.dh(p - 1, n + 1 - p).mul_vec(&x.vector(w, p - 1)),
        );
        if !is_zero_vec(&lhs) {
            return Err(Error::NotACocycle {
                p,
                kind: "dv(x_p) + dh(x_{p-1}) is nonzero".into(),
            });
        }
    }
    Ok(())
}

/// A column-by-column coboundary witness for a totalisation cocycle of
/// degree `n`: `terms[p]` lives at position `(p, n-1-p)` and
/// `dv(y_p) + dh(y_{p-1}) = x_p` holds for every column `p` in
/// `verified_range`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    n: i64,
    terms: BTreeMap<i64, Vec<Elem>>,
    verified: (i64, i64),
}

impl Witness {
    /// Degree of the cocycle this witness cobounds.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Stored (nonzero) witness columns.
    pub fn terms(&self) -> &BTreeMap<i64, Vec<Elem>> {
        &self.terms
    }

    /// Inclusive column range on which the coboundary identity holds.
    pub fn verified_range(&self) -> (i64, i64) {
        self.verified
    }

    /// Witness column at `p`, synthesized as zero where absent.
    fn vector(&self, w: &DoubleComplexWindow, p: i64) -> Vec<Elem> {
        match self.terms.get(&p) {
            Some(v) => v.clone(),
            None => zeros(w.ring(), w.rank(p, self.n - 1 - p)),
        }
    }
}

/// Re-checks a witness by plain matrix arithmetic: for every column `p` in
/// its verified range, `dv(y_p) + dh(y_{p-1})` must equal `x_p`.
pub fn verify_witness(w: &DoubleComplexWindow, x: &TotCocycle, y: &Witness) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(format!(
            "cocycle has degree {}, witness targets degree {}",
            x.n(),
            y.n()
        )));
    }
    let n = x.n();
    for (&p, v) in y.terms() {
        if v.len() != w.rank(p, n - 1 - p) {
            return Err(Error::DimensionMismatch(format!(
                "witness column {} has length {}, expected {}",
                p,
                v.len(),
                w.rank(p, n - 1 - p)
            )));
        }
    }
    let (lo, hi) = y.verified_range();
    for p in lo..=hi {
        let lhs = add_vec(
            &w.dv(p, n - 1 - p).mul_vec(&y.vector(w, p)),
            &w.dh(p - 1, n - p).mul_vec(&y.vector(w, p - 1)),
        );
        if lhs != x.vector(w, p) {
            return Err(Error::WitnessMismatch { p });
        }
    }
    Ok(())
}

/// Cobounds a cocycle by sweeping columns left to right, solving
/// `dv(y_p) = x_p - dh(y_{p-1})` in each column.
///
/// Works over field coefficients. Solvability at interior rows is assured
/// beforehand by a rank test for column exactness at every position the
/// sweep uses; the rightmost column of the window cannot be verified
/// against the truncation and is excluded from the verified range.
pub fn contract_lt(w: &DoubleComplexWindow, x: &TotCocycle) -> Result<Witness> {
    if !w.ring().is_field() {
        return Err(Error::NotAField(
            "contract_lt".into(),
            w.ring().to_string(),
        ));
    }
    check_cocycle(w, x)?;
    let (p_lo, p_hi) = w.p_window();
    let (q_lo, q_hi) = w.q_window();
    let n = x.n();
    for p in p_lo..p_hi {
        let q = n - p;
        if q > q_lo && q < q_hi {
            let out = rank(&w.dv(p, q))?;
            let into = rank(&w.dv(p, q - 1))?;
            if out + into != w.rank(p, q) {
                return Err(Error::ColumnsNotExact { p, q });
            }
        }
    }
    let mut terms = BTreeMap::new();
    let mut prev = zeros(w.ring(), 0);
    for p in p_lo..p_hi {
        let dh_prev = if p == p_lo {
            zeros(w.ring(), w.rank(p, n - p))
        } else {
            w.dh(p - 1, n - p).mul_vec(&prev)
        };
        let residual = sub_vec(&x.vector(w, p), &dh_prev);
        let y = solve_field(&w.dv(p, n - 1 - p), &residual)?.ok_or(Error::NoPreimage {
            p,
            kind: format!(
                "the residual at position ({}, {}) is not a vertical coboundary",
                p,
                n - p
            ),
        })?;
        if !is_zero_vec(&y) {
            terms.insert(p, y.clone());
        }
        prev = y;
    }
    Ok(Witness {
        n,
        terms,
        verified: (p_lo, p_hi - 1),
    })
}

/// Cobounds a cocycle by sweeping columns right to left, solving
/// `dh(y_{p-1}) = x_p - dv(y_p)` in each column.
///
/// On a torus grid the horizontal differential is the explicit block
/// `[[0, 0], [-I, 0]]`, so the solve is a closed form that works over any
/// coefficient ring; otherwise field coefficients are required and interior
/// row exactness is checked by rank beforehand. The leftmost column of the
/// window cannot be verified against the truncation and is excluded from
/// the verified range.
pub fn contract_rt(w: &DoubleComplexWindow, x: &TotCocycle) -> Result<Witness> {
    check_cocycle(w, x)?;
    if w.torus_ranks().is_some() {
        contract_rt_torus(w, x)
    } else {
        contract_rt_field(w, x)
    }
}

/// Right-to-left sweep on a torus grid: the horizontal block `[[0,0],[-I,0]]`
/// is inverted by reading off the second block of the residual, provided the
/// first block vanishes.
fn contract_rt_torus(w: &DoubleComplexWindow, x: &TotCocycle) -> Result<Witness> {
    let tr_map = w.torus_ranks().unwrap().clone();
    let tr = |m: i64| tr_map.get(&m).copied().unwrap_or(0);
    let (p_lo, p_hi) = w.p_window();
    let n = x.n();
    let mut terms = BTreeMap::new();
    let mut y = zeros(w.ring(), tr(n) + tr(n - 1));
    for p in ((p_lo + 1)..=p_hi).rev() {
        let residual = sub_vec(&x.vector(w, p), &w.dv(p, n - 1 - p).mul_vec(&y));
        let (first, second) = residual.split_at(tr(n + 1));
        if !is_zero_vec(first) {
            return Err(Error::NoPreimage {
                p,
                kind: format!(
                    "the residual at position ({}, {}) lies outside the image of the horizontal differential",
                    p,
                    n - p
                ),
            });
        }
        let mut next: Vec<Elem> = second.iter().map(|e| e.neg()).collect();
        next.extend(zeros(w.ring(), tr(n - 1)));
        if !is_zero_vec(&next) {
            terms.insert(p - 1, next.clone());
        }
        y = next;
    }
    Ok(Witness {
        n,
        terms,
        verified: (p_lo + 1, p_hi),
    })
}

/// Right-to-left sweep over a field: solves against the horizontal
/// differential after a rank test for row exactness at interior columns.
fn contract_rt_field(w: &DoubleComplexWindow, x: &TotCocycle) -> Result<Witness> {
    if !w.ring().is_field() {
        return Err(Error::NotAField(
            "contract_rt".into(),
            w.ring().to_string(),
        ));
    }
    let (p_lo, p_hi) = w.p_window();
    let n = x.n();
    for p in (p_lo + 1)..p_hi {
        let q = n - p;
        if w.rank(p, q) == 0 {
            continue;
        }
        let out = rank(&w.dh(p, q))?;
        let into = rank(&w.dh(p - 1, q))?;
        if out + into != w.rank(p, q) {
            return Err(Error::RowsNotExact { p, q });
        }
    }
    let mut terms = BTreeMap::new();
    let mut y = zeros(w.ring(), w.rank(p_hi, n - 1 - p_hi));
    for p in ((p_lo + 1)..=p_hi).rev() {
        let residual = sub_vec(&x.vector(w, p), &w.dv(p, n - 1 - p).mul_vec(&y));
        let next = solve_field(&w.dh(p - 1, n - p), &residual)?.ok_or(Error::NoPreimage {
            p,
            kind: format!(
                "the residual at position ({}, {}) is not a horizontal coboundary",
                p,
                n - p
            ),
        })?;
        if !is_zero_vec(&next) {
            terms.insert(p - 1, next.clone());
        }
        y = next;
    }
    Ok(Witness {
        n,
        terms,
        verified: (p_lo + 1, p_hi),
    })
}

fn zeros(ring: &RingTag, k: usize) -> Vec<Elem> {
    vec![ring.zero(); k]
}

fn is_zero_vec(v: &[Elem]) -> bool {
    v.iter().all(|e| e.is_zero())
}

fn add_vec(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_vec(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Scalar;

    fn mat(ring: &RingTag, entries: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            ring.clone(),
            entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| {
                            let e = Elem::Scalar(Scalar::int(v));
                            e.cast(ring).unwrap()
                        })
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    fn vec_of(ring: &RingTag, entries: &[i64]) -> Vec<Elem> {
        entries
            .iter()
            .map(|&v| Elem::Scalar(Scalar::int(v)).cast(ring).unwrap())
            .collect()
    }

    /// Complex with a single rank-one module in the given degree.
    fn point(ring: &RingTag, deg: i64) -> CochainComplex {
        CochainComplex::new(
            ring.clone(),
            BTreeMap::from([(deg, 1)]),
            BTreeMap::new(),
        )
        .unwrap()
    }

    /// 0 -> R --m--> R -> 0 in degrees 0 and 1.
    fn two_term(ring: &RingTag, m: i64) -> CochainComplex {
        CochainComplex::new(
            ring.clone(),
            BTreeMap::from([(0, 1), (1, 1)]),
            BTreeMap::from([(0, mat(ring, &[&[m]]))]),
        )
        .unwrap()
    }

    /// Multiplication by `k` as a chain self-map.
    fn scale_endo(c: &CochainComplex, k: i64) -> ChainMap {
        let comps = c
            .ranks()
            .iter()
            .map(|(&n, &r)| {
                let e = Elem::Scalar(Scalar::int(k)).cast(c.ring()).unwrap();
                (n, Matrix::scalar_diag(c.ring().clone(), r, &e))
            })
            .collect();
        ChainMap::new(c.clone(), c.clone(), comps).unwrap()
    }

    #[test]
    fn times_two_torus_totalises_to_the_bidiagonal_matrix() {
        let c = point(&RingTag::ZZ, 0);
        let h = scale_endo(&c, 2);
        let w = torus_bicomplex(&c, &h, 0, 4).unwrap();
        assert_eq!(w.q_window(), (-5, 0));
        let tot = totalise(&w, TotChoice::Sum).unwrap();
        assert_eq!((tot.lo(), tot.hi()), (-1, 0));
        assert_eq!((tot.rank(-1), tot.rank(0)), (5, 5));
        let expected = mat(
            &RingTag::ZZ,
            &[
                &[2, 0, 0, 0, 0],
                &[-1, 2, 0, 0, 0],
                &[0, -1, 2, 0, 0],
                &[0, 0, -1, 2, 0],
                &[0, 0, 0, -1, 2],
            ],
        );
        assert_eq!(tot.d(-1), expected);
    }

    #[test]
    fn all_totalisation_choices_agree_on_a_window() {
        let c = two_term(&RingTag::ZZ, 3);
        let h = scale_endo(&c, 2);
        let w = torus_bicomplex(&c, &h, -1, 2).unwrap();
        let sum = totalise(&w, TotChoice::Sum).unwrap();
        for choice in [TotChoice::Prod, TotChoice::Lt, TotChoice::Rt] {
            assert_eq!(totalise(&w, choice).unwrap(), sum);
        }
    }

    #[test]
    fn single_column_totalises_to_the_shifted_column() {
        let c = two_term(&RingTag::QQ, 2);
        let w = from_columns(BTreeMap::from([(3, c.clone())]), BTreeMap::new()).unwrap();
        assert_eq!(totalise(&w, TotChoice::Sum).unwrap(), c.shift(-3));
    }

    #[test]
    fn identity_rows_between_equal_columns_are_lawful() {
        let c = two_term(&RingTag::QQ, 5);
        let dh = BTreeMap::from([
            ((0, 0), Matrix::identity(RingTag::QQ, 1)),
            ((0, 1), Matrix::identity(RingTag::QQ, 1)),
        ]);
        let w = from_columns(
            BTreeMap::from([(0, c.clone()), (1, c.clone())]),
            dh,
        )
        .unwrap();
        assert_eq!(w.rank(1, 0), 1);
        let tot = totalise(&w, TotChoice::Sum).unwrap();
        assert_eq!(tot.total_rank(), 4);
    }

    #[test]
    fn anticommutation_failure_is_located() {
        let ranks = BTreeMap::from([((0, 0), 1), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]);
        let one = |_: ()| mat(&RingTag::ZZ, &[&[1]]);
        let dh = BTreeMap::from([((0, 0), one(())), ((0, 1), one(()))]);
        let dv = BTreeMap::from([((0, 0), one(())), ((1, 0), one(()))]);
        let w = DoubleComplexWindow::new(RingTag::ZZ, (0, 1), (0, 1), ranks.clone(), dh.clone(), dv.clone())
            .unwrap();
        assert_eq!(
            w.verify_laws(),
            Err(Error::LawViolation {
                law: "dh∘dv + dv∘dh = 0".into(),
                p: 0,
                q: 0
            })
        );
        // Over F2 the same square anticommutes, since 1 + 1 = 0.
        let to_f2 = |m: BTreeMap<(i64, i64), Matrix>| {
            m.into_iter()
                .map(|(k, v)| (k, v.cast(&RingTag::Fp(2)).unwrap()))
                .collect::<BTreeMap<_, _>>()
        };
        let w2 = DoubleComplexWindow::new(
            RingTag::Fp(2),
            (0, 1),
            (0, 1),
            ranks,
            to_f2(dh),
            to_f2(dv),
        )
        .unwrap();
        assert_eq!(w2.verify_laws(), Ok(()));
    }

    #[test]
    fn vertical_composite_failure_is_located() {
        let ranks = BTreeMap::from([((0, 0), 1), ((0, 1), 1), ((0, 2), 1)]);
        let dv = BTreeMap::from([
            ((0, 0), mat(&RingTag::ZZ, &[&[1]])),
            ((0, 1), mat(&RingTag::ZZ, &[&[1]])),
        ]);
        let w = DoubleComplexWindow::new(RingTag::ZZ, (0, 0), (0, 2), ranks, BTreeMap::new(), dv)
            .unwrap();
        assert_eq!(
            w.verify_laws(),
            Err(Error::LawViolation {
                law: "dv∘dv = 0".into(),
                p: 0,
                q: 0
            })
        );
    }

    #[test]
    fn torus_grid_carries_its_metadata() {
        let c = two_term(&RingTag::ZZ, 3);
        let h = scale_endo(&c, 2);
        let w = torus_bicomplex(&c, &h, 0, 2).unwrap();
        assert_eq!(w.torus_ranks(), Some(c.ranks()));
        // dh at a position with split (0, 1) x (1, 0) is the single entry -1.
        assert_eq!(w.dh(0, 0), mat(&RingTag::ZZ, &[&[-1, 0]]));
        assert_eq!(w.rank(0, 0), 2);
        assert_eq!(w.q_window(), (-3, 1));
    }

    #[test]
    fn cocycle_equation_is_checked_away_from_the_edge() {
        let c = two_term(&RingTag::ZZ, 3);
        let h = scale_endo(&c, 2);
        let w = torus_bicomplex(&c, &h, 0, 2).unwrap();
        // At each position (p, -p) the equation reads 2a_p + 3b_p = a_{p-1}.
        let good = TotCocycle::new(
            0,
            BTreeMap::from([
                (0, vec_of(&RingTag::ZZ, &[3, -2])),
                (1, vec_of(&RingTag::ZZ, &[0, 1])),
            ]),
        );
        assert_eq!(check_cocycle(&w, &good), Ok(()));
        let bad = TotCocycle::new(
            0,
            BTreeMap::from([
                (0, vec_of(&RingTag::ZZ, &[3, -2])),
                (1, vec_of(&RingTag::ZZ, &[1, 1])),
            ]),
        );
        assert_eq!(
            check_cocycle(&w, &bad),
            Err(Error::NotACocycle {
                p: 1,
                kind: "dv(x_p) + dh(x_{p-1}) is nonzero".into()
            })
        );
    }

    #[test]
    fn left_sweep_on_the_identity_torus_repeats_the_unit() {
        let c = point(&RingTag::Fp(2), 0);
        let h = scale_endo(&c, 1);
        let w = torus_bicomplex(&c, &h, 0, 5).unwrap();
        let x = TotCocycle::new(0, BTreeMap::from([(0, vec_of(&RingTag::Fp(2), &[1]))]));
        let y = contract_lt(&w, &x).unwrap();
        assert_eq!(y.verified_range(), (0, 4));
        for p in 0..=4 {
            assert_eq!(y.terms().get(&p), Some(&vec_of(&RingTag::Fp(2), &[1])));
        }
        assert_eq!(verify_witness(&w, &x, &y), Ok(()));
    }

    #[test]
    fn right_sweep_on_the_doubling_torus_feeds_powers_of_two_leftwards() {
        let c = point(&RingTag::ZZ, 0);
        let h = scale_endo(&c, 2);
        let w = torus_bicomplex(&c, &h, -3, 3).unwrap();
        let x = TotCocycle::new(0, BTreeMap::from([(0, vec_of(&RingTag::ZZ, &[1]))]));
        let y = contract_rt(&w, &x).unwrap();
        assert_eq!(y.verified_range(), (-2, 3));
        assert_eq!(
            y.terms(),
            &BTreeMap::from([
                (-1, vec_of(&RingTag::ZZ, &[-1])),
                (-2, vec_of(&RingTag::ZZ, &[-2])),
                (-3, vec_of(&RingTag::ZZ, &[-4])),
            ])
        );
        assert_eq!(verify_witness(&w, &x, &y), Ok(()));
    }

    #[test]
    fn right_sweep_rejects_a_class_with_no_horizontal_preimage() {
        let c = two_term(&RingTag::ZZ, 3);
        let h = scale_endo(&c, 2);
        let w = torus_bicomplex(&c, &h, 0, 2).unwrap();
        // 2a_p + 3b_p = a_{p-1} with a_2 = 1 forces a residual whose first
        // block is nonzero at the top column.
        let x = TotCocycle::new(
            0,
            BTreeMap::from([
                (0, vec_of(&RingTag::ZZ, &[4, 0])),
                (1, vec_of(&RingTag::ZZ, &[2, 0])),
                (2, vec_of(&RingTag::ZZ, &[1, 0])),
            ]),
        );
        assert_eq!(check_cocycle(&w, &x), Ok(()));
        let err = contract_rt(&w, &x).unwrap_err();
        assert_eq!(
            err,
            Error::NoPreimage {
                p: 2,
                kind: "the residual at position (2, -2) lies outside the image of the horizontal differential"
                    .into()
            }
        );
    }

    #[test]
    fn right_sweep_over_a_field_grid_solves_against_the_rows() {
        let ring = RingTag::Fp(5);
        let cols: BTreeMap<i64, CochainComplex> = (0..=2).map(|p| (p, point(&ring, 0))).collect();
        let dh = BTreeMap::from([((0, 0), mat(&ring, &[&[1]]))]);
        let w = from_columns(cols, dh).unwrap();
        assert!(w.torus_ranks().is_none());
        let x = TotCocycle::new(1, BTreeMap::from([(1, vec_of(&ring, &[2]))]));
        let y = contract_rt(&w, &x).unwrap();
        assert_eq!(y.verified_range(), (1, 2));
        assert_eq!(y.terms(), &BTreeMap::from([(0, vec_of(&ring, &[2]))]));
        assert_eq!(verify_witness(&w, &x, &y), Ok(()));
    }

    #[test]
    fn right_sweep_over_a_field_demands_interior_row_exactness() {
        let ring = RingTag::Fp(5);
        let cols: BTreeMap<i64, CochainComplex> = (0..=2).map(|p| (p, point(&ring, 0))).collect();
        let w = from_columns(cols, BTreeMap::new()).unwrap();
        let x = TotCocycle::new(1, BTreeMap::from([(1, vec_of(&ring, &[2]))]));
        assert_eq!(
            contract_rt(&w, &x).unwrap_err(),
            Error::RowsNotExact { p: 1, q: 0 }
        );
    }

    #[test]
    fn left_sweep_demands_interior_column_exactness() {
        let ring = RingTag::Fp(5);
        // A single column with zero differential is not exact at its middle
        // degree, and the sweep refuses to start.
        let col = CochainComplex::new(
            ring.clone(),
            BTreeMap::from([(-1, 1), (0, 1), (1, 1)]),
            BTreeMap::new(),
        )
        .unwrap();
        let w = from_columns(BTreeMap::from([(0, col), (1, point(&ring, 0))]), BTreeMap::new())
            .unwrap();
        let x = TotCocycle::new(0, BTreeMap::from([(0, vec_of(&ring, &[1]))]));
        assert_eq!(
            contract_lt(&w, &x).unwrap_err(),
            Error::ColumnsNotExact { p: 0, q: 0 }
        );
    }

    #[test]
    fn contraction_is_deterministic_and_sends_zero_to_zero() {
        let c = point(&RingTag::Fp(3), 0);
        let h = scale_endo(&c, 2);
        let w = torus_bicomplex(&c, &h, 0, 4).unwrap();
        let x = TotCocycle::new(0, BTreeMap::from([(0, vec_of(&RingTag::Fp(3), &[2]))]));
        let a = contract_lt(&w, &x).unwrap();
        let b = contract_lt(&w, &x).unwrap();
        assert_eq!(a, b);
        let zero = TotCocycle::new(0, BTreeMap::new());
        let y = contract_rt(&w, &zero).unwrap();
        assert!(y.terms().is_empty());
    }

    #[test]
    fn torus_needs_an_endomorphism_of_the_same_complex() {
        let c = two_term(&RingTag::ZZ, 3);
        let other = two_term(&RingTag::ZZ, 5);
        let f = ChainMap::zero_map(c.clone(), other).unwrap();
        assert!(matches!(
            torus_bicomplex(&c, &f, 0, 1),
            Err(Error::NotAnEndomorphism(_))
        ));
    }

    #[test]
    fn witness_verification_notices_tampering() {
        let c = point(&RingTag::Fp(2), 0);
        let h = scale_endo(&c, 1);
        let w = torus_bicomplex(&c, &h, 0, 3).unwrap();
        let x = TotCocycle::new(0, BTreeMap::from([(0, vec_of(&RingTag::Fp(2), &[1]))]));
        let y = contract_lt(&w, &x).unwrap();
        let mut terms = y.terms().clone();
        terms.remove(&1);
        let forged = Witness {
            n: y.n(),
            terms,
            verified: y.verified_range(),
        };
        assert_eq!(
            verify_witness(&w, &x, &forged),
            Err(Error::WitnessMismatch { p: 1 })
        );
    }
}
