use std::collections::BTreeMap;
use std::fmt;

use super::{LaurentPoly, RingTag, Scalar};
use crate::{Error, Result};

/// Which formal Laurent series ring a window approximates.
///
/// `Lt` stands for series bounded below (finitely many negative-exponent
/// terms), `Rt` for series bounded above. A Laurent polynomial embeds in
/// both; inverses generally exist in only one of the two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesDir {
    Lt,
    Rt,
}

/// Binary operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
}

/// A windowed approximation of a formal Laurent series.
///
/// For `dir = Lt` the element is known exactly at every exponent `<= hi`:
/// it is zero below `lo` and carries the stored coefficients on `[lo, hi]`;
/// above `hi` it is unknown. For `dir = Rt` the roles of the two ends swap.
/// Stored coefficients omit zeros, so equal windows compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesWindow {
    dir: SeriesDir,
    base: RingTag,
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, Scalar>,
}

/// Outcome of the unit test against a series ring: the governing pivot term
/// and whether its coefficient is a unit of the base ring.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitReport {
    pub unit: bool,
    pub pivot_exp: i64,
    pub pivot_coeff: Scalar,
}

impl SeriesWindow {
    pub fn new(
        dir: SeriesDir,
        base: RingTag,
        lo: i64,
        hi: i64,
        coeffs: BTreeMap<i64, Scalar>,
    ) -> Result<SeriesWindow> {
        base.validate()?;
        if !base.is_base() {
            return Err(Error::RingMismatch("series windows take base-ring coefficients".into()));
        }
        if lo > hi {
            return Err(Error::EmptyWindow(format!("lo {} > hi {}", lo, hi)));
        }
        let mut clean = BTreeMap::new();
        for (e, c) in coeffs {
            if e < lo || e > hi {
                return Err(Error::Parse(format!("coefficient exponent {} outside window [{},{}]", e, lo, hi)));
            }
            if !c.fits(&base) {
                return Err(Error::RingMismatch(format!("coefficient {} does not live in {}", c, base)));
            }
            if !c.is_zero() {
                clean.insert(e, c);
            }
        }
        Ok(SeriesWindow { dir, base, lo, hi, coeffs: clean })
    }

    /// Views a Laurent polynomial through a window.
    ///
    /// The polynomial must vanish on the window's known-zero side; terms on
    /// the unknown side are forgotten (the window is a sound approximation).
    pub fn from_poly(
        f: &LaurentPoly,
        dir: SeriesDir,
        base: RingTag,
        lo: i64,
        hi: i64,
    ) -> Result<SeriesWindow> {
        match dir {
            SeriesDir::Lt => {
                if let Some(d) = f.lo_deg() {
                    if d < lo {
                        return Err(Error::Parse(format!(
                            "term at exponent {} contradicts known-zero region below {}",
                            d, lo
                        )));
                    }
                }
            }
            SeriesDir::Rt => {
                if let Some(d) = f.hi_deg() {
                    if d > hi {
                        return Err(Error::Parse(format!(
                            "term at exponent {} contradicts known-zero region above {}",
                            d, hi
                        )));
                    }
                }
            }
        }
        let coeffs = f
            .terms()
            .filter(|(e, _)| *e >= lo && *e <= hi)
            .map(|(e, c)| (e, c.clone()))
            .collect();
        SeriesWindow::new(dir, base, lo, hi, coeffs)
    }

    pub fn dir(&self) -> SeriesDir {
        self.dir
    }

    pub fn base(&self) -> &RingTag {
        &self.base
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Coefficient at `exp`, or `None` when the exponent is undetermined.
    pub fn coeff(&self, exp: i64) -> Option<Scalar> {
        if exp >= self.lo && exp <= self.hi {
            return Some(self.coeffs.get(&exp).cloned().unwrap_or_else(|| Scalar::zero(&self.base)));
        }
        let known_zero = match self.dir {
            SeriesDir::Lt => exp < self.lo,
            SeriesDir::Rt => exp > self.hi,
        };
        if known_zero {
            Some(Scalar::zero(&self.base))
        } else {
            None
        }
    }

    /// Nonzero stored coefficients in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// True when the window provably shows the constant series `1`.
    pub fn is_one(&self) -> bool {
        self.lo <= 0
            && self.hi >= 0
            && self.coeffs.len() == 1
            && self.coeffs.get(&0).map(Scalar::is_one).unwrap_or(false)
    }
}

impl fmt::Display for SeriesWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, c.clone())));
        let marker = match self.dir {
            SeriesDir::Lt => "lt",
            SeriesDir::Rt => "rt",
        };
        write!(f, "{} on [{},{}] ({})", poly, self.lo, self.hi, marker)
    }
}

/// The pivot term of `f` with respect to `dir` — lowest exponent for `Lt`,
/// highest for `Rt` — and whether its coefficient is a unit of the base ring.
/// A nonzero Laurent polynomial is a unit of the corresponding series ring
/// exactly when the report says `unit`.
pub fn novikov_unit(f: &LaurentPoly, dir: SeriesDir) -> Result<UnitReport> {
    let pivot_exp = match dir {
        SeriesDir::Lt => f.lo_deg(),
        SeriesDir::Rt => f.hi_deg(),
    }
    .ok_or(Error::ZeroPivot)?;
    let pivot_coeff = f.coeff(pivot_exp).unwrap().clone();
    Ok(UnitReport { unit: pivot_coeff.is_unit(), pivot_exp, pivot_coeff })
}

/// Inverts `f` in the series ring selected by `dir`, to `order + 1` determined
/// coefficients starting at the inverse's pivot exponent.
///
/// Writing `f = c z^e (1 - u)` with pivot term `c z^e`, the inverse is
/// `c^-1 z^-e * sum_k u^k`; truncating the geometric sum after `u^order`
/// fixes every coefficient within `order` of the pivot, so the product
/// `f * g` equals `1` on the full window of the product.
pub fn series_invert(f: &LaurentPoly, dir: SeriesDir, order: usize) -> Result<SeriesWindow> {
    let report = novikov_unit(f, dir)?;
    if !report.unit {
        return Err(Error::NonUnitPivot {
            exp: report.pivot_exp,
            coeff: report.pivot_coeff.to_string(),
        });
    }
    let base = report.pivot_coeff.tag();
    let e = report.pivot_exp;
    let c_inv = report.pivot_coeff.inv().expect("unit pivot");
    let order = order as i64;

    // u = 1 - f * c^-1 z^-e has terms strictly on the tail side of 0.
    let t = f.mul_monomial(-e, &c_inv);
    let u = LaurentPoly::constant(Scalar::one(&base)).sub(&t);
    let keep = |p: &LaurentPoly| -> LaurentPoly {
        LaurentPoly::from_terms(
            p.terms()
                .filter(|(exp, _)| match dir {
                    SeriesDir::Lt => *exp <= order,
                    SeriesDir::Rt => *exp >= -order,
                })
                .map(|(exp, v)| (exp, v.clone())),
        )
    };
    let mut acc = LaurentPoly::constant(Scalar::one(&base));
    let mut upow = LaurentPoly::constant(Scalar::one(&base));
    for _ in 0..order {
        upow = keep(&upow.mul(&u));
        if upow.is_zero() {
            break;
        }
        acc = acc.add(&upow);
    }
    let g = acc.mul_monomial(-e, &c_inv);
    let (lo, hi) = match dir {
        SeriesDir::Lt => (-e, -e + order),
        SeriesDir::Rt => (-e - order, -e),
    };
    SeriesWindow::from_poly(&g, dir, base, lo, hi)
}

/// Exact arithmetic on series windows. The output window is the largest
/// interval on which every coefficient of the result is fully determined:
/// for sums the endpoint-wise extremum of the operand windows, for products
/// the intersection of the operand windows each shifted by the other's
/// window start (`Lt`) or end (`Rt`).
pub fn series_arith(a: &SeriesWindow, b: &SeriesWindow, op: SeriesOp) -> Result<SeriesWindow> {
    if a.dir != b.dir {
        return Err(Error::DirMismatch);
    }
    if a.base != b.base {
        return Err(Error::RingMismatch(format!("{} vs {}", a.base, b.base)));
    }
    let dir = a.dir;
    let (lo, hi) = match (op, dir) {
        (SeriesOp::Add, SeriesDir::Lt) => (a.lo.min(b.lo), a.hi.min(b.hi)),
        (SeriesOp::Add, SeriesDir::Rt) => (a.lo.max(b.lo), a.hi.max(b.hi)),
        (SeriesOp::Mul, SeriesDir::Lt) => (a.lo + b.lo, (a.hi + b.lo).min(b.hi + a.lo)),
        (SeriesOp::Mul, SeriesDir::Rt) => ((a.lo + b.hi).max(b.lo + a.hi), a.hi + b.hi),
    };
    if lo > hi {
        return Err(Error::EmptyWindow(format!("result window [{},{}]", lo, hi)));
    }
    let mut acc: BTreeMap<i64, Scalar> = BTreeMap::new();
    let mut put = |e: i64, c: &Scalar| {
        if e < lo || e > hi || c.is_zero() {
            return;
        }
        match acc.remove(&e) {
            None => {
                acc.insert(e, c.clone());
            }
            Some(old) => {
                let s = old.add(c);
                if !s.is_zero() {
                    acc.insert(e, s);
                }
            }
        }
    };
    match op {
        SeriesOp::Add => {
            for (e, c) in a.terms() {
                put(e, c);
            }
            for (e, c) in b.terms() {
                put(e, c);
            }
        }
        SeriesOp::Mul => {
            for (ea, ca) in a.terms() {
                for (eb, cb) in b.terms() {
                    put(ea + eb, &ca.mul(cb));
                }
            }
        }
    }
    SeriesWindow::new(dir, a.base.clone(), lo, hi, acc)
}
