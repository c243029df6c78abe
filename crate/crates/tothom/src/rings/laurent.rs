use std::collections::BTreeMap;
use std::fmt;

use super::{RingTag, Scalar};
use crate::{Error, Result};

/// A sparse Laurent polynomial: a finite map from exponents to nonzero
/// scalar coefficients. The map never stores zero coefficients, so equal
/// polynomials compare equal structurally.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Scalar>,
}

/// Binary operation selector for [`laurent_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaurentOp {
    Add,
    Sub,
    Mul,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> LaurentPoly {
        LaurentPoly::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: Scalar) -> LaurentPoly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    /// Builds a polynomial from terms, summing duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(terms: I) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, exp: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&exp) {
            None => {
                self.coeffs.insert(exp, c.clone());
            }
            Some(old) => {
                let s = old.add(c);
                if !s.is_zero() {
                    self.coeffs.insert(exp, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn lo_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with nonzero coefficient.
    pub fn hi_deg(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i64) -> Option<&Scalar> {
        self.coeffs.get(&exp)
    }

    /// Coefficient at `exp`, materialising the zero of `base` when absent.
    pub fn coeff_or_zero(&self, exp: i64, base: &RingTag) -> Scalar {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| Scalar::zero(base))
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether all coefficients live in `base`.
    pub fn fits(&self, base: &RingTag) -> bool {
        self.coeffs.values().all(|c| c.fits(base))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                out.add_term(ea + eb, &ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, v)| (e, v.mul(c))))
    }

    /// Multiplies by the monomial `c * z^shift`.
    pub fn mul_monomial(&self, shift: i64, c: &Scalar) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, v)| (e + shift, v.mul(c))))
    }

    /// Substitutes `z = at`. Negative exponents require `at` to be a unit.
    pub fn eval(&self, at: &Scalar) -> Option<Scalar> {
        let mut acc = Scalar::zero(&at.tag());
        for (e, c) in self.terms() {
            acc = acc.add(&c.mul(&at.pow(e)?));
        }
        Some(acc)
    }

    /// Units of `R[z, z^-1]` over a domain `R` are `u * z^k` with `u` a unit of `R`.
    pub fn is_unit_in_laurent_ring(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().unwrap().is_unit()
    }

    /// Mirrors the variable: `z -> z^-1` (exponent negation).
    pub fn mirror(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Exact quotient in the Laurent ring, if `other` divides `self`.
    ///
    /// Both operands are stripped to ordinary polynomials (lowest exponent
    /// shifted to zero) and divided by long division; the quotient is shifted
    /// back. Over `ZZ` each leading-coefficient division must itself be exact.
    pub fn exact_div(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let a_lo = self.lo_deg().unwrap();
        let b_lo = other.lo_deg().unwrap();
        let b_hi = other.hi_deg().unwrap() - b_lo;
        let lead = other.coeff(b_hi + b_lo).unwrap();
        let mut rem = self.mul_monomial(-a_lo, &Scalar::one(&scalar_tag(self)?));
        let b = other.mul_monomial(-b_lo, &Scalar::one(&scalar_tag(other)?));
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() {
            let r_hi = rem.hi_deg().unwrap();
            if r_hi < b_hi {
                return None;
            }
            let c = rem.coeff(r_hi).unwrap().exact_div(lead)?;
            let shift = r_hi - b_hi;
            quot.add_term(shift, &c);
            rem = rem.sub(&b.mul_monomial(shift, &c));
        }
        Some(quot.mul_monomial(a_lo - b_lo, &Scalar::one(&scalar_tag(self)?)))
    }
}

fn scalar_tag(p: &LaurentPoly) -> Option<RingTag> {
    p.coeffs.values().next().map(|c| c.tag())
}

/// Exact ring arithmetic on Laurent polynomials with a coefficient
/// compatibility check (the zero polynomial is compatible with everything).
pub fn laurent_arith(a: &LaurentPoly, b: &LaurentPoly, op: LaurentOp) -> Result<LaurentPoly> {
    if let (Some(ta), Some(tb)) = (scalar_tag(a), scalar_tag(b)) {
        if ta != tb {
            return Err(Error::RingMismatch(format!("{} vs {}", ta, tb)));
        }
    }
    Ok(match op {
        LaurentOp::Add => a.add(b),
        LaurentOp::Sub => a.sub(b),
        LaurentOp::Mul => a.mul(b),
    })
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, cs),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = mag != "1" || e == 0;
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            if e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if e == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Scalar::int(c))))
    }

    #[test]
    fn add_cancels_to_canonical_form() {
        // (2 - z) + z = 2, with no stored zero coefficient at exponent 1
        let a = zz(&[(0, 2), (1, -1)]);
        let b = zz(&[(1, 1)]);
        let s = laurent_arith(&a, &b, LaurentOp::Add).unwrap();
        assert_eq!(s, zz(&[(0, 2)]));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn difference_of_squares() {
        let a = zz(&[(0, 1), (1, -1)]);
        let b = zz(&[(0, 1), (1, 1)]);
        assert_eq!(laurent_arith(&a, &b, LaurentOp::Mul).unwrap(), zz(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn char_two_square() {
        // (1 + z)^2 = 1 + z^2 over F_2
        let one_plus_z =
            LaurentPoly::from_terms([(0, Scalar::fp(2, 1)), (1, Scalar::fp(2, 1))]);
        let sq = one_plus_z.mul(&one_plus_z);
        assert_eq!(sq, LaurentPoly::from_terms([(0, Scalar::fp(2, 1)), (2, Scalar::fp(2, 1))]));
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = zz(&[(0, 1)]);
        let b = LaurentPoly::constant(Scalar::fp(2, 1));
        assert!(laurent_arith(&a, &b, LaurentOp::Add).is_err());
        // the zero polynomial carries no coefficients and is compatible
        assert!(laurent_arith(&LaurentPoly::zero(), &b, LaurentOp::Add).is_ok());
    }

    #[test]
    fn degree_accessors() {
        let a = zz(&[(-2, 3), (5, 1)]);
        assert_eq!(a.lo_deg(), Some(-2));
        assert_eq!(a.hi_deg(), Some(5));
        assert_eq!(LaurentPoly::zero().lo_deg(), None);
    }

    #[test]
    fn laurent_units() {
        assert!(zz(&[(3, -1)]).is_unit_in_laurent_ring());
        assert!(!zz(&[(0, 2)]).is_unit_in_laurent_ring());
        assert!(!zz(&[(0, 2), (1, -1)]).is_unit_in_laurent_ring());
        assert!(LaurentPoly::constant(Scalar::fp(5, 3)).is_unit_in_laurent_ring());
    }

    #[test]
    fn exact_division() {
        let prod = zz(&[(0, 1), (2, -1)]);
        let q = prod.exact_div(&zz(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!(q, zz(&[(0, 1), (1, -1)]));
        // shifted divisor: (z^-1 - z) / (z^-1 + 1) = 1 - z ... check via product
        let a = zz(&[(-1, 1), (1, -1)]);
        let b = zz(&[(-1, 1), (0, 1)]);
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        assert_eq!(zz(&[(0, 7)]).exact_div(&zz(&[(0, 2)])), None);
        assert_eq!(zz(&[(0, 1), (1, 1)]).exact_div(&zz(&[(0, 1), (1, -1)])), None);
    }

    #[test]
    fn eval_at_unit() {
        let a = zz(&[(-1, 2), (1, 3)]); // 2 z^-1 + 3 z
        assert_eq!(a.eval(&Scalar::int(-1)), Some(Scalar::int(-5)));
        assert_eq!(a.eval(&Scalar::int(2)), None); // 2 is not a unit of ZZ
        let b = LaurentPoly::from_terms([(-1, Scalar::rat(1, 1))]);
        assert_eq!(b.eval(&Scalar::rat(2, 1)), Some(Scalar::rat(1, 2)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(zz(&[(0, 2), (1, -1)]).to_string(), "2 - z");
        assert_eq!(zz(&[(-2, -2), (-1, -1)]).to_string(), "-2*z^-2 - z^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(zz(&[(1, 1)]).to_string(), "z");
    }
}
