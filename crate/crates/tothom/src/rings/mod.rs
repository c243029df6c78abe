//! Coefficient rings and their elements.
//!
//! Four rings are supported: the integers `ZZ`, the rationals `QQ`, prime
//! fields `Fp(p)`, and Laurent polynomial rings `Laurent(base)` over one of
//! the former three. All arithmetic is exact; there is no floating point
//! anywhere in this crate.

mod laurent;
mod scalar;
mod series;

pub use laurent::{laurent_arith, LaurentOp, LaurentPoly};
pub use scalar::Scalar;
pub use series::{novikov_unit, series_arith, series_invert, SeriesDir, SeriesOp, SeriesWindow, UnitReport};

use crate::{Error, Result};

/// Tag naming one of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingTag {
    ZZ,
    QQ,
    Fp(u64),
    Laurent(Box<RingTag>),
}

impl RingTag {
    /// Prime field tag; rejects composite or trivial moduli.
    pub fn fp(p: u64) -> Result<RingTag> {
        if is_prime_u64(p) {
            Ok(RingTag::Fp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Laurent polynomial ring over a base ring; nesting is rejected.
    pub fn laurent(base: RingTag) -> Result<RingTag> {
        base.validate()?;
        if base.is_base() {
            Ok(RingTag::Laurent(Box::new(base)))
        } else {
            Err(Error::NestedLaurent)
        }
    }

    /// Re-checks the tag invariants (used when tags come from parsed input).
    pub fn validate(&self) -> Result<()> {
        match self {
            RingTag::ZZ | RingTag::QQ => Ok(()),
            RingTag::Fp(p) => {
                if is_prime_u64(*p) {
                    Ok(())
                } else {
                    Err(Error::NotPrime(*p))
                }
            }
            RingTag::Laurent(b) => {
                b.validate()?;
                if b.is_base() {
                    Ok(())
                } else {
                    Err(Error::NestedLaurent)
                }
            }
        }
    }

    /// True for `QQ` and `Fp(p)`.
    pub fn is_field(&self) -> bool {
        matches!(self, RingTag::QQ | RingTag::Fp(_))
    }

    /// True for the non-Laurent rings.
    pub fn is_base(&self) -> bool {
        !matches!(self, RingTag::Laurent(_))
    }

    /// The base ring of a Laurent tag, `None` otherwise.
    pub fn laurent_base(&self) -> Option<&RingTag> {
        match self {
            RingTag::Laurent(b) => Some(b),
            _ => None,
        }
    }

    /// The underlying scalar ring: `self` for base tags, the base for Laurent tags.
    pub fn base(&self) -> &RingTag {
        match self {
            RingTag::Laurent(b) => b,
            other => other,
        }
    }

    /// Zero element of the tagged ring.
    pub fn zero(&self) -> Elem {
        match self {
            RingTag::Laurent(_) => Elem::Laurent(LaurentPoly::zero()),
            base => Elem::Scalar(Scalar::zero(base)),
        }
    }

    /// One element of the tagged ring.
    pub fn one(&self) -> Elem {
        match self {
            RingTag::Laurent(b) => Elem::Laurent(LaurentPoly::constant(Scalar::one(b))),
            base => Elem::Scalar(Scalar::one(base)),
        }
    }
}

impl std::fmt::Display for RingTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingTag::ZZ => write!(f, "ZZ"),
            RingTag::QQ => write!(f, "QQ"),
            RingTag::Fp(p) => write!(f, "F{}", p),
            RingTag::Laurent(b) => write!(f, "{}[z,z^-1]", b),
        }
    }
}

/// An element of a tagged ring: a scalar for base tags, a Laurent polynomial
/// for Laurent tags. Arithmetic panics on mixed variants; matrix and complex
/// constructors enforce tag consistency so a mismatch is a programming error.
#[derive(Clone, Debug, PartialEq)]
pub enum Elem {
    Scalar(Scalar),
    Laurent(LaurentPoly),
}

impl Elem {
    pub fn zero(tag: &RingTag) -> Elem {
        tag.zero()
    }

    pub fn one(tag: &RingTag) -> Elem {
        tag.one()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Scalar(s) => s.is_zero(),
            Elem::Laurent(p) => p.is_zero(),
        }
    }

    /// Whether the element is a legal inhabitant of the tagged ring.
    pub fn fits(&self, tag: &RingTag) -> bool {
        match (self, tag) {
            (Elem::Scalar(s), t) if t.is_base() => s.fits(t),
            (Elem::Laurent(p), RingTag::Laurent(b)) => p.fits(b),
            _ => false,
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        match (self, other) {
            (Elem::Scalar(a), Elem::Scalar(b)) => Elem::Scalar(a.add(b)),
            (Elem::Laurent(a), Elem::Laurent(b)) => Elem::Laurent(a.add(b)),
            _ => panic!("mixed ring element variants"),
        }
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        match (self, other) {
            (Elem::Scalar(a), Elem::Scalar(b)) => Elem::Scalar(a.sub(b)),
            (Elem::Laurent(a), Elem::Laurent(b)) => Elem::Laurent(a.sub(b)),
            _ => panic!("mixed ring element variants"),
        }
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        match (self, other) {
            (Elem::Scalar(a), Elem::Scalar(b)) => Elem::Scalar(a.mul(b)),
            (Elem::Laurent(a), Elem::Laurent(b)) => Elem::Laurent(a.mul(b)),
            _ => panic!("mixed ring element variants"),
        }
    }

    pub fn neg(&self) -> Elem {
        match self {
            Elem::Scalar(a) => Elem::Scalar(a.neg()),
            Elem::Laurent(a) => Elem::Laurent(a.neg()),
        }
    }

    /// Image of the element under the canonical map into `to`, when one
    /// exists: scalar casts (`ZZ -> QQ`, `ZZ -> F_p`), the constant
    /// embedding of a base ring into its Laurent ring, and coefficient-wise
    /// casts between Laurent rings.
    pub fn cast(&self, to: &RingTag) -> Result<Elem> {
        match (self, to) {
            (Elem::Scalar(s), t) if t.is_base() => Ok(Elem::Scalar(s.cast(t)?)),
            (Elem::Scalar(s), RingTag::Laurent(b)) => {
                let c = s.cast(b)?;
                Ok(Elem::Laurent(if c.is_zero() {
                    LaurentPoly::zero()
                } else {
                    LaurentPoly::constant(c)
                }))
            }
            (Elem::Laurent(p), RingTag::Laurent(b)) => {
                let mut terms = Vec::new();
                for (e, c) in p.terms() {
                    terms.push((e, c.cast(b)?));
                }
                Ok(Elem::Laurent(LaurentPoly::from_terms(terms)))
            }
            (_, t) => Err(Error::NoCanonicalMap("a Laurent ring".into(), t.to_string())),
        }
    }

    /// Borrow as scalar; panics on Laurent elements.
    pub fn as_scalar(&self) -> &Scalar {
        match self {
            Elem::Scalar(s) => s,
            Elem::Laurent(_) => panic!("expected scalar ring element"),
        }
    }

    /// Borrow as Laurent polynomial; panics on scalar elements.
    pub fn as_laurent(&self) -> &LaurentPoly {
        match self {
            Elem::Laurent(p) => p,
            Elem::Scalar(_) => panic!("expected Laurent ring element"),
        }
    }
}

impl std::fmt::Display for Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Elem::Scalar(s) => write!(f, "{}", s),
            Elem::Laurent(p) => write!(f, "{}", p),
        }
    }
}

/// Deterministic Miller–Rabin primality test, exact for all `u64`.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_tags() {
        assert!(RingTag::fp(2).is_ok());
        assert!(RingTag::fp(3).is_ok());
        assert!(RingTag::fp(5).is_ok());
        assert!(RingTag::fp(65537).is_ok());
        assert_eq!(RingTag::fp(1), Err(Error::NotPrime(1)));
        assert_eq!(RingTag::fp(4), Err(Error::NotPrime(4)));
        assert_eq!(RingTag::fp(0), Err(Error::NotPrime(0)));
    }

    #[test]
    fn laurent_nesting_rejected() {
        let l = RingTag::laurent(RingTag::ZZ).unwrap();
        assert_eq!(RingTag::laurent(l), Err(Error::NestedLaurent));
    }

    #[test]
    fn field_predicate() {
        assert!(RingTag::QQ.is_field());
        assert!(RingTag::fp(7).unwrap().is_field());
        assert!(!RingTag::ZZ.is_field());
        assert!(!RingTag::laurent(RingTag::QQ).unwrap().is_field());
    }

    #[test]
    fn elem_fits_tag() {
        let zl = RingTag::laurent(RingTag::ZZ).unwrap();
        assert!(zl.zero().fits(&zl));
        assert!(zl.one().fits(&zl));
        assert!(!zl.one().fits(&RingTag::ZZ));
        assert!(RingTag::ZZ.one().fits(&RingTag::ZZ));
        assert!(!RingTag::ZZ.one().fits(&RingTag::QQ));
    }
}
