use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RingTag;
use crate::{Error, Result};

/// An exact element of one of the base rings `ZZ`, `QQ` or `F_p`.
///
/// The variant identifies the ring, so elements are self-describing;
/// arithmetic between elements of different rings panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp { p: u64, val: u64 },
}

impl Scalar {
    pub fn int<T: Into<BigInt>>(v: T) -> Scalar {
        Scalar::Int(v.into())
    }

    /// Rational `n/d`; panics on `d == 0`. Reduced with positive denominator.
    pub fn rat(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Residue of `v` modulo the prime `p`.
    pub fn fp(p: u64, v: i64) -> Scalar {
        Scalar::Fp { p, val: v.rem_euclid(p as i64) as u64 }
    }

    pub fn zero(tag: &RingTag) -> Scalar {
        match tag {
            RingTag::ZZ => Scalar::Int(BigInt::zero()),
            RingTag::QQ => Scalar::Rat(BigRational::zero()),
            RingTag::Fp(p) => Scalar::Fp { p: *p, val: 0 },
            RingTag::Laurent(_) => panic!("scalar of Laurent tag"),
        }
    }

    pub fn one(tag: &RingTag) -> Scalar {
        match tag {
            RingTag::ZZ => Scalar::Int(BigInt::one()),
            RingTag::QQ => Scalar::Rat(BigRational::one()),
            RingTag::Fp(p) => Scalar::Fp { p: *p, val: 1 % *p },
            RingTag::Laurent(_) => panic!("scalar of Laurent tag"),
        }
    }

    /// Image of the scalar under the canonical map into `to`, when one
    /// exists: identity, `ZZ -> QQ`, or reduction `ZZ -> F_p`.
    pub fn cast(&self, to: &RingTag) -> Result<Scalar> {
        if self.fits(to) {
            return Ok(self.clone());
        }
        match (self, to) {
            (Scalar::Int(n), RingTag::QQ) => Ok(Scalar::Rat(BigRational::from(n.clone()))),
            (Scalar::Int(n), RingTag::Fp(p)) => {
                let m = n.mod_floor(&BigInt::from(*p));
                let (_, digits) = m.to_u64_digits();
                Ok(Scalar::Fp { p: *p, val: digits.first().copied().unwrap_or(0) })
            }
            _ => Err(Error::NoCanonicalMap(self.tag().to_string(), to.to_string())),
        }
    }

    /// The ring this scalar inhabits.
    pub fn tag(&self) -> RingTag {
        match self {
            Scalar::Int(_) => RingTag::ZZ,
            Scalar::Rat(_) => RingTag::QQ,
            Scalar::Fp { p, .. } => RingTag::Fp(*p),
        }
    }

    pub fn fits(&self, tag: &RingTag) -> bool {
        self.tag() == *tag
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
            Scalar::Fp { p, val } => *val == 1 % *p,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) if p == q => {
                Scalar::Fp { p: *p, val: ((*a as u128 + *b as u128) % *p as u128) as u64 }
            }
            _ => panic!("mixed scalar rings"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) if p == q => {
                Scalar::Fp { p: *p, val: ((*a as u128 * *b as u128) % *p as u128) as u64 }
            }
            _ => panic!("mixed scalar rings"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, val } => Scalar::Fp { p: *p, val: if *val == 0 { 0 } else { p - val } },
        }
    }

    /// Multiplicative inverse, when the element is a unit of its ring.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(a) => {
                if a.abs().is_one() {
                    Some(Scalar::Int(a.clone()))
                } else {
                    None
                }
            }
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp { p, val } => {
                if *val == 0 {
                    None
                } else {
                    Some(Scalar::Fp { p: *p, val: mod_inverse(*val, *p) })
                }
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Int(a) => a.abs().is_one(),
            Scalar::Rat(a) => !a.is_zero(),
            Scalar::Fp { val, .. } => *val != 0,
        }
    }

    /// Exact quotient `self / other`, when it exists in the ring.
    pub fn exact_div(&self, other: &Scalar) -> Option<Scalar> {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                if b.is_zero() {
                    return None;
                }
                let (q, r) = a.div_rem(b);
                if r.is_zero() {
                    Some(Scalar::Int(q))
                } else {
                    None
                }
            }
            _ => other.inv().map(|i| self.mul(&i)),
        }
    }

    /// `self^e`; negative exponents require a unit.
    pub fn pow(&self, e: i64) -> Option<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(&self.tag());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }

    /// Parses the textual form of an element of `tag`: decimal for `ZZ`,
    /// `a/b` or `a` for `QQ`, and a decimal in `[0, p)` for `F_p`.
    pub fn parse(s: &str, tag: &RingTag) -> Result<Scalar> {
        let s = s.trim();
        match tag {
            RingTag::ZZ => s
                .parse::<BigInt>()
                .map(Scalar::Int)
                .map_err(|_| Error::Parse(format!("invalid integer {s:?}"))),
            RingTag::QQ => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n = n.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
                let d = d.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
            RingTag::Fp(p) => {
                let v = s
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("invalid F{p} residue {s:?}")))?;
                if v >= *p {
                    return Err(Error::Parse(format!("residue {v} out of range [0,{p})")));
                }
                Ok(Scalar::Fp { p: *p, val: v })
            }
            RingTag::Laurent(_) => Err(Error::Parse("scalar text cannot have a Laurent tag".into())),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{}", v),
            Scalar::Rat(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{}", val),
        }
    }
}

/// Inverse of `a` modulo the prime `p` via the extended Euclidean algorithm.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of a non-unit residue");
    t.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let a = Scalar::rat(2, 4);
        let b = Scalar::rat(1, 2);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(Scalar::rat(3, -6).to_string(), "-1/2");
        assert_eq!(Scalar::rat(4, 2).to_string(), "2");
    }

    #[test]
    fn fp_arithmetic_wraps() {
        let a = Scalar::fp(5, 3);
        let b = Scalar::fp(5, 4);
        assert_eq!(a.add(&b), Scalar::fp(5, 2));
        assert_eq!(a.mul(&b), Scalar::fp(5, 2));
        assert_eq!(a.neg(), Scalar::fp(5, 2));
        assert_eq!(Scalar::fp(5, -1), Scalar::fp(5, 4));
    }

    #[test]
    fn inverses() {
        assert_eq!(Scalar::int(-1).inv(), Some(Scalar::int(-1)));
        assert_eq!(Scalar::int(2).inv(), None);
        assert_eq!(Scalar::int(0).inv(), None);
        assert_eq!(Scalar::rat(2, 3).inv(), Some(Scalar::rat(3, 2)));
        let x = Scalar::fp(7, 3);
        assert_eq!(x.mul(&x.inv().unwrap()), Scalar::fp(7, 1));
    }

    #[test]
    fn exact_division_over_zz() {
        assert_eq!(Scalar::int(6).exact_div(&Scalar::int(3)), Some(Scalar::int(2)));
        assert_eq!(Scalar::int(-6).exact_div(&Scalar::int(3)), Some(Scalar::int(-2)));
        assert_eq!(Scalar::int(7).exact_div(&Scalar::int(3)), None);
        assert_eq!(Scalar::int(7).exact_div(&Scalar::int(0)), None);
    }

    #[test]
    fn parse_round_trips() {
        let tags = [RingTag::ZZ, RingTag::QQ, RingTag::fp(5).unwrap()];
        for (tag, text) in [(&tags[0], "-12"), (&tags[1], "3/4"), (&tags[1], "7"), (&tags[2], "3")] {
            let s = Scalar::parse(text, tag).unwrap();
            assert_eq!(Scalar::parse(&s.to_string(), tag).unwrap(), s);
        }
        assert!(Scalar::parse("5", &RingTag::fp(5).unwrap()).is_err());
        assert!(Scalar::parse("1/0", &RingTag::QQ).is_err());
        assert!(Scalar::parse("x", &RingTag::ZZ).is_err());
    }
}
