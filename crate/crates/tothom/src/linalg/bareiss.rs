//! Fraction-free (Bareiss) elimination over integral domains.
//!
//! Every division performed is by a previous pivot and is exact by the
//! Sylvester determinant identity, so the routine computes ranks and
//! determinants over ZZ and over Laurent polynomial rings without ever
//! leaving the ring. Ranks are taken over the fraction field.

use super::Matrix;
use crate::rings::{Elem, LaurentPoly, RingTag, Scalar};
use crate::{Error, Result};

/// The arithmetic a fraction-free elimination needs from an integral domain.
trait Domain: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn exact_div(&self, other: &Self) -> Option<Self>;
}

impl Domain for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Scalar::sub(self, other)
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        Scalar::exact_div(self, other)
    }
}

impl Domain for LaurentPoly {
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LaurentPoly::sub(self, other)
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        LaurentPoly::exact_div(self, other)
    }
}

/// Runs the elimination with full pivoting (first nonzero entry of the
/// trailing block, scanned row-major). Returns the pivots in order and the
/// sign of the row/column permutation applied.
fn eliminate<D: Domain>(mut a: Vec<Vec<D>>) -> (Vec<D>, i32) {
    let n = a.len();
    let m = a.first().map(Vec::len).unwrap_or(0);
    let mut sign = 1;
    let mut pivots: Vec<D> = Vec::new();
    for k in 0..n.min(m) {
        let mut found = None;
        'scan: for i in k..n {
            for j in k..m {
                if !a[i][j].is_zero() {
                    found = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((pi, pj)) = found else { break };
        if pi != k {
            a.swap(pi, k);
            sign = -sign;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            sign = -sign;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..m {
                let num = pivot.mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = match pivots.last() {
                    None => num,
                    Some(prev) => num
                        .exact_div(prev)
                        .expect("fraction-free elimination: division by a previous pivot is exact"),
                };
            }
            let zero = a[i][k].sub(&a[i][k].clone());
            a[i][k] = zero;
        }
        pivots.push(pivot);
    }
    (pivots, sign)
}

pub(super) fn rank_scalar(m: &Matrix) -> usize {
    eliminate(m.scalar_grid()).0.len()
}

pub(super) fn rank_laurent(m: &Matrix) -> usize {
    eliminate(m.laurent_grid()).0.len()
}

/// Rank of a Laurent-entried matrix over the rational function field,
/// together with the elimination pivots (useful to cross-check the rank by
/// evaluating the matrix at points where no pivot vanishes).
pub fn rank_laurent_with_pivots(m: &Matrix) -> Result<(usize, Vec<LaurentPoly>)> {
    if !matches!(m.ring(), RingTag::Laurent(_)) {
        return Err(Error::UnsupportedRing("pivoted rank".into(), m.ring().to_string()));
    }
    let (pivots, _) = eliminate(m.laurent_grid());
    Ok((pivots.len(), pivots))
}

/// Determinant of a square matrix, computed exactly in its own ring.
pub fn det(m: &Matrix) -> Result<Elem> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare("determinant".into(), m.rows(), m.cols()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Elem::one(m.ring()));
    }
    match m.ring() {
        RingTag::Laurent(_) => {
            let (pivots, sign) = eliminate(m.laurent_grid());
            if pivots.len() < n {
                return Ok(Elem::zero(m.ring()));
            }
            let last = pivots.last().unwrap().clone();
            Ok(Elem::Laurent(if sign < 0 { last.neg() } else { last }))
        }
        _ => {
            let (pivots, sign) = eliminate(m.scalar_grid());
            if pivots.len() < n {
                return Ok(Elem::zero(m.ring()));
            }
            let last = pivots.last().unwrap().clone();
            Ok(Elem::Scalar(if sign < 0 { last.neg() } else { last }))
        }
    }
}
