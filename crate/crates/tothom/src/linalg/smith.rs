//! Smith normal form over the integers, with the unimodular transforms
//! tracked, and the standard consequences: integer kernels, exact linear
//! solving, and cokernel invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::rings::RingTag;
use crate::{Error, Result};

/// A factorisation `u * a * v = s` with `u`, `v` unimodular and `s`
/// diagonal, nonnegative, each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    pub u: Matrix,
    pub s: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    /// Recomputes `u * a * v` and compares with `s`.
    pub fn check(&self, a: &Matrix) -> bool {
        self.u.mul(a).mul(&self.v) == self.s
    }

    /// The nonzero diagonal entries, in divisibility order.
    pub fn invariants(&self) -> Vec<BigInt> {
        let grid = self.s.bigint_grid();
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| grid[i][i].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

fn require_int(m: &Matrix, op: &str) -> Result<()> {
    if *m.ring() == RingTag::ZZ {
        Ok(())
    } else {
        Err(Error::UnsupportedRing(op.into(), m.ring().to_string()))
    }
}

/// Smith normal form of an integer matrix.
///
/// Pivot selection is deterministic (smallest absolute value, row-major
/// tie-break), so equal inputs yield identical transforms.
pub fn smith_normal_form(a: &Matrix) -> Result<SmithForm> {
    require_int(a, "Smith normal form")?;
    let n = a.rows();
    let m = a.cols();
    let mut s = a.bigint_grid();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let swap_rows = |s: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        s.swap(a, b);
        u.swap(a, b);
    };
    let swap_cols = |s: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in s.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    };
    // row_i -= q * row_t, mirrored on u
    let row_sub = |s: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, t: usize, q: &BigInt| {
        for j in 0..m {
            let d = &s[t][j] * q;
            s[i][j] -= d;
        }
        for j in 0..n {
            let d = &u[t][j] * q;
            u[i][j] -= d;
        }
    };
    // col_j -= q * col_t, mirrored on v
    let col_sub = |s: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, j: usize, t: usize, q: &BigInt| {
        for row in s.iter_mut() {
            let d = &row[t] * q;
            row[j] -= d;
        }
        for row in v.iter_mut() {
            let d = &row[t] * q;
            row[j] -= d;
        }
    };

    'diagonal: for t in 0..n.min(m) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..m {
                    if !s[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'diagonal };
            if pi != t {
                swap_rows(&mut s, &mut u, pi, t);
            }
            if pj != t {
                swap_cols(&mut s, &mut v, pj, t);
            }
            let mut dirty = false;
            for i in t + 1..n {
                if !s[i][t].is_zero() {
                    let q = &s[i][t] / &s[t][t];
                    row_sub(&mut s, &mut u, i, t, &q);
                    dirty |= !s[i][t].is_zero();
                }
            }
            for j in t + 1..m {
                if !s[t][j].is_zero() {
                    let q = &s[t][j] / &s[t][t];
                    col_sub(&mut s, &mut v, j, t, &q);
                    dirty |= !s[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // ensure the pivot divides the whole trailing block
            let mut offender = None;
            'scan: for i in t + 1..n {
                for j in t + 1..m {
                    if !(&s[i][j] % &s[t][t]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = offender {
                let minus_one = -BigInt::one();
                row_sub(&mut s, &mut u, t, i, &minus_one);
                continue;
            }
            if s[t][t].is_negative() {
                for j in 0..m {
                    s[t][j] = -s[t][j].clone();
                }
                for j in 0..n {
                    u[t][j] = -u[t][j].clone();
                }
            }
            break;
        }
    }

    Ok(SmithForm {
        u: Matrix::from_bigint_grid(u),
        s: Matrix::from_bigint_grid(s),
        v: Matrix::from_bigint_grid(v),
    })
}

/// A matrix whose columns form a basis of the integer kernel of `a`.
pub fn kernel_basis(a: &Matrix) -> Result<Matrix> {
    require_int(a, "integer kernel")?;
    let snf = smith_normal_form(a)?;
    let r = snf.invariants().len();
    Ok(snf.v.submatrix(0, a.cols(), r, a.cols()))
}

/// Solves `a * x = b` over the integers (multiple right-hand columns),
/// exactly. `None` when some column has no integral solution. Free
/// coordinates are set to zero, so the answer is deterministic.
pub fn solve_exact_int(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    require_int(a, "exact integer solve")?;
    require_int(b, "exact integer solve")?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix has {} rows, right-hand side {}",
            a.rows(),
            b.rows()
        )));
    }
    let snf = smith_normal_form(a)?;
    let w = snf.u.mul(b).bigint_grid();
    let s = snf.s.bigint_grid();
    let r = snf.invariants().len();
    let mut y: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); b.cols()]; a.cols()];
    for c in 0..b.cols() {
        for i in 0..a.rows() {
            if i < r {
                let (q, rem) = w[i][c].div_rem(&s[i][i]);
                if !rem.is_zero() {
                    return Ok(None);
                }
                y[i][c] = q;
            } else if !w[i][c].is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(snf.v.mul(&Matrix::from_bigint_grid(y))))
}

/// Free rank and nontrivial torsion orders of the cokernel of `a`,
/// i.e. of `ZZ^rows / im(a)`. Torsion orders appear in divisibility order.
pub fn cokernel_invariants(a: &Matrix) -> Result<(usize, Vec<BigInt>)> {
    require_int(a, "cokernel invariants")?;
    let snf = smith_normal_form(a)?;
    let inv = snf.invariants();
    let free = a.rows() - inv.len();
    let torsion = inv.into_iter().filter(|d| !d.is_one()).collect();
    Ok((free, torsion))
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular(a: &Matrix) -> Result<Matrix> {
    require_int(a, "unimodular inverse")?;
    if a.rows() != a.cols() {
        return Err(Error::NotSquare("unimodular inverse".into(), a.rows(), a.cols()));
    }
    let snf = smith_normal_form(a)?;
    let inv = snf.invariants();
    if inv.len() != a.rows() || inv.iter().any(|d| !d.is_one()) {
        return Err(Error::Infeasible("matrix is not unimodular".into()));
    }
    let x = solve_exact_int(a, &Matrix::identity(RingTag::ZZ, a.rows()))?
        .expect("a unimodular system always has an integral solution");
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Elem, Scalar};

    fn zz(entries: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            RingTag::ZZ,
            entries
                .iter()
                .map(|r| r.iter().map(|&v| Elem::Scalar(Scalar::int(v))).collect())
                .collect(),
        )
        .unwrap()
    }

    fn diag_of(m: &Matrix) -> Vec<i64> {
        (0..m.rows().min(m.cols()))
            .map(|i| match m.get(i, i).as_scalar() {
                Scalar::Int(n) => {
                    let (sign, digits) = n.to_u64_digits();
                    let mag = digits.first().copied().unwrap_or(0) as i64;
                    if sign == num_bigint::Sign::Minus { -mag } else { mag }
                }
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn coprime_diagonal_merges() {
        let a = zz(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&a).unwrap();
        assert!(snf.check(&a));
        assert_eq!(diag_of(&snf.s), vec![1, 6]);
    }

    #[test]
    fn one_by_one() {
        let a = zz(&[&[-4]]);
        let snf = smith_normal_form(&a).unwrap();
        assert!(snf.check(&a));
        assert_eq!(diag_of(&snf.s), vec![4]);
    }

    #[test]
    fn identity_is_fixed() {
        let a = Matrix::identity(RingTag::ZZ, 3);
        let snf = smith_normal_form(&a).unwrap();
        assert!(snf.check(&a));
        assert_eq!(diag_of(&snf.s), vec![1, 1, 1]);
    }

    #[test]
    fn rectangular_with_torsion() {
        let a = zz(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = smith_normal_form(&a).unwrap();
        assert!(snf.check(&a));
        let d = diag_of(&snf.s);
        assert_eq!(d.len(), 3);
        for w in d.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0].max(1), 0, "divisibility chain broken: {:?}", d);
            }
        }
        // d1 = gcd of entries, d1*d2 = gcd of 2x2 minors, d1*d2*d3 = |det|
        assert_eq!(d, vec![2, 2, 156]);
    }

    #[test]
    fn kernel_of_a_row() {
        let a = zz(&[&[1, 2, 3]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!((k.rows(), k.cols()), (3, 2));
        assert!(a.mul(&k).is_zero());
        // columns are independent over QQ
        let kq = k.map_entries(RingTag::QQ, |e| match e.as_scalar() {
            Scalar::Int(n) => Elem::Scalar(Scalar::Rat(num_rational::BigRational::from(n.clone()))),
            _ => unreachable!(),
        });
        assert_eq!(super::super::rank(&kq).unwrap(), 2);
    }

    #[test]
    fn exact_solving() {
        let a = zz(&[&[2, 0], &[0, 3]]);
        let b = zz(&[&[4], &[9]]);
        let x = solve_exact_int(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul(&x), b);
        let b = zz(&[&[3], &[9]]);
        assert_eq!(solve_exact_int(&a, &b).unwrap(), None);
    }

    #[test]
    fn solving_underdetermined_systems() {
        let a = zz(&[&[2, 4]]);
        let b = zz(&[&[6]]);
        let x = solve_exact_int(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul(&x), b);
    }

    #[test]
    fn cokernel_examples() {
        let (free, torsion) = cokernel_invariants(&zz(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!((free, torsion), (0, vec![BigInt::from(6)]));
        let (free, torsion) = cokernel_invariants(&Matrix::zero(RingTag::ZZ, 2, 1)).unwrap();
        assert_eq!((free, torsion), (2, vec![]));
        let (free, torsion) = cokernel_invariants(&zz(&[&[2, 1], &[0, 3]])).unwrap();
        assert_eq!((free, torsion), (0, vec![BigInt::from(6)]));
    }

    #[test]
    fn unimodular_inverse() {
        let a = zz(&[&[1, 1], &[0, 1]]);
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(RingTag::ZZ, 2));
        assert_eq!(inv, zz(&[&[1, -1], &[0, 1]]));
        assert!(inverse_unimodular(&zz(&[&[2]])).is_err());
    }

    #[test]
    fn transforms_are_unimodular() {
        let a = zz(&[&[6, 4], &[2, 8]]);
        let snf = smith_normal_form(&a).unwrap();
        assert!(snf.check(&a));
        for m in [&snf.u, &snf.v] {
            let d = super::super::det(m).unwrap();
            assert!(
                d == Elem::Scalar(Scalar::int(1)) || d == Elem::Scalar(Scalar::int(-1)),
                "transform determinant {}",
                d
            );
        }
    }
}
