//! Dense matrices with exact entries, plus the elimination back ends:
//! Gaussian elimination over fields, fraction-free (Bareiss) elimination
//! over integral domains, and Smith normal form over the integers.
//!
//! An `n x m` matrix represents a map from the rank-`m` free module to the
//! rank-`n` one; vectors are columns. Constructors validate that entries
//! live in the stated ring; arithmetic on validated matrices panics on
//! ring or shape mismatches rather than returning errors.

use std::fmt;

use num_bigint::BigInt;

use crate::rings::{Elem, LaurentPoly, RingTag, Scalar};
use crate::{Error, Result};

mod bareiss;
mod elim;
mod smith;

pub use bareiss::{det, rank_laurent_with_pivots};
pub use elim::{field_pivot_columns, rank_field, solve_field};
pub use smith::{
    cokernel_invariants, inverse_unimodular, kernel_basis, smith_normal_form, solve_exact_int,
    SmithForm,
};

/// A dense matrix over a tagged ring, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    ring: RingTag,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    pub fn zero(ring: RingTag, rows: usize, cols: usize) -> Matrix {
        let entries = vec![Elem::zero(&ring); rows * cols];
        Matrix { ring, rows, cols, entries }
    }

    pub fn identity(ring: RingTag, n: usize) -> Matrix {
        Matrix::scalar_diag(ring.clone(), n, &Elem::one(&ring))
    }

    /// `e` times the identity.
    pub fn scalar_diag(ring: RingTag, n: usize, e: &Elem) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(ring: RingTag, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        ring.validate()?;
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for e in row {
                if !e.fits(&ring) {
                    return Err(Error::RingMismatch(format!("entry {} does not live in {}", e, ring)));
                }
                entries.push(e);
            }
        }
        Ok(Matrix { ring, rows: nrows, cols: ncols, entries })
    }

    pub fn from_fn(
        ring: RingTag,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Elem,
    ) -> Matrix {
        let mut m = Matrix::zero(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn ring(&self) -> &RingTag {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        assert!(i < self.rows && j < self.cols, "index ({}, {}) out of range", i, j);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        assert!(i < self.rows && j < self.cols, "index ({}, {}) out of range", i, j);
        assert!(e.fits(&self.ring), "entry {} does not live in {}", e, self.ring);
        self.entries[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Elem::is_zero)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip(other, Elem::add)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip(other, Elem::sub)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Elem, &Elem) -> Elem) -> Matrix {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> Matrix {
        let entries = self.entries.iter().map(Elem::neg).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        assert!(c.fits(&self.ring), "scalar {} does not live in {}", c, self.ring);
        let entries = self.entries.iter().map(|e| e.mul(c)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        Matrix::from_fn(self.ring.clone(), self.rows, other.cols, |i, j| {
            let mut acc = Elem::zero(&self.ring);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Elem::zero(&self.ring);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Assembles a block matrix. Every block row must have the same number
    /// of blocks, with consistent heights along rows and widths down
    /// columns; zero-dimensional blocks are allowed.
    pub fn from_blocks(blocks: &[Vec<&Matrix>]) -> Matrix {
        assert!(!blocks.is_empty() && !blocks[0].is_empty(), "empty block grid");
        let ring = blocks[0][0].ring.clone();
        let ncols_blocks = blocks[0].len();
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        for row in blocks {
            assert_eq!(row.len(), ncols_blocks, "ragged block grid");
            for (b, w) in row.iter().zip(&widths) {
                assert_eq!(b.ring, ring, "block ring mismatch");
                assert_eq!(b.cols, *w, "block width mismatch");
            }
            for b in row.iter().skip(1) {
                assert_eq!(b.rows, row[0].rows, "block height mismatch");
            }
        }
        let mut out = Matrix::zero(ring, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        out
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols, "bad submatrix range");
        Matrix::from_fn(self.ring.clone(), r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Rebuilds the matrix entry-wise into another ring.
    pub fn map_entries(&self, ring: RingTag, f: impl Fn(&Elem) -> Elem) -> Matrix {
        Matrix::from_fn(ring, self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    /// Applies the canonical ring map `self.ring() -> to` entry-wise.
    pub fn cast(&self, to: &RingTag) -> Result<Matrix> {
        let mut out = Matrix::zero(to.clone(), self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).cast(to)?);
            }
        }
        Ok(out)
    }

    pub(crate) fn scalar_grid(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).as_scalar().clone()).collect())
            .collect()
    }

    pub(crate) fn laurent_grid(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).as_laurent().clone()).collect())
            .collect()
    }

    pub(crate) fn bigint_grid(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| match self.get(i, j).as_scalar() {
                        Scalar::Int(n) => n.clone(),
                        other => panic!("expected an integer entry, found {}", other),
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn from_bigint_grid(grid: Vec<Vec<BigInt>>) -> Matrix {
        let rows = grid
            .into_iter()
            .map(|r| r.into_iter().map(|n| Elem::Scalar(Scalar::Int(n))).collect())
            .collect();
        Matrix::from_rows(RingTag::ZZ, rows).expect("integer grid fits ZZ")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Rank of a matrix over the fraction field of its (integral-domain) ring:
/// ordinary rank for QQ and F_p, rank over QQ for ZZ, rank over the field
/// of rational functions for Laurent rings.
pub fn rank(m: &Matrix) -> Result<usize> {
    match m.ring() {
        RingTag::QQ | RingTag::Fp(_) => elim::rank_field(m),
        RingTag::ZZ => Ok(bareiss::rank_scalar(m)),
        RingTag::Laurent(_) => Ok(bareiss::rank_laurent(m)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz(entries: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            RingTag::ZZ,
            entries
                .iter()
                .map(|r| r.iter().map(|&n| Elem::Scalar(Scalar::int(n))).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn block_assembly() {
        let a = zz(&[&[1, 2], &[3, 4]]);
        let z = Matrix::zero(RingTag::ZZ, 2, 1);
        let b = zz(&[&[5, 6]]);
        let c = zz(&[&[7]]);
        let m = Matrix::from_blocks(&[vec![&a, &z], vec![&b, &c]]);
        assert_eq!(m, zz(&[&[1, 2, 0], &[3, 4, 0], &[5, 6, 7]]));
        // zero-dimensional blocks are legal
        let e = Matrix::zero(RingTag::ZZ, 0, 2);
        let m = Matrix::from_blocks(&[vec![&a], vec![&e]]);
        assert_eq!(m, a);
    }

    #[test]
    fn product_and_vector_action() {
        let a = zz(&[&[1, 2], &[3, 4]]);
        let b = zz(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), zz(&[&[2, 1], &[4, 3]]));
        let v = vec![Elem::Scalar(Scalar::int(1)), Elem::Scalar(Scalar::int(-1))];
        let av = a.mul_vec(&v);
        assert_eq!(av, vec![Elem::Scalar(Scalar::int(-1)), Elem::Scalar(Scalar::int(-1))]);
    }

    #[test]
    fn ragged_and_foreign_entries_rejected() {
        let rows = vec![vec![Elem::Scalar(Scalar::int(1))], vec![]];
        assert!(matches!(Matrix::from_rows(RingTag::ZZ, rows), Err(Error::DimensionMismatch(_))));
        let rows = vec![vec![Elem::Scalar(Scalar::rat(1, 2))]];
        assert!(matches!(Matrix::from_rows(RingTag::ZZ, rows), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn rank_dispatch() {
        assert_eq!(rank(&zz(&[&[1, 2], &[2, 4]])).unwrap(), 1);
        assert_eq!(rank(&zz(&[&[1, 2], &[3, 4]])).unwrap(), 2);
        assert_eq!(rank(&Matrix::zero(RingTag::ZZ, 3, 2)).unwrap(), 0);
        assert_eq!(rank(&Matrix::identity(RingTag::fp(2).unwrap(), 4)).unwrap(), 4);
    }

    #[test]
    fn empty_shapes() {
        let e = Matrix::zero(RingTag::ZZ, 0, 3);
        assert_eq!(rank(&e).unwrap(), 0);
        let f = Matrix::zero(RingTag::ZZ, 3, 0);
        assert_eq!(e.mul(&f).rows(), 0);
        assert_eq!(f.mul(&e), Matrix::zero(RingTag::ZZ, 3, 3));
    }
}
