//! Gaussian elimination over the field rings (QQ and F_p).

use super::Matrix;
use crate::rings::{Elem, Scalar};
use crate::{Error, Result};

fn require_field(m: &Matrix, op: &str) -> Result<()> {
    if m.ring().is_field() {
        Ok(())
    } else {
        Err(Error::NotAField(op.into(), m.ring().to_string()))
    }
}

/// Reduces `grid` to reduced row echelon form in place; returns pivot columns.
/// Pivots are chosen deterministically: first nonzero entry down each column.
fn rref(grid: &mut [Vec<Scalar>]) -> Vec<usize> {
    let nrows = grid.len();
    let ncols = grid.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !grid[i][c].is_zero()) else {
            continue;
        };
        grid.swap(r, pr);
        let inv = grid[r][c].inv().expect("nonzero field element");
        for j in c..ncols {
            grid[r][j] = grid[r][j].mul(&inv);
        }
        for i in 0..nrows {
            if i != r && !grid[i][c].is_zero() {
                let factor = grid[i][c].clone();
                for j in c..ncols {
                    let t = factor.mul(&grid[r][j]);
                    grid[i][j] = grid[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a matrix over a field.
pub fn rank_field(m: &Matrix) -> Result<usize> {
    Ok(field_pivot_columns(m)?.len())
}

/// Pivot columns of the reduced row echelon form of a matrix over a field.
pub fn field_pivot_columns(m: &Matrix) -> Result<Vec<usize>> {
    require_field(m, "echelon reduction")?;
    let mut grid = m.scalar_grid();
    Ok(rref(&mut grid))
}

/// Solves `m x = b` over a field. Returns `None` when inconsistent;
/// otherwise the unique solution with every free variable set to zero.
pub fn solve_field(m: &Matrix, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
    require_field(m, "linear solving")?;
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let ncols = m.cols();
    let mut grid = m.scalar_grid();
    for (row, e) in grid.iter_mut().zip(b) {
        if !e.fits(m.ring()) {
            return Err(Error::RingMismatch(format!("{} does not live in {}", e, m.ring())));
        }
        row.push(e.as_scalar().clone());
    }
    if grid.is_empty() {
        // no equations: the all-zero assignment works
        return Ok(Some(vec![Elem::zero(m.ring()); ncols]));
    }
    let pivots = rref(&mut grid);
    if pivots.last() == Some(&ncols) {
        return Ok(None);
    }
    let mut x = vec![Elem::zero(m.ring()); ncols];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = Elem::Scalar(grid[k][ncols].clone());
    }
    Ok(Some(x))
}
