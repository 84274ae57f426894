//! Dense exact linear algebra over `Q(q)`.
//!
//! Row reduction here backs two consumers: the joint-kernel computation
//! that produces each weight space's defining-relation subspace, and the
//! stacked derivation systems solved degree by degree for the quasi
//! K-matrix.  Everything is exact; a pivot is any nonzero entry, and the
//! *column order* is a caller-supplied preference list so that the induced
//! complement of pivot columns is deterministic.

use thiserror::Error;

use crate::scalar::RatFuncQ;

/// Outcome of [`solve_unique`] when the stacked system degenerates.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinSolveError {
    /// The system is inconsistent.
    #[error("linear system has no solution")]
    NoSolution,
    /// The system is consistent but underdetermined.
    #[error("linear system has a positive-dimensional solution space")]
    NonUnique,
}

/// Reduced row echelon form of `rows` with pivots chosen greedily along
/// `col_order`.  Returns `(pivot_col, pivot_row)` pairs in elimination
/// order; afterwards each pivot entry is `1` and its column is cleared in
/// every other row.
pub fn rref(rows: &mut [Vec<RatFuncQ>], col_order: &[usize]) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for &col in col_order {
        if next_row >= rows.len() {
            break;
        }
        let Some(src) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, src);
        let inv = rows[next_row][col].inv().expect("pivot is nonzero");
        for entry in rows[next_row].iter_mut() {
            if !entry.is_zero() {
                *entry = &*entry * &inv;
            }
        }
        for r in 0..rows.len() {
            if r == next_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            let (pivot_row, row) = if r < next_row {
                let (a, b) = rows.split_at_mut(next_row);
                (&b[0], &mut a[r])
            } else {
                let (a, b) = rows.split_at_mut(r);
                (&a[next_row], &mut b[0])
            };
            for (dst, src) in row.iter_mut().zip(pivot_row.iter()) {
                if !src.is_zero() {
                    *dst -= &(&factor * src);
                }
            }
        }
        pivots.push((col, next_row));
        next_row += 1;
    }
    pivots
}

/// Basis of the kernel of the matrix whose rows are `rows`, produced from
/// an RREF pass with pivots preferred along `col_order`.
///
/// Each kernel vector is sparse, carries coefficient `1` at one non-pivot
/// ("free") column, and is otherwise supported on pivot columns; together
/// with the returned pivot column list this is an echelon basis.  Vectors
/// come back keyed by their free column.
pub fn kernel_basis(
    mut rows: Vec<Vec<RatFuncQ>>,
    ncols: usize,
    col_order: &[usize],
) -> (Vec<usize>, Vec<(usize, Vec<(usize, RatFuncQ)>)>) {
    debug_assert_eq!(col_order.len(), ncols);
    let pivots = rref(&mut rows, col_order);
    let pivot_cols: Vec<usize> = {
        let mut cols: Vec<usize> = pivots.iter().map(|&(c, _)| c).collect();
        cols.sort_unstable();
        cols
    };
    let mut is_pivot = vec![false; ncols];
    for &(c, _) in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::with_capacity(ncols - pivots.len());
    for &f in col_order {
        if is_pivot[f] {
            continue;
        }
        let mut vec = vec![(f, RatFuncQ::one())];
        for &(c, r) in &pivots {
            let entry = &rows[r][f];
            if !entry.is_zero() {
                vec.push((c, -entry));
            }
        }
        vec.sort_by_key(|&(c, _)| c);
        basis.push((f, vec));
    }
    (pivot_cols, basis)
}

/// Solves the stacked system `A x = b` demanding existence *and*
/// uniqueness, as the degree-by-degree construction requires.
///
/// # Errors
/// [`LinSolveError::NonUnique`] when the rank is below the number of
/// unknowns, [`LinSolveError::NoSolution`] when the system is
/// inconsistent.
pub fn solve_unique(
    rows: Vec<Vec<RatFuncQ>>,
    rhs: Vec<RatFuncQ>,
) -> Result<Vec<RatFuncQ>, LinSolveError> {
    debug_assert_eq!(rows.len(), rhs.len());
    let ncols = rows.first().map_or(0, |r| r.len());
    if ncols == 0 {
        // No unknowns: consistent iff the right-hand side vanishes.
        if rhs.iter().all(|v| v.is_zero()) {
            return Ok(Vec::new());
        }
        return Err(LinSolveError::NoSolution);
    }
    let mut aug: Vec<Vec<RatFuncQ>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(mut row, b)| {
            row.push(b);
            row
        })
        .collect();
    let col_order: Vec<usize> = (0..ncols).collect();
    let pivots = rref(&mut aug, &col_order);
    if pivots.len() < ncols {
        // Distinguish inconsistency from genuine freedom: inconsistent rows
        // have a nonzero last entry below the pivot block.
        if aug
            .iter()
            .skip(pivots.len())
            .any(|row| !row[ncols].is_zero())
        {
            return Err(LinSolveError::NoSolution);
        }
        return Err(LinSolveError::NonUnique);
    }
    if aug
        .iter()
        .skip(pivots.len())
        .any(|row| !row[ncols].is_zero())
    {
        return Err(LinSolveError::NoSolution);
    }
    let mut x = vec![RatFuncQ::zero(); ncols];
    for &(c, r) in &pivots {
        x[c] = aug[r][ncols].clone();
    }
    Ok(x)
}
