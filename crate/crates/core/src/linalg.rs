//! Dense Gauss-Jordan elimination over a [`Scalar`].
//!
//! Exact scalars pivot on the first nonzero entry; float scalars use partial
//! pivoting and treat entries with `|a| <= tol` as zero. The tolerance is
//! absolute and always supplied by the caller.

use crate::scalar::Scalar;

/// Reduced row echelon form of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref<S> {
    /// Nonzero rows only, each with a leading one in its pivot column.
    pub rows: Vec<Vec<S>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<S: Scalar> Rref<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Canonical kernel basis: one vector per free column `j` with a one in
    /// position `j` and zeros in the other free positions.
    pub fn null_space(&self) -> Vec<Vec<S>> {
        self.free_columns()
            .into_iter()
            .map(|j| {
                let mut v = vec![S::zero(); self.ncols];
                v[j] = S::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[j].clone();
                }
                v
            })
            .collect()
    }
}

/// Row-reduces `m`, whose rows all have length `ncols`.
pub fn rref<S: Scalar>(mut m: Vec<Vec<S>>, ncols: usize, tol: f64) -> Rref<S> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let candidate = if S::EXACT {
            (rank..m.len()).find(|&i| !m[i][col].is_zero())
        } else {
            (rank..m.len())
                .filter(|&i| !m[i][col].is_negligible(tol))
                .max_by(|&a, &b| {
                    m[a][col]
                        .abs()
                        .partial_cmp(&m[b][col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        };
        let Some(p) = candidate else {
            if !S::EXACT {
                for row in m.iter_mut().skip(rank) {
                    row[col] = S::zero();
                }
            }
            continue;
        };
        m.swap(rank, p);
        let inv = S::one() / m[rank][col].clone();
        for v in m[rank].iter_mut().skip(col) {
            *v *= inv.clone();
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..ncols {
                if pivot_row[c].is_zero() {
                    continue;
                }
                let delta = factor.clone() * &pivot_row[c];
                row[c] -= delta;
            }
            row[col] = S::zero();
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    Rref {
        rows: m,
        pivots,
        ncols,
    }
}

/// Solves `A x = b` given `A` by rows. Returns `None` when inconsistent.
/// Free unknowns are set to zero.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S], ncols: usize, tol: f64) -> Option<Vec<S>> {
    let augmented: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let red = rref(augmented, ncols + 1, tol);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![S::zero(); ncols];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Rank of the matrix whose rows are `m`.
pub fn rank<S: Scalar>(m: Vec<Vec<S>>, ncols: usize, tol: f64) -> usize {
    rref(m, ncols, tol).rank()
}
