//! Exact Gaussian elimination over a coefficient field.

use super::series::Coeff;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system has rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("pivot is not invertible")]
    NotInvertible,
}

/// Solves an (over)determined system `rows · x = rhs`, requiring a unique
/// solution.
pub fn solve_unique<C: Coeff>(rows: &[Vec<C>], rhs: &[C], unknowns: usize) -> Result<Vec<C>, LinalgError> {
    assert_eq!(rows.len(), rhs.len());
    let mut m: Vec<Vec<C>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            assert_eq!(r.len(), unknowns);
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].c_is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].c_inv().ok_or(LinalgError::NotInvertible)?;
        for x in &mut m[row][col..=unknowns] {
            *x = x.c_mul(&inv);
        }
        let pivot_row = m[row][col..=unknowns].to_vec();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || r[col].c_is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, t) in r[col..=unknowns].iter_mut().zip(&pivot_row) {
                *x = x.c_sub(&t.c_mul(&f));
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[unknowns].c_is_zero()) {
        return Err(LinalgError::Inconsistent);
    }
    if pivots.len() < unknowns {
        return Err(LinalgError::Underdetermined { rank: pivots.len(), unknowns });
    }
    Ok((0..unknowns).map(|i| m[i][unknowns].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    #[test]
    fn overdetermined_consistent() {
        let rows = vec![vec![int(1), int(1)], vec![int(1), int(-1)], vec![int(2), int(0)]];
        let rhs = vec![int(3), int(1), int(4)];
        assert_eq!(solve_unique(&rows, &rhs, 2).unwrap(), vec![int(2), int(1)]);
    }

    #[test]
    fn failures() {
        let rows = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(matches!(solve_unique(&rows, &[int(1), int(2)], 2), Err(LinalgError::Underdetermined { .. })));
        assert_eq!(solve_unique(&rows, &[int(1), rat(3, 1)], 2), Err(LinalgError::Inconsistent));
    }
}
