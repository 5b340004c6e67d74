//! Exact rational Gaussian elimination.

use num_traits::Zero;

use crate::rational::Q;

/// Solve the augmented system `mat[:, ..k] x = mat[:, k]` exactly.
/// Returns `None` if it is inconsistent; free variables are set to zero.
pub fn solve_consistent(mut mat: Vec<Vec<Q>>, k: usize) -> Option<Vec<Q>> {
    let rows = mat.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..k {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = Q::from_integer(1.into()) / mat[r][c].clone();
        for v in mat[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    row[j] -= &f * pv;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    for row in mat.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); k];
    for (row, col) in pivots {
        x[col] = mat[row][k].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn solves_and_detects_inconsistency() {
        let m = vec![
            vec![q(2), q(0), q(1)],
            vec![q(0), q(3), q(1)],
            vec![q(2), q(3), q(2)],
        ];
        assert_eq!(solve_consistent(m, 2), Some(vec![qr(1, 2), qr(1, 3)]));
        let bad = vec![vec![q(1), q(1)], vec![q(1), q(2)]];
        assert_eq!(solve_consistent(bad, 1), None);
    }
}
