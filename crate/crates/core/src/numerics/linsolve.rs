use num_complex::Complex64;

use super::inf_norm;
use crate::error::{Error, Result};

/// Pivots smaller than this fraction of ‖A‖∞ are treated as exact zeros.
const PIVOT_RELATIVE_FLOOR: f64 = 1e-14;

/// Gaussian elimination with partial (row) pivoting on a dense N×N system.
pub fn solve<const N: usize>(
    matrix: &[[Complex64; N]; N],
    rhs: &[Complex64; N],
) -> Result<[Complex64; N]> {
    let scale = inf_norm(matrix);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::SingularMatrix);
    }
    let floor = PIVOT_RELATIVE_FLOOR * scale;

    let mut a = *matrix;
    let mut b = *rhs;

    for col in 0..N {
        let (pivot_row, pivot_mag) = (col..N)
            .map(|r| (r, a[r][col].norm()))
            .fold((col, -1.0), |best, cand| if cand.1 > best.1 { cand } else { best });
        if pivot_mag <= floor {
            return Err(Error::SingularMatrix);
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            b.swap(pivot_row, col);
        }
        let pivot = a[col][col];
        for r in col + 1..N {
            let factor = a[r][col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col..N {
                let delta = factor * a[col][c];
                a[r][c] -= delta;
            }
            let delta = factor * b[col];
            b[r] -= delta;
        }
    }

    let mut x = [Complex64::new(0.0, 0.0); N];
    for r in (0..N).rev() {
        let mut acc = b[r];
        for c in r + 1..N {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Ok(x)
}

pub fn solve4(matrix: &[[Complex64; 4]; 4], rhs: &[Complex64; 4]) -> Result<[Complex64; 4]> {
    solve(matrix, rhs)
}
