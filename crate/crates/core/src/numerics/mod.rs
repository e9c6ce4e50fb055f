//! Small dense kernels shared by the physics modules.
//!
//! Everything here operates on tiny systems (4×4, 5×5) or 1-D grids, so the
//! kernels are written out directly with explicit tolerances instead of
//! pulling in a general linear-algebra stack.

mod diff;
mod eigen;
mod fft;
mod grid;
mod linsolve;
mod ode;
mod peaks;

pub use diff::{richardson_first, richardson_second};
pub use eigen::{hermitian_eigen, HermitianEigen};
pub use fft::{fft, fft_in_place, ifft, ifft_in_place, is_power_of_two, angular_frequencies};
pub use grid::ComplexGrid;
pub use linsolve::{solve, solve4};
pub use ode::rk4_linear;
pub(crate) use eigen::fix_phase;
pub use peaks::{count_peaks, find_peaks, Peak};

use num_complex::Complex64;

/// Infinity norm (max absolute row sum) of a dense square matrix.
pub fn inf_norm<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn mat_vec<const N: usize>(m: &[[Complex64; N]; N], v: &[Complex64; N]) -> [Complex64; N] {
    let mut out = [Complex64::new(0.0, 0.0); N];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    }
    out
}
