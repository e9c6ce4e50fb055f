//! Radix-2 complex FFT.
//!
//! Normalization: forward transform is unnormalized,
//! `X_k = Σ_n x_n e^{−2πikn/N}`; the inverse carries the 1/N factor.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn is_power_of_two(n: usize) -> bool {
    n >= 2 && n.is_power_of_two()
}

pub fn fft(input: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut buf = input.to_vec();
    fft_in_place(&mut buf)?;
    Ok(buf)
}

pub fn ifft(input: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut buf = input.to_vec();
    ifft_in_place(&mut buf)?;
    Ok(buf)
}

pub fn fft_in_place(buf: &mut [Complex64]) -> Result<()> {
    transform(buf, -1.0)
}

pub fn ifft_in_place(buf: &mut [Complex64]) -> Result<()> {
    transform(buf, 1.0)?;
    let scale = 1.0 / buf.len() as f64;
    for z in buf.iter_mut() {
        *z *= scale;
    }
    Ok(())
}

/// Angular frequency of each DFT bin for sample spacing `dt`, in FFT order
/// (0, 1, …, N/2−1, −N/2, …, −1) × 2π/(N·dt).
pub fn angular_frequencies(n: usize, dt: f64) -> Vec<f64> {
    let base = 2.0 * PI / (n as f64 * dt);
    (0..n)
        .map(|k| {
            let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            signed * base
        })
        .collect()
}

fn transform(buf: &mut [Complex64], sign: f64) -> Result<()> {
    let n = buf.len();
    if !is_power_of_two(n) {
        return Err(Error::BadLength(n));
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        let half = len / 2;
        // twiddles computed directly rather than by recurrence to avoid drift
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| Complex64::from_polar(1.0, ang * k as f64))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = buf[start + k];
                let v = buf[start + k + half] * twiddles[k];
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
    Ok(())
}
