use num_complex::Complex64;

use super::{inf_norm, mat_vec};
use crate::error::{Error, Result};

/// Largest accepted `dt·‖G‖∞` for the fixed-step integrator.
pub const MAX_STEP_NORM: f64 = 0.2;

/// Classical fixed-step RK4 for `ẋ = G·x + drive` with constant `G` and `drive`.
pub fn rk4_linear<const N: usize>(
    generator: &[[Complex64; N]; N],
    drive: &[Complex64; N],
    state0: &[Complex64; N],
    dt: f64,
    steps: usize,
) -> Result<[Complex64; N]> {
    let g_norm = inf_norm(generator);
    if !(dt > 0.0) || dt * g_norm > MAX_STEP_NORM {
        return Err(Error::StepTooLarge(format!(
            "dt·‖G‖ = {:e} exceeds {MAX_STEP_NORM}",
            dt * g_norm
        )));
    }

    let rhs = |x: &[Complex64; N]| -> [Complex64; N] {
        let mut out = mat_vec(generator, x);
        for (o, d) in out.iter_mut().zip(drive.iter()) {
            *o += d;
        }
        out
    };
    let axpy = |x: &[Complex64; N], k: &[Complex64; N], h: f64| -> [Complex64; N] {
        std::array::from_fn(|i| x[i] + k[i] * h)
    };

    let mut x = *state0;
    for _ in 0..steps {
        let k1 = rhs(&x);
        let k2 = rhs(&axpy(&x, &k1, 0.5 * dt));
        let k3 = rhs(&axpy(&x, &k2, 0.5 * dt));
        let k4 = rhs(&axpy(&x, &k3, dt));
        for i in 0..N {
            x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::solve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_generator_grows_linearly() {
        let g = [[c(0.0, 0.0); 2]; 2];
        let drive = [c(1.0, 0.5), c(-2.0, 0.0)];
        let x0 = [c(0.1, 0.0), c(0.0, 0.0)];
        let x = rk4_linear(&g, &drive, &x0, 0.01, 300).unwrap();
        assert!((x[0] - (x0[0] + drive[0] * 3.0)).norm() < 1e-12);
        assert!((x[1] - (x0[1] + drive[1] * 3.0)).norm() < 1e-12);
    }

    #[test]
    fn scalar_exponential() {
        let g = [[c(-1.0, 0.0)]];
        let x = rk4_linear(&g, &[c(0.0, 0.0)], &[c(1.0, 0.0)], 0.01, 100).unwrap();
        assert!((x[0].re - (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let g = [[c(-1.0, 2.0)]];
        let exact = (c(-1.0, 2.0) * 1.0).exp();
        let err = |steps: usize| {
            let x = rk4_linear(&g, &[c(0.0, 0.0)], &[c(1.0, 0.0)], 1.0 / steps as f64, steps)
                .unwrap();
            (x[0] - exact).norm()
        };
        let ratio = err(20) / err(40);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn damped_system_reaches_steady_state() {
        let g = [
            [c(-0.5, 0.3), c(0.0, 0.4), c(0.0, 0.2), c(0.0, 0.0)],
            [c(0.0, 0.4), c(-0.1, 0.0), c(0.0, 0.0), c(0.0, 0.3)],
            [c(0.0, 0.2), c(0.0, 0.0), c(-0.2, 0.1), c(0.0, 0.6)],
            [c(0.0, 0.0), c(0.0, 0.3), c(0.0, 0.6), c(-0.5, -0.2)],
        ];
        let drive = [c(0.0, 0.01), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let x = rk4_linear(&g, &drive, &[c(0.0, 0.0); 4], 0.05, 20_000).unwrap();
        let neg_drive: [Complex64; 4] = std::array::from_fn(|i| -drive[i]);
        let ss = solve(&g, &neg_drive).unwrap();
        for i in 0..4 {
            assert!((x[i] - ss[i]).norm() < 1e-12, "{} vs {}", x[i], ss[i]);
        }
    }

    #[test]
    fn rejects_large_steps() {
        let g = [[c(-10.0, 0.0)]];
        assert!(matches!(
            rk4_linear(&g, &[c(0.0, 0.0)], &[c(1.0, 0.0)], 0.1, 1),
            Err(Error::StepTooLarge(_))
        ));
    }
}
