//! Richardson-extrapolated central differences (step h and h/2), used as the
//! verification oracle for analytic derivatives.

use num_complex::Complex64;

pub fn richardson_first<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let central = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * central(0.5 * h) - central(h)) / 3.0
}

pub fn richardson_second<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let f0 = f(x);
    let central = |h: f64| (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
    (4.0 * central(0.5 * h) - central(h)) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_derivatives() {
        let a = Complex64::new(0.3, -1.2);
        let f = |x: f64| (a * x).exp();
        let d1 = richardson_first(f, 0.4, 1e-3);
        let d2 = richardson_second(f, 0.4, 1e-2);
        let exact = (a * 0.4).exp();
        assert!((d1 - a * exact).norm() < 1e-11);
        assert!((d2 - a * a * exact).norm() < 1e-8);
    }

    #[test]
    fn rational_function() {
        // 1/(x + i): f' = −1/(x+i)², f'' = 2/(x+i)³
        let f = |x: f64| Complex64::new(x, 1.0).inv();
        let z = Complex64::new(0.7, 1.0);
        assert!((richardson_first(f, 0.7, 1e-3) + z.powi(-2)).norm() < 1e-11);
        assert!((richardson_second(f, 0.7, 1e-3) - 2.0 * z.powi(-3)).norm() < 1e-6);
    }
}
