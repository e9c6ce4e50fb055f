//! Values frozen from an independent 50-digit evaluation of κ(ω) and the
//! Kerr coefficient for the detuned Cs parameter set.

use eitlab_core::dispersion::taylor_coefficients;
use eitlab_core::nls::NlsCoefficients;
use eitlab_core::presets;
use num_complex::Complex64;

fn close(got: Complex64, want: Complex64, tol: f64) {
    assert!((got - want).norm() <= tol * want.norm(), "{got} vs {want}");
}

#[test]
fn cs_dispersion_coefficients() {
    let e = taylor_coefficients(&presets::cs_soliton()).unwrap();
    close(e.kappa0, Complex64::new(-0.780_061_137_322_767_9, 0.001_774_890_635_114_786_7), 1e-12);
    close(e.kappa1, Complex64::new(9.534_928_091_396_727e-10, -4.238_553_694_325_683e-12), 1e-10);
    close(e.kappa2, Complex64::new(5.370_635_214_557_654e-19, 4.343_499_197_835_619e-22), 1e-9);
}

#[test]
fn cs_nonlinear_coefficient() {
    let c = NlsCoefficients::from_config(&presets::cs_soliton()).unwrap();
    close(c.theta, Complex64::new(7.177_739_537_067_512e-20, -1.633_167_206_529_215e-22), 1e-10);
}
