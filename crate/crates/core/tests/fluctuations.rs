//! The quadratic fluctuation coefficients against a finite-difference Hessian
//! of the classical (coherent-state) energy around the displaced vacuum.

use dicke_core::model::{fluctuation_coefficients, mean_field, ModelParams, QuadraticCoefficients};
use num_complex::Complex64;

/// Classical energy for photon amplitude `a` and Holstein-Primakoff amplitude `b`.
fn classical_energy(p: &ModelParams, n: f64, lambda: f64, a: Complex64, b: Complex64) -> f64 {
    let root = (n - b.norm_sqr()).sqrt();
    p.omega() * a.norm_sqr() + p.omega0() / 2.0 * (b.norm_sqr() - n / 2.0)
        + lambda / n.sqrt() * 2.0 * (b.conj() * a).re * root
}

/// Symbol of H2 with `c -> z`, `d -> w`.
fn symbol(h2: &QuadraticCoefficients, z: Complex64, w: Complex64) -> f64 {
    let wq = 2.0 * w.re;
    let zq = 2.0 * z.re;
    h2.c_dag_c * z.norm_sqr()
        + h2.d_dag_d * w.norm_sqr()
        + h2.c_dag_d * 2.0 * (z.conj() * w).re
        + h2.c_dag_d_dag * 2.0 * (z * w).re
        + h2.d_squeeze * 2.0 * (w * w).re
        + h2.d_quadrature_sq * wq * wq
        + h2.quadrature_cross * wq * zq
}

#[test]
fn quadratic_form_matches_classical_hessian() {
    let directions = [
        (Complex64::new(0.3, -0.2), Complex64::new(0.5, 0.1)),
        (Complex64::new(-0.7, 0.4), Complex64::new(0.2, -0.6)),
        (Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)),
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
    ];
    let n: f64 = 1.0e4;
    let t = 1e-2;
    for (w, w0, lambda) in [(1.0, 1.0, 1.0), (1.0, 1.0, 0.4), (0.8, 1.5, 1.7), (2.0, 0.7, 1.05)] {
        let p = ModelParams::new(w, w0).unwrap();
        let mf = mean_field(&p, lambda).unwrap();
        // displacements with the sign convention a = c - sqrt(N) alpha, b = d + sqrt(N) beta
        let a0 = Complex64::new(-n.sqrt() * mf.alpha, 0.0);
        let b0 = Complex64::new(n.sqrt() * mf.beta, 0.0);
        let h2 = fluctuation_coefficients(&p, lambda, mf.alpha, mf.beta).unwrap().h2;
        let e0 = classical_energy(&p, n, lambda, a0, b0);
        for (z, dw) in directions {
            let plus = classical_energy(&p, n, lambda, a0 + z * t, b0 + dw * t);
            let minus = classical_energy(&p, n, lambda, a0 - z * t, b0 - dw * t);
            let fd = (plus + minus - 2.0 * e0) / (2.0 * t * t);
            let exact = symbol(&h2, z, dw);
            assert!(
                (fd - exact).abs() < 1e-5 * exact.abs().max(1.0),
                "w={w} w0={w0} l={lambda} dir=({z},{dw}): {fd} vs {exact}"
            );
        }
    }
}

#[test]
fn linear_coefficients_match_classical_gradient() {
    // off the minimizer the linear term is half the H0 gradient
    let p = ModelParams::new(1.2, 0.9).unwrap();
    let (lambda, alpha, beta) = (0.8, 0.21, 0.37);
    let n: f64 = 1.0e4;
    let f = fluctuation_coefficients(&p, lambda, alpha, beta).unwrap();
    let a0 = Complex64::new(-n.sqrt() * alpha, 0.0);
    let b0 = Complex64::new(n.sqrt() * beta, 0.0);
    let t = 1e-4;
    let grad = |z: Complex64, w: Complex64| {
        (classical_energy(&p, n, lambda, a0 + z * t, b0 + w * t)
            - classical_energy(&p, n, lambda, a0 - z * t, b0 - w * t))
            / (2.0 * t)
    };
    // energy shift along (c + c') with unit real amplitude is sqrt(N) * h1_c * 2
    let gc = grad(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let gd = grad(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    assert!((gc - 2.0 * n.sqrt() * f.h1_c).abs() < 1e-6 * n.sqrt());
    assert!((gd - 2.0 * n.sqrt() * f.h1_d).abs() < 1e-6 * n.sqrt());
}
