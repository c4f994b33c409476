//! Thermodynamic-limit results from the Holstein-Primakoff boson expansion.
//!
//! The collective Hamiltonian
//!
//! ```text
//! H = w a'a + (w0/2) Jz + (lambda/sqrt N)(J+ a + J- a')
//! ```
//!
//! is bosonized with `J+ = b' sqrt(N - b'b)` and both modes are displaced,
//! `a = c - sqrt(N) alpha`, `b = d + sqrt(N) beta`. Expanding in powers of
//! `1/sqrt N` gives `H = N H0 + sqrt(N) H1 + H2 + ...`; the leading term is
//! minimized by the mean-field displacements and the geometric phase of the
//! ground state is `2 pi <a'a> = 2 pi N alpha^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};

/// Photon frequency and atomic level splitting (hbar = 1).
///
/// The coupling is passed per call so one parameter set serves a whole sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    omega: f64,
    omega0: f64,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64) -> Result<Self> {
        // `!(x > 0)` also rejects NaN.
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(DickeError::NonPositiveParameter {
                name: "omega",
                value: omega,
            });
        }
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(DickeError::NonPositiveParameter {
                name: "omega0",
                value: omega0,
            });
        }
        Ok(Self { omega, omega0 })
    }

    /// The parameter set used throughout the reference figures, `w = w0 = 1`.
    pub fn resonant() -> Self {
        Self {
            omega: 1.0,
            omega0: 1.0,
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
}

/// Validates a raw `(omega, omega0)` pair.
pub fn validate_params(omega: f64, omega0: f64) -> Result<ModelParams> {
    ModelParams::new(omega, omega0)
}

pub(crate) fn check_coupling(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(DickeError::NegativeCoupling(lambda))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Normal,
    SuperRadiant,
}

/// Minimizer of the leading-order energy `H0(alpha, beta)`.
///
/// The positive branch `alpha, beta >= 0` is canonical; the sign-flipped
/// displacement gives the same energy and phase. `delta` is `1` on the
/// normal branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    pub lambda: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phase: Phase,
}

/// `lambda_c = sqrt(w0 w / 2)`.
pub fn critical_coupling(params: &ModelParams) -> f64 {
    (params.omega0 * params.omega / 2.0).sqrt()
}

/// `delta = w w0 / (2 lambda^2)`; only meaningful above the critical coupling.
fn delta(params: &ModelParams, lambda: f64) -> f64 {
    params.omega * params.omega0 / (2.0 * lambda * lambda)
}

pub fn mean_field(params: &ModelParams, lambda: f64) -> Result<MeanFieldSolution> {
    check_coupling(lambda)?;
    if lambda <= critical_coupling(params) {
        return Ok(MeanFieldSolution {
            lambda,
            delta: 1.0,
            alpha: 0.0,
            beta: 0.0,
            phase: Phase::Normal,
        });
    }
    let delta = delta(params, lambda);
    Ok(MeanFieldSolution {
        lambda,
        delta,
        alpha: lambda * (1.0 - delta * delta).sqrt() / (2.0 * params.omega),
        beta: ((1.0 - delta) / 2.0).sqrt(),
        phase: Phase::SuperRadiant,
    })
}

/// Ground-state energy per atom, `E0 / N`.
pub fn ground_energy_per_atom(params: &ModelParams, lambda: f64) -> Result<f64> {
    check_coupling(lambda)?;
    if lambda <= critical_coupling(params) {
        return Ok(-params.omega0 / 4.0);
    }
    let delta = delta(params, lambda);
    Ok(-(lambda * lambda * (1.0 - delta * delta) / (4.0 * params.omega)
        + params.omega0 * delta / 4.0))
}

/// Leading-order energy per atom at arbitrary displacements.
pub fn h0_energy(params: &ModelParams, lambda: f64, alpha: f64, beta: f64) -> Result<f64> {
    let k = 1.0 - beta * beta;
    if k < 0.0 || !k.is_finite() {
        return Err(DickeError::BetaOutOfRange {
            beta_sq: beta * beta,
            limit: 1.0,
        });
    }
    Ok(params.omega * alpha * alpha + params.omega0 / 2.0 * (beta * beta - 0.5)
        - 2.0 * lambda * alpha * beta * k.sqrt())
}

/// Coefficients of the `O(N^0)` quadratic fluctuation Hamiltonian, one per
/// operator monomial.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuadraticCoefficients {
    /// `c'c`
    pub c_dag_c: f64,
    /// `d'd`
    pub d_dag_d: f64,
    /// `c'd + c d'`
    pub c_dag_d: f64,
    /// `c'd' + c d`
    pub c_dag_d_dag: f64,
    /// `(d')^2 + d^2`
    pub d_squeeze: f64,
    /// `(d' + d)^2`
    pub d_quadrature_sq: f64,
    /// `(d' + d)(c' + c)`
    pub quadrature_cross: f64,
}

/// Linear (`H1`) and quadratic (`H2`) fluctuation coefficients around a
/// displacement `(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationCoefficients {
    /// Coefficient of `(c' + c)` in `H1`.
    pub h1_c: f64,
    /// Coefficient of `(d' + d)` in `H1`.
    pub h1_d: f64,
    pub h2: QuadraticCoefficients,
}

pub fn fluctuation_coefficients(
    params: &ModelParams,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<FluctuationCoefficients> {
    let beta_sq = beta * beta;
    let k = 1.0 - beta_sq;
    if !(k > 0.0) || !k.is_finite() {
        return Err(DickeError::BetaOutOfRange { beta_sq, limit: 1.0 });
    }
    let sk = k.sqrt();
    let (w, w0) = (params.omega, params.omega0);

    // h1_d is half of dH0/dbeta: d/dbeta[beta sqrt(k)] = (1 - 2 beta^2)/sqrt(k).
    let h1_c = -w * alpha + lambda * beta * sk;
    let h1_d = w0 * beta / 2.0 - lambda * alpha * (1.0 - 2.0 * beta_sq) / sk;

    let condensate = lambda * alpha * beta / (2.0 * sk);
    let h2 = QuadraticCoefficients {
        c_dag_c: w,
        d_dag_d: w0 / 2.0 + 4.0 * condensate,
        c_dag_d: lambda * sk,
        c_dag_d_dag: 0.0,
        d_squeeze: condensate,
        d_quadrature_sq: condensate * beta_sq / (2.0 * k),
        quadrature_cross: -lambda * beta_sq / (2.0 * sk),
    };
    Ok(FluctuationCoefficients { h1_c, h1_d, h2 })
}

/// Ground-state geometric phase per atom, `gamma0 / N`, in radians.
pub fn gp_per_atom(params: &ModelParams, lambda: f64) -> Result<f64> {
    check_coupling(lambda)?;
    let lc = critical_coupling(params);
    if lambda <= lc {
        return Ok(0.0);
    }
    let lc4 = lc.powi(4);
    Ok(PI / (2.0 * params.omega * params.omega) * (lambda * lambda - lc4 / (lambda * lambda)))
}

/// Right-derivative of `gamma0 / N` at the critical coupling, `2 pi lambda_c / w^2`.
///
/// This is also the coefficient of `N` in the divergence of the total
/// derivative `d gamma0 / d lambda` at the transition.
pub fn gp_slope_at_critical(params: &ModelParams) -> f64 {
    2.0 * PI * critical_coupling(params) / (params.omega * params.omega)
}

/// One-sided derivatives of `gamma0 / N`; they differ only at the kink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpSlope {
    pub left: f64,
    pub right: f64,
}

impl GpSlope {
    pub fn is_kink(&self) -> bool {
        self.left != self.right
    }
}

pub fn gp_slope_per_atom(params: &ModelParams, lambda: f64) -> Result<GpSlope> {
    check_coupling(lambda)?;
    let lc = critical_coupling(params);
    let above = |l: f64| PI / (params.omega * params.omega) * (l + lc.powi(4) / l.powi(3));
    Ok(if lambda < lc {
        GpSlope {
            left: 0.0,
            right: 0.0,
        }
    } else if lambda == lc {
        GpSlope {
            left: 0.0,
            right: gp_slope_at_critical(params),
        }
    } else {
        let s = above(lambda);
        GpSlope { left: s, right: s }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn res() -> ModelParams {
        ModelParams::resonant()
    }

    #[test]
    fn validation() {
        assert!(validate_params(1.0, 1.0).is_ok());
        assert!(matches!(
            validate_params(0.0, 1.0),
            Err(DickeError::NonPositiveParameter { name: "omega", .. })
        ));
        assert!(matches!(
            validate_params(1.0, -0.5),
            Err(DickeError::NonPositiveParameter { name: "omega0", .. })
        ));
        assert!(validate_params(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn critical_coupling_values() {
        assert_eq!(critical_coupling(&res()), 0.7071067811865476);
        assert_eq!(critical_coupling(&ModelParams::new(2.0, 1.0).unwrap()), 1.0);
        assert_eq!(critical_coupling(&ModelParams::new(1.0, 2.0).unwrap()), 1.0);
    }

    #[test]
    fn mean_field_branches() {
        let p = res();
        let mf = mean_field(&p, 0.5).unwrap();
        assert_eq!((mf.alpha, mf.beta, mf.phase), (0.0, 0.0, Phase::Normal));

        let mf = mean_field(&p, 1.0).unwrap();
        assert_eq!(mf.phase, Phase::SuperRadiant);
        assert!((mf.delta - 0.5).abs() < 1e-15);
        assert!((mf.beta - 0.5).abs() < 1e-15);
        assert!((mf.alpha - 0.4330127018922193).abs() < 1e-15);
        let k = 1.0 - mf.beta * mf.beta;
        assert!((mf.alpha - 1.0 * mf.beta * k.sqrt() / p.omega()).abs() < 1e-15);

        let mf = mean_field(&p, critical_coupling(&p)).unwrap();
        assert_eq!((mf.alpha, mf.beta, mf.delta), (0.0, 0.0, 1.0));
        assert_eq!(mf.phase, Phase::Normal);

        assert_eq!(
            mean_field(&p, -0.1).unwrap_err(),
            DickeError::NegativeCoupling(-0.1)
        );
    }

    #[test]
    fn ground_energy_values() {
        let p = res();
        assert_eq!(ground_energy_per_atom(&p, 0.3).unwrap(), -0.25);
        assert!((ground_energy_per_atom(&p, 1.0).unwrap() + 0.3125).abs() < 1e-15);
        let lc = critical_coupling(&p);
        assert_eq!(ground_energy_per_atom(&p, lc).unwrap(), -0.25);
        let right = ground_energy_per_atom(&p, lc * (1.0 + 1e-14)).unwrap();
        assert!((right + 0.25).abs() < 1e-12);
    }

    #[test]
    fn h0_values() {
        let p = res();
        assert_eq!(h0_energy(&p, 0.7, 0.0, 0.0).unwrap(), -0.25);
        let e = h0_energy(&p, 1.0, 0.4330127018922193, 0.5).unwrap();
        assert!((e + 0.3125).abs() < 1e-15);
        let e = h0_energy(&p, 1.0, 0.1, 0.0).unwrap();
        assert!((e + 0.24).abs() < 1e-15);
        assert!(matches!(
            h0_energy(&p, 1.0, 0.0, 1.1),
            Err(DickeError::BetaOutOfRange { .. })
        ));
    }

    #[test]
    fn fluctuation_values() {
        let p = res();
        let mf = mean_field(&p, 1.0).unwrap();
        let f = fluctuation_coefficients(&p, 1.0, mf.alpha, mf.beta).unwrap();
        assert!(f.h1_c.abs() < 1e-15 && f.h1_d.abs() < 1e-15);

        let f = fluctuation_coefficients(&p, 1.0, 0.1, 0.0).unwrap();
        assert!((f.h1_c + 0.1).abs() < 1e-15);
        assert!((f.h1_d + 0.1).abs() < 1e-15);

        let p2 = ModelParams::new(1.3, 0.8).unwrap();
        let f = fluctuation_coefficients(&p2, 0.45, 0.0, 0.0).unwrap();
        assert_eq!(
            f.h2,
            QuadraticCoefficients {
                c_dag_c: 1.3,
                d_dag_d: 0.4,
                c_dag_d: 0.45,
                ..Default::default()
            }
        );
        assert!(fluctuation_coefficients(&p, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn gp_values() {
        let p = res();
        assert_eq!(gp_per_atom(&p, 0.6).unwrap(), 0.0);
        assert!((gp_per_atom(&p, 1.0).unwrap() - 3.0 * PI / 8.0).abs() < 1e-15);
        assert_eq!(gp_per_atom(&p, critical_coupling(&p)).unwrap(), 0.0);
    }

    #[test]
    fn slope_at_critical() {
        assert!((gp_slope_at_critical(&res()) - 4.442882938158366).abs() < 1e-14);
        let p = ModelParams::new(2.0, 1.0).unwrap();
        assert!((gp_slope_at_critical(&p) - PI / 2.0).abs() < 1e-15);

        // one-sided finite difference just above the kink
        let p = res();
        let lc = critical_coupling(&p);
        let h = 1e-7;
        let fd = (gp_per_atom(&p, lc + h).unwrap() - gp_per_atom(&p, lc).unwrap()) / h;
        assert!((fd - gp_slope_at_critical(&p)).abs() < 1e-5);

        let s = gp_slope_per_atom(&p, lc).unwrap();
        assert!(s.is_kink());
        assert_eq!(s.left, 0.0);
        assert!(!gp_slope_per_atom(&p, 1.1).unwrap().is_kink());
    }

    #[test]
    fn slope_matches_finite_difference_away_from_kink() {
        let p = ModelParams::new(0.7, 1.9).unwrap();
        for &l in &[0.3, 1.0, 1.5, 2.5] {
            let h = 1e-6;
            let fd = (gp_per_atom(&p, l + h).unwrap() - gp_per_atom(&p, l - h).unwrap()) / (2.0 * h);
            let s = gp_slope_per_atom(&p, l).unwrap().right;
            assert!((fd - s).abs() < 1e-6 * s.max(1.0), "{l}: {fd} vs {s}");
        }
    }

    #[test]
    fn continuity_at_transition() {
        for (w, w0) in [(1.0, 1.0), (2.0, 0.5), (0.3, 1.7)] {
            let p = ModelParams::new(w, w0).unwrap();
            let lc = critical_coupling(&p);
            let above = lc * (1.0 + 1e-15);
            let e_l = ground_energy_per_atom(&p, lc).unwrap();
            let e_r = ground_energy_per_atom(&p, above).unwrap();
            assert!((e_l - e_r).abs() < 1e-12);
            let g_r = gp_per_atom(&p, above).unwrap();
            assert!(g_r.abs() < 1e-12);
        }
    }

    #[test]
    fn linearization_near_critical_point() {
        // |gp(l) - s (l - lc)| <= C (l - lc)^2 with the constant fitted on the window
        let p = res();
        let lc = critical_coupling(&p);
        let s = gp_slope_at_critical(&p);
        let mut c_max: f64 = 0.0;
        for i in 1..=50 {
            let x = 0.05 * i as f64 / 50.0;
            let r = (gp_per_atom(&p, lc + x).unwrap() - s * x).abs();
            c_max = c_max.max(r / (x * x));
        }
        assert!(c_max.is_finite());
        // second derivative of gamma/N at lc is -2 pi; the quadratic constant is near pi
        assert!(c_max < 2.0 * PI, "{c_max}");
    }

    fn params_strategy() -> impl Strategy<Value = ModelParams> {
        (0.1f64..5.0, 0.1f64..5.0).prop_map(|(w, w0)| ModelParams::new(w, w0).unwrap())
    }

    proptest! {
        #[test]
        fn stationarity_above_critical(p in params_strategy(), x in 1.0001f64..4.0) {
            let lambda = x * critical_coupling(&p);
            let mf = mean_field(&p, lambda).unwrap();
            let f = fluctuation_coefficients(&p, lambda, mf.alpha, mf.beta).unwrap();
            let scale = lambda.max(p.omega()).max(p.omega0());
            prop_assert!(f.h1_c.abs() < 1e-12 * scale);
            prop_assert!(f.h1_d.abs() < 1e-12 * scale);
        }

        #[test]
        fn mean_field_invariants(p in params_strategy(), x in 0.0f64..4.0) {
            let lambda = x * critical_coupling(&p);
            let mf = mean_field(&p, lambda).unwrap();
            match mf.phase {
                Phase::Normal => prop_assert!(mf.alpha == 0.0 && mf.beta == 0.0),
                Phase::SuperRadiant => {
                    prop_assert!(mf.beta * mf.beta < 0.5 && mf.beta >= 0.0);
                    prop_assert!(mf.delta > 0.0 && mf.delta <= 1.0);
                    let expect = lambda * mf.beta * (1.0 - mf.beta * mf.beta).sqrt() / p.omega();
                    prop_assert!((mf.alpha - expect).abs() < 1e-12 * expect.max(1.0));
                }
            }
            let e0 = ground_energy_per_atom(&p, lambda).unwrap();
            let h0 = h0_energy(&p, lambda, mf.alpha, mf.beta).unwrap();
            prop_assert!((e0 - h0).abs() < 1e-12 * e0.abs().max(1.0));
            let gp = gp_per_atom(&p, lambda).unwrap();
            prop_assert!((gp - 2.0 * PI * mf.alpha * mf.alpha).abs() < 1e-12 * gp.max(1.0));
        }

        #[test]
        fn mean_field_is_minimal(
            x in 1.001f64..3.0,
            eps in proptest::collection::vec((-1e-2f64..1e-2, -1e-2f64..1e-2), 200)
        ) {
            let p = res();
            let lambda = x * critical_coupling(&p);
            let mf = mean_field(&p, lambda).unwrap();
            let e = h0_energy(&p, lambda, mf.alpha, mf.beta).unwrap();
            for (ea, eb) in eps {
                let other = h0_energy(&p, lambda, mf.alpha + ea, mf.beta + eb).unwrap();
                prop_assert!(e <= other + 1e-15);
            }
        }
    }
}
