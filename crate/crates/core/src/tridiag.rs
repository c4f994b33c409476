//! Real symmetric tridiagonal eigenproblems.
//!
//! Eigenvalues come from bisection on Sturm counts; the ground vector from
//! inverse iteration followed by a Rayleigh-quotient refinement of the energy.

use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};

const MAX_BISECTION_STEPS: usize = 256;
const MAX_INVERSE_STEPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(DickeError::LengthMismatch(format!(
                "diag has {} entries, offdiag {}",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n - 1 {
            y[i] += self.offdiag[i] * x[i + 1];
            y[i + 1] += self.offdiag[i] * x[i];
        }
        y
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of `T - x`).
    pub fn sturm_count(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                q = (self.diag[i] - x) - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        let n = self.dim();
        if k >= n {
            return Err(DickeError::LengthMismatch(format!(
                "eigenvalue index {k} for dimension {n}"
            )));
        }
        if n == 1 {
            return Ok(self.diag[0]);
        }
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs());
        let pad = f64::EPSILON * (scale + 1.0);
        lo -= pad;
        hi += pad;
        // absolute floor so eigenvalues at zero do not bisect into subnormals
        let floor = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        for _ in 0..MAX_BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let width = f64::EPSILON * lo.abs().max(hi.abs()) + floor;
            if hi - lo <= width || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(DickeError::NoConvergence(format!(
            "bisection for eigenvalue {k} stalled in [{lo}, {hi}]"
        )))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        (0..self.dim()).map(|k| self.eigenvalue(k)).collect()
    }

    pub fn residual(&self, value: f64, vector: &[f64]) -> f64 {
        self.apply(vector)
            .iter()
            .zip(vector)
            .map(|(tv, v)| (tv - value * v).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Solves `(T - shift) x = rhs` by Gaussian elimination with partial
    /// pivoting; exactly singular pivots are nudged so the solve always
    /// completes, which is what inverse iteration wants.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let scale = self
            .diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(shift.abs())
            .max(1.0);
        let guard = f64::EPSILON * scale;

        // Rows of U after elimination: main, first and second superdiagonal.
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut du: Vec<f64> = self.offdiag.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut dl: Vec<f64> = self.offdiag.clone();
        let mut b = rhs.to_vec();

        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = guard;
                }
                let f = dl[i] / d[i];
                d[i + 1] -= f * du[i];
                b[i + 1] -= f * b[i];
                dl[i] = f;
            } else {
                // swap rows i and i+1
                let f = d[i] / dl[i];
                d[i] = dl[i];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - f * tmp;
                du[i] = tmp;
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
                b.swap(i, i + 1);
                b[i + 1] -= f * b[i];
                dl[i] = f;
            }
        }
        if d[n - 1].abs() < guard {
            d[n - 1] = if d[n - 1] < 0.0 { -guard } else { guard };
        }

        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= du2[i] * x[i + 2];
            }
            let piv = if d[i] == 0.0 { guard } else { d[i] };
            x[i] = s / piv;
        }
        x
    }
}

/// Normalizes and fixes the sign so the first non-negligible entry is positive.
fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let lead = v
        .iter()
        .copied()
        .find(|x| x.abs() > 1e-8)
        .unwrap_or(1.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Lowest eigenpair of `tri`, eigenvector unit norm.
///
/// The returned energy is the Rayleigh quotient of the refined vector and the
/// residual `|T v - E v|` is at most `1e-10 * max(1, |E|)`.
pub fn sector_ground(tri: &TridiagonalMatrix) -> Result<(f64, Vec<f64>)> {
    let n = tri.dim();
    if n == 1 {
        return Ok((tri.diag[0], vec![1.0]));
    }
    let e0 = tri.eigenvalue(0)?;
    let tol = 1e-10 * e0.abs().max(1.0);

    // Alternating-sign start overlaps well with ground states of matrices
    // with positive couplings; the ramp breaks symmetric cancellations.
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * (1.0 + i as f64 / n as f64)
        })
        .collect();
    normalize(&mut v);

    let mut energy = e0;
    for _ in 0..MAX_INVERSE_STEPS {
        v = tri.shifted_solve(e0, &v);
        normalize(&mut v);
        let tv = tri.apply(&v);
        energy = tv.iter().zip(&v).map(|(a, b)| a * b).sum();
        if tri.residual(energy, &v) <= tol {
            return Ok((energy, v));
        }
    }
    Err(DickeError::NoConvergence(format!(
        "inverse iteration residual {} above {tol} (E = {energy})",
        tri.residual(energy, &v)
    )))
}
