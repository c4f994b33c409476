//! Brute-force dense diagonalization in the truncated product basis
//! `|n> (x) |j, m>`, used to validate the sector decomposition.

use nalgebra::DMatrix;

use crate::error::{DickeError, Result};
use crate::model::{check_coupling, ModelParams};

pub const MAX_DENSE_DIM: usize = 2000;

fn index(n_atoms: usize, photons: usize, excited: usize) -> usize {
    photons * (n_atoms + 1) + excited
}

/// Full Hamiltonian with photon numbers `0..=photon_cutoff`.
pub fn dense_hamiltonian(
    params: &ModelParams,
    n_atoms: usize,
    lambda: f64,
    photon_cutoff: usize,
) -> Result<DMatrix<f64>> {
    check_coupling(lambda)?;
    if n_atoms < 1 {
        return Err(DickeError::InvalidSector("need at least one atom".into()));
    }
    let dim = (photon_cutoff + 1) * (n_atoms + 1);
    if dim > MAX_DENSE_DIM {
        return Err(DickeError::DimensionTooLarge {
            dim,
            limit: MAX_DENSE_DIM,
        });
    }
    let nf = n_atoms as f64;
    let j = nf / 2.0;
    let g = lambda / nf.sqrt();
    let mut h = DMatrix::zeros(dim, dim);
    for n in 0..=photon_cutoff {
        for q in 0..=n_atoms {
            let m = q as f64 - j;
            let i = index(n_atoms, n, q);
            h[(i, i)] = params.omega() * n as f64 + params.omega0() / 2.0 * m;
            // J+ a : |n, m> -> |n - 1, m + 1>, and its adjoint
            if n >= 1 && q < n_atoms {
                let amp = g * (n as f64).sqrt() * (j * (j + 1.0) - m * (m + 1.0)).sqrt();
                let k = index(n_atoms, n - 1, q + 1);
                h[(k, i)] = amp;
                h[(i, k)] = amp;
            }
        }
    }
    Ok(h)
}

/// All eigenvalues of the truncated dense Hamiltonian, ascending.
pub fn dense_oracle(
    params: &ModelParams,
    n_atoms: usize,
    lambda: f64,
    photon_cutoff: usize,
) -> Result<Vec<f64>> {
    let h = dense_hamiltonian(params, n_atoms, lambda, photon_cutoff)?;
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Largest entry of `[H, a'a + Jz + N/2]` over basis states below the photon
/// cutoff.
pub fn excitation_commutator_norm(
    params: &ModelParams,
    n_atoms: usize,
    lambda: f64,
    photon_cutoff: usize,
) -> Result<f64> {
    let h = dense_hamiltonian(params, n_atoms, lambda, photon_cutoff)?;
    let dim = h.nrows();
    // a'a + Jz + N/2 is diagonal with entries n + q
    let charge: Vec<f64> = (0..dim)
        .map(|i| (i / (n_atoms + 1) + i % (n_atoms + 1)) as f64)
        .collect();
    let interior = |i: usize| i / (n_atoms + 1) < photon_cutoff;
    let mut worst: f64 = 0.0;
    for r in (0..dim).filter(|&r| interior(r)) {
        for c in (0..dim).filter(|&c| interior(c)) {
            worst = worst.max((h[(r, c)] * (charge[c] - charge[r])).abs());
        }
    }
    Ok(worst)
}
