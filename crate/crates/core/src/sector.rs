//! Finite-N exact diagonalization in excitation-number sectors.
//!
//! The rotating-wave coupling conserves `M = a'a + Jz + N/2`. In the sector
//! with `M` excitations the basis state `q` carries `q` excited atoms
//! (`m = q - N/2`) and `M - q` photons, and the Hamiltonian is tridiagonal.

use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};
use crate::model::{check_coupling, ModelParams};
use crate::tridiag::{sector_ground, TridiagonalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorBasis {
    n_atoms: usize,
    excitation: usize,
}

impl SectorBasis {
    pub fn new(n_atoms: usize, excitation: usize) -> Result<Self> {
        if n_atoms < 1 {
            return Err(DickeError::InvalidSector("need at least one atom".into()));
        }
        Ok(Self {
            n_atoms,
            excitation,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn excitation(&self) -> usize {
        self.excitation
    }

    pub fn dimension(&self) -> usize {
        self.excitation.min(self.n_atoms) + 1
    }

    /// Photon number of basis state `q`.
    pub fn photons(&self, q: usize) -> usize {
        self.excitation - q
    }

    /// `Jz` eigenvalue `m = q - N/2` of basis state `q`.
    pub fn spin_projection(&self, q: usize) -> f64 {
        q as f64 - self.n_atoms as f64 / 2.0
    }
}

/// Hamiltonian restricted to the sector with `excitation` quanta.
pub fn build_sector(
    params: &ModelParams,
    n_atoms: usize,
    lambda: f64,
    excitation: usize,
) -> Result<TridiagonalMatrix> {
    check_coupling(lambda)?;
    let basis = SectorBasis::new(n_atoms, excitation)?;
    let d = basis.dimension();
    let g = lambda / (n_atoms as f64).sqrt();
    let nf = n_atoms as f64;

    let diag = (0..d)
        .map(|q| {
            params.omega() * basis.photons(q) as f64 + params.omega0() / 2.0 * basis.spin_projection(q)
        })
        .collect();
    // <q+1, n-1| J+ a |q, n> = sqrt(n) sqrt((j - m)(j + m + 1)) = sqrt(n) sqrt((N - q)(q + 1))
    let offdiag = (0..d - 1)
        .map(|q| {
            let qf = q as f64;
            g * (basis.photons(q) as f64).sqrt() * ((nf - qf) * (qf + 1.0)).sqrt()
        })
        .collect();
    TridiagonalMatrix::new(diag, offdiag)
}

/// How far the ground-state search scans in `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPolicy {
    pub m_max_factor: f64,
    /// Reject a minimum found on the upper scan bound.
    pub require_interior: bool,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        Self {
            m_max_factor: 6.0,
            require_interior: true,
        }
    }
}

impl ScanPolicy {
    /// Upper scan bound `ceil(factor * N * max(1, lambda^2 / w^2))`.
    pub fn m_max(&self, params: &ModelParams, n_atoms: usize, lambda: f64) -> usize {
        let ratio = (lambda / params.omega()).powi(2).max(1.0);
        (self.m_max_factor * n_atoms as f64 * ratio).ceil() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EDGroundState {
    pub n_atoms: usize,
    pub lambda: f64,
    pub sector: usize,
    pub energy: f64,
    /// Unit-norm amplitudes over the basis of `sector`.
    pub amplitudes: Vec<f64>,
    pub photon_expectation: f64,
}

impl EDGroundState {
    pub fn energy_per_atom(&self) -> f64 {
        self.energy / self.n_atoms as f64
    }

    /// `(photon number, amplitude)` pairs of the ground vector.
    pub fn photon_amplitudes(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(q, &c)| (self.sector - q, c))
    }
}

/// Lowest eigenvalue of every sector `0..=m_max`.
pub fn sector_minima(
    params: &ModelParams,
    n_atoms: usize,
    lambda: f64,
    m_max: usize,
) -> Result<Vec<f64>> {
    (0..=m_max)
        .map(|m| build_sector(params, n_atoms, lambda, m)?.eigenvalue(0))
        .collect()
}

/// Global ground state over the sectors `0..=m_max` of the scan policy.
///
/// Sector minima within `1e-12` of each other resolve to the smaller `M`.
pub fn ground_state(
    params: &ModelParams,
    n_atoms: usize,
    lambda: f64,
    scan: &ScanPolicy,
) -> Result<EDGroundState> {
    check_coupling(lambda)?;
    SectorBasis::new(n_atoms, 0)?;
    let m_max = scan.m_max(params, n_atoms, lambda);
    let minima = sector_minima(params, n_atoms, lambda, m_max)?;

    let mut best = 0;
    for (m, &e) in minima.iter().enumerate().skip(1) {
        if e < minima[best] - 1e-12 {
            best = m;
        }
    }
    if scan.require_interior && best == m_max {
        return Err(DickeError::ScanBoundaryHit {
            n_atoms,
            lambda,
            m_max,
        });
    }

    let tri = build_sector(params, n_atoms, lambda, best)?;
    let (energy, amplitudes) = sector_ground(&tri)?;
    let photon_expectation = amplitudes
        .iter()
        .enumerate()
        .map(|(q, c)| (best - q) as f64 * c * c)
        .sum();
    Ok(EDGroundState {
        n_atoms,
        lambda,
        sector: best,
        energy,
        amplitudes,
        photon_expectation,
    })
}
