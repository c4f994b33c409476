//! Geometric phase of a state carried around the loop `R(phi) = exp(-i phi a'a)`,
//! `phi` in `[0, 2 pi]`.
//!
//! Two routes: the closed form `2 pi <a'a>` and a discrete Pancharatnam
//! product over the rotated states.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{DickeError, Result};
use crate::sector::EDGroundState;

const NORM_TOL: f64 = 1e-12;
pub const MIN_LOOP_STEPS: usize = 8;

/// Single-mode state in the photon-number basis.
///
/// Other degrees of freedom are traced into the map: each photon number
/// appears once, so states with several atomic components per photon number
/// (not the case in an excitation sector) must be combined beforehand.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberBasisState {
    amplitudes: BTreeMap<u64, Complex64>,
}

impl NumberBasisState {
    pub fn new(amplitudes: impl IntoIterator<Item = (u64, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, c) in amplitudes {
            *map.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let state = Self { amplitudes: map };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(DickeError::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Fock state `|n>`.
    pub fn fock(n: u64) -> Self {
        Self {
            amplitudes: BTreeMap::from([(n, Complex64::new(1.0, 0.0))]),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, n: u64) -> Complex64 {
        self.amplitudes
            .get(&n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&n, &c)| (n, c))
    }

    pub fn mean_photons(&self) -> f64 {
        self.iter().map(|(n, c)| n as f64 * c.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{i chi}`.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        let f = Complex64::from_polar(1.0, chi);
        Self {
            amplitudes: self.iter().map(|(n, c)| (n, c * f)).collect(),
        }
    }

    /// `<self | other>`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.iter().map(|(n, c)| c.conj() * other.amplitude(n)).sum()
    }
}

impl From<&EDGroundState> for NumberBasisState {
    fn from(g: &EDGroundState) -> Self {
        Self {
            amplitudes: g
                .photon_amplitudes()
                .map(|(n, c)| (n as u64, Complex64::new(c, 0.0)))
                .collect(),
        }
    }
}

/// `R(phi)|state>`: the amplitude of `|n>` picks up `e^{-i phi n}`.
pub fn rotate_state(state: &NumberBasisState, phi: f64) -> NumberBasisState {
    NumberBasisState {
        amplitudes: state
            .iter()
            .map(|(n, c)| (n, c * Complex64::from_polar(1.0, -phi * n as f64)))
            .collect(),
    }
}

/// `2 pi <a'a>`, unreduced (not taken mod `2 pi`).
pub fn gp_closed_form(state: &NumberBasisState) -> f64 {
    2.0 * PI * state.mean_photons()
}

/// Smallest admissible step count for [`gp_loop`]: at least 8 and strictly
/// above `4 <a'a>`, which keeps each segment phase below `pi/2`.
pub fn min_loop_steps(state: &NumberBasisState) -> usize {
    let bound = (4.0 * state.mean_photons()).floor() as usize + 1;
    bound.max(MIN_LOOP_STEPS)
}

/// Discrete loop estimate `-sum_k arg <psi(phi_k)|psi(phi_{k+1})>` with
/// `phi_k = 2 pi k / K`; the chain closes on the starting state.
pub fn gp_loop(state: &NumberBasisState, steps: usize) -> Result<f64> {
    let min = min_loop_steps(state);
    if steps < min {
        return Err(DickeError::StepCountTooSmall { steps, min });
    }
    let chain: Vec<NumberBasisState> = (0..steps)
        .map(|k| rotate_state(state, 2.0 * PI * k as f64 / steps as f64))
        .collect();
    let phase: f64 = (0..steps)
        .map(|k| chain[k].overlap(&chain[(k + 1) % steps]).arg())
        .sum();
    Ok(-phase)
}
