//! Ground state, geometric phase and super-radiant transition of the
//! rotating-wave Dicke model.
//!
//! [`model`] holds the thermodynamic-limit mean-field results, [`sector`]
//! the finite-N exact diagonalization (with [`dense`] as a brute-force
//! check), [`gp`] the geometric phase of a photon-number state and [`crit`]
//! the coupling sweeps and finite-size scaling built on top.

pub mod crit;
pub mod dense;
pub mod error;
pub mod gp;
pub mod model;
pub mod sector;
pub mod tridiag;

pub use error::{DickeError, Result};
pub use model::{MeanFieldSolution, ModelParams, Phase};
pub use sector::{EDGroundState, ScanPolicy};
