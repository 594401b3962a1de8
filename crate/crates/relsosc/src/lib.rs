//! Relativistic linear singular oscillator on the half line.
//!
//! A finite-difference Hamiltonian whose eigenfunctions are continuous dual
//! Hahn polynomials, its SU(1,1) ladder algebra, Perelomov coherent states
//! with closed-form overlaps, propagator and partition function, the
//! time-sliced coherent-state path integral, and the classical dynamics on
//! the Lobachevsky-plane phase space with Bohr-Sommerfeld quantization.
//!
//! Energies are reported in units of mc², lengths in Compton wavelengths, so
//! the model depends only on the dimensionless pair (omega0, g0).

pub mod cli;
pub mod coherent;
pub mod error;
pub mod model;
pub mod numerics;
pub mod pathint;
pub mod su11;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ModelParams, Oscillator, Regime, SpectralParams};
