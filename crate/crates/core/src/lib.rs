//! Simulation of periodically driven Rydberg-atom phase gates.
//!
//! The crate assembles the full time-dependent Hamiltonians of amplitude- and
//! frequency-modulated Rydberg antiblockade gates, propagates them with the
//! Schrödinger or Lindblad equation, and evaluates gate fidelities and error
//! budgets against analytic effective models.

pub mod algebra;
pub mod campaigns;
pub mod config;
pub mod effective;
pub mod error;
pub mod metrics;
pub mod propagation;
pub mod scalar;
pub mod system;
pub mod timeop;
pub mod units;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;
pub type Operator64 = algebra::Operator<f64>;
pub type Operator32 = algebra::Operator<f32>;
pub type StateVector64 = algebra::StateVector<f64>;
pub type StateVector32 = algebra::StateVector<f32>;
pub type DensityMatrix64 = algebra::DensityMatrix<f64>;
pub type Hamiltonian64 = timeop::Hamiltonian<f64>;
pub type IntegratorConfig64 = propagation::IntegratorConfig<f64>;
