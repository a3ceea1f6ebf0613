//! Quantum pyramid architecture (QPA) encoders for the kinetic-energy
//! time-evolution operator, with a dense statevector simulator, classical
//! split-step oracles and reporting helpers.
//!
//! Qubit 0 is the most significant bit of every basis index.

pub mod analysis;
pub mod circuit;
pub mod encoder;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod report;
pub mod statevector;

pub use circuit::{
    baseline_gate_count, count_gates, qate_gate_count, Circuit, Gate, GateKind, GateMetrics,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
