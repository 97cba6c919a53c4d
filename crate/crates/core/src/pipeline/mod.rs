//! End-to-end scenarios: detection, storage, re-emission, Monte Carlo
//! averages, process tomography, device checks and parameter sweeps.
//!
//! Stored and emitted qubits are compared in the logical basis that carries
//! the photon's basis states, so fidelities are comparable across cases.

mod config;
mod dot;
mod plan;
mod stats;
mod sweep;

pub use config::*;
pub use dot::*;
pub use plan::*;
pub use stats::*;
pub use sweep::*;
