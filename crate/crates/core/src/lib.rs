//! Coherent transfer of quantum information between photon polarization and
//! the spin of a conduction-band electron in a strained, Zeeman-split
//! semiconductor.
//!
//! The crate is `no_std` (with `alloc`). Everything in it is a pure function
//! over immutable values; IO, configuration files and the command-line front
//! end live in the companion `spinxfer` crate.
//!
//! Module map:
//!
//! * [`quantum`]: states, partial traces, fidelities, channels, Choi matrices
//!   and Clebsch-Gordan coupling.
//! * [`band`]: material catalog, Zeeman/strain level schemes and spectral
//!   resolvability.
//! * [`transfer`]: dipole selection rules, the absorption maps, precession,
//!   synchronized Hadamard readout and emission.
//! * [`noise`]: pure dephasing and transport channels.
//! * [`processor`]: gate-level donor-chain storage.
//! * [`pipeline`]: end-to-end scenarios, tomography, Monte Carlo and sweeps.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is the NaN-rejecting form used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod band;
pub mod constants;
mod error;
pub mod linalg;
pub mod noise;
pub mod pipeline;
pub mod processor;
pub mod quantum;
pub mod transfer;

pub use error::{Error, Result};
pub use num_complex::Complex64;
