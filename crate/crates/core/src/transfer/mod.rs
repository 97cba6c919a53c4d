//! Selection-rule maps between photon polarization and electron spin.

mod absorb;
mod dipole;
mod emit;
mod polarization;
mod spin;

pub use absorb::*;
pub use dipole::*;
pub use emit::*;
pub use polarization::*;
pub use spin::*;
