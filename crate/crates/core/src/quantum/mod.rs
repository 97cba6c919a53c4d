//! Finite-dimensional state and channel algebra plus angular-momentum coupling.

mod angular;
mod channel;
mod state;

pub use angular::*;
pub use channel::*;
pub use state::*;
