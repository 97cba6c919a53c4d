//! Physical constants, in the unit system used throughout the crate:
//! energies in µeV, times in ns, fields in T, temperatures in K.

/// Bohr magneton, µeV/T.
pub const BOHR_MAGNETON_UEV_PER_T: f64 = 57.883_818_0;

/// Reduced Planck constant, µeV·ns.
pub const HBAR_UEV_NS: f64 = 0.658_211_956_9;

/// Boltzmann constant, µeV/K.
pub const BOLTZMANN_UEV_PER_K: f64 = 86.173_332;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;

/// Planck constant, J·s.
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;

/// Resistance quantum h/e², Ω.
pub const RESISTANCE_QUANTUM_OHM: f64 = PLANCK_J_S / (ELEMENTARY_CHARGE_C * ELEMENTARY_CHARGE_C);

/// One electron-volt expressed in µeV.
pub const UEV_PER_EV: f64 = 1.0e6;
