//! Conduction-spin precession and the synchronized Hadamard readout.

use crate::band::{precession_period, BandScheme, Case};
use crate::linalg::{re, CMatrix};
use crate::quantum::{apply_local_unitary, FactorLabel, QuantumState};
use crate::{Error, Result};

/// Periods within this relative distance of an integer count as synchronized.
const SYNC_TOL: f64 = 1e-9;

/// The Hadamard matrix.
pub fn hadamard() -> CMatrix {
    let s = re(core::f64::consts::FRAC_1_SQRT_2);
    CMatrix::from_rows(&[[s, s], [s, -s]])
}

/// Free Zeeman evolution of the electron factor for `t_ns`.
pub fn precess(electron: &QuantumState, scheme: &BandScheme, t_ns: f64) -> Result<QuantumState> {
    if !t_ns.is_finite() {
        return Err(Error::InvalidParameter("time must be finite"));
    }
    apply_local_unitary(electron, FactorLabel::Electron, &scheme.conduction_propagator(t_ns))
}

/// Spin-basis unitary of precession for `t_ns` followed by a Hadamard in the
/// |0⟩/|1⟩ eigenbasis.
pub fn hadamard_unitary(scheme: &BandScheme, t_ns: f64) -> CMatrix {
    let c = scheme.conduction_basis();
    let h = &(&c * &hadamard()) * &c.adjoint();
    &h * &scheme.conduction_propagator(t_ns)
}

/// Rejects times that are not a whole number of precession periods.
pub fn require_synchronized(scheme: &BandScheme, t_ns: f64) -> Result<()> {
    if t_ns == 0.0 {
        return Ok(());
    }
    let tau = precession_period(scheme.material().g_cb(), scheme.field().b_tesla())?;
    let n = t_ns / tau;
    if (n - libm::round(n)).abs() > SYNC_TOL * n.abs().max(1.0) {
        return Err(Error::InvalidParameter("Hadamard time is not a whole number of precession periods"));
    }
    Ok(())
}

/// Precesses for `t_apply_ns`, then applies the Hadamard that maps the
/// precessing spin states |↓⟩, |↑⟩ onto the eigenstates |0⟩, |1⟩.
///
/// For an electron produced by Case B absorption of α|σ+⟩ + β|σ-⟩ and
/// `t_apply_ns` a whole number of periods, the result is α|0⟩ + β|1⟩ up to
/// a global phase. With `strict`, any other time is rejected; otherwise the
/// fidelity simply degrades.
pub fn synchronized_hadamard(
    electron: &QuantumState,
    scheme: &BandScheme,
    t_apply_ns: f64,
    strict: bool,
) -> Result<QuantumState> {
    if scheme.case() != Case::B {
        return Err(Error::SchemeMismatch);
    }
    if strict {
        require_synchronized(scheme, t_apply_ns)?;
    }
    if !t_apply_ns.is_finite() {
        return Err(Error::InvalidParameter("time must be finite"));
    }
    apply_local_unitary(electron, FactorLabel::Electron, &hadamard_unitary(scheme, t_apply_ns))
}
