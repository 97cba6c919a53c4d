//! Pure dephasing and the III-V → Si transport channel.
//!
//! Coherences decay as exp(-t/T2) in a chosen basis (the local energy
//! eigenbasis for a Zeeman-split spin); populations are untouched.

use crate::linalg::{re, CMatrix};
use crate::quantum::{apply_channel, FactorLabel, HilbertFactor, QuantumChannel, QuantumState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    t2_iii_v_ns: f64,
    t2_si_ns: f64,
    transport_time_ns: f64,
    transport_dephasing_fraction: f64,
    transport_loss: f64,
}

impl NoiseModel {
    /// T2 values must be positive (infinite disables dephasing); the
    /// transport time non-negative; fraction and loss in [0, 1].
    pub fn new(
        t2_iii_v_ns: f64,
        t2_si_ns: f64,
        transport_time_ns: f64,
        transport_dephasing_fraction: f64,
        transport_loss: f64,
    ) -> Result<Self> {
        if !(t2_iii_v_ns > 0.0 && t2_si_ns > 0.0) {
            return Err(Error::InvalidParameter("T2 times must be positive"));
        }
        if !(transport_time_ns >= 0.0 && transport_time_ns.is_finite()) {
            return Err(Error::InvalidParameter("transport time must be finite and non-negative"));
        }
        for p in [transport_dephasing_fraction, transport_loss] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter("transport fraction and loss must lie in [0, 1]"));
            }
        }
        Ok(Self { t2_iii_v_ns, t2_si_ns, transport_time_ns, transport_dephasing_fraction, transport_loss })
    }

    /// No dephasing, no loss, instantaneous transport.
    pub fn ideal() -> Self {
        Self {
            t2_iii_v_ns: f64::INFINITY,
            t2_si_ns: f64::INFINITY,
            transport_time_ns: 0.0,
            transport_dephasing_fraction: 0.0,
            transport_loss: 0.0,
        }
    }

    pub fn t2_iii_v_ns(&self) -> f64 {
        self.t2_iii_v_ns
    }

    pub fn t2_si_ns(&self) -> f64 {
        self.t2_si_ns
    }

    pub fn transport_time_ns(&self) -> f64 {
        self.transport_time_ns
    }

    pub fn transport_dephasing_fraction(&self) -> f64 {
        self.transport_dephasing_fraction
    }

    pub fn transport_loss(&self) -> f64 {
        self.transport_loss
    }

    /// Coherence multiplier of one transport leg.
    pub fn transport_coherence(&self) -> f64 {
        coherence_factor(self.transport_time_ns, self.t2_iii_v_ns) * (1.0 - self.transport_dephasing_fraction)
    }
}

/// T2 = 100 ns in the III-V absorber, 0.5 ms in Si, 1 ns transport.
impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            t2_iii_v_ns: 100.0,
            t2_si_ns: 5.0e5,
            transport_time_ns: 1.0,
            transport_dephasing_fraction: 0.0,
            transport_loss: 0.0,
        }
    }
}

/// exp(-t/T2); 1 for an infinite T2.
pub fn coherence_factor(t_ns: f64, t2_ns: f64) -> f64 {
    if t2_ns.is_infinite() {
        1.0
    } else {
        libm::exp(-t_ns / t2_ns)
    }
}

/// Multiplies the off-diagonal elements of a 2×2 operator by `lambda` in
/// the basis whose columns are `basis` (computational basis if `None`).
pub fn dephase_matrix(x: &CMatrix, lambda: f64, basis: Option<&CMatrix>) -> CMatrix {
    let mut y = match basis {
        Some(b) => &(&b.adjoint() * x) * b,
        None => x.clone(),
    };
    y[(0, 1)] *= lambda;
    y[(1, 0)] *= lambda;
    match basis {
        Some(b) => &(b * &y) * &b.adjoint(),
        None => y,
    }
}

/// Phase-damping channel with coherence multiplier `lambda` ∈ [0, 1].
pub fn phase_damping(factor: HilbertFactor, lambda: f64, basis: Option<&CMatrix>) -> Result<QuantumChannel> {
    if factor.dim() != 2 {
        return Err(Error::DimensionMismatch);
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter("coherence multiplier must lie in [0, 1]"));
    }
    let z = CMatrix::diag(&[re(1.0), re(-1.0)]);
    let z = match basis {
        Some(b) => &(b * &z) * &b.adjoint(),
        None => z,
    };
    let k0 = CMatrix::identity(2).scale(re(libm::sqrt((1.0 + lambda) / 2.0)));
    let k1 = z.scale(re(libm::sqrt((1.0 - lambda) / 2.0)));
    QuantumChannel::on(factor, alloc::vec![k0, k1], false)
}

/// Dephasing channel for time `t_ns` at coherence time `t2_ns`.
pub fn dephasing_channel(
    factor: HilbertFactor,
    t_ns: f64,
    t2_ns: f64,
    basis: Option<&CMatrix>,
) -> Result<QuantumChannel> {
    if !(t_ns >= 0.0) {
        return Err(Error::InvalidParameter("dephasing time must be non-negative"));
    }
    if !(t2_ns > 0.0) {
        return Err(Error::InvalidParameter("T2 must be positive"));
    }
    phase_damping(factor, coherence_factor(t_ns, t2_ns), basis)
}

/// Dephases the qubit factor `target` of `rho` over `t_ns`.
pub fn dephase(
    rho: &QuantumState,
    target: FactorLabel,
    t_ns: f64,
    t2_ns: f64,
    basis: Option<&CMatrix>,
) -> Result<QuantumState> {
    let p = rho.position(target)?;
    let ch = dephasing_channel(rho.factors()[p], t_ns, t2_ns, basis)?;
    Ok(apply_channel(rho, &ch)?.state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportOutcome {
    /// `None` when the electron never arrives.
    pub state: Option<QuantumState>,
    pub arrival_probability: f64,
}

/// Moves the electron from the absorber to the storage section: dephasing
/// at the III-V T2 over the transport time, the extra dephasing fraction,
/// and loss. `basis` is the electron's energy eigenbasis.
pub fn transport_channel(rho: &QuantumState, nm: &NoiseModel, basis: Option<&CMatrix>) -> Result<TransportOutcome> {
    let p = rho.position(FactorLabel::Electron)?;
    let arrival_probability = 1.0 - nm.transport_loss;
    if arrival_probability == 0.0 {
        return Ok(TransportOutcome { state: None, arrival_probability });
    }
    let ch = phase_damping(rho.factors()[p], nm.transport_coherence(), basis)?;
    Ok(TransportOutcome { state: Some(apply_channel(rho, &ch)?.state), arrival_probability })
}
