use crate::constants::{BOLTZMANN_UEV_PER_K, ELEMENTARY_CHARGE_C, RESISTANCE_QUANTUM_OHM, UEV_PER_EV};
use crate::{Error, Result};

/// Emitter quantum-dot parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotConstraints {
    pub capacitance_f: f64,
    pub tunnel_resistance_ohm: f64,
    pub confinement_uev: f64,
    pub temperature_k: f64,
}

/// Each check as (measured, threshold, ok).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotCheck {
    pub measured: f64,
    pub threshold: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotReport {
    /// e²/C against kB·T, both in µeV.
    pub charging: DotCheck,
    /// Confinement energy against kB·T, in µeV.
    pub confinement: DotCheck,
    /// Tunnel resistance against h/e², in Ω.
    pub resistance: DotCheck,
}

impl DotReport {
    pub fn charging_ok(&self) -> bool {
        self.charging.ok
    }

    pub fn confinement_ok(&self) -> bool {
        self.confinement.ok
    }

    pub fn resistance_ok(&self) -> bool {
        self.resistance.ok
    }

    pub fn all_ok(&self) -> bool {
        self.charging.ok && self.confinement.ok && self.resistance.ok
    }
}

/// The charging condition is read as an energy inequality, e²/C > kB·T.
pub fn dot_constraint_check(d: &DotConstraints) -> Result<DotReport> {
    let v = [d.capacitance_f, d.tunnel_resistance_ohm, d.confinement_uev, d.temperature_k];
    if !v.iter().all(|x| *x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter("dot parameters must be positive"));
    }
    let kt = BOLTZMANN_UEV_PER_K * d.temperature_k;
    let check = |measured: f64, threshold: f64| DotCheck { measured, threshold, ok: measured > threshold };
    Ok(DotReport {
        charging: check(ELEMENTARY_CHARGE_C / d.capacitance_f * UEV_PER_EV, kt),
        confinement: check(d.confinement_uev, kt),
        resistance: check(d.tunnel_resistance_ohm, RESISTANCE_QUANTUM_OHM),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(r: f64) -> DotConstraints {
        DotConstraints { capacitance_f: 1e-18, tunnel_resistance_ohm: r, confinement_uev: 5000.0, temperature_k: 4.0 }
    }

    #[test]
    fn resistance_threshold() {
        assert!(dot_constraint_check(&dot(26e3)).unwrap().resistance_ok());
        assert!(!dot_constraint_check(&dot(25e3)).unwrap().resistance_ok());
        assert!(!dot_constraint_check(&dot(20e3)).unwrap().resistance_ok());
        let r = dot_constraint_check(&dot(26e3)).unwrap().resistance;
        assert!((r.threshold - 25_812.807_459_3).abs() < 1e-6);
    }

    #[test]
    fn charging_energy() {
        let c = dot_constraint_check(&dot(26e3)).unwrap().charging;
        assert!((c.measured - 160_217.663_4).abs() < 1e-3);
        assert!((c.threshold - 344.693_328).abs() < 1e-6);
        assert!(c.ok);
        assert!(dot_constraint_check(&DotConstraints { temperature_k: 0.0, ..dot(1.0) }).is_err());
    }
}
