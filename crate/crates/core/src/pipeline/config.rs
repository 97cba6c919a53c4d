use alloc::vec::Vec;

use crate::band::{
    build_degenerate_scheme, build_level_scheme, precession_period, BandScheme, Case, FieldConfig, MaterialParams,
    Orientation, SpectralWindow,
};
use crate::noise::NoiseModel;
use crate::processor::ChainParams;
use crate::transfer::{canonical_k, normalize, Vec3};
use crate::{Error, Result};

/// When the Case B readout Hadamard is applied after absorption.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HadamardTiming {
    /// A multiple of the conduction precession period at the configured field.
    Periods(f64),
    /// A fixed time, independent of the field.
    TimeNs(f64),
}

/// One violated configuration constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub case: Case,
    pub material: MaterialParams,
    pub field: FieldConfig,
    /// `None` is ideal (infinitely narrow) spectral selection.
    pub window: Option<SpectralWindow>,
    pub noise: NoiseModel,
    pub chain: ChainParams,
    pub compensate: bool,
    /// Reject unresolvable windows and unsynchronized Hadamard times.
    pub strict: bool,
    pub storage_time_ns: f64,
    pub hadamard: HadamardTiming,
    /// `None` emits along the case's canonical axis.
    pub emission_direction: Option<Vec3>,
    pub absorption_efficiency: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    /// Noiseless, ideally selected scenario at 1 T for `case`.
    pub fn ideal(case: Case) -> Self {
        let (material, orientation) = match case {
            Case::A => (MaterialParams::inas_gaas_qw(), Orientation::Normal),
            Case::B => (MaterialParams::inas_gaas_qw(), Orientation::InPlane),
            Case::Degenerate => (MaterialParams::gaas_qw(), Orientation::Normal),
        };
        Self {
            case,
            material,
            field: FieldConfig::new(1.0, orientation).expect("1 T is a valid field"),
            window: None,
            noise: NoiseModel::ideal(),
            chain: ChainParams::default(),
            compensate: true,
            strict: false,
            storage_time_ns: 0.0,
            hadamard: HadamardTiming::Periods(1.0),
            emission_direction: None,
            absorption_efficiency: 1.0,
            seed: 0,
        }
    }

    /// Every violated constraint, in a fixed order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let mut bad = |field, message| v.push(Violation { field, message });
        let want = match self.case {
            Case::A | Case::Degenerate => Orientation::Normal,
            Case::B => Orientation::InPlane,
        };
        if self.field.orientation() != want {
            bad(
                "field.orientation",
                match self.case {
                    Case::B => "case B needs an in-plane field",
                    _ => "cases A and degenerate need a field along the growth axis",
                },
            );
        }
        if !(self.storage_time_ns >= 0.0 && self.storage_time_ns.is_finite()) {
            bad("storage_time_ns", "must be finite and non-negative");
        }
        match self.hadamard {
            HadamardTiming::Periods(n) if !(n >= 0.0 && n.is_finite()) => {
                bad("hadamard_periods", "must be finite and non-negative")
            }
            HadamardTiming::TimeNs(t) if !(t >= 0.0 && t.is_finite()) => {
                bad("hadamard_time_ns", "must be finite and non-negative")
            }
            _ => {}
        }
        if let Some(d) = self.emission_direction {
            if !d.iter().all(|x| x.is_finite()) || normalize(d).is_err() {
                bad("emission_direction", "must be a finite nonzero vector");
            }
        }
        if !(0.0..=1.0).contains(&self.absorption_efficiency) {
            bad("absorption_efficiency", "must lie in [0, 1]");
        }
        if let Err(Error::InvalidParameter(m)) = self.chain.validate() {
            bad("chain", m);
        }
        v
    }

    /// Fails with the first violation.
    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            Some(v) => Err(Error::InvalidParameter(v.message)),
            None => Ok(()),
        }
    }

    pub fn scheme(&self) -> Result<BandScheme> {
        let s = match self.case {
            Case::Degenerate => build_degenerate_scheme(&self.material, &self.field)?,
            _ => build_level_scheme(&self.material, &self.field)?,
        };
        if s.case() != self.case {
            return Err(Error::SchemeMismatch);
        }
        Ok(s)
    }

    /// Time of the Case B readout Hadamard; zero for the other cases.
    pub fn hadamard_time_ns(&self) -> Result<f64> {
        if self.case != Case::B {
            return Ok(0.0);
        }
        match self.hadamard {
            HadamardTiming::TimeNs(t) => Ok(t),
            HadamardTiming::Periods(0.0) => Ok(0.0),
            HadamardTiming::Periods(n) => Ok(n * precession_period(self.material.g_cb(), self.field.b_tesla())?),
        }
    }

    pub fn emission_direction(&self) -> Result<Vec3> {
        normalize(self.emission_direction.unwrap_or_else(|| canonical_k(self.case)))
    }
}
