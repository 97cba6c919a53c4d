use alloc::string::String;
use alloc::vec::Vec;

use super::config::{HadamardTiming, ScenarioConfig};
use super::plan::ScenarioPlan;
use super::stats::{summarize, MonteCarloSummary};
use crate::band::{FieldConfig, SpectralWindow};
use crate::noise::NoiseModel;
use crate::{Error, Result};

/// Sweepable numeric fields, by their config paths.
pub const SWEEP_PARAMETERS: &[&str] = &[
    "field.b_tesla",
    "window.bandwidth_ueV",
    "window.center_ueV",
    "material.g_cb",
    "material.g_lh",
    "material.strain_splitting_ueV",
    "noise.t2_iii_v_ns",
    "noise.t2_si_ns",
    "noise.transport_time_ns",
    "noise.transport_dephasing_fraction",
    "noise.transport_loss",
    "chain.gate_error",
    "storage_time_ns",
    "hadamard_time_ns",
    "hadamard_periods",
    "absorption_efficiency",
];

/// Resolves a full path or its last segment (`b_tesla` for `field.b_tesla`).
pub fn resolve_parameter(path: &str) -> Result<&'static str> {
    SWEEP_PARAMETERS
        .iter()
        .find(|p| **p == path || p.rsplit('.').next() == Some(path))
        .copied()
        .ok_or(Error::UnknownParameter)
}

/// Sets the numeric field at `path`.
pub fn set_parameter(cfg: &mut ScenarioConfig, path: &str, value: f64) -> Result<()> {
    let n = cfg.noise;
    let noise = |t2v, t2s, tt, fr, loss| NoiseModel::new(t2v, t2s, tt, fr, loss);
    match resolve_parameter(path)? {
        "field.b_tesla" => cfg.field = FieldConfig::new(value, cfg.field.orientation())?,
        "window.bandwidth_ueV" => {
            let (c, shape) = match cfg.window {
                Some(w) => (w.center_uev(), w.lineshape()),
                None => (None, crate::band::Lineshape::Gaussian),
            };
            cfg.window = Some(SpectralWindow::new(c, value, shape)?);
        }
        "window.center_ueV" => match cfg.window {
            Some(w) => cfg.window = Some(SpectralWindow::new(Some(value), w.bandwidth_uev(), w.lineshape())?),
            None => return Err(Error::InvalidParameter("window.center_ueV needs a finite window")),
        },
        "material.g_cb" => cfg.material = cfg.material.clone().with_g_cb(value)?,
        "material.g_lh" => cfg.material = cfg.material.clone().with_g_lh(value)?,
        "material.strain_splitting_ueV" => cfg.material = cfg.material.clone().with_strain_splitting(value)?,
        "noise.t2_iii_v_ns" => {
            cfg.noise =
                noise(value, n.t2_si_ns(), n.transport_time_ns(), n.transport_dephasing_fraction(), n.transport_loss())?
        }
        "noise.t2_si_ns" => {
            cfg.noise = noise(
                n.t2_iii_v_ns(),
                value,
                n.transport_time_ns(),
                n.transport_dephasing_fraction(),
                n.transport_loss(),
            )?
        }
        "noise.transport_time_ns" => {
            cfg.noise =
                noise(n.t2_iii_v_ns(), n.t2_si_ns(), value, n.transport_dephasing_fraction(), n.transport_loss())?
        }
        "noise.transport_dephasing_fraction" => {
            cfg.noise = noise(n.t2_iii_v_ns(), n.t2_si_ns(), n.transport_time_ns(), value, n.transport_loss())?
        }
        "noise.transport_loss" => {
            cfg.noise =
                noise(n.t2_iii_v_ns(), n.t2_si_ns(), n.transport_time_ns(), n.transport_dephasing_fraction(), value)?
        }
        "chain.gate_error" => cfg.chain.gate_error = value,
        "storage_time_ns" => cfg.storage_time_ns = value,
        "hadamard_time_ns" => cfg.hadamard = HadamardTiming::TimeNs(value),
        "hadamard_periods" => cfg.hadamard = HadamardTiming::Periods(value),
        "absorption_efficiency" => cfg.absorption_efficiency = value,
        _ => return Err(Error::UnknownParameter),
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub summary: MonteCarloSummary,
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => alloc::vec![from],
        _ => (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect(),
    }
}

/// Per-value configurations of a sweep, in the given order.
pub fn sweep_configs(cfg: &ScenarioConfig, path: &str, values: &[f64]) -> Result<Vec<ScenarioConfig>> {
    resolve_parameter(path)?;
    values
        .iter()
        .map(|&v| {
            let mut c = cfg.clone();
            set_parameter(&mut c, path, v)?;
            Ok(c)
        })
        .collect()
}

/// One Monte Carlo row per value, each with the configuration's seed.
pub fn sweep(cfg: &ScenarioConfig, path: &str, values: &[f64], n_samples: usize) -> Result<Vec<SweepRow>> {
    let param = String::from(resolve_parameter(path)?);
    let configs = sweep_configs(cfg, path, values)?;
    configs
        .iter()
        .zip(values)
        .map(|(c, &value)| {
            let plan = ScenarioPlan::new(c)?;
            let samples = (0..n_samples as u64).map(|i| plan.sample(c.seed, i)).collect::<Result<Vec<_>>>()?;
            Ok(SweepRow { param: param.clone(), value, summary: summarize(&samples)? })
        })
        .collect()
}
