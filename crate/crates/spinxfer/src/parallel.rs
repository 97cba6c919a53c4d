//! Multi-threaded Monte Carlo with the same results as the sequential core
//! routines: samples are drawn from per-index streams, collected in index
//! order and reduced sequentially.

use rayon::prelude::*;
use spinxfer_core::pipeline::{
    summarize, sweep_configs, ChannelReport, MonteCarloSummary, Sample, ScenarioConfig, ScenarioPlan, SweepRow,
};
use spinxfer_core::Result;

pub fn samples(plan: &ScenarioPlan, seed: u64, n: usize) -> Result<Vec<Sample>> {
    (0..n as u64).into_par_iter().map(|i| plan.sample(seed, i)).collect()
}

pub fn monte_carlo(cfg: &ScenarioConfig, n: usize) -> Result<MonteCarloSummary> {
    let plan = ScenarioPlan::new(cfg)?;
    summarize(&samples(&plan, cfg.seed, n)?)
}

pub fn channel_report(cfg: &ScenarioConfig, n: usize) -> Result<ChannelReport> {
    let plan = ScenarioPlan::new(cfg)?;
    let monte_carlo = summarize(&samples(&plan, cfg.seed, n)?)?;
    Ok(ChannelReport { monte_carlo, tomography: plan.tomography()?, lossy: plan.is_lossy() })
}

/// Rows in the order of `configs`; each row's samples run in parallel.
pub fn sweep_rows(param: &str, values: &[f64], configs: &[ScenarioConfig], n: usize) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .zip(configs)
        .map(|(&value, cfg)| Ok(SweepRow { param: param.to_string(), value, summary: monte_carlo(cfg, n)? }))
        .collect()
}

pub fn sweep(cfg: &ScenarioConfig, path: &str, values: &[f64], n: usize) -> Result<Vec<SweepRow>> {
    let configs = sweep_configs(cfg, path, values)?;
    let param = spinxfer_core::pipeline::resolve_parameter(path)?;
    sweep_rows(param, values, &configs, n)
}
