use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::config::ScenarioConfig;
use super::plan::{ScenarioPlan, StageFidelities};
use crate::quantum::{is_cptp, process_fidelity, ChoiMatrix, CptpVerdict};
use crate::transfer::DARK_TOL;
use crate::{Error, Result};

/// Tolerance of the CPTP check on assembled channels.
pub const CPTP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyReport {
    /// Choi matrix of the conditional photon → photon channel.
    pub choi: ChoiMatrix,
    pub cptp: CptpVerdict,
    /// Process fidelity to the identity channel.
    pub process_fidelity: f64,
    /// (d·F_pro + 1)/(d + 1).
    pub average_fidelity: f64,
}

impl ScenarioPlan {
    pub fn tomography(&self) -> Result<TomographyReport> {
        let choi = ChoiMatrix::from_linear_map(2, 2, true, |x| Ok(self.map(x)))?;
        if !(choi.matrix().trace().re > DARK_TOL) {
            return Err(Error::DarkDirection);
        }
        let cptp = is_cptp(&choi, CPTP_TOL);
        let f = process_fidelity(&choi)?;
        Ok(TomographyReport { choi, cptp, process_fidelity: f, average_fidelity: (2.0 * f + 1.0) / 3.0 })
    }
}

/// Choi matrix, CPTP verdict and process fidelity of the round trip.
pub fn process_tomography(cfg: &ScenarioConfig) -> Result<TomographyReport> {
    ScenarioPlan::new(cfg)?.tomography()
}

/// Haar-random qubit `index` of the stream family seeded by `seed`.
///
/// Each index owns the ChaCha stream `index`, so the draw does not depend
/// on which other samples were taken or in what order.
pub fn haar_qubit(seed: u64, index: u64) -> [Complex64; 2] {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let g: [f64; 4] = core::array::from_fn(|_| rng.sample(StandardNormal));
        let n = libm::sqrt(g.iter().map(|x| x * x).sum());
        if n > 0.0 {
            return [Complex64::new(g[0] / n, g[1] / n), Complex64::new(g[2] / n, g[3] / n)];
        }
    }
}

/// One Monte Carlo draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub stages: StageFidelities,
    pub success_probability: f64,
    pub leakage: f64,
    pub hole_purity: f64,
}

impl ScenarioPlan {
    pub fn sample(&self, seed: u64, index: u64) -> Result<Sample> {
        let (_, r) = self.run(haar_qubit(seed, index))?;
        Ok(Sample {
            stages: r.stages,
            success_probability: r.success_probability,
            leakage: r.leakage,
            hole_purity: r.hole_purity,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSummary {
    pub samples: usize,
    pub mean_fidelity: f64,
    /// Sample standard deviation / √n.
    pub stderr: f64,
    pub success_probability: f64,
    pub leakage: f64,
    pub hole_purity: f64,
    pub hole_purity_min: f64,
    pub stages: StageFidelities,
}

/// Reduces samples in slice order; the result depends only on the values.
pub fn summarize(samples: &[Sample]) -> Result<MonteCarloSummary> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidParameter("at least one sample is required"));
    }
    let nf = n as f64;
    let mean = |f: &dyn Fn(&Sample) -> f64| samples.iter().map(f).sum::<f64>() / nf;
    let m = mean(&|s| s.stages.round_trip);
    let var = if n > 1 {
        samples.iter().map(|s| (s.stages.round_trip - m) * (s.stages.round_trip - m)).sum::<f64>() / (nf - 1.0)
    } else {
        0.0
    };
    Ok(MonteCarloSummary {
        samples: n,
        mean_fidelity: m,
        stderr: libm::sqrt(var / nf),
        success_probability: mean(&|s| s.success_probability),
        leakage: mean(&|s| s.leakage),
        hole_purity: mean(&|s| s.hole_purity),
        hole_purity_min: samples.iter().map(|s| s.hole_purity).fold(f64::INFINITY, f64::min),
        stages: StageFidelities {
            detection: mean(&|s| s.stages.detection),
            storage: mean(&|s| s.stages.storage),
            shuttle: mean(&|s| s.stages.shuttle),
            round_trip: m,
        },
    })
}

/// Round-trip statistics over `n_samples` Haar-random inputs, sequentially.
pub fn monte_carlo(cfg: &ScenarioConfig, n_samples: usize) -> Result<MonteCarloSummary> {
    let plan = ScenarioPlan::new(cfg)?;
    let samples = (0..n_samples as u64).map(|i| plan.sample(cfg.seed, i)).collect::<Result<Vec<_>>>()?;
    summarize(&samples)
}

/// Mean round-trip fidelity and its standard error.
pub fn monte_carlo_average_fidelity(cfg: &ScenarioConfig, n_samples: usize) -> Result<(f64, f64)> {
    let s = monte_carlo(cfg, n_samples)?;
    Ok((s.mean_fidelity, s.stderr))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub monte_carlo: MonteCarloSummary,
    pub tomography: TomographyReport,
    pub lossy: bool,
}

pub fn channel_report(cfg: &ScenarioConfig, n_samples: usize) -> Result<ChannelReport> {
    let plan = ScenarioPlan::new(cfg)?;
    let samples = (0..n_samples as u64).map(|i| plan.sample(cfg.seed, i)).collect::<Result<Vec<_>>>()?;
    Ok(ChannelReport { monte_carlo: summarize(&samples)?, tomography: plan.tomography()?, lossy: plan.is_lossy() })
}
