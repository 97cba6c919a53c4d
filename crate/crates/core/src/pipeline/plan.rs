use alloc::vec::Vec;

use num_complex::Complex64;

use super::config::ScenarioConfig;
use crate::band::{resolvability_check, BandScheme, Case};
use crate::linalg::{inner, re, CMatrix, ONE, ZERO};
use crate::noise::{coherence_factor, dephase_matrix};
use crate::processor::{shuttle_operator, ChainParams, DonorChain};
use crate::quantum::{reduce, HilbertFactor, QuantumState};
use crate::transfer::{
    absorption_map, canonical_basis, canonical_k, compensation_filter, emission_geometry, hadamard, hadamard_unitary,
    require_synchronized, AbsorptionMap, EmissionGeometry, DARK_TOL, HOLE_DIM,
};
use crate::{Error, Result};

/// The scenario's stages, precomputed as linear maps on 2×2 operators.
///
/// Intermediate operators are never renormalized, so tracing an input
/// through the stages yields both the conditional state and its success
/// probability, and the composite is a linear map suitable for tomography.
#[derive(Debug, Clone)]
pub struct ScenarioPlan {
    case: Case,
    scheme: BandScheme,
    absorption: AbsorptionMap,
    efficiency: f64,
    conduction: CMatrix,
    transport_coherence: f64,
    arrival: f64,
    hadamard: Option<CMatrix>,
    readout: Option<CMatrix>,
    /// Columns: the electron states that carry logical |0⟩ and |1⟩.
    logical: CMatrix,
    storage_coherence: f64,
    chain: ChainParams,
    /// Retrieved site operator for each stored |a⟩⟨b|, index 2a + b.
    shuttle_images: Vec<CMatrix>,
    emission: EmissionGeometry,
    output_filter: CMatrix,
}

/// Operators after the detection stages.
#[derive(Debug, Clone, PartialEq)]
pub struct Detected {
    /// Stored qubit in logical coordinates (trace = success probability).
    pub stored: CMatrix,
    /// Fraction of the absorbed weight on unwanted hole levels.
    pub leakage: f64,
    pub hole_purity: f64,
}

/// Operators after each retrieval stage, all unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Retrieved {
    pub after_storage: CMatrix,
    pub after_shuttle: CMatrix,
    /// Output photon in the canonical polarization basis.
    pub photon: CMatrix,
}

fn conj(u: &CMatrix, x: &CMatrix) -> CMatrix {
    &(u * x) * &u.adjoint()
}

fn logical_basis(scheme: &BandScheme) -> CMatrix {
    match scheme.case() {
        Case::A => CMatrix::identity(2),
        Case::B => scheme.conduction_basis(),
        Case::Degenerate => CMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
    }
}

fn chain_images(params: &ChainParams) -> Result<Vec<CMatrix>> {
    let n = params.n_sites;
    let dims = alloc::vec![2; n];
    let shift = n - 1;
    let mut out = Vec::with_capacity(4);
    for a in 0..2 {
        for b in 0..2 {
            let mut x = CMatrix::zeros(1 << n, 1 << n);
            x[(a << shift, b << shift)] = ONE;
            let y = shuttle_operator(params, &x, 0, n - 1)?;
            out.push(reduce(&y, &dims, &[n - 1]));
        }
    }
    Ok(out)
}

impl ScenarioPlan {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let scheme = cfg.scheme()?;
        let case = scheme.case();
        if cfg.strict {
            if let Some(w) = &cfg.window {
                if !resolvability_check(w, scheme.material(), scheme.field()).passes() {
                    return Err(Error::NotResolvable);
                }
            }
        }
        let basis = canonical_basis(case);
        let k = canonical_k(case);
        let absorption = absorption_map(&scheme, basis, k, cfg.window.as_ref(), cfg.compensate)?;
        let (hadamard, readout) = if case == Case::B {
            let t = cfg.hadamard_time_ns()?;
            if cfg.strict {
                require_synchronized(&scheme, t)?;
            }
            let c = scheme.conduction_basis();
            (Some(hadamard_unitary(&scheme, t)), Some(conj(&c, &hadamard())))
        } else {
            (None, None)
        };
        let emission = emission_geometry(&scheme, cfg.emission_direction()?)?;
        let output_filter = if cfg.compensate { compensation_filter(&scheme, basis, k)? } else { CMatrix::identity(2) };
        Ok(Self {
            case,
            absorption,
            efficiency: cfg.absorption_efficiency,
            conduction: scheme.conduction_basis(),
            transport_coherence: cfg.noise.transport_coherence(),
            arrival: 1.0 - cfg.noise.transport_loss(),
            hadamard,
            readout,
            logical: logical_basis(&scheme),
            storage_coherence: coherence_factor(cfg.storage_time_ns, cfg.noise.t2_si_ns()),
            chain: cfg.chain,
            shuttle_images: chain_images(&cfg.chain)?,
            emission,
            output_filter,
            scheme,
        })
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn scheme(&self) -> &BandScheme {
        &self.scheme
    }

    pub fn chain(&self) -> &ChainParams {
        &self.chain
    }

    /// The waveplate cannot fully restore the canonical polarization.
    pub fn is_lossy(&self) -> bool {
        self.emission.lossy
    }

    fn transport(&self, x: &CMatrix) -> CMatrix {
        dephase_matrix(x, self.transport_coherence, Some(&self.conduction)).scale(re(self.arrival))
    }

    /// Absorption, hole trace, transport, Case B Hadamard and loading.
    pub fn detect(&self, photon: &CMatrix) -> Detected {
        let m = self.absorption.matrix();
        let v = conj(m, photon);
        let w = v.trace().re;
        let top = self.scheme.top_manifold();
        let mut electron = CMatrix::zeros(2, 2);
        let mut hole = CMatrix::zeros(HOLE_DIM, HOLE_DIM);
        let mut off = 0.0;
        for e in 0..2 {
            for j in 0..HOLE_DIM {
                if !top.contains(&j) {
                    off += v[(e * HOLE_DIM + j, e * HOLE_DIM + j)].re;
                }
                for f in 0..2 {
                    electron[(e, f)] += v[(e * HOLE_DIM + j, f * HOLE_DIM + j)];
                }
                for l in 0..HOLE_DIM {
                    hole[(j, l)] += v[(e * HOLE_DIM + j, e * HOLE_DIM + l)];
                }
            }
        }
        let (leakage, hole_purity) = if w > 0.0 {
            let h2 = (&hole * &hole).trace().re;
            (off / w, h2 / (w * w))
        } else {
            (0.0, 1.0)
        };
        let mut e = self.transport(&electron.scale(re(self.efficiency)));
        if let Some(h) = &self.hadamard {
            e = conj(h, &e);
        }
        Detected { stored: conj(&self.logical.adjoint(), &e), leakage, hole_purity }
    }

    /// Storage, shuttle out, readout, reverse transport, emission and
    /// compensation.
    ///
    /// Fails with `DarkDirection` when a state-valued input emits nothing
    /// along the configured direction.
    pub fn retrieve(&self, stored: &CMatrix) -> Result<Retrieved> {
        self.retrieve_inner(stored, true)
    }

    fn retrieve_inner(&self, stored: &CMatrix, check_dark: bool) -> Result<Retrieved> {
        let after_storage = dephase_matrix(stored, self.storage_coherence, None);
        let mut after_shuttle = CMatrix::zeros(2, 2);
        for (i, img) in self.shuttle_images.iter().enumerate() {
            after_shuttle = &after_shuttle + &img.scale(after_storage[(i / 2, i % 2)]);
        }
        let mut e = conj(&self.logical, &after_shuttle);
        if let Some(r) = &self.readout {
            e = conj(r, &e);
        }
        let e = self.transport(&e);
        let emitted = self.emission.kraus.iter().fold(CMatrix::zeros(2, 2), |acc, k| &acc + &conj(k, &e));
        let total: f64 = self.emission.dipoles.iter().map(|d| conj(d, &e).trace().re).sum();
        if check_dark && total > 0.0 && !(emitted.trace().re > DARK_TOL * total) {
            return Err(Error::DarkDirection);
        }
        let photon = conj(&self.output_filter, &conj(&self.emission.waveplate, &emitted));
        Ok(Retrieved { after_storage, after_shuttle, photon })
    }

    /// The photon → photon map on an arbitrary 2×2 operator.
    pub fn map(&self, x: &CMatrix) -> CMatrix {
        self.retrieve_inner(&self.detect(x).stored, false).expect("unchecked retrieval is infallible").photon
    }
}

/// ⟨ψ|X|ψ⟩ / Tr X, or 0 for a vanishing operator.
pub fn normalized_overlap(psi: &[Complex64; 2], x: &CMatrix) -> f64 {
    let t = x.trace().re;
    if !(t > 0.0) {
        return 0.0;
    }
    (inner(psi, &x.mul_vec(psi)).re / t).clamp(0.0, 1.0)
}

fn ket(q: [Complex64; 2]) -> Result<[Complex64; 2]> {
    let n = libm::sqrt(q[0].norm_sqr() + q[1].norm_sqr());
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidState("input amplitudes must not vanish"));
    }
    Ok([q[0] / n, q[1] / n])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionReport {
    /// Stored-qubit fidelity to the input photon.
    pub fidelity: f64,
    /// Efficiency × spectral weight × arrival probability.
    pub success_probability: f64,
    pub leakage: f64,
    pub hole_purity: f64,
}

/// Detects `q` and loads the electron into site 0 of the chain.
pub fn run_detection(q: [Complex64; 2], cfg: &ScenarioConfig) -> Result<(DonorChain, DetectionReport)> {
    let plan = ScenarioPlan::new(cfg)?;
    let psi = ket(q)?;
    let d = plan.detect(&CMatrix::outer(&psi, &psi));
    let p = d.stored.trace().re;
    if !(p > 0.0) {
        return Err(Error::InvalidParameter("nothing was detected"));
    }
    let state = QuantumState::density_normalized(alloc::vec![HilbertFactor::donor(0)], d.stored.hermitian_part())?;
    let chain = DonorChain::load(cfg.chain, &state, 0)?;
    let report = DetectionReport {
        fidelity: normalized_overlap(&psi, &d.stored),
        success_probability: p,
        leakage: d.leakage,
        hole_purity: d.hole_purity,
    };
    Ok((chain, report))
}

/// Stage fidelities of one input, each to the input photon state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageFidelities {
    pub detection: f64,
    pub storage: f64,
    pub shuttle: f64,
    pub round_trip: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunReport {
    pub stages: StageFidelities,
    pub detection_probability: f64,
    /// Photon in → photon out probability.
    pub success_probability: f64,
    pub leakage: f64,
    pub hole_purity: f64,
    pub lossy: bool,
}

impl ScenarioPlan {
    /// Runs one input through every stage.
    pub fn run(&self, q: [Complex64; 2]) -> Result<(CMatrix, RunReport)> {
        let psi = ket(q)?;
        let d = self.detect(&CMatrix::outer(&psi, &psi));
        let r = self.retrieve(&d.stored)?;
        let stages = StageFidelities {
            detection: normalized_overlap(&psi, &d.stored),
            storage: normalized_overlap(&psi, &r.after_storage),
            shuttle: normalized_overlap(&psi, &r.after_shuttle),
            round_trip: normalized_overlap(&psi, &r.photon),
        };
        let report = RunReport {
            stages,
            detection_probability: d.stored.trace().re,
            success_probability: r.photon.trace().re,
            leakage: d.leakage,
            hole_purity: d.hole_purity,
            lossy: self.is_lossy(),
        };
        Ok((r.photon, report))
    }
}

/// Full round trip of `q`: the normalized output photon (canonical basis)
/// and the stage report.
pub fn run_end_to_end(q: [Complex64; 2], cfg: &ScenarioConfig) -> Result<(QuantumState, RunReport)> {
    let plan = ScenarioPlan::new(cfg)?;
    let (photon, report) = plan.run(q)?;
    if !(report.success_probability > 0.0) {
        return Err(Error::DarkDirection);
    }
    let out = QuantumState::density_normalized(alloc::vec![HilbertFactor::photon()], photon.hermitian_part())?;
    Ok((out, report))
}
