//! Photon → electron ⊗ hole absorption maps.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::dipole::dipole_vector;
use super::polarization::{basis_vectors, canonical_frame, cdot, CVec3, PhotonBasis, PhotonQubit, Vec3};
use crate::band::{resolvability_check, BandScheme, Case, SpectralWindow};
use crate::linalg::{norm_sqr, re, CMatrix};
use crate::quantum::{HalfInt, HilbertFactor, QuantumState};
use crate::{Error, Result};

/// Hole factor dimension: all four J = 3/2 valence levels.
pub const HOLE_DIM: usize = 4;

/// Canonical photon geometry of each case.
pub fn canonical_k(case: Case) -> Vec3 {
    match case {
        Case::A => [0.0, 1.0, 0.0],
        Case::B => [0.0, 0.0, -1.0],
        Case::Degenerate => [0.0, 0.0, 1.0],
    }
}

pub fn canonical_basis(case: Case) -> PhotonBasis {
    match case {
        Case::A => PhotonBasis::LinearZx,
        Case::B | Case::Degenerate => PhotonBasis::Circular,
    }
}

/// Factors of an absorption outcome: electron (spin basis) ⊗ hole.
pub fn electron_hole_factors() -> Vec<HilbertFactor> {
    alloc::vec![HilbertFactor::electron(), HilbertFactor::hole(HOLE_DIM).expect("4 is a valid hole dimension")]
}

/// A_j[ms][m] = ε_m · d(v_j, ms) for every valence level j.
pub(crate) fn raw_amplitudes(scheme: &BandScheme, eps: &[CVec3; 2]) -> Vec<[[Complex64; 2]; 2]> {
    scheme
        .valence()
        .iter()
        .map(|level| {
            let up = dipole_vector(&level.vector, HalfInt::HALF);
            let down = dipole_vector(&level.vector, HalfInt::MINUS_HALF);
            [[cdot(&eps[0], &up), cdot(&eps[1], &up)], [cdot(&eps[0], &down), cdot(&eps[1], &down)]]
        })
        .collect()
}

/// Column norms of the top-manifold map (unit spectral weights).
fn top_column_norms(scheme: &BandScheme, raw: &[[[Complex64; 2]; 2]]) -> [f64; 2] {
    core::array::from_fn(|m| {
        libm::sqrt(
            scheme.top_manifold().iter().map(|&j| raw[j][0][m].norm_sqr() + raw[j][1][m].norm_sqr()).sum::<f64>(),
        )
    })
}

/// Normalization of a scheme's maps: the largest top-manifold column norm
/// at the canonical geometry.
pub(crate) fn map_scale(scheme: &BandScheme) -> Result<f64> {
    let basis = canonical_basis(scheme.case());
    let (e1, e2) = canonical_frame(basis, canonical_k(scheme.case()))?;
    let raw = raw_amplitudes(scheme, &basis_vectors(basis, e1, e2));
    let n = top_column_norms(scheme, &raw);
    let s = n[0].max(n[1]);
    if s <= 0.0 {
        return Err(Error::SchemeMismatch);
    }
    Ok(s)
}

/// Photon pre-filter that equalizes the two basis polarizations' coupling
/// strength (the conditional pre-emphasis). Identity when the scheme is
/// already balanced.
pub fn compensation_filter(scheme: &BandScheme, basis: PhotonBasis, k: Vec3) -> Result<CMatrix> {
    let (e1, e2) = canonical_frame(basis, k)?;
    let raw = raw_amplitudes(scheme, &basis_vectors(basis, e1, e2));
    let n = top_column_norms(scheme, &raw);
    let lo = n[0].min(n[1]);
    if lo <= 0.0 {
        return Err(Error::SchemeMismatch);
    }
    Ok(CMatrix::diag(&[re(lo / n[0]), re(lo / n[1])]))
}

/// A linear photon → electron ⊗ hole map.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionMap {
    /// Rows: electron spin (2) ⊗ hole level (4); columns: photon basis.
    matrix: CMatrix,
    top: Vec<usize>,
}

impl AbsorptionMap {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Unnormalized electron ⊗ hole amplitudes for photon amplitudes `q`.
    pub fn apply(&self, q: [Complex64; 2]) -> Vec<Complex64> {
        self.matrix.mul_vec(&q)
    }

    /// Fraction of `amps` that lies on hole levels outside the top manifold.
    pub fn leakage_of(&self, amps: &[Complex64]) -> f64 {
        let total = norm_sqr(amps);
        if total == 0.0 {
            return 0.0;
        }
        let off: f64 = amps
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.top.contains(&(i % HOLE_DIM)))
            .map(|(_, a)| a.norm_sqr())
            .sum();
        off / total
    }
}

/// Builds the absorption map for photons of `basis` along `k`.
///
/// Each (valence level, conduction eigenstate) branch is weighted by the
/// window's amplitude at its transition energy; `window = None` keeps only
/// the top manifold with unit weight. The map is scaled so the strongest
/// top-manifold polarization has unit norm, and never exceeds unit norm.
pub fn absorption_map(
    scheme: &BandScheme,
    basis: PhotonBasis,
    k: Vec3,
    window: Option<&SpectralWindow>,
    compensate: bool,
) -> Result<AbsorptionMap> {
    let (e1, e2) = canonical_frame(basis, k)?;
    let raw = raw_amplitudes(scheme, &basis_vectors(basis, e1, e2));
    let s = map_scale(scheme)?;
    let filter = if compensate { compensation_filter(scheme, basis, k)? } else { CMatrix::identity(2) };
    let u = scheme.conduction_basis();
    let center = window.map(|w| w.center_uev().unwrap_or_else(|| scheme.default_center_uev()));

    let mut matrix = CMatrix::zeros(2 * HOLE_DIM, 2);
    for (j, a) in raw.iter().enumerate() {
        let weights: [f64; 2] = match (window, center) {
            (Some(w), Some(c0)) => core::array::from_fn(|c| w.amplitude(scheme.transition_uev(j, c) - c0)),
            _ => {
                let on = if scheme.top_manifold().contains(&j) { 1.0 } else { 0.0 };
                [on, on]
            }
        };
        let aj = CMatrix::from_fn(2, 2, |r, m| a[r][m]);
        let wj = CMatrix::diag(&[re(weights[0]), re(weights[1])]);
        let mj = &(&(&(&u * &wj) * &u.adjoint()) * &aj) * &filter;
        for e in 0..2 {
            for m in 0..2 {
                matrix[(e * HOLE_DIM + j, m)] = mj[(e, m)] / s;
            }
        }
    }
    let top = matrix.singular_values()[0];
    if top > 1.0 {
        matrix = matrix.scale(re(1.0 / top));
    }
    Ok(AbsorptionMap { matrix, top: scheme.top_manifold().to_vec() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionSettings {
    /// Apply the photon pre-filter that equalizes the two branches.
    pub compensate: bool,
    /// Reject windows that fail the resolvability inequalities.
    pub strict: bool,
    /// Scalar absorption efficiency (cavity enhancement), in [0, 1].
    pub efficiency: f64,
}

impl Default for AbsorptionSettings {
    fn default() -> Self {
        Self { compensate: true, strict: false, efficiency: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionOutcome {
    /// Normalized electron ⊗ hole state.
    pub state: QuantumState,
    /// Efficiency times the branch weight that was absorbed.
    pub success_probability: f64,
    /// Fraction of the absorbed weight that went through unwanted levels.
    pub leakage: f64,
}

fn absorb(photon: &PhotonQubit, scheme: &BandScheme, settings: &AbsorptionSettings) -> Result<AbsorptionOutcome> {
    if !(0.0..=1.0).contains(&settings.efficiency) {
        return Err(Error::InvalidParameter("absorption efficiency must lie in [0, 1]"));
    }
    if settings.strict {
        if let Some(w) = photon.window() {
            if !resolvability_check(w, scheme.material(), scheme.field()).passes() {
                return Err(Error::NotResolvable);
            }
        }
    }
    let map = absorption_map(scheme, photon.basis(), photon.k(), photon.window(), settings.compensate)?;
    let amps = map.apply(photon.amplitudes());
    let p = norm_sqr(&amps);
    if p <= 0.0 {
        return Err(Error::InvalidParameter("photon is not absorbed by any branch"));
    }
    let leakage = map.leakage_of(&amps);
    let state = QuantumState::pure_normalized(electron_hole_factors(), amps)?;
    Ok(AbsorptionOutcome { state, success_probability: settings.efficiency * p, leakage })
}

fn require_case(scheme: &BandScheme, want: Case) -> Result<()> {
    match (scheme.case(), want) {
        (got, want) if got == want => Ok(()),
        (Case::Degenerate, _) => Err(Error::HeavyHoleTopmost),
        _ => Err(Error::SchemeMismatch),
    }
}

/// Case A: linear z/x photon on a light-hole-topmost scheme with B ∥ G.
///
/// z couples |3/2,+1/2⟩ to spin up and x to spin down, with amplitudes in
/// the ratio √2 : 1 unless `compensate` equalizes them.
pub fn absorb_case_a(
    photon: &PhotonQubit,
    scheme: &BandScheme,
    settings: &AbsorptionSettings,
) -> Result<AbsorptionOutcome> {
    require_case(scheme, Case::A)?;
    if photon.basis() != PhotonBasis::LinearZx {
        return Err(Error::SchemeMismatch);
    }
    absorb(photon, scheme, settings)
}

/// Case B: circular photon along G on a light-hole-topmost scheme with
/// B ⊥ G, exciting from ψ+. Both branches have equal weight, so
/// compensation is a no-op.
pub fn absorb_case_b(
    photon: &PhotonQubit,
    scheme: &BandScheme,
    settings: &AbsorptionSettings,
) -> Result<AbsorptionOutcome> {
    require_case(scheme, Case::B)?;
    if photon.basis() != PhotonBasis::Circular {
        return Err(Error::SchemeMismatch);
    }
    absorb(photon, scheme, settings)
}

/// Heavy-hole-topmost absorption, α|-3/2⟩_h|↓⟩ + β|+3/2⟩_h|↑⟩ for circular
/// light along +G: the electron is entangled with the hole.
pub fn absorb_degenerate(
    photon: &PhotonQubit,
    scheme: &BandScheme,
    settings: &AbsorptionSettings,
) -> Result<AbsorptionOutcome> {
    if scheme.case() != Case::Degenerate || photon.basis() != PhotonBasis::Circular {
        return Err(Error::SchemeMismatch);
    }
    absorb(photon, scheme, settings)
}

/// Dispatches on the scheme's case.
pub fn absorb_any(
    photon: &PhotonQubit,
    scheme: &BandScheme,
    settings: &AbsorptionSettings,
) -> Result<AbsorptionOutcome> {
    match scheme.case() {
        Case::A => absorb_case_a(photon, scheme, settings),
        Case::B => absorb_case_b(photon, scheme, settings),
        Case::Degenerate => absorb_degenerate(photon, scheme, settings),
    }
}
