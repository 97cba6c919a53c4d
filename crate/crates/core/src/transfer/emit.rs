//! Radiative recombination of the electron with a top-manifold hole, and the
//! directional polarization compensation of the emitted photon.

use alloc::vec::Vec;

use super::absorb::{canonical_basis, canonical_k, map_scale};
use super::dipole::dipole_vector;
use super::polarization::{
    basis_vectors, canonical_frame, minimal_rotation, normalize, rotate, CVec3, PhotonBasis, Vec3,
};
use crate::band::BandScheme;
use crate::linalg::{re, CMatrix};
use crate::quantum::{HalfInt, HilbertFactor, QuantumState};
use crate::{Error, Result};

/// Projected emission weight below this fraction of the total counts as dark.
pub(crate) const DARK_TOL: f64 = 1e-12;
/// Relative singular-value floor below which the waveplate cannot invert.
const RANK_TOL: f64 = 1e-9;

/// Direction-dependent emission operators of a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionGeometry {
    pub basis: PhotonBasis,
    pub direction: Vec3,
    /// Transverse polarization frame (e1, e2) at `direction`.
    pub frame: (Vec3, Vec3),
    /// One photon ← electron-spin operator per top-manifold hole level.
    pub kraus: Vec<CMatrix>,
    /// Per hole level, the 3×2 conjugated dipole matrix [d↑*, d↓*] (before
    /// transverse projection), in the same normalization as `kraus`.
    pub dipoles: Vec<CMatrix>,
    /// Maps the photon emitted along `direction` onto the one emitted along
    /// the canonical axis; largest singular value 1.
    pub waveplate: CMatrix,
    /// The transverse projection lost rank: the waveplate cannot restore
    /// the canonical polarization.
    pub lossy: bool,
}

fn projector(eps: &[CVec3; 2]) -> CMatrix {
    CMatrix::from_fn(2, 3, |m, i| eps[m][i].conj())
}

/// Emission operators and waveplate for `direction`.
pub fn emission_geometry(scheme: &BandScheme, direction: Vec3) -> Result<EmissionGeometry> {
    let case = scheme.case();
    let basis = canonical_basis(case);
    let k = canonical_k(case);
    let n = normalize(direction)?;
    let (e1, e2) = canonical_frame(basis, k)?;
    let r = minimal_rotation(k, n, e1);
    let frame = (rotate(&r, e1), rotate(&r, e2));
    let eps_k = basis_vectors(basis, e1, e2);
    let eps_n = basis_vectors(basis, frame.0, frame.1);
    let s = map_scale(scheme)?;

    let dipoles: Vec<CMatrix> = scheme
        .top_manifold()
        .iter()
        .map(|&j| {
            let v = &scheme.valence()[j].vector;
            let d = [dipole_vector(v, HalfInt::HALF), dipole_vector(v, HalfInt::MINUS_HALF)];
            CMatrix::from_fn(3, 2, |i, c| d[c][i].conj() / s)
        })
        .collect();
    let pn = projector(&eps_n);
    let pk = projector(&eps_k);
    let mut kraus: Vec<CMatrix> = dipoles.iter().map(|d| &pn * d).collect();
    let gram = kraus.iter().fold(CMatrix::zeros(2, 2), |acc, e| &acc + &(&e.adjoint() * e));
    let top = gram.hermitian_eigenvalues()[1];
    if top > 1.0 {
        let f = re(1.0 / libm::sqrt(top));
        kraus = kraus.iter().map(|e| e.scale(f)).collect();
    }

    // Nonzero dipole columns span the emitted field; compare their
    // projections along n and along k.
    let cols: Vec<CVec3> = dipoles
        .iter()
        .flat_map(|d| (0..2).map(move |c| core::array::from_fn(|i| d[(i, c)])))
        .filter(|v: &CVec3| v.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-24)
        .collect();
    let dall = CMatrix::from_fn(3, cols.len(), |i, c| cols[c][i]);
    let gn = &pn * &dall;
    let gk = &pk * &dall;
    let sn = gn.singular_values();
    let sk = gk.singular_values();
    let rank = |sv: &[f64]| sv.iter().filter(|&&x| x > RANK_TOL * sv[0]).count();
    let lossy = rank(&sn) < rank(&sk);
    let mut waveplate = &gk * &gn.pseudo_inverse(RANK_TOL);
    let w = waveplate.singular_values()[0];
    if w > 0.0 {
        waveplate = waveplate.scale(re(1.0 / w));
    }
    Ok(EmissionGeometry { basis, direction: n, frame, kraus, dipoles, waveplate, lossy })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionOutcome {
    /// Photon in the emission frame's polarization basis.
    pub photon: QuantumState,
    pub direction: Vec3,
    pub polarization_frame: (Vec3, Vec3),
    /// Emitted weight relative to the strongest canonical emission.
    pub probability: f64,
    waveplate: CMatrix,
    lossy: bool,
}

impl EmissionOutcome {
    pub fn is_lossy(&self) -> bool {
        self.lossy
    }
}

/// Emits a photon along `direction` from an electron-spin state, with the
/// hole in the top valence manifold.
pub fn emit(electron: &QuantumState, scheme: &BandScheme, direction: Vec3) -> Result<EmissionOutcome> {
    if electron.factors() != [HilbertFactor::electron()] {
        return Err(Error::DimensionMismatch);
    }
    let g = emission_geometry(scheme, direction)?;
    let rho = electron.density_matrix();
    let out = g.kraus.iter().fold(CMatrix::zeros(2, 2), |acc, e| &acc + &(&(e * &rho) * &e.adjoint()));
    let total: f64 = g.dipoles.iter().map(|d| (&(d * &rho) * &d.adjoint()).trace().re).sum();
    let p = out.trace().re;
    if !(p > DARK_TOL * total) {
        return Err(Error::DarkDirection);
    }
    Ok(EmissionOutcome {
        photon: QuantumState::density_normalized(alloc::vec![HilbertFactor::photon()], out)?,
        direction: g.direction,
        polarization_frame: g.frame,
        probability: p,
        waveplate: g.waveplate,
        lossy: g.lossy,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompensatedPhoton {
    /// Photon in the canonical polarization basis.
    pub photon: QuantumState,
    /// Emission probability times the waveplate transmission.
    pub probability: f64,
    pub lossy: bool,
}

/// Applies the direction's waveplate, returning the photon expressed in
/// the canonical-direction basis.
pub fn waveplate_compensation(out: &EmissionOutcome) -> Result<CompensatedPhoton> {
    let rho = out.photon.density_matrix();
    let w = &(&out.waveplate * &rho) * &out.waveplate.adjoint();
    let t = w.trace().re;
    if !(t > DARK_TOL) {
        return Err(Error::DarkDirection);
    }
    let photon = QuantumState::density_normalized(alloc::vec![HilbertFactor::photon()], w)?;
    Ok(CompensatedPhoton { photon, probability: out.probability * t, lossy: out.lossy })
}
