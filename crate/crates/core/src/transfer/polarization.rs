//! Photon wavevectors, polarization frames and the σ± convention.
//!
//! The growth direction G is +z. σ+ is helicity +1 about the propagation
//! direction k, so reversing k swaps which orbital transition σ+ drives.

use num_complex::Complex64;

use crate::band::SpectralWindow;
use crate::linalg::{norm_sqr, re, ZERO};
use crate::{Error, Result};

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];

pub const GROWTH_AXIS: Vec3 = [0.0, 0.0, 1.0];
pub const X_AXIS: Vec3 = [1.0, 0.0, 0.0];

/// Two vectors count as parallel (or perpendicular) within this tolerance.
const GEOMETRY_TOL: f64 = 1e-9;

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn normalize(v: Vec3) -> Result<Vec3> {
    let n = libm::sqrt(dot(v, v));
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidParameter("direction must be a non-zero finite vector"));
    }
    Ok(scale(v, 1.0 / n))
}

/// Bilinear ε·d (no conjugation): the absorption amplitude of field ε on
/// dipole d.
pub fn cdot(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn complexify(v: Vec3) -> CVec3 {
    [re(v[0]), re(v[1]), re(v[2])]
}

pub fn cnorm_sqr(v: &CVec3) -> f64 {
    norm_sqr(v)
}

/// The circular pair (ε+, ε-) of a right-handed frame (e1, e2, k):
/// ε± = ∓(e1 ± i e2)/√2. This is the only place the σ± sign convention
/// lives.
pub fn circular_vectors(e1: Vec3, e2: Vec3) -> [CVec3; 2] {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let plus = core::array::from_fn(|i| Complex64::new(-e1[i] * s, -e2[i] * s));
    let minus = core::array::from_fn(|i| Complex64::new(e1[i] * s, -e2[i] * s));
    [plus, minus]
}

/// Polarization basis of a photon qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhotonBasis {
    /// Index 0 is linear along G (|z⟩), index 1 the in-plane linear
    /// polarization k × G (|x⟩ for k = +y).
    LinearZx,
    /// Index 0 is σ+, index 1 σ-, about k.
    Circular,
}

/// Transverse frame (e1, e2) with e2 = k × e1, for `basis` at wavevector k.
pub fn canonical_frame(basis: PhotonBasis, k: Vec3) -> Result<(Vec3, Vec3)> {
    let k = normalize(k)?;
    let e1 = match basis {
        PhotonBasis::LinearZx => {
            if dot(k, GROWTH_AXIS).abs() > GEOMETRY_TOL {
                return Err(Error::InvalidParameter("linear z/x photons need k perpendicular to G"));
            }
            GROWTH_AXIS
        }
        PhotonBasis::Circular => {
            if (dot(k, GROWTH_AXIS).abs() - 1.0).abs() > GEOMETRY_TOL {
                return Err(Error::InvalidParameter("circular photons need k parallel to G"));
            }
            X_AXIS
        }
    };
    Ok((e1, cross(k, e1)))
}

/// Basis polarization vectors [ε0, ε1] of a frame.
pub fn basis_vectors(basis: PhotonBasis, e1: Vec3, e2: Vec3) -> [CVec3; 2] {
    match basis {
        PhotonBasis::LinearZx => [complexify(e1), complexify(e2)],
        PhotonBasis::Circular => circular_vectors(e1, e2),
    }
}

/// Rotation matrix taking unit vector `from` to unit vector `to` about
/// their common normal; antipodal vectors rotate by π about `fallback_axis`.
pub fn minimal_rotation(from: Vec3, to: Vec3, fallback_axis: Vec3) -> [[f64; 3]; 3] {
    let c = dot(from, to);
    let axis = cross(from, to);
    let s = libm::sqrt(dot(axis, axis));
    let (u, cos, sin) = if s > GEOMETRY_TOL {
        (scale(axis, 1.0 / s), c, s)
    } else if c > 0.0 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    } else {
        (fallback_axis, -1.0, 0.0)
    };
    // Rodrigues: R = cos I + sin [u]x + (1 - cos) u uᵀ.
    let mut r = [[0.0; 3]; 3];
    let ux = [[0.0, -u[2], u[1]], [u[2], 0.0, -u[0]], [-u[1], u[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { 1.0 } else { 0.0 };
            r[i][j] = cos * id + sin * ux[i][j] + (1.0 - cos) * u[i] * u[j];
        }
    }
    r
}

pub fn rotate(r: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    core::array::from_fn(|i| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2])
}

/// A polarization qubit on a definite wavevector and spectral profile.
///
/// `window = None` is ideal spectral selection: only the scheme's intended
/// valence level takes part, with unit weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonQubit {
    basis: PhotonBasis,
    amplitudes: [Complex64; 2],
    window: Option<SpectralWindow>,
    k: Vec3,
}

impl PhotonQubit {
    pub fn new(
        basis: PhotonBasis,
        alpha: Complex64,
        beta: Complex64,
        window: Option<SpectralWindow>,
        k: Vec3,
    ) -> Result<Self> {
        if (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs() > crate::quantum::ALGEBRAIC_TOL {
            return Err(Error::InvalidState("photon amplitudes not normalized"));
        }
        canonical_frame(basis, k)?;
        Ok(Self { basis, amplitudes: [alpha, beta], window, k: normalize(k)? })
    }

    pub fn basis(&self) -> PhotonBasis {
        self.basis
    }

    pub fn alpha(&self) -> Complex64 {
        self.amplitudes[0]
    }

    pub fn beta(&self) -> Complex64 {
        self.amplitudes[1]
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        self.amplitudes
    }

    pub fn window(&self) -> Option<&SpectralWindow> {
        self.window.as_ref()
    }

    pub fn k(&self) -> Vec3 {
        self.k
    }

    pub fn with_amplitudes(&self, alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::new(self.basis, alpha, beta, self.window, self.k)
    }
}

/// Zero complex 3-vector.
pub const CZERO3: CVec3 = [ZERO, ZERO, ZERO];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_helicity_about_plus_z() {
        let (e1, e2) = canonical_frame(PhotonBasis::Circular, GROWTH_AXIS).unwrap();
        assert_eq!(e2, [0.0, 1.0, 0.0]);
        let [p, m] = circular_vectors(e1, e2);
        // ε+ = -(x + iy)/√2 about +z.
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(p, [re(-s), Complex64::new(0.0, -s), ZERO]);
        assert_eq!(m, [re(s), Complex64::new(0.0, -s), ZERO]);
        // Reversing k swaps the handedness of ε+ in the lab frame.
        let (f1, f2) = canonical_frame(PhotonBasis::Circular, scale(GROWTH_AXIS, -1.0)).unwrap();
        let [q, _] = circular_vectors(f1, f2);
        assert_eq!(q, [re(-s), Complex64::new(0.0, s), ZERO]);
    }

    #[test]
    fn linear_frame_along_y() {
        let (e1, e2) = canonical_frame(PhotonBasis::LinearZx, [0.0, 1.0, 0.0]).unwrap();
        assert_eq!((e1, e2), (GROWTH_AXIS, [1.0, 0.0, 0.0]));
        assert!(canonical_frame(PhotonBasis::LinearZx, GROWTH_AXIS).is_err());
        assert!(canonical_frame(PhotonBasis::Circular, [0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn rotation_maps_from_to() {
        let from = [0.0, 1.0, 0.0];
        for to in [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 1.0, 0.0], normalize([1.0, 2.0, -0.5]).unwrap()] {
            let r = minimal_rotation(from, to, GROWTH_AXIS);
            let got = rotate(&r, from);
            assert!((0..3).all(|i| (got[i] - to[i]).abs() < 1e-14), "{to:?} -> {got:?}");
        }
    }

    #[test]
    fn photon_norm_checked() {
        assert!(PhotonQubit::new(PhotonBasis::Circular, re(1.0), re(1.0), None, GROWTH_AXIS).is_err());
    }
}
