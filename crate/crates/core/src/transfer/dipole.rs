//! Interband dipole selection rules.
//!
//! The photon acts on the orbital part only: a valence |mL, mS⟩ component
//! couples to the S-wave conduction state with the same mS through the
//! orbital vector w(mL), w(0) = z, w(±1) = x ± i y. Linear x polarization
//! therefore drives ΔmL = ±1 with unit weight, and a circular vector selects
//! one sign of mL.

use num_complex::Complex64;

use super::polarization::{canonical_frame, cdot, circular_vectors, complexify, CVec3, CZERO3, GROWTH_AXIS};
use crate::band::MJ_ORDER;
use crate::linalg::{re, ZERO};
use crate::quantum::{expand_jmj, AngularMomentumState, Band, Coupling, HalfInt};
use crate::{Error, Result};

/// w(mL).
pub fn orbital_vector(ml: i32) -> CVec3 {
    match ml {
        0 => [ZERO, ZERO, re(1.0)],
        1 => [re(1.0), Complex64::new(0.0, 1.0), ZERO],
        -1 => [re(1.0), Complex64::new(0.0, -1.0), ZERO],
        _ => CZERO3,
    }
}

fn accumulate(d: &mut CVec3, coefficient: Complex64, ml: i32) {
    let w = orbital_vector(ml);
    for i in 0..3 {
        d[i] += coefficient * w[i];
    }
}

/// ⟨0, ms | r | v⟩ for a valence vector `v` in the [`MJ_ORDER`] basis.
pub fn dipole_vector(v: &[Complex64], ms: HalfInt) -> CVec3 {
    let mut d = CZERO3;
    for (&amp, &mj) in v.iter().zip(MJ_ORDER.iter()) {
        if amp == ZERO {
            continue;
        }
        let state = AngularMomentumState::valence(mj).expect("MJ_ORDER labels are valid");
        for c in expand_jmj(&state).expect("valence J = 3/2 expands") {
            if c.ms == ms {
                accumulate(&mut d, amp * c.coefficient, c.ml);
            }
        }
    }
    d
}

/// Transition dipole to a conduction vector `c` (spin basis +1/2, -1/2).
pub fn dipole_to(v: &[Complex64], c: &[Complex64]) -> CVec3 {
    let up = dipole_vector(v, HalfInt::HALF);
    let down = dipole_vector(v, HalfInt::MINUS_HALF);
    core::array::from_fn(|i| c[0].conj() * up[i] + c[1].conj() * down[i])
}

/// Named polarizations for single matrix elements.
///
/// σ± are taken for light incident along -G (the detector geometry), where
/// σ+ drives valence mL = +1 into the S-wave conduction band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Z,
    X,
    SigmaPlus,
    SigmaMinus,
}

impl Polarization {
    pub fn vector(self) -> CVec3 {
        match self {
            Polarization::Z => complexify(GROWTH_AXIS),
            Polarization::X => complexify([1.0, 0.0, 0.0]),
            Polarization::SigmaPlus | Polarization::SigmaMinus => {
                let (e1, e2) = canonical_frame(super::PhotonBasis::Circular, [0.0, 0.0, -1.0])
                    .expect("-G is a valid circular axis");
                let [p, m] = circular_vectors(e1, e2);
                if self == Polarization::SigmaPlus {
                    p
                } else {
                    m
                }
            }
        }
    }
}

/// Absorption amplitude ε·⟨c|r|v⟩ from valence state `v` to conduction
/// state `c`.
pub fn dipole_matrix_element(
    v: &AngularMomentumState,
    c: &AngularMomentumState,
    pol: Polarization,
) -> Result<Complex64> {
    if !v.is_valence() || c.band() != Band::Conduction {
        return Err(Error::UnsupportedState);
    }
    let ms = c.spin_projection().ok_or(Error::UnsupportedState)?;
    let mut d = CZERO3;
    match v.coupling() {
        Coupling::Jm { .. } => {
            for comp in expand_jmj(v)? {
                if comp.ms == ms {
                    accumulate(&mut d, re(comp.coefficient), comp.ml);
                }
            }
        }
        Coupling::Ls { ml, ms: vs } => {
            if vs == ms {
                accumulate(&mut d, re(1.0), ml);
            }
        }
    }
    Ok(cdot(&pol.vector(), &d))
}
