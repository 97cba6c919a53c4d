//! Angular-momentum labels and Clebsch-Gordan coupling (Condon-Shortley
//! phase convention).

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// An integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const HALF: HalfInt = HalfInt(1);
    pub const MINUS_HALF: HalfInt = HalfInt(-1);
    pub const THREE_HALVES: HalfInt = HalfInt(3);
    pub const MINUS_THREE_HALVES: HalfInt = HalfInt(-3);
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(twice: i32) -> Self {
        Self(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        Self(2 * n)
    }

    /// Rejects anything that is not a multiple of 1/2.
    pub fn from_f64(x: f64) -> Result<Self> {
        let t = 2.0 * x;
        let r = libm::round(t);
        if !x.is_finite() || (t - r).abs() > 1e-9 || r.abs() > 1e6 {
            return Err(Error::InvalidAngularMomentum);
        }
        Ok(Self(r as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn factorial(n: i32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// `(j, m)` is a valid label: j ≥ 0, |m| ≤ j, j - m integer.
fn valid_pair(j: HalfInt, m: HalfInt) -> bool {
    j.0 >= 0 && m.0.abs() <= j.0 && (j.0 - m.0) % 2 == 0
}

/// ⟨j1 m1; j2 m2 | j m⟩ by the Racah closed-form sum.
///
/// Arguments are ordinary numbers that must be integers or half-integers
/// with |m| ≤ j; couplings that violate the triangle rule or m = m1 + m2
/// give 0.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    let [j1, m1, j2, m2, j, m] = [j1, m1, j2, m2, j, m].map(HalfInt::from_f64);
    let (j1, m1, j2, m2, j, m) = (j1?, m1?, j2?, m2?, j?, m?);
    if !(valid_pair(j1, m1) && valid_pair(j2, m2) && valid_pair(j, m)) {
        return Err(Error::InvalidAngularMomentum);
    }
    Ok(cg(j1, m1, j2, m2, j, m))
}

/// Clebsch-Gordan coefficient on pre-validated labels.
pub fn cg(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    if m1.0 + m2.0 != m.0 {
        return 0.0;
    }
    if j.0 < (j1.0 - j2.0).abs() || j.0 > j1.0 + j2.0 || (j1.0 + j2.0 + j.0) % 2 != 0 {
        return 0.0;
    }
    // All of the following are integers because of the parity checks above.
    let h = |x: i32| x / 2;
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.0, m1.0, j2.0, m2.0, j.0, m.0);
    let pre =
        f64::from(tj + 1) * factorial(h(tj + tj1 - tj2)) * factorial(h(tj - tj1 + tj2)) * factorial(h(tj1 + tj2 - tj))
            / factorial(h(tj1 + tj2 + tj) + 1);
    let norm = factorial(h(tj + tm))
        * factorial(h(tj - tm))
        * factorial(h(tj1 - tm1))
        * factorial(h(tj1 + tm1))
        * factorial(h(tj2 - tm2))
        * factorial(h(tj2 + tm2));
    let kmax = [h(tj1 + tj2 - tj), h(tj1 - tm1), h(tj2 + tm2)].into_iter().min().unwrap_or(0);
    let kmin = [0, h(tj2 - tj - tm1), h(tj1 - tj + tm2)].into_iter().max().unwrap_or(0);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(h(tj1 + tj2 - tj) - k)
            * factorial(h(tj1 - tm1) - k)
            * factorial(h(tj2 + tm2) - k)
            * factorial(h(tj - tj2 + tm1) + k)
            * factorial(h(tj - tj1 - tm2) + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / den;
    }
    libm::sqrt(pre * norm) * sum
}

/// Band a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Conduction,
    LightHole,
    HeavyHole,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Conduction => "conduction",
            Band::LightHole => "light_hole",
            Band::HeavyHole => "heavy_hole",
        })
    }
}

/// Basis label in either coupling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    /// |J, mJ⟩.
    Jm { j: HalfInt, mj: HalfInt },
    /// |mL, mS⟩ with L = 1 (valence) or L = 0 (conduction), S = 1/2.
    Ls { ml: i32, ms: HalfInt },
}

/// A band-tagged single-particle angular-momentum state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngularMomentumState {
    band: Band,
    coupling: Coupling,
}

impl AngularMomentumState {
    pub fn new(band: Band, coupling: Coupling) -> Result<Self> {
        let ok = match (band, coupling) {
            (Band::Conduction, Coupling::Jm { j, mj }) => j == HalfInt::HALF && valid_pair(j, mj),
            (Band::Conduction, Coupling::Ls { ml, ms }) => ml == 0 && ms.0.abs() == 1,
            (Band::LightHole, Coupling::Jm { j, mj }) => j == HalfInt::THREE_HALVES && mj.0.abs() == 1,
            (Band::HeavyHole, Coupling::Jm { j, mj }) => j == HalfInt::THREE_HALVES && mj.0.abs() == 3,
            (Band::LightHole | Band::HeavyHole, Coupling::Ls { ml, ms }) => ml.abs() <= 1 && ms.0.abs() == 1,
        };
        if ok {
            Ok(Self { band, coupling })
        } else {
            Err(Error::InvalidAngularMomentum)
        }
    }

    /// Conduction electron with spin projection `ms` (as |J=1/2, mJ=ms⟩).
    pub fn conduction(ms: HalfInt) -> Result<Self> {
        Self::new(Band::Conduction, Coupling::Jm { j: HalfInt::HALF, mj: ms })
    }

    /// Valence |3/2, mJ⟩; |mJ| = 1/2 is light-hole, 3/2 heavy-hole.
    pub fn valence(mj: HalfInt) -> Result<Self> {
        let band = if mj.0.abs() == 1 { Band::LightHole } else { Band::HeavyHole };
        Self::new(band, Coupling::Jm { j: HalfInt::THREE_HALVES, mj })
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn is_valence(&self) -> bool {
        self.band != Band::Conduction
    }

    /// Spin projection; defined for conduction states (any coupling) and Ls
    /// labels.
    pub fn spin_projection(&self) -> Option<HalfInt> {
        match (self.band, self.coupling) {
            (_, Coupling::Ls { ms, .. }) => Some(ms),
            (Band::Conduction, Coupling::Jm { mj, .. }) => Some(mj),
            _ => None,
        }
    }
}

impl fmt::Display for AngularMomentumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coupling {
            Coupling::Jm { j, mj } => write!(f, "|{j},{mj}⟩"),
            Coupling::Ls { ml, ms } => write!(f, "|mL={ml},mS={ms}⟩"),
        }
    }
}

/// One term of an LS expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsComponent {
    pub coefficient: f64,
    pub ml: i32,
    pub ms: HalfInt,
}

/// Expands a |J, mJ⟩ state in the |mL, mS⟩ basis.
///
/// Valence states use L = 1, S = 1/2; conduction states are S-wave, so the
/// expansion is the single term |0, mJ⟩.
pub fn expand_jmj(state: &AngularMomentumState) -> Result<Vec<LsComponent>> {
    let Coupling::Jm { j, mj } = state.coupling else {
        return Err(Error::UnsupportedState);
    };
    match state.band {
        Band::Conduction => Ok(alloc::vec![LsComponent { coefficient: 1.0, ml: 0, ms: mj }]),
        Band::LightHole | Band::HeavyHole => {
            if j != HalfInt::THREE_HALVES {
                return Err(Error::UnsupportedState);
            }
            let mut out = Vec::with_capacity(2);
            for ms in [HalfInt::HALF, HalfInt::MINUS_HALF] {
                let ml2 = mj.0 - ms.0;
                if ml2.abs() > 2 {
                    continue;
                }
                let coefficient = cg(HalfInt::from_int(1), HalfInt(ml2), HalfInt::HALF, ms, j, mj);
                if coefficient != 0.0 {
                    out.push(LsComponent { coefficient, ml: ml2 / 2, ms });
                }
            }
            Ok(out)
        }
    }
}
