//! Materials, strain/Zeeman level schemes and spectral resolvability.
//!
//! Energies are in µeV. Valence levels are measured from the unsplit
//! top-of-valence band edge and conduction levels from the unsplit conduction
//! band edge; the band gap enters only through [`BandScheme::transition_uev`].
//!
//! Valence states are stored as vectors in the J = 3/2 basis ordered
//! mJ = +3/2, +1/2, -1/2, -3/2 (see [`MJ_ORDER`]); conduction states as
//! vectors in the spin basis ordered mS = +1/2, -1/2.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::constants::{BOHR_MAGNETON_UEV_PER_T, HBAR_UEV_NS};
use crate::linalg::{re, CMatrix, ZERO};
use crate::quantum::{AngularMomentumState, Band, HalfInt};
use crate::{Error, Result};

/// mJ labels of the valence basis, in storage order.
pub const MJ_ORDER: [HalfInt; 4] =
    [HalfInt::THREE_HALVES, HalfInt::HALF, HalfInt::MINUS_HALF, HalfInt::MINUS_THREE_HALVES];

/// mS labels of the conduction basis, in storage order.
pub const MS_ORDER: [HalfInt; 2] = [HalfInt::HALF, HalfInt::MINUS_HALF];

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrainSign {
    /// Light-hole band on top.
    Tensile,
    /// Heavy-hole band on top.
    Compressive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    name: String,
    g_cb: f64,
    g_lh: f64,
    g_hh_normal: f64,
    strain_splitting_uev: f64,
    band_gap_uev: f64,
    strain: StrainSign,
}

impl MaterialParams {
    pub fn new(
        name: impl Into<String>,
        g_cb: f64,
        g_lh: f64,
        g_hh_normal: f64,
        strain_splitting_uev: f64,
        band_gap_uev: f64,
        strain: StrainSign,
    ) -> Result<Self> {
        if ![g_cb, g_lh, g_hh_normal, strain_splitting_uev, band_gap_uev].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("material parameters must be finite"));
        }
        if strain_splitting_uev <= 0.0 {
            return Err(Error::InvalidParameter("strain splitting must be positive"));
        }
        if band_gap_uev <= strain_splitting_uev {
            return Err(Error::InvalidParameter("band gap must exceed the strain splitting"));
        }
        Ok(Self { name: name.into(), g_cb, g_lh, g_hh_normal, strain_splitting_uev, band_gap_uev, strain })
    }

    /// Tensile-strained InAs/GaAs quantum well: g_cb = 0.4, g_lh = 8.87,
    /// 20 meV light/heavy splitting.
    pub fn inas_gaas_qw() -> Self {
        Self::new("InAs/GaAs-QW", 0.4, 8.87, 2.5, 20_000.0, 1_000_000.0, StrainSign::Tensile)
            .expect("valid catalog entry")
    }

    /// Compressively strained GaAs well (heavy holes on top).
    pub fn gaas_qw() -> Self {
        Self::new("GaAs-QW", 0.4, 8.87, 2.5, 10_000.0, 1_519_000.0, StrainSign::Compressive)
            .expect("valid catalog entry")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g_cb(&self) -> f64 {
        self.g_cb
    }

    pub fn g_lh(&self) -> f64 {
        self.g_lh
    }

    pub fn g_hh_normal(&self) -> f64 {
        self.g_hh_normal
    }

    /// Always exactly zero.
    pub fn g_hh_inplane(&self) -> f64 {
        0.0
    }

    pub fn strain_splitting_uev(&self) -> f64 {
        self.strain_splitting_uev
    }

    pub fn band_gap_uev(&self) -> f64 {
        self.band_gap_uev
    }

    pub fn strain(&self) -> StrainSign {
        self.strain
    }

    pub fn with_g_cb(mut self, g: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidParameter("g_cb must be finite"));
        }
        self.g_cb = g;
        Ok(self)
    }

    pub fn with_g_lh(mut self, g: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidParameter("g_lh must be finite"));
        }
        self.g_lh = g;
        Ok(self)
    }

    pub fn with_strain_splitting(self, uev: f64) -> Result<Self> {
        Self::new(self.name, self.g_cb, self.g_lh, self.g_hh_normal, uev, self.band_gap_uev, self.strain)
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::inas_gaas_qw()
    }
}

/// Built-in materials.
pub fn catalog() -> Vec<MaterialParams> {
    alloc::vec![MaterialParams::inas_gaas_qw(), MaterialParams::gaas_qw()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// B parallel to the growth direction (Case A).
    Normal,
    /// B in the growth plane (Case B); taken along x.
    InPlane,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    b_tesla: f64,
    orientation: Orientation,
}

impl FieldConfig {
    pub fn new(b_tesla: f64, orientation: Orientation) -> Result<Self> {
        if !(b_tesla >= 0.0 && b_tesla.is_finite()) {
            return Err(Error::InvalidParameter("magnetic field must be finite and non-negative"));
        }
        Ok(Self { b_tesla, orientation })
    }

    pub fn b_tesla(&self) -> f64 {
        self.b_tesla
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
}

/// Scheme layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// Tensile strain, B normal, linear z/x photons with k in the plane.
    A,
    /// Tensile strain, B in-plane, circular photons along the growth axis.
    B,
    /// Heavy holes on top with both spin branches accessible.
    Degenerate,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "A",
            Case::B => "B",
            Case::Degenerate => "degenerate",
        })
    }
}

/// What a level is, for display.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelLabel {
    State(AngularMomentumState),
    /// (|-1/2⟩ + |+1/2⟩)/√2.
    PsiPlus,
    /// (|-1/2⟩ - |+1/2⟩)/√2.
    PsiMinus,
    /// (|↓⟩ - |↑⟩)/√2.
    Zero,
    /// (|↓⟩ + |↑⟩)/√2.
    One,
}

impl fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelLabel::State(s) => write!(f, "{s}"),
            LevelLabel::PsiPlus => f.write_str("ψ+"),
            LevelLabel::PsiMinus => f.write_str("ψ-"),
            LevelLabel::Zero => f.write_str("|0⟩"),
            LevelLabel::One => f.write_str("|1⟩"),
        }
    }
}

/// One energy level. `vector` has length 4 (valence, [`MJ_ORDER`]) or 2
/// (conduction, [`MS_ORDER`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub band: Band,
    pub label: LevelLabel,
    pub energy_uev: f64,
    pub vector: Vec<Complex64>,
}

/// Energy levels of one material/field configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BandScheme {
    case: Case,
    material: MaterialParams,
    field: FieldConfig,
    valence: Vec<Level>,
    conduction: [Level; 2],
    top: Vec<usize>,
}

impl BandScheme {
    pub fn case(&self) -> Case {
        self.case
    }

    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    /// Valence levels in hole-factor index order. For Case A/B this is
    /// energy order, topmost first; for the degenerate scheme it is
    /// heavy +3/2, the two light-hole levels, heavy -3/2.
    pub fn valence(&self) -> &[Level] {
        &self.valence
    }

    /// Conduction energy eigenstates: (|↑⟩, |↓⟩) for a normal field,
    /// (|0⟩, |1⟩) for an in-plane field.
    pub fn conduction(&self) -> &[Level; 2] {
        &self.conduction
    }

    /// Hole-factor indices of the level(s) the scheme is meant to excite.
    pub fn top_manifold(&self) -> &[usize] {
        &self.top
    }

    /// The topmost valence level (the first of the top manifold).
    pub fn topmost_valence(&self) -> &Level {
        &self.valence[self.top[0]]
    }

    /// All levels with absolute energies (conduction shifted by the band
    /// gap), sorted by ascending energy.
    pub fn levels(&self) -> Vec<Level> {
        let gap = self.material.band_gap_uev;
        let mut all: Vec<Level> = self
            .valence
            .iter()
            .cloned()
            .chain(self.conduction.iter().map(|l| Level { energy_uev: l.energy_uev + gap, ..l.clone() }))
            .collect();
        all.sort_by(|a, b| a.energy_uev.total_cmp(&b.energy_uev));
        all
    }

    /// Columns are the conduction eigenstates in the spin basis.
    pub fn conduction_basis(&self) -> CMatrix {
        let [a, b] = &self.conduction;
        CMatrix::from_fn(2, 2, |r, c| if c == 0 { a.vector[r] } else { b.vector[r] })
    }

    /// Conduction Zeeman splitting E(second eigenstate) - E(first), µeV.
    pub fn conduction_splitting_uev(&self) -> f64 {
        self.conduction[1].energy_uev - self.conduction[0].energy_uev
    }

    /// Splitting between the two light-hole levels, µeV (signed, upper minus
    /// lower in storage order).
    pub fn light_hole_splitting_uev(&self) -> f64 {
        let lh: Vec<&Level> = self.valence.iter().filter(|l| l.band == Band::LightHole).collect();
        lh[0].energy_uev - lh[1].energy_uev
    }

    pub fn heavy_hole_splitting_uev(&self) -> f64 {
        let hh: Vec<&Level> = self.valence.iter().filter(|l| l.band == Band::HeavyHole).collect();
        (hh[0].energy_uev - hh[1].energy_uev).abs()
    }

    /// Transition energy from valence level `v` to conduction eigenstate `c`.
    pub fn transition_uev(&self, v: usize, c: usize) -> f64 {
        self.material.band_gap_uev + self.conduction[c].energy_uev - self.valence[v].energy_uev
    }

    /// Default spectral-window center: the top manifold's mean transition
    /// to the conduction doublet's mean.
    pub fn default_center_uev(&self) -> f64 {
        let ec = 0.5 * (self.conduction[0].energy_uev + self.conduction[1].energy_uev);
        let ev = self.top.iter().map(|&i| self.valence[i].energy_uev).sum::<f64>() / self.top.len() as f64;
        self.material.band_gap_uev + ec - ev
    }

    /// Time-evolution operator of the conduction spin over `t_ns`, in the
    /// spin basis.
    pub fn conduction_propagator(&self, t_ns: f64) -> CMatrix {
        let phase = |e: f64| Complex64::from_polar(1.0, -e * t_ns / HBAR_UEV_NS);
        let u = self.conduction_basis();
        let d = CMatrix::diag(&[phase(self.conduction[0].energy_uev), phase(self.conduction[1].energy_uev)]);
        &(&u * &d) * &u.adjoint()
    }
}

/// g·µB·B in µeV.
pub fn zeeman_splitting(g: f64, b_tesla: f64) -> f64 {
    g * BOHR_MAGNETON_UEV_PER_T * b_tesla
}

/// 2πħ/(|g|·µB·B) in ns.
pub fn precession_period(g_cb: f64, b_tesla: f64) -> Result<f64> {
    let e = zeeman_splitting(g_cb, b_tesla).abs();
    if e == 0.0 || !e.is_finite() {
        return Err(Error::NoPrecession);
    }
    Ok(2.0 * core::f64::consts::PI * HBAR_UEV_NS / e)
}

fn mj_vector(mj: HalfInt) -> Vec<Complex64> {
    MJ_ORDER.iter().map(|&m| if m == mj { re(1.0) } else { ZERO }).collect()
}

fn lh_combination(sign: f64) -> Vec<Complex64> {
    // (|-1/2⟩ ± |+1/2⟩)/√2
    alloc::vec![ZERO, re(sign * FRAC_1_SQRT_2), re(FRAC_1_SQRT_2), ZERO]
}

/// The two valence eigenstates of `band` in field orientation `f`, upper
/// level first (for positive g).
///
/// Normal field: the mJ basis states themselves. In-plane field: for light
/// holes ψ± = (|-1/2⟩ ± |+1/2⟩)/√2; heavy holes have no in-plane splitting
/// and therefore no eigenstates to select.
pub fn valence_eigenstates(band: Band, f: &FieldConfig) -> Result<[Vec<Complex64>; 2]> {
    match (band, f.orientation) {
        (Band::LightHole, Orientation::Normal) => Ok([mj_vector(HalfInt::HALF), mj_vector(HalfInt::MINUS_HALF)]),
        (Band::LightHole, Orientation::InPlane) => Ok([lh_combination(1.0), lh_combination(-1.0)]),
        (Band::HeavyHole, Orientation::Normal) => {
            Ok([mj_vector(HalfInt::THREE_HALVES), mj_vector(HalfInt::MINUS_THREE_HALVES)])
        }
        (Band::HeavyHole, Orientation::InPlane) => Err(Error::HeavyHoleTopmost),
        (Band::Conduction, _) => Err(Error::UnsupportedState),
    }
}

/// Conduction spin eigenstates, lower-index first: (|↑⟩, |↓⟩) for a normal
/// field, (|0⟩, |1⟩) = ((|↓⟩ - |↑⟩)/√2, (|↓⟩ + |↑⟩)/√2) in-plane.
pub fn conduction_eigenstates(f: &FieldConfig) -> [Vec<Complex64>; 2] {
    match f.orientation {
        Orientation::Normal => [alloc::vec![re(1.0), ZERO], alloc::vec![ZERO, re(1.0)]],
        Orientation::InPlane => {
            [alloc::vec![re(-FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)], alloc::vec![re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)]]
        }
    }
}

fn conduction_levels(m: &MaterialParams, f: &FieldConfig) -> Result<[Level; 2]> {
    let ez = zeeman_splitting(m.g_cb, f.b_tesla);
    let [a, b] = conduction_eigenstates(f);
    let (la, lb) = match f.orientation {
        Orientation::Normal => (
            LevelLabel::State(AngularMomentumState::conduction(HalfInt::HALF)?),
            LevelLabel::State(AngularMomentumState::conduction(HalfInt::MINUS_HALF)?),
        ),
        Orientation::InPlane => (LevelLabel::Zero, LevelLabel::One),
    };
    // Normal: mS = +1/2 at +E/2. In-plane: |1⟩ (spin along +B) at +E/2.
    let (ea, eb) = match f.orientation {
        Orientation::Normal => (0.5 * ez, -0.5 * ez),
        Orientation::InPlane => (-0.5 * ez, 0.5 * ez),
    };
    Ok([
        Level { band: Band::Conduction, label: la, energy_uev: ea, vector: a },
        Level { band: Band::Conduction, label: lb, energy_uev: eb, vector: b },
    ])
}

fn light_hole_levels(m: &MaterialParams, f: &FieldConfig, offset: f64) -> Result<[Level; 2]> {
    let ez = zeeman_splitting(m.g_lh, f.b_tesla);
    let [up, down] = valence_eigenstates(Band::LightHole, f)?;
    let (lu, ld) = match f.orientation {
        Orientation::Normal => (
            LevelLabel::State(AngularMomentumState::valence(HalfInt::HALF)?),
            LevelLabel::State(AngularMomentumState::valence(HalfInt::MINUS_HALF)?),
        ),
        Orientation::InPlane => (LevelLabel::PsiPlus, LevelLabel::PsiMinus),
    };
    Ok([
        Level { band: Band::LightHole, label: lu, energy_uev: offset + 0.5 * ez, vector: up },
        Level { band: Band::LightHole, label: ld, energy_uev: offset - 0.5 * ez, vector: down },
    ])
}

fn heavy_hole_levels(m: &MaterialParams, f: &FieldConfig, offset: f64) -> Result<[Level; 2]> {
    let g = match f.orientation {
        Orientation::Normal => m.g_hh_normal,
        Orientation::InPlane => m.g_hh_inplane(),
    };
    let ez = zeeman_splitting(g, f.b_tesla);
    let up = AngularMomentumState::valence(HalfInt::THREE_HALVES)?;
    let down = AngularMomentumState::valence(HalfInt::MINUS_THREE_HALVES)?;
    Ok([
        Level {
            band: Band::HeavyHole,
            label: LevelLabel::State(up),
            energy_uev: offset + 0.5 * ez,
            vector: mj_vector(HalfInt::THREE_HALVES),
        },
        Level {
            band: Band::HeavyHole,
            label: LevelLabel::State(down),
            energy_uev: offset - 0.5 * ez,
            vector: mj_vector(HalfInt::MINUS_THREE_HALVES),
        },
    ])
}

/// Case A (normal field) or Case B (in-plane field) scheme of a
/// tensile-strained material: light holes on top, heavy holes
/// `strain_splitting` below.
pub fn build_level_scheme(m: &MaterialParams, f: &FieldConfig) -> Result<BandScheme> {
    if m.strain == StrainSign::Compressive {
        return Err(Error::HeavyHoleTopmost);
    }
    let case = match f.orientation {
        Orientation::Normal => Case::A,
        Orientation::InPlane => Case::B,
    };
    let [l0, l1] = light_hole_levels(m, f, 0.0)?;
    let [h0, h1] = heavy_hole_levels(m, f, -m.strain_splitting_uev)?;
    let mut valence = alloc::vec![l0, l1, h0, h1];
    valence.sort_by(|a, b| b.energy_uev.total_cmp(&a.energy_uev));
    Ok(BandScheme {
        case,
        material: m.clone(),
        field: *f,
        valence,
        conduction: conduction_levels(m, f)?,
        top: alloc::vec![0],
    })
}

/// Heavy-hole-topmost scheme in which both heavy-hole spin branches are
/// excited, the configuration that entangles electron and hole.
///
/// The -3/2 heavy-hole level carries an overall sign so that both
/// absorption branches have real positive amplitude along +G.
pub fn build_degenerate_scheme(m: &MaterialParams, f: &FieldConfig) -> Result<BandScheme> {
    if m.strain == StrainSign::Tensile {
        return Err(Error::SchemeMismatch);
    }
    let [h0, mut h1] = heavy_hole_levels(m, f, 0.0)?;
    for x in &mut h1.vector {
        *x = -*x;
    }
    let [l0, l1] = light_hole_levels(m, f, -m.strain_splitting_uev)?;
    Ok(BandScheme {
        case: Case::Degenerate,
        material: m.clone(),
        field: *f,
        valence: alloc::vec![h0, l0, l1, h1],
        conduction: conduction_levels(m, f)?,
        top: alloc::vec![0, 3],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lineshape {
    Gaussian,
    Lorentzian,
}

/// Spectral profile of the exciting light. `center_uev = None` centers the
/// window on the scheme's intended transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    center_uev: Option<f64>,
    bandwidth_uev: f64,
    lineshape: Lineshape,
}

impl SpectralWindow {
    pub fn new(center_uev: Option<f64>, bandwidth_uev: f64, lineshape: Lineshape) -> Result<Self> {
        if !(bandwidth_uev > 0.0 && bandwidth_uev.is_finite()) {
            return Err(Error::InvalidParameter("bandwidth must be positive"));
        }
        if center_uev.is_some_and(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("window center must be finite"));
        }
        Ok(Self { center_uev, bandwidth_uev, lineshape })
    }

    pub fn gaussian(bandwidth_uev: f64) -> Result<Self> {
        Self::new(None, bandwidth_uev, Lineshape::Gaussian)
    }

    pub fn center_uev(&self) -> Option<f64> {
        self.center_uev
    }

    pub fn bandwidth_uev(&self) -> f64 {
        self.bandwidth_uev
    }

    pub fn lineshape(&self) -> Lineshape {
        self.lineshape
    }

    /// Normalized spectral intensity at detuning `delta_uev` (1 at the
    /// center, 1/2 at ±FWHM/2).
    pub fn intensity(&self, delta_uev: f64) -> f64 {
        let x = 2.0 * delta_uev / self.bandwidth_uev;
        match self.lineshape {
            Lineshape::Gaussian => libm::exp(-core::f64::consts::LN_2 * x * x),
            Lineshape::Lorentzian => 1.0 / (1.0 + x * x),
        }
    }

    /// Field amplitude weight, √intensity.
    pub fn amplitude(&self, delta_uev: f64) -> f64 {
        libm::sqrt(self.intensity(delta_uev))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvabilityReport {
    /// bandwidth < valence (light-hole) Zeeman splitting.
    pub valence_resolved: bool,
    /// bandwidth > conduction Zeeman splitting.
    pub conduction_unresolved: bool,
    /// bandwidth < strain splitting.
    pub strain_resolved: bool,
    /// Valence splitting minus bandwidth, µeV.
    pub valence_margin_uev: f64,
    /// Bandwidth minus conduction splitting, µeV.
    pub conduction_margin_uev: f64,
    /// Strain splitting minus bandwidth, µeV.
    pub strain_margin_uev: f64,
}

impl ResolvabilityReport {
    pub fn passes(&self) -> bool {
        self.valence_resolved && self.conduction_unresolved && self.strain_resolved
    }
}

/// Checks that the window resolves the valence doublet but not the
/// conduction doublet, and stays clear of the other valence band.
pub fn resolvability_check(w: &SpectralWindow, m: &MaterialParams, f: &FieldConfig) -> ResolvabilityReport {
    let ev = zeeman_splitting(m.g_lh, f.b_tesla).abs();
    let ec = zeeman_splitting(m.g_cb, f.b_tesla).abs();
    let bw = w.bandwidth_uev;
    ResolvabilityReport {
        valence_resolved: bw < ev,
        conduction_unresolved: bw > ec,
        strain_resolved: bw < m.strain_splitting_uev,
        valence_margin_uev: ev - bw,
        conduction_margin_uev: bw - ec,
        strain_margin_uev: m.strain_splitting_uev - bw,
    }
}
