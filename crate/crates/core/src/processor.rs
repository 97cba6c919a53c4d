//! Gate-level model of the donor-chain storage section.
//!
//! Each site holds one bound electron spin. Single-qubit gates come from
//! pulling a site in and out of resonance with a background microwave field
//! (the g-factor differs between layers); two-qubit gates from exchange
//! between neighbours. Gate noise is single-parameter depolarizing, applied
//! after each gate to every site the gate touched.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::constants::BOHR_MAGNETON_UEV_PER_T;
use crate::linalg::{re, CMatrix, LocalIndex, I, ONE, ZERO};
use crate::quantum::{partial_trace, FactorLabel, HilbertFactor, QuantumState};
use crate::transfer::hadamard;
use crate::{Error, Result};

/// g-factor of a site pulled into the Ge-rich layer.
pub const G_TRANSFER: f64 = 1.563;
/// g-factor of a site at rest in the Si-like layer.
pub const G_DONOR: f64 = 1.998;
/// Sites in a default chain.
pub const DEFAULT_SITES: usize = 4;

/// Site labels are `u8`, so a chain holds at most this many sites.
pub const MAX_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub n_sites: usize,
    pub g_transfer: f64,
    pub g_donor: f64,
    pub b_tesla: f64,
    /// Depolarizing probability after each gate, per touched site.
    pub gate_error: f64,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self { n_sites: DEFAULT_SITES, g_transfer: G_TRANSFER, g_donor: G_DONOR, b_tesla: 1.0, gate_error: 0.0 }
    }
}

impl ChainParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 || self.n_sites > MAX_SITES {
            return Err(Error::InvalidParameter("chain must have between 1 and 12 sites"));
        }
        if !(self.g_transfer > 0.0 && self.g_donor > 0.0) || !self.g_transfer.is_finite() || !self.g_donor.is_finite() {
            return Err(Error::InvalidParameter("layer g-factors must be positive"));
        }
        if !(self.b_tesla >= 0.0 && self.b_tesla.is_finite()) {
            return Err(Error::InvalidParameter("field must be finite and non-negative"));
        }
        if !(0.0..=1.0).contains(&self.gate_error) {
            return Err(Error::InvalidParameter("gate error must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// exp(-iθσ/2) about `axis`.
pub fn rotation(axis: Axis, angle: f64) -> CMatrix {
    let c = re(libm::cos(angle / 2.0));
    let s = libm::sin(angle / 2.0);
    match axis {
        Axis::X => CMatrix::from_rows(&[[c, -I * s], [-I * s, c]]),
        Axis::Y => CMatrix::from_rows(&[[c, re(-s)], [re(s), c]]),
        Axis::Z => CMatrix::diag(&[Complex64::new(c.re, -s), Complex64::new(c.re, s)]),
    }
}

pub fn swap() -> CMatrix {
    CMatrix::from_fn(4, 4, |r, c| if r == ((c & 1) << 1 | c >> 1) { ONE } else { ZERO })
}

/// cos(πf/2)·1 - i·sin(πf/2)·SWAP: a full SWAP at f = 1 (phase -i), √SWAP
/// at f = 1/2.
pub fn exchange_unitary(fraction: f64) -> CMatrix {
    let th = core::f64::consts::PI * fraction / 2.0;
    let a = CMatrix::identity(4).scale(re(libm::cos(th)));
    &a + &swap().scale(-I * libm::sin(th))
}

/// Controlled-phase from two √SWAPs and single-site z rotations.
pub fn cz_unitary() -> CMatrix {
    use core::f64::consts::{FRAC_PI_2, PI};
    let id = CMatrix::identity(2);
    let rs = exchange_unitary(0.5);
    let pre = rotation(Axis::Z, FRAC_PI_2).kron(&rotation(Axis::Z, -FRAC_PI_2));
    let mid = rotation(Axis::Z, PI).kron(&id);
    &(&(&pre * &rs) * &mid) * &rs
}

/// CNOT (control first) as (1 ⊗ H)·CZ·(1 ⊗ H); equal to the textbook
/// matrix up to a global phase.
pub fn cnot_unitary() -> CMatrix {
    let h = CMatrix::identity(2).kron(&hadamard());
    &(&h * &cz_unitary()) * &h
}

/// Kraus operators of ρ ↦ (1 - p)ρ + (p/3)(XρX + YρY + ZρZ).
pub fn depolarizing_kraus(p: f64) -> Vec<CMatrix> {
    let a = re(libm::sqrt(1.0 - p));
    let b = libm::sqrt(p / 3.0);
    alloc::vec![
        CMatrix::identity(2).scale(a),
        CMatrix::from_rows(&[[ZERO, re(b)], [re(b), ZERO]]),
        CMatrix::from_rows(&[[ZERO, -I * b], [I * b, ZERO]]),
        CMatrix::diag(&[re(b), re(-b)]),
    ]
}

/// g·µB·B - E_mw in µeV; zero when the site is resonant with the microwaves.
pub fn resonance_detuning(g_site: f64, b_tesla: f64, microwave_uev: f64) -> Result<f64> {
    if !(g_site > 0.0 && b_tesla >= 0.0 && microwave_uev >= 0.0) {
        return Err(Error::InvalidParameter("detuning inputs must be positive"));
    }
    Ok(g_site * BOHR_MAGNETON_UEV_PER_T * b_tesla - microwave_uev)
}

#[derive(Debug, Clone, PartialEq)]
enum Register {
    Pure(Vec<Complex64>),
    Mixed(CMatrix),
}

fn apply_gate(reg: &mut Register, n: usize, sites: &[usize], u: &CMatrix, p: f64) {
    let dims = alloc::vec![2; n];
    let idx = LocalIndex::new(&dims, sites);
    *reg = match core::mem::replace(reg, Register::Pure(Vec::new())) {
        Register::Pure(v) if p == 0.0 => Register::Pure(idx.apply_vec(u, &v)),
        Register::Pure(v) => Register::Mixed(CMatrix::outer(&v, &v)),
        other => other,
    };
    if let Register::Mixed(m) = reg {
        *m = idx.conjugate(u, m);
        if p > 0.0 {
            let kraus = depolarizing_kraus(p);
            for &s in sites {
                *m = LocalIndex::new(&dims, &[s]).kraus_sum(&kraus, m);
            }
        }
    }
}

fn check_site(params: &ChainParams, site: usize) -> Result<()> {
    if site >= params.n_sites {
        return Err(Error::SiteOutOfRange);
    }
    Ok(())
}

fn chain_factors(n: usize) -> Vec<HilbertFactor> {
    (0..n).map(|i| HilbertFactor::donor(i as u8)).collect()
}

/// Full SWAPs moving site `from` to site `to`, as (site, site + 1) pairs.
fn hops(from: usize, to: usize) -> Vec<usize> {
    if from <= to {
        (from..to).collect()
    } else {
        (to..from).rev().collect()
    }
}

/// Moves the qubit at `from` to `to` by nearest-neighbour SWAPs, acting on
/// an arbitrary operator of the whole chain (not necessarily a state).
pub fn shuttle_operator(params: &ChainParams, x: &CMatrix, from: usize, to: usize) -> Result<CMatrix> {
    params.validate()?;
    check_site(params, from)?;
    check_site(params, to)?;
    let d = 1usize << params.n_sites;
    if x.rows() != d || x.cols() != d {
        return Err(Error::DimensionMismatch);
    }
    let u = exchange_unitary(1.0);
    let mut reg = Register::Mixed(x.clone());
    for s in hops(from, to) {
        apply_gate(&mut reg, params.n_sites, &[s, s + 1], &u, params.gate_error);
    }
    match reg {
        Register::Mixed(m) => Ok(m),
        Register::Pure(_) => unreachable!(),
    }
}

/// A chain of donor spins and its joint state; operations return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct DonorChain {
    params: ChainParams,
    reg: Register,
}

impl DonorChain {
    /// All sites in |0⟩.
    pub fn new(params: ChainParams) -> Result<Self> {
        params.validate()?;
        let mut v = alloc::vec![ZERO; 1 << params.n_sites];
        v[0] = ONE;
        Ok(Self { params, reg: Register::Pure(v) })
    }

    /// Chain from a joint state over `Donor(0)..Donor(n-1)` in order.
    pub fn from_state(params: ChainParams, state: &QuantumState) -> Result<Self> {
        params.validate()?;
        if state.factors() != chain_factors(params.n_sites).as_slice() {
            return Err(Error::DimensionMismatch);
        }
        let reg = match state.amplitudes() {
            Some(v) => Register::Pure(v.to_vec()),
            None => Register::Mixed(state.density_matrix()),
        };
        Ok(Self { params, reg })
    }

    /// Loads a one-qubit state (any label) at `site`, every other site in |0⟩.
    pub fn load(params: ChainParams, qubit: &QuantumState, site: usize) -> Result<Self> {
        params.validate()?;
        check_site(&params, site)?;
        if qubit.dims() != [2] {
            return Err(Error::DimensionMismatch);
        }
        let n = params.n_sites;
        let shift = n - 1 - site;
        let reg = match qubit.amplitudes() {
            Some(a) => {
                let mut v = alloc::vec![ZERO; 1 << n];
                v[0] = a[0];
                v[1 << shift] = a[1];
                Register::Pure(v)
            }
            None => {
                let q = qubit.density_matrix();
                let mut m = CMatrix::zeros(1 << n, 1 << n);
                for r in 0..2 {
                    for c in 0..2 {
                        m[(r << shift, c << shift)] = q[(r, c)];
                    }
                }
                Register::Mixed(m)
            }
        };
        Ok(Self { params, reg })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn n_sites(&self) -> usize {
        self.params.n_sites
    }

    pub fn state(&self) -> QuantumState {
        let f = chain_factors(self.params.n_sites);
        match &self.reg {
            Register::Pure(v) => QuantumState::pure_normalized(f, v.clone()),
            Register::Mixed(m) => QuantumState::density_normalized(f, m.hermitian_part()),
        }
        .expect("chain register stays a valid state")
    }

    /// Reduced state of one site, labelled `Donor(site)`.
    pub fn site_state(&self, site: usize) -> Result<QuantumState> {
        check_site(&self.params, site)?;
        partial_trace(&self.state(), &[FactorLabel::Donor(site as u8)])
    }

    fn with_gate(&self, sites: &[usize], u: &CMatrix) -> Self {
        let mut reg = self.reg.clone();
        apply_gate(&mut reg, self.params.n_sites, sites, u, self.params.gate_error);
        Self { params: self.params, reg }
    }

    /// Single-site unitary (followed by gate noise).
    pub fn apply_single(&self, site: usize, u: &CMatrix) -> Result<Self> {
        check_site(&self.params, site)?;
        if u.rows() != 2 || !u.is_unitary(1e-10) {
            return Err(Error::NotTracePreserving);
        }
        Ok(self.with_gate(&[site], u))
    }

    pub fn single_qubit_gate(&self, site: usize, axis: Axis, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidParameter("rotation angle must be finite"));
        }
        self.apply_single(site, &rotation(axis, angle))
    }

    /// Exchange between `site` and `site + 1` for a fraction of a full SWAP.
    pub fn exchange_gate(&self, site: usize, fraction: f64) -> Result<Self> {
        check_site(&self.params, site + 1)?;
        if !fraction.is_finite() {
            return Err(Error::InvalidParameter("exchange fraction must be finite"));
        }
        Ok(self.with_gate(&[site, site + 1], &exchange_unitary(fraction)))
    }

    /// CNOT with `control` and `control + 1` as target, from the exchange
    /// construction. Gate noise is applied once, after the composite.
    pub fn cnot(&self, control: usize) -> Result<Self> {
        check_site(&self.params, control + 1)?;
        Ok(self.with_gate(&[control, control + 1], &cnot_unitary()))
    }

    pub fn shuttle(&self, from: usize, to: usize) -> Result<Self> {
        check_site(&self.params, from)?;
        check_site(&self.params, to)?;
        let u = exchange_unitary(1.0);
        let mut reg = self.reg.clone();
        for s in hops(from, to) {
            apply_gate(&mut reg, self.params.n_sites, &[s, s + 1], &u, self.params.gate_error);
        }
        Ok(Self { params: self.params, reg })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::fidelity;

    /// |⟨A, B⟩| / ‖A‖‖B‖ = 1 iff A = e^{iφ}B.
    fn equal_up_to_phase(a: &CMatrix, b: &CMatrix) -> bool {
        let ov = (&a.adjoint() * b).trace().norm();
        (ov / (a.frobenius_norm() * b.frobenius_norm()) - 1.0).abs() < 1e-12
    }

    #[test]
    fn rotations() {
        use core::f64::consts::PI;
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let u = rotation(axis, 0.37);
            assert!(u.is_unitary(1e-12));
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            assert!((det - ONE).norm() < 1e-12);
            assert!(equal_up_to_phase(&rotation(axis, 2.0 * PI), &CMatrix::identity(2)));
        }
        let x = rotation(Axis::X, PI);
        assert!((x[(1, 0)].norm() - 1.0).abs() < 1e-15);
        let h = &rotation(Axis::Y, PI / 2.0) * &rotation(Axis::Z, PI);
        assert!(equal_up_to_phase(&h, &hadamard()));
    }

    #[test]
    fn exchange_family() {
        let full = exchange_unitary(1.0);
        assert!(equal_up_to_phase(&full, &swap()));
        let half = exchange_unitary(0.5);
        assert!((&half * &half).max_abs_diff(&full) < 1e-12);
        let sz = CMatrix::diag(&[re(2.0), ZERO, ZERO, re(-2.0)]);
        for f in [0.1, 0.5, 0.77] {
            let u = exchange_unitary(f);
            assert!(u.is_unitary(1e-12));
            assert!((&u * &sz).max_abs_diff(&(&sz * &u)) < 1e-12);
        }
    }

    #[test]
    fn cnot_truth_table() {
        let want = CMatrix::from_fn(4, 4, |r, c| {
            let t = if c >= 2 { c ^ 1 } else { c };
            if r == t {
                ONE
            } else {
                ZERO
            }
        });
        assert!(equal_up_to_phase(&cz_unitary(), &CMatrix::diag(&[ONE, ONE, ONE, -ONE])));
        let u = cnot_unitary();
        assert!(equal_up_to_phase(&u, &want));
        let phase = u[(0, 0)];
        for c in 0..4 {
            let col: Vec<f64> = (0..4).map(|r| (u[(r, c)] / phase).norm()).collect();
            let t = if c >= 2 { c ^ 1 } else { c };
            assert!((col[t] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shuttles() {
        let q = QuantumState::electron(re(0.6), Complex64::new(0.0, 0.8)).unwrap();
        let ch = DonorChain::load(ChainParams::default(), &q, 0).unwrap();
        let same = ch.shuttle(1, 1).unwrap();
        assert_eq!(same, ch);
        let out = ch.shuttle(0, 3).unwrap();
        let f =
            fidelity(&out.site_state(3).unwrap().relabel(FactorLabel::Donor(3), FactorLabel::Electron).unwrap(), &q);
        assert!((f.unwrap() - 1.0).abs() < 1e-12);
        assert!(ch.shuttle(0, 4).is_err());
    }

    #[test]
    fn noisy_shuttle_oracle() {
        let p = 0.01;
        let params = ChainParams { n_sites: 6, gate_error: p, ..ChainParams::default() };
        let q =
            QuantumState::electron(re(core::f64::consts::FRAC_1_SQRT_2), I * core::f64::consts::FRAC_1_SQRT_2).unwrap();
        let ch = DonorChain::load(params, &q, 0).unwrap();
        let out = ch.shuttle(0, 5).unwrap();
        let got =
            fidelity(&out.site_state(5).unwrap().relabel(FactorLabel::Donor(5), FactorLabel::Electron).unwrap(), &q)
                .unwrap();
        let want = (1.0 + libm::pow(1.0 - 4.0 * p / 3.0, 5.0)) / 2.0;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn detuning() {
        assert!(resonance_detuning(G_DONOR, 1.0, G_DONOR * BOHR_MAGNETON_UEV_PER_T).unwrap().abs() < 1e-12);
        let d = resonance_detuning(G_TRANSFER, 1.0, G_DONOR * BOHR_MAGNETON_UEV_PER_T).unwrap();
        assert!((d - (G_TRANSFER - G_DONOR) * BOHR_MAGNETON_UEV_PER_T).abs() < 1e-12);
        assert!((d + 25.18).abs() < 5e-3);
        assert_eq!(resonance_detuning(G_TRANSFER, 0.0, 3.0).unwrap(), -3.0);
    }

    #[test]
    fn bad_indices() {
        let ch = DonorChain::new(ChainParams::default()).unwrap();
        assert_eq!(ch.single_qubit_gate(4, Axis::X, 1.0), Err(Error::SiteOutOfRange));
        assert_eq!(ch.exchange_gate(3, 1.0), Err(Error::SiteOutOfRange));
        assert!(DonorChain::new(ChainParams { n_sites: 0, ..ChainParams::default() }).is_err());
    }
}
