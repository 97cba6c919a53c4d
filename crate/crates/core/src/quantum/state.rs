use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{inner, norm_sqr, CMatrix, LocalIndex, ZERO};
use crate::{Error, Result};

/// Tolerance for algebraic identities (norms, traces, hermiticity).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for eigenvalue positivity.
pub const EIGEN_TOL: f64 = 1e-10;

/// What a tensor factor physically is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorLabel {
    /// Polarization qubit.
    Photon,
    /// Conduction-band electron spin in the optical absorber / emitter.
    Electron,
    /// The hole left in the valence band.
    Hole,
    /// Electron spin bound to donor `n` of the storage chain.
    Donor(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertFactor {
    label: FactorLabel,
    dim: usize,
}

impl HilbertFactor {
    pub const fn photon() -> Self {
        Self { label: FactorLabel::Photon, dim: 2 }
    }

    pub const fn electron() -> Self {
        Self { label: FactorLabel::Electron, dim: 2 }
    }

    pub const fn donor(site: u8) -> Self {
        Self { label: FactorLabel::Donor(site), dim: 2 }
    }

    /// Hole factor; the level schemes here use dimension 1, 2 or 4.
    pub fn hole(dim: usize) -> Result<Self> {
        match dim {
            1 | 2 | 4 => Ok(Self { label: FactorLabel::Hole, dim }),
            _ => Err(Error::InvalidParameter("hole dimension must be 1, 2 or 4")),
        }
    }

    pub fn label(&self) -> FactorLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Pure(Vec<Complex64>),
    Density(CMatrix),
}

/// A normalized state on an ordered tensor product of labeled factors.
///
/// Flat indices are big-endian in the factor order: the first factor is the
/// most significant digit, so `|0⟩ ⊗ |1⟩` is flat index 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    factors: Vec<HilbertFactor>,
    repr: Representation,
}

fn check_factors(factors: &[HilbertFactor]) -> Result<usize> {
    for (i, f) in factors.iter().enumerate() {
        if factors[..i].iter().any(|g| g.label == f.label) {
            return Err(Error::DuplicateFactor);
        }
    }
    Ok(factors.iter().map(|f| f.dim).product())
}

impl QuantumState {
    /// A pure state; the squared amplitudes must sum to 1 within 1e-12.
    pub fn pure(factors: Vec<HilbertFactor>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_factors(&factors)?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch);
        }
        if (norm_sqr(&amplitudes) - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidState("amplitudes not normalized"));
        }
        Ok(Self { factors, repr: Representation::Pure(amplitudes) })
    }

    /// A pure state from unnormalized amplitudes.
    pub fn pure_normalized(factors: Vec<HilbertFactor>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm_sqr(&amplitudes);
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("zero vector"));
        }
        let s = 1.0 / libm::sqrt(n);
        amplitudes.iter_mut().for_each(|a| *a *= s);
        Self::pure(factors, amplitudes)
    }

    /// A density matrix; must be Hermitian and unit-trace within 1e-12 with
    /// eigenvalues ≥ -1e-10.
    pub fn density(factors: Vec<HilbertFactor>, rho: CMatrix) -> Result<Self> {
        let dim = check_factors(&factors)?;
        if rho.rows() != dim || rho.cols() != dim {
            return Err(Error::DimensionMismatch);
        }
        if !rho.is_hermitian(ALGEBRAIC_TOL) {
            return Err(Error::InvalidState("density matrix not Hermitian"));
        }
        if (rho.trace() - 1.0).norm() > ALGEBRAIC_TOL {
            return Err(Error::InvalidState("density matrix trace is not 1"));
        }
        if rho.hermitian_eigenvalues().first().is_some_and(|&v| v < -EIGEN_TOL) {
            return Err(Error::InvalidState("density matrix has a negative eigenvalue"));
        }
        Ok(Self { factors, repr: Representation::Density(rho) })
    }

    /// Density matrix from a positive (possibly unnormalized) operator.
    /// Roundoff asymmetry is removed before validation.
    pub fn density_normalized(factors: Vec<HilbertFactor>, rho: CMatrix) -> Result<Self> {
        let tr = rho.trace().re;
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::InvalidState("zero trace"));
        }
        Self::density(factors, rho.hermitian_part().scale((1.0 / tr).into()))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(factors: Vec<HilbertFactor>, index: usize) -> Result<Self> {
        let dim = check_factors(&factors)?;
        if index >= dim {
            return Err(Error::DimensionMismatch);
        }
        let mut amps = alloc::vec![ZERO; dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::pure(factors, amps)
    }

    /// Single photon polarization qubit α|0⟩ + β|1⟩.
    pub fn photon(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::pure(alloc::vec![HilbertFactor::photon()], alloc::vec![alpha, beta])
    }

    /// Single electron spin qubit α|0⟩ + β|1⟩ in the stored basis.
    pub fn electron(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::pure(alloc::vec![HilbertFactor::electron()], alloc::vec![alpha, beta])
    }

    pub fn factors(&self) -> &[HilbertFactor] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn is_pure_vector(&self) -> bool {
        matches!(self.repr, Representation::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.repr {
            Representation::Pure(v) => Some(v),
            Representation::Density(_) => None,
        }
    }

    pub fn density_matrix(&self) -> CMatrix {
        match &self.repr {
            Representation::Pure(v) => CMatrix::outer(v, v),
            Representation::Density(m) => m.clone(),
        }
    }

    pub fn to_density(&self) -> Self {
        Self { factors: self.factors.clone(), repr: Representation::Density(self.density_matrix()) }
    }

    pub fn position(&self, label: FactorLabel) -> Result<usize> {
        self.factors.iter().position(|f| f.label == label).ok_or(Error::UnknownFactor)
    }

    /// Renames one factor, keeping its dimension and position.
    pub fn relabel(mut self, from: FactorLabel, to: FactorLabel) -> Result<Self> {
        let i = self.position(from)?;
        if from != to && self.factors.iter().any(|f| f.label == to) {
            return Err(Error::DuplicateFactor);
        }
        self.factors[i].label = to;
        Ok(self)
    }

    /// Wraps an already-validated density matrix.
    pub(crate) fn from_parts(factors: Vec<HilbertFactor>, rho: CMatrix) -> Self {
        Self { factors, repr: Representation::Density(rho) }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.factors != other.factors {
            return Err(Error::DimensionMismatch);
        }
        Ok(())
    }
}

/// `a ⊗ b` on the concatenated factor list.
pub fn tensor_product(a: &QuantumState, b: &QuantumState) -> Result<QuantumState> {
    let mut factors = a.factors.clone();
    factors.extend_from_slice(&b.factors);
    check_factors(&factors)?;
    let repr = match (&a.repr, &b.repr) {
        (Representation::Pure(x), Representation::Pure(y)) => {
            Representation::Pure(x.iter().flat_map(|&p| y.iter().map(move |&q| p * q)).collect())
        }
        _ => Representation::Density(a.density_matrix().kron(&b.density_matrix())),
    };
    Ok(QuantumState { factors, repr })
}

/// Reduced density matrix on `keep`, in the state's own factor order.
pub fn partial_trace(rho: &QuantumState, keep: &[FactorLabel]) -> Result<QuantumState> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter("nothing to keep"));
    }
    let mut targets = Vec::with_capacity(keep.len());
    for &l in keep {
        let p = rho.position(l)?;
        if targets.contains(&p) {
            return Err(Error::DuplicateFactor);
        }
        targets.push(p);
    }
    targets.sort_unstable();
    let factors: Vec<HilbertFactor> = targets.iter().map(|&t| rho.factors[t]).collect();
    let reduced = reduce(&rho.density_matrix(), &rho.dims(), &targets);
    Ok(QuantumState::from_parts(factors, reduced))
}

pub(crate) fn reduce(rho: &CMatrix, dims: &[usize], targets: &[usize]) -> CMatrix {
    let idx = LocalIndex::new(dims, targets);
    let rd = idx.rest_dim();
    CMatrix::from_fn(idx.target_dim(), idx.target_dim(), |a, b| {
        (0..rd).map(|r| rho[(idx.flat(a, r), idx.flat(b, r))]).sum()
    })
}

/// Tr ρ².
pub fn purity(rho: &QuantumState) -> f64 {
    match &rho.repr {
        Representation::Pure(_) => 1.0,
        Representation::Density(m) => {
            let n = m.rows();
            let mut s = 0.0;
            for r in 0..n {
                for c in 0..n {
                    s += (m[(r, c)] * m[(c, r)]).re;
                }
            }
            s
        }
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &QuantumState) -> f64 {
    match &rho.repr {
        Representation::Pure(_) => 0.0,
        Representation::Density(m) => shannon_bits(m.hermitian_eigenvalues().into_iter()),
    }
}

pub(crate) fn shannon_bits(p: impl Iterator<Item = f64>) -> f64 {
    p.filter(|&x| x > 1e-300).map(|x| -x * libm::log2(x)).sum::<f64>().max(0.0)
}

/// Entropy of entanglement (bits) across the cut `side | rest` of a pure
/// state.
pub fn entanglement_entropy(psi: &QuantumState, side: &[FactorLabel]) -> Result<f64> {
    if !psi.is_pure_vector() {
        return Err(Error::NotPure);
    }
    let reduced = partial_trace(psi, side)?;
    let max_bits = {
        let a = reduced.dim();
        let b = psi.dim() / a;
        libm::log2(a.min(b) as f64)
    };
    Ok(von_neumann_entropy(&reduced).min(max_bits))
}

/// Uhlmann fidelity (Tr √(√ρ σ √ρ))², reducing to |⟨a|b⟩|² for pure
/// states.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    a.same_space(b)?;
    let f = match (&a.repr, &b.repr) {
        (Representation::Pure(x), Representation::Pure(y)) => inner(x, y).norm_sqr(),
        (Representation::Pure(x), Representation::Density(m))
        | (Representation::Density(m), Representation::Pure(x)) => inner(x, &m.mul_vec(x)).re,
        (Representation::Density(p), Representation::Density(q)) => {
            let sp = p.sqrt_psd();
            let inner_op = &(&sp * q) * &sp;
            let t: f64 = inner_op.hermitian_eigenvalues().into_iter().map(|v| libm::sqrt(v.max(0.0))).sum();
            t * t
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;
    use alloc::vec;

    const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn hole4() -> HilbertFactor {
        HilbertFactor::hole(4).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let a = QuantumState::basis(vec![HilbertFactor::electron()], 0).unwrap();
        let b = QuantumState::basis(vec![HilbertFactor::photon()], 1).unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        assert_eq!(ab.amplitudes().unwrap()[1], re(1.0));
    }

    #[test]
    fn tensor_of_plus_and_zero() {
        let a = QuantumState::photon(re(S), re(S)).unwrap();
        let b = QuantumState::electron(re(1.0), re(0.0)).unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        let v = ab.amplitudes().unwrap();
        for (x, y) in v.iter().zip([S, 0.0, S, 0.0]) {
            assert!((x - re(y)).norm() < 1e-15);
        }
    }

    #[test]
    fn product_with_hole_has_no_entanglement() {
        let e = QuantumState::electron(re(0.6), Complex64::new(0.0, 0.8)).unwrap();
        let h = QuantumState::basis(vec![hole4()], 1).unwrap();
        let eh = tensor_product(&e, &h).unwrap();
        assert!(entanglement_entropy(&eh, &[FactorLabel::Electron]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn duplicate_label_rejected() {
        let a = QuantumState::photon(re(1.0), re(0.0)).unwrap();
        assert_eq!(tensor_product(&a, &a).unwrap_err(), Error::DuplicateFactor);
    }

    #[test]
    fn unknown_label_rejected() {
        let a = QuantumState::photon(re(1.0), re(0.0)).unwrap();
        assert_eq!(partial_trace(&a, &[FactorLabel::Hole]).unwrap_err(), Error::UnknownFactor);
    }

    fn bell_like(alpha: f64, beta: f64) -> QuantumState {
        // α|h:-3/2⟩|↓⟩ + β|h:+3/2⟩|↑⟩ with electron first, hole second.
        // Electron index 0 = ↑, 1 = ↓; hole index 0 = +3/2, 3 = -3/2.
        let mut v = vec![re(0.0); 8];
        v[4 + 3] = re(alpha);
        v[0] = re(beta);
        QuantumState::pure(vec![HilbertFactor::electron(), hole4()], v).unwrap()
    }

    #[test]
    fn maximally_entangled_reduces_to_half_identity() {
        let psi = bell_like(S, S);
        let e = partial_trace(&psi, &[FactorLabel::Electron]).unwrap();
        // Direct 4x4 oracle: ρ_e = Σ_h ⟨h|ψ⟩⟨ψ|h⟩ = diag(β², α²).
        let m = e.density_matrix();
        assert!(m.max_abs_diff(&CMatrix::diag(&[re(0.5), re(0.5)])) < 1e-15);
        assert!((entanglement_entropy(&psi, &[FactorLabel::Hole]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skewed_entropy() {
        let psi = bell_like(libm::sqrt(0.9), libm::sqrt(0.1));
        let h = entanglement_entropy(&psi, &[FactorLabel::Electron]).unwrap();
        assert!((h - 0.468_996).abs() < 1e-6);
    }

    #[test]
    fn entropy_of_mixed_input_rejected() {
        let rho = QuantumState::density(vec![HilbertFactor::electron()], CMatrix::diag(&[re(0.5), re(0.5)])).unwrap();
        assert_eq!(entanglement_entropy(&rho, &[FactorLabel::Electron]).unwrap_err(), Error::NotPure);
    }

    #[test]
    fn fidelity_examples() {
        let p = QuantumState::electron(re(S), re(S)).unwrap();
        let m = QuantumState::electron(re(S), re(-S)).unwrap();
        assert!((fidelity(&p, &p).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&p, &m).unwrap() < 1e-15);
        let mixed = QuantumState::density(vec![HilbertFactor::electron()], CMatrix::diag(&[re(0.5), re(0.5)])).unwrap();
        assert!((fidelity(&p, &mixed).unwrap() - 0.5).abs() < 1e-15);
        assert!((fidelity(&p.to_density(), &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn purity_examples() {
        let p = QuantumState::electron(re(S), re(S)).unwrap();
        assert_eq!(purity(&p), 1.0);
        assert!((purity(&p.to_density()) - 1.0).abs() < 1e-15);
        let mixed = QuantumState::density(vec![HilbertFactor::electron()], CMatrix::diag(&[re(0.5), re(0.5)])).unwrap();
        assert!((purity(&mixed) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_density_rejected() {
        let bad = CMatrix::diag(&[re(1.01), re(-0.01)]);
        assert!(QuantumState::density(vec![HilbertFactor::electron()], bad).is_err());
        let unnorm = vec![re(1.0), re(1.0)];
        assert!(QuantumState::pure(vec![HilbertFactor::electron()], unnorm).is_err());
    }
}
