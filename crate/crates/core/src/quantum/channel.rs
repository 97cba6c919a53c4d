use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::{reduce, FactorLabel, HilbertFactor, QuantumState, ALGEBRAIC_TOL};
use crate::linalg::{re, CMatrix, LocalIndex};
use crate::{Error, Result};

/// Σ K†K must match the identity to this tolerance.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// A Kraus-form map from `input` factors to `output` factors.
///
/// A `conditional` channel is a post-selected map (Σ K†K ≤ 1); applying it
/// renormalizes the output and reports the success probability.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    input: Vec<HilbertFactor>,
    output: Vec<HilbertFactor>,
    kraus: Vec<CMatrix>,
    conditional: bool,
}

impl QuantumChannel {
    pub fn new(
        input: Vec<HilbertFactor>,
        output: Vec<HilbertFactor>,
        kraus: Vec<CMatrix>,
        conditional: bool,
    ) -> Result<Self> {
        let din: usize = input.iter().map(|f| f.dim()).product();
        let dout: usize = output.iter().map(|f| f.dim()).product();
        if kraus.is_empty() || kraus.iter().any(|k| k.rows() != dout || k.cols() != din) {
            return Err(Error::DimensionMismatch);
        }
        let ch = Self { input, output, kraus, conditional };
        let gram = ch.completeness();
        if conditional {
            let top = gram.hermitian_eigenvalues().last().copied().unwrap_or(0.0);
            if top > 1.0 + COMPLETENESS_TOL {
                return Err(Error::NotTracePreserving);
            }
        } else if gram.max_abs_diff(&CMatrix::identity(din)) > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving);
        }
        Ok(ch)
    }

    /// Same-space channel on a single factor.
    pub fn on(factor: HilbertFactor, kraus: Vec<CMatrix>, conditional: bool) -> Result<Self> {
        Self::new(alloc::vec![factor], alloc::vec![factor], kraus, conditional)
    }

    pub fn identity(factor: HilbertFactor) -> Self {
        Self {
            input: alloc::vec![factor],
            output: alloc::vec![factor],
            kraus: alloc::vec![CMatrix::identity(factor.dim())],
            conditional: false,
        }
    }

    pub fn input(&self) -> &[HilbertFactor] {
        &self.input
    }

    pub fn output(&self) -> &[HilbertFactor] {
        &self.output
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn is_conditional(&self) -> bool {
        self.conditional
    }

    /// Σ K†K.
    pub fn completeness(&self) -> CMatrix {
        let d = self.input.iter().map(|f| f.dim()).product();
        self.kraus.iter().fold(CMatrix::zeros(d, d), |acc, k| &acc + &(&k.adjoint() * k))
    }

    /// Σ K X K† on a bare operator of the input space.
    pub fn map_operator(&self, x: &CMatrix) -> CMatrix {
        let d = self.output.iter().map(|f| f.dim()).product();
        self.kraus.iter().fold(CMatrix::zeros(d, d), |acc, k| &acc + &(&(k * x) * &k.adjoint()))
    }
}

/// Result of [`apply_channel`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutput {
    pub state: QuantumState,
    /// 1 for trace-preserving channels.
    pub probability: f64,
}

/// Σ K ρ K† with the channel acting on its input factors of `rho`.
///
/// When the channel changes the factor set, the output factors take the
/// place of the input factors at the front of the list, followed by the
/// untouched factors in their original order.
pub fn apply_channel(rho: &QuantumState, ch: &QuantumChannel) -> Result<ChannelOutput> {
    let mut targets = Vec::with_capacity(ch.input.len());
    for f in &ch.input {
        let p = rho.position(f.label())?;
        if rho.factors()[p].dim() != f.dim() {
            return Err(Error::DimensionMismatch);
        }
        targets.push(p);
    }
    let dims = rho.dims();
    let m = rho.density_matrix();
    let (factors, out) = if ch.input == ch.output {
        let idx = LocalIndex::new(&dims, &targets);
        (rho.factors().to_vec(), idx.kraus_sum(&ch.kraus, &m))
    } else {
        let idx = LocalIndex::new(&dims, &targets);
        let rest: Vec<HilbertFactor> =
            rho.factors().iter().enumerate().filter(|(i, _)| !targets.contains(i)).map(|(_, f)| *f).collect();
        let rd = idx.rest_dim();
        let din = idx.target_dim();
        let dout: usize = ch.output.iter().map(|f| f.dim()).product();
        // Reorder to (input ⊗ rest), then apply K ⊗ 1.
        let ordered =
            CMatrix::from_fn(din * rd, din * rd, |a, b| m[(idx.flat(a / rd, a % rd), idx.flat(b / rd, b % rd))]);
        let ident = CMatrix::identity(rd);
        let mut acc = CMatrix::zeros(dout * rd, dout * rd);
        for k in &ch.kraus {
            let full = k.kron(&ident);
            acc = &acc + &(&(&full * &ordered) * &full.adjoint());
        }
        let mut factors = ch.output.clone();
        factors.extend(rest);
        (factors, acc)
    };
    let p = out.trace().re;
    if ch.conditional {
        if p <= 0.0 {
            return Err(Error::InvalidParameter("conditional channel has zero success probability"));
        }
        let state = QuantumState::density_normalized(factors, out)?;
        Ok(ChannelOutput { state, probability: p.min(1.0) })
    } else {
        let state = QuantumState::density(factors, out.hermitian_part())?;
        Ok(ChannelOutput { state, probability: 1.0 })
    }
}

/// Choi matrix J = (Φ ⊗ id)(|Ω⟩⟨Ω|), output factor first, with |Ω⟩ the
/// normalized maximally entangled state on input ⊗ reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: CMatrix,
    out_dim: usize,
    in_dim: usize,
    conditional: bool,
}

impl ChoiMatrix {
    /// Wraps an explicit matrix (for instance one read from a file).
    pub fn from_matrix(matrix: CMatrix, out_dim: usize, in_dim: usize, conditional: bool) -> Result<Self> {
        if matrix.rows() != out_dim * in_dim || !matrix.is_square() {
            return Err(Error::DimensionMismatch);
        }
        Ok(Self { matrix, out_dim, in_dim, conditional })
    }

    /// Choi matrix of an arbitrary linear map on operators.
    pub fn from_linear_map(
        in_dim: usize,
        out_dim: usize,
        conditional: bool,
        mut map: impl FnMut(&CMatrix) -> Result<CMatrix>,
    ) -> Result<Self> {
        let d = out_dim * in_dim;
        let mut j = CMatrix::zeros(d, d);
        let w = re(1.0 / in_dim as f64);
        for a in 0..in_dim {
            for b in 0..in_dim {
                let mut e = CMatrix::zeros(in_dim, in_dim);
                e[(a, b)] = re(1.0);
                let phi = map(&e)?;
                if phi.rows() != out_dim || phi.cols() != out_dim {
                    return Err(Error::DimensionMismatch);
                }
                for r in 0..out_dim {
                    for c in 0..out_dim {
                        j[(r * in_dim + a, c * in_dim + b)] += phi[(r, c)] * w;
                    }
                }
            }
        }
        Ok(Self { matrix: j, out_dim, in_dim, conditional })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn is_conditional(&self) -> bool {
        self.conditional
    }

    /// Trace-normalized copy (unit trace), the post-selected process.
    pub fn normalized(&self) -> Self {
        let t = self.matrix.trace().re;
        let s = if t > 0.0 { 1.0 / t } else { 0.0 };
        Self { matrix: self.matrix.scale(re(s)), ..self.clone() }
    }

    /// Tr_out J, an operator on the reference.
    pub fn reference_marginal(&self) -> CMatrix {
        let targets = [1usize];
        reduce(&self.matrix, &[self.out_dim, self.in_dim], &targets)
    }

    /// Applies the encoded map to an input operator: Φ(X) = d·Tr_ref[J (1 ⊗ Xᵀ)].
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let (o, n) = (self.out_dim, self.in_dim);
        CMatrix::from_fn(o, o, |r, c| {
            let mut s = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    s += self.matrix[(r * n + a, c * n + b)] * x[(a, b)];
                }
            }
            s * n as f64
        })
    }
}

/// Outcome of [`is_cptp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpVerdict {
    pub cptp: bool,
    pub min_eigenvalue: f64,
    /// Largest deviation of Tr_out J from 1/d (for conditional maps, the
    /// largest violation of Tr_out J ≤ 1/d; zero when satisfied).
    pub trace_deviation: f64,
}

/// Complete positivity (J ⪰ -tol) and trace preservation (Tr_out J = 1/d,
/// or ≤ 1/d for conditional maps) within `tol`.
pub fn is_cptp(choi: &ChoiMatrix, tol: f64) -> CptpVerdict {
    let min_eigenvalue = choi.matrix.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
    let hermitian = choi.matrix.is_hermitian(tol.max(ALGEBRAIC_TOL));
    let marginal = choi.reference_marginal();
    let target = CMatrix::identity(choi.in_dim).scale(re(1.0 / choi.in_dim as f64));
    let trace_deviation = if choi.conditional {
        let slack = &target - &marginal;
        (-slack.hermitian_eigenvalues().first().copied().unwrap_or(0.0)).max(0.0)
    } else {
        marginal.max_abs_diff(&target)
    };
    CptpVerdict { cptp: hermitian && min_eigenvalue >= -tol && trace_deviation <= tol, min_eigenvalue, trace_deviation }
}

/// Choi matrix of a Kraus channel on a single input factor.
pub fn choi_matrix(ch: &QuantumChannel) -> ChoiMatrix {
    let din: usize = ch.input.iter().map(|f| f.dim()).product();
    let dout: usize = ch.output.iter().map(|f| f.dim()).product();
    ChoiMatrix::from_linear_map(din, dout, ch.conditional, |x| Ok(ch.map_operator(x)))
        .unwrap_or_else(|_| unreachable!("Kraus dimensions checked at construction"))
}

/// ⟨Ω|J|Ω⟩ / Tr J: overlap of the (post-selected) process with the
/// identity channel.
pub fn process_fidelity(choi: &ChoiMatrix) -> Result<f64> {
    if choi.out_dim != choi.in_dim {
        return Err(Error::DimensionMismatch);
    }
    let d = choi.in_dim;
    let mut omega = alloc::vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        omega[i * d + i] = re(1.0 / libm::sqrt(d as f64));
    }
    let t = choi.matrix.trace().re;
    if t <= 0.0 {
        return Err(Error::InvalidState("zero-trace Choi matrix"));
    }
    let v = crate::linalg::inner(&omega, &choi.matrix.mul_vec(&omega)).re;
    Ok((v / t).clamp(0.0, 1.0))
}

/// Applies a unitary to one factor, keeping a pure state pure.
pub fn apply_local_unitary(state: &QuantumState, label: FactorLabel, u: &CMatrix) -> Result<QuantumState> {
    let p = state.position(label)?;
    let d = state.factors()[p].dim();
    if u.rows() != d || u.cols() != d {
        return Err(Error::DimensionMismatch);
    }
    if !u.is_unitary(COMPLETENESS_TOL) {
        return Err(Error::NotTracePreserving);
    }
    let idx = LocalIndex::new(&state.dims(), &[p]);
    match state.amplitudes() {
        Some(v) => QuantumState::pure_normalized(state.factors().to_vec(), idx.apply_vec(u, v)),
        None => QuantumState::density_normalized(state.factors().to_vec(), idx.conjugate(u, &state.density_matrix())),
    }
}

/// Kraus operators for a full dephasing of one qubit factor in its
/// computational basis.
pub fn full_dephasing(factor: HilbertFactor) -> Result<QuantumChannel> {
    let p0 = CMatrix::diag(&[re(1.0), re(0.0)]);
    let p1 = CMatrix::diag(&[re(0.0), re(1.0)]);
    QuantumChannel::on(factor, alloc::vec![p0, p1], false)
}

/// Convenience: labels of a factor list.
pub fn labels(factors: &[HilbertFactor]) -> Vec<FactorLabel> {
    factors.iter().map(|f| f.label()).collect()
}
