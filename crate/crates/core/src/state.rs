//! Partitioned quantum states and the dense linear algebra they need.
//!
//! States live on an ordered list of parties with local dimensions
//! `d_0, …, d_{n-1}`. The global index convention is party-major: party 0 is
//! the slowest index, so for qubits `|i_0 i_1 … i_{n-1}⟩` maps to the integer
//! with `i_0` as the most significant bit. Every operation in the crate uses
//! this one convention.
//!
//! Validation is strict. A [`DensityState`] must be Hermitian, unit trace and
//! positive semidefinite within fixed tolerances; violations are rejected at
//! construction rather than clipped.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Max elementwise |M - M†| accepted for a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// |tr ρ - 1| accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// |‖ψ‖ - 1| accepted for a pure state.
pub const NORM_TOL: f64 = 1e-12;
/// Eigenvalues below this floor reject the state as non-positive.
pub const PSD_FLOOR: f64 = -1e-10;

/// Ordered local dimensions of the parties.
///
/// The empty list is reserved for the scalar (fully traced-out) space and is
/// only constructible through [`PartyDims::scalar`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyDims {
    dims: Vec<usize>,
    total: usize,
}

impl PartyDims {
    /// Validates that the list is nonempty and every `d_j >= 2`.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("party list is empty".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!(
                "every local dimension must be >= 2, got {d}"
            )));
        }
        let total = dims.iter().product();
        Ok(Self { dims, total })
    }

    /// `n` qubit parties.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// The one-dimensional space left after tracing out every party.
    pub fn scalar() -> Self {
        Self { dims: Vec::new(), total: 1 }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn is_scalar(&self) -> bool {
        self.dims.is_empty()
    }

    /// Party-major strides: `stride[j] = Π_{k>j} d_k`.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut s = vec![1usize; n];
        for j in (0..n.saturating_sub(1)).rev() {
            s[j] = s[j + 1] * self.dims[j + 1];
        }
        s
    }
}

/// A set of party indices, kept sorted, with the product of their dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartySubset {
    indices: Vec<usize>,
    d_alpha: usize,
}

impl PartySubset {
    /// Validates that the indices are nonempty, in range and free of
    /// duplicates. Input order does not matter; indices are stored sorted.
    pub fn new(indices: &[usize], dims: &PartyDims) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSubset("subset is empty".into()));
        }
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("duplicate party index in {sorted:?}")));
        }
        let n = dims.n_parties();
        if *sorted.last().unwrap() >= n {
            return Err(Error::InvalidSubset(format!(
                "party index {} out of range for {} parties",
                sorted.last().unwrap(),
                n
            )));
        }
        let d_alpha = sorted.iter().map(|&p| dims.dims()[p]).product();
        Ok(Self { indices: sorted, d_alpha })
    }

    pub fn singleton(party: usize, dims: &PartyDims) -> Result<Self> {
        Self::new(&[party], dims)
    }

    /// All parties of the state.
    pub fn full(dims: &PartyDims) -> Self {
        Self {
            indices: (0..dims.n_parties()).collect(),
            d_alpha: dims.total_dim(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn d_alpha(&self) -> usize {
        self.d_alpha
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_full(&self, dims: &PartyDims) -> bool {
        self.indices.len() == dims.n_parties()
    }

    pub fn complement_indices(&self, dims: &PartyDims) -> Vec<usize> {
        (0..dims.n_parties()).filter(|p| !self.indices.contains(p)).collect()
    }

    /// Checks that the subset was built against dimensions compatible with
    /// `dims` (index range and recorded `d_alpha`).
    pub(crate) fn check_against(&self, dims: &PartyDims) -> Result<()> {
        let n = dims.n_parties();
        if self.indices.iter().any(|&p| p >= n) {
            return Err(Error::InvalidSubset(format!(
                "subset {:?} out of range for {} parties",
                self.indices, n
            )));
        }
        let d: usize = self.indices.iter().map(|&p| dims.dims()[p]).product();
        if d != self.d_alpha {
            return Err(Error::InvalidSubset(format!(
                "subset dimension {} does not match state dimensions (expected {d})",
                self.d_alpha
            )));
        }
        Ok(())
    }
}

/// Linear-index offsets contributed by every joint configuration of
/// `parties`, enumerated party-major (first listed party slowest).
pub(crate) fn subset_offsets(dims: &PartyDims, parties: &[usize]) -> Vec<usize> {
    let strides = dims.strides();
    let mut offs = vec![0usize];
    for &p in parties {
        let d = dims.dims()[p];
        let s = strides[p];
        let mut next = Vec::with_capacity(offs.len() * d);
        for &o in &offs {
            for a in 0..d {
                next.push(o + a * s);
            }
        }
        offs = next;
    }
    offs
}

/// Partial trace over `traced` parties of a raw matrix on `dims`.
///
/// Returns the dimensions of the remaining parties (scalar when everything is
/// traced out) and the reduced matrix.
pub(crate) fn partial_trace_raw(
    m: &CMatrix,
    dims: &PartyDims,
    traced: &[usize],
) -> (PartyDims, CMatrix) {
    let kept: Vec<usize> = (0..dims.n_parties()).filter(|p| !traced.contains(p)).collect();
    let offs_k = subset_offsets(dims, &kept);
    let offs_t = subset_offsets(dims, traced);
    let dk = offs_k.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (i, &oi) in offs_k.iter().enumerate() {
        for (j, &oj) in offs_k.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &ot in &offs_t {
                acc += m[(oi + ot, oj + ot)];
            }
            out[(i, j)] = acc;
        }
    }
    let kept_dims = if kept.is_empty() {
        PartyDims::scalar()
    } else {
        PartyDims {
            dims: kept.iter().map(|&p| dims.dims()[p]).collect(),
            total: dk,
        }
    };
    (kept_dims, out)
}

/// Places `m_keep` (living on the complement of `alpha`) back into the full
/// space with the identity on the `alpha` slots, party order preserved.
pub(crate) fn embed_with_identity(dims: &PartyDims, alpha: &[usize], m_keep: &CMatrix) -> CMatrix {
    let kept: Vec<usize> = (0..dims.n_parties()).filter(|p| !alpha.contains(p)).collect();
    let offs_k = subset_offsets(dims, &kept);
    let offs_a = subset_offsets(dims, alpha);
    debug_assert_eq!(m_keep.nrows(), offs_k.len());
    let d = dims.total_dim();
    let mut out = CMatrix::zeros(d, d);
    for &oa in &offs_a {
        for (i, &oi) in offs_k.iter().enumerate() {
            for (j, &oj) in offs_k.iter().enumerate() {
                out[(oa + oi, oa + oj)] = m_keep[(i, j)];
            }
        }
    }
    out
}

/// tr[A B] without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub(crate) fn symmetrize(m: &mut CMatrix) {
    let adj = m.adjoint();
    *m += adj;
    *m *= Complex64::new(0.5, 0.0);
}

pub(crate) fn max_hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized first; floating-point drift in channel outputs
/// would otherwise break the Hermitian solver.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let mut h = m.clone();
    symmetrize(&mut h);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 100_000).ok_or(Error::EigenFailed)?;
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &eig.eigenvectors.column(old));
    }
    Ok((vals, vecs))
}

/// A normalized pure state over partitioned parties.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedPureState {
    dims: PartyDims,
    amplitudes: CVector,
}

impl PartitionedPureState {
    /// Length must equal the total dimension and the Euclidean norm must be 1
    /// within [`NORM_TOL`].
    pub fn new(dims: PartyDims, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dims.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: dims.total_dim(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NormViolation { norm, tol: NORM_TOL });
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> &PartyDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// The projector |ψ⟩⟨ψ| as a density state.
    pub fn to_density(&self) -> DensityState {
        let d = self.dims.total_dim();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityState::from_valid_parts(self.dims.clone(), m)
    }
}

/// A density matrix over partitioned parties.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    dims: PartyDims,
    matrix: CMatrix,
}

impl DensityState {
    /// Full validation: shape, Hermiticity within [`HERMITICITY_TOL`], unit
    /// trace within [`TRACE_TOL`], eigenvalues above [`PSD_FLOOR`].
    pub fn new(dims: PartyDims, matrix: CMatrix) -> Result<Self> {
        let d = dims.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: matrix.nrows() });
        }
        let dev = max_hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.diagonal().iter().sum::<Complex64>();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::TraceViolation { trace: tr.re, tol: TRACE_TOL });
        }
        let mut m = matrix;
        symmetrize(&mut m);
        let (vals, _) = hermitian_eigen(&m)?;
        if vals[0] < PSD_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue: vals[0] });
        }
        Ok(Self { dims, matrix: m })
    }

    /// Construction path for outputs that are valid by arithmetic identity
    /// (channel outputs, partial traces, tensor products). Symmetrizes and,
    /// in debug builds, re-checks the invariants.
    pub(crate) fn from_valid_parts(dims: PartyDims, mut matrix: CMatrix) -> Self {
        symmetrize(&mut matrix);
        debug_assert!(max_hermiticity_deviation(&matrix) <= HERMITICITY_TOL);
        debug_assert!(
            (matrix.diagonal().iter().sum::<Complex64>().re - 1.0).abs() <= 1e-10,
            "trace drifted from 1"
        );
        Self { dims, matrix }
    }

    pub fn maximally_mixed(dims: PartyDims) -> Self {
        let d = dims.total_dim();
        let m = CMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
        Self { dims, matrix: m }
    }

    /// Convex mixture Σ wᵢ ρᵢ. Weights must be nonnegative; the unit-sum
    /// requirement is enforced through the trace check of the result.
    pub fn mixture(components: &[(f64, DensityState)]) -> Result<Self> {
        let (w0, first) = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("mixture of zero components".into()))?;
        if components.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::InvalidParameter("negative mixture weight".into()));
        }
        let dims = first.dims.clone();
        let mut m = first.matrix.clone() * Complex64::new(*w0, 0.0);
        for (w, rho) in &components[1..] {
            if rho.dims != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims.total_dim(),
                    actual: rho.dims.total_dim(),
                });
            }
            m += rho.matrix.clone() * Complex64::new(*w, 0.0);
        }
        Self::new(dims, m)
    }

    pub fn dims(&self) -> &PartyDims {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    /// tr[ρ²] ∈ [1/D, 1]; 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.norm_squared()
    }

    /// tr[ρσ], real for Hermitian arguments.
    pub fn overlap(&self, other: &DensityState) -> Result<f64> {
        if self.dims.total_dim() != other.dims.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total_dim(),
                actual: other.dims.total_dim(),
            });
        }
        Ok(trace_product(&self.matrix, &other.matrix).re)
    }

    /// Traces out the given parties, returning the state of the rest
    /// (the scalar state when every party is traced).
    pub fn partial_trace(&self, traced: &PartySubset) -> Result<DensityState> {
        traced.check_against(&self.dims)?;
        let (dims, m) = partial_trace_raw(&self.matrix, &self.dims, traced.indices());
        Ok(DensityState::from_valid_parts(dims, m))
    }

    /// The reduced state on `keep`, i.e. the partial trace over its
    /// complement.
    pub fn reduced_to(&self, keep: &PartySubset) -> Result<DensityState> {
        keep.check_against(&self.dims)?;
        let traced = keep.complement_indices(&self.dims);
        let (dims, m) = partial_trace_raw(&self.matrix, &self.dims, &traced);
        Ok(DensityState::from_valid_parts(dims, m))
    }

    /// Kronecker product; `self`'s parties come first in the party order.
    pub fn tensor(&self, other: &DensityState) -> DensityState {
        let mut dims = self.dims.dims().to_vec();
        dims.extend_from_slice(other.dims.dims());
        let dims = if dims.is_empty() {
            PartyDims::scalar()
        } else {
            PartyDims { total: self.dims.total_dim() * other.dims.total_dim(), dims }
        };
        let m = self.matrix.kronecker(&other.matrix);
        DensityState::from_valid_parts(dims, m)
    }

    /// Uhlmann fidelity F(ρ,σ) = tr√(√σ ρ √σ), in [0, 1].
    pub fn fidelity(&self, other: &DensityState) -> Result<f64> {
        if self.dims.dims() != other.dims.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total_dim(),
                actual: other.dims.total_dim(),
            });
        }
        let (vals, vecs) = hermitian_eigen(&other.matrix)?;
        let d = vals.len();
        let mut sqrt_sigma = CMatrix::zeros(d, d);
        for k in 0..d {
            let s = Complex64::new(vals[k].max(0.0).sqrt(), 0.0);
            let col = vecs.column(k);
            for i in 0..d {
                for j in 0..d {
                    sqrt_sigma[(i, j)] += s * col[i] * col[j].conj();
                }
            }
        }
        let mut inner = &sqrt_sigma * &self.matrix * &sqrt_sigma;
        symmetrize(&mut inner);
        let (ivals, _) = hermitian_eigen(&inner)?;
        Ok(ivals.iter().map(|&l| l.max(0.0).sqrt()).sum::<f64>().min(1.0))
    }
}

/// The named state families used throughout the test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFamily {
    Ghz,
    W,
    Product,
}

/// Constructs a named qubit state.
///
/// * `Ghz`: √w·|0…0⟩ + √(1−w)·|1…1⟩, so `w` is the weight of the all-zeros
///   branch.
/// * `W`: w·|10…0⟩ + μ·(|010…0⟩ + … + |0…01⟩) with μ = √((1−w²)/(n−1));
///   here `w` is an amplitude, normalized as w² + (n−1)μ² = 1.
/// * `Product`: |0⟩^⊗n, ignoring `w`.
pub fn named_state(family: StateFamily, n_parties: usize, weight: f64) -> Result<PartitionedPureState> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidParameter(format!(
            "state weight must lie in [0, 1], got {weight}"
        )));
    }
    let min_parties = match family {
        StateFamily::Product => 1,
        _ => 2,
    };
    if n_parties < min_parties {
        return Err(Error::InvalidParameter(format!(
            "{family:?} requires at least {min_parties} parties, got {n_parties}"
        )));
    }
    let dims = PartyDims::qubits(n_parties)?;
    let d = dims.total_dim();
    let mut amps = CVector::zeros(d);
    match family {
        StateFamily::Ghz => {
            amps[0] = Complex64::new(weight.sqrt(), 0.0);
            amps[d - 1] = Complex64::new((1.0 - weight).sqrt(), 0.0);
        }
        StateFamily::W => {
            // single-excitation basis states sit at the party strides
            let mu2 = ((1.0 - weight * weight) / (n_parties - 1) as f64).sqrt();
            amps[d / 2] = Complex64::new(weight, 0.0);
            for j in 1..n_parties {
                amps[1 << (n_parties - 1 - j)] = Complex64::new(mu2, 0.0);
            }
        }
        StateFamily::Product => {
            amps[0] = Complex64::new(1.0, 0.0);
        }
    }
    // renormalize the last component against fp drift in sqrt arithmetic
    let norm = amps.norm();
    amps /= Complex64::new(norm, 0.0);
    PartitionedPureState::new(dims, amps)
}

fn standard_normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // Box-Muller; u1 shifted into (0, 1] to keep the log finite
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

pub(crate) fn random_state_vector(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
    loop {
        let mut v = CVector::zeros(dim);
        for i in 0..dim {
            let (re, im) = standard_normal_pair(rng);
            v[i] = Complex64::new(re, im);
        }
        let norm = v.norm();
        if norm > 1e-100 {
            v /= Complex64::new(norm, 0.0);
            return v;
        }
    }
}

/// Haar-random pure state: complex standard-normal amplitudes, normalized.
/// Deterministic for a fixed seed (ChaCha8 stream).
pub fn random_pure_state(dims: &PartyDims, seed: u64) -> PartitionedPureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_state_vector(&mut rng, dims.total_dim());
    PartitionedPureState { dims: dims.clone(), amplitudes: v }
}

/// Ginibre matrix followed by a phase-fixed thin QR; Haar for square shapes,
/// uniform isometry for tall shapes.
pub(crate) fn random_isometry_with(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut g = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let (re, im) = standard_normal_pair(rng);
            g[(i, j)] = Complex64::new(re, im);
        }
    }
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..cols {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 1e-300 { rkk / rkk.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..rows {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Haar-random unitary, deterministic for a fixed seed.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_isometry_with(&mut rng, dim, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> PartitionedPureState {
        named_state(StateFamily::Ghz, 2, 0.5).unwrap()
    }

    #[test]
    fn ghz_amplitudes_match_branch_weights() {
        let s = named_state(StateFamily::Ghz, 3, 0.5).unwrap();
        let a = s.amplitudes();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        assert_relative_eq!(a[0].re, inv_sqrt2, epsilon = 1e-15);
        assert_relative_eq!(a[7].re, inv_sqrt2, epsilon = 1e-15);
        for i in 1..7 {
            assert_eq!(a[i], c(0.0, 0.0));
        }
    }

    #[test]
    fn degenerate_ghz_is_all_zeros() {
        let s = named_state(StateFamily::Ghz, 3, 1.0).unwrap();
        assert_relative_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.amplitudes().norm(), 1.0, epsilon = 1e-15);
        assert_eq!(s.amplitudes()[7], c(0.0, 0.0));
    }

    #[test]
    fn symmetric_w_state_has_equal_amplitudes() {
        let s = named_state(StateFamily::W, 3, 1.0 / 3.0f64.sqrt()).unwrap();
        let a = s.amplitudes();
        let expect = 1.0 / 3.0f64.sqrt();
        // |100⟩ = index 4, |010⟩ = index 2, |001⟩ = index 1 (party-major)
        for idx in [4usize, 2, 1] {
            assert_relative_eq!(a[idx].re, expect, epsilon = 1e-15);
        }
        assert_eq!(a[0], c(0.0, 0.0));
        assert_eq!(a[7], c(0.0, 0.0));
    }

    #[test]
    fn named_state_rejects_bad_parameters() {
        assert!(named_state(StateFamily::Ghz, 3, 1.5).is_err());
        assert!(named_state(StateFamily::Ghz, 3, -0.1).is_err());
        assert!(named_state(StateFamily::Ghz, 1, 0.5).is_err());
        assert!(named_state(StateFamily::W, 1, 0.5).is_err());
        assert!(named_state(StateFamily::Product, 1, 0.0).is_ok());
    }

    #[test]
    fn bell_partial_trace_is_maximally_mixed() {
        let rho = bell().to_density();
        let dims = rho.dims().clone();
        let traced = PartySubset::singleton(1, &dims).unwrap();
        let red = rho.partial_trace(&traced).unwrap();
        assert_eq!(red.dims().dims(), &[2]);
        assert_relative_eq!(red.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(red.matrix()[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(red.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn product_partial_trace_factorizes() {
        let dims = PartyDims::qubits(2).unwrap();
        let mut amps = CVector::zeros(4);
        amps[0] = c(1.0, 0.0);
        let rho = PartitionedPureState::new(dims.clone(), amps).unwrap().to_density();
        let traced = PartySubset::singleton(0, &dims).unwrap();
        let red = rho.partial_trace(&traced).unwrap();
        assert_relative_eq!(red.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(red.matrix()[(1, 1)].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_two_party_trace_leaves_classical_bit() {
        let rho = named_state(StateFamily::Ghz, 3, 0.5).unwrap().to_density();
        let traced = PartySubset::new(&[1, 2], rho.dims()).unwrap();
        let red = rho.partial_trace(&traced).unwrap();
        assert_relative_eq!(red.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(red.matrix()[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(red.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn tracing_all_parties_in_sequence_yields_unit_scalar() {
        let rho = named_state(StateFamily::Ghz, 3, 0.5).unwrap().to_density();
        let first = rho.partial_trace(&PartySubset::new(&[0, 2], rho.dims()).unwrap()).unwrap();
        let scalar = first.partial_trace(&PartySubset::full(first.dims())).unwrap();
        assert!(scalar.dims().is_scalar());
        assert_relative_eq!(scalar.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn purity_of_known_states() {
        let dims = PartyDims::qubits(1).unwrap();
        let mixed = DensityState::maximally_mixed(dims.clone());
        assert_relative_eq!(mixed.purity(), 0.5, epsilon = 1e-12);

        let pure = named_state(StateFamily::Product, 2, 0.0).unwrap().to_density();
        assert_relative_eq!(pure.purity(), 1.0, epsilon = 1e-12);

        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(2.0 / 3.0, 0.0);
        m[(1, 1)] = c(1.0 / 3.0, 0.0);
        let rho = DensityState::new(dims, m).unwrap();
        assert_relative_eq!(rho.purity(), 5.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_limits_and_pure_formula() {
        let rho = named_state(StateFamily::Ghz, 3, 0.5).unwrap().to_density();
        assert_relative_eq!(rho.fidelity(&rho).unwrap(), 1.0, epsilon = 1e-10);

        let zero = named_state(StateFamily::Product, 1, 0.0).unwrap().to_density();
        let dims = PartyDims::qubits(1).unwrap();
        let mut amps = CVector::zeros(2);
        amps[1] = c(1.0, 0.0);
        let one = PartitionedPureState::new(dims, amps).unwrap().to_density();
        assert_relative_eq!(zero.fidelity(&one).unwrap(), 0.0, epsilon = 1e-10);

        let mixed = DensityState::maximally_mixed(PartyDims::qubits(3).unwrap());
        assert_relative_eq!(rho.fidelity(&mixed).unwrap(), (1.0f64 / 8.0).sqrt(), epsilon = 1e-10);
        // symmetric in the arguments
        assert_relative_eq!(
            mixed.fidelity(&rho).unwrap(),
            (1.0f64 / 8.0).sqrt(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn fidelity_rejects_mismatched_dims() {
        let a = named_state(StateFamily::Ghz, 2, 0.5).unwrap().to_density();
        let b = named_state(StateFamily::Ghz, 3, 0.5).unwrap().to_density();
        assert!(a.fidelity(&b).is_err());
    }

    #[test]
    fn tensor_product_examples() {
        let half = DensityState::maximally_mixed(PartyDims::qubits(1).unwrap());
        let zero = named_state(StateFamily::Product, 1, 0.0).unwrap().to_density();
        let t = half.tensor(&zero);
        for (i, expect) in [(0usize, 0.5), (1, 0.0), (2, 0.5), (3, 0.0)] {
            assert_relative_eq!(t.matrix()[(i, i)].re, expect, epsilon = 1e-12);
        }

        let scalar = DensityState::from_valid_parts(
            PartyDims::scalar(),
            CMatrix::identity(1, 1),
        );
        let back = zero.tensor(&scalar);
        assert_eq!(back.dims().dims(), &[2]);
        assert_relative_eq!(back.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);

        let dims = PartyDims::qubits(1).unwrap();
        let mut amps = CVector::zeros(2);
        amps[1] = c(1.0, 0.0);
        let one = PartitionedPureState::new(dims, amps).unwrap().to_density();
        let zo = zero.tensor(&one);
        // |01⟩⟨01| sits at index 1
        assert_relative_eq!(zo.matrix()[(1, 1)].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(zo.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_pure_state_is_deterministic_and_normalized() {
        let dims = PartyDims::qubits(3).unwrap();
        let a = random_pure_state(&dims, 7);
        let b = random_pure_state(&dims, 7);
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert!((a.amplitudes().norm() - 1.0).abs() < 1e-12);
        let c_ = random_pure_state(&dims, 8);
        assert_ne!(a.amplitudes(), c_.amplitudes());
    }

    // Haar average of the single-qubit marginal purity of a two-qubit pure
    // state is (d_A + d_B)/(d_A d_B + 1) = 4/5; sampled here as an
    // independent check on the generator.
    #[test]
    fn haar_marginal_purity_matches_ensemble_average() {
        let dims = PartyDims::qubits(2).unwrap();
        let traced = PartySubset::singleton(1, &dims).unwrap();
        let n = 10_000;
        let mut acc = 0.0;
        for seed in 0..n {
            let psi = random_pure_state(&dims, seed);
            let red = psi.to_density().partial_trace(&traced).unwrap();
            acc += red.purity();
        }
        let mean = acc / n as f64;
        assert!((mean - 0.8).abs() < 0.02, "mean marginal purity {mean}, expected 0.8");
    }

    #[test]
    fn density_state_rejects_invalid_matrices() {
        let dims = PartyDims::qubits(1).unwrap();
        let mut non_herm = CMatrix::zeros(2, 2);
        non_herm[(0, 0)] = c(0.5, 0.0);
        non_herm[(1, 1)] = c(0.5, 0.0);
        non_herm[(0, 1)] = c(0.3, 0.0);
        assert!(matches!(
            DensityState::new(dims.clone(), non_herm),
            Err(Error::NotHermitian { .. })
        ));

        let bad_trace = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityState::new(dims.clone(), bad_trace),
            Err(Error::TraceViolation { .. })
        ));

        let mut indefinite = CMatrix::zeros(2, 2);
        indefinite[(0, 0)] = c(1.5, 0.0);
        indefinite[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(
            DensityState::new(dims, indefinite),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn pure_state_rejects_norm_violation() {
        let dims = PartyDims::qubits(1).unwrap();
        let mut amps = CVector::zeros(2);
        amps[0] = c(0.9, 0.0);
        assert!(matches!(
            PartitionedPureState::new(dims, amps),
            Err(Error::NormViolation { .. })
        ));
    }

    #[test]
    fn subset_validation() {
        let dims = PartyDims::qubits(3).unwrap();
        assert!(PartySubset::new(&[], &dims).is_err());
        assert!(PartySubset::new(&[3], &dims).is_err());
        assert!(PartySubset::new(&[1, 1], &dims).is_err());
        let s = PartySubset::new(&[2, 0], &dims).unwrap();
        assert_eq!(s.indices(), &[0, 2]);
        assert_eq!(s.d_alpha(), 4);
        assert_eq!(s.complement_indices(&dims), vec![1]);
    }

    #[test]
    fn random_unitary_is_unitary_and_seeded() {
        let u = random_unitary(4, 3);
        let eye = u.adjoint() * &u;
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((eye[(i, j)] - c(expect, 0.0)).norm() < 1e-12);
            }
        }
        assert_eq!(random_unitary(4, 3), u);
    }
}
