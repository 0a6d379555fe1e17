//! State containers, index bookkeeping and basic multipartite operations.

mod decomposition;
pub mod io;
mod local;
mod named;
mod ops;

pub(crate) use decomposition::spectral_columns;
pub use decomposition::{mix_decomposition, Decomposition};
pub(crate) use local::apply_factor_to_columns;
pub use local::{apply_local_mixed, apply_local_operator, apply_local_pure, LocalOperator, OperatorKind, Transformed};
pub use named::{named_state, NamedState};
pub use ops::{
    bipartite_matrix, partial_trace, partial_trace_pure, partial_transpose, partial_transpose_block,
    random_density_matrix, random_pure_state, random_pure_state_with, reduced_purity, regroup, tensor_product,
};

use crate::error::{invalid, mismatch, Error, Result};
use crate::linalg::{self, eigh, re};
use crate::{CMat, CVec, C64};

/// Tolerance on norms, traces and Hermiticity at construction.
pub const STATE_TOL: f64 = 1e-9;

pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Mixed-radix digits of `index`, first party most significant.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (j, &d) in dims.iter().enumerate().rev() {
        out[j] = index % d;
        index /= d;
    }
    out
}

pub fn join_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

pub(crate) fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return invalid(format!("party dimensions must be ≥ 2, got {dims:?}"));
    }
    if total_dim(dims) > 4096 {
        return Err(Error::Unsupported(format!("total dimension {} exceeds 4096", total_dim(dims))));
    }
    Ok(())
}

pub(crate) fn check_party(j: usize, n: usize) -> Result<()> {
    if j >= n {
        Err(Error::InvalidParty { index: j, parties: n })
    } else {
        Ok(())
    }
}

/// Pure state: amplitude vector plus ordered party dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: CVec,
    dims: Vec<usize>,
    normalized: bool,
}

impl PureState {
    /// Requires unit norm within [`STATE_TOL`].
    pub fn new(amps: impl Into<CVec>, dims: &[usize]) -> Result<Self> {
        let s = Self::new_unnormalized(amps, dims)?;
        let n = s.amps.norm();
        if (n - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { normalized: true, ..s })
    }

    /// Any nonzero vector, flagged as unnormalized.
    pub fn new_unnormalized(amps: impl Into<CVec>, dims: &[usize]) -> Result<Self> {
        let amps = amps.into();
        check_dims(dims)?;
        if amps.len() != total_dim(dims) {
            return mismatch(format!("{} amplitudes for dims {dims:?}", amps.len()));
        }
        if amps.norm() == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self { amps, dims: dims.to_vec(), normalized: false })
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalizing(amps: impl Into<CVec>, dims: &[usize]) -> Result<Self> {
        Ok(Self::new_unnormalized(amps, dims)?.normalized())
    }

    pub fn from_reals(amps: &[f64], dims: &[usize]) -> Result<Self> {
        Self::normalizing(CVec::from_iterator(amps.len(), amps.iter().map(|&x| re(x))), dims)
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        if digits.len() != dims.len() || digits.iter().zip(dims).any(|(&x, &d)| x >= d) {
            return invalid(format!("basis digits {digits:?} do not fit dims {dims:?}"));
        }
        let mut v = CVec::zeros(total_dim(dims));
        v[join_digits(digits, dims)] = linalg::ONE;
        Self::new(v, dims)
    }

    pub(crate) fn from_parts(amps: CVec, dims: Vec<usize>, normalized: bool) -> Self {
        Self { amps, dims, normalized }
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn amp(&self, digits: &[usize]) -> C64 {
        self.amps[join_digits(digits, &self.dims)]
    }

    pub fn normalized(&self) -> Self {
        let n = self.amps.norm();
        Self { amps: &self.amps / re(n), dims: self.dims.clone(), normalized: true }
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// `|ψ⟩⟨ψ|`, carrying over the normalization flag.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(linalg::outer(&self.amps), self.dims.clone(), self.normalized)
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }
}

/// Density matrix with party dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
    dims: Vec<usize>,
    normalized: bool,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace. Eigenvalues in
    /// `[-1e-9, 0)` are clipped to zero.
    pub fn new(mat: CMat, dims: &[usize]) -> Result<Self> {
        let s = Self::new_unnormalized(mat, dims)?;
        let t = s.trace();
        if (t - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(t));
        }
        Ok(Self { normalized: true, ..s })
    }

    /// Positive semidefinite matrix of arbitrary trace, flagged unnormalized.
    pub fn new_unnormalized(mat: CMat, dims: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        let n = total_dim(dims);
        if mat.nrows() != n || mat.ncols() != n {
            return mismatch(format!("{}×{} matrix for dims {dims:?}", mat.nrows(), mat.ncols()));
        }
        let herr = linalg::hermiticity_error(&mat);
        if herr > STATE_TOL {
            return Err(Error::NotHermitian(herr));
        }
        let h = linalg::hermitian_part(&mat);
        let (vals, vecs) = eigh(&h);
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::NotPositive(min));
        }
        let mat = if min < 0.0 {
            let d = CVec::from_iterator(n, vals.iter().map(|&x| re(x.max(0.0))));
            &vecs * CMat::from_diagonal(&d) * vecs.adjoint()
        } else {
            h
        };
        Ok(Self { mat, dims: dims.to_vec(), normalized: false })
    }

    pub(crate) fn from_parts(mat: CMat, dims: Vec<usize>, normalized: bool) -> Self {
        Self { mat, dims, normalized }
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        let n = total_dim(dims);
        Ok(Self::from_parts(linalg::identity(n) / re(n as f64), dims.to_vec(), true))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.to_density()
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return invalid("empty mixture");
        };
        if parts.iter().any(|(w, _)| *w < 0.0) {
            return invalid("negative mixing weight");
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return invalid(format!("mixing weights sum to {total}"));
        }
        let mut m = CMat::zeros(first.dim(), first.dim());
        for (w, r) in parts {
            if r.dims != first.dims {
                return mismatch("mixture of states with different dims");
            }
            m += r.matrix() * re(*w);
        }
        Ok(Self::from_parts(m, first.dims.clone(), parts.iter().all(|(_, r)| r.normalized)))
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.mat).re
    }

    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.mat)
    }

    /// Number of eigenvalues above `tol · λ_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let v = self.eigenvalues();
        let top = v.first().copied().unwrap_or(0.0).max(0.0);
        v.iter().filter(|&&x| x > tol * top).count()
    }

    pub fn element(&self, row: &[usize], col: &[usize]) -> C64 {
        self.mat[(join_digits(row, &self.dims), join_digits(col, &self.dims))]
    }

    /// Copy divided by its trace.
    pub fn normalized(&self) -> Self {
        let t = self.trace();
        Self::from_parts(&self.mat / re(t), self.dims.clone(), true)
    }

    /// `λ ρ`, flagged unnormalized unless `λ = 1`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self::from_parts(&self.mat * re(lambda), self.dims.clone(), self.normalized && lambda == 1.0)
    }

    /// Eigenvector of the largest eigenvalue, scaled so that its norm² equals
    /// that eigenvalue. Meaningful for rank-one inputs.
    pub fn dominant_vector(&self) -> PureState {
        let (vals, vecs) = eigh(&self.mat);
        let v = vecs.column(0) * re(vals[0].max(0.0).sqrt());
        PureState::from_parts(v, self.dims.clone(), self.normalized)
    }
}

/// Either kind of state.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dims(&self) -> &[usize] {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            State::Pure(p) => Some(p),
            State::Mixed(_) => None,
        }
    }

    pub fn into_pure(self) -> Result<PureState> {
        match self {
            State::Pure(p) => Ok(p),
            State::Mixed(_) => invalid("expected a pure state"),
        }
    }

    pub fn into_mixed(self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(m) => m,
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}
