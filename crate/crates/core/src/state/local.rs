use super::{DensityMatrix, PureState, State, STATE_TOL};
use crate::error::{invalid, mismatch, Error, Result};
use crate::linalg::{self, re};
use crate::{CMat, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Unitary,
    SpecialLinear,
    General,
}

/// Product operator `G_1 ⊗ … ⊗ G_n`, one factor per party.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    factors: Vec<CMat>,
    kind: OperatorKind,
}

impl LocalOperator {
    /// Checks the kind tag numerically (tolerance 1e-9).
    pub fn new(factors: Vec<CMat>, kind: OperatorKind) -> Result<Self> {
        if factors.is_empty() {
            return invalid("local operator without factors");
        }
        for (j, f) in factors.iter().enumerate() {
            if !f.is_square() {
                return mismatch(format!("factor {j} is not square"));
            }
            match kind {
                OperatorKind::Unitary => {
                    let e = linalg::isometry_error(f);
                    if e > STATE_TOL {
                        return invalid(format!("factor {j} is not unitary (error {e:e})"));
                    }
                }
                OperatorKind::SpecialLinear => {
                    let d = linalg::det(f);
                    if (d - linalg::ONE).norm() > STATE_TOL {
                        return invalid(format!("factor {j} has determinant {d}"));
                    }
                }
                OperatorKind::General => {}
            }
        }
        Ok(Self { factors, kind })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self { factors: dims.iter().map(|&d| linalg::identity(d)).collect(), kind: OperatorKind::Unitary }
    }

    pub(crate) fn from_parts(factors: Vec<CMat>, kind: OperatorKind) -> Self {
        Self { factors, kind }
    }

    pub fn factors(&self) -> &[CMat] {
        &self.factors
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// `self · other`, factor by factor. The kind is the weakest of the two.
    pub fn compose(&self, other: &LocalOperator) -> Result<LocalOperator> {
        if self.factors.len() != other.factors.len() {
            return mismatch("composing local operators with different party counts");
        }
        let factors = self.factors.iter().zip(&other.factors).map(|(a, b)| a * b).collect();
        let kind = if self.kind == other.kind { self.kind } else { OperatorKind::General };
        Ok(Self { factors, kind })
    }

    fn check_against(&self, dims: &[usize]) -> Result<()> {
        if self.factors.len() != dims.len() || self.factors.iter().zip(dims).any(|(f, &d)| f.nrows() != d) {
            return mismatch(format!("operator factors do not match dims {dims:?}"));
        }
        Ok(())
    }
}

/// Result of a local transformation: the new state and the norm² (pure) or
/// trace (mixed) it had before renormalization.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformed<T> {
    pub state: T,
    pub scale: f64,
}

/// Multiplies every column of `m` by `op` acting on party `party`.
pub(crate) fn apply_factor_to_columns(m: &mut CMat, dims: &[usize], party: usize, op: &CMat) {
    let d = dims[party];
    let stride: usize = dims[party + 1..].iter().product();
    let block = d * stride;
    let rows = m.nrows();
    let mut buf = vec![C64::new(0.0, 0.0); d];
    for c in 0..m.ncols() {
        for high in (0..rows).step_by(block) {
            for low in 0..stride {
                for k in 0..d {
                    buf[k] = m[(high + k * stride + low, c)];
                }
                for k in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for (l, b) in buf.iter().enumerate() {
                        acc += op[(k, l)] * b;
                    }
                    m[(high + k * stride + low, c)] = acc;
                }
            }
        }
    }
}

fn apply_all(m: &mut CMat, dims: &[usize], op: &LocalOperator) {
    for (j, f) in op.factors.iter().enumerate() {
        if linalg::max_abs(&(f - linalg::identity(f.nrows()))) != 0.0 {
            apply_factor_to_columns(m, dims, j, f);
        }
    }
}

pub fn apply_local_pure(psi: &PureState, op: &LocalOperator, renormalize: bool) -> Result<Transformed<PureState>> {
    op.check_against(psi.dims())?;
    let mut v = CMat::from_column_slice(psi.dim(), 1, psi.amplitudes().as_slice());
    apply_all(&mut v, psi.dims(), op);
    let v = v.column(0).into_owned();
    let scale = v.norm_squared();
    if scale < 1e-300 {
        return Err(Error::Annihilated);
    }
    let state = if renormalize {
        PureState::from_parts(v / re(scale.sqrt()), psi.dims().to_vec(), true)
    } else {
        let keeps = psi.is_normalized() && op.kind == OperatorKind::Unitary;
        PureState::from_parts(v, psi.dims().to_vec(), keeps)
    };
    Ok(Transformed { state, scale })
}

pub fn apply_local_mixed(
    rho: &DensityMatrix,
    op: &LocalOperator,
    renormalize: bool,
) -> Result<Transformed<DensityMatrix>> {
    op.check_against(rho.dims())?;
    // G ρ G† = G (G ρ)† for Hermitian ρ.
    let mut a = rho.matrix().clone();
    apply_all(&mut a, rho.dims(), op);
    let mut b = a.adjoint();
    apply_all(&mut b, rho.dims(), op);
    let b = linalg::hermitian_part(&b);
    let scale = linalg::trace(&b).re;
    if scale < 1e-300 {
        return Err(Error::Annihilated);
    }
    let state = if renormalize {
        DensityMatrix::from_parts(b / re(scale), rho.dims().to_vec(), true)
    } else {
        let keeps = rho.is_normalized() && op.kind == OperatorKind::Unitary;
        DensityMatrix::from_parts(b, rho.dims().to_vec(), keeps)
    };
    Ok(Transformed { state, scale })
}

/// Applies `G = G_1 ⊗ … ⊗ G_n` to a pure (`Gψ`) or mixed (`GρG†`) state.
pub fn apply_local_operator(state: &State, op: &LocalOperator, renormalize: bool) -> Result<Transformed<State>> {
    Ok(match state {
        State::Pure(p) => {
            let t = apply_local_pure(p, op, renormalize)?;
            Transformed { state: State::Pure(t.state), scale: t.scale }
        }
        State::Mixed(m) => {
            let t = apply_local_mixed(m, op, renormalize)?;
            Transformed { state: State::Mixed(t.state), scale: t.scale }
        }
    })
}
