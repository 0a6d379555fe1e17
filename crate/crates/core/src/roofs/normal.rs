use crate::error::{Error, Result};
use crate::linalg::{self, re};
use crate::state::{apply_factor_to_columns, partial_trace, DensityMatrix, LocalOperator, OperatorKind};
use crate::CMat;

use super::HomogeneousMeasure;

pub const NF_TOL: f64 = 1e-10;
pub const NF_MAX_ITER: usize = 10_000;
/// Traces below this are treated as the nullcone.
pub const NULLCONE_TRACE: f64 = 1e-10;
const NF_REG: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct NormalFormResult {
    /// `G ρ̂ G†` with `ρ̂ = ρ / tr ρ`, left unnormalized.
    pub state: DensityMatrix,
    pub trace: f64,
    /// The accumulated determinant-one factors `G`.
    pub transforms: LocalOperator,
    pub converged: bool,
    pub iterations: usize,
}

impl NormalFormResult {
    pub fn is_nullcone(&self) -> bool {
        !self.converged || self.trace < NULLCONE_TRACE
    }
}

fn reduced(m: &CMat, dims: &[usize], j: usize) -> Result<CMat> {
    let rho = DensityMatrix::from_parts(m.clone(), dims.to_vec(), false);
    Ok(partial_trace(&rho, &[j])?.matrix().clone())
}

/// Largest entry of `ρ_j / tr ρ − 𝟙/d_j` over all parties.
fn deviation(m: &CMat, dims: &[usize], t: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (j, &d) in dims.iter().enumerate() {
        let r = reduced(m, dims, j)? / re(t) - linalg::identity(d) / re(d as f64);
        worst = worst.max(linalg::max_abs(&r));
    }
    Ok(worst)
}

/// `m ↦ A m A†` with `A` acting on party `j`.
fn conjugate(m: &mut CMat, dims: &[usize], j: usize, a: &CMat) {
    apply_factor_to_columns(m, dims, j, a);
    let mut b = m.adjoint();
    apply_factor_to_columns(&mut b, dims, j, a);
    *m = linalg::hermitian_part(&b);
}

/// Iterates `ρ ↦ A_j ρ A_j†` with `A_j ∝ ρ_j^{-1/2}`, `det A_j = 1`, over all
/// parties until every reduction is proportional to the identity.
pub fn normal_form(rho: &DensityMatrix, tol: f64, max_iter: usize) -> Result<NormalFormResult> {
    let dims = rho.dims().to_vec();
    let t0 = rho.trace();
    if t0 <= 0.0 {
        return Err(Error::Annihilated);
    }
    let mut m = rho.matrix() / re(t0);
    let mut factors: Vec<CMat> = dims.iter().map(|&d| linalg::identity(d)).collect();
    let mut converged = false;
    let mut iterations = 0;
    loop {
        let t = linalg::trace(&m).re;
        if t < NULLCONE_TRACE {
            break;
        }
        if deviation(&m, &dims, t)? < tol {
            converged = true;
            break;
        }
        if iterations == max_iter {
            break;
        }
        for (j, &d) in dims.iter().enumerate() {
            let r = reduced(&m, &dims, j)?;
            let a = linalg::inv_sqrtm_psd(&r, NF_REG);
            let a = &a / linalg::det(&a).powf(1.0 / d as f64);
            conjugate(&mut m, &dims, j, &a);
            factors[j] = &a * &factors[j];
        }
        iterations += 1;
    }
    let trace = linalg::trace(&m).re.max(0.0);
    Ok(NormalFormResult {
        state: DensityMatrix::from_parts(m, dims, false),
        trace,
        transforms: LocalOperator::from_parts(factors, OperatorKind::SpecialLinear),
        converged: converged && trace >= NULLCONE_TRACE,
        iterations,
    })
}

/// `μ(ρ) = (tr ρ_NF)^α μ(ρ_NF / tr ρ_NF)` for an SL-invariant measure of
/// degree `α`; zero on the nullcone.
pub fn evaluate_via_normal_form(measure: &dyn HomogeneousMeasure, rho: &DensityMatrix) -> Result<f64> {
    let alpha = measure
        .degree()
        .ok_or_else(|| Error::Unsupported(format!("measure {} has no homogeneity degree", measure.name())))?;
    if !measure.sl_invariant() {
        return Err(Error::Unsupported(format!("measure {} is not SL-invariant", measure.name())));
    }
    let nf = normal_form(rho, NF_TOL, NF_MAX_ITER)?;
    if nf.is_nullcone() {
        return Ok(0.0);
    }
    Ok(rho.trace().powf(alpha) * nf.trace.powf(alpha) * measure.eval(&nf.state.normalized())?)
}
