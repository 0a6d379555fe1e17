use crate::bipartite::{g_concurrence, negativity, negativity_pure, pure_concurrence, wootters_concurrence};
use crate::error::{Error, Result};
use crate::invariants;
use crate::state::{DensityMatrix, PureState};

use super::roof::{convex_roof_with, RoofOptions};

/// A measure defined on normalized pure states.
pub trait PureMeasure: Sync {
    fn name(&self) -> String;
    fn eval_pure(&self, psi: &PureState) -> Result<f64>;
}

/// A measure on (possibly unnormalized) density matrices, with optional
/// homogeneity degree `α`: `μ(λρ) = λ^α μ(ρ)`.
pub trait HomogeneousMeasure: Sync {
    fn name(&self) -> String;
    fn degree(&self) -> Option<f64>;
    /// Invariant under `ρ ↦ GρG†` with `G` a product of determinant-one factors.
    fn sl_invariant(&self) -> bool {
        false
    }
    fn eval(&self, rho: &DensityMatrix) -> Result<f64>;
}

/// Relative eigenvalue cut below which a density matrix counts as rank one.
const RANK_ONE_TOL: f64 = 1e-12;

/// `(tr ρ, ψ)` when `ρ ∝ |ψ⟩⟨ψ|`.
fn rank_one(rho: &DensityMatrix) -> Option<(f64, PureState)> {
    let t = rho.trace();
    if t <= 0.0 || rho.rank(RANK_ONE_TOL) != 1 {
        return None;
    }
    Some((t, rho.dominant_vector().normalized()))
}

fn trace_scaled(rho: &DensityMatrix, f: impl Fn(&DensityMatrix) -> Result<f64>) -> Result<f64> {
    let t = rho.trace();
    if t <= 0.0 {
        return Ok(0.0);
    }
    Ok(t * f(&rho.normalized())?)
}

/// Two-qubit concurrence; Wootters' formula on mixed states.
#[derive(Clone, Copy, Debug, Default)]
pub struct Concurrence;

impl PureMeasure for Concurrence {
    fn name(&self) -> String {
        "concurrence".into()
    }
    fn eval_pure(&self, psi: &PureState) -> Result<f64> {
        pure_concurrence(psi)
    }
}

impl HomogeneousMeasure for Concurrence {
    fn name(&self) -> String {
        "concurrence".into()
    }
    fn degree(&self) -> Option<f64> {
        Some(1.0)
    }
    fn sl_invariant(&self) -> bool {
        true
    }
    fn eval(&self, rho: &DensityMatrix) -> Result<f64> {
        trace_scaled(rho, wootters_concurrence)
    }
}

/// G-concurrence of a `d×d` pure state (cut after the first party). On
/// mixed input only rank-one matrices are accepted.
#[derive(Clone, Copy, Debug, Default)]
pub struct GConcurrence;

impl PureMeasure for GConcurrence {
    fn name(&self) -> String {
        "g_concurrence".into()
    }
    fn eval_pure(&self, psi: &PureState) -> Result<f64> {
        g_concurrence(psi, &[0])
    }
}

impl HomogeneousMeasure for GConcurrence {
    fn name(&self) -> String {
        "g_concurrence".into()
    }
    fn degree(&self) -> Option<f64> {
        Some(1.0)
    }
    fn sl_invariant(&self) -> bool {
        true
    }
    fn eval(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.trace() <= 0.0 {
            return Ok(0.0);
        }
        let (t, psi) =
            rank_one(rho).ok_or_else(|| Error::Unsupported("G-concurrence needs a rank-one input".into()))?;
        Ok(t * g_concurrence(&psi, &[0])?)
    }
}

/// Three-tangle `τ₃`. Mixed input of rank above one goes through the
/// seeded convex-roof upper estimate.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tau3 {
    pub seed: u64,
}

impl PureMeasure for Tau3 {
    fn name(&self) -> String {
        "tau3".into()
    }
    fn eval_pure(&self, psi: &PureState) -> Result<f64> {
        invariants::tau3(psi)
    }
}

impl HomogeneousMeasure for Tau3 {
    fn name(&self) -> String {
        "tau3".into()
    }
    fn degree(&self) -> Option<f64> {
        Some(1.0)
    }
    fn sl_invariant(&self) -> bool {
        true
    }
    fn eval(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.trace() <= 0.0 {
            return Ok(0.0);
        }
        if let Some((t, psi)) = rank_one(rho) {
            return Ok(t * invariants::tau3(&psi)?);
        }
        let est = convex_roof_with(self, &rho.normalized(), &RoofOptions::default(), self.seed)?;
        Ok(rho.trace() * est.bound.value)
    }
}

/// Residual tangle `τ₃²`, degree 2 in the density matrix.
#[derive(Clone, Copy, Debug, Default)]
pub struct ResidualTangle {
    pub seed: u64,
}

impl PureMeasure for ResidualTangle {
    fn name(&self) -> String {
        "residual_tangle".into()
    }
    fn eval_pure(&self, psi: &PureState) -> Result<f64> {
        invariants::residual_tangle(psi)
    }
}

impl HomogeneousMeasure for ResidualTangle {
    fn name(&self) -> String {
        "residual_tangle".into()
    }
    fn degree(&self) -> Option<f64> {
        Some(2.0)
    }
    fn sl_invariant(&self) -> bool {
        true
    }
    fn eval(&self, rho: &DensityMatrix) -> Result<f64> {
        let t = rho.trace();
        if t <= 0.0 {
            return Ok(0.0);
        }
        if let Some((t, psi)) = rank_one(rho) {
            return Ok(t * t * invariants::residual_tangle(&psi)?);
        }
        let est = convex_roof_with(self, &rho.normalized(), &RoofOptions::default(), self.seed)?;
        Ok(t * t * est.bound.value)
    }
}

/// Negativity across the cut `block | rest`.
#[derive(Clone, Debug)]
pub struct NegativityMeasure {
    pub block: Vec<usize>,
}

impl Default for NegativityMeasure {
    fn default() -> Self {
        Self { block: vec![0] }
    }
}

impl PureMeasure for NegativityMeasure {
    fn name(&self) -> String {
        "negativity".into()
    }
    fn eval_pure(&self, psi: &PureState) -> Result<f64> {
        negativity_pure(psi, &self.block)
    }
}

impl HomogeneousMeasure for NegativityMeasure {
    fn name(&self) -> String {
        "negativity".into()
    }
    fn degree(&self) -> Option<f64> {
        Some(1.0)
    }
    fn eval(&self, rho: &DensityMatrix) -> Result<f64> {
        trace_scaled(rho, |r| negativity(r, &self.block))
    }
}

/// `tr ρ²`: convex and homogeneous but not an entanglement measure. Useful
/// to check that the property harness can fail.
#[derive(Clone, Copy, Debug, Default)]
pub struct Purity;

impl HomogeneousMeasure for Purity {
    fn name(&self) -> String {
        "purity".into()
    }
    fn degree(&self) -> Option<f64> {
        Some(2.0)
    }
    fn eval(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(rho.purity())
    }
}
