use super::{equal_local_dims, FAMILY_TOL};
use crate::error::{invalid, Result};
use crate::linalg::re;
use crate::report::{BoundKind, BoundValue, MeasureReport};
use crate::state::DensityMatrix;
use crate::CMat;

/// Axisymmetric coordinates, scaled so that Euclidean distance in the
/// `(x, y)` plane equals Hilbert–Schmidt distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiCoords {
    pub x: f64,
    pub y: f64,
    pub d: usize,
}

impl AxiCoords {
    pub fn new(x: f64, y: f64, d: usize) -> Self {
        Self { x, y, d }
    }

    /// Coordinates of `|Ψ_d⟩⟨Ψ_d|`.
    pub fn pure_corner(d: usize) -> Self {
        let df = d as f64;
        Self { x: ((df - 1.0) / df).sqrt(), y: (df - 1.0).sqrt() / df, d }
    }

    /// Diagonal shift `a`: `ρ_{jj,jj} = 1/d² + a`.
    pub fn a(&self) -> f64 {
        let df = self.d as f64;
        self.y * (df - 1.0).sqrt() / df
    }

    /// Coherence `b = ρ_{jj,kk}`, `j ≠ k`.
    pub fn b(&self) -> f64 {
        let df = self.d as f64;
        self.x / (df * (df - 1.0)).sqrt()
    }

    /// Bounding box `(x_min, x_max, y_min, y_max)` of the physical triangle.
    pub fn bounds(d: usize) -> (f64, f64, f64, f64) {
        let df = d as f64;
        (
            -1.0 / (df * (df - 1.0)).sqrt(),
            ((df - 1.0) / df).sqrt(),
            -1.0 / (df * (df - 1.0).sqrt()),
            (df - 1.0).sqrt() / df,
        )
    }

    /// Smallest eigenvalue of the state is non-negative.
    pub fn is_physical(&self) -> bool {
        if self.d < 2 {
            return false;
        }
        let (df, a, b) = (self.d as f64, self.a(), self.b());
        let inv = 1.0 / (df * df);
        inv - a / (df - 1.0) >= -FAMILY_TOL && inv + a - b >= -FAMILY_TOL && inv + a + (df - 1.0) * b >= -FAMILY_TOL
    }

    /// `√(d(d−1))|x| + √(d−1)y − (d−1)/d`.
    fn plane(&self) -> f64 {
        let df = self.d as f64;
        (df * (df - 1.0)).sqrt() * self.x.abs() + (df - 1.0).sqrt() * self.y - (df - 1.0) / df
    }
}

pub fn axi_state(c: AxiCoords) -> Result<DensityMatrix> {
    if !c.is_physical() {
        return invalid(format!("axisymmetric point ({}, {}) is not a state for d = {}", c.x, c.y, c.d));
    }
    let d = c.d;
    let df = d as f64;
    let (a, b) = (c.a(), c.b());
    let mut m = CMat::zeros(d * d, d * d);
    for j in 0..d {
        for k in 0..d {
            let i = j * d + k;
            m[(i, i)] = re(if j == k { 1.0 / (df * df) + a } else { 1.0 / (df * df) - a / (df - 1.0) });
            if j != k {
                m[(j * d + j, k * d + k)] = re(b);
            }
        }
    }
    DensityMatrix::new(m, &[d, d])
}

/// Projection onto the axisymmetric family by averaging matrix elements
/// over the symmetry group.
pub fn axi_twirl(rho: &DensityMatrix) -> Result<AxiCoords> {
    let d = equal_local_dims(rho)?;
    let rho = rho.normalized();
    let m = rho.matrix();
    let df = d as f64;
    let mut diag = 0.0;
    let mut coh = 0.0;
    for j in 0..d {
        diag += m[(j * d + j, j * d + j)].re;
        for k in 0..d {
            if k != j {
                coh += m[(j * d + j, k * d + k)].re;
            }
        }
    }
    let a = diag / df - 1.0 / (df * df);
    let b = coh / (df * (df - 1.0));
    Ok(AxiCoords { x: b * (df * (df - 1.0)).sqrt(), y: a * df / (df - 1.0).sqrt(), d })
}

/// Negativity, concurrence and Schmidt number of an axisymmetric state.
///
/// The negativity uses `|x|`, exact on the whole triangle. Concurrence and
/// the Schmidt-number band are exact only for `x ≥ 0`; for `x < 0` the
/// concurrence is unavailable and the Schmidt number a lower bound.
pub fn axi_exact(c: AxiCoords) -> Result<MeasureReport> {
    if !c.is_physical() {
        return invalid(format!("axisymmetric point ({}, {}) is not a state for d = {}", c.x, c.y, c.d));
    }
    let df = c.d as f64;
    let n = (0.5 * c.plane()).max(0.0);
    let mut r = MeasureReport::new();
    r.push("negativity", BoundValue::exact(n));
    if c.x >= 0.0 {
        r.push("concurrence", BoundValue::exact((2.0 / (df * (df - 1.0))).sqrt() * c.plane().max(0.0)));
    } else {
        r.push_unavailable("concurrence", BoundKind::Exact);
    }
    let k = if 2.0 * n <= 1e-9 { 1 } else { ((2.0 * n - 1e-9).ceil() as usize + 1).min(c.d) };
    let kind = if c.x >= 0.0 { BoundKind::Exact } else { BoundKind::Lower };
    r.push("schmidt_number", BoundValue { value: k as f64, kind });
    Ok(r)
}
