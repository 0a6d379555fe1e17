use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::linalg::{self, re};
use crate::optimize::{nelder_mead, NelderMead};
use crate::report::BoundValue;
use crate::rng;
use crate::state::{spectral_columns, Decomposition, DensityMatrix, PureState};
use crate::{CMat, CVec, C64};

use super::{NegativityMeasure, PureMeasure};

#[derive(Clone, Copy, Debug)]
pub struct RoofOptions {
    /// Decomposition length ℓ; `None` means `2·rank`.
    pub length: Option<usize>,
    pub restarts: usize,
    pub max_sweeps: usize,
    /// A sweep improving the average by less than this ends a restart.
    pub sweep_tol: f64,
    /// Gradient steps after the rotation sweeps.
    pub polish_iters: usize,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self { length: None, restarts: 4, max_sweeps: 8, sweep_tol: 1e-11, polish_iters: 300 }
    }
}

#[derive(Clone, Debug)]
pub struct RoofEstimate {
    pub bound: BoundValue,
    pub decomposition: Decomposition,
    /// Final average of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// Weighted measure `‖v‖² μ(v/‖v‖)` of one column.
fn term(measure: &dyn PureMeasure, v: &CVec, dims: &[usize]) -> f64 {
    let w = v.norm_squared();
    if w < 1e-15 {
        return 0.0;
    }
    let psi = PureState::from_parts(v / re(w.sqrt()), dims.to_vec(), true);
    // Measures fail only on malformed input, which the caller has ruled out.
    w * measure.eval_pure(&psi).unwrap_or(f64::INFINITY)
}

fn rotate(va: &CVec, vb: &CVec, theta: f64, phi: f64) -> (CVec, CVec) {
    let (c, s) = (theta.cos(), theta.sin());
    let e = C64::from_polar(1.0, phi);
    (va * re(c) + vb * (e * s), vb * re(c) - va * (e.conj() * s))
}

const THETA_GRID: [f64; 7] = [-0.375, -0.25, -0.125, 0.125, 0.25, 0.375, 0.5];

/// Coordinate descent over two-column rotations of the decomposition.
fn givens_descent(measure: &dyn PureMeasure, cols: &mut CMat, dims: &[usize], opts: &RoofOptions) -> f64 {
    let l = cols.ncols();
    let mut terms: Vec<f64> = (0..l).map(|k| term(measure, &cols.column(k).into_owned(), dims)).collect();
    let nm = NelderMead { max_evals: 60, ftol: 1e-14, xtol: 1e-8, initial_step: 0.1, restarts: 0 };
    for _ in 0..opts.max_sweeps {
        let before: f64 = terms.iter().sum();
        for a in 0..l {
            for b in a + 1..l {
                let va = cols.column(a).into_owned();
                let vb = cols.column(b).into_owned();
                if va.norm_squared() + vb.norm_squared() < 1e-15 {
                    continue;
                }
                let current = terms[a] + terms[b];
                let cost = |x: &[f64]| {
                    let (na, nb) = rotate(&va, &vb, x[0], x[1]);
                    term(measure, &na, dims) + term(measure, &nb, dims)
                };
                let mut best = (current, [0.0, 0.0]);
                for t in THETA_GRID {
                    for p in 0..4 {
                        let x = [t * std::f64::consts::PI, p as f64 * std::f64::consts::FRAC_PI_2];
                        let v = cost(&x);
                        if v < best.0 {
                            best = (v, x);
                        }
                    }
                }
                let refined = nelder_mead(cost, &best.1, &nm);
                if refined.f < best.0 {
                    best = (refined.f, [refined.x[0], refined.x[1]]);
                }
                if best.0 < current - 1e-15 {
                    let (na, nb) = rotate(&va, &vb, best.1[0], best.1[1]);
                    terms[a] = term(measure, &na, dims);
                    terms[b] = term(measure, &nb, dims);
                    cols.set_column(a, &na);
                    cols.set_column(b, &nb);
                }
            }
        }
        let after: f64 = terms.iter().sum();
        if before - after < opts.sweep_tol {
            break;
        }
    }
    terms.iter().sum()
}

/// Central-difference gradient of `term` with respect to the real and
/// imaginary parts of one column, packed as `∂/∂Re + i ∂/∂Im`.
fn term_gradient(measure: &dyn PureMeasure, v: &CVec, dims: &[usize]) -> CVec {
    let h = 1e-6 * v.norm().max(1e-3);
    let mut g = CVec::zeros(v.len());
    let mut w = v.clone();
    for k in 0..v.len() {
        let mut part = [0.0; 2];
        for (slot, dir) in [re(h), C64::new(0.0, h)].into_iter().enumerate() {
            w[k] = v[k] + dir;
            let up = term(measure, &w, dims);
            w[k] = v[k] - dir;
            let down = term(measure, &w, dims);
            part[slot] = (up - down) / (2.0 * h);
        }
        w[k] = v[k];
        g[k] = C64::new(part[0], part[1]);
    }
    g
}

fn total(measure: &dyn PureMeasure, cols: &CMat, dims: &[usize]) -> f64 {
    (0..cols.ncols()).map(|k| term(measure, &cols.column(k).into_owned(), dims)).sum()
}

/// `(𝟙 − A/2)⁻¹(𝟙 + A/2)`, unitary for anti-Hermitian `A`.
fn cayley(a: &CMat) -> CMat {
    let half = a * re(0.5);
    let id = linalg::identity(a.nrows());
    (&id - &half).try_inverse().expect("Cayley factor of an anti-Hermitian matrix is invertible") * (&id + &half)
}

/// Steepest descent on `V ↦ V·U`, `U` unitary, with Armijo backtracking.
fn gradient_polish(measure: &dyn PureMeasure, cols: &mut CMat, dims: &[usize], opts: &RoofOptions) -> f64 {
    let l = cols.ncols();
    let mut f = total(measure, cols, dims);
    let mut t = 1.0;
    for _ in 0..opts.polish_iters {
        let mut grad = CMat::zeros(cols.nrows(), l);
        for k in 0..l {
            grad.set_column(k, &term_gradient(measure, &cols.column(k).into_owned(), dims));
        }
        let m = cols.adjoint() * &grad;
        let dir = (m.adjoint() - &m) * re(0.5);
        let slope = dir.norm_squared();
        if slope < 1e-24 {
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let trial = &*cols * cayley(&(&dir * re(t)));
            let ft = total(measure, &trial, dims);
            if ft <= f - 1e-4 * t * slope {
                let gain = f - ft;
                *cols = trial;
                f = ft;
                accepted = gain > 0.0;
                t *= 2.0;
                break;
            }
            t *= 0.5;
        }
        if !accepted || f.abs() < 1e-15 {
            break;
        }
    }
    f
}

/// Seeded upper estimate of `min Σ p_i μ(ψ_i)` over decompositions of
/// length ℓ, reached by remixing the spectral decomposition.
pub fn convex_roof_with(
    measure: &dyn PureMeasure,
    rho: &DensityMatrix,
    opts: &RoofOptions,
    seed: u64,
) -> Result<RoofEstimate> {
    let rho = rho.normalized();
    let spec = spectral_columns(&rho);
    let r = spec.ncols();
    let l = opts.length.unwrap_or(2 * r);
    if l < r {
        return invalid(format!("decomposition length {l} below rank {r}"));
    }
    let dims = rho.dims().to_vec();
    let mut padded = CMat::zeros(rho.dim(), l);
    padded.columns_mut(0, r).copy_from(&spec);
    // Rank one has a unique decomposition.
    let restarts = if r == 1 { 1 } else { opts.restarts.max(1) };
    let runs: Vec<(f64, CMat)> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut cols = if k == 0 {
                padded.clone()
            } else {
                let u = linalg::haar_unitary(l, &mut rng::stream(seed, k as u64));
                &padded * u.transpose()
            };
            // Rotations handle kinks where terms vanish; the gradient steps
            // converge fast on the smooth part.
            let mut v = f64::INFINITY;
            for _ in 0..4 {
                givens_descent(measure, &mut cols, &dims, opts);
                let next = gradient_polish(measure, &mut cols, &dims, opts);
                let done = v - next < opts.sweep_tol.max(1e-9 * next.abs());
                v = next;
                if done {
                    break;
                }
            }
            (v, cols)
        })
        .collect();
    let (best_k, _) = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.0.total_cmp(&b.0).then(i.cmp(j)))
        .expect("at least one restart");
    let cols = &runs[best_k].1;
    Ok(RoofEstimate {
        bound: BoundValue::upper(runs[best_k].0),
        decomposition: Decomposition::from_columns(cols, &dims),
        restart_values: runs.iter().map(|r| r.0).collect(),
    })
}

/// [`convex_roof_with`] with default options and the given length.
pub fn convex_roof_upper(
    measure: &dyn PureMeasure,
    rho: &DensityMatrix,
    length: Option<usize>,
    seed: u64,
) -> Result<BoundValue> {
    Ok(convex_roof_with(measure, rho, &RoofOptions { length, ..Default::default() }, seed)?.bound)
}

/// Exhaustive search over length-2 decompositions of a rank ≤ 2 state:
/// a `grid_n × grid_n` grid on the sphere of 2×2 mixings, then local
/// refinement from the best grid point. Intended as a test oracle.
pub fn convex_roof_bruteforce(measure: &dyn PureMeasure, rho: &DensityMatrix, grid_n: usize) -> Result<f64> {
    let rho = rho.normalized();
    let spec = spectral_columns(&rho);
    let dims = rho.dims().to_vec();
    match spec.ncols() {
        1 => return Ok(term(measure, &spec.column(0).into_owned(), &dims)),
        2 => {}
        r => return invalid(format!("brute-force roof needs rank ≤ 2, got {r}")),
    }
    if grid_n < 2 {
        return invalid("grid needs at least two points per axis");
    }
    let (v0, v1) = (spec.column(0).into_owned(), spec.column(1).into_owned());
    let cost = |x: &[f64]| {
        let (a, b) = rotate(&v0, &v1, x[0], x[1]);
        term(measure, &a, &dims) + term(measure, &b, &dims)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..grid_n {
        for j in 0..grid_n {
            let x = [half_pi * i as f64 / (grid_n - 1) as f64, 4.0 * half_pi * j as f64 / grid_n as f64];
            let v = cost(&x);
            if v < best.0 {
                best = (v, x);
            }
        }
    }
    let nm = NelderMead { max_evals: 2000, initial_step: half_pi / grid_n as f64, ..Default::default() };
    Ok(nelder_mead(cost, &best.1, &nm).f.min(best.0))
}

/// Convex-roof extended negativity across the first party, estimated from
/// above.
pub fn cren_upper(rho: &DensityMatrix, seed: u64) -> Result<BoundValue> {
    if rho.n_parties() != 2 {
        return invalid("CREN needs a bipartite state");
    }
    convex_roof_upper(&NegativityMeasure::default(), rho, None, seed)
}
