//! Gradient-free local minimizers and a deterministic multi-start driver.

use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
    /// ... and the simplex diameter falls below this.
    pub xtol: f64,
    pub initial_step: f64,
    /// Number of times the simplex is rebuilt around the current best point.
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { max_evals: 20_000, ftol: 1e-13, xtol: 1e-9, initial_step: 0.5, restarts: 2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

/// Nelder–Mead with dimension-adaptive coefficients, restarted around the
/// best vertex `restarts` times.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &NelderMead) -> Minimum {
    let mut best = Minimum { x: x0.to_vec(), f: f(x0), evals: 1 };
    let mut step = opts.initial_step;
    for _ in 0..=opts.restarts {
        let budget = opts.max_evals.saturating_sub(best.evals);
        if budget < 2 * x0.len() + 2 {
            break;
        }
        let m = nm_run(&mut f, &best.x, step, budget, opts);
        let improved = m.f < best.f - 1e-15;
        best = Minimum { evals: best.evals + m.evals, ..if m.f <= best.f { m } else { best } };
        if !improved {
            break;
        }
        step *= 0.5;
    }
    best
}

fn nm_run(f: &mut impl FnMut(&[f64]) -> f64, x0: &[f64], step: f64, budget: usize, opts: &NelderMead) -> Minimum {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) =
        if n >= 2 { (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf) } else { (1.0, 2.0, 0.5, 0.5) };
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    while evals < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.abs() <= opts.ftol && diam <= opts.xtol {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / nf;
            }
        }
        let worst = simplex[n].clone();
        let lerp = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };
        let xr = lerp(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = lerp(alpha * beta);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = lerp(alpha * gamma);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = lerp(-gamma);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + delta * (*xi - bi);
                    }
                    *v = eval(x, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    Minimum { x, f: fx, evals }
}

/// Compass search: each coordinate is probed at ±step, the step halves when
/// no probe improves.
pub fn pattern_search(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    min_step: f64,
    max_evals: usize,
) -> Minimum {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut evals = 1;
    let mut h = step;
    while h > min_step && evals < max_evals {
        let mut improved = false;
        for i in 0..x.len() {
            for s in [h, -h] {
                let old = x[i];
                x[i] = old + s;
                let v = f(&x);
                evals += 1;
                if v < fx {
                    fx = v;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    Minimum { x, f: fx, evals }
}

/// Runs `local` from every start in parallel and returns all results in
/// start order; the reduction is left to the caller so that the outcome does
/// not depend on scheduling.
pub fn multistart<F>(starts: Vec<Vec<f64>>, local: F) -> Vec<Minimum>
where
    F: Fn(&[f64]) -> Minimum + Sync,
{
    starts.into_par_iter().map(|s| local(&s)).collect()
}

/// Lowest value, ties broken by start index.
pub fn best_of(results: &[Minimum]) -> &Minimum {
    results
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.f.total_cmp(&b.f).then(i.cmp(j)))
        .map(|(_, m)| m)
        .expect("at least one start")
}
