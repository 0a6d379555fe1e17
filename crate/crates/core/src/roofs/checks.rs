use crate::error::Result;
use crate::linalg::{self, re};
use crate::rng;
use crate::state::{apply_local_mixed, DensityMatrix, LocalOperator, OperatorKind};
use crate::CMat;

use super::HomogeneousMeasure;

/// Violations above this fail a check.
pub const CHECK_TOL: f64 = 1e-6;

/// States the harness runs on. Convexity pairs consecutive `states` with
/// equal dims.
#[derive(Clone, Debug, Default)]
pub struct Fixtures {
    pub states: Vec<DensityMatrix>,
    pub separable: Vec<DensityMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    /// Largest violation seen, 0 when none.
    pub worst: f64,
    pub passed: bool,
    /// Not applicable to this measure (no degree, not SL-invariant, or no fixtures).
    pub skipped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneReport {
    pub measure: String,
    pub checks: Vec<CheckOutcome>,
}

impl MonotoneReport {
    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.skipped)
    }
}

struct Tally {
    name: &'static str,
    trials: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, trials: 0, worst: 0.0 }
    }

    fn record(&mut self, violation: f64) {
        self.trials += 1;
        self.worst = self.worst.max(violation);
    }

    fn finish(self, applicable: bool) -> CheckOutcome {
        let skipped = !applicable || self.trials == 0;
        CheckOutcome {
            name: self.name,
            trials: self.trials,
            worst: self.worst,
            passed: !skipped && self.worst <= CHECK_TOL,
            skipped,
        }
    }
}

/// Contraction with operator norm `s ≤ 1`.
fn random_contraction(d: usize, g: &mut rng::Rng) -> CMat {
    let m = linalg::ginibre(d, d, g);
    let top = m.singular_values().max();
    m * re(rng::uniform(g) / top)
}

fn on_party(dims: &[usize], j: usize, a: CMat) -> LocalOperator {
    let factors = dims.iter().enumerate().map(|(k, &d)| if k == j { a.clone() } else { linalg::identity(d) }).collect();
    LocalOperator::from_parts(factors, OperatorKind::General)
}

/// Numerical checks of the monotone axioms on the given fixtures:
/// non-increase on average under two-outcome local filters, vanishing on
/// separable states, convexity, homogeneity of the declared degree and,
/// when declared, invariance under local SL operators.
pub fn monotone_property_checks(
    measure: &dyn HomogeneousMeasure,
    fixtures: &Fixtures,
    seed: u64,
) -> Result<MonotoneReport> {
    let mut g = rng::seeded(seed);
    let mu = |r: &DensityMatrix| measure.eval(r);

    let mut filt = Tally::new("local_filter");
    for rho in &fixtures.states {
        let base = mu(rho)?;
        for _ in 0..4 {
            let j = (rng::uniform(&mut g) * rho.n_parties() as f64) as usize % rho.n_parties();
            let d = rho.dims()[j];
            let k1 = random_contraction(d, &mut g);
            let k2 = linalg::sqrtm_psd(&(linalg::identity(d) - k1.adjoint() * &k1));
            let mut avg = 0.0;
            for k in [k1, k2] {
                let out = apply_local_mixed(rho, &on_party(rho.dims(), j, k), false);
                if let Ok(t) = out {
                    avg += t.scale * mu(&t.state.normalized())?;
                }
            }
            filt.record(avg - base);
        }
    }

    let mut sep = Tally::new("separable_zero");
    for s in &fixtures.separable {
        sep.record(mu(s)?.abs());
    }

    let mut conv = Tally::new("convexity");
    for pair in fixtures.states.windows(2) {
        if pair[0].dims() != pair[1].dims() {
            continue;
        }
        let t = rng::uniform(&mut g);
        let mix = DensityMatrix::mixture(&[(t, &pair[0]), (1.0 - t, &pair[1])])?;
        conv.record(mu(&mix)? - (t * mu(&pair[0])? + (1.0 - t) * mu(&pair[1])?));
    }

    let mut hom = Tally::new("homogeneity");
    if let Some(alpha) = measure.degree() {
        for rho in &fixtures.states {
            let base = mu(rho)?;
            for lambda in [0.3f64, 2.5] {
                let expect = lambda.powf(alpha) * base;
                hom.record((mu(&rho.scaled(lambda))? - expect).abs() / expect.abs().max(1.0));
            }
        }
    }

    let mut sl = Tally::new("sl_invariance");
    if measure.sl_invariant() {
        for rho in &fixtures.states {
            let base = mu(rho)?;
            let factors = rho.dims().iter().map(|&d| linalg::random_sl(d, &mut g)).collect();
            let op = LocalOperator::from_parts(factors, OperatorKind::SpecialLinear);
            let moved = apply_local_mixed(rho, &op, false)?.state;
            sl.record((mu(&moved)? - base).abs() / base.abs().max(1.0));
        }
    }

    Ok(MonotoneReport {
        measure: measure.name(),
        checks: vec![
            filt.finish(true),
            sep.finish(true),
            conv.finish(true),
            hom.finish(measure.degree().is_some()),
            sl.finish(measure.sl_invariant()),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roofs::{Concurrence, Purity, Tau3};
    use crate::state::{random_density_matrix, random_pure_state, tensor_product, State};

    fn two_qubit_fixtures(seed: u64) -> Fixtures {
        let mut g = rng::seeded(seed);
        let states = (0..6).map(|k| random_density_matrix(&[2, 2], 1 + k % 4, &mut g).unwrap()).collect();
        let separable = (0..4)
            .map(|k| {
                let a = State::Pure(random_pure_state(&[2], k).unwrap());
                let b = State::Pure(random_pure_state(&[2], k + 50).unwrap());
                tensor_product(&a, &b).unwrap().to_density()
            })
            .collect();
        Fixtures { states, separable }
    }

    #[test]
    fn concurrence_passes() {
        let r = monotone_property_checks(&Concurrence, &two_qubit_fixtures(1), 3).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert!(!r.get("sl_invariance").unwrap().skipped);
    }

    #[test]
    fn purity_fails_separable_zero() {
        let r = monotone_property_checks(&Purity, &two_qubit_fixtures(2), 3).unwrap();
        assert!(r.get("convexity").unwrap().passed);
        assert!(!r.get("separable_zero").unwrap().passed);
        assert!(r.get("sl_invariance").unwrap().skipped);
        assert!(!r.all_passed());
    }

    #[test]
    fn tau3_is_sl_invariant_on_pure_fixtures() {
        let states = (0..5).map(|s| random_pure_state(&[2, 2, 2], s).unwrap().to_density()).collect();
        let fx = Fixtures { states, separable: vec![] };
        let r = monotone_property_checks(&Tau3::default(), &fx, 9).unwrap();
        let sl = r.get("sl_invariance").unwrap();
        assert!(sl.passed && sl.worst < 1e-7, "{sl:?}");
        assert!(r.get("homogeneity").unwrap().passed);
    }
}
