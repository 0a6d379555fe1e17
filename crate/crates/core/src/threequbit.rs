//! Three-qubit specifics: the Acín canonical form, SLOCC classes of pure
//! states, the GHZ/W superposition, witnesses and a lower bound on the
//! three-tangle of mixed states.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, mismatch, Error, Result};
use crate::invariants;
use crate::linalg::{self, re};
use crate::multipartite::{one_tangle, pairwise_concurrence};
use crate::optimize::{best_of, multistart, pattern_search};
use crate::report::BoundValue;
use crate::rng;
use crate::roofs::{normal_form, NF_MAX_ITER, NF_TOL, NULLCONE_TRACE};
use crate::state::{named_state, DensityMatrix, NamedState, PureState, State};
use crate::symfam::{ghzsym_tau3, GhzSymCoords};
use crate::{CMat, CVec, C64};

/// Tangles (squared τ₃ and squared concurrences) below this count as zero in
/// [`pure_class3`]. Roundoff in the tangles is near machine precision, so
/// their square roots carry noise of order 1e-8.
pub const CLASS_TOL: f64 = 1e-8;
/// Restarts of the local-unitary search in [`tau3_mixed_lower_bound`].
pub const PIPELINE_RESTARTS: u64 = 16;

fn check_three_qubits(dims: &[usize]) -> Result<()> {
    if dims != [2, 2, 2] {
        return mismatch(format!("expected three qubits, got dims {dims:?}"));
    }
    Ok(())
}

/// `λ0|000⟩ + λ1 e^{iφ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcinParams {
    pub lambdas: [f64; 5],
    pub phi: f64,
}

impl AcinParams {
    pub fn new(lambdas: [f64; 5], phi: f64) -> Result<Self> {
        let p = Self { lambdas, phi };
        p.state()?;
        Ok(p)
    }

    pub fn state(&self) -> Result<PureState> {
        named_pure(&NamedState::Acin { lambdas: self.lambdas, phi: self.phi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcinMeasures {
    pub tau3: f64,
    pub c_ab: f64,
    pub c_ac: f64,
    pub c_bc: f64,
    pub c_a_bc: f64,
}

pub fn acin_measures(p: &AcinParams) -> Result<AcinMeasures> {
    p.state()?;
    let [l0, l1, l2, l3, l4] = p.lambdas;
    Ok(AcinMeasures {
        tau3: 2.0 * l0 * l4,
        c_ab: 2.0 * l0 * l3,
        c_ac: 2.0 * l0 * l2,
        c_bc: 2.0 * (C64::from_polar(l1 * l4, p.phi) - l2 * l3).norm(),
        c_a_bc: 2.0 * l0 * (l2 * l2 + l3 * l3 + l4 * l4).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class3 {
    Ghz,
    W,
    /// A separated from an entangled pair BC.
    ABc,
    BAc,
    CAb,
    Separable,
}

impl Class3 {
    pub fn as_str(self) -> &'static str {
        match self {
            Class3::Ghz => "GHZ",
            Class3::W => "W",
            Class3::ABc => "A-BC",
            Class3::BAc => "B-AC",
            Class3::CAb => "C-AB",
            Class3::Separable => "separable",
        }
    }
}

impl fmt::Display for Class3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The deciding quantities behind a [`pure_class3`] label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Class3Evidence {
    pub class: Class3,
    pub tau3: f64,
    /// `C_AB`, `C_AC`, `C_BC`.
    pub concurrences: [f64; 3],
}

/// SLOCC class of a pure three-qubit state. The input is normalized first.
/// Two nonzero concurrences with vanishing τ₃ only occur in the W class.
pub fn pure_class3_with_evidence(psi: &PureState) -> Result<Class3Evidence> {
    check_three_qubits(psi.dims())?;
    let psi = psi.normalized();
    let tau3 = invariants::tau3(&psi)?;
    let state = State::Pure(psi);
    let c =
        [pairwise_concurrence(&state, 0, 1)?, pairwise_concurrence(&state, 0, 2)?, pairwise_concurrence(&state, 1, 2)?];
    let nonzero: Vec<bool> = c.iter().map(|&v| v * v > CLASS_TOL).collect();
    let class = if tau3 * tau3 > CLASS_TOL {
        Class3::Ghz
    } else {
        match nonzero.iter().filter(|&&b| b).count() {
            0 => Class3::Separable,
            1 if nonzero[0] => Class3::CAb,
            1 if nonzero[1] => Class3::BAc,
            1 => Class3::ABc,
            _ => Class3::W,
        }
    };
    Ok(Class3Evidence { class, tau3, concurrences: c })
}

pub fn pure_class3(psi: &PureState) -> Result<Class3> {
    Ok(pure_class3_with_evidence(psi)?.class)
}

/// `|p² − (8√6/9)√(p(1−p)³) e^{3iφ}|`, the residual tangle of
/// `√p|GHZ⟩ − e^{iφ}√(1−p)|W⟩`.
pub fn ghzw_superposition_tangle(p: f64, phi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("weight p={p} outside [0, 1]"));
    }
    let k = 8.0 * 6f64.sqrt() / 9.0 * (p * (1.0 - p).powi(3)).sqrt();
    Ok((re(p * p) - C64::from_polar(k, 3.0 * phi)).norm())
}

/// The superposition itself, for cross-checks.
pub fn ghzw_superposition(p: f64, phi: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("weight p={p} outside [0, 1]"));
    }
    let ghz = named_pure(&NamedState::Ghz(3))?.amplitudes().clone();
    let w = named_pure(&NamedState::W(3))?.amplitudes().clone();
    PureState::new(ghz * re(p.sqrt()) - w * C64::from_polar((1.0 - p).sqrt(), phi), &[2, 2, 2])
}

fn named_pure(n: &NamedState) -> Result<PureState> {
    match named_state(n)? {
        State::Pure(p) => Ok(p),
        State::Mixed(_) => invalid("expected a pure named state"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// `½ − |φ⁺⟩⟨φ⁺|` on two qubits.
    Proj2Qubit,
    /// `¾ − |GHZ⟩⟨GHZ|`.
    GhzProj,
    /// `¾ − |GHZ⟩⟨GHZ| − (3/7)|GHZ₋⟩⟨GHZ₋|`.
    GhzOpt,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 3] = [WitnessKind::Proj2Qubit, WitnessKind::GhzProj, WitnessKind::GhzOpt];

    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::Proj2Qubit => "proj2qubit",
            WitnessKind::GhzProj => "ghz_proj",
            WitnessKind::GhzOpt => "ghz_opt",
        }
    }

    pub fn operator(self) -> WitnessOperator {
        let proj = |n: &NamedState| named_state(n).expect("named witness state").to_density().matrix().clone();
        let (m, dims) = match self {
            WitnessKind::Proj2Qubit => (linalg::identity(4) * re(0.5) - proj(&NamedState::PhiPlus), vec![2, 2]),
            WitnessKind::GhzProj => (linalg::identity(8) * re(0.75) - proj(&NamedState::Ghz(3)), vec![2, 2, 2]),
            WitnessKind::GhzOpt => (
                linalg::identity(8) * re(0.75)
                    - proj(&NamedState::Ghz(3))
                    - proj(&NamedState::GhzMinus(3)) * re(3.0 / 7.0),
                vec![2, 2, 2],
            ),
        };
        WitnessOperator::new(self.as_str(), m, &dims).expect("built-in witnesses are Hermitian")
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| {
            Error::InvalidParameter(format!("unknown witness '{s}' (expected proj2qubit, ghz_proj or ghz_opt)"))
        })
    }
}

/// Hermitian observable with a name tag.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOperator {
    pub name: String,
    matrix: CMat,
    dims: Vec<usize>,
}

impl WitnessOperator {
    pub fn new(name: &str, matrix: CMat, dims: &[usize]) -> Result<Self> {
        let d: usize = dims.iter().product();
        if matrix.nrows() != d || matrix.ncols() != d {
            return mismatch(format!("witness of size {}×{} for dims {dims:?}", matrix.nrows(), matrix.ncols()));
        }
        let err = linalg::hermiticity_error(&matrix);
        if err > 1e-10 {
            return Err(Error::NotHermitian(err));
        }
        Ok(Self { name: name.into(), matrix, dims: dims.to_vec() })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `tr(Wρ)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.dims() != self.dims.as_slice() {
            return mismatch(format!("witness {} acts on {:?}, state has {:?}", self.name, self.dims, rho.dims()));
        }
        Ok(linalg::trace(&(&self.matrix * rho.matrix())).re)
    }
}

pub fn witness_value(rho: &DensityMatrix, w: WitnessKind) -> Result<f64> {
    w.operator().expectation(rho)
}

/// `max(0, ±(8/7)(ρ_{000,111}+ρ_{111,000}) + (20/7)(ρ_{000,000}+ρ_{111,111}) − 3)`
/// with the better sign.
pub fn tau3_witness_bound(rho: &DensityMatrix) -> Result<f64> {
    check_three_qubits(rho.dims())?;
    let m = rho.matrix();
    let coh = (m[(0, 7)] + m[(7, 0)]).re;
    let pop = (m[(0, 0)] + m[(7, 7)]).re;
    Ok((8.0 / 7.0 * coh.abs() + 20.0 / 7.0 * pop - 3.0).max(0.0))
}

/// Rows 0 and 7 of `u₁⊗u₂⊗u₃`.
fn corner_rows(us: &[CMat; 3]) -> (CVec, CVec) {
    let row = |r: usize| {
        us.iter()
            .map(|u| CVec::from_iterator(2, u.row(r).iter().copied()))
            .reduce(|a, b| linalg::kron_vec(&a, &b))
            .expect("three factors")
    };
    (row(0), row(1))
}

/// GHZ-twirl coordinates of `UρU†` for normalized `ρ`, from the three
/// entries of the rotated state the twirl keeps.
fn twirled_coords(rho: &CMat, us: &[CMat; 3]) -> GhzSymCoords {
    let (a, b) = corner_rows(us);
    let el = |x: &CVec, y: &CVec| (x.transpose() * rho * y.conjugate())[(0, 0)];
    let (r00, r77, r07) = (el(&a, &a).re, el(&b, &b).re, el(&a, &b));
    GhzSymCoords { x: r07.re, y: (r00 + r77 - 0.25) / 3f64.sqrt() }
}

fn unitaries(p: &[f64]) -> [CMat; 3] {
    [linalg::u2_from_angles(&p[0..4]), linalg::u2_from_angles(&p[4..8]), linalg::u2_from_angles(&p[8..12])]
}

/// Lower bound on the mixed-state three-tangle: bring `ρ` to its normal
/// form, search local unitaries that keep the most three-tangle through the
/// GHZ twirl, and rescale the family value by the normal-form trace.
pub fn tau3_mixed_lower_bound(rho: &DensityMatrix, seed: u64) -> Result<BoundValue> {
    check_three_qubits(rho.dims())?;
    let t0 = rho.trace();
    if t0 <= 0.0 {
        return Ok(BoundValue::lower(0.0));
    }
    // τ₃ is SL-invariant of degree one, so any iterate of the normal-form
    // map gives a valid bound; convergence only tightens it.
    let nf = normal_form(rho, NF_TOL, NF_MAX_ITER)?;
    if nf.trace < NULLCONE_TRACE {
        return Ok(BoundValue::lower(0.0));
    }
    let sigma = nf.state.normalized().matrix().clone();
    let objective = |p: &[f64]| {
        let c = twirled_coords(&sigma, &unitaries(p));
        // The GHZ fidelity term only steers out of the flat τ₃ = 0 region.
        -(ghzsym_tau3(c) + 1e-3 * (c.x.abs() + 3f64.sqrt() * c.y))
    };
    let starts: Vec<Vec<f64>> = (0..PIPELINE_RESTARTS)
        .map(|k| {
            if k == 0 {
                vec![0.0; 12]
            } else {
                let mut g = rng::stream(seed, k);
                (0..12).map(|_| 2.0 * std::f64::consts::PI * rng::uniform(&mut g)).collect()
            }
        })
        .collect();
    let runs = multistart(starts, |x0| pattern_search(objective, x0, 0.5, 1e-7, 4000));
    let best = best_of(&runs);
    let family = ghzsym_tau3(twirled_coords(&sigma, &unitaries(&best.x)));
    Ok(BoundValue::lower(t0 * nf.trace * family))
}

/// `C_{A|BC}` of a pure state, `√τ_A`.
pub fn one_party_concurrence(psi: &PureState, j: usize) -> Result<f64> {
    Ok(one_tangle(psi, j)?.sqrt())
}
