#![allow(dead_code)]

use tanglekit::linalg;
use tanglekit::rng::{self, Rng};
use tanglekit::state::{apply_local_pure, tensor_product, LocalOperator, OperatorKind};
use tanglekit::{CMat, CVec, PureState, State, C64};

pub fn sl_operator(dims: &[usize], g: &mut Rng) -> LocalOperator {
    let factors = dims.iter().map(|&d| linalg::random_sl(d, g)).collect();
    LocalOperator::new(factors, OperatorKind::SpecialLinear).unwrap()
}

pub fn unitary_operator(dims: &[usize], g: &mut Rng) -> LocalOperator {
    let factors = dims.iter().map(|&d| linalg::haar_unitary(d, g)).collect();
    LocalOperator::new(factors, OperatorKind::Unitary).unwrap()
}

pub fn invertible_operator(dims: &[usize], g: &mut Rng) -> LocalOperator {
    let factors = dims.iter().map(|&d| linalg::ginibre(d, d, g)).collect();
    LocalOperator::new(factors, OperatorKind::General).unwrap()
}

/// `Gψ` renormalized, with the norm² it had before.
pub fn sl_image(psi: &PureState, g: &mut Rng) -> (PureState, f64) {
    let t = apply_local_pure(psi, &sl_operator(psi.dims(), g), true).unwrap();
    (t.state, t.scale)
}

pub fn rel_err(a: C64, b: C64) -> f64 {
    let m = a.norm().max(b.norm());
    if m < 1e-300 {
        0.0
    } else {
        (a - b).norm() / m
    }
}

/// Random two-party state with Schmidt rank exactly `r` (almost surely).
pub fn pure_with_rank(da: usize, db: usize, r: usize, g: &mut Rng) -> PureState {
    let m: CMat = linalg::ginibre(da, r, g) * linalg::ginibre(r, db, g);
    let amps: Vec<C64> = (0..da).flat_map(|j| (0..db).map(move |k| (j, k))).map(|(j, k)| m[(j, k)]).collect();
    PureState::normalizing(CVec::from_vec(amps), &[da, db]).unwrap()
}

/// Product of Haar pure states over the given block structure, with the
/// parties of `block` and the rest regrouped into party order.
pub fn biseparable(n: usize, block: &[usize], seed: u64) -> PureState {
    let rest: Vec<usize> = (0..n).filter(|p| !block.contains(p)).collect();
    let a = tanglekit::state::random_pure_state(&vec![2; block.len()], seed).unwrap();
    let b = tanglekit::state::random_pure_state(&vec![2; rest.len()], seed ^ 0x5bd1e995).unwrap();
    let joint = tensor_product(&State::Pure(a), &State::Pure(b)).unwrap().into_pure().unwrap();
    // Move qubit `order[q]` of the joint state to position `q`.
    let order: Vec<usize> = block.iter().chain(rest.iter()).copied().collect();
    let mut out = vec![C64::new(0.0, 0.0); 1 << n];
    for (i, amp) in joint.amplitudes().iter().enumerate() {
        let mut target = 0;
        for (pos, &party) in order.iter().enumerate() {
            let bit = (i >> (n - 1 - pos)) & 1;
            target |= bit << (n - 1 - party);
        }
        out[target] = *amp;
    }
    PureState::new(CVec::from_vec(out), &vec![2; n]).unwrap()
}

/// Every nontrivial cut of `n` qubits, given by the block containing 0.
pub fn cuts(n: usize) -> Vec<Vec<usize>> {
    (0..(1usize << (n - 1)) - 1)
        .map(|mask| std::iter::once(0).chain((1..n).filter(|p| (mask >> (p - 1)) & 1 == 1)).collect())
        .collect()
}

pub fn seeded(seed: u64) -> Rng {
    rng::seeded(seed)
}
