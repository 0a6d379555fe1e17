//! Local SL(2,ℂ)-invariant polynomials of qubit states built from
//! antilinear Pauli expectation values ("combs"), plus Bloch-tensor
//! quantities on density matrices.
//!
//! Throughout, `⟨σ_{s₁}…σ_{s_N}⟩ = ⟨ψ*|σ_{s₁}⊗…⊗σ_{s_N}|ψ⟩ = ψᵀ σ ψ`,
//! a bilinear form in the raw amplitudes, so every invariant here is
//! homogeneous in the amplitudes and is evaluated without normalizing.

mod four;

pub use four::{filters, four_qubit_generators, hyperdeterminant4, Filters, FourQubitInvariants};

use crate::error::{invalid, mismatch, Error, Result};
use crate::linalg::{self, re};
use crate::state::{DensityMatrix, PureState};
use crate::C64;

/// Contraction metric over `μ ∈ {0,1,2,3}`; `σ₂` never enters a contraction.
pub const METRIC: [f64; 4] = [-1.0, 1.0, 0.0, 1.0];
/// Indices with nonzero metric.
pub const CONTRACTED: [usize; 3] = [0, 1, 3];

/// Largest qubit count accepted by the generic contractions.
pub const MAX_COMB_QUBITS: usize = 10;

/// One Pauli index in `{0,1,2,3}` per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<u8>);

impl PauliString {
    pub fn new(indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i > 3) {
            return invalid("Pauli indices must lie in {0,1,2,3}");
        }
        Ok(Self(indices.iter().map(|&i| i as u8).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    /// `σ_2` everywhere except `(position, index)` overrides.
    pub fn sigma2_with(n: usize, overrides: &[(usize, usize)]) -> Self {
        let mut v = vec![2u8; n];
        for &(p, i) in overrides {
            v[p] = i as u8;
        }
        Self(v)
    }
}

pub(crate) fn check_qubits(dims: &[usize]) -> Result<()> {
    if dims.iter().any(|&d| d != 2) {
        return mismatch(format!("expected qubits only, got dims {dims:?}"));
    }
    Ok(())
}

/// `σ_s |b⟩ = phase · |b ⊕ flip⟩` with the first qubit most significant.
fn pauli_action(s: &PauliString) -> (usize, Vec<(usize, C64)>) {
    let n = s.len();
    let mut flip = 0usize;
    // Per-qubit phase for bit value 0 and 1.
    let mut phases = Vec::with_capacity(n);
    for (q, i) in s.indices().enumerate() {
        let bit = 1usize << (n - 1 - q);
        let (p0, p1) = match i {
            0 => (linalg::ONE, linalg::ONE),
            1 => (linalg::ONE, linalg::ONE),
            2 => (linalg::IM, -linalg::IM),
            _ => (linalg::ONE, -linalg::ONE),
        };
        if i == 1 || i == 2 {
            flip |= bit;
        }
        phases.push((bit, p0, p1));
    }
    let table = (0..1usize << n)
        .map(|b| {
            let ph = phases.iter().fold(linalg::ONE, |acc, &(bit, p0, p1)| acc * if b & bit == 0 { p0 } else { p1 });
            (b ^ flip, ph)
        })
        .collect();
    (flip, table)
}

/// `⟨ψ*|σ_{s₁}⊗…⊗σ_{s_N}|ψ⟩` on the raw amplitudes.
pub fn comb_expectation(psi: &PureState, s: &PauliString) -> Result<C64> {
    check_qubits(psi.dims())?;
    if s.len() != psi.n_parties() {
        return mismatch(format!("Pauli string of length {} on {} qubits", s.len(), psi.n_parties()));
    }
    Ok(expectation_raw(psi.amplitudes().as_slice(), s))
}

pub(crate) fn expectation_raw(a: &[C64], s: &PauliString) -> C64 {
    let (_, table) = pauli_action(s);
    table.iter().enumerate().map(|(b, &(b2, ph))| a[b2] * ph * a[b]).sum()
}

fn three_qubits(psi: &PureState) -> Result<()> {
    if psi.dims() != [2, 2, 2] {
        return mismatch(format!("expected three qubits, got dims {:?}", psi.dims()));
    }
    Ok(())
}

/// `4|d₁ − 2d₂ + 4d₃|` from the amplitudes.
pub fn residual_tangle(psi: &PureState) -> Result<f64> {
    three_qubits(psi)?;
    let p = |i: usize| psi.amplitudes()[i];
    let sq = |z: C64| z * z;
    let d1 = sq(p(0)) * sq(p(7)) + sq(p(1)) * sq(p(6)) + sq(p(2)) * sq(p(5)) + sq(p(3)) * sq(p(4));
    let d2 = p(0) * p(1) * p(6) * p(7)
        + p(0) * p(2) * p(5) * p(7)
        + p(0) * p(3) * p(4) * p(7)
        + p(1) * p(2) * p(5) * p(6)
        + p(1) * p(3) * p(4) * p(6)
        + p(2) * p(3) * p(4) * p(5);
    let d3 = p(0) * p(6) * p(5) * p(3) + p(4) * p(2) * p(1) * p(7);
    Ok(4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm())
}

/// `|Σ_μ g_μ ⟨σ_μσ₂σ₂⟩²|`, the comb form of the residual tangle.
pub fn residual_tangle_comb(psi: &PureState) -> Result<f64> {
    three_qubits(psi)?;
    Ok(bodd(psi.amplitudes().as_slice(), 3, 0).norm())
}

/// `τ₃ = √τ_res`, homogeneous of degree 2.
pub fn tau3(psi: &PureState) -> Result<f64> {
    Ok(residual_tangle(psi)?.sqrt())
}

/// `B_a = Σ_μ g_μ ⟨σ₂…σ_μ…σ₂⟩²` with the contraction at position `a`.
pub(crate) fn bodd(a: &[C64], n: usize, pos: usize) -> C64 {
    CONTRACTED
        .iter()
        .map(|&mu| {
            let e = expectation_raw(a, &PauliString::sigma2_with(n, &[(pos, mu)]));
            e * e * METRIC[mu]
        })
        .sum()
}

/// `B_{a,b} = Σ_{μν} g_μ g_ν ⟨…σ_μ…σ_ν…⟩²` with contractions at `a` and `b`.
pub(crate) fn bpair(a: &[C64], n: usize, p: usize, q: usize) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for &mu in &CONTRACTED {
        for &nu in &CONTRACTED {
            let e = expectation_raw(a, &PauliString::sigma2_with(n, &[(p, mu), (q, nu)]));
            s += e * e * (METRIC[mu] * METRIC[nu]);
        }
    }
    s
}

/// Degree-2 and degree-4 comb invariants of `N ≤ 10` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree24 {
    /// `⟨σ₂^{⊗N}⟩`, even `N`.
    H,
    /// `B_{a,b}`, even `N`, `a < b`.
    Pair(usize, usize),
    /// `B_a`, odd `N`.
    Odd(usize),
    /// `Σ_a B_a`, odd `N`.
    OddSym,
}

pub fn n_qubit_degree24(psi: &PureState, which: Degree24) -> Result<C64> {
    check_qubits(psi.dims())?;
    let n = psi.n_parties();
    if n > MAX_COMB_QUBITS {
        return Err(Error::Unsupported(format!("comb invariants limited to {MAX_COMB_QUBITS} qubits")));
    }
    let a = psi.amplitudes().as_slice();
    let even = n.is_multiple_of(2);
    match which {
        Degree24::H if even => Ok(expectation_raw(a, &PauliString::sigma2_with(n, &[]))),
        Degree24::Pair(p, q) if even && p < q && q < n => Ok(bpair(a, n, p, q)),
        Degree24::Odd(p) if !even && p < n => Ok(bodd(a, n, p)),
        Degree24::OddSym if !even => Ok((0..n).map(|p| bodd(a, n, p)).sum()),
        _ => invalid(format!("{which:?} is not defined for {n} qubits")),
    }
}

/// Real tensor `x_{μ₁…μ_N} = tr(ρ σ_{μ₁}⊗…⊗σ_{μ_N})`, flattened with the
/// first index most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochTensor {
    pub n: usize,
    pub x: Vec<f64>,
}

impl BlochTensor {
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.x[idx.iter().fold(0, |acc, &i| 4 * acc + i)]
    }

    /// `ρ = 2^{−N} Σ x σ⊗…⊗σ`.
    pub fn reconstruct(&self) -> crate::CMat {
        let dim = 1 << self.n;
        let mut m = crate::CMat::zeros(dim, dim);
        for (k, &v) in self.x.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let (_, table) = pauli_action(&string_of(k, self.n));
            for (b, &(b2, ph)) in table.iter().enumerate() {
                m[(b2, b)] += ph * v;
            }
        }
        m / re(dim as f64)
    }
}

fn string_of(mut k: usize, n: usize) -> PauliString {
    let mut v = vec![0u8; n];
    for q in (0..n).rev() {
        v[q] = (k % 4) as u8;
        k /= 4;
    }
    PauliString(v)
}

/// Largest qubit count for the full Bloch tensor.
pub const MAX_BLOCH_QUBITS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct BlochMinkowski {
    pub tensor: BlochTensor,
    /// `Σ Π_i η_{μ_i} x_{μ₁…μ_N}²` with `η = diag(1,−1,−1,−1)`; equals
    /// `4 det ρ` for one qubit.
    pub mink_len2: f64,
    /// `2^{−N} Σ x²`, i.e. `tr ρ²`.
    pub purity: f64,
}

pub fn bloch_minkowski(rho: &DensityMatrix) -> Result<BlochMinkowski> {
    check_qubits(rho.dims())?;
    let n = rho.n_parties();
    if n > MAX_BLOCH_QUBITS {
        return Err(Error::Unsupported(format!("Bloch tensor limited to {MAX_BLOCH_QUBITS} qubits")));
    }
    let m = rho.matrix();
    let mut x = Vec::with_capacity(1 << (2 * n));
    let mut mink = 0.0;
    let mut eucl = 0.0;
    for k in 0..1usize << (2 * n) {
        let s = string_of(k, n);
        let (_, table) = pauli_action(&s);
        // tr(ρσ) = Σ_b ⟨b|ρ σ|b⟩ = Σ_b ρ_{b, b'} phase(b).
        let v: C64 = table.iter().enumerate().map(|(b, &(b2, ph))| m[(b, b2)] * ph).sum();
        let sign: f64 = s.indices().map(|i| if i == 0 { 1.0 } else { -1.0 }).product();
        mink += sign * v.re * v.re;
        eucl += v.re * v.re;
        x.push(v.re);
    }
    Ok(BlochMinkowski { tensor: BlochTensor { n, x }, mink_len2: mink, purity: eucl / (1 << n) as f64 })
}

/// `|C|² = ¼ Σ η_μ η_κ ⟨ψ|σ_μ⊗σ_κ|ψ⟩²` for a pure two-qubit state, returned
/// as `|C|`.
pub fn concurrence_from_correlations(psi: &PureState) -> Result<f64> {
    if psi.dims() != [2, 2] {
        return mismatch(format!("expected two qubits, got dims {:?}", psi.dims()));
    }
    let bm = bloch_minkowski(&psi.to_density())?;
    Ok((0.25 * bm.mink_len2).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{named_state, random_density_matrix, random_pure_state, tensor_product, NamedState};

    fn pure(n: NamedState) -> PureState {
        named_state(&n).unwrap().into_pure().unwrap()
    }

    #[test]
    fn comb_examples() {
        let bell = pure(NamedState::PhiPlus);
        let e = comb_expectation(&bell, &PauliString::new(&[2, 2]).unwrap()).unwrap();
        assert!((e.norm() - 1.0).abs() < 1e-12);
        for seed in 0..5 {
            let q = random_pure_state(&[2], seed).unwrap();
            assert!(comb_expectation(&q, &PauliString::new(&[2]).unwrap()).unwrap().norm() < 1e-15);
        }
        let ghz4 = pure(NamedState::Ghz(4));
        let e = comb_expectation(&ghz4, &PauliString::new(&[2, 2, 2, 2]).unwrap()).unwrap();
        assert!((e - linalg::ONE).norm() < 1e-12);
        assert!(PauliString::new(&[4]).is_err());
    }

    #[test]
    fn comb_matches_dense_operator() {
        let psi = random_pure_state(&[2, 2, 2], 3).unwrap();
        let s = PauliString::new(&[1, 2, 3]).unwrap();
        let op = linalg::kron(&linalg::kron(&linalg::pauli(1), &linalg::pauli(2)), &linalg::pauli(3));
        let dense = (psi.amplitudes().transpose() * op * psi.amplitudes())[(0, 0)];
        assert!((comb_expectation(&psi, &s).unwrap() - dense).norm() < 1e-14);
    }

    #[test]
    fn tau3_examples() {
        assert!((tau3(&pure(NamedState::Ghz(3))).unwrap() - 1.0).abs() < 1e-12);
        assert!(tau3(&pure(NamedState::W(3))).unwrap() < 1e-12);
        let bell0 =
            tensor_product(&named_state(&NamedState::PhiPlus).unwrap(), &PureState::basis(&[2], &[0]).unwrap().into())
                .unwrap()
                .into_pure()
                .unwrap();
        assert!(tau3(&bell0).unwrap() < 1e-12);
    }

    #[test]
    fn tau3_forms_agree() {
        for seed in 0..100 {
            let psi = random_pure_state(&[2, 2, 2], seed).unwrap();
            let a = residual_tangle(&psi).unwrap();
            let b = residual_tangle_comb(&psi).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn degree24_examples() {
        let bell = pure(NamedState::PhiPlus);
        assert!((n_qubit_degree24(&bell, Degree24::H).unwrap().norm() - 1.0).abs() < 1e-12);
        let ghz = pure(NamedState::Ghz(3));
        assert!((n_qubit_degree24(&ghz, Degree24::Odd(0)).unwrap().norm() - 1.0).abs() < 1e-12);
        let w5 = pure(NamedState::W(5));
        assert!(n_qubit_degree24(&w5, Degree24::OddSym).unwrap().norm() < 1e-12);
        assert!(n_qubit_degree24(&w5, Degree24::H).is_err());
        let psi = random_pure_state(&[2, 2, 2], 1).unwrap();
        let b = n_qubit_degree24(&psi, Degree24::Odd(0)).unwrap().norm();
        assert!((b - residual_tangle(&psi).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn bloch_single_qubit() {
        let mut g = crate::rng::seeded(1);
        let rho = random_density_matrix(&[2], 2, &mut g).unwrap();
        let bm = bloch_minkowski(&rho).unwrap();
        let det = linalg::det(rho.matrix()).re;
        assert!((bm.mink_len2 - 4.0 * det).abs() < 1e-12);
        assert!((bm.purity - rho.purity()).abs() < 1e-12);
        assert!(linalg::hs_distance(&bm.tensor.reconstruct(), rho.matrix()) < 1e-12);
        let p = random_pure_state(&[2], 4).unwrap().to_density();
        assert!(bloch_minkowski(&p).unwrap().mink_len2.abs() < 1e-12);
    }

    #[test]
    fn bloch_two_qubits() {
        let bell = pure(NamedState::PhiPlus).to_density();
        assert!((bloch_minkowski(&bell).unwrap().mink_len2 - 4.0).abs() < 1e-12);
        let prod =
            tensor_product(&random_pure_state(&[2], 1).unwrap().into(), &random_pure_state(&[2], 2).unwrap().into())
                .unwrap()
                .to_density();
        assert!(bloch_minkowski(&prod).unwrap().mink_len2.abs() < 1e-12);
        let mut g = crate::rng::seeded(6);
        let rho = random_density_matrix(&[2, 2, 2], 3, &mut g).unwrap();
        let bm = bloch_minkowski(&rho).unwrap();
        assert!((bm.purity - rho.purity()).abs() < 1e-12);
        assert!(linalg::hs_distance(&bm.tensor.reconstruct(), rho.matrix()) < 1e-10);
    }

    #[test]
    fn correlations_give_concurrence() {
        assert!((concurrence_from_correlations(&pure(NamedState::PhiPlus)).unwrap() - 1.0).abs() < 1e-12);
        let prod = PureState::basis(&[2, 2], &[0, 1]).unwrap();
        assert!(concurrence_from_correlations(&prod).unwrap() < 1e-7);
        let (a, b) = (0.6, 0.8);
        let psi = PureState::from_reals(&[a, 0.0, 0.0, b], &[2, 2]).unwrap();
        assert!((concurrence_from_correlations(&psi).unwrap() - 2.0 * a * b).abs() < 1e-10);
        for seed in 0..20 {
            let psi = random_pure_state(&[2, 2], seed).unwrap();
            let c = crate::bipartite::pure_concurrence(&psi).unwrap();
            assert!((concurrence_from_correlations(&psi).unwrap().powi(2) - c * c).abs() < 1e-10);
        }
    }
}
