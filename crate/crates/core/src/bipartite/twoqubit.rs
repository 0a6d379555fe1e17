//! Exact and optimized two-qubit quantities.

use crate::error::{invalid, mismatch, Result};
use crate::linalg::{self, re};
use crate::optimize::{self, NelderMead};
use crate::report::BoundValue;
use crate::rng;
use crate::state::{spectral_columns, DensityMatrix, PureState};
use crate::CMat;

fn check_two_qubits(dims: &[usize]) -> Result<()> {
    if dims != [2, 2] {
        return mismatch(format!("expected a two-qubit state, got dims {dims:?}"));
    }
    Ok(())
}

/// `σ_y ⊗ σ_y`.
fn yy() -> CMat {
    let y = linalg::pauli(2);
    linalg::kron(&y, &y)
}

/// `2|ψ₀₀ψ₁₁ − ψ₀₁ψ₁₀|` on the raw amplitudes.
pub fn pure_concurrence(psi: &PureState) -> Result<f64> {
    check_two_qubits(psi.dims())?;
    let a = psi.amplitudes();
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

/// Eigenvalues `r₁ ≥ … ≥ r₄` of `ρ ρ̃`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// With `ρ = ΨΨ†` from the spectral columns, the nonzero eigenvalues of
/// `ρρ̃` are the squared singular values of `τ = Ψᵀ (σ_y⊗σ_y) Ψ`, which
/// avoids taking square roots of round-off.
pub fn r_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    check_two_qubits(rho.dims())?;
    let psi = spectral_columns(rho);
    let mut out = [0.0; 4];
    if psi.ncols() == 0 {
        return Ok(out);
    }
    let tau = psi.transpose() * yy() * &psi;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    for (o, v) in out.iter_mut().zip(s) {
        *o = v * v;
    }
    Ok(out)
}

/// Same spectrum from the Hermitian product `√ρ ρ̃ √ρ`, negatives clipped.
pub fn r_spectrum_hermitian(rho: &DensityMatrix) -> Result<[f64; 4]> {
    check_two_qubits(rho.dims())?;
    let s = linalg::sqrtm_psd(rho.matrix());
    let y = yy();
    let tilde = &y * rho.matrix().map(|z| z.conj()) * &y;
    let vals = linalg::eigvalsh(&(&s * tilde * &s));
    let mut out = [0.0; 4];
    for (o, v) in out.iter_mut().zip(vals) {
        *o = v.max(0.0);
    }
    Ok(out)
}

fn sqrt_r(rho: &DensityMatrix) -> Result<[f64; 4]> {
    Ok(r_spectrum(rho)?.map(f64::sqrt))
}

/// `max{0, √r₁ − √r₂ − √r₃ − √r₄}`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let s = sqrt_r(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// `Σ_j √r_j`.
pub fn concurrence_of_assistance(rho: &DensityMatrix) -> Result<f64> {
    Ok(sqrt_r(rho)?.iter().sum())
}

/// Entanglement of formation (bits) and geometric measure from a two-qubit
/// concurrence: `E_F = H(½(1 + √(1−C²)))`, `E_G = ½(1 − √(1−C²))`.
pub fn eof_geometric_from_concurrence(c: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&c) {
        return invalid(format!("concurrence {c} outside [0, 1]"));
    }
    let s = (1.0 - c * c).max(0.0).sqrt();
    Ok((linalg::binary_entropy(0.5 * (1.0 + s)), 0.5 * (1.0 - s)))
}

/// `⟨φ⁺|M|φ⁺⟩` for a 4×4 matrix.
fn phi_plus_expectation(m: &CMat) -> f64 {
    0.5 * (m[(0, 0)] + m[(0, 3)] + m[(3, 0)] + m[(3, 3)]).re
}

const FEF_STARTS: u64 = 32;

/// `max_{U₁⊗U₂} ⟨φ⁺|UρU†|φ⁺⟩`. Since `(U₁⊗U₂)†|φ⁺⟩ = (U₁†U₂* ⊗ 𝟙)|φ⁺⟩`
/// up to phase, a single SU(2) rotation on the first qubit is searched.
pub fn fully_entangled_fraction(rho: &DensityMatrix, seed: u64) -> Result<BoundValue> {
    check_two_qubits(rho.dims())?;
    let rho = rho.normalized();
    let id = linalg::identity(2);
    let objective = |x: &[f64]| {
        let v = linalg::kron(&linalg::su2_from_angles(x[0], x[1], x[2]), &id);
        -phi_plus_expectation(&(&v * rho.matrix() * v.adjoint()))
    };
    let mut starts = vec![vec![0.0; 3]];
    for k in 1..FEF_STARTS {
        let mut g = rng::stream(seed, k);
        starts.push((0..3).map(|_| std::f64::consts::TAU * rng::uniform(&mut g)).collect());
    }
    let opts = NelderMead { max_evals: 3000, ..Default::default() };
    let res = optimize::multistart(starts, |s| optimize::nelder_mead(objective, s, &opts));
    Ok(BoundValue::lower(-optimize::best_of(&res).f))
}

const SL_STARTS: u64 = 32;

/// `max{0, sup_{S₁⊗S₂ ∈ SL⊗SL} [2⟨φ⁺|SρS†|φ⁺⟩ − tr SρS†]}` by seeded
/// multi-start search over twelve real generator parameters.
pub fn sl_optimized_concurrence(rho: &DensityMatrix, seed: u64) -> Result<BoundValue> {
    check_two_qubits(rho.dims())?;
    let rho = rho.normalized();
    let objective = |x: &[f64]| {
        let s = linalg::kron(&linalg::sl2_from_params(&x[..6]), &linalg::sl2_from_params(&x[6..]));
        let t = &s * rho.matrix() * s.adjoint();
        let v = 2.0 * phi_plus_expectation(&t) - linalg::trace(&t).re;
        if v.is_finite() {
            -v
        } else {
            f64::INFINITY
        }
    };
    let mut starts = vec![vec![0.0; 12]];
    for k in 1..SL_STARTS {
        let mut g = rng::stream(seed, k);
        starts.push((0..12).map(|_| 0.5 * rng::normal(&mut g)).collect());
    }
    let opts = NelderMead { max_evals: 6000, initial_step: 0.3, ..Default::default() };
    let res = optimize::multistart(starts, |s| optimize::nelder_mead(objective, s, &opts));
    Ok(BoundValue::lower((-optimize::best_of(&res).f).max(0.0)))
}

/// Complete monotone set for Bell-diagonal states; `None` where undefined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalMonotones {
    pub e: [Option<f64>; 3],
    pub shifted: [Option<f64>; 3],
}

pub fn bell_diagonal_monotones(p: [f64; 4]) -> Result<BellDiagonalMonotones> {
    if p.windows(2).any(|w| w[0] < w[1] - 1e-12) || p.iter().any(|&x| x < -1e-12) {
        return invalid("Bell-diagonal weights must be non-negative and descending");
    }
    if (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return invalid("Bell-diagonal weights must sum to 1");
    }
    let e1 = p[0];
    let e2 = (p[2] + p[3] > 0.0).then(|| (1.0 - 2.0 * p[1]) / (p[2] + p[3]));
    let e3 = (p[3] > 0.0).then(|| (1.0 - 2.0 * p[1] - 2.0 * p[2]) / p[3]);
    let offsets = [0.5, 2.0, 2.0];
    let e = [Some(e1), e2, e3];
    let mut shifted = [None; 3];
    for i in 0..3 {
        shifted[i] = e[i].map(|v| (v - offsets[i]).max(0.0));
    }
    Ok(BellDiagonalMonotones { e, shifted })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzValues {
    /// `s₀ ≥ s₁ ≥ s₂ ≥ |s₃|`.
    pub s: [f64; 4],
    /// `max{0, −s₀ + s₁ + s₂}`.
    pub monotone: f64,
}

impl LorentzValues {
    /// `s₀ 𝟙⊗𝟙 + Σ_i s_i σ_i⊗σ_i`.
    pub fn normal_form_matrix(&self) -> CMat {
        (0..4).fold(CMat::zeros(4, 4), |acc, i| {
            let p = linalg::pauli(i);
            acc + linalg::kron(&p, &p) * re(self.s[i])
        })
    }
}

/// Correlation tensor `X_{μν} = tr(ρ σ_μ⊗σ_ν)`.
pub fn correlation_tensor(rho: &DensityMatrix) -> Result<nalgebra::DMatrix<f64>> {
    check_two_qubits(rho.dims())?;
    let p: Vec<CMat> = (0..4).map(linalg::pauli).collect();
    Ok(nalgebra::DMatrix::from_fn(4, 4, |m, n| (rho.matrix() * linalg::kron(&p[m], &p[n])).trace().re))
}

/// Lorentz singular values of the correlation tensor, scaled so that
/// `ρ ∼ s₀𝟙 + Σ s_i σ_i⊗σ_i`; `s₃` carries the sign of `det X`.
pub fn lorentz_singular_monotone(rho: &DensityMatrix) -> Result<LorentzValues> {
    let x = correlation_tensor(rho)?;
    let eta = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0, -1.0]));
    let m = &eta * &x * &eta * x.transpose();
    let mut sq: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re.max(0.0).sqrt() / 4.0).collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    let mut s = [sq[0], sq[1], sq[2], sq[3]];
    if x.determinant() < 0.0 {
        s[3] = -s[3];
    }
    Ok(LorentzValues { s, monotone: (-s[0] + s[1] + s[2]).max(0.0) })
}

/// Columns `φ⁺, iφ⁻, iψ⁺, ψ⁻`.
#[cfg(test)]
fn magic_basis() -> CMat {
    use crate::linalg::{IM, ZERO};
    let h = re(std::f64::consts::FRAC_1_SQRT_2);
    let ih = IM * h;
    let cols = [[h, ZERO, ZERO, h], [ih, ZERO, ZERO, -ih], [ZERO, ih, ih, ZERO], [ZERO, h, -h, ZERO]];
    CMat::from_fn(4, 4, |r, c| cols[c][r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{named_state, random_density_matrix, random_pure_state, NamedState};

    fn werner(p: f64) -> DensityMatrix {
        let bell = named_state(&NamedState::PsiMinus).unwrap().to_density();
        let mix = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        DensityMatrix::mixture(&[(p, &bell), (1.0 - p, &mix)]).unwrap()
    }

    fn bell() -> DensityMatrix {
        named_state(&NamedState::PhiPlus).unwrap().to_density()
    }

    #[test]
    fn wootters_on_werner_grid() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let c = wootters_concurrence(&werner(p)).unwrap();
            assert!((c - (0.0f64).max((3.0 * p - 1.0) / 2.0)).abs() < 1e-10, "p={p} c={c}");
        }
    }

    #[test]
    fn wootters_weight_of_bell_superposition() {
        for p in [0.1f64, 0.5, 0.9] {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let a = f64::sqrt(p) * h;
            let psi = PureState::from_reals(&[a, (1.0 - p).sqrt(), 0.0, a], &[2, 2]).unwrap();
            // Concurrence 2|ψ₀₀ψ₁₁| = p.
            assert!((wootters_concurrence(&psi.to_density()).unwrap() - p).abs() < 1e-10);
        }
    }

    #[test]
    fn wootters_matches_pure_formula() {
        for seed in 0..50 {
            let psi = random_pure_state(&[2, 2], seed).unwrap();
            let a = wootters_concurrence(&psi.to_density()).unwrap();
            assert!((a - pure_concurrence(&psi).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn r_spectrum_routes_agree() {
        let mut g = rng::seeded(2);
        for rank in 1..=4 {
            let rho = random_density_matrix(&[2, 2], rank, &mut g).unwrap();
            let a = r_spectrum(&rho).unwrap();
            let b = r_spectrum_hermitian(&rho).unwrap();
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn assistance_examples() {
        assert!((concurrence_of_assistance(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let mix = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        assert!((concurrence_of_assistance(&mix).unwrap() - 1.0).abs() < 1e-12);
        let prod = PureState::basis(&[2, 2], &[0, 1]).unwrap().to_density();
        assert!(concurrence_of_assistance(&prod).unwrap() < 1e-12);
    }

    #[test]
    fn eof_and_geometric() {
        assert_eq!(eof_geometric_from_concurrence(0.0).unwrap(), (0.0, 0.0));
        let (f, g) = eof_geometric_from_concurrence(1.0).unwrap();
        assert!((f - 1.0).abs() < 1e-12 && (g - 0.5).abs() < 1e-12);
        assert!(eof_geometric_from_concurrence(1.1).is_err());
        for seed in 0..20 {
            let psi = random_pure_state(&[2, 2], seed).unwrap();
            let c = pure_concurrence(&psi).unwrap();
            let s = super::super::entanglement_entropy(&psi, &[0]).unwrap();
            assert!((eof_geometric_from_concurrence(c).unwrap().0 - s).abs() < 1e-8);
        }
    }

    #[test]
    fn fef_examples() {
        assert!((fully_entangled_fraction(&bell(), 0).unwrap().value - 1.0).abs() < 1e-9);
        let mix = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        assert!((fully_entangled_fraction(&mix, 0).unwrap().value - 0.25).abs() < 1e-12);
        let prod = PureState::basis(&[2, 2], &[0, 1]).unwrap().to_density();
        assert!((fully_entangled_fraction(&prod, 0).unwrap().value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn fef_matches_magic_basis_oracle() {
        let q = magic_basis();
        let mut g = rng::seeded(9);
        for _ in 0..5 {
            let rho = random_density_matrix(&[2, 2], 3, &mut g).unwrap();
            let m = q.adjoint() * rho.matrix() * &q;
            let real = m.map(|z| re(z.re));
            let oracle = linalg::eigvalsh(&real)[0];
            let v = fully_entangled_fraction(&rho, 1).unwrap().value;
            assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
        }
    }

    #[test]
    fn sl_optimized_examples() {
        assert!((sl_optimized_concurrence(&bell(), 0).unwrap().value - 1.0).abs() < 1e-6);
        assert!((sl_optimized_concurrence(&werner(0.9), 0).unwrap().value - 0.85).abs() < 1e-3);
        let mix = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        assert_eq!(sl_optimized_concurrence(&mix, 0).unwrap().value, 0.0);
    }

    #[test]
    fn sl_optimized_tracks_wootters_on_entangled_states() {
        let mut g = rng::seeded(21);
        let mut checked = 0;
        while checked < 3 {
            let rho = random_density_matrix(&[2, 2], 2, &mut g).unwrap();
            let c = wootters_concurrence(&rho).unwrap();
            if c < 0.1 {
                continue;
            }
            let v = sl_optimized_concurrence(&rho, 4).unwrap().value;
            assert!((v - c).abs() < 1e-3, "{v} vs {c}");
            checked += 1;
        }
    }

    #[test]
    fn bell_diagonal_examples() {
        let m = bell_diagonal_monotones([0.7, 0.1, 0.1, 0.1]).unwrap();
        assert!((m.e[0].unwrap() - 0.7).abs() < 1e-12);
        assert!((m.e[1].unwrap() - 4.0).abs() < 1e-12);
        assert!((m.e[2].unwrap() - 6.0).abs() < 1e-12);
        assert!((m.shifted[0].unwrap() - 0.2).abs() < 1e-12);
        let psi_minus = named_state(&NamedState::PsiMinus).unwrap().to_density();
        let others: Vec<DensityMatrix> = [NamedState::PhiPlus, NamedState::PhiMinus, NamedState::PsiPlus]
            .iter()
            .map(|n| named_state(n).unwrap().to_density())
            .collect();
        let rho = DensityMatrix::mixture(&[(0.7, &psi_minus), (0.1, &others[0]), (0.1, &others[1]), (0.1, &others[2])])
            .unwrap();
        assert!((2.0 * m.shifted[0].unwrap() - wootters_concurrence(&rho).unwrap()).abs() < 1e-12);
        let m = bell_diagonal_monotones([0.5, 0.5, 0.0, 0.0]).unwrap();
        assert_eq!(m.shifted[0], Some(0.0));
        assert_eq!(m.e[1], None);
        let m = bell_diagonal_monotones([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.shifted[0], Some(0.5));
        assert!(bell_diagonal_monotones([0.1, 0.7, 0.1, 0.1]).is_err());
    }

    #[test]
    fn lorentz_examples() {
        let l = lorentz_singular_monotone(&bell()).unwrap();
        for s in l.s {
            assert!((s.abs() - 0.25).abs() < 1e-12);
        }
        assert!((l.monotone - l.s[0]).abs() < 1e-12);
        assert!(l.s[3] < 0.0);
        let prod = random_pure_state(&[2], 1).unwrap();
        let prod2 = random_pure_state(&[2], 2).unwrap();
        let p = crate::state::tensor_product(&prod.into(), &prod2.into()).unwrap().to_density();
        let l = lorentz_singular_monotone(&p).unwrap();
        assert!(l.s[1].abs() < 1e-6 && l.s[2].abs() < 1e-6 && l.monotone < 1e-6);
        let mix = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        let l = lorentz_singular_monotone(&mix).unwrap();
        assert!((l.s[0] - 0.25).abs() < 1e-12 && l.s[1..].iter().all(|s| s.abs() < 1e-12));
    }
}
