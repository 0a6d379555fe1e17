//! Bipartite measures: Schmidt data, concurrences, negativity, geometric
//! measure, and computable lower bounds for mixed states.

mod twoqubit;

pub use twoqubit::{
    bell_diagonal_monotones, concurrence_of_assistance, eof_geometric_from_concurrence, fully_entangled_fraction,
    lorentz_singular_monotone, pure_concurrence, r_spectrum, r_spectrum_hermitian, sl_optimized_concurrence,
    wootters_concurrence, BellDiagonalMonotones, LorentzValues,
};

use crate::error::{invalid, mismatch, Result};
use crate::linalg::{self, re};
use crate::optimize::{self, NelderMead};
use crate::report::BoundValue;
use crate::rng;
use crate::state::{
    self, bipartite_matrix, partial_transpose_block, DensityMatrix, LocalOperator, OperatorKind, PureState,
};
use crate::{CMat, CVec, C64};

/// Schmidt coefficients below this count as zero.
pub const SCHMIDT_TOL: f64 = 1e-10;

/// Schmidt decomposition `ψ = Σ_j √λ_j |a_j⟩|b_j⟩` across `block | rest`.
#[derive(Clone, Debug)]
pub struct SchmidtData {
    /// Descending probabilities above [`SCHMIDT_TOL`].
    pub coefficients: Vec<f64>,
    pub rank: usize,
    /// Columns `|a_j⟩`, first nonzero entry real-positive.
    pub left: CMat,
    /// Columns `|b_j⟩`.
    pub right: CMat,
}

impl SchmidtData {
    /// `Σ √λ_j |a_j⟩ ⊗ |b_j⟩` as a `d_block × d_rest` matrix.
    pub fn reconstruct(&self) -> CMat {
        let mut m = CMat::zeros(self.left.nrows(), self.right.nrows());
        for (j, l) in self.coefficients.iter().enumerate() {
            m += self.left.column(j) * self.right.column(j).transpose() * re(l.sqrt());
        }
        m
    }
}

/// Singular values and vectors of the reshaped amplitudes, descending.
fn sorted_svd(m: &CMat) -> (Vec<f64>, CMat, CMat) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V†");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let s = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut uu = CMat::zeros(u.nrows(), order.len());
    let mut vv = CMat::zeros(vt.ncols(), order.len());
    for (k, &i) in order.iter().enumerate() {
        uu.set_column(k, &u.column(i));
        vv.set_column(k, &vt.row(i).transpose());
    }
    (s, uu, vv)
}

pub fn schmidt(psi: &PureState, block: &[usize]) -> Result<SchmidtData> {
    let m = bipartite_matrix(psi, block)?;
    let norm2 = psi.norm_sqr();
    let (s, mut left, mut right) = sorted_svd(&m);
    let coefficients: Vec<f64> = s.iter().map(|x| x * x / norm2).filter(|&l| l > SCHMIDT_TOL).collect();
    let rank = coefficients.len();
    left = left.columns(0, rank).into_owned();
    right = right.columns(0, rank).into_owned();
    for j in 0..rank {
        if let Some(z) = left.column(j).iter().find(|z| z.norm() > 1e-12).copied() {
            let ph = z / z.norm();
            left.set_column(j, &(left.column(j) * ph.conj()));
            right.set_column(j, &(right.column(j) * ph));
        }
    }
    Ok(SchmidtData { coefficients, rank, left, right })
}

/// All `min(d_block, d_rest)` Schmidt probabilities, descending, for the
/// normalized state.
pub fn schmidt_probabilities(psi: &PureState, block: &[usize]) -> Result<Vec<f64>> {
    let m = bipartite_matrix(psi, block)?;
    let n2 = psi.norm_sqr();
    let mut s: Vec<f64> = m.singular_values().iter().map(|x| x * x / n2).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Normalization of the k-concurrence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KNorm {
    /// Factor `d·C(d,k)^{-1/k}`: every `C_k` equals 1 on the maximally entangled state.
    Gour,
    /// Factor `k`: `C_2 = √(2(1−tr ρ_A²))` in every dimension.
    #[default]
    DimensionFree,
}

/// `C_k = N_k (Σ_{i1<…<ik} λ_{i1}⋯λ_{ik})^{1/k}` of the normalized state.
pub fn k_concurrence(psi: &PureState, block: &[usize], k: usize, norm: KNorm) -> Result<f64> {
    let lambdas = schmidt_probabilities(psi, block)?;
    let d = lambdas.len();
    if k < 2 || k > d {
        return invalid(format!("k = {k} outside [2, {d}]"));
    }
    let e = linalg::elementary_symmetric(&lambdas, k).max(0.0);
    let factor = match norm {
        KNorm::Gour => d as f64 * linalg::binomial(d, k).powf(-1.0 / k as f64),
        KNorm::DimensionFree => k as f64,
    };
    Ok(factor * e.powf(1.0 / k as f64))
}

/// `√(2(1 − tr ρ_A²))`.
pub fn i_concurrence(psi: &PureState, block: &[usize]) -> Result<f64> {
    let p = state::reduced_purity(psi, block)?;
    Ok((2.0 * (1.0 - p)).max(0.0).sqrt())
}

/// `d (Π λ_j)^{1/d}` with `d = min(d_block, d_rest)`.
pub fn g_concurrence(psi: &PureState, block: &[usize]) -> Result<f64> {
    let lambdas = schmidt_probabilities(psi, block)?;
    let d = lambdas.len();
    Ok(d as f64 * lambdas.iter().map(|l| l.max(0.0).powf(1.0 / d as f64)).product::<f64>())
}

/// `d |det M|^{2/d}` on the raw amplitudes of a `d × d` state; homogeneous
/// of degree 2 and invariant under local SL operators.
pub fn g_concurrence_unnormalized(psi: &PureState) -> Result<f64> {
    if psi.n_parties() != 2 || psi.dims()[0] != psi.dims()[1] {
        return mismatch("unnormalized G-concurrence needs a d×d state");
    }
    let d = psi.dims()[0];
    let m = bipartite_matrix(psi, &[0])?;
    Ok(d as f64 * linalg::det(&m).norm().powf(2.0 / d as f64))
}

/// `√(Σ_{jklm} |ψ_jm ψ_lk − ψ_jk ψ_lm|²)` for a two-party state.
pub fn concurrence_vector_norm(psi: &PureState) -> Result<f64> {
    if psi.n_parties() != 2 {
        return mismatch("concurrence vector needs two parties");
    }
    let psi = psi.normalized();
    let m = bipartite_matrix(&psi, &[0])?;
    let (da, db) = (m.nrows(), m.ncols());
    let mut sum = 0.0;
    for j in 0..da {
        for l in j + 1..da {
            for k in 0..db {
                for n in k + 1..db {
                    sum += (m[(j, n)] * m[(l, k)] - m[(j, k)] * m[(l, n)]).norm_sqr();
                }
            }
        }
    }
    Ok((4.0 * sum).sqrt())
}

/// Von Neumann entropy of the block reduction, in bits.
pub fn entanglement_entropy(psi: &PureState, block: &[usize]) -> Result<f64> {
    Ok(linalg::shannon_bits(&schmidt_probabilities(psi, block)?))
}

/// `‖ρ^{T_block}‖₁`.
pub fn pt_trace_norm(rho: &DensityMatrix, block: &[usize]) -> Result<f64> {
    Ok(linalg::trace_norm_hermitian(&partial_transpose_block(rho, block)?))
}

/// `½(‖ρ^{T_block}‖₁ − tr ρ)`, clamped at 0.
pub fn negativity(rho: &DensityMatrix, block: &[usize]) -> Result<f64> {
    Ok((0.5 * (pt_trace_norm(rho, block)? - rho.trace())).max(0.0))
}

/// `log₂ (‖ρ^{T_block}‖₁ / tr ρ)`.
pub fn log_negativity(rho: &DensityMatrix, block: &[usize]) -> Result<f64> {
    Ok((pt_trace_norm(rho, block)? / rho.trace()).log2())
}

/// Negativity of a pure state from its Schmidt probabilities,
/// `((Σ√λ)² − 1)/2`.
pub fn negativity_pure(psi: &PureState, block: &[usize]) -> Result<f64> {
    let s: f64 = schmidt_probabilities(psi, block)?.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok((0.5 * (s * s - 1.0)).max(0.0))
}

/// Number of random starts for the product-state search.
const GEOMETRIC_STARTS: u64 = 8;

/// `1 − max |⟨φ_1…φ_N|ψ⟩|²` by alternating optimization over the factors.
/// The search finds feasible product states, so the value is an upper bound.
pub fn geometric_measure_pure(psi: &PureState, seed: u64) -> Result<BoundValue> {
    let psi = psi.normalized();
    let n = psi.n_parties();
    let dims = psi.dims().to_vec();
    let digits: Vec<Vec<usize>> = (0..psi.dim()).map(|i| state::digits(i, &dims)).collect();
    let mut starts: Vec<Vec<CVec>> = Vec::new();
    // Dominant eigenvectors of the single-party reductions.
    starts.push(
        (0..n)
            .map(|j| {
                let r = state::partial_trace_pure(&psi, &[j]).unwrap();
                linalg::eigh(r.matrix()).1.column(0).into_owned()
            })
            .collect(),
    );
    for k in 0..GEOMETRIC_STARTS {
        let mut r = rng::stream(seed, k);
        starts.push(
            dims.iter()
                .map(|&d| {
                    let v = CVec::from_fn(d, |_, _| rng::complex_normal(&mut r));
                    let nv = v.norm();
                    v / re(nv)
                })
                .collect(),
        );
    }
    let best = starts
        .into_iter()
        .map(|mut phi| {
            let mut last = 0.0;
            for _ in 0..2000 {
                for j in 0..n {
                    let mut w = CVec::zeros(dims[j]);
                    for (i, dg) in digits.iter().enumerate() {
                        let mut c = psi.amplitudes()[i];
                        for (k, f) in phi.iter().enumerate() {
                            if k != j {
                                c *= f[dg[k]].conj();
                            }
                        }
                        w[dg[j]] += c;
                    }
                    let nw = w.norm();
                    if nw > 0.0 {
                        phi[j] = w / re(nw);
                    }
                }
                let ov = overlap(&psi, &phi, &digits);
                if ov - last < 1e-15 {
                    last = last.max(ov);
                    break;
                }
                last = ov;
            }
            last
        })
        .fold(0.0, f64::max);
    Ok(BoundValue::upper((1.0 - best).max(0.0)))
}

fn overlap(psi: &PureState, phi: &[CVec], digits: &[Vec<usize>]) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for (i, dg) in digits.iter().enumerate() {
        let mut c = psi.amplitudes()[i];
        for (k, f) in phi.iter().enumerate() {
            c *= f[dg[k]].conj();
        }
        s += c;
    }
    s.norm_sqr()
}

/// Index pair `(jk, lm)` with `j < l` on the first block and `k < m` on the
/// second, selecting the element `ρ_{jk,lm}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelPair {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub m: usize,
}

/// All pairs `{jj, kk}` with `j < k < min(d_A, d_B)`.
pub fn diagonal_level_pairs(da: usize, db: usize) -> Vec<LevelPair> {
    let d = da.min(db);
    let mut out = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            out.push(LevelPair { j, k: j, l: k, m: k });
        }
    }
    out
}

fn huber_raw(m: &CMat, db: usize, pairs: &[LevelPair]) -> f64 {
    let at = |a: usize, b: usize| a * db + b;
    let s: f64 = pairs
        .iter()
        .map(|p| {
            let off = m[(at(p.j, p.k), at(p.l, p.m))].norm();
            let diag = (m[(at(p.j, p.m), at(p.j, p.m))].re * m[(at(p.l, p.k), at(p.l, p.k))].re).max(0.0).sqrt();
            off - diag
        })
        .sum();
    2.0 / (pairs.len() as f64).sqrt() * s
}

/// Lower bound `(2/√η) Σ_M (|ρ_{jk,lm}| − √(ρ_{jm,jm} ρ_{lk,lk}))` on the
/// concurrence across `block | rest`, clamped at 0. `pairs = None` selects
/// all `{jj, kk}`. With `lu_seed`, the bound is maximized over local unitaries.
pub fn huber_concurrence_bound(
    rho: &DensityMatrix,
    block: &[usize],
    pairs: Option<&[LevelPair]>,
    lu_seed: Option<u64>,
) -> Result<BoundValue> {
    let r = state::regroup(rho, block)?;
    let (da, db) = (r.dims()[0], r.dims()[1]);
    let default_pairs;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            default_pairs = diagonal_level_pairs(da, db);
            &default_pairs
        }
    };
    if pairs.is_empty() {
        return invalid("empty level-pair set");
    }
    for p in pairs {
        if !(p.j < p.l && p.k < p.m && p.l < da && p.m < db) {
            return invalid(format!("malformed level pair {p:?} for {da}×{db}"));
        }
    }
    let base = huber_raw(r.matrix(), db, pairs);
    let Some(seed) = lu_seed else {
        return Ok(BoundValue::lower(base.max(0.0)));
    };
    let np = da * da + db * db;
    let objective = |x: &[f64]| {
        let ua = linalg::unitary_from_hermitian(&linalg::hermitian_from_params(da, &x[..da * da]));
        let ub = linalg::unitary_from_hermitian(&linalg::hermitian_from_params(db, &x[da * da..]));
        let op = LocalOperator::from_parts(vec![ua, ub], OperatorKind::Unitary);
        let t = state::apply_local_mixed(&r, &op, false).unwrap().state;
        -huber_raw(t.matrix(), db, pairs)
    };
    let mut starts = vec![vec![0.0; np]];
    for k in 0..8 {
        let mut g = rng::stream(seed, k);
        starts.push((0..np).map(|_| rng::normal(&mut g)).collect());
    }
    let opts = NelderMead { max_evals: 4000, ..Default::default() };
    let results = optimize::multistart(starts, |s| optimize::nelder_mead(objective, s, &opts));
    let best = -optimize::best_of(&results).f;
    Ok(BoundValue::lower(best.max(base).max(0.0)))
}

/// Boundary guard for the Schmidt-number ceilings.
pub const SCHMIDT_EPS: f64 = 1e-9;

/// Lower bounds on the Schmidt number: `⌈2N + 1 − ε⌉` from the negativity
/// and `⌈2/(2 − C²) − ε⌉` from the default concurrence lower bound.
pub fn schmidt_number_bounds(rho: &DensityMatrix, block: &[usize]) -> Result<(usize, usize)> {
    let r = state::regroup(rho, block)?;
    let dmin = r.dims()[0].min(r.dims()[1]);
    let n = negativity(&r, &[0])?;
    let from_n = ((2.0 * n + 1.0 - SCHMIDT_EPS).ceil() as usize).clamp(1, dmin);
    let c = huber_concurrence_bound(&r, &[0], None, None)?.value;
    let gap = 2.0 - c * c;
    let from_c = if gap <= 1e-12 { dmin } else { ((2.0 / gap - SCHMIDT_EPS).ceil() as usize).clamp(1, dmin) };
    Ok((from_n, from_c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{named_state, random_pure_state, NamedState};

    fn max_ent(d: usize) -> PureState {
        named_state(&NamedState::MaxEntangled(d)).unwrap().into_pure().unwrap()
    }

    #[test]
    fn schmidt_of_max_entangled_and_product() {
        let s = schmidt(&max_ent(3), &[0]).unwrap();
        assert_eq!(s.rank, 3);
        assert!(s.coefficients.iter().all(|l| (l - 1.0 / 3.0).abs() < 1e-12));
        let p = PureState::basis(&[2, 3], &[1, 2]).unwrap();
        let s = schmidt(&p, &[0]).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_coefficients_and_reconstruction() {
        let psi = PureState::from_reals(&[0.6, 0.0, 0.0, 0.8], &[2, 2]).unwrap();
        let s = schmidt(&psi, &[0]).unwrap();
        assert!((s.coefficients[0] - 0.64).abs() < 1e-12 && (s.coefficients[1] - 0.36).abs() < 1e-12);
        let psi = random_pure_state(&[3, 4], 2).unwrap();
        let s = schmidt(&psi, &[0]).unwrap();
        assert!((s.coefficients.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let m = bipartite_matrix(&psi, &[0]).unwrap();
        assert!((s.reconstruct() - m).norm() < 1e-8);
        for j in 0..s.rank {
            let z = s.left.column(j).iter().find(|z| z.norm() > 1e-12).copied().unwrap();
            assert!(z.im.abs() < 1e-12 && z.re > 0.0);
        }
    }

    #[test]
    fn k_concurrence_normalizations() {
        for d in 2..=5 {
            let p = max_ent(d);
            for k in 2..=d {
                assert!((k_concurrence(&p, &[0], k, KNorm::Gour).unwrap() - 1.0).abs() < 1e-12);
            }
            assert!((k_concurrence(&p, &[0], d, KNorm::DimensionFree).unwrap() - 1.0).abs() < 1e-12);
        }
        let bell = max_ent(2);
        assert!((k_concurrence(&bell, &[0], 2, KNorm::DimensionFree).unwrap() - 1.0).abs() < 1e-12);
        assert!(k_concurrence(&bell, &[0], 3, KNorm::Gour).is_err());
    }

    #[test]
    fn k_concurrences_are_ordered() {
        let psi = random_pure_state(&[4, 4], 5).unwrap();
        let c: Vec<f64> = (2..=4).map(|k| k_concurrence(&psi, &[0], k, KNorm::Gour).unwrap()).collect();
        assert!(c[0] > c[1] && c[1] > c[2], "{c:?}");
    }

    #[test]
    fn concurrence_vector_matches_i_concurrence() {
        assert!((concurrence_vector_norm(&max_ent(2)).unwrap() - 1.0).abs() < 1e-12);
        let prod = PureState::basis(&[3, 3], &[0, 2]).unwrap();
        assert!(concurrence_vector_norm(&prod).unwrap().abs() < 1e-15);
        let psi = random_pure_state(&[3, 3], 8).unwrap();
        let a = concurrence_vector_norm(&psi).unwrap();
        let b = i_concurrence(&psi, &[0]).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn negativity_of_max_entangled() {
        for k in 2..=6 {
            let r = max_ent(k).to_density();
            assert!((negativity(&r, &[0]).unwrap() - (k as f64 - 1.0) / 2.0).abs() < 1e-9);
            assert!((negativity_pure(&max_ent(k), &[0]).unwrap() - (k as f64 - 1.0) / 2.0).abs() < 1e-9);
        }
        let bell = max_ent(2).to_density();
        assert!((log_negativity(&bell, &[0]).unwrap() - 1.0).abs() < 1e-12);
        let sep = DensityMatrix::maximally_mixed(&[2, 3]).unwrap();
        assert!(negativity(&sep, &[0]).unwrap() < 1e-15);
    }

    #[test]
    fn geometric_measure_examples() {
        let prod = PureState::basis(&[2, 2, 2], &[0, 1, 0]).unwrap();
        assert!(geometric_measure_pure(&prod, 0).unwrap().value < 1e-12);
        let bell = max_ent(2);
        assert!((geometric_measure_pure(&bell, 0).unwrap().value - 0.5).abs() < 1e-10);
        let ghz = named_state(&NamedState::Ghz(3)).unwrap().into_pure().unwrap();
        assert!((geometric_measure_pure(&ghz, 0).unwrap().value - 0.5).abs() < 1e-10);
        // W₃: maximal overlap 4/9.
        let w = named_state(&NamedState::W(3)).unwrap().into_pure().unwrap();
        assert!((geometric_measure_pure(&w, 0).unwrap().value - 5.0 / 9.0).abs() < 1e-8);
    }

    #[test]
    fn geometric_measure_matches_two_party_schmidt() {
        let psi = random_pure_state(&[3, 3], 12).unwrap();
        let l = schmidt(&psi, &[0]).unwrap().coefficients[0];
        assert!((geometric_measure_pure(&psi, 1).unwrap().value - (1.0 - l)).abs() < 1e-9);
    }

    #[test]
    fn huber_examples() {
        let bell = max_ent(2).to_density();
        let p = [LevelPair { j: 0, k: 0, l: 1, m: 1 }];
        assert!((huber_concurrence_bound(&bell, &[0], Some(&p), None).unwrap().value - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        assert_eq!(huber_concurrence_bound(&mixed, &[0], None, None).unwrap().value, 0.0);
        let bad = [LevelPair { j: 1, k: 0, l: 0, m: 1 }];
        assert!(huber_concurrence_bound(&bell, &[0], Some(&bad), None).is_err());
    }

    #[test]
    fn huber_local_unitary_optimization_recovers_rotated_bell() {
        // (H ⊗ I) applied to φ⁺ hides the coherence from the default pair set.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::from_reals(&[h * h, h * h, h * h, -h * h], &[2, 2]).unwrap();
        let rho = psi.to_density();
        let plain = huber_concurrence_bound(&rho, &[0], None, None).unwrap().value;
        let opt = huber_concurrence_bound(&rho, &[0], None, Some(3)).unwrap().value;
        assert!(plain < 0.9);
        assert!((opt - 1.0).abs() < 1e-6, "{opt}");
    }

    #[test]
    fn schmidt_number_bounds_examples() {
        let psi3 = max_ent(3).to_density();
        assert_eq!(schmidt_number_bounds(&psi3, &[0]).unwrap(), (3, 3));
        let sep = DensityMatrix::maximally_mixed(&[3, 3]).unwrap();
        assert_eq!(schmidt_number_bounds(&sep, &[0]).unwrap(), (1, 1));
    }

    #[test]
    fn entropy_of_bell() {
        assert!((entanglement_entropy(&max_ent(2), &[0]).unwrap() - 1.0).abs() < 1e-12);
    }
}
