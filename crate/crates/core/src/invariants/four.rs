use super::{bpair, expectation_raw, PauliString, CONTRACTED, METRIC};
use crate::error::{mismatch, Result};
use crate::linalg;
use crate::state::PureState;
use crate::{CMat, C64};

fn four_qubits(psi: &PureState) -> Result<()> {
    if psi.dims() != [2, 2, 2, 2] {
        return mismatch(format!("expected four qubits, got dims {:?}", psi.dims()));
    }
    Ok(())
}

fn amps(psi: &PureState, normalize: bool) -> Vec<C64> {
    if normalize {
        psi.normalized().amplitudes().as_slice().to_vec()
    } else {
        psi.amplitudes().as_slice().to_vec()
    }
}

/// Four-qubit generators in the raw (complex) convention. `h` is the
/// signed `⟨σ₂σ₂σ₂σ₂⟩`; its modulus is the degree-2 measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourQubitInvariants {
    pub h: C64,
    pub l: C64,
    pub m: C64,
    pub n: C64,
    pub b12: C64,
    pub b13: C64,
    pub b14: C64,
    pub w: C64,
    pub dxy: C64,
    pub dxz: C64,
    pub dxt: C64,
}

impl FourQubitInvariants {
    /// Degree in the amplitudes, by field name.
    pub const DEGREES: [(&'static str, i32); 11] = [
        ("H", 2),
        ("L", 4),
        ("M", 4),
        ("N", 4),
        ("B12", 4),
        ("B13", 4),
        ("B14", 4),
        ("W", 6),
        ("Dxy", 6),
        ("Dxz", 6),
        ("Dxt", 6),
    ];

    pub fn values(&self) -> [C64; 11] {
        [self.h, self.l, self.m, self.n, self.b12, self.b13, self.b14, self.w, self.dxy, self.dxz, self.dxt]
    }
}

fn at(a: &[C64], i: usize, j: usize, k: usize, l: usize) -> C64 {
    a[8 * i + 4 * j + 2 * k + l]
}

/// `det [ψ_{ijkl}]` with rows `(k,l)` and columns `(i,j)` after permuting
/// the qubits by `perm`.
fn quartic_det(a: &[C64], perm: [usize; 4]) -> C64 {
    let m = CMat::from_fn(4, 4, |r, c| {
        let d = [c >> 1, c & 1, r >> 1, r & 1];
        let mut src = [0; 4];
        for (q, &p) in perm.iter().enumerate() {
            src[p] = d[q];
        }
        at(a, src[0], src[1], src[2], src[3])
    });
    linalg::det(&m)
}

/// Determinant of the 3×3 coefficient matrix of the biquadratic form
/// `det_{rs}[Σ ψ x y]` obtained by contracting the two parties in
/// `contract` and keeping the two in `keep`.
fn biquadratic_det(a: &[C64], keep: [usize; 2], contract: [usize; 2]) -> C64 {
    let mut c = CMat::zeros(3, 3);
    let idx = |p: usize, q: usize, r: usize, s: usize| {
        let mut d = [0; 4];
        d[keep[0]] = p;
        d[keep[1]] = q;
        d[contract[0]] = r;
        d[contract[1]] = s;
        8 * d[0] + 4 * d[1] + 2 * d[2] + d[3]
    };
    for i in 0..2 {
        for i2 in 0..2 {
            for j in 0..2 {
                for j2 in 0..2 {
                    let v = a[idx(i, j, 0, 0)] * a[idx(i2, j2, 1, 1)] - a[idx(i, j, 0, 1)] * a[idx(i2, j2, 1, 0)];
                    c[(i + i2, j + j2)] += v;
                }
            }
        }
    }
    linalg::det(&c)
}

fn comb4(a: &[C64], s: [usize; 4]) -> C64 {
    expectation_raw(a, &PauliString::new(&s).expect("valid indices"))
}

/// Table `t[μ][ν] = ⟨…σ_μ…σ_ν…⟩` with `σ₂` at the two other positions.
fn pair_table(a: &[C64], p: usize, q: usize) -> [[C64; 4]; 4] {
    let mut t = [[C64::new(0.0, 0.0); 4]; 4];
    for &mu in &CONTRACTED {
        for &nu in &CONTRACTED {
            let mut s = [2; 4];
            s[p] = mu;
            s[q] = nu;
            t[mu][nu] = comb4(a, s);
        }
    }
    t
}

pub fn four_qubit_generators(psi: &PureState, normalize: bool) -> Result<FourQubitInvariants> {
    four_qubits(psi)?;
    let a = amps(psi, normalize);
    let h = comb4(&a, [2; 4]);
    let l = quartic_det(&a, [0, 1, 2, 3]);
    // Exchanging two qubits permutes columns and rows oddly, hence the sign.
    let m = -quartic_det(&a, [0, 2, 1, 3]);
    let n = -quartic_det(&a, [0, 3, 2, 1]);
    let (b12, b13, b14) = (bpair(&a, 4, 0, 1), bpair(&a, 4, 0, 2), bpair(&a, 4, 0, 3));
    let dxy = biquadratic_det(&a, [0, 1], [2, 3]);
    let dxz = biquadratic_det(&a, [0, 2], [1, 3]);
    let dxt = biquadratic_det(&a, [0, 3], [1, 2]);
    Ok(FourQubitInvariants { h, l, m, n, b12, b13, b14, w: dxy + dxz + dxt, dxy, dxz, dxt })
}

/// Degree-6, 8 and 12 filters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Filters {
    pub f1: C64,
    pub f2: C64,
    pub f3: C64,
}

pub fn filters(psi: &PureState) -> Result<Filters> {
    four_qubits(psi)?;
    let a = psi.amplitudes().as_slice();
    let ab = pair_table(a, 0, 1);
    let ac = pair_table(a, 0, 2);
    let bc = pair_table(a, 1, 2);
    let bd = pair_table(a, 1, 3);
    let cd = pair_table(a, 2, 3);
    let mut f1 = C64::new(0.0, 0.0);
    let mut f2 = C64::new(0.0, 0.0);
    for &mu in &CONTRACTED {
        for &nu in &CONTRACTED {
            for &la in &CONTRACTED {
                let g3 = METRIC[mu] * METRIC[nu] * METRIC[la];
                f1 += ab[mu][nu] * ac[mu][la] * bc[nu][la] * g3;
                for &ta in &CONTRACTED {
                    f2 += ab[mu][nu] * ac[mu][la] * bd[nu][ta] * cd[la][ta] * (g3 * METRIC[ta]);
                }
            }
        }
    }
    let f3 = 0.5 * bpair(a, 4, 0, 1) * bpair(a, 4, 0, 2) * bpair(a, 4, 0, 3);
    Ok(Filters { f1, f2, f3 })
}

/// Degree-24 hyperdeterminant assembled from `H, L, M, N, W` and `F₁`.
pub fn hyperdeterminant4(psi: &PureState) -> Result<C64> {
    let g = four_qubit_generators(psi, false)?;
    let f1 = filters(psi)?.f1;
    let (h, w) = (g.h, g.w);
    let sigma = g.l * g.l + g.m * g.m + g.n * g.n;
    let pi = (g.l - g.m) * (g.m - g.n) * (g.n - g.l);
    let a = h.powi(9) * (5.0 / 512.0) + w * h.powi(6) * (5.0 / 16.0) - sigma * h.powi(5) * 4.5
        + (w * w * 5.0 - pi * 24.0) * h.powi(3) * 2.0
        - w * sigma * h * h * 240.0
        + sigma * sigma * h * 768.0
        + w * (w * w * 3.0 + pi * 8.0) * 192.0;
    let b = h.powi(8) / 256.0 - sigma * h.powi(4) * 8.5 - pi * h * h * 96.0 + sigma * sigma * 256.0;
    let c = pi * 256.0 + h.powi(6) / 8.0;
    let rhs = -f1 * a * 2.0 + (sigma * 128.0 - h.powi(4)) * b - c * c;
    Ok(rhs / (4096.0 * 27.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{named_state, random_pure_state, tensor_product, NamedState, State};

    fn pure(n: NamedState) -> PureState {
        named_state(&n).unwrap().into_pure().unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn generator_identities_on_random_states() {
        for seed in 0..1000 {
            let psi = random_pure_state(&[2, 2, 2, 2], seed).unwrap();
            let g = four_qubit_generators(&psi, false).unwrap();
            let f1 = filters(&psi).unwrap().f1;
            assert!(close(g.l + g.m + g.n, C64::new(0.0, 0.0), 1e-9));
            assert!(close(g.l, (g.b13 - g.b14) / 48.0, 1e-9));
            assert!(close(g.m, (g.b14 - g.b12) / 48.0, 1e-9));
            assert!(close(g.n, (g.b12 - g.b13) / 48.0, 1e-9));
            assert!(close(g.h * g.h, (g.b12 + g.b13 + g.b14) / 3.0, 1e-9));
            assert!(close(f1, g.w * 32.0 - g.h.powi(3), 1e-9));
            assert!(close(g.h * (g.n - g.m) * 0.5, g.dxy * 3.0 - g.w, 1e-9));
            assert!(close(g.h * (g.l - g.n) * 0.5, g.dxz * 3.0 - g.w, 1e-9));
            assert!(close(g.h * (g.m - g.l) * 0.5, g.dxt * 3.0 - g.w, 1e-9));
        }
    }

    #[test]
    fn quartics_are_reduced_determinants() {
        use crate::state::partial_trace_pure;
        for seed in 0..50 {
            let psi = random_pure_state(&[2, 2, 2, 2], seed).unwrap();
            let g = four_qubit_generators(&psi, false).unwrap();
            for (v, keep) in [(g.l, [0, 1]), (g.m, [0, 2]), (g.n, [0, 3])] {
                let d = linalg::det(partial_trace_pure(&psi, &keep).unwrap().matrix()).re;
                assert!((v.norm_sqr() - d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn named_examples() {
        let g = four_qubit_generators(&pure(NamedState::Ghz(4)), false).unwrap();
        assert!(close(g.h, C64::new(1.0, 0.0), 1e-12));
        assert!(g.l.norm() < 1e-12 && g.m.norm() < 1e-12 && g.n.norm() < 1e-12);
        let d2 = pure(NamedState::Dicke { n: 4, k: 2 });
        assert!(close(four_qubit_generators(&d2, false).unwrap().h, C64::new(1.0, 0.0), 1e-12));
        assert!(close(filters(&d2).unwrap().f1, C64::new(-5.0 / 9.0, 0.0), 1e-12));
    }

    #[test]
    fn table_family_polynomials() {
        for lambda in [0.0, 0.3, 1.0, 1.7] {
            let psi = pure(NamedState::DickeSuperposition {
                n: 4,
                terms: vec![(0, 1.0), (4, 1.0), (2, lambda)],
                normalize: false,
            });
            let h = four_qubit_generators(&psi, false).unwrap().h;
            assert!(close(h, C64::new(2.0 + lambda * lambda, 0.0), 1e-12));
            let l2 = lambda * lambda;
            let f = -8.0 + 4.0 * l2 - (102.0 * l2 * l2 + 5.0 * l2 * l2 * l2) / 9.0;
            assert!(close(filters(&psi).unwrap().f1, C64::new(f, 0.0), 1e-10));
        }
    }

    #[test]
    fn normalize_flag_rescales_by_degree() {
        let psi = random_pure_state(&[2, 2, 2, 2], 9).unwrap();
        let scaled = PureState::new_unnormalized(psi.amplitudes() * C64::new(1.5, 0.0), &[2, 2, 2, 2]).unwrap();
        let raw = four_qubit_generators(&scaled, false).unwrap().values();
        let norm = four_qubit_generators(&scaled, true).unwrap().values();
        for ((_, deg), (r, n)) in FourQubitInvariants::DEGREES.iter().zip(raw.iter().zip(norm.iter())) {
            assert!(close(*r, n * 1.5f64.powi(*deg), 1e-10));
        }
    }

    fn biseparable(seed: u64, cut: &[usize]) -> PureState {
        let k = cut.len();
        let a = random_pure_state(&vec![2; k], seed).unwrap();
        let b = random_pure_state(&vec![2; 4 - k], seed + 7).unwrap();
        let prod = tensor_product(&State::Pure(a), &State::Pure(b)).unwrap().into_pure().unwrap();
        let rest: Vec<usize> = (0..4).filter(|q| !cut.contains(q)).collect();
        let order: Vec<usize> = cut.iter().chain(rest.iter()).copied().collect();
        let mut v = crate::CVec::zeros(16);
        for (src, amp) in prod.amplitudes().iter().enumerate() {
            let mut dst = 0;
            for (pos, &q) in order.iter().enumerate() {
                if src >> (3 - pos) & 1 == 1 {
                    dst |= 1 << (3 - q);
                }
            }
            v[dst] = *amp;
        }
        PureState::new(v, &[2, 2, 2, 2]).unwrap()
    }

    #[test]
    fn filters_vanish_on_biseparable_states() {
        let cuts: [&[usize]; 7] = [&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
        for seed in 0..150 {
            for cut in cuts {
                let f = filters(&biseparable(seed, cut)).unwrap();
                assert!(f.f1.norm() < 1e-9 && f.f2.norm() < 1e-9 && f.f3.norm() < 1e-9, "{cut:?}");
            }
        }
        let bb =
            tensor_product(&named_state(&NamedState::PhiPlus).unwrap(), &named_state(&NamedState::PhiPlus).unwrap())
                .unwrap()
                .into_pure()
                .unwrap();
        let f = filters(&bb).unwrap();
        assert!(f.f1.norm() < 1e-10 && f.f2.norm() < 1e-10 && f.f3.norm() < 1e-10);
    }

    #[test]
    fn hyperdeterminant_vanishes_on_singular_states() {
        for seed in 0..20 {
            let mut v = random_pure_state(&[2, 2, 2, 2], seed).unwrap().amplitudes().clone();
            for i in [0, 8, 4, 2, 1] {
                v[i] = C64::new(0.0, 0.0);
            }
            let deg = PureState::normalizing(v, &[2, 2, 2, 2]).unwrap();
            let gen = random_pure_state(&[2, 2, 2, 2], seed + 100).unwrap();
            let (d0, d1) = (hyperdeterminant4(&deg).unwrap().norm(), hyperdeterminant4(&gen).unwrap().norm());
            assert!(d0 < 1e-20 && d1 > 1e3 * d0.max(1e-22), "{d0} {d1}");
        }
    }

    #[test]
    fn hyperdeterminant_examples() {
        let x4 = hyperdeterminant4(&pure(NamedState::X4)).unwrap().norm();
        let ghz = hyperdeterminant4(&pure(NamedState::Ghz(4))).unwrap().norm();
        let cl = hyperdeterminant4(&pure(NamedState::Cluster4)).unwrap().norm();
        assert!(ghz < 1e-15 && cl < 1e-15 && x4 > 1e-9);
        let prod = PureState::basis(&[2, 2, 2, 2], &[0, 1, 1, 0]).unwrap();
        assert!(hyperdeterminant4(&prod).unwrap().norm() < 1e-15);
    }
}
