use super::{check_dims, total_dim, DensityMatrix, PureState, State};
use crate::error::{invalid, Result};
use crate::linalg::{self, re};
use crate::{CMat, CVec, C64};

/// Named states. Pure states are normalized unless stated otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum NamedState {
    /// Product basis state `|digits⟩`.
    Basis {
        dims: Vec<usize>,
        digits: Vec<usize>,
    },
    /// `Σ_j |jj⟩ / √d`.
    MaxEntangled(usize),
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    /// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
    Ghz(usize),
    /// `(|0…0⟩ − |1…1⟩)/√2`.
    GhzMinus(usize),
    /// Equal superposition of single excitations.
    W(usize),
    /// Bit-flipped W: equal superposition of all states with one zero.
    WBar(usize),
    /// Symmetric state with `k` excitations on `n` qubits.
    Dicke {
        n: usize,
        k: usize,
    },
    /// `Σ c_k D^{(k)}_n` with normalized Dicke components. With
    /// `normalize = false` the sum is kept as is and flagged unnormalized.
    DickeSuperposition {
        n: usize,
        terms: Vec<(usize, f64)>,
        normalize: bool,
    },
    /// `½(|0000⟩+|0111⟩+|1011⟩+|1100⟩)`.
    Cluster4,
    /// `(√2|1111⟩+|0001⟩+|0010⟩+|0100⟩+|1000⟩)/√6`.
    X4,
    /// `λ0|000⟩ + λ1 e^{iφ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩`.
    Acin {
        lambdas: [f64; 5],
        phi: f64,
    },
    /// Normalized mixture of the six three-qubit basis states other than
    /// |000⟩ and |111⟩.
    RhoR,
}

fn qubits(n: usize) -> Vec<usize> {
    vec![2; n]
}

fn from_indices(n: usize, entries: &[(usize, C64)]) -> Result<PureState> {
    let dims = qubits(n);
    check_dims(&dims)?;
    let mut v = CVec::zeros(total_dim(&dims));
    for &(i, a) in entries {
        v[i] += a;
    }
    PureState::normalizing(v, &dims)
}

fn dicke_vector(n: usize, k: usize) -> Result<CVec> {
    if n < 1 || k > n {
        return invalid(format!("Dicke state needs 0 ≤ k ≤ n, got n={n}, k={k}"));
    }
    let mut v = CVec::zeros(1 << n);
    let norm = linalg::binomial(n, k).sqrt();
    for i in 0..(1usize << n) {
        if i.count_ones() as usize == k {
            v[i] = re(1.0 / norm);
        }
    }
    Ok(v)
}

fn check_qubit_count(n: usize, min: usize) -> Result<()> {
    if n < min || n > 12 {
        return invalid(format!("qubit count {n} outside [{min}, 12]"));
    }
    Ok(())
}

/// Constructs a named state.
pub fn named_state(name: &NamedState) -> Result<State> {
    use NamedState::*;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pure = match name {
        Basis { dims, digits } => PureState::basis(dims, digits)?,
        MaxEntangled(d) => {
            let d = *d;
            if d < 2 {
                return invalid("maximally entangled state needs d ≥ 2");
            }
            let mut v = CVec::zeros(d * d);
            for j in 0..d {
                v[j * d + j] = re(1.0);
            }
            PureState::normalizing(v, &[d, d])?
        }
        PhiPlus => from_indices(2, &[(0, re(h)), (3, re(h))])?,
        PhiMinus => from_indices(2, &[(0, re(h)), (3, re(-h))])?,
        PsiPlus => from_indices(2, &[(1, re(h)), (2, re(h))])?,
        PsiMinus => from_indices(2, &[(1, re(h)), (2, re(-h))])?,
        Ghz(n) | GhzMinus(n) => {
            check_qubit_count(*n, 2)?;
            let s = if matches!(name, Ghz(_)) { 1.0 } else { -1.0 };
            from_indices(*n, &[(0, re(1.0)), ((1 << n) - 1, re(s))])?
        }
        W(n) => {
            check_qubit_count(*n, 2)?;
            PureState::normalizing(dicke_vector(*n, 1)?, &qubits(*n))?
        }
        WBar(n) => {
            check_qubit_count(*n, 2)?;
            PureState::normalizing(dicke_vector(*n, n - 1)?, &qubits(*n))?
        }
        Dicke { n, k } => {
            check_qubit_count(*n, 1)?;
            PureState::normalizing(dicke_vector(*n, *k)?, &qubits(*n))?
        }
        DickeSuperposition { n, terms, normalize } => {
            check_qubit_count(*n, 1)?;
            let mut v = CVec::zeros(1 << n);
            for &(k, c) in terms {
                v += dicke_vector(*n, k)? * re(c);
            }
            if *normalize {
                PureState::normalizing(v, &qubits(*n))?
            } else {
                PureState::new_unnormalized(v, &qubits(*n))?
            }
        }
        Cluster4 => from_indices(4, &[(0b0000, re(1.0)), (0b0111, re(1.0)), (0b1011, re(1.0)), (0b1100, re(1.0))])?,
        X4 => from_indices(
            4,
            &[(0b1111, re(2f64.sqrt())), (0b0001, re(1.0)), (0b0010, re(1.0)), (0b0100, re(1.0)), (0b1000, re(1.0))],
        )?,
        Acin { lambdas, phi } => {
            if lambdas.iter().any(|&l| l < 0.0) || !(0.0..=std::f64::consts::PI).contains(phi) {
                return invalid("Acin parameters need λ_k ≥ 0 and 0 ≤ φ ≤ π");
            }
            let s: f64 = lambdas.iter().map(|l| l * l).sum();
            if (s - 1.0).abs() > 1e-9 {
                return invalid(format!("Acin parameters need Σλ² = 1, got {s}"));
            }
            let l = lambdas;
            let mut v = CVec::zeros(8);
            v[0b000] = re(l[0]);
            v[0b100] = C64::from_polar(l[1], *phi);
            v[0b101] = re(l[2]);
            v[0b110] = re(l[3]);
            v[0b111] = re(l[4]);
            PureState::new(v, &[2, 2, 2])?
        }
        RhoR => {
            let mut m = CMat::zeros(8, 8);
            for i in 1..7 {
                m[(i, i)] = re(1.0 / 6.0);
            }
            return Ok(State::Mixed(DensityMatrix::from_parts(m, qubits(3), true)));
        }
    };
    Ok(State::Pure(pure))
}
