//! Measures over bipartitions of many parties: one-tangles, pairwise
//! concurrences, monogamy relations and bounds on the concurrence of
//! genuine multipartite entanglement.

use rayon::prelude::*;

use crate::bipartite::{negativity, wootters_concurrence};
use crate::error::{invalid, mismatch, Error, Result};
use crate::invariants::{self, Degree24};
use crate::report::BoundValue;
use crate::state::{join_digits, partial_trace, partial_trace_pure, reduced_purity, DensityMatrix, PureState, State};
use crate::CVec;

/// Largest party count for which all bipartitions are enumerated.
pub const MAX_BIPARTITION_PARTIES: usize = 12;

/// A cut `block | complement`. The stored block is the lexicographically
/// smaller of the two, i.e. the one holding party 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    block: Vec<usize>,
    n: usize,
}

impl Bipartition {
    pub fn new(block: &[usize], n: usize) -> Result<Self> {
        let mut b = block.to_vec();
        b.sort_unstable();
        b.dedup();
        if b.len() != block.len() || b.iter().any(|&p| p >= n) {
            return invalid(format!("invalid block {block:?} for {n} parties"));
        }
        if b.is_empty() || b.len() == n {
            return invalid("both sides of a bipartition must be non-empty");
        }
        if b[0] != 0 {
            b = (0..n).filter(|p| !b.contains(p)).collect();
        }
        Ok(Self { block: b, n })
    }

    pub fn block(&self) -> &[usize] {
        &self.block
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|p| !self.block.contains(p)).collect()
    }

    pub fn contains(&self, party: usize) -> bool {
        self.block.contains(&party)
    }

    /// All `2^{n−1} − 1` cuts of `n` parties.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        if n < 2 {
            return invalid("bipartitions need at least two parties");
        }
        if n > MAX_BIPARTITION_PARTIES {
            return Err(Error::Unsupported(format!(
                "bipartition enumeration limited to {MAX_BIPARTITION_PARTIES} parties"
            )));
        }
        Ok((0..(1usize << (n - 1)) - 1)
            .map(|mask| {
                // Party 0 is always in the block; `mask` picks the others.
                let block = std::iter::once(0).chain((1..n).filter(|p| mask >> (p - 1) & 1 == 1)).collect();
                Self { block, n }
            })
            .collect())
    }
}

fn check_party(n: usize, j: usize) -> Result<()> {
    if j >= n {
        return Err(Error::InvalidParty { index: j, parties: n });
    }
    Ok(())
}

fn check_qubit_party(dims: &[usize], j: usize) -> Result<()> {
    check_party(dims.len(), j)?;
    if dims[j] != 2 {
        return mismatch(format!("party {j} has dimension {}, expected a qubit", dims[j]));
    }
    Ok(())
}

/// `τ_j = 2(1 − tr ρ_j²)`, the squared one-party concurrence.
pub fn one_tangle(psi: &PureState, j: usize) -> Result<f64> {
    check_qubit_party(psi.dims(), j)?;
    Ok((2.0 * (1.0 - reduced_purity(psi, &[j])?)).max(0.0))
}

/// Mean one-tangle over all parties.
pub fn global_entanglement(psi: &PureState) -> Result<f64> {
    let n = psi.n_parties();
    let mut s = 0.0;
    for j in 0..n {
        s += one_tangle(psi, j)?;
    }
    Ok(s / n as f64)
}

fn two_party_reduced(state: &State, j: usize, k: usize) -> Result<DensityMatrix> {
    let dims = state.dims();
    check_qubit_party(dims, j)?;
    check_qubit_party(dims, k)?;
    if j == k {
        return invalid("pairwise concurrence needs two distinct parties");
    }
    let keep = [j.min(k), j.max(k)];
    match state {
        State::Pure(p) => partial_trace_pure(p, &keep),
        State::Mixed(m) => partial_trace(m, &keep),
    }
}

/// Wootters concurrence of the reduced state of qubits `j` and `k`.
pub fn pairwise_concurrence(state: &State, j: usize, k: usize) -> Result<f64> {
    wootters_concurrence(&two_party_reduced(state, j, k)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    /// `lhs ≥ rhs`.
    Inequality,
    /// `lhs = rhs`.
    Equality,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonogamyRelation {
    pub name: &'static str,
    pub kind: RelationKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub slack: f64,
}

impl MonogamyRelation {
    fn new(name: &'static str, kind: RelationKind, lhs: f64, rhs: f64) -> Self {
        Self { name, kind, lhs, rhs, slack: lhs - rhs }
    }

    pub fn holds(&self, tol: f64) -> bool {
        match self.kind {
            RelationKind::Inequality => self.slack >= -tol,
            RelationKind::Equality => self.slack.abs() <= tol,
        }
    }
}

pub type MonogamyAudit = Vec<MonogamyRelation>;

/// Monogamy relations for party `j` of a pure qubit state.
///
/// Always: `τ_j ≥ Σ_k C²_{jk}` and `N²_{j|rest} ≥ Σ_k N²_{jk}`.
/// Three qubits add `τ_j = Σ_k C²_{jk} + τ₃²`; four qubits add
/// `τ₂ = ⅓(4τ₁ − |H|²)` with `τ₁` the mean one-tangle and `τ₂` the mean
/// squared concurrence over the 2|2 cuts.
pub fn monogamy_audit(psi: &PureState, j: usize) -> Result<MonogamyAudit> {
    if !psi.is_qubits() {
        return mismatch("monogamy audit needs qubits only");
    }
    let n = psi.n_parties();
    check_party(n, j)?;
    if n < 3 {
        return invalid("monogamy relations need at least three qubits");
    }
    let state = State::Pure(psi.clone());
    let tau = one_tangle(psi, j)?;
    let others: Vec<usize> = (0..n).filter(|&k| k != j).collect();
    let mut c2 = 0.0;
    let mut n2 = 0.0;
    for &k in &others {
        let rho = two_party_reduced(&state, j, k)?;
        c2 += wootters_concurrence(&rho)?.powi(2);
        // Party `j` is first or second within the pair.
        n2 += (2.0 * negativity(&rho, &[usize::from(k < j)])?).powi(2);
    }
    let nj = 2.0 * negativity(&psi.to_density(), &[j])?;
    let mut out = vec![
        MonogamyRelation::new("osborne_verstraete", RelationKind::Inequality, tau, c2),
        MonogamyRelation::new("ou_fan", RelationKind::Inequality, nj * nj, n2),
    ];
    if n == 3 {
        let t3 = invariants::tau3(psi)?;
        out.push(MonogamyRelation::new("ckw", RelationKind::Equality, tau, c2 + t3 * t3));
    }
    if n == 4 {
        let tau1 = global_entanglement(psi)?;
        let tau2 = [[0, 1], [0, 2], [0, 3]]
            .iter()
            .map(|b| reduced_purity(psi, b).map(|p| 2.0 * (1.0 - p)))
            .sum::<Result<f64>>()?
            / 3.0;
        let h = invariants::n_qubit_degree24(psi, Degree24::H)?.norm();
        out.push(MonogamyRelation::new("gour", RelationKind::Equality, tau2, (4.0 * tau1 - h * h) / 3.0));
    }
    Ok(out)
}

/// `min_γ √(2(1 − tr ρ_γ²))` over all bipartitions.
pub fn gme_concurrence_pure(psi: &PureState) -> Result<f64> {
    let n = psi.n_parties();
    if n < 3 {
        return invalid("GME concurrence needs at least three parties");
    }
    let cuts = Bipartition::all(n)?;
    let vals = cuts
        .par_iter()
        .map(|c| reduced_purity(psi, c.block()).map(|p| (2.0 * (1.0 - p)).max(0.0).sqrt()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
}

/// Off-diagonal element `ρ_{M,M′}` given as two digit strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPair {
    pub m: Vec<usize>,
    pub m_prime: Vec<usize>,
}

impl IndexPair {
    pub fn new(m: &[usize], m_prime: &[usize]) -> Self {
        Self { m: m.to_vec(), m_prime: m_prime.to_vec() }
    }
}

/// Choice of the index-pair set `𝓜`.
#[derive(Clone, Debug, PartialEq)]
pub enum GmePairs {
    /// The single pair `{0…0, 1…1}`.
    Ghz,
    /// All pairs of distinct qubit strings of Hamming weight `k`.
    Dicke {
        k: usize,
    },
    Custom(Vec<IndexPair>),
}

impl GmePairs {
    fn resolve(&self, dims: &[usize]) -> Result<Vec<IndexPair>> {
        let n = dims.len();
        let pairs = match self {
            GmePairs::Ghz => vec![IndexPair::new(&vec![0; n], &vec![1; n])],
            GmePairs::Dicke { k } => {
                if dims.iter().any(|&d| d != 2) || *k == 0 || *k >= n {
                    return invalid(format!("Dicke pairs need qubits and 0 < k < {n}"));
                }
                let strings: Vec<Vec<usize>> = (0..1usize << n)
                    .filter(|i| i.count_ones() as usize == *k)
                    .map(|i| (0..n).map(|q| i >> (n - 1 - q) & 1).collect())
                    .collect();
                let mut out = Vec::new();
                for a in 0..strings.len() {
                    for b in a + 1..strings.len() {
                        out.push(IndexPair::new(&strings[a], &strings[b]));
                    }
                }
                out
            }
            GmePairs::Custom(p) => p.clone(),
        };
        if pairs.is_empty() {
            return invalid("index-pair set is empty");
        }
        for p in &pairs {
            let ok = |s: &[usize]| s.len() == n && s.iter().zip(dims).all(|(&x, &d)| x < d);
            if !ok(&p.m) || !ok(&p.m_prime) || p.m == p.m_prime {
                return invalid(format!("malformed index pair {:?}/{:?}", p.m, p.m_prime));
            }
        }
        Ok(pairs)
    }
}

/// Lower bound on the convex-roof GME concurrence from selected
/// off-diagonal elements,
/// `(2/√η) [Σ |ρ_{M,M′}| − Σ′ √(ρ_{KL′,KL′} ρ_{K′L,K′L})]`, clamped at 0.
///
/// Each distinct diagonal product enters the primed sum with the largest
/// multiplicity it reaches within a single bipartition.
pub fn gme_concurrence_bound(rho: &DensityMatrix, pairs: &GmePairs) -> Result<BoundValue> {
    let dims = rho.dims().to_vec();
    let n = dims.len();
    if n < 3 {
        return invalid("GME concurrence needs at least three parties");
    }
    let pairs = pairs.resolve(&dims)?;
    let rho = rho.normalized();
    let m = rho.matrix();
    let cuts = Bipartition::all(n)?;
    let mut off = 0.0;
    for p in &pairs {
        off += m[(join_digits(&p.m, &dims), join_digits(&p.m_prime, &dims))].norm();
    }
    // Diagonal products keyed by their unordered index pair.
    let mut weight: std::collections::HashMap<(usize, usize), usize> = Default::default();
    for cut in &cuts {
        let mut here: std::collections::HashMap<(usize, usize), usize> = Default::default();
        for p in &pairs {
            let mut a = p.m.clone();
            let mut b = p.m_prime.clone();
            for q in cut.complement() {
                std::mem::swap(&mut a[q], &mut b[q]);
            }
            let (ia, ib) = (join_digits(&a, &dims), join_digits(&b, &dims));
            *here.entry((ia.min(ib), ia.max(ib))).or_default() += 1;
        }
        for (key, c) in here {
            let w = weight.entry(key).or_default();
            *w = (*w).max(c);
        }
    }
    let diag: f64 =
        weight.iter().map(|(&(a, b), &c)| c as f64 * (m[(a, a)].re.max(0.0) * m[(b, b)].re.max(0.0)).sqrt()).sum();
    let eta = pairs.len() as f64;
    Ok(BoundValue::lower((2.0 / eta.sqrt() * (off - diag)).max(0.0)))
}

/// `min_γ N_γ(ρ)`, an upper bound on the genuine multipartite negativity
/// (the minimization over PPT mixtures is omitted).
pub fn min_bipartition_negativity(rho: &DensityMatrix) -> Result<BoundValue> {
    let n = rho.n_parties();
    if n < 3 {
        return invalid("multipartite negativity needs at least three parties");
    }
    let cuts = Bipartition::all(n)?;
    let vals = cuts.par_iter().map(|c| negativity(rho, c.block())).collect::<Result<Vec<f64>>>()?;
    Ok(BoundValue::upper(vals.into_iter().fold(f64::INFINITY, f64::min)))
}

/// `Σ φ_{jkl}|jkl⟩ ↦ Σ φ_{jkl}|jkll⟩`.
pub fn telescope(psi: &PureState) -> Result<PureState> {
    if psi.dims() != [2, 2, 2] {
        return mismatch(format!("telescoping needs three qubits, got dims {:?}", psi.dims()));
    }
    let mut v = CVec::zeros(16);
    for (i, a) in psi.amplitudes().iter().enumerate() {
        v[(i << 1) | (i & 1)] = *a;
    }
    PureState::new_unnormalized(v, &[2, 2, 2, 2])
}
