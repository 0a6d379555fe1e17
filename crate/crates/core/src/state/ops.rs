use super::{check_dims, check_party, digits, join_digits, total_dim, DensityMatrix, PureState, State};
use crate::error::{invalid, mismatch, Result};
use crate::linalg::{self, re};
use crate::rng::{self, Rng};
use crate::{CMat, CVec};

/// Tensor product of two states of the same kind; dims are concatenated.
pub fn tensor_product(a: &State, b: &State) -> Result<State> {
    let dims: Vec<usize> = a.dims().iter().chain(b.dims()).copied().collect();
    match (a, b) {
        (State::Pure(x), State::Pure(y)) => Ok(State::Pure(PureState::from_parts(
            linalg::kron_vec(x.amplitudes(), y.amplitudes()),
            dims,
            x.is_normalized() && y.is_normalized(),
        ))),
        (State::Mixed(x), State::Mixed(y)) => Ok(State::Mixed(DensityMatrix::from_parts(
            linalg::kron(x.matrix(), y.matrix()),
            dims,
            x.is_normalized() && y.is_normalized(),
        ))),
        _ => invalid("tensor product of a pure and a mixed state"),
    }
}

fn validate_block(block: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut b = block.to_vec();
    b.sort_unstable();
    b.dedup();
    if b.len() != block.len() {
        return invalid(format!("repeated party in {block:?}"));
    }
    for &j in &b {
        check_party(j, n)?;
    }
    Ok(b)
}

/// For each full index, its (block index, complement index) pair.
fn split_table(dims: &[usize], block: &[usize]) -> (Vec<(usize, usize)>, usize, usize) {
    let inside: Vec<bool> = (0..dims.len()).map(|j| block.contains(&j)).collect();
    let da: usize = block.iter().map(|&j| dims[j]).product();
    let db = total_dim(dims) / da;
    let table = (0..total_dim(dims))
        .map(|i| {
            let dg = digits(i, dims);
            let (mut a, mut b) = (0, 0);
            for (j, &x) in dg.iter().enumerate() {
                if inside[j] {
                    a = a * dims[j] + x;
                } else {
                    b = b * dims[j] + x;
                }
            }
            (a, b)
        })
        .collect();
    (table, da, db)
}

/// Amplitudes reshaped into a `d_block × d_rest` matrix. Both blocks keep
/// the parties in ascending order.
pub fn bipartite_matrix(psi: &PureState, block: &[usize]) -> Result<CMat> {
    let block = validate_block(block, psi.n_parties())?;
    let (table, da, db) = split_table(psi.dims(), &block);
    let mut m = CMat::zeros(da, db);
    for (i, &(a, b)) in table.iter().enumerate() {
        m[(a, b)] = psi.amplitudes()[i];
    }
    Ok(m)
}

/// Reorders `rho` into a two-party state `[d_block, d_rest]`, both blocks
/// keeping their parties in ascending order.
pub fn regroup(rho: &DensityMatrix, block: &[usize]) -> Result<DensityMatrix> {
    let block = validate_block(block, rho.n_parties())?;
    if block.is_empty() || block.len() == rho.n_parties() {
        return invalid("a bipartition needs two nonempty blocks");
    }
    let (table, da, db) = split_table(rho.dims(), &block);
    let idx: Vec<usize> = table.iter().map(|&(a, b)| a * db + b).collect();
    let m = rho.matrix();
    let n = rho.dim();
    let mut out = CMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(idx[r], idx[c])] = m[(r, c)];
        }
    }
    Ok(DensityMatrix::from_parts(out, vec![da, db], rho.is_normalized()))
}

/// Reduced state on the parties in `keep` (ascending order). Trace preserved.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return invalid("partial trace must keep at least one party");
    }
    let keep = validate_block(keep, rho.n_parties())?;
    let dims = rho.dims();
    let (table, dk, dt) = split_table(dims, &keep);
    let mut full = vec![0usize; dk * dt];
    for (i, &(a, b)) in table.iter().enumerate() {
        full[a * dt + b] = i;
    }
    let m = rho.matrix();
    let out = CMat::from_fn(dk, dk, |r, c| (0..dt).map(|t| m[(full[r * dt + t], full[c * dt + t])]).sum());
    let kdims = keep.iter().map(|&j| dims[j]).collect();
    Ok(DensityMatrix::from_parts(out, kdims, rho.is_normalized()))
}

/// Reduced state of a pure state, computed as `M M†` from the reshaped amplitudes.
pub fn partial_trace_pure(psi: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return invalid("partial trace must keep at least one party");
    }
    let keep = validate_block(keep, psi.n_parties())?;
    let m = bipartite_matrix(psi, &keep)?;
    let kdims = keep.iter().map(|&j| psi.dims()[j]).collect();
    Ok(DensityMatrix::from_parts(&m * m.adjoint(), kdims, psi.is_normalized()))
}

/// `tr ρ_K²` of the reduction of a pure state onto `keep`.
pub fn reduced_purity(psi: &PureState, keep: &[usize]) -> Result<f64> {
    let r = partial_trace_pure(psi, keep)?;
    Ok(r.purity() / (psi.norm_sqr() * psi.norm_sqr()))
}

/// Partial transpose on a single party.
pub fn partial_transpose(rho: &DensityMatrix, party: usize) -> Result<CMat> {
    partial_transpose_block(rho, &[party])
}

/// Partial transpose on every party in `block`.
pub fn partial_transpose_block(rho: &DensityMatrix, block: &[usize]) -> Result<CMat> {
    let block = validate_block(block, rho.n_parties())?;
    let dims = rho.dims();
    let n = rho.dim();
    let dg: Vec<Vec<usize>> = (0..n).map(|i| digits(i, dims)).collect();
    let m = rho.matrix();
    let mut out = CMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (mut rr, mut cc) = (dg[r].clone(), dg[c].clone());
            for &j in &block {
                std::mem::swap(&mut rr[j], &mut cc[j]);
            }
            out[(join_digits(&rr, dims), join_digits(&cc, dims))] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Haar-random pure state; identical seeds give bit-identical states.
pub fn random_pure_state(dims: &[usize], seed: u64) -> Result<PureState> {
    random_pure_state_with(dims, &mut rng::seeded(seed))
}

pub fn random_pure_state_with(dims: &[usize], rng: &mut Rng) -> Result<PureState> {
    check_dims(dims)?;
    let n = total_dim(dims);
    let v = CVec::from_fn(n, |_, _| rng::complex_normal(rng));
    let norm = v.norm();
    Ok(PureState::from_parts(v / re(norm), dims.to_vec(), true))
}

/// Random density matrix of the given rank, `G G† / tr` with `G` Ginibre.
pub fn random_density_matrix(dims: &[usize], rank: usize, rng: &mut Rng) -> Result<DensityMatrix> {
    check_dims(dims)?;
    let n = total_dim(dims);
    if rank == 0 || rank > n {
        return mismatch(format!("rank {rank} for total dimension {n}"));
    }
    let g = linalg::ginibre(n, rank, rng);
    let m = &g * g.adjoint();
    let t = linalg::trace(&m).re;
    Ok(DensityMatrix::from_parts(linalg::hermitian_part(&(m / re(t))), dims.to_vec(), true))
}
