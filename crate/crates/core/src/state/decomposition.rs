use super::{DensityMatrix, PureState, STATE_TOL};
use crate::error::{invalid, mismatch, Result};
use crate::linalg::{self, eigh, re};
use crate::CMat;

/// Weighted list of pure states, `ρ = Σ p_j |ψ_j⟩⟨ψ_j|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    entries: Vec<(f64, PureState)>,
}

/// Weights below this are dropped when building decompositions from vectors.
const WEIGHT_FLOOR: f64 = 1e-14;

impl Decomposition {
    pub fn new(entries: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = entries.first() else {
            return invalid("empty decomposition");
        };
        let dims = first.dims().to_vec();
        for (p, psi) in &entries {
            if !(*p > 0.0 && *p <= 1.0 + STATE_TOL) {
                return invalid(format!("weight {p} outside (0,1]"));
            }
            if psi.dims() != dims {
                return mismatch("decomposition entries with different dims");
            }
            if (psi.norm_sqr() - 1.0).abs() > STATE_TOL {
                return invalid("decomposition entries must be normalized");
            }
        }
        let total: f64 = entries.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return invalid(format!("weights sum to {total}"));
        }
        Ok(Self { entries })
    }

    /// Builds a decomposition from the columns of `m`, read as subnormalized
    /// vectors `√p_k ψ_k`. Near-zero columns are dropped.
    pub(crate) fn from_columns(m: &CMat, dims: &[usize]) -> Self {
        let entries = m
            .column_iter()
            .filter_map(|c| {
                let w = c.norm_squared();
                (w > WEIGHT_FLOOR).then(|| (w, PureState::from_parts(c / re(w.sqrt()), dims.to_vec(), true)))
            })
            .collect();
        Self { entries }
    }

    /// Spectral decomposition; eigenvalues below `1e-14·λ_max` are dropped.
    pub fn spectral(rho: &DensityMatrix) -> Self {
        Self::from_columns(&spectral_columns(rho), rho.dims())
    }

    pub fn entries(&self) -> &[(f64, PureState)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.entries[0].1.dims()
    }

    /// Columns `√p_j ψ_j`.
    pub fn columns(&self) -> CMat {
        let n = self.entries[0].1.dim();
        let mut m = CMat::zeros(n, self.entries.len());
        for (k, (p, psi)) in self.entries.iter().enumerate() {
            m.set_column(k, &(psi.amplitudes() * re(p.sqrt())));
        }
        m
    }

    pub fn density(&self) -> DensityMatrix {
        let c = self.columns();
        DensityMatrix::from_parts(&c * c.adjoint(), self.dims().to_vec(), true)
    }
}

/// Eigenvectors scaled by `√λ`, as columns; tiny eigenvalues dropped.
pub(crate) fn spectral_columns(rho: &DensityMatrix) -> CMat {
    let (vals, vecs) = eigh(rho.matrix());
    let top = vals[0].max(0.0);
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 1e-14 * top && vals[k] > 0.0).collect();
    let mut m = CMat::zeros(rho.dim(), keep.len());
    for (c, &k) in keep.iter().enumerate() {
        m.set_column(c, &(vecs.column(k) * re(vals[k].sqrt())));
    }
    m
}

/// Hughston–Jozsa–Wootters remixing: `|φ̃_k⟩ = Σ_j U_kj √p_j |ψ_j⟩`, using
/// the first ℓ columns of `u` (ℓ = decomposition length). Zero-weight
/// outputs are dropped.
pub fn mix_decomposition(d: &Decomposition, u: &CMat) -> Result<Decomposition> {
    let l = d.len();
    if u.ncols() < l {
        return mismatch(format!("mixing matrix has {} columns, decomposition length {l}", u.ncols()));
    }
    let cols = u.columns(0, l).into_owned();
    let err = linalg::isometry_error(&cols);
    if err > STATE_TOL {
        return invalid(format!("mixing matrix is not isometric (error {err:e})"));
    }
    let mixed = d.columns() * cols.transpose();
    Ok(Decomposition::from_columns(&mixed, d.dims()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::state::{named_state, random_density_matrix, NamedState};

    #[test]
    fn identity_mixing_is_a_no_op() {
        let mut r = rng::seeded(1);
        let rho = random_density_matrix(&[2, 2], 3, &mut r).unwrap();
        let d = Decomposition::spectral(&rho);
        let out = mix_decomposition(&d, &linalg::identity(d.len())).unwrap();
        assert_eq!(out.len(), d.len());
        for ((p, a), (q, b)) in d.entries().iter().zip(out.entries()) {
            assert!((p - q).abs() < 1e-15);
            assert!((a.amplitudes() - b.amplitudes()).norm() < 1e-14);
        }
    }

    #[test]
    fn hadamard_mixing_of_bell_diagonal() {
        let bells = [NamedState::PhiPlus, NamedState::PsiMinus];
        let psis: Vec<PureState> = bells.iter().map(|b| named_state(b).unwrap().into_pure().unwrap()).collect();
        let d = Decomposition::new(vec![(0.7, psis[0].clone()), (0.3, psis[1].clone())]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = CMat::from_row_slice(2, 2, &[re(h), re(h), re(h), re(-h)]);
        let out = mix_decomposition(&d, &had).unwrap();
        assert!(linalg::hs_distance(out.density().matrix(), d.density().matrix()) < 1e-12);
    }

    #[test]
    fn zero_row_shortens_decomposition() {
        let mut r = rng::seeded(2);
        let rho = random_density_matrix(&[2, 2], 2, &mut r).unwrap();
        let d = Decomposition::spectral(&rho);
        let mut u = CMat::zeros(3, 2);
        u[(0, 0)] = re(1.0);
        u[(2, 1)] = re(1.0);
        let out = mix_decomposition(&d, &u).unwrap();
        assert_eq!(out.len(), 2);
        assert!(linalg::hs_distance(out.density().matrix(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_non_isometry() {
        let mut r = rng::seeded(3);
        let rho = random_density_matrix(&[2, 2], 2, &mut r).unwrap();
        let d = Decomposition::spectral(&rho);
        assert!(mix_decomposition(&d, &(linalg::identity(2) * re(2.0))).is_err());
        assert!(mix_decomposition(&d, &linalg::identity(1)).is_err());
    }

    #[test]
    fn weights_validated() {
        let p = named_state(&NamedState::PhiPlus).unwrap().into_pure().unwrap();
        assert!(Decomposition::new(vec![(0.5, p.clone())]).is_err());
        assert!(Decomposition::new(vec![(0.5, p.clone()), (0.5, p)]).is_ok());
    }
}
