//! Symmetric state families with closed-form entanglement: Werner,
//! isotropic, axisymmetric and GHZ-symmetric states.

mod axi;
mod ghzsym;

pub use axi::{axi_exact, axi_state, axi_twirl, AxiCoords};
pub(crate) use ghzsym::tau3 as ghzsym_tau3;
pub use ghzsym::{
    ghzsym_classify, ghzsym_exact, ghzsym_negativity_printed, ghzsym_state, ghzsym_twirl, ghzw_curve,
    ghzw_intersection, GhzClass, GhzSymCoords, GHZW_TOL,
};

use crate::error::{invalid, mismatch, Result};
use crate::linalg::re;
use crate::state::{named_state, DensityMatrix, NamedState};

/// Tolerance on physicality checks of family coordinates.
pub const FAMILY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `p|Ψ₂⟩⟨Ψ₂| + (1−p)𝟙/4`, `p ∈ [−1/3, 1]`.
    Werner {
        p: f64,
    },
    /// `p|Ψ_d⟩⟨Ψ_d| + (1−p)𝟙/d²`, `p ∈ [−1/(d²−1), 1]`.
    Isotropic {
        d: usize,
        p: f64,
    },
    Axi(AxiCoords),
    GhzSym(GhzSymCoords),
}

pub fn family_state(family: Family) -> Result<DensityMatrix> {
    match family {
        Family::Werner { p } => isotropic_state(2, p),
        Family::Isotropic { d, p } => isotropic_state(d, p),
        Family::Axi(c) => axi_state(c),
        Family::GhzSym(c) => ghzsym_state(c),
    }
}

fn isotropic_state(d: usize, p: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return invalid("isotropic states need d ≥ 2");
    }
    let d2 = (d * d) as f64;
    if !(p >= -1.0 / (d2 - 1.0) - FAMILY_TOL && p <= 1.0 + FAMILY_TOL) {
        return invalid(format!("isotropic weight {p} outside [−1/(d²−1), 1]"));
    }
    let psi = named_state(&NamedState::MaxEntangled(d))?.to_density();
    let mut m = psi.matrix() * re(p);
    for i in 0..d * d {
        m[(i, i)] += re((1.0 - p) / d2);
    }
    DensityMatrix::new(m, &[d, d])
}

fn equal_local_dims(rho: &DensityMatrix) -> Result<usize> {
    match rho.dims() {
        [a, b] if a == b => Ok(*a),
        dims => mismatch(format!("expected a d×d state, got dims {dims:?}")),
    }
}

/// Weight `p` of the isotropic projection, from `F = ⟨Ψ_d|ρ|Ψ_d⟩ = p + (1−p)/d²`.
pub fn isotropic_twirl(rho: &DensityMatrix) -> Result<f64> {
    let d = equal_local_dims(rho)?;
    let rho = rho.normalized();
    let m = rho.matrix();
    let mut f = 0.0;
    for j in 0..d {
        for k in 0..d {
            f += m[(j * d + j, k * d + k)].re;
        }
    }
    f /= d as f64;
    let inv = 1.0 / (d * d) as f64;
    Ok((f - inv) / (1.0 - inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn werner_corner_is_bell() {
        let w = family_state(Family::Werner { p: 1.0 }).unwrap();
        let bell = named_state(&NamedState::MaxEntangled(2)).unwrap().to_density();
        assert!(linalg::hs_distance(w.matrix(), bell.matrix()) < 1e-15);
        assert!(family_state(Family::Werner { p: -0.5 }).is_err());
    }

    #[test]
    fn isotropic_twirl_examples() {
        for d in 2..=4 {
            let pure = family_state(Family::Isotropic { d, p: 1.0 }).unwrap();
            assert!((isotropic_twirl(&pure).unwrap() - 1.0).abs() < 1e-12);
            let mixed = DensityMatrix::maximally_mixed(&[d, d]).unwrap();
            assert!(isotropic_twirl(&mixed).unwrap().abs() < 1e-12);
            let half = DensityMatrix::mixture(&[(0.5, &pure), (0.5, &mixed)]).unwrap();
            assert!((isotropic_twirl(&half).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn isotropic_line_passes_through_axi_corner() {
        let d = 3;
        let corner = AxiCoords::pure_corner(d);
        for p in [0.2, 0.5, 0.9] {
            let c = axi_twirl(&family_state(Family::Isotropic { d, p }).unwrap()).unwrap();
            assert!((c.y / c.x - corner.y / corner.x).abs() < 1e-12);
            assert!((c.x - p * corner.x).abs() < 1e-12);
        }
    }
}
