use super::FAMILY_TOL;
use crate::bipartite::negativity;
use crate::error::{invalid, mismatch, Result};
use crate::linalg::re;
use crate::report::{BoundValue, MeasureReport};
use crate::state::DensityMatrix;
use crate::CMat;

/// Tolerance of the GHZ–W bisection in the curve parameter.
pub const GHZW_TOL: f64 = 1e-12;
const GHZW_MAX_ITER: usize = 200;

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// GHZ-symmetric coordinates `x = ½(F₊ − F₋)`, `y = (F₊ + F₋ − ¼)/√3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzSymCoords {
    pub x: f64,
    pub y: f64,
}

impl GhzSymCoords {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub const GHZ_PLUS: GhzSymCoords = GhzSymCoords { x: 0.5, y: 0.433_012_701_892_219_3 };

    /// Bounding box `(x_min, x_max, y_min, y_max)` of the physical triangle.
    pub fn bounds() -> (f64, f64, f64, f64) {
        (-0.5, 0.5, -1.0 / (4.0 * sqrt3()), sqrt3() / 4.0)
    }

    /// Weights of `GHZ₊`, `GHZ₋` and `ρ_r/6` in the state.
    pub fn weights(&self) -> [f64; 3] {
        let s = sqrt3() * self.y + 0.25;
        [(s + 2.0 * self.x) / 2.0, (s - 2.0 * self.x) / 2.0, 0.75 - sqrt3() * self.y]
    }

    pub fn is_physical(&self) -> bool {
        self.weights().iter().all(|&w| w >= -FAMILY_TOL)
    }
}

pub fn ghzsym_state(c: GhzSymCoords) -> Result<DensityMatrix> {
    if !c.is_physical() {
        return invalid(format!("GHZ-symmetric point ({}, {}) lies outside the triangle", c.x, c.y));
    }
    let [a, b, g] = c.weights().map(|w| w.max(0.0));
    let mut m = CMat::zeros(8, 8);
    m[(0, 0)] = re((a + b) / 2.0);
    m[(7, 7)] = re((a + b) / 2.0);
    m[(0, 7)] = re((a - b) / 2.0);
    m[(7, 0)] = re((a - b) / 2.0);
    for i in 1..7 {
        m[(i, i)] = re(g / 6.0);
    }
    DensityMatrix::new(m, &[2, 2, 2])
}

pub fn ghzsym_twirl(rho: &DensityMatrix) -> Result<GhzSymCoords> {
    if rho.dims() != [2, 2, 2] {
        return mismatch(format!("expected three qubits, got dims {:?}", rho.dims()));
    }
    let rho = rho.normalized();
    let m = rho.matrix();
    Ok(GhzSymCoords { x: 0.5 * (m[(0, 7)].re + m[(7, 0)].re), y: (m[(0, 0)].re + m[(7, 7)].re - 0.25) / sqrt3() })
}

/// Point of the GHZ–W line at parameter `v ∈ [0, 1]`.
pub fn ghzw_curve(v: f64) -> (f64, f64) {
    let v2 = v * v;
    ((v2 * v2 * v + 8.0 * v2 * v) / (8.0 * (4.0 - v2)), sqrt3() / 4.0 * (4.0 - v2 - v2 * v2) / (4.0 - v2))
}

/// Intersection of the line from the GHZ₊ corner through `(|x|, y)` with the
/// GHZ–W line, as `(v, x^W, y^W)`; `None` at the corner itself.
pub fn ghzw_intersection(c: GhzSymCoords) -> Option<(f64, f64, f64)> {
    let (gx, gy) = (GhzSymCoords::GHZ_PLUS.x, GhzSymCoords::GHZ_PLUS.y);
    let (px, py) = (c.x.abs() - gx, c.y - gy);
    if px.hypot(py) < 1e-15 {
        return None;
    }
    let side = |v: f64| {
        let (cx, cy) = ghzw_curve(v);
        (cx - gx) * py - (cy - gy) * px
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let hi_positive = side(hi) > 0.0;
    for _ in 0..GHZW_MAX_ITER {
        if hi - lo < GHZW_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (side(mid) > 0.0) == hi_positive {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let v = 0.5 * (lo + hi);
    let (xw, yw) = ghzw_curve(v);
    Some((v, xw, yw))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GhzClass {
    Separable,
    Biseparable,
    W,
    Ghz,
}

impl GhzClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GhzClass::Separable => "separable",
            GhzClass::Biseparable => "biseparable",
            GhzClass::W => "W",
            GhzClass::Ghz => "GHZ",
        }
    }
}

/// `(p − a) × (b − a) ≤ 0` up to tolerance, for a counter-clockwise walk.
fn left_of(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= -1e-12
}

/// Right half of a kite symmetric about `x = 0`, bottom `(0, y0)`, side
/// corner `(xc, yc)` and top `(0, y1)`; checks `(|x|, y)`.
fn in_kite(p: (f64, f64), y0: f64, corner: (f64, f64), y1: f64) -> bool {
    let q = (p.0.abs(), p.1);
    left_of((0.0, y0), corner, q) && left_of(corner, (0.0, y1), q)
}

/// Class of a GHZ-symmetric point; boundary points go to the lower class.
pub fn ghzsym_classify(c: GhzSymCoords) -> Result<GhzClass> {
    if !c.is_physical() {
        return invalid(format!("GHZ-symmetric point ({}, {}) lies outside the triangle", c.x, c.y));
    }
    let (yr, ym) = (-1.0 / (4.0 * sqrt3()), sqrt3() / 4.0);
    let p = (c.x, c.y);
    if in_kite(p, yr, (0.125, 0.0), ym) {
        return Ok(GhzClass::Separable);
    }
    if in_kite(p, yr, (0.25, 1.0 / (4.0 * sqrt3())), ym) {
        return Ok(GhzClass::Biseparable);
    }
    match ghzw_intersection(c) {
        Some((_, xw, _)) if c.x.abs() <= xw + 1e-12 => Ok(GhzClass::W),
        _ => Ok(GhzClass::Ghz),
    }
}

/// Three-tangle from the GHZ–W intersection, symmetric in `x`.
pub(crate) fn tau3(c: GhzSymCoords) -> f64 {
    match ghzw_intersection(c) {
        None => 1.0,
        Some((_, xw, _)) => {
            let x = c.x.abs();
            if x <= xw {
                0.0
            } else {
                ((x - xw) / (0.5 - xw)).clamp(0.0, 1.0)
            }
        }
    }
}

/// The printed closed form `max{0, ⅛ − y/(2√3) − |x|}`, kept for comparison
/// with the direct partial-transpose value.
pub fn ghzsym_negativity_printed(c: GhzSymCoords) -> f64 {
    (0.125 - c.y / (2.0 * sqrt3()) - c.x.abs()).max(0.0)
}

/// Three-tangle, GME concurrence and single-qubit negativity. The negativity
/// is computed from the partial transpose of the family state.
pub fn ghzsym_exact(c: GhzSymCoords) -> Result<MeasureReport> {
    let rho = ghzsym_state(c)?;
    let mut r = MeasureReport::new();
    r.push("tau3", BoundValue::exact(tau3(c)));
    r.push("gme_concurrence", BoundValue::exact(2.0 * (c.x.abs() + 0.5 * sqrt3() * c.y - 0.375).max(0.0)));
    r.push("negativity", BoundValue::exact(negativity(&rho, &[0])?));
    r.push("negativity_printed", BoundValue::exact(ghzsym_negativity_printed(c)));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{named_state, random_density_matrix, NamedState};

    fn s3() -> f64 {
        3f64.sqrt()
    }

    #[test]
    fn named_corners() {
        let ghz = named_state(&NamedState::Ghz(3)).unwrap().to_density();
        let c = ghzsym_twirl(&ghz).unwrap();
        assert!((c.x - 0.5).abs() < 1e-15 && (c.y - s3() / 4.0).abs() < 1e-15);
        let w = named_state(&NamedState::W(3)).unwrap().to_density();
        let c = ghzsym_twirl(&w).unwrap();
        assert!(c.x.abs() < 1e-15 && (c.y + 1.0 / (4.0 * s3())).abs() < 1e-15);
        let mix = DensityMatrix::maximally_mixed(&[2, 2, 2]).unwrap();
        let c = ghzsym_twirl(&mix).unwrap();
        assert!(c.x.abs() < 1e-15 && c.y.abs() < 1e-15);
        let s = ghzsym_state(GhzSymCoords::new(0.0, 0.0)).unwrap();
        assert!(crate::linalg::hs_distance(s.matrix(), mix.matrix()) < 1e-15);
        let r = named_state(&NamedState::RhoR).unwrap().to_density();
        let c = ghzsym_twirl(&r).unwrap();
        assert!(c.x.abs() < 1e-15 && (c.y + 1.0 / (4.0 * s3())).abs() < 1e-15);
    }

    #[test]
    fn coordinates_round_trip() {
        for (x, y) in [(0.1, 0.1), (-0.3, 0.3), (0.0, -0.1), (0.5, s3() / 4.0)] {
            let c = GhzSymCoords::new(x, y);
            let back = ghzsym_twirl(&ghzsym_state(c).unwrap()).unwrap();
            assert!((back.x - x).abs() < 1e-12 && (back.y - y).abs() < 1e-12);
        }
        assert!(ghzsym_state(GhzSymCoords::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn twirl_is_a_projection() {
        let mut g = crate::rng::seeded(5);
        let rho = random_density_matrix(&[2, 2, 2], 3, &mut g).unwrap();
        let c = ghzsym_twirl(&rho).unwrap();
        assert!(c.is_physical());
        let c2 = ghzsym_twirl(&ghzsym_state(c).unwrap()).unwrap();
        assert!((c.x - c2.x).abs() < 1e-12 && (c.y - c2.y).abs() < 1e-12);
    }

    #[test]
    fn curve_endpoints() {
        let (x, y) = ghzw_curve(0.0);
        assert!(x.abs() < 1e-15 && (y - s3() / 4.0).abs() < 1e-15);
        let (x, y) = ghzw_curve(1.0);
        assert!((x - 3.0 / 8.0).abs() < 1e-15 && (y - s3() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(ghzsym_classify(GhzSymCoords::new(0.0, 0.0)).unwrap(), GhzClass::Separable);
        assert_eq!(ghzsym_classify(GhzSymCoords::GHZ_PLUS).unwrap(), GhzClass::Ghz);
        assert_eq!(ghzsym_classify(GhzSymCoords::new(-0.5, s3() / 4.0)).unwrap(), GhzClass::Ghz);
        assert_eq!(ghzsym_classify(GhzSymCoords::new(3.0 / 8.0, s3() / 6.0)).unwrap(), GhzClass::W);
        assert_eq!(ghzsym_classify(GhzSymCoords::new(0.125, 0.0)).unwrap(), GhzClass::Separable);
        assert_eq!(ghzsym_classify(GhzSymCoords::new(0.2, 0.1)).unwrap(), GhzClass::Biseparable);
        assert_eq!(ghzsym_classify(GhzSymCoords::new(0.0, -1.0 / (4.0 * s3()))).unwrap(), GhzClass::Separable);
    }

    #[test]
    fn exact_measures_at_corners() {
        let r = ghzsym_exact(GhzSymCoords::GHZ_PLUS).unwrap();
        assert!((r.value("tau3").unwrap() - 1.0).abs() < 1e-12);
        assert!((r.value("gme_concurrence").unwrap() - 1.0).abs() < 1e-12);
        assert!((r.value("negativity").unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(r.value("negativity_printed"), Some(0.0));
        let r = ghzsym_exact(GhzSymCoords::new(0.0, s3() / 4.0)).unwrap();
        assert!(r.value("gme_concurrence").unwrap().abs() < 1e-15);
        assert_eq!(r.value("tau3"), Some(0.0));
    }

    #[test]
    fn direct_negativity_is_the_sign_flipped_printed_form() {
        for (x, y) in [(0.3, 0.3), (0.45, 0.4), (-0.2, 0.2), (0.05, 0.0)] {
            let c = GhzSymCoords::new(x, y);
            let r = ghzsym_exact(c).unwrap();
            let oracle = (x.abs() - 0.125 + y / (2.0 * s3())).max(0.0);
            assert!((r.value("negativity").unwrap() - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn tau3_vanishes_on_curve_and_grows_beyond() {
        for i in 0..=20 {
            let v = i as f64 / 20.0;
            let (x, y) = ghzw_curve(v);
            let c = GhzSymCoords::new(x, y);
            if !c.is_physical() {
                continue;
            }
            assert!(tau3(c) < 1e-9, "v={v}");
            let g = GhzSymCoords::GHZ_PLUS;
            let beyond = GhzSymCoords::new(x + 0.05 * (g.x - x), y + 0.05 * (g.y - y));
            assert!(tau3(beyond) > 0.0);
        }
    }

    #[test]
    fn tau3_mirror_symmetric() {
        let a = ghzsym_exact(GhzSymCoords::new(0.4, 0.35)).unwrap().value("tau3").unwrap();
        let b = ghzsym_exact(GhzSymCoords::new(-0.4, 0.35)).unwrap().value("tau3").unwrap();
        assert!(a > 0.0 && (a - b).abs() < 1e-15);
    }
}
