use std::path::Path;

use rayon::prelude::*;
use tanglekit::symfam::{axi_exact, ghzsym_classify, ghzsym_exact, AxiCoords, GhzSymCoords};

use crate::output::{sig12, CliError};
use crate::FamilyArg;

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub x: f64,
    pub y: f64,
    pub class: String,
    pub tau3: Option<f64>,
    pub gmec: Option<f64>,
    pub negativity: f64,
}

/// Grid coordinates along one axis; a single point sits at the origin.
fn axis(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![0.0];
    }
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

fn ghzsym_row(x: f64, y: f64) -> tanglekit::Result<Option<Row>> {
    let c = GhzSymCoords::new(x, y);
    if !c.is_physical() {
        return Ok(None);
    }
    let r = ghzsym_exact(c)?;
    Ok(Some(Row {
        x,
        y,
        class: ghzsym_classify(c)?.as_str().to_string(),
        tau3: r.value("tau3"),
        gmec: r.value("gme_concurrence"),
        negativity: r.value("negativity").unwrap_or(f64::NAN),
    }))
}

fn axi_row(x: f64, y: f64, d: usize) -> tanglekit::Result<Option<Row>> {
    let c = AxiCoords::new(x, y, d);
    if !c.is_physical() {
        return Ok(None);
    }
    let r = axi_exact(c)?;
    let k = r.value("schmidt_number").unwrap_or(1.0) as usize;
    Ok(Some(Row {
        x,
        y,
        class: format!("schmidt_{k}"),
        tau3: None,
        gmec: None,
        negativity: r.value("negativity").unwrap_or(f64::NAN),
    }))
}

/// `grid × grid` points over the bounding box of the physical region, row
/// by row in `y`, keeping only physical points.
pub fn run(family: FamilyArg, d: usize, grid: usize) -> Result<Vec<Row>, CliError> {
    if grid == 0 {
        return Err(CliError::usage("grid must be at least 1"));
    }
    if matches!(family, FamilyArg::Axi) && d < 2 {
        return Err(CliError::usage("axisymmetric family needs d ≥ 2"));
    }
    let (x0, x1, y0, y1) = match family {
        FamilyArg::Axi => AxiCoords::bounds(d),
        FamilyArg::Ghzsym => GhzSymCoords::bounds(),
    };
    let (xs, ys) = (axis(x0, x1, grid), axis(y0, y1, grid));
    let points: Vec<(f64, f64)> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect();
    let rows = points
        .par_iter()
        .map(|&(x, y)| match family {
            FamilyArg::Axi => axi_row(x, y, d),
            FamilyArg::Ghzsym => ghzsym_row(x, y),
        })
        .collect::<tanglekit::Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    let fail = |e: csv::Error| CliError { code: 1, message: format!("cannot write {}: {e}", path.display()) };
    let mut w = csv::Writer::from_path(path).map_err(fail)?;
    w.write_record(["x", "y", "class", "tau3", "gmec", "negativity"]).map_err(fail)?;
    let opt = |v: Option<f64>| v.map(sig12).unwrap_or_default();
    for r in rows {
        w.write_record([sig12(r.x), sig12(r.y), r.class.clone(), opt(r.tau3), opt(r.gmec), sig12(r.negativity)])
            .map_err(fail)?;
    }
    w.flush().map_err(|e| fail(e.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tanglekit::symfam::ghzw_curve;

    #[test]
    fn single_point_grid_is_the_origin() {
        for fam in [FamilyArg::Axi, FamilyArg::Ghzsym] {
            let rows = run(fam, 3, 1).unwrap();
            assert_eq!(rows.len(), 1);
            assert_eq!((rows[0].x, rows[0].y), (0.0, 0.0));
            assert_eq!(rows[0].negativity, 0.0);
        }
    }

    /// `x` of the GHZ–W curve at height `y`, with `y` decreasing in `v`.
    fn curve_x_at(y: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if ghzw_curve(mid).1 > y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ghzw_curve(0.5 * (lo + hi)).0
    }

    #[test]
    fn ghzsym_w_ghz_boundary_follows_the_curve() {
        let m = 100;
        let rows = run(FamilyArg::Ghzsym, 0, m).unwrap();
        let (x0, x1, _, _) = GhzSymCoords::bounds();
        let dx = (x1 - x0) / (m - 1) as f64;
        let (ytop, ybottom) = (ghzw_curve(0.0).1, ghzw_curve(1.0).1);
        let mut checked = 0;
        for pair in rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let spans = a.y < ytop && a.y > ybottom;
            if a.y != b.y || a.x < 0.0 || !spans || !(a.class == "W" && b.class == "GHZ") {
                continue;
            }
            let xc = curve_x_at(a.y);
            assert!(xc >= a.x - dx && xc <= b.x + dx, "switch at ({}, {}) vs curve x {xc}", a.x, a.y);
            checked += 1;
        }
        assert!(checked > 10, "{checked}");
    }

    #[test]
    fn axi_bands_grow_towards_the_corner() {
        let rows = run(FamilyArg::Axi, 4, 60).unwrap();
        let k = |r: &Row| r.class.trim_start_matches("schmidt_").parse::<usize>().unwrap();
        for pair in rows.windows(2) {
            if pair[0].y == pair[1].y && pair[0].x >= 0.0 {
                assert!(k(&pair[1]) >= k(&pair[0]));
            }
        }
        assert!(rows.iter().any(|r| k(r) == 4) && rows.iter().any(|r| k(r) == 1));
        for r in rows.iter().step_by(37) {
            let rho = tanglekit::symfam::axi_state(AxiCoords::new(r.x, r.y, 4)).unwrap();
            let direct = tanglekit::bipartite::negativity(&rho, &[0]).unwrap();
            assert!((direct - r.negativity).abs() < 1e-10);
        }
    }

    #[test]
    fn unwritable_path_fails() {
        let rows = run(FamilyArg::Ghzsym, 0, 3).unwrap();
        let e = write_csv(Path::new("/nonexistent-dir/out.csv"), &rows).unwrap_err();
        assert_eq!(e.code, 1);
    }
}
