//! JSON state files:
//! `{"kind":"pure"|"mixed","dims":[d1,...],"data":...}`, where pure data is a
//! list of `[re,im]` pairs and mixed data a row-major list of rows of pairs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState, State};
use crate::error::{Error, Result};
use crate::linalg::{self, re};
use crate::{CMat, CVec, C64};

/// Tolerance on the norm (pure) or trace (mixed) of parsed states before
/// they are renormalized.
pub const PARSE_TOL: f64 = 1e-6;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Pure,
    Mixed,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    kind: Kind,
    dims: Vec<usize>,
    data: serde_json::Value,
}

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

fn to_c(pairs: Vec<[f64; 2]>) -> Vec<C64> {
    pairs.into_iter().map(|[a, b]| C64::new(a, b)).collect()
}

pub fn parse_state(text: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match file.kind {
        Kind::Pure => {
            let pairs: Vec<[f64; 2]> =
                serde_json::from_value(file.data).map_err(|e| Error::Parse(format!("pure data: {e}")))?;
            let v = CVec::from_vec(to_c(pairs));
            let psi = PureState::new_unnormalized(v, &file.dims)?;
            let n = psi.norm_sqr().sqrt();
            if (n - 1.0).abs() > PARSE_TOL {
                return parse_err(format!("state norm {n} deviates from 1 by more than {PARSE_TOL}"));
            }
            Ok(State::Pure(psi.normalized()))
        }
        Kind::Mixed => {
            let rows: Vec<Vec<[f64; 2]>> =
                serde_json::from_value(file.data).map_err(|e| Error::Parse(format!("mixed data: {e}")))?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return parse_err("density matrix rows must form a square matrix");
            }
            let flat: Vec<C64> = rows.into_iter().flat_map(to_c).collect();
            let mut m = CMat::from_row_slice(n, n, &flat);
            if linalg::hermiticity_error(&m) <= PARSE_TOL {
                m = linalg::hermitian_part(&m);
            }
            let rho = DensityMatrix::new_unnormalized(m, &file.dims)?;
            let t = rho.trace();
            if (t - 1.0).abs() > PARSE_TOL {
                return parse_err(format!("trace {t} deviates from 1 by more than {PARSE_TOL}"));
            }
            Ok(State::Mixed(rho.normalized()))
        }
    }
}

pub fn read_state(path: impl AsRef<Path>) -> Result<State> {
    parse_state(&std::fs::read_to_string(path)?)
}

/// Serializes with shortest round-trip float formatting, so parsing the
/// output reproduces the amplitudes exactly.
pub fn state_to_json(state: &State) -> String {
    let pair = |z: &C64| [z.re, z.im];
    let file = match state {
        State::Pure(p) => StateFile {
            kind: Kind::Pure,
            dims: p.dims().to_vec(),
            data: serde_json::to_value(p.amplitudes().iter().map(pair).collect::<Vec<_>>()).unwrap(),
        },
        State::Mixed(m) => {
            let mat = m.matrix();
            let rows: Vec<Vec<[f64; 2]>> =
                (0..mat.nrows()).map(|i| (0..mat.ncols()).map(|j| pair(&mat[(i, j)])).collect()).collect();
            StateFile { kind: Kind::Mixed, dims: m.dims().to_vec(), data: serde_json::to_value(rows).unwrap() }
        }
    };
    serde_json::to_string(&file).expect("state serialization cannot fail")
}

pub fn write_state(path: impl AsRef<Path>, state: &State) -> Result<()> {
    std::fs::write(path, state_to_json(state))?;
    Ok(())
}

/// Helper for building files by hand: real amplitudes.
pub fn pure_json_from_reals(amps: &[f64], dims: &[usize]) -> String {
    let v = CVec::from_iterator(amps.len(), amps.iter().map(|&x| re(x)));
    state_to_json(&State::Pure(PureState::from_parts(v, dims.to_vec(), false)))
}
