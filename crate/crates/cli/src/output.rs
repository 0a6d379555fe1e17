use std::path::Path;

use serde::Serialize;
use tanglekit::state::io::read_state;
use tanglekit::{Error, MeasureReport, State};

/// Exit codes: 1 other failures, 2 unreadable or malformed input and bad
/// arguments, 3 dimension mismatch, 4 unsupported dimensions.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn unsupported(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }

    pub fn from_core(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Json(_) | Error::InvalidParameter(_) => 2,
            Error::NotNormalized(_) | Error::NotHermitian(_) | Error::NotPositive(_) => 2,
            Error::DimensionMismatch(_) | Error::InvalidParty { .. } => 3,
            Error::Unsupported(_) => 4,
            Error::Annihilated | Error::Io(_) => 1,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::from_core(e)
    }
}

pub fn load_state(path: &Path) -> Result<State, CliError> {
    read_state(path).map_err(|e| match e {
        Error::Io(io) => CliError::usage(format!("cannot read {}: {io}", path.display())),
        other => {
            let mut err = CliError::from_core(other);
            err.message = format!("{}: {}", path.display(), err.message);
            err
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub struct Header<'a> {
    pub input: &'a Path,
    pub seed: u64,
    pub state: &'a State,
    pub timing_ms: Option<f64>,
}

#[derive(Serialize)]
struct Label<'a> {
    key: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    input: String,
    seed: u64,
    kind: &'static str,
    dims: &'a [usize],
    measures: &'a [tanglekit::report::MeasureEntry],
    labels: Vec<Label<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

fn state_kind(s: &State) -> &'static str {
    match s {
        State::Pure(_) => "pure",
        State::Mixed(_) => "mixed",
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        // Rounding can carry into a new digit; the extra precision is harmless.
        trim(format!("{:.*}", (11 - exp).max(0) as usize, v))
    } else {
        let s = format!("{v:.11e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim(mant.to_string()))
    }
}

pub fn render(h: &Header, report: &MeasureReport, format: Format) -> String {
    match format {
        Format::Json => {
            let r = JsonReport {
                input: h.input.display().to_string(),
                seed: h.seed,
                kind: state_kind(h.state),
                dims: h.state.dims(),
                measures: &report.measures,
                labels: report.labels.iter().map(|(k, v)| Label { key: k, value: v }).collect(),
                timing_ms: h.timing_ms,
            };
            serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let input = h.input.display().to_string();
            let seed = h.seed.to_string();
            w.write_record(["input", "seed", "name", "value", "kind"]).expect("in-memory write");
            for m in &report.measures {
                let value = m.value.map(sig12).unwrap_or_default();
                w.write_record([input.as_str(), &seed, &m.name, &value, m.kind.as_str()]).expect("in-memory write");
            }
            for (k, v) in &report.labels {
                w.write_record([input.as_str(), &seed, k, v, "label"]).expect("in-memory write");
            }
            if let Some(t) = h.timing_ms {
                w.write_record([input.as_str(), &seed, "timing_ms", &sig12(t), "timing"]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(sig12(123456.789), "123456.789");
        assert_eq!(sig12(1.0e-7 / 3.0), "3.33333333333e-8");
        assert_eq!(sig12(2.5e13), "2.5e13");
        for v in [0.1234567890123456, 9.87654321e-3, 42.0] {
            let back: f64 = sig12(v).parse().unwrap();
            assert!((back - v).abs() <= 1e-11 * v.abs());
        }
    }
}
