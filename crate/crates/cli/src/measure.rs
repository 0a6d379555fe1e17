use tanglekit::bipartite::{entanglement_entropy, g_concurrence, log_negativity, negativity, wootters_concurrence};
use tanglekit::multipartite::{gme_concurrence_bound, gme_concurrence_pure, GmePairs};
use tanglekit::roofs::{convex_roof_upper, cren_upper, Tau3};
use tanglekit::threequbit::{tau3_mixed_lower_bound, tau3_witness_bound, witness_value, WitnessKind};
use tanglekit::{invariants, BoundKind, BoundValue, MeasureReport, Result, State};

use crate::output::CliError;

type Eval = fn(&State, u64) -> Result<Option<BoundValue>>;

struct Entry {
    name: &'static str,
    applies: fn(&[usize]) -> bool,
    kind: BoundKind,
    eval: Eval,
}

fn three_qubits(d: &[usize]) -> bool {
    d == [2, 2, 2]
}

fn two_qubits(d: &[usize]) -> bool {
    d == [2, 2]
}

fn bipartite(d: &[usize]) -> bool {
    d.len() == 2
}

fn multiparty(d: &[usize]) -> bool {
    d.len() >= 2
}

fn gme_dims(d: &[usize]) -> bool {
    d.len() >= 3
}

fn any(_: &[usize]) -> bool {
    true
}

fn exact(v: f64) -> Result<Option<BoundValue>> {
    Ok(Some(BoundValue::exact(v)))
}

const REGISTRY: &[Entry] = &[
    Entry {
        name: "tau3",
        applies: three_qubits,
        kind: BoundKind::Exact,
        eval: |s, seed| match s {
            State::Pure(p) => exact(invariants::tau3(p)?),
            State::Mixed(m) => Ok(Some(tau3_mixed_lower_bound(m, seed)?)),
        },
    },
    Entry {
        name: "tau3_upper",
        applies: three_qubits,
        kind: BoundKind::Upper,
        eval: |s, seed| match s {
            State::Pure(p) => exact(invariants::tau3(p)?),
            State::Mixed(m) => Ok(Some(convex_roof_upper(&Tau3 { seed }, m, None, seed)?)),
        },
    },
    Entry {
        name: "tau3_witness",
        applies: three_qubits,
        kind: BoundKind::Lower,
        eval: |s, _| Ok(Some(BoundValue::lower(tau3_witness_bound(&s.to_density())?))),
    },
    Entry {
        name: "residual_tangle",
        applies: three_qubits,
        kind: BoundKind::Exact,
        eval: |s, _| match s {
            State::Pure(p) => exact(invariants::residual_tangle(p)?),
            State::Mixed(_) => Ok(None),
        },
    },
    Entry {
        name: "concurrence",
        applies: two_qubits,
        kind: BoundKind::Exact,
        eval: |s, _| exact(wootters_concurrence(&s.to_density())?),
    },
    Entry {
        name: "negativity",
        applies: multiparty,
        kind: BoundKind::Exact,
        eval: |s, _| exact(negativity(&s.to_density(), &[0])?),
    },
    Entry {
        name: "log_negativity",
        applies: multiparty,
        kind: BoundKind::Exact,
        eval: |s, _| exact(log_negativity(&s.to_density(), &[0])?),
    },
    Entry {
        name: "entropy",
        applies: multiparty,
        kind: BoundKind::Exact,
        eval: |s, _| match s {
            State::Pure(p) => exact(entanglement_entropy(p, &[0])?),
            State::Mixed(_) => Ok(None),
        },
    },
    Entry {
        name: "g_concurrence",
        applies: bipartite,
        kind: BoundKind::Exact,
        eval: |s, _| match s {
            State::Pure(p) if p.dims()[0] == p.dims()[1] => exact(g_concurrence(p, &[0])?),
            _ => Ok(None),
        },
    },
    Entry {
        name: "cren",
        applies: bipartite,
        kind: BoundKind::Upper,
        eval: |s, seed| Ok(Some(cren_upper(&s.to_density(), seed)?)),
    },
    Entry {
        name: "gme_concurrence",
        applies: gme_dims,
        kind: BoundKind::Exact,
        eval: |s, _| match s {
            State::Pure(p) => exact(gme_concurrence_pure(p)?),
            State::Mixed(m) if m.dims().iter().all(|&d| d == 2) => Ok(Some(gme_concurrence_bound(m, &GmePairs::Ghz)?)),
            State::Mixed(_) => Ok(None),
        },
    },
    Entry { name: "purity", applies: any, kind: BoundKind::Exact, eval: |s, _| exact(s.to_density().purity()) },
];

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.name).collect()
}

/// Requested measures in the given order, or every applicable one.
pub fn run(state: &State, requested: &[String], seed: u64) -> std::result::Result<MeasureReport, CliError> {
    let dims = state.dims();
    let chosen: Vec<&Entry> = if requested.is_empty() {
        REGISTRY.iter().filter(|e| (e.applies)(dims)).collect()
    } else {
        requested
            .iter()
            .map(|name| {
                let e = REGISTRY.iter().find(|e| e.name == name.trim()).ok_or_else(|| {
                    CliError::usage(format!("unknown measure '{name}'; known: {}", names().join(", ")))
                })?;
                if !(e.applies)(dims) {
                    return Err(CliError::from_core(tanglekit::Error::DimensionMismatch(format!(
                        "measure {} does not apply to dims {dims:?}",
                        e.name
                    ))));
                }
                Ok(e)
            })
            .collect::<std::result::Result<_, _>>()?
    };
    let mut report = MeasureReport::new();
    for e in chosen {
        match (e.eval)(state, seed)? {
            Some(v) => report.push(e.name, v),
            None => report.push_unavailable(e.name, e.kind),
        }
    }
    Ok(report)
}

pub fn witness(state: &State, kind: WitnessKind) -> std::result::Result<MeasureReport, CliError> {
    let v = witness_value(&state.to_density(), kind)?;
    let mut report = MeasureReport::new();
    report.push("witness_value", BoundValue::exact(v));
    report.label("witness", kind.as_str());
    report.label("verdict", if v < 0.0 { "detected" } else { "not detected" });
    Ok(report)
}
