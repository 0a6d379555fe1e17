use tanglekit::bipartite::{negativity, schmidt, schmidt_number_bounds};
use tanglekit::symfam::{ghzsym_classify, ghzsym_state, ghzsym_twirl};
use tanglekit::threequbit::pure_class3_with_evidence;
use tanglekit::{linalg, BoundValue, MeasureReport, State};

use crate::output::CliError;

/// Local dimension products at or below this have PPT ⇔ separable for
/// mixed states; pure states are separable exactly when PPT.
const PPT_EXACT_DIM: usize = 6;

pub fn run(state: &State) -> Result<MeasureReport, CliError> {
    let dims = state.dims().to_vec();
    let mut r = MeasureReport::new();
    match (state, dims.as_slice()) {
        (State::Pure(p), [2, 2, 2]) => {
            let e = pure_class3_with_evidence(p)?;
            r.push("tau3", BoundValue::exact(e.tau3));
            for (name, c) in ["c_ab", "c_ac", "c_bc"].iter().zip(e.concurrences) {
                r.push(name, BoundValue::exact(c));
            }
            r.label("class", e.class.as_str());
        }
        (State::Mixed(m), [2, 2, 2]) => {
            let c = ghzsym_twirl(m)?;
            r.push("x", BoundValue::exact(c.x));
            r.push("y", BoundValue::exact(c.y));
            let class = ghzsym_classify(c)?.as_str();
            // Off the family the twirl can only lose entanglement.
            let on_family = linalg::hs_distance(ghzsym_state(c)?.matrix(), m.matrix()) < 1e-9;
            r.label(if on_family { "class" } else { "class_lower_bound" }, class);
        }
        (_, [da, db]) => {
            if let State::Pure(p) = state {
                r.push("schmidt_rank", BoundValue::exact(schmidt(p, &[0])?.rank as f64));
            }
            let m = &state.to_density();
            let (from_n, from_c) = schmidt_number_bounds(m, &[0])?;
            let k = from_n.max(from_c);
            let n = negativity(m, &[0])?;
            r.push("negativity", BoundValue::exact(n));
            r.push("schmidt_number", BoundValue::lower(k as f64));
            let label = if k >= 2 {
                format!("entangled, Schmidt number ≥ {k}")
            } else if (matches!(state, State::Pure(_)) || da * db <= PPT_EXACT_DIM) && n <= 1e-12 {
                "separable".to_string()
            } else {
                "undetermined".to_string()
            };
            r.label("class", label);
        }
        _ => return Err(CliError::unsupported(format!("no classifier for dims {dims:?}"))),
    }
    Ok(r)
}
