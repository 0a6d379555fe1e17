//! Normal forms under local SL operations, convex-roof estimators and
//! numerical checks of the monotone axioms.

mod checks;
mod measure;
mod normal;
mod roof;

pub use checks::{monotone_property_checks, CheckOutcome, Fixtures, MonotoneReport, CHECK_TOL};
pub use measure::{
    Concurrence, GConcurrence, HomogeneousMeasure, NegativityMeasure, PureMeasure, Purity, ResidualTangle, Tau3,
};
pub use normal::{evaluate_via_normal_form, normal_form, NormalFormResult, NF_MAX_ITER, NF_TOL, NULLCONE_TRACE};
pub use roof::{convex_roof_bruteforce, convex_roof_upper, convex_roof_with, cren_upper, RoofEstimate, RoofOptions};
