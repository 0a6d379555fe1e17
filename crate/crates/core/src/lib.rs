//! Entanglement measures, local-SL invariants and convex-roof estimators for
//! pure and mixed states of a few finite-dimensional parties.
//!
//! Basis states are flattened party-major: the first party is the most
//! significant digit of the index, so `|j k⟩` of a `d_A × d_B` system sits at
//! `j * d_B + k`.

pub mod bipartite;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod multipartite;
pub mod optimize;
pub mod report;
pub mod rng;
pub mod roofs;
pub mod state;
pub mod symfam;
pub mod threequbit;

pub use error::{Error, Result};
pub use report::{BoundKind, BoundValue, MeasureReport};
pub use state::{Decomposition, DensityMatrix, LocalOperator, NamedState, OperatorKind, PureState, State};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;
