//! Entanglement witnesses for bipartite `d x d` states from an exact convex
//! optimization over single-party feasible regions.
//!
//! The pipeline is: pick operator sets for both parties ([`bases`]), compute
//! the correlation matrix of a state ([`witness::correlation_matrix`]), and
//! read off the optimal witness and its detection value
//! ([`witness::detection_value`]). A negative value certifies entanglement.
//! [`choi`] has closed forms for the generalized Choi family and [`scan`]
//! sweeps parameter grids.

pub mod bases;
pub mod choi;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod scan;
pub mod states;
pub mod tolerance;
pub mod witness;

pub use bases::{first_set, fr_norm, su_generators, unit_set, BasisKind, OperatorBasis};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, RealMatrix, C64};
pub use states::{ChoiParams, DensityMatrix, StateSpec};
pub use witness::{DetectionReport, Witness};
