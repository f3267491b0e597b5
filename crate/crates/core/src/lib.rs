//! Complete positivity of linear maps on `M_n` through Schur parameters.
//!
//! A linear map is described by its Choi matrix ([`channel`]). The [`lattice`]
//! module converts between positive matrices and their free Schur parameters and
//! runs the sequential unit-disk test for complete positivity; [`qubit`] gives the
//! closed forms for qubit channels and [`lattice_graph`] emits the associated
//! cascade network. [`linalg`] holds the eigenvalue machinery used as an
//! independent reference.

pub mod channel;
pub mod error;
pub mod lattice;
pub mod lattice_graph;
pub mod linalg;
pub mod matrix;
pub mod qubit;
pub mod random;

pub use channel::{ChannelSpec, ChoiMatrix, KrausSet};
pub use error::{ChannelError, LatticeError, LinalgError};
pub use lattice::{
    CpVerdict, DiskGeometry, Location, OffEntry, SchurParams, Violation, ViolationKind,
};
pub use matrix::{Complex, ComplexMatrix};
pub use qubit::{DegenerateCase, KingRuskaiForm, QubitClosedFormParams};
