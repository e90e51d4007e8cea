//! Two-qubit correlation laboratory for open quantum systems.
//!
//! Two-qubit density matrices are evolved under a squeezed-thermal-bath
//! dissipative master equation ([`dissipative`]) or a pure-dephasing channel
//! ([`qnd`]), and characterised by concurrence, entanglement of formation,
//! the Horodecki CHSH quantity, discord, classical correlation, mutual
//! information and optimal teleportation fidelity ([`measures`]).
//! [`sweep`] drives parameter scans and emits CSV and classification tables.

// `!(x > 0.0)` style checks are kept so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dissipative;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod qnd;
pub mod state;
pub mod sweep;

pub use error::{QcorrError, Result};
pub use linalg::{ComplexMatrix, Subsystem};
pub use measures::{CorrelationReport, DiscordMode, Label, MeasureOptions};
pub use state::{DensityMatrix, FanoForm};
pub use sweep::{run_sweep, SweepConfig};
