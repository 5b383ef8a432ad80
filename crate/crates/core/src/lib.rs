//! Fixed-point machinery for C*-algebra valued metric spaces.
//!
//! Distances take values in a concrete C*-algebra (real diagonal tuples or
//! complex Hermitian-capable matrices) ordered by the Löwner cone. On top of
//! that sit checkable interpolative Kannan / Reich contraction conditions,
//! the constructive iteration schemes that produce their fixed points, a
//! catalog of ready-made scenarios and a record-emitting CLI harness.
//!
//! ```
//! use cstar_fixpoint::catalog::{catalog_build, Parameters};
//! use cstar_fixpoint::solvers::{picard_solve, SolveStatus, StopRule};
//!
//! let params = Parameters::parse_pairs(&["a=0.5", "b=1"]).unwrap();
//! let entry = catalog_build("affine_scalar", &params).unwrap();
//! let result = picard_solve(
//!     &entry.space,
//!     &entry.map,
//!     &entry.default_start,
//!     Some(&entry.spec),
//!     &StopRule::default(),
//! )
//! .unwrap();
//! assert_eq!(result.status, SolveStatus::Converged);
//! ```

pub mod algebra;
pub mod catalog;
pub mod conditions;
pub mod error;
pub mod harness;
pub mod metric;
pub mod solvers;

pub use error::{Error, Result};
