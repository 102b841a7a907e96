//! Joint design of a pulsed radar waveform and a communication codebook
//! sharing one band.
//!
//! The communication side maximizes a compound rate, a weighted mix of its
//! rate with and without radar interference, while the radar must keep its
//! SINR above a floor. The crate provides the closed-form and numerical
//! optimizers, evaluators for every figure of merit, rate-region tools and a
//! Monte Carlo simulator that checks the analytic model.
//!
//! ```
//! use coexist::scenario::{DbSpec, Scenario};
//! use coexist::solvers::solve_joint;
//!
//! let sc = Scenario::from_db(&DbSpec::reference(8, 0.5)).unwrap();
//! let out = solve_joint(&sc).unwrap();
//! assert!((out.cr - 3.27).abs() < 0.02);
//! ```

// `!(x > 0.0)` rejects NaN as well; index loops mirror the matrix algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod format;
pub mod linalg;
pub mod metrics;
pub mod random;
pub mod region;
pub mod scenario;
pub mod simulate;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::{CMatrix, HermitianMatrix, C64};
pub use metrics::RatePoint;
pub use scenario::{DbSpec, Design, DesignOutcome, InterferenceModel, Scenario, SolverTag};
