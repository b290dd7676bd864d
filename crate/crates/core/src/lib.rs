//! Stationary measures of two-state, space-inhomogeneous discrete-time
//! quantum walks on `ℤ`.
//!
//! Eigenvectors of the walk operator `U⁽ˢ⁾Ψ = λΨ` with `|λ| = 1` give
//! stationary measures `μ(x) = ‖Ψ(x)‖²`. This crate builds them three ways:
//!
//! - [`transfer`]: products of 2×2 transfer matrices stepping outward from
//!   the origin, for any coin sequence;
//! - [`closed_form`]: analytic tail solutions for fields that are constant
//!   outside a finite defect region, including the fully homogeneous case;
//! - [`evolution`]: direct time evolution on a truncated lattice, used to
//!   confirm that the constructed measures really are stationary.
//!
//! [`measure`] classifies the resulting measures, and [`scenario`] /
//! [`workflow`] provide the file formats and commands used by the CLI.

pub mod closed_form;
pub mod coin;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod measure;
pub mod scenario;
pub mod transfer;
pub mod workflow;

pub use closed_form::{
    homogeneous_amplitude, multi_defect_amplitude, root_analysis, tail_amplitude_minus,
    tail_amplitude_plus, ClosedFormParams, DefectRegion, MultiDefectSolution, RootKind, Roots,
};
pub use coin::{Coin, CoinField, CoinSplit};
pub use error::{Error, Result};
pub use evolution::{eigen_residual, evolve_step, stationarity_check, TruncatedState};
pub use linalg::{Mat2, Spinor, C64};
pub use measure::{classify, measure_of, ClassificationReport, Measure, MeasureClass};
pub use transfer::{amplitude_window, transfer_minus, transfer_plus, AmplitudeField, Eigenvalue};
