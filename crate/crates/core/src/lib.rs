//! Monotone linear-interpolation semi-Lagrangian schemes for degenerate
//! parabolic Hamilton-Jacobi-Bellman equations
//!
//! ```text
//! u_t - inf_a { L^a u + c^a u + f^a } = 0,   L^a = 1/2 tr(sigma sigma^T D^2) + b . D
//! ```
//!
//! on boxes in one or two dimensions, with theta time stepping and Howard's
//! policy iteration for the implicit part.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// axis loops index several per-axis arrays at once
#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod cli;
pub mod error;
pub mod grid;
pub mod howard;
pub mod interp;
pub mod problem;
pub mod report;
pub mod scheme;
pub mod sparse;
pub mod stencil;

pub use error::{CflBinding, Error, Result};
pub use grid::{GridField, SpatialGrid, TimeGrid};
pub use howard::{HowardOutcome, HowardSettings, Policy};
pub use problem::{
    BoundaryCondition, BoxDomain, Coefficients, ControlSet, EquationForm, FnCoefficients, HjbProblem, Point,
    Sigma,
};
pub use scheme::{CflReport, Scheme, SchemeConfig, Solution, StepDiagnostics};
pub use stencil::{DisplacementSet, StencilVariant};
