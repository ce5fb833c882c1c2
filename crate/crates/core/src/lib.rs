//! Curvature operators, Jacobi fields, and geodesic sphere/ball volumes on
//! naturally reductive homogeneous spaces, computed from Lie-algebra
//! structure constants.
//!
//! The crate is organized bottom-up:
//!
//! - [`scalars`]: exact arithmetic in the field Q(√2, √3, √5) and the
//!   [`scalars::Ring`] abstraction shared by exact and floating-point paths;
//! - [`algebra`]: structure-constant tables, the reductive split, exact
//!   validation, the JSON file format, and the builtin spaces
//!   (`sp2_su2`, `su2_biinv`);
//! - [`matrixrep`]: the concrete 4×4 quaternionic-unitary matrix model of the
//!   flagship space, used as an independent oracle for its bracket table;
//! - [`linalg`]: dense float kernels (skew exponential, symmetric
//!   eigensolver wrappers) shared by the geometry layers;
//! - [`series`]: truncated power series and series-valued determinants;
//! - [`curvature`]: the family of self-adjoint curvature operators along a
//!   geodesic, its derivatives, closed form, and osculating profile;
//! - [`jacobi`]: Taylor solution of the Jacobi operator equation with
//!   certified truncation error, plus a Runge–Kutta cross-check;
//! - [`volume`]: integrands and Monte Carlo sweeps for geodesic-sphere area
//!   and geodesic-ball volume, with series-based small-radius expansions.

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod jacobi;
pub mod linalg;
pub mod matrixrep;
pub mod scalars;
pub mod series;
pub mod volume;

pub use algebra::{AlgVec, AlgebraSpec, Grading, Part, ValidationReport, Violation};
pub use curvature::{
    closed_form_jacobi, conjugated_jacobi, curvature_gradient_component, derivative_pattern,
    jacobi_derivative, jacobi_operator, lambda_matrix, osculating_rank, ClosedFormJacobi,
    OperatorMatrix, OsculatingProfile,
};
pub use error::{GeomError, Result};
pub use jacobi::{jacobi_field, rk4_jacobi, taylor_series, TaylorTensor};
pub use scalars::{Radical, Rational, Ring};
pub use volume::{
    area_series, ball_volume, sphere_area, sweep, theta_stats, unit_sphere_area, McEstimate,
    Quadrature, SweepConfig, SweepTable,
};
