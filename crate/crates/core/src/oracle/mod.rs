//! Numerical Sturm-Liouville oracle.
//!
//! Every radial problem is discretized by a conservative second-order finite
//! difference scheme on a half-cell grid, the lowest eigenvalues are extracted
//! by Sturm bisection, and grid sequences are Richardson-extrapolated. None of
//! this uses the closed forms except to pick a truncation radius and to report
//! the comparison.
//!
//! Curved problems are gridded uniformly in geodesic distance (see [`Chart`]);
//! all coefficients are evaluated analytically in that variable so that nothing
//! singular is ever sampled at an endpoint.

mod convergence;
mod discretize;
mod eigen;
mod problem;
mod residual;

pub use convergence::{convergence_study, study_problem, ConvergenceReport};
pub use discretize::{discretize, DiscreteOperator, MIN_MODEL_GRID};
pub use eigen::{count_below, lowest_eigenvalues, tridiagonal_lowest};
pub use problem::{build_problem, Boundary, Chart, Coefficient, Kinetic, Picture, SturmLiouvilleProblem};
pub use residual::{residual_norm, ResidualReport};
