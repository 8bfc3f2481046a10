//! Numerical tolerances shared by all solvers.

/// Slack on the communication-range test `euclid(i, j) <= R`.
pub const DIST_TOL: f64 = 1e-6;
/// Slack on symmetry and triangle-inequality checks of cost matrices.
pub const TRIANGLE_TOL: f64 = 1e-6;
/// Primal feasibility of LP rows and bounds.
pub const FEAS_TOL: f64 = 1e-7;
/// A value within this distance of an integer counts as integral.
pub const INT_TOL: f64 = 1e-6;
/// Minimum violation for a cut to be reported by a separator.
pub const CUT_VIOLATION: f64 = 1e-4;
/// Support-graph threshold: variables at or below this are ignored.
pub const SUPPORT_EPS: f64 = 1e-6;
/// Cost comparisons between solutions.
pub const COST_TOL: f64 = 1e-6;
