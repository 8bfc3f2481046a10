//! Exact and heuristic solvers for the cooperative aerial-ground vehicle
//! routing problem (CAGVRP): a ground vehicle tours a subset of targets
//! starting at a base, and a UAV launched from each ground stop visits the
//! remaining targets within communication range.

pub mod bnc;
pub mod error;
pub mod formulation;
pub mod gtsp;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod separation;
pub mod tolerance;
pub mod transform;
pub mod tsp;
pub mod verify;

pub use error::{Error, Result};
pub use bnc::{solve_exact, SolveParams, SolveReport, SolveStatus};
pub use formulation::{build_model, evaluate_objective, Model, ModelOptions, RangeMode};
pub use gtsp::{solve_gtsp_exact_small, solve_gtsp_lns, GtspGraph, GtspTour, LnsParams};
pub use instance::{generate_instance, Arc, Edge, Instance, InstanceClass, Matrix, Point, TargetSet};
pub use oracle::brute_force;
pub use transform::{build_transformed_graph, map_cagvrp_to_gtsp, map_gtsp_to_cagvrp, solve_via_gtsp, TransformedGraph};
pub use verify::{check_feasibility, relative_gap, FeasibilityReport, Solution, SolutionFile, Violation};
