//! Solver dispatch shared by `solve` and `bench`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use cagvrp::formulation::CutKind;
use cagvrp::oracle::ORACLE_MAX_TARGETS;
use cagvrp::{
    brute_force, check_feasibility, evaluate_objective, solve_exact, solve_via_gtsp, Instance, LnsParams,
    Solution, SolveParams, SolveStatus,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Bnc,
    Gtsp,
    Oracle,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Bnc => "bnc",
            Method::Gtsp => "gtsp",
            Method::Oracle => "oracle",
        }
    }

    /// Whether the method can run on `inst` at all.
    pub fn applies_to(self, inst: &Instance) -> bool {
        self != Method::Oracle || inst.len() <= ORACLE_MAX_TARGETS
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "bnc" => Ok(Method::Bnc),
            "gtsp" => Ok(Method::Gtsp),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!("unknown method `{other}` (expected bnc, gtsp or oracle)")),
        }
    }
}

/// Outcome of one solver run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub method: Method,
    pub status: String,
    pub solution: Option<Solution>,
    pub cost: Option<f64>,
    /// Proven lower bound, when the method yields one.
    pub bound: Option<f64>,
    pub nodes: Option<usize>,
    pub cuts: Option<[usize; 4]>,
    pub rounding_successes: Option<usize>,
    pub seconds: f64,
}

impl RunOutcome {
    pub fn total_cuts(&self) -> Option<usize> {
        self.cuts.map(|c| c.iter().sum())
    }
}

pub fn run_method(inst: &Instance, method: Method, time_limit: Duration, seed: u64) -> cagvrp::Result<RunOutcome> {
    let start = Instant::now();
    let mut out = RunOutcome {
        method,
        status: String::new(),
        solution: None,
        cost: None,
        bound: None,
        nodes: None,
        cuts: None,
        rounding_successes: None,
        seconds: 0.0,
    };
    match method {
        Method::Bnc => {
            let params = SolveParams { time_limit, ..SolveParams::default() };
            let rep = solve_exact(inst, &params)?;
            out.status = rep.status.to_string();
            if rep.incumbent.is_some() {
                out.cost = Some(rep.cost);
            }
            out.solution = rep.incumbent;
            if rep.status != SolveStatus::Infeasible {
                out.bound = Some(rep.bound);
            }
            out.nodes = Some(rep.nodes);
            let mut cuts = [0; 4];
            for (slot, kind) in cuts.iter_mut().zip(CutKind::ALL) {
                *slot = rep.cuts.get(&kind).copied().unwrap_or(0);
            }
            out.cuts = Some(cuts);
            out.rounding_successes = Some(rep.rounding_successes);
        }
        Method::Gtsp => {
            let params = LnsParams { seed, time_limit: Some(time_limit), ..LnsParams::default() };
            let res = solve_via_gtsp(inst, &params)?;
            out.status = "heuristic".into();
            out.cost = Some(res.cost);
            out.solution = Some(res.solution);
        }
        Method::Oracle => {
            let res = brute_force(inst)?;
            out.status = "optimal".into();
            out.cost = Some(res.cost);
            out.bound = Some(res.cost);
            out.solution = Some(res.solution);
        }
    }
    out.seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Whether `claimed` matches the recomputed objective `actual`.
pub fn costs_agree(claimed: f64, actual: f64) -> bool {
    (claimed - actual).abs() <= 1e-6 * actual.abs().max(1.0)
}

/// Independent feasibility and cost check of a plan. Returns the recomputed
/// cost or a description of what is wrong.
pub fn verify_plan(inst: &Instance, sol: &Solution, claimed: Option<f64>) -> Result<f64, String> {
    let report = check_feasibility(inst, sol);
    if !report.ok() {
        return Err(cagvrp::verify::describe(&report).trim_end().to_string());
    }
    let actual = evaluate_objective(inst, sol, false).map_err(|e| e.to_string())?;
    match claimed {
        Some(c) if !costs_agree(c, actual) => Err(format!("recorded cost {c} differs from recomputed cost {actual}")),
        _ => Ok(actual),
    }
}
