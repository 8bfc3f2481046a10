//! Benchmark report rows and their CSV form.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use cagvrp::{relative_gap, Instance};
use log::{info, warn};
use rayon::prelude::*;

use crate::run::{run_method, verify_plan, Method, RunOutcome};

pub const HEADER: [&str; 17] = [
    "instance",
    "method",
    "cost",
    "bound",
    "gap%",
    "nodes",
    "cuts",
    "seconds",
    "status",
    "class",
    "n",
    "alpha",
    "rounding_successes",
    "cuts_gv",
    "cuts_uav_in",
    "cuts_uav_out",
    "cuts_two_matching",
];

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportRow {
    pub instance: String,
    pub method: String,
    pub cost: Option<f64>,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub nodes: Option<usize>,
    pub cuts: Option<usize>,
    pub seconds: f64,
    pub status: String,
    pub class: String,
    pub n: usize,
    pub alpha: f64,
    pub rounding_successes: Option<usize>,
    pub cut_split: Option<[usize; 4]>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>, String> {
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(|_| format!("invalid field `{s}`"))
    }
}

impl ReportRow {
    fn record(&self) -> Vec<String> {
        let split = |k: usize| opt(self.cut_split.map(|c| c[k]));
        vec![
            self.instance.clone(),
            self.method.clone(),
            opt(self.cost),
            opt(self.bound),
            self.gap.map(|g| format!("{g:.6}")).unwrap_or_default(),
            opt(self.nodes),
            opt(self.cuts),
            format!("{:.6}", self.seconds),
            self.status.clone(),
            self.class.clone(),
            self.n.to_string(),
            self.alpha.to_string(),
            opt(self.rounding_successes),
            split(0),
            split(1),
            split(2),
            split(3),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self, String> {
        if rec.len() != HEADER.len() {
            return Err(format!("expected {} fields, found {}", HEADER.len(), rec.len()));
        }
        let f = |i: usize| rec.get(i).unwrap_or("");
        let split: [Option<usize>; 4] =
            [parse_opt(f(13))?, parse_opt(f(14))?, parse_opt(f(15))?, parse_opt(f(16))?];
        Ok(ReportRow {
            instance: f(0).to_string(),
            method: f(1).to_string(),
            cost: parse_opt(f(2))?,
            bound: parse_opt(f(3))?,
            gap: parse_opt(f(4))?,
            nodes: parse_opt(f(5))?,
            cuts: parse_opt(f(6))?,
            seconds: parse_opt(f(7))?.unwrap_or(0.0),
            status: f(8).to_string(),
            class: f(9).to_string(),
            n: parse_opt(f(10))?.unwrap_or(0),
            alpha: parse_opt(f(11))?.unwrap_or(0.0),
            rounding_successes: parse_opt(f(12))?,
            cut_split: match split {
                [Some(a), Some(b), Some(c), Some(d)] => Some([a, b, c, d]),
                _ => None,
            },
        })
    }
}

pub fn write_report<W: Write>(out: W, rows: &[ReportRow]) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(row.record()).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

pub fn read_report<R: Read>(input: R) -> Result<Vec<ReportRow>, String> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().ne(HEADER.iter().copied()) {
        return Err(format!("unexpected report header `{}`", headers.iter().collect::<Vec<_>>().join(",")));
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| e.to_string())?;
            ReportRow::from_record(&rec).map_err(|e| format!("report line {}: {e}", i + 2))
        })
        .collect()
}

/// Instance files (`*.inst`) under `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "inst"))
        .collect();
    files.sort();
    Ok(files)
}

pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub time_limit: Duration,
    pub seed: u64,
}

/// Run every method on every instance. Each returned plan is re-verified;
/// failures appear as rows with a `failed: ...` or `verify_failed: ...`
/// status instead of aborting the batch.
pub fn run_bench(instances: &[(String, Instance)], cfg: &BenchConfig) -> Vec<ReportRow> {
    let jobs: Vec<(usize, Method)> = instances
        .iter()
        .enumerate()
        .flat_map(|(k, (_, inst))| cfg.methods.iter().filter(|m| m.applies_to(inst)).map(move |&m| (k, m)))
        .collect();

    let mut rows: Vec<(usize, Method, ReportRow)> = jobs
        .par_iter()
        .map(|&(k, method)| {
            let (name, inst) = &instances[k];
            let row = match run_method(inst, method, cfg.time_limit, cfg.seed) {
                Ok(out) => checked_row(name, inst, out),
                Err(e) => {
                    warn!("{name} {method}: {e}");
                    ReportRow { status: format!("failed: {e}"), method: method.to_string(), ..base_row(name, inst) }
                }
            };
            info!("{name} {method}: {} cost={}", row.status, opt(row.cost));
            (k, method, row)
        })
        .collect();
    rows.sort_by_key(|(k, m, _)| (*k, *m));
    let mut rows: Vec<ReportRow> = rows.into_iter().map(|(_, _, r)| r).collect();
    fill_gaps(&mut rows);
    rows
}

fn base_row(name: &str, inst: &Instance) -> ReportRow {
    ReportRow {
        instance: name.to_string(),
        class: inst.class().to_string(),
        n: inst.len(),
        alpha: inst.alpha(),
        ..ReportRow::default()
    }
}

fn checked_row(name: &str, inst: &Instance, out: RunOutcome) -> ReportRow {
    let mut row = ReportRow {
        method: out.method.to_string(),
        cost: out.cost,
        bound: out.bound,
        nodes: out.nodes,
        cuts: out.total_cuts(),
        seconds: out.seconds,
        status: out.status.clone(),
        rounding_successes: out.rounding_successes,
        cut_split: out.cuts,
        ..base_row(name, inst)
    };
    if let Some(sol) = &out.solution {
        if let Err(why) = verify_plan(inst, sol, out.cost) {
            warn!("{name} {}: verification failed: {why}", out.method);
            row.status = format!("verify_failed: {}", why.lines().next().unwrap_or(""));
            row.cost = None;
        }
    }
    row
}

/// Gap of each row against the best bound any method proved on the same
/// instance.
fn fill_gaps(rows: &mut [ReportRow]) {
    let mut best: BTreeMap<String, f64> = BTreeMap::new();
    for r in rows.iter() {
        if let Some(b) = r.bound {
            let e = best.entry(r.instance.clone()).or_insert(f64::NEG_INFINITY);
            *e = e.max(b);
        }
    }
    for r in rows.iter_mut() {
        let (Some(cost), Some(&bound)) = (r.cost, best.get(&r.instance)) else { continue };
        // Bounds from the LP may overshoot the optimum by round-off.
        let cost = if cost < bound && bound - cost <= 1e-6 * bound.abs().max(1.0) { bound } else { cost };
        r.gap = relative_gap(cost, bound).ok();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(instance: &str, method: &str, cost: Option<f64>, bound: Option<f64>) -> ReportRow {
        ReportRow {
            instance: instance.into(),
            method: method.into(),
            cost,
            bound,
            status: "optimal".into(),
            class: "A".into(),
            n: 6,
            alpha: 0.1,
            ..ReportRow::default()
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut r = row("a", "bnc", Some(12.5), Some(12.0));
        r.gap = Some(4.166667);
        r.nodes = Some(3);
        r.cuts = Some(10);
        r.cut_split = Some([4, 3, 2, 1]);
        r.rounding_successes = Some(2);
        let rows = vec![r, row("b", "gtsp", Some(1.0), None)];
        let mut buf = Vec::new();
        write_report(&mut buf, &rows).unwrap();
        let back = read_report(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn gaps_use_best_bound_per_instance() {
        let mut rows = vec![
            row("a", "bnc", Some(110.0), Some(90.0)),
            row("a", "oracle", Some(100.0), Some(100.0)),
            row("a", "gtsp", Some(105.0), None),
            row("b", "gtsp", Some(7.0), None),
        ];
        fill_gaps(&mut rows);
        assert!((rows[0].gap.unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(rows[1].gap, Some(0.0));
        assert!((rows[2].gap.unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(rows[3].gap, None);
    }

    #[test]
    fn bound_round_off_is_absorbed() {
        let mut rows = vec![row("a", "bnc", Some(100.0), Some(100.0 + 1e-9))];
        fill_gaps(&mut rows);
        assert_eq!(rows[0].gap, Some(0.0));
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_report("a,b\n1,2\n".as_bytes()).is_err());
    }
}
