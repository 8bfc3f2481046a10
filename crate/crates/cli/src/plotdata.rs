//! Plot-ready CSV files derived from a benchmark report.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use crate::report::ReportRow;

pub const BNC_TIME: &str = "bnc_time.csv";
pub const ROUNDING: &str = "rounding.csv";
pub const QUALITY: &str = "gtsp_quality.csv";
pub const GTSP_TIME: &str = "gtsp_time_class_c.csv";
pub const GTSP_TIME_HIST: &str = "gtsp_time_hist.csv";
pub const GTSP_SUMMARY: &str = "gtsp_summary.csv";

fn writer(dir: &Path, name: &str) -> Result<(csv::Writer<File>, PathBuf), String> {
    let path = dir.join(name);
    let w = csv::Writer::from_path(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((w, path))
}

fn put(w: &mut csv::Writer<File>, rec: &[String]) -> Result<(), String> {
    w.write_record(rec).map_err(|e| e.to_string())
}

/// Mean and sample standard deviation.
fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Reference optimum per instance: a proven optimal cost from `bnc` or the
/// oracle.
fn optima(rows: &[ReportRow]) -> BTreeMap<&str, f64> {
    let mut best = BTreeMap::new();
    for r in rows {
        if r.status == "optimal" && (r.method == "bnc" || r.method == "oracle") {
            if let Some(c) = r.cost {
                best.entry(r.instance.as_str()).or_insert(c);
            }
        }
    }
    best
}

/// Equal-width histogram `(lo, hi, count)` starting at zero.
pub fn histogram(values: &[f64], width: f64) -> Vec<(f64, f64, usize)> {
    let Some(max) = values.iter().copied().reduce(f64::max) else { return Vec::new() };
    let bins = ((max / width).floor() as usize + 1).max(1);
    let mut counts = vec![0; bins];
    for &v in values {
        counts[((v / width).floor() as usize).min(bins - 1)] += 1;
    }
    counts.into_iter().enumerate().map(|(k, c)| (k as f64 * width, (k + 1) as f64 * width, c)).collect()
}

/// Write every plot file into `dir` and return their paths.
pub fn export(rows: &[ReportRow], dir: &Path, bin_width: f64) -> Result<Vec<PathBuf>, String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut written = Vec::new();
    let group = |r: &ReportRow| vec![r.class.clone(), r.n.to_string(), r.alpha.to_string(), r.instance.clone()];

    let (mut w, p) = writer(dir, BNC_TIME)?;
    put(&mut w, &["class", "n", "alpha", "instance", "seconds"].map(String::from))?;
    for r in rows.iter().filter(|r| r.method == "bnc" && r.status == "optimal") {
        let mut rec = group(r);
        rec.push(format!("{:.6}", r.seconds));
        put(&mut w, &rec)?;
    }
    w.flush().map_err(|e| e.to_string())?;
    written.push(p);

    let (mut w, p) = writer(dir, ROUNDING)?;
    put(&mut w, &["class", "n", "alpha", "instance", "rounding_successes"].map(String::from))?;
    for r in rows.iter().filter(|r| r.method == "bnc") {
        if let Some(k) = r.rounding_successes {
            let mut rec = group(r);
            rec.push(k.to_string());
            put(&mut w, &rec)?;
        }
    }
    w.flush().map_err(|e| e.to_string())?;
    written.push(p);

    let opt = optima(rows);
    let mut gaps: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    let (mut w, p) = writer(dir, QUALITY)?;
    put(&mut w, &["class", "n", "alpha", "instance", "optimal_cost", "heuristic_cost", "gap%"].map(String::from))?;
    for r in rows.iter().filter(|r| r.method == "gtsp") {
        let (Some(c), Some(&best)) = (r.cost, opt.get(r.instance.as_str())) else { continue };
        let gap = (c - best) / best * 100.0;
        let gap = if gap.abs() < 1e-9 { 0.0 } else { gap };
        gaps.entry((r.class.clone(), r.n)).or_default().push(gap);
        let mut rec = group(r);
        rec.extend([best.to_string(), c.to_string(), format!("{gap:.6}")]);
        put(&mut w, &rec)?;
    }
    w.flush().map_err(|e| e.to_string())?;
    written.push(p);

    let mut times: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    let mut class_c = Vec::new();
    let (mut w, p) = writer(dir, GTSP_TIME)?;
    put(&mut w, &["class", "n", "alpha", "instance", "seconds"].map(String::from))?;
    for r in rows.iter().filter(|r| r.method == "gtsp" && r.cost.is_some()) {
        times.entry((r.class.clone(), r.n)).or_default().push(r.seconds);
        if r.class == "C" {
            class_c.push(r.seconds);
            let mut rec = group(r);
            rec.push(format!("{:.6}", r.seconds));
            put(&mut w, &rec)?;
        }
    }
    w.flush().map_err(|e| e.to_string())?;
    written.push(p);

    let (mut w, p) = writer(dir, GTSP_TIME_HIST)?;
    put(&mut w, &["bin_lo", "bin_hi", "count"].map(String::from))?;
    for (lo, hi, c) in histogram(&class_c, bin_width) {
        put(&mut w, &[lo.to_string(), hi.to_string(), c.to_string()])?;
    }
    w.flush().map_err(|e| e.to_string())?;
    written.push(p);

    let (mut w, p) = writer(dir, GTSP_SUMMARY)?;
    put(
        &mut w,
        &["class", "n", "runs", "max_gap%", "mean_gap%", "std_gap%", "max_seconds", "mean_seconds", "std_seconds"]
            .map(String::from),
    )?;
    for (key, t) in &times {
        let mut rec = vec![key.0.clone(), key.1.to_string(), t.len().to_string()];
        match gaps.get(key) {
            Some(g) => {
                let (m, s) = mean_std(g);
                let max = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                rec.extend([format!("{max:.6}"), format!("{m:.6}"), format!("{s:.6}")]);
            }
            None => rec.extend([String::new(), String::new(), String::new()]),
        }
        let (m, s) = mean_std(t);
        let max = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        rec.extend([format!("{max:.6}"), format!("{m:.6}"), format!("{s:.6}")]);
        put(&mut w, &rec)?;
    }
    w.flush().map_err(|e| e.to_string())?;
    written.push(p);

    Ok(written)
}
