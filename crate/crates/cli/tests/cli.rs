use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cagvrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cagvrp")).args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &Path, class: &str, n: usize, alpha: f64, seed: u64, count: usize) -> Output {
    cagvrp(&[
        "gen",
        "--class",
        class,
        "--n",
        &n.to_string(),
        "--alpha",
        &alpha.to_string(),
        "--seed",
        &seed.to_string(),
        "--count",
        &count.to_string(),
        "--out",
        p(dir),
    ])
}

fn inst_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "inst"))
        .collect();
    v.sort();
    v
}

#[test]
fn gen_writes_requested_count() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gen(tmp.path(), "A", 20, 0.1, 1, 20);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let files = inst_files(tmp.path());
    assert_eq!(files.len(), 20);
    assert!(tmp.path().join("A_n20_a0.1_s1.inst").exists());
    let inst = cagvrp::Instance::load(&files[0]).unwrap();
    assert_eq!(inst.len(), 20);
    assert_eq!(inst.range(), 25.0);
    for pt in inst.points() {
        assert!((0.0..=100.0).contains(&pt.x) && (0.0..=100.0).contains(&pt.y));
    }
}

#[test]
fn gen_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    gen(a.path(), "B", 15, 0.3, 9, 2);
    gen(b.path(), "B", 15, 0.3, 9, 2);
    for (x, y) in inst_files(a.path()).iter().zip(inst_files(b.path())) {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
}

#[test]
fn every_method_output_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    gen(tmp.path(), "A", 7, 0.2, 4, 1);
    let inst = &inst_files(tmp.path())[0];
    let mut costs = Vec::new();
    for method in ["bnc", "gtsp", "oracle"] {
        let sol = tmp.path().join(format!("{method}.sol"));
        let out = cagvrp(&["solve", "--method", method, "--in", p(inst), "--time-limit", "30", "--out", p(&sol)]);
        assert!(out.status.success(), "{method}: {}", String::from_utf8_lossy(&out.stderr));
        let out = cagvrp(&["verify", "--instance", p(inst), "--solution", p(&sol)]);
        assert!(out.status.success(), "{method}: {}", String::from_utf8_lossy(&out.stdout));
        let file: cagvrp::SolutionFile = fs::read_to_string(&sol).unwrap().parse().unwrap();
        costs.push(file.cost.unwrap());
    }
    // bnc and the oracle are both exact; the heuristic cannot beat them.
    assert!((costs[0] - costs[2]).abs() < 1e-6 * costs[2]);
    assert!(costs[1] >= costs[2] - 1e-6);
}

#[test]
fn verify_rejects_tampered_cost_and_broken_plan() {
    let tmp = tempfile::tempdir().unwrap();
    gen(tmp.path(), "A", 6, 0.1, 2, 1);
    let inst = &inst_files(tmp.path())[0];
    let sol = tmp.path().join("s.sol");
    assert!(cagvrp(&["solve", "--method", "oracle", "--in", p(inst), "--out", p(&sol)]).status.success());
    let text = fs::read_to_string(&sol).unwrap();

    let bad_cost: String =
        text.lines().map(|l| if l.starts_with("COST") { "COST 1.0\n".into() } else { format!("{l}\n") }).collect();
    let f = tmp.path().join("cost.sol");
    fs::write(&f, bad_cost).unwrap();
    assert_eq!(cagvrp(&["verify", "--instance", p(inst), "--solution", p(&f)]).status.code(), Some(1));

    let unassigned: String = text.lines().filter(|l| !l.starts_with("ASSIGN 1 ")).map(|l| format!("{l}\n")).collect();
    let f = tmp.path().join("plan.sol");
    fs::write(&f, unassigned).unwrap();
    assert_eq!(cagvrp(&["verify", "--instance", p(inst), "--solution", p(&f)]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cagvrp(&["solve", "--method", "simplex", "--in", "x"]).status.code(), Some(2));
    assert_eq!(cagvrp(&["verify", "--instance", "/nonexistent", "--solution", "/nonexistent"]).status.code(), Some(2));
    assert_eq!(cagvrp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cagvrp(&["--help"]).status.code(), Some(0));
}

#[test]
fn oracle_refuses_large_instances() {
    let tmp = tempfile::tempdir().unwrap();
    gen(tmp.path(), "A", 12, 0.1, 1, 1);
    let inst = &inst_files(tmp.path())[0];
    assert_eq!(cagvrp(&["solve", "--method", "oracle", "--in", p(inst)]).status.code(), Some(2));
}

fn read_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

#[test]
fn bench_matches_oracle_on_small_corpus() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    for (class, n, alpha, seed) in [("A", 6, 0.1, 1), ("A", 7, 0.3, 5), ("B", 8, 0.2, 2), ("C", 8, 0.1, 7)] {
        assert!(gen(&corpus, class, n, alpha, seed, 2).status.success());
    }
    let report = tmp.path().join("report.csv");
    let out = cagvrp(&[
        "bench",
        "--dir",
        p(&corpus),
        "--methods",
        "bnc,oracle",
        "--out",
        p(&report),
        "--time-limit",
        "60",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let header = csv::Reader::from_path(&report).unwrap().headers().unwrap().clone();
    assert_eq!(&header.iter().take(8).collect::<Vec<_>>(), &[
        "instance", "method", "cost", "bound", "gap%", "nodes", "cuts", "seconds"
    ]);
    let rows = read_rows(&report);
    assert_eq!(rows.len(), 16);
    for r in &rows {
        assert_eq!(&r[8], "optimal", "{r:?}");
        let gap: f64 = r[4].parse().unwrap();
        assert!(gap.abs() < 1e-6, "{r:?}");
    }
    // Both methods report the same optimum per instance.
    for pair in rows.chunks(2) {
        assert_eq!(&pair[0][0], &pair[1][0]);
        let (a, b): (f64, f64) = (pair[0][2].parse().unwrap(), pair[1][2].parse().unwrap());
        assert!((a - b).abs() <= 1e-6 * b);
    }
}

#[test]
fn bench_skips_oracle_beyond_cap_and_exports_plot_data() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    gen(&corpus, "A", 10, 0.1, 3, 2);
    gen(&corpus, "C", 12, 0.2, 3, 2);
    let report = tmp.path().join("report.csv");
    let out = cagvrp(&[
        "bench",
        "--dir",
        p(&corpus),
        "--methods",
        "bnc,gtsp,oracle",
        "--out",
        p(&report),
        "--threads",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows(&report);
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| &r[1] != "oracle"));
    for r in rows.iter().filter(|r| &r[1] == "gtsp") {
        assert!(r[4].parse::<f64>().unwrap() >= 0.0);
    }

    let plots = tmp.path().join("plots");
    let out = cagvrp(&["export-plotdata", "--report", p(&report), "--out", p(&plots)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_rows(&plots.join("bnc_time.csv")).len(), 4);
    assert_eq!(read_rows(&plots.join("rounding.csv")).len(), 4);
    assert_eq!(read_rows(&plots.join("gtsp_quality.csv")).len(), 4);
    assert_eq!(read_rows(&plots.join("gtsp_time_class_c.csv")).len(), 2);
    let hist = read_rows(&plots.join("gtsp_time_hist.csv"));
    assert_eq!(hist.iter().map(|r| r[2].parse::<usize>().unwrap()).sum::<usize>(), 2);
}

#[test]
fn export_writes_lp_and_gtsp_text() {
    let tmp = tempfile::tempdir().unwrap();
    gen(tmp.path(), "A", 5, 0.1, 1, 1);
    let inst = &inst_files(tmp.path())[0];
    let lp = tmp.path().join("m.lp");
    let gt = tmp.path().join("g.gtsp");
    let out = cagvrp(&["export", "--in", p(inst), "--lp", p(&lp), "--gtsp", p(&gt)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(&lp).unwrap().to_ascii_lowercase().contains("minimize"));
    let g: cagvrp::GtspGraph = fs::read_to_string(&gt).unwrap().parse().unwrap();
    assert_eq!(g.num_sets(), 5);
}
