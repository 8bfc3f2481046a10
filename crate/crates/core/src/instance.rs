//! Problem data: targets, cost matrices, communication range.
//!
//! Target `0` is always the base station. Costs are dense `n x n` matrices
//! indexed by target. The GV matrix `c` is symmetric; the UAV matrix `d` may
//! be asymmetric when loaded from a file, but generated instances are
//! Euclidean and therefore symmetric.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::tolerance::{DIST_TOL, TRIANGLE_TOL};

/// Side length of the square grid used by the generators.
pub const GRID_SIZE: f64 = 100.0;
/// Communication range used by all generated instances.
pub const DEFAULT_RANGE: f64 = 25.0;

const CLUSTER_SIGMA: f64 = 5.0;
const CLUSTER_SEPARATION: f64 = 30.0;
const CLUSTER_SIZE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Dense square matrix of `f64` stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|v| v * factor).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InstanceClass {
    A,
    B,
    C,
    Custom,
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InstanceClass::A => "A",
            InstanceClass::B => "B",
            InstanceClass::C => "C",
            InstanceClass::Custom => "custom",
        };
        f.write_str(s)
    }
}

impl FromStr for InstanceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(InstanceClass::A),
            "B" | "b" => Ok(InstanceClass::B),
            "C" | "c" => Ok(InstanceClass::C),
            "custom" => Ok(InstanceClass::Custom),
            other => Err(Error::InvalidArgument(format!("unknown instance class `{other}`"))),
        }
    }
}

/// An undirected edge `(i, j)` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// A directed arc `[i, j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc(pub usize, pub usize);

/// A set of target indices, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TargetSet {
    members: Vec<usize>,
}

impl TargetSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        TargetSet { members }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }
}

impl FromIterator<usize> for TargetSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        TargetSet::new(iter.into_iter().collect())
    }
}

/// Edge and arc sets induced by a target subset `S`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CutSets {
    /// Edges with exactly one endpoint in `S`.
    pub delta: Vec<Edge>,
    /// Edges with both endpoints in `S`.
    pub gamma: Vec<Edge>,
    /// Arcs entering `S`.
    pub delta_in: Vec<Arc>,
    /// Arcs leaving `S`.
    pub delta_out: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    points: Vec<Point>,
    range: f64,
    alpha: f64,
    class: InstanceClass,
    seed: Option<u64>,
    gv_cost: Matrix,
    uav_cost: Matrix,
    penalty: Matrix,
    explicit_gv: bool,
    explicit_uav: bool,
}

impl Instance {
    /// Euclidean instance: `c = l`, `d = alpha * l`.
    pub fn euclidean(
        points: Vec<Point>,
        range: f64,
        alpha: f64,
        class: InstanceClass,
        seed: Option<u64>,
    ) -> Result<Self> {
        let n = points.len();
        let l = Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { points[i].dist(&points[j]) });
        let d = l.scaled(alpha);
        Self::build(points, range, alpha, class, seed, l, d, false, false)
    }

    /// Instance with explicit cost matrices; `None` falls back to the
    /// Euclidean default for that matrix.
    pub fn with_costs(
        points: Vec<Point>,
        range: f64,
        alpha: f64,
        class: InstanceClass,
        seed: Option<u64>,
        gv_cost: Option<Matrix>,
        uav_cost: Option<Matrix>,
    ) -> Result<Self> {
        let n = points.len();
        let euclid =
            || Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { points[i].dist(&points[j]) });
        let explicit_gv = gv_cost.is_some();
        let explicit_uav = uav_cost.is_some();
        let c = gv_cost.unwrap_or_else(euclid);
        let d = uav_cost.unwrap_or_else(|| euclid().scaled(alpha));
        Self::build(points, range, alpha, class, seed, c, d, explicit_gv, explicit_uav)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        points: Vec<Point>,
        range: f64,
        alpha: f64,
        class: InstanceClass,
        seed: Option<u64>,
        gv_cost: Matrix,
        uav_cost: Matrix,
        explicit_gv: bool,
        explicit_uav: bool,
    ) -> Result<Self> {
        let n = points.len();
        let mut inst = Instance {
            points,
            range,
            alpha,
            class,
            seed,
            gv_cost,
            uav_cost,
            penalty: Matrix::zeros(n),
            explicit_gv,
            explicit_uav,
        };
        inst.validate()?;
        let big = inst.big_penalty();
        inst.penalty =
            Matrix::from_fn(n, |i, j| if inst.in_range(i, j) { 0.0 } else { big });
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        let n = self.points.len();
        let err = |field: &str, message: String| Error::Validation { field: field.into(), message };
        if n == 0 {
            return Err(err("N", "instance needs at least the base station".into()));
        }
        if !(self.range > 0.0) || !self.range.is_finite() {
            return Err(err("R", format!("range must be positive, got {}", self.range)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(err("ALPHA", format!("alpha must be positive, got {}", self.alpha)));
        }
        for (i, p) in self.points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(err("coordinates", format!("target {i} has non-finite coordinates")));
            }
        }
        if self.gv_cost.dim() != n {
            return Err(err("CMAT", format!("expected {n}x{n}, got {}", self.gv_cost.dim())));
        }
        if self.uav_cost.dim() != n {
            return Err(err("DMAT", format!("expected {n}x{n}, got {}", self.uav_cost.dim())));
        }
        let (c, d) = (&self.gv_cost, &self.uav_cost);
        for i in 0..n {
            if c.get(i, i) != 0.0 {
                return Err(err("CMAT", format!("diagonal entry ({i},{i}) must be 0")));
            }
            if d.get(i, i) != 0.0 {
                return Err(err("DMAT", format!("diagonal entry ({i},{i}) must be 0")));
            }
            for j in 0..n {
                let (cij, dij) = (c.get(i, j), d.get(i, j));
                if !(cij >= 0.0) || !cij.is_finite() {
                    return Err(err("CMAT", format!("entry ({i},{j}) must be finite and non-negative")));
                }
                if !(dij >= 0.0) || !dij.is_finite() {
                    return Err(err("DMAT", format!("entry ({i},{j}) must be finite and non-negative")));
                }
                if (cij - c.get(j, i)).abs() > TRIANGLE_TOL {
                    return Err(err("CMAT", format!("asymmetric pair ({i},{j})")));
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if c.get(i, j) > c.get(i, k) + c.get(k, j) + TRIANGLE_TOL {
                        return Err(err(
                            "CMAT",
                            format!("triangle inequality violated for ({i},{j}) via {k}"),
                        ));
                    }
                    if d.get(i, j) > d.get(i, k) + d.get(k, j) + TRIANGLE_TOL {
                        return Err(err(
                            "DMAT",
                            format!("triangle inequality violated for ({i},{j}) via {k}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `10 * (sum c + sum d)`, floored at 1 so the penalty stays positive.
    fn big_penalty(&self) -> f64 {
        (10.0 * (self.gv_cost.sum() + self.uav_cost.sum())).max(1.0)
    }

    /// Number of targets including the base.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn class(&self) -> InstanceClass {
        self.class
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn gv_costs(&self) -> &Matrix {
        &self.gv_cost
    }

    pub fn uav_costs(&self) -> &Matrix {
        &self.uav_cost
    }

    pub fn penalties(&self) -> &Matrix {
        &self.penalty
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize) -> f64 {
        self.gv_cost.get(i, j)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.uav_cost.get(i, j)
    }

    #[inline]
    pub fn f(&self, i: usize, j: usize) -> f64 {
        self.penalty.get(i, j)
    }

    pub fn euclid(&self, i: usize, j: usize) -> f64 {
        self.points[i].dist(&self.points[j])
    }

    /// True when `i` and `j` are within communication range of each other.
    #[inline]
    pub fn in_range(&self, i: usize, j: usize) -> bool {
        i == j || self.euclid(i, j) <= self.range + DIST_TOL
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        }
    }

    /// `R_i`: all targets within range of `i`, including `i` itself.
    pub fn neighborhood(&self, i: usize) -> Result<TargetSet> {
        self.check_index(i)?;
        Ok((0..self.len()).filter(|&j| self.in_range(i, j)).collect())
    }

    /// `delta(S)`, `gamma(S)`, and the entering/leaving arc sets of `S`.
    pub fn cut_sets(&self, set: &TargetSet) -> CutSets {
        let n = self.len();
        let inside: Vec<bool> = (0..n).map(|i| set.contains(i)).collect();
        let mut out = CutSets::default();
        for i in 0..n {
            for j in (i + 1)..n {
                match (inside[i], inside[j]) {
                    (true, true) => out.gamma.push(Edge(i, j)),
                    (true, false) | (false, true) => out.delta.push(Edge(i, j)),
                    (false, false) => {}
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !inside[i] && inside[j] {
                    out.delta_in.push(Arc(i, j));
                } else if inside[i] && !inside[j] {
                    out.delta_out.push(Arc(i, j));
                }
            }
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        text.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_string())?;
        Ok(())
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        writeln!(f, "CAGVRP 1")?;
        writeln!(f, "N {n}")?;
        writeln!(f, "R {}", self.range)?;
        writeln!(f, "ALPHA {}", self.alpha)?;
        writeln!(f, "CLASS {}", self.class)?;
        if let Some(seed) = self.seed {
            writeln!(f, "SEED {seed}")?;
        }
        for (i, p) in self.points.iter().enumerate() {
            writeln!(f, "{i} {} {}", p.x, p.y)?;
        }
        let write_matrix = |f: &mut fmt::Formatter<'_>, tag: &str, m: &Matrix| -> fmt::Result {
            writeln!(f, "{tag}")?;
            for i in 0..n {
                let mut line = String::new();
                for (j, v) in m.row(i).iter().enumerate() {
                    if j > 0 {
                        line.push(' ');
                    }
                    let _ = write!(line, "{v}");
                }
                writeln!(f, "{line}")?;
            }
            Ok(())
        };
        if self.explicit_gv {
            write_matrix(f, "CMAT", &self.gv_cost)?;
        }
        if self.explicit_uav {
            write_matrix(f, "DMAT", &self.uav_cost)?;
        }
        Ok(())
    }
}

struct LineReader<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        LineReader { lines: text.lines().enumerate().peekable() }
    }

    fn skip_blank(&mut self) {
        while let Some((_, l)) = self.lines.peek() {
            if l.trim().is_empty() {
                self.lines.next();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.lines.next().map(|(i, l)| (i + 1, l.trim()))
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.skip_blank();
        self.lines.peek().map(|(_, l)| l.trim())
    }

    fn last_line(&mut self) -> usize {
        self.lines.peek().map(|(i, _)| i + 1).unwrap_or(0)
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let line_no = self.last_line();
        let (line, text) = self.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("unexpected end of file, expected `{key}`"),
        })?;
        let mut parts = text.splitn(2, char::is_whitespace);
        let head = parts.next().unwrap_or("");
        if head != key {
            return Err(Error::Parse { line, message: format!("expected `{key}`, found `{head}`") });
        }
        Ok((line, parts.next().unwrap_or("").trim()))
    }
}

fn parse_num<T: FromStr>(line: usize, field: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse { line, message: format!("invalid {field} value `{s}`") })
}

fn parse_matrix(reader: &mut LineReader<'_>, n: usize, tag: &str) -> Result<Matrix> {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        let line_no = reader.last_line();
        let (line, text) = reader.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("{tag}: expected {n} rows"),
        })?;
        let vals: Vec<&str> = text.split_whitespace().collect();
        if vals.len() != n {
            return Err(Error::Parse {
                line,
                message: format!("{tag} row {i}: expected {n} values, found {}", vals.len()),
            });
        }
        for (j, v) in vals.iter().enumerate() {
            m.set(i, j, parse_num(line, tag, v)?);
        }
    }
    Ok(m)
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut reader = LineReader::new(text);
        let (line, version) = reader.keyed("CAGVRP")?;
        if version != "1" {
            return Err(Error::Parse { line, message: format!("unsupported version `{version}`") });
        }
        let (line, v) = reader.keyed("N")?;
        let n: usize = parse_num(line, "N", v)?;
        let (line, v) = reader.keyed("R")?;
        let range: f64 = parse_num(line, "R", v)?;
        let (line, v) = reader.keyed("ALPHA")?;
        let alpha: f64 = parse_num(line, "ALPHA", v)?;
        let (line, v) = reader.keyed("CLASS")?;
        let class: InstanceClass =
            v.parse().map_err(|_| Error::Parse { line, message: format!("invalid CLASS `{v}`") })?;
        let seed = if reader.peek().is_some_and(|l| l.starts_with("SEED")) {
            let (line, v) = reader.keyed("SEED")?;
            Some(parse_num::<u64>(line, "SEED", v)?)
        } else {
            None
        };
        let mut points = Vec::with_capacity(n);
        for expect in 0..n {
            let line_no = reader.last_line();
            let (line, text) = reader.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected {n} target lines"),
            })?;
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse { line, message: "expected `<index> <x> <y>`".into() });
            }
            let idx: usize = parse_num(line, "index", parts[0])?;
            if idx != expect {
                return Err(Error::Parse {
                    line,
                    message: format!("expected target index {expect}, found {idx}"),
                });
            }
            points.push(Point::new(parse_num(line, "x", parts[1])?, parse_num(line, "y", parts[2])?));
        }
        let mut gv = None;
        let mut uav = None;
        while let Some((line, tag)) = reader.next() {
            match tag {
                "CMAT" if gv.is_none() => gv = Some(parse_matrix(&mut reader, n, "CMAT")?),
                "DMAT" if uav.is_none() => uav = Some(parse_matrix(&mut reader, n, "DMAT")?),
                other => {
                    return Err(Error::Parse { line, message: format!("unexpected section `{other}`") })
                }
            }
        }
        Instance::with_costs(points, range, alpha, class, seed, gv, uav)
    }
}

/// Random instance following the benchmark recipe: targets in a 100x100
/// grid, range 25, `c = l` and `d = alpha * l`.
///
/// Class A and C draw coordinates uniformly. Class B draws `ceil(n/10)`
/// cluster centers at least 30 units apart and scatters targets around
/// them with a normal spread of 5 units, clipped to the grid.
pub fn generate_instance(class: InstanceClass, n: usize, alpha: f64, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidArgument("target count must be at least 1".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match class {
        InstanceClass::A | InstanceClass::C => (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..=GRID_SIZE), rng.gen_range(0.0..=GRID_SIZE)))
            .collect(),
        InstanceClass::B => clustered_points(&mut rng, n),
        InstanceClass::Custom => {
            return Err(Error::InvalidArgument("the generator supports classes A, B and C".into()))
        }
    };
    Instance::euclidean(points, DEFAULT_RANGE, alpha, class, Some(seed))
}

fn clustered_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let k = n.div_ceil(CLUSTER_SIZE);
    let centers = 'outer: loop {
        let mut centers: Vec<Point> = Vec::with_capacity(k);
        for _ in 0..10_000 {
            if centers.len() == k {
                break 'outer centers;
            }
            let p = Point::new(rng.gen_range(0.0..=GRID_SIZE), rng.gen_range(0.0..=GRID_SIZE));
            if centers.iter().all(|c| c.dist(&p) >= CLUSTER_SEPARATION) {
                centers.push(p);
            }
        }
        if centers.len() == k {
            break centers;
        }
    };
    let spread = Normal::new(0.0, CLUSTER_SIGMA).expect("valid sigma");
    (0..n)
        .map(|i| {
            let c = centers[i % k];
            let x = (c.x + spread.sample(rng)).clamp(0.0, GRID_SIZE);
            let y = (c.y + spread.sample(rng)).clamp(0.0, GRID_SIZE);
            Point::new(x, y)
        })
        .collect()
}

/// Four-target fixture used throughout the tests: base `(0,0)`, targets
/// `(10,0)`, `(20,0)`, `(10,10)`, range 15, alpha 0.5.
pub fn tiny4() -> Instance {
    let points = vec![
        Point::new(0.0, 0.0),
        Point::new(10.0, 0.0),
        Point::new(20.0, 0.0),
        Point::new(10.0, 10.0),
    ];
    Instance::euclidean(points, 15.0, 0.5, InstanceClass::Custom, None).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_class_a_matches_recipe() {
        let inst = generate_instance(InstanceClass::A, 20, 0.1, 3).unwrap();
        assert_eq!(inst.len(), 20);
        assert_eq!(inst.range(), 25.0);
        for i in 0..20 {
            let p = inst.points()[i];
            assert!((0.0..=100.0).contains(&p.x) && (0.0..=100.0).contains(&p.y));
            for j in 0..20 {
                assert!((inst.c(i, j) - inst.euclid(i, j)).abs() < 1e-12);
                assert!((inst.d(i, j) - 0.1 * inst.c(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_target_instance() {
        let inst = generate_instance(InstanceClass::A, 1, 0.1, 9).unwrap();
        assert_eq!(inst.len(), 1);
        assert_eq!(inst.c(0, 0), 0.0);
        assert_eq!(inst.d(0, 0), 0.0);
    }

    #[test]
    fn alpha_only_scales_uav_costs() {
        let a = generate_instance(InstanceClass::A, 30, 0.1, 5).unwrap();
        let b = generate_instance(InstanceClass::A, 30, 0.2, 5).unwrap();
        assert_eq!(a.points(), b.points());
        for i in 0..30 {
            for j in 0..30 {
                assert!((b.d(i, j) - 2.0 * a.d(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generator_rejects_bad_arguments() {
        assert!(generate_instance(InstanceClass::A, 0, 0.1, 1).is_err());
        assert!(generate_instance(InstanceClass::Custom, 5, 0.1, 1).is_err());
        assert!(generate_instance(InstanceClass::A, 5, 0.0, 1).is_err());
        assert!("Z".parse::<InstanceClass>().is_err());
    }

    #[test]
    fn class_b_is_clustered_and_deterministic() {
        let a = generate_instance(InstanceClass::B, 40, 0.2, 11).unwrap();
        let b = generate_instance(InstanceClass::B, 40, 0.2, 11).unwrap();
        assert_eq!(a, b);
        // Targets in the same cluster (i, i+4) are close on average.
        let mean: f64 = (0..36).map(|i| a.euclid(i, i + 4)).sum::<f64>() / 36.0;
        assert!(mean < 20.0, "mean intra-cluster distance {mean}");
    }

    #[test]
    fn neighborhood_examples() {
        let t = tiny4();
        assert_eq!(t.neighborhood(0).unwrap().as_slice(), &[0, 1, 3]);
        assert_eq!(t.neighborhood(2).unwrap().as_slice(), &[1, 2, 3]);
        assert!(t.neighborhood(4).is_err());

        let far = Instance::euclidean(
            vec![Point::new(0.0, 0.0), Point::new(90.0, 90.0), Point::new(90.0, 90.0)],
            25.0,
            0.1,
            InstanceClass::Custom,
            None,
        )
        .unwrap();
        assert_eq!(far.neighborhood(0).unwrap().as_slice(), &[0]);
        assert!(far.neighborhood(1).unwrap().contains(2));
        assert!(far.neighborhood(2).unwrap().contains(1));
    }

    #[test]
    fn cut_set_examples() {
        let t = tiny4();
        let all: TargetSet = (0..4).collect();
        let cs = t.cut_sets(&all);
        assert!(cs.delta.is_empty());
        assert_eq!(cs.gamma.len(), 6);

        let single = TargetSet::new(vec![2]);
        let cs = t.cut_sets(&single);
        assert_eq!(cs.delta.len(), 3);
        assert!(cs.gamma.is_empty());
        assert_eq!(cs.delta_in.len(), 3);
        assert!(cs.delta_in.iter().all(|a| a.1 == 2));
        assert!(cs.delta_out.iter().all(|a| a.0 == 2));

        let pair = TargetSet::new(vec![1, 2]);
        assert_eq!(t.cut_sets(&pair).delta.len(), 4);
        assert!(t.cut_sets(&TargetSet::default()).delta.is_empty());
    }

    #[test]
    fn file_round_trip_is_byte_identical() {
        let inst = generate_instance(InstanceClass::B, 12, 0.3, 42).unwrap();
        let first = inst.to_string();
        let loaded: Instance = first.parse().unwrap();
        assert_eq!(loaded.to_string(), first);
        assert_eq!(loaded, inst);
    }

    #[test]
    fn explicit_matrices_round_trip() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0), Point::new(6.0, 0.0)];
        let c = Matrix::from_fn(3, |i, j| if i == j { 0.0 } else { 7.0 });
        let d = Matrix::from_fn(3, |i, j| if i == j { 0.0 } else { 1.0 + (i + j) as f64 * 0.25 });
        let inst =
            Instance::with_costs(pts, 10.0, 0.5, InstanceClass::Custom, None, Some(c), Some(d))
                .unwrap();
        let text = inst.to_string();
        assert!(text.contains("CMAT") && text.contains("DMAT"));
        let back: Instance = text.parse().unwrap();
        assert_eq!(back.to_string(), text);
        assert_eq!(back.c(0, 1), 7.0);
    }

    #[test]
    fn validation_names_offending_field() {
        let bad_range = "CAGVRP 1\nN 2\nR 0\nALPHA 0.1\nCLASS custom\n0 0 0\n1 1 1\n";
        match bad_range.parse::<Instance>() {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "R"),
            other => panic!("unexpected {other:?}"),
        }
        let asym = "CAGVRP 1\nN 2\nR 5\nALPHA 0.1\nCLASS custom\n0 0 0\n1 1 0\nCMAT\n0 1\n2 0\n";
        match asym.parse::<Instance>() {
            Err(Error::Validation { field, message }) => {
                assert_eq!(field, "CMAT");
                assert!(message.contains("(0,1)"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let malformed = "CAGVRP 1\nN 2\nR 5\nALPHA 0.1\nCLASS custom\n0 0 0\n";
        assert!(matches!(malformed.parse::<Instance>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn penalty_is_zero_within_range_and_big_outside() {
        let t = tiny4();
        assert_eq!(t.f(0, 3), 0.0);
        assert!(t.f(0, 2) > 10.0 * (t.gv_costs().sum()));
    }
}
