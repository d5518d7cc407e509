//! Experiment sweeps, deterministic CSV output and log-log slope fits.
//!
//! A config is JSON. Unknown keys are rejected:
//!
//! ```json
//! {
//!   "experiments": [
//!     {
//!       "family": "grid-walk",
//!       "sizes": [64, 128],
//!       "d": 2,
//!       "algorithms": ["grid2d-quantum"],
//!       "mode": "exact",
//!       "seeds": {"start": 0, "count": 50}
//!     }
//!   ],
//!   "output": "results.csv"
//! }
//! ```
//!
//! CSV columns, in order: `family, n, d, m_or_r, algo, mode, seed,
//! classical_queries, charged_quantum_queries, outcome, is_local_min,
//! rounds, runtime_ms`. Rows are sorted by cell (experiment, size,
//! algorithm, in config order) and then seed, so output bytes never depend on
//! scheduling. Only `runtime_ms` varies between reruns; [`strip_runtime`]
//! removes it.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::instances::{
    gen_block_instance, gen_grid_instance, gen_hypercube_instance, recommended_params, BlockLayout,
    Family, QueryModel,
};
use crate::oracle::{L1Bowl, Landscape, ValueOracle};
use crate::solvers::{
    grid2d_quantum, sample_then_descend, steepest_descent, Algorithm, Charging, Grid2dConfig,
    Outcome, SolveResult, SubroutineMode,
};
use crate::{Error, GridShape, Result, Vertex};

/// Landscape families a sweep can draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchFamily {
    HypercubeWalk,
    GridWalk,
    GridBlocks,
    /// `f(v) = |v - c|_1` with a seeded uniform centre `c`.
    L1Bowl,
}

impl BenchFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchFamily::HypercubeWalk => "hypercube-walk",
            BenchFamily::GridWalk => "grid-walk",
            BenchFamily::GridBlocks => "grid-blocks",
            BenchFamily::L1Bowl => "l1-bowl",
        }
    }

    fn instance_family(self) -> Option<Family> {
        match self {
            BenchFamily::HypercubeWalk => Some(Family::HypercubeWalk),
            BenchFamily::GridWalk => Some(Family::GridWalk),
            BenchFamily::GridBlocks => Some(Family::GridBlocks),
            BenchFamily::L1Bowl => None,
        }
    }
}

impl fmt::Display for BenchFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1-bowl" | "bowl" => Ok(BenchFamily::L1Bowl),
            other => match other.parse::<Family>()? {
                Family::HypercubeWalk => Ok(BenchFamily::HypercubeWalk),
                Family::GridWalk => Ok(BenchFamily::GridWalk),
                Family::GridBlocks => Ok(BenchFamily::GridBlocks),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

impl SeedRange {
    pub fn seeds(&self) -> impl Iterator<Item = u64> {
        self.start..self.start + self.count
    }
}

/// One sweep: every size crossed with every algorithm, each run on every
/// seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: BenchFamily,
    /// `n` per cell: the hypercube dimension or the grid side.
    pub sizes: Vec<u32>,
    /// Grid dimension; ignored for hypercubes. Defaults to 2.
    #[serde(default)]
    pub d: Option<usize>,
    /// Walk dimension count. Defaults to the recommended randomized choice.
    #[serde(default)]
    pub m: Option<usize>,
    /// Block exponent. Defaults to the recommended randomized choice.
    #[serde(default)]
    pub r: Option<f64>,
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub mode: SubroutineMode,
    pub seeds: SeedRange,
    /// Sample count for sample-descend. Defaults to `ceil(sqrt(N log2 N))`.
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default = "default_charging")]
    pub charging: Charging,
}

fn default_charging() -> Charging {
    Charging::Classical
}

/// Size guards applied before any trial runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    /// Largest vertex count `N` a cell may have.
    #[serde(default = "default_max_vertices")]
    pub max_vertices: u64,
}

fn default_max_vertices() -> u64 {
    1 << 22
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_vertices: default_max_vertices(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiments: Vec<ExperimentSpec>,
    /// Where the CLI writes the CSV; standard output when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub budgets: Budgets,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Expands the config into cells, rejecting anything a trial would
    /// choke on.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        if self.experiments.is_empty() {
            return Err(Error::Config("no experiments".into()));
        }
        let mut cells = Vec::new();
        for (i, spec) in self.experiments.iter().enumerate() {
            let ctx = |msg: String| Error::Config(format!("experiment {i}: {msg}"));
            if spec.sizes.is_empty() {
                return Err(ctx("empty size list".into()));
            }
            if spec.algorithms.is_empty() {
                return Err(ctx("empty algorithm list".into()));
            }
            if spec.seeds.count == 0 {
                return Err(ctx("empty seed range".into()));
            }
            if spec.seeds.start.checked_add(spec.seeds.count).is_none() {
                return Err(ctx("seed range overflows".into()));
            }
            let algos = spec
                .algorithms
                .iter()
                .map(|a| a.parse::<Algorithm>())
                .collect::<Result<Vec<_>>>()?;
            for &n in &spec.sizes {
                let d = match spec.family {
                    BenchFamily::HypercubeWalk => n as usize,
                    _ => spec.d.unwrap_or(2),
                };
                let shape = match spec.family {
                    BenchFamily::HypercubeWalk => GridShape::new(2, n as usize),
                    _ => GridShape::new(n, d),
                }
                .map_err(|e| ctx(e.to_string()))?;
                let vertices = shape.vertex_count();
                if vertices > self.budgets.max_vertices {
                    return Err(ctx(format!(
                        "N = {vertices} exceeds max_vertices {}",
                        self.budgets.max_vertices
                    )));
                }
                let param = self.param_for(spec, n, d).map_err(|e| ctx(e.to_string()))?;
                check_param(spec.family, n, d, param).map_err(|e| ctx(e.to_string()))?;
                for &algo in &algos {
                    if algo == Algorithm::Grid2dQuantum
                        && (spec.family == BenchFamily::HypercubeWalk || d != 2)
                    {
                        return Err(ctx(format!("{algo} needs a two-dimensional grid")));
                    }
                    let samples = match (algo, spec.samples) {
                        (Algorithm::SampleDescend, Some(s)) if s == 0 || s > vertices => {
                            return Err(ctx(format!("samples {s} outside 1..={vertices}")))
                        }
                        (Algorithm::SampleDescend, Some(s)) => Some(s),
                        (Algorithm::SampleDescend, None) => Some(default_samples(vertices)),
                        _ => None,
                    };
                    cells.push(Cell {
                        index: cells.len(),
                        family: spec.family,
                        n,
                        d,
                        param,
                        algo,
                        mode: spec.mode,
                        samples,
                        charging: spec.charging,
                        seeds: spec.seeds,
                    });
                }
            }
        }
        Ok(cells)
    }

    fn param_for(&self, spec: &ExperimentSpec, n: u32, d: usize) -> Result<CellParam> {
        let recommended = |fam| recommended_params(fam, QueryModel::Randomized, n, d);
        Ok(match spec.family {
            BenchFamily::HypercubeWalk | BenchFamily::GridWalk => {
                let fam = spec.family.instance_family().expect("walk family");
                let m = match spec.m {
                    Some(m) => m,
                    None => recommended(fam)?.m.expect("walk families recommend m"),
                };
                CellParam::M(m)
            }
            BenchFamily::GridBlocks => {
                let r = match spec.r {
                    Some(r) => r,
                    None => recommended(Family::GridBlocks)?
                        .r
                        .expect("blocks recommend r"),
                };
                CellParam::R(r)
            }
            BenchFamily::L1Bowl => CellParam::None,
        })
    }
}

/// Rejects parameters the generators would refuse, before any trial runs.
fn check_param(family: BenchFamily, n: u32, d: usize, param: CellParam) -> Result<()> {
    match (family, param) {
        (BenchFamily::HypercubeWalk, CellParam::M(m))
        | (BenchFamily::GridWalk, CellParam::M(m)) => {
            let limit = if family == BenchFamily::HypercubeWalk {
                n as usize
            } else {
                d
            };
            if m == 0 || m >= limit {
                return Err(Error::param(format!(
                    "m = {m} must satisfy 1 <= m < {limit}"
                )));
            }
        }
        (BenchFamily::GridBlocks, CellParam::R(r)) => {
            BlockLayout::new(n, d, r)?;
        }
        _ => {}
    }
    Ok(())
}

/// `ceil(sqrt(N log2 N))`, clamped to `1..=N`.
pub fn default_samples(vertices: u64) -> u64 {
    let nf = vertices as f64;
    ((nf * nf.log2().max(1.0)).sqrt().ceil() as u64).clamp(1, vertices)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CellParam {
    M(usize),
    R(f64),
    None,
}

impl fmt::Display for CellParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellParam::M(m) => write!(f, "{m}"),
            CellParam::R(r) => write!(f, "{r}"),
            CellParam::None => Ok(()),
        }
    }
}

/// A fully resolved (family, size, algorithm) combination.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub family: BenchFamily,
    pub n: u32,
    pub d: usize,
    pub param: CellParam,
    pub algo: Algorithm,
    pub mode: SubroutineMode,
    pub samples: Option<u64>,
    pub charging: Charging,
    pub seeds: SeedRange,
}

impl Cell {
    /// Builds the landscape and the start vertex for steepest descent.
    pub fn landscape(&self, seed: u64) -> Result<(Box<dyn Landscape>, Vertex)> {
        Ok(match (self.family, self.param) {
            (BenchFamily::HypercubeWalk, CellParam::M(m)) => {
                let inst = gen_hypercube_instance(self.n as usize, m, seed)?;
                let start = inst.start().clone();
                (Box::new(inst), start)
            }
            (BenchFamily::GridWalk, CellParam::M(m)) => {
                let inst = gen_grid_instance(self.n, self.d, m, seed)?;
                let start = inst.start().clone();
                (Box::new(inst), start)
            }
            (BenchFamily::GridBlocks, CellParam::R(r)) => {
                let inst = gen_block_instance(self.n, self.d, r, seed)?;
                let start = inst.start().clone();
                (Box::new(inst), start)
            }
            (BenchFamily::L1Bowl, _) => {
                let shape = GridShape::new(self.n, self.d)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let center = Vertex::new((0..self.d).map(|_| rng.gen_range(1..=self.n)).collect());
                let start = shape.origin();
                (Box::new(L1Bowl::new(shape, center)?), start)
            }
            (family, param) => {
                return Err(Error::Config(format!(
                    "{family} cannot take parameter {param:?}"
                )))
            }
        })
    }

    /// Runs one trial. Solvers draw from a stream separate from the
    /// instance generator's.
    pub fn solve(&self, seed: u64) -> Result<SolveResult> {
        let (land, start) = self.landscape(seed)?;
        let opts = SolveOptions {
            algo: self.algo,
            mode: self.mode,
            seed: seed ^ 0x9e37_79b9_7f4a_7c15,
            samples: self.samples,
            charging: self.charging,
            instrument: false,
        };
        solve_landscape(land.as_ref(), &start, &opts)
    }
}

/// Solver choice and knobs for [`solve_landscape`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub algo: Algorithm,
    pub mode: SubroutineMode,
    pub seed: u64,
    /// Sample count for sample-descend; [`default_samples`] when absent.
    pub samples: Option<u64>,
    pub charging: Charging,
    /// Record per-round traces (grid2d-quantum only).
    pub instrument: bool,
}

/// Runs one solver on a fresh oracle. `start` is where steepest descent
/// begins; the other algorithms ignore it.
pub fn solve_landscape(
    land: &dyn Landscape,
    start: &Vertex,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let oracle = ValueOracle::new(land);
    match opts.algo {
        Algorithm::Steepest => steepest_descent(oracle, start),
        Algorithm::SampleDescend => {
            let s = opts
                .samples
                .unwrap_or_else(|| default_samples(land.shape().vertex_count()));
            sample_then_descend(oracle, s, opts.seed, opts.charging)
        }
        Algorithm::Grid2dQuantum => {
            let config = Grid2dConfig {
                seed: opts.seed,
                mode: opts.mode,
                instrument: opts.instrument,
                ..Default::default()
            };
            grid2d_quantum(oracle, &config)
        }
    }
}

/// One CSV line. Field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: String,
    pub n: u32,
    pub d: usize,
    pub m_or_r: String,
    pub algo: String,
    pub mode: String,
    pub seed: u64,
    pub classical_queries: u64,
    pub charged_quantum_queries: u64,
    pub outcome: String,
    pub is_local_min: bool,
    pub rounds: u32,
    pub runtime_ms: u64,
}

impl ResultRow {
    pub fn total_queries(&self) -> u64 {
        self.classical_queries + self.charged_quantum_queries
    }
}

pub const CSV_COLUMNS: [&str; 13] = [
    "family",
    "n",
    "d",
    "m_or_r",
    "algo",
    "mode",
    "seed",
    "classical_queries",
    "charged_quantum_queries",
    "outcome",
    "is_local_min",
    "rounds",
    "runtime_ms",
];

fn row_for(cell: &Cell, seed: u64, result: &SolveResult, runtime_ms: u64) -> ResultRow {
    ResultRow {
        family: cell.family.to_string(),
        n: cell.n,
        d: cell.d,
        m_or_r: cell.param.to_string(),
        algo: cell.algo.to_string(),
        mode: cell.mode.to_string(),
        seed,
        classical_queries: result.ledger.classical_queries(),
        charged_quantum_queries: result.ledger.charged_quantum_queries(),
        outcome: result.outcome.to_string(),
        // A fail row never claims a minimum.
        is_local_min: result.is_local_min && result.outcome == Outcome::Success,
        rounds: result.rounds,
        runtime_ms,
    }
}

/// Runs every (cell, seed) trial in parallel and returns the rows sorted by
/// (cell, seed).
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let cells = config.cells()?;
    let tasks: Vec<(&Cell, u64)> = cells
        .iter()
        .flat_map(|c| c.seeds.seeds().map(move |s| (c, s)))
        .collect();
    let mut keyed = tasks
        .par_iter()
        .map(|&(cell, seed)| {
            let clock = Instant::now();
            let result = cell.solve(seed)?;
            let ms = clock.elapsed().as_millis() as u64;
            Ok(((cell.index, seed), row_for(cell, seed, &result, ms)))
        })
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by_key(|(k, _)| *k);
    Ok(keyed.into_iter().map(|(_, r)| r).collect())
}

pub fn write_csv<W: std::io::Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()?)
}

/// Drops the `runtime_ms` column so reruns compare byte for byte.
pub fn strip_runtime(csv_text: &str) -> Result<String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(csv_text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Ok(String::new()),
    };
    let drop = header
        .iter()
        .position(|c| c == "runtime_ms")
        .ok_or_else(|| Error::Config("no runtime_ms column".into()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let keep = |rec: &csv::StringRecord| {
        rec.iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, c)| c.to_owned())
            .collect::<Vec<_>>()
    };
    w.write_record(keep(&header))?;
    for rec in records {
        w.write_record(keep(&rec?))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Numeric columns a slope can be fitted over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    N,
    D,
    ClassicalQueries,
    ChargedQuantumQueries,
    TotalQueries,
    Rounds,
    RuntimeMs,
}

impl Field {
    pub fn get(self, row: &ResultRow) -> f64 {
        match self {
            Field::N => f64::from(row.n),
            Field::D => row.d as f64,
            Field::ClassicalQueries => row.classical_queries as f64,
            Field::ChargedQuantumQueries => row.charged_quantum_queries as f64,
            Field::TotalQueries => row.total_queries() as f64,
            Field::Rounds => f64::from(row.rounds),
            Field::RuntimeMs => row.runtime_ms as f64,
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n" => Field::N,
            "d" => Field::D,
            "classical_queries" => Field::ClassicalQueries,
            "charged_quantum_queries" => Field::ChargedQuantumQueries,
            "total_queries" => Field::TotalQueries,
            "rounds" => Field::Rounds,
            "runtime_ms" => Field::RuntimeMs,
            other => return Err(Error::Config(format!("unknown field {other:?}"))),
        })
    }
}

/// Least-squares slope of `log2 y` against `log2 x` over the per-x means of
/// `y`, with the slope's standard error (0 when only two x values exist).
pub fn fit_loglog_slope(rows: &[ResultRow], x: Field, y: Field) -> Result<(f64, f64)> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (x.get(r), y.get(r))).collect();
    fit_loglog_points(&points)
}

/// [`fit_loglog_slope`] over raw `(x, y)` points.
pub fn fit_loglog_points(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::param(format!(
                "log-log fit needs positive finite points, got ({x}, {y})"
            )));
        }
        match groups.iter_mut().find(|g| g.0 == x) {
            Some(g) => {
                g.1 += y;
                g.2 += 1;
            }
            None => groups.push((x, y, 1)),
        }
    }
    if groups.len() < 2 {
        return Err(Error::param(format!(
            "log-log fit needs 2 distinct x values, got {}",
            groups.len()
        )));
    }
    let pts: Vec<(f64, f64)> = groups
        .iter()
        .map(|&(x, sy, c)| (x.log2(), (sy / c as f64).log2()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let stderr = if pts.len() > 2 {
        let sse: f64 = pts
            .iter()
            .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
            .sum();
        (sse / (k - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok((slope, stderr))
}
