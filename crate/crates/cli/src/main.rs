//! `lsq`: generate hard instances, run solvers, print exact walk statistics
//! and adversary bounds, and sweep benchmarks.
//!
//! Exit codes: 0 on success, 1 when a solver reports `fail`, 2 on invalid
//! arguments or configuration.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lsq_core::adversary::{
    build_scheme, enumerate_paths, thm4_value, thm5_value, PathKind, Relation, SchemeKind, Witness,
};
use lsq_core::bench::{
    fit_loglog_slope, run_experiment, solve_landscape, write_csv, BenchFamily, ExperimentConfig,
    ExperimentSpec, Field, ResultRow, SeedRange, SolveOptions,
};
use lsq_core::instances::{
    gen_block_instance, gen_grid_instance, gen_hypercube_instance, recommended_params, Family,
    QueryModel, WalkInstance,
};
use lsq_core::oracle::Landscape;
use lsq_core::solvers::{Algorithm, Charging, Outcome, SubroutineMode};
use lsq_core::walkstats::{balls_parity_counts, line_walk_table, ParityVector, RationalProb};
use lsq_core::{Error, Vertex};

#[derive(Parser)]
#[command(
    name = "lsq",
    version,
    about = "Query-complexity laboratory for Local Search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hard instance and write it as JSON.
    Gen(GenArgs),
    /// Run one solver on an instance file or a builtin landscape.
    Solve(SolveArgs),
    /// Print exact walk statistics as CSV.
    #[command(subcommand)]
    Stats(StatsCommand),
    /// Evaluate adversary bounds on an enumerated path family.
    Adversary(AdversaryArgs),
    /// Run an experiment config and emit CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// hypercube-walk, grid-walk or grid-blocks.
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: u32,
    /// Grid dimension (grid families).
    #[arg(long)]
    d: Option<usize>,
    /// Walk dimension count; defaults to the recommended value.
    #[arg(long)]
    m: Option<usize>,
    /// Block exponent; defaults to the recommended value.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Model whose recommended parameters fill in a missing m or r.
    #[arg(long, default_value = "randomized")]
    model: QueryModel,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    #[arg(
        long,
        conflicts_with = "function",
        required_unless_present = "function"
    )]
    inst: Option<PathBuf>,
    /// Builtin landscape `NAME:key=value,...`, e.g. `l1-bowl:n=64,d=2` or
    /// `grid-walk:n=32,d=2,m=1`. Seeded by `--seed`.
    #[arg(long)]
    function: Option<String>,
    #[arg(long, default_value = "steepest")]
    algo: Algorithm,
    #[arg(long, default_value = "exact")]
    mode: SubroutineMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample count for sample-descend.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value = "classical")]
    charging: Charging,
    /// Record per-round traces (grid2d-quantum).
    #[arg(long)]
    trace: bool,
    /// Emit the full result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Balls-in-bins parity probabilities: m,t,parity,probability_num,probability_den.
    Balls {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t_max: u32,
        /// Condition on the first ball avoiding this 1-based bin.
        #[arg(long)]
        exclude_first: Option<usize>,
    },
    /// Sticky line-walk transition probabilities: n,t,i,j,p_num,p_den.
    Line {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t_max: u32,
    },
}

#[derive(Args)]
struct AdversaryArgs {
    /// `hypercube` or `grid:<side>`.
    #[arg(long)]
    family: PathKind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    horizon: i64,
    /// randomized, quantum-hypercube or quantum-grid; `quantum` picks by family.
    #[arg(long, default_value = "randomized")]
    scheme: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print log-log slopes of total queries against n per cell group.
    #[arg(long)]
    fit: bool,
}

/// Parse and config failures map to 2, solver failures to 1.
enum Failure {
    Usage(String),
    SolverFail,
    /// Stdout was closed by the reader, e.g. `lsq ... | head`.
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Stats(c) => stats(c),
        Command::Adversary(a) => adversary(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::SolverFail) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        $out.push_str(&format!($($arg)*));
        $out.push('\n');
    }};
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => match io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        },
    }
    Ok(())
}

fn generate(
    family: Family,
    n: u32,
    d: Option<usize>,
    m: Option<usize>,
    r: Option<f64>,
    seed: u64,
    model: QueryModel,
) -> Result<WalkInstance, Error> {
    let need = |what: &str| Error::Config(format!("{family} needs --{what}"));
    match family {
        Family::HypercubeWalk => {
            let m = match m {
                Some(m) => m,
                None => recommended_params(family, model, n, 0)?
                    .m
                    .ok_or_else(|| need("m"))?,
            };
            gen_hypercube_instance(n as usize, m, seed)
        }
        Family::GridWalk => {
            let d = d.ok_or_else(|| need("d"))?;
            let m = match m {
                Some(m) => m,
                None => recommended_params(family, model, n, d)?
                    .m
                    .ok_or_else(|| need("m"))?,
            };
            gen_grid_instance(n, d, m, seed)
        }
        Family::GridBlocks => {
            let d = d.ok_or_else(|| need("d"))?;
            let r = match r {
                Some(r) => r,
                None => recommended_params(family, model, n, d)?
                    .r
                    .ok_or_else(|| need("r"))?,
            };
            gen_block_instance(n, d, r, seed)
        }
    }
}

fn gen(a: GenArgs) -> CliResult {
    let inst = generate(a.family, a.n, a.d, a.m, a.r, a.seed, a.model)?;
    let mut text = inst.to_file().to_json()?;
    text.push('\n');
    emit(a.out.as_ref(), &text)
}

/// Parses `NAME:key=value,...` into a landscape and a descent start.
fn builtin(spec: &str, seed: u64) -> Result<(Box<dyn Landscape>, Vertex), Error> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let family: BenchFamily = name.parse()?;
    let mut exp = ExperimentSpec {
        family,
        sizes: Vec::new(),
        d: None,
        m: None,
        r: None,
        algorithms: vec!["steepest".into()],
        mode: SubroutineMode::Exact,
        seeds: SeedRange {
            start: seed,
            count: 1,
        },
        samples: None,
        charging: Charging::Classical,
    };
    let bad = |what: &str| Error::Config(format!("bad builtin parameter {what:?} in {spec:?}"));
    for kv in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad(kv))?;
        match k {
            "n" => exp.sizes = vec![v.parse().map_err(|_| bad(kv))?],
            "d" => exp.d = Some(v.parse().map_err(|_| bad(kv))?),
            "m" => exp.m = Some(v.parse().map_err(|_| bad(kv))?),
            "r" => exp.r = Some(v.parse().map_err(|_| bad(kv))?),
            _ => return Err(bad(kv)),
        }
    }
    if exp.sizes.is_empty() {
        return Err(Error::Config(format!("builtin {spec:?} needs n=")));
    }
    let config = ExperimentConfig {
        experiments: vec![exp],
        output: None,
        budgets: Default::default(),
    };
    config.cells()?[0].landscape(seed)
}

fn solve(a: SolveArgs) -> CliResult {
    let (land, start): (Box<dyn Landscape>, Vertex) = match (&a.inst, &a.function) {
        (Some(path), _) => {
            let inst = WalkInstance::load(path)?;
            let start = inst.start().clone();
            (Box::new(inst), start)
        }
        (None, Some(spec)) => builtin(spec, a.seed)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let opts = SolveOptions {
        algo: a.algo,
        mode: a.mode,
        seed: a.seed,
        samples: a.samples,
        charging: a.charging,
        instrument: a.trace,
    };
    let result = solve_landscape(land.as_ref(), &start, &opts)?;
    if a.json {
        let mut text = serde_json::to_string_pretty(&result).map_err(Error::from)?;
        text.push('\n');
        emit(None, &text)?;
    } else {
        let l = &result.ledger;
        let mut out = String::new();
        outln!(out, "algo: {}", result.algorithm);
        outln!(out, "outcome: {}", result.outcome);
        outln!(out, "vertex: {}", result.vertex);
        outln!(out, "value: {}", result.value);
        outln!(out, "is_local_min: {}", result.is_local_min);
        outln!(out, "rounds: {}", result.rounds);
        outln!(out, "descent_steps: {}", result.descent_steps);
        outln!(out, "classical_queries: {}", l.classical_queries());
        outln!(
            out,
            "charged_quantum_queries: {}",
            l.charged_quantum_queries()
        );
        for (phase, cost) in l.phase_breakdown() {
            outln!(
                out,
                "phase {phase}: classical {} quantum {}",
                cost.classical,
                cost.charged
            );
        }
        emit(None, &out)?;
    }
    if result.outcome == Outcome::Fail {
        return Err(Failure::SolverFail);
    }
    Ok(())
}

fn stats(c: StatsCommand) -> CliResult {
    let mut out = io::stdout().lock();
    match c {
        StatsCommand::Balls {
            m,
            t_max,
            exclude_first,
        } => {
            let excluded = match exclude_first {
                Some(0) => return Err(Failure::Usage("--exclude-first is 1-based".into())),
                Some(i) => Some(i - 1),
                None => None,
            };
            writeln!(out, "m,t,parity,probability_num,probability_den")?;
            for t in 0..=t_max {
                let counts = balls_parity_counts(m, t, if t == 0 { None } else { excluded })?;
                let total: u64 = counts.iter().sum();
                for (mask, &count) in counts.iter().enumerate() {
                    let p = RationalProb::from_counts(count, total);
                    let parity = ParityVector::from_mask(m, mask as u32);
                    writeln!(out, "{m},{t},{parity},{},{}", p.numer(), p.denom())?;
                }
            }
        }
        StatsCommand::Line { n, t_max } => {
            let table = line_walk_table(n, t_max)?;
            writeln!(out, "n,t,i,j,p_num,p_den")?;
            for t in 0..=t_max {
                for i in 1..=n {
                    for j in 1..=n {
                        let p = table.prob(t, i, j);
                        writeln!(out, "{n},{t},{i},{j},{},{}", p.numer(), p.denom())?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn adversary(a: AdversaryArgs) -> CliResult {
    let kind = match (a.scheme.as_str(), a.family) {
        ("quantum", PathKind::Hypercube) => SchemeKind::QuantumHypercube,
        ("quantum", PathKind::Grid { .. }) => SchemeKind::QuantumGrid,
        (s, _) => s.parse()?,
    };
    let family = enumerate_paths(a.family, a.m, a.horizon)?;
    let relation = Relation::from_family(&family)?;
    let scheme = build_scheme(kind, &family, &relation)?;
    let mut out = String::new();
    outln!(out, "family: {}", a.family);
    outln!(out, "m: {}", a.m);
    outln!(out, "horizon: {}", a.horizon);
    outln!(out, "paths: {}", family.len());
    outln!(out, "relation_size: {}", relation.len());
    outln!(out, "scheme: {kind}");

    let describe = |w: &Witness| -> Result<String, Error> {
        let (tick, coords) = family.decode(w.position);
        Ok(format!(
            "pair {} (x = {}, y = {}), position {} (tick {tick}, walk {coords:?})",
            w.pair, w.x, w.y, w.position
        ))
    };
    let t4 = thm4_value(&relation, &scheme)?;
    outln!(out, "quantum_bound: {t4}");
    outln!(out, "quantum_bound_radicand_decimal: {}", t4.radicand_f64());
    outln!(out, "quantum_bound_decimal: {}", t4.approx);
    outln!(out, "quantum_witness: {}", describe(&t4.witness)?);
    if kind == SchemeKind::Randomized {
        let t5 = thm5_value(&relation, scheme.w())?;
        outln!(out, "relational_bound: {}", t5.value);
        outln!(out, "relational_bound_decimal: {}", t5.to_f64());
        outln!(out, "relational_witness: {}", describe(&t5.witness)?);
    }
    emit(None, &out)
}

fn bench(a: BenchArgs) -> CliResult {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.config.display())))?;
    let config = ExperimentConfig::from_json(&text)?;
    let rows = run_experiment(&config)?;
    match a.out.as_ref().or(config.output.as_ref()) {
        Some(path) => write_csv(&rows, fs::File::create(path)?)?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if a.fit {
        report_fits(&rows);
    }
    Ok(())
}

/// Slope of mean total queries against n within each (family, d, m_or_r,
/// algo, mode) group, on standard error.
fn report_fits(rows: &[ResultRow]) {
    let mut groups: Vec<(String, Vec<ResultRow>)> = Vec::new();
    for row in rows {
        let key = format!(
            "{} d={} m_or_r={} {} {}",
            row.family, row.d, row.m_or_r, row.algo, row.mode
        );
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(row.clone()),
            None => groups.push((key, vec![row.clone()])),
        }
    }
    for (key, group) in groups {
        match fit_loglog_slope(&group, Field::N, Field::TotalQueries) {
            Ok((slope, stderr)) => eprintln!("{key}: slope {slope:.4} +/- {stderr:.4}"),
            Err(e) => eprintln!("{key}: {e}"),
        }
    }
}
