//! Local-search algorithms run against a [`ValueOracle`].
//!
//! Quantum subroutines are simulated: the answer is computed classically
//! with uncharged peeks and the ledger is charged the cost the quantum
//! subroutine would have paid, with every big-O constant fixed at 1.

mod grid2d;
mod subroutines;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::neighbors;
use crate::oracle::{QueryLedger, ValueOracle};
use crate::{Error, Result, Vertex};

pub use grid2d::{
    grid2d_quantum, l1_sphere, Grid2dConfig, Grid2dEpsilons, RegionState, RoundTrace,
};
pub use subroutines::{
    ceil_log2_inv, ceil_sqrt, durr_hoyer_min_sim, grover_exists_sim, SubroutineMode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    Fail,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Fail => "fail",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Steepest,
    SampleDescend,
    Grid2dQuantum,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Steepest => "steepest",
            Algorithm::SampleDescend => "sample-descend",
            Algorithm::Grid2dQuantum => "grid2d-quantum",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "steepest" => Ok(Algorithm::Steepest),
            "sample-descend" => Ok(Algorithm::SampleDescend),
            "grid2d-quantum" => Ok(Algorithm::Grid2dQuantum),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// How sample-then-descend pays for its sampling phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Charging {
    /// One classical query per sample.
    Classical,
    /// One Dürr–Høyer minimum search over the samples.
    Quantum,
}

impl FromStr for Charging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Charging::Classical),
            "quantum" => Ok(Charging::Quantum),
            other => Err(Error::Config(format!("unknown charging {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub algorithm: Algorithm,
    pub vertex: Vertex,
    pub value: i64,
    /// Checked after the run by an uncharged scan of all neighbours.
    pub is_local_min: bool,
    pub outcome: Outcome,
    pub rounds: u32,
    pub descent_steps: u64,
    pub ledger: QueryLedger,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<RoundTrace>>,
}

/// Uncharged check that no neighbour of `v` is strictly smaller.
pub fn is_local_min(oracle: &ValueOracle<'_>, v: &Vertex) -> Result<bool> {
    let f = oracle.peek(v)?;
    for w in neighbors(oracle.shape(), v)? {
        if oracle.peek(&w)? < f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Steepest descent with a per-run value cache, so each vertex is charged
/// at most once.
pub(crate) struct Descent {
    cache: HashMap<Vertex, i64>,
}

impl Descent {
    pub(crate) fn new() -> Self {
        Descent {
            cache: HashMap::new(),
        }
    }

    pub(crate) fn remember(&mut self, v: Vertex, value: i64) {
        self.cache.insert(v, value);
    }

    fn value(&mut self, oracle: &mut ValueOracle<'_>, v: &Vertex) -> Result<i64> {
        if let Some(&f) = self.cache.get(v) {
            return Ok(f);
        }
        let f = oracle.query(v)?;
        self.cache.insert(v.clone(), f);
        Ok(f)
    }

    /// Moves to the smallest neighbour (ties: lowest snake rank) while it is
    /// strictly smaller. Returns the final vertex, its value and the number
    /// of moves.
    pub(crate) fn run(
        &mut self,
        oracle: &mut ValueOracle<'_>,
        start: &Vertex,
    ) -> Result<(Vertex, i64, u64)> {
        let shape = oracle.shape().clone();
        let mut cur = start.clone();
        let mut f = self.value(oracle, &cur)?;
        let mut steps = 0;
        loop {
            let mut best: Option<(i64, u64, Vertex)> = None;
            for w in neighbors(&shape, &cur)? {
                let g = self.value(oracle, &w)?;
                let rank = shape.rank_unchecked(&w);
                if best
                    .as_ref()
                    .is_none_or(|(bg, br, _)| (g, rank) < (*bg, *br))
                {
                    best = Some((g, rank, w));
                }
            }
            match best {
                Some((g, _, w)) if g < f => {
                    cur = w;
                    f = g;
                    steps += 1;
                }
                _ => return Ok((cur, f, steps)),
            }
        }
    }
}

fn finish(
    algorithm: Algorithm,
    oracle: ValueOracle<'_>,
    vertex: Vertex,
    outcome: Outcome,
    rounds: u32,
    descent_steps: u64,
    trace: Option<Vec<RoundTrace>>,
) -> Result<SolveResult> {
    let value = oracle.peek(&vertex)?;
    let is_local_min = is_local_min(&oracle, &vertex)?;
    Ok(SolveResult {
        algorithm,
        vertex,
        value,
        is_local_min,
        outcome,
        rounds,
        descent_steps,
        ledger: oracle.into_ledger(),
        trace,
    })
}

/// Follows the decreasing path from `start`; every probe is a classical query.
pub fn steepest_descent(mut oracle: ValueOracle<'_>, start: &Vertex) -> Result<SolveResult> {
    oracle.shape().check(start)?;
    oracle.ledger_mut().push_phase("descent");
    let (v, _, steps) = Descent::new().run(&mut oracle, start)?;
    oracle.ledger_mut().pop_phase();
    finish(
        Algorithm::Steepest,
        oracle,
        v,
        Outcome::Success,
        0,
        steps,
        None,
    )
}

/// Failure rate of the simulated minimum search in quantum charging.
pub const SAMPLE_DESCEND_EPS: f64 = 0.25;

/// Samples `s` vertices uniformly with replacement, takes the smallest and
/// descends from it.
pub fn sample_then_descend(
    mut oracle: ValueOracle<'_>,
    s: u64,
    seed: u64,
    charging: Charging,
) -> Result<SolveResult> {
    let shape = oracle.shape().clone();
    let total = shape.vertex_count();
    if s == 0 || s > total {
        return Err(Error::param(format!(
            "sample count {s} outside 1..={total}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vertex> = (0..s)
        .map(|_| shape.from_linear_index(rng.gen_range(0..total)))
        .collect();
    let mut descent = Descent::new();

    oracle.ledger_mut().push_phase("sample");
    let best = match charging {
        Charging::Classical => {
            let mut best: Option<(i64, usize)> = None;
            for (i, v) in samples.iter().enumerate() {
                let f = oracle.query(v)?;
                descent.remember(v.clone(), f);
                if best.is_none_or(|(bf, _)| f < bf) {
                    best = Some((f, i));
                }
            }
            best.expect("at least one sample").1
        }
        Charging::Quantum => {
            let values = samples
                .iter()
                .map(|v| oracle.peek(v))
                .collect::<Result<Vec<_>>>()?;
            durr_hoyer_min_sim(
                &values,
                SAMPLE_DESCEND_EPS,
                SubroutineMode::Exact,
                &mut rng,
                oracle.ledger_mut(),
            )?
        }
    };
    oracle.ledger_mut().pop_phase();

    oracle.ledger_mut().push_phase("descent");
    let (v, _, steps) = descent.run(&mut oracle, &samples[best])?;
    oracle.ledger_mut().pop_phase();
    finish(
        Algorithm::SampleDescend,
        oracle,
        v,
        Outcome::Success,
        0,
        steps,
        None,
    )
}
