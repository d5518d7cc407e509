//! Hard Local Search instances built from a random walk timestamped by a
//! clock.
//!
//! Three families are generated:
//!
//! - `hypercube-walk`: `{0,1}^n = V^w ⊗ V^c` with `V^w = {0,1}^m`. Every tick
//!   flips one uniformly chosen walk bit, then the clock part advances one
//!   step along the snake path of `{0,1}^(n-m)`.
//! - `grid-walk`: `[n]^d = [n]^m ⊗ [n]^(d-m)`. Tick `t` makes one sticky
//!   `±1` step in walk dimension `t mod m`.
//! - `grid-blocks`: the walk lives inside `[α]^(d-1)` blocks, the last axis
//!   is a per-block clock, and blocks are threaded along the snake path of
//!   `[β]^(d-1)` with deterministic connector segments (see [`BlockLayout`]).
//!
//! Steps are drawn from `ChaCha8Rng::seed_from_u64(seed)`: flips with
//! `gen_range(0..m)`, signs with `gen::<bool>()` (`true` is `+1`). The seed
//! and parameters therefore fix the instance byte-for-byte, and an instance
//! file stores the step sequence explicitly so it can be replayed without
//! the generator.
//!
//! The induced function decreases strictly along the trajectory and grows
//! with the `l1` distance from the start everywhere else, so the final
//! trajectory point is the unique local minimum.

mod blocks;
mod file;
mod verify;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::l1_distance;
use crate::{Error, GridShape, Result, Vertex};

pub use blocks::BlockLayout;
pub use file::{InstanceFile, FORMAT_VERSION};
pub use verify::{verify_instance, VerifyReport, SCAN_BUDGET};

/// Largest number of clock ticks (or block trajectory points) an instance
/// may store.
pub const TRAJECTORY_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    HypercubeWalk,
    GridWalk,
    GridBlocks,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::HypercubeWalk => "hypercube-walk",
            Family::GridWalk => "grid-walk",
            Family::GridBlocks => "grid-blocks",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hypercube-walk" | "hypercube" => Ok(Family::HypercubeWalk),
            "grid-walk" | "grid" => Ok(Family::GridWalk),
            "grid-blocks" | "blocks" => Ok(Family::GridBlocks),
            other => Err(Error::Config(format!("unknown instance family `{other}`"))),
        }
    }
}

/// Whether parameters target the randomized or the quantum lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryModel {
    Randomized,
    Quantum,
}

impl FromStr for QueryModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "randomized" => Ok(QueryModel::Randomized),
            "quantum" => Ok(QueryModel::Quantum),
            other => Err(Error::Config(format!("unknown query model `{other}`"))),
        }
    }
}

/// Generator parameters. `d` is the grid dimension (unused for hypercubes,
/// whose dimension is `n`); `m` is the walk dimension count (hypercube and
/// grid); `r` is the block exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceParams {
    pub n: u32,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub r: Option<f64>,
    pub seed: u64,
}

/// The random choices of a walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Steps {
    /// Walk coordinate flipped at each tick, in `0..m`.
    Flips(Vec<u32>),
    /// `+1` or `-1` per walk step.
    Signs(Vec<i8>),
}

impl Steps {
    pub fn len(&self) -> usize {
        match self {
            Steps::Flips(s) => s.len(),
            Steps::Signs(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_values(&self) -> Vec<i64> {
        match self {
            Steps::Flips(s) => s.iter().map(|&x| i64::from(x)).collect(),
            Steps::Signs(s) => s.iter().map(|&x| i64::from(x)).collect(),
        }
    }
}

/// Per-tick walk states of a clocked instance, stored flat (`m` entries per
/// tick).
#[derive(Clone, Debug)]
struct ClockTrack {
    clock: GridShape,
    before: Vec<u32>,
    after: Vec<u32>,
}

#[derive(Clone, Debug)]
struct BlockTrack {
    layout: BlockLayout,
    points: Vec<Vertex>,
    /// Linear index of a trajectory point to its 0-based position.
    index: HashMap<u64, u64>,
    /// Position of the particle at the start of every iteration.
    iteration_start: Vec<u64>,
}

#[derive(Clone, Debug)]
enum Track {
    Clocked(ClockTrack),
    Blocks(BlockTrack),
}

/// A generated hard instance together with its trajectory index.
#[derive(Clone, Debug)]
pub struct WalkInstance {
    family: Family,
    params: InstanceParams,
    shape: GridShape,
    walk_dims: usize,
    horizon: u64,
    start: Vertex,
    steps: Steps,
    track: Track,
}

/// Where a vertex sits on a clocked trajectory: `x_{tick, second}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrajectorySlot {
    pub tick: u64,
    pub second: bool,
}

/// What a membership-only solver is allowed to know about an instance: the
/// geometry, the clock structure and the start, but not the walk.
#[derive(Clone, Debug)]
pub struct InstanceMetadata {
    pub family: Family,
    pub shape: GridShape,
    pub walk_dims: usize,
    pub horizon: u64,
    pub start: Vertex,
    pub clock: Option<GridShape>,
    pub layout: Option<BlockLayout>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn draw_signs(count: u64, seed: u64) -> Vec<i8> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
        .collect()
}

fn check_ticks(ticks: u64) -> Result<()> {
    if ticks > TRAJECTORY_BUDGET {
        return Err(Error::budget("trajectory ticks", ticks, TRAJECTORY_BUDGET));
    }
    Ok(())
}

/// Walk-with-clock instance on `{0,1}^n` with `m` walk bits.
pub fn gen_hypercube_instance(n: usize, m: usize, seed: u64) -> Result<WalkInstance> {
    let ticks = hypercube_ticks(n, m)?;
    let mut rng = rng(seed);
    let flips = (0..ticks).map(|_| rng.gen_range(0..m as u32)).collect();
    let params = InstanceParams {
        n: n as u32,
        d: None,
        m: Some(m),
        r: None,
        seed,
    };
    WalkInstance::from_steps(Family::HypercubeWalk, params, Steps::Flips(flips))
}

fn hypercube_ticks(n: usize, m: usize) -> Result<u64> {
    if m < 1 || m >= n {
        return Err(Error::param(format!(
            "walk bits m = {m} must satisfy 1 <= m < n = {n}"
        )));
    }
    if n - m >= 63 {
        return Err(Error::budget(
            "trajectory ticks",
            u128::MAX,
            TRAJECTORY_BUDGET,
        ));
    }
    let ticks = 1u64 << (n - m);
    check_ticks(ticks)?;
    Ok(ticks)
}

/// Round-robin sticky walk instance on `[n]^d` with `m` walk dimensions.
pub fn gen_grid_instance(n: u32, d: usize, m: usize, seed: u64) -> Result<WalkInstance> {
    let ticks = grid_ticks(n, d, m)?;
    let params = InstanceParams {
        n,
        d: Some(d),
        m: Some(m),
        r: None,
        seed,
    };
    WalkInstance::from_steps(
        Family::GridWalk,
        params,
        Steps::Signs(draw_signs(ticks, seed)),
    )
}

fn grid_ticks(n: u32, d: usize, m: usize) -> Result<u64> {
    if m < 1 || m >= d {
        return Err(Error::param(format!(
            "walk dimensions m = {m} must satisfy 1 <= m < d = {d}"
        )));
    }
    let clock = GridShape::new(n, d - m)?;
    check_ticks(clock.vertex_count())?;
    Ok(clock.vertex_count())
}

/// Block-threaded instance on `[n]^d` with block exponent `r`.
pub fn gen_block_instance(n: u32, d: usize, r: f64, seed: u64) -> Result<WalkInstance> {
    let layout = BlockLayout::new(n, d, r)?;
    check_ticks(layout.trajectory_bound())?;
    let params = InstanceParams {
        n,
        d: Some(d),
        m: None,
        r: Some(r),
        seed,
    };
    WalkInstance::from_steps(
        Family::GridBlocks,
        params,
        Steps::Signs(draw_signs(layout.iterations(), seed)),
    )
}

/// `f_X(v)`.
pub fn instance_value(inst: &WalkInstance, v: &Vertex) -> Result<i64> {
    inst.value(v)
}

/// `x_{T,1}`, the last trajectory point.
pub fn instance_endpoint(inst: &WalkInstance) -> Vertex {
    inst.endpoint()
}

impl WalkInstance {
    /// Rebuilds an instance by replaying a step sequence.
    pub fn from_steps(family: Family, params: InstanceParams, steps: Steps) -> Result<Self> {
        match family {
            Family::HypercubeWalk => {
                let n = params.n as usize;
                let m = params
                    .m
                    .ok_or_else(|| Error::param("hypercube instances need m"))?;
                let ticks = hypercube_ticks(n, m)?;
                let Steps::Flips(flips) = &steps else {
                    return Err(Error::param("hypercube instances take flip steps"));
                };
                if flips.len() as u64 != ticks {
                    return Err(Error::param(format!(
                        "expected {ticks} flips, got {}",
                        flips.len()
                    )));
                }
                if let Some(&bad) = flips.iter().find(|&&i| i as usize >= m) {
                    return Err(Error::param(format!(
                        "flip coordinate {bad} outside 0..{m}"
                    )));
                }
                let shape = GridShape::hypercube(n)?;
                let clock = GridShape::hypercube(n - m)?;
                let (before, after) = replay_clocked(m, &vec![1; m], ticks, |t, walk| {
                    let i = flips[t as usize] as usize;
                    walk[i] = 3 - walk[i];
                });
                Ok(Self::clocked(
                    family, params, shape, m, clock, steps, before, after,
                ))
            }
            Family::GridWalk => {
                let n = params.n;
                let d = params
                    .d
                    .ok_or_else(|| Error::param("grid instances need d"))?;
                let m = params
                    .m
                    .ok_or_else(|| Error::param("grid instances need m"))?;
                let ticks = grid_ticks(n, d, m)?;
                let signs = check_signs(&steps, ticks)?;
                let shape = GridShape::new(n, d)?;
                let clock = GridShape::new(n, d - m)?;
                let (before, after) = replay_clocked(m, &vec![n / 2; m], ticks, |t, walk| {
                    let i = (t % m as u64) as usize;
                    walk[i] = sticky_step(walk[i], signs[t as usize], 1, n);
                });
                Ok(Self::clocked(
                    family, params, shape, m, clock, steps, before, after,
                ))
            }
            Family::GridBlocks => {
                let d = params
                    .d
                    .ok_or_else(|| Error::param("block instances need d"))?;
                let r = params
                    .r
                    .ok_or_else(|| Error::param("block instances need r"))?;
                let layout = BlockLayout::new(params.n, d, r)?;
                check_ticks(layout.trajectory_bound())?;
                let signs = check_signs(&steps, layout.iterations())?.to_vec();
                let shape = GridShape::new(params.n, d)?;
                let run = layout.run(|t, _, _, _| Ok(signs[t as usize] > 0))?;
                let mut index = HashMap::with_capacity(run.points.len());
                for (pos, p) in run.points.iter().enumerate() {
                    index.insert(shape.linear_index(p), pos as u64);
                }
                let horizon = layout.iterations() - 1;
                let start = run.points[0].clone();
                Ok(WalkInstance {
                    family,
                    params,
                    shape,
                    walk_dims: d - 1,
                    horizon,
                    start,
                    steps,
                    track: Track::Blocks(BlockTrack {
                        layout,
                        points: run.points,
                        index,
                        iteration_start: run.iteration_start,
                    }),
                })
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn clocked(
        family: Family,
        params: InstanceParams,
        shape: GridShape,
        m: usize,
        clock: GridShape,
        steps: Steps,
        before: Vec<u32>,
        after: Vec<u32>,
    ) -> Self {
        let start = Vertex::new(before[..m].to_vec()).join(&clock.origin());
        let horizon = clock.vertex_count() - 1;
        WalkInstance {
            family,
            params,
            shape,
            walk_dims: m,
            horizon,
            start,
            steps,
            track: Track::Clocked(ClockTrack {
                clock,
                before,
                after,
            }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &InstanceParams {
        &self.params
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    /// `m` for clocked families, `d - 1` for blocks.
    pub fn walk_dims(&self) -> usize {
        self.walk_dims
    }

    /// `T`: the last tick (clocked) or the last iteration (blocks).
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn start(&self) -> &Vertex {
        &self.start
    }

    pub fn steps(&self) -> &Steps {
        &self.steps
    }

    pub fn clock_shape(&self) -> Option<&GridShape> {
        match &self.track {
            Track::Clocked(c) => Some(&c.clock),
            Track::Blocks(_) => None,
        }
    }

    pub fn block_layout(&self) -> Option<&BlockLayout> {
        match &self.track {
            Track::Clocked(_) => None,
            Track::Blocks(b) => Some(&b.layout),
        }
    }

    pub fn metadata(&self) -> InstanceMetadata {
        InstanceMetadata {
            family: self.family,
            shape: self.shape.clone(),
            walk_dims: self.walk_dims,
            horizon: self.horizon,
            start: self.start.clone(),
            clock: self.clock_shape().cloned(),
            layout: self.block_layout().cloned(),
        }
    }

    /// Walk part of `x_{t,0}` (clocked families only).
    pub fn walk_before(&self, t: u64) -> Option<&[u32]> {
        match &self.track {
            Track::Clocked(c) if t <= self.horizon => {
                let m = self.walk_dims;
                Some(&c.before[t as usize * m..(t as usize + 1) * m])
            }
            _ => None,
        }
    }

    /// Walk part of `x_{t,1}` (clocked families only).
    pub fn walk_after(&self, t: u64) -> Option<&[u32]> {
        match &self.track {
            Track::Clocked(c) if t <= self.horizon => {
                let m = self.walk_dims;
                Some(&c.after[t as usize * m..(t as usize + 1) * m])
            }
            _ => None,
        }
    }

    /// Trajectory points in order. Clocked families list all `2(T+1)`
    /// points `x_{t,b}` (a sticky stay repeats a point); blocks list the
    /// distinct positions of the particle.
    pub fn trajectory(&self) -> Vec<Vertex> {
        match &self.track {
            Track::Clocked(c) => {
                let mut out = Vec::with_capacity(2 * (self.horizon as usize + 1));
                for t in 0..=self.horizon {
                    let tick = c.clock.unrank_unchecked(t + 1);
                    out.push(Vertex::new(self.walk_before(t).unwrap().to_vec()).join(&tick));
                    out.push(Vertex::new(self.walk_after(t).unwrap().to_vec()).join(&tick));
                }
                out
            }
            Track::Blocks(b) => b.points.clone(),
        }
    }

    pub fn endpoint(&self) -> Vertex {
        match &self.track {
            Track::Clocked(c) => {
                let tick = c.clock.unrank_unchecked(self.horizon + 1);
                Vertex::new(self.walk_after(self.horizon).unwrap().to_vec()).join(&tick)
            }
            Track::Blocks(b) => b.points.last().expect("nonempty trajectory").clone(),
        }
    }

    /// `f(x_{0,0})`; off-trajectory values are this plus the `l1` distance
    /// to the start.
    pub fn value_ceiling(&self) -> i64 {
        match &self.track {
            Track::Clocked(_) => 2 * self.horizon as i64,
            Track::Blocks(b) => b.points.len() as i64 - 1,
        }
    }

    /// Number of distinct trajectory points.
    pub fn distinct_points(&self) -> u64 {
        match &self.track {
            Track::Clocked(_) => {
                let stays = (0..=self.horizon)
                    .filter(|&t| self.walk_before(t) == self.walk_after(t))
                    .count();
                2 * (self.horizon + 1) - stays as u64
            }
            Track::Blocks(b) => b.points.len() as u64,
        }
    }

    /// Slot of an on-trajectory vertex of a clocked instance. When the walk
    /// stayed put the slot of the first occurrence is returned.
    pub fn slot_of(&self, v: &Vertex) -> Option<TrajectorySlot> {
        let Track::Clocked(c) = &self.track else {
            return None;
        };
        if !self.shape.contains(v) {
            return None;
        }
        let m = self.walk_dims;
        let tick = c
            .clock
            .rank_unchecked(&Vertex::new(v.coords()[m..].to_vec()))
            - 1;
        let walk = &v.coords()[..m];
        if self.walk_before(tick) == Some(walk) {
            Some(TrajectorySlot {
                tick,
                second: false,
            })
        } else if self.walk_after(tick) == Some(walk) {
            Some(TrajectorySlot { tick, second: true })
        } else {
            None
        }
    }

    /// 0-based position in [`WalkInstance::trajectory`] order of the first
    /// occurrence of `v`.
    pub fn position_of(&self, v: &Vertex) -> Option<u64> {
        match &self.track {
            Track::Clocked(_) => self.slot_of(v).map(|s| 2 * s.tick + u64::from(s.second)),
            Track::Blocks(b) => {
                if !self.shape.contains(v) {
                    return None;
                }
                b.index.get(&self.shape.linear_index(v)).copied()
            }
        }
    }

    /// `v ∈ set(X)`. Uncharged; see `oracle::MembershipOracle` for the
    /// counted version.
    pub fn contains(&self, v: &Vertex) -> bool {
        self.position_of(v).is_some()
    }

    /// `f_X(v)`.
    pub fn value(&self, v: &Vertex) -> Result<i64> {
        self.shape.check(v)?;
        Ok(self.value_unchecked(v))
    }

    pub(crate) fn value_unchecked(&self, v: &Vertex) -> i64 {
        match &self.track {
            Track::Clocked(_) => match self.slot_of(v) {
                Some(s) => 2 * (self.horizon - s.tick) as i64 - i64::from(s.second),
                None => self.off_path_value(v),
            },
            Track::Blocks(b) => match b.index.get(&self.shape.linear_index(v)) {
                Some(&pos) => b.points.len() as i64 - 1 - pos as i64,
                None => self.off_path_value(v),
            },
        }
    }

    fn off_path_value(&self, v: &Vertex) -> i64 {
        let delta = l1_distance(v, &self.start).expect("same shape");
        delta as i64 + self.value_ceiling()
    }

    /// Particle position at the start of block iteration `tau`.
    pub fn iteration_point(&self, tau: u64) -> Option<&Vertex> {
        let Track::Blocks(b) = &self.track else {
            return None;
        };
        let pos = *b.iteration_start.get(tau as usize)?;
        Some(&b.points[pos as usize])
    }

    /// Flags the trajectory as self-avoiding: clocked points are pairwise
    /// distinct except for a sticky stay `x_{t,1} = x_{t,0}` (never allowed
    /// on the hypercube), block points are pairwise distinct.
    pub(crate) fn is_self_avoiding(&self) -> bool {
        let points = self.trajectory();
        let mut seen = HashMap::with_capacity(points.len());
        for (pos, p) in points.iter().enumerate() {
            if let Some(prev) = seen.insert(self.shape.linear_index(p), pos) {
                let clocked_stay = matches!(self.track, Track::Clocked(_))
                    && self.family != Family::HypercubeWalk
                    && pos % 2 == 1
                    && prev + 1 == pos;
                if !clocked_stay {
                    return false;
                }
            }
        }
        true
    }
}

fn check_signs(steps: &Steps, expected: u64) -> Result<&[i8]> {
    let Steps::Signs(signs) = steps else {
        return Err(Error::param("grid instances take sign steps"));
    };
    if signs.len() as u64 != expected {
        return Err(Error::param(format!(
            "expected {expected} signs, got {}",
            signs.len()
        )));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::param("signs must be +1 or -1"));
    }
    Ok(signs)
}

pub(crate) fn sticky_step(c: u32, sign: i8, lo: u32, hi: u32) -> u32 {
    if sign > 0 {
        (c + 1).min(hi)
    } else {
        c.saturating_sub(1).max(lo)
    }
}

/// Flat per-tick walk states: `before[t]` then `after[t] = step(before[t])`
/// and `before[t+1] = after[t]`.
fn replay_clocked(
    m: usize,
    start: &[u32],
    ticks: u64,
    mut step: impl FnMut(u64, &mut [u32]),
) -> (Vec<u32>, Vec<u32>) {
    let mut before = Vec::with_capacity(ticks as usize * m);
    let mut after = Vec::with_capacity(ticks as usize * m);
    let mut walk = start.to_vec();
    for t in 0..ticks {
        before.extend_from_slice(&walk);
        step(t, &mut walk);
        after.extend_from_slice(&walk);
    }
    (before, after)
}

/// Parameter choices for the lower-bound constructions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecommendedParams {
    pub m: Option<usize>,
    pub r: Option<f64>,
}

/// Walk dimension `m` (hypercube, grid) or block exponent `r` (blocks) used
/// by the lower-bound constructions. Logarithms are base 2. `d` is ignored
/// for the hypercube.
pub fn recommended_params(
    family: Family,
    model: QueryModel,
    n: u32,
    d: usize,
) -> Result<RecommendedParams> {
    let nf = f64::from(n);
    let log_n = nf.log2();
    let checked_m = |m: usize, limit: usize| {
        if m >= 1 && m < limit {
            Ok(RecommendedParams {
                m: Some(m),
                r: None,
            })
        } else {
            Err(Error::Unsupported(format!(
                "{family} n={n} d={d}: recommended m = {m} is not in 1..{limit}"
            )))
        }
    };
    match family {
        Family::HypercubeWalk => {
            let m = match model {
                QueryModel::Randomized => ((nf + log_n) / 2.0).floor(),
                QueryModel::Quantum => ((2.0 * nf - log_n) / 3.0).floor(),
            };
            checked_m(m.max(0.0) as usize, n as usize)
        }
        Family::GridWalk => {
            let m = match (model, d) {
                (_, 0 | 1) => 0,
                (QueryModel::Randomized, 2) => 1,
                (QueryModel::Randomized, 3 | 4) => 2,
                (QueryModel::Randomized, _) => d.div_ceil(2),
                (QueryModel::Quantum, 2) => 1,
                (QueryModel::Quantum, 3..=5) => d - 2,
                (QueryModel::Quantum, 6) => 4,
                (QueryModel::Quantum, _) => (2.0 * d as f64 / 3.0).round() as usize,
            };
            checked_m(m, d)
        }
        Family::GridBlocks => {
            let df = d as f64;
            let r = match (model, d) {
                (_, 0 | 1) => return Err(Error::Unsupported("block instances need d >= 2".into())),
                (QueryModel::Randomized, 2) => 2.0 / 3.0,
                (QueryModel::Randomized, 3) => {
                    if n < 4 {
                        return Err(Error::Unsupported("log log n needs n >= 4".into()));
                    }
                    0.75 - log_n.log2() / (4.0 * log_n)
                }
                (QueryModel::Randomized, _) => df / (2.0 * df - 2.0),
                (QueryModel::Quantum, 2..=5) => df / (df + 1.0),
                (QueryModel::Quantum, _) => 2.0 * df / (3.0 * df - 3.0),
            };
            Ok(RecommendedParams {
                m: None,
                r: Some(r),
            })
        }
    }
}
