//! Divide-and-conquer local search on `[n]^2`.
//!
//! Each round samples the current region `U`, takes the best sample as the
//! anchor `u`, and looks for a radius `m` such that no vertex on the l1
//! sphere of radius `m` around `u` (inside `U`) beats `u`. The region then
//! shrinks to the l1 ball of that radius. Once the radius is at most
//! `sqrt(n)`, a plain steepest descent from the anchor finishes the job.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    ceil_log2_inv, durr_hoyer_min_sim, finish, grover_exists_sim, Algorithm, Descent, Outcome,
    SolveResult, SubroutineMode,
};
use crate::grid::neighbors;
use crate::oracle::ValueOracle;
use crate::{Error, GridShape, Result, Vertex};

/// Error budgets of the subroutines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid2dEpsilons {
    pub eps: f64,
    /// Sampling misses the quarter-quantile.
    pub eps1: f64,
    /// Minimum search fails.
    pub eps2: f64,
    /// No good radius among the tries.
    pub eps3: f64,
    /// One sphere search fails.
    pub eps4: f64,
}

impl Grid2dEpsilons {
    /// `eps1 = eps2 = eps3 = eps/4`, `eps4 = eps / (4 log2(4/eps))`.
    pub fn from_eps(eps: f64) -> Self {
        Grid2dEpsilons {
            eps,
            eps1: eps / 4.0,
            eps2: eps / 4.0,
            eps3: eps / 4.0,
            eps4: eps / (4.0 * (4.0 / eps).log2()),
        }
    }

    /// `eps = 1 / (2 log2 n)`.
    pub fn defaults(n: u32) -> Self {
        Self::from_eps(1.0 / (2.0 * f64::from(n).log2()))
    }

    fn validate(&self) -> Result<()> {
        for (name, e) in [
            ("eps1", self.eps1),
            ("eps2", self.eps2),
            ("eps3", self.eps3),
            ("eps4", self.eps4),
        ] {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::param(format!("{name} = {e} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Grid2dConfig {
    pub seed: u64,
    pub mode: SubroutineMode,
    /// Defaults to [`Grid2dEpsilons::defaults`].
    pub epsilons: Option<Grid2dEpsilons>,
    /// Record region-invariant checks in the trace; costs `O(|U|)` uncharged
    /// evaluations per round.
    pub instrument: bool,
}

/// The current region `U_(i)`: `[n]^2` intersected with every l1 ball
/// accepted so far.
#[derive(Clone, Debug)]
pub struct RegionState {
    n: u32,
    round: u32,
    radius: u64,
    anchor: Option<Vertex>,
    constraints: Vec<(Vertex, u64)>,
}

fn xy(v: &Vertex) -> (i64, i64) {
    (i64::from(v.coords()[0]), i64::from(v.coords()[1]))
}

impl RegionState {
    pub fn new(n: u32) -> Self {
        RegionState {
            n,
            round: 0,
            radius: u64::from(n),
            anchor: None,
            constraints: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    /// `m_(i)`.
    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn anchor(&self) -> Option<&Vertex> {
        self.anchor.as_ref()
    }

    pub fn constraints(&self) -> &[(Vertex, u64)] {
        &self.constraints
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        let n = i64::from(self.n);
        let (x, y) = xy(v);
        (1..=n).contains(&x)
            && (1..=n).contains(&y)
            && self.constraints.iter().all(|(c, r)| {
                let (cx, cy) = xy(c);
                ((x - cx).abs() + (y - cy).abs()) as u64 <= *r
            })
    }

    /// Rows spanned by the newest ball, clipped to the grid.
    fn rows(&self) -> (i64, i64) {
        let n = i64::from(self.n);
        match self.constraints.last() {
            None => (1, n),
            Some((c, r)) => {
                let (cx, _) = xy(c);
                ((cx - *r as i64).max(1), (cx + *r as i64).min(n))
            }
        }
    }

    fn cols(&self) -> (i64, i64) {
        let n = i64::from(self.n);
        match self.constraints.last() {
            None => (1, n),
            Some((c, r)) => {
                let (_, cy) = xy(c);
                ((cy - *r as i64).max(1), (cy + *r as i64).min(n))
            }
        }
    }

    /// Columns of row `x` inside the region, as an interval.
    fn row_span(&self, x: i64) -> Option<(i64, i64)> {
        let (mut lo, mut hi) = (1, i64::from(self.n));
        for (c, r) in &self.constraints {
            let (cx, cy) = xy(c);
            let slack = *r as i64 - (x - cx).abs();
            if slack < 0 {
                return None;
            }
            lo = lo.max(cy - slack);
            hi = hi.min(cy + slack);
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// `|U_(i)|`, counted row by row from the interval intersections.
    pub fn size(&self) -> u64 {
        let (x0, x1) = self.rows();
        (x0..=x1)
            .filter_map(|x| self.row_span(x))
            .map(|(lo, hi)| (hi - lo + 1) as u64)
            .sum()
    }

    /// Every vertex of the region, row by row.
    pub fn vertices(&self) -> Vec<Vertex> {
        let (x0, x1) = self.rows();
        let mut out = Vec::new();
        for x in x0..=x1 {
            if let Some((lo, hi)) = self.row_span(x) {
                out.extend((lo..=hi).map(|y| Vertex::new(vec![x as u32, y as u32])));
            }
        }
        out
    }

    /// A uniform vertex of the region, by rejection from the bounding box of
    /// the newest ball.
    pub fn sample(&self, rng: &mut impl Rng) -> Vertex {
        let (x0, x1) = self.rows();
        let (y0, y1) = self.cols();
        loop {
            let v = Vertex::new(vec![
                rng.gen_range(x0..=x1) as u32,
                rng.gen_range(y0..=y1) as u32,
            ]);
            if self.contains(&v) {
                return v;
            }
        }
    }

    /// `U_(i+1) = {u ∈ U_(i) : |u - anchor|_1 <= radius}`.
    pub fn shrink(&mut self, anchor: Vertex, radius: u64) {
        self.constraints.push((anchor.clone(), radius));
        self.anchor = Some(anchor);
        self.radius = radius;
        self.round += 1;
    }
}

/// Vertices of the region at l1 distance exactly `m` from `center`, ordered
/// by first then second coordinate.
pub fn l1_sphere(center: &Vertex, m: u64, region: &RegionState) -> Vec<Vertex> {
    let (cx, cy) = xy(center);
    let m = m as i64;
    let mut out = Vec::new();
    for dx in -m..=m {
        let rest = m - dx.abs();
        let ys: &[i64] = if rest == 0 {
            &[cy]
        } else {
            &[cy - rest, cy + rest]
        };
        for &y in ys {
            let x = cx + dx;
            if x >= 1 && y >= 1 && x <= i64::from(region.n) && y <= i64::from(region.n) {
                let v = Vertex::new(vec![x as u32, y as u32]);
                if region.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// One round of the main loop.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTrace {
    pub round: u32,
    /// `m_(i)`.
    pub radius: u64,
    /// `|U_(i)|`.
    pub region_size: u64,
    pub samples: u64,
    /// `u_(i+1)` and its value.
    pub anchor: Vertex,
    pub anchor_value: i64,
    pub tries: u32,
    /// `m_(i+1)`, or `None` when every try failed.
    pub next_radius: Option<u64>,
    /// `n(u_(i+1), U_(i))`, instrumented runs only.
    pub anchor_rank: Option<u64>,
    /// Good radii in `[floor(m/4), ceil(3m/4)]`, instrumented runs only.
    pub good_radii: Option<u64>,
    /// `B(U_(i+1)) ⊆ B(U_(i)) ∪ W_(i)`, instrumented runs only.
    pub boundary_step: Option<bool>,
    /// `B(U_(i+1)) ⊆ W_(0) ∪ ... ∪ W_(i)`, instrumented runs only.
    pub boundary_union: Option<bool>,
}

fn boundary(shape: &GridShape, set: &HashSet<Vertex>) -> Result<HashSet<Vertex>> {
    let mut out = HashSet::new();
    for s in set {
        if neighbors(shape, s)?.iter().any(|t| !set.contains(t)) {
            out.insert(s.clone());
        }
    }
    Ok(out)
}

/// The two-dimensional divide-and-conquer algorithm with simulated
/// Dürr–Høyer and Grover subroutines.
pub fn grid2d_quantum(mut oracle: ValueOracle<'_>, config: &Grid2dConfig) -> Result<SolveResult> {
    let shape = oracle.shape().clone();
    if shape.dims() != 2 {
        return Err(Error::Unsupported(format!(
            "grid2d-quantum needs a 2-dimensional grid, got {shape}"
        )));
    }
    let n = shape.side();
    let eps = config
        .epsilons
        .unwrap_or_else(|| Grid2dEpsilons::defaults(n));
    eps.validate()?;
    let mode = config.mode;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut region = RegionState::new(n);
    let mut anchor: Option<(Vertex, i64)> = None;
    let mut trace = Vec::new();
    let mut sphere_union: HashSet<Vertex> = HashSet::new();
    let tries = ceil_log2_inv(eps.eps3);
    let log_inv_eps1 = (1.0 / eps.eps1).log2();

    while region.radius() * region.radius() > u64::from(n) {
        let m = region.radius();
        let size = region.size();

        oracle.ledger_mut().push_phase("sample-min");
        let s = ((4.0 * size as f64 / m as f64) * log_inv_eps1)
            .ceil()
            .max(1.0) as u64;
        let samples: Vec<Vertex> = (0..s).map(|_| region.sample(&mut rng)).collect();
        let values = samples
            .iter()
            .map(|v| oracle.peek(v))
            .collect::<Result<Vec<_>>>()?;
        let best = durr_hoyer_min_sim(&values, eps.eps2, mode, &mut rng, oracle.ledger_mut())?;
        oracle.ledger_mut().pop_phase();

        let (v, fv) = (samples[best].clone(), values[best]);
        let (u, fu) = match anchor.take() {
            Some((u, fu)) if fu < fv => (u, fu),
            _ => (v, fv),
        };

        let (lo, hi) = (m / 4, (3 * m).div_ceil(4));
        let mut round = RoundTrace {
            round: region.round(),
            radius: m,
            region_size: size,
            samples: s,
            anchor: u.clone(),
            anchor_value: fu,
            tries: 0,
            next_radius: None,
            anchor_rank: None,
            good_radii: None,
            boundary_step: None,
            boundary_union: None,
        };
        let before: Option<HashSet<Vertex>> = if config.instrument {
            let members: HashSet<Vertex> = region.vertices().into_iter().collect();
            let mut rank = 0;
            for w in &members {
                rank += u64::from(oracle.peek(w)? < fu);
            }
            round.anchor_rank = Some(rank);
            let mut good = 0;
            for r in lo..=hi {
                let mut ok = true;
                for w in l1_sphere(&u, r, &region) {
                    ok &= oracle.peek(&w)? >= fu;
                }
                good += u64::from(ok);
            }
            round.good_radii = Some(good);
            Some(members)
        } else {
            None
        };

        oracle.ledger_mut().push_phase("radius-test");
        let mut accepted: Option<(u64, Vec<Vertex>)> = None;
        for _ in 0..tries {
            round.tries += 1;
            let r = rng.gen_range(lo..=hi);
            let sphere = l1_sphere(&u, r, &region);
            let sphere_values = sphere
                .iter()
                .map(|w| oracle.peek(w))
                .collect::<Result<Vec<_>>>()?;
            let smaller = grover_exists_sim(
                &sphere_values,
                |&g| Ok(g < fu),
                eps.eps4,
                mode,
                &mut rng,
                oracle.ledger_mut(),
            )?;
            if !smaller {
                accepted = Some((r, sphere));
                break;
            }
        }
        oracle.ledger_mut().pop_phase();

        let Some((r, sphere)) = accepted else {
            trace.push(round);
            let rounds = region.round();
            return finish(
                Algorithm::Grid2dQuantum,
                oracle,
                u,
                Outcome::Fail,
                rounds,
                0,
                Some(trace),
            );
        };
        region.shrink(u.clone(), r);
        round.next_radius = Some(r);
        if let Some(before) = before {
            let after: HashSet<Vertex> = region.vertices().into_iter().collect();
            let b_before = boundary(&shape, &before)?;
            let b_after = boundary(&shape, &after)?;
            let sphere: HashSet<Vertex> = sphere.into_iter().collect();
            round.boundary_step = Some(
                b_after
                    .iter()
                    .all(|s| b_before.contains(s) || sphere.contains(s)),
            );
            sphere_union.extend(sphere);
            round.boundary_union = Some(b_after.is_subset(&sphere_union));
        }
        trace.push(round);
        anchor = Some((u, fu));
    }

    let start = match anchor {
        Some((u, _)) => u,
        None => shape.origin(),
    };
    oracle.ledger_mut().push_phase("descent");
    let (v, _, steps) = Descent::new().run(&mut oracle, &start)?;
    oracle.ledger_mut().pop_phase();
    let rounds = region.round();
    finish(
        Algorithm::Grid2dQuantum,
        oracle,
        v,
        Outcome::Success,
        rounds,
        steps,
        Some(trace),
    )
}
