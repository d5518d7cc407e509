//! Block decomposition of `[n]^d`.
//!
//! The first `d - 1` axes of `[n']^d`, `n' = αβ`, are cut into `β^(d-1)`
//! cubes of side `α`; the last axis is the clock. A block is the cube times
//! the clock interval `(α, n' - α]`, leaving a margin of `α` at both ends of
//! the clock axis for the connector segments.
//!
//! The particle sweeps the clock interval of its block once (upwards in even
//! blocks, downwards in odd ones) while taking one sticky walk step per clock
//! value, confined to the block. At the end of a sweep it moves to the next
//! block along the snake path of `[β]^(d-1)` through a U-shaped segment in
//! the margin: out along the clock axis, across along the changing axis,
//! and back. The depth of the U is chosen so the walk coordinate lands on its
//! mirror image in the new block; nested U-shapes never intersect.
//!
//! Mirroring means the block walk is equivalent to a plain walk-with-clock
//! instance on `[α]^(d-1) × [L]`: axis `j` of the threaded walk reads the
//! within-block coordinate directly in odd-numbered blocks and mirrored in
//! even-numbered ones. [`BlockLayout::thread`] and [`BlockLayout::embed`]
//! convert between the two pictures.

use super::sticky_step;
use crate::grid::ham_index;
use crate::{Error, GridShape, Result, Vertex};

/// `⌊x⌋` with a small tolerance so that `⌊9^0.5⌋ = 3` despite rounding.
fn floor_tol(x: f64) -> u64 {
    (x + 1e-9).floor().max(0.0) as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockLayout {
    d: usize,
    alpha: u32,
    beta: u32,
    blocks: GridShape,
}

pub(crate) struct BlockRun {
    pub points: Vec<Vertex>,
    pub iteration_start: Vec<u64>,
}

impl BlockLayout {
    /// `α = ⌊n^r⌋`, `β = ⌊n^(1-r)⌋`. Needs `α >= 2` and `β >= 3` so every
    /// sweep has at least one clock value.
    pub fn new(n: u32, d: usize, r: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::param(format!(
                "block instances need d >= 2, got {d}"
            )));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::param(format!(
                "block exponent r = {r} outside [0, 1]"
            )));
        }
        let nf = f64::from(n);
        let alpha = floor_tol(nf.powf(r));
        let beta = floor_tol(nf.powf(1.0 - r));
        if alpha < 2 {
            return Err(Error::param(format!(
                "degenerate blocks: alpha = {alpha} < 2 (n = {n}, r = {r})"
            )));
        }
        if beta < 3 {
            return Err(Error::param(format!(
                "degenerate blocks: beta = {beta} < 3 (n = {n}, r = {r})"
            )));
        }
        let (alpha, beta) = (alpha as u32, beta as u32);
        if u64::from(alpha) * u64::from(beta) > u64::from(n) {
            return Err(Error::param(format!(
                "alpha * beta = {} exceeds n = {n}",
                alpha * beta
            )));
        }
        let blocks = GridShape::new(beta, d - 1)?;
        Ok(BlockLayout {
            d,
            alpha,
            beta,
            blocks,
        })
    }

    pub fn dims(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// `n' = αβ`.
    pub fn n_prime(&self) -> u32 {
        self.alpha * self.beta
    }

    /// Clock values per block, `n' - 2α`.
    pub fn sweep_len(&self) -> u64 {
        u64::from(self.n_prime() - 2 * self.alpha)
    }

    pub fn block_count(&self) -> u64 {
        self.blocks.vertex_count()
    }

    /// `L = (n' - 2α) β^(d-1)`, the length of the threaded clock.
    pub fn threaded_len(&self) -> u64 {
        self.sweep_len() * self.block_count()
    }

    /// Number of walk steps (one per threaded clock value).
    pub fn iterations(&self) -> u64 {
        self.threaded_len()
    }

    /// Upper bound on the number of trajectory points.
    pub fn trajectory_bound(&self) -> u64 {
        1 + 2 * self.threaded_len() + (self.block_count() - 1) * 4 * u64::from(self.alpha)
    }

    /// The threaded walk space `[α]^(d-1)`.
    pub fn walk_shape(&self) -> GridShape {
        GridShape::new(self.alpha, self.d - 1).expect("alpha >= 2")
    }

    /// Block indices `(k_0..k_{d-2})` visited at sweep `sweep` (0-based).
    pub fn block_at(&self, sweep: u64) -> Vec<u32> {
        self.blocks.unrank_unchecked(sweep + 1).into_coords()
    }

    fn clock_at(&self, tau: u64) -> u32 {
        let sweep = tau / self.sweep_len();
        let offset = (tau % self.sweep_len()) as u32;
        if sweep.is_multiple_of(2) {
            self.alpha + 1 + offset
        } else {
            self.n_prime() - self.alpha - offset
        }
    }

    /// Grid point of the threaded state `(tau, z)`, with `z ∈ [α]^(d-1)`.
    pub fn embed(&self, tau: u64, z: &[u32]) -> Result<Vertex> {
        if tau >= self.threaded_len() {
            return Err(Error::param(format!(
                "threaded clock {tau} outside 0..{}",
                self.threaded_len()
            )));
        }
        if z.len() != self.d - 1 || z.iter().any(|&c| c < 1 || c > self.alpha) {
            return Err(Error::param(format!(
                "threaded walk state must lie in [{}]^{}",
                self.alpha,
                self.d - 1
            )));
        }
        let k = self.block_at(tau / self.sweep_len());
        let mut coords: Vec<u32> = z
            .iter()
            .zip(&k)
            .map(|(&zj, &kj)| {
                let y = if kj % 2 == 1 { zj } else { self.alpha + 1 - zj };
                (kj - 1) * self.alpha + y
            })
            .collect();
        coords.push(self.clock_at(tau));
        Ok(Vertex::new(coords))
    }

    /// Threaded state `(tau, z)` of a point inside some block, or `None` for
    /// points in the clock margins or outside `[n']^d`.
    pub fn thread(&self, v: &Vertex) -> Option<(u64, Vec<u32>)> {
        let c = v.coords();
        if c.len() != self.d {
            return None;
        }
        let clock = c[self.d - 1];
        if clock <= self.alpha || clock > self.n_prime() - self.alpha {
            return None;
        }
        if c[..self.d - 1].iter().any(|&x| x < 1 || x > self.n_prime()) {
            return None;
        }
        let k: Vec<u32> = c[..self.d - 1]
            .iter()
            .map(|&x| (x - 1) / self.alpha + 1)
            .collect();
        let sweep = ham_index(&self.blocks, &Vertex::new(k.clone())).ok()? - 1;
        let offset = if sweep % 2 == 0 {
            clock - self.alpha - 1
        } else {
            self.n_prime() - self.alpha - clock
        };
        let z = c[..self.d - 1]
            .iter()
            .zip(&k)
            .map(|(&x, &kj)| {
                let y = x - (kj - 1) * self.alpha;
                if kj % 2 == 1 {
                    y
                } else {
                    self.alpha + 1 - y
                }
            })
            .collect();
        Some((sweep * self.sweep_len() + u64::from(offset), z))
    }

    /// Runs the particle process. `choose(t, current, minus, plus)` picks the
    /// walk move of iteration `t`: `true` for the `+1` candidate. Repeated
    /// positions (sticky stays) are recorded once.
    pub(crate) fn run(
        &self,
        mut choose: impl FnMut(u64, &Vertex, &Vertex, &Vertex) -> Result<bool>,
    ) -> Result<BlockRun> {
        let d = self.d;
        let clock_axis = d - 1;
        let alpha = self.alpha;
        let sweep_len = self.sweep_len();
        let total = self.iterations();

        let mut x = vec![alpha / 2; d];
        x[clock_axis] = alpha + 1;
        let mut k = vec![1u32; d - 1];
        let mut points = vec![Vertex::new(x.clone())];
        let mut iteration_start = Vec::with_capacity(total as usize);

        fn push(points: &mut Vec<Vertex>, x: &[u32]) {
            if points.last().map(|p| p.coords()) != Some(x) {
                points.push(Vertex::new(x.to_vec()));
            }
        }

        for t in 0..total {
            let sweep = t / sweep_len;
            let axis = (t % (d as u64 - 1)) as usize;
            iteration_start.push(points.len() as u64 - 1);

            let lo = (k[axis] - 1) * alpha + 1;
            let hi = k[axis] * alpha;
            let mut minus = x.clone();
            minus[axis] = sticky_step(x[axis], -1, lo, hi);
            let mut plus = x.clone();
            plus[axis] = sticky_step(x[axis], 1, lo, hi);
            let current = Vertex::new(x.clone());
            let take_plus = choose(
                t,
                &current,
                &Vertex::new(minus.clone()),
                &Vertex::new(plus.clone()),
            )?;
            x = if take_plus { plus } else { minus };
            push(&mut points, &x);

            let up = sweep.is_multiple_of(2);
            let tick = |x: &mut Vec<u32>, forward: bool| {
                if forward == up {
                    x[clock_axis] += 1;
                } else {
                    x[clock_axis] -= 1;
                }
            };
            if (t + 1) % sweep_len != 0 {
                tick(&mut x, true);
                push(&mut points, &x);
            } else if sweep + 1 < self.block_count() {
                let next = self.block_at(sweep + 1);
                let j = (0..d - 1)
                    .find(|&j| next[j] != k[j])
                    .expect("snake neighbours differ");
                let rising = next[j] > k[j];
                let y = x[j] - (k[j] - 1) * alpha;
                // Counts are fixed once, from the coordinate at segment start.
                let depth = if rising { alpha + 1 - y } else { y };
                for _ in 0..depth {
                    tick(&mut x, true);
                    push(&mut points, &x);
                }
                for _ in 0..2 * depth - 1 {
                    if rising {
                        x[j] += 1;
                    } else {
                        x[j] -= 1;
                    }
                    push(&mut points, &x);
                }
                for _ in 0..depth {
                    tick(&mut x, false);
                    push(&mut points, &x);
                }
                k[j] = next[j];
            }
        }
        Ok(BlockRun {
            points,
            iteration_start,
        })
    }
}
