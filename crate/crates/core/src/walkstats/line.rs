//! The sticky short walk on `1..=n` and its round-robin product over several
//! dimensions.
//!
//! All probabilities have denominator `2^t`, so tables store the integer
//! counts `n_ij^(t)` (the number of move strings taking `i` to `j`) and divide
//! on demand.

use num::bigint::BigUint;
use num::{One, Zero};

use super::RationalProb;
use crate::{Error, Result};

/// Largest `t` accepted by [`line_walk_bruteforce`] (`2^t` strings).
pub const LINE_BRUTEFORCE_MAX_T: u32 = 24;

/// Largest number of stored counts in a [`LineWalkTable`].
const TABLE_BUDGET: u64 = 20_000_000;

fn left(q: usize) -> usize {
    q.saturating_sub(1)
}

fn right(n: usize, q: usize) -> usize {
    (q + 1).min(n - 1)
}

/// Streams the count matrices `n_ij^(t)` for `t = 0, 1, 2, ...` without
/// keeping old rows. Indices are 0-based internally.
#[derive(Clone, Debug)]
pub struct LineWalkStepper {
    n: usize,
    t: u32,
    counts: Vec<BigUint>,
}

impl LineWalkStepper {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("line walk needs n >= 2, got {n}")));
        }
        let mut counts = vec![BigUint::zero(); n * n];
        for i in 0..n {
            counts[i * n + i] = BigUint::one();
        }
        Ok(LineWalkStepper { n, t: 0, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `n_ij^(t)` for 1-based `i, j`.
    pub fn count(&self, i: usize, j: usize) -> &BigUint {
        &self.counts[(i - 1) * self.n + (j - 1)]
    }

    pub fn prob(&self, i: usize, j: usize) -> RationalProb {
        RationalProb::from_counts(self.count(i, j).clone(), BigUint::one() << self.t)
    }

    /// `max_ij n_ij^(t)`.
    pub fn max_count(&self) -> &BigUint {
        self.counts.iter().max().expect("n >= 2")
    }

    pub fn step(&mut self) {
        let n = self.n;
        let mut next = vec![BigUint::zero(); n * n];
        for i in 0..n {
            for q in 0..n {
                let c = &self.counts[i * n + q];
                if c.is_zero() {
                    continue;
                }
                next[i * n + left(q)] += c;
                next[i * n + right(n, q)] += c;
            }
        }
        self.counts = next;
        self.t += 1;
    }
}

/// Exact `p_ij^(t)` for `0 <= t <= t_max` on an `n`-point line.
#[derive(Clone, Debug)]
pub struct LineWalkTable {
    n: usize,
    t_max: u32,
    rows: Vec<Vec<BigUint>>,
}

impl LineWalkTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn count(&self, t: u32, i: usize, j: usize) -> &BigUint {
        &self.rows[t as usize][(i - 1) * self.n + (j - 1)]
    }

    /// `p_ij^(t)` for 1-based `i, j`.
    pub fn prob(&self, t: u32, i: usize, j: usize) -> RationalProb {
        RationalProb::from_counts(self.count(t, i, j).clone(), BigUint::one() << t)
    }

    /// `Σ_j p_ij^(t)` as an exact fraction `(numerator, 2^t)`.
    pub fn row_sum(&self, t: u32, i: usize) -> RationalProb {
        let total: BigUint = (1..=self.n).map(|j| self.count(t, i, j)).sum();
        RationalProb::from_counts(total, BigUint::one() << t)
    }
}

/// Dynamic-programming table of the sticky short walk.
pub fn line_walk_table(n: usize, t_max: u32) -> Result<LineWalkTable> {
    let cells = (u64::from(t_max) + 1).saturating_mul((n * n) as u64);
    if cells > TABLE_BUDGET {
        return Err(Error::budget("line walk table cells", cells, TABLE_BUDGET));
    }
    let mut stepper = LineWalkStepper::new(n)?;
    let mut rows = Vec::with_capacity(t_max as usize + 1);
    rows.push(stepper.counts.clone());
    for _ in 0..t_max {
        stepper.step();
        rows.push(stepper.counts.clone());
    }
    Ok(LineWalkTable { n, t_max, rows })
}

/// Count vector `n_ij^(t)` over `j` for a single start `i` (1-based), by DP.
pub fn line_walk_row(n: usize, t: u64, i: usize) -> Result<Vec<BigUint>> {
    if n < 2 {
        return Err(Error::param(format!("line walk needs n >= 2, got {n}")));
    }
    if i < 1 || i > n {
        return Err(Error::param(format!("start {i} outside 1..={n}")));
    }
    let mut row = vec![BigUint::zero(); n];
    row[i - 1] = BigUint::one();
    for _ in 0..t {
        let mut next = vec![BigUint::zero(); n];
        for (q, c) in row.iter().enumerate() {
            if !c.is_zero() {
                next[left(q)] += c;
                next[right(n, q)] += c;
            }
        }
        row = next;
    }
    Ok(row)
}

/// Histogram over end points `j` of all `2^t` move strings from `i` (1-based).
/// Bit `s` of the string is the move at step `s + 1`: 0 left, 1 right.
pub fn line_walk_histogram(n: usize, t: u32, i: usize) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::param(format!("line walk needs n >= 2, got {n}")));
    }
    if i < 1 || i > n {
        return Err(Error::param(format!("start {i} outside 1..={n}")));
    }
    if t > LINE_BRUTEFORCE_MAX_T {
        return Err(Error::budget(
            "line walk strings",
            1u128 << t,
            1u128 << LINE_BRUTEFORCE_MAX_T,
        ));
    }
    let mut hist = vec![0u64; n];
    for x in 0u64..(1u64 << t) {
        let mut pos = i;
        for s in 0..t {
            pos = if (x >> s) & 1 == 0 {
                pos.saturating_sub(1).max(1)
            } else {
                (pos + 1).min(n)
            };
        }
        hist[pos - 1] += 1;
    }
    Ok(hist)
}

/// `p_ij^(t)` by enumerating every move string: `n_ij^(t) / 2^t`.
pub fn line_walk_bruteforce(n: usize, t: u32, i: usize, j: usize) -> Result<RationalProb> {
    if j < 1 || j > n {
        return Err(Error::param(format!("end {j} outside 1..={n}")));
    }
    let hist = line_walk_histogram(n, t, i)?;
    Ok(RationalProb::from_counts(hist[j - 1], 1u64 << t))
}

/// Steps received by each dimension when step `s` (1-based) of a `t`-step
/// walk acts on dimension `(l + s - 1) mod m`.
///
/// Dimension `j` first moves at step `((j - l) mod m) + 1`, so it receives
/// `ceil((t - ((j - l) mod m)) / m)` steps, or none if that is negative.
/// For example `m = 3, l = 1, t = 5` touches dimensions `1,2,0,1,2`, giving
/// counts `[1, 2, 2]`.
pub fn composite_step_counts(m: usize, t: u64, l: usize) -> Vec<u64> {
    (0..m)
        .map(|j| {
            let offset = ((j + m - l % m) % m) as u64;
            if t <= offset {
                0
            } else {
                (t - offset).div_ceil(m as u64)
            }
        })
        .collect()
}

/// `Pr[z1 ->_t^l z2]`: the walk performs one short-walk step in dimension
/// `(l + s - 1) mod m` at step `s`, starting at `z1` on `[n]^m`, and must stop
/// at `z2` after exactly `t` steps. The dimensions evolve independently under
/// the fixed schedule, so the probability is a product of line-walk terms.
pub fn composite_walk_prob(
    m: usize,
    n: usize,
    t: u64,
    l: usize,
    z1: &[u32],
    z2: &[u32],
) -> Result<RationalProb> {
    if m == 0 {
        return Err(Error::param("walk needs at least one dimension"));
    }
    if l >= m {
        return Err(Error::param(format!("start dimension {l} outside 0..{m}")));
    }
    if z1.len() != m || z2.len() != m {
        return Err(Error::param(format!("points must have {m} coordinates")));
    }
    let valid = |z: &[u32]| z.iter().all(|&c| c >= 1 && c as usize <= n);
    if !valid(z1) || !valid(z2) {
        return Err(Error::param(format!("coordinates must lie in 1..={n}")));
    }
    let counts = composite_step_counts(m, t, l);
    let mut numer = BigUint::one();
    for (dim, &steps) in counts.iter().enumerate() {
        let row = line_walk_row(n, steps, z1[dim] as usize)?;
        numer *= &row[z2[dim] as usize - 1];
        if numer.is_zero() {
            break;
        }
    }
    let denom = BigUint::one() << t;
    Ok(RationalProb::from_counts(numer, denom))
}
