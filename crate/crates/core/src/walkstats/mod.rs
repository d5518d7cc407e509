//! Exact-rational combinatorics for the hard-instance analysis.
//!
//! Two families of probabilities live here, each with a brute-force oracle:
//!
//! - balls-in-bins parity probabilities `p^(t)[b_1..b_m]`: throw `t` balls
//!   uniformly into `m` bins and ask for the parity of every bin;
//! - the sticky "short walk" on the line `1..=n`, which moves to
//!   `max(1, i-1)` or `min(n, i+1)` with equal probability.
//!
//! Everything is computed with arbitrary-precision rationals; floating point
//! only appears when values are printed.

mod balls;
mod line;

use std::fmt;

use num::bigint::BigUint;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::{Error, Result};

pub use balls::{
    balls_bruteforce, balls_closed_form, balls_odd_reduction_check, balls_parity_counts,
    balls_recursion, BALLS_ENUMERATION_BUDGET,
};
pub use line::{
    composite_step_counts, composite_walk_prob, line_walk_bruteforce, line_walk_histogram,
    line_walk_row, line_walk_table, LineWalkStepper, LineWalkTable, LINE_BRUTEFORCE_MAX_T,
};

/// An exact probability in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalProb(BigRational);

impl RationalProb {
    pub fn new(value: BigRational) -> Result<Self> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(Error::param(format!("{value} is not a probability")));
        }
        Ok(RationalProb(value))
    }

    /// `count / total`; `total` must be positive and at least `count`.
    pub fn from_counts(count: impl Into<BigUint>, total: impl Into<BigUint>) -> Self {
        let (count, total) = (count.into(), total.into());
        assert!(
            !total.is_zero() && count <= total,
            "bad count {count}/{total}"
        );
        RationalProb(BigRational::new(BigInt::from(count), BigInt::from(total)))
    }

    pub fn zero() -> Self {
        RationalProb(BigRational::zero())
    }

    pub fn one() -> Self {
        RationalProb(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RationalProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Per-bin parities `b_1..b_m`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityVector(Vec<u8>);

impl ParityVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::param("parity vector needs at least one bin"));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::param("parity entries must be 0 or 1"));
        }
        Ok(ParityVector(bits))
    }

    pub fn zeros(m: usize) -> Self {
        ParityVector(vec![0; m.max(1)])
    }

    /// `e_i`: only bin `i` (0-based) is odd.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut bits = vec![0; m.max(1)];
        bits[i] = 1;
        ParityVector(bits)
    }

    /// Bit `i` of the mask is the parity of bin `i`.
    pub fn from_mask(m: usize, mask: u32) -> Self {
        ParityVector((0..m).map(|i| ((mask >> i) & 1) as u8).collect())
    }

    pub fn mask(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u32::from(b) << i))
    }

    pub fn bins(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for ParityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}
