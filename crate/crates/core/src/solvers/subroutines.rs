use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::oracle::QueryLedger;
use crate::{Error, Result};

/// Whether simulated quantum subroutines may err.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubroutineMode {
    /// Always return the correct answer.
    #[default]
    Exact,
    /// Err with the subroutine's nominal failure probability.
    Faithful,
}

impl SubroutineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SubroutineMode::Exact => "exact",
            SubroutineMode::Faithful => "faithful",
        }
    }
}

impl fmt::Display for SubroutineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubroutineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SubroutineMode::Exact),
            "faithful" => Ok(SubroutineMode::Faithful),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

/// `ceil(sqrt(s))`.
pub fn ceil_sqrt(s: u64) -> u64 {
    let r = num::integer::Roots::sqrt(&s);
    if r * r < s {
        r + 1
    } else {
        r
    }
}

/// `ceil(log2(1/eps))`, clamped at 0 for `eps >= 1`.
pub fn ceil_log2_inv(eps: f64) -> u64 {
    let x = (1.0 / eps).log2();
    // Snap values within rounding error of an integer so that eps = 2^-k
    // charges exactly k.
    let snapped = x.round();
    let x = if (x - snapped).abs() < 1e-12 {
        snapped
    } else {
        x
    };
    x.ceil().max(0.0) as u64
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("error rate {eps} outside (0, 1]")))
    }
}

/// Index of the minimum (ties: lowest index), charging
/// `ceil(sqrt(S)) * ceil(log2(1/eps))`. In faithful mode a uniformly random
/// non-minimal index comes back with probability `eps`.
pub fn durr_hoyer_min_sim(
    values: &[i64],
    eps: f64,
    mode: SubroutineMode,
    rng: &mut impl Rng,
    ledger: &mut QueryLedger,
) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::param("minimum search over an empty sequence"));
    }
    check_eps(eps)?;
    ledger.charge_quantum(ceil_sqrt(values.len() as u64) * ceil_log2_inv(eps));
    let min = *values.iter().min().expect("nonempty");
    let best = values.iter().position(|&v| v == min).expect("nonempty");
    if mode == SubroutineMode::Faithful && rng.gen_bool(eps) {
        let wrong: Vec<usize> = (0..values.len()).filter(|&i| values[i] != min).collect();
        if !wrong.is_empty() {
            return Ok(wrong[rng.gen_range(0..wrong.len())]);
        }
    }
    Ok(best)
}

/// Whether some item satisfies `pred`, charging
/// `ceil(sqrt(|W|)) * ceil(log2(1/eps))` (nothing for an empty `W`). In
/// faithful mode the answer flips with probability `eps`.
pub fn grover_exists_sim<T>(
    items: &[T],
    pred: impl Fn(&T) -> Result<bool>,
    eps: f64,
    mode: SubroutineMode,
    rng: &mut impl Rng,
    ledger: &mut QueryLedger,
) -> Result<bool> {
    check_eps(eps)?;
    if items.is_empty() {
        return Ok(false);
    }
    ledger.charge_quantum(ceil_sqrt(items.len() as u64) * ceil_log2_inv(eps));
    let mut found = false;
    for item in items {
        if pred(item)? {
            found = true;
            break;
        }
    }
    if mode == SubroutineMode::Faithful && rng.gen_bool(eps) {
        found = !found;
    }
    Ok(found)
}
