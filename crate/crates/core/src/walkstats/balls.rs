//! Balls-in-bins parity probabilities.
//!
//! `p^(t)[b]` is the probability that after throwing `t` balls uniformly and
//! independently into `m` bins, bin `i` holds a number of balls with parity
//! `b_i` for every `i`. The conditional variant `p_{i*}^(t)[b]` additionally
//! requires the first ball to avoid bin `i*`.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Zero};

use super::{ParityVector, RationalProb};
use crate::{Error, Result};

/// Largest `m^t` the brute-force enumerator accepts.
pub const BALLS_ENUMERATION_BUDGET: u64 = 1 << 27;

/// Histogram of parity masks over every placement sequence `(i_1..i_t)`.
///
/// Entry `mask` counts the sequences that generate the parity vector whose
/// bit `i` is the parity of bin `i`. With `excluded_first_bin = Some(i)`
/// (0-based), sequences whose first ball lands in bin `i` are skipped.
/// Placements are enumerated as a base-`m` odometer; each increment toggles
/// the parities of the two bins involved, so the cost is `O(m^t)` overall.
pub fn balls_parity_counts(
    m: usize,
    t: u32,
    excluded_first_bin: Option<usize>,
) -> Result<Vec<u64>> {
    if m == 0 || m > 20 {
        return Err(Error::param(format!("bin count {m} outside 1..=20")));
    }
    if let Some(i) = excluded_first_bin {
        if i >= m {
            return Err(Error::param(format!("excluded bin {i} outside 0..{m}")));
        }
        if m == 1 && t > 0 {
            return Err(Error::param("cannot exclude the only bin"));
        }
    }
    let total = (m as u64)
        .checked_pow(t)
        .filter(|&n| n <= BALLS_ENUMERATION_BUDGET)
        .ok_or_else(|| {
            Error::budget(
                "balls-in-bins enumeration",
                (m as u128).saturating_pow(t),
                BALLS_ENUMERATION_BUDGET,
            )
        })?;

    let mut counts = vec![0u64; 1 << m];
    let t = t as usize;
    if t == 0 {
        counts[0] = 1;
        return Ok(counts);
    }
    // digits[0] is the first ball; the last digit spins fastest.
    let mut digits = vec![0usize; t];
    let mut mask: u32 = if t % 2 == 1 { 1 } else { 0 };
    for _ in 0..total {
        if excluded_first_bin != Some(digits[0]) {
            counts[mask as usize] += 1;
        }
        let mut pos = t;
        while pos > 0 {
            pos -= 1;
            let d = digits[pos];
            if d + 1 < m {
                digits[pos] = d + 1;
                mask ^= (1 << d) | (1 << (d + 1));
                break;
            }
            digits[pos] = 0;
            mask ^= (1 << d) | 1;
        }
    }
    Ok(counts)
}

/// `p^(t)[b]` (or `p_{i*}^(t)[b]`) by exhaustive enumeration of `m^t` placements.
///
/// The conditional denominator is `(m-1) m^(t-1)`. With `t = 0` there is no
/// first ball, so the condition is vacuous.
pub fn balls_bruteforce(
    m: usize,
    t: u32,
    b: &ParityVector,
    excluded_first_bin: Option<usize>,
) -> Result<RationalProb> {
    if b.bins() != m {
        return Err(Error::param(format!(
            "parity vector has {} bins, expected {m}",
            b.bins()
        )));
    }
    let excluded = if t == 0 { None } else { excluded_first_bin };
    let counts = balls_parity_counts(m, t, excluded)?;
    let total: u64 = counts.iter().sum();
    Ok(RationalProb::from_counts(counts[b.mask() as usize], total))
}

/// `p^(t)[0..0] = 2^-m Σ_i C(m,i) (1 - 2i/m)^t` for even `t`.
pub fn balls_closed_form(m: usize, t: u32) -> Result<RationalProb> {
    if t % 2 == 1 {
        return Err(Error::param(format!("closed form needs even t, got {t}")));
    }
    if m == 0 {
        return Err(Error::param("need at least one bin"));
    }
    let mm = BigInt::from(m);
    let mut sum = BigRational::zero();
    let mut binom = BigInt::one();
    for i in 0..=m {
        let base = BigRational::new(&mm - BigInt::from(2 * i), mm.clone());
        sum += BigRational::from_integer(binom.clone()) * num::pow(base, t as usize);
        binom = binom * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    let value = sum / BigRational::from_integer(BigInt::one() << m);
    RationalProb::new(value)
}

/// `p_m^(t)[0..0]` via `p_m^(t) = p_m^(t-2) - ((m-1)/m) ((m-2)/m)^(t-2) p_{m-2}^(t-2)`
/// with base case `p_m^(2) = 1/m`.
///
/// At `m = 2` the factor `(m-2)/m` vanishes and the undefined `p_0` term is
/// dropped. `t = 0` gives 1.
pub fn balls_recursion(m: usize, t: u32) -> Result<RationalProb> {
    if t % 2 == 1 {
        return Err(Error::param(format!("recursion needs even t, got {t}")));
    }
    if m == 0 {
        return Err(Error::param("need at least one bin"));
    }
    let mut memo = HashMap::new();
    RationalProb::new(recursion(m, t, &mut memo))
}

fn recursion(m: usize, t: u32, memo: &mut HashMap<(usize, u32), BigRational>) -> BigRational {
    if t == 0 {
        return BigRational::one();
    }
    if t == 2 {
        return BigRational::new(BigInt::one(), BigInt::from(m));
    }
    if let Some(v) = memo.get(&(m, t)) {
        return v.clone();
    }
    let mm = BigInt::from(m);
    let mut value = recursion(m, t - 2, memo);
    if m > 2 {
        let coeff = BigRational::new(BigInt::from(m - 1), mm.clone())
            * num::pow(BigRational::new(BigInt::from(m - 2), mm), (t - 2) as usize);
        value -= coeff * recursion(m - 2, t - 2, memo);
    }
    memo.insert((m, t), value.clone());
    value
}

/// For odd `t`, checks `p^(t)[1,0..0] = p^(t+1)[0..0]` with both sides brute-forced.
///
/// This is the identity that reduces odd ball counts to the even case: the
/// first ball of `t + 1` lands somewhere, and by symmetry every unit parity
/// vector `e_i` has the same probability.
pub fn balls_odd_reduction_check(m: usize, t: u32) -> Result<bool> {
    if t.is_multiple_of(2) {
        return Err(Error::param(format!("odd reduction needs odd t, got {t}")));
    }
    let odd_side = balls_bruteforce(m, t, &ParityVector::unit(m, 0), None)?;
    let even_side = balls_bruteforce(m, t + 1, &ParityVector::zeros(m), None)?;
    Ok(odd_side == even_side)
}

#[cfg(test)]
mod tests {
    use num::{BigInt, BigRational};

    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn all_vectors(m: usize) -> impl Iterator<Item = ParityVector> {
        (0..1u32 << m).map(move |mask| ParityVector::from_mask(m, mask))
    }

    /// Independent oracle: literal recursion over every placement sequence.
    fn naive_count(m: usize, t: u32, first_not: Option<usize>, b: &ParityVector) -> (u64, u64) {
        fn go(
            m: usize,
            left: u32,
            counts: &mut Vec<u32>,
            first: bool,
            first_not: Option<usize>,
            b: &[u8],
            hit: &mut u64,
            all: &mut u64,
        ) {
            if left == 0 {
                *all += 1;
                if counts.iter().zip(b).all(|(&c, &p)| c % 2 == u32::from(p)) {
                    *hit += 1;
                }
                return;
            }
            for bin in 0..m {
                if first && first_not == Some(bin) {
                    continue;
                }
                counts[bin] += 1;
                go(m, left - 1, counts, false, first_not, b, hit, all);
                counts[bin] -= 1;
            }
        }
        let (mut hit, mut all) = (0, 0);
        go(
            m,
            t,
            &mut vec![0; m],
            true,
            first_not,
            b.bits(),
            &mut hit,
            &mut all,
        );
        (hit, all)
    }

    #[test]
    fn odometer_matches_naive_enumeration() {
        for m in 1..=4 {
            for t in 0..=6 {
                for excl in std::iter::once(None).chain((0..m).map(Some)) {
                    if m == 1 && excl.is_some() {
                        continue;
                    }
                    for b in all_vectors(m) {
                        let (hit, all) = naive_count(m, t, if t == 0 { None } else { excl }, &b);
                        let p = balls_bruteforce(m, t, &b, excl).unwrap();
                        assert_eq!(
                            p,
                            RationalProb::from_counts(hit, all),
                            "m={m} t={t} b={b} excl={excl:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bruteforce_examples() {
        let p = balls_bruteforce(2, 2, &ParityVector::zeros(2), None).unwrap();
        assert_eq!(p.value(), &q(1, 2));
        for m in 1..=5 {
            assert_eq!(
                balls_bruteforce(m, 0, &ParityVector::zeros(m), None).unwrap(),
                RationalProb::one()
            );
        }
        // Σ b and t of opposite parity.
        let b = ParityVector::new(vec![1, 0, 0]).unwrap();
        assert_eq!(
            balls_bruteforce(3, 4, &b, None).unwrap(),
            RationalProb::zero()
        );
        assert!(balls_bruteforce(9, 9, &ParityVector::zeros(9), None).is_err());
        assert!(balls_bruteforce(3, 2, &ParityVector::zeros(2), None).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(balls_closed_form(3, 2).unwrap().value(), &q(1, 3));
        assert_eq!(balls_closed_form(2, 4).unwrap().value(), &q(1, 2));
        assert_eq!(balls_closed_form(4, 4).unwrap().value(), &q(5, 32));
        assert!(balls_closed_form(4, 3).is_err());
        // 8 of the 16 two-bin sequences of length 4 leave both bins even.
        assert_eq!(
            balls_bruteforce(2, 4, &ParityVector::zeros(2), None)
                .unwrap()
                .value(),
            &q(8, 16)
        );
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(balls_recursion(4, 4).unwrap().value(), &q(5, 32));
        assert_eq!(balls_recursion(2, 4).unwrap().value(), &q(1, 2));
        assert_eq!(balls_recursion(5, 2).unwrap().value(), &q(1, 5));
        assert!(balls_recursion(5, 5).is_err());
        for m in 1..=12 {
            assert_eq!(balls_recursion(m, 2).unwrap().value(), &q(1, m as i64));
        }
    }

    #[test]
    fn odd_reduction_examples() {
        assert!(balls_odd_reduction_check(2, 3).unwrap());
        assert!(balls_odd_reduction_check(3, 5).unwrap());
        assert!(balls_odd_reduction_check(2, 2).is_err());
    }

    #[test]
    fn three_routes_agree_on_small_cases() {
        for m in 2..=4 {
            for t in (2..=8).step_by(2) {
                let brute = balls_bruteforce(m, t, &ParityVector::zeros(m), None).unwrap();
                assert_eq!(brute, balls_closed_form(m, t).unwrap(), "m={m} t={t}");
                assert_eq!(brute, balls_recursion(m, t).unwrap(), "m={m} t={t}");
            }
        }
    }

    #[test]
    fn permutation_invariance_and_two_ones_swap() {
        for m in 2..=4 {
            for t in 0..=7 {
                let counts = balls_parity_counts(m, t, None).unwrap();
                let total: u64 = counts.iter().sum();
                for mask in 0..1u32 << m {
                    // Any permutation of the bits: check all adjacent transpositions.
                    for i in 0..m - 1 {
                        let (bi, bj) = ((mask >> i) & 1, (mask >> (i + 1)) & 1);
                        let swapped = (mask & !(0b11 << i)) | (bj << i) | (bi << (i + 1));
                        assert_eq!(counts[mask as usize], counts[swapped as usize]);
                    }
                    // Two ones replaced by zeros: the gap is exactly
                    // ((m-2)/m)^t p_{m-2}^(t)[rest] (sequences avoiding both bins).
                    if mask & 0b11 == 0b11 {
                        let cleared = mask & !0b11;
                        let hi = counts[cleared as usize];
                        let lo = counts[mask as usize];
                        assert!(lo <= hi);
                        let avoid = if m == 2 {
                            u64::from(t == 0 && cleared == 0)
                        } else {
                            let rest = balls_parity_counts(m - 2, t, None).unwrap();
                            rest[(cleared >> 2) as usize]
                        };
                        assert_eq!(hi - lo, avoid, "m={m} t={t} mask={mask:b} total={total}");
                    }
                }
            }
        }
    }

    #[test]
    fn conditional_bound_on_small_cases() {
        for m in 2..=3 {
            for t in 1..=6 {
                for b in all_vectors(m) {
                    let p = balls_bruteforce(m, t, &b, None).unwrap();
                    for i in 0..m {
                        let pc = balls_bruteforce(m, t, &b, Some(i)).unwrap();
                        let bound = p.value() * q(m as i64, m as i64 - 1);
                        assert!(pc.value() <= &bound);
                    }
                }
            }
        }
    }
}
