//! Exact products of rationals and rational powers of primes.
//!
//! The quantum weight multipliers are values such as `m^{-3/2}` or
//! `(s-1)^{m/4}`. A [`Radical`] stores `c · Π p^{e_p}` with a rational `c` and
//! exponents normalised into `(0, 1)`, so equal values have equal
//! representations. A [`RadicalSum`] groups monomials by their radical part.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::integer::Integer;
use num::rational::Ratio;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

type Exponent = Ratio<i64>;

/// Sorted primes with fractional exponents in `(0, 1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadicalKey(Vec<(u64, Exponent)>);

impl RadicalKey {
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(u64, Exponent)] {
        &self.0
    }

    fn to_f64(&self) -> f64 {
        self.0
            .iter()
            .map(|&(p, e)| (p as f64).powf(*e.numer() as f64 / *e.denom() as f64))
            .product()
    }
}

impl fmt::Display for RadicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{p}^({e})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    coeff: BigRational,
    key: RadicalKey,
}

fn factorize(mut n: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn rational_pow(base: u64, exp: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(base));
    num::pow::Pow::pow(b, exp as i32)
}

impl Radical {
    pub fn rational(coeff: BigRational) -> Self {
        Radical {
            coeff,
            key: RadicalKey::default(),
        }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    /// `base^exp` for an integer `base >= 1`.
    pub fn power(base: u64, exp: Exponent) -> Self {
        assert!(base >= 1, "radical base must be positive");
        let factors = factorize(base).into_iter().map(|(p, k)| (p, exp * k));
        Self::normalise(BigRational::one(), factors)
    }

    fn normalise(
        mut coeff: BigRational,
        factors: impl IntoIterator<Item = (u64, Exponent)>,
    ) -> Self {
        let mut merged: BTreeMap<u64, Exponent> = BTreeMap::new();
        for (p, e) in factors {
            *merged.entry(p).or_insert_with(Exponent::zero) += e;
        }
        let mut key = Vec::new();
        for (p, e) in merged {
            let whole = e.floor();
            let frac = e - whole;
            if !whole.is_zero() {
                coeff *= rational_pow(p, whole.to_integer());
            }
            if !frac.is_zero() {
                key.push((p, frac));
            }
        }
        Radical {
            coeff,
            key: RadicalKey(key),
        }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn key(&self) -> &RadicalKey {
        &self.key
    }

    pub fn is_rational(&self) -> bool {
        self.key.is_one()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Radical {
            coeff: &self.coeff * q,
            key: self.key.clone(),
        }
    }

    pub fn mul(&self, other: &Radical) -> Self {
        let factors = self.key.0.iter().chain(&other.key.0).copied();
        Self::normalise(&self.coeff * &other.coeff, factors)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.coeff.is_zero(), "reciprocal of zero");
        Self::normalise(self.coeff.recip(), self.key.0.iter().map(|&(p, e)| (p, -e)))
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * self.key.to_f64()
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if self.key.is_one() {
            return self.coeff.cmp(q);
        }
        // The radical part is positive, so signs decide unless both sides
        // share a sign; then compare D-th powers with D clearing all exponents.
        let (s, t) = (self.coeff.signum(), q.signum());
        if s != t {
            return s.cmp(&t);
        }
        if s.is_zero() {
            return Ordering::Equal;
        }
        let d = self
            .key
            .0
            .iter()
            .fold(1i64, |acc, (_, e)| acc.lcm(e.denom()));
        let mut lhs = num::pow::Pow::pow(self.coeff.abs(), d as u32);
        for &(p, e) in &self.key.0 {
            lhs *= rational_pow(p, (e * d).to_integer());
        }
        let rhs = num::pow::Pow::pow(q.abs(), d as u32);
        if s.is_positive() {
            lhs.cmp(&rhs)
        } else {
            rhs.cmp(&lhs)
        }
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}·{}", self.coeff, self.key)
        }
    }
}

/// A sum of radical monomials with like terms merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadicalSum {
    terms: BTreeMap<RadicalKey, BigRational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut s = Self::zero();
        s.add_term(&Radical::rational(q));
        s
    }

    pub fn add_term(&mut self, r: &Radical) {
        if r.coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(r.key.clone())
            .or_insert_with(BigRational::zero);
        *slot += &r.coeff;
        if slot.is_zero() {
            self.terms.remove(&r.key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Radical> + '_ {
        self.terms.iter().map(|(k, c)| Radical {
            coeff: c.clone(),
            key: k.clone(),
        })
    }

    /// The sum as a plain rational, if it has no radical terms.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&RadicalKey::default()).cloned(),
            _ => None,
        }
    }

    pub fn mul(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for a in self.terms() {
            for b in other.terms() {
                out.add_term(&a.mul(&b));
            }
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.terms().map(|t| t.to_f64()).sum()
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
