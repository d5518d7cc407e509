use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{wedge, PathFamily, PathKind, Radical, Relation, Wedge};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// `a = b = 1`, so `u = v = w`.
    Randomized,
    QuantumHypercube,
    QuantumGrid,
    /// Tables supplied directly through [`WeightScheme::custom`].
    Custom,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Randomized => "randomized",
            SchemeKind::QuantumHypercube => "quantum-hypercube",
            SchemeKind::QuantumGrid => "quantum-grid",
            SchemeKind::Custom => "custom",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "randomized" => Ok(SchemeKind::Randomized),
            "quantum-hypercube" => Ok(SchemeKind::QuantumHypercube),
            "quantum-grid" => Ok(SchemeKind::QuantumGrid),
            other => Err(Error::param(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Weight tables aligned with a relation: `w[p]` for pair `p`, and
/// `u[p][k]`, `v[p][k]` for its `k`-th differing position.
#[derive(Clone, Debug)]
pub struct WeightScheme {
    kind: SchemeKind,
    w: Vec<BigRational>,
    u: Vec<Vec<Radical>>,
    v: Vec<Vec<Radical>>,
}

impl WeightScheme {
    pub fn custom(
        relation: &Relation,
        w: Vec<BigRational>,
        u: Vec<Vec<Radical>>,
        v: Vec<Vec<Radical>>,
    ) -> Result<Self> {
        let shaped = w.len() == relation.len()
            && u.len() == relation.len()
            && v.len() == relation.len()
            && relation.pairs().iter().enumerate().all(|(p, pair)| {
                u[p].len() == pair.positions.len() && v[p].len() == pair.positions.len()
            });
        if !shaped {
            return Err(Error::InvalidScheme(
                "tables do not match the relation".into(),
            ));
        }
        Ok(WeightScheme {
            kind: SchemeKind::Custom,
            w,
            u,
            v,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn w(&self) -> &[BigRational] {
        &self.w
    }

    pub fn u(&self) -> &[Vec<Radical>] {
        &self.u
    }

    pub fn v(&self) -> &[Vec<Radical>] {
        &self.v
    }

    /// `w > 0`, `u, v > 0` and `u·v >= w²` on every entry.
    pub fn check_validity(&self) -> Result<()> {
        for (p, w) in self.w.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::InvalidScheme(format!(
                    "w is not positive on pair {p}"
                )));
            }
            let w2 = w * w;
            for (k, (u, v)) in self.u[p].iter().zip(&self.v[p]).enumerate() {
                if !u.coeff().is_positive() || !v.coeff().is_positive() {
                    return Err(Error::InvalidScheme(format!(
                        "u or v is not positive on pair {p}, position {k}"
                    )));
                }
                if u.mul(v).cmp_rational(&w2).is_lt() {
                    return Err(Error::InvalidScheme(format!(
                        "u·v < w² on pair {p}, position {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether `u·v = w²` holds exactly on every entry.
    pub fn products_are_exact(&self) -> bool {
        self.w.iter().enumerate().all(|(p, w)| {
            let w2 = w * w;
            self.u[p]
                .iter()
                .zip(&self.v[p])
                .all(|(u, v)| u.mul(v).cmp_rational(&w2).is_eq())
        })
    }
}

/// Counts of every step-sequence prefix in the family.
struct PrefixCounts(HashMap<Vec<u32>, u64>);

impl PrefixCounts {
    fn new(family: &PathFamily) -> Self {
        let mut map = HashMap::new();
        for p in family.paths() {
            for len in 0..=p.steps().len() {
                *map.entry(p.steps()[..len].to_vec()).or_insert(0) += 1;
            }
        }
        PrefixCounts(map)
    }

    /// `|{Z : Z ∧ X = k}|`: shares the first `k` steps but not step `k`.
    fn class(&self, steps: &[u32], k: usize) -> u64 {
        self.0[&steps[..k]] - self.0[&steps[..=k]]
    }
}

/// `|{Z ∈ P : Z ∧ X = k}|`, counted over the family.
pub fn divergence_class_size(family: &PathFamily, x: usize, k: u32) -> u64 {
    let px = family.path(x);
    family
        .paths()
        .iter()
        .filter(|z| wedge(z, px).ok() == Some(Wedge::At(k)))
        .count() as u64
}

/// `(a_{k,j,b}, b_{k,j,b})` for the given scheme and family.
pub fn multipliers(
    kind: SchemeKind,
    family: &PathFamily,
    k: u32,
    j: u32,
    b: u8,
) -> Result<(Radical, Radical)> {
    let s = i64::from(j) - i64::from(k) + i64::from(b);
    if s < 1 {
        return Err(Error::InvalidScheme(format!(
            "position ({j},{b}) precedes divergence {k}"
        )));
    }
    let m = family.m() as i64;
    let a = match (kind, family.kind()) {
        (SchemeKind::Randomized, _) => Radical::one(),
        (SchemeKind::QuantumHypercube, PathKind::Hypercube) => {
            if s <= 10 {
                Radical::power(m as u64, Ratio::new(-(s + 1).div_euclid(2), 2))
            } else if s <= m * m {
                Radical::power(m as u64, Ratio::new(-5, 2))
            } else {
                Radical::power(2, Ratio::new(-m, 2))
            }
        }
        (SchemeKind::QuantumGrid, PathKind::Grid { side }) => {
            let n = i64::from(side);
            if s == 1 {
                Radical::one()
            } else if s <= m * n * n {
                Radical::power((s - 1) as u64, Ratio::new(-m, 4))
            } else {
                Radical::power(side as u64, Ratio::new(-m, 2))
            }
        }
        (kind, fam) => {
            return Err(Error::Unsupported(format!(
                "scheme {kind} on a {fam} family"
            )))
        }
    };
    let b = a.recip();
    Ok((a, b))
}

/// Weight tables for one of the built-in schemes.
pub fn build_scheme(
    kind: SchemeKind,
    family: &PathFamily,
    relation: &Relation,
) -> Result<WeightScheme> {
    if kind == SchemeKind::Custom {
        return Err(Error::Unsupported(
            "custom schemes are built with WeightScheme::custom".into(),
        ));
    }
    if relation.inputs() != family.len() {
        return Err(Error::InvalidScheme(
            "relation was not built over this family".into(),
        ));
    }
    // Reject a kind/family mismatch before touching any pair.
    multipliers(kind, family, 0, 0, 1)?;
    let prefixes = PrefixCounts::new(family);
    let mut w = Vec::with_capacity(relation.len());
    let mut u = Vec::with_capacity(relation.len());
    let mut v = Vec::with_capacity(relation.len());
    for pair in relation.pairs() {
        let (px, py) = (family.path(pair.x), family.path(pair.y));
        let k = match wedge(px, py)? {
            Wedge::At(k) if px.endpoint() != py.endpoint() => k,
            _ => {
                return Err(Error::InvalidScheme(format!(
                    "pair ({}, {}) has equal endpoints",
                    pair.x, pair.y
                )))
            }
        };
        let weight = BigRational::new(
            BigInt::one(),
            BigInt::from(prefixes.class(px.steps(), k as usize)),
        );
        let mut row_u = Vec::with_capacity(pair.positions.len());
        let mut row_v = Vec::with_capacity(pair.positions.len());
        for &i in &pair.positions {
            let (in_x, (j, b)) = match (px.locate(i), py.locate(i)) {
                (Some(jb), None) => (true, jb),
                (None, Some(jb)) => (false, jb),
                _ => {
                    return Err(Error::InvalidScheme(format!(
                        "position {i} is not a differing position"
                    )))
                }
            };
            let (a, bm) = multipliers(kind, family, k, j, b)?;
            let (ua, va) = if in_x { (a, bm) } else { (bm, a) };
            row_u.push(ua.scale(&weight));
            row_v.push(va.scale(&weight));
        }
        w.push(weight);
        u.push(row_u);
        v.push(row_v);
    }
    Ok(WeightScheme { kind, w, u, v })
}

/// `w_x = Σ_{(x,y) ∈ R} w(x,y)` for every input `x`.
pub fn row_marginals(relation: &Relation, w: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); relation.inputs()];
    for (pair, weight) in relation.pairs().iter().zip(w) {
        out[pair.x] += weight;
    }
    out
}

/// `Pr[y'_{T,1} ≠ x_{T,1} | Y' ∧ X = k]` over uniform `Y'` in the family.
pub fn disagreement_given_wedge(family: &PathFamily, x: usize, k: u32) -> Result<BigRational> {
    let px = family.path(x);
    let (mut total, mut differ) = (0u64, 0u64);
    for z in family.paths() {
        if wedge(z, px)? == Wedge::At(k) {
            total += 1;
            differ += u64::from(z.endpoint() != px.endpoint());
        }
    }
    if total == 0 {
        return Err(Error::param(format!(
            "no path diverges from path {x} at {k}"
        )));
    }
    Ok(BigRational::new(differ.into(), total.into()))
}

/// `w_X` as the sum over `k` of [`disagreement_given_wedge`].
pub fn marginal_by_wedge(family: &PathFamily, x: usize) -> Result<BigRational> {
    let mut sum = BigRational::zero();
    for k in 0..=family.horizon() {
        sum += disagreement_given_wedge(family, x, k)?;
    }
    Ok(sum)
}
