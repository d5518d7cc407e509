use std::collections::HashMap;
use std::fmt;

use num::{BigRational, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{RadicalSum, Relation, WeightScheme};
use crate::{Error, Result};

/// The pair and differing position attaining a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub pair: usize,
    pub x: usize,
    pub y: usize,
    pub position: u64,
}

#[derive(Clone, Debug)]
pub struct Thm5Value {
    pub value: BigRational,
    pub witness: Witness,
}

impl Thm5Value {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// `sqrt(numerator / denominator)` with the radicand kept exact.
#[derive(Clone, Debug)]
pub struct Thm4Value {
    pub numerator: BigRational,
    pub denominator: RadicalSum,
    pub approx: f64,
    pub witness: Witness,
}

impl Thm4Value {
    /// The radicand as a rational, when the denominator has no radicals.
    pub fn radicand_rational(&self) -> Option<BigRational> {
        self.denominator.as_rational().map(|d| &self.numerator / d)
    }

    pub fn radicand_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::NAN) / self.denominator.to_f64()
    }
}

impl fmt::Display for Thm4Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.radicand_rational() {
            Some(r) => write!(f, "sqrt({r})"),
            None => write!(f, "sqrt({} / ({}))", self.numerator, self.denominator),
        }
    }
}

type Key = (usize, u64);

/// `w_x`, `w_y` and the position-restricted `w_{x,i}`, `w_{y,i}`.
struct RationalMarginals {
    row: Vec<BigRational>,
    col: Vec<BigRational>,
    row_at: HashMap<Key, BigRational>,
    col_at: HashMap<Key, BigRational>,
}

fn rational_marginals(relation: &Relation, w: &[BigRational]) -> RationalMarginals {
    let n = relation.inputs();
    let mut m = RationalMarginals {
        row: vec![BigRational::zero(); n],
        col: vec![BigRational::zero(); n],
        row_at: HashMap::new(),
        col_at: HashMap::new(),
    };
    for (pair, weight) in relation.pairs().iter().zip(w) {
        m.row[pair.x] += weight;
        m.col[pair.y] += weight;
        for &i in &pair.positions {
            *m.row_at
                .entry((pair.x, i))
                .or_insert_with(BigRational::zero) += weight;
            *m.col_at
                .entry((pair.y, i))
                .or_insert_with(BigRational::zero) += weight;
        }
    }
    m
}

/// Relational bound: the minimum over pairs and differing positions of
/// `max{w_x / w_{x,i}, w_y / w_{y,i}}`, exactly.
pub fn thm5_value(relation: &Relation, w: &[BigRational]) -> Result<Thm5Value> {
    if relation.is_empty() {
        return Err(Error::param("relation is empty"));
    }
    if w.len() != relation.len() {
        return Err(Error::InvalidScheme(format!(
            "{} weights for {} pairs",
            w.len(),
            relation.len()
        )));
    }
    if let Some(p) = w.iter().position(|x| !x.is_positive()) {
        return Err(Error::InvalidScheme(format!(
            "weight on pair {p} is not positive"
        )));
    }
    let m = rational_marginals(relation, w);
    let row_ratio: HashMap<Key, BigRational> = m
        .row_at
        .iter()
        .map(|(&(x, i), s)| ((x, i), &m.row[x] / s))
        .collect();
    let col_ratio: HashMap<Key, BigRational> = m
        .col_at
        .iter()
        .map(|(&(y, i), s)| ((y, i), &m.col[y] / s))
        .collect();

    let mut best: Option<(&BigRational, Witness)> = None;
    for (p, pair) in relation.pairs().iter().enumerate() {
        for &i in &pair.positions {
            let (a, b) = (&row_ratio[&(pair.x, i)], &col_ratio[&(pair.y, i)]);
            let value = if a >= b { a } else { b };
            if best.as_ref().is_none_or(|(v, _)| value < *v) {
                best = Some((
                    value,
                    Witness {
                        pair: p,
                        x: pair.x,
                        y: pair.y,
                        position: i,
                    },
                ));
            }
        }
    }
    let (value, witness) = best.expect("nonempty relation has a differing position");
    Ok(Thm5Value {
        value: value.clone(),
        witness,
    })
}

/// Quantum adversary bound: the minimum over pairs and differing positions
/// of `sqrt(w_x w_y / (u_{x,i} v_{y,i}))`.
///
/// The minimiser is located in floating point; its radicand is then
/// rebuilt exactly.
pub fn thm4_value(relation: &Relation, scheme: &WeightScheme) -> Result<Thm4Value> {
    if relation.is_empty() {
        return Err(Error::param("relation is empty"));
    }
    if scheme.w().len() != relation.len() {
        return Err(Error::InvalidScheme(
            "scheme was built for a different relation".into(),
        ));
    }
    scheme.check_validity()?;

    let mut row = vec![BigRational::zero(); relation.inputs()];
    let mut col = vec![BigRational::zero(); relation.inputs()];
    let mut u_at: HashMap<Key, RadicalSum> = HashMap::new();
    let mut v_at: HashMap<Key, RadicalSum> = HashMap::new();
    for (p, pair) in relation.pairs().iter().enumerate() {
        row[pair.x] += &scheme.w()[p];
        col[pair.y] += &scheme.w()[p];
        for (k, &i) in pair.positions.iter().enumerate() {
            u_at.entry((pair.x, i))
                .or_default()
                .add_term(&scheme.u()[p][k]);
            v_at.entry((pair.y, i))
                .or_default()
                .add_term(&scheme.v()[p][k]);
        }
    }
    let ratio = |totals: &[BigRational], sums: &HashMap<Key, RadicalSum>| -> HashMap<Key, f64> {
        sums.iter()
            .map(|(&(x, i), s)| ((x, i), totals[x].to_f64().unwrap_or(f64::NAN) / s.to_f64()))
            .collect()
    };
    let (row_ratio, col_ratio) = (ratio(&row, &u_at), ratio(&col, &v_at));

    let mut best: Option<(f64, Witness)> = None;
    for (p, pair) in relation.pairs().iter().enumerate() {
        for &i in &pair.positions {
            let sq = row_ratio[&(pair.x, i)] * col_ratio[&(pair.y, i)];
            if best.as_ref().is_none_or(|(v, _)| sq < *v) {
                best = Some((
                    sq,
                    Witness {
                        pair: p,
                        x: pair.x,
                        y: pair.y,
                        position: i,
                    },
                ));
            }
        }
    }
    let (sq, witness) = best.expect("nonempty relation has a differing position");
    let key_x = (witness.x, witness.position);
    let key_y = (witness.y, witness.position);
    Ok(Thm4Value {
        numerator: &row[witness.x] * &col[witness.y],
        denominator: u_at[&key_x].mul(&v_at[&key_y]),
        approx: sq.sqrt(),
        witness,
    })
}
