//! A second, independent implementation of the hypercube adversary bounds,
//! shared by the adversary cross-checks and the acceptance suite.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use lsq_core::adversary::RadicalSum;
use num::{BigRational, Signed, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `a + b·sqrt(2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sqrt2(pub BigRational, pub BigRational);

impl Sqrt2 {
    pub fn int(n: i64) -> Self {
        Sqrt2(q(n, 1), BigRational::zero())
    }

    /// `sqrt(2)^e` for any integer `e`.
    pub fn root2_pow(e: i64) -> Self {
        let half = e.div_euclid(2);
        let base = num::pow::Pow::pow(q(2, 1), half as i32);
        if e.rem_euclid(2) == 0 {
            Sqrt2(base, BigRational::zero())
        } else {
            Sqrt2(BigRational::zero(), base)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Sqrt2(&self.0 + &o.0, &self.1 + &o.1)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let two = q(2, 1);
        Sqrt2(
            &self.0 * &o.0 + two * &self.1 * &o.1,
            &self.0 * &o.1 + &self.1 * &o.0,
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Sqrt2(&self.0 * r, &self.1 * r)
    }

    pub fn inv(&self) -> Self {
        let norm = &self.0 * &self.0 - q(2, 1) * &self.1 * &self.1;
        Sqrt2(&self.0 / &norm, -&self.1 / &norm)
    }

    pub fn sign(&self) -> Ordering {
        let (a, b) = (&self.0, &self.1);
        let sa = a.signum();
        let sb = b.signum();
        if sb.is_zero() || sa == sb {
            return if sa.is_zero() {
                sb.cmp(&BigRational::zero())
            } else {
                sa.cmp(&BigRational::zero())
            };
        }
        if sa.is_zero() {
            return sb.cmp(&BigRational::zero());
        }
        // Opposite signs: the larger of a² and 2b² wins.
        let lhs = a * a;
        let rhs = q(2, 1) * b * b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa.cmp(&BigRational::zero()),
            Ordering::Less => sb.cmp(&BigRational::zero()),
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp(&self, o: &Self) -> Ordering {
        Sqrt2(&self.0 - &o.0, &self.1 - &o.1).sign()
    }
}

/// Independent model of the hypercube family: paths as flip sequences,
/// points as `(tick, walk mask)` tuples.
pub struct Model {
    pub m: u32,
    pub horizon: u32,
    pub seqs: Vec<Vec<u32>>,
}

impl Model {
    pub fn new(m: u32, horizon: u32) -> Self {
        let mut seqs = vec![vec![]];
        for _ in 0..=horizon {
            seqs = seqs
                .into_iter()
                .flat_map(|s: Vec<u32>| {
                    (0..m).map(move |i| {
                        let mut t = s.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        Model { m, horizon, seqs }
    }

    /// `[(t, before), (t, after)]` for each tick.
    pub fn points(&self, s: &[u32]) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut mask = 0u32;
        for (t, &i) in s.iter().enumerate() {
            out.push((t as u32, mask));
            mask ^= 1 << i;
            out.push((t as u32, mask));
        }
        out
    }

    pub fn endpoint(&self, s: &[u32]) -> u32 {
        s.iter().fold(0, |acc, &i| acc ^ (1 << i))
    }

    pub fn wedge(a: &[u32], b: &[u32]) -> usize {
        a.iter().zip(b).position(|(x, y)| x != y).unwrap()
    }

    /// `1 / ((m-1) m^{T-k})`.
    pub fn weight(&self, k: usize) -> BigRational {
        let size = i64::from(self.m - 1) * i64::from(self.m).pow(self.horizon - k as u32);
        q(1, size)
    }

    /// Related pairs with their wedge and differing positions tagged by side.
    pub fn pairs(&self) -> Vec<(usize, usize, usize, Vec<((u32, u32), bool, u32)>)> {
        let sets: Vec<HashSet<(u32, u32)>> = self
            .seqs
            .iter()
            .map(|s| self.points(s).into_iter().collect())
            .collect();
        let mut out = Vec::new();
        for (x, sx) in self.seqs.iter().enumerate() {
            for (y, sy) in self.seqs.iter().enumerate() {
                if self.endpoint(sx) == self.endpoint(sy) {
                    continue;
                }
                let k = Self::wedge(sx, sy);
                let mut diff = Vec::new();
                for (idx, p) in self.points(sx).into_iter().enumerate() {
                    if !sets[y].contains(&p) {
                        diff.push((p, true, idx as u32));
                    }
                }
                for (idx, p) in self.points(sy).into_iter().enumerate() {
                    if !sets[x].contains(&p) {
                        diff.push((p, false, idx as u32));
                    }
                }
                out.push((x, y, k, diff));
            }
        }
        out
    }
}

/// Relational bound over the model's related pairs, with the pair count.
pub fn relational_bound(m: u32, horizon: u32) -> (BigRational, usize) {
    let model = Model::new(m, horizon);
    let pairs = model.pairs();
    let mut wx: HashMap<usize, BigRational> = HashMap::new();
    let mut wy: HashMap<usize, BigRational> = HashMap::new();
    let mut wxi: HashMap<(usize, (u32, u32)), BigRational> = HashMap::new();
    let mut wyi: HashMap<(usize, (u32, u32)), BigRational> = HashMap::new();
    for (x, y, k, diff) in &pairs {
        let w = model.weight(*k);
        *wx.entry(*x).or_insert_with(BigRational::zero) += &w;
        *wy.entry(*y).or_insert_with(BigRational::zero) += &w;
        for (p, _, _) in diff {
            *wxi.entry((*x, *p)).or_insert_with(BigRational::zero) += &w;
            *wyi.entry((*y, *p)).or_insert_with(BigRational::zero) += &w;
        }
    }
    let mut best: Option<BigRational> = None;
    for (x, y, _, diff) in &pairs {
        for (p, _, _) in diff {
            let a = &wx[x] / &wxi[&(*x, *p)];
            let b = &wy[y] / &wyi[&(*y, *p)];
            let v = if a > b { a } else { b };
            if best.as_ref().is_none_or(|c| &v < c) {
                best = Some(v);
            }
        }
    }
    (best.unwrap(), pairs.len())
}

/// Quantum bound (its square) over the model's related pairs with `m = 2`,
/// where every multiplier is a power of `sqrt 2`.
pub fn quantum_bound(horizon: u32) -> Sqrt2 {
    // a_{k,j,b} = 2^{-ceil(s/2)/2} = sqrt(2)^{-ceil(s/2)}, s = j - k + b <= 10.
    let model = Model::new(2, horizon);
    let pairs = model.pairs();
    let mut wx: HashMap<usize, BigRational> = HashMap::new();
    let mut wy: HashMap<usize, BigRational> = HashMap::new();
    let mut ux: HashMap<(usize, (u32, u32)), Sqrt2> = HashMap::new();
    let mut vy: HashMap<(usize, (u32, u32)), Sqrt2> = HashMap::new();
    for (x, y, k, diff) in &pairs {
        let w = model.weight(*k);
        *wx.entry(*x).or_insert_with(BigRational::zero) += &w;
        *wy.entry(*y).or_insert_with(BigRational::zero) += &w;
        let mut seen = HashSet::new();
        for &(p, in_x, idx) in diff {
            // Duplicates cannot occur on the hypercube; keep the first (j,b) anyway.
            if !seen.insert((p, in_x)) {
                continue;
            }
            let (j, b) = (idx / 2, idx % 2);
            let s = i64::from(j) - *k as i64 + i64::from(b);
            let e = (s + 1).div_euclid(2);
            let (a, bm) = (Sqrt2::root2_pow(-e), Sqrt2::root2_pow(e));
            let (u, v) = if in_x { (a, bm) } else { (bm, a) };
            let u_slot = ux.entry((*x, p)).or_insert_with(|| Sqrt2::int(0));
            *u_slot = u_slot.add(&u.scale(&w));
            let v_slot = vy.entry((*y, p)).or_insert_with(|| Sqrt2::int(0));
            *v_slot = v_slot.add(&v.scale(&w));
        }
    }
    let mut best: Option<Sqrt2> = None;
    for (x, y, _, diff) in &pairs {
        for (p, _, _) in diff {
            let denom = ux[&(*x, *p)].mul(&vy[&(*y, *p)]);
            let value = denom.inv().scale(&(&wx[x] * &wy[y]));
            if best.as_ref().is_none_or(|c| value.cmp(c) == Ordering::Less) {
                best = Some(value);
            }
        }
    }
    best.unwrap()
}

/// A radical sum whose only radical is `sqrt 2`, as an element of `Q(sqrt 2)`.
pub fn sqrt2_sum(sum: &RadicalSum) -> Sqrt2 {
    let mut total = Sqrt2::int(0);
    for term in sum.terms() {
        let part = match term.key().factors() {
            [] => Sqrt2(term.coeff().clone(), BigRational::zero()),
            [(2, e)] if *e == num::rational::Ratio::new(1, 2) => {
                Sqrt2(BigRational::zero(), term.coeff().clone())
            }
            other => panic!("unexpected radical {other:?}"),
        };
        total = total.add(&part);
    }
    total
}
