//! Adversary bounds on fully enumerated path families.
//!
//! A family holds every walk-with-clock path of a given horizon, reduced to
//! its walk part and clock tick: point `x_{t,b}` is stored as the id
//! `t * W + code(walk)`, where `W` is the number of walk states. Two paths are
//! related when their endpoints `x_{T,1}` differ, and a differing position is
//! a point in the symmetric difference of their point sets.

mod bounds;
mod radical;
mod scheme;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::instances::sticky_step;
use crate::{Error, Result};

pub use bounds::{thm4_value, thm5_value, Thm4Value, Thm5Value, Witness};
pub use radical::{Radical, RadicalKey, RadicalSum};
pub use scheme::{
    build_scheme, disagreement_given_wedge, divergence_class_size, marginal_by_wedge, multipliers,
    row_marginals, SchemeKind, WeightScheme,
};

/// Largest family an enumeration may produce.
pub const PATH_BUDGET: u64 = 1 << 16;
/// Largest number of related pairs.
pub const RELATION_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PathKind {
    Hypercube,
    /// Walk on `[side]^m`, starting at `floor(side/2)` in every coordinate.
    Grid {
        side: u32,
    },
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathKind::Hypercube => write!(f, "hypercube"),
            PathKind::Grid { side } => write!(f, "grid(side={side})"),
        }
    }
}

impl FromStr for PathKind {
    type Err = Error;

    /// `hypercube`, or `grid:<side>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "hypercube" => Ok(PathKind::Hypercube),
            Some(("grid", side)) => {
                let side = side
                    .parse()
                    .map_err(|_| Error::param(format!("bad grid side in {s:?}")))?;
                Ok(PathKind::Grid { side })
            }
            _ => Err(Error::param(format!(
                "unknown path kind {s:?}, expected hypercube or grid:<side>"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyTag {
    pub kind: PathKind,
    pub m: usize,
    pub horizon: u32,
}

/// One enumerated path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    tag: FamilyTag,
    steps: Vec<u32>,
    /// Walk-state codes `w_0..=w_{T+1}`; `x_{t,0}` uses `w_t`, `x_{t,1}` uses `w_{t+1}`.
    walk: Vec<u64>,
    set: Vec<u64>,
    walk_states: u64,
}

impl Path {
    /// Flip coordinates (hypercube) or sign bits, `1` for `+` (grid).
    pub fn steps(&self) -> &[u32] {
        &self.steps
    }

    pub fn point(&self, j: u32, b: u8) -> u64 {
        u64::from(j) * self.walk_states + self.walk[j as usize + usize::from(b)]
    }

    pub fn endpoint(&self) -> u64 {
        self.point(self.tag.horizon, 1)
    }

    /// Sorted, deduplicated point ids.
    pub fn point_set(&self) -> &[u64] {
        &self.set
    }

    pub fn contains(&self, id: u64) -> bool {
        self.set.binary_search(&id).is_ok()
    }

    /// First `(j, b)` with `x_{j,b} = id`.
    pub fn locate(&self, id: u64) -> Option<(u32, u8)> {
        let j = id / self.walk_states;
        if j > u64::from(self.tag.horizon) {
            return None;
        }
        let code = id % self.walk_states;
        let j = j as usize;
        if self.walk[j] == code {
            Some((j as u32, 0))
        } else if self.walk[j + 1] == code {
            Some((j as u32, 1))
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wedge {
    /// First step index where the sequences differ.
    At(u32),
    Identical,
}

/// `X ∧ Y`: the first index where the step sequences diverge.
pub fn wedge(x: &Path, y: &Path) -> Result<Wedge> {
    if x.tag != y.tag {
        return Err(Error::param("paths come from different families"));
    }
    Ok(
        match x.steps.iter().zip(&y.steps).position(|(a, b)| a != b) {
            Some(k) => Wedge::At(k as u32),
            None => Wedge::Identical,
        },
    )
}

#[derive(Clone, Debug)]
pub struct PathFamily {
    tag: FamilyTag,
    walk_states: u64,
    paths: Vec<Path>,
}

/// Every path of the family, in lexicographic order of step sequences.
pub fn enumerate_paths(kind: PathKind, m: usize, horizon: i64) -> Result<PathFamily> {
    let horizon = u32::try_from(horizon)
        .map_err(|_| Error::param(format!("horizon must be >= 0, got {horizon}")))?;
    if m == 0 {
        return Err(Error::param("walk needs at least one dimension"));
    }
    let radix: u64 = match kind {
        PathKind::Hypercube => m as u64,
        PathKind::Grid { side } if side >= 2 => 2,
        PathKind::Grid { side } => {
            return Err(Error::param(format!("grid side must be >= 2, got {side}")))
        }
    };
    let count = (radix as u128)
        .checked_pow(horizon + 1)
        .unwrap_or(u128::MAX);
    if count > u128::from(PATH_BUDGET) {
        return Err(Error::budget("path family", count, PATH_BUDGET));
    }
    let walk_states = match kind {
        PathKind::Hypercube if m < 64 => 1u64 << m,
        PathKind::Grid { side } => u64::from(side).checked_pow(m as u32).unwrap_or(u64::MAX),
        _ => u64::MAX,
    };
    let ticks = u64::from(horizon) + 1;
    if walk_states == u64::MAX || walk_states.checked_mul(ticks).is_none() {
        return Err(Error::param(format!("walk space too large for m = {m}")));
    }
    let tag = FamilyTag { kind, m, horizon };
    let len = horizon as usize + 1;
    let paths = (0..count as u64)
        .map(|code| {
            let mut steps = vec![0u32; len];
            let mut rest = code;
            for s in steps.iter_mut().rev() {
                *s = (rest % radix) as u32;
                rest /= radix;
            }
            build_path(tag, walk_states, steps)
        })
        .collect();
    Ok(PathFamily {
        tag,
        walk_states,
        paths,
    })
}

fn build_path(tag: FamilyTag, walk_states: u64, steps: Vec<u32>) -> Path {
    let m = tag.m;
    let mut walk = Vec::with_capacity(steps.len() + 1);
    match tag.kind {
        PathKind::Hypercube => {
            let mut state = 0u64;
            walk.push(state);
            for &i in &steps {
                state ^= 1 << i;
                walk.push(state);
            }
        }
        PathKind::Grid { side } => {
            let mut coords = vec![side / 2; m];
            walk.push(grid_code(side, &coords));
            for (t, &s) in steps.iter().enumerate() {
                let dim = t % m;
                coords[dim] = sticky_step(coords[dim], if s == 1 { 1 } else { -1 }, 1, side);
                walk.push(grid_code(side, &coords));
            }
        }
    }
    let mut set: Vec<u64> = (0..steps.len() as u64)
        .flat_map(|j| {
            [
                j * walk_states + walk[j as usize],
                j * walk_states + walk[j as usize + 1],
            ]
        })
        .collect();
    set.sort_unstable();
    set.dedup();
    Path {
        tag,
        steps,
        walk,
        set,
        walk_states,
    }
}

fn grid_code(side: u32, coords: &[u32]) -> u64 {
    coords
        .iter()
        .rev()
        .fold(0, |acc, &c| acc * u64::from(side) + u64::from(c - 1))
}

impl PathFamily {
    pub fn kind(&self) -> PathKind {
        self.tag.kind
    }

    pub fn m(&self) -> usize {
        self.tag.m
    }

    pub fn horizon(&self) -> u32 {
        self.tag.horizon
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, idx: usize) -> &Path {
        &self.paths[idx]
    }

    /// `m^{T+1}` or `2^{T+1}`.
    pub fn closed_form_count(&self) -> u128 {
        let radix = match self.tag.kind {
            PathKind::Hypercube => self.tag.m as u128,
            PathKind::Grid { .. } => 2,
        };
        radix.pow(self.tag.horizon + 1)
    }

    /// Clock tick and 1-based walk coordinates of a point id.
    pub fn decode(&self, id: u64) -> (u64, Vec<u32>) {
        let tick = id / self.walk_states;
        let mut code = id % self.walk_states;
        let coords = match self.tag.kind {
            PathKind::Hypercube => (0..self.tag.m)
                .map(|i| 1 + ((code >> i) & 1) as u32)
                .collect(),
            PathKind::Grid { side } => (0..self.tag.m)
                .map(|_| {
                    let c = (code % u64::from(side)) as u32 + 1;
                    code /= u64::from(side);
                    c
                })
                .collect(),
        };
        (tick, coords)
    }

    /// Reorders the paths; `order[i]` is the old index of the new `i`-th path.
    pub fn permuted(&self, order: &[usize]) -> Result<PathFamily> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::param("order is not a permutation of the family"));
            }
        }
        if order.len() != self.len() {
            return Err(Error::param("order is not a permutation of the family"));
        }
        Ok(PathFamily {
            tag: self.tag,
            walk_states: self.walk_states,
            paths: order.iter().map(|&i| self.paths[i].clone()).collect(),
        })
    }
}

/// An ordered pair of inputs together with the positions where they differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelPair {
    pub x: usize,
    pub y: usize,
    pub positions: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Relation {
    inputs: usize,
    pairs: Vec<RelPair>,
}

fn symmetric_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Relation {
    /// An abstract relation over `inputs` inputs. Positions of each pair
    /// must be nonempty; they are sorted and deduplicated.
    pub fn new(inputs: usize, mut pairs: Vec<RelPair>) -> Result<Self> {
        for p in &mut pairs {
            if p.x >= inputs || p.y >= inputs {
                return Err(Error::param(format!(
                    "pair ({}, {}) outside {inputs} inputs",
                    p.x, p.y
                )));
            }
            p.positions.sort_unstable();
            p.positions.dedup();
            if p.positions.is_empty() {
                return Err(Error::param(format!(
                    "pair ({}, {}) has no differing position",
                    p.x, p.y
                )));
            }
        }
        Ok(Relation { inputs, pairs })
    }

    /// All ordered pairs of the family with differing endpoints.
    pub fn from_family(family: &PathFamily) -> Result<Self> {
        let mut pairs = Vec::new();
        for (x, px) in family.paths.iter().enumerate() {
            for (y, py) in family.paths.iter().enumerate() {
                if px.endpoint() != py.endpoint() {
                    if pairs.len() as u64 >= RELATION_BUDGET {
                        return Err(Error::budget(
                            "relation",
                            pairs.len() as u64 + 1,
                            RELATION_BUDGET,
                        ));
                    }
                    pairs.push(RelPair {
                        x,
                        y,
                        positions: symmetric_difference(&px.set, &py.set),
                    });
                }
            }
        }
        Ok(Relation {
            inputs: family.len(),
            pairs,
        })
    }

    /// Chosen pairs of the family; each must have differing endpoints.
    pub fn from_pairs(family: &PathFamily, chosen: &[(usize, usize)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(chosen.len());
        for &(x, y) in chosen {
            let (px, py) = match (family.paths.get(x), family.paths.get(y)) {
                (Some(px), Some(py)) => (px, py),
                _ => return Err(Error::param(format!("pair ({x}, {y}) outside the family"))),
            };
            if px.endpoint() == py.endpoint() {
                return Err(Error::param(format!("pair ({x}, {y}) has equal endpoints")));
            }
            pairs.push(RelPair {
                x,
                y,
                positions: symmetric_difference(&px.set, &py.set),
            });
        }
        Ok(Relation {
            inputs: family.len(),
            pairs,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[RelPair] {
        &self.pairs
    }

    /// Total number of (pair, differing position) entries.
    pub fn entries(&self) -> usize {
        self.pairs.iter().map(|p| p.positions.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hypercube(m: usize, t: i64) -> PathFamily {
        enumerate_paths(PathKind::Hypercube, m, t).unwrap()
    }

    #[test]
    fn family_sizes() {
        assert_eq!(hypercube(2, 1).len(), 4);
        assert_eq!(
            enumerate_paths(PathKind::Grid { side: 3 }, 1, 2)
                .unwrap()
                .len(),
            8
        );
        for (m, t) in [(2, 3), (3, 2), (4, 1)] {
            let f = hypercube(m, t);
            assert_eq!(f.len() as u128, f.closed_form_count());
        }
        assert!(enumerate_paths(PathKind::Hypercube, 2, -1).is_err());
        assert!(matches!(
            enumerate_paths(PathKind::Hypercube, 2, 40),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(enumerate_paths(PathKind::Grid { side: 1 }, 1, 2).is_err());
    }

    #[test]
    fn distinct_sequences_have_distinct_point_sets() {
        for f in [
            hypercube(2, 3),
            hypercube(3, 2),
            enumerate_paths(PathKind::Grid { side: 3 }, 2, 4).unwrap(),
        ] {
            let mut sets: Vec<&[u64]> = f.paths().iter().map(|p| p.point_set()).collect();
            sets.sort();
            sets.dedup();
            assert_eq!(sets.len(), f.len());
        }
    }

    #[test]
    fn wedge_examples() {
        let f = hypercube(2, 2);
        let find = |s: &[u32]| f.paths().iter().find(|p| p.steps() == s).unwrap();
        assert_eq!(
            wedge(find(&[0, 1, 0]), find(&[0, 1, 1])).unwrap(),
            Wedge::At(2)
        );
        let g = hypercube(2, 1);
        let find2 = |s: &[u32]| g.paths().iter().find(|p| p.steps() == s).unwrap();
        assert_eq!(wedge(find2(&[1, 0]), find2(&[0, 0])).unwrap(), Wedge::At(0));
        assert_eq!(
            wedge(find(&[1, 1, 0]), find(&[1, 1, 0])).unwrap(),
            Wedge::Identical
        );
        assert!(wedge(find(&[1, 1, 0]), find2(&[1, 0])).is_err());
    }

    #[test]
    fn point_layout() {
        let f = hypercube(2, 1);
        let p = f.paths().iter().find(|p| p.steps() == [1, 0]).unwrap();
        // w_0 = 00, w_1 = 10 (bit 1), w_2 = 11.
        assert_eq!(f.decode(p.point(0, 0)), (0, vec![1, 1]));
        assert_eq!(f.decode(p.point(0, 1)), (0, vec![1, 2]));
        assert_eq!(f.decode(p.point(1, 0)), (1, vec![1, 2]));
        assert_eq!(f.decode(p.endpoint()), (1, vec![2, 2]));
        assert_eq!(p.locate(p.point(1, 1)), Some((1, 1)));

        let g = enumerate_paths(PathKind::Grid { side: 3 }, 1, 2).unwrap();
        let p = g.paths().iter().find(|p| p.steps() == [0, 0, 1]).unwrap();
        // 1 -> 1 (stay) -> 1 (stay) -> 2
        assert_eq!(g.decode(p.point(0, 0)), (0, vec![1]));
        assert_eq!(p.locate(p.point(1, 1)), Some((1, 0)));
        assert_eq!(g.decode(p.endpoint()), (2, vec![2]));
        assert_eq!(p.point_set().len(), 4);
    }

    #[test]
    fn relation_pairs_have_distinct_endpoints() {
        let f = hypercube(2, 3);
        let r = Relation::from_family(&f).unwrap();
        // Four flips split evenly between the two reachable endpoints.
        assert_eq!(r.len(), 2 * 8 * 8);
        for p in r.pairs() {
            assert_ne!(f.path(p.x).endpoint(), f.path(p.y).endpoint());
            for &i in &p.positions {
                assert_ne!(f.path(p.x).contains(i), f.path(p.y).contains(i));
            }
        }
        let same = (0..f.len())
            .find(|&y| y != 0 && f.path(y).endpoint() == f.path(0).endpoint())
            .unwrap();
        assert!(Relation::from_pairs(&f, &[(0, same)]).is_err());
    }
}
