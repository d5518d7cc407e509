//! Coordinate geometry of the `(k, l)`-hypercube `[k]^l`.
//!
//! Coordinates are 1-based: every coordinate lies in `1..=k`. Boolean strings
//! `x ∈ {0,1}^n` are `[2]^n` vertices where bit `b` is stored as coordinate
//! `b + 1` (see [`Vertex::from_bits`]).
//!
//! The snake Hamilton path is built recursively: the path for `[k]^(l+1)`
//! walks the path for `[k]^l` with the last coordinate fixed at 1, then walks
//! it backwards with the last coordinate at 2, forwards again at 3, and so on.
//! Ranking and unranking use mixed-radix digit arithmetic with a reversal at
//! every odd digit, so no path is ever materialised.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The grid `[k]^l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridShape {
    k: u32,
    l: usize,
    /// `powers[j] = k^j` for `j in 0..=l`.
    powers: Vec<u64>,
}

impl GridShape {
    /// Fails when `k < 2`, `l < 1`, or `k^l` overflows `u64`.
    pub fn new(k: u32, l: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidShape(format!("side length {k} < 2")));
        }
        if l < 1 {
            return Err(Error::InvalidShape("zero axes".into()));
        }
        let mut powers = Vec::with_capacity(l + 1);
        let mut acc = 1u64;
        powers.push(acc);
        for _ in 0..l {
            acc = acc
                .checked_mul(u64::from(k))
                .ok_or_else(|| Error::InvalidShape(format!("{k}^{l} vertices overflow u64")))?;
            powers.push(acc);
        }
        Ok(GridShape { k, l, powers })
    }

    /// The Boolean hypercube `{0,1}^n` as `[2]^n`.
    pub fn hypercube(n: usize) -> Result<Self> {
        Self::new(2, n)
    }

    pub fn side(&self) -> u32 {
        self.k
    }

    pub fn dims(&self) -> usize {
        self.l
    }

    /// `N = k^l`.
    pub fn vertex_count(&self) -> u64 {
        self.powers[self.l]
    }

    /// Refuses shapes with more than `limit` vertices before an exhaustive scan.
    pub fn ensure_enumerable(&self, limit: u64) -> Result<()> {
        if self.vertex_count() > limit {
            return Err(Error::budget(
                "exhaustive vertex scan",
                self.vertex_count(),
                limit,
            ));
        }
        Ok(())
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.0.len() == self.l && v.0.iter().all(|&c| c >= 1 && c <= self.k)
    }

    pub fn check(&self, v: &Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v.to_string(),
                shape: self.to_string(),
            })
        }
    }

    /// The all-ones corner, first vertex of the snake path.
    pub fn origin(&self) -> Vertex {
        Vertex(vec![1; self.l])
    }

    /// All vertices in snake order.
    pub fn snake(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.vertex_count()).map(move |t| self.unrank_unchecked(t))
    }

    /// Row-major index in `0..N` (first coordinate fastest). Unlike
    /// [`ham_index`] this is not a path order; it keys dense tables.
    /// `v` must be valid for the shape.
    pub fn linear_index(&self, v: &Vertex) -> u64 {
        v.0.iter()
            .zip(&self.powers)
            .map(|(&c, &p)| u64::from(c - 1) * p)
            .sum()
    }

    /// Inverse of [`GridShape::linear_index`].
    pub fn from_linear_index(&self, mut idx: u64) -> Vertex {
        let k = u64::from(self.k);
        let mut coords = Vec::with_capacity(self.l);
        for _ in 0..self.l {
            coords.push((idx % k) as u32 + 1);
            idx /= k;
        }
        Vertex(coords)
    }

    /// All vertices in row-major order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(move |i| self.from_linear_index(i))
    }

    pub(crate) fn unrank_unchecked(&self, t: u64) -> Vertex {
        let mut rest = t - 1;
        let mut coords = vec![0u32; self.l];
        for j in (0..self.l).rev() {
            let block = self.powers[j];
            let digit = rest / block;
            let within = rest % block;
            coords[j] = digit as u32 + 1;
            rest = if digit.is_multiple_of(2) {
                within
            } else {
                block - 1 - within
            };
        }
        Vertex(coords)
    }

    pub(crate) fn rank_unchecked(&self, v: &Vertex) -> u64 {
        let c = &v.0;
        let mut rank = u64::from(c[0] - 1);
        for j in 1..self.l {
            let block = self.powers[j];
            let digit = u64::from(c[j] - 1);
            let within = if digit % 2 == 0 {
                rank
            } else {
                block - 1 - rank
            };
            rank = digit * block + within;
        }
        rank + 1
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}", self.k, self.l)
    }
}

/// A grid point with 1-based coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(Vec<u32>);

impl Vertex {
    pub fn new(coords: Vec<u32>) -> Self {
        Vertex(coords)
    }

    /// Maps a bit string (entries 0 or 1) to a `[2]^n` vertex.
    pub fn from_bits(bits: &[u8]) -> Self {
        Vertex(bits.iter().map(|&b| u32::from(b) + 1).collect())
    }

    /// Inverse of [`Vertex::from_bits`]; only meaningful on `[2]^n`.
    pub fn to_bits(&self) -> Vec<u8> {
        self.0.iter().map(|&c| (c - 1) as u8).collect()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    /// Splits into the first `at` coordinates and the rest.
    pub fn split(&self, at: usize) -> (Vertex, Vertex) {
        (Vertex(self.0[..at].to_vec()), Vertex(self.0[at..].to_vec()))
    }

    /// Tensor product `self ⊗ other`: concatenated coordinates.
    pub fn join(&self, other: &Vertex) -> Vertex {
        let mut c = self.0.clone();
        c.extend_from_slice(&other.0);
        Vertex(c)
    }
}

impl From<Vec<u32>> for Vertex {
    fn from(c: Vec<u32>) -> Self {
        Vertex(c)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Grid neighbours of `v`, ordered by axis and then `-1` before `+1`.
pub fn neighbors(shape: &GridShape, v: &Vertex) -> Result<Vec<Vertex>> {
    shape.check(v)?;
    let mut out = Vec::with_capacity(2 * shape.l);
    for axis in 0..shape.l {
        let c = v.0[axis];
        if c > 1 {
            let mut w = v.clone();
            w.0[axis] = c - 1;
            out.push(w);
        }
        if c < shape.k {
            let mut w = v.clone();
            w.0[axis] = c + 1;
            out.push(w);
        }
    }
    Ok(out)
}

/// `|u - v|_1`. On `[2]^n` this is the Hamming distance.
pub fn l1_distance(u: &Vertex, v: &Vertex) -> Result<u64> {
    if u.dims() != v.dims() {
        return Err(Error::ShapeMismatch(format!(
            "{u} and {v} have different dimension"
        )));
    }
    Ok(u.0
        .iter()
        .zip(&v.0)
        .map(|(&a, &b)| u64::from(a.abs_diff(b)))
        .sum())
}

/// Position of `v` on the snake path, in `1..=N`.
pub fn ham_index(shape: &GridShape, v: &Vertex) -> Result<u64> {
    shape.check(v)?;
    Ok(shape.rank_unchecked(v))
}

/// The `t`-th vertex of the snake path, `1 <= t <= N`, in `O(l)`.
pub fn ham_unrank(shape: &GridShape, t: u64) -> Result<Vertex> {
    if t < 1 || t > shape.vertex_count() {
        return Err(Error::RankOutOfRange {
            rank: t,
            count: shape.vertex_count(),
        });
    }
    Ok(shape.unrank_unchecked(t))
}

/// Successor on the snake path; `None` at the last vertex.
pub fn ham_successor(shape: &GridShape, v: &Vertex) -> Result<Option<Vertex>> {
    let t = ham_index(shape, v)?;
    Ok((t < shape.vertex_count()).then(|| shape.unrank_unchecked(t + 1)))
}

/// Predecessor on the snake path; `None` at the first vertex.
pub fn ham_predecessor(shape: &GridShape, v: &Vertex) -> Result<Option<Vertex>> {
    let t = ham_index(shape, v)?;
    Ok((t > 1).then(|| shape.unrank_unchecked(t - 1)))
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use proptest::prelude::*;

    use super::*;

    fn v(c: &[u32]) -> Vertex {
        Vertex::new(c.to_vec())
    }

    fn set(vs: Vec<Vertex>) -> HashSet<Vertex> {
        vs.into_iter().collect()
    }

    #[test]
    fn shape_rejects_degenerate_and_overflow() {
        assert!(GridShape::new(1, 3).is_err());
        assert!(GridShape::new(3, 0).is_err());
        assert!(GridShape::new(2, 64).is_err());
        assert_eq!(GridShape::new(2, 63).unwrap().vertex_count(), 1 << 63);
        assert!(GridShape::hypercube(20)
            .unwrap()
            .ensure_enumerable(1 << 16)
            .is_err());
    }

    #[test]
    fn neighbor_examples() {
        let s22 = GridShape::new(2, 2).unwrap();
        assert_eq!(
            set(neighbors(&s22, &v(&[1, 1])).unwrap()),
            set(vec![v(&[2, 1]), v(&[1, 2])])
        );
        let s31 = GridShape::new(3, 1).unwrap();
        assert_eq!(
            set(neighbors(&s31, &v(&[2])).unwrap()),
            set(vec![v(&[1]), v(&[3])])
        );
        let s32 = GridShape::new(3, 2).unwrap();
        assert_eq!(
            set(neighbors(&s32, &v(&[2, 2])).unwrap()),
            set(vec![v(&[1, 2]), v(&[3, 2]), v(&[2, 1]), v(&[2, 3])])
        );
        assert!(neighbors(&s32, &v(&[4, 1])).is_err());
        assert!(neighbors(&s32, &v(&[1])).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(l1_distance(&v(&[1, 1]), &v(&[1, 1])).unwrap(), 0);
        assert_eq!(l1_distance(&v(&[1, 3]), &v(&[2, 1])).unwrap(), 3);
        let a = Vertex::from_bits(&[0, 1, 1]);
        let b = Vertex::from_bits(&[1, 1, 0]);
        assert_eq!(a, v(&[1, 2, 2]));
        assert_eq!(l1_distance(&a, &b).unwrap(), 2);
        assert!(l1_distance(&v(&[1]), &v(&[1, 1])).is_err());
    }

    #[test]
    fn snake_examples() {
        let s31 = GridShape::new(3, 1).unwrap();
        assert_eq!(ham_successor(&s31, &v(&[1])).unwrap(), Some(v(&[2])));
        assert_eq!(ham_successor(&s31, &v(&[3])).unwrap(), None);
        assert_eq!(ham_unrank(&s31, 3).unwrap(), v(&[3]));

        let s22 = GridShape::new(2, 2).unwrap();
        let path: Vec<_> = s22.snake().collect();
        assert_eq!(path, vec![v(&[1, 1]), v(&[2, 1]), v(&[2, 2]), v(&[1, 2])]);
        assert_eq!(ham_successor(&s22, &v(&[2, 1])).unwrap(), Some(v(&[2, 2])));
        assert_eq!(ham_index(&s22, &v(&[1, 2])).unwrap(), 4);
        assert_eq!(ham_unrank(&s22, 1).unwrap(), v(&[1, 1]));
        assert_eq!(ham_unrank(&s22, 4).unwrap(), v(&[1, 2]));
        assert!(ham_unrank(&s22, 0).is_err());
        assert!(ham_unrank(&s22, 5).is_err());

        let s32 = GridShape::new(3, 2).unwrap();
        for t in 1..=9 {
            let u = ham_unrank(&s32, t).unwrap();
            assert_eq!(ham_index(&s32, &u).unwrap(), t);
        }
        assert_eq!(ham_index(&s32, &s32.origin()).unwrap(), 1);
    }

    /// Reference construction: materialise the path exactly as the recursive
    /// definition states.
    fn recursive_path(k: u32, l: usize) -> Vec<Vec<u32>> {
        if l == 1 {
            return (1..=k).map(|c| vec![c]).collect();
        }
        let sub = recursive_path(k, l - 1);
        let mut out = Vec::new();
        for c in 1..=k {
            let pass: Box<dyn Iterator<Item = &Vec<u32>>> = if c % 2 == 1 {
                Box::new(sub.iter())
            } else {
                Box::new(sub.iter().rev())
            };
            for p in pass {
                let mut q = p.clone();
                q.push(c);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn snake_matches_recursive_definition_and_is_hamiltonian() {
        for (k, l) in [
            (2, 1),
            (2, 5),
            (3, 3),
            (4, 2),
            (5, 3),
            (2, 10),
            (7, 4),
            (10, 5),
        ] {
            let shape = GridShape::new(k, l).unwrap();
            let path: Vec<_> = shape.snake().collect();
            if shape.vertex_count() <= 5_000 {
                let reference: Vec<_> = recursive_path(k, l).into_iter().map(Vertex::new).collect();
                assert_eq!(path, reference, "k={k} l={l}");
            }
            let distinct: HashSet<_> = path.iter().collect();
            assert_eq!(distinct.len() as u64, shape.vertex_count());
            for w in path.windows(2) {
                assert_eq!(l1_distance(&w[0], &w[1]).unwrap(), 1);
            }
            for (i, u) in path.iter().enumerate() {
                assert_eq!(ham_index(&shape, u).unwrap(), i as u64 + 1);
            }
        }
    }

    proptest! {
        #[test]
        fn unrank_rank_roundtrip(k in 2u32..9, l in 1usize..7, seed in any::<u64>()) {
            let shape = GridShape::new(k, l).unwrap();
            let t = seed % shape.vertex_count() + 1;
            let u = ham_unrank(&shape, t).unwrap();
            prop_assert_eq!(ham_index(&shape, &u).unwrap(), t);
            prop_assert_eq!(shape.from_linear_index(shape.linear_index(&u)), u.clone());
            let succ = ham_successor(&shape, &u).unwrap();
            if t < shape.vertex_count() {
                let s = succ.unwrap();
                prop_assert_eq!(&s, &ham_unrank(&shape, t + 1).unwrap());
                prop_assert_eq!(ham_predecessor(&shape, &s).unwrap(), Some(u));
            } else {
                prop_assert!(succ.is_none());
            }
        }

        #[test]
        fn neighbors_are_symmetric(k in 2u32..6, l in 1usize..5, seed in any::<u64>()) {
            let shape = GridShape::new(k, l).unwrap();
            let u = ham_unrank(&shape, seed % shape.vertex_count() + 1).unwrap();
            let nb = neighbors(&shape, &u).unwrap();
            prop_assert!(nb.len() >= l && nb.len() <= 2 * l);
            for w in nb {
                prop_assert_eq!(l1_distance(&u, &w).unwrap(), 1);
                prop_assert!(neighbors(&shape, &w).unwrap().contains(&u));
            }
        }

        #[test]
        fn l1_is_a_metric(
            a in proptest::collection::vec(1u32..20, 4),
            b in proptest::collection::vec(1u32..20, 4),
            c in proptest::collection::vec(1u32..20, 4),
        ) {
            let (a, b, c) = (Vertex::new(a), Vertex::new(b), Vertex::new(c));
            let ab = l1_distance(&a, &b).unwrap();
            prop_assert_eq!(ab, l1_distance(&b, &a).unwrap());
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(l1_distance(&a, &c).unwrap() <= ab + l1_distance(&b, &c).unwrap());
        }
    }
}
