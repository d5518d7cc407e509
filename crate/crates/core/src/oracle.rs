//! Query-counted access to functions and to trajectory membership.
//!
//! Every charged call goes through a [`QueryLedger`] that attributes it to
//! the innermost open phase. Oracles own their ledger, so one oracle serves
//! exactly one run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::grid::{ham_index, ham_predecessor, ham_unrank, l1_distance};
use crate::instances::{Family, InstanceMetadata, WalkInstance};
use crate::{Error, GridShape, Result, Vertex};

/// Phase label used when no phase is open.
pub const DEFAULT_PHASE: &str = "main";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCost {
    pub classical: u64,
    pub charged: u64,
}

/// Classical query counts and charged quantum costs, broken down by phase.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    classical_queries: u64,
    charged_quantum_queries: u64,
    phase_breakdown: BTreeMap<String, PhaseCost>,
    #[serde(skip)]
    stack: Vec<String>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_phase(&mut self, label: impl Into<String>) {
        self.stack.push(label.into());
    }

    pub fn pop_phase(&mut self) -> Option<String> {
        self.stack.pop()
    }

    pub fn phase(&self) -> &str {
        self.stack.last().map_or(DEFAULT_PHASE, String::as_str)
    }

    fn entry(&mut self) -> &mut PhaseCost {
        let label = self.phase().to_owned();
        self.phase_breakdown.entry(label).or_default()
    }

    pub fn record_classical(&mut self, count: u64) {
        self.classical_queries += count;
        self.entry().classical += count;
    }

    /// Adds the cost a quantum subroutine would have paid.
    pub fn charge_quantum(&mut self, count: u64) {
        self.charged_quantum_queries += count;
        self.entry().charged += count;
    }

    pub fn classical_queries(&self) -> u64 {
        self.classical_queries
    }

    pub fn charged_quantum_queries(&self) -> u64 {
        self.charged_quantum_queries
    }

    /// Classical plus charged quantum queries.
    pub fn total(&self) -> u64 {
        self.classical_queries + self.charged_quantum_queries
    }

    pub fn phase_breakdown(&self) -> &BTreeMap<String, PhaseCost> {
        &self.phase_breakdown
    }

    /// Totals equal the sums over phases.
    pub fn is_consistent(&self) -> bool {
        let (c, q) = self
            .phase_breakdown
            .values()
            .fold((0, 0), |(c, q), p| (c + p.classical, q + p.charged));
        c == self.classical_queries && q == self.charged_quantum_queries
    }
}

/// A function `f: V -> Z` on a grid.
pub trait Landscape: Send + Sync {
    fn shape(&self) -> &GridShape;

    /// `v` has already been checked against [`Landscape::shape`].
    fn eval(&self, v: &Vertex) -> i64;
}

impl Landscape for WalkInstance {
    fn shape(&self) -> &GridShape {
        WalkInstance::shape(self)
    }

    fn eval(&self, v: &Vertex) -> i64 {
        self.value_unchecked(v)
    }
}

/// Explicit value table in [`GridShape::linear_index`] order.
#[derive(Clone, Debug)]
pub struct TableLandscape {
    shape: GridShape,
    values: Vec<i64>,
}

impl TableLandscape {
    pub fn new(shape: GridShape, values: Vec<i64>) -> Result<Self> {
        if values.len() as u64 != shape.vertex_count() {
            return Err(Error::param(format!(
                "table has {} values for {} vertices",
                values.len(),
                shape.vertex_count()
            )));
        }
        Ok(TableLandscape { shape, values })
    }

    pub fn from_fn(shape: GridShape, f: impl Fn(&Vertex) -> i64) -> Result<Self> {
        shape.ensure_enumerable(1 << 24)?;
        let values = shape.vertices().map(|v| f(&v)).collect();
        Ok(TableLandscape { shape, values })
    }

    pub fn set(&mut self, v: &Vertex, value: i64) -> Result<()> {
        self.shape.check(v)?;
        let idx = self.shape.linear_index(v) as usize;
        self.values[idx] = value;
        Ok(())
    }
}

impl Landscape for TableLandscape {
    fn shape(&self) -> &GridShape {
        &self.shape
    }

    fn eval(&self, v: &Vertex) -> i64 {
        self.values[self.shape.linear_index(v) as usize]
    }
}

/// `f(v) = |v - center|_1`, a single basin.
#[derive(Clone, Debug)]
pub struct L1Bowl {
    shape: GridShape,
    center: Vertex,
}

impl L1Bowl {
    pub fn new(shape: GridShape, center: Vertex) -> Result<Self> {
        shape.check(&center)?;
        Ok(L1Bowl { shape, center })
    }

    pub fn center(&self) -> &Vertex {
        &self.center
    }
}

impl Landscape for L1Bowl {
    fn shape(&self) -> &GridShape {
        &self.shape
    }

    fn eval(&self, v: &Vertex) -> i64 {
        l1_distance(v, &self.center).expect("checked shape") as i64
    }
}

#[derive(Clone, Debug)]
pub struct ConstantLandscape {
    shape: GridShape,
    value: i64,
}

impl ConstantLandscape {
    pub fn new(shape: GridShape, value: i64) -> Self {
        ConstantLandscape { shape, value }
    }
}

impl Landscape for ConstantLandscape {
    fn shape(&self) -> &GridShape {
        &self.shape
    }

    fn eval(&self, _: &Vertex) -> i64 {
        self.value
    }
}

/// Counted value queries against a landscape.
pub struct ValueOracle<'a> {
    landscape: &'a dyn Landscape,
    ledger: QueryLedger,
}

impl<'a> ValueOracle<'a> {
    pub fn new(landscape: &'a dyn Landscape) -> Self {
        ValueOracle {
            landscape,
            ledger: QueryLedger::new(),
        }
    }

    pub fn shape(&self) -> &GridShape {
        self.landscape.shape()
    }

    /// `f(v)`, charged as one classical query.
    pub fn query(&mut self, v: &Vertex) -> Result<i64> {
        self.landscape.shape().check(v)?;
        self.ledger.record_classical(1);
        Ok(self.landscape.eval(v))
    }

    /// `f(v)` without touching the ledger. Used for post-hoc verification and
    /// by simulated quantum subroutines, which charge their own cost.
    pub fn peek(&self, v: &Vertex) -> Result<i64> {
        self.landscape.shape().check(v)?;
        Ok(self.landscape.eval(v))
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }
}

/// Counted `v ∈ set(X)` queries against an instance.
pub struct MembershipOracle<'a> {
    instance: &'a WalkInstance,
    ledger: QueryLedger,
}

impl<'a> MembershipOracle<'a> {
    pub fn new(instance: &'a WalkInstance) -> Self {
        MembershipOracle {
            instance,
            ledger: QueryLedger::new(),
        }
    }

    pub fn shape(&self) -> &GridShape {
        self.instance.shape()
    }

    pub fn query(&mut self, v: &Vertex) -> Result<bool> {
        self.instance.shape().check(v)?;
        self.ledger.record_classical(1);
        Ok(self.instance.contains(v))
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }
}

/// Computes `f_X(v)` from membership queries only, knowing the start, `T`
/// and the clock structure.
///
/// For clocked instances: one query on `v`; off the trajectory the value is
/// `δ(v, start) + 2T`. On it, the clock part gives the tick `t`, and a probe
/// of `v^w ⊗ clock(t - 1)` separates `x_{t,1}` ("no") from `x_{t,0}`. A
/// "yes" is ambiguous when step `t` undid step `t - 1`:
///
/// - on the hypercube, the walk part of `x_{t,0}` has Hamming weight of
///   parity `t`, which settles it;
/// - on grids with `m >= 2`, consecutive steps use different axes, so "yes"
///   means `x_{t,0}`;
/// - on grids with `m = 1` the walk is replayed forward from the start with
///   one probe per tick, costing up to `t` extra queries.
///
/// Block instances carry no per-point clock, so the whole trajectory is
/// replayed with one probe per walk step.
pub fn simulate_value_via_membership(
    meta: &InstanceMetadata,
    oracle: &mut MembershipOracle<'_>,
    v: &Vertex,
) -> Result<i64> {
    meta.shape.check(v)?;
    if oracle.shape() != &meta.shape {
        return Err(Error::ShapeMismatch(format!(
            "oracle on {} but metadata for {}",
            oracle.shape(),
            meta.shape
        )));
    }
    match meta.family {
        Family::HypercubeWalk | Family::GridWalk => simulate_clocked(meta, oracle, v),
        Family::GridBlocks => simulate_blocks(meta, oracle, v),
    }
}

fn simulate_clocked(
    meta: &InstanceMetadata,
    oracle: &mut MembershipOracle<'_>,
    v: &Vertex,
) -> Result<i64> {
    let clock = meta
        .clock
        .as_ref()
        .ok_or_else(|| Error::param("clocked metadata without a clock"))?;
    let horizon = meta.horizon as i64;
    if !oracle.query(v)? {
        return Ok(l1_distance(v, &meta.start)? as i64 + 2 * horizon);
    }
    let m = meta.walk_dims;
    let (walk, tick) = v.split(m);
    let t = ham_index(clock, &tick)? - 1;
    let first = 2 * (horizon - t as i64);
    if t == 0 {
        return Ok(if v == &meta.start { first } else { first - 1 });
    }
    let prev_tick = ham_predecessor(clock, &tick)?.expect("t > 0");
    if !oracle.query(&walk.join(&prev_tick))? {
        return Ok(first - 1);
    }
    let second = match meta.family {
        Family::HypercubeWalk => {
            let weight = walk.coords().iter().filter(|&&c| c == 2).count() as u64;
            weight % 2 != t % 2
        }
        _ if m >= 2 => false,
        _ => {
            let x_t0 = replay_line_walk(meta, clock, oracle, t)?;
            walk.coords()[0] != x_t0
        }
    };
    Ok(if second { first - 1 } else { first })
}

/// Walk coordinate of `x_{t,0}` for a one-dimensional grid walk, found by
/// probing which neighbour the walk moved to at every earlier tick.
fn replay_line_walk(
    meta: &InstanceMetadata,
    clock: &GridShape,
    oracle: &mut MembershipOracle<'_>,
    t: u64,
) -> Result<u32> {
    let n = meta.shape.side();
    let mut cur = meta.start.coords()[0];
    for s in 0..t {
        let tick = ham_unrank(clock, s + 1)?;
        let at = |c: u32| Vertex::new(vec![c]).join(&tick);
        let (lo, hi) = (cur.saturating_sub(1).max(1), (cur + 1).min(n));
        cur = if lo != cur {
            if oracle.query(&at(lo))? {
                lo
            } else {
                hi
            }
        } else if oracle.query(&at(hi))? {
            hi
        } else {
            cur
        };
    }
    Ok(cur)
}

fn simulate_blocks(
    meta: &InstanceMetadata,
    oracle: &mut MembershipOracle<'_>,
    v: &Vertex,
) -> Result<i64> {
    let layout = meta
        .layout
        .as_ref()
        .ok_or_else(|| Error::param("block metadata without a layout"))?;
    let run = layout.run(|_, cur, minus, plus| {
        if minus != cur {
            Ok(!oracle.query(minus)?)
        } else {
            Ok(plus != cur && oracle.query(plus)?)
        }
    })?;
    let top = run.points.len() as i64 - 1;
    Ok(match run.points.iter().position(|p| p == v) {
        Some(pos) => top - pos as i64,
        None => l1_distance(v, &meta.start)? as i64 + top,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        gen_block_instance, gen_grid_instance, gen_hypercube_instance, InstanceParams, Steps,
    };

    fn v(c: &[u32]) -> Vertex {
        Vertex::new(c.to_vec())
    }

    #[test]
    fn value_oracle_examples() {
        let shape = GridShape::new(2, 2).unwrap();
        let mut table = TableLandscape::new(shape.clone(), vec![0; 4]).unwrap();
        table.set(&v(&[1, 1]), 5).unwrap();
        let mut oracle = ValueOracle::new(&table);
        assert_eq!(oracle.query(&v(&[1, 1])).unwrap(), 5);
        assert_eq!(oracle.ledger().classical_queries(), 1);
        assert_eq!(oracle.query(&v(&[1, 1])).unwrap(), 5);
        assert_eq!(oracle.ledger().classical_queries(), 2);
        assert!(oracle.query(&v(&[3, 1])).is_err());
        assert!(oracle.query(&v(&[1, 1, 1])).is_err());
        assert_eq!(oracle.ledger().classical_queries(), 2);
        assert_eq!(oracle.peek(&v(&[1, 1])).unwrap(), 5);
        assert_eq!(oracle.ledger().classical_queries(), 2);
        assert!(TableLandscape::new(shape, vec![0; 3]).is_err());
    }

    #[test]
    fn ledger_phases() {
        let mut ledger = QueryLedger::new();
        ledger.record_classical(2);
        ledger.push_phase("sample");
        ledger.record_classical(3);
        ledger.push_phase("grover");
        ledger.charge_quantum(7);
        assert_eq!(ledger.phase(), "grover");
        ledger.pop_phase();
        ledger.pop_phase();
        ledger.record_classical(1);
        assert_eq!(ledger.classical_queries(), 6);
        assert_eq!(ledger.charged_quantum_queries(), 7);
        assert_eq!(
            ledger.phase_breakdown()[DEFAULT_PHASE],
            PhaseCost {
                classical: 3,
                charged: 0
            }
        );
        assert_eq!(
            ledger.phase_breakdown()["sample"],
            PhaseCost {
                classical: 3,
                charged: 0
            }
        );
        assert_eq!(
            ledger.phase_breakdown()["grover"],
            PhaseCost {
                classical: 0,
                charged: 7
            }
        );
        assert!(ledger.is_consistent());
    }

    #[test]
    fn membership_examples() {
        let inst = gen_hypercube_instance(6, 3, 9).unwrap();
        let mut oracle = MembershipOracle::new(&inst);
        assert!(oracle.query(inst.start()).unwrap());
        let set: std::collections::HashSet<Vertex> = inst.trajectory().into_iter().collect();
        let far = inst
            .shape()
            .vertices()
            .find(|u| set.iter().all(|p| l1_distance(u, p).unwrap() > 1))
            .expect("instance leaves room");
        assert!(!oracle.query(&far).unwrap());
        assert!(oracle.query(&v(&[1, 1])).is_err());
        assert_eq!(oracle.ledger().classical_queries(), 2);
    }

    fn check_all_vertices(inst: &WalkInstance, max_queries: u64) {
        let meta = inst.metadata();
        for u in inst.shape().vertices() {
            let mut oracle = MembershipOracle::new(inst);
            let got = simulate_value_via_membership(&meta, &mut oracle, &u).unwrap();
            assert_eq!(got, inst.value(&u).unwrap(), "{} at {u}", inst.family());
            assert!(oracle.ledger().classical_queries() <= max_queries);
        }
    }

    #[test]
    fn simulation_examples() {
        let inst = gen_hypercube_instance(6, 3, 4).unwrap();
        let meta = inst.metadata();
        let t = inst.horizon() as i64;

        let mut oracle = MembershipOracle::new(&inst);
        assert_eq!(
            simulate_value_via_membership(&meta, &mut oracle, inst.start()).unwrap(),
            2 * t
        );
        assert_eq!(oracle.ledger().classical_queries(), 1);

        let off = inst.shape().vertices().find(|u| !inst.contains(u)).unwrap();
        let mut oracle = MembershipOracle::new(&inst);
        let expected = l1_distance(&off, inst.start()).unwrap() as i64 + 2 * t;
        assert_eq!(
            simulate_value_via_membership(&meta, &mut oracle, &off).unwrap(),
            expected
        );
        assert_eq!(oracle.ledger().classical_queries(), 1);

        let x20 = Vertex::new(inst.walk_before(2).unwrap().to_vec())
            .join(&ham_unrank(inst.clock_shape().unwrap(), 3).unwrap());
        let mut oracle = MembershipOracle::new(&inst);
        assert_eq!(
            simulate_value_via_membership(&meta, &mut oracle, &x20).unwrap(),
            2 * (t - 2)
        );
        assert_eq!(oracle.ledger().classical_queries(), 2);
    }

    #[test]
    fn simulation_is_exact_with_two_queries_where_possible() {
        for seed in 0..4 {
            check_all_vertices(&gen_hypercube_instance(7, 3, seed).unwrap(), 2);
            check_all_vertices(&gen_hypercube_instance(6, 1, seed).unwrap(), 2);
            check_all_vertices(&gen_grid_instance(4, 3, 2, seed).unwrap(), 2);
        }
    }

    #[test]
    fn reversal_on_the_hypercube_is_resolved_by_parity() {
        // Flips 0,0: x_{1,1} has the walk part of x_{0,0}.
        let params = InstanceParams {
            n: 3,
            d: None,
            m: Some(2),
            r: None,
            seed: 0,
        };
        let inst =
            WalkInstance::from_steps(Family::HypercubeWalk, params, Steps::Flips(vec![0, 0]))
                .unwrap();
        check_all_vertices(&inst, 2);
    }

    #[test]
    fn line_walks_and_blocks_fall_back_to_replay() {
        // Signs -,+ from 2 on [4]: x_{1,1} = x_{0,0} in the walk part.
        let params = InstanceParams {
            n: 4,
            d: Some(2),
            m: Some(1),
            r: None,
            seed: 0,
        };
        let inst =
            WalkInstance::from_steps(Family::GridWalk, params, Steps::Signs(vec![-1, 1, 1, -1]))
                .unwrap();
        check_all_vertices(&inst, u64::MAX);
        let meta = inst.metadata();
        let mut oracle = MembershipOracle::new(&inst);
        let x11 = v(&[2, 2]);
        assert_eq!(
            simulate_value_via_membership(&meta, &mut oracle, &x11).unwrap(),
            2 * (3 - 1) - 1
        );
        assert!(oracle.ledger().classical_queries() > 2);

        for seed in 0..3 {
            check_all_vertices(&gen_grid_instance(5, 2, 1, seed).unwrap(), u64::MAX);
            check_all_vertices(&gen_block_instance(9, 2, 0.5, seed).unwrap(), u64::MAX);
        }
    }
}
