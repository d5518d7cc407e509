use serde::Serialize;

use super::WalkInstance;
use crate::grid::neighbors;
use crate::oracle::MembershipOracle;
use crate::Result;

/// Largest vertex count an exhaustive scan accepts.
pub const SCAN_BUDGET: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub self_avoiding: bool,
    pub unique_local_min: bool,
    pub membership_consistent: bool,
    /// Vertices without a strictly smaller neighbour.
    pub local_minima: u64,
    /// Distinct trajectory points have strictly decreasing values.
    pub decreasing_along_path: bool,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.self_avoiding
            && self.unique_local_min
            && self.membership_consistent
            && self.decreasing_along_path
    }
}

/// Exhaustive check of an instance. Refuses shapes above [`SCAN_BUDGET`].
pub fn verify_instance(inst: &WalkInstance) -> Result<VerifyReport> {
    let shape = inst.shape();
    shape.ensure_enumerable(SCAN_BUDGET)?;

    let values: Vec<i64> = shape.vertices().map(|v| inst.value_unchecked(&v)).collect();
    let endpoint = inst.endpoint();
    let mut local_minima = 0;
    let mut endpoint_is_min = false;
    for (idx, v) in shape.vertices().enumerate() {
        let f = values[idx];
        let has_smaller = neighbors(shape, &v)?
            .iter()
            .any(|w| values[shape.linear_index(w) as usize] < f);
        if !has_smaller {
            local_minima += 1;
            endpoint_is_min |= v == endpoint;
        }
    }

    let trajectory = inst.trajectory();
    let mut on_path = vec![false; values.len()];
    for p in &trajectory {
        on_path[shape.linear_index(p) as usize] = true;
    }
    let mut oracle = MembershipOracle::new(inst);
    let mut membership_consistent = true;
    for (idx, v) in shape.vertices().enumerate() {
        membership_consistent &= oracle.query(&v)? == on_path[idx];
    }

    let mut decreasing_along_path = true;
    let mut last: Option<(&crate::Vertex, i64)> = None;
    for p in &trajectory {
        if last.is_some_and(|(q, _)| q == p) {
            continue;
        }
        let f = values[shape.linear_index(p) as usize];
        if let Some((_, g)) = last {
            decreasing_along_path &= f < g;
        }
        last = Some((p, f));
    }

    Ok(VerifyReport {
        self_avoiding: inst.is_self_avoiding(),
        unique_local_min: local_minima == 1 && endpoint_is_min,
        membership_consistent,
        local_minima,
        decreasing_along_path,
    })
}
