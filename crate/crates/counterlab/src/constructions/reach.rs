//! Capped reachability for nondeterministic one-counter machines.
//!
//! If a state is reachable at all on an input, it is reachable by a path of
//! length at most `M^2` with `M = |S| |x̃|`, along which the counter
//! magnitude never exceeds `M`. The caps below bound the breadth-first search
//! accordingly; an oracle property test compares them against generous caps.

use crate::engines::{explore_nondeterministic, EngineError, ExploreResult};
use crate::machines::MachineSpec;

/// Search caps derived from a spec and an input length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReachabilityBound {
    /// M = |S| * |x̃|
    pub m: usize,
    pub counter_cap: i64,
    pub path_cap: u64,
}

impl ReachabilityBound {
    pub fn for_input(spec: &MachineSpec, input: &str) -> Self {
        let m = spec.states().len() * (input.chars().count() + 2);
        ReachabilityBound {
            m,
            counter_cap: m as i64,
            path_cap: (m as u64) * (m as u64),
        }
    }

    /// The same bounds scaled by a factor, for oracle comparisons.
    pub fn scaled(&self, factor: u32) -> Self {
        ReachabilityBound {
            m: self.m,
            counter_cap: self.counter_cap * factor as i64,
            path_cap: self.path_cap * (factor as u64) * (factor as u64),
        }
    }
}

/// Every state reachable from the initial configuration within the bound,
/// with a shortest accepting witness when one exists.
pub fn capped_reachability(
    spec: &MachineSpec,
    input: &str,
    bound: &ReachabilityBound,
) -> Result<ExploreResult, EngineError> {
    explore_nondeterministic(spec, input, bound.counter_cap, bound.path_cap)
}
