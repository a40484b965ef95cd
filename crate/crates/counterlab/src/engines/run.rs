//! Deterministic runs and capped nondeterministic search.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::machines::{Action, Configuration, Kind, MachineSpec, Rhs, StateId};

use super::report::{Decision, RunResult};
use super::system::{Child, MachineSystem, System};
use super::EngineError;

/// Runs a deterministic machine (2dca or 1d2ca) until it halts or the step
/// cap is reached.
pub fn run_deterministic(
    spec: &MachineSpec,
    input: &str,
    max_steps: u64,
    want_trace: bool,
) -> Result<RunResult, EngineError> {
    if !matches!(spec.kind(), Kind::TwoDca | Kind::OneD2ca) {
        return Err(EngineError::WrongKind {
            expected: "a deterministic kind (2dca or 1d2ca)",
            found: spec.kind(),
        });
    }
    let sys = MachineSystem::new(spec, input)?;
    let mut c = sys.initial();
    let mut trace = want_trace.then(|| vec![c.clone()]);
    let mut steps = 0u64;

    // initial state may itself be halting
    let initial_decision = decision_of(spec, c.state);
    if initial_decision != Decision::Running {
        return Ok(RunResult {
            decision: initial_decision,
            steps: 0,
            final_config: c,
            trace,
        });
    }

    while steps < max_steps {
        steps += 1;
        let children = sys.step(&c)?;
        debug_assert_eq!(children.len(), 1, "deterministic step");
        match children.into_iter().next().unwrap().1 {
            Child::Accept => {
                let final_config = halted(spec, &c, spec.accept_state());
                if let Some(t) = &mut trace {
                    t.push(final_config.clone());
                }
                return Ok(RunResult {
                    decision: Decision::Accept,
                    steps,
                    final_config,
                    trace,
                });
            }
            Child::Reject => {
                let final_config = halted(spec, &c, spec.reject_state());
                if let Some(t) = &mut trace {
                    t.push(final_config.clone());
                }
                return Ok(RunResult {
                    decision: Decision::Reject,
                    steps,
                    final_config,
                    trace,
                });
            }
            Child::Config(c2) => {
                if let Some(t) = &mut trace {
                    t.push(c2.clone());
                }
                c = c2;
            }
        }
    }
    Ok(RunResult {
        decision: Decision::Running,
        steps,
        final_config: c,
        trace,
    })
}

fn decision_of(spec: &MachineSpec, s: StateId) -> Decision {
    if s == spec.accept_state() {
        Decision::Accept
    } else if s == spec.reject_state() {
        Decision::Reject
    } else {
        Decision::Running
    }
}

fn halted(spec: &MachineSpec, last: &Configuration, state: StateId) -> Configuration {
    let _ = spec;
    Configuration {
        state,
        ..last.clone()
    }
}

/// Breadth-first exploration result of a nondeterministic machine.
#[derive(Clone, Debug)]
pub struct ExploreResult {
    /// A shortest accepting path (sequence of configurations from the initial
    /// one to the accepting configuration), if one exists within the caps.
    pub accepting_path: Option<Vec<Configuration>>,
    /// Every state occurring in a reachable configuration.
    pub reachable: BTreeSet<StateId>,
    pub configs_visited: usize,
}

/// Exhaustive breadth-first search over a 2nca's configurations with
/// `|counter| <= counter_cap` and path length `<= step_cap`.
pub fn explore_nondeterministic(
    spec: &MachineSpec,
    input: &str,
    counter_cap: i64,
    step_cap: u64,
) -> Result<ExploreResult, EngineError> {
    if spec.kind() != Kind::TwoNca {
        return Err(EngineError::WrongKind {
            expected: "2nca",
            found: spec.kind(),
        });
    }
    let sys = MachineSystem::new(spec, input)?;
    let start = sys.initial();

    let mut reachable = BTreeSet::new();
    reachable.insert(start.state);
    let mut parent: BTreeMap<Configuration, Option<Configuration>> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut queue: VecDeque<(Configuration, u64)> = VecDeque::new();
    queue.push_back((start, 0));
    let mut accepting_path = None;

    'search: while let Some((c, depth)) = queue.pop_front() {
        if depth >= step_cap {
            continue;
        }
        let key = sys.row_key(&c, None)?;
        let rhs = spec
            .row(&key)
            .ok_or_else(|| EngineError::MissingRow(key.describe(spec)))?;
        let actions: Vec<&Action> = match rhs {
            Rhs::Nondet(v) => v.iter().collect(),
            other => other.actions(),
        };
        for a in actions {
            let child = sys.apply_action(&c, a, None)?;
            match child {
                Child::Accept => {
                    reachable.insert(spec.accept_state());
                    if accepting_path.is_none() {
                        let mut path = vec![Configuration {
                            state: spec.accept_state(),
                            ..c.clone()
                        }];
                        let mut cur = Some(c.clone());
                        while let Some(cc) = cur {
                            cur = parent[&cc].clone();
                            path.push(cc);
                        }
                        path.reverse();
                        accepting_path = Some(path);
                        break 'search;
                    }
                }
                Child::Reject => {
                    reachable.insert(spec.reject_state());
                }
                Child::Config(c2) => {
                    if c2.counters.iter().any(|v| v.abs() > counter_cap) {
                        continue;
                    }
                    if !parent.contains_key(&c2) {
                        reachable.insert(c2.state);
                        parent.insert(c2.clone(), Some(c.clone()));
                        queue.push_back((c2, depth + 1));
                    }
                }
            }
        }
    }

    Ok(ExploreResult {
        accepting_path,
        reachable,
        configs_visited: parent.len(),
    })
}
