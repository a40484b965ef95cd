//! The stochastic-system abstraction shared by all engines.
//!
//! A [`System`] is anything whose configurations evolve by exact-rational
//! probabilistic steps into accept/reject absorption or further
//! configurations: a machine spec on an input, or a verifier composed with a
//! prover. Engines (exact truncation, absorption analysis, Monte Carlo) are
//! generic over it.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exactmath::{CanonicalVec, QVector, Rational};
use crate::machines::{
    Action, Branching, Configuration, CounterStatus, Kind, MachineSpec, Move, PebbleAction,
    Rhs, RowKey, Tape,
};

use super::EngineError;

/// Where one unit of probability mass lands after a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Child<C> {
    Accept,
    Reject,
    Config(C),
}

pub trait System {
    type Config: Clone + Eq + Ord + std::hash::Hash + std::fmt::Debug;

    fn initial(&self) -> Self::Config;

    /// One step of the system: children and their exact weights, summing to 1.
    /// Zero-weight children may be omitted.
    fn step(&self, c: &Self::Config) -> Result<Vec<(Rational, Child<Self::Config>)>, EngineError>;

    /// When every step weight of every reachable configuration has a
    /// denominator dividing this value, engines may use an integer mass
    /// ledger instead of rational arithmetic. `None` disables the fast path
    /// (quantum systems have input-dependent outcome denominators).
    fn common_denominator(&self) -> Option<u64> {
        None
    }
}

/// A machine spec bound to one input tape.
pub struct MachineSystem<'a> {
    spec: &'a MachineSpec,
    tape: Tape,
}

impl<'a> MachineSystem<'a> {
    pub fn new(spec: &'a MachineSpec, input: &str) -> Result<Self, EngineError> {
        spec.check_input(input)?;
        Ok(MachineSystem {
            spec,
            tape: Tape::new(input),
        })
    }

    pub fn spec(&self) -> &MachineSpec {
        self.spec
    }

    pub fn tape(&self) -> &Tape {
        &self.tape
    }

    /// The row a configuration observes. Communication states read the
    /// prover's cell symbol instead of the tape.
    pub(crate) fn row_key(
        &self,
        c: &Configuration,
        comm_symbol: Option<char>,
    ) -> Result<RowKey, EngineError> {
        let symbol = match (self.spec.is_comm(c.state), comm_symbol) {
            (true, Some(p)) => p,
            (true, None) => return Err(EngineError::CommunicationState),
            (false, _) => self.tape.symbol(c.head),
        };
        let sig = self.spec.kind().signature();
        Ok(RowKey {
            state: c.state,
            symbol,
            statuses: c.counters.iter().map(|&v| CounterStatus::of(v)).collect(),
            pebble: sig.pebble.then(|| c.pebble == Some(c.head)),
        })
    }

    /// Applies a classical action to a configuration.
    pub(crate) fn apply_action(
        &self,
        c: &Configuration,
        action: &Action,
        new_quantum: Option<CanonicalVec>,
    ) -> Result<Child<Configuration>, EngineError> {
        match action {
            Action::Restart => Ok(Child::Config(self.spec.initial_configuration())),
            Action::Go {
                state,
                mv,
                deltas,
                pebble,
            } => {
                if *state == self.spec.accept_state() {
                    return Ok(Child::Accept);
                }
                if *state == self.spec.reject_state() {
                    return Ok(Child::Reject);
                }
                let head = match mv {
                    Move::Left => c.head - 1,
                    Move::Stay => c.head,
                    Move::Right => c.head + 1,
                };
                debug_assert!(
                    (1..=self.tape.len()).contains(&head),
                    "head safety violated at runtime"
                );
                let mut counters = c.counters.clone();
                for (i, (v, d)) in counters.iter_mut().zip(deltas).enumerate() {
                    if self.spec.kind() == Kind::OneD2ca && *v == 0 && *d < 0 {
                        return Err(EngineError::CounterUnderflow { counter: i + 1 });
                    }
                    *v += *d as i64;
                }
                let pebble_pos = match pebble {
                    PebbleAction::None => c.pebble,
                    PebbleAction::Place => Some(c.head),
                    PebbleAction::Lift => None,
                };
                Ok(Child::Config(Configuration {
                    state: *state,
                    head,
                    counters,
                    pebble: pebble_pos,
                    quantum: new_quantum.or_else(|| c.quantum.clone()),
                }))
            }
        }
    }

    /// One step from `c`. For communication states the caller must supply the
    /// prover's cell symbol.
    pub(crate) fn step_config(
        &self,
        c: &Configuration,
        comm_symbol: Option<char>,
    ) -> Result<Vec<(Rational, Child<Configuration>)>, EngineError> {
        let key = self.row_key(c, comm_symbol)?;
        let rhs = self
            .spec
            .row(&key)
            .ok_or_else(|| EngineError::MissingRow(key.describe(self.spec)))?;
        match rhs {
            Rhs::Det(a) => Ok(vec![(Rational::one(), self.apply_action(c, a, None)?)]),
            Rhs::Prob(list) => list
                .iter()
                .filter(|(p, _)| !p.is_zero())
                .map(|(p, a)| Ok((p.clone(), self.apply_action(c, a, None)?)))
                .collect(),
            Rhs::Nondet(_) => Err(EngineError::Nondeterministic),
            Rhs::Quantum { op, outcomes } => {
                let psi = c
                    .quantum
                    .as_ref()
                    .expect("quantum kind configurations carry a register state");
                let qv = psi.to_qvector();
                let norm: BigInt = psi.norm_squared();
                let norm = Rational::from_bigint(norm);
                let applied = op.apply(&qv).map_err(EngineError::Exact)?;
                let mut children = Vec::new();
                for out in applied {
                    if out.weight.is_zero() {
                        continue;
                    }
                    let w = &out.weight / &norm;
                    let canon = CanonicalVec::from_qvector(&out.unconditional)
                        .expect("nonzero weight implies nonzero vector");
                    let action = &outcomes[out.label - 1];
                    children.push((w, self.apply_action(c, action, Some(canon))?));
                }
                Ok(children)
            }
        }
    }

    /// Literal unconditional vector evolution along a chosen outcome path;
    /// used by closed-form audits. Returns `None` for classical actions.
    pub fn literal_quantum_step(
        &self,
        psi: &QVector,
        key: &RowKey,
        outcome_label: usize,
    ) -> Option<QVector> {
        match self.spec.row(key) {
            Some(Rhs::Quantum { op, .. }) => op.elements()[outcome_label - 1].apply(psi).ok(),
            _ => None,
        }
    }
}

impl System for MachineSystem<'_> {
    type Config = Configuration;

    fn initial(&self) -> Configuration {
        self.spec.initial_configuration()
    }

    fn step(&self, c: &Configuration) -> Result<Vec<(Rational, Child<Configuration>)>, EngineError> {
        self.step_config(c, None)
    }

    fn common_denominator(&self) -> Option<u64> {
        common_denominator_of(self.spec)
    }
}

/// The lcm of all probabilistic outcome denominators of a spec, when it fits
/// in a machine word. Quantum and nondeterministic kinds have none.
pub fn common_denominator_of(spec: &MachineSpec) -> Option<u64> {
    match spec.kind().signature().branching {
        Branching::Deterministic => Some(1),
        Branching::Probabilistic => {
            let mut lcm: u64 = 1;
            for rhs in spec.rows().values() {
                if let Rhs::Prob(list) = rhs {
                    for (p, _) in list {
                        let d = p.denom().to_u64()?;
                        lcm = num_integer::lcm(lcm, d);
                        if lcm > u64::MAX / 4 {
                            return None;
                        }
                    }
                }
            }
            Some(lcm)
        }
        _ => None,
    }
}
