//! Programmatic construction of machine specs.
//!
//! Generated machines (protocol verifiers, transformed automata, the builtin
//! quantum machines) assemble a [`RawMachine`] through this builder and then
//! run the same validation as file parsing.

use crate::exactmath::{Rational, Superoperator};

use super::kind::Kind;
use super::spec::{CounterStatus, MachineSpec, RawAction, RawMachine, RawOp, RawQuantum, RawRhs, RawRow};
use super::MachineError;

pub struct SpecBuilder {
    raw: RawMachine,
}

impl SpecBuilder {
    pub fn new(kind: Kind) -> SpecBuilder {
        SpecBuilder {
            raw: RawMachine {
                kind: Some(kind),
                ..RawMachine::default()
            },
        }
    }

    /// Declares a state if it is not already present. The first declared
    /// state is the initial state.
    pub fn state(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        if !self.raw.states.contains(&name) {
            self.raw.states.push(name);
        }
        self
    }

    pub fn accept(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        self.state(name.clone());
        self.raw.accept = name;
        self
    }

    pub fn reject(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        self.state(name.clone());
        self.raw.reject = name;
        self
    }

    pub fn sigma(&mut self, symbols: &[char]) -> &mut Self {
        self.raw.sigma = symbols.to_vec();
        self
    }

    pub fn comm_alphabet(&mut self, symbols: &[char]) -> &mut Self {
        self.raw.comm_alphabet = symbols.to_vec();
        self
    }

    /// Marks a state as a communication state emitting `emit`.
    pub fn comm(&mut self, state: impl Into<String>, emit: char) -> &mut Self {
        let state = state.into();
        self.state(state.clone());
        self.raw.comm.push((state, emit));
        self
    }

    pub fn quantum(&mut self, states: &[&str], initial: &str) -> &mut Self {
        self.raw.quantum = Some(RawQuantum {
            states: states.iter().map(|s| s.to_string()).collect(),
            initial: initial.to_string(),
            ops: Vec::new(),
        });
        self
    }

    fn push_row(
        &mut self,
        state: impl Into<String>,
        symbol: char,
        statuses: &[CounterStatus],
        pebble: Option<bool>,
        rhs: RawRhs,
    ) {
        let state = state.into();
        self.state(state.clone());
        self.raw.rows.push(RawRow {
            state,
            symbol,
            statuses: statuses.to_vec(),
            pebble,
            rhs,
        });
    }

    pub fn det(
        &mut self,
        state: impl Into<String>,
        symbol: char,
        statuses: &[CounterStatus],
        action: RawAction,
    ) -> &mut Self {
        self.declare_targets(std::slice::from_ref(&action));
        self.push_row(state, symbol, statuses, None, RawRhs::Det(action));
        self
    }

    pub fn det_pebble(
        &mut self,
        state: impl Into<String>,
        symbol: char,
        sense: bool,
        action: RawAction,
    ) -> &mut Self {
        self.declare_targets(std::slice::from_ref(&action));
        self.push_row(state, symbol, &[], Some(sense), RawRhs::Det(action));
        self
    }

    pub fn prob(
        &mut self,
        state: impl Into<String>,
        symbol: char,
        statuses: &[CounterStatus],
        outcomes: Vec<(Rational, RawAction)>,
    ) -> &mut Self {
        let acts: Vec<RawAction> = outcomes.iter().map(|(_, a)| a.clone()).collect();
        self.declare_targets(&acts);
        self.push_row(state, symbol, statuses, None, RawRhs::Prob(outcomes));
        self
    }

    pub fn prob_pebble(
        &mut self,
        state: impl Into<String>,
        symbol: char,
        sense: bool,
        outcomes: Vec<(Rational, RawAction)>,
    ) -> &mut Self {
        let acts: Vec<RawAction> = outcomes.iter().map(|(_, a)| a.clone()).collect();
        self.declare_targets(&acts);
        self.push_row(state, symbol, &[], Some(sense), RawRhs::Prob(outcomes));
        self
    }

    pub fn nondet(
        &mut self,
        state: impl Into<String>,
        symbol: char,
        statuses: &[CounterStatus],
        choices: Vec<RawAction>,
    ) -> &mut Self {
        self.declare_targets(&choices);
        self.push_row(state, symbol, statuses, None, RawRhs::Nondet(choices));
        self
    }

    /// Adds a quantum step: the superoperator applied at the key plus the
    /// classical action for each outcome label, in order.
    pub fn quantum_row(
        &mut self,
        state: impl Into<String>,
        symbol: char,
        statuses: &[CounterStatus],
        pebble: Option<bool>,
        op: Superoperator,
        actions: Vec<RawAction>,
    ) -> &mut Self {
        let state = state.into();
        self.declare_targets(&actions);
        if let Some(q) = &mut self.raw.quantum {
            q.ops.push(RawOp {
                state: state.clone(),
                symbol,
                statuses: statuses.to_vec(),
                pebble,
                op,
            });
        }
        self.push_row(state, symbol, statuses, pebble, RawRhs::QuantumOutcomes(actions));
        self
    }

    fn declare_targets(&mut self, actions: &[RawAction]) {
        for a in actions {
            if let Some(s) = &a.state {
                self.state(s.clone());
            }
        }
    }

    /// Adds `action` rows for every observable combination that has no row
    /// yet. Generated machines use this to make unreachable parts of the
    /// domain total (typically routing them to the reject state).
    pub fn fill_missing(&mut self, action: RawAction) -> &mut Self {
        for (state, symbol, statuses, pebble) in self.missing_keys() {
            self.push_row(state, symbol, &statuses, pebble, RawRhs::Det(action.clone()));
        }
        self
    }

    /// Like [`Self::fill_missing`] for quantum kinds: pads with an identity
    /// superoperator whose single outcome takes `action`.
    pub fn fill_missing_quantum(&mut self, dim: usize, action: RawAction) -> &mut Self {
        for (state, symbol, statuses, pebble) in self.missing_keys() {
            self.quantum_row(
                state,
                symbol,
                &statuses,
                pebble,
                Superoperator::identity(dim),
                vec![action.clone()],
            );
        }
        self
    }

    fn missing_keys(&self) -> Vec<(String, char, Vec<CounterStatus>, Option<bool>)> {
        use std::collections::HashSet;
        let sig = self.raw.kind.expect("builder has a kind").signature();
        let existing: HashSet<(String, char, Vec<CounterStatus>, Option<bool>)> = self
            .raw
            .rows
            .iter()
            .map(|r| (r.state.clone(), r.symbol, r.statuses.clone(), r.pebble))
            .collect();
        let comm_states: HashSet<&String> =
            self.raw.comm.iter().map(|(s, _)| s).collect();
        let mut endmarked = vec![super::spec::CENT];
        endmarked.extend(&self.raw.sigma);
        endmarked.push(super::spec::DOLLAR);
        let statuses = super::spec::status_combos(sig.counters);
        let senses: Vec<Option<bool>> = if sig.pebble {
            vec![Some(false), Some(true)]
        } else {
            vec![None]
        };
        let mut out = Vec::new();
        for s in &self.raw.states {
            if *s == self.raw.accept || *s == self.raw.reject {
                continue;
            }
            let symbols = if comm_states.contains(s) {
                &self.raw.comm_alphabet
            } else {
                &endmarked
            };
            for &sym in symbols {
                for st in &statuses {
                    for &pb in &senses {
                        let key = (s.clone(), sym, st.clone(), pb);
                        if !existing.contains(&key) {
                            out.push(key);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn raw(self) -> RawMachine {
        self.raw
    }

    pub fn build(self) -> Result<MachineSpec, MachineError> {
        self.raw.validate()
    }
}
