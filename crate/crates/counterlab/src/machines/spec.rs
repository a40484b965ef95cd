//! Machine data model and validation.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::exactmath::{CanonicalVec, Rational, Superoperator};

use super::kind::{Branching, Kind};
use super::MachineError;

/// Left input endmarker.
pub const CENT: char = '¢';
/// Right input endmarker.
pub const DOLLAR: char = '$';

pub type StateId = usize;

/// Counter status as the machine observes it: the value itself is hidden.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum CounterStatus {
    Zero,
    Nonzero,
}

use serde::Serialize;

impl CounterStatus {
    pub fn of(value: i64) -> CounterStatus {
        if value == 0 {
            CounterStatus::Zero
        } else {
            CounterStatus::Nonzero
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CounterStatus::Zero => "zero",
            CounterStatus::Nonzero => "nonzero",
        }
    }
}

/// All status combinations for `n` counters, in canonical order.
pub fn status_combos(n: usize) -> Vec<Vec<CounterStatus>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|c| {
                [CounterStatus::Zero, CounterStatus::Nonzero].map(|s| {
                    let mut c = c.clone();
                    c.push(s);
                    c
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn name(self) -> &'static str {
        match self {
            Move::Left => "left",
            Move::Stay => "stay",
            Move::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Move> {
        match s {
            "left" => Some(Move::Left),
            "stay" => Some(Move::Stay),
            "right" => Some(Move::Right),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
pub enum PebbleAction {
    #[default]
    None,
    /// Put the pebble on the square under the head (moving it if placed).
    Place,
    /// Remove the pebble from the tape.
    Lift,
}

/// The input alphabet of a machine. `¢` and `$` never appear in it; the
/// endmarked alphabet adds them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    sigma: Vec<char>,
}

impl Alphabet {
    pub fn new(sigma: Vec<char>) -> Result<Self, String> {
        let mut seen = HashSet::new();
        for &c in &sigma {
            if c == CENT || c == DOLLAR {
                return Err(format!("sigma must not contain {c:?}"));
            }
            if !seen.insert(c) {
                return Err(format!("duplicate sigma symbol {c:?}"));
            }
        }
        Ok(Alphabet { sigma })
    }

    pub fn sigma(&self) -> &[char] {
        &self.sigma
    }

    /// Σ̃ = Σ ∪ {¢, $}.
    pub fn endmarked(&self) -> Vec<char> {
        let mut v = vec![CENT];
        v.extend(&self.sigma);
        v.push(DOLLAR);
        v
    }

    pub fn contains(&self, c: char) -> bool {
        self.sigma.contains(&c)
    }
}

/// The read-only endmarked input tape `¢x$`, indexed 1..=len.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tape {
    cells: Vec<char>,
}

impl Tape {
    pub fn new(input: &str) -> Tape {
        let mut cells = vec![CENT];
        cells.extend(input.chars());
        cells.push(DOLLAR);
        Tape { cells }
    }

    /// |x̃| = |x| + 2.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbol at 1-based position; the head never leaves `1..=len`.
    pub fn symbol(&self, pos: usize) -> char {
        self.cells[pos - 1]
    }
}

/// A transition row key: everything the machine can observe in one step.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RowKey {
    pub state: StateId,
    pub symbol: char,
    pub statuses: Vec<CounterStatus>,
    /// Pebble sense (is the pebble on the scanned square), pebble kinds only.
    pub pebble: Option<bool>,
}

impl RowKey {
    pub fn describe(&self, spec: &MachineSpec) -> String {
        let mut parts = vec![spec.state_name(self.state).to_string(), self.symbol.to_string()];
        parts.extend(self.statuses.iter().map(|s| s.name().to_string()));
        if let Some(p) = self.pebble {
            parts.push(if p { "pebble" } else { "no-pebble" }.to_string());
        }
        format!("({})", parts.join(", "))
    }
}

/// One classical action: where the control goes and how tape head, counters
/// and pebble change. `Restart` returns the machine to its initial
/// configuration (with the quantum register re-initialized).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Action {
    Restart,
    Go {
        state: StateId,
        mv: Move,
        deltas: Vec<i8>,
        pebble: PebbleAction,
    },
}

/// The right-hand side of a transition row, shaped by the kind's branching.
#[derive(Clone, PartialEq, Debug)]
pub enum Rhs {
    Det(Action),
    Nondet(Vec<Action>),
    Prob(Vec<(Rational, Action)>),
    Quantum {
        op: Superoperator,
        /// Classical action for each outcome label `1..=op.len()`.
        outcomes: Vec<Action>,
    },
}

impl Rhs {
    pub fn actions(&self) -> Vec<&Action> {
        match self {
            Rhs::Det(a) => vec![a],
            Rhs::Nondet(v) => v.iter().collect(),
            Rhs::Prob(v) => v.iter().map(|(_, a)| a).collect(),
            Rhs::Quantum { outcomes, .. } => outcomes.iter().collect(),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct QuantumPart {
    pub states: Vec<String>,
    pub initial: usize,
}

/// A fully validated machine description. Immutable after validation and
/// shareable across threads; engines never mutate a spec.
#[derive(Clone, PartialEq, Debug)]
pub struct MachineSpec {
    pub(crate) kind: Kind,
    pub(crate) states: Vec<String>,
    pub(crate) accept: StateId,
    pub(crate) reject: StateId,
    pub(crate) alphabet: Alphabet,
    /// Prover symbols a communication state can receive (empty when the
    /// machine has no communication states).
    pub(crate) comm_alphabet: Vec<char>,
    /// Communication states and the cell symbol each one emits.
    pub(crate) comm: BTreeMap<StateId, char>,
    pub(crate) rows: BTreeMap<RowKey, Rhs>,
    pub(crate) quantum: Option<QuantumPart>,
}

/// A run snapshot. The quantum part is an unconditional vector in canonical
/// integer form; branch weights live in the engines, not the configuration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Configuration {
    pub state: StateId,
    pub head: usize,
    pub counters: Vec<i64>,
    pub pebble: Option<usize>,
    pub quantum: Option<CanonicalVec>,
}

impl MachineSpec {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial_state(&self) -> StateId {
        0
    }

    pub fn accept_state(&self) -> StateId {
        self.accept
    }

    pub fn reject_state(&self) -> StateId {
        self.reject
    }

    pub fn is_halting(&self, s: StateId) -> bool {
        s == self.accept || s == self.reject
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn comm_alphabet(&self) -> &[char] {
        &self.comm_alphabet
    }

    pub fn comm_emit(&self, s: StateId) -> Option<char> {
        self.comm.get(&s).copied()
    }

    pub fn is_comm(&self, s: StateId) -> bool {
        self.comm.contains_key(&s)
    }

    pub fn rows(&self) -> &BTreeMap<RowKey, Rhs> {
        &self.rows
    }

    pub fn row(&self, key: &RowKey) -> Option<&Rhs> {
        self.rows.get(key)
    }

    pub fn quantum(&self) -> Option<&QuantumPart> {
        self.quantum.as_ref()
    }

    pub fn quantum_dim(&self) -> usize {
        self.quantum.as_ref().map_or(0, |q| q.states.len())
    }

    /// The initial configuration on an endmarked tape.
    pub fn initial_configuration(&self) -> Configuration {
        let sig = self.kind.signature();
        Configuration {
            state: self.initial_state(),
            head: 1,
            counters: vec![0; sig.counters],
            pebble: None,
            quantum: self
                .quantum
                .as_ref()
                .map(|q| CanonicalVec::basis(q.states.len(), q.initial)),
        }
    }

    /// Checks that an input string only uses alphabet symbols.
    pub fn check_input(&self, input: &str) -> Result<(), MachineError> {
        for c in input.chars() {
            if !self.alphabet.contains(c) {
                return Err(MachineError::BadInput(format!(
                    "input symbol {c:?} is not in sigma"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MachineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} machine, {} states, sigma {{{}}}",
            self.kind,
            self.states.len(),
            self.alphabet.sigma().iter().collect::<String>()
        )
    }
}

// ---------------------------------------------------------------------------
// Raw (unvalidated) machines and validation
// ---------------------------------------------------------------------------

/// An unvalidated machine description, as read from a file or assembled by a
/// builder. `validate` turns it into a [`MachineSpec`], checking every
/// invariant and reporting all violations at once.
#[derive(Clone, Debug, Default)]
pub struct RawMachine {
    pub kind: Option<Kind>,
    pub states: Vec<String>,
    pub accept: String,
    pub reject: String,
    pub sigma: Vec<char>,
    pub comm_alphabet: Vec<char>,
    pub comm: Vec<(String, char)>,
    pub rows: Vec<RawRow>,
    pub quantum: Option<RawQuantum>,
}

#[derive(Clone, Debug)]
pub struct RawRow {
    pub state: String,
    pub symbol: char,
    pub statuses: Vec<CounterStatus>,
    pub pebble: Option<bool>,
    pub rhs: RawRhs,
}

#[derive(Clone, Debug)]
pub enum RawRhs {
    Det(RawAction),
    Nondet(Vec<RawAction>),
    Prob(Vec<(Rational, RawAction)>),
    /// Classical actions per outcome label of the matching superoperator.
    QuantumOutcomes(Vec<RawAction>),
}

#[derive(Clone, Debug, Default)]
pub struct RawAction {
    pub restart: bool,
    pub state: Option<String>,
    pub mv: Move,
    pub deltas: Vec<i8>,
    pub pebble: PebbleAction,
}

impl Default for Move {
    fn default() -> Self {
        Move::Stay
    }
}

impl RawAction {
    pub fn restart() -> RawAction {
        RawAction {
            restart: true,
            ..RawAction::default()
        }
    }

    pub fn go(state: impl Into<String>, mv: Move, deltas: &[i8]) -> RawAction {
        RawAction {
            restart: false,
            state: Some(state.into()),
            mv,
            deltas: deltas.to_vec(),
            pebble: PebbleAction::None,
        }
    }

    pub fn with_pebble(mut self, p: PebbleAction) -> RawAction {
        self.pebble = p;
        self
    }
}

#[derive(Clone, Debug)]
pub struct RawQuantum {
    pub states: Vec<String>,
    pub initial: String,
    pub ops: Vec<RawOp>,
}

#[derive(Clone, Debug)]
pub struct RawOp {
    pub state: String,
    pub symbol: char,
    pub statuses: Vec<CounterStatus>,
    pub pebble: Option<bool>,
    pub op: Superoperator,
}

/// A single head-safety violation: a transition that could move the head off
/// the endmarked tape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadSafetyViolation {
    pub state: String,
    pub symbol: char,
    pub mv: Move,
}

impl fmt::Display for HeadSafetyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "transition from ({}, {:?}) moves {}",
            self.state, self.symbol, self.mv.name()
        )
    }
}

/// Lists every transition that moves left on `¢` or right on `$`.
/// Report-only: usable on raw machines before full validation.
pub fn validate_head_safety(raw: &RawMachine) -> Vec<HeadSafetyViolation> {
    let mut out = Vec::new();
    for row in &raw.rows {
        let actions: Vec<&RawAction> = match &row.rhs {
            RawRhs::Det(a) => vec![a],
            RawRhs::Nondet(v) => v.iter().collect(),
            RawRhs::Prob(v) => v.iter().map(|(_, a)| a).collect(),
            RawRhs::QuantumOutcomes(v) => v.iter().collect(),
        };
        for a in actions {
            if a.restart {
                continue;
            }
            let bad = (row.symbol == CENT && a.mv == Move::Left)
                || (row.symbol == DOLLAR && a.mv == Move::Right);
            if bad {
                out.push(HeadSafetyViolation {
                    state: row.state.clone(),
                    symbol: row.symbol,
                    mv: a.mv,
                });
            }
        }
    }
    out
}

impl RawMachine {
    /// Full validation; returns a spec whose invariants all hold.
    pub fn validate(self) -> Result<MachineSpec, MachineError> {
        let mut errs: Vec<String> = Vec::new();
        let kind = match self.kind {
            Some(k) => k,
            None => return Err(MachineError::Validation(vec!["missing kind".into()])),
        };
        let sig = kind.signature();

        // states
        if self.states.is_empty() {
            errs.push("machine needs at least one state".into());
        }
        let mut index: HashMap<&str, StateId> = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if s.is_empty() {
                errs.push(format!("state #{i} has an empty name"));
            }
            if index.insert(s.as_str(), i).is_some() {
                errs.push(format!("duplicate state name {s:?}"));
            }
        }
        let resolve = |name: &str, what: &str, errs: &mut Vec<String>| -> Option<StateId> {
            match index.get(name) {
                Some(&i) => Some(i),
                None => {
                    errs.push(format!("{what} references unknown state {name:?}"));
                    None
                }
            }
        };
        let accept = resolve(&self.accept, "accept", &mut errs);
        let reject = resolve(&self.reject, "reject", &mut errs);
        if let (Some(a), Some(r)) = (accept, reject) {
            if a == r {
                errs.push("accept and reject must be distinct states".into());
            }
        }

        let alphabet = match Alphabet::new(self.sigma.clone()) {
            Ok(a) => a,
            Err(e) => {
                errs.push(e);
                Alphabet { sigma: vec![] }
            }
        };

        // communication annotations
        let mut comm: BTreeMap<StateId, char> = BTreeMap::new();
        if kind.is_quantum() && !self.comm.is_empty() {
            errs.push("quantum kinds do not support communication states".into());
        }
        for (name, emit) in &self.comm {
            if let Some(id) = resolve(name, "comm", &mut errs) {
                if Some(id) == accept || Some(id) == reject {
                    errs.push(format!("halting state {name:?} cannot be a communication state"));
                }
                if comm.insert(id, *emit).is_some() {
                    errs.push(format!("duplicate comm annotation for {name:?}"));
                }
            }
        }
        if !comm.is_empty() && self.comm_alphabet.is_empty() {
            errs.push("machines with communication states need a comm_alphabet".into());
        }
        if comm.is_empty() && !self.comm_alphabet.is_empty() {
            errs.push("comm_alphabet given but no communication states declared".into());
        }
        {
            let mut seen = HashSet::new();
            for &c in &self.comm_alphabet {
                if !seen.insert(c) {
                    errs.push(format!("duplicate comm_alphabet symbol {c:?}"));
                }
            }
        }

        // quantum part
        let quantum = match (&self.quantum, kind.is_quantum()) {
            (Some(_), false) => {
                errs.push(format!("kind {kind} does not take a quantum part"));
                None
            }
            (None, true) => {
                errs.push(format!("kind {kind} requires a quantum part"));
                None
            }
            (Some(raw), true) => {
                let mut qseen = HashSet::new();
                for s in &raw.states {
                    if !qseen.insert(s.as_str()) {
                        errs.push(format!("duplicate quantum state {s:?}"));
                    }
                }
                match raw.states.iter().position(|s| *s == raw.initial) {
                    Some(initial) if !raw.states.is_empty() => Some(QuantumPart {
                        states: raw.states.clone(),
                        initial,
                    }),
                    _ => {
                        errs.push(format!(
                            "quantum initial state {:?} is not a quantum state",
                            raw.initial
                        ));
                        None
                    }
                }
            }
            (None, false) => None,
        };

        let describe =
            |state: &str, symbol: char, statuses: &[CounterStatus], pebble: Option<bool>| {
                let mut parts = vec![state.to_string(), symbol.to_string()];
                parts.extend(statuses.iter().map(|s| s.name().to_string()));
                if let Some(p) = pebble {
                    parts.push(if p { "pebble" } else { "no-pebble" }.to_string());
                }
                format!("({})", parts.join(", "))
            };

        // quantum ops table, keyed like rows
        let mut ops: HashMap<(StateId, char, Vec<CounterStatus>, Option<bool>), &Superoperator> =
            HashMap::new();
        if let (Some(rawq), Some(q)) = (&self.quantum, &quantum) {
            let dim = q.states.len();
            let mut incomplete = Vec::new();
            for rop in &rawq.ops {
                let at = describe(&rop.state, rop.symbol, &rop.statuses, rop.pebble);
                let Some(id) = resolve(&rop.state, "superoperator", &mut errs) else {
                    continue;
                };
                if rop.op.dim() != dim {
                    errs.push(format!(
                        "superoperator at {at} has dimension {} but the register has {dim}",
                        rop.op.dim()
                    ));
                    continue;
                }
                if !rop.op.check_completeness() {
                    incomplete.push(format!("superoperator at {at} violates completeness"));
                }
                if ops
                    .insert((id, rop.symbol, rop.statuses.clone(), rop.pebble), &rop.op)
                    .is_some()
                {
                    errs.push(format!("duplicate superoperator at {at}"));
                }
            }
            if !incomplete.is_empty() && errs.is_empty() {
                return Err(MachineError::Completeness(incomplete));
            }
            errs.extend(incomplete);
        }

        // transition rows
        let one = Rational::one();
        let mut rows: BTreeMap<RowKey, Rhs> = BTreeMap::new();
        for row in &self.rows {
            let at = describe(&row.state, row.symbol, &row.statuses, row.pebble);
            let Some(state) = resolve(&row.state, "transition", &mut errs) else {
                continue;
            };
            if Some(state) == accept || Some(state) == reject {
                errs.push(format!("transition {at} leaves a halting state"));
                continue;
            }
            if row.statuses.len() != sig.counters {
                errs.push(format!(
                    "{at}: expected {} counter status(es), found {}",
                    sig.counters,
                    row.statuses.len()
                ));
                continue;
            }
            if row.pebble.is_some() != sig.pebble {
                errs.push(format!(
                    "{at}: pebble sense {} for kind {kind}",
                    if sig.pebble { "required" } else { "not allowed" }
                ));
                continue;
            }
            let expected_symbols: Vec<char> = if comm.contains_key(&state) {
                self.comm_alphabet.clone()
            } else {
                alphabet.endmarked()
            };
            if !expected_symbols.contains(&row.symbol) {
                errs.push(format!("{at}: symbol {:?} is outside the row's domain", row.symbol));
                continue;
            }

            let check_action = |a: &RawAction, errs: &mut Vec<String>| -> Option<Action> {
                if a.restart {
                    return Some(Action::Restart);
                }
                let Some(name) = &a.state else {
                    errs.push(format!("{at}: action needs a next state or restart"));
                    return None;
                };
                let target = resolve(name, "action", errs)?;
                if sig.one_way && a.mv == Move::Left {
                    errs.push(format!("{at}: one-way kind {kind} cannot move left"));
                }
                if a.deltas.len() != sig.counters {
                    errs.push(format!(
                        "{at}: expected {} counter delta(s), found {}",
                        sig.counters,
                        a.deltas.len()
                    ));
                    return None;
                }
                for &d in &a.deltas {
                    if !(-1..=1).contains(&d) {
                        errs.push(format!("{at}: counter delta {d} outside -1..=1"));
                    }
                }
                if a.pebble != PebbleAction::None && !sig.pebble {
                    errs.push(format!("{at}: pebble action for kind {kind} without a pebble"));
                }
                Some(Action::Go {
                    state: target,
                    mv: a.mv,
                    deltas: a.deltas.clone(),
                    pebble: a.pebble,
                })
            };

            let rhs = match (&row.rhs, sig.branching) {
                (RawRhs::Det(a), Branching::Deterministic) => {
                    check_action(a, &mut errs).map(Rhs::Det)
                }
                (RawRhs::Det(a), Branching::Nondeterministic) => {
                    check_action(a, &mut errs).map(|a| Rhs::Nondet(vec![a]))
                }
                (RawRhs::Det(a), Branching::Probabilistic) => {
                    check_action(a, &mut errs).map(|a| Rhs::Prob(vec![(one.clone(), a)]))
                }
                (RawRhs::Nondet(list), Branching::Nondeterministic) => {
                    if list.is_empty() {
                        errs.push(format!("{at}: empty choice list"));
                        None
                    } else {
                        let acts: Option<Vec<_>> =
                            list.iter().map(|a| check_action(a, &mut errs)).collect();
                        acts.map(Rhs::Nondet)
                    }
                }
                (RawRhs::Prob(list), Branching::Probabilistic) => {
                    let mut sum = Rational::zero();
                    let mut acts = Vec::new();
                    let mut ok = true;
                    for (p, a) in list {
                        if p.is_negative() {
                            errs.push(format!("{at}: negative outcome weight {p}"));
                            ok = false;
                        }
                        sum += p;
                        match check_action(a, &mut errs) {
                            Some(act) => acts.push((p.clone(), act)),
                            None => ok = false,
                        }
                    }
                    if sum != one {
                        errs.push(format!("probabilities for {at} sum to {sum}"));
                        ok = false;
                    }
                    ok.then_some(Rhs::Prob(acts))
                }
                (RawRhs::QuantumOutcomes(list), Branching::Quantum) => {
                    let key = (state, row.symbol, row.statuses.clone(), row.pebble);
                    match ops.get(&key) {
                        None => {
                            errs.push(format!("{at}: outcome actions without a superoperator"));
                            None
                        }
                        Some(op) => {
                            if list.len() != op.len() {
                                errs.push(format!(
                                    "{at}: superoperator has {} outcomes but {} actions given",
                                    op.len(),
                                    list.len()
                                ));
                                None
                            } else {
                                let acts: Option<Vec<_>> =
                                    list.iter().map(|a| check_action(a, &mut errs)).collect();
                                acts.map(|outcomes| Rhs::Quantum {
                                    op: (*op).clone(),
                                    outcomes,
                                })
                            }
                        }
                    }
                }
                (_, branching) => {
                    errs.push(format!(
                        "{at}: row shape does not match {branching:?} branching of kind {kind}"
                    ));
                    None
                }
            };

            if let Some(rhs) = rhs {
                let key = RowKey {
                    state,
                    symbol: row.symbol,
                    statuses: row.statuses.clone(),
                    pebble: row.pebble,
                };
                if rows.insert(key, rhs).is_some() {
                    errs.push(format!("duplicate transition row {at}"));
                }
            }
        }

        // totality: every observable (state, symbol, statuses, pebble sense)
        // of a non-halting state must have a row
        if errs.is_empty() {
            let statuses = status_combos(sig.counters);
            let senses: Vec<Option<bool>> = if sig.pebble {
                vec![Some(false), Some(true)]
            } else {
                vec![None]
            };
            for (id, name) in self.states.iter().enumerate() {
                if Some(id) == accept || Some(id) == reject {
                    continue;
                }
                let symbols: Vec<char> = if comm.contains_key(&id) {
                    self.comm_alphabet.clone()
                } else {
                    alphabet.endmarked()
                };
                for sym in symbols {
                    for st in &statuses {
                        for &pb in &senses {
                            let key = RowKey {
                                state: id,
                                symbol: sym,
                                statuses: st.clone(),
                                pebble: pb,
                            };
                            if !rows.contains_key(&key) {
                                errs.push(format!(
                                    "missing transition {}",
                                    describe(name, sym, st, pb)
                                ));
                            }
                        }
                    }
                }
            }
            // every superoperator key must have its outcome row; the reverse
            // direction was checked while building rows
            for ((s, sym, st, pb), _) in ops.iter() {
                let key = RowKey {
                    state: *s,
                    symbol: *sym,
                    statuses: st.clone(),
                    pebble: *pb,
                };
                if !rows.contains_key(&key) {
                    errs.push(format!(
                        "superoperator at {} has no outcome actions",
                        describe(&self.states[*s], *sym, st, *pb)
                    ));
                }
            }
        }

        // head safety is a spec invariant: reject violating machines
        for v in validate_head_safety(&self) {
            errs.push(format!("head safety: {v}"));
        }

        if !errs.is_empty() {
            errs.sort();
            errs.dedup();
            return Err(MachineError::Validation(errs));
        }

        Ok(MachineSpec {
            kind,
            states: self.states,
            accept: accept.unwrap(),
            reject: reject.unwrap(),
            alphabet,
            comm_alphabet: self.comm_alphabet,
            comm,
            rows,
            quantum,
        })
    }
}
