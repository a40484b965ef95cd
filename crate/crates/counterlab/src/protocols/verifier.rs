//! Verifiers that check a prover-streamed two-counter trace.
//!
//! The verifier tracks the target machine's state and head deterministically,
//! obtaining counter statuses from the prover's claimed trace
//! `a^{u_1} b^{v_1} # a^{u_2} b^{v_2} # ...`. At round start it draws one of
//! four comparison strategies equiprobably: which counter to audit and
//! whether to compare blocks (1,2), (3,4), ... or (2,3), (4,5), .... The
//! chosen counter's consecutive claims are compared with the verifier's
//! single counter (load a block up, count the next block down, add the known
//! step delta, verify zero). Block 1 is anchored exactly (its true values are
//! forced by the first step), an `a` after a `b` inside a block rejects
//! outright, and over-long check blocks are caught as soon as the count
//! passes the only legal overshoot.
//!
//! The two-way style restarts the round with probability 1/2 after each
//! prover symbol and damps acceptance to 1/k; the one-way style rejects
//! upfront with probability 3/7 and runs the base strategy once, never
//! moving left.

use std::collections::BTreeMap;

use crate::exactmath::Rational;
use crate::machines::{
    CounterStatus, Kind, MachineSpec, Move, RawAction, Rhs, RowKey, SpecBuilder, CENT,
};

use super::ProtocolError;

/// One of the four comparison strategies: which target counter to audit and
/// which block parity starts the comparisons.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CompareStrategy {
    /// 1 or 2.
    pub counter: u8,
    /// 1: compare blocks (1,2), (3,4), ...; 2: compare (2,3), (4,5), ...
    pub parity: u8,
}

pub const ALL_STRATEGIES: [CompareStrategy; 4] = [
    CompareStrategy { counter: 1, parity: 1 },
    CompareStrategy { counter: 1, parity: 2 },
    CompareStrategy { counter: 2, parity: 1 },
    CompareStrategy { counter: 2, parity: 2 },
];

#[derive(Clone, Debug)]
pub struct ProtocolParams {
    /// Acceptance damping: accept a convinced round with probability 1/k.
    pub k: u32,
    /// Per-prover-symbol round-termination probability (two-way style).
    pub restart_prob: Rational,
    /// Upfront rejection weight (one-way style).
    pub upfront_reject: Rational,
    /// Test hook: skip the strategy draw and always use this strategy.
    pub force_strategy: Option<CompareStrategy>,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams {
            k: 16,
            restart_prob: Rational::ratio(1, 2),
            upfront_reject: Rational::ratio(3, 7),
            force_strategy: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerifierStyle {
    /// Restart-based protocol with acceptance damping; arbitrarily small
    /// error by raising k.
    TwoWayRestarting,
    /// One pass of the base strategy after an upfront 3/7 rejection; the
    /// head never moves left.
    OneWaySinglePass,
}

/// A compiled verifier: an ordinary probabilistic counter machine with
/// communication states, runnable by the standard engines.
pub struct Verifier {
    pub spec: MachineSpec,
    pub style: VerifierStyle,
    pub params: ProtocolParams,
    pub target: MachineSpec,
}

/// The verifier's request symbol written to the cell before each prover
/// symbol.
pub const REQUEST: char = 'n';

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum Role {
    Idle,
    Load,
    Check,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum AState {
    Draw,
    StartSim {
        strat: CompareStrategy,
    },
    Await {
        strat: CompareStrategy,
        dstate: usize,
        in_b: bool,
        have_a: bool,
        have_b: bool,
        /// clamped block-1 symbol counts; None after block 1
        b1: Option<(u8, u8)>,
        role: Role,
        pend: Option<i8>,
        passz: bool,
    },
    ApplyStep {
        strat: CompareStrategy,
        dstate: usize,
        have_a: bool,
        have_b: bool,
        role: Role,
        vz: bool,
    },
    AcceptCoin,
}

enum ATarget {
    Accept,
    Reject,
    Restart,
    Go(AState),
}

struct AOutcome {
    weight: Rational,
    target: ATarget,
    mv: Move,
    delta: i8,
}

impl AOutcome {
    fn to(weight: Rational, target: ATarget) -> Self {
        AOutcome {
            weight,
            target,
            mv: Move::Stay,
            delta: 0,
        }
    }
}

fn target_row(
    target: &MachineSpec,
    dstate: usize,
    symbol: char,
    have_a: bool,
    have_b: bool,
) -> Option<(usize, Move, i8, i8)> {
    let st = |b: bool| {
        if b {
            CounterStatus::Nonzero
        } else {
            CounterStatus::Zero
        }
    };
    let key = RowKey {
        state: dstate,
        symbol,
        statuses: vec![st(have_a), st(have_b)],
        pebble: None,
    };
    match target.row(&key)? {
        Rhs::Det(crate::machines::Action::Go {
            state, mv, deltas, ..
        }) => Some((*state, *mv, deltas[0], deltas[1])),
        _ => None,
    }
}

struct Compiler<'a> {
    target: &'a MachineSpec,
    params: &'a ProtocolParams,
    style: VerifierStyle,
    /// target step 1 (always reads the left endmarker at zero counters)
    step1: (usize, Move, i8, i8),
}

impl<'a> Compiler<'a> {
    fn target_row(
        &self,
        dstate: usize,
        symbol: char,
        have_a: bool,
        have_b: bool,
    ) -> Option<(usize, Move, i8, i8)> {
        target_row(self.target, dstate, symbol, have_a, have_b)
    }

    /// Wraps outcomes with the per-symbol restart coin (two-way style only).
    fn coin_wrap(&self, outcomes: Vec<AOutcome>) -> Vec<AOutcome> {
        match self.style {
            VerifierStyle::OneWaySinglePass => outcomes,
            VerifierStyle::TwoWayRestarting => {
                let rp = &self.params.restart_prob;
                let keep = Rational::one() - rp;
                let mut out = vec![AOutcome::to(rp.clone(), ATarget::Restart)];
                for mut o in outcomes {
                    o.weight = &o.weight * &keep;
                    out.push(o);
                }
                out
            }
        }
    }

    fn draw_outcomes(&self) -> Vec<AOutcome> {
        let mut out = Vec::new();
        if self.style == VerifierStyle::OneWaySinglePass {
            out.push(AOutcome::to(
                self.params.upfront_reject.clone(),
                ATarget::Reject,
            ));
        }
        let base = match self.style {
            VerifierStyle::OneWaySinglePass => Rational::one() - &self.params.upfront_reject,
            VerifierStyle::TwoWayRestarting => Rational::one(),
        };
        match self.params.force_strategy {
            Some(s) => out.push(AOutcome::to(base, ATarget::Go(AState::StartSim { strat: s }))),
            None => {
                let share = &base * &Rational::ratio(1, 4);
                for s in ALL_STRATEGIES {
                    out.push(AOutcome::to(
                        share.clone(),
                        ATarget::Go(AState::StartSim { strat: s }),
                    ));
                }
            }
        }
        out
    }

    fn start_sim(&self, strat: CompareStrategy) -> Vec<AOutcome> {
        let (s1, mv, d1, d2) = self.step1;
        if s1 == self.target.accept_state() {
            return vec![AOutcome {
                weight: Rational::one(),
                target: ATarget::Go(AState::AcceptCoin),
                mv,
                delta: 0,
            }];
        }
        if s1 == self.target.reject_state() {
            return vec![AOutcome::to(Rational::one(), ATarget::Reject)];
        }
        let role = if strat.parity == 1 { Role::Load } else { Role::Idle };
        let _ = (d1, d2); // block-1 expectations are read from step1 at the anchor
        vec![AOutcome {
            weight: Rational::one(),
            target: ATarget::Go(AState::Await {
                strat,
                dstate: s1,
                in_b: false,
                have_a: false,
                have_b: false,
                b1: Some((0, 0)),
                role,
                pend: None,
                passz: false,
            }),
            mv,
            delta: 0,
        }]
    }

    /// Processing one prover symbol in a block.
    fn await_symbol(&self, state: &AState, p: char, theta: CounterStatus) -> Vec<AOutcome> {
        let AState::Await {
            strat,
            dstate,
            in_b,
            have_a,
            have_b,
            b1,
            role,
            pend,
            passz,
        } = state.clone()
        else {
            unreachable!()
        };
        let reject = || vec![AOutcome::to(Rational::one(), ATarget::Reject)];
        let chosen = if strat.counter == 1 { 'a' } else { 'b' };
        match p {
            'a' | 'b' => {
                if p == 'a' && in_b {
                    // an a after a b inside a block
                    return self.coin_wrap(reject());
                }
                let mut delta = 0i8;
                let mut passz2 = passz;
                if p == chosen {
                    match role {
                        Role::Load => delta = 1,
                        Role::Check => {
                            if passz {
                                // the claim now exceeds the previous value by
                                // two, impossible in one step
                                return self.coin_wrap(reject());
                            }
                            if theta == CounterStatus::Zero {
                                passz2 = true;
                            }
                            delta = -1;
                        }
                        Role::Idle => {}
                    }
                }
                let b1_next = b1.map(|(ca, cb)| {
                    (
                        (ca + u8::from(p == 'a')).min(2),
                        (cb + u8::from(p == 'b')).min(2),
                    )
                });
                self.coin_wrap(vec![AOutcome {
                    weight: Rational::one(),
                    target: ATarget::Go(AState::Await {
                        strat,
                        dstate,
                        in_b: in_b || p == 'b',
                        have_a: have_a || p == 'a',
                        have_b: have_b || p == 'b',
                        b1: b1_next,
                        role,
                        pend,
                        passz: passz2,
                    }),
                    mv: Move::Stay,
                    delta,
                }])
            }
            '#' => {
                // block-1 anchor: its exact values are forced by step 1
                if let Some((ca, cb)) = b1 {
                    let (_, _, d1, d2) = self.step1;
                    if ca != d1.max(0) as u8 || cb != d2.max(0) as u8 {
                        return self.coin_wrap(reject());
                    }
                }
                let delta = if role == Role::Check { pend.unwrap_or(0) } else { 0 };
                self.coin_wrap(vec![AOutcome {
                    weight: Rational::one(),
                    target: ATarget::Go(AState::ApplyStep {
                        strat,
                        dstate,
                        have_a,
                        have_b,
                        role,
                        vz: role == Role::Check,
                    }),
                    mv: Move::Stay,
                    delta,
                }])
            }
            _ => self.coin_wrap(reject()),
        }
    }

    fn apply_step(&self, state: &AState, symbol: char, theta: CounterStatus) -> Vec<AOutcome> {
        let AState::ApplyStep {
            strat,
            dstate,
            have_a,
            have_b,
            role,
            vz,
        } = state.clone()
        else {
            unreachable!()
        };
        let reject = || vec![AOutcome::to(Rational::one(), ATarget::Reject)];
        if vz && theta != CounterStatus::Zero {
            // the claimed next value differs from previous + delta
            return reject();
        }
        let Some((s2, mv, d1, d2)) = self.target_row(dstate, symbol, have_a, have_b) else {
            return reject();
        };
        // a claimed-zero counter cannot be decremented by the target
        if (!have_a && d1 < 0) || (!have_b && d2 < 0) {
            return reject();
        }
        if s2 == self.target.accept_state() {
            return vec![AOutcome {
                weight: Rational::one(),
                target: ATarget::Go(AState::AcceptCoin),
                mv: Move::Stay,
                delta: 0,
            }];
        }
        if s2 == self.target.reject_state() {
            return reject();
        }
        let next_role = match role {
            Role::Idle => Role::Load,
            Role::Load => Role::Check,
            Role::Check => Role::Load,
        };
        let chosen_delta = if strat.counter == 1 { d1 } else { d2 };
        vec![AOutcome {
            weight: Rational::one(),
            target: ATarget::Go(AState::Await {
                strat,
                dstate: s2,
                in_b: false,
                have_a: false,
                have_b: false,
                b1: None,
                role: next_role,
                pend: (next_role == Role::Check).then_some(chosen_delta),
                passz: false,
            }),
            mv,
            delta: 0,
        }]
    }

    fn accept_coin(&self) -> Vec<AOutcome> {
        match self.style {
            VerifierStyle::OneWaySinglePass => vec![AOutcome::to(Rational::one(), ATarget::Accept)],
            VerifierStyle::TwoWayRestarting => {
                let k = Rational::ratio(1, self.params.k as i64);
                vec![
                    AOutcome::to(k.clone(), ATarget::Accept),
                    AOutcome::to(Rational::one() - &k, ATarget::Restart),
                ]
            }
        }
    }
}

/// Compiles a verifier for a halting 1d2ca target.
pub fn build_verifier(
    target: &MachineSpec,
    params: ProtocolParams,
    style: VerifierStyle,
) -> Result<Verifier, ProtocolError> {
    if target.kind() != Kind::OneD2ca {
        return Err(ProtocolError::ConfigError(format!(
            "verifier targets must be 1d2ca, found {}",
            target.kind()
        )));
    }
    if params.k < 2 {
        return Err(ProtocolError::ConfigError("k must be at least 2".into()));
    }
    let step1 = match target_row(target, target.initial_state(), CENT, false, false) {
        Some(step) if step.2 >= 0 && step.3 >= 0 => step,
        Some(_) => {
            return Err(ProtocolError::ConfigError(
                "target decrements a zero counter on its first step".into(),
            ))
        }
        None => {
            return Err(ProtocolError::ConfigError(
                "target has no deterministic first step".into(),
            ))
        }
    };
    let compiler = Compiler {
        target,
        params: &params,
        style,
        step1,
    };

    // lazy exploration of the abstract control states
    let mut names: BTreeMap<AState, String> = BTreeMap::new();
    let mut queue: Vec<AState> = Vec::new();
    let mut counter = 0usize;
    let mut intern = |a: &AState, queue: &mut Vec<AState>, names: &mut BTreeMap<AState, String>| {
        if let Some(n) = names.get(a) {
            return n.clone();
        }
        let name = match a {
            AState::Draw => "draw".to_string(),
            AState::AcceptCoin => "convinced".to_string(),
            AState::StartSim { strat } => format!("sim:c{}p{}", strat.counter, strat.parity),
            _ => {
                counter += 1;
                format!("v{counter}")
            }
        };
        names.insert(a.clone(), name.clone());
        queue.push(a.clone());
        name
    };

    let kind = match style {
        VerifierStyle::TwoWayRestarting => Kind::TwoPca,
        VerifierStyle::OneWaySinglePass => Kind::OnePca,
    };
    let mut b = SpecBuilder::new(kind);
    b.state("draw").accept("acc").reject("rej");
    b.sigma(target.alphabet().sigma());
    b.comm_alphabet(&['a', 'b', '#']);

    intern(&AState::Draw, &mut queue, &mut names);
    let mut qi = 0usize;
    let endmarked = target.alphabet().endmarked();
    while qi < queue.len() {
        let astate = queue[qi].clone();
        qi += 1;
        let name = names[&astate].clone();
        let is_comm = matches!(astate, AState::Await { .. });
        if is_comm {
            b.comm(&name, REQUEST);
        }
        let symbols: Vec<char> = if is_comm {
            vec!['a', 'b', '#']
        } else {
            endmarked.clone()
        };
        for &sym in &symbols {
            for theta in [CounterStatus::Zero, CounterStatus::Nonzero] {
                let outcomes: Vec<AOutcome> = match &astate {
                    AState::Draw => {
                        if sym == CENT && theta == CounterStatus::Zero {
                            compiler.draw_outcomes()
                        } else {
                            vec![AOutcome::to(Rational::one(), ATarget::Reject)]
                        }
                    }
                    AState::StartSim { strat } => {
                        if sym == CENT {
                            compiler.start_sim(*strat)
                        } else {
                            vec![AOutcome::to(Rational::one(), ATarget::Reject)]
                        }
                    }
                    AState::Await { .. } => compiler.await_symbol(&astate, sym, theta),
                    AState::ApplyStep { .. } => compiler.apply_step(&astate, sym, theta),
                    AState::AcceptCoin => compiler.accept_coin(),
                };
                let raw = outcomes
                    .into_iter()
                    .map(|o| {
                        let action = match o.target {
                            ATarget::Accept => RawAction::go("acc", o.mv, &[o.delta]),
                            ATarget::Reject => RawAction::go("rej", o.mv, &[o.delta]),
                            ATarget::Restart => RawAction::restart(),
                            ATarget::Go(a) => {
                                let n = intern(&a, &mut queue, &mut names);
                                RawAction::go(n, o.mv, &[o.delta])
                            }
                        };
                        (o.weight, action)
                    })
                    .collect();
                b.prob(&name, sym, &[theta], raw);
            }
        }
    }

    let spec = b.build()?;
    Ok(Verifier {
        spec,
        style,
        params,
        target: target.clone(),
    })
}

/// The restart-based verifier (a 2pca with communication states).
pub fn two_way_verifier(
    target: &MachineSpec,
    params: ProtocolParams,
) -> Result<Verifier, ProtocolError> {
    build_verifier(target, params, VerifierStyle::TwoWayRestarting)
}

/// The single-pass verifier (a 1pca with communication states).
pub fn one_way_verifier(
    target: &MachineSpec,
    params: ProtocolParams,
) -> Result<Verifier, ProtocolError> {
    build_verifier(target, params, VerifierStyle::OneWaySinglePass)
}
