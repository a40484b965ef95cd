//! Provers: the honest counter-trace streamer and the adversarial fixtures.
//!
//! A prover is any terminating host procedure mapping (input, within-round
//! communication history) to the next cell symbol. Restarts reset the
//! history, so the honest prover replays its stream from the start each
//! round; adaptive behavior across rounds is possible in sampled sessions
//! but the fixtures below are round-stationary, which is what exact session
//! analysis requires.

use std::collections::BTreeMap;

use crate::engines::{run_deterministic, Decision};
use crate::machines::{Kind, MachineSpec, Move, Rhs, RowKey, Tape, CounterStatus};

use super::ProtocolError;

pub trait Prover {
    fn name(&self) -> &str;
    /// The next cell symbol, given the input and the (emitted, replied)
    /// history of the current round.
    fn respond(&self, input: &str, round_history: &[(char, char)]) -> char;
}

/// The honest prover: streams `a^{u_1} b^{v_1} # a^{u_2} b^{v_2} # ...`
/// where `(u_j, v_j)` are the target machine's counter contents after its
/// j-th step on the input. Replays from the start after every restart.
#[derive(Clone, Debug)]
pub struct HonestProver {
    stream: String,
}

impl HonestProver {
    pub fn stream(&self) -> &str {
        &self.stream
    }

    pub fn len(&self) -> usize {
        self.stream.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.stream.is_empty()
    }
}

/// The counter trace of a halting two-counter run: counters after each step,
/// excluding the halting step (whose statuses the verifier never needs).
pub fn counter_trace(
    target: &MachineSpec,
    input: &str,
    cap: u64,
) -> Result<Vec<(i64, i64)>, ProtocolError> {
    if target.kind() != Kind::OneD2ca {
        return Err(ProtocolError::ConfigError(format!(
            "expected a 1d2ca target, found {}",
            target.kind()
        )));
    }
    let run = run_deterministic(target, input, cap, true).map_err(ProtocolError::Engine)?;
    if run.decision == Decision::Running {
        return Err(ProtocolError::NonHalting { cap });
    }
    let trace = run.trace.expect("trace requested");
    // trace[0] is the initial configuration; the last entry is the halting
    // step's configuration
    Ok(trace[1..trace.len() - 1]
        .iter()
        .map(|c| (c.counters[0], c.counters[1]))
        .collect())
}

pub fn stream_from_trace(trace: &[(i64, i64)]) -> String {
    let mut out = String::new();
    for &(u, v) in trace {
        for _ in 0..u {
            out.push('a');
        }
        for _ in 0..v {
            out.push('b');
        }
        out.push('#');
    }
    out
}

/// Builds the honest prover by running the target; errors if the target does
/// not halt within `cap` steps.
pub fn honest_prover(
    target: &MachineSpec,
    input: &str,
    cap: u64,
) -> Result<HonestProver, ProtocolError> {
    Ok(HonestProver {
        stream: stream_from_trace(&counter_trace(target, input, cap)?),
    })
}

impl Prover for HonestProver {
    fn name(&self) -> &str {
        "honest"
    }

    fn respond(&self, _input: &str, history: &[(char, char)]) -> char {
        self.stream.chars().nth(history.len()).unwrap_or('#')
    }
}

/// Always claims both counters are zero.
pub struct Flatline;

impl Prover for Flatline {
    fn name(&self) -> &str {
        "flatline"
    }

    fn respond(&self, _input: &str, _history: &[(char, char)]) -> char {
        '#'
    }
}

/// Honest except that one increment is dropped at a chosen position (the
/// first counter symbol of the stream by default).
pub struct OffByOne {
    stream: String,
}

impl OffByOne {
    pub fn new(target: &MachineSpec, input: &str, cap: u64) -> Result<Self, ProtocolError> {
        let honest = honest_prover(target, input, cap)?.stream;
        let mut stream: String = honest.clone();
        if let Some(pos) = honest.find(['a', 'b']) {
            stream.remove(pos);
        }
        Ok(OffByOne { stream })
    }

    pub fn stream(&self) -> &str {
        &self.stream
    }
}

impl Prover for OffByOne {
    fn name(&self) -> &str {
        "off-by-one"
    }

    fn respond(&self, _input: &str, history: &[(char, char)]) -> char {
        self.stream.chars().nth(history.len()).unwrap_or('#')
    }
}

/// A valid prefix, then an infinite run of a's.
pub struct Stall {
    prefix: String,
}

impl Stall {
    /// Stalls right after the first block by default.
    pub fn new(target: &MachineSpec, input: &str, cap: u64) -> Result<Self, ProtocolError> {
        let honest = honest_prover(target, input, cap)?.stream;
        let cut = honest.find('#').map(|i| i + 1).unwrap_or(0);
        Ok(Stall {
            prefix: honest[..cut].to_string(),
        })
    }
}

impl Prover for Stall {
    fn name(&self) -> &str {
        "stall"
    }

    fn respond(&self, _input: &str, history: &[(char, char)]) -> char {
        self.prefix.chars().nth(history.len()).unwrap_or('a')
    }
}

/// The honest stream of the run on a different input.
pub struct WrongBranch {
    stream: String,
}

impl WrongBranch {
    pub fn new(target: &MachineSpec, other_input: &str, cap: u64) -> Result<Self, ProtocolError> {
        Ok(WrongBranch {
            stream: honest_prover(target, other_input, cap)?.stream,
        })
    }
}

impl Prover for WrongBranch {
    fn name(&self) -> &str {
        "wrong-branch"
    }

    fn respond(&self, _input: &str, history: &[(char, char)]) -> char {
        self.stream.chars().nth(history.len()).unwrap_or('#')
    }
}

/// Streams whatever drives the verifier's tracked simulation into the accept
/// state fastest: block 1 is truthful (the verifier knows it exactly), later
/// blocks claim whichever statuses reach acceptance in the fewest symbols,
/// found by uniform-cost search over (state, head, claimed statuses).
pub struct AcceptRusher {
    stream: String,
}

impl AcceptRusher {
    pub fn new(target: &MachineSpec, input: &str, cap: u64) -> Result<Self, ProtocolError> {
        let honest = honest_prover(target, input, cap)?;
        let stream = rush_stream(target, input).unwrap_or_else(|| honest.stream.clone());
        Ok(AcceptRusher { stream })
    }

    pub fn stream(&self) -> &str {
        &self.stream
    }
}

impl Prover for AcceptRusher {
    fn name(&self) -> &str {
        "accept-rusher"
    }

    fn respond(&self, _input: &str, history: &[(char, char)]) -> char {
        self.stream.chars().nth(history.len()).unwrap_or('#')
    }
}

fn target_step(
    target: &MachineSpec,
    tape: &Tape,
    state: usize,
    head: usize,
    statuses: (bool, bool),
) -> Option<(usize, usize, i8, i8)> {
    let key = RowKey {
        state,
        symbol: tape.symbol(head),
        statuses: vec![
            if statuses.0 { CounterStatus::Nonzero } else { CounterStatus::Zero },
            if statuses.1 { CounterStatus::Nonzero } else { CounterStatus::Zero },
        ],
        pebble: None,
    };
    match target.row(&key) {
        Some(Rhs::Det(crate::machines::Action::Go { state, mv, deltas, .. })) => {
            let head2 = match mv {
                Move::Right => head + 1,
                _ => head,
            };
            Some((*state, head2, deltas[0], deltas[1]))
        }
        _ => None,
    }
}

fn rush_stream(target: &MachineSpec, input: &str) -> Option<String> {
    let tape = Tape::new(input);
    // step 1 from the known all-zero statuses
    let (s1, h1, d1, d2) = target_step(target, &tape, target.initial_state(), 1, (false, false))?;
    if s1 == target.accept_state() {
        return Some(String::new());
    }
    if s1 == target.reject_state() {
        return None;
    }
    let block1: String = {
        let mut b = String::new();
        for _ in 0..d1.max(0) {
            b.push('a');
        }
        for _ in 0..d2.max(0) {
            b.push('b');
        }
        b.push('#');
        b
    };
    // step 2 uses block 1's true statuses; afterwards claims are free
    let truth1 = (d1 > 0, d2 > 0);
    let (s2, h2, _, _) = target_step(target, &tape, s1, h1, truth1)?;
    if s2 == target.accept_state() {
        return Some(block1);
    }
    if s2 == target.reject_state() {
        return None;
    }

    // uniform-cost search over (state, head) with free status claims;
    // cost of claiming (ca, cb) for a block is ca + cb + 1 symbols
    let mut dist: BTreeMap<(usize, usize), (u64, Option<((usize, usize), (bool, bool))>)> =
        BTreeMap::new();
    dist.insert((s2, h2), (0, None));
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(std::cmp::Reverse((0u64, (s2, h2))));
    let mut goal: Option<(usize, usize)> = None;
    while let Some(std::cmp::Reverse((d, node))) = heap.pop() {
        if dist.get(&node).map(|x| x.0) != Some(d) {
            continue;
        }
        let (s, h) = node;
        for claim in [(false, false), (true, false), (false, true), (true, true)] {
            let cost = claim.0 as u64 + claim.1 as u64 + 1;
            let Some((s2, h2, _, _)) = target_step(target, &tape, s, h, claim) else {
                continue;
            };
            if s2 == target.reject_state() {
                continue;
            }
            if s2 == target.accept_state() {
                // reaching acceptance needs the block realizing this claim
                let d2 = d + cost;
                let better = goal.is_none() || dist.get(&(usize::MAX, 0)).map(|x| x.0 > d2).unwrap_or(true);
                if better {
                    dist.insert((usize::MAX, 0), (d2, Some((node, claim))));
                    goal = Some((usize::MAX, 0));
                }
                continue;
            }
            let d2 = d + cost;
            if dist.get(&(s2, h2)).map(|x| x.0 <= d2).unwrap_or(false) {
                continue;
            }
            dist.insert((s2, h2), (d2, Some((node, claim))));
            heap.push(std::cmp::Reverse((d2, (s2, h2))));
        }
    }
    let mut node = goal?;
    // reconstruct claimed blocks back to the start
    let mut claims = Vec::new();
    while let Some((_, Some((prev, claim)))) = dist.get(&node) {
        claims.push(*claim);
        node = *prev;
    }
    claims.reverse();
    let mut stream = block1;
    for (ca, cb) in claims {
        if ca {
            stream.push('a');
        }
        if cb {
            stream.push('b');
        }
        stream.push('#');
    }
    Some(stream)
}

/// The five named adversaries against a target and input. `alt_input` feeds
/// the wrong-branch fixture.
pub fn adversarial_provers(
    target: &MachineSpec,
    input: &str,
    alt_input: &str,
    cap: u64,
) -> Result<Vec<Box<dyn Prover>>, ProtocolError> {
    Ok(vec![
        Box::new(Flatline),
        Box::new(OffByOne::new(target, input, cap)?),
        Box::new(Stall::new(target, input, cap)?),
        Box::new(WrongBranch::new(target, alt_input, cap)?),
        Box::new(AcceptRusher::new(target, input, cap)?),
    ])
}
