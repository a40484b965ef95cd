//! Interactive sessions: a verifier and a prover composed into one closed
//! stochastic system, runnable by the standard engines.

use std::fmt;

use crate::engines::{
    exact_probability, monte_carlo, round_absorption, sample_trajectory, trial_rng, AbsorbOptions,
    Child, Decision, EngineError, ExactOptions, MCEstimate, MCOptions, MachineSystem,
    ProbabilityReport, RoundReport, System,
};
use crate::exactmath::Rational;
use crate::machines::Configuration;

use super::prover::{honest_prover, Prover};
use super::verifier::{Verifier, VerifierStyle};
use super::ProtocolError;

/// The one-symbol communication cell.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Cell {
    pub symbol: Option<char>,
}

impl Cell {
    pub fn write(&mut self, sym: char) {
        self.symbol = Some(sym);
    }
}

/// A verifier bound to one prover and one input.
pub struct SessionSystem<'a> {
    machine: MachineSystem<'a>,
    verifier: &'a Verifier,
    prover: &'a dyn Prover,
    input: &'a str,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SessionConfig {
    pub machine: Configuration,
    /// (emitted, replied) pairs since the round started.
    pub history: Vec<(char, char)>,
}

impl<'a> SessionSystem<'a> {
    pub fn new(
        verifier: &'a Verifier,
        prover: &'a dyn Prover,
        input: &'a str,
    ) -> Result<Self, ProtocolError> {
        Ok(SessionSystem {
            machine: MachineSystem::new(&verifier.spec, input).map_err(ProtocolError::Engine)?,
            verifier,
            prover,
            input,
        })
    }
}

impl System for SessionSystem<'_> {
    type Config = SessionConfig;

    fn initial(&self) -> SessionConfig {
        SessionConfig {
            machine: self.verifier.spec.initial_configuration(),
            history: Vec::new(),
        }
    }

    fn step(&self, c: &SessionConfig) -> Result<Vec<(Rational, Child<SessionConfig>)>, EngineError> {
        let spec = &self.verifier.spec;
        let initial_machine = spec.initial_configuration();
        let comm = spec.comm_emit(c.machine.state);
        let (reply, children) = match comm {
            Some(emit) => {
                let mut cell = Cell::default();
                cell.write(emit);
                let reply = self.prover.respond(self.input, &c.history);
                if !spec.comm_alphabet().contains(&reply) {
                    return Err(EngineError::MissingRow(format!(
                        "prover symbol {reply:?} outside the communication alphabet"
                    )));
                }
                cell.write(reply);
                (Some((emit, reply)), self.machine.step_config(&c.machine, Some(reply))?)
            }
            None => (None, self.machine.step_config(&c.machine, None)?),
        };
        Ok(children
            .into_iter()
            .map(|(p, child)| {
                let child = match child {
                    Child::Accept => Child::Accept,
                    Child::Reject => Child::Reject,
                    Child::Config(m2) => {
                        let history = if m2 == initial_machine {
                            Vec::new() // restart: the round history resets
                        } else {
                            let mut h = c.history.clone();
                            if let Some(pair) = reply {
                                h.push(pair);
                            }
                            h
                        };
                        Child::Config(SessionConfig {
                            machine: m2,
                            history,
                        })
                    }
                };
                (p, child)
            })
            .collect())
    }
}

// ---------------------------------------------------------------------------
// transcripts
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Marker {
    Restart,
    Accept,
    Reject,
}

#[derive(Clone, Debug)]
pub struct TranscriptEvent {
    pub round: u64,
    pub step: u64,
    pub emitted: Option<char>,
    pub reply: Option<char>,
    /// Index of the verifier branch sampled at this step.
    pub branch: usize,
    pub marker: Option<Marker>,
}

/// The full message history of one sampled session trajectory.
#[derive(Clone, Debug, Default)]
pub struct Transcript {
    pub events: Vec<TranscriptEvent>,
    pub decision: Option<Decision>,
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            let v = e.emitted.map(String::from).unwrap_or_else(|| "-".into());
            let p = e.reply.map(String::from).unwrap_or_else(|| "-".into());
            write!(f, "{} {} v:{} p:{}", e.round, e.step, v, p)?;
            match e.marker {
                Some(Marker::Restart) => writeln!(f, " RESTART")?,
                Some(Marker::Accept) => writeln!(f, " ACCEPT")?,
                Some(Marker::Reject) => writeln!(f, " REJECT")?,
                None => writeln!(f)?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// session running
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum SessionMethod {
    Exact(ExactOptions),
    Mc(MCOptions),
}

/// Predicted per-round weights shown beside measured values in reports.
#[derive(Clone, Debug, Default)]
pub struct PredictedWeights {
    /// Length of the valid prover stream, when the target halts on the input.
    pub honest_len: Option<usize>,
    /// Two-way style: per-round acceptance 1/(k 2^l) for members.
    pub per_round_accept: Option<Rational>,
    /// Two-way style: per-round honest rejection 1/2^l for nonmembers.
    pub per_round_reject: Option<Rational>,
    /// One-way style: upfront rejection weight and member acceptance weight.
    pub upfront_reject: Option<Rational>,
    pub member_accept: Option<Rational>,
}

pub struct SessionOutcome {
    pub report: Option<ProbabilityReport>,
    pub estimate: Option<MCEstimate>,
    /// Exact per-round absorption of the session (exact mode).
    pub round: Option<RoundReport>,
    pub transcript: Transcript,
    pub predicted: PredictedWeights,
}

/// Predicted weights for a verifier on one input, from the honest stream.
pub fn predictions(verifier: &Verifier, input: &str) -> PredictedWeights {
    let mut out = PredictedWeights::default();
    if let Ok(honest) = honest_prover(&verifier.target, input, 100_000) {
        let l = honest.len();
        out.honest_len = Some(l);
        let pow = Rational::ratio(1, 2).pow(l as u32);
        match verifier.style {
            VerifierStyle::TwoWayRestarting => {
                out.per_round_accept =
                    Some(&pow * &Rational::ratio(1, verifier.params.k as i64));
                out.per_round_reject = Some(pow);
            }
            VerifierStyle::OneWaySinglePass => {
                out.upfront_reject = Some(verifier.params.upfront_reject.clone());
                out.member_accept = Some(Rational::one() - &verifier.params.upfront_reject);
            }
        }
    }
    out
}

/// Composes verifier and prover into one closed system and runs it with the
/// chosen engine; a seeded sample trajectory provides the transcript.
pub fn run_session(
    verifier: &Verifier,
    prover: &dyn Prover,
    input: &str,
    method: &SessionMethod,
) -> Result<SessionOutcome, ProtocolError> {
    let sys = SessionSystem::new(verifier, prover, input)?;
    let (report, estimate, round, transcript_seed, step_cap) = match method {
        SessionMethod::Exact(opts) => {
            let report = exact_probability(&sys, opts).map_err(ProtocolError::Engine)?;
            let round =
                round_absorption(&sys, &AbsorbOptions::default()).map_err(ProtocolError::Engine)?;
            (Some(report), None, Some(round), 0u64, 10_000u64)
        }
        SessionMethod::Mc(opts) => {
            let est = monte_carlo(&sys, opts).map_err(ProtocolError::Engine)?;
            (None, Some(est), None, opts.seed, opts.step_cap)
        }
    };
    let transcript = sample_transcript(&sys, transcript_seed, step_cap)?;
    Ok(SessionOutcome {
        report,
        estimate,
        round,
        transcript,
        predicted: predictions(verifier, input),
    })
}

/// Samples one trajectory and records its communication events.
pub fn sample_transcript(
    sys: &SessionSystem<'_>,
    seed: u64,
    step_cap: u64,
) -> Result<Transcript, ProtocolError> {
    let spec = &sys.verifier.spec;
    let initial = sys.initial();
    let mut events: Vec<TranscriptEvent> = Vec::new();
    let mut round = 1u64;
    let mut current = initial.clone();
    let mut rng = trial_rng(seed, u64::MAX);
    let mut observer = |ev: crate::engines::TrajectoryEvent<'_, SessionConfig>| {
        let comm = spec.comm_emit(current.machine.state);
        let (marker, next) = match ev.child {
            Child::Accept => (Some(Marker::Accept), None),
            Child::Reject => (Some(Marker::Reject), None),
            Child::Config(c2) => {
                if *c2 == initial {
                    (Some(Marker::Restart), Some(c2.clone()))
                } else {
                    (None, Some(c2.clone()))
                }
            }
        };
        if comm.is_some() || marker.is_some() {
            events.push(TranscriptEvent {
                round,
                step: ev.step,
                emitted: comm,
                reply: comm.map(|_| sys.prover.respond(sys.input, &current.history)),
                branch: ev.child_index,
                marker,
            });
        }
        if matches!(marker, Some(Marker::Restart)) {
            round += 1;
        }
        if let Some(n) = next {
            current = n;
        }
    };
    let (decision, _steps) =
        sample_trajectory(sys, &mut rng, step_cap, &mut observer).map_err(ProtocolError::Engine)?;
    drop(observer);
    Ok(Transcript {
        events,
        decision: match decision {
            Decision::Running => None,
            d => Some(d),
        },
    })
}
