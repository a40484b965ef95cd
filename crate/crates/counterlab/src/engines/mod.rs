//! Execution semantics: deterministic trajectories, exhaustive
//! nondeterministic search, exact probability computation with certified
//! truncation bounds, exact absorption analysis of rounds, seeded Monte
//! Carlo, and recognition-mode classification.
//!
//! Engines are pure given (spec, input, seed); specs are shared immutably.

mod absorb;
mod classify;
mod exact;
mod mc;
mod report;
mod run;
mod system;
mod trace;

pub use absorb::{round_absorption, AbsorbOptions};
pub use classify::{classify_mode, LabeledReport, RecognitionMode};
pub use exact::{exact_probability, round_truncation, ExactOptions};
pub use mc::{clopper_pearson, monte_carlo, sample_trajectory, trial_rng, MCOptions, TrajectoryEvent};
pub use report::{Decision, MCEstimate, ProbabilityReport, ReportOutcome, RoundReport, RunResult};
pub use run::{explore_nondeterministic, run_deterministic, ExploreResult};
pub use system::{common_denominator_of, Child, MachineSystem, System};
pub use trace::{follow_path, TracePoint};

use thiserror::Error;

use crate::exactmath::{ExactError, Rational};
use crate::machines::{Kind, MachineError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("counter {counter} decremented at zero")]
    CounterUnderflow { counter: usize },
    #[error("expected {expected}, found kind {found}")]
    WrongKind { expected: &'static str, found: Kind },
    #[error("nondeterministic machines have no step distribution; use explore_nondeterministic")]
    Nondeterministic,
    #[error("cannot step a communication state without a prover")]
    CommunicationState,
    #[error("no transition row for {0}")]
    MissingRow(String),
    #[error("round analysis needs full exploration but unresolved mass remains")]
    Unresolved,
    #[error("inconclusive: live mass straddles a threshold while checking the {0} mode")]
    Inconclusive(String),
    #[error("error bound must satisfy 0 <= epsilon < 1, got {0}")]
    BadEpsilon(Rational),
    #[error("monte carlo needs at least one trial")]
    NoTrials,
    #[error("internal: absorption system singular")]
    SolverSingular,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Rational;
    use crate::machines::{
        Kind, MachineSpec, RawAction, SpecBuilder, CENT, DOLLAR,
    };
    use crate::machines::{Move::*, CounterStatus::*};

    pub fn anbn_2dca() -> MachineSpec {
        crate::builtin::fixtures::anbn_2dca()
    }

    fn fair_coin_2pca() -> MachineSpec {
        let mut b = SpecBuilder::new(Kind::TwoPca);
        b.state("s1").accept("acc").reject("rej").sigma(&[]);
        for st in [Zero, Nonzero] {
            for sym in [CENT, DOLLAR] {
                b.prob(
                    "s1",
                    sym,
                    &[st],
                    vec![
                        (Rational::ratio(1, 2), RawAction::go("acc", Stay, &[0])),
                        (Rational::ratio(1, 2), RawAction::go("rej", Stay, &[0])),
                    ],
                );
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn anbn_runs() {
        let spec = anbn_2dca();
        let r = run_deterministic(&spec, "aabb", 1000, true).unwrap();
        assert_eq!(r.decision, Decision::Accept);
        // ¢, a, a, b, b, $ -> |x̃| steps
        assert_eq!(r.steps, 6);
        let r = run_deterministic(&spec, "aab", 1000, false).unwrap();
        assert_eq!(r.decision, Decision::Reject);
        let r = run_deterministic(&spec, "", 1000, false).unwrap();
        assert_eq!(r.decision, Decision::Accept);
        let r = run_deterministic(&spec, "ba", 1000, false).unwrap();
        assert_eq!(r.decision, Decision::Reject);
    }

    #[test]
    fn fair_coin_exact_bounds() {
        let spec = fair_coin_2pca();
        let sys = MachineSystem::new(&spec, "").unwrap();
        let report = exact_probability(&sys, &ExactOptions::default()).unwrap();
        assert_eq!(report.accept_lo, Rational::ratio(1, 2));
        assert_eq!(report.reject_lo, Rational::ratio(1, 2));
        assert!(report.live.is_zero());
        assert_eq!(report.horizon, Some(1));
        assert_eq!(report.outcome, ReportOutcome::Converged);
    }

    #[test]
    fn deterministic_machine_in_exact_engine() {
        let spec = anbn_2dca();
        let sys = MachineSystem::new(&spec, "ab").unwrap();
        let report = exact_probability(&sys, &ExactOptions::default()).unwrap();
        assert!(report.accept_lo.is_one());
        assert!(report.live.is_zero());
    }

    #[test]
    fn restart_loop_round_analysis() {
        // accept with 1/4, restart with 3/4 each round
        let mut b = SpecBuilder::new(Kind::TwoPca);
        b.state("s1").accept("acc").reject("rej").sigma(&[]);
        for st in [Zero, Nonzero] {
            b.prob(
                "s1",
                CENT,
                &[st],
                vec![
                    (Rational::ratio(1, 4), RawAction::go("acc", Stay, &[0])),
                    (Rational::ratio(3, 4), RawAction::restart()),
                ],
            );
            b.prob(
                "s1",
                DOLLAR,
                &[st],
                vec![(Rational::one(), RawAction::go("rej", Stay, &[0]))],
            );
        }
        let spec = b.build().unwrap();
        let sys = MachineSystem::new(&spec, "").unwrap();

        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert_eq!(round.accept, Rational::ratio(1, 4));
        assert_eq!(round.restart, Rational::ratio(3, 4));
        assert!(round.reject.is_zero() && round.trapped.is_zero() && round.unresolved.is_zero());

        let totals = round.totals().unwrap();
        assert!(totals.accept_lo.is_one());
        assert!(totals.live.is_zero());

        // truncation converges geometrically on the same machine
        let report =
            exact_probability(&sys, &ExactOptions::with_tolerance("1/1000000".parse().unwrap()))
                .unwrap();
        assert_eq!(report.outcome, ReportOutcome::Converged);
        assert!(report.accept_lo > Rational::ratio(999, 1000));
        assert!(report.reject_lo.is_zero());
    }

    #[test]
    fn nondeterministic_search_finds_shortest_witness() {
        // guess-and-check for strings containing "aa"
        let mut b = SpecBuilder::new(Kind::TwoNca);
        b.state("scan").accept("acc").reject("rej").sigma(&['a', 'b']);
        for st in [Zero, Nonzero] {
            b.nondet("scan", CENT, &[st], vec![RawAction::go("scan", Right, &[0])]);
            b.nondet(
                "scan",
                'a',
                &[st],
                vec![
                    RawAction::go("scan", Right, &[0]),
                    RawAction::go("saw", Right, &[0]),
                ],
            );
            b.nondet("scan", 'b', &[st], vec![RawAction::go("scan", Right, &[0])]);
            b.nondet("scan", DOLLAR, &[st], vec![RawAction::go("rej", Stay, &[0])]);
            b.nondet("saw", 'a', &[st], vec![RawAction::go("acc", Stay, &[0])]);
            b.nondet("saw", 'b', &[st], vec![RawAction::go("rej", Stay, &[0])]);
            b.nondet("saw", CENT, &[st], vec![RawAction::go("rej", Stay, &[0])]);
            b.nondet("saw", DOLLAR, &[st], vec![RawAction::go("rej", Stay, &[0])]);
        }
        let spec = b.build().unwrap();

        let r = explore_nondeterministic(&spec, "baab", 10, 100).unwrap();
        let path = r.accepting_path.expect("baab contains aa");
        assert_eq!(path.last().unwrap().state, spec.accept_state());

        let r = explore_nondeterministic(&spec, "bab", 10, 100).unwrap();
        assert!(r.accepting_path.is_none());
        assert!(r.reachable.contains(&spec.reject_state()));
    }

    #[test]
    fn monte_carlo_is_deterministic_and_concentrates() {
        let spec = fair_coin_2pca();
        let sys = MachineSystem::new(&spec, "").unwrap();
        let opts = MCOptions {
            trials: 20_000,
            seed: 7,
            step_cap: 10,
        };
        let a = monte_carlo(&sys, &opts).unwrap();
        let b = monte_carlo(&sys, &opts).unwrap();
        assert_eq!(a.accepts, b.accepts);
        assert!(a.counts_consistent());
        assert!(a.accept_ci.0 < 0.5 && 0.5 < a.accept_ci.1);
        assert_eq!(a.timeouts, 0);
    }

    #[test]
    fn classify_requires_certified_bounds() {
        let mk = |accept_lo: Rational, reject_lo: Rational, live: Rational| ProbabilityReport::new(
            accept_lo,
            reject_lo,
            live,
            None,
            ReportOutcome::Limit,
        );
        // negative one-sided at epsilon 1/5
        let reports = vec![
            LabeledReport {
                input: "m".into(),
                member: true,
                report: mk(Rational::one(), Rational::zero(), Rational::zero()),
            },
            LabeledReport {
                input: "n".into(),
                member: false,
                report: mk(Rational::ratio(1, 5), Rational::ratio(4, 5), Rational::zero()),
            },
        ];
        let mode = classify_mode(&reports, &Rational::ratio(1, 5)).unwrap();
        assert_eq!(mode, RecognitionMode::NegativeOneSided);

        // machine accepting everything tested against nonmembers -> none
        let reports = vec![
            LabeledReport {
                input: "m".into(),
                member: true,
                report: mk(Rational::one(), Rational::zero(), Rational::zero()),
            },
            LabeledReport {
                input: "n".into(),
                member: false,
                report: mk(Rational::one(), Rational::zero(), Rational::zero()),
            },
        ];
        let mode = classify_mode(&reports, &Rational::ratio(1, 5)).unwrap();
        assert_eq!(mode, RecognitionMode::None);

        // straddling live mass -> inconclusive
        let reports = vec![LabeledReport {
            input: "n".into(),
            member: false,
            report: mk(Rational::zero(), Rational::ratio(1, 2), Rational::ratio(1, 2)),
        }];
        assert!(matches!(
            classify_mode(&reports, &Rational::ratio(1, 5)),
            Err(EngineError::Inconclusive(_))
        ));
    }
}
