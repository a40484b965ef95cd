//! Interactive-proof machinery: communication-cell sessions, trace-checking
//! verifiers with restart or single-pass styles, honest and adversarial
//! provers, and the configuration-length gadget.

mod dtm;
mod gadget;
mod prover;
mod session;
mod verifier;

pub use dtm::{demo_dtm, MiniDtm, TapeMove};
pub use gadget::{GadgetRun, GadgetStatus, LengthGadget, ParityChoice};
pub use prover::{
    adversarial_provers, counter_trace, honest_prover, stream_from_trace, AcceptRusher, Flatline,
    HonestProver, OffByOne, Prover, Stall, WrongBranch,
};
pub use session::{
    predictions, run_session, sample_transcript, Cell, Marker, PredictedWeights, SessionConfig,
    SessionMethod, SessionOutcome, SessionSystem, Transcript, TranscriptEvent,
};
pub use verifier::{
    build_verifier, one_way_verifier, two_way_verifier, CompareStrategy, ProtocolParams, Verifier,
    VerifierStyle, ALL_STRATEGIES, REQUEST,
};

use thiserror::Error;

use crate::engines::EngineError;
use crate::machines::MachineError;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("configuration error: {0}")]
    ConfigError(String),
    #[error("target did not halt within {cap} steps")]
    NonHalting { cap: u64 },
    #[error("malformed stream: {0}")]
    MalformedStream(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// The canonical halting verifier target for { a^n b^n }.
pub fn anbn_1d2ca() -> crate::machines::MachineSpec {
    crate::builtin::fixtures::anbn_1d2ca()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{
        exact_probability, round_absorption, round_truncation, AbsorbOptions, ExactOptions,
    };
    use crate::exactmath::Rational;

    #[test]
    fn honest_streams_match_hand_traces() {
        let target = anbn_1d2ca();
        assert_eq!(honest_prover(&target, "ab", 1000).unwrap().stream(), "#a##");
        assert_eq!(
            honest_prover(&target, "aabb", 1000).unwrap().stream(),
            "#a#aa#a##"
        );
        assert_eq!(honest_prover(&target, "", 1000).unwrap().stream(), "#");
        assert_eq!(
            honest_prover(&target, "aab", 1000).unwrap().stream(),
            "#a#aa#a#"
        );
    }

    #[test]
    fn member_honest_round_weights_are_exact() {
        let target = anbn_1d2ca();
        let verifier = two_way_verifier(&target, ProtocolParams::default()).unwrap();
        for input in ["ab", "aabb", ""] {
            let honest = honest_prover(&target, input, 1000).unwrap();
            let l = honest.len() as u32;
            let sys = SessionSystem::new(&verifier, &honest, input).unwrap();
            let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
            assert!(round.reject.is_zero(), "honest member round rejected on {input:?}");
            let expected =
                Rational::ratio(1, 16) * Rational::ratio(1, 2).pow(l);
            assert_eq!(round.accept, expected, "per-round accept weight on {input:?}");
            assert!(round.unresolved.is_zero());
        }
    }

    #[test]
    fn nonmember_honest_rejects_with_the_stream_weight() {
        let target = anbn_1d2ca();
        let verifier = two_way_verifier(&target, ProtocolParams::default()).unwrap();
        let input = "aab";
        let honest = honest_prover(&target, input, 1000).unwrap();
        let l = honest.len() as u32;
        let sys = SessionSystem::new(&verifier, &honest, input).unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.accept.is_zero());
        assert_eq!(round.reject, Rational::ratio(1, 2).pow(l));
    }

    #[test]
    fn adversaries_keep_the_soundness_ratio() {
        let target = anbn_1d2ca();
        let verifier = two_way_verifier(&target, ProtocolParams::default()).unwrap();
        let input = "aab";
        let provers = adversarial_provers(&target, input, "aabb", 1000).unwrap();
        for prover in &provers {
            let sys = SessionSystem::new(&verifier, prover.as_ref(), input).unwrap();
            let round = round_absorption(&sys, &AbsorbOptions::depth(400)).unwrap();
            let totals = round.totals_with_bounds();
            // accept_hi <= (3/k) reject_lo with live certified below 1e-6
            assert!(
                totals.live < "1e-6".parse::<Rational>().unwrap(),
                "{}: live {}",
                prover.name(),
                totals.live
            );
            let bound = Rational::ratio(3, 16) * &totals.reject_lo;
            assert!(
                totals.accept_hi() <= bound,
                "{}: accept_hi {} vs bound {}",
                prover.name(),
                totals.accept_hi(),
                bound
            );
        }
    }

    #[test]
    fn stall_rounds_terminate_fast() {
        let target = anbn_1d2ca();
        let verifier = two_way_verifier(&target, ProtocolParams::default()).unwrap();
        let stall = Stall::new(&target, "aab", 1000).unwrap();
        let sys = SessionSystem::new(&verifier, &stall, "aab").unwrap();
        let opts = ExactOptions::with_tolerance("1e-6".parse().unwrap()).horizon(200);
        let (round, horizon, _) = round_truncation(&sys, &opts).unwrap();
        assert!(horizon <= 200);
        assert!(round.unresolved < "1e-6".parse::<Rational>().unwrap());
    }

    #[test]
    fn one_way_weights() {
        let target = anbn_1d2ca();
        let verifier = one_way_verifier(&target, ProtocolParams::default()).unwrap();
        // member with honest prover: accepted with weight exactly 4/7
        let honest = honest_prover(&target, "ab", 1000).unwrap();
        let sys = SessionSystem::new(&verifier, &honest, "ab").unwrap();
        let report = exact_probability(&sys, &ExactOptions::default().horizon(500)).unwrap();
        assert_eq!(report.accept_lo, Rational::ratio(4, 7));
        assert_eq!(report.reject_lo, Rational::ratio(3, 7));
        assert!(report.live.is_zero());

        // nonmember, honest prover: rejected outright
        let honest = honest_prover(&target, "aab", 1000).unwrap();
        let sys = SessionSystem::new(&verifier, &honest, "aab").unwrap();
        let report = exact_probability(&sys, &ExactOptions::default().horizon(500)).unwrap();
        assert!(report.reject_lo.is_one());
    }

    #[test]
    fn forced_strategy_catches_the_planted_lie() {
        let target = anbn_1d2ca();
        let input = "aab";
        let lie = OffByOne::new(&target, input, 1000).unwrap();
        // the lie drops the first counter-one increment; both parities of
        // counter one catch it, counter two never does
        let mut caught = 0;
        for strat in ALL_STRATEGIES {
            let params = ProtocolParams {
                force_strategy: Some(strat),
                ..ProtocolParams::default()
            };
            let verifier = two_way_verifier(&target, params).unwrap();
            let sys = SessionSystem::new(&verifier, &lie, input).unwrap();
            let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
            if !round.reject.is_zero() {
                caught += 1;
            }
        }
        assert!(caught >= 1, "no strategy caught the planted lie");
    }

    #[test]
    fn transcripts_are_well_formed() {
        let target = anbn_1d2ca();
        let verifier = two_way_verifier(&target, ProtocolParams::default()).unwrap();
        let honest = honest_prover(&target, "ab", 1000).unwrap();
        let outcome = run_session(
            &verifier,
            &honest,
            "ab",
            &SessionMethod::Exact(ExactOptions::default().horizon(300)),
        )
        .unwrap();
        let text = outcome.transcript.to_string();
        assert!(text.lines().count() > 0);
        assert!(outcome.predicted.honest_len == Some(4));
        let round = outcome.round.unwrap();
        assert_eq!(
            round.accept,
            outcome.predicted.per_round_accept.clone().unwrap()
        );
    }
}
