//! Simulated recognizers with explicit error contracts.
//!
//! These stand in for externally-defined machines that other constructions
//! call as black boxes. A recognizer consults an exact membership oracle,
//! draws a geometric halting time, and emits a decision honoring its error
//! contract. Exact engines use the decision distribution directly; Monte
//! Carlo uses the per-instance seeded generator.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engines::{trial_rng, Decision};
use crate::exactmath::Rational;

use super::languages::{membership, Language};
use super::BuiltinError;

/// The error contract a black-box recognizer honors per completed run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ErrorKind {
    /// Members are never rejected; nonmembers are rejected with probability
    /// exactly `1 - epsilon`.
    NegativeOneSided,
    /// Both sides are decided correctly with probability exactly `1 - epsilon`.
    Bounded,
}

#[derive(Clone, Debug)]
pub struct BlackBoxRecognizer {
    lang: Language,
    kind: ErrorKind,
    epsilon: Rational,
    /// Per-step halting probability of the geometric halting time.
    halt_p: Rational,
    seed: u64,
    rng: ChaCha8Rng,
    runs: u64,
}

/// One in-progress run, exposing the step-by-step interface host
/// constructions interleave inside their loops.
#[derive(Clone, Debug)]
pub struct BlackBoxRun {
    remaining: u64,
    decision: Decision,
    pub steps_total: u64,
}

impl BlackBoxRun {
    /// Advances one step; returns the decision once the run halts.
    pub fn advance(&mut self) -> Option<Decision> {
        if self.remaining > 0 {
            self.remaining -= 1;
        }
        (self.remaining == 0).then_some(self.decision)
    }

    pub fn poll(&self) -> Option<Decision> {
        (self.remaining == 0).then_some(self.decision)
    }
}

impl BlackBoxRecognizer {
    pub fn new(
        lang: Language,
        kind: ErrorKind,
        epsilon: Rational,
        seed: u64,
    ) -> Result<Self, BuiltinError> {
        if epsilon.is_negative() || epsilon >= Rational::one() {
            return Err(BuiltinError::BadEpsilon(epsilon));
        }
        Ok(BlackBoxRecognizer {
            lang,
            kind,
            epsilon,
            halt_p: Rational::ratio(1, 2),
            seed,
            rng: trial_rng(seed, 0),
            runs: 0,
        })
    }

    pub fn language(&self) -> Language {
        self.lang
    }

    pub fn error_kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    /// A clone with an independent generator derived from (seed, salt);
    /// recognizers are not shared across threads.
    pub fn derive(&self, salt: u64) -> Self {
        let mut other = self.clone();
        other.rng = trial_rng(self.seed, salt);
        other.runs = 0;
        other
    }

    /// Exact per-run decision distribution on `x`: (accept, reject).
    pub fn decision_distribution(&self, x: &str) -> (Rational, Rational) {
        let member = membership(self.lang, x);
        let one = Rational::one();
        match (self.kind, member) {
            (ErrorKind::NegativeOneSided, true) => (one.clone(), &one - &one),
            (ErrorKind::NegativeOneSided, false) => {
                (self.epsilon.clone(), &one - &self.epsilon)
            }
            (ErrorKind::Bounded, true) => (&one - &self.epsilon, self.epsilon.clone()),
            (ErrorKind::Bounded, false) => (self.epsilon.clone(), &one - &self.epsilon),
        }
    }

    /// Starts a sampled run on `x`: decision drawn from the contract
    /// distribution, halting time drawn geometrically.
    pub fn start_run(&mut self, x: &str) -> BlackBoxRun {
        self.runs += 1;
        let (p_accept, _) = self.decision_distribution(x);
        let accept = self.bernoulli(&p_accept);
        let mut steps = 1u64;
        while !self.bernoulli(&self.halt_p.clone()) && steps < 1_000_000 {
            steps += 1;
        }
        BlackBoxRun {
            remaining: steps,
            decision: if accept { Decision::Accept } else { Decision::Reject },
            steps_total: steps,
        }
    }

    /// One full sampled run.
    pub fn decide(&mut self, x: &str) -> Decision {
        let mut run = self.start_run(x);
        loop {
            if let Some(d) = run.advance() {
                return d;
            }
        }
    }

    fn bernoulli(&mut self, p: &Rational) -> bool {
        if p.is_zero() {
            return false;
        }
        if p.is_one() {
            return true;
        }
        let num = num_traits::ToPrimitive::to_u64(p.numer()).expect("small contract rationals");
        let den = num_traits::ToPrimitive::to_u64(p.denom()).expect("small contract rationals");
        self.rng.gen_range(0..den) < num
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_never_rejected_under_negative_one_sided() {
        let mut bb = BlackBoxRecognizer::new(
            Language::Twin,
            ErrorKind::NegativeOneSided,
            Rational::ratio(1, 5),
            42,
        )
        .unwrap();
        for _ in 0..10_000 {
            assert_eq!(bb.decide("ab#ab"), Decision::Accept);
        }
    }

    #[test]
    fn nonmember_rejection_frequency_matches_contract() {
        let mut bb = BlackBoxRecognizer::new(
            Language::Square,
            ErrorKind::NegativeOneSided,
            Rational::ratio(1, 3),
            7,
        )
        .unwrap();
        // "ab" is a member (1 = 1^2): never rejected
        for _ in 0..2_000 {
            assert_eq!(bb.decide("ab"), Decision::Accept);
        }
        // "abb" is a nonmember: rejected with probability 2/3
        let trials = 30_000;
        let rejects = (0..trials)
            .filter(|_| bb.decide("abb") == Decision::Reject)
            .count();
        let freq = rejects as f64 / trials as f64;
        assert!((freq - 2.0 / 3.0).abs() < 0.02, "freq {freq}");
    }

    #[test]
    fn derived_recognizers_replay_deterministically() {
        let base = BlackBoxRecognizer::new(
            Language::Greater,
            ErrorKind::Bounded,
            Rational::ratio(1, 4),
            3,
        )
        .unwrap();
        let run = |mut bb: BlackBoxRecognizer| {
            (0..200).map(|_| bb.decide("aab") == Decision::Accept).collect::<Vec<_>>()
        };
        assert_eq!(run(base.derive(5)), run(base.derive(5)));
    }

    #[test]
    fn step_interface_halts() {
        let mut bb = BlackBoxRecognizer::new(
            Language::Greater,
            ErrorKind::Bounded,
            Rational::ratio(1, 4),
            9,
        )
        .unwrap();
        let mut run = bb.start_run("aab");
        assert!(run.poll().is_none() || run.steps_total == 0);
        let mut guard = 0;
        loop {
            guard += 1;
            assert!(guard < 10_000_000);
            if let Some(d) = run.advance() {
                // member of GREATER (2 > 1): mostly accepted
                let _ = d;
                break;
            }
        }
    }
}
