//! Machine kinds and their step signatures.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Every automaton family the workbench can describe.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Kind {
    /// Two-way deterministic one-counter automaton.
    TwoDca,
    /// Two-way nondeterministic one-counter automaton.
    TwoNca,
    /// Two-way probabilistic one-counter automaton.
    TwoPca,
    /// One-way probabilistic one-counter automaton (head never moves left).
    OnePca,
    /// One-way deterministic two-counter automaton.
    OneD2ca,
    /// Two-way finite automaton with a quantum register and classical states.
    TwoQcfa,
    /// Two-way one-counter automaton with a quantum register.
    TwoQcca,
    /// Two-way probabilistic finite automaton with one pebble.
    PebblePfa,
    /// Two-way quantum-classical finite automaton with one pebble.
    PebbleQcfa,
}

/// How the right-hand side of a transition row branches.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Branching {
    Deterministic,
    Nondeterministic,
    Probabilistic,
    /// A superoperator is applied; the observed outcome selects the
    /// deterministic classical action.
    Quantum,
}

/// The domain/codomain arity of a kind's transition function. Engines use it
/// to drive any spec generically: inputs are the scanned symbol, one counter
/// status per counter, and the pebble sense when present; outputs are a state,
/// a head move, one counter delta per counter, and a pebble action.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct StepSignature {
    pub counters: usize,
    pub pebble: bool,
    /// One-way kinds may not move the head left.
    pub one_way: bool,
    pub branching: Branching,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::TwoDca,
        Kind::TwoNca,
        Kind::TwoPca,
        Kind::OnePca,
        Kind::OneD2ca,
        Kind::TwoQcfa,
        Kind::TwoQcca,
        Kind::PebblePfa,
        Kind::PebbleQcfa,
    ];

    pub fn signature(self) -> StepSignature {
        use Branching::*;
        let (counters, pebble, one_way, branching) = match self {
            Kind::TwoDca => (1, false, false, Deterministic),
            Kind::TwoNca => (1, false, false, Nondeterministic),
            Kind::TwoPca => (1, false, false, Probabilistic),
            Kind::OnePca => (1, false, true, Probabilistic),
            Kind::OneD2ca => (2, false, true, Deterministic),
            Kind::TwoQcfa => (0, false, false, Quantum),
            Kind::TwoQcca => (1, false, false, Quantum),
            Kind::PebblePfa => (0, true, false, Probabilistic),
            Kind::PebbleQcfa => (0, true, false, Quantum),
        };
        StepSignature {
            counters,
            pebble,
            one_way,
            branching,
        }
    }

    pub fn is_quantum(self) -> bool {
        self.signature().branching == Branching::Quantum
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::TwoDca => "2dca",
            Kind::TwoNca => "2nca",
            Kind::TwoPca => "2pca",
            Kind::OnePca => "1pca",
            Kind::OneD2ca => "1d2ca",
            Kind::TwoQcfa => "2qcfa",
            Kind::TwoQcca => "2qcca",
            Kind::PebblePfa => "pebble-2pfa",
            Kind::PebbleQcfa => "pebble-2qcfa",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown machine kind {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures_match_the_transition_shapes() {
        let s = Kind::TwoPca.signature();
        assert_eq!((s.counters, s.pebble, s.one_way), (1, false, false));
        assert_eq!(s.branching, Branching::Probabilistic);

        let s = Kind::TwoQcfa.signature();
        assert_eq!(s.counters, 0);
        assert_eq!(s.branching, Branching::Quantum);

        let s = Kind::OneD2ca.signature();
        assert_eq!((s.counters, s.one_way), (2, true));
        assert_eq!(s.branching, Branching::Deterministic);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
    }
}
