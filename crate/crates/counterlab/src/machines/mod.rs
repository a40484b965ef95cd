//! Data model, validation, and file format for every automaton kind, plus the
//! tape/counter/pebble semantics shared by the engines.
//!
//! Specs are immutable after validation and shareable across threads;
//! configurations are values owned by each run.

mod builder;
mod format;
mod kind;
mod spec;

pub use builder::SpecBuilder;
pub use format::{parse_machine, parse_raw, print_machine};
pub use kind::{Branching, Kind, StepSignature};
pub use spec::{
    status_combos, validate_head_safety, Action, Alphabet, Configuration, CounterStatus,
    HeadSafetyViolation, MachineSpec, Move, PebbleAction, QuantumPart, RawAction, RawMachine,
    RawOp, RawQuantum, RawRhs, RawRow, Rhs, RowKey, StateId, Tape, CENT, DOLLAR,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("superoperator completeness failed:\n  {}", .0.join("\n  "))]
    Completeness(Vec<String>),
    #[error("{0}")]
    BadInput(String),
}

/// Returns the step signature of a machine kind: the observation arity of
/// its transition domain and the action arity of its codomain.
pub fn step_signature(kind: Kind) -> StepSignature {
    kind.signature()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Rational;

    /// A two-way deterministic one-counter machine for { a^n b^n }: count up
    /// on a, down on b, accept at $ on zero.
    pub fn anbn_2dca() -> MachineSpec {
        use CounterStatus::*;
        use Move::*;
        let mut b = SpecBuilder::new(Kind::TwoDca);
        b.state("s1").accept("acc").reject("rej").sigma(&['a', 'b']);
        for st in [Zero, Nonzero] {
            b.det("s1", CENT, &[st], RawAction::go("s1", Right, &[0]));
            b.det("s1", 'a', &[st], RawAction::go("s1", Right, &[1]));
            b.det("match", 'a', &[st], RawAction::go("rej", Stay, &[0]));
        }
        // first b starts matching; b at zero means too many b's
        b.det("s1", 'b', &[Nonzero], RawAction::go("match", Right, &[-1]));
        b.det("s1", 'b', &[Zero], RawAction::go("rej", Stay, &[0]));
        b.det("s1", DOLLAR, &[Zero], RawAction::go("acc", Stay, &[0]));
        b.det("s1", DOLLAR, &[Nonzero], RawAction::go("rej", Stay, &[0]));
        b.det("match", 'b', &[Nonzero], RawAction::go("match", Right, &[-1]));
        b.det("match", 'b', &[Zero], RawAction::go("rej", Stay, &[0]));
        b.det("match", DOLLAR, &[Zero], RawAction::go("acc", Stay, &[0]));
        b.det("match", DOLLAR, &[Nonzero], RawAction::go("rej", Stay, &[0]));
        b.det("match", CENT, &[Zero], RawAction::go("rej", Stay, &[0]));
        b.det("match", CENT, &[Nonzero], RawAction::go("rej", Stay, &[0]));
        b.build().expect("anbn 2dca is valid")
    }

    #[test]
    fn anbn_machine_validates() {
        let spec = anbn_2dca();
        assert_eq!(spec.kind(), Kind::TwoDca);
        assert_eq!(spec.states().len(), 4);
    }

    #[test]
    fn canonical_round_trip() {
        let spec = anbn_2dca();
        let text = print_machine(&spec);
        let reparsed = parse_machine(&text).expect("canonical output parses");
        assert_eq!(spec, reparsed);
        // byte stability
        assert_eq!(print_machine(&reparsed), text);
    }

    #[test]
    fn bad_probability_sum_is_named() {
        let mut b = SpecBuilder::new(Kind::TwoPca);
        b.state("s1").accept("acc").reject("rej").sigma(&['a']);
        use CounterStatus::*;
        use Move::*;
        for sym in [CENT, 'a', DOLLAR] {
            for st in [Zero, Nonzero] {
                b.prob(
                    "s1",
                    sym,
                    &[st],
                    vec![
                        (Rational::ratio(1, 2), RawAction::go("acc", Stay, &[0])),
                        (Rational::ratio(1, 3), RawAction::go("rej", Stay, &[0])),
                    ],
                );
            }
        }
        let err = b.build().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sum to 5/6"), "got: {msg}");
    }

    #[test]
    fn head_safety_violation_reported() {
        let mut b = SpecBuilder::new(Kind::TwoDca);
        b.state("s1").accept("acc").reject("rej").sigma(&[]);
        use CounterStatus::*;
        use Move::*;
        for st in [Zero, Nonzero] {
            b.det("s1", CENT, &[st], RawAction::go("s1", Left, &[0]));
            b.det("s1", DOLLAR, &[st], RawAction::go("acc", Stay, &[0]));
        }
        let raw = b.raw();
        let violations = validate_head_safety(&raw);
        assert_eq!(violations.len(), 2);
        assert!(raw.validate().is_err());
    }

    #[test]
    fn missing_rows_rejected() {
        let mut b = SpecBuilder::new(Kind::TwoDca);
        b.state("s1").accept("acc").reject("rej").sigma(&['a']);
        b.det(
            "s1",
            CENT,
            &[CounterStatus::Zero],
            RawAction::go("acc", Move::Stay, &[0]),
        );
        match b.build() {
            Err(MachineError::Validation(errs)) => {
                assert!(errs.iter().any(|e| e.contains("missing transition")));
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_float_literals() {
        let text = r#"
kind = "2dca"
states = ["s1", "a", "r"]
accept = "a"
reject = "r"
sigma = []
[[transitions]]
state = "s1"
symbol = "¢"
status = ["zero"]
p = 0.5
next = "a"
"#;
        match parse_machine(text) {
            Err(MachineError::Syntax(msg)) => assert!(msg.contains("floating-point")),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }
}
