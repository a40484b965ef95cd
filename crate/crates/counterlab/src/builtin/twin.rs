//! A three-quantum-state two-way machine recognizing { u#u } with negative
//! one-sided error 1/5.
//!
//! Each round sweeps the tape once to check the format (exactly one `#`),
//! rewinds, then encodes `1u1` and `1u2` in base 2 into the first two
//! register amplitudes while scanning left to right. Any outcome other than 1
//! before the right endmarker restarts the machine. At `$` the amplitudes are
//! subtracted: outcome 1 rejects (weight `4 (1/9)^{|x̃|} (enc(1u1)-enc(1u2))^2`,
//! zero exactly when u1 = u2), outcome 2 accepts (weight `(1/9)^{|x̃|}`), and
//! the rest restart. Equal words are therefore never rejected; distinct words
//! are accepted with total probability at most 1/5.

use crate::exactmath::{QMatrix, QVector, Rational, Superoperator};
use crate::machines::{Kind, MachineSpec, RawAction, SpecBuilder, CENT, DOLLAR};
use crate::machines::Move::{Left, Right, Stay};

use crate::engines::{follow_path, EngineError};

fn third() -> Rational {
    Rational::ratio(1, 3)
}

fn op3(elements: &[&[&[i64; 3]; 3]]) -> Superoperator {
    let mats = elements
        .iter()
        .map(|rows| {
            QMatrix::scaled_int(
                third(),
                &rows.iter().map(|r| r.as_slice()).collect::<Vec<_>>(),
            )
        })
        .collect();
    Superoperator::new(mats).expect("static operator")
}

/// Applied at the left endmarker: spreads the start state across the
/// register, seeding both encodings with the leading 1.
pub fn op_start() -> Superoperator {
    op3(&[
        &[&[1, 0, 0], &[1, 0, 0], &[1, 0, 0]],
        &[&[1, 0, 0], &[1, 0, 0], &[2, 0, 0]],
        &[&[0, 0, 0], &[0, 3, 0], &[0, 0, 3]],
    ])
}

/// Appends bit 0 to the first-word encoding.
pub fn op_first_a() -> Superoperator {
    op3(&[
        &[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]],
        &[&[2, 0, 0], &[1, 0, 0], &[0, 0, 0]],
        &[&[0, 2, 2], &[0, 2, -2], &[0, 0, 0]],
    ])
}

/// Appends bit 1 to the first-word encoding.
pub fn op_first_b() -> Superoperator {
    op3(&[
        &[&[2, 0, 1], &[0, 1, 0], &[0, 0, 1]],
        &[&[-1, 0, 2], &[2, 0, 0], &[0, 0, 1]],
        &[&[0, 2, 1], &[0, -2, 1], &[0, 0, 0]],
    ])
}

/// Applied at the separator; a scaled identity mixture.
pub fn op_separator() -> Superoperator {
    op3(&[
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
        &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]],
        &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]],
    ])
}

/// Appends bit 0 to the second-word encoding.
pub fn op_second_a() -> Superoperator {
    op3(&[
        &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]],
        &[&[2, 0, 2], &[2, 0, -2], &[0, 2, 0]],
        &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]],
    ])
}

/// Appends bit 1 to the second-word encoding.
pub fn op_second_b() -> Superoperator {
    op3(&[
        &[&[1, 0, 0], &[0, 2, 1], &[0, 0, 1]],
        &[&[0, 1, -2], &[2, 0, 1], &[-2, 0, 1]],
        &[&[0, 0, 1], &[0, 2, 0], &[0, 0, 0]],
    ])
}

/// Applied at the right endmarker: outcome 1 carries the difference of the
/// two encodings (reject), outcome 2 carries the undisturbed third amplitude
/// (accept).
pub fn op_decide() -> Superoperator {
    op3(&[
        &[&[2, -2, 0], &[0, 0, 0], &[0, 0, 0]],
        &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]],
        &[&[2, 2, 0], &[1, 0, 0], &[0, 1, 0]],
        &[&[0, 0, 2], &[0, 0, 2], &[0, 0, 0]],
    ])
}

/// All seven operators with display names, in tape-reading order.
pub fn all_operators() -> Vec<(&'static str, Superoperator)> {
    vec![
        ("start", op_start()),
        ("first-a", op_first_a()),
        ("first-b", op_first_b()),
        ("separator", op_separator()),
        ("second-a", op_second_a()),
        ("second-b", op_second_b()),
        ("decide", op_decide()),
    ]
}

/// The full machine spec: a 2qcfa over {a, b, #} with a three-state register.
pub fn twin_spec() -> MachineSpec {
    let mut b = SpecBuilder::new(Kind::TwoQcfa);
    b.state("sweep0").accept("acc").reject("rej").sigma(&['a', 'b', '#']);
    b.quantum(&["q1", "q2", "q3"], "q1");
    let id = || Superoperator::identity(3);
    let go = |s: &str, mv| vec![RawAction::go(s, mv, &[])];
    let restart = RawAction::restart;

    // format sweep: count separators, reject at $ unless exactly one
    for sym in ['a', 'b', CENT] {
        b.quantum_row("sweep0", sym, &[], None, id(), go("sweep0", Right));
        b.quantum_row("sweep1", sym, &[], None, id(), go("sweep1", Right));
    }
    b.quantum_row("sweep0", '#', &[], None, id(), go("sweep1", Right));
    b.quantum_row("sweep1", '#', &[], None, id(), go("sweep2", Right));
    for sym in ['a', 'b', '#', CENT] {
        b.quantum_row("sweep2", sym, &[], None, id(), go("sweep2", Right));
    }
    b.quantum_row("sweep0", DOLLAR, &[], None, id(), go("rej", Stay));
    b.quantum_row("sweep2", DOLLAR, &[], None, id(), go("rej", Stay));
    b.quantum_row("sweep1", DOLLAR, &[], None, id(), go("rewind", Left));

    // rewind to the left endmarker
    for sym in ['a', 'b', '#'] {
        b.quantum_row("rewind", sym, &[], None, id(), go("rewind", Left));
    }
    b.quantum_row("rewind", DOLLAR, &[], None, id(), go("rewind", Left));
    b.quantum_row("rewind", CENT, &[], None, id(), go("first", Stay));

    // encoding round
    b.quantum_row(
        "first",
        CENT,
        &[],
        None,
        op_start(),
        vec![RawAction::go("first", Right, &[]), restart(), restart()],
    );
    b.quantum_row(
        "first",
        'a',
        &[],
        None,
        op_first_a(),
        vec![RawAction::go("first", Right, &[]), restart(), restart()],
    );
    b.quantum_row(
        "first",
        'b',
        &[],
        None,
        op_first_b(),
        vec![RawAction::go("first", Right, &[]), restart(), restart()],
    );
    b.quantum_row(
        "first",
        '#',
        &[],
        None,
        op_separator(),
        vec![RawAction::go("second", Right, &[]), restart(), restart()],
    );
    // unreachable once the format check passed
    b.quantum_row("first", DOLLAR, &[], None, id(), go("rej", Stay));
    b.quantum_row(
        "second",
        'a',
        &[],
        None,
        op_second_a(),
        vec![RawAction::go("second", Right, &[]), restart(), restart()],
    );
    b.quantum_row(
        "second",
        'b',
        &[],
        None,
        op_second_b(),
        vec![RawAction::go("second", Right, &[]), restart(), restart()],
    );
    b.quantum_row(
        "second",
        DOLLAR,
        &[],
        None,
        op_decide(),
        vec![
            RawAction::go("rej", Stay, &[]),
            RawAction::go("acc", Stay, &[]),
            restart(),
            restart(),
        ],
    );
    // unreachable rows for totality
    b.quantum_row("second", '#', &[], None, id(), go("rej", Stay));
    b.quantum_row("second", CENT, &[], None, id(), go("rej", Stay));

    b.build().expect("twin machine is valid")
}

/// The literal unconditional register vector after each non-identity step of
/// the first all-outcome-1 round, paired with the scanned symbol. Used to
/// audit the closed-form encoding states.
pub fn twin_round_trace(input: &str) -> Result<Vec<(char, QVector)>, EngineError> {
    let spec = twin_spec();
    let horizon = 3 * (input.chars().count() + 2) + 4;
    let trace = follow_path(&spec, input, horizon, |_, _| 0)?;
    let id = Superoperator::identity(3);
    Ok(trace
        .into_iter()
        .filter(|p| p.op.as_ref().is_some_and(|op| *op != id))
        .filter_map(|p| p.psi_after.map(|psi| (p.scanned, psi)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::languages::encode;
    use crate::engines::{
        exact_probability, round_absorption, AbsorbOptions, ExactOptions, MachineSystem,
        round_truncation,
    };
    use num_bigint::BigInt;

    #[test]
    fn all_seven_operators_are_complete() {
        for (name, op) in all_operators() {
            assert!(op.check_completeness(), "operator {name} fails completeness");
        }
    }

    #[test]
    fn start_operator_outcomes_on_initial_state() {
        let psi = QVector::basis(3, 0);
        let outs = op_start().apply(&psi).unwrap();
        let r = |p: i64, q: i64| Rational::ratio(p, q);
        assert_eq!(
            outs[0].unconditional.entries(),
            &[r(1, 3), r(1, 3), r(1, 3)]
        );
        assert_eq!(outs[0].weight, r(1, 3));
        assert_eq!(
            outs[1].unconditional.entries(),
            &[r(1, 3), r(1, 3), r(2, 3)]
        );
        assert_eq!(outs[1].weight, r(2, 3));
        assert!(outs[2].weight.is_zero());
    }

    #[test]
    fn machine_validates_and_round_trips() {
        let spec = twin_spec();
        let text = crate::machines::print_machine(&spec);
        let reparsed = crate::machines::parse_machine(&text).unwrap();
        assert_eq!(spec, reparsed);
    }

    fn round_weights(input: &str) -> (Rational, Rational) {
        let spec = twin_spec();
        let sys = MachineSystem::new(&spec, input).unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        (round.accept.clone(), round.reject.clone())
    }

    #[test]
    fn round_weights_match_closed_forms() {
        for (u1, u2) in [("ab", "ab"), ("a", "b"), ("abb", "ab"), ("", "")] {
            let input = format!("{u1}#{u2}");
            let n = input.chars().count() + 2;
            let (accept, reject) = round_weights(&input);
            let ninth = Rational::ratio(1, 9).pow(n as u32);
            assert_eq!(accept, ninth, "accept weight on {input}");
            let d1 = Rational::from_bigint(BigInt::from(encode(u1).unwrap().value));
            let d2 = Rational::from_bigint(BigInt::from(encode(u2).unwrap().value));
            let diff = &d1 - &d2;
            let expected = Rational::int(4) * &ninth * &diff * &diff;
            assert_eq!(reject, expected, "reject weight on {input}");
        }
    }

    #[test]
    fn members_never_rejected_nonmembers_accept_at_most_fifth() {
        // member: reject weight is exactly zero per round, so the truncation
        // report shows reject_lo = 0 at every horizon
        let spec = twin_spec();
        let sys = MachineSystem::new(&spec, "ab#ab").unwrap();
        let report = exact_probability(&sys, &ExactOptions::default().horizon(400)).unwrap();
        assert!(report.reject_lo.is_zero());
        assert!(report.accept_lo > Rational::zero());

        // nonmember: limiting acceptance is 1/(1 + 4 diff^2) <= 1/5
        let sys = MachineSystem::new(&spec, "a#b").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        let totals = round.totals().unwrap();
        assert_eq!(totals.accept_lo, Rational::ratio(1, 5));
        assert_eq!(totals.reject_lo, Rational::ratio(4, 5));
    }

    #[test]
    fn bad_format_rejected_deterministically() {
        let spec = twin_spec();
        for input in ["", "ab", "a#b#a"] {
            let sys = MachineSystem::new(&spec, input).unwrap();
            let report = exact_probability(&sys, &ExactOptions::default()).unwrap();
            assert!(report.reject_lo.is_one(), "{input} must be rejected");
            assert_eq!(report.horizon, Some((input.chars().count() + 2) as u64));
        }
    }

    #[test]
    fn encoding_trace_matches_closed_form() {
        // after reading ¢ u1, the unconditional vector is
        // (1/3)^{|¢u1|} (enc(1u1), 1, 1)
        let u1 = "abba";
        let u2 = "ab";
        let trace = twin_round_trace(&format!("{u1}#{u2}")).unwrap();
        let k = 1 + u1.chars().count();
        let scale = Rational::ratio(1, 3).pow(k as u32);
        let enc = Rational::from_bigint(BigInt::from(encode(u1).unwrap().value));
        let expected = [&scale * &enc, scale.clone(), scale.clone()];
        assert_eq!(trace[k - 1].1.entries(), &expected);
        // full-word closed form after reading ¢ u1 # u2
        let all = 2 + u1.chars().count() + u2.chars().count();
        let scale = Rational::ratio(1, 3).pow(all as u32);
        let enc2 = Rational::from_bigint(BigInt::from(encode(u2).unwrap().value));
        let expected = [&scale * &enc, &scale * &enc2, scale.clone()];
        assert_eq!(trace[all - 1].1.entries(), &expected);
    }

    #[test]
    fn round_terminates_within_one_sweep_cycle() {
        let spec = twin_spec();
        let sys = MachineSystem::new(&spec, "ab#ab").unwrap();
        let (round, horizon, _) = round_truncation(&sys, &ExactOptions::default()).unwrap();
        assert!(round.unresolved.is_zero());
        assert!(horizon <= 3 * 7 + 2);
        assert!(round.conserves_mass());
    }
}
