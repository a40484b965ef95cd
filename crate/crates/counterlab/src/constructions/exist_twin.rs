//! A two-way one-counter quantum machine recognizing EXIST-TWIN.
//!
//! On `u#v1#...#vk` the machine iterates over the blocks, always remembering
//! its selection `i` with the counter, and runs the embedded word-comparison
//! register ops on the virtual input `u#vi` (head choreography skips the
//! unselected blocks). An embedded accept exits the loop into a terminal coin
//! walk that accepts with weight exactly `(1/5)^k`; an embedded reject at the
//! last block rejects the input; anything else restarts the embedded round or
//! advances the selection, exactly per the loop structure.

use crate::builtin::{
    op_decide, op_first_a, op_first_b, op_second_a, op_second_b, op_separator, op_start,
};
use crate::engines::{follow_path, EngineError};
use crate::exactmath::Superoperator;
use crate::machines::{Kind, MachineSpec, RawAction, SpecBuilder, CENT, DOLLAR};
use crate::machines::CounterStatus::{Nonzero, Zero};
use crate::machines::Move::{Left, Right, Stay};

use super::coin::{coin_on_plane, coin_on_third};

/// Builds the machine (a 2qcca over {a, b, #}).
pub fn exist_twin_2qcca() -> MachineSpec {
    let mut b = SpecBuilder::new(Kind::TwoQcca);
    b.state("fmt0").accept("acc").reject("rej").sigma(&['a', 'b', '#']);
    b.quantum(&["q1", "q2", "q3"], "q1");
    let id = || Superoperator::identity(3);
    let init = || Superoperator::initialize(3, 0);
    let both = [Zero, Nonzero];

    // format sweep: at least one separator, then rewind
    for st in both {
        for sym in ['a', 'b', CENT] {
            b.quantum_row("fmt0", sym, &[st], None, id(), vec![RawAction::go("fmt0", Right, &[0])]);
        }
        b.quantum_row("fmt0", '#', &[st], None, id(), vec![RawAction::go("fmt1", Right, &[0])]);
        b.quantum_row("fmt0", DOLLAR, &[st], None, id(), vec![RawAction::go("rej", Stay, &[0])]);
        for sym in ['a', 'b', '#'] {
            b.quantum_row("fmt1", sym, &[st], None, id(), vec![RawAction::go("fmt1", Right, &[0])]);
        }
        b.quantum_row("fmt1", DOLLAR, &[st], None, id(), vec![RawAction::go("back", Left, &[0])]);
        for sym in ['a', 'b', '#'] {
            b.quantum_row("back", sym, &[st], None, id(), vec![RawAction::go("back", Left, &[0])]);
        }
        b.quantum_row("back", CENT, &[st], None, id(), vec![RawAction::go("cent", Stay, &[0])]);
    }

    // embedded round start at the left endmarker; counter = selection - 1
    for st in both {
        b.quantum_row(
            "cent",
            CENT,
            &[st],
            None,
            op_start(),
            vec![
                RawAction::go("u", Right, &[0]),
                RawAction::go("wb_plain", Stay, &[0]),
                RawAction::go("wb_plain", Stay, &[0]),
            ],
        );
        // first word encoding
        b.quantum_row(
            "u",
            'a',
            &[st],
            None,
            op_first_a(),
            vec![
                RawAction::go("u", Right, &[0]),
                RawAction::go("wb_plain", Left, &[0]),
                RawAction::go("wb_plain", Left, &[0]),
            ],
        );
        b.quantum_row(
            "u",
            'b',
            &[st],
            None,
            op_first_b(),
            vec![
                RawAction::go("u", Right, &[0]),
                RawAction::go("wb_plain", Left, &[0]),
                RawAction::go("wb_plain", Left, &[0]),
            ],
        );
    }
    // the first separator: selected block starts now (counter zero) or after
    // skipping counter-many separators
    b.quantum_row(
        "u",
        '#',
        &[Zero],
        None,
        op_separator(),
        vec![
            RawAction::go("v", Right, &[0]),
            RawAction::go("wb_plain", Left, &[0]),
            RawAction::go("wb_plain", Left, &[0]),
        ],
    );
    b.quantum_row(
        "u",
        '#',
        &[Nonzero],
        None,
        op_separator(),
        vec![
            RawAction::go("skip", Right, &[0]),
            RawAction::go("wb_plain", Left, &[0]),
            RawAction::go("wb_plain", Left, &[0]),
        ],
    );

    // skipping unselected blocks: plain walking, one decrement per separator
    for sym in ['a', 'b'] {
        b.quantum_row("skip", sym, &[Nonzero], None, id(), vec![RawAction::go("skip", Right, &[0])]);
    }
    b.quantum_row("skip", '#', &[Nonzero], None, id(), vec![RawAction::go("skip", Right, &[-1])]);
    // counter reached zero: the selected block runs under the second encoding
    for (sym, op) in [('a', op_second_a()), ('b', op_second_b())] {
        for state in ["skip", "v"] {
            for st in both {
                if state == "skip" && st == Nonzero {
                    continue;
                }
                b.quantum_row(
                    state,
                    sym,
                    &[st],
                    None,
                    op.clone(),
                    vec![
                        RawAction::go("v", Right, &[0]),
                        RawAction::go("wb_count", Left, &[0]),
                        RawAction::go("wb_count", Left, &[0]),
                    ],
                );
            }
        }
    }
    // block boundary: a separator means more blocks follow (embedded reject
    // advances the selection); the right endmarker means this was the last
    // block (embedded reject rejects the input)
    for state in ["skip", "v"] {
        for st in both {
            if state == "skip" && st == Nonzero {
                continue;
            }
            b.quantum_row(
                state,
                '#',
                &[st],
                None,
                op_decide(),
                vec![
                    RawAction::go("wb_adv", Left, &[0]),
                    RawAction::go("coinrew", Stay, &[0]),
                    RawAction::go("wb_count", Left, &[0]),
                    RawAction::go("wb_count", Left, &[0]),
                ],
            );
            b.quantum_row(
                state,
                DOLLAR,
                &[st],
                None,
                op_decide(),
                vec![
                    RawAction::go("rej", Stay, &[0]),
                    RawAction::go("coinrew", Stay, &[0]),
                    RawAction::go("wb_count", Left, &[0]),
                    RawAction::go("wb_count", Left, &[0]),
                ],
            );
        }
    }

    // walk-backs: restore the counter to selection-1 while returning to the
    // left endmarker, then re-initialize the register.
    // wb_plain: from the first-word zone, no separators to the left.
    // wb_count: from inside the selected block, +1 per separator crossed and
    //           one correction at the left end (the first separator is the
    //           virtual one and must not count).
    // wb_adv:   like wb_count but keeping the extra +1, advancing the
    //           selection by one.
    for st in both {
        for sym in ['a', 'b'] {
            for wb in ["wb_plain", "wb_count", "wb_adv"] {
                b.quantum_row(wb, sym, &[st], None, id(), vec![RawAction::go(wb, Left, &[0])]);
            }
        }
        b.quantum_row("wb_plain", '#', &[st], None, id(), vec![RawAction::go("wb_plain", Left, &[0])]);
        b.quantum_row("wb_count", '#', &[st], None, id(), vec![RawAction::go("wb_count", Left, &[1])]);
        b.quantum_row("wb_adv", '#', &[st], None, id(), vec![RawAction::go("wb_adv", Left, &[1])]);
        b.quantum_row("wb_plain", CENT, &[st], None, init(), vec![RawAction::go("cent", Stay, &[0]); 3]);
        b.quantum_row("wb_adv", CENT, &[st], None, init(), vec![RawAction::go("cent", Stay, &[0]); 3]);
    }
    b.quantum_row("wb_count", CENT, &[Nonzero], None, init(), vec![RawAction::go("cent", Stay, &[-1]); 3]);

    // terminal coin: rewind, then one 1/5 flip per separator; any losing
    // flip restarts the whole machine
    for st in both {
        for sym in ['a', 'b', '#'] {
            b.quantum_row("coinrew", sym, &[st], None, id(), vec![RawAction::go("coinrew", Left, &[0])]);
        }
        b.quantum_row("coinrew", DOLLAR, &[st], None, id(), vec![RawAction::go("coinrew", Left, &[0])]);
        b.quantum_row("coinrew", CENT, &[st], None, id(), vec![RawAction::go("coin_a", Right, &[0])]);
        for coin in ["coin_a", "coin_b"] {
            for sym in ['a', 'b'] {
                b.quantum_row(coin, sym, &[st], None, id(), vec![RawAction::go(coin, Right, &[0])]);
            }
            b.quantum_row(coin, DOLLAR, &[st], None, id(), vec![RawAction::go("acc", Stay, &[0])]);
        }
        b.quantum_row(
            "coin_a",
            '#',
            &[st],
            None,
            coin_on_third(),
            vec![
                RawAction::go("coin_b", Right, &[0]),
                RawAction::restart(),
                RawAction::restart(),
            ],
        );
        b.quantum_row(
            "coin_b",
            '#',
            &[st],
            None,
            coin_on_plane(),
            vec![
                RawAction::go("coin_a", Right, &[0]),
                RawAction::restart(),
                RawAction::restart(),
                RawAction::restart(),
            ],
        );
    }

    b.fill_missing_quantum(3, RawAction::go("rej", Stay, &[0]));
    b.build().expect("exist-twin machine is valid")
}

/// The virtual inputs the machine feeds to the embedded comparison register,
/// recovered from the operator trace of the deterministic first-outcome path
/// (which rejects through every mismatching block and exits at the first
/// match). One string per embedded round, in execution order; the closed form
/// for selection `i` is `¢u#vi$`.
pub fn virtual_trace(spec: &MachineSpec, input: &str) -> Result<Vec<String>, EngineError> {
    let horizon = 40 * (input.chars().count() + 2) * (input.chars().count() + 2) + 200;
    let trace = follow_path(spec, input, horizon, |_, _| 0)?;
    let named: Vec<(char, Superoperator)> = vec![
        ('¢', op_start()),
        ('a', op_first_a()),
        ('b', op_first_b()),
        ('#', op_separator()),
        ('a', op_second_a()),
        ('b', op_second_b()),
        ('$', op_decide()),
    ];
    let mut rounds: Vec<String> = Vec::new();
    for p in &trace {
        let Some(op) = &p.op else { continue };
        if *op == op_start() {
            rounds.push(String::new());
        }
        if let Some((sym, _)) = named.iter().find(|(_, o)| o == op) {
            if let Some(cur) = rounds.last_mut() {
                cur.push(*sym);
            }
        }
    }
    Ok(rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{round_absorption, AbsorbOptions, MachineSystem};
    use crate::exactmath::Rational;

    #[test]
    fn machine_validates() {
        let spec = exist_twin_2qcca();
        assert_eq!(spec.kind(), Kind::TwoQcca);
    }

    #[test]
    fn member_round_weights() {
        let spec = exist_twin_2qcca();
        // k = 1 member
        let sys = MachineSystem::new(&spec, "ab#ab").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.reject.is_zero());
        assert_eq!(round.accept, Rational::ratio(1, 5));
        assert!(round.unresolved.is_zero() && round.trapped.is_zero());

        // k = 2, member via the second block
        let sys = MachineSystem::new(&spec, "ab#b#ab").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.reject.is_zero());
        assert_eq!(round.accept, Rational::ratio(1, 25));
    }

    #[test]
    fn nonmember_round_weights() {
        let spec = exist_twin_2qcca();
        let sys = MachineSystem::new(&spec, "a#b").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        // one block, mismatch: embedded reject ratio 4d^2/(1+4d^2), d = 2
        assert!(round.reject >= Rational::ratio(4, 5));
        assert!(round.accept <= Rational::ratio(1, 5));
        let totals = round.totals().unwrap();
        assert!(totals.reject_lo >= Rational::ratio(4, 5));
    }

    #[test]
    fn format_violations_rejected() {
        let spec = exist_twin_2qcca();
        let sys = MachineSystem::new(&spec, "abba").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.reject.is_one());
    }

    #[test]
    fn virtual_inputs_match_closed_form() {
        let spec = exist_twin_2qcca();
        // blocks all distinct from u: the trace walks every selection
        let rounds = virtual_trace(&spec, "ab#b#a#ab").unwrap();
        assert_eq!(rounds[0], "¢ab#b$");
        assert_eq!(rounds[1], "¢ab#a$");
        assert_eq!(rounds[2], "¢ab#ab$");
    }
}
