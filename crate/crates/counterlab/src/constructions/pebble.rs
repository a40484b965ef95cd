//! A one-pebble two-way quantum machine recognizing { uu }.
//!
//! The pebble marks candidate split points: every occurrence of the input's
//! leading symbol. For a mark at position p the induced virtual input is
//! `x1 # x2` where the leading symbol plays the left endmarker, the marked
//! symbol plays the separator, and the real right endmarker closes it. The
//! embedded comparison register accepts exactly on x1 = x2; an embedded
//! reject advances the pebble to the next candidate (rejecting the input when
//! none is left), and an embedded accept exits into a terminal coin walk that
//! accepts with weight exactly `(1/5)^{|x|}`.

use crate::builtin::{op_decide, op_first_a, op_first_b, op_second_a, op_second_b, op_start};
use crate::engines::{follow_path, EngineError};
use crate::exactmath::Superoperator;
use crate::machines::{Kind, MachineSpec, PebbleAction, RawAction, SpecBuilder, CENT, DOLLAR};
use crate::machines::Move::{Left, Right, Stay};

use super::coin::{coin_on_plane, coin_on_third};

pub fn siam_twins_pebble() -> MachineSpec {
    let mut b = SpecBuilder::new(Kind::PebbleQcfa);
    b.state("entry").accept("acc").reject("rej").sigma(&['a', 'b']);
    b.quantum(&["q1", "q2", "q3"], "q1");
    let id = || Superoperator::identity(3);
    let init = || Superoperator::initialize(3, 0);
    let place = |s: &str| RawAction::go(s, Stay, &[]).with_pebble(PebbleAction::Place);

    b.quantum_row("entry", CENT, &[], Some(false), id(), vec![RawAction::go("lead", Right, &[])]);
    // the empty word is a member (u empty), accepted outright
    b.quantum_row("lead", DOLLAR, &[], Some(false), id(), vec![RawAction::go("acc", Stay, &[])]);
    for lead in ['a', 'b'] {
        let seek = format!("seek:{lead}");
        b.quantum_row("lead", lead, &[], Some(false), id(), vec![RawAction::go(&seek, Right, &[])]);
        // first marking: the next occurrence of the leading symbol
        for sym in ['a', 'b'] {
            if sym == lead {
                b.quantum_row(&seek, sym, &[], Some(false), id(), vec![place("eback")]);
            } else {
                b.quantum_row(&seek, sym, &[], Some(false), id(), vec![RawAction::go(&seek, Right, &[])]);
            }
        }
        b.quantum_row(&seek, DOLLAR, &[], Some(false), id(), vec![RawAction::go("rej", Stay, &[])]);
    }

    // rewind to the left endmarker, re-initialize, restart the embedded round
    for sym in ['a', 'b'] {
        for sense in [false, true] {
            b.quantum_row("eback", sym, &[], Some(sense), id(), vec![RawAction::go("eback", Left, &[])]);
        }
    }
    b.quantum_row("eback", DOLLAR, &[], Some(false), id(), vec![RawAction::go("eback", Left, &[])]);
    b.quantum_row("eback", CENT, &[], Some(false), init(), vec![RawAction::go("estart", Right, &[]); 3]);

    // embedded round: the leading symbol is consumed as the virtual left
    // endmarker, the marked cell is the virtual separator
    for sym in ['a', 'b'] {
        b.quantum_row(
            "estart",
            sym,
            &[],
            Some(false),
            op_start(),
            vec![
                RawAction::go("efirst", Right, &[]),
                RawAction::go("eback", Stay, &[]),
                RawAction::go("eback", Stay, &[]),
            ],
        );
    }
    for (sym, op1, op2) in [('a', op_first_a(), op_second_a()), ('b', op_first_b(), op_second_b())] {
        b.quantum_row(
            "efirst",
            sym,
            &[],
            Some(false),
            op1,
            vec![
                RawAction::go("efirst", Right, &[]),
                RawAction::go("eback", Stay, &[]),
                RawAction::go("eback", Stay, &[]),
            ],
        );
        b.quantum_row(
            "esecond",
            sym,
            &[],
            Some(false),
            op2,
            vec![
                RawAction::go("esecond", Right, &[]),
                RawAction::go("eback", Stay, &[]),
                RawAction::go("eback", Stay, &[]),
            ],
        );
    }
    for sym in ['a', 'b'] {
        b.quantum_row(
            "efirst",
            sym,
            &[],
            Some(true),
            crate::builtin::op_separator(),
            vec![
                RawAction::go("esecond", Right, &[]),
                RawAction::go("eback", Stay, &[]),
                RawAction::go("eback", Stay, &[]),
            ],
        );
    }
    b.quantum_row(
        "esecond",
        DOLLAR,
        &[],
        Some(false),
        op_decide(),
        vec![
            RawAction::go("adv0", Left, &[]),
            RawAction::go("coinrew", Stay, &[]),
            RawAction::go("eback", Stay, &[]),
            RawAction::go("eback", Stay, &[]),
        ],
    );

    // advance the pebble: rewind, reread the leading symbol, skip to the
    // current mark, then mark the next occurrence of the leading symbol
    for sym in ['a', 'b'] {
        for sense in [false, true] {
            b.quantum_row("adv0", sym, &[], Some(sense), id(), vec![RawAction::go("adv0", Left, &[])]);
        }
    }
    b.quantum_row("adv0", CENT, &[], Some(false), id(), vec![RawAction::go("advread", Right, &[])]);
    for lead in ['a', 'b'] {
        let skip = format!("advskip:{lead}");
        let next = format!("advnext:{lead}");
        b.quantum_row("advread", lead, &[], Some(false), id(), vec![RawAction::go(&skip, Right, &[])]);
        for sym in ['a', 'b'] {
            b.quantum_row(&skip, sym, &[], Some(false), id(), vec![RawAction::go(&skip, Right, &[])]);
            b.quantum_row(&skip, sym, &[], Some(true), id(), vec![RawAction::go(&next, Right, &[])]);
            if sym == lead {
                b.quantum_row(&next, sym, &[], Some(false), id(), vec![place("eback")]);
            } else {
                b.quantum_row(&next, sym, &[], Some(false), id(), vec![RawAction::go(&next, Right, &[])]);
            }
        }
        // no further candidate: the input has no matching split
        b.quantum_row(&next, DOLLAR, &[], Some(false), id(), vec![RawAction::go("rej", Stay, &[])]);
    }

    // terminal coin walk: one 1/5 flip per input symbol
    for sym in ['a', 'b'] {
        for sense in [false, true] {
            b.quantum_row("coinrew", sym, &[], Some(sense), id(), vec![RawAction::go("coinrew", Left, &[])]);
        }
    }
    b.quantum_row("coinrew", DOLLAR, &[], Some(false), id(), vec![RawAction::go("coinrew", Left, &[])]);
    b.quantum_row("coinrew", CENT, &[], Some(false), id(), vec![RawAction::go("coin_a", Right, &[])]);
    for sym in ['a', 'b'] {
        for sense in [false, true] {
            b.quantum_row(
                "coin_a",
                sym,
                &[],
                Some(sense),
                coin_on_third(),
                vec![
                    RawAction::go("coin_b", Right, &[]),
                    RawAction::restart(),
                    RawAction::restart(),
                ],
            );
            b.quantum_row(
                "coin_b",
                sym,
                &[],
                Some(sense),
                coin_on_plane(),
                vec![
                    RawAction::go("coin_a", Right, &[]),
                    RawAction::restart(),
                    RawAction::restart(),
                    RawAction::restart(),
                ],
            );
        }
    }
    for coin in ["coin_a", "coin_b"] {
        b.quantum_row(coin, DOLLAR, &[], Some(false), id(), vec![RawAction::go("acc", Stay, &[])]);
    }

    b.fill_missing_quantum(3, RawAction::go("rej", Stay, &[]));
    b.build().expect("pebble machine is valid")
}

/// Virtual inputs induced by each pebble split along the deterministic
/// first-outcome path; closed form for a mark at position p (1-based in x):
/// `¢ x[2..p-1] # x[p+1..] $`.
pub fn siam_virtual_trace(spec: &MachineSpec, input: &str) -> Result<Vec<String>, EngineError> {
    let n = input.chars().count() + 2;
    let trace = follow_path(spec, input, 40 * n * n + 200, |_, _| 0)?;
    let named: Vec<(char, Superoperator)> = vec![
        ('¢', op_start()),
        ('a', op_first_a()),
        ('b', op_first_b()),
        ('#', crate::builtin::op_separator()),
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
    fn member_rounds_never_reject() {
        let spec = siam_twins_pebble();
        for input in ["abab", "aa", "aaaa", "baba"] {
            assert!(crate::builtin::membership(crate::builtin::Language::SiamTwins, input));
            let sys = MachineSystem::new(&spec, input).unwrap();
            let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
            assert!(round.reject.is_zero(), "member {input} rejected");
            let k = input.chars().count() as u32;
            assert_eq!(round.accept, Rational::ratio(1, 5).pow(k), "accept weight {input}");
        }
    }

    #[test]
    fn empty_word_accepted_outright() {
        let spec = siam_twins_pebble();
        let sys = MachineSystem::new(&spec, "").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.accept.is_one());
    }

    #[test]
    fn nonmembers_reject_dominantly() {
        let spec = siam_twins_pebble();
        for input in ["aab", "ab", "a", "abba"] {
            let sys = MachineSystem::new(&spec, input).unwrap();
            let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
            let totals = round.totals().unwrap();
            assert!(
                totals.reject_lo >= Rational::ratio(4, 5),
                "nonmember {input}: reject {}",
                totals.reject_lo
            );
        }
    }

    #[test]
    fn virtual_inputs_match_pebble_splits() {
        let spec = siam_twins_pebble();
        // "aaba": leading 'a'; candidate marks at positions 2, 4 (1-based in x)
        let rounds = siam_virtual_trace(&spec, "aaba").unwrap();
        assert_eq!(rounds[0], "¢#ba$"); // mark at x position 2: x1 = "", x2 = "ba"
        assert_eq!(rounds[1], "¢ab#$"); // mark at x position 4: x1 = "ab", x2 = ""
    }
}
