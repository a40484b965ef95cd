//! Small demonstration machines shipped with the library.

use crate::exactmath::Rational;
use crate::machines::CounterStatus::{Nonzero, Zero};
use crate::machines::Move::{Right, Stay};
use crate::machines::{status_combos, Kind, MachineSpec, RawAction, SpecBuilder, CENT, DOLLAR};

/// Two-way deterministic one-counter machine for { a^n b^n }: count up on a,
/// down on b, accept at the right endmarker on zero.
pub fn anbn_2dca() -> MachineSpec {
    let mut b = SpecBuilder::new(Kind::TwoDca);
    b.state("s1").accept("acc").reject("rej").sigma(&['a', 'b']);
    for st in [Zero, Nonzero] {
        b.det("s1", CENT, &[st], RawAction::go("s1", Right, &[0]));
        b.det("s1", 'a', &[st], RawAction::go("s1", Right, &[1]));
        b.det("match", 'a', &[st], RawAction::go("rej", Stay, &[0]));
        b.det("match", CENT, &[st], RawAction::go("rej", Stay, &[0]));
    }
    b.det("s1", 'b', &[Nonzero], RawAction::go("match", Right, &[-1]));
    b.det("s1", 'b', &[Zero], RawAction::go("rej", Stay, &[0]));
    b.det("s1", DOLLAR, &[Zero], RawAction::go("acc", Stay, &[0]));
    b.det("s1", DOLLAR, &[Nonzero], RawAction::go("rej", Stay, &[0]));
    b.det("match", 'b', &[Nonzero], RawAction::go("match", Right, &[-1]));
    b.det("match", 'b', &[Zero], RawAction::go("rej", Stay, &[0]));
    b.det("match", DOLLAR, &[Zero], RawAction::go("acc", Stay, &[0]));
    b.det("match", DOLLAR, &[Nonzero], RawAction::go("rej", Stay, &[0]));
    b.build().expect("anbn 2dca is valid")
}

/// One-way deterministic two-counter machine for { a^n b^n }; the canonical
/// halting verifier target. The second counter is never touched.
pub fn anbn_1d2ca() -> MachineSpec {
    let mut b = SpecBuilder::new(Kind::OneD2ca);
    b.state("s1").accept("acc").reject("rej").sigma(&['a', 'b']);
    for st in &status_combos(2) {
        b.det("s1", CENT, st, RawAction::go("s1", Right, &[0, 0]));
        b.det("s1", 'a', st, RawAction::go("s1", Right, &[1, 0]));
        b.det("match", 'a', st, RawAction::go("rej", Stay, &[0, 0]));
        b.det("match", CENT, st, RawAction::go("rej", Stay, &[0, 0]));
    }
    for st2 in [Zero, Nonzero] {
        b.det("s1", 'b', &[Nonzero, st2], RawAction::go("match", Right, &[-1, 0]));
        b.det("s1", 'b', &[Zero, st2], RawAction::go("rej", Stay, &[0, 0]));
        b.det("s1", DOLLAR, &[Zero, st2], RawAction::go("acc", Stay, &[0, 0]));
        b.det("s1", DOLLAR, &[Nonzero, st2], RawAction::go("rej", Stay, &[0, 0]));
        b.det("match", 'b', &[Nonzero, st2], RawAction::go("match", Right, &[-1, 0]));
        b.det("match", 'b', &[Zero, st2], RawAction::go("rej", Stay, &[0, 0]));
        b.det("match", DOLLAR, &[Zero, st2], RawAction::go("acc", Stay, &[0, 0]));
        b.det("match", DOLLAR, &[Nonzero, st2], RawAction::go("rej", Stay, &[0, 0]));
    }
    b.build().expect("anbn 1d2ca is valid")
}

/// One fair coin flip at the left endmarker.
pub fn fair_coin_2pca() -> MachineSpec {
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
    b.build().expect("fair coin is valid")
}

/// Guess-and-check nondeterministic machine for strings containing "aa":
/// genuinely branching at every a.
pub fn contains_aa_2nca() -> MachineSpec {
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
        b.nondet("saw", 'b', &[st], vec![RawAction::go("scan", Right, &[0])]);
        b.nondet("saw", CENT, &[st], vec![RawAction::go("rej", Stay, &[0])]);
        b.nondet("saw", DOLLAR, &[st], vec![RawAction::go("rej", Stay, &[0])]);
    }
    b.build().expect("contains-aa 2nca is valid")
}

/// Guess-the-midpoint nondeterministic machine for { a^n b^n }: branches once
/// per input symbol while counting.
pub fn anbn_guess_2nca() -> MachineSpec {
    let mut b = SpecBuilder::new(Kind::TwoNca);
    b.state("up").accept("acc").reject("rej").sigma(&['a', 'b']);
    for st in [Zero, Nonzero] {
        b.nondet("up", CENT, &[st], vec![RawAction::go("up", Right, &[0])]);
        // count an a, or guess that the b block starts next
        b.nondet(
            "up",
            'a',
            &[st],
            vec![
                RawAction::go("up", Right, &[1]),
                RawAction::go("down", Right, &[1]),
            ],
        );
        b.nondet("up", 'b', &[st], vec![RawAction::go("rej", Stay, &[0])]);
        b.nondet("down", 'a', &[st], vec![RawAction::go("rej", Stay, &[0])]);
        b.nondet("down", CENT, &[st], vec![RawAction::go("rej", Stay, &[0])]);
    }
    b.nondet("up", DOLLAR, &[Zero], vec![RawAction::go("acc", Stay, &[0])]);
    b.nondet("up", DOLLAR, &[Nonzero], vec![RawAction::go("rej", Stay, &[0])]);
    b.nondet("down", 'b', &[Nonzero], vec![RawAction::go("down", Right, &[-1])]);
    b.nondet("down", 'b', &[Zero], vec![RawAction::go("rej", Stay, &[0])]);
    b.nondet("down", DOLLAR, &[Zero], vec![RawAction::go("acc", Stay, &[0])]);
    b.nondet("down", DOLLAR, &[Nonzero], vec![RawAction::go("rej", Stay, &[0])]);
    b.build().expect("anbn guess 2nca is valid")
}
