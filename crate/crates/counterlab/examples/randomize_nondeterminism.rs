//! Transform a nondeterministic one-counter machine into a bounded-error
//! probabilistic one and verify the three-to-one acceptance margin.
//!
//! ```bash
//! cargo run --example randomize_nondeterminism
//! ```

use counterlab::builtin::fixtures::anbn_guess_2nca;
use counterlab::constructions::transform_with_audit;
use counterlab::engines::{
    classify_mode, round_absorption, AbsorbOptions, LabeledReport, MachineSystem,
};
use counterlab::Rational;

fn main() {
    let src = anbn_guess_2nca();
    let (t, audit) = transform_with_audit(&src, &["ab", "aabb", "aab"], 8).unwrap();
    println!(
        "source fan-out k = {}, cascade exponent c = {}, output: {}",
        t.k, t.c, t.spec
    );
    for (input, round) in &audit {
        println!("\naudit input {input:?}:");
        print!("{round}");
    }

    let mut reports = Vec::new();
    for (input, member) in [("ab", true), ("aabb", true), ("aab", false), ("ba", false)] {
        let sys = MachineSystem::new(&t.spec, input).unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        let totals = round.totals().unwrap();
        println!(
            "\n{} {input:?}: limit accept = {}, limit reject = {}",
            if member { "member" } else { "nonmember" },
            totals.accept_lo.display_with_approx(),
            totals.reject_lo.display_with_approx()
        );
        reports.push(LabeledReport {
            input: input.to_string(),
            member,
            report: totals,
        });
    }
    let mode = classify_mode(&reports, &Rational::ratio(1, 4)).unwrap();
    println!("\nrecognition mode at error bound 1/4: {mode}");
}
