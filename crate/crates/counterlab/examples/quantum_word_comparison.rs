//! The three-state quantum word-comparison machine: completeness of its
//! operators, the closed-form register states, and exact per-round weights.
//!
//! ```bash
//! cargo run --example quantum_word_comparison
//! ```

use counterlab::builtin::{all_operators, encode, twin_round_trace, twin_spec};
use counterlab::engines::{round_absorption, AbsorbOptions, MachineSystem};
use counterlab::Rational;

fn main() {
    for (name, op) in all_operators() {
        println!(
            "operator {name:<9} ({} elements): completeness {}",
            op.len(),
            op.check_completeness()
        );
    }

    let spec = twin_spec();
    println!("\nmachine: {spec}");

    // the register encodes both words in base 2 while scanning
    let input = "ab#ba";
    println!("\nencoding trace on {input:?} (first round, outcome-1 path):");
    for (sym, psi) in twin_round_trace(input).unwrap() {
        println!("  after {sym:?}: {psi:?}");
    }
    println!("  encode(\"ab\") = {}", encode("ab").unwrap().value);
    println!("  encode(\"ba\") = {}", encode("ba").unwrap().value);

    // per-round weights: accept (1/9)^|x̃| always, reject 4 (1/9)^|x̃| d^2
    for input in ["ab#ab", "a#b", "ab#ba"] {
        let sys = MachineSystem::new(&spec, input).unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        let totals = round.totals().unwrap();
        println!("\ninput {input:?}:");
        println!("  per-round accept = {}", round.accept.display_with_approx());
        println!("  per-round reject = {}", round.reject.display_with_approx());
        println!("  limit acceptance = {}", totals.accept_lo.display_with_approx());
    }
    println!("\nequal words are never rejected; distinct words are accepted");
    println!("with limiting probability 1/(1+4d^2) <= {}", Rational::ratio(1, 5));
}
