//! Parse and validate a machine file, including one that fails validation.
//!
//! ```bash
//! cargo run --example validate_machine
//! ```

use counterlab::machines::{parse_machine, parse_raw, print_machine, validate_head_safety};

fn main() {
    let good = include_str!("../machines/anbn-2dca.toml");
    let spec = parse_machine(good).expect("bundled machine is valid");
    println!("parsed: {spec}");
    println!("canonical form round-trips: {}", {
        let printed = print_machine(&spec);
        parse_machine(&printed).unwrap() == spec
    });

    // a broken machine: probabilities that do not sum to one and a head-safety
    // violation
    let bad = r#"
kind = "2pca"
states = ["s1", "acc", "rej"]
accept = "acc"
reject = "rej"
sigma = []

[[transitions]]
state = "s1"
symbol = "¢"
status = ["zero"]
outcomes = [
  { p = "1/2", next = "acc", move = "left", delta = [0] },
  { p = "1/3", next = "rej", move = "stay", delta = [0] },
]

[[transitions]]
state = "s1"
symbol = "¢"
status = ["nonzero"]
next = "rej"
move = "stay"
delta = [0]

[[transitions]]
state = "s1"
symbol = "$"
status = ["zero"]
next = "rej"
move = "stay"
delta = [0]

[[transitions]]
state = "s1"
symbol = "$"
status = ["nonzero"]
next = "rej"
move = "stay"
delta = [0]
"#;
    let raw = parse_raw(bad).expect("syntactically fine");
    for v in validate_head_safety(&raw) {
        println!("head safety violation: {v}");
    }
    match raw.validate() {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected as expected:\n{e}"),
    }
}
