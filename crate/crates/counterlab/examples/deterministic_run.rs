//! Trace a deterministic one-counter machine on a few inputs.
//!
//! ```bash
//! cargo run --example deterministic_run
//! ```

use counterlab::builtin::fixtures::anbn_2dca;
use counterlab::engines::run_deterministic;

fn main() {
    let spec = anbn_2dca();
    for input in ["aabb", "aab", "", "ba"] {
        let result = run_deterministic(&spec, input, 1000, true).unwrap();
        println!("input {input:?}: {:?} after {} steps", result.decision, result.steps);
        for c in result.trace.unwrap() {
            println!(
                "  state={:<6} head={} counter={}",
                spec.state_name(c.state),
                c.head,
                c.counters[0]
            );
        }
    }
}
