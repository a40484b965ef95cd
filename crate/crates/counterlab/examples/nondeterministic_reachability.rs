//! Capped breadth-first reachability of a nondeterministic one-counter
//! machine, with the standard caps (counter M, path length M^2).
//!
//! ```bash
//! cargo run --example nondeterministic_reachability
//! ```

use counterlab::builtin::fixtures::{anbn_guess_2nca, contains_aa_2nca};
use counterlab::constructions::{capped_reachability, ReachabilityBound};

fn main() {
    for (spec, input) in [
        (contains_aa_2nca(), "baab"),
        (contains_aa_2nca(), "bab"),
        (anbn_guess_2nca(), "aabb"),
    ] {
        let bound = ReachabilityBound::for_input(&spec, input);
        let result = capped_reachability(&spec, input, &bound).unwrap();
        println!(
            "{} on {input:?}: M = {}, caps (counter {}, path {})",
            spec, bound.m, bound.counter_cap, bound.path_cap
        );
        let names: Vec<&str> = result.reachable.iter().map(|&s| spec.state_name(s)).collect();
        println!("  reachable: {}", names.join(", "));
        match &result.accepting_path {
            Some(path) => {
                println!("  shortest accepting path, {} configurations:", path.len());
                for c in path {
                    println!(
                        "    state={:<5} head={} counter={}",
                        spec.state_name(c.state),
                        c.head,
                        c.counters[0]
                    );
                }
            }
            None => println!("  no accepting path within the caps"),
        }
        // generous caps agree on the reachable set
        let generous = capped_reachability(&spec, input, &bound.scaled(4)).unwrap();
        println!("  generous caps agree: {}\n", generous.reachable == result.reachable);
    }
}
