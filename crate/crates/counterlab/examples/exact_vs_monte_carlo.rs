//! Certified truncation bounds next to a seeded Monte Carlo estimate.
//!
//! ```bash
//! cargo run --example exact_vs_monte_carlo
//! ```

use counterlab::builtin::twin_spec;
use counterlab::engines::{
    exact_probability, monte_carlo, ExactOptions, MCOptions, MachineSystem,
};

fn main() {
    let spec = twin_spec();
    let input = "ab#ab";
    let sys = MachineSystem::new(&spec, input).unwrap();

    // truncation: bounds are certified by conservation at every horizon
    for horizon in [50, 500, 5000] {
        let report = exact_probability(&sys, &ExactOptions::default().horizon(horizon)).unwrap();
        println!("horizon {horizon:>5}:");
        println!("{report}\n");
    }

    // sampling: identical seeds give identical counts
    let opts = MCOptions {
        trials: 20_000,
        seed: 42,
        step_cap: 100_000,
    };
    let est = monte_carlo(&sys, &opts).unwrap();
    println!("{est}");
    let again = monte_carlo(&sys, &opts).unwrap();
    assert_eq!(est.accepts, again.accepts);
    println!("\nequal words: every trial ends in acceptance, rejects = {}", est.rejects);
}
