//! The single-pass verifier: no restarts, the head never moves left, and the
//! error bound comes from an upfront 3/7 rejection.
//!
//! ```bash
//! cargo run --example one_way_session
//! ```

use counterlab::builtin::fixtures::anbn_1d2ca;
use counterlab::engines::ExactOptions;
use counterlab::protocols::{
    adversarial_provers, honest_prover, one_way_verifier, run_session, ProtocolParams,
    SessionMethod,
};

fn main() {
    let target = anbn_1d2ca();
    let verifier = one_way_verifier(&target, ProtocolParams::default()).unwrap();
    let method = SessionMethod::Exact(ExactOptions::default().horizon(500));

    // member + honest: accepted with weight exactly 4/7
    let honest = honest_prover(&target, "ab", 10_000).unwrap();
    let outcome = run_session(&verifier, &honest, "ab", &method).unwrap();
    let report = outcome.report.unwrap();
    println!("member \"ab\" with the honest prover:");
    println!("{report}\n");

    // nonmember + adversaries: rejected with weight at least 4/7
    for prover in adversarial_provers(&target, "aab", "aabb", 10_000).unwrap() {
        let outcome = run_session(&verifier, prover.as_ref(), "aab", &method).unwrap();
        let report = outcome.report.unwrap();
        println!(
            "nonmember \"aab\" vs {:<13} reject_lo = {}",
            prover.name(),
            report.reject_lo.display_with_approx()
        );
    }
}
