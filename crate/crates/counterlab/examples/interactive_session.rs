//! Interactive sessions with the restart-based verifier: the honest prover
//! on members, every adversarial fixture on a nonmember.
//!
//! ```bash
//! cargo run --example interactive_session
//! ```

use counterlab::builtin::fixtures::anbn_1d2ca;
use counterlab::engines::{round_absorption, AbsorbOptions, ExactOptions};
use counterlab::protocols::{
    adversarial_provers, honest_prover, predictions, run_session, two_way_verifier,
    ProtocolParams, SessionMethod, SessionSystem,
};
use counterlab::Rational;

fn main() {
    let target = anbn_1d2ca();
    let verifier = two_way_verifier(&target, ProtocolParams::default()).unwrap();

    // completeness: an honest prover on a member is never rejected and the
    // per-round acceptance weight matches the prediction exactly
    let input = "aabb";
    let honest = honest_prover(&target, input, 10_000).unwrap();
    println!("honest stream for {input:?}: {:?}", honest.stream());
    let outcome = run_session(
        &verifier,
        &honest,
        input,
        &SessionMethod::Exact(ExactOptions::default().horizon(400)),
    )
    .unwrap();
    let round = outcome.round.unwrap();
    println!("predicted per-round accept: {}", outcome.predicted.per_round_accept.unwrap());
    println!("measured  per-round accept: {}", round.accept);
    println!("measured  per-round reject: {} (members are never rejected)", round.reject);
    println!("\nsampled transcript:\n{}", outcome.transcript);

    // soundness: each fixture adversary on a nonmember keeps the certified
    // acceptance at most (3/k) of the rejection
    let input = "aab";
    println!("adversaries on nonmember {input:?} (k = 16):");
    for prover in adversarial_provers(&target, input, "aabb", 10_000).unwrap() {
        let sys = SessionSystem::new(&verifier, prover.as_ref(), input).unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::depth(400)).unwrap();
        let totals = round.totals_with_bounds();
        let ratio_bound = Rational::ratio(3, 16) * &totals.reject_lo;
        println!(
            "  {:<13} accept <= {}  reject >= {}  (bound {})",
            prover.name(),
            totals.accept_hi().approx_decimal(6),
            totals.reject_lo.approx_decimal(6),
            ratio_bound.approx_decimal(6)
        );
    }
    let _ = predictions(&verifier, input);
}
