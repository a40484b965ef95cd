//! Exact probability computation by truncated forward propagation.
//!
//! Mass flows through a weighted configuration set one synchronized step at a
//! time; mass entering accept/reject is absorbed. The report's bounds are
//! certified purely by mass conservation: `absorbed + live = 1` exactly at
//! every horizon, so the true acceptance probability always lies in
//! `[accept_lo, accept_lo + live]`. Tiny masses may be pruned into the live
//! bucket to bound memory; that only loosens, never invalidates, the bounds.

use std::collections::BTreeMap;

use crate::exactmath::Rational;

use super::report::{ProbabilityReport, ReportOutcome, RoundReport};
use super::system::{Child, System};
use super::EngineError;

#[derive(Clone, Debug)]
pub struct ExactOptions {
    /// Stop once live mass drops below this.
    pub tolerance: Rational,
    /// Hard cap on synchronized steps.
    pub horizon: u64,
    /// Masses below this are moved to the live bucket and no longer tracked.
    pub prune_threshold: Option<Rational>,
    /// Declare a stall after this many steps without any absorption.
    pub stall_window: u64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        let tolerance: Rational = "1e-9".parse().unwrap();
        ExactOptions {
            prune_threshold: Some(&tolerance * &"1e-12".parse().unwrap()),
            tolerance,
            horizon: 1_000_000,
            stall_window: 200,
        }
    }
}

impl ExactOptions {
    pub fn with_tolerance(tolerance: Rational) -> Self {
        ExactOptions {
            prune_threshold: Some(&tolerance * &"1e-12".parse().unwrap()),
            tolerance,
            ..ExactOptions::default()
        }
    }

    pub fn horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }
}

/// Certified truncation bounds for the full system: restarts recycle mass
/// back into the computation.
pub fn exact_probability<S: System>(
    sys: &S,
    opts: &ExactOptions,
) -> Result<ProbabilityReport, EngineError> {
    let t = propagate(sys, opts, false)?;
    Ok(ProbabilityReport::new(
        t.accept,
        t.reject,
        &t.live + &t.restart, // restart bucket unused in session mode
        Some(t.horizon),
        t.outcome,
    ))
}

/// Certified truncation bounds for a single round: re-entering the initial
/// configuration counts as an absorbing "restart" event. Used to check
/// round-termination properties (live mass here is mass still inside the
/// first round).
pub fn round_truncation<S: System>(
    sys: &S,
    opts: &ExactOptions,
) -> Result<(RoundReport, u64, ReportOutcome), EngineError> {
    let t = propagate(sys, opts, true)?;
    Ok((
        RoundReport {
            accept: t.accept,
            reject: t.reject,
            restart: t.restart,
            trapped: Rational::zero(),
            unresolved: t.live,
        },
        t.horizon,
        t.outcome,
    ))
}

struct Propagation {
    accept: Rational,
    reject: Rational,
    restart: Rational,
    live: Rational,
    horizon: u64,
    outcome: ReportOutcome,
}

fn propagate<S: System>(
    sys: &S,
    opts: &ExactOptions,
    round_mode: bool,
) -> Result<Propagation, EngineError> {
    let initial = sys.initial();
    let mut live: BTreeMap<S::Config, Rational> = BTreeMap::new();
    live.insert(initial.clone(), Rational::one());

    let mut accept = Rational::zero();
    let mut reject = Rational::zero();
    let mut restart = Rational::zero();
    let mut pruned = Rational::zero();
    let mut live_total = Rational::one();
    let mut steps = 0u64;
    let mut last_absorption = 0u64;
    let mut outcome = ReportOutcome::HorizonReached;

    while steps < opts.horizon {
        if live_total < opts.tolerance {
            outcome = ReportOutcome::Converged;
            break;
        }
        if live.is_empty() {
            outcome = ReportOutcome::Converged;
            break;
        }
        if steps.saturating_sub(last_absorption) >= opts.stall_window {
            outcome = ReportOutcome::Stalled;
            break;
        }
        steps += 1;
        let mut next: BTreeMap<S::Config, Rational> = BTreeMap::new();
        let mut absorbed_this_step = false;
        for (c, w) in &live {
            for (p, child) in sys.step(c)? {
                let m = w * &p;
                match child {
                    Child::Accept => {
                        accept += &m;
                        absorbed_this_step = true;
                    }
                    Child::Reject => {
                        reject += &m;
                        absorbed_this_step = true;
                    }
                    Child::Config(c2) => {
                        if round_mode && c2 == initial {
                            restart += &m;
                            absorbed_this_step = true;
                        } else {
                            *next.entry(c2).or_insert_with(Rational::zero) += &m;
                        }
                    }
                }
            }
        }
        if let Some(threshold) = &opts.prune_threshold {
            let mut keep = BTreeMap::new();
            for (c, w) in next {
                if &w < threshold {
                    pruned += &w;
                } else {
                    keep.insert(c, w);
                }
            }
            next = keep;
        }
        live = next;
        live_total = live.values().sum::<Rational>() + &pruned;
        if absorbed_this_step {
            last_absorption = steps;
        }
        debug_assert!(
            &(&(&(&accept + &reject) + &restart) + &live_total) == &Rational::one(),
            "mass conservation violated at step {steps}"
        );
    }
    if live_total < opts.tolerance && outcome == ReportOutcome::HorizonReached {
        outcome = ReportOutcome::Converged;
    }

    Ok(Propagation {
        accept,
        reject,
        restart,
        live: live_total,
        horizon: steps,
        outcome,
    })
}
