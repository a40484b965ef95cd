//! Seeded Monte Carlo estimation.
//!
//! Trajectories are sampled with exact categorical draws: outcome weights are
//! brought to a common denominator and an integer below it is drawn uniformly,
//! so the sampled distribution is the exact rational one. Each trial derives
//! its generator from (seed, trial index); identical inputs give bit-identical
//! counts regardless of scheduling.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::exactmath::Rational;

use super::report::{Decision, MCEstimate};
use super::system::{Child, System};
use super::EngineError;

#[derive(Clone, Debug)]
pub struct MCOptions {
    pub trials: u64,
    pub seed: u64,
    pub step_cap: u64,
}

impl Default for MCOptions {
    fn default() -> Self {
        MCOptions {
            trials: 10_000,
            seed: 0,
            step_cap: 100_000,
        }
    }
}

pub fn monte_carlo<S: System>(sys: &S, opts: &MCOptions) -> Result<MCEstimate, EngineError> {
    if opts.trials == 0 {
        return Err(EngineError::NoTrials);
    }
    let mut accepts = 0u64;
    let mut rejects = 0u64;
    let mut timeouts = 0u64;
    for trial in 0..opts.trials {
        let mut rng = trial_rng(opts.seed, trial);
        let (decision, _steps) = sample_trajectory(sys, &mut rng, opts.step_cap, &mut |_| {})?;
        match decision {
            Decision::Accept => accepts += 1,
            Decision::Reject => rejects += 1,
            Decision::Running => timeouts += 1,
        }
    }
    Ok(MCEstimate {
        trials: opts.trials,
        accepts,
        rejects,
        timeouts,
        seed: opts.seed,
        accept_ci: clopper_pearson(accepts, opts.trials),
        reject_ci: clopper_pearson(rejects, opts.trials),
    })
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Events reported to the trajectory observer: the step index, the sampled
/// child index, and whether the trajectory restarted (re-entered the initial
/// configuration).
pub struct TrajectoryEvent<'a, C> {
    pub step: u64,
    pub child_index: usize,
    pub child: &'a Child<C>,
}

/// Samples one trajectory; the observer sees every sampled transition.
pub fn sample_trajectory<S: System, F>(
    sys: &S,
    rng: &mut ChaCha8Rng,
    step_cap: u64,
    observe: &mut F,
) -> Result<(Decision, u64), EngineError>
where
    F: FnMut(TrajectoryEvent<'_, S::Config>),
{
    let mut c = sys.initial();
    let mut steps = 0u64;
    while steps < step_cap {
        steps += 1;
        let children = sys.step(&c)?;
        let idx = sample_index(&children, rng);
        observe(TrajectoryEvent {
            step: steps,
            child_index: idx,
            child: &children[idx].1,
        });
        match &children[idx].1 {
            Child::Accept => return Ok((Decision::Accept, steps)),
            Child::Reject => return Ok((Decision::Reject, steps)),
            Child::Config(c2) => c = c2.clone(),
        }
    }
    Ok((Decision::Running, steps))
}

/// Exact categorical sample over rational weights (renormalized: weights need
/// not sum to 1, matching per-step quantum outcome weights).
fn sample_index<C>(children: &[(Rational, Child<C>)], rng: &mut ChaCha8Rng) -> usize {
    debug_assert!(!children.is_empty(), "stepping produced no children");
    if children.len() == 1 {
        return 0;
    }
    // common denominator
    let mut denom = BigUint::from(1u32);
    for (p, _) in children {
        let d = p.denom().magnitude();
        denom = num_integer::lcm(denom, d.clone());
    }
    // cumulative numerators
    let numers: Vec<BigUint> = children
        .iter()
        .map(|(p, _)| p.numer().magnitude() * (&denom / p.denom().magnitude()))
        .collect();
    let total: BigUint = numers.iter().sum();
    debug_assert!(!total.is_zero());
    if let (Some(total64), true) = (total.to_u64(), true) {
        let draw = rng.gen_range(0..total64);
        let mut acc = 0u64;
        for (i, n) in numers.iter().enumerate() {
            acc += n.to_u64().expect("parts bounded by total");
            if draw < acc {
                return i;
            }
        }
        unreachable!("draw below total")
    }
    let draw = rng.gen_biguint_below(&total);
    let mut acc = BigUint::zero();
    for (i, n) in numers.iter().enumerate() {
        acc += n;
        if draw < acc {
            return i;
        }
    }
    unreachable!("draw below total")
}

/// 95% Clopper-Pearson interval; conservative by construction.
pub fn clopper_pearson(successes: u64, trials: u64) -> (f64, f64) {
    let alpha = 0.05;
    let k = successes as f64;
    let n = trials as f64;
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .map(|b| b.inverse_cdf(alpha / 2.0))
            .unwrap_or(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .map(|b| b.inverse_cdf(1.0 - alpha / 2.0))
            .unwrap_or(1.0)
    };
    (lo, hi)
}
