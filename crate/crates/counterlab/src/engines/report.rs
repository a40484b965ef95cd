//! Engine result types: runs, certified probability reports, round reports
//! and Monte Carlo estimates.

use serde::Serialize;
use std::fmt;

use crate::exactmath::Rational;
use crate::machines::Configuration;

use super::EngineError;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Decision {
    Accept,
    Reject,
    Running,
}

/// Result of a single (deterministic or sampled) trajectory.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub decision: Decision,
    pub steps: u64,
    pub final_config: Configuration,
    pub trace: Option<Vec<Configuration>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ReportOutcome {
    /// Live mass fell below the tolerance.
    Converged,
    /// The step horizon was reached first.
    HorizonReached,
    /// Live mass stopped decreasing (no restart/halting structure); the
    /// bounds are still valid.
    Stalled,
    /// Closed-form limit from absorption analysis; no truncation involved.
    Limit,
}

/// Certified bounds on acceptance and rejection probabilities.
///
/// `accept_lo + reject_lo + live = 1` exactly at every horizon; the true
/// acceptance probability lies in `[accept_lo, accept_lo + live]` and
/// likewise for rejection.
#[derive(Clone, Debug, Serialize)]
pub struct ProbabilityReport {
    pub accept_lo: Rational,
    pub reject_lo: Rational,
    /// Unresolved mass: still in flight, pruned, or trapped in loops.
    pub live: Rational,
    /// Steps executed; `None` for closed-form limits.
    pub horizon: Option<u64>,
    pub outcome: ReportOutcome,
}

impl ProbabilityReport {
    pub fn new(
        accept_lo: Rational,
        reject_lo: Rational,
        live: Rational,
        horizon: Option<u64>,
        outcome: ReportOutcome,
    ) -> Self {
        let r = ProbabilityReport {
            accept_lo,
            reject_lo,
            live,
            horizon,
            outcome,
        };
        debug_assert!(r.conserves_mass(), "absorbed + live != 1");
        r
    }

    pub fn conserves_mass(&self) -> bool {
        &(&(&self.accept_lo + &self.reject_lo) + &self.live) == &Rational::one()
    }

    pub fn accept_hi(&self) -> Rational {
        &self.accept_lo + &self.live
    }

    pub fn reject_hi(&self) -> Rational {
        &self.reject_lo + &self.live
    }
}

impl fmt::Display for ProbabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "accept_lo = {}", self.accept_lo.display_with_approx())?;
        writeln!(f, "reject_lo = {}", self.reject_lo.display_with_approx())?;
        writeln!(f, "live = {}", self.live.display_with_approx())?;
        match self.horizon {
            Some(h) => writeln!(f, "horizon = {h}")?,
            None => writeln!(f, "horizon = limit")?,
        }
        let outcome = match self.outcome {
            ReportOutcome::Converged => "converged",
            ReportOutcome::HorizonReached => "horizon-reached",
            ReportOutcome::Stalled => "stalled (live mass stopped decreasing)",
            ReportOutcome::Limit => "closed-form limit",
        };
        write!(f, "outcome = {outcome}")
    }
}

/// Exact absorption analysis of a single round: the machine is run until it
/// accepts, rejects, or returns to its initial configuration (a restart).
///
/// All five fields sum to 1 exactly. `trapped` is mass in closed loops that
/// never absorb; `unresolved` is mass beyond the exploration cap.
#[derive(Clone, Debug, Serialize)]
pub struct RoundReport {
    pub accept: Rational,
    pub reject: Rational,
    pub restart: Rational,
    pub trapped: Rational,
    pub unresolved: Rational,
}

impl RoundReport {
    pub fn conserves_mass(&self) -> bool {
        let sum = &(&(&(&self.accept + &self.reject) + &self.restart) + &self.trapped)
            + &self.unresolved;
        sum == Rational::one()
    }

    /// Closed-form limits over infinitely many identically-distributed
    /// rounds: restart mass re-enters the round, so the limiting acceptance
    /// probability is `accept / (accept + reject + trapped)`.
    ///
    /// Requires full exploration (`unresolved = 0`). If the round never
    /// absorbs or traps, every round restarts and the limit is all-live.
    pub fn totals(&self) -> Result<ProbabilityReport, EngineError> {
        if !self.unresolved.is_zero() {
            return Err(EngineError::Unresolved);
        }
        let denom = &(&self.accept + &self.reject) + &self.trapped;
        if denom.is_zero() {
            return Ok(ProbabilityReport::new(
                Rational::zero(),
                Rational::zero(),
                Rational::one(),
                None,
                ReportOutcome::Stalled,
            ));
        }
        Ok(ProbabilityReport::new(
            (&self.accept / &denom).clone(),
            (&self.reject / &denom).clone(),
            (&self.trapped / &denom).clone(),
            None,
            ReportOutcome::Limit,
        ))
    }

    /// Like [`Self::totals`] but tolerating unresolved mass: unresolved and
    /// trapped shares are reported as live, so the result is still a
    /// certified bound on the limiting probabilities.
    pub fn totals_with_bounds(&self) -> ProbabilityReport {
        let denom = &(&(&self.accept + &self.reject) + &self.trapped) + &self.unresolved;
        if denom.is_zero() {
            return ProbabilityReport::new(
                Rational::zero(),
                Rational::zero(),
                Rational::one(),
                None,
                ReportOutcome::Stalled,
            );
        }
        ProbabilityReport::new(
            (&self.accept / &denom).clone(),
            (&self.reject / &denom).clone(),
            (&(&self.trapped + &self.unresolved) / &denom).clone(),
            None,
            ReportOutcome::Limit,
        )
    }
}

impl fmt::Display for RoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "round accept = {}", self.accept.display_with_approx())?;
        writeln!(f, "round reject = {}", self.reject.display_with_approx())?;
        writeln!(f, "round restart = {}", self.restart.display_with_approx())?;
        if !self.trapped.is_zero() {
            writeln!(f, "round trapped = {}", self.trapped.display_with_approx())?;
        }
        if !self.unresolved.is_zero() {
            writeln!(f, "round unresolved = {}", self.unresolved.display_with_approx())?;
        }
        Ok(())
    }
}

/// Seeded Monte Carlo estimate. Identical (seed, spec, input, trials,
/// step_cap) always give identical counts.
#[derive(Clone, Debug, Serialize)]
pub struct MCEstimate {
    pub trials: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub timeouts: u64,
    pub seed: u64,
    /// 95% Clopper-Pearson interval for the acceptance probability.
    pub accept_ci: (f64, f64),
    pub reject_ci: (f64, f64),
}

impl MCEstimate {
    pub fn counts_consistent(&self) -> bool {
        self.accepts + self.rejects + self.timeouts == self.trials
    }
}

impl fmt::Display for MCEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "trials = {} (seed {}): accepts = {}, rejects = {}, timeouts = {}",
            self.trials, self.seed, self.accepts, self.rejects, self.timeouts
        )?;
        writeln!(
            f,
            "accept_ci = [{:.6}, {:.6}] (approximate, 95%)",
            self.accept_ci.0, self.accept_ci.1
        )?;
        write!(
            f,
            "reject_ci = [{:.6}, {:.6}] (approximate, 95%)",
            self.reject_ci.0, self.reject_ci.1
        )
    }
}
