//! Recognition-mode classification from certified probability reports.

use serde::Serialize;
use std::fmt;

use crate::exactmath::Rational;

use super::report::ProbabilityReport;
use super::EngineError;

/// Language recognition modes, strongest first as this module orders them.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum RecognitionMode {
    /// Members accepted with probability 1; nonmembers rejected with
    /// probability >= 1 - epsilon (epsilon < 1).
    NegativeOneSided,
    /// Members accepted with probability >= 1 - epsilon; nonmembers rejected
    /// with probability 1 (epsilon < 1).
    PositiveOneSided,
    /// Both sides correct with probability >= 1 - epsilon (epsilon < 1/2).
    Bounded,
    /// Members accepted with probability > 1/2; nonmembers rejected with
    /// probability >= 1/2.
    Unbounded,
    /// Members accepted with nonzero probability; nonmembers rejected with
    /// probability 1.
    OneSidedUnbounded,
    /// No mode holds.
    None,
}

impl fmt::Display for RecognitionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RecognitionMode::NegativeOneSided => "negative-one-sided",
            RecognitionMode::PositiveOneSided => "positive-one-sided",
            RecognitionMode::Bounded => "bounded",
            RecognitionMode::Unbounded => "unbounded",
            RecognitionMode::OneSidedUnbounded => "one-sided-unbounded",
            RecognitionMode::None => "none",
        };
        f.write_str(s)
    }
}

/// A probability report for one sample input with its membership label.
#[derive(Clone, Debug)]
pub struct LabeledReport {
    pub input: String,
    pub member: bool,
    pub report: ProbabilityReport,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tri {
    Yes,
    No,
    Maybe,
}

fn all(reports: &[LabeledReport], mut f: impl FnMut(&LabeledReport) -> Tri) -> Tri {
    let mut out = Tri::Yes;
    for r in reports {
        match f(r) {
            Tri::No => return Tri::No,
            Tri::Maybe => out = Tri::Maybe,
            Tri::Yes => {}
        }
    }
    out
}

// certified p >= threshold?
fn at_least(lo: &Rational, live: &Rational, threshold: &Rational) -> Tri {
    if lo >= threshold {
        Tri::Yes
    } else if &(lo + live) < threshold {
        Tri::No
    } else {
        Tri::Maybe
    }
}

// certified p > threshold?
fn above(lo: &Rational, live: &Rational, threshold: &Rational) -> Tri {
    if lo > threshold {
        Tri::Yes
    } else if &(lo + live) <= threshold {
        Tri::No
    } else {
        Tri::Maybe
    }
}

// consistent with p = 1? (the opposite bound must be exactly zero)
fn consistent_with_one(opposite_lo: &Rational) -> Tri {
    if opposite_lo.is_zero() {
        Tri::Yes
    } else {
        Tri::No
    }
}

/// Returns the strongest recognition mode consistent with all certified
/// bounds at error bound `epsilon`. Errs with `Inconclusive` when live mass
/// straddles a deciding threshold.
pub fn classify_mode(
    reports: &[LabeledReport],
    epsilon: &Rational,
) -> Result<RecognitionMode, EngineError> {
    if epsilon.is_negative() || epsilon >= &Rational::one() {
        return Err(EngineError::BadEpsilon(epsilon.clone()));
    }
    let one = Rational::one();
    let half = Rational::ratio(1, 2);
    let bound = &one - epsilon;

    let modes: Vec<(RecognitionMode, Tri)> = vec![
        (
            RecognitionMode::NegativeOneSided,
            all(reports, |r| {
                if r.member {
                    consistent_with_one(&r.report.reject_lo)
                } else {
                    at_least(&r.report.reject_lo, &r.report.live, &bound)
                }
            }),
        ),
        (
            RecognitionMode::PositiveOneSided,
            all(reports, |r| {
                if r.member {
                    at_least(&r.report.accept_lo, &r.report.live, &bound)
                } else {
                    consistent_with_one(&r.report.accept_lo)
                }
            }),
        ),
        (
            RecognitionMode::Bounded,
            if epsilon >= &half {
                Tri::No
            } else {
                all(reports, |r| {
                    if r.member {
                        at_least(&r.report.accept_lo, &r.report.live, &bound)
                    } else {
                        at_least(&r.report.reject_lo, &r.report.live, &bound)
                    }
                })
            },
        ),
        (
            RecognitionMode::Unbounded,
            all(reports, |r| {
                if r.member {
                    above(&r.report.accept_lo, &r.report.live, &half)
                } else {
                    at_least(&r.report.reject_lo, &r.report.live, &half)
                }
            }),
        ),
        (
            RecognitionMode::OneSidedUnbounded,
            all(reports, |r| {
                if r.member {
                    above(&r.report.accept_lo, &r.report.live, &Rational::zero())
                } else {
                    consistent_with_one(&r.report.accept_lo)
                }
            }),
        ),
    ];

    for (mode, tri) in modes {
        match tri {
            Tri::Yes => return Ok(mode),
            Tri::No => continue,
            Tri::Maybe => return Err(EngineError::Inconclusive(mode.to_string())),
        }
    }
    Ok(RecognitionMode::None)
}
