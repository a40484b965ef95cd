//! Bounded-error probabilistic simulation of nondeterministic one-counter
//! machines.
//!
//! The output machine runs three layers folded into one table:
//!
//! 1. every nondeterministic choice among `l` actions becomes a uniform
//!    probabilistic choice `1/l`, and rejection becomes a restart;
//! 2. at the start of each round the machine simulates that randomization
//!    with weight 3/4 and with weight 1/4 runs a rejection cascade that
//!    rejects with weight exactly `(1/k)^(c |x̃|^2)` (and restarts otherwise),
//!    where `k` is the source machine's maximal fan-out;
//! 3. every step of the above first restarts with weight 1/2.
//!
//! Members are then accepted with limiting probability at least 3/4 and
//! nonmembers are never accepted. The cascade weight is realized with a
//! counter gadget: `c` initialization passes load `c |x̃|` onto the counter,
//! then that many sweeps each flip a `1/k` choice per tape cell, rejecting
//! only if every flip lands on its first outcome.

use crate::exactmath::Rational;
use crate::machines::{
    Action, CounterStatus, Kind, MachineSpec, Move, RawAction, Rhs, SpecBuilder, CENT, DOLLAR,
};

use super::ConstructionError;

#[derive(Clone, Copy, Debug)]
pub struct TransformParams {
    /// Cascade exponent constant; the audit raises it when needed.
    pub c: u32,
}

impl Default for TransformParams {
    fn default() -> Self {
        TransformParams { c: 2 }
    }
}

#[derive(Clone, Debug)]
pub struct Transformed {
    pub spec: MachineSpec,
    /// Maximal nondeterministic fan-out of the source.
    pub k: usize,
    pub c: u32,
}

impl Transformed {
    /// The designed per-round rejection weight `(1/k)^(c |x̃|^2)` before the
    /// step-restart wrapping, for reporting.
    pub fn cascade_weight(&self, input_len: usize) -> Rational {
        let n = (input_len + 2) as u32;
        Rational::ratio(1, self.k as i64).pow(self.c * n * n)
    }
}

const STATUSES: [CounterStatus; 2] = [CounterStatus::Zero, CounterStatus::Nonzero];

/// Wraps outcomes with the per-step 1/2 restart and merges restart weight.
fn wrap(outcomes: Vec<(Rational, RawAction)>) -> Vec<(Rational, RawAction)> {
    let half = Rational::ratio(1, 2);
    let mut restart_weight = half.clone();
    let mut rest = Vec::new();
    for (p, a) in outcomes {
        let p = &p * &half;
        if a.restart {
            restart_weight += &p;
        } else {
            rest.push((p, a));
        }
    }
    let mut out = vec![(restart_weight, RawAction::restart())];
    out.append(&mut rest);
    out
}

pub fn transform_nca_to_pca(
    src: &MachineSpec,
    params: &TransformParams,
) -> Result<Transformed, ConstructionError> {
    if src.kind() != Kind::TwoNca {
        return Err(ConstructionError::WrongKind {
            expected: "2nca",
            found: src.kind(),
        });
    }
    if params.c < 1 {
        return Err(ConstructionError::BadParams("cascade exponent c must be >= 1".into()));
    }
    let k = src
        .rows()
        .values()
        .map(|rhs| match rhs {
            Rhs::Nondet(v) => v.len(),
            _ => 1,
        })
        .max()
        .unwrap_or(1);

    let mut b = SpecBuilder::new(Kind::TwoPca);
    b.state("entry").accept("acc").reject("rej");
    b.sigma(src.alphabet().sigma());
    let sim = |s: &str| format!("sim:{s}");

    // entry: split between the randomized simulation and the cascade
    b.prob(
        "entry",
        CENT,
        &[CounterStatus::Zero],
        wrap(vec![
            (
                Rational::ratio(3, 4),
                RawAction::go(sim(src.state_name(src.initial_state())), Move::Stay, &[0]),
            ),
            (
                Rational::ratio(1, 4),
                RawAction::go("casc:init:1", Move::Stay, &[0]),
            ),
        ]),
    );

    // simulation layer: uniform choice, rejection becomes restart
    for (key, rhs) in src.rows() {
        let actions: Vec<&Action> = match rhs {
            Rhs::Nondet(v) => v.iter().collect(),
            _ => unreachable!("validated 2nca rows are nondeterministic"),
        };
        let l = actions.len();
        let share = Rational::ratio(1, l as i64);
        let outcomes = actions
            .iter()
            .map(|a| {
                let raw = match a {
                    Action::Restart => RawAction::restart(),
                    Action::Go {
                        state,
                        mv,
                        deltas,
                        pebble: _,
                    } => {
                        if *state == src.reject_state() {
                            RawAction::restart()
                        } else if *state == src.accept_state() {
                            RawAction::go("acc", *mv, deltas)
                        } else {
                            RawAction::go(sim(src.state_name(*state)), *mv, deltas)
                        }
                    }
                };
                (share.clone(), raw)
            })
            .collect();
        b.prob(
            sim(src.state_name(key.state)),
            key.symbol,
            &key.statuses,
            wrap(outcomes),
        );
    }

    // cascade layer: c loading passes, then counter-many flip sweeps
    let endmarked = src.alphabet().endmarked();
    for pass in 1..=params.c {
        let go_name = format!("casc:init:{pass}");
        let back_name = format!("casc:initback:{pass}");
        for &sym in &endmarked {
            for st in STATUSES {
                if sym != DOLLAR {
                    b.prob(
                        &go_name,
                        sym,
                        &[st],
                        wrap(vec![(Rational::one(), RawAction::go(&go_name, Move::Right, &[1]))]),
                    );
                } else {
                    b.prob(
                        &go_name,
                        sym,
                        &[st],
                        wrap(vec![(Rational::one(), RawAction::go(&back_name, Move::Left, &[1]))]),
                    );
                }
                if sym != CENT {
                    b.prob(
                        &back_name,
                        sym,
                        &[st],
                        wrap(vec![(Rational::one(), RawAction::go(&back_name, Move::Left, &[0]))]),
                    );
                } else {
                    let next = if pass < params.c {
                        format!("casc:init:{}", pass + 1)
                    } else {
                        "casc:flip".to_string()
                    };
                    b.prob(
                        &back_name,
                        sym,
                        &[st],
                        wrap(vec![(Rational::one(), RawAction::go(next, Move::Stay, &[0]))]),
                    );
                }
            }
        }
    }
    let flip_continue = Rational::ratio(1, k as i64);
    let flip_restart = Rational::one() - &flip_continue;
    for &sym in &endmarked {
        for st in STATUSES {
            let continue_action = if sym != DOLLAR {
                RawAction::go("casc:flip", Move::Right, &[0])
            } else {
                // sweep done: consume one sweep credit and walk back
                RawAction::go("casc:flipback", Move::Left, &[-1])
            };
            let mut outcomes = vec![(flip_continue.clone(), continue_action)];
            if !flip_restart.is_zero() {
                outcomes.push((flip_restart.clone(), RawAction::restart()));
            }
            b.prob("casc:flip", sym, &[st], wrap(outcomes));

            if sym != CENT {
                b.prob(
                    "casc:flipback",
                    sym,
                    &[st],
                    wrap(vec![(Rational::one(), RawAction::go("casc:flipback", Move::Left, &[0]))]),
                );
            }
        }
    }
    // back at the left endmarker: remaining sweeps, or the accumulated reject
    b.prob(
        "casc:flipback",
        CENT,
        &[CounterStatus::Nonzero],
        wrap(vec![(Rational::one(), RawAction::go("casc:flip", Move::Stay, &[0]))]),
    );
    b.prob(
        "casc:flipback",
        CENT,
        &[CounterStatus::Zero],
        wrap(vec![(Rational::one(), RawAction::go("rej", Move::Stay, &[0]))]),
    );

    // unreachable observables
    b.fill_missing(RawAction::go("rej", Move::Stay, &[0]));

    let spec = b.build()?;
    Ok(Transformed {
        spec,
        k,
        c: params.c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{
        classify_mode, round_absorption, AbsorbOptions, LabeledReport, MachineSystem,
        RecognitionMode,
    };

    use crate::builtin::fixtures::contains_aa_2nca;

    #[test]
    fn transform_produces_valid_machine_with_exact_row_sums() {
        let t = transform_nca_to_pca(&contains_aa_2nca(), &TransformParams::default()).unwrap();
        assert_eq!(t.spec.kind(), Kind::TwoPca);
        assert_eq!(t.k, 2);
        // validation enforced exact sums already; spot-check the raw numbers
        assert_eq!(t.cascade_weight(1), Rational::ratio(1, 2).pow(18));
    }

    #[test]
    fn member_acceptance_dominates_three_to_one() {
        let src = contains_aa_2nca();
        let (t, reports) = transform_with_audit(&src, &["aa", "baab", "ab", "bb"], 6).unwrap();
        assert_eq!(t.c, 2, "default exponent should already pass at this scale");
        for (input, round) in &reports {
            let member = input.contains("aa");
            if member {
                assert!(round.accept >= Rational::int(3) * &round.reject, "{input}");
                assert!(!round.accept.is_zero());
            } else {
                assert!(round.accept.is_zero(), "{input} must never accept");
            }
        }
    }

    #[test]
    fn classify_positive_one_sided() {
        let src = contains_aa_2nca();
        let (t, _) = transform_with_audit(&src, &["aa", "baab"], 6).unwrap();
        let mut reports = Vec::new();
        for (input, member) in [("aa", true), ("baab", true), ("ab", false), ("b", false)] {
            let sys = MachineSystem::new(&t.spec, input).unwrap();
            let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
            reports.push(LabeledReport {
                input: input.into(),
                member,
                report: round.totals().unwrap(),
            });
        }
        let mode = classify_mode(&reports, &Rational::ratio(1, 4)).unwrap();
        assert_eq!(mode, RecognitionMode::PositiveOneSided);
    }

    #[test]
    fn reject_only_source_never_accepts() {
        let mut b = SpecBuilder::new(Kind::TwoNca);
        b.state("s").accept("acc").reject("rej").sigma(&[]);
        for st in STATUSES {
            b.nondet("s", CENT, &[st], vec![RawAction::go("s", Move::Right, &[0])]);
            b.nondet("s", DOLLAR, &[st], vec![RawAction::go("rej", Move::Stay, &[0])]);
        }
        let src = b.build().unwrap();
        let t = transform_nca_to_pca(&src, &TransformParams::default()).unwrap();
        let sys = MachineSystem::new(&t.spec, "").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.accept.is_zero());
        assert!(round.reject > Rational::zero());
        assert!(round.totals().unwrap().reject_lo.is_one());
    }
}

/// Builds the transform and, per member input, verifies exactly that the
/// limiting acceptance weight is at least three times the rejection weight,
/// raising `c` until it is. Nonmember inputs are checked to never accept.
pub fn transform_with_audit(
    src: &MachineSpec,
    inputs: &[&str],
    max_c: u32,
) -> Result<(Transformed, Vec<(String, crate::engines::RoundReport)>), ConstructionError> {
    use crate::engines::{round_absorption, AbsorbOptions, MachineSystem};

    let mut c = TransformParams::default().c;
    loop {
        let t = transform_nca_to_pca(src, &TransformParams { c })?;
        let mut reports = Vec::new();
        let mut ok = true;
        for &input in inputs {
            let member = super::reach::capped_reachability(
                src,
                input,
                &super::reach::ReachabilityBound::for_input(src, input),
            )?
            .accepting_path
            .is_some();
            let sys = MachineSystem::new(&t.spec, input)?;
            let round = round_absorption(&sys, &AbsorbOptions::default())?;
            if member {
                let three_rejects = Rational::int(3) * &round.reject;
                if round.accept < three_rejects {
                    ok = false;
                }
            } else if !round.accept.is_zero() {
                return Err(ConstructionError::AuditFailed(format!(
                    "nonmember {input:?} has accepting mass {}",
                    round.accept
                )));
            }
            reports.push((input.to_string(), round));
        }
        if ok {
            return Ok((t, reports));
        }
        c += 1;
        if c > max_c {
            return Err(ConstructionError::AuditFailed(format!(
                "no cascade exponent up to {max_c} balances acceptance three-to-one"
            )));
        }
    }
}
