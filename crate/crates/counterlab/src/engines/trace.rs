//! Deterministic path tracing with literal unconditional vectors.
//!
//! Engines work with canonical (rescaled) register vectors; audits of
//! closed-form state expressions need the literal unconditional vector along
//! a chosen outcome path, which this tracer maintains by applying the chosen
//! operation element directly.

use crate::exactmath::{QVector, Rational, Superoperator};
use crate::machines::{Configuration, MachineSpec, Rhs};

use super::system::{Child, MachineSystem, System};
use super::EngineError;

#[derive(Clone, Debug)]
pub struct TracePoint {
    /// Configuration before the step.
    pub before: Configuration,
    /// Tape symbol scanned by the step.
    pub scanned: char,
    /// The superoperator applied, for quantum steps.
    pub op: Option<Superoperator>,
    /// 1-based outcome label chosen (quantum) or child index chosen.
    pub outcome: usize,
    /// Literal unconditional register vector after the step.
    pub psi_after: Option<QVector>,
    /// Weight of the chosen child at this step.
    pub weight: Rational,
}

/// Follows one outcome path for `max_steps` steps or until the machine
/// halts/restarts. `choose` picks the child index from the weighted children
/// of each step (quantum children are ordered by outcome label).
pub fn follow_path(
    spec: &MachineSpec,
    input: &str,
    max_steps: usize,
    mut choose: impl FnMut(usize, &[(Rational, Child<Configuration>)]) -> usize,
) -> Result<Vec<TracePoint>, EngineError> {
    let sys = MachineSystem::new(spec, input)?;
    let mut c = sys.initial();
    let mut psi: Option<QVector> = spec
        .quantum()
        .map(|q| QVector::basis(q.states.len(), q.initial));
    let mut out = Vec::new();

    for step in 0..max_steps {
        if spec.is_halting(c.state) {
            break;
        }
        let key = sys.row_key(&c, None)?;
        let children = sys.step_config(&c, None)?;
        if children.is_empty() {
            break;
        }
        let idx = choose(step, &children).min(children.len() - 1);
        let (weight, child) = &children[idx];

        // reconstruct which outcome label this child corresponds to and
        // evolve the literal vector
        let (op, outcome, psi_after) = match spec.row(&key) {
            Some(Rhs::Quantum { op, .. }) => {
                // children skip zero-weight outcomes; recover the label by
                // applying elements in order
                let cur = psi.as_ref().expect("quantum kind keeps a literal vector");
                let mut label = 0usize;
                let mut seen = 0usize;
                let mut next_psi = None;
                for (i, e) in op.elements().iter().enumerate() {
                    let v = e.apply(cur).map_err(EngineError::Exact)?;
                    if !v.norm_squared().is_zero() {
                        if seen == idx {
                            label = i + 1;
                            next_psi = Some(v);
                            break;
                        }
                        seen += 1;
                    }
                }
                (Some(op.clone()), label, next_psi)
            }
            _ => (None, idx + 1, psi.clone()),
        };

        out.push(TracePoint {
            before: c.clone(),
            scanned: key.symbol,
            op,
            outcome,
            psi_after: psi_after.clone(),
            weight: weight.clone(),
        });

        match child {
            Child::Accept | Child::Reject => break,
            Child::Config(c2) => {
                // a restart re-initializes the literal register
                if *c2 == sys.initial() && c2.quantum.is_some() {
                    psi = spec
                        .quantum()
                        .map(|q| QVector::basis(q.states.len(), q.initial));
                } else {
                    psi = psi_after;
                }
                c = c2.clone();
            }
        }
    }
    Ok(out)
}
