//! Measurement superoperators over rational matrices.
//!
//! A superoperator is a finite list of operation elements `E_1..E_k` with
//! `sum_i E_iᵀ E_i = I` (entries are rational, so conjugation is
//! transposition). Applying one to an unconditional state vector yields, for
//! each outcome `i`, the unconditional vector `E_i psi` whose squared norm is
//! the outcome weight. When the completeness equation holds the weights sum
//! exactly to the squared norm of the input.

use std::fmt;

use super::{ExactError, QMatrix, QVector, Rational};

/// One measurement outcome of [`Superoperator::apply`].
#[derive(Clone, Debug)]
pub struct Outcome {
    /// 1-based outcome label, matching the order of the operation elements.
    pub label: usize,
    /// Unconditional post-measurement vector `E_i psi` (not normalized).
    pub unconditional: QVector,
    /// Squared norm of `unconditional`; the probability mass of this outcome
    /// when `psi` is a round-start unit vector.
    pub weight: Rational,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Superoperator {
    elements: Vec<QMatrix>,
}

impl Superoperator {
    pub fn new(elements: Vec<QMatrix>) -> Result<Self, ExactError> {
        let dim = match elements.first() {
            Some(e) => e.dim(),
            None => return Err(ExactError::NoElements),
        };
        for e in &elements {
            if e.dim() != dim {
                return Err(ExactError::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
        }
        Ok(Superoperator { elements })
    }

    /// Single-element identity operator: one outcome, state unchanged.
    pub fn identity(dim: usize) -> Self {
        Superoperator {
            elements: vec![QMatrix::identity(dim)],
        }
    }

    /// The initialize operator: resets the register to the basis state
    /// `target`. Realized with elements `E_i = |target><i|` so that the
    /// completeness equation holds exactly; on a basis-state input only one
    /// outcome has nonzero weight, matching its single-outcome description.
    pub fn initialize(dim: usize, target: usize) -> Self {
        let elements = (0..dim)
            .map(|i| {
                let mut rows = vec![vec![Rational::zero(); dim]; dim];
                rows[target][i] = Rational::one();
                QMatrix::new(rows).expect("square by construction")
            })
            .collect();
        Superoperator { elements }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[QMatrix] {
        &self.elements
    }

    /// Exact check of the completeness equation `sum_i E_iᵀ E_i = I`.
    pub fn check_completeness(&self) -> bool {
        let dim = self.dim();
        let mut acc = QMatrix::new(vec![vec![Rational::zero(); dim]; dim]).unwrap();
        for e in &self.elements {
            e.add_gram_into(&mut acc);
        }
        acc.is_identity()
    }

    /// Applies every operation element to `psi`, returning all outcomes
    /// including those of weight zero.
    pub fn apply(&self, psi: &QVector) -> Result<Vec<Outcome>, ExactError> {
        if psi.dim() != self.dim() {
            return Err(ExactError::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        self.elements
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let unconditional = e.apply(psi)?;
                let weight = unconditional.norm_squared();
                Ok(Outcome {
                    label: i + 1,
                    unconditional,
                    weight,
                })
            })
            .collect()
    }
}

impl fmt::Debug for Superoperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Superoperator[{} elements, dim {}]", self.len(), self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn identity_is_complete() {
        assert!(Superoperator::identity(3).check_completeness());
    }

    #[test]
    fn half_identity_is_not_complete() {
        // sum EᵀE = (1/4) I != I
        let half = QMatrix::scaled_int(r(1, 2), &[&[1, 0], &[0, 1]]);
        let op = Superoperator::new(vec![half]).unwrap();
        assert!(!op.check_completeness());
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let a = QMatrix::identity(2);
        let b = QMatrix::identity(3);
        assert!(matches!(
            Superoperator::new(vec![a, b]),
            Err(ExactError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_apply_preserves_vector_and_weight() {
        let op = Superoperator::identity(3);
        let psi = QVector::new(vec![r(1, 2), r(1, 3), r(0, 1)]).unwrap();
        let out = op.apply(&psi).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].unconditional, psi);
        assert_eq!(out[0].weight, psi.norm_squared());
    }

    #[test]
    fn initialize_is_complete_and_resets_basis_states() {
        let op = Superoperator::initialize(3, 0);
        assert!(op.check_completeness());
        let out = op.apply(&QVector::basis(3, 2)).unwrap();
        let nonzero: Vec<_> = out.iter().filter(|o| !o.weight.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].unconditional, QVector::basis(3, 0));
        assert_eq!(nonzero[0].weight, Rational::one());
    }
}
