//! Exact 1/5-weight quantum coins.
//!
//! Quantum machines have no classical randomness, so terminal accept weights
//! like `(1/5)^k` must come from the register. A single superoperator with a
//! uniform 1/5 outcome on every state would need an element `E` with
//! `EᵀE = (1/5) I`, impossible over the rationals in dimension 3 (its
//! determinant squared would be `5^-3`). Instead the coin alternates between
//! two rays with rational 1/5-weight transitions between them:
//!
//! - on the ray `(0,0,1)`: outcome 1 has weight 1/5 and lands on `(1,2,0)`;
//! - on the ray `(1,2,0)`: outcome 1 has weight 1/5 and lands on `(0,0,1)`.
//!
//! The losing outcomes carry weight 4/5 and the machine restarts on them, so
//! a run of `k` flips survives with weight exactly `(1/5)^k`.

use crate::exactmath::{QMatrix, Rational, Superoperator};

fn fifth() -> Rational {
    Rational::ratio(1, 5)
}

/// Coin flip on the ray `(0,0,1)`: outcome 1 (weight 1/5) continues on the
/// ray `(1,2,0)`; outcome 3 (weight 4/5) loses. Outcome 2 has weight zero
/// there.
pub fn coin_on_third() -> Superoperator {
    let s = fifth();
    Superoperator::new(vec![
        QMatrix::scaled_int(s.clone(), &[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0]]),
        QMatrix::scaled_int(s.clone(), &[&[5, 0, 0], &[0, 5, 0], &[0, 0, 0]]),
        QMatrix::scaled_int(s, &[&[0, 0, 0], &[0, 0, 2], &[0, 0, 4]]),
    ])
    .expect("static operator")
}

/// Coin flip on the ray `(1,2,0)`: outcome 1 (weight 1/5) continues on the
/// ray `(0,0,1)`; outcome 3 (weight 4/5) loses. Outcomes 2 and 4 have weight
/// zero there.
pub fn coin_on_plane() -> Superoperator {
    let s = fifth();
    Superoperator::new(vec![
        QMatrix::scaled_int(s.clone(), &[&[0, 0, 0], &[0, 0, 0], &[1, 2, 0]]),
        QMatrix::scaled_int(s.clone(), &[&[2, -1, 0], &[0, 0, 0], &[0, 0, 0]]),
        QMatrix::scaled_int(s.clone(), &[&[2, -4, 0], &[4, 2, 0], &[0, 0, 0]]),
        QMatrix::scaled_int(s, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 5]]),
    ])
    .expect("static operator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::QVector;

    #[test]
    fn coins_are_complete() {
        assert!(coin_on_third().check_completeness());
        assert!(coin_on_plane().check_completeness());
    }

    #[test]
    fn alternating_flip_weights_are_exact_fifths() {
        let e3 = QVector::basis(3, 0).scale(&Rational::zero()); // placeholder
        let _ = e3;
        let third = QVector::new(vec![
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        ])
        .unwrap();
        let outs = coin_on_third().apply(&third).unwrap();
        assert_eq!(outs[0].weight, Rational::ratio(1, 5));
        assert!(outs[1].weight.is_zero());
        assert_eq!(outs[2].weight, Rational::ratio(4, 5));

        // outcome 1 lands on the plane ray, where the second coin flips back
        let plane = outs[0].unconditional.clone();
        let outs2 = coin_on_plane().apply(&plane).unwrap();
        let n = plane.norm_squared();
        assert_eq!(&outs2[0].weight / &n, Rational::ratio(1, 5));
        assert_eq!(&outs2[2].weight / &n, Rational::ratio(4, 5));
        assert!(outs2[1].weight.is_zero() && outs2[3].weight.is_zero());
        // and the winning vector is back on the third axis
        let w = &outs2[0].unconditional;
        assert!(w.entries()[0].is_zero() && w.entries()[1].is_zero());
    }
}
