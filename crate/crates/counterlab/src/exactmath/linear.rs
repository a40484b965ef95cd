//! Rational vectors and matrices for the quantum register.
//!
//! Amplitudes are rational only; normalized state vectors are never
//! materialized (their norms would be irrational square roots). Engines carry
//! unconditional vectors and track squared norms separately.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;

use super::{ExactError, Rational};

/// A column vector of rational amplitudes with a fixed dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self, ExactError> {
        if entries.is_empty() {
            return Err(ExactError::EmptyVector);
        }
        Ok(QVector(entries))
    }

    /// The standard basis vector `e_index` of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut v = vec![Rational::zero(); dim];
        v[index] = Rational::one();
        QVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// Squared Euclidean norm; exact because all entries are rational.
    pub fn norm_squared(&self) -> Rational {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn scale(&self, factor: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * factor).collect())
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Normalization in the unconditional-vector calculus: returns the squared
/// norm as the weight and leaves the vector untouched. Callers track weights
/// separately; actual division by `sqrt(weight)` would leave the rationals.
pub fn normalize(psi: &QVector) -> Result<(QVector, Rational), ExactError> {
    if psi.is_zero() {
        return Err(ExactError::ZeroVector);
    }
    Ok((psi.clone(), psi.norm_squared()))
}

/// A square matrix of rationals acting on a register of dimension `dim`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMatrix {
    dim: usize,
    // row-major
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(ExactError::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(ExactError::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend(row.iter().cloned());
        }
        Ok(QMatrix { dim, entries })
    }

    /// Builds `scale * M` from integer entries, the form quantum machine
    /// definitions are usually written in.
    pub fn scaled_int(scale: Rational, rows: &[&[i64]]) -> Self {
        let m = QMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::int(x) * scale.clone()).collect())
                .collect(),
        )
        .expect("static matrix shape");
        m
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = QMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        };
        for i in 0..dim {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.dim + col]
    }

    fn at_mut(&mut self, row: usize, col: usize) -> &mut Rational {
        &mut self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.dim)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                if i == j {
                    self.at(i, j).is_one()
                } else {
                    self.at(i, j).is_zero()
                }
            })
        })
    }

    /// Matrix-vector product `M * psi`.
    pub fn apply(&self, psi: &QVector) -> Result<QVector, ExactError> {
        if psi.dim() != self.dim {
            return Err(ExactError::DimensionMismatch {
                expected: self.dim,
                found: psi.dim(),
            });
        }
        let entries = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.at(i, j) * &psi.entries()[j])
                    .sum()
            })
            .collect();
        Ok(QVector(entries))
    }

    /// `Mᵀ * M` added into `acc` (entries are rational, so the conjugate
    /// transpose is the plain transpose).
    pub fn add_gram_into(&self, acc: &mut QMatrix) {
        debug_assert_eq!(self.dim, acc.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut s = Rational::zero();
                for k in 0..self.dim {
                    s += self.at(k, i) * self.at(k, j);
                }
                *acc.at_mut(i, j) += s;
            }
        }
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in self.rows() {
            write!(f, "  [")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// An integer vector in canonical form: entries divided by their gcd, first
/// nonzero entry positive. Two unconditional vectors that are nonzero scalar
/// multiples of each other canonicalize identically, which is what lets the
/// engines merge branches whose futures coincide.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalVec(Vec<BigInt>);

impl CanonicalVec {
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![BigInt::zero(); dim];
        v[index] = BigInt::from(1);
        CanonicalVec(v)
    }

    /// Canonicalizes a rational vector. Returns `None` for the zero vector.
    pub fn from_qvector(psi: &QVector) -> Option<Self> {
        if psi.is_zero() {
            return None;
        }
        // clear denominators
        let mut lcm = BigInt::from(1);
        for e in psi.entries() {
            lcm = lcm.lcm(e.denom());
        }
        let mut ints: Vec<BigInt> = psi
            .entries()
            .iter()
            .map(|e| e.numer() * (&lcm / e.denom()))
            .collect();
        // divide by gcd
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if !g.is_zero() {
            for x in &mut ints {
                *x /= &g;
            }
        }
        // sign: first nonzero entry positive
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in &mut ints {
                    *x = -x.clone();
                }
            }
        }
        Some(CanonicalVec(ints))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_qvector(&self) -> QVector {
        QVector(self.0.iter().map(|x| Rational::from_bigint(x.clone())).collect())
    }

    pub fn norm_squared(&self) -> BigInt {
        self.0.iter().map(|x| x * x).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn norm_squared_examples() {
        let v = QVector::new(vec![r(1, 3), r(1, 3), r(1, 3)]).unwrap();
        assert_eq!(v.norm_squared(), r(1, 3));
        let (unchanged, w) = normalize(&v).unwrap();
        assert_eq!(unchanged, v);
        assert_eq!(w, r(1, 3));
    }

    #[test]
    fn normalize_basis_and_zero() {
        let e1 = QVector::basis(3, 0);
        assert_eq!(normalize(&e1).unwrap().1, Rational::one());
        let z = QVector::new(vec![r(0, 1); 3]).unwrap();
        assert!(matches!(normalize(&z), Err(ExactError::ZeroVector)));
    }

    #[test]
    fn matrix_apply_dimension_check() {
        let m = QMatrix::identity(3);
        let v = QVector::basis(2, 0);
        assert!(matches!(
            m.apply(&v),
            Err(ExactError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn canonical_vectors_merge_scalings() {
        let a = QVector::new(vec![r(1, 3), r(1, 3), r(2, 3)]).unwrap();
        let b = a.scale(&r(-7, 5));
        let ca = CanonicalVec::from_qvector(&a).unwrap();
        let cb = CanonicalVec::from_qvector(&b).unwrap();
        assert_eq!(ca, cb);
        assert_eq!(ca.to_qvector().entries()[0], Rational::one());
    }
}
