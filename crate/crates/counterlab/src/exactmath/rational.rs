//! Exact arbitrary-precision rational numbers.
//!
//! `Rational` is the only number type used in machine semantics. It is a thin
//! wrapper around [`num_rational::BigRational`] that pins down the textual
//! form used by machine files and reports (`"p/q"` or `"p"`, never a float)
//! and provides an exact decimal approximation for display.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::ExactError;

type Inner = num_rational::BigRational;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator. Equality is value equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Inner);

impl Rational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Rational(Inner::new(numer, denom)))
    }

    /// `p / q` from machine integers. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rational(Inner::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn int(n: i64) -> Self {
        Rational(Inner::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(Inner::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(Inner::zero())
    }

    pub fn one() -> Self {
        Rational(Inner::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `self^exp` for a nonnegative exponent.
    pub fn pow(&self, exp: u32) -> Self {
        Rational(self.0.pow(exp as i32))
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Exact power of ten, `10^exp` with `exp` possibly negative.
    pub fn pow10(exp: i32) -> Self {
        let ten = Inner::from_integer(BigInt::from(10));
        Rational(ten.pow(exp))
    }

    /// Best-effort conversion for statistics display. Exact values far outside
    /// the f64 range collapse to 0.0 or infinity.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Decimal approximation to `sig` significant digits, computed with
    /// integer arithmetic so that astronomically small or large values are
    /// still rendered faithfully (e.g. `"1.693508780843e-5"`).
    pub fn approx_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.0.numer().magnitude().clone();
        let den = self.0.denom().magnitude().clone();

        // decimal exponent e such that 10^e <= num/den < 10^(e+1)
        let num_digits = num.to_str_radix(10).len() as i64;
        let den_digits = den.to_str_radix(10).len() as i64;
        let mut exp = num_digits - den_digits;
        // scale numerator to produce `sig` digits of quotient
        let shift = sig as i64 - exp;
        let ten = BigUint::from(10u32);
        let (scaled_num, scaled_den) = if shift >= 0 {
            (&num * ten.pow(shift as u32), den)
        } else {
            (num, &den * ten.pow((-shift) as u32))
        };
        let mut digits = (&scaled_num / &scaled_den).to_str_radix(10);
        // the estimate of exp can be off by one
        if digits.len() as i64 > sig as i64 {
            exp += digits.len() as i64 - sig as i64;
            digits.truncate(sig);
        } else if (digits.len() as i64) < sig as i64 {
            exp -= sig as i64 - digits.len() as i64;
            // re-deriving keeps the digit count honest for values like 0.09999
            while digits.len() < sig {
                digits.push('0');
            }
        }
        exp -= 1; // exponent of the leading digit
        let digits = digits.trim_end_matches('0');
        let digits = if digits.is_empty() { "0" } else { digits };
        let mantissa = if digits.len() == 1 {
            digits.to_string()
        } else {
            format!("{}.{}", &digits[..1], &digits[1..])
        };
        let sign = if neg { "-" } else { "" };
        if (-4..(sig as i64)).contains(&exp) {
            // small exponents print in plain positional form
            let val = format!("{sign}{mantissa}e{exp}");
            Self::positional(&val).unwrap_or(val)
        } else {
            format!("{sign}{mantissa}e{exp}")
        }
    }

    fn positional(sci: &str) -> Option<String> {
        let (mant, exp) = sci.split_once('e')?;
        let exp: i64 = exp.parse().ok()?;
        let neg = mant.starts_with('-');
        let mant = mant.trim_start_matches('-');
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        let digits: String = format!("{int_part}{frac_part}");
        let point = int_part.len() as i64 + exp;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if point <= 0 {
            out.push_str("0.");
            for _ in 0..(-point) {
                out.push('0');
            }
            out.push_str(&digits);
        } else if (point as usize) >= digits.len() {
            out.push_str(&digits);
            for _ in 0..(point as usize - digits.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..point as usize]);
            out.push('.');
            out.push_str(&digits[point as usize..]);
        }
        Some(out)
    }

    /// Render as `p/q (approx d)` with 12 significant digits, the report
    /// format used throughout the workbench.
    pub fn display_with_approx(&self) -> String {
        format!("{} (approx {})", self, self.approx_decimal(12))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Accepts `"p/q"` or `"p"` with optional sign. Scientific notation
    /// `mEn` / `men` with integer mantissa is accepted for tolerances
    /// (e.g. `1e-9`); floating-point literals with a decimal point are not.
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let s = s.trim();
        let bad = || ExactError::BadRational(s.to_string());
        if s.is_empty() || s.contains('.') {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.sign() != Sign::Plus {
                return Err(bad());
            }
            return Rational::new(p, q);
        }
        if let Some((m, e)) = s.split_once(['e', 'E']) {
            let m = BigInt::from_str(m.trim()).map_err(|_| bad())?;
            let e: i32 = e.trim().parse().map_err(|_| bad())?;
            return Ok(Rational::from_bigint(m) * Rational::pow10(e));
        }
        let p = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Rational::from_bigint(p))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rational> for Rational {
    fn div_assign(&mut self, rhs: &Rational) {
        self.0 /= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        *self == Rational::int(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.partial_cmp(&Rational::int(*other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["1/3", "-7/12", "0", "42", "-5"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_floats_and_bad_denominators() {
        assert!("0.5".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-3".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn scientific_tolerances() {
        let r: Rational = "1e-9".parse().unwrap();
        assert_eq!(r, Rational::ratio(1, 1_000_000_000));
    }

    #[test]
    fn lowest_terms() {
        let r = Rational::ratio(6, -9);
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(r, Rational::ratio(-2, 3));
    }

    #[test]
    fn exact_arithmetic() {
        let a = Rational::ratio(1, 3);
        let b = Rational::ratio(1, 6);
        assert_eq!(&a + &b, Rational::ratio(1, 2));
        assert_eq!(&a * &b, Rational::ratio(1, 18));
        assert_eq!(a.pow(3), Rational::ratio(1, 27));
    }

    #[test]
    fn decimal_approximation() {
        let r = Rational::ratio(1, 59049); // (1/9)^5
        assert_eq!(r.approx_decimal(12), "1.69350878084e-5");
        assert_eq!(Rational::ratio(1, 8).approx_decimal(12), "0.125");
        let tiny = Rational::ratio(1, 3).pow(200);
        assert!(tiny.approx_decimal(12).contains("e-96"));
        assert_eq!(Rational::ratio(1, 2).approx_decimal(12), "0.5");
        assert_eq!(Rational::int(-3).approx_decimal(4), "-3");
    }
}
