//! Exact scalar rings shared by every recurrence.
//!
//! [`Rational`] and [`GaussianRational`] are the arbitrary-precision rational
//! field and its Gaussian extension; [`Dual`] carries a first-order
//! infinitesimal for forward differentiation. The [`Scalar`] trait lets the
//! wave equation and the embedding recurrences run unchanged over exact
//! rationals or over `f64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Complex number with rational real and imaginary parts.
pub type GaussianRational = Complex<Rational>;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, `"p"` or a decimal such as `"0.7"` or `"1e-3"` exactly.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let err = || Error::ParseRational {
        input: input.to_string(),
    };
    if s.is_empty() {
        return Err(err());
    }
    if s.contains('/') {
        let q = Rational::from_str(s).map_err(|_| err())?;
        return Ok(q);
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{whole}{frac}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// [`parse_rational`], rejecting values `<= 0`.
pub fn parse_positive(input: &str) -> Result<Rational> {
    let q = parse_rational(input)?;
    if q <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("a must be positive, got {input}")));
    }
    Ok(q)
}

/// Nearest double to an exact rational.
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Rounds each component to the nearest double.
pub fn to_float_complex(z: &GaussianRational) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

/// Bit length of the larger of numerator and denominator.
pub fn bit_length(q: &Rational) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

/// Truncated first-order dual number `value + infinitesimal·δ` with `δ² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dual {
    pub value: Rational,
    pub infinitesimal: Rational,
}

impl Dual {
    pub fn new(value: Rational, infinitesimal: Rational) -> Self {
        Self {
            value,
            infinitesimal,
        }
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            value,
            infinitesimal: Rational::zero(),
        }
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}δ", self.value, self.infinitesimal)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.value + rhs.value, self.infinitesimal + rhs.infinitesimal)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.value - rhs.value, self.infinitesimal - rhs.infinitesimal)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        let infinitesimal = &self.value * &rhs.infinitesimal + &rhs.value * &self.infinitesimal;
        Dual::new(self.value * rhs.value, infinitesimal)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.value, -self.infinitesimal)
    }
}

/// Lifts a rational into the dual ring. A tagged value `v` becomes `v + v·δ`,
/// so that the propagated infinitesimal of `log T` is `t·∂_t log T`.
pub fn dual_lift(v: &Rational, tagged: bool) -> Dual {
    if tagged {
        Dual::new(v.clone(), v.clone())
    } else {
        Dual::constant(v.clone())
    }
}

/// Returns `infinitesimal / value`.
pub fn dual_log_derivative(t: &Dual) -> Result<Rational> {
    if t.value.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(&t.infinitesimal / &t.value)
}

/// A commutative ring with exact or floating coefficients, closed under
/// division by non-zero elements.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(q: &Rational) -> Self;
    fn checked_div(&self, rhs: &Self) -> Result<Self>;
    /// Size of the element as a double (absolute value, modulus, or modulus of the value part).
    fn magnitude(&self) -> f64;
}

/// Scalars with a complex structure, used for embedding positions.
pub trait ComplexScalar: Scalar {
    fn from_parts(re: &Rational, im: &Rational) -> Self;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;
    /// Exact renderings of the real and imaginary parts, or decimals in float mode.
    fn text_parts(&self) -> (String, String);
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Dual::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.infinitesimal.is_zero()
    }
}

impl One for Dual {
    fn one() -> Self {
        Dual::constant(Rational::one())
    }
}

impl Scalar for Dual {
    fn from_rational(q: &Rational) -> Self {
        Dual::constant(q.clone())
    }
    /// Division only looks at the value part of the divisor.
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = &self.value / &rhs.value;
        let infinitesimal =
            (&self.infinitesimal * &rhs.value - &self.value * &rhs.infinitesimal)
                / (&rhs.value * &rhs.value);
        Ok(Dual::new(value, infinitesimal))
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.value.abs())
    }
}

/// Real coefficient types that can back a complex scalar.
pub trait RealScalar: Scalar + num_traits::Num {
    fn to_f64_lossy(&self) -> f64;
    fn text(&self) -> String;
}

impl RealScalar for Rational {
    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl RealScalar for f64 {
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn text(&self) -> String {
        format!("{self:e}")
    }
}

impl<T: RealScalar> Scalar for Complex<T> {
    fn from_rational(q: &Rational) -> Self {
        Complex::new(T::from_rational(q), T::zero())
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.clone() / rhs.clone())
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl<T: RealScalar> ComplexScalar for Complex<T> {
    fn from_parts(re: &Rational, im: &Rational) -> Self {
        Complex::new(T::from_rational(re), T::from_rational(im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64_lossy(), self.im.to_f64_lossy())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn text_parts(&self) -> (String, String) {
        (self.re.text(), self.im.text())
    }
}

/// Rendering of a Gaussian rational as its two text fields.
pub fn gaussian_fields(z: &GaussianRational) -> (String, String) {
    (z.re.to_string(), z.im.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        rational(p, d)
    }

    #[test]
    fn lift_and_leibniz() {
        assert_eq!(dual_lift(&q(3, 2), true), Dual::new(q(3, 2), q(3, 2)));
        assert_eq!(dual_lift(&q(1, 1), false), Dual::new(q(1, 1), q(0, 1)));
        let one = dual_lift(&q(1, 1), true);
        assert_eq!(one.clone() * one, Dual::new(q(1, 1), q(2, 1)));
    }

    #[test]
    fn log_derivative_examples() {
        assert_eq!(dual_log_derivative(&Dual::new(q(2, 1), q(1, 1))).unwrap(), q(1, 2));
        let t = q(5, 7);
        assert_eq!(dual_log_derivative(&dual_lift(&t, true)).unwrap(), q(1, 1));
        assert_eq!(dual_log_derivative(&Dual::constant(q(8, 1))).unwrap(), q(0, 1));
        assert!(matches!(
            dual_log_derivative(&Dual::new(q(0, 1), q(1, 1))),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn float_conversion() {
        let z = GaussianRational::new(q(1, 2), q(7, 10));
        assert_eq!(to_float_complex(&z), Complex64::new(0.5, 0.7));
        assert_eq!(to_float_complex(&GaussianRational::new(q(0, 1), q(0, 1))), Complex64::new(0.0, 0.0));
        assert_eq!(rational_to_f64(&q(1, 3)), 0.3333333333333333);
    }

    #[test]
    fn text_format() {
        assert_eq!(q(6, 4).to_string(), "3/2");
        assert_eq!(q(-4, 2).to_string(), "-2");
        assert_eq!(parse_rational("7/10").unwrap(), q(7, 10));
        assert_eq!(parse_rational("0.7").unwrap(), q(7, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), q(-5, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        for bad in ["", "abc", "1/0x", "1.2.3", "--1", "e5"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn division_by_zero_rejected() {
        let z = GaussianRational::new(q(1, 1), q(0, 1));
        assert!(matches!(z.checked_div(&GaussianRational::zero()), Err(Error::DivisionByZero)));
        assert!(q(1, 1).checked_div(&q(0, 1)).is_err());
        assert!(Dual::one().checked_div(&Dual::new(q(0, 1), q(3, 1))).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, d)| q(p, d))
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        small_rational().prop_filter("non-zero", |x| !Zero::is_zero(x))
    }

    fn dual() -> impl Strategy<Value = Dual> {
        (small_rational(), small_rational()).prop_map(|(v, w)| Dual::new(v, w))
    }

    fn gaussian() -> impl Strategy<Value = GaussianRational> {
        (small_rational(), small_rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
    }

    proptest! {
        #[test]
        fn dual_ring_axioms(x in dual(), y in dual(), z in dual()) {
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            prop_assert_eq!(x.clone() + (-x.clone()), Dual::zero());
            if !x.value.is_zero() {
                let inv = Dual::one().checked_div(&x).unwrap();
                prop_assert_eq!(inv * x, Dual::one());
            }
        }

        #[test]
        fn gaussian_field_axioms(x in gaussian(), y in gaussian(), z in gaussian()) {
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            if !x.is_zero() {
                let inv = GaussianRational::one().checked_div(&x).unwrap();
                prop_assert_eq!(inv * x.clone(), GaussianRational::one());
            }
            let m = x.clone() * ComplexScalar::conj(&x);
            prop_assert!(Zero::is_zero(&m.im));
            prop_assert_eq!(m.re, x.norm_sqr());
        }

        /// The dual derivative of a polynomial matches its secant slope as h → 0.
        #[test]
        fn dual_matches_finite_differences(t in small_rational(), c in proptest::collection::vec(small_rational(), 1..5)) {
            let eval = |x: Dual| -> Dual {
                c.iter().rev().fold(Dual::zero(), |acc, coeff| acc * x.clone() + Dual::constant(coeff.clone()))
            };
            let derivative = eval(Dual::new(t.clone(), q(1, 1))).infinitesimal;
            let f = |x: &Rational| eval(Dual::constant(x.clone())).value;
            let gap = |h: Rational| ((f(&(&t + &h)) - f(&t)) / &h - &derivative).abs();
            prop_assert!(gap(q(1, 10i64.pow(12))) <= q(1, 1000));
            prop_assert!(gap(q(1, 10i64.pow(12))) <= gap(q(1, 10i64.pow(6))));
        }

        #[test]
        fn rationals_round_trip_text(x in small_rational()) {
            prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn nonzero_inverse(x in nonzero_rational()) {
            prop_assert_eq!(q(1, 1).checked_div(&x).unwrap() * x, q(1, 1));
        }
    }
}
