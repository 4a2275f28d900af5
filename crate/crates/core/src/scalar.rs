//! Scalar types the algebra is generic over.
//!
//! Two traits carry the arithmetic contract:
//!
//! * [`Scalar`] is a field with owned and by-reference operators, a way to
//!   import exact rationals, and an explicit notion of "negligible". It is
//!   implemented for `f32`, `f64`, [`BigRational`] and [`Float`].
//! * [`Real`] adds square roots, which the geometric side needs for unit
//!   normals and incidence numbers. Exact rationals are deliberately not
//!   `Real`: radicals such as `sqrt(3(r^2 - 2r + 9))` force the float branch.
//!
//! Tolerances are always passed in by the caller. The only per-type constant
//! is [`Scalar::noise_floor`], the relative rounding level of the arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Big = FBig<HalfEven>;

/// Field operations shared by every coefficient type.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }

    fn from_rational(q: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Relative rounding level of one operation; `0.0` for exact types.
    fn noise_floor() -> f64;

    /// Exact types test for zero, float types compare `|self| <= tol`.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    /// Report text: `p/q` for rationals, full-precision scientific otherwise.
    fn to_text(&self) -> String;

    fn max_abs<'a, I>(values: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        values.into_iter().fold(Self::zero(), |acc, v| {
            let a = v.abs();
            if a > acc {
                a
            } else {
                acc
            }
        })
    }
}

/// Scalars with square roots.
pub trait Real: Scalar {
    fn sqrt(&self) -> Self;
    fn from_f64(x: f64) -> Self;
    fn precision_bits() -> u32;
}

/// Exact rational scalar.
pub type Rational = BigRational;

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn noise_floor() -> f64 {
        0.0
    }

    fn to_text(&self) -> String {
        self.to_string()
    }
}

macro_rules! impl_primitive_float {
    ($t:ty, $bits:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64(n: i64) -> Self {
                n as $t
            }

            fn from_rational(q: &BigRational) -> Self {
                ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }

            fn noise_floor() -> f64 {
                <$t>::EPSILON as f64
            }

            fn to_text(&self) -> String {
                format!("{:e}", self)
            }
        }

        impl Real for $t {
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }

            fn from_f64(x: f64) -> Self {
                x as $t
            }

            fn precision_bits() -> u32 {
                $bits
            }
        }
    };
}

impl_primitive_float!(f32, 24);
impl_primitive_float!(f64, 53);

/// Binary floating point number with a `BITS`-bit significand.
///
/// Every value, including `zero()` and `one()`, carries the full working
/// precision, so mixed expressions never silently drop to the precision of
/// an integer literal.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Float<const BITS: usize>(FBig<HalfEven>);

impl<const BITS: usize> Float<BITS> {
    fn wrap(v: FBig<HalfEven>) -> Self {
        Float(v.with_precision(BITS).value())
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::wrap(FBig::from(bigint_to_ibig(n)))
    }

    /// Decimal rendering with roughly `BITS * log10(2)` significant digits.
    pub fn to_decimal_string(&self) -> String {
        self.0.to_decimal().value().to_string()
    }
}

fn bigint_to_ibig(n: &BigInt) -> IBig {
    let (sign, words) = n.to_u64_digits();
    let mag = UBig::from_words(&words);
    match sign {
        Sign::Minus => -IBig::from(mag),
        _ => IBig::from(mag),
    }
}

impl<const BITS: usize> fmt::Debug for Float<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0.to_decimal().value())
    }
}

impl<const BITS: usize> fmt::Display for Float<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0.to_decimal().value())
    }
}

macro_rules! float_binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident) => {
        impl<const BITS: usize> $tr for Float<BITS> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                Float((self.0).$method(rhs.0))
            }
        }

        impl<'a, const BITS: usize> $tr<&'a Float<BITS>> for Float<BITS> {
            type Output = Self;
            fn $method(self, rhs: &'a Self) -> Self {
                Float((self.0).$method(&rhs.0))
            }
        }

        impl<'a, 'b, const BITS: usize> $tr<&'b Float<BITS>> for &'a Float<BITS> {
            type Output = Float<BITS>;
            fn $method(self, rhs: &'b Float<BITS>) -> Float<BITS> {
                Float((&self.0).$method(&rhs.0))
            }
        }

        impl<const BITS: usize> $atr for Float<BITS> {
            fn $amethod(&mut self, rhs: Self) {
                let lhs = std::mem::replace(&mut self.0, Big::ZERO);
                self.0 = lhs.$method(rhs.0);
            }
        }

        impl<'a, const BITS: usize> $atr<&'a Float<BITS>> for Float<BITS> {
            fn $amethod(&mut self, rhs: &'a Self) {
                let lhs = std::mem::replace(&mut self.0, Big::ZERO);
                self.0 = lhs.$method(&rhs.0);
            }
        }
    };
}

float_binop!(Add, add, AddAssign, add_assign);
float_binop!(Sub, sub, SubAssign, sub_assign);
float_binop!(Mul, mul, MulAssign, mul_assign);
float_binop!(Div, div, DivAssign, div_assign);

impl<const BITS: usize> Neg for Float<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Float(-self.0)
    }
}

impl<const BITS: usize> Zero for Float<BITS> {
    fn zero() -> Self {
        Self::wrap(Big::ZERO)
    }

    fn is_zero(&self) -> bool {
        self.0 == Big::ZERO
    }
}

impl<const BITS: usize> One for Float<BITS> {
    fn one() -> Self {
        Self::wrap(Big::ONE)
    }
}

impl<const BITS: usize> Scalar for Float<BITS> {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        Self::wrap(FBig::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn abs(&self) -> Self {
        if self.0 < Big::ZERO {
            Float(-self.0.clone())
        } else {
            self.clone()
        }
    }

    fn noise_floor() -> f64 {
        (2.0f64).powi(-(BITS as i32) + 1)
    }

    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<const BITS: usize> Real for Float<BITS> {
    fn sqrt(&self) -> Self {
        assert!(self.0 >= Big::ZERO, "square root of a negative number");
        if self.is_zero() {
            return Self::zero();
        }
        Float(self.0.sqrt())
    }

    fn from_f64(x: f64) -> Self {
        Self::wrap(FBig::try_from(x).expect("finite f64"))
    }

    fn precision_bits() -> u32 {
        BITS as u32
    }
}

/// Parse `p/q`, an integer, or a decimal literal (optionally with exponent)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational or decimal number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = match scale.cmp(&0) {
        Ordering::Less => BigRational::new(numer, num_traits::pow(ten, scale.unsigned_abs() as usize)),
        _ => BigRational::from_integer(numer * num_traits::pow(ten, scale as usize)),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    type F100 = Float<100>;

    #[test]
    fn constants_carry_working_precision() {
        let third = F100::one() / F100::from_i64(3);
        let back = third * F100::from_i64(3);
        assert!((back - F100::one()).abs().to_f64() < 1e-29);
    }

    #[test]
    fn sqrt_two_squared() {
        let two = F100::from_i64(2);
        let s = two.sqrt();
        let err = (s.clone() * &s - F100::from_i64(2)).abs().to_f64();
        assert!(err < 1e-29, "{err}");
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rational_import_matches_division() {
        let q = parse_rational("-22/7").unwrap();
        let f = F100::from_rational(&q);
        assert!((f.to_f64() + 22.0 / 7.0).abs() < 1e-15);
        let big = parse_rational("123456789012345678901234567890").unwrap();
        let fb = F100::from_rational(&big);
        assert!((fb.to_f64() / 1.2345678901234568e29 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(parse_rational("3.62398").unwrap(), BigRational::from_ratio(362398, 100000));
        assert_eq!(parse_rational("1.5e-3").unwrap(), BigRational::from_ratio(3, 2000));
        assert_eq!(parse_rational("-2").unwrap(), BigRational::from_i64(-2));
        assert_eq!(parse_rational(".5").unwrap(), BigRational::from_ratio(1, 2));
        assert_eq!(parse_rational("2E2").unwrap(), BigRational::from_i64(200));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn negligible_is_exact_for_rationals() {
        let tiny = BigRational::from_ratio(1, 1_000_000_000_000_000_000);
        assert!(!tiny.is_negligible(1.0));
        assert!(BigRational::zero().is_negligible(0.0));
        assert!(1e-30f64.is_negligible(1e-20));
    }

    #[test]
    fn text_formats() {
        assert_eq!(BigRational::from_ratio(-3, 4).to_text(), "-3/4");
        let t = F100::from_i64(-15120).to_text();
        assert!(t.starts_with("-1.512") && t.contains('e'), "{t}");
    }
}
