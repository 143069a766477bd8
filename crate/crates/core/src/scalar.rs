//! Scalar types the geometry kernel is generic over.
//!
//! Every geometric routine in [`crate::geom`] is written once against [`Scalar`]
//! and instantiated with one of:
//!
//! * [`Rational`] (arbitrary precision, exact) for every decision that shapes
//!   the tiling,
//! * [`Filtered`], an `f64` carrying a rigorous running error bound, used as a
//!   fast first pass whose sign is trusted only when it is certified,
//! * plain `f64` / `f32` for visualization and quick estimates.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact rational numbers.
pub type Rational = BigRational;

/// The ring operations used by division-free predicates.
pub trait Ring:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Field operations plus a (possibly uncertified) sign.
pub trait Scalar: Num + Clone + Debug + Neg<Output = Self> + Send + Sync {
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn to_f64(&self) -> f64;

    /// Sign of the value; `None` when it cannot be decided with certainty.
    fn sign(&self) -> Option<Ordering>;

    /// Whether `sign` is always exact for this type.
    fn is_exact() -> bool;
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign(&self) -> Option<Ordering> {
        Some(if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    fn is_exact() -> bool {
        true
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_rational(q: &Rational) -> Self {
                ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn sign(&self) -> Option<Ordering> {
                self.partial_cmp(&0.0)
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

// 2^-52: twice the unit roundoff, so every bound below absorbs the rounding
// of its own evaluation.
const ROUNDING: f64 = f64::EPSILON;

/// An `f64` approximation `v` with `|v - exact| <= e`.
///
/// Arithmetic propagates a first-order running error bound with one rounding
/// term per operation. The sign is certified only when `|v| > e`.
#[derive(Clone, Copy, Debug)]
pub struct Filtered {
    pub v: f64,
    pub e: f64,
}

impl Filtered {
    pub fn exact(v: f64) -> Self {
        Filtered { v, e: 0.0 }
    }

    fn rounded(v: f64, e: f64) -> Self {
        if !v.is_finite() || !e.is_finite() {
            return Filtered {
                v: f64::NAN,
                e: f64::INFINITY,
            };
        }
        Filtered {
            v,
            e: (e + v.abs() * ROUNDING) * (1.0 + 4.0 * ROUNDING),
        }
    }

    /// Whether the value is certainly nonzero and finite.
    pub fn is_certain(&self) -> bool {
        self.v.is_finite() && self.v.abs() > self.e
    }
}

impl PartialEq for Filtered {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.e == other.e
    }
}

impl Add for Filtered {
    type Output = Filtered;
    fn add(self, rhs: Filtered) -> Filtered {
        Filtered::rounded(self.v + rhs.v, self.e + rhs.e)
    }
}

impl Sub for Filtered {
    type Output = Filtered;
    fn sub(self, rhs: Filtered) -> Filtered {
        Filtered::rounded(self.v - rhs.v, self.e + rhs.e)
    }
}

impl Mul for Filtered {
    type Output = Filtered;
    fn mul(self, rhs: Filtered) -> Filtered {
        let e = self.v.abs() * rhs.e + rhs.v.abs() * self.e + self.e * rhs.e;
        Filtered::rounded(self.v * rhs.v, e)
    }
}

impl Div for Filtered {
    type Output = Filtered;
    fn div(self, rhs: Filtered) -> Filtered {
        let den = rhs.v.abs() - rhs.e;
        if den <= 0.0 {
            return Filtered {
                v: f64::NAN,
                e: f64::INFINITY,
            };
        }
        let v = self.v / rhs.v;
        let e = (self.e + v.abs() * (1.0 + 4.0 * ROUNDING) * rhs.e) / den;
        Filtered::rounded(v, e)
    }
}

impl Rem for Filtered {
    type Output = Filtered;
    fn rem(self, rhs: Filtered) -> Filtered {
        Filtered {
            v: self.v % rhs.v,
            e: f64::INFINITY,
        }
    }
}

impl Neg for Filtered {
    type Output = Filtered;
    fn neg(self) -> Filtered {
        Filtered {
            v: -self.v,
            e: self.e,
        }
    }
}

impl Zero for Filtered {
    fn zero() -> Self {
        Filtered::exact(0.0)
    }
    fn is_zero(&self) -> bool {
        self.v == 0.0 && self.e == 0.0
    }
}

impl One for Filtered {
    fn one() -> Self {
        Filtered::exact(1.0)
    }
}

impl Num for Filtered {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            // Only decimal text is meaningful for an f64 approximation.
            return "invalid radix".parse::<f64>().map(Filtered::exact);
        }
        let v: f64 = s.parse()?;
        Ok(Filtered {
            v,
            e: v.abs() * ROUNDING,
        })
    }
}

impl Scalar for Filtered {
    fn from_rational(q: &Rational) -> Self {
        let v = ToPrimitive::to_f64(q).unwrap_or(f64::NAN);
        if !v.is_finite() {
            return Filtered {
                v: f64::NAN,
                e: f64::INFINITY,
            };
        }
        // Integers representable in 53 bits convert exactly.
        let exact = q.is_integer() && v.abs() < 9.0e15;
        Filtered {
            v,
            e: if exact { 0.0 } else { v.abs() * ROUNDING },
        }
    }

    fn to_f64(&self) -> f64 {
        self.v
    }

    fn sign(&self) -> Option<Ordering> {
        if !self.v.is_finite() || !self.e.is_finite() {
            None
        } else if self.v > self.e {
            Some(Ordering::Greater)
        } else if self.v < -self.e {
            Some(Ordering::Less)
        } else if self.v == 0.0 && self.e == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn is_exact() -> bool {
        false
    }
}

/// Sign of a quantity computed twice: first with [`Filtered`] arithmetic and,
/// only if that sign is not certified, again with exact rationals.
pub fn certified_sign<F, E>(filtered: F, exact: E) -> Ordering
where
    F: FnOnce() -> Filtered,
    E: FnOnce() -> Rational,
{
    match filtered().sign() {
        Some(s) => s,
        None => exact().sign().expect("rational sign is always defined"),
    }
}

/// Parse a decimal literal (`-12.5`, `3e-4`, `7`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = all_digits.parse().ok()?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(q)
}

/// Exact decimal expansion of `q` when its denominator has only factors 2 and
/// 5; otherwise `p/q`.
pub fn format_rational(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return q.numer().to_string();
    }
    let scaled = q * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let negative = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Parse either form produced by [`format_rational`].
pub fn parse_rational(text: &str) -> Option<Rational> {
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => parse_decimal(text),
    }
}

/// `sqrt` of a squared radius, rounded through `f64`; used for output only.
pub fn radius_f64(r2: &Rational) -> f64 {
    Scalar::to_f64(r2).max(0.0).sqrt()
}
