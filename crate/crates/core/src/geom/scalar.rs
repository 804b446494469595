use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::qfield::Q23;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Default comparison tolerance for floating-point predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Quantum used to bucket floating state vectors into hash keys.
const FLOAT_KEY_QUANTUM: f64 = 1e-9;

/// The field operations every coordinate type supports.
///
/// Exact types (`Rational`, [`Q23`](crate::Q23)) decide signs and equality
/// exactly and ignore the tolerance argument; `f64` treats anything within
/// `tol` of zero as zero.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Hashable identity used for visited-state tables.
    type Key: Clone + Eq + Hash + Send + Sync + Debug;

    const EXACT: bool;
    const MODE: ArithMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// The value as a rational, when it is one.
    fn to_rational(&self) -> Option<Rational>;
    /// Sign of the value; `tol` is only consulted in float mode.
    fn sign(&self, tol: f64) -> Ordering;
    /// A total order consistent with `sign(a - b)` in exact modes.
    fn total_cmp(&self, other: &Self) -> Ordering;
    fn key(&self) -> Self::Key;

    /// The value in `ℚ(√2, √3)`, when it lies there.
    fn to_q23(&self) -> Option<Q23> {
        self.to_rational().map(Q23::rational)
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.sign(tol) == Ordering::Equal
    }

    fn abs(&self) -> Self {
        if self.sign(0.0) == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Scalars that contain `√2` and `√3`.
pub trait Sqrt23: Scalar {
    fn sqrt2() -> Self;
    fn sqrt3() -> Self;
}

/// Arithmetic mode tag carried in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithMode {
    Rational,
    QuadraticField,
    Float,
}

impl std::fmt::Display for ArithMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ArithMode::Rational => "rational",
            ArithMode::QuadraticField => "quadratic-field",
            ArithMode::Float => "float",
        })
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // Huge numerators/denominators: shift both down before dividing.
        _ => {
            let bits = q.numer().bits().max(q.denom().bits()) as i64 - 900;
            let shift = bits.max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

impl Scalar for Rational {
    type Key = Rational;
    const EXACT: bool = true;
    const MODE: ArithMode = ArithMode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn sign(&self, _tol: f64) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn key(&self) -> Self::Key {
        self.clone()
    }
}

impl Scalar for f64 {
    type Key = i64;
    const EXACT: bool = false;
    const MODE: ArithMode = ArithMode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Option<Rational> {
        None
    }
    fn sign(&self, tol: f64) -> Ordering {
        if f64::abs(*self) <= tol {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn key(&self) -> Self::Key {
        (self / FLOAT_KEY_QUANTUM).round() as i64
    }
}

impl Sqrt23 for f64 {
    fn sqrt2() -> Self {
        std::f64::consts::SQRT_2
    }
    fn sqrt3() -> Self {
        3f64.sqrt()
    }
}

/// Parses `"p/q"`, an integer, or a terminating decimal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|ch| ch.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = Rational::new(numer, denom);
    Some(if negative { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(parse_rational("0.45"), Some(Rational::from_ratio(9, 20)));
        assert_eq!(parse_rational("-3"), Some(Rational::from_int(-3)));
        assert_eq!(parse_rational(".5"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn float_sign_respects_tolerance() {
        assert_eq!(1e-12f64.sign(1e-9), Ordering::Equal);
        assert_eq!((-1e-6f64).sign(1e-9), Ordering::Less);
        assert_eq!(Rational::from_ratio(-1, 1_000_000_000_000).sign(1.0), Ordering::Less);
    }

    #[test]
    fn huge_rationals_convert_to_finite_floats() {
        let big = num_traits::pow(BigInt::from(3), 1000);
        let q = Rational::new(big.clone() * BigInt::from(2), big);
        assert!((Scalar::to_f64(&q) - 2.0).abs() < 1e-12);
    }
}
