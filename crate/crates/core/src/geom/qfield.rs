use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::scalar::{rational_to_f64, ArithMode, Rational, Scalar, Sqrt23};

/// An element `a + b√2 + c√3 + d√6` of the field `ℚ(√2, √3)`.
///
/// The basis `{1, √2, √3, √6}` is linearly independent over `ℚ`, so the
/// coefficient representation is canonical and equality, hashing and
/// ordering are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Q23 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Sign of `p + q√2`.
fn sign_sqrt2(p: &Rational, r: &Rational) -> Ordering {
    let sp = Scalar::sign(p, 0.0);
    let sr = Scalar::sign(r, 0.0);
    if sr == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sr {
        return sr;
    }
    // Opposite signs: whichever term has the larger square wins.
    let lhs = p * p;
    let rhs = r * r * q(2);
    if lhs > rhs {
        sp
    } else {
        sr
    }
}

impl Q23 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Q23 { a, b, c, d }
    }

    pub fn rational(a: Rational) -> Self {
        Q23 { a, b: q(0), c: q(0), d: q(0) }
    }

    pub fn sqrt6() -> Self {
        Q23 { a: q(0), b: q(0), c: q(0), d: q(1) }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Sign, decided exactly.
    pub fn signum_exact(&self) -> Ordering {
        // Write x = α + β√3 with α = a + b√2, β = c + d√2.
        let sa = sign_sqrt2(&self.a, &self.b);
        let sb = sign_sqrt2(&self.c, &self.d);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // α² − 3β² in ℚ(√2).
        let p = &self.a * &self.a + q(2) * &self.b * &self.b
            - q(3) * (&self.c * &self.c + q(2) * &self.d * &self.d);
        let r = q(2) * &self.a * &self.b - q(6) * &self.c * &self.d;
        match sign_sqrt2(&p, &r) {
            Ordering::Greater => sa,
            _ => sb,
        }
    }

    pub fn inverse(&self) -> Option<Q23> {
        if self.is_zero() {
            return None;
        }
        // conj3 = α − β√3, then (α + β√3)(α − β√3) = γ + δ√2.
        let conj3 = Q23::new(self.a.clone(), self.b.clone(), -self.c.clone(), -self.d.clone());
        let norm3 = self.clone() * conj3.clone();
        debug_assert!(norm3.c.is_zero() && norm3.d.is_zero());
        let conj2 = Q23::new(norm3.a.clone(), -norm3.b.clone(), q(0), q(0));
        let norm = &norm3.a * &norm3.a - q(2) * &norm3.b * &norm3.b;
        let num = conj3 * conj2;
        Some(Q23::new(&num.a / &norm, &num.b / &norm, &num.c / &norm, &num.d / &norm))
    }
}

impl Zero for Q23 {
    fn zero() -> Self {
        Q23::rational(q(0))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.is_rational()
    }
}

impl Add for Q23 {
    type Output = Q23;
    fn add(self, o: Q23) -> Q23 {
        Q23::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Q23 {
    type Output = Q23;
    fn sub(self, o: Q23) -> Q23 {
        Q23::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Q23 {
    type Output = Q23;
    fn neg(self) -> Q23 {
        Q23::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Q23 {
    type Output = Q23;
    fn mul(self, o: Q23) -> Q23 {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&o.a, &o.b, &o.c, &o.d);
        Q23::new(
            a * e + q(2) * b * f + q(3) * c * g + q(6) * d * h,
            a * f + b * e + q(3) * (c * h + d * g),
            a * g + c * e + q(2) * (b * h + d * f),
            a * h + d * e + b * g + c * f,
        )
    }
}

impl Div for Q23 {
    type Output = Q23;
    fn div(self, o: Q23) -> Q23 {
        self * o.inverse().expect("division by zero in Q(√2,√3)")
    }
}

impl PartialOrd for Q23 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q23 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum_exact()
    }
}

impl Scalar for Q23 {
    type Key = Q23;
    const EXACT: bool = true;
    const MODE: ArithMode = ArithMode::QuadraticField;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        Q23::rational(q(1))
    }
    fn from_int(n: i64) -> Self {
        Q23::rational(q(n))
    }
    fn from_rational(r: &Rational) -> Self {
        Q23::rational(r.clone())
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a)
            + rational_to_f64(&self.b) * std::f64::consts::SQRT_2
            + rational_to_f64(&self.c) * 3f64.sqrt()
            + rational_to_f64(&self.d) * 6f64.sqrt()
    }
    fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }
    fn sign(&self, _tol: f64) -> Ordering {
        self.signum_exact()
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn key(&self) -> Self::Key {
        self.clone()
    }
    fn to_q23(&self) -> Option<Q23> {
        Some(self.clone())
    }
}

impl Sqrt23 for Q23 {
    fn sqrt2() -> Self {
        Q23::new(q(0), q(1), q(0), q(0))
    }
    fn sqrt3() -> Self {
        Q23::new(q(0), q(0), q(1), q(0))
    }
}

impl fmt::Debug for Q23 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Q23 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = [(&self.a, ""), (&self.b, "√2"), (&self.c, "√3"), (&self.d, "√6")];
        let mut wrote = false;
        for (coef, unit) in terms {
            if coef.is_zero() {
                continue;
            }
            let sep = if !wrote {
                if coef.is_negative() { "-" } else { "" }
            } else if coef.is_negative() {
                " - "
            } else {
                " + "
            };
            let mag = Signed::abs(coef);
            if unit.is_empty() {
                write!(f, "{sep}{mag}")?;
            } else if mag == q(1) {
                write!(f, "{sep}{unit}")?;
            } else {
                write!(f, "{sep}{mag}{unit}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elem(v: [i64; 4]) -> Q23 {
        Q23::new(q(v[0]), q(v[1]), q(v[2]), q(v[3]))
    }

    #[test]
    fn radicals_square_to_integers() {
        assert_eq!(Q23::sqrt2() * Q23::sqrt2(), Q23::from_int(2));
        assert_eq!(Q23::sqrt3() * Q23::sqrt3(), Q23::from_int(3));
        assert_eq!(Q23::sqrt6() * Q23::sqrt6(), Q23::from_int(6));
        assert_eq!(Q23::sqrt2() * Q23::sqrt3(), Q23::sqrt6());
    }

    #[test]
    fn sign_of_near_cancellations() {
        // √6 − 2 ≈ 0.449 > 0, 5 − 2√6 ≈ 0.101 > 0, 7 − 4√3 ≈ 0.0718 > 0
        assert_eq!(elem([-2, 0, 0, 1]).signum_exact(), Ordering::Greater);
        assert_eq!(elem([5, 0, 0, -2]).signum_exact(), Ordering::Greater);
        assert_eq!(elem([7, 0, -4, 0]).signum_exact(), Ordering::Greater);
        // √2 + √3 − √6 ≈ 0.697
        assert_eq!(elem([0, 1, 1, -1]).signum_exact(), Ordering::Greater);
        // 3 − √2 − √3 ≈ −0.146
        assert_eq!(elem([3, -1, -1, 0]).signum_exact(), Ordering::Less);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(elem([1, 0, -2, 0]).to_string(), "1 - 2√3");
        assert_eq!(<Q23 as Scalar>::zero().to_string(), "0");
        assert_eq!(Q23::sqrt6().to_string(), "√6");
    }

    proptest! {
        #[test]
        fn inverse_is_multiplicative_inverse(v in proptest::array::uniform4(-20i64..20)) {
            let x = elem(v);
            prop_assume!(!x.is_zero());
            prop_assert_eq!(x.clone() * x.inverse().unwrap(), Q23::one());
        }

        #[test]
        fn sign_matches_float(v in proptest::array::uniform4(-50i64..50)) {
            let x = elem(v);
            let f = x.to_f64();
            prop_assume!(f.abs() > 1e-9);
            let expected = if f > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(x.signum_exact(), expected);
        }
    }
}
