//! Exact arithmetic over the rationals and real quadratic fields `Q(sqrt(d))`.
//!
//! A [`QuadNum`] is `a + b*sqrt(d)` with rational `a`, `b`. The radicand is
//! carried per value. Radicand `0` marks a plain rational that embeds into
//! every field; any two values with distinct nonzero radicands refuse to mix.
//!
//! Ordering is decided with integer arithmetic only: the sign of `a + b*sqrt(d)`
//! follows from comparing `a^2` with `b^2 d` after clearing denominators.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact element `a + b*sqrt(d)`.
#[derive(Clone, Debug)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: u64,
}

/// Floating approximation of an exact value with a guaranteed enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatApprox {
    pub value: f64,
    /// Upper bound on `|value - exact|`.
    pub error_bound: f64,
    /// Rational enclosure `lower <= exact <= upper`.
    pub lower: BigRational,
    pub upper: BigRational,
}

/// Radicand of the field that houses the limit ratio of the order-`i` F-sequence.
pub fn field_radicand(i: u64) -> u64 {
    i * (i + 4)
}

/// Limit of `F(n)/F(n+1)` for the order-`i` F-sequence, `(sqrt(i(i+4)) - i)/(2i)`,
/// the positive root of `i(w + w^2) = 1`.
pub fn omega(i: u64) -> Result<QuadNum> {
    if i < 1 {
        return Err(Error::domain("block order i must be at least 1"));
    }
    let two_i = BigInt::from(2 * i);
    Ok(QuadNum {
        a: BigRational::new(BigInt::from(-1), BigInt::from(2)),
        b: BigRational::new(BigInt::one(), two_i),
        d: field_radicand(i),
    })
}

fn is_perfect_square(d: u64) -> bool {
    let r = d.sqrt();
    r * r == d
}

fn rat_sign(q: &BigRational) -> Ordering {
    q.numer().cmp(&BigInt::zero())
}

pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn rat_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Smallest `f64` that is `>= q`, for a nonnegative rational `q`.
fn round_up(q: &BigRational) -> f64 {
    let f = rat_to_f64(q);
    match rat_from_f64(f) {
        Some(back) if &back < q => f.next_up(),
        _ => f,
    }
}

/// Parses `p`, `p/q`, or a plain decimal such as `-0.125` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_digits = int.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl QuadNum {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self> {
        if d == 0 {
            if !b.is_zero() {
                return Err(Error::domain("radicand 0 with a nonzero surd coefficient"));
            }
        } else if is_perfect_square(d) {
            return Err(Error::domain(format!("radicand {d} is a perfect square")));
        }
        Ok(QuadNum { a, b, d })
    }

    /// Rational value not tied to any particular field.
    pub fn rational(q: BigRational) -> Self {
        QuadNum {
            a: q,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::rational(BigRational::from_integer(n))
    }

    /// `n/m`; panics when `m == 0`.
    pub fn from_ratio(n: i64, m: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(m)))
    }

    pub fn from_big_ratio(n: BigInt, m: BigInt) -> Self {
        Self::rational(BigRational::new(n, m))
    }

    /// `sqrt(d)` as an element of `Q(sqrt(d))`.
    pub fn sqrt_of(d: u64) -> Result<Self> {
        if d == 0 {
            return Ok(Self::zero());
        }
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Tags the value with radicand `d` (rationals only, or a value already in that field).
    pub fn in_field(mut self, d: u64) -> Result<Self> {
        if self.d == d {
            return Ok(self);
        }
        if !self.is_rational() && self.d != 0 {
            return Err(Error::FieldMismatch { left: self.d, right: d });
        }
        if d != 0 && is_perfect_square(d) {
            return Err(Error::domain(format!("radicand {d} is a perfect square")));
        }
        self.d = d;
        Ok(self)
    }

    fn unify(&self, other: &Self) -> Result<u64> {
        match (self.d, other.d) {
            (x, y) if x == y => Ok(x),
            (0, y) => Ok(y),
            (x, 0) => Ok(x),
            (x, y) => Err(Error::FieldMismatch { left: x, right: y }),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.unify(other)?;
        Ok(QuadNum {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let d = self.unify(other)?;
        Ok(QuadNum {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d,
        })
    }

    /// `(a + b r)(a' + b' r) = (a a' + b b' d) + (a b' + a' b) r` with `r = sqrt(d)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.unify(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        Ok(QuadNum {
            a: &self.a * &other.a + &self.b * &other.b * dd,
            b: &self.a * &other.b + &other.a * &self.b,
            d,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.unify(other)?;
        self.checked_mul(&other.recip()?)
    }

    /// Field norm `a^2 - b^2 d`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn conj(&self) -> Self {
        QuadNum {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Nonzero elements have nonzero norm because d is not a square.
        let n = self.norm();
        Ok(QuadNum {
            a: &self.a / &n,
            b: -(&self.b / &n),
            d: self.d,
        })
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i32) -> Result<Self> {
        let mut base = if e < 0 { self.recip()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = QuadNum {
            a: BigRational::one(),
            b: BigRational::zero(),
            d: self.d,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Sign of the real number `a + b*sqrt(d)`.
    pub fn sign(&self) -> Ordering {
        let sa = rat_sign(&self.a);
        let sb = if self.d == 0 {
            Ordering::Equal
        } else {
            rat_sign(&self.b)
        };
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // a = p/q, b = r/s: compare p^2 s^2 against r^2 q^2 d.
                let (p, q) = (self.a.numer(), self.a.denom());
                let (r, s) = (self.b.numer(), self.b.denom());
                let lhs = p * p * s * s;
                let rhs = r * r * q * q * BigInt::from(self.d);
                if lhs > rhs {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    /// Exact order of two elements of the same field.
    pub fn quad_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.sign())
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn max_of(x: &Self, y: &Self) -> Result<Self> {
        Ok(if x.quad_cmp(y)? == Ordering::Less {
            y.clone()
        } else {
            x.clone()
        })
    }

    /// Converts with a rational enclosure of `sqrt(d)` refined to `precision_bits`
    /// fractional bits beyond the size of the surd coefficient.
    pub fn to_float(&self, precision_bits: u32) -> Result<FloatApprox> {
        if precision_bits < 16 {
            return Err(Error::Precondition(format!(
                "precision of {precision_bits} bits is below the minimum of 16"
            )));
        }
        if self.is_rational() {
            let value = rat_to_f64(&self.a);
            let err = match rat_from_f64(value) {
                Some(v) => (v - &self.a).abs(),
                None => return Err(Error::domain("value outside the f64 range")),
            };
            return Ok(FloatApprox {
                value,
                error_bound: round_up(&err),
                lower: self.a.clone(),
                upper: self.a.clone(),
            });
        }
        let b_bits = self.b.abs().ceil().to_integer().bits() as u32;
        let p = precision_bits + 2 + b_bits;
        let scaled = BigUint::from(self.d) << (2 * p as usize);
        let root = scaled.sqrt();
        let denom = BigInt::one() << p as usize;
        let lo = BigRational::new(BigInt::from(root.clone()), denom.clone());
        let hi = BigRational::new(BigInt::from(root + 1u32), denom);
        let (lower, upper) = if self.b.is_positive() {
            (&self.a + &self.b * lo, &self.a + &self.b * hi)
        } else {
            (&self.a + &self.b * hi, &self.a + &self.b * lo)
        };
        let mid = (&lower + &upper) / BigRational::from_integer(BigInt::from(2));
        let value = rat_to_f64(&mid);
        let rounding = match rat_from_f64(value) {
            Some(v) => (v - &mid).abs(),
            None => return Err(Error::domain("value outside the f64 range")),
        };
        let half_width = (&upper - &lower) / BigRational::from_integer(BigInt::from(2));
        Ok(FloatApprox {
            value,
            error_bound: round_up(&(half_width + rounding)),
            lower,
            upper,
        })
    }

    /// Nearest-ish `f64` (53-bit enclosure, error well below one ulp for moderate values).
    pub fn to_f64(&self) -> f64 {
        self.to_float(53).map(|f| f.value).unwrap_or(f64::NAN)
    }
}

impl Zero for QuadNum {
    fn zero() -> Self {
        QuadNum::rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadNum {
    fn one() -> Self {
        QuadNum::rational(BigRational::one())
    }
}

impl PartialEq for QuadNum {
    /// Numeric equality; values tied to different nonzero radicands are never equal
    /// unless both are rational.
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.quad_cmp(other).ok()
    }
}

impl From<BigRational> for QuadNum {
    fn from(q: BigRational) -> Self {
        QuadNum::rational(q)
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        QuadNum::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> $Trait<&'b QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &'b QuadNum) -> QuadNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $Trait<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $Trait<&'b QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &'b QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
        impl<'a> $Trait<QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -(self.clone())
    }
}

fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl fmt::Display for QuadNum {
    /// `p/q` for field-free rationals, otherwise `p/q + r/s*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            write!(f, "{}", fmt_rational(&self.a))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                fmt_rational(&self.a),
                fmt_rational(&self.b),
                self.d
            )
        }
    }
}

impl FromStr for QuadNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(idx) = s.find("sqrt(") else {
            return Ok(QuadNum::rational(parse_rational(s)?));
        };
        let inner = s[idx + 5..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated sqrt in {s:?}")))?;
        let d: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
        let head = s[..idx].trim_end();
        let head = head.strip_suffix('*').unwrap_or(head).trim_end();
        let (a, b) = match head.rsplit_once(" + ") {
            Some((a, b)) => (parse_rational(a)?, parse_rational(b)?),
            None if head.is_empty() => (BigRational::zero(), BigRational::one()),
            None => (BigRational::zero(), parse_rational(head)?),
        };
        QuadNum::new(a, b, d)
    }
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, m: i64) -> QuadNum {
        QuadNum::from_ratio(n, m)
    }

    fn surd(a: (i64, i64), b: (i64, i64), d: u64) -> QuadNum {
        QuadNum::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
            d,
        )
        .unwrap()
    }

    #[test]
    fn omega_satisfies_its_quadratic() {
        for i in 1..=50u64 {
            let w = omega(i).unwrap();
            let lhs = QuadNum::from_integer(i as i64) * (&w + &w * &w);
            assert_eq!(lhs, QuadNum::one(), "i = {i}");
            assert_eq!(w.sign(), Ordering::Greater);
            assert_eq!(w.quad_cmp(&QuadNum::one()).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn omega_classical_and_order_two() {
        let w1 = omega(1).unwrap();
        assert_eq!(w1, surd((-1, 2), (1, 2), 5));
        // (sqrt(3) - 1)/2 written over sqrt(12) = 2 sqrt(3)
        let w2 = omega(2).unwrap();
        assert_eq!(w2, surd((-2, 4), (1, 4), 12));
        assert!(omega(0).is_err());
    }

    #[test]
    fn conjugate_product() {
        let x = surd((1, 1), (1, 1), 12);
        let y = surd((1, 1), (-1, 1), 12);
        assert_eq!(&x * &y, QuadNum::from_integer(-11));
    }

    #[test]
    fn identities_and_inverse() {
        let x = surd((3, 7), (-2, 5), 21);
        assert_eq!(&x + QuadNum::zero(), x);
        assert_eq!(&x * QuadNum::one(), x);
        assert_eq!(&x * x.recip().unwrap(), QuadNum::one());
        assert_eq!(x.pow(-3).unwrap() * x.pow(3).unwrap(), QuadNum::one());
        assert_eq!(x.pow(0).unwrap(), QuadNum::one());
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let x = QuadNum::sqrt_of(5).unwrap();
        let y = QuadNum::sqrt_of(12).unwrap();
        assert!(matches!(
            x.checked_add(&y),
            Err(Error::FieldMismatch { left: 5, right: 12 })
        ));
        assert!(x.quad_cmp(&y).is_err());
        assert_eq!(x.partial_cmp(&y), None);
        assert!(matches!(
            QuadNum::zero().in_field(5).unwrap().checked_mul(&y),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn division_by_zero() {
        let x = QuadNum::sqrt_of(5).unwrap();
        assert_eq!(x.checked_div(&QuadNum::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn perfect_square_radicand_rejected() {
        assert!(QuadNum::sqrt_of(16).is_err());
        assert!(QuadNum::sqrt_of(12).is_ok());
    }

    #[test]
    fn ordering_examples() {
        let w = omega(2).unwrap();
        assert_eq!(w.quad_cmp(&q(28, 76)).unwrap(), Ordering::Less);
        assert_eq!(w.quad_cmp(&w).unwrap(), Ordering::Equal);
        let delta = QuadNum::from_integer(28) * w.pow(3).unwrap();
        assert_eq!(delta.quad_cmp(&QuadNum::from_integer(2)).unwrap(), Ordering::Less);
    }

    #[test]
    fn float_conversion_examples() {
        let w = omega(2).unwrap().to_float(53).unwrap();
        assert!((w.value - 0.366_025_403_784_438_6).abs() < 1e-15);
        assert!(w.error_bound <= 2f64.powi(-50));
        let z = QuadNum::zero().to_float(20).unwrap();
        assert_eq!(z.value, 0.0);
        assert_eq!(z.error_bound, 0.0);
        let delta = QuadNum::from_integer(28) * omega(2).unwrap().pow(3).unwrap();
        assert!((delta.to_f64() - 1.373_066_958_946_424).abs() < 1e-12);
        assert!(omega(2).unwrap().to_float(8).is_err());
    }

    #[test]
    fn display_round_trip() {
        let w = omega(3).unwrap();
        assert_eq!(w.to_string(), "-1/2 + 1/6*sqrt(21)");
        assert_eq!(w.to_string().parse::<QuadNum>().unwrap(), w);
        assert_eq!(q(-3, 4).to_string(), "-3/4");
        assert_eq!("0.11".parse::<QuadNum>().unwrap(), q(11, 100));
        assert_eq!("-0.5".parse::<QuadNum>().unwrap(), q(-1, 2));
        assert_eq!("sqrt(5)".parse::<QuadNum>().unwrap(), QuadNum::sqrt_of(5).unwrap());
        assert!("1/2 + x*sqrt(5)".parse::<QuadNum>().is_err());
    }

    #[test]
    fn canonical_form() {
        let x = surd((6, 4), (-10, 20), 5);
        assert_eq!(x.rational_part().numer(), &BigInt::from(3));
        assert_eq!(x.rational_part().denom(), &BigInt::from(2));
        assert_eq!(x.surd_part().numer(), &BigInt::from(-1));
        assert_eq!(x.surd_part().denom(), &BigInt::from(2));
    }

    fn arb_quad(d: u64) -> impl Strategy<Value = QuadNum> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(move |(a, b, c, e)| surd((a, b), (c, e), d))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_quad(12), y in arb_quad(12), z in arb_quad(12)) {
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn ordering_is_total(x in arb_quad(21), y in arb_quad(21), z in arb_quad(21)) {
            let xy = x.quad_cmp(&y).unwrap();
            prop_assert_eq!(y.quad_cmp(&x).unwrap(), xy.reverse());
            if xy != Ordering::Greater && y.quad_cmp(&z).unwrap() != Ordering::Greater {
                prop_assert_ne!(x.quad_cmp(&z).unwrap(), Ordering::Greater);
            }
            if xy == Ordering::Equal {
                prop_assert_eq!(&x, &y);
            }
        }

        #[test]
        fn enclosure_contains_exact(x in arb_quad(12), bits in 16u32..80) {
            let approx = x.to_float(bits).unwrap();
            let lo = QuadNum::rational(approx.lower.clone());
            let hi = QuadNum::rational(approx.upper.clone());
            prop_assert!(lo <= x && x <= hi);
            // The sqrt bracket itself: (lo_root)^2 <= d <= (hi_root)^2.
            if !x.is_rational() {
                let b = x.surd_part().clone();
                let a = x.rational_part().clone();
                let mut r1 = (&approx.lower - &a) / &b;
                let mut r2 = (&approx.upper - &a) / &b;
                if r1 > r2 { std::mem::swap(&mut r1, &mut r2); }
                let d = BigRational::from_integer(BigInt::from(12));
                prop_assert!(&r1 * &r1 <= d && d <= &r2 * &r2);
            }
            let exact_err = (QuadNum::rational(BigRational::from_float(approx.value).unwrap()) - &x).abs();
            prop_assert!(exact_err <= QuadNum::rational(BigRational::from_float(approx.error_bound).unwrap()));
        }
    }
}
