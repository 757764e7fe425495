//! Scalar types that search geometry can be carried out in.
//!
//! Exact types (`BigRational`, `QuadNum`) compare points with `==`; floating
//! types compare within a relative tolerance of the surrounding interval.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat_to_f64, QuadNum};

/// Relative tolerance used when floating geometry has to decide that two
/// computed points coincide.
pub const FLOAT_GEOMETRY_TOL: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn from_quad(q: &QuadNum) -> Result<Self>;

    fn from_f64(x: f64) -> Result<Self>;

    fn to_f64(&self) -> f64;

    fn from_int(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// Whether `self` and `other` denote the same point, judged relative to `scale`.
    fn same_point(&self, other: &Self, scale: &Self) -> bool;

    fn from_ratio(n: i64, m: i64) -> Self {
        Self::from_int(n) / Self::from_int(m)
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_quad(q: &QuadNum) -> Result<Self> {
                Ok(q.to_f64() as $t)
            }

            fn from_f64(x: f64) -> Result<Self> {
                if x.is_finite() {
                    Ok(x as $t)
                } else {
                    Err(Error::domain(format!("non-finite value {x}")))
                }
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn from_int(n: i64) -> Self {
                n as $t
            }

            fn from_bigint(n: &BigInt) -> Self {
                rat_to_f64(&BigRational::from_integer(n.clone())) as $t
            }

            fn same_point(&self, other: &Self, scale: &Self) -> bool {
                let tol = (FLOAT_GEOMETRY_TOL as $t) * scale.abs().max(<$t>::MIN_POSITIVE);
                (self - other).abs() <= tol
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_quad(q: &QuadNum) -> Result<Self> {
        q.as_rational()
            .cloned()
            .ok_or_else(|| Error::domain(format!("{q} is irrational")))
    }

    fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x).ok_or_else(|| Error::domain(format!("non-finite value {x}")))
    }

    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn same_point(&self, other: &Self, _scale: &Self) -> bool {
        self == other
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Scalar for QuadNum {
    const EXACT: bool = true;

    fn from_quad(q: &QuadNum) -> Result<Self> {
        Ok(q.clone())
    }

    fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(QuadNum::rational)
            .ok_or_else(|| Error::domain(format!("non-finite value {x}")))
    }

    fn to_f64(&self) -> f64 {
        QuadNum::to_f64(self)
    }

    fn from_int(n: i64) -> Self {
        QuadNum::from_integer(n)
    }

    fn from_bigint(n: &BigInt) -> Self {
        QuadNum::from_bigint(n.clone())
    }

    fn same_point(&self, other: &Self, _scale: &Self) -> bool {
        self == other
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}
