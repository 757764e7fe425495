//! The order-`i` F-, G- and E-sequences and their identities.
//!
//! * `F(0) = F(1) = 1`, `F(n) = i(F(n-1) + F(n-2))`
//! * `G(-1) = 0`, `G(0) = 1`, `G(n) = i(G(n-1) + G(n-2))`
//! * `E(n) = 2(i+1)^n - 1`
//!
//! Identity checks are exhaustive over index ranges and exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{omega, QuadNum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqKind {
    F,
    G,
    E,
}

impl SeqKind {
    pub fn first_index(self) -> i64 {
        match self {
            SeqKind::G => -1,
            SeqKind::F | SeqKind::E => 0,
        }
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeqKind::F => "F",
            SeqKind::G => "G",
            SeqKind::E => "E",
        };
        f.write_str(s)
    }
}

/// Table of one sequence from its first index up to `n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqTable {
    pub i: u64,
    pub kind: SeqKind,
    values: Vec<BigInt>,
}

impl SeqTable {
    pub fn first_index(&self) -> i64 {
        self.kind.first_index()
    }

    pub fn last_index(&self) -> i64 {
        self.first_index() + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<&BigInt> {
        let k = n - self.first_index();
        if k < 0 {
            return None;
        }
        self.values.get(k as usize)
    }

    /// Value at `n`; panics outside the table.
    pub fn at(&self, n: i64) -> &BigInt {
        self.get(n).unwrap_or_else(|| {
            panic!(
                "{}({n}) is outside the table {}..={}",
                self.kind,
                self.first_index(),
                self.last_index()
            )
        })
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `(index, value)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        let first = self.first_index();
        self.values.iter().enumerate().map(move |(k, v)| (first + k as i64, v))
    }
}

fn check_order(i: u64) -> Result<()> {
    if i < 1 {
        return Err(Error::domain("block order i must be at least 1"));
    }
    Ok(())
}

fn linear_table(i: u64, kind: SeqKind, seeds: [i64; 2], n_max: i64) -> SeqTable {
    let bi = BigInt::from(i);
    let len = (n_max - kind.first_index() + 1).max(2) as usize;
    let mut values: Vec<BigInt> = vec![seeds[0].into(), seeds[1].into()];
    while values.len() < len {
        let k = values.len();
        let next = &bi * (&values[k - 1] + &values[k - 2]);
        values.push(next);
    }
    values.truncate((n_max - kind.first_index() + 1) as usize);
    SeqTable { i, kind, values }
}

/// `F(0..=n_max)`.
pub fn f_seq(i: u64, n_max: usize) -> Result<SeqTable> {
    check_order(i)?;
    Ok(linear_table(i, SeqKind::F, [1, 1], n_max.max(1) as i64))
}

/// `G(-1..=n_max)`.
pub fn g_seq(i: u64, n_max: usize) -> Result<SeqTable> {
    check_order(i)?;
    Ok(linear_table(i, SeqKind::G, [0, 1], n_max as i64))
}

/// `E(0..=n_max)`.
pub fn e_seq(i: u64, n_max: usize) -> Result<SeqTable> {
    check_order(i)?;
    let base = BigInt::from(i + 1);
    let mut values = Vec::with_capacity(n_max + 1);
    let mut p = BigInt::one();
    for _ in 0..=n_max {
        values.push(BigInt::from(2) * &p - 1);
        p *= &base;
    }
    Ok(SeqTable {
        i,
        kind: SeqKind::E,
        values,
    })
}

/// F and G tables for one block order, with the extended value `G(-2) = 1/i`
/// available to accuracy formulas.
#[derive(Clone, Debug)]
pub struct Seqs {
    pub i: u64,
    pub f: SeqTable,
    pub g: SeqTable,
}

impl Seqs {
    pub fn new(i: u64, n_max: usize) -> Result<Self> {
        Ok(Seqs {
            i,
            f: f_seq(i, n_max)?,
            g: g_seq(i, n_max)?,
        })
    }

    pub fn f(&self, n: i64) -> BigRational {
        BigRational::from_integer(self.f.at(n).clone())
    }

    /// `G(n)` for `n >= -2`, where `G(-2) = 1/i` continues the recurrence backwards.
    pub fn g(&self, n: i64) -> BigRational {
        if n == -2 {
            return BigRational::new(BigInt::one(), BigInt::from(self.i));
        }
        BigRational::from_integer(self.g.at(n).clone())
    }

    pub fn fq(&self, n: i64) -> QuadNum {
        QuadNum::rational(self.f(n))
    }

    pub fn gq(&self, n: i64) -> QuadNum {
        QuadNum::rational(self.g(n))
    }

    pub fn f_ratio(&self, n: i64, m: i64) -> BigRational {
        self.f(n) / self.f(m)
    }

    pub fn g_ratio(&self, n: i64, m: i64) -> BigRational {
        self.g(n) / self.g(m)
    }
}

fn neg_i_pow(i: u64, e: i64) -> BigInt {
    let base = -BigInt::from(i);
    num_traits::pow(base, e as usize)
}

/// `F(n+1)` from the closed form in `Q(sqrt(i(i+4)))`, for `n >= -1`.
pub fn f_closed_form(i: u64, n: i64) -> Result<QuadNum> {
    let w = omega(i)?;
    let d = w.radicand();
    // sqrt(i/(i+4)) = sqrt(d)/(i+4)
    let s = QuadNum::sqrt_of(d)? / QuadNum::from_integer((i + 4) as i64);
    let three_s = QuadNum::from_integer(3) * &s;
    let one = QuadNum::one();
    let iw = QuadNum::from_integer(-(i as i64)) * &w;
    let plus = (&one + &three_s) * w.pow(-(n as i32))?;
    let minus = (&one - &three_s) * iw.pow(n as i32)?;
    Ok((plus + minus) / QuadNum::from_integer(2))
}

/// `G(n)` from the closed form in `Q(sqrt(i(i+4)))`, for `n >= -1`.
pub fn g_closed_form(i: u64, n: i64) -> Result<QuadNum> {
    let w = omega(i)?;
    let d = w.radicand();
    let inv_root = QuadNum::sqrt_of(d)? / QuadNum::from_integer(d as i64);
    let iw = QuadNum::from_integer(-(i as i64)) * &w;
    Ok(inv_root * (w.pow(-((n + 1) as i32))? - iw.pow((n + 1) as i32)?))
}

/// Sequence identities that [`check_identity`] can verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `F(n+1)F(n-1) - F(n)^2 = (2i-1)(-i)^(n-1)`, `n >= 1`.
    FCassini,
    /// `F(n)F(n-1) - F(n+1)F(n-2) = (2i-1)(-i)^(n-1)`, `n >= 2`.
    FAdjacentProducts,
    /// `G(n)G(m) - G(n+1)G(m-1) = (-i)^m G(n-m)`, `n+1 >= m >= 0`.
    GProducts,
    /// `G(n)G(m) - G(n+2)G(m-2) = -(-i)^m G(n-m+1)`, `n+1 >= m >= 1`.
    GSkipProducts,
    /// `F(n) = G(n-1) + i G(n-2)`, `n >= 1`.
    FFromG,
    /// `F(n)G(m) - F(n+2)G(m-2) = -(-i)^m F(n-m+1)`, `n+1 >= m >= 1`.
    FGSkipProducts,
    /// For positive `a, b, c, d` and `n >= m >= 0`, the sign of
    /// `(aG(m)+bG(m-1))/(aG(n+1)+bG(n)) - (cG(m)+dG(m-1))/(cG(n+1)+dG(n))`
    /// is the sign of `(-1)^m (ad - bc)`.
    GRatioOrder,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::FCassini,
        Identity::FAdjacentProducts,
        Identity::GProducts,
        Identity::GSkipProducts,
        Identity::FFromG,
        Identity::FGSkipProducts,
        Identity::GRatioOrder,
    ];

    pub fn uses_m(self) -> bool {
        matches!(
            self,
            Identity::GProducts | Identity::GSkipProducts | Identity::FGSkipProducts | Identity::GRatioOrder
        )
    }

    fn validity(self) -> &'static str {
        match self {
            Identity::FCassini | Identity::FFromG => "n >= 1",
            Identity::FAdjacentProducts => "n >= 2",
            Identity::GProducts => "n + 1 >= m >= 0",
            Identity::GSkipProducts | Identity::FGSkipProducts => "n + 1 >= m >= 1",
            Identity::GRatioOrder => "n >= m >= 0",
        }
    }

    fn valid_at(self, n: i64, m: i64) -> bool {
        match self {
            Identity::FCassini | Identity::FFromG => n >= 1,
            Identity::FAdjacentProducts => n >= 2,
            Identity::GProducts => n >= 0 && m >= 0 && n + 1 >= m,
            Identity::GSkipProducts | Identity::FGSkipProducts => m >= 1 && n + 1 >= m,
            Identity::GRatioOrder => m >= 0 && n >= m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub n: i64,
    pub m: Option<i64>,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub i: u64,
    pub cases: Vec<IdentityCase>,
    pub all_hold: bool,
}

fn sign_of(x: &BigRational) -> Ordering {
    x.numer().cmp(&BigInt::zero())
}

fn sign_str(o: Ordering) -> String {
    match o {
        Ordering::Less => "negative",
        Ordering::Equal => "zero",
        Ordering::Greater => "positive",
    }
    .to_string()
}

/// Verifies `id` at every `(n, m)` in the given ranges (the `m` range is
/// ignored by single-index identities). Every point must lie inside the
/// identity's validity range.
pub fn check_identity(
    id: Identity,
    i: u64,
    n_range: RangeInclusive<i64>,
    m_range: RangeInclusive<i64>,
) -> Result<IdentityReport> {
    check_order(i)?;
    let ms: Vec<Option<i64>> = if id.uses_m() {
        m_range.clone().map(Some).collect()
    } else {
        vec![None]
    };
    for n in n_range.clone() {
        for m in &ms {
            if !id.valid_at(n, m.unwrap_or(0)) {
                return Err(Error::InvalidRange(match m {
                    Some(m) => format!("{id:?} needs {} but got n = {n}, m = {m}", id.validity()),
                    None => format!("{id:?} needs {} but got n = {n}", id.validity()),
                }));
            }
        }
    }
    let top = (*n_range.end()).max(0) as usize + 3;
    let s = Seqs::new(i, top)?;
    let f = |k: i64| s.f.at(k).clone();
    let g = |k: i64| s.g.at(k).clone();
    let two_i_minus_1 = BigInt::from(2 * i - 1);

    let mut cases = Vec::new();
    for n in n_range {
        for &m in &ms {
            let (lhs, rhs) = match id {
                Identity::FCassini => (f(n + 1) * f(n - 1) - f(n) * f(n), &two_i_minus_1 * neg_i_pow(i, n - 1)),
                Identity::FAdjacentProducts => (
                    f(n) * f(n - 1) - f(n + 1) * f(n - 2),
                    &two_i_minus_1 * neg_i_pow(i, n - 1),
                ),
                Identity::GProducts => {
                    let m = m.unwrap_or_default();
                    (g(n) * g(m) - g(n + 1) * g(m - 1), neg_i_pow(i, m) * g(n - m))
                }
                Identity::GSkipProducts => {
                    let m = m.unwrap_or_default();
                    (g(n) * g(m) - g(n + 2) * g(m - 2), -neg_i_pow(i, m) * g(n - m + 1))
                }
                Identity::FFromG => (f(n), g(n - 1) + BigInt::from(i) * g(n - 2)),
                Identity::FGSkipProducts => {
                    let m = m.unwrap_or_default();
                    (f(n) * g(m) - f(n + 2) * g(m - 2), -neg_i_pow(i, m) * f(n - m + 1))
                }
                Identity::GRatioOrder => {
                    let m = m.unwrap_or_default();
                    let (lhs, rhs) = ratio_order_signs(&s, n, m);
                    cases.push(IdentityCase {
                        n,
                        m: Some(m),
                        holds: lhs == rhs,
                        lhs,
                        rhs,
                    });
                    continue;
                }
            };
            cases.push(IdentityCase {
                n,
                m,
                holds: lhs == rhs,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }
    let all_hold = cases.iter().all(|c| c.holds);
    Ok(IdentityReport {
        identity: id,
        i,
        cases,
        all_hold,
    })
}

/// Checks the ratio-order predicate for all `a, b, c, d` in `1..=3`; reports
/// the first disagreeing pair of signs, or `"agree"` twice.
fn ratio_order_signs(s: &Seqs, n: i64, m: i64) -> (String, String) {
    let (gm, gm1, gn1, gn) = (s.g.at(m), s.g.at(m - 1), s.g.at(n + 1), s.g.at(n));
    for a in 1..=3i64 {
        for b in 1..=3i64 {
            for c in 1..=3i64 {
                for d in 1..=3i64 {
                    let [a, b, c, d] = [a, b, c, d].map(BigInt::from);
                    // both denominators are positive, so compare cross products
                    let left = (&a * gm + &b * gm1) * (&c * gn1 + &d * gn);
                    let right = (&c * gm + &d * gm1) * (&a * gn1 + &b * gn);
                    let mut pred = &a * &d - &b * &c;
                    if m % 2 != 0 {
                        pred = -pred;
                    }
                    let (lhs, rhs) = (left.cmp(&right), pred.cmp(&BigInt::zero()));
                    if lhs != rhs {
                        return (sign_str(lhs), sign_str(rhs));
                    }
                }
            }
        }
    }
    ("agree".into(), "agree".into())
}

/// Sign of the ratio difference and sign of `(-1)^m (ad - bc)`.
pub fn ratio_order_case(s: &Seqs, n: i64, m: i64, [a, b, c, d]: [BigRational; 4]) -> (Ordering, Ordering) {
    let gm = s.g(m);
    let gm1 = s.g(m - 1);
    let gn1 = s.g(n + 1);
    let gn = s.g(n);
    // both denominators are positive, so compare cross products
    let left = (&a * &gm + &b * &gm1) * (&c * &gn1 + &d * &gn);
    let right = (&c * &gm + &d * &gm1) * (&a * &gn1 + &b * &gn);
    let mut pred = &a * &d - &b * &c;
    if m % 2 != 0 {
        pred = -pred;
    }
    (left.cmp(&right), sign_of(&pred))
}

/// One monotonicity or sandwich claim evaluated at one index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub claim: String,
    pub n: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub i: u64,
    pub n_max: usize,
    pub checks: Vec<RatioCheck>,
    pub all_hold: bool,
}

/// Verifies, for `n = 1..=n_max`, that the odd/even subsequences of
/// `F(n)/F(n+1)`, `F(n)/F(n+2)`, `G(n)/G(n+1)` and `G(n)/G(n+2)` approach
/// `omega` (resp. `omega^2`) strictly monotonically from the stated side, and
/// that the G ratios are sandwiched between neighbouring F ratios.
pub fn check_monotone_ratios(i: u64, n_max: usize) -> Result<RatioReport> {
    if i < 2 {
        // For i = 1 the G ratios coincide with the F ratios and the sandwich is not strict.
        return Err(Error::domain("ratio claims are stated for block order i >= 2"));
    }
    if n_max < 2 {
        return Err(Error::Precondition("n_max must be at least 2".into()));
    }
    let s = Seqs::new(i, 2 * n_max + 4)?;
    let w = omega(i)?;
    let w2 = &w * &w;
    let q = |x: BigRational| QuadNum::rational(x);
    let lt = |x: &QuadNum, y: &QuadNum| x.quad_cmp(y).map(|o| o == Ordering::Less).unwrap_or(false);

    let mut checks = Vec::new();
    let mut push = |claim: &str, n: i64, holds: bool| {
        checks.push(RatioCheck {
            claim: claim.to_string(),
            n,
            holds,
        })
    };
    for n in 1..=n_max as i64 {
        let (o, e) = (2 * n - 1, 2 * n);
        let fr = |a: i64, b: i64| q(s.f_ratio(a, b));
        let gr = |a: i64, b: i64| q(s.g_ratio(a, b));

        push(
            "F(2n-1)/F(2n) increases strictly towards omega",
            n,
            lt(&fr(o, o + 1), &fr(o + 2, o + 3)) && lt(&fr(o + 2, o + 3), &w),
        );
        push(
            "F(2n)/F(2n+1) decreases strictly towards omega",
            n,
            lt(&fr(e + 2, e + 3), &fr(e, e + 1)) && lt(&w, &fr(e + 2, e + 3)),
        );
        push(
            "F(2n-1)/F(2n+1) increases strictly towards omega^2",
            n,
            lt(&fr(o, o + 2), &fr(o + 2, o + 4)) && lt(&fr(o + 2, o + 4), &w2),
        );
        push(
            "F(2n)/F(2n+2) decreases strictly towards omega^2",
            n,
            lt(&fr(e + 2, e + 4), &fr(e, e + 2)) && lt(&w2, &fr(e + 2, e + 4)),
        );
        push(
            "G(2n-1)/G(2n) increases strictly towards omega",
            n,
            lt(&gr(o, o + 1), &gr(o + 2, o + 3)) && lt(&gr(o + 2, o + 3), &w),
        );
        push(
            "G(2n)/G(2n+1) decreases strictly towards omega",
            n,
            lt(&gr(e + 2, e + 3), &gr(e, e + 1)) && lt(&w, &gr(e + 2, e + 3)),
        );
        push(
            "G(2n-1)/G(2n+1) increases strictly towards omega^2",
            n,
            lt(&gr(o, o + 2), &gr(o + 2, o + 4)) && lt(&gr(o + 2, o + 4), &w2),
        );
        push(
            "G(2n)/G(2n+2) decreases strictly towards omega^2",
            n,
            lt(&gr(e + 2, e + 4), &gr(e, e + 2)) && lt(&w2, &gr(e + 2, e + 4)),
        );
        push(
            "F(2n-1)/F(2n+1) < G(2n-1)/G(2n+1) < F(2n+1)/F(2n+3)",
            n,
            lt(&fr(o, o + 2), &gr(o, o + 2)) && lt(&gr(o, o + 2), &fr(o + 2, o + 4)),
        );
        push(
            "F(2n)/F(2n+2) < G(2n-2)/G(2n) < F(2n-2)/F(2n)",
            n,
            lt(&fr(e, e + 2), &gr(e - 2, e)) && lt(&gr(e - 2, e), &fr(e - 2, e)),
        );
    }
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(RatioReport {
        i,
        n_max,
        checks,
        all_hold,
    })
}
