//! Search policies as exact test-point generators.
//!
//! Every policy here is basic: at each step the tests, together with the point
//! retained from the previous step, sit at the dividing points of an
//! `[alpha, beta]`-partition of the current interval (gaps alternate
//! `alpha, beta, alpha, ...`). A step is therefore fully described by the
//! ratio `alpha : beta` and the number of gaps; lengths follow from the
//! current interval.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::accuracy::{locate_position, step_update};
use crate::error::{Error, Result};
use crate::exactnum::{field_radicand, omega, QuadNum};
use crate::scalar::Scalar;
use crate::sequences::f_seq;

/// `1` for even `k`, `0` for odd `k`.
pub fn chi(k: u64) -> u64 {
    u64::from(k.is_multiple_of(2))
}

/// The 2x2 matrix `c(k) = [[chi(k), (k+1)/2], [chi(k+1), (k+2)/2]]` (integer division).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMatrix {
    pub k: u64,
    pub entries: [[u64; 2]; 2],
}

impl CMatrix {
    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.entries;
        a as i64 * d as i64 - b as i64 * c as i64
    }

    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        let [[a, b], [c, d]] = self.entries;
        (
            BigInt::from(a) * x + BigInt::from(b) * y,
            BigInt::from(c) * x + BigInt::from(d) * y,
        )
    }

    pub fn apply_quad(&self, x: &QuadNum, y: &QuadNum) -> (QuadNum, QuadNum) {
        let [[a, b], [c, d]] = self.entries.map(|row| row.map(|e| QuadNum::from_integer(e as i64)));
        (&a * x + &b * y, &c * x + &d * y)
    }
}

pub fn c_matrix(k: u64) -> Result<CMatrix> {
    if k < 1 {
        return Err(Error::domain("c(k) needs k >= 1"));
    }
    Ok(CMatrix {
        k,
        entries: [[chi(k), k.div_ceil(2)], [chi(k + 1), (k + 2) / 2]],
    })
}

/// Solution of the backward recursion `(X_m, Y_m) = c(k_{m+1}) (X_{m+1}, Y_{m+1})`
/// with `(X_n, Y_n) = (1, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XYPlan {
    pub k_schedule: Vec<u64>,
    pub x: Vec<BigInt>,
    pub y: Vec<BigInt>,
}

impl XYPlan {
    pub fn steps(&self) -> usize {
        self.k_schedule.len()
    }
}

pub fn xy_backward(k_schedule: &[u64]) -> Result<XYPlan> {
    let Some(&k1) = k_schedule.first() else {
        return Err(Error::domain("empty test-count schedule"));
    };
    if k1 < 2 {
        return Err(Error::domain("the first step needs at least two tests"));
    }
    let n = k_schedule.len();
    let mut x = vec![BigInt::zero(); n + 1];
    let mut y = vec![BigInt::zero(); n + 1];
    x[n] = BigInt::one();
    y[n] = BigInt::from(2);
    for m in (0..n).rev() {
        let c = c_matrix(k_schedule[m])?;
        let (xm, ym) = c.apply(&x[m + 1], &y[m + 1]);
        x[m] = xm;
        y[m] = ym;
    }
    Ok(XYPlan {
        k_schedule: k_schedule.to_vec(),
        x,
        y,
    })
}

/// A search policy.
///
/// `Basic` describes the tail of an odd-block policy after its first step:
/// an initial interval (of canonical length `1/i`) is searched with `2i`
/// tests whose partition has the given `alpha1`, then with `2i-1` new tests
/// per step, each step placed by where the retained point sits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PolicySpec {
    /// Classical Fibonacci search with a fixed number of tests.
    Fibonacci {
        horizon: usize,
    },
    /// Classical golden-section search.
    Golden,
    /// `2i` equally spaced tests per step.
    EvenBlock {
        i: u64,
    },
    /// Optimal odd-block search for a fixed number of steps.
    OddBlockG {
        i: u64,
        horizon: usize,
    },
    /// Odd-block search with gaps `omega^m, omega^(m+1)` at step `m`.
    OddBlockW {
        i: u64,
    },
    /// Odd-block search that differs from `OddBlockW` only in its first partition.
    OddBlockH {
        i: u64,
    },
    Basic {
        i: u64,
        alpha1: QuadNum,
    },
    /// Two tests per step: `3/7, 4/7` first, then equal spacing.
    TwoTestSpecial,
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::Fibonacci { horizon } => write!(f, "fibonacci(n={horizon})"),
            PolicySpec::Golden => write!(f, "golden"),
            PolicySpec::EvenBlock { i } => write!(f, "even_block(i={i})"),
            PolicySpec::OddBlockG { i, horizon } => write!(f, "odd_block_g(i={i}, n={horizon})"),
            PolicySpec::OddBlockW { i } => write!(f, "odd_block_w(i={i})"),
            PolicySpec::OddBlockH { i } => write!(f, "odd_block_h(i={i})"),
            PolicySpec::Basic { i, alpha1 } => write!(f, "basic(i={i}, alpha1={alpha1})"),
            PolicySpec::TwoTestSpecial => write!(f, "two_test_special"),
        }
    }
}

impl PolicySpec {
    /// Block order `i`; classical one-test-per-step policies have order 1.
    pub fn block_order(&self) -> u64 {
        match self {
            PolicySpec::Fibonacci { .. } | PolicySpec::Golden | PolicySpec::TwoTestSpecial => 1,
            PolicySpec::EvenBlock { i }
            | PolicySpec::OddBlockG { i, .. }
            | PolicySpec::OddBlockW { i }
            | PolicySpec::OddBlockH { i }
            | PolicySpec::Basic { i, .. } => *i,
        }
    }

    /// Number of steps the policy is defined for, if fixed in advance.
    pub fn horizon(&self) -> Option<usize> {
        match self {
            PolicySpec::Fibonacci { horizon } | PolicySpec::OddBlockG { horizon, .. } => Some(*horizon),
            _ => None,
        }
    }

    /// New tests placed at step `m` (1-based).
    pub fn tests_per_step(&self, m: usize) -> usize {
        let i = self.block_order() as usize;
        match self {
            PolicySpec::Fibonacci { .. } | PolicySpec::Golden => 1,
            PolicySpec::TwoTestSpecial => 2,
            PolicySpec::EvenBlock { .. } => 2 * i,
            PolicySpec::Basic { .. } if m == 1 => 2 * i,
            _ => 2 * i - 1,
        }
    }

    /// Whether tests per step are odd (`2i-1`, or one for the classical policies).
    pub fn is_odd_block(&self) -> bool {
        !matches!(self, PolicySpec::EvenBlock { .. } | PolicySpec::TwoTestSpecial)
    }

    pub fn validate(&self) -> Result<()> {
        let i = self.block_order();
        if i < 1 {
            return Err(Error::domain("block order i must be at least 1"));
        }
        if let Some(h) = self.horizon() {
            if h < 1 {
                return Err(Error::domain("horizon must be at least 1"));
            }
        }
        match self {
            PolicySpec::OddBlockG { i, .. } if *i < 2 => Err(Error::domain(
                "odd_block_g needs i >= 2; use fibonacci for one test per step",
            )),
            PolicySpec::Basic { i, alpha1 } => {
                let d = alpha1.radicand();
                if d != 0 && d != field_radicand(*i) {
                    return Err(Error::FieldMismatch {
                        left: d,
                        right: field_radicand(*i),
                    });
                }
                let upper = QuadNum::from_ratio(1, *i as i64);
                if alpha1.sign().is_le() || alpha1.quad_cmp(&upper)?.is_ge() {
                    return Err(Error::domain(format!("alpha1 = {alpha1} must lie in (0, 1/{i})")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// First-step partition parameter of a policy on the unit interval; for
/// `Basic` it is the given `alpha1` on its canonical interval of length `1/i`.
pub fn first_alpha(policy: &PolicySpec) -> Result<QuadNum> {
    policy.validate()?;
    let i = policy.block_order();
    Ok(match policy {
        PolicySpec::Fibonacci { horizon } => {
            let f = f_seq(1, horizon + 1)?;
            QuadNum::from_big_ratio(f.at(*horizon as i64).clone(), f.at(*horizon as i64 + 1).clone())
        }
        PolicySpec::Golden => omega(1)?,
        PolicySpec::OddBlockW { .. } => omega(i)?,
        PolicySpec::OddBlockH { .. } => h_first_alpha(i)?,
        PolicySpec::OddBlockG { horizon, .. } => {
            let plan = xy_backward(&vec![2 * i - 1; *horizon])?;
            QuadNum::from_big_ratio(plan.x[1].clone(), plan.x[0].clone())
        }
        PolicySpec::EvenBlock { .. } => QuadNum::from_ratio(1, 2 * i as i64 + 1),
        PolicySpec::TwoTestSpecial => QuadNum::from_ratio(3, 7),
        PolicySpec::Basic { alpha1, .. } => alpha1.clone(),
    })
}

/// `{ (1/i) floor((i+1)/2) + chi(i) omega } omega`.
pub fn h_first_alpha(i: u64) -> Result<QuadNum> {
    let w = omega(i)?;
    let head = QuadNum::from_ratio(i.div_ceil(2) as i64, i as i64);
    Ok((head + QuadNum::from_integer(chi(i) as i64) * &w) * w)
}

/// Dividing points of an `[alpha, beta]`-partition.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition<T> {
    pub a: T,
    pub b: T,
    pub alpha: T,
    pub beta: T,
    /// Interior dividing points in increasing order.
    pub points: Vec<T>,
}

/// Lays `gaps` alternating gaps `alpha, beta, alpha, ...` from `a` and checks
/// that they end exactly at `b`.
pub fn partition_points<T: Scalar>(a: &T, b: &T, alpha: &T, beta: &T, gaps: usize) -> Result<Partition<T>> {
    if !(*alpha > T::zero() && *beta > T::zero()) {
        return Err(Error::InfeasiblePartition(format!(
            "gap lengths must be positive (alpha = {alpha}, beta = {beta})"
        )));
    }
    if gaps < 2 {
        return Err(Error::InfeasiblePartition("a partition needs at least two gaps".into()));
    }
    if !(*a < *b) {
        return Err(Error::InfeasiblePartition(format!("empty interval [{a}, {b}]")));
    }
    let mut points = Vec::with_capacity(gaps - 1);
    let mut x = a.clone();
    for g in 0..gaps - 1 {
        x = x + if g % 2 == 0 { alpha.clone() } else { beta.clone() };
        points.push(x.clone());
    }
    let end = x + if (gaps - 1).is_multiple_of(2) {
        alpha.clone()
    } else {
        beta.clone()
    };
    let len = b.clone() - a.clone();
    if !end.same_point(b, &len) {
        return Err(Error::InfeasiblePartition(format!(
            "{gaps} gaps of {alpha} and {beta} end at {end}, not at {b}"
        )));
    }
    Ok(Partition {
        a: a.clone(),
        b: b.clone(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        points,
    })
}

/// Where a step happens: the current interval, the point kept from the last
/// step, and the step counters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepContext<T> {
    pub a: T,
    pub b: T,
    pub retained: Option<T>,
    /// 1-based step within the current epoch. An epoch restarts when a tie
    /// leaves no tested point inside the interval.
    pub local_step: usize,
    /// Steps available when the current epoch began, for fixed-horizon policies.
    pub epoch_horizon: Option<usize>,
    /// Steps still available, for fixed-horizon policies.
    pub horizon_left: Option<usize>,
}

impl<T: Scalar> StepContext<T> {
    pub fn initial(policy: &PolicySpec, a: T, b: T) -> Self {
        StepContext {
            a,
            b,
            retained: None,
            local_step: 1,
            epoch_horizon: policy.horizon(),
            horizon_left: policy.horizon(),
        }
    }

    /// Context for the next step after the interval shrank to `[a, b]` around `retained`.
    pub fn advance(&self, a: T, b: T, retained: Option<T>) -> Self {
        let horizon_left = self.horizon_left.map(|h| h.saturating_sub(1));
        match retained {
            Some(_) => StepContext {
                a,
                b,
                retained,
                local_step: self.local_step + 1,
                epoch_horizon: self.epoch_horizon,
                horizon_left,
            },
            None => StepContext {
                a,
                b,
                retained: None,
                local_step: 1,
                epoch_horizon: horizon_left,
                horizon_left,
            },
        }
    }
}

/// Gap ratio and gap count for one step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepPattern<T> {
    pub alpha_weight: T,
    pub beta_weight: T,
    pub gaps: usize,
}

fn q<T: Scalar>(x: &QuadNum) -> Result<T> {
    T::from_quad(x)
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::PolicyStateMismatch(msg.into())
}

/// The `[alpha, beta]` ratio and gap count the policy prescribes in `ctx`.
pub fn step_pattern<T: Scalar>(policy: &PolicySpec, ctx: &StepContext<T>) -> Result<StepPattern<T>> {
    policy.validate()?;
    if let (Some(0), Some(h)) = (ctx.horizon_left, policy.horizon()) {
        return Err(Error::HorizonExhausted { horizon: h });
    }
    let m = ctx.local_step;
    if m == 0 {
        return Err(mismatch("steps are numbered from 1"));
    }
    match (m, &ctx.retained) {
        (1, Some(_)) => return Err(mismatch("a first step cannot carry a retained point")),
        (2.., None) => return Err(mismatch(format!("step {m} needs a retained point"))),
        _ => {}
    }
    let i = policy.block_order();
    let i_us = i as usize;
    let pat = |alpha_weight: T, beta_weight: T, gaps: usize| StepPattern {
        alpha_weight,
        beta_weight,
        gaps,
    };
    let mirror = |ctx: &StepContext<T>| -> Result<StepPattern<T>> {
        let c = ctx.retained.clone().expect("checked above");
        let left = c.clone() - ctx.a.clone();
        let right = ctx.b.clone() - c;
        let near = if left < right { left } else { right };
        let middle = ctx.b.clone() - ctx.a.clone() - near.clone() - near.clone();
        if !(middle > T::zero()) {
            return Err(mismatch("the retained point is its own mirror image"));
        }
        Ok(pat(near, middle, 3))
    };
    match policy {
        PolicySpec::Fibonacci { .. } => {
            if m == 1 {
                let r = ctx.epoch_horizon.unwrap_or(1).max(1);
                let f = f_seq(1, r + 1)?;
                Ok(pat(
                    T::from_bigint(f.at(r as i64)),
                    T::from_bigint(f.at(r as i64 - 1)),
                    2,
                ))
            } else {
                mirror(ctx)
            }
        }
        PolicySpec::Golden => {
            if m == 1 {
                let w = omega(1)?;
                Ok(pat(q(&w)?, q(&(&w * &w))?, 2))
            } else {
                mirror(ctx)
            }
        }
        PolicySpec::OddBlockW { .. } | PolicySpec::OddBlockH { .. } => {
            let w = omega(i)?;
            if m == 1 {
                let alpha = match policy {
                    PolicySpec::OddBlockH { .. } => h_first_alpha(i)?,
                    _ => w.clone(),
                };
                let beta = QuadNum::from_ratio(1, i as i64) - &alpha;
                Ok(pat(q(&alpha)?, q(&beta)?, 2 * i_us))
            } else {
                Ok(pat(T::one(), q(&w)?, 2 * i_us + 1))
            }
        }
        PolicySpec::OddBlockG { .. } => {
            let r = ctx.epoch_horizon.unwrap_or(1);
            if m > r {
                return Err(Error::HorizonExhausted { horizon: r });
            }
            let plan = xy_backward(&vec![2 * i - 1; r])?;
            let x = T::from_bigint(&plan.x[m]);
            let y = T::from_bigint(&plan.y[m]);
            let gaps = if m == 1 { 2 * i_us } else { 2 * i_us + 1 };
            Ok(pat(x.clone(), y - x, gaps))
        }
        PolicySpec::EvenBlock { .. } => {
            let gaps = if m == 1 { 2 * i_us + 1 } else { 2 * i_us + 2 };
            Ok(pat(T::one(), T::one(), gaps))
        }
        PolicySpec::TwoTestSpecial => {
            if m == 1 {
                Ok(pat(T::from_int(3), T::one(), 3))
            } else {
                Ok(pat(T::one(), T::one(), 4))
            }
        }
        PolicySpec::Basic { alpha1, .. } => {
            if m == 1 {
                let inv_i = QuadNum::from_ratio(1, i as i64);
                let beta = (inv_i - QuadNum::from_integer(i as i64 + 1) * alpha1) / QuadNum::from_integer(i as i64);
                if beta.sign().is_le() {
                    return Err(Error::InfeasiblePartition(format!(
                        "alpha1 = {alpha1} leaves no room for the second gap length"
                    )));
                }
                Ok(pat(q(alpha1)?, q(&beta)?, 2 * i_us + 1))
            } else {
                let c = ctx.retained.clone().expect("checked above");
                let big = ctx.b.clone() - ctx.a.clone();
                let left = c.clone() - ctx.a.clone();
                let right = ctx.b.clone() - c;
                let far = if left > right { left } else { right };
                let ell = locate_position(&far, &big, i)?;
                let upd = step_update(&far, &big, ell, i)?;
                let beta = upd.big_delta.clone() - upd.alpha.clone();
                Ok(pat(upd.alpha, beta, 2 * i_us + 1))
            }
        }
    }
}

/// Dividing points of a step and the index of the retained point among them.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout<T> {
    pub points: Vec<T>,
    pub retained_index: Option<usize>,
}

impl<T: Scalar> Layout<T> {
    /// Points that still need testing.
    pub fn new_points(&self) -> Vec<T> {
        self.points
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != self.retained_index)
            .map(|(_, p)| p.clone())
            .collect()
    }
}

/// Lays out the step prescribed by `policy` in `ctx`, fitting the retained
/// point onto a dividing point (the partition is reflected if needed).
pub fn step_layout<T: Scalar>(policy: &PolicySpec, ctx: &StepContext<T>) -> Result<Layout<T>> {
    let pat = step_pattern(policy, ctx)?;
    let (a, b) = (&ctx.a, &ctx.b);
    let len = b.clone() - a.clone();
    let n_alpha = T::from_int(pat.gaps.div_ceil(2) as i64);
    let n_beta = T::from_int((pat.gaps / 2) as i64);
    let unit = len.clone() / (n_alpha * pat.alpha_weight.clone() + n_beta * pat.beta_weight.clone());
    let alpha = pat.alpha_weight * unit.clone();
    let beta = pat.beta_weight * unit;
    let part = partition_points(a, b, &alpha, &beta, pat.gaps)?;

    let Some(c) = &ctx.retained else {
        return Ok(Layout {
            points: part.points,
            retained_index: None,
        });
    };
    let forward = part.points.clone();
    let mirrored: Vec<T> = part
        .points
        .iter()
        .rev()
        .map(|p| a.clone() + b.clone() - p.clone())
        .collect();
    for mut points in [forward, mirrored] {
        if let Some(k) = points.iter().position(|p| p.same_point(c, &len)) {
            points[k] = c.clone();
            if points.windows(2).any(|w| !(w[0] < w[1])) || !(*a < points[0]) || !(points[points.len() - 1] < *b) {
                return Err(mismatch("dividing points are not strictly inside the interval"));
            }
            return Ok(Layout {
                points,
                retained_index: Some(k),
            });
        }
    }
    Err(mismatch(format!(
        "retained point {c} is not a dividing point of the step-{} partition of [{a}, {b}]",
        ctx.local_step
    )))
}

/// The new test points for the step described by `ctx`.
pub fn next_tests<T: Scalar>(policy: &PolicySpec, ctx: &StepContext<T>) -> Result<Vec<T>> {
    step_layout(policy, ctx).map(|l| l.new_points())
}

/// First-step test points on `[0, 1]`.
pub fn first_step_points(policy: &PolicySpec) -> Result<Vec<QuadNum>> {
    let ctx = StepContext::initial(policy, QuadNum::zero(), QuadNum::one());
    next_tests(policy, &ctx)
}
