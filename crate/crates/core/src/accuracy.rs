//! Exact accuracy analysis of basic policies.
//!
//! Lengths for the generic `Basic` policy are measured on its canonical
//! initial interval `[0, 1/i]`; every other policy starts on `[0, 1]`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{field_radicand, omega, QuadNum};
use crate::policies::{chi, h_first_alpha, xy_backward, PolicySpec};
use crate::scalar::Scalar;
use crate::sequences::{e_seq, Seqs};

fn qi(n: i64) -> QuadNum {
    QuadNum::from_integer(n)
}

fn qr(n: i64, m: i64) -> QuadNum {
    QuadNum::from_ratio(n, m)
}

fn neg_one_pow(m: i64) -> QuadNum {
    if m.rem_euclid(2) == 0 {
        qi(1)
    } else {
        qi(-1)
    }
}

fn ipow(i: u64, m: i64) -> QuadNum {
    qi(i as i64).pow(m as i32).expect("nonzero base")
}

/// Position (1-based, among the `2i` dividing points) that a retained point
/// at distance `delta` from the far end of an interval of length `big_delta`
/// must occupy in the next `[alpha, beta]`-partition with `2i + 1` gaps.
///
/// The admissible ranges tile `(big_delta/2, big_delta)`: position `2j - 1`
/// covers `((j-1)Δ/i, jΔ/(i+1))` and position `2j` covers `(jΔ/(i+1), jΔ/i)`,
/// so exactly one position is feasible away from the breakpoints.
pub fn locate_position<T: Scalar>(delta: &T, big_delta: &T, i: u64) -> Result<usize> {
    if i < 1 {
        return Err(Error::domain("block order i must be at least 1"));
    }
    let two = T::from_int(2);
    let half = big_delta.clone() / two;
    if !(*delta > half && *delta < *big_delta) {
        return Err(Error::Precondition(format!(
            "retained distance {delta} must lie strictly between {half} and {big_delta}"
        )));
    }
    let ii = T::from_int(i as i64);
    let i1 = T::from_int(i as i64 + 1);
    for j in 1..=i {
        let jt = T::from_int(j as i64);
        let k = jt.clone() * big_delta.clone() / i1.clone();
        if *delta == k {
            return Err(Error::boundary(
                "retained distance",
                format!("{j}/{} of the interval", i + 1),
            ));
        }
        let upper = jt.clone() * big_delta.clone() / ii.clone();
        if j < i && *delta == upper {
            return Err(Error::boundary("retained distance", format!("{j}/{i} of the interval")));
        }
        let lower = T::from_int(j as i64 - 1) * big_delta.clone() / ii.clone();
        if *delta > lower && *delta < k {
            return Ok(2 * j as usize - 1);
        }
        if *delta > k && *delta < upper {
            return Ok(2 * j as usize);
        }
    }
    Err(Error::Precondition(format!(
        "no position found for distance {delta} in an interval of length {big_delta}"
    )))
}

/// All positions `1..=2i` whose `step_update` yields positive gap lengths.
/// Independent of the breakpoint tiling used by [`locate_position`].
pub fn feasible_positions<T: Scalar>(delta: &T, big_delta: &T, i: u64) -> Vec<usize> {
    (1..=2 * i as usize)
        .filter(|&ell| {
            step_lengths(delta, big_delta, ell, i)
                .map(|(alpha, big)| alpha > T::zero() && big > alpha)
                .unwrap_or(false)
        })
        .collect()
}

/// One step of a basic policy with `2i - 1` new tests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepUpdate<T> {
    pub position: usize,
    /// Short gap length of the new partition.
    pub alpha: T,
    /// Length of the interval left after the step.
    pub big_delta: T,
    /// Step accuracy after the step.
    pub delta: T,
}

fn step_lengths<T: Scalar>(delta: &T, big_delta: &T, ell: usize, i: u64) -> Result<(T, T)> {
    let half = (ell / 2) as i64;
    let c = chi(ell as u64 - 1) as i64;
    let den = i as i64 * c - half;
    if den == 0 {
        return Err(Error::InfeasiblePartition(format!(
            "position {ell} is degenerate for i = {i}"
        )));
    }
    let den = T::from_int(den);
    let ii = T::from_int(i as i64);
    let alpha = (ii * delta.clone() - T::from_int(half) * big_delta.clone()) / den.clone();
    let big = (T::from_int(c) * big_delta.clone() - delta.clone()) / den;
    Ok((alpha, big))
}

/// Gap length and interval length of the next partition when the retained
/// point sits at position `ell`. The next accuracy is `alpha` when the short
/// gap exceeds half the new interval and `big_delta - alpha` otherwise.
pub fn step_update<T: Scalar>(delta: &T, big_delta: &T, ell: usize, i: u64) -> Result<StepUpdate<T>> {
    if ell < 1 || ell > 2 * i as usize {
        return Err(Error::InfeasiblePartition(format!(
            "position {ell} outside 1..={}",
            2 * i
        )));
    }
    let (alpha, big) = step_lengths(delta, big_delta, ell, i)?;
    if !(alpha > T::zero() && big > alpha) {
        return Err(Error::InfeasiblePartition(format!(
            "position {ell} gives gap {alpha} and interval {big} for distance {delta} of {big_delta}"
        )));
    }
    let half_big = big.clone() / T::from_int(2);
    let next = if alpha > half_big {
        alpha.clone()
    } else if alpha < half_big {
        big.clone() - alpha.clone()
    } else {
        return Err(Error::boundary("short gap", "half the new interval"));
    };
    Ok(StepUpdate {
        position: ell,
        alpha,
        big_delta: big,
        delta: next,
    })
}

/// How positions are chosen when chaining steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionChoice {
    /// The position forced by the geometry. Every dividing point of a step
    /// leaves the same accuracy, so this is also the worst case.
    Adversarial,
    /// Replay the given positions for steps `2, 3, ...`.
    Explicit(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub m: usize,
    pub alpha: QuadNum,
    pub delta: QuadNum,
    pub big_delta: QuadNum,
    /// Position of the retained point; absent at the first step.
    pub position: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyTrace {
    pub i: u64,
    pub alpha1: QuadNum,
    pub steps: Vec<TraceStep>,
}

impl AccuracyTrace {
    pub fn delta(&self, m: usize) -> &QuadNum {
        &self.steps[m - 1].delta
    }

    pub fn big_delta(&self, m: usize) -> &QuadNum {
        &self.steps[m - 1].big_delta
    }
}

fn check_alpha1(alpha1: &QuadNum, i: u64) -> Result<()> {
    PolicySpec::Basic {
        i,
        alpha1: alpha1.clone(),
    }
    .validate()
}

/// Exact trace of the basic policy with first gap `alpha1` on `[0, 1/i]`.
pub fn trace_basic(alpha1: &QuadNum, i: u64, n: usize, choice: &PositionChoice) -> Result<AccuracyTrace> {
    check_alpha1(alpha1, i)?;
    if n < 1 {
        return Err(Error::domain("a trace needs at least one step"));
    }
    let inv_i = qr(1, i as i64);
    let beta1 = (&inv_i - qi(i as i64 + 1) * alpha1) / qi(i as i64);
    if beta1.sign() != Ordering::Greater {
        return Err(Error::InfeasiblePartition(format!(
            "alpha1 = {alpha1} must stay below 1/(i(i+1))"
        )));
    }
    let big1 = alpha1 + &beta1;
    let delta1 = QuadNum::max_of(alpha1, &beta1)?;
    let mut steps = vec![TraceStep {
        m: 1,
        alpha: alpha1.clone(),
        delta: delta1,
        big_delta: big1,
        position: None,
    }];
    for m in 2..=n {
        let prev = &steps[m - 2];
        let ell = match choice {
            PositionChoice::Adversarial => locate_position(&prev.delta, &prev.big_delta, i)?,
            PositionChoice::Explicit(list) => *list
                .get(m - 2)
                .ok_or_else(|| Error::domain(format!("no position given for step {m}")))?,
        };
        let upd = step_update(&prev.delta, &prev.big_delta, ell, i)?;
        steps.push(TraceStep {
            m,
            alpha: upd.alpha,
            delta: upd.delta,
            big_delta: upd.big_delta,
            position: Some(ell),
        });
    }
    Ok(AccuracyTrace {
        i,
        alpha1: alpha1.clone(),
        steps,
    })
}

/// `(-1)^m (G(m-2) - G(m) alpha1) / i^m`, the closed-form step accuracy of a
/// basic policy on `[0, 1/i]`; `m = 0` gives `1/i` through `G(-2) = 1/i`.
pub fn basic_closed_delta(alpha1: &QuadNum, i: u64, m: usize) -> Result<QuadNum> {
    let s = Seqs::new(i, m + 2)?;
    let m = m as i64;
    Ok(neg_one_pow(m) * (s.gq(m - 2) - s.gq(m) * alpha1) / ipow(i, m))
}

/// Closed-form interval length `delta(m-1)/i`.
pub fn basic_closed_big_delta(alpha1: &QuadNum, i: u64, m: usize) -> Result<QuadNum> {
    if m < 1 {
        return Err(Error::domain("interval length is indexed from step 1"));
    }
    Ok(basic_closed_delta(alpha1, i, m - 1)? / qi(i as i64))
}

/// Steps for which the closed forms of [`basic_closed_delta`] and
/// [`basic_closed_big_delta`] describe the basic policy with first gap `alpha1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRange {
    /// The closed forms hold for `1 <= m <= valid_through`; `0` if not even at step 1.
    pub valid_through: usize,
    /// `alpha1 = omega^2`: the closed forms hold at every step.
    pub unbounded: bool,
}

/// Decides how long the retained point keeps sitting at the last position
/// with the short gap as the next accuracy. Step `m` keeps this pattern for
/// step `m + 1` when `alpha1` lies on the correct side of `G(m)/G(m+2)` and of
/// `F(m+1)/F(m+3)`; the sides alternate with the parity of `m`.
pub fn closed_form_range(alpha1: &QuadNum, i: u64, m_cap: usize) -> Result<ClosedFormRange> {
    check_alpha1(alpha1, i)?;
    let w2 = omega(i)?.pow(2)?;
    if *alpha1 == w2 {
        return Ok(ClosedFormRange {
            valid_through: m_cap,
            unbounded: true,
        });
    }
    let s = Seqs::new(i, m_cap + 4)?;
    let cmp = |x: &QuadNum, num: QuadNum, den: QuadNum, name: &str| -> Result<Ordering> {
        let t = num / den;
        match x.quad_cmp(&t)? {
            Ordering::Equal => Err(Error::boundary("alpha1", format!("{name} = {t}"))),
            o => Ok(o),
        }
    };
    let lo = cmp(alpha1, s.fq(1), s.fq(3), "F(1)/F(3)")?;
    let hi = cmp(alpha1, s.gq(0), s.gq(2), "G(0)/G(2)")?;
    if lo != Ordering::Greater || hi != Ordering::Less {
        return Ok(ClosedFormRange {
            valid_through: 0,
            unbounded: false,
        });
    }
    let mut valid = 1;
    for m in 1..m_cap {
        let mi = m as i64;
        let g = cmp(alpha1, s.gq(mi), s.gq(mi + 2), &format!("G({m})/G({})", m + 2))?;
        let f = cmp(
            alpha1,
            s.fq(mi + 1),
            s.fq(mi + 3),
            &format!("F({})/F({})", m + 1, m + 3),
        )?;
        let keeps = if m % 2 == 1 {
            g == Ordering::Greater && f == Ordering::Less
        } else {
            g == Ordering::Less && f == Ordering::Greater
        };
        if !keeps {
            break;
        }
        valid = m + 1;
    }
    Ok(ClosedFormRange {
        valid_through: valid,
        unbounded: false,
    })
}

/// Step accuracy `delta(P, n)` relative to an initial interval of length 1.
pub fn step_accuracy(policy: &PolicySpec, n: usize) -> Result<QuadNum> {
    policy.validate()?;
    if n < 1 {
        return Err(Error::domain("step accuracy is defined for n >= 1"));
    }
    if let Some(h) = policy.horizon() {
        if n > h {
            return Err(Error::HorizonExhausted { horizon: h });
        }
    }
    let i = policy.block_order();
    Ok(match policy {
        PolicySpec::Fibonacci { horizon } => {
            let s = Seqs::new(1, horizon + 1)?;
            s.fq((horizon + 1 - n) as i64) / s.fq(*horizon as i64 + 1)
        }
        PolicySpec::Golden | PolicySpec::OddBlockW { .. } => omega(i)?.pow(n as i32)?,
        PolicySpec::OddBlockH { .. } => {
            if n == 1 {
                h_first_alpha(i)?
            } else {
                omega(i)?.pow(n as i32)?
            }
        }
        PolicySpec::OddBlockG { horizon, .. } => {
            let plan = xy_backward(&vec![2 * i - 1; *horizon])?;
            QuadNum::from_big_ratio(plan.x[n].clone(), plan.x[0].clone())
        }
        PolicySpec::EvenBlock { .. } => {
            let den = (2 * i as i64 + 1) * (i as i64 + 1).pow(n as u32 - 1);
            qr(1, den)
        }
        PolicySpec::TwoTestSpecial => {
            if n == 1 {
                qr(3, 7)
            } else {
                qr(1, 7 * 2i64.pow(n as u32 - 2))
            }
        }
        PolicySpec::Basic { alpha1, .. } => {
            let tr = trace_basic(alpha1, i, n, &PositionChoice::Adversarial)?;
            qi(i as i64) * tr.delta(n)
        }
    })
}

/// `1/2 + (3/2) sqrt(i/(i+4))`, the limit of `F(n+1) omega^n`.
pub fn limit_constant(i: u64) -> Result<QuadNum> {
    let root = QuadNum::sqrt_of(field_radicand(i))?;
    Ok(qr(1, 2) + qr(3, 2) * root / qi(i as i64 + 4))
}

/// Sup of weighted step accuracies over a finite horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralAccuracy {
    pub sup: QuadNum,
    pub attained_at: usize,
    /// Weighted values for `n = 1..=horizon`.
    pub weighted: Vec<QuadNum>,
    /// Limit of the weighted values, when known.
    pub limit: Option<QuadNum>,
    /// Whether the tail beyond the horizon provably stays at or below `sup`.
    pub converged: bool,
}

/// `sup_n w(n) delta(P, n)` over `1 <= n <= horizon`, where the weight is the
/// optimal-policy reciprocal accuracy for the policy's block type: `F(n+1)`
/// for odd blocks, `E(n)` for even blocks, and `F(n+2)` for `Basic` on its
/// canonical interval.
pub fn general_accuracy(policy: &PolicySpec, horizon: usize) -> Result<GeneralAccuracy> {
    policy.validate()?;
    if horizon < 1 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    let i = policy.block_order();
    let steps = policy.horizon().map_or(horizon, |h| h.min(horizon));
    let seqs = Seqs::new(i, steps + 3)?;
    let mut weighted = Vec::with_capacity(steps);
    match policy {
        PolicySpec::EvenBlock { .. } | PolicySpec::TwoTestSpecial => {
            let e = e_seq(i, steps)?;
            for n in 1..=steps {
                weighted.push(QuadNum::from_bigint(e.at(n as i64).clone()) * step_accuracy(policy, n)?);
            }
        }
        PolicySpec::Basic { alpha1, .. } => {
            let tr = trace_basic(alpha1, i, steps, &PositionChoice::Adversarial)?;
            for n in 1..=steps {
                weighted.push(seqs.fq(n as i64 + 2) * tr.delta(n));
            }
        }
        _ => {
            for n in 1..=steps {
                weighted.push(seqs.fq(n as i64 + 1) * step_accuracy(policy, n)?);
            }
        }
    }
    let mut attained_at = 1;
    for (k, v) in weighted.iter().enumerate() {
        if v.quad_cmp(&weighted[attained_at - 1])? == Ordering::Greater {
            attained_at = k + 1;
        }
    }
    let sup = weighted[attained_at - 1].clone();
    let limit = match policy {
        PolicySpec::Golden | PolicySpec::OddBlockW { .. } | PolicySpec::OddBlockH { .. } => Some(limit_constant(i)?),
        PolicySpec::EvenBlock { .. } => Some(qr(2 * i as i64 + 2, 2 * i as i64 + 1)),
        PolicySpec::TwoTestSpecial => Some(qr(8, 7)),
        _ => None,
    };
    // Odd-block tails omega^n split into an increasing and a decreasing branch
    // that meet at the limit; even-block tails increase to theirs. Either way
    // the tail stays below max(sup, limit) once both branches are seen.
    let converged = match (&limit, policy.horizon()) {
        (_, Some(h)) => horizon >= h,
        (Some(l), None) => steps >= 3 && l.quad_cmp(&sup)? != Ordering::Greater,
        (None, None) => false,
    };
    Ok(GeneralAccuracy {
        sup,
        attained_at,
        weighted,
        limit,
        converged,
    })
}

/// Values of the two branches `F(2n+1) omega^(2n)` and `F(2n+2) omega^(2n+1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketRow {
    pub n: usize,
    pub increasing: QuadNum,
    pub decreasing: QuadNum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub i: u64,
    pub limit: QuadNum,
    pub rows: Vec<BracketRow>,
    pub increasing_is_monotone: bool,
    pub decreasing_is_monotone: bool,
    pub limit_between: bool,
}

impl BracketReport {
    pub fn holds(&self) -> bool {
        self.increasing_is_monotone && self.decreasing_is_monotone && self.limit_between
    }
}

/// Checks that `F(n+1) omega^n` approaches its limit from below along even `n`
/// and from above along odd `n`, strictly monotonically, for `0 <= n <= 2 n_max + 1`.
pub fn limit_bracket(i: u64, n_max: usize) -> Result<BracketReport> {
    let s = Seqs::new(i, 2 * n_max + 3)?;
    let w = omega(i)?;
    let limit = limit_constant(i)?;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let k = 2 * n as i64;
        rows.push(BracketRow {
            n,
            increasing: s.fq(k + 1) * w.pow(k as i32)?,
            decreasing: s.fq(k + 2) * w.pow(k as i32 + 1)?,
        });
    }
    let lt = |a: &QuadNum, b: &QuadNum| a.quad_cmp(b).map(|o| o == Ordering::Less);
    let mut inc = true;
    let mut dec = true;
    let mut between = true;
    for r in &rows {
        between &= lt(&r.increasing, &limit)? && lt(&limit, &r.decreasing)?;
    }
    for p in rows.windows(2) {
        inc &= lt(&p[0].increasing, &p[1].increasing)?;
        dec &= lt(&p[1].decreasing, &p[0].decreasing)?;
    }
    Ok(BracketReport {
        i,
        limit,
        rows,
        increasing_is_monotone: inc,
        decreasing_is_monotone: dec,
        limit_between: between,
    })
}

/// Threshold constants for first gaps of basic policies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub i: u64,
    /// `A(m)` for `m = 1..=m_max`: `F(m+2) delta(m) < delta*` iff `(-1)^(m-1) alpha1 < (-1)^(m-1) A(m)`.
    pub a: Vec<QuadNum>,
    /// `B(m)` for `m = 1..=m_max`: the general accuracy beats `delta*` only if `(-1)^m alpha1 < B(m)`.
    pub b: Vec<QuadNum>,
    /// `delta* / limit`.
    pub gamma: QuadNum,
    /// `F(4) omega^3`, the general accuracy of the H policy.
    pub delta_star: QuadNum,
    pub limit: QuadNum,
}

impl Thresholds {
    pub fn a_at(&self, m: usize) -> &QuadNum {
        &self.a[m - 1]
    }

    pub fn b_at(&self, m: usize) -> &QuadNum {
        &self.b[m - 1]
    }

    /// The value `alpha1` is compared with in the `B(m)` condition, `(-1)^m B(m)`.
    pub fn b_alpha_bound(&self, m: usize) -> QuadNum {
        neg_one_pow(m as i64) * self.b_at(m)
    }
}

/// `F(4) omega^3`.
pub fn delta_star(i: u64) -> Result<QuadNum> {
    let s = Seqs::new(i, 4)?;
    Ok(s.fq(4) * omega(i)?.pow(3)?)
}

pub fn thresholds(i: u64, m_max: usize) -> Result<Thresholds> {
    if i < 2 {
        return Err(Error::domain("thresholds need i >= 2"));
    }
    let s = Seqs::new(i, m_max + 3)?;
    let w = omega(i)?;
    let ds = delta_star(i)?;
    let limit = limit_constant(i)?;
    let gamma = &ds / &limit;
    let mut a = Vec::with_capacity(m_max);
    let mut b = Vec::with_capacity(m_max);
    for m in 1..=m_max as i64 {
        let sign = neg_one_pow(m - 1);
        a.push((&sign * ipow(i, m) * &ds / s.fq(m + 2) + s.gq(m - 2)) / s.gq(m));
        b.push((ipow(i, m) * w.pow(m as i32 + 1)? * &gamma + neg_one_pow(m) * s.gq(m - 3)) / s.gq(m - 1));
    }
    Ok(Thresholds {
        i,
        a,
        b,
        gamma,
        delta_star: ds,
        limit,
    })
}

/// One exactly decided inequality or identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub i: u64,
    pub lhs: QuadNum,
    pub rhs: QuadNum,
    /// `"<"`, `">"` or `"="`.
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub checks: Vec<InequalityCheck>,
    pub all_hold: bool,
}

fn check(name: &str, i: u64, lhs: QuadNum, relation: Ordering, rhs: QuadNum) -> Result<InequalityCheck> {
    let holds = lhs.quad_cmp(&rhs)? == relation;
    let relation = match relation {
        Ordering::Less => "<",
        Ordering::Greater => ">",
        Ordering::Equal => "=",
    };
    Ok(InequalityCheck {
        name: name.to_string(),
        i,
        lhs,
        rhs,
        relation: relation.to_string(),
        holds,
    })
}

/// Names of the checks made by [`verify_inequalities`] for each `i`.
pub const INEQUALITY_NAMES: [&str; 19] = [
    "H first step below its tail sup",
    "H accuracy below 2",
    "H accuracy via (i+1)omega - 1",
    "H accuracy via sqrt(i(i+4))",
    "W accuracy exceeds H accuracy",
    "first-step tail bound clears G(1)/G(3)",
    "seed ratio bound stays below F(2)/F(4)",
    "gamma below i(2i+3)omega/(2i+1)",
    "H accuracy below F(2)F(5)/F(6)",
    "omega^3 G(4) below (i+1)/gamma",
    "(i+1)omega below (i+1)F(6)/F(7)",
    "(i+1)F(6)/F(7) below 1 + 1/(i(i+3))",
    "gamma below (i+1)(1+omega)/(i+2)",
    "gamma below 1 + 1/(i+1)",
    "gamma above 1",
    "omega below F(4)/F(5)",
    "A(1) equals delta*/F(3)",
    "A(2) equals omega^2",
    "H first gap equals the closed alternative",
];

fn inequalities_for(i: u64) -> Result<Vec<InequalityCheck>> {
    use Ordering::{Equal, Greater, Less};
    let s = Seqs::new(i, 8)?;
    let w = omega(i)?;
    let ii = qi(i as i64);
    let i1 = qi(i as i64 + 1);
    let inv_i = qr(1, i as i64);
    let th = thresholds(i, 2)?;
    let ds = th.delta_star.clone();
    let gamma = th.gamma.clone();
    let h1 = h_first_alpha(i)?;
    let root = QuadNum::sqrt_of(field_radicand(i))?;
    let name = |k: usize| INEQUALITY_NAMES[k];
    let two_i3 = qi(2 * i as i64 + 3);
    let h1_alt = (qi(chi(i) as i64) + qi(chi(i - 1) as i64 - chi(i) as i64) * qi(i.div_ceil(2) as i64) * &w) / &ii;
    let out = vec![
        check(name(0), i, s.fq(2) * &h1, Less, ds.clone())?,
        check(name(1), i, ds.clone(), Less, qi(2))?,
        check(name(2), i, ds.clone(), Equal, &ii * &two_i3 * (&i1 * &w - qi(1)))?,
        check(
            name(3),
            i,
            ds.clone(),
            Equal,
            &two_i3 / qi(2) * (&i1 * &root - qi(i as i64 * (i as i64 + 3))),
        )?,
        check(name(4), i, qi(2) * &ii * &w, Greater, ds.clone())?,
        check(name(5), i, &inv_i - &gamma * &w, Greater, s.gq(1) / s.gq(3))?,
        check(name(6), i, &inv_i - &w / &gamma, Less, s.fq(2) / s.fq(4))?,
        check(
            name(7),
            i,
            gamma.clone(),
            Less,
            &ii * &two_i3 * &w / qi(2 * i as i64 + 1),
        )?,
        check(name(8), i, ds.clone(), Less, s.fq(2) * s.fq(5) / s.fq(6))?,
        check(name(9), i, w.pow(3)? * s.gq(4), Less, &i1 / &gamma)?,
        check(name(10), i, &i1 * &w, Less, &i1 * s.fq(6) / s.fq(7))?,
        check(
            name(11),
            i,
            &i1 * s.fq(6) / s.fq(7),
            Less,
            qi(1) + qr(1, i as i64 * (i as i64 + 3)),
        )?,
        check(name(12), i, gamma.clone(), Less, &i1 * (qi(1) + &w) / qi(i as i64 + 2))?,
        check(name(13), i, gamma.clone(), Less, qi(1) + qr(1, i as i64 + 1))?,
        check(name(14), i, gamma.clone(), Greater, qi(1))?,
        check(name(15), i, w.clone(), Less, s.fq(4) / s.fq(5))?,
        check(name(16), i, th.a_at(1).clone(), Equal, &ds / s.fq(3))?,
        check(name(17), i, th.a_at(2).clone(), Equal, w.pow(2)?)?,
        check(name(18), i, h1.clone(), Equal, h1_alt)?,
    ];
    Ok(out)
}

/// Decides every inequality in [`INEQUALITY_NAMES`] exactly for each `i`, in parallel.
pub fn verify_inequalities(i_range: std::ops::RangeInclusive<u64>) -> Result<InequalityReport> {
    if *i_range.start() < 2 {
        return Err(Error::domain("inequalities are stated for i >= 2"));
    }
    let per_i: Vec<Vec<InequalityCheck>> = i_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(inequalities_for)
        .collect::<Result<_>>()?;
    let checks: Vec<InequalityCheck> = per_i.into_iter().flatten().collect();
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(InequalityReport { checks, all_hold })
}

/// Which part of `(0, 1/i)` a first gap falls into, split at the ratios
/// `F(n)/F(n+2)` and `G(n)/G(n+2)` that accumulate at `omega^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubInterval {
    /// `(0, F(1)/F(3))`.
    BelowFirstRatio,
    /// `(F(2n-1)/F(2n+1), G(2n-1)/G(2n+1))`.
    OddFToOddG { n: usize },
    /// `(G(2n-1)/G(2n+1), F(2n+1)/F(2n+3))`.
    OddGToOddF { n: usize },
    /// `(G(2n)/G(2n+2), F(2n)/F(2n+2))`.
    EvenGToEvenF { n: usize },
    /// `(F(2n)/F(2n+2), G(2n-2)/G(2n))`.
    EvenFToEvenG { n: usize },
    /// Exactly `omega^2`, the first gap of the H policy's tail.
    OptimalPoint,
}

/// The argument that rules out beating the H policy from a given sub-interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dismissal {
    /// The interval left after the first step is too long: the `B(1)` bound.
    FirstStepTail,
    /// The step accuracies at `m = 1, 2` already reach `delta*`: the `A` thresholds.
    EarlyStepThresholds,
    /// The seed ratio of the asymptotic comparison is at least `gamma`.
    SeedRatio,
    /// Odd-step threshold `A(2n-1)` lies below the interval.
    OddStepThreshold,
    /// Even-step tail bound `B(2n)` lies below the interval.
    EvenStepTail,
    /// Nothing to dismiss: this is the optimal choice.
    Optimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub interval: SubInterval,
    pub dismissal: Dismissal,
}

/// Locates `alpha1` among the sub-intervals of `(0, 1/i)`.
pub fn subinterval_classify(alpha1: &QuadNum, i: u64) -> Result<Classification> {
    if i < 2 {
        return Err(Error::domain("sub-interval analysis needs i >= 2"));
    }
    check_alpha1(alpha1, i)?;
    let w2 = omega(i)?.pow(2)?;
    let side = alpha1.quad_cmp(&w2)?;
    if side == Ordering::Equal {
        return Ok(Classification {
            interval: SubInterval::OptimalPoint,
            dismissal: Dismissal::Optimal,
        });
    }
    let mut n_max = 8;
    loop {
        let s = Seqs::new(i, 2 * n_max + 4)?;
        let cmp = |num: QuadNum, den: QuadNum, name: String| -> Result<Ordering> {
            let t = num / den;
            match alpha1.quad_cmp(&t)? {
                Ordering::Equal => Err(Error::boundary("alpha1", format!("{name} = {t}"))),
                o => Ok(o),
            }
        };
        let f = |k: usize| s.fq(k as i64);
        let g = |k: usize| s.gq(k as i64);
        if side == Ordering::Less {
            if cmp(f(1), f(3), "F(1)/F(3)".into())? == Ordering::Less {
                return Ok(Classification {
                    interval: SubInterval::BelowFirstRatio,
                    dismissal: Dismissal::FirstStepTail,
                });
            }
            for n in 1..=n_max {
                let (a, b, c) = (2 * n - 1, 2 * n + 1, 2 * n + 3);
                if cmp(g(a), g(b), format!("G({a})/G({b})"))? == Ordering::Less {
                    let dismissal = if n == 1 {
                        Dismissal::FirstStepTail
                    } else {
                        Dismissal::EarlyStepThresholds
                    };
                    return Ok(Classification {
                        interval: SubInterval::OddFToOddG { n },
                        dismissal,
                    });
                }
                if cmp(f(b), f(c), format!("F({b})/F({c})"))? == Ordering::Less {
                    return Ok(Classification {
                        interval: SubInterval::OddGToOddF { n },
                        dismissal: Dismissal::EarlyStepThresholds,
                    });
                }
            }
        } else {
            if cmp(g(0), g(2), "G(0)/G(2)".into())? == Ordering::Greater {
                return Err(Error::InfeasiblePartition(format!(
                    "alpha1 = {alpha1} exceeds G(0)/G(2) = 1/(i(i+1)); the first step cannot leave a retained point"
                )));
            }
            for n in 1..=n_max {
                let (a, b) = (2 * n, 2 * n + 2);
                if cmp(f(a), f(b), format!("F({a})/F({b})"))? == Ordering::Greater {
                    let dismissal = if n == 1 {
                        Dismissal::SeedRatio
                    } else {
                        Dismissal::OddStepThreshold
                    };
                    return Ok(Classification {
                        interval: SubInterval::EvenFToEvenG { n },
                        dismissal,
                    });
                }
                if cmp(g(a), g(b), format!("G({a})/G({b})"))? == Ordering::Greater {
                    return Ok(Classification {
                        interval: SubInterval::EvenGToEvenF { n },
                        dismissal: Dismissal::EvenStepTail,
                    });
                }
            }
        }
        n_max *= 2;
    }
}
