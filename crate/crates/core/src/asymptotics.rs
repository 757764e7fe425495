//! Comparing a policy with the reference policy that is optimal at infinity.
//!
//! A policy searched with `k1 >= 2` tests at its first step and `2i - 1` tests
//! afterwards is compared, step by step, with the reference policy whose gap
//! lengths solve the backward recursion exactly. With `u(n), v(n)` the step
//! accuracy and interval length of the policy and `x(n), y(n)` those of the
//! reference,
//!
//! * `mu(m, n) = (v(n)/y(n)) / (u(m)/x(m))`,
//! * `lambda(m, n) = (v(n)/y(n)) / (v(m)/y(m))`,
//! * `rho(m, n) = (u(n)/x(n)) / (u(m)/x(m))`.
//!
//! Index `0` holds the initial interval: `u(0) = v(0) = x(0) = b - a`.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::accuracy::{trace_basic, PositionChoice};
use crate::error::{Error, Result};
use crate::exactnum::{omega, QuadNum};
use crate::policies::{c_matrix, chi, PolicySpec};

fn qi(n: i64) -> QuadNum {
    QuadNum::from_integer(n)
}

/// Gap lengths of the reference policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTrace {
    pub i: u64,
    pub k1: u64,
    pub sigma: QuadNum,
    /// `x(n)` for `n = 0..=n_max`.
    pub x: Vec<QuadNum>,
    /// `y(n)` for `n = 0..=n_max`.
    pub y: Vec<QuadNum>,
}

impl ReferenceTrace {
    /// Checks `(x(n), y(n)) = c(k(n+1)) (x(n+1), y(n+1))` exactly on the stored range.
    pub fn satisfies_recursion(&self) -> Result<bool> {
        for n in 0..self.x.len() - 1 {
            let k = if n == 0 { self.k1 } else { 2 * self.i - 1 };
            let (x, y) = c_matrix(k)?.apply_quad(&self.x[n + 1], &self.y[n + 1]);
            if x != self.x[n] || y != self.y[n] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `x(n) = sigma omega^n`, `y(n) = sigma omega^(n-1) / i` for `n >= 1`, with
/// `sigma = len / (chi(k1) omega + floor((k1+1)/2) / i)`; `(x(0), y(0))`
/// follows from one application of `c(k1)`.
pub fn reference_trace(i: u64, interval_length: &QuadNum, k1: u64, n_max: usize) -> Result<ReferenceTrace> {
    if i < 2 {
        return Err(Error::domain("the reference policy needs i >= 2"));
    }
    if k1 < 2 {
        return Err(Error::domain("the first step needs at least two tests"));
    }
    if interval_length.sign() != Ordering::Greater {
        return Err(Error::domain("interval length must be positive"));
    }
    let w = omega(i)?;
    let ii = qi(i as i64);
    let sigma = interval_length / (qi(chi(k1) as i64) * &w + qi(k1.div_ceil(2) as i64) / &ii);
    let mut x = vec![QuadNum::zero(); n_max + 1];
    let mut y = x.clone();
    for n in 1..=n_max {
        x[n] = &sigma * w.pow(n as i32)?;
        y[n] = &sigma * w.pow(n as i32 - 1)? / &ii;
    }
    let (x1, y1) = if n_max >= 1 {
        (x[1].clone(), y[1].clone())
    } else {
        (&sigma * &w, &sigma / &ii)
    };
    let (x0, y0) = c_matrix(k1)?.apply_quad(&x1, &y1);
    x[0] = x0;
    y[0] = y0;
    Ok(ReferenceTrace { i, k1, sigma, x, y })
}

/// A policy trace next to the reference trace, with the ratio families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioTrack {
    pub i: u64,
    pub k1: u64,
    pub u: Vec<QuadNum>,
    pub v: Vec<QuadNum>,
    pub x: Vec<QuadNum>,
    pub y: Vec<QuadNum>,
    /// `u(n)/x(n)`.
    s: Vec<QuadNum>,
    /// `v(n)/y(n)`.
    r: Vec<QuadNum>,
}

impl RatioTrack {
    pub fn n_max(&self) -> usize {
        self.u.len() - 1
    }

    fn idx(&self, m: usize, n: usize) -> Result<()> {
        if m > self.n_max() || n > self.n_max() {
            return Err(Error::domain(format!(
                "index ({m}, {n}) beyond the tracked range 0..={}",
                self.n_max()
            )));
        }
        Ok(())
    }

    fn r(&self, n: usize) -> &QuadNum {
        &self.r[n]
    }

    fn s(&self, n: usize) -> &QuadNum {
        &self.s[n]
    }

    pub fn mu(&self, m: usize, n: usize) -> Result<QuadNum> {
        self.idx(m, n)?;
        Ok(self.r(n) / self.s(m))
    }

    pub fn lambda(&self, m: usize, n: usize) -> Result<QuadNum> {
        self.idx(m, n)?;
        Ok(self.r(n) / self.r(m))
    }

    pub fn rho(&self, m: usize, n: usize) -> Result<QuadNum> {
        self.idx(m, n)?;
        Ok(self.s(n) / self.s(m))
    }

    /// `v(n)/y(n)`, the interval-length ratio to the reference.
    pub fn big_delta_ratio(&self, n: usize) -> Result<QuadNum> {
        self.idx(n, n)?;
        Ok(self.r(n).clone())
    }

    /// `u(n)/x(n)`, the step-accuracy ratio to the reference.
    pub fn delta_ratio(&self, n: usize) -> Result<QuadNum> {
        self.idx(n, n)?;
        Ok(self.s(n).clone())
    }
}

/// Pairs a policy trace `(u, v)` with a reference trace over the same range.
pub fn ratio_trackers(u: Vec<QuadNum>, v: Vec<QuadNum>, reference: &ReferenceTrace) -> Result<RatioTrack> {
    let n = reference.x.len();
    if u.len() != n || v.len() != n {
        return Err(Error::domain(format!(
            "policy trace has {} / {} entries, reference has {n}",
            u.len(),
            v.len()
        )));
    }
    if u[0] != reference.x[0] {
        return Err(Error::domain("policy and reference start from different intervals"));
    }
    if u.iter().chain(&v).any(|t| t.sign() != Ordering::Greater) {
        return Err(Error::domain("trace lengths must be positive"));
    }
    let s = u.iter().zip(&reference.x).map(|(a, b)| a / b).collect();
    let r = v.iter().zip(&reference.y).map(|(a, b)| a / b).collect();
    Ok(RatioTrack {
        i: reference.i,
        k1: reference.k1,
        u,
        v,
        x: reference.x.clone(),
        y: reference.y.clone(),
        s,
        r,
    })
}

/// First gap of the basic policy on `[0, 1/i]` that continues `policy` after its first step.
pub fn tail_alpha1(policy: &PolicySpec) -> Result<(u64, QuadNum)> {
    match policy {
        PolicySpec::Basic { i, alpha1 } => Ok((*i, alpha1.clone())),
        PolicySpec::OddBlockW { i } | PolicySpec::OddBlockH { i } if *i >= 2 => Ok((*i, omega(*i)?.pow(2)?)),
        _ => Err(Error::domain(format!(
            "{policy} does not continue as a basic odd-block policy with i >= 2"
        ))),
    }
}

/// Ratio track of the basic policy with first gap `alpha1` on `[0, 1/i]`
/// (first step `2i` tests) against the reference policy.
pub fn basic_track(i: u64, alpha1: &QuadNum, n_max: usize) -> Result<RatioTrack> {
    let len = QuadNum::from_ratio(1, i as i64);
    let reference = reference_trace(i, &len, 2 * i, n_max)?;
    let tr = trace_basic(alpha1, i, n_max.max(1), &PositionChoice::Adversarial)?;
    let mut u = vec![len.clone()];
    let mut v = vec![len];
    for m in 1..=n_max {
        u.push(tr.delta(m).clone());
        v.push(tr.big_delta(m).clone());
    }
    ratio_trackers(u, v, &reference)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub triples: usize,
    pub failures: Vec<(usize, usize, usize)>,
}

impl CocycleReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the four multiplicative identities linking `mu`, `lambda` and `rho`
/// on every index triple of the track.
pub fn check_cocycles(track: &RatioTrack) -> Result<CocycleReport> {
    let n = track.n_max();
    let mut failures = Vec::new();
    let mut triples = 0;
    for m in 0..=n {
        for l in 0..=n {
            for k in 0..=n {
                triples += 1;
                let ok = track.lambda(m, l)? * track.lambda(l, k)? == track.lambda(m, k)?
                    && track.rho(m, l)? * track.rho(l, k)? == track.rho(m, k)?
                    && track.mu(m, l)? * track.lambda(l, k)? == track.mu(m, k)?
                    && track.rho(m, l)? * track.mu(l, k)? == track.mu(m, k)?;
                if !ok {
                    failures.push((m, l, k));
                }
            }
        }
    }
    Ok(CocycleReport { triples, failures })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub n: usize,
    pub claim: String,
    pub value: QuadNum,
    pub bound: QuadNum,
    pub holds: bool,
}

/// One-step lower bounds: with `2i` tests at step `n+1`, `lambda(n, n+1) >= 1`
/// and `mu(n, n+1) >= i/(i+1)`; with `2i - 1` tests, `lambda(n, n+1) >= i/(i+1)`
/// and `mu(n, n+1) >= 1`.
pub fn check_step_bounds(track: &RatioTrack) -> Result<Vec<BoundCheck>> {
    let i = track.i as i64;
    let low = QuadNum::from_ratio(i, i + 1);
    let mut out = Vec::new();
    for n in 0..track.n_max() {
        let k = if n == 0 { track.k1 } else { 2 * track.i - 1 };
        let (lb, mb) = if k == 2 * track.i {
            (qi(1), low.clone())
        } else if k == 2 * track.i - 1 {
            (low.clone(), qi(1))
        } else {
            continue;
        };
        let l = track.lambda(n, n + 1)?;
        let m = track.mu(n, n + 1)?;
        out.push(BoundCheck {
            n,
            claim: "lambda(n, n+1) lower bound".into(),
            holds: l >= lb,
            value: l,
            bound: lb,
        });
        out.push(BoundCheck {
            n,
            claim: "mu(n, n+1) lower bound".into(),
            holds: m >= mb,
            value: m,
            bound: mb,
        });
    }
    Ok(out)
}

/// Implications that fire when a one-step ratio drops below one:
/// `lambda(n,n+1) < 1` gives `1/mu(n+1,n) >= 1/lambda(n,n+1)` and
/// `lambda(n,n+2) >= 1/lambda(n,n+1)`; `mu(n,n+1) < 1` gives `rho(n,n+1) >= 1/mu(n,n+1)`.
pub fn check_implications(track: &RatioTrack) -> Result<Vec<BoundCheck>> {
    let one = qi(1);
    let mut out = Vec::new();
    for n in 0..track.n_max() {
        let l = track.lambda(n, n + 1)?;
        if l < one {
            let inv = l.recip()?;
            let lhs = track.mu(n + 1, n)?.recip()?;
            out.push(BoundCheck {
                n,
                claim: "1/mu(n+1, n) >= 1/lambda(n, n+1)".into(),
                holds: lhs >= inv,
                value: lhs,
                bound: inv.clone(),
            });
            if n + 2 <= track.n_max() {
                let l2 = track.lambda(n, n + 2)?;
                out.push(BoundCheck {
                    n,
                    claim: "lambda(n, n+2) >= 1/lambda(n, n+1)".into(),
                    holds: l2 >= inv && inv > one,
                    value: l2,
                    bound: inv,
                });
            }
        }
        let m = track.mu(n, n + 1)?;
        if m < one {
            let inv = m.recip()?;
            let r = track.rho(n, n + 1)?;
            out.push(BoundCheck {
                n,
                claim: "rho(n, n+1) >= 1/mu(n, n+1)".into(),
                holds: r >= inv,
                value: r,
                bound: inv,
            });
        }
    }
    Ok(out)
}

/// Where a factor of the product comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiSource {
    Mu {
        m: usize,
        n: usize,
    },
    Rho {
        m: usize,
        n: usize,
    },
    Lambda {
        m: usize,
        n: usize,
    },
    /// `lambda(m, m+2)` replacing a `lambda(m, m+1) < 1` and its successor.
    MergedLambda {
        m: usize,
        n: usize,
    },
}

impl PhiSource {
    /// Last index the factor depends on.
    pub fn end(&self) -> usize {
        match *self {
            PhiSource::Mu { n, .. }
            | PhiSource::Rho { n, .. }
            | PhiSource::Lambda { n, .. }
            | PhiSource::MergedLambda { n, .. } => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phi {
    pub value: QuadNum,
    pub source: PhiSource,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiSequence {
    pub phi: Vec<Phi>,
    /// A `lambda(n, n+1) < 1` at the end of the track whose merge partner is not tracked yet.
    pub pending_from: Option<usize>,
}

impl PhiSequence {
    pub fn product(&self) -> QuadNum {
        self.phi.iter().fold(qi(1), |acc, p| acc * &p.value)
    }

    /// Product of the factors that depend only on indices up to `n`.
    pub fn product_through(&self, n: usize) -> QuadNum {
        self.phi
            .iter()
            .filter(|p| p.source.end() <= n)
            .fold(qi(1), |acc, p| acc * &p.value)
    }

    /// Whether `n` sits strictly inside a merged pair, between `rho(0,1)` and
    /// the seed that follows it, or after a pending drop.
    pub fn splits_merge(&self, n: usize) -> bool {
        self.phi.iter().any(|p| match p.source {
            PhiSource::MergedLambda { m, .. } => n == m + 1,
            PhiSource::Rho { .. } => n == 1,
            _ => false,
        }) || self.pending_from.is_some_and(|m| n > m)
    }
}

/// Builds the factors `phi(j)` whose product bounds the limiting
/// interval-length ratio from below.
///
/// A seed comes first: `mu(0,1)` if it exceeds one; for an even first step
/// with `mu(0,1) < 1`, `rho(0,1)` and then `mu(1,2)` in its place. The
/// one-step ratios `lambda(n, n+1)` follow, dropping those equal to one and
/// replacing a ratio below one together with its successor by `lambda(n, n+2)`.
pub fn phi_construction(track: &RatioTrack) -> Result<PhiSequence> {
    let n_max = track.n_max();
    if n_max < 1 {
        return Err(Error::domain("the track needs at least one step"));
    }
    let one = qi(1);
    let mut phi = Vec::new();
    let mut start = 0;
    let mu01 = track.mu(0, 1)?;
    if mu01 < one {
        if track.k1 % 2 == 1 {
            return Err(Error::Precondition(format!(
                "mu(0,1) = {mu01} < 1 cannot occur with an odd first step"
            )));
        }
        if n_max < 2 {
            return Err(Error::domain("the track is too short to seed the product"));
        }
        phi.push(Phi {
            value: track.rho(0, 1)?,
            source: PhiSource::Rho { m: 0, n: 1 },
        });
        start = 1;
    }
    let seed = track.mu(start, start + 1)?;
    match seed.quad_cmp(&one)? {
        Ordering::Greater => phi.push(Phi {
            value: seed,
            source: PhiSource::Mu { m: start, n: start + 1 },
        }),
        Ordering::Equal => {}
        Ordering::Less => {
            return Err(Error::Precondition(format!(
                "mu({start},{}) = {seed} < 1 after the seed",
                start + 1
            )))
        }
    }
    let mut n = start + 1;
    let mut pending_from = None;
    while n < n_max {
        let l = track.lambda(n, n + 1)?;
        match l.quad_cmp(&one)? {
            Ordering::Greater => {
                phi.push(Phi {
                    value: l,
                    source: PhiSource::Lambda { m: n, n: n + 1 },
                });
                n += 1;
            }
            Ordering::Equal => n += 1,
            Ordering::Less => {
                if n + 2 > n_max {
                    pending_from = Some(n);
                    break;
                }
                phi.push(Phi {
                    value: track.lambda(n, n + 2)?,
                    source: PhiSource::MergedLambda { m: n, n: n + 2 },
                });
                n += 2;
            }
        }
    }
    Ok(PhiSequence { phi, pending_from })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    pub delta_ratio: QuadNum,
    #[serde(rename = "Delta_ratio")]
    pub big_delta_ratio: QuadNum,
    /// Product of the factors settled by step `n`.
    pub product_so_far: QuadNum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    #[serde(flatten)]
    pub phi: PhiSequence,
    pub product_lower_bound: QuadNum,
    pub ratios: Vec<RatioRow>,
    /// At every tracked `n >= 1` outside a merged pair the interval-length
    /// ratio equals the product settled so far, and every factor exceeds one.
    pub respects_bound: bool,
    /// Last step included in the comparison.
    pub tracked_through: usize,
    /// Why tracking stopped before the requested horizon.
    pub stopped: Option<String>,
}

/// Tracks `policy`'s continuation after its first step against the reference
/// policy for up to `n_max` steps.
///
/// A basic policy whose retained point lands exactly on a breakpoint has no
/// valid partition at the next step; this happens after finitely many steps
/// for every rational `alpha1`. The comparison then covers the feasible
/// prefix and `stopped` records the reason.
pub fn limit_ratio_check(policy: &PolicySpec, n_max: usize) -> Result<LimitReport> {
    let (i, alpha1) = tail_alpha1(policy)?;
    let mut n = n_max;
    let mut stopped = None;
    let track = loop {
        match basic_track(i, &alpha1, n) {
            Ok(t) => break t,
            Err(e @ (Error::Boundary { .. } | Error::Precondition(_) | Error::InfeasiblePartition(_))) if n > 1 => {
                stopped = Some(format!("step {}: {e}", n));
                n -= 1;
            }
            Err(e) => return Err(e),
        }
    };
    let mut rep = limit_report(&track)?;
    rep.stopped = stopped;
    Ok(rep)
}

/// [`limit_ratio_check`] on a given track.
pub fn limit_report(track: &RatioTrack) -> Result<LimitReport> {
    let phi = phi_construction(track)?;
    let one = qi(1);
    let mut respects = phi.phi.iter().all(|p| p.value > one);
    let mut ratios = Vec::new();
    for n in 1..=track.n_max() {
        let big = track.big_delta_ratio(n)?;
        let so_far = phi.product_through(n);
        if !phi.splits_merge(n) {
            respects &= big == so_far;
        }
        ratios.push(RatioRow {
            n,
            delta_ratio: track.delta_ratio(n)?,
            big_delta_ratio: big,
            product_so_far: so_far,
        });
    }
    Ok(LimitReport {
        product_lower_bound: phi.product(),
        phi,
        ratios,
        respects_bound: respects,
        tracked_through: track.n_max(),
        stopped: None,
    })
}
