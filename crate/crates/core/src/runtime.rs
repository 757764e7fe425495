//! Running a policy against a function.
//!
//! [`SearchState`] is an immutable value: [`SearchState::eliminate`] consumes
//! the measured values of the pending tests and returns the next state. Test
//! positions are carried in the scalar type `T`; measured values are `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policies::{next_tests, PolicySpec, StepContext};
use crate::scalar::Scalar;

/// Relative tolerance for matching user-supplied test positions to pending ones.
pub const POINT_MATCH_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation<T> {
    pub point: T,
    pub value: f64,
    /// Step (1-based) at which the point was tested.
    pub step: usize,
}

/// Interval left by one outcome of a step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome<T> {
    pub a: T,
    pub b: T,
    /// Best tested point, if it lies inside the interval.
    pub retained: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchState<T> {
    policy: PolicySpec,
    ctx: StepContext<T>,
    retained_value: Option<f64>,
    step: usize,
    step_limit: Option<usize>,
    history: Vec<Evaluation<T>>,
    pending: Vec<T>,
    finished: bool,
}

impl<T: Scalar> SearchState<T> {
    /// A fresh search of `[a, b]`, with the first tests already placed.
    pub fn new(policy: PolicySpec, a: T, b: T) -> Result<Self> {
        policy.validate()?;
        if !(a < b) {
            return Err(Error::domain(format!("empty interval [{a}, {b}]")));
        }
        let ctx = StepContext::initial(&policy, a, b);
        let pending = next_tests(&policy, &ctx)?;
        Ok(SearchState {
            policy,
            ctx,
            retained_value: None,
            step: 0,
            step_limit: None,
            history: Vec::new(),
            pending,
            finished: false,
        })
    }

    /// Stops the search after `limit` steps, for policies without a fixed horizon.
    pub fn with_step_limit(mut self, limit: usize) -> Self {
        self.step_limit = Some(limit);
        if self.step >= limit {
            self.finish();
        }
        self
    }

    fn finish(&mut self) {
        self.finished = true;
        self.pending.clear();
    }

    pub fn policy(&self) -> &PolicySpec {
        &self.policy
    }

    pub fn interval(&self) -> (&T, &T) {
        (&self.ctx.a, &self.ctx.b)
    }

    pub fn retained(&self) -> Option<(&T, f64)> {
        self.ctx.retained.as_ref().zip(self.retained_value)
    }

    /// Completed steps.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn history(&self) -> &[Evaluation<T>] {
        &self.history
    }

    pub fn context(&self) -> &StepContext<T> {
        &self.ctx
    }

    /// Tests awaiting values, in increasing order.
    pub fn next_tests(&self) -> &[T] {
        &self.pending
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Best tested point inside the current interval, with its value.
    pub fn best(&self) -> Option<(&T, f64)> {
        if let Some(r) = self.retained() {
            return Some(r);
        }
        let (a, b) = self.interval();
        self.history
            .iter()
            .filter(|e| e.point >= *a && e.point <= *b)
            .max_by(|x, y| x.value.total_cmp(&y.value))
            .map(|e| (&e.point, e.value))
    }

    /// Current estimate of the maximizer: the best tested point, or the
    /// midpoint before anything was tested.
    pub fn estimate(&self) -> T {
        match self.best() {
            Some((p, _)) => p.clone(),
            None => (self.ctx.a.clone() + self.ctx.b.clone()) / T::from_int(2),
        }
    }

    /// Guaranteed distance between the estimate and the maximizer.
    pub fn bound(&self) -> T {
        let e = self.estimate();
        let left = e.clone() - self.ctx.a.clone();
        let right = self.ctx.b.clone() - e;
        if left > right {
            left
        } else {
            right
        }
    }

    /// Points of the current step in increasing order: pending tests plus the retained point.
    pub fn step_points(&self) -> Vec<T> {
        let mut pts: Vec<T> = self.pending.clone();
        if let Some(c) = &self.ctx.retained {
            pts.push(c.clone());
        }
        pts.sort_by(|x, y| x.partial_cmp(y).expect("comparable points"));
        pts
    }

    /// Interval that results if the `cell`-th point of [`Self::step_points`]
    /// turns out best. Does not change the state.
    pub fn what_if(&self, cell: usize) -> Result<Outcome<T>> {
        if self.finished {
            return Err(Error::Finished);
        }
        let pts = self.step_points();
        if cell >= pts.len() {
            return Err(Error::domain(format!("cell {cell} out of range 0..{}", pts.len())));
        }
        Ok(self.outcome_at(&pts, cell))
    }

    fn outcome_at(&self, pts: &[T], k: usize) -> Outcome<T> {
        Outcome {
            a: if k == 0 { self.ctx.a.clone() } else { pts[k - 1].clone() },
            b: if k + 1 == pts.len() {
                self.ctx.b.clone()
            } else {
                pts[k + 1].clone()
            },
            retained: Some(pts[k].clone()),
        }
    }

    /// Applies measured values for the pending tests, given in the order of
    /// [`Self::next_tests`]. A finished state is returned unchanged when no
    /// values are given.
    pub fn eliminate(&self, values: &[f64]) -> Result<Self> {
        if self.finished {
            return if values.is_empty() {
                Ok(self.clone())
            } else {
                Err(Error::Finished)
            };
        }
        if values.len() != self.pending.len() {
            return Err(Error::ValueMismatch(format!(
                "expected {} values, got {}",
                self.pending.len(),
                values.len()
            )));
        }
        for (p, v) in self.pending.iter().zip(values) {
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    point: p.to_string(),
                    reason: format!("non-finite value {v}"),
                });
            }
        }
        let mut tested: Vec<(T, f64)> = self.pending.iter().cloned().zip(values.iter().copied()).collect();
        if let Some((c, v)) = self.retained() {
            tested.push((c.clone(), v));
        }
        tested.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("comparable points"));
        let max = tested.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let top: Vec<usize> = (0..tested.len()).filter(|&k| tested[k].1 == max).collect();
        let pts: Vec<T> = tested.iter().map(|t| t.0.clone()).collect();
        let (ctx, retained_value) = match top.as_slice() {
            [k] => {
                let o = self.outcome_at(&pts, *k);
                (self.ctx.advance(o.a, o.b, o.retained), Some(tested[*k].1))
            }
            [k, l] if *l == k + 1 => (self.ctx.advance(pts[*k].clone(), pts[*l].clone(), None), None),
            _ => {
                return Err(Error::NotUnimodal(format!(
                    "the largest value {max} is attained at non-adjacent points"
                )))
            }
        };
        let mut next = self.clone();
        let step = self.step + 1;
        next.history
            .extend(self.pending.iter().zip(values).map(|(p, v)| Evaluation {
                point: p.clone(),
                value: *v,
                step,
            }));
        next.ctx = ctx;
        next.retained_value = retained_value;
        next.step = step;
        let exhausted = self.policy.horizon().is_some_and(|h| step >= h) || self.step_limit.is_some_and(|l| step >= l);
        if exhausted {
            next.finish();
        } else {
            next.pending = next_tests(&self.policy, &next.ctx)?;
        }
        Ok(next)
    }

    /// Like [`Self::eliminate`], but values come paired with their points in
    /// any order; points are matched to pending tests within a relative
    /// tolerance of [`POINT_MATCH_TOL`].
    pub fn eliminate_points(&self, pairs: &[(f64, f64)]) -> Result<Self> {
        if self.finished {
            return if pairs.is_empty() {
                Ok(self.clone())
            } else {
                Err(Error::Finished)
            };
        }
        self.eliminate(&self.match_points(pairs)?)
    }

    /// Orders `(point, value)` pairs like [`Self::next_tests`], matching
    /// points within a relative tolerance of [`POINT_MATCH_TOL`].
    pub fn match_points(&self, pairs: &[(f64, f64)]) -> Result<Vec<f64>> {
        let scale = (self.ctx.b.to_f64() - self.ctx.a.to_f64()).abs().max(f64::MIN_POSITIVE);
        let mut values = vec![None; self.pending.len()];
        for &(x, v) in pairs {
            let hit = self
                .pending
                .iter()
                .position(|p| (p.to_f64() - x).abs() <= POINT_MATCH_TOL * scale.max(x.abs()))
                .ok_or_else(|| Error::ValueMismatch(format!("{x} is not a pending test point")))?;
            if values[hit].replace(v).is_some() {
                return Err(Error::ValueMismatch(format!("two values given for {x}")));
            }
        }
        values
            .into_iter()
            .zip(&self.pending)
            .map(|(v, p)| v.ok_or_else(|| Error::ValueMismatch(format!("no value for {p}"))))
            .collect()
    }
}

/// When [`run_search`] stops.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    Steps(usize),
    /// Stop once the guaranteed error is at most `tol`, or after `max_steps`.
    Tolerance {
        tol: f64,
        max_steps: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome<T> {
    pub estimate: T,
    pub bound: T,
    pub interval: (T, T),
    pub steps: usize,
    /// Interval after each completed step.
    pub trajectory: Vec<(T, T)>,
    pub history: Vec<Evaluation<T>>,
}

/// Runs `policy` on `[a, b]` with positions carried in `T`.
pub fn run_search_in<T: Scalar, F: FnMut(f64) -> f64>(
    mut f: F,
    policy: &PolicySpec,
    a: T,
    b: T,
    stop: Stop,
) -> Result<SearchOutcome<T>> {
    let max_steps = match stop {
        Stop::Steps(n) => n,
        Stop::Tolerance { max_steps, .. } => max_steps,
    };
    let mut state = SearchState::new(policy.clone(), a, b)?.with_step_limit(max_steps);
    let mut trajectory = Vec::new();
    while !state.is_finished() {
        if let Stop::Tolerance { tol, .. } = stop {
            if state.step() > 0 && state.bound().to_f64() <= tol {
                break;
            }
        }
        let mut values = Vec::with_capacity(state.next_tests().len());
        for p in state.next_tests() {
            let x = p.to_f64();
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    point: x.to_string(),
                    reason: format!("function returned {v}"),
                });
            }
            values.push(v);
        }
        state = state.eliminate(&values)?;
        let (lo, hi) = state.interval();
        trajectory.push((lo.clone(), hi.clone()));
    }
    let (lo, hi) = state.interval();
    Ok(SearchOutcome {
        estimate: state.estimate(),
        bound: state.bound(),
        interval: (lo.clone(), hi.clone()),
        steps: state.step(),
        trajectory,
        history: state.history().to_vec(),
    })
}

/// Runs `policy` on `[a, b]` in `f64`.
pub fn run_search<F: FnMut(f64) -> f64>(
    f: F,
    policy: &PolicySpec,
    a: f64,
    b: f64,
    stop: Stop,
) -> Result<SearchOutcome<f64>> {
    run_search_in(f, policy, a, b, stop)
}
