//! Brute-force worst case of a policy.
//!
//! For a basic policy the interval left after a step depends only on which
//! tested point is best, so the adversary's moves form a finite tree: at each
//! step it picks one of the sorted points of the step. The worst-case accuracy
//! after `n` steps is the maximum over all leaves of the distance from the
//! final best point to the farther end of the final interval.

use std::collections::HashMap;

use num_traits::{One, Zero};
use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::QuadNum;
use crate::policies::{step_layout, PolicySpec, StepContext};

/// Default bound on the number of leaves explored.
pub const DEFAULT_BRANCH_CAP: usize = 1_000_000;

/// Adversary choices: the index of the best point among the sorted points of each step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomeBranch {
    pub choices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub value: QuadNum,
    pub branch: OutcomeBranch,
    pub leaves: usize,
}

/// One step along a branch, in exact arithmetic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchStep {
    /// All points of the step in increasing order, the retained one included.
    pub points: Vec<QuadNum>,
    /// Points tested for the first time at this step.
    pub new_points: Vec<QuadNum>,
    pub chosen: usize,
    /// Interval after the step.
    pub a: QuadNum,
    pub b: QuadNum,
}

fn spread(a: &QuadNum, b: &QuadNum, c: &QuadNum) -> Result<QuadNum> {
    QuadNum::max_of(&(c - a), &(b - c))
}

struct Search<'a> {
    policy: &'a PolicySpec,
    n: usize,
    cap: usize,
    leaves: usize,
}

impl Search<'_> {
    fn explore(
        &mut self,
        ctx: &StepContext<QuadNum>,
        done: usize,
        path: &mut Vec<usize>,
    ) -> Result<(QuadNum, Vec<usize>)> {
        let layout = step_layout(self.policy, ctx)?;
        let pts = &layout.points;
        let mut best: Option<(QuadNum, Vec<usize>)> = None;
        for k in 0..pts.len() {
            let a = if k == 0 { ctx.a.clone() } else { pts[k - 1].clone() };
            let b = if k + 1 == pts.len() {
                ctx.b.clone()
            } else {
                pts[k + 1].clone()
            };
            path.push(k);
            let cand = if done + 1 == self.n {
                self.leaves += 1;
                if self.leaves > self.cap {
                    return Err(Error::BranchCapExceeded { cap: self.cap });
                }
                (spread(&a, &b, &pts[k])?, path.clone())
            } else {
                let next = ctx.advance(a, b, Some(pts[k].clone()));
                self.explore(&next, done + 1, path)?
            };
            path.pop();
            let better = match &best {
                None => true,
                Some((v, _)) => cand.0.quad_cmp(v)?.is_gt(),
            };
            if better {
                best = Some(cand);
            }
        }
        best.ok_or_else(|| Error::PolicyStateMismatch("a step with no points".into()))
    }
}

/// Exhaustive worst case of `policy` after `n` steps on `[0, 1]`.
pub fn worst_case(policy: &PolicySpec, n: usize, cap: usize) -> Result<WorstCase> {
    policy.validate()?;
    if n < 1 {
        return Err(Error::domain("the oracle needs at least one step"));
    }
    if let Some(h) = policy.horizon() {
        if n > h {
            return Err(Error::HorizonExhausted { horizon: h });
        }
    }
    let ctx = StepContext::initial(policy, QuadNum::zero(), QuadNum::one());
    let mut s = Search {
        policy,
        n,
        cap,
        leaves: 0,
    };
    let (value, choices) = s.explore(&ctx, 0, &mut Vec::new())?;
    Ok(WorstCase {
        value,
        branch: OutcomeBranch { choices },
        leaves: s.leaves,
    })
}

/// [`worst_case`] value with the default branch cap.
pub fn worst_case_accuracy(policy: &PolicySpec, n: usize) -> Result<QuadNum> {
    worst_case(policy, n, DEFAULT_BRANCH_CAP).map(|w| w.value)
}

/// Replays `branch` through the exact policy geometry on `[0, 1]`.
pub fn branch_steps(policy: &PolicySpec, branch: &OutcomeBranch) -> Result<Vec<BranchStep>> {
    let mut ctx = StepContext::initial(policy, QuadNum::zero(), QuadNum::one());
    let mut out = Vec::with_capacity(branch.choices.len());
    for &k in &branch.choices {
        let layout = step_layout(policy, &ctx)?;
        let pts = layout.points.clone();
        if k >= pts.len() {
            return Err(Error::domain(format!("choice {k} out of range 0..{}", pts.len())));
        }
        let a = if k == 0 { ctx.a.clone() } else { pts[k - 1].clone() };
        let b = if k + 1 == pts.len() {
            ctx.b.clone()
        } else {
            pts[k + 1].clone()
        };
        out.push(BranchStep {
            new_points: layout.new_points(),
            points: pts.clone(),
            chosen: k,
            a: a.clone(),
            b: b.clone(),
        });
        ctx = ctx.advance(a, b, Some(pts[k].clone()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub x: QuadNum,
    pub y: f64,
}

/// Piecewise-linear strictly unimodal function on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub peak: QuadNum,
    /// Breakpoints in increasing `x`, from `0` to `1`.
    pub breakpoints: Vec<Breakpoint>,
}

impl Witness {
    pub fn eval(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        let xs: Vec<f64> = bp.iter().map(|p| p.x.to_f64()).collect();
        if x <= xs[0] {
            return bp[0].y;
        }
        for k in 1..bp.len() {
            if x <= xs[k] {
                let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
                return bp[k - 1].y + t * (bp[k].y - bp[k - 1].y);
            }
        }
        bp[bp.len() - 1].y
    }

    /// Values strictly rise up to the peak and strictly fall after it.
    pub fn is_strictly_unimodal(&self) -> bool {
        let k = match self.breakpoints.iter().position(|p| p.x == self.peak) {
            Some(k) => k,
            None => return false,
        };
        let ys: Vec<f64> = self.breakpoints.iter().map(|p| p.y).collect();
        ys[..=k].windows(2).all(|w| w[0] < w[1]) && ys[k..].windows(2).all(|w| w[0] > w[1])
    }
}

/// A function realizing `branch`: at every step the chosen point has the
/// largest value, and the maximizer sits just inside the farther end of the
/// final interval, so the final error equals the branch's leaf value up to
/// `1e-11` of the final interval length.
pub fn witness_function(policy: &PolicySpec, branch: &OutcomeBranch) -> Result<Witness> {
    let steps = branch_steps(policy, branch)?;
    let last = steps.last().ok_or_else(|| Error::domain("empty branch"))?;
    let c = last.points[last.chosen].clone();
    let eps = (&last.b - &last.a) / QuadNum::from_integer(100_000_000_000);
    let peak = if (&c - &last.a).quad_cmp(&(&last.b - &c))?.is_ge() {
        &last.a + &eps
    } else {
        &last.b - &eps
    };

    let mut tested: Vec<QuadNum> = Vec::new();
    for s in &steps {
        tested.extend(s.new_points.iter().cloned());
    }
    tested.sort_by(|x, y| x.partial_cmp(y).expect("same field"));
    tested.dedup();
    let index: HashMap<String, usize> = tested.iter().enumerate().map(|(k, p)| (p.to_string(), k)).collect();
    let node = |p: &QuadNum| index[&p.to_string()];

    // edge u -> v: f(u) < f(v)
    let mut g = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..tested.len()).map(|k| g.add_node(k)).collect();
    for w in tested.windows(2) {
        let (l, r) = (node(&w[0]), node(&w[1]));
        if w[1] < peak {
            g.add_edge(nodes[l], nodes[r], ());
        } else if w[0] > peak {
            g.add_edge(nodes[r], nodes[l], ());
        }
    }
    for s in &steps {
        let win = node(&s.points[s.chosen]);
        for (k, p) in s.points.iter().enumerate() {
            if k != s.chosen {
                g.add_edge(nodes[node(p)], nodes[win], ());
            }
        }
    }
    let order =
        toposort(&g, None).map_err(|_| Error::NotUnimodal("the branch's outcomes contradict each other".into()))?;
    let mut rank = vec![0.0; tested.len()];
    for (r, n) in order.iter().enumerate() {
        rank[g[*n]] = (r + 1) as f64;
    }
    let top = (tested.len() + 1) as f64;
    let mut breakpoints = vec![Breakpoint {
        x: QuadNum::zero(),
        y: 0.0,
    }];
    let mut placed_peak = false;
    for (k, p) in tested.iter().enumerate() {
        if !placed_peak && *p > peak {
            breakpoints.push(Breakpoint {
                x: peak.clone(),
                y: top,
            });
            placed_peak = true;
        }
        breakpoints.push(Breakpoint {
            x: p.clone(),
            y: rank[k],
        });
    }
    if !placed_peak {
        breakpoints.push(Breakpoint {
            x: peak.clone(),
            y: top,
        });
    }
    breakpoints.push(Breakpoint {
        x: QuadNum::one(),
        y: 0.0,
    });
    let w = Witness { peak, breakpoints };
    if !w.is_strictly_unimodal() {
        return Err(Error::NotUnimodal(
            "the branch cannot be realized by a unimodal function".into(),
        ));
    }
    Ok(w)
}
