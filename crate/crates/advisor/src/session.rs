//! Advisor sessions over an exact search state.

use std::time::{SystemTime, UNIX_EPOCH};

use blocksearch::runtime::POINT_MATCH_TOL;
use blocksearch::{ExactState, PolicySpec, QuadNum};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::events::EventKind;

/// A number carried both as an exact string and as the nearest `f64`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Num {
    pub exact: String,
    pub float: f64,
}

impl From<&QuadNum> for Num {
    fn from(q: &QuadNum) -> Self {
        Num {
            exact: q.to_string(),
            float: q.to_f64(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Programmatic,
    #[default]
    Interactive,
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("unknown session {0}")]
    NotFound(String),
    #[error("stale submission: {0}")]
    Stale(String),
    #[error("malformed request: {0}")]
    Malformed(String),
    #[error(transparent)]
    Search(#[from] blocksearch::Error),
    #[error("event log: {0}")]
    Log(String),
}

pub(crate) fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// One advisor session: the exact search state plus bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct Session {
    pub id: Uuid,
    pub mode: Mode,
    pub horizon: Option<usize>,
    pub created_ms: u64,
    pub updated_ms: u64,
    pub state: ExactState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: Num,
    pub b: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tested {
    pub point: Num,
    pub value: f64,
    pub step: usize,
}

/// JSON view of a session, as served to clients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: Uuid,
    pub mode: Mode,
    pub policy: PolicySpec,
    pub horizon: Option<usize>,
    pub step: usize,
    pub finished: bool,
    pub interval: Interval,
    pub retained: Option<Tested>,
    pub pending: Vec<Num>,
    pub history: Vec<Tested>,
    pub estimate: Num,
    pub bound: Num,
    pub created_ms: u64,
    pub updated_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhatIf {
    pub cell: usize,
    pub cells: usize,
    pub interval: Interval,
    pub retained: Option<Num>,
}

/// A measured value, with the point it belongs to when the client names it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub point: f64,
    pub value: f64,
}

/// Body of a result submission: either `values` in the order of the pending
/// points or `results` naming each point. `step`, when given, must equal the
/// session's current step.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Submission {
    #[serde(default)]
    pub step: Option<usize>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub results: Option<Vec<Measurement>>,
}

impl Session {
    pub fn new(
        id: Uuid,
        policy: PolicySpec,
        a: QuadNum,
        b: QuadNum,
        horizon: Option<usize>,
        mode: Mode,
        ts: u64,
    ) -> Result<Self, SessionError> {
        if matches!(horizon, Some(0)) {
            return Err(SessionError::Malformed("horizon must be at least 1".into()));
        }
        let mut state = ExactState::new(policy, a, b)?;
        if let Some(h) = horizon {
            state = state.with_step_limit(h);
        }
        Ok(Session {
            id,
            mode,
            horizon,
            created_ms: ts,
            updated_ms: ts,
            state,
        })
    }

    pub fn view(&self) -> SessionView {
        let s = &self.state;
        let (a, b) = s.interval();
        SessionView {
            id: self.id,
            mode: self.mode,
            policy: s.policy().clone(),
            horizon: self.horizon,
            step: s.step(),
            finished: s.is_finished(),
            interval: Interval {
                a: a.into(),
                b: b.into(),
            },
            retained: s.retained().map(|(p, v)| Tested {
                point: p.into(),
                value: v,
                step: s.history().iter().find(|e| e.point == *p).map_or(0, |e| e.step),
            }),
            pending: s.next_tests().iter().map(Num::from).collect(),
            history: s
                .history()
                .iter()
                .map(|e| Tested {
                    point: (&e.point).into(),
                    value: e.value,
                    step: e.step,
                })
                .collect(),
            estimate: (&s.estimate()).into(),
            bound: (&s.bound()).into(),
            created_ms: self.created_ms,
            updated_ms: self.updated_ms,
        }
    }

    pub fn what_if(&self, cell: usize) -> Result<WhatIf, SessionError> {
        let o = self.state.what_if(cell)?;
        Ok(WhatIf {
            cell,
            cells: self.state.step_points().len(),
            interval: Interval {
                a: (&o.a).into(),
                b: (&o.b).into(),
            },
            retained: o.retained.as_ref().map(Num::from),
        })
    }

    /// Resolves a submission to values in pending order without touching the state.
    pub fn resolve(&self, sub: &Submission) -> Result<Vec<f64>, SessionError> {
        let s = &self.state;
        if let Some(step) = sub.step {
            if step != s.step() {
                return Err(SessionError::Stale(format!(
                    "submission for step {step}, session is at step {}",
                    s.step()
                )));
            }
        }
        if s.is_finished() {
            return Err(SessionError::Stale("the session is finished".into()));
        }
        match (&sub.values, &sub.results) {
            (Some(v), None) => {
                if v.len() != s.next_tests().len() {
                    return Err(blocksearch::Error::ValueMismatch(format!(
                        "expected {} values, got {}",
                        s.next_tests().len(),
                        v.len()
                    ))
                    .into());
                }
                Ok(v.clone())
            }
            (None, Some(r)) => {
                let (a, b) = s.interval();
                let scale = (b.to_f64() - a.to_f64()).abs();
                for m in r {
                    let pending = s
                        .next_tests()
                        .iter()
                        .any(|p| (p.to_f64() - m.point).abs() <= POINT_MATCH_TOL * scale.max(m.point.abs()));
                    if !pending {
                        return Err(SessionError::Stale(format!("{} is not a pending test point", m.point)));
                    }
                }
                let pairs: Vec<(f64, f64)> = r.iter().map(|m| (m.point, m.value)).collect();
                Ok(s.match_points(&pairs)?)
            }
            _ => Err(SessionError::Malformed(
                "give exactly one of `values` or `results`".into(),
            )),
        }
    }

    /// State after applying `values`, with the events that record the step.
    pub fn advance(&self, values: &[f64], ts: u64) -> Result<(Session, Vec<EventKind>), SessionError> {
        let step = self.state.step() + 1;
        let state = self.state.eliminate(values)?;
        let (a, b) = state.interval();
        let mut events = vec![
            EventKind::Submitted {
                step,
                values: values.to_vec(),
            },
            EventKind::Eliminated {
                step,
                a: a.clone(),
                b: b.clone(),
                retained: state.retained().map(|(p, _)| p.clone()),
                finished: state.is_finished(),
            },
        ];
        if !state.is_finished() {
            events.push(EventKind::Suggested {
                step: step + 1,
                points: state.next_tests().to_vec(),
            });
        }
        let next = Session {
            state,
            updated_ms: ts,
            ..self.clone()
        };
        Ok((next, events))
    }
}
