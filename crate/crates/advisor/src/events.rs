//! Append-only JSONL event log, one file per session.
//!
//! Each line is `{"type": ..., "ts": ..., payload}`. Replaying a log re-runs
//! every submitted step on the exact state and checks that the recorded
//! eliminations and suggestions come out identical.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use blocksearch::{PolicySpec, QuadNum};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::session::{Mode, Session, SessionError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventKind {
    Created {
        id: Uuid,
        policy: PolicySpec,
        a: QuadNum,
        b: QuadNum,
        horizon: Option<usize>,
        mode: Mode,
    },
    Suggested {
        step: usize,
        points: Vec<QuadNum>,
    },
    Submitted {
        step: usize,
        values: Vec<f64>,
    },
    Eliminated {
        step: usize,
        a: QuadNum,
        b: QuadNum,
        retained: Option<QuadNum>,
        finished: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub ts: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

/// Events that open a session: its creation and the first suggestion.
pub fn opening_events(s: &Session) -> Vec<EventKind> {
    let (a, b) = s.state.interval();
    let mut out = vec![EventKind::Created {
        id: s.id,
        policy: s.state.policy().clone(),
        a: a.clone(),
        b: b.clone(),
        horizon: s.horizon,
        mode: s.mode,
    }];
    if !s.state.is_finished() {
        out.push(EventKind::Suggested {
            step: s.state.step() + 1,
            points: s.state.next_tests().to_vec(),
        });
    }
    out
}

/// Directory of session logs, named `<id>.jsonl`.
#[derive(Clone, Debug)]
pub struct EventLog {
    dir: PathBuf,
}

impl EventLog {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, SessionError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| SessionError::Log(format!("{}: {e}", dir.display())))?;
        Ok(EventLog { dir })
    }

    pub fn path(&self, id: Uuid) -> PathBuf {
        self.dir.join(format!("{id}.jsonl"))
    }

    /// Appends `events` in a single write and syncs the file.
    pub fn append(&self, id: Uuid, ts: u64, events: &[EventKind]) -> Result<(), SessionError> {
        let mut buf = Vec::new();
        for kind in events {
            let ev = Event { ts, kind: kind.clone() };
            serde_json::to_writer(&mut buf, &ev).map_err(|e| SessionError::Log(e.to_string()))?;
            buf.push(b'\n');
        }
        let path = self.path(id);
        let io = |e: std::io::Error| SessionError::Log(format!("{}: {e}", path.display()));
        let mut f = OpenOptions::new().create(true).append(true).open(&path).map_err(io)?;
        f.write_all(&buf).map_err(io)?;
        f.sync_data().map_err(io)
    }

    /// Replays every `*.jsonl` file in the directory.
    pub fn load_all(&self) -> Result<Vec<Session>, SessionError> {
        let entries = fs::read_dir(&self.dir).map_err(|e| SessionError::Log(e.to_string()))?;
        let mut out = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| SessionError::Log(e.to_string()))?.path();
            if path.extension().is_some_and(|x| x == "jsonl") {
                out.push(replay_file(&path)?);
            }
        }
        out.sort_by_key(|s| (s.created_ms, s.id));
        Ok(out)
    }
}

pub fn replay_file(path: &Path) -> Result<Session, SessionError> {
    let f = File::open(path).map_err(|e| SessionError::Log(format!("{}: {e}", path.display())))?;
    let mut lines = Vec::new();
    for line in BufReader::new(f).lines() {
        lines.push(line.map_err(|e| SessionError::Log(e.to_string()))?);
    }
    replay_lines(&lines).map_err(|e| match e {
        SessionError::Log(m) => SessionError::Log(format!("{}: {m}", path.display())),
        e => e,
    })
}

/// Rebuilds a session from log lines. A final line that does not parse is
/// taken as a write cut short by a crash and ignored.
pub fn replay_lines<S: AsRef<str>>(lines: &[S]) -> Result<Session, SessionError> {
    let mut events = Vec::new();
    let nonempty: Vec<&str> = lines
        .iter()
        .map(|l| l.as_ref())
        .filter(|l| !l.trim().is_empty())
        .collect();
    for (k, line) in nonempty.iter().enumerate() {
        match serde_json::from_str::<Event>(line) {
            Ok(ev) => events.push(ev),
            Err(_) if k + 1 == nonempty.len() => break,
            Err(e) => return Err(SessionError::Log(format!("line {}: {e}", k + 1))),
        }
    }
    replay(&events)
}

pub fn replay(events: &[Event]) -> Result<Session, SessionError> {
    let mut it = events.iter();
    let mut session = match it.next() {
        Some(Event {
            ts,
            kind:
                EventKind::Created {
                    id,
                    policy,
                    a,
                    b,
                    horizon,
                    mode,
                },
        }) => Session::new(*id, policy.clone(), a.clone(), b.clone(), *horizon, *mode, *ts)?,
        _ => return Err(SessionError::Log("log does not start with a created event".into())),
    };
    // events the next recorded lines must reproduce
    let mut expected: Vec<EventKind> = opening_events(&session)[1..].to_vec();
    for ev in it {
        match &ev.kind {
            EventKind::Created { .. } => return Err(SessionError::Log("second created event".into())),
            EventKind::Submitted { values, .. } => {
                if !expected.is_empty() {
                    return Err(SessionError::Log(
                        "submission before the previous step was recorded".into(),
                    ));
                }
                let (next, mut produced) = session.advance(values, ev.ts)?;
                if produced[0] != ev.kind {
                    return Err(SessionError::Log(format!("submission out of order: {:?}", ev.kind)));
                }
                produced.remove(0);
                session = next;
                expected = produced;
            }
            kind => {
                if expected.is_empty() {
                    return Err(SessionError::Log(format!("unexpected event {kind:?}")));
                }
                let want = expected.remove(0);
                if want != *kind {
                    return Err(SessionError::Log(format!("replay produced {want:?}, log has {kind:?}")));
                }
                session.updated_ms = ev.ts;
            }
        }
    }
    Ok(session)
}
