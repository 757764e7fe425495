//! Experiment advisor: exact block-search sessions for people running
//! sequential experiments by hand.
//!
//! A session suggests the next test points, takes the measured values,
//! eliminates, and reports the guaranteed error bound. Every change is
//! appended to a per-session JSONL log ([`events`]) that replays to the
//! same exact state. [`http`] serves sessions as JSON, with every number
//! carried as both an exact string and a float.

pub mod events;
pub mod http;
pub mod session;

pub use events::{Event, EventKind, EventLog};
pub use http::{router, serve, AppState};
pub use session::{Measurement, Mode, Num, Session, SessionError, SessionView, Submission, WhatIf};
