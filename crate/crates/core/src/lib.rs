//! Block search for the maximum of a unimodal function.
//!
//! The crate covers three layers:
//!
//! * exact arithmetic in `Q(sqrt(d))` ([`exactnum`]) and the integer sequences
//!   that govern block search ([`sequences`]);
//! * search policies as exact test-point generators ([`policies`]) with exact
//!   accuracy analysis ([`accuracy`], [`asymptotics`]) and a brute-force
//!   minimax cross-check ([`oracle`]);
//! * a runtime that drives any policy against a real function ([`runtime`]).
//!
//! Geometry is generic over [`Scalar`], so the same policy runs in `f32`,
//! `f64`, `BigRational` or [`QuadNum`].

// `!(a < b)` also rejects NaN in float scalars
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accuracy;
pub mod asymptotics;
pub mod error;
pub mod exactnum;
pub mod oracle;
pub mod policies;
pub mod runtime;
pub mod scalar;
pub mod sequences;

pub use error::{Error, Result};
pub use exactnum::{omega, FloatApprox, QuadNum};
pub use policies::PolicySpec;
pub use runtime::{run_search, SearchState, Stop};
pub use scalar::Scalar;

/// Exact element of `Q(sqrt(d))`.
pub type Exact = QuadNum;
/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Search state with exact test positions.
pub type ExactState = SearchState<QuadNum>;
/// Search state with `f64` test positions.
pub type FloatState = SearchState<f64>;
/// Search state with `f32` test positions.
pub type Float32State = SearchState<f32>;
