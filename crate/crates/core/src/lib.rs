//! Exact verification engine for two families of summation identities that
//! tie weighted binomial sums of generalized harmonic numbers to closed
//! forms derived from the balanced terminating 3F2 summation.
//!
//! The crate is organized around five pieces:
//!
//! * [`rational`] — arbitrary-precision exact rationals, the only scalar;
//! * [`special`] — shifted factorials, generalized binomials, generalized
//!   harmonic numbers, terminating hypergeometric sums;
//! * [`jet`] — truncated Taylor expansions with exact coefficients, used to
//!   certify derivative relations and to extract limits by prefix-cancelling
//!   division;
//! * [`registry`] — the declarative catalogue of identities (`S0`–`S5`,
//!   `P1`–`P4`, `T1`–`T10`, `C1`–`C10`, `D1`, `D2`, `L1`);
//! * [`sweep`] — seeded randomized and exhaustive verification harnesses
//!   with JSON/CSV/text reports.

pub mod formulas;
pub mod jet;
pub mod rational;
pub mod registry;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod sweep;

pub use rational::Rational;
pub use registry::{evaluate_identity, Registry, Verdict};
pub use report::VerificationReport;
pub use scalar::{EvalOutcome, Pole, Scalar};
pub use sweep::{run_default_suite, sweep, SweepConfig};
