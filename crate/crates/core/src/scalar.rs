//! The scalar abstraction shared by exact rationals and jets.
//!
//! Every identity evaluator in this crate is written once, generically over
//! [`Scalar`]. Instantiated with [`Rational`] it performs plain exact
//! evaluation; instantiated with a jet it propagates truncated Taylor
//! coefficients through the same formula, which is how derivative and limit
//! checks reuse the identity code verbatim.

use std::fmt;

use serde::Serialize;

use crate::rational::Rational;

/// Why an exact division could not be carried out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivError {
    /// The divisor is zero (for jets: zero in every retained coefficient).
    ZeroDivisor,
    /// The divisor vanishes at the expansion point and the dividend's leading
    /// zeros do not cover it: `t^u / t^v` with `u < v` has no finite limit.
    PrefixMismatch { num_zeros: usize, den_zeros: usize },
}

/// A structured record of a vanishing denominator factor.
///
/// Poles are data, not errors: the sweep harness counts and skips them, and
/// single evaluations echo them back to the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pole {
    /// Description of the factor that vanished, e.g. `(x + k)^2`.
    pub factor: String,
    /// The summation index at which it vanished, when one applies.
    pub index: Option<i64>,
}

impl Pole {
    pub fn new(factor: impl Into<String>) -> Self {
        Pole { factor: factor.into(), index: None }
    }

    pub fn at_index(factor: impl Into<String>, index: i64) -> Self {
        Pole { factor: factor.into(), index: Some(index) }
    }
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(k) => write!(f, "pole: {} vanishes at k = {}", self.factor, k),
            None => write!(f, "pole: {} vanishes", self.factor),
        }
    }
}

/// Result of an exact evaluation: either a value or a pole report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(Rational),
    Pole(Pole),
}

impl EvalOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            EvalOutcome::Value(v) => Some(v),
            EvalOutcome::Pole(_) => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, EvalOutcome::Pole(_))
    }
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutcome::Value(v) => write!(f, "{}", v),
            EvalOutcome::Pole(p) => write!(f, "{}", p),
        }
    }
}

impl From<Result<Rational, Pole>> for EvalOutcome {
    fn from(r: Result<Rational, Pole>) -> Self {
        match r {
            Ok(v) => EvalOutcome::Value(v),
            Err(p) => EvalOutcome::Pole(p),
        }
    }
}

/// An exact commutative ring with fallible division.
///
/// `lift_*` methods take `&self` so that jets can inherit the truncation
/// order from an existing value; rationals ignore the receiver.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn lift_i64(&self, v: i64) -> Self;
    fn lift_rational(&self, r: &Rational) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact division. For jets a divisor with leading zero coefficients is
    /// acceptable only when the dividend shares the zero prefix (the shared
    /// `t^v` cancels); otherwise this reports the failure.
    fn div(&self, rhs: &Self) -> Result<Self, DivError>;
    /// Exact division by a nonzero machine integer (always succeeds).
    fn div_int(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn pow_u(&self, exp: u32) -> Self {
        let mut acc = self.lift_i64(1);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self + v` for a machine integer `v`.
    fn add_i64(&self, v: i64) -> Self {
        self.add(&self.lift_i64(v))
    }
}

impl Scalar for Rational {
    fn lift_i64(&self, v: i64) -> Self {
        Rational::from_int(v)
    }

    fn lift_rational(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn div(&self, rhs: &Self) -> Result<Self, DivError> {
        self.checked_div(rhs).ok_or(DivError::ZeroDivisor)
    }

    fn div_int(&self, v: i64) -> Self {
        debug_assert!(v != 0);
        self.checked_div(&Rational::from_int(v)).expect("nonzero integer divisor")
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}
