//! Elementary exact building blocks: shifted factorials, generalized
//! binomial coefficients, generalized harmonic numbers, and terminating
//! hypergeometric sums at unit argument.
//!
//! All functions here exist in two layers: a generic layer over [`Scalar`]
//! (used by the identity evaluators, including their jet instantiations) and
//! a plain [`Rational`] layer that is the crate's public calculator surface.

use crate::rational::Rational;
use crate::scalar::{EvalOutcome, Pole, Scalar};

/// The rising product `(x)_n = x (x+1) ... (x+n-1)`, with the empty product
/// `(x)_0 = 1`.
pub fn pochhammer<S: Scalar>(x: &S, n: u64) -> S {
    let mut acc = x.lift_i64(1);
    for j in 0..n {
        acc = acc.mul(&x.add_i64(j as i64));
    }
    acc
}

/// Generalized binomial coefficient `C(x, k) = x (x-1) ... (x-k+1) / k!`,
/// defined for any scalar `x` and nonnegative integer `k`.
pub fn binomial<S: Scalar>(x: &S, k: u64) -> S {
    let mut acc = x.lift_i64(1);
    for j in 0..k {
        acc = acc.mul(&x.add_i64(-(j as i64))).div_int(j as i64 + 1);
    }
    acc
}

/// Generalized harmonic number `H_n^<ell>(x) = sum_{k=1..n} 1/(x+k)^ell`.
///
/// Reports a pole naming the offending index when some `x + k` vanishes.
pub fn harmonic_shifted<S: Scalar>(x: &S, n: u64, ell: u32) -> Result<S, Pole> {
    let one = x.lift_i64(1);
    let mut acc = x.lift_i64(0);
    for k in 1..=n {
        let base = x.add_i64(k as i64);
        let term = one
            .div(&base.pow_u(ell))
            .map_err(|_| Pole::at_index(format!("(shift + {k})^{ell}"), k as i64))?;
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Classical harmonic number `H_m^<ell> = sum_{k=1..m} 1/k^ell` (total).
pub fn harmonic_classical(m: u64, ell: u32) -> Rational {
    harmonic_shifted(&Rational::zero(), m, ell).expect("positive integer denominators")
}

/// Upper index, order, and shift of a generalized harmonic number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicOrder {
    pub ell: u32,
    pub n: u64,
    pub shift: Rational,
}

impl HarmonicOrder {
    /// `ell` must be positive; the order-0 sum is not part of the family.
    pub fn new(ell: u32, n: u64, shift: Rational) -> Self {
        assert!(ell >= 1, "harmonic order must be positive");
        HarmonicOrder { ell, n, shift }
    }
}

// ---------------------------------------------------------------------------
// Plain-rational public operations
// ---------------------------------------------------------------------------

/// `(x)_n` over exact rationals.
pub fn shifted_factorial(x: &Rational, n: u64) -> Rational {
    pochhammer(x, n)
}

/// `C(x, n)` over exact rationals.
pub fn gen_binomial(x: &Rational, n: u64) -> Rational {
    binomial(x, n)
}

/// `H_n^<ell>(x)` over exact rationals, as a value-or-pole outcome.
pub fn harmonic(h: &HarmonicOrder) -> EvalOutcome {
    harmonic_shifted(&h.shift, h.n, h.ell).into()
}

/// Terminating hypergeometric sum at unit argument:
///
/// ```text
/// sum_{k=0..n}  (-n)_k * prod (u_i)_k
///              ----------------------
///               (1)_k  * prod (l_j)_k
/// ```
///
/// The `(-n)_k` and `(1)_k` factors are supplied implicitly; the caller
/// passes the remaining upper and lower parameters. A term whose numerator
/// vanishes contributes zero regardless of its denominator (the series has
/// already terminated there); a vanishing denominator factor with a nonzero
/// numerator is a pole.
pub fn hypergeom_terminating(upper: &[Rational], lower: &[Rational], n: u64) -> EvalOutcome {
    let mut acc = Rational::zero();
    for k in 0..=n {
        let mut num = pochhammer(&Rational::from_int(-(n as i64)), k);
        for u in upper {
            num = &num * &pochhammer(u, k);
        }
        if num.is_zero() {
            continue;
        }
        let mut den = pochhammer(&Rational::one(), k);
        let mut den_zero: Option<usize> = None;
        for (j, l) in lower.iter().enumerate() {
            let f = pochhammer(l, k);
            if f.is_zero() {
                den_zero = Some(j);
                break;
            }
            den = &den * &f;
        }
        if let Some(j) = den_zero {
            return EvalOutcome::Pole(Pole::at_index(
                format!("lower parameter {} rising factorial", j + 1),
                k as i64,
            ));
        }
        acc = &acc + &num.checked_div(&den).expect("nonzero denominator");
    }
    EvalOutcome::Value(acc)
}

/// Closed form of the balanced terminating 3F2:
/// `(c-a)_n (c-b)_n / [ (c)_n (c-a-b)_n ]`.
pub fn saalschutz_rhs(a: &Rational, b: &Rational, c: &Rational, n: u64) -> EvalOutcome {
    let num = &pochhammer(&(c - a), n) * &pochhammer(&(c - b), n);
    let den_c = pochhammer(c, n);
    if den_c.is_zero() {
        return EvalOutcome::Pole(Pole::new(format!("(c)_{n}")));
    }
    let den_cab = pochhammer(&(&(c - a) - b), n);
    if den_cab.is_zero() {
        return EvalOutcome::Pole(Pole::new(format!("(c-a-b)_{n}")));
    }
    EvalOutcome::Value(num.checked_div(&(&den_c * &den_cab)).expect("nonzero"))
}
