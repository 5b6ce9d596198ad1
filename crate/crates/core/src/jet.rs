//! Truncated Taylor expansions (jets) with exact rational coefficients.
//!
//! A jet of order `m` carries the coefficients of `t^0 .. t^m` of a function
//! expanded at a point. Arithmetic is exact truncated power-series
//! arithmetic. Division by a jet whose constant term vanishes cancels the
//! shared leading-zero prefix of dividend and divisor, which is the whole of
//! the L'Hopital machinery used by the limit checks: the quotient's constant
//! coefficient is the limit. Cancelling `t^v` necessarily shortens the
//! result to order `m - v`; binary operations on jets of different orders
//! truncate to the shorter one, so every retained coefficient stays exact.

use std::fmt;

use crate::rational::Rational;
use crate::scalar::{DivError, Pole, Scalar};
use crate::special::{binomial, harmonic_shifted};

/// A truncated Taylor expansion; coefficient `i` multiplies `t^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Jet {
    coeffs: Vec<Rational>,
}

impl Jet {
    /// Constant jet `[value, 0, ..., 0]`.
    pub fn constant(value: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// Variable jet `[value, 1, 0, ..., 0]`; an order-0 jet has no slot for
    /// the derivative and degenerates to a constant.
    pub fn variable(value: Rational, order: usize) -> Self {
        let mut jet = Jet::constant(value, order);
        if order >= 1 {
            jet.coeffs[1] = Rational::one();
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The `k`-th derivative at the expansion point: `k! * coeff(k)`.
    /// `None` when the jet is too short to know it.
    pub fn derivative(&self, k: usize) -> Option<Rational> {
        if k > self.order() {
            return None;
        }
        let mut fact = Rational::one();
        for j in 1..=k {
            fact = &fact * &Rational::from_int(j as i64);
        }
        Some(self.coeff(k) * &fact)
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn len_min(&self, rhs: &Jet) -> usize {
        self.coeffs.len().min(rhs.coeffs.len())
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jet[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Scalar for Jet {
    fn lift_i64(&self, v: i64) -> Self {
        Jet::constant(Rational::from_int(v), self.order())
    }

    fn lift_rational(&self, r: &Rational) -> Self {
        Jet::constant(r.clone(), self.order())
    }

    fn add(&self, rhs: &Self) -> Self {
        let n = self.len_min(rhs);
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect();
        Jet { coeffs }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let n = self.len_min(rhs);
        let coeffs = (0..n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect();
        Jet { coeffs }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let n = self.len_min(rhs);
        let mut coeffs = vec![Rational::zero(); n];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            for j in 0..=i {
                let prod = &self.coeffs[j] * &rhs.coeffs[i - j];
                *slot += &prod;
            }
        }
        Jet { coeffs }
    }

    fn neg(&self) -> Self {
        Jet { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn div(&self, rhs: &Self) -> Result<Self, DivError> {
        let n = self.len_min(rhs);
        let den_zeros = match rhs.first_nonzero() {
            Some(v) if v < n => v,
            _ => return Err(DivError::ZeroDivisor),
        };
        let (num, den): (&[Rational], &[Rational]) = if den_zeros == 0 {
            (&self.coeffs[..n], &rhs.coeffs[..n])
        } else {
            // L'Hopital step: both sides must share the t^v prefix.
            let num_zeros = self.first_nonzero().unwrap_or(n);
            if num_zeros < den_zeros {
                return Err(DivError::PrefixMismatch { num_zeros, den_zeros });
            }
            (&self.coeffs[den_zeros..n], &rhs.coeffs[den_zeros..n])
        };
        let m = num.len();
        let mut out = vec![Rational::zero(); m];
        for i in 0..m {
            let mut acc = num[i].clone();
            for j in 1..=i {
                let prod = &den[j] * &out[i - j];
                acc = &acc - &prod;
            }
            out[i] = acc.checked_div(&den[0]).expect("nonzero leading coefficient");
        }
        Ok(Jet { coeffs: out })
    }

    fn div_int(&self, v: i64) -> Self {
        debug_assert!(v != 0);
        let d = Rational::from_int(v);
        Jet {
            coeffs: self.coeffs.iter().map(|c| c.checked_div(&d).expect("nonzero")).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

// ---------------------------------------------------------------------------
// Jet-valued special functions
// ---------------------------------------------------------------------------

/// Expansion of `x -> H_n^<ell>(x)` around `shift0`.
pub fn jet_harmonic(shift0: &Rational, n: u64, ell: u32, order: usize) -> Result<Jet, Pole> {
    harmonic_shifted(&Jet::variable(shift0.clone(), order), n, ell)
}

/// Expansion of `x -> C(x + r, s)` around `x0` (polynomial in `x`, total).
pub fn jet_gen_binomial(x0: &Rational, r: u64, s: u64, order: usize) -> Jet {
    let x = Jet::variable(x0.clone(), order);
    binomial(&x.add_i64(r as i64), s)
}

// ---------------------------------------------------------------------------
// Product-rule certification for products of linear fractional factors
// ---------------------------------------------------------------------------

/// One factor `(a x + b) / (c x + d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFractional {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl LinearFractional {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        LinearFractional { a, b, c, d }
    }
}

/// Result of one product-rule check at a sample point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaOutcome {
    Pass,
    Fail { jet_derivative: Rational, closed_form: Rational },
    /// A factor's numerator or denominator vanishes at the sample point, so
    /// the closed form is not defined there; the sample is skipped.
    Skipped { reason: String },
}

/// Both routes to the derivative of `prod (a_j x + b_j)/(c_j x + d_j)` at
/// `x0`: through an order-1 jet, and through the closed form
/// `prod (...) * sum (a_j d_j - b_j c_j) / ((a_j x0 + b_j)(c_j x0 + d_j))`.
/// Fails with a reason when a factor's numerator or denominator vanishes at
/// `x0` (the closed form divides by both).
pub fn lemma1_sides(
    factors: &[LinearFractional],
    x0: &Rational,
) -> Result<(Rational, Rational), String> {
    let mut product = Rational::one();
    let mut sum = Rational::zero();
    for (j, f) in factors.iter().enumerate() {
        let num = &(&f.a * x0) + &f.b;
        let den = &(&f.c * x0) + &f.d;
        if num.is_zero() || den.is_zero() {
            return Err(format!("factor {} vanishes at the sample point", j + 1));
        }
        product = &product * &num.checked_div(&den).expect("nonzero");
        let det = &(&f.a * &f.d) - &(&f.b * &f.c);
        sum = &sum + &det.checked_div(&(&num * &den)).expect("nonzero");
    }
    let closed_form = &product * &sum;

    let x = Jet::variable(x0.clone(), 1);
    let mut jet = x.lift_i64(1);
    for f in factors {
        let num = x.mul(&x.lift_rational(&f.a)).add(&x.lift_rational(&f.b));
        let den = x.mul(&x.lift_rational(&f.c)).add(&x.lift_rational(&f.d));
        jet = match jet.mul(&num).div(&den) {
            Ok(j) => j,
            Err(_) => unreachable!("denominators checked above"),
        };
    }
    Ok((jet.coeff(1).clone(), closed_form))
}

/// Checks that the jet derivative of a product of linear fractional factors
/// equals the closed-form product rule at `x0`.
pub fn check_lemma1(factors: &[LinearFractional], x0: &Rational) -> LemmaOutcome {
    match lemma1_sides(factors, x0) {
        Err(reason) => LemmaOutcome::Skipped { reason },
        Ok((jet_derivative, closed_form)) => {
            if jet_derivative == closed_form {
                LemmaOutcome::Pass
            } else {
                LemmaOutcome::Fail { jet_derivative, closed_form }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Limit extraction
// ---------------------------------------------------------------------------

/// Evaluates two jet-valued expressions of the same local variable at
/// expansion order `order` and returns their constant coefficients, i.e.
/// their limits at the expansion point. Indeterminate `0/0` ratios inside the
/// expressions resolve by prefix cancellation; a ratio that does not resolve
/// within the retained order surfaces as a pole.
pub fn limit_pair<L, R>(z0: &Rational, order: usize, lhs: L, rhs: R) -> Result<(Rational, Rational), Pole>
where
    L: FnOnce(&Jet) -> Result<Jet, Pole>,
    R: FnOnce(&Jet) -> Result<Jet, Pole>,
{
    let z = Jet::variable(z0.clone(), order);
    let l = lhs(&z)?;
    let r = rhs(&z)?;
    Ok((l.coeff(0).clone(), r.coeff(0).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{gen_binomial, harmonic_shifted};
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn jet(coeffs: &[(i64, i64)]) -> Jet {
        Jet { coeffs: coeffs.iter().map(|&(p, q)| r(p, q)).collect() }
    }

    #[test]
    fn lift_constant_and_variable() {
        assert_eq!(Jet::constant(r(5, 1), 2), jet(&[(5, 1), (0, 1), (0, 1)]));
        assert_eq!(Jet::variable(r(5, 1), 2), jet(&[(5, 1), (1, 1), (0, 1)]));
        assert_eq!(Jet::variable(r(0, 1), 0), jet(&[(0, 1)]));
    }

    #[test]
    fn product_of_linear_jets() {
        let a = jet(&[(1, 1), (1, 1), (0, 1)]);
        let b = jet(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.mul(&b), jet(&[(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn division_cancels_shared_prefix_and_shortens() {
        let num = jet(&[(0, 1), (1, 1), (0, 1)]);
        let den = jet(&[(0, 1), (2, 1), (0, 1)]);
        let q = num.div(&den).unwrap();
        assert_eq!(q, jet(&[(1, 2), (0, 1)]));
        assert_eq!(q.order(), 1);
    }

    #[test]
    fn division_by_identically_zero_jet_fails() {
        let num = jet(&[(1, 1), (0, 1), (0, 1)]);
        let den = jet(&[(0, 1), (0, 1), (0, 1)]);
        assert_eq!(num.div(&den), Err(DivError::ZeroDivisor));
    }

    #[test]
    fn division_with_uncancelled_prefix_fails() {
        let num = jet(&[(0, 1), (3, 1), (0, 1)]);
        let den = jet(&[(0, 1), (0, 1), (5, 1)]);
        assert_eq!(
            num.div(&den),
            Err(DivError::PrefixMismatch { num_zeros: 1, den_zeros: 2 })
        );
    }

    #[test]
    fn zero_dividend_over_vanishing_divisor_is_zero() {
        let num = Jet::constant(Rational::zero(), 3);
        let den = jet(&[(0, 1), (1, 1), (0, 1), (0, 1)]);
        let q = num.div(&den).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn geometric_series_coefficients() {
        // 1 / (1 + t) = 1 - t + t^2 - t^3 + ...
        let one = Jet::constant(Rational::one(), 4);
        let den = Jet::variable(Rational::one(), 4);
        let q = one.div(&den).unwrap();
        assert_eq!(q, jet(&[(1, 1), (-1, 1), (1, 1), (-1, 1), (1, 1)]));
    }

    #[test]
    fn harmonic_jet_reference_values() {
        assert_eq!(jet_harmonic(&r(0, 1), 1, 1, 1).unwrap(), jet(&[(1, 1), (-1, 1)]));
        // Derivative lowers to -ell * H_n^<ell+1>: here -1 * H_1^<2>(0) = -1.
        let j = jet_harmonic(&r(0, 1), 1, 1, 1).unwrap();
        assert_eq!(j.coeff(1), &r(-1, 1));
        // H_0 is identically zero at any order.
        assert_eq!(jet_harmonic(&r(11, 3), 0, 4, 3).unwrap(), Jet::constant(Rational::zero(), 3));
    }

    #[test]
    fn harmonic_jet_reports_poles() {
        assert!(jet_harmonic(&r(-2, 1), 3, 1, 2).is_err());
    }

    #[test]
    fn binomial_jet_reference_values() {
        // C(x+2, 1) = x + 2 at x0 = 0.
        assert_eq!(jet_gen_binomial(&r(0, 1), 2, 1, 1), jet(&[(2, 1), (1, 1)]));
        // C(x, 0) is identically 1.
        assert_eq!(jet_gen_binomial(&r(4, 7), 0, 0, 3), Jet::constant(Rational::one(), 3));
        // Finite-product differentiation oracle at x0 = 1/3, r = s = 3:
        // derivative must equal C(x0+3, 3) * (H_3(x0) - H_0(x0)) = 23/9.
        let j = jet_gen_binomial(&r(1, 3), 3, 3, 1);
        let expected = &gen_binomial(&r(10, 3), 3) * &harmonic_shifted(&r(1, 3), 3, 1).unwrap();
        assert_eq!(j.derivative(1).unwrap(), expected);
        assert_eq!(expected, r(23, 9));
    }

    #[test]
    fn lemma_check_identity_function() {
        let f = [LinearFractional::new(r(1, 1), r(0, 1), r(0, 1), r(1, 1))];
        assert_eq!(check_lemma1(&f, &r(5, 1)), LemmaOutcome::Pass);
    }

    #[test]
    fn lemma_check_quadratic_product() {
        // (x + 1)(x + 2): derivative at 0 is 3.
        let f = [
            LinearFractional::new(r(1, 1), r(1, 1), r(0, 1), r(1, 1)),
            LinearFractional::new(r(1, 1), r(2, 1), r(0, 1), r(1, 1)),
        ];
        assert_eq!(check_lemma1(&f, &r(0, 1)), LemmaOutcome::Pass);
    }

    #[test]
    fn lemma_check_skips_vanishing_factor() {
        let f = [LinearFractional::new(r(1, 1), r(-5, 1), r(0, 1), r(1, 1))];
        assert!(matches!(check_lemma1(&f, &r(5, 1)), LemmaOutcome::Skipped { .. }));
    }

    #[test]
    fn limit_of_regular_ratio_is_plain_evaluation() {
        // (z^2 - 1)/(z + 3) at z0 = 2 -> 3/5.
        let got = limit_pair(
            &r(2, 1),
            5,
            |z| Ok(z.mul(z).sub(&z.lift_i64(1)).div(&z.add_i64(3)).unwrap()),
            |z| Ok(z.lift_rational(&r(3, 5))),
        )
        .unwrap();
        assert_eq!(got.0, r(3, 5));
        assert_eq!(got.0, got.1);
    }

    fn arb_jet() -> impl Strategy<Value = Jet> {
        proptest::collection::vec((-12i64..12, 1i64..6), 1..=6)
            .prop_map(|cs| Jet { coeffs: cs.into_iter().map(|(p, q)| r(p, q)).collect() })
    }

    proptest! {
        #[test]
        fn jet_ring_laws(a in arb_jet(), b in arb_jet(), c in arb_jet()) {
            let n = a.coeffs.len().min(b.coeffs.len()).min(c.coeffs.len());
            let trunc = |j: &Jet| Jet { coeffs: j.coeffs[..n].to_vec() };
            let (a, b, c) = (trunc(&a), trunc(&b), trunc(&c));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn division_inverts_multiplication(a in arb_jet(), b in arb_jet()) {
            // Restrict to invertible divisors.
            prop_assume!(!b.coeff(0).is_zero());
            let n = a.coeffs.len().min(b.coeffs.len());
            let trunc = |j: &Jet| Jet { coeffs: j.coeffs[..n].to_vec() };
            let (a, b) = (trunc(&a), trunc(&b));
            let q = a.mul(&b).div(&b).unwrap();
            prop_assert_eq!(q, a);
        }
    }
}
