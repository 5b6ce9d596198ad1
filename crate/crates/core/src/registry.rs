//! The identity catalogue: one entry per displayed identity, each carrying a
//! parameter schema, validity constraints, and exact evaluators for both
//! sides.
//!
//! Entry ids are a stable public contract:
//!
//! * `S0`–`S5` — the balanced 3F2 summation, its contiguous combination, and
//!   the four substituted three-variable forms;
//! * `P1`–`P4` — the pre-limit difference-quotient identities;
//! * `T1`–`T10` — the ten summation theorems;
//! * `C1`–`C10` — their nonnegative-integer specializations;
//! * `D1`, `D2`, `L1` — jet-checked derivative relations rather than
//!   left/right identity pairs.

use crate::formulas::{
    contiguous_saalschutz_rhs, corollary_lhs, corollary_rhs, limit_point, prelimit_lhs,
    prelimit_rhs, subst_lhs, subst_rhs, theorem_lhs, theorem_rhs, theorem_shape, WeightFamily,
};
use crate::jet::{jet_gen_binomial, jet_harmonic, lemma1_sides, LinearFractional};
use crate::rational::Rational;
use crate::rng::KeyedRng;
use crate::scalar::{EvalOutcome, Pole};
use crate::special::{gen_binomial, harmonic_classical, harmonic_shifted, hypergeom_terminating, saalschutz_rhs};

// ---------------------------------------------------------------------------
// Parameter schemas
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    NonNegInt,
    PosInt,
    Rational,
}

impl ParamKind {
    pub fn describe(&self) -> &'static str {
        match self {
            ParamKind::NonNegInt => "nonneg-int",
            ParamKind::PosInt => "pos-int",
            ParamKind::Rational => "rational",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
}

const fn p(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Nat(u64),
    Rat(Rational),
}

impl ParamValue {
    pub fn render(&self) -> String {
        match self {
            ParamValue::Nat(v) => v.to_string(),
            ParamValue::Rat(r) => r.to_string(),
        }
    }
}

/// Parameters bound against an entry's schema, in schema order.
#[derive(Debug, Clone)]
pub struct BoundParams {
    values: Vec<(&'static str, ParamValue)>,
}

impl BoundParams {
    fn nat(&self, name: &str) -> u64 {
        match self.values.iter().find(|(n, _)| *n == name) {
            Some((_, ParamValue::Nat(v))) => *v,
            _ => unreachable!("validated integer parameter {name}"),
        }
    }

    fn rat(&self, name: &str) -> &Rational {
        match self.values.iter().find(|(n, _)| *n == name) {
            Some((_, ParamValue::Rat(r))) => r,
            _ => unreachable!("validated rational parameter {name}"),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &ParamValue)> {
        self.values.iter().map(|(n, v)| (*n, v))
    }
}

// ---------------------------------------------------------------------------
// Entries
// ---------------------------------------------------------------------------

/// Whether an entry is a left/right identity pair or a jet-checked relation
/// (derivative route against closed form).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Identity,
    Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EntryBody {
    Saalschutz,
    ContiguousSaalschutz,
    Subst { family: WeightFamily, t: u32 },
    Prelimit { family: WeightFamily, t: u32 },
    Theorem(usize),
    Corollary(usize),
    BinomialDerivative,
    HarmonicDerivative,
    ProductRule,
}

pub struct IdentitySpec {
    pub id: &'static str,
    pub params: &'static [ParamSpec],
    pub constraints: &'static str,
    pub anchor: &'static str,
    pub kind: EntryKind,
    pub(crate) body: EntryBody,
}

const PARAMS_ABCN: &[ParamSpec] = &[
    p("a", ParamKind::Rational),
    p("b", ParamKind::Rational),
    p("c", ParamKind::Rational),
    p("n", ParamKind::NonNegInt),
];
const PARAMS_XYZN: &[ParamSpec] = &[
    p("x", ParamKind::Rational),
    p("y", ParamKind::Rational),
    p("z", ParamKind::Rational),
    p("n", ParamKind::NonNegInt),
];
const PARAMS_XYN: &[ParamSpec] = &[
    p("x", ParamKind::Rational),
    p("y", ParamKind::Rational),
    p("n", ParamKind::NonNegInt),
];
const PARAMS_PQN: &[ParamSpec] = &[
    p("p", ParamKind::NonNegInt),
    p("q", ParamKind::NonNegInt),
    p("n", ParamKind::NonNegInt),
];
const PARAMS_D1: &[ParamSpec] = &[
    p("x0", ParamKind::Rational),
    p("r", ParamKind::NonNegInt),
    p("s", ParamKind::NonNegInt),
];
const PARAMS_D2: &[ParamSpec] = &[
    p("x0", ParamKind::Rational),
    p("n", ParamKind::NonNegInt),
    p("ell", ParamKind::PosInt),
];
const PARAMS_L1: &[ParamSpec] = &[
    p("x0", ParamKind::Rational),
    p("s", ParamKind::PosInt),
    p("seed", ParamKind::NonNegInt),
];

const T_ANCHORS: [&str; 10] = [
    "first family, linear weight, second-order harmonic sum",
    "first family, quadratic weight, second-order harmonic sum",
    "second family, linear weight, second-order harmonic sum",
    "second family, linear weight, first-order harmonic sum",
    "second family, linear weight, third-order harmonic sum",
    "second family, linear weight, fourth-order harmonic sum",
    "second family, quadratic weight, second-order harmonic sum",
    "second family, quadratic weight, first-order harmonic sum",
    "second family, quadratic weight, third-order harmonic sum",
    "second family, quadratic weight, fourth-order harmonic sum",
];
const T_CONSTRAINTS: [&str; 10] = [
    "none", "none", "n ≥ 1", "n ≥ 1", "n ≥ 1", "n ≥ 1", "n ≥ 2", "n ≥ 2", "n ≥ 2", "n ≥ 2",
];
const C_CONSTRAINTS: [&str; 10] = [
    "p ≥ q",
    "p ≥ q",
    "p ≥ q ≥ n, n ≥ 1",
    "q ≥ n, n ≥ 1",
    "p ≥ q ≥ n, n ≥ 1",
    "p ≥ q ≥ n, n ≥ 1",
    "p ≥ q ≥ n, n ≥ 2",
    "q ≥ n, n ≥ 2",
    "p ≥ q ≥ n, n ≥ 2",
    "p ≥ q ≥ n, n ≥ 2",
];

/// The fixed registry, in its stable listing order.
pub struct Registry {
    entries: Vec<IdentitySpec>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

impl Registry {
    pub fn standard() -> Self {
        use EntryBody::*;
        use WeightFamily::{First, Second};
        let mut entries = vec![
            IdentitySpec {
                id: "S0",
                params: PARAMS_ABCN,
                constraints: "none",
                anchor: "Saalschütz's theorem for a terminating balanced 3F2",
                kind: EntryKind::Identity,
                body: Saalschutz,
            },
            IdentitySpec {
                id: "S1",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "Saalschütz recast in binomial weights (first family, linear weight)",
                kind: EntryKind::Identity,
                body: Subst { family: First, t: 1 },
            },
            IdentitySpec {
                id: "P1",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "x-derivative of S1 in difference-quotient form",
                kind: EntryKind::Identity,
                body: Prelimit { family: First, t: 1 },
            },
            IdentitySpec {
                id: "S2",
                params: PARAMS_ABCN,
                constraints: "none",
                anchor: "contiguous combination of two Saalschütz evaluations",
                kind: EntryKind::Identity,
                body: ContiguousSaalschutz,
            },
            IdentitySpec {
                id: "S3",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "contiguous Saalschütz recast in binomial weights (first family, quadratic weight)",
                kind: EntryKind::Identity,
                body: Subst { family: First, t: 2 },
            },
            IdentitySpec {
                id: "P2",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "x-derivative of S3 in difference-quotient form",
                kind: EntryKind::Identity,
                body: Prelimit { family: First, t: 2 },
            },
            IdentitySpec {
                id: "S4",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "Saalschütz recast in binomial weights (second family, linear weight)",
                kind: EntryKind::Identity,
                body: Subst { family: Second, t: 1 },
            },
            IdentitySpec {
                id: "P3",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "x-derivative of S4 in difference-quotient form",
                kind: EntryKind::Identity,
                body: Prelimit { family: Second, t: 1 },
            },
            IdentitySpec {
                id: "S5",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "contiguous Saalschütz recast in binomial weights (second family, quadratic weight)",
                kind: EntryKind::Identity,
                body: Subst { family: Second, t: 2 },
            },
            IdentitySpec {
                id: "P4",
                params: PARAMS_XYZN,
                constraints: "none",
                anchor: "x-derivative of S5 in difference-quotient form",
                kind: EntryKind::Identity,
                body: Prelimit { family: Second, t: 2 },
            },
        ];
        const T_IDS: [&str; 10] = ["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10"];
        for i in 1..=10 {
            entries.push(IdentitySpec {
                id: T_IDS[i - 1],
                params: PARAMS_XYN,
                constraints: T_CONSTRAINTS[i - 1],
                anchor: T_ANCHORS[i - 1],
                kind: EntryKind::Identity,
                body: Theorem(i),
            });
        }
        const C_IDS: [&str; 10] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"];
        for i in 1..=10 {
            entries.push(IdentitySpec {
                id: C_IDS[i - 1],
                params: PARAMS_PQN,
                constraints: C_CONSTRAINTS[i - 1],
                anchor: "integer specialization of the matching theorem at x=p, y=q",
                kind: EntryKind::Identity,
                body: Corollary(i),
            });
        }
        entries.push(IdentitySpec {
            id: "D1",
            params: PARAMS_D1,
            constraints: "s ≤ r",
            anchor: "derivative of a shifted binomial coefficient via harmonic-number differences",
            kind: EntryKind::Relation,
            body: BinomialDerivative,
        });
        entries.push(IdentitySpec {
            id: "D2",
            params: PARAMS_D2,
            constraints: "none",
            anchor: "derivative of generalized harmonic numbers raises the order",
            kind: EntryKind::Relation,
            body: HarmonicDerivative,
        });
        entries.push(IdentitySpec {
            id: "L1",
            params: PARAMS_L1,
            constraints: "none",
            anchor: "logarithmic-derivative product rule for linear fractional factors",
            kind: EntryKind::Relation,
            body: ProductRule,
        });
        Registry { entries }
    }

    pub fn entries(&self) -> &[IdentitySpec] {
        &self.entries
    }

    pub fn lookup(&self, id: &str) -> Option<&IdentitySpec> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.id).collect()
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unequal,
    Pole,
    ConstraintViolation,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Unequal => "unequal",
            Verdict::Pole => "pole",
            Verdict::ConstraintViolation => "constraint-violation",
        }
    }
}

/// Result of evaluating one entry at explicit parameters. For relation
/// entries `lhs` is the jet-derivative route and `rhs` the closed form.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub id: String,
    pub lhs: Option<EvalOutcome>,
    pub rhs: Option<EvalOutcome>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),
    #[error("{id}: missing parameter `{name}`")]
    MissingParam { id: String, name: String },
    #[error("{id}: unexpected parameter `{name}`")]
    UnexpectedParam { id: String, name: String },
    #[error("{id}: parameter `{name}` must be a {expected}")]
    WrongKind { id: String, name: String, expected: &'static str },
}

impl IdentitySpec {
    /// Binds user-supplied parameters against this entry's schema.
    pub fn bind(&self, given: &[(String, ParamValue)]) -> Result<BoundParams, RegistryError> {
        for (name, _) in given {
            if !self.params.iter().any(|ps| ps.name == name) {
                return Err(RegistryError::UnexpectedParam {
                    id: self.id.to_string(),
                    name: name.clone(),
                });
            }
        }
        let mut values = Vec::with_capacity(self.params.len());
        for ps in self.params {
            let found = given.iter().find(|(n, _)| n == ps.name);
            let value = match found {
                None => {
                    return Err(RegistryError::MissingParam {
                        id: self.id.to_string(),
                        name: ps.name.to_string(),
                    })
                }
                Some((_, v)) => v.clone(),
            };
            let ok = match (ps.kind, &value) {
                (ParamKind::NonNegInt, ParamValue::Nat(_)) => true,
                (ParamKind::PosInt, ParamValue::Nat(v)) => *v >= 1,
                (ParamKind::Rational, ParamValue::Rat(_)) => true,
                _ => false,
            };
            if !ok {
                return Err(RegistryError::WrongKind {
                    id: self.id.to_string(),
                    name: ps.name.to_string(),
                    expected: ps.kind.describe(),
                });
            }
            values.push((ps.name, value));
        }
        Ok(BoundParams { values })
    }

    pub fn constraints_hold(&self, bp: &BoundParams) -> bool {
        match self.body {
            EntryBody::Theorem(i) => bp.nat("n") >= theorem_shape(i).min_n,
            EntryBody::Corollary(i) => {
                let shape = theorem_shape(i);
                let (pp, q, n) = (bp.nat("p"), bp.nat("q"), bp.nat("n"));
                if n < shape.min_n {
                    return false;
                }
                match shape.family {
                    WeightFamily::First => pp >= q,
                    WeightFamily::Second => {
                        let p_ge_q = !matches!(i, 4 | 8);
                        q >= n && (!p_ge_q || pp >= q)
                    }
                }
            }
            EntryBody::BinomialDerivative => bp.nat("s") <= bp.nat("r"),
            _ => true,
        }
    }

    /// Evaluates both sides at bound, constraint-satisfying parameters.
    pub fn evaluate(&self, bp: &BoundParams) -> (EvalOutcome, EvalOutcome) {
        match self.body {
            EntryBody::Saalschutz => {
                let (a, b, c, n) = (bp.rat("a"), bp.rat("b"), bp.rat("c"), bp.nat("n"));
                let balanced = &(&(&(a + b) - c) + &Rational::one()) - &Rational::from(n);
                let lhs = hypergeom_terminating(&[a.clone(), b.clone()], &[c.clone(), balanced], n);
                (lhs, saalschutz_rhs(a, b, c, n))
            }
            EntryBody::ContiguousSaalschutz => {
                let (a, b, c, n) = (bp.rat("a"), bp.rat("b"), bp.rat("c"), bp.nat("n"));
                let shifted = c + &Rational::one();
                let balanced = &(&(&(a + b) - c) + &Rational::one()) - &Rational::from(n);
                let lhs = hypergeom_terminating(&[a.clone(), b.clone()], &[shifted, balanced], n);
                (lhs, contiguous_saalschutz_rhs(a, b, c, n).into())
            }
            EntryBody::Subst { family, t } => {
                let (x, y, z, n) = (bp.rat("x"), bp.rat("y"), bp.rat("z"), bp.nat("n"));
                (
                    subst_lhs(family, t, x, y, z, n).into(),
                    subst_rhs(family, t, x, y, z, n).into(),
                )
            }
            EntryBody::Prelimit { family, t } => {
                let (x, y, z, n) = (bp.rat("x"), bp.rat("y"), bp.rat("z"), bp.nat("n"));
                (
                    prelimit_lhs(family, t, x, y, z, n).into(),
                    prelimit_rhs(family, t, x, y, z, n).into(),
                )
            }
            EntryBody::Theorem(i) => {
                let (x, y, n) = (bp.rat("x"), bp.rat("y"), bp.nat("n"));
                (theorem_lhs(i, x, y, n).into(), theorem_rhs(i, x, y, n).into())
            }
            EntryBody::Corollary(i) => {
                let (pp, q, n) = (bp.nat("p"), bp.nat("q"), bp.nat("n"));
                (corollary_lhs(i, pp, q, n).into(), corollary_rhs(i, pp, q, n).into())
            }
            EntryBody::BinomialDerivative => {
                let (x0, r, s) = (bp.rat("x0"), bp.nat("r"), bp.nat("s"));
                let jet = jet_gen_binomial(x0, r, s, 1);
                let lhs = EvalOutcome::Value(jet.derivative(1).expect("order-1 jet"));
                let rhs = binomial_derivative_closed_form(x0, r, s).into();
                (lhs, rhs)
            }
            EntryBody::HarmonicDerivative => {
                let (x0, n, ell) = (bp.rat("x0"), bp.nat("n"), bp.nat("ell") as u32);
                let lhs = jet_harmonic(x0, n, ell, 1)
                    .map(|jet| jet.derivative(1).expect("order-1 jet"))
                    .into();
                let rhs = harmonic_shifted(x0, n, ell + 1)
                    .map(|h| &h * &Rational::from_int(-(ell as i64)))
                    .into();
                (lhs, rhs)
            }
            EntryBody::ProductRule => {
                let (x0, s, seed) = (bp.rat("x0"), bp.nat("s"), bp.nat("seed"));
                let factors = draw_lemma_factors(seed, s);
                match lemma1_sides(&factors, x0) {
                    Ok((jet_side, closed_side)) => {
                        (EvalOutcome::Value(jet_side), EvalOutcome::Value(closed_side))
                    }
                    Err(reason) => {
                        let pole = Pole::new(reason);
                        (EvalOutcome::Pole(pole.clone()), EvalOutcome::Pole(pole))
                    }
                }
            }
        }
    }
}

/// `C(x0+r, s) * (H_r(x0) - H_{r-s}(x0))`, defined for `s <= r`.
fn binomial_derivative_closed_form(x0: &Rational, r: u64, s: u64) -> Result<Rational, Pole> {
    let b = gen_binomial(&(x0 + &Rational::from(r)), s);
    let h = &harmonic_shifted(x0, r, 1)? - &harmonic_shifted(x0, r - s, 1)?;
    Ok(&b * &h)
}

/// Deterministic factor list for the product-rule entry: `s` quadruples with
/// small rational coefficients, nondegenerate numerators and denominators.
pub fn draw_lemma_factors(seed: u64, s: u64) -> Vec<LinearFractional> {
    let mut rng = KeyedRng::from_key(seed, "L1-factors", 0);
    let mut factors = Vec::with_capacity(s as usize);
    while factors.len() < s as usize {
        let a = rng.rational(4);
        let b = rng.rational(4);
        let c = rng.rational(4);
        let d = rng.rational(4);
        if (a.is_zero() && b.is_zero()) || (c.is_zero() && d.is_zero()) {
            continue;
        }
        factors.push(LinearFractional::new(a, b, c, d));
    }
    factors
}

/// Looks up `id`, validates `params` against its schema and constraints, and
/// evaluates both sides exactly.
pub fn evaluate_identity(
    registry: &Registry,
    id: &str,
    params: &[(String, ParamValue)],
) -> Result<Evaluation, RegistryError> {
    let spec = registry
        .lookup(id)
        .ok_or_else(|| RegistryError::UnknownIdentity(id.to_string()))?;
    let bound = spec.bind(params)?;
    Ok(evaluate_bound(spec, &bound))
}

pub(crate) fn evaluate_bound(spec: &IdentitySpec, bound: &BoundParams) -> Evaluation {
    if !spec.constraints_hold(bound) {
        return Evaluation {
            id: spec.id.to_string(),
            lhs: None,
            rhs: None,
            verdict: Verdict::ConstraintViolation,
        };
    }
    let (lhs, rhs) = spec.evaluate(bound);
    let verdict = match (&lhs, &rhs) {
        (EvalOutcome::Value(l), EvalOutcome::Value(r)) => {
            if l == r {
                Verdict::Equal
            } else {
                Verdict::Unequal
            }
        }
        _ => Verdict::Pole,
    };
    Evaluation { id: spec.id.to_string(), lhs: Some(lhs), rhs: Some(rhs), verdict }
}

// ---------------------------------------------------------------------------
// Corollary-vs-theorem consistency
// ---------------------------------------------------------------------------

/// Outcome of replaying a corollary's derivation from its theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyOutcome {
    Consistent,
    Inconsistent { detail: String },
    Pole(Pole),
    ConstraintViolation,
}

/// Checks corollary `index` against theorem `index` at `(p, q, n)`:
///
/// 1. the corollary's two sides agree;
/// 2. the theorem holds at `x = p, y = q`;
/// 3. shifting `H_k^<ell>(p)` to the absolute `H_{p+k}^<ell>` adds exactly
///    `H_p^<ell>` times the harmonic-free weighted sum, whose value is pinned
///    by the matching substituted identity evaluated at the limit point.
pub fn corollary_consistency(index: usize, pp: u64, q: u64, n: u64) -> ConsistencyOutcome {
    let shape = theorem_shape(index);
    let constraints_ok = n >= shape.min_n
        && match shape.family {
            WeightFamily::First => pp >= q,
            WeightFamily::Second => q >= n && (matches!(index, 4 | 8) || pp >= q),
        };
    if !constraints_ok {
        return ConsistencyOutcome::ConstraintViolation;
    }

    let x = Rational::from(pp);
    let y = Rational::from(q);
    let run = || -> Result<ConsistencyOutcome, Pole> {
        let c_lhs = corollary_lhs(index, pp, q, n)?;
        let c_rhs = corollary_rhs(index, pp, q, n)?;
        let t_lhs = theorem_lhs(index, &x, &y, n)?;
        let t_rhs = theorem_rhs(index, &x, &y, n)?;

        // The harmonic-free weighted sum, in both its finite-sum form and
        // (when defined) the substituted closed form at the limit point.
        let t = shape.weight_order;
        let z0 = limit_point(shape.family, &x, &y, n);
        let sigma = subst_lhs(shape.family, t, &x, &y, &z0, n)?;
        if let Ok(closed) = subst_rhs(shape.family, t, &x, &y, &z0, n) {
            if closed != sigma {
                return Ok(ConsistencyOutcome::Inconsistent {
                    detail: format!(
                        "harmonic-free sum {sigma} disagrees with substituted closed form {closed}"
                    ),
                });
            }
        }

        let shift = &harmonic_classical(pp, shape.harmonic_order) * &sigma;
        let translated_lhs = &t_lhs + &shift;
        let translated_rhs = &t_rhs + &shift;
        let mut problems = Vec::new();
        if c_lhs != c_rhs {
            problems.push(format!("corollary sides differ: {c_lhs} vs {c_rhs}"));
        }
        if t_lhs != t_rhs {
            problems.push(format!("theorem sides differ at integers: {t_lhs} vs {t_rhs}"));
        }
        if c_lhs != translated_lhs {
            problems.push(format!(
                "left side does not translate: corollary {c_lhs}, theorem-shifted {translated_lhs}"
            ));
        }
        if c_rhs != translated_rhs {
            problems.push(format!(
                "right side does not translate: corollary {c_rhs}, theorem-shifted {translated_rhs}"
            ));
        }
        if problems.is_empty() {
            Ok(ConsistencyOutcome::Consistent)
        } else {
            Ok(ConsistencyOutcome::Inconsistent { detail: problems.join("; ") })
        }
    };
    match run() {
        Ok(outcome) => outcome,
        Err(pole) => ConsistencyOutcome::Pole(pole),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> ParamValue {
        ParamValue::Rat(s.parse().unwrap())
    }

    fn nat(v: u64) -> ParamValue {
        ParamValue::Nat(v)
    }

    fn eval(id: &str, params: &[(&str, ParamValue)]) -> Evaluation {
        let reg = Registry::standard();
        let owned: Vec<(String, ParamValue)> =
            params.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
        evaluate_identity(&reg, id, &owned).unwrap()
    }

    #[test]
    fn registry_lists_the_full_inventory_in_order() {
        let reg = Registry::standard();
        let expected = [
            "S0", "S1", "P1", "S2", "S3", "P2", "S4", "P3", "S5", "P4", "T1", "T2", "T3", "T4",
            "T5", "T6", "T7", "T8", "T9", "T10", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8",
            "C9", "C10", "D1", "D2", "L1",
        ];
        assert_eq!(reg.ids(), expected);
        assert_eq!(reg.entries().len(), 33);
    }

    #[test]
    fn schema_lookup_matches_contract() {
        let reg = Registry::standard();
        let t1 = reg.lookup("T1").unwrap();
        let kinds: Vec<_> = t1.params.iter().map(|p| (p.name, p.kind.describe())).collect();
        assert_eq!(
            kinds,
            [("x", "rational"), ("y", "rational"), ("n", "nonneg-int")]
        );
        assert_eq!(reg.lookup("C7").unwrap().constraints, "p ≥ q ≥ n, n ≥ 2");
        assert_eq!(reg.lookup("T10").unwrap().kind, EntryKind::Identity);
        assert_eq!(reg.lookup("D2").unwrap().kind, EntryKind::Relation);
        assert!(reg.lookup("T11").is_none());
    }

    #[test]
    fn evaluate_spot_values() {
        let ev = eval("T3", &[("x", rat("2")), ("y", rat("1")), ("n", nat(1))]);
        assert_eq!(ev.verdict, Verdict::Equal);
        assert_eq!(ev.lhs.unwrap().value().unwrap(), &Rational::ratio(-1, 9));
        assert_eq!(ev.rhs.unwrap().value().unwrap(), &Rational::ratio(-1, 9));

        let ev = eval("S0", &[("a", rat("1")), ("b", rat("1")), ("c", rat("3")), ("n", nat(2))]);
        assert_eq!(ev.verdict, Verdict::Equal);
        assert_eq!(ev.lhs.unwrap().value().unwrap(), &Rational::ratio(3, 2));
    }

    #[test]
    fn constraint_violation_is_reported_not_evaluated() {
        let ev = eval("C1", &[("p", nat(1)), ("q", nat(2)), ("n", nat(1))]);
        assert_eq!(ev.verdict, Verdict::ConstraintViolation);
        assert!(ev.lhs.is_none());

        let ev = eval("T7", &[("x", rat("2")), ("y", rat("1/2")), ("n", nat(1))]);
        assert_eq!(ev.verdict, Verdict::ConstraintViolation);
    }

    #[test]
    fn theorem_one_admits_n_zero() {
        let ev = eval("T1", &[("x", rat("1")), ("y", rat("1")), ("n", nat(0))]);
        assert_eq!(ev.verdict, Verdict::Equal);
        assert!(ev.lhs.unwrap().value().unwrap().is_zero());
    }

    #[test]
    fn poles_propagate_from_either_side() {
        // y = 1 < n makes C(y, n) vanish in the second-family closed form.
        let ev = eval("T3", &[("x", rat("2")), ("y", rat("1")), ("n", nat(2))]);
        assert_eq!(ev.verdict, Verdict::Pole);
    }

    #[test]
    fn binding_errors_are_structured() {
        let reg = Registry::standard();
        let err = evaluate_identity(&reg, "T1", &[("x".into(), rat("1"))]).unwrap_err();
        assert!(matches!(err, RegistryError::MissingParam { .. }));
        let err = evaluate_identity(
            &reg,
            "T1",
            &[
                ("x".into(), rat("1")),
                ("y".into(), rat("1")),
                ("n".into(), rat("1/2")),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, RegistryError::WrongKind { .. }));
        let err = evaluate_identity(&reg, "T99", &[]).unwrap_err();
        assert!(matches!(err, RegistryError::UnknownIdentity(_)));
    }

    #[test]
    fn derivative_relations_evaluate_equal() {
        let ev = eval("D2", &[("x0", rat("0")), ("n", nat(1)), ("ell", nat(1))]);
        assert_eq!(ev.verdict, Verdict::Equal);
        assert_eq!(ev.lhs.unwrap().value().unwrap(), &Rational::from_int(-1));

        let ev = eval("D1", &[("x0", rat("1/3")), ("r", nat(3)), ("s", nat(3))]);
        assert_eq!(ev.verdict, Verdict::Equal);

        let ev = eval("D1", &[("x0", rat("1/3")), ("r", nat(2)), ("s", nat(3))]);
        assert_eq!(ev.verdict, Verdict::ConstraintViolation);

        let ev = eval("L1", &[("x0", rat("1/2")), ("s", nat(3)), ("seed", nat(7))]);
        assert_eq!(ev.verdict, Verdict::Equal);
    }

    #[test]
    fn values_and_registry_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Rational>();
        assert_send_sync::<crate::jet::Jet>();
        assert_send_sync::<EvalOutcome>();
        assert_send_sync::<Registry>();
        assert_send_sync::<IdentitySpec>();
    }

    #[test]
    fn consistency_spot_cases() {
        assert_eq!(corollary_consistency(1, 3, 2, 2), ConsistencyOutcome::Consistent);
        assert_eq!(corollary_consistency(4, 0, 2, 2), ConsistencyOutcome::Consistent);
        assert_eq!(corollary_consistency(7, 2, 2, 2), ConsistencyOutcome::Consistent);
        assert_eq!(corollary_consistency(1, 1, 2, 1), ConsistencyOutcome::ConstraintViolation);
    }
}
