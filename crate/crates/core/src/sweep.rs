//! Seeded verification sweeps over the registry, the derivative relations,
//! and the limit extractions.
//!
//! Sampling is deterministic: every sample draws from a stream keyed by
//! `(seed, row label, sample index)`, so reports are reproducible and the
//! result for one identity does not depend on which others were swept.
//! Samplers construct parameters that satisfy each entry's structural
//! constraints; vanishing denominators at sampled points surface as pole
//! outcomes and are counted and skipped, never failed.

use std::time::Instant;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::formulas::{
    derivative_descent_factor, limit_point, prelimit_lhs, prelimit_rhs, theorem_lhs, theorem_rhs,
    theorem_shape, WeightFamily,
};
use crate::jet::{check_lemma1, Jet, LemmaOutcome, LinearFractional};
use crate::rational::Rational;
use crate::registry::{
    corollary_consistency, evaluate_bound, ConsistencyOutcome, EntryBody, IdentitySpec,
    ParamValue, Registry, RegistryError, Verdict,
};
use crate::report::{FailureRecord, GlobalInfo, IdentityReport, VerificationReport};
use crate::rng::KeyedRng;
use crate::scalar::Scalar;
use crate::special::harmonic_shifted;

// ---------------------------------------------------------------------------
// Configurations
// ---------------------------------------------------------------------------

/// Which registry entries a sweep covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdSelection {
    All,
    Ids(Vec<String>),
}

impl Serialize for IdSelection {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            IdSelection::All => serializer.serialize_str("all"),
            IdSelection::Ids(ids) => ids.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for IdSelection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        match value {
            Value::String(s) if s == "all" => Ok(IdSelection::All),
            Value::String(s) => Err(de::Error::custom(format!(
                "identity selection must be \"all\" or a list of ids, got {s:?}"
            ))),
            Value::Array(items) => {
                let ids = items
                    .into_iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s),
                        other => Err(de::Error::custom(format!("identity id must be a string, got {other}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(IdSelection::Ids(ids))
            }
            other => Err(de::Error::custom(format!("bad identity selection: {other}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub identity_ids: IdSelection,
    pub samples_per_identity: u64,
    pub seed: u64,
    pub max_n: u64,
    pub rational_height_bound: i64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            identity_ids: IdSelection::All,
            samples_per_identity: 200,
            seed: 42,
            max_n: 6,
            rational_height_bound: 12,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    pub seed: u64,
    /// Samples per theorem-to-theorem transport row.
    pub samples: u64,
    /// Expansion points for the full `0 <= s <= r <= 8` binomial-derivative grid.
    pub d1_points: u64,
    /// Samples of the harmonic-derivative relation.
    pub d2_samples: u64,
    pub max_n: u64,
    pub rational_height_bound: i64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            seed: 42,
            samples: 50,
            d1_points: 50,
            d2_samples: 200,
            max_n: 6,
            rational_height_bound: 12,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LimitConfig {
    pub seed: u64,
    pub samples: u64,
    pub expansion_order: usize,
    pub max_n: u64,
    pub rational_height_bound: i64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            seed: 42,
            samples: 50,
            expansion_order: 5,
            max_n: 6,
            rational_height_bound: 12,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LemmaConfig {
    pub seed: u64,
    pub s_max: u64,
    pub trials: u64,
    pub coefficient_height: i64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig { seed: 42, s_max: 5, trials: 100, coefficient_height: 4 }
    }
}

// ---------------------------------------------------------------------------
// Registry sweep
// ---------------------------------------------------------------------------

/// Draws constraint-satisfying parameters for one entry.
fn sample_params(spec: &IdentitySpec, rng: &mut KeyedRng, cfg: &SweepConfig) -> Vec<(String, ParamValue)> {
    let h = cfg.rational_height_bound;
    let rat = |rng: &mut KeyedRng| ParamValue::Rat(rng.rational(h));
    match spec.body {
        EntryBody::Saalschutz | EntryBody::ContiguousSaalschutz => vec![
            ("a".into(), rat(rng)),
            ("b".into(), rat(rng)),
            ("c".into(), rat(rng)),
            ("n".into(), ParamValue::Nat(rng.nat_in(0, cfg.max_n))),
        ],
        EntryBody::Subst { .. } | EntryBody::Prelimit { .. } => vec![
            ("x".into(), rat(rng)),
            ("y".into(), rat(rng)),
            ("z".into(), rat(rng)),
            ("n".into(), ParamValue::Nat(rng.nat_in(0, cfg.max_n))),
        ],
        EntryBody::Theorem(i) => {
            let min_n = theorem_shape(i).min_n;
            vec![
                ("x".into(), rat(rng)),
                ("y".into(), rat(rng)),
                ("n".into(), ParamValue::Nat(rng.nat_in(min_n, cfg.max_n.max(min_n)))),
            ]
        }
        EntryBody::Corollary(i) => {
            let shape = theorem_shape(i);
            let n = rng.nat_in(shape.min_n, cfg.max_n.max(shape.min_n));
            let (p, q) = match shape.family {
                WeightFamily::First => {
                    let q = rng.nat_in(0, 8);
                    (rng.nat_in(q, q + 8), q)
                }
                WeightFamily::Second => {
                    let q = rng.nat_in(n, n + 6);
                    let p = if matches!(i, 4 | 8) { rng.nat_in(0, 8) } else { rng.nat_in(q, q + 6) };
                    (p, q)
                }
            };
            vec![
                ("p".into(), ParamValue::Nat(p)),
                ("q".into(), ParamValue::Nat(q)),
                ("n".into(), ParamValue::Nat(n)),
            ]
        }
        EntryBody::BinomialDerivative => {
            let r = rng.nat_in(0, 8);
            vec![
                ("x0".into(), rat(rng)),
                ("r".into(), ParamValue::Nat(r)),
                ("s".into(), ParamValue::Nat(rng.nat_in(0, r))),
            ]
        }
        EntryBody::HarmonicDerivative => vec![
            ("x0".into(), rat(rng)),
            ("n".into(), ParamValue::Nat(rng.nat_in(0, 10))),
            ("ell".into(), ParamValue::Nat(rng.nat_in(1, 3))),
        ],
        EntryBody::ProductRule => vec![
            ("x0".into(), rat(rng)),
            ("s".into(), ParamValue::Nat(rng.nat_in(1, 5))),
            ("seed".into(), ParamValue::Nat(rng.next_u64() >> 1)),
        ],
    }
}

fn params_echo(pairs: impl Iterator<Item = (&'static str, ParamValue)>) -> Map<String, Value> {
    let mut map = Map::new();
    for (name, value) in pairs {
        map.insert(name.to_string(), Value::String(value.render()));
    }
    map
}

/// Runs the randomized sweep described by `cfg` and returns the report.
pub fn sweep(registry: &Registry, cfg: &SweepConfig) -> Result<VerificationReport, RegistryError> {
    let started = Instant::now();
    let specs: Vec<&IdentitySpec> = match &cfg.identity_ids {
        IdSelection::All => registry.entries().iter().collect(),
        IdSelection::Ids(ids) => ids
            .iter()
            .map(|id| {
                registry
                    .lookup(id)
                    .ok_or_else(|| RegistryError::UnknownIdentity(id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut row = IdentityReport::new(spec.id);
        for i in 0..cfg.samples_per_identity {
            let mut rng = KeyedRng::from_key(cfg.seed, spec.id, i);
            let params = sample_params(spec, &mut rng, cfg);
            let bound = spec.bind(&params).expect("sampler matches schema");
            let ev = evaluate_bound(spec, &bound);
            let failure = if ev.verdict == Verdict::Unequal {
                Some(FailureRecord {
                    params: params_echo(bound.iter().map(|(n, v)| (n, v.clone()))),
                    lhs: ev.lhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
                    rhs: ev.rhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
                })
            } else {
                None
            };
            row.record(ev.verdict, failure);
        }
        rows.push(row);
    }
    Ok(VerificationReport {
        per_identity: rows,
        global: GlobalInfo {
            seed: cfg.seed,
            config: serde_json::to_value(cfg).expect("config serializes"),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    })
}

// ---------------------------------------------------------------------------
// Exhaustive corollary grid
// ---------------------------------------------------------------------------

/// Every `(p, q, n)` with `p <= p_max` admitted by corollary `index`.
fn corollary_grid_points(index: usize, p_max: u64) -> Vec<(u64, u64, u64)> {
    let shape = theorem_shape(index);
    let mut points = Vec::new();
    for p in 0..=p_max {
        for q in 0..=p {
            let n_hi = match shape.family {
                WeightFamily::First => p_max,
                WeightFamily::Second => q,
            };
            for n in shape.min_n..=n_hi {
                points.push((p, q, n));
            }
        }
    }
    points
}

/// Exhaustively checks `C1`..`C10` on the integer grid `p <= p_max` (with
/// the per-corollary constraints on `q` and `n`), plus the
/// corollary-vs-theorem consistency replay on the same grid.
pub fn corollary_grid(registry: &Registry, p_max: u64) -> VerificationReport {
    let started = Instant::now();
    let mut rows = Vec::new();
    for index in 1..=10usize {
        let id = format!("C{index}");
        let spec = registry.lookup(&id).expect("corollaries are registered");
        let mut row = IdentityReport::new(&id);
        let mut consistency = IdentityReport::new(format!("T{index}<->C{index}"));
        for (p, q, n) in corollary_grid_points(index, p_max) {
            let params = vec![
                ("p".to_string(), ParamValue::Nat(p)),
                ("q".to_string(), ParamValue::Nat(q)),
                ("n".to_string(), ParamValue::Nat(n)),
            ];
            let bound = spec.bind(&params).expect("grid matches schema");
            let ev = evaluate_bound(spec, &bound);
            let failure = if ev.verdict == Verdict::Unequal {
                Some(FailureRecord {
                    params: params_echo(bound.iter().map(|(n, v)| (n, v.clone()))),
                    lhs: ev.lhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
                    rhs: ev.rhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
                })
            } else {
                None
            };
            row.record(ev.verdict, failure);

            let echo = || {
                let mut m = Map::new();
                m.insert("p".into(), Value::String(p.to_string()));
                m.insert("q".into(), Value::String(q.to_string()));
                m.insert("n".into(), Value::String(n.to_string()));
                m
            };
            match corollary_consistency(index, p, q, n) {
                ConsistencyOutcome::Consistent => consistency.record(Verdict::Equal, None),
                ConsistencyOutcome::Pole(_) => consistency.record(Verdict::Pole, None),
                ConsistencyOutcome::ConstraintViolation => {
                    consistency.record(Verdict::ConstraintViolation, None)
                }
                ConsistencyOutcome::Inconsistent { detail } => consistency.record(
                    Verdict::Unequal,
                    Some(FailureRecord { params: echo(), lhs: detail, rhs: String::new() }),
                ),
            }
        }
        rows.push(row);
        rows.push(consistency);
    }
    VerificationReport {
        per_identity: rows,
        global: GlobalInfo {
            seed: 0,
            config: serde_json::json!({ "grid_p_max": p_max }),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    }
}

// ---------------------------------------------------------------------------
// Derivative chain
// ---------------------------------------------------------------------------

/// The jet-transport pairs: differentiating the source theorem's two sides
/// in `x` reproduces `-ell_source` times the target theorem's sides.
pub const CHAIN_PAIRS: [(usize, usize); 6] = [(4, 3), (3, 5), (5, 6), (8, 7), (7, 9), (9, 10)];

/// Certifies the two derivative relations and the theorem-to-theorem
/// derivative transport.
pub fn verify_derivative_chain(registry: &Registry, cfg: &ChainConfig) -> VerificationReport {
    let started = Instant::now();
    let mut rows = Vec::new();

    // Binomial-derivative relation on the full (r, s) grid per point.
    let d1 = registry.lookup("D1").expect("registered");
    let mut row = IdentityReport::new("D1");
    for i in 0..cfg.d1_points {
        let mut rng = KeyedRng::from_key(cfg.seed, "D1", i);
        let x0 = rng.rational(cfg.rational_height_bound);
        for r in 0..=8u64 {
            for s in 0..=r {
                let params = vec![
                    ("x0".to_string(), ParamValue::Rat(x0.clone())),
                    ("r".to_string(), ParamValue::Nat(r)),
                    ("s".to_string(), ParamValue::Nat(s)),
                ];
                let bound = d1.bind(&params).expect("schema");
                let ev = evaluate_bound(d1, &bound);
                let failure = (ev.verdict == Verdict::Unequal).then(|| FailureRecord {
                    params: params_echo(bound.iter().map(|(n, v)| (n, v.clone()))),
                    lhs: ev.lhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
                    rhs: ev.rhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
                });
                row.record(ev.verdict, failure);
            }
        }
    }
    rows.push(row);

    // Harmonic-derivative relation.
    let d2 = registry.lookup("D2").expect("registered");
    let mut row = IdentityReport::new("D2");
    for i in 0..cfg.d2_samples {
        let mut rng = KeyedRng::from_key(cfg.seed, "D2", i);
        let params = vec![
            ("x0".to_string(), ParamValue::Rat(rng.rational(cfg.rational_height_bound))),
            ("n".to_string(), ParamValue::Nat(rng.nat_in(0, 10))),
            ("ell".to_string(), ParamValue::Nat(rng.nat_in(1, 3))),
        ];
        let bound = d2.bind(&params).expect("schema");
        let ev = evaluate_bound(d2, &bound);
        let failure = (ev.verdict == Verdict::Unequal).then(|| FailureRecord {
            params: params_echo(bound.iter().map(|(n, v)| (n, v.clone()))),
            lhs: ev.lhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
            rhs: ev.rhs.as_ref().map(|o| o.to_string()).unwrap_or_default(),
        });
        row.record(ev.verdict, failure);
    }
    rows.push(row);

    for (src, dst) in CHAIN_PAIRS {
        let label = format!("T{src}->T{dst}");
        let mut row = IdentityReport::new(&label);
        let min_n = theorem_shape(src).min_n.max(theorem_shape(dst).min_n);
        for i in 0..cfg.samples {
            let mut rng = KeyedRng::from_key(cfg.seed, &label, i);
            let x0 = rng.rational(cfg.rational_height_bound);
            let y = rng.rational(cfg.rational_height_bound);
            let n = rng.nat_in(min_n, cfg.max_n.max(min_n));
            let (verdict, failure) = check_chain_pair(src, dst, &x0, &y, n);
            row.record(verdict, failure);
        }
        rows.push(row);
    }

    VerificationReport {
        per_identity: rows,
        global: GlobalInfo {
            seed: cfg.seed,
            config: serde_json::to_value(cfg).expect("config serializes"),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    }
}

fn check_chain_pair(
    src: usize,
    dst: usize,
    x0: &Rational,
    y: &Rational,
    n: u64,
) -> (Verdict, Option<FailureRecord>) {
    let xj = Jet::variable(x0.clone(), 1);
    let yj = Jet::constant(y.clone(), 1);
    let outcome = (|| -> Result<(Verdict, Option<FailureRecord>), crate::scalar::Pole> {
        let src_lhs = theorem_lhs(src, &xj, &yj, n)?;
        let src_rhs = theorem_rhs(src, &xj, &yj, n)?;
        let dst_lhs = theorem_lhs(dst, x0, y, n)?;
        let dst_rhs = theorem_rhs(dst, x0, y, n)?;
        let descent = Rational::from_int(derivative_descent_factor(src));
        let lhs_ok = src_lhs.coeff(1) == &(&dst_lhs * &descent);
        let rhs_ok = src_rhs.coeff(1) == &(&dst_rhs * &descent);
        if lhs_ok && rhs_ok {
            Ok((Verdict::Equal, None))
        } else {
            let mut params = Map::new();
            params.insert("x".into(), Value::String(x0.to_string()));
            params.insert("y".into(), Value::String(y.to_string()));
            params.insert("n".into(), Value::String(n.to_string()));
            let (jet_side, scaled) = if !lhs_ok {
                (src_lhs.coeff(1).clone(), &dst_lhs * &descent)
            } else {
                (src_rhs.coeff(1).clone(), &dst_rhs * &descent)
            };
            Ok((
                Verdict::Unequal,
                Some(FailureRecord {
                    params,
                    lhs: jet_side.to_string(),
                    rhs: scaled.to_string(),
                }),
            ))
        }
    })();
    match outcome {
        Ok(result) => result,
        Err(_) => (Verdict::Pole, None),
    }
}

// ---------------------------------------------------------------------------
// Limit extraction
// ---------------------------------------------------------------------------

/// The pre-limit identities and the theorems their limits reproduce.
pub const LIMIT_PAIRS: [(WeightFamily, u32, usize); 4] = [
    (WeightFamily::First, 1, 1),
    (WeightFamily::First, 2, 2),
    (WeightFamily::Second, 1, 3),
    (WeightFamily::Second, 2, 7),
];

/// Certifies that the pre-limit identities converge to their theorems, and
/// that the two standalone difference-quotient limits take their stated
/// values. All limits are read off as constant jet coefficients after
/// prefix-cancelling division.
pub fn verify_limits(cfg: &LimitConfig) -> VerificationReport {
    let started = Instant::now();
    let mut rows = Vec::new();

    for (family, t, theorem) in LIMIT_PAIRS {
        let prelimit_name = match (family, t) {
            (WeightFamily::First, 1) => "P1",
            (WeightFamily::First, 2) => "P2",
            (WeightFamily::Second, 1) => "P3",
            (WeightFamily::Second, 2) => "P4",
            _ => unreachable!(),
        };
        let label = format!("{prelimit_name}->T{theorem}");
        let mut row = IdentityReport::new(&label);
        let min_n = theorem_shape(theorem).min_n;
        for i in 0..cfg.samples {
            let mut rng = KeyedRng::from_key(cfg.seed, &label, i);
            let x = rng.rational(cfg.rational_height_bound);
            let y = rng.rational(cfg.rational_height_bound);
            let n = rng.nat_in(min_n, cfg.max_n.max(min_n));
            let (verdict, failure) = check_limit_pair(family, t, theorem, &x, &y, n, cfg.expansion_order);
            row.record(verdict, failure);
        }
        rows.push(row);
    }

    for fragment in ["limit-a", "limit-b"] {
        let mut row = IdentityReport::new(fragment);
        for i in 0..cfg.samples {
            let mut rng = KeyedRng::from_key(cfg.seed, fragment, i);
            let x = rng.rational(cfg.rational_height_bound);
            let y = rng.rational(cfg.rational_height_bound);
            let n = rng.nat_in(0, cfg.max_n);
            let (verdict, failure) =
                check_limit_fragment(fragment, &x, &y, n, cfg.expansion_order);
            row.record(verdict, failure);
        }
        rows.push(row);
    }

    VerificationReport {
        per_identity: rows,
        global: GlobalInfo {
            seed: cfg.seed,
            config: serde_json::to_value(cfg).expect("config serializes"),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    }
}

fn check_limit_pair(
    family: WeightFamily,
    t: u32,
    theorem: usize,
    x: &Rational,
    y: &Rational,
    n: u64,
    order: usize,
) -> (Verdict, Option<FailureRecord>) {
    let z0 = limit_point(family, x, y, n);
    let zj = Jet::variable(z0, order);
    let xj = Jet::constant(x.clone(), order);
    let yj = Jet::constant(y.clone(), order);
    let outcome = (|| -> Result<(Verdict, Option<FailureRecord>), crate::scalar::Pole> {
        let lhs_jet = prelimit_lhs(family, t, &xj, &yj, &zj, n)?;
        let rhs_jet = prelimit_rhs(family, t, &xj, &yj, &zj, n)?;
        let t_lhs = theorem_lhs(theorem, x, y, n)?;
        let t_rhs = theorem_rhs(theorem, x, y, n)?;
        let lhs_ok = lhs_jet.coeff(0) == &t_lhs;
        let rhs_ok = rhs_jet.coeff(0) == &t_rhs;
        if lhs_ok && rhs_ok && t_lhs == t_rhs {
            Ok((Verdict::Equal, None))
        } else {
            let mut params = Map::new();
            params.insert("x".into(), Value::String(x.to_string()));
            params.insert("y".into(), Value::String(y.to_string()));
            params.insert("n".into(), Value::String(n.to_string()));
            Ok((
                Verdict::Unequal,
                Some(FailureRecord {
                    params,
                    lhs: format!("limits ({}, {})", lhs_jet.coeff(0), rhs_jet.coeff(0)),
                    rhs: format!("theorem sides ({t_lhs}, {t_rhs})"),
                }),
            ))
        }
    })();
    match outcome {
        Ok(result) => result,
        Err(_) => (Verdict::Pole, None),
    }
}

/// The two standalone limits: difference quotients of first-order harmonic
/// numbers whose limits are second-order harmonic numbers.
fn check_limit_fragment(
    fragment: &str,
    x: &Rational,
    y: &Rational,
    n: u64,
    order: usize,
) -> (Verdict, Option<FailureRecord>) {
    let z0 = limit_point(WeightFamily::First, x, y, n);
    let zj = Jet::variable(z0, order);
    let outcome = (|| -> Result<(Verdict, Option<FailureRecord>), crate::scalar::Pole> {
        let xj = zj.lift_rational(x);
        let yj = zj.lift_rational(y);
        let (num, target) = match fragment {
            "limit-a" => {
                let num = harmonic_shifted(&xj.sub(&yj), n, 1)?
                    .add(&harmonic_shifted(&xj.sub(&zj).add_i64(-1), n, 1)?);
                let target = -harmonic_shifted(&(x - y), n, 2)?;
                (num, target)
            }
            "limit-b" => {
                let num = harmonic_shifted(&xj, n, 1)?
                    .add(&harmonic_shifted(&xj.sub(&yj).sub(&zj).add_i64(-1), n, 1)?);
                let target = -harmonic_shifted(x, n, 2)?;
                (num, target)
            }
            _ => unreachable!(),
        };
        let den = xj.mul(&xj.lift_i64(2)).sub(&yj).sub(&zj).add_i64(n as i64);
        let quotient = num
            .div(&den)
            .map_err(|_| crate::scalar::Pole::new("2x - y - z + n"))?;
        if quotient.coeff(0) == &target {
            Ok((Verdict::Equal, None))
        } else {
            let mut params = Map::new();
            params.insert("x".into(), Value::String(x.to_string()));
            params.insert("y".into(), Value::String(y.to_string()));
            params.insert("n".into(), Value::String(n.to_string()));
            Ok((
                Verdict::Unequal,
                Some(FailureRecord {
                    params,
                    lhs: quotient.coeff(0).to_string(),
                    rhs: target.to_string(),
                }),
            ))
        }
    })();
    match outcome {
        Ok(result) => result,
        Err(_) => (Verdict::Pole, None),
    }
}

// ---------------------------------------------------------------------------
// Product-rule sweep
// ---------------------------------------------------------------------------

pub(crate) fn draw_factors_from(rng: &mut KeyedRng, s: u64, height: i64) -> Vec<LinearFractional> {
    let mut factors = Vec::with_capacity(s as usize);
    while factors.len() < s as usize {
        let a = rng.rational(height);
        let b = rng.rational(height);
        let c = rng.rational(height);
        let d = rng.rational(height);
        if (a.is_zero() && b.is_zero()) || (c.is_zero() && d.is_zero()) {
            continue;
        }
        factors.push(LinearFractional::new(a, b, c, d));
    }
    factors
}

/// Random product-rule instances with up to `s_max` factors.
pub fn lemma_sweep(cfg: &LemmaConfig) -> VerificationReport {
    let started = Instant::now();
    let mut row = IdentityReport::new("L1");
    for i in 0..cfg.trials {
        let mut rng = KeyedRng::from_key(cfg.seed, "L1", i);
        let s = rng.nat_in(1, cfg.s_max.max(1));
        let x0 = rng.rational(6);
        let factors = draw_factors_from(&mut rng, s, cfg.coefficient_height);
        match check_lemma1(&factors, &x0) {
            LemmaOutcome::Pass => row.record(Verdict::Equal, None),
            LemmaOutcome::Skipped { .. } => row.record(Verdict::Pole, None),
            LemmaOutcome::Fail { jet_derivative, closed_form } => {
                let mut params = Map::new();
                params.insert("x0".into(), Value::String(x0.to_string()));
                params.insert("s".into(), Value::String(s.to_string()));
                row.record(
                    Verdict::Unequal,
                    Some(FailureRecord {
                        params,
                        lhs: jet_derivative.to_string(),
                        rhs: closed_form.to_string(),
                    }),
                );
            }
        }
    }
    VerificationReport {
        per_identity: vec![row],
        global: GlobalInfo {
            seed: cfg.seed,
            config: serde_json::to_value(cfg).expect("config serializes"),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    }
}

// ---------------------------------------------------------------------------
// Full default suite
// ---------------------------------------------------------------------------

/// Everything the default verification run covers.
pub struct DefaultSuite {
    pub sweep: VerificationReport,
    pub corollary_grid: VerificationReport,
    pub chain: VerificationReport,
    pub limits: VerificationReport,
    pub lemma: VerificationReport,
}

impl DefaultSuite {
    pub fn total_failures(&self) -> u64 {
        self.sweep.total_failures()
            + self.corollary_grid.total_failures()
            + self.chain.total_failures()
            + self.limits.total_failures()
            + self.lemma.total_failures()
    }
}

/// Runs the whole default suite at the given seed: the full-registry random
/// sweep, the exhaustive corollary grid, the derivative chain, the limit
/// checks, and the product-rule sweep.
pub fn run_default_suite(registry: &Registry, seed: u64) -> DefaultSuite {
    let sweep_report = sweep(
        registry,
        &SweepConfig { seed, ..SweepConfig::default() },
    )
    .expect("all ids are registered");
    DefaultSuite {
        sweep: sweep_report,
        corollary_grid: corollary_grid(registry, 8),
        chain: verify_derivative_chain(registry, &ChainConfig { seed, ..ChainConfig::default() }),
        limits: verify_limits(&LimitConfig { seed, ..LimitConfig::default() }),
        lemma: lemma_sweep(&LemmaConfig { seed, ..LemmaConfig::default() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_of_saalschutz_has_no_failures() {
        let registry = Registry::standard();
        let cfg = SweepConfig {
            identity_ids: IdSelection::Ids(vec!["S0".into()]),
            samples_per_identity: 100,
            seed: 42,
            max_n: 8,
            rational_height_bound: 20,
        };
        let report = sweep(&registry, &cfg).unwrap();
        assert_eq!(report.total_failures(), 0);
        assert!(report.arithmetic_holds());
        let row = &report.per_identity[0];
        assert_eq!(row.attempted, 100);
        assert!(row.passed > 0);
    }

    #[test]
    fn sweep_rejects_unknown_ids() {
        let registry = Registry::standard();
        let cfg = SweepConfig {
            identity_ids: IdSelection::Ids(vec!["T42".into()]),
            samples_per_identity: 1,
            ..SweepConfig::default()
        };
        assert!(matches!(
            sweep(&registry, &cfg),
            Err(RegistryError::UnknownIdentity(_))
        ));
    }

    #[test]
    fn sweep_is_deterministic_per_identity() {
        let registry = Registry::standard();
        let solo = SweepConfig {
            identity_ids: IdSelection::Ids(vec!["T3".into()]),
            samples_per_identity: 25,
            ..SweepConfig::default()
        };
        let combined = SweepConfig {
            identity_ids: IdSelection::Ids(vec!["T1".into(), "T3".into()]),
            samples_per_identity: 25,
            ..SweepConfig::default()
        };
        let a = sweep(&registry, &solo).unwrap();
        let b = sweep(&registry, &combined).unwrap();
        let t3_solo = &a.per_identity[0];
        let t3_combined = &b.per_identity[1];
        assert_eq!(t3_solo.passed, t3_combined.passed);
        assert_eq!(t3_solo.poles_skipped, t3_combined.poles_skipped);
    }

    #[test]
    fn small_grid_is_exhaustive_and_clean() {
        let registry = Registry::standard();
        let report = corollary_grid(&registry, 4);
        assert_eq!(report.total_failures(), 0);
        assert!(report.arithmetic_holds());
        // C1 row: p <= 4, q <= p, n <= 4 -> 15 * 5 points.
        let c1 = report.per_identity.iter().find(|r| r.id == "C1").unwrap();
        assert_eq!(c1.attempted, 75);
        assert!(report.per_identity.iter().any(|r| r.id == "T7<->C7"));
    }

    #[test]
    fn chain_and_limits_pass_on_small_runs() {
        let registry = Registry::standard();
        let chain = verify_derivative_chain(
            &registry,
            &ChainConfig { samples: 5, d1_points: 2, d2_samples: 10, ..ChainConfig::default() },
        );
        assert_eq!(chain.total_failures(), 0, "{}", chain.to_text());
        let limits = verify_limits(&LimitConfig { samples: 5, ..LimitConfig::default() });
        assert_eq!(limits.total_failures(), 0, "{}", limits.to_text());
        for row in &limits.per_identity {
            assert!(row.passed > 0, "row {} never passed", row.id);
        }
        let lemma = lemma_sweep(&LemmaConfig { trials: 20, ..LemmaConfig::default() });
        assert_eq!(lemma.total_failures(), 0);
    }

    #[test]
    fn limit_fragment_spot_values() {
        // At n=1, x=1, y=1/2 the first fragment's limit is
        // -H_1^<2>(x - y) = -4/9 and the second's is -H_1^<2>(x) = -1/4.
        let x = Rational::ratio(1, 1);
        let y = Rational::ratio(1, 2);
        let n = 1;
        let z0 = limit_point(WeightFamily::First, &x, &y, n);
        assert_eq!(z0, Rational::ratio(5, 2));
        let zj = Jet::variable(z0, 5);
        let xj = zj.lift_rational(&x);
        let yj = zj.lift_rational(&y);
        let den = xj.mul(&xj.lift_i64(2)).sub(&yj).sub(&zj).add_i64(n as i64);

        let num_a = harmonic_shifted(&xj.sub(&yj), n, 1)
            .unwrap()
            .add(&harmonic_shifted(&xj.sub(&zj).add_i64(-1), n, 1).unwrap());
        let limit_a = num_a.div(&den).unwrap();
        assert_eq!(limit_a.coeff(0), &Rational::ratio(-4, 9));

        let num_b = harmonic_shifted(&xj, n, 1)
            .unwrap()
            .add(&harmonic_shifted(&xj.sub(&yj).sub(&zj).add_i64(-1), n, 1).unwrap());
        let limit_b = num_b.div(&den).unwrap();
        assert_eq!(limit_b.coeff(0), &Rational::ratio(-1, 4));
    }

    #[test]
    fn prelimit_limit_spot_values() {
        // P1 -> T1 at (x=1, y=1/2, n=1): both constant terms are -7/64.
        let x = Rational::ratio(1, 1);
        let y = Rational::ratio(1, 2);
        let zj = Jet::variable(limit_point(WeightFamily::First, &x, &y, 1), 5);
        let xj = zj.lift_rational(&x);
        let yj = zj.lift_rational(&y);
        let lhs = prelimit_lhs(WeightFamily::First, 1, &xj, &yj, &zj, 1).unwrap();
        let rhs = prelimit_rhs(WeightFamily::First, 1, &xj, &yj, &zj, 1).unwrap();
        assert_eq!(lhs.coeff(0), &Rational::ratio(-7, 64));
        assert_eq!(rhs.coeff(0), &Rational::ratio(-7, 64));

        // P3 -> T3 at (x=2, y=1, n=1): both constant terms are -1/9.
        let x = Rational::ratio(2, 1);
        let y = Rational::ratio(1, 1);
        let zj = Jet::variable(limit_point(WeightFamily::Second, &x, &y, 1), 5);
        let xj = zj.lift_rational(&x);
        let yj = zj.lift_rational(&y);
        let lhs = prelimit_lhs(WeightFamily::Second, 1, &xj, &yj, &zj, 1).unwrap();
        let rhs = prelimit_rhs(WeightFamily::Second, 1, &xj, &yj, &zj, 1).unwrap();
        assert_eq!(lhs.coeff(0), &Rational::ratio(-1, 9));
        assert_eq!(rhs.coeff(0), &Rational::ratio(-1, 9));
    }

    #[test]
    fn id_selection_serde_forms() {
        assert_eq!(serde_json::to_string(&IdSelection::All).unwrap(), "\"all\"");
        let ids: IdSelection = serde_json::from_str("[\"S0\", \"T1\"]").unwrap();
        assert_eq!(ids, IdSelection::Ids(vec!["S0".into(), "T1".into()]));
        let all: IdSelection = serde_json::from_str("\"all\"").unwrap();
        assert_eq!(all, IdSelection::All);
        assert!(serde_json::from_str::<IdSelection>("\"some\"").is_err());
    }
}
