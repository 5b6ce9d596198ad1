//! C ABI for the harmonic-identity verification engine.
//!
//! Everything crosses the boundary as UTF-8 strings: parameters and reports
//! are JSON, rationals use the exact `p/q` text form. The engine handle is
//! opaque; every function returns a [`HidStatus`] and writes its result into
//! an out-pointer. Strings returned through out-pointers are owned by the
//! library and must be released with [`hid_string_free`].
//!
//! ```c
//! HidEngine *engine = hid_engine_new();
//! char *out = NULL;
//! HidStatus status = hid_eval(engine, "T3", "{\"n\":\"1\",\"x\":\"2\",\"y\":\"1\"}", &out);
//! // out: {"id":"T3","lhs":"-1/9","rhs":"-1/9","verdict":"equal"}
//! hid_string_free(out);
//! hid_engine_free(engine);
//! ```

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::Serialize;
use serde_json::Value;

use hid_core::registry::{evaluate_identity, ParamKind, ParamValue, Registry, RegistryError};
use hid_core::scalar::EvalOutcome;
use hid_core::sweep::{
    lemma_sweep, sweep, verify_derivative_chain, verify_limits, ChainConfig, LemmaConfig,
    LimitConfig, SweepConfig,
};

/// Opaque verification engine (registry plus evaluators).
pub struct HidEngine {
    registry: Registry,
}

/// Status code returned by every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HidStatus {
    HidOk = 0,
    HidNullPointer = 1,
    HidInvalidUtf8 = 2,
    HidBadJson = 3,
    HidUnknownIdentity = 4,
    HidBadParams = 5,
    HidInternalError = 6,
}

/// Creates an engine. Never fails; release with [`hid_engine_free`].
#[no_mangle]
pub extern "C" fn hid_engine_new() -> *mut HidEngine {
    Box::into_raw(Box::new(HidEngine { registry: Registry::standard() }))
}

/// Releases an engine created by [`hid_engine_new`]. NULL is a no-op.
///
/// # Safety
/// `engine` must be NULL or a pointer obtained from [`hid_engine_new`] that
/// has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn hid_engine_free(engine: *mut HidEngine) {
    if !engine.is_null() {
        drop(unsafe { Box::from_raw(engine) });
    }
}

/// Releases a string returned through an out-pointer. NULL is a no-op.
///
/// # Safety
/// `text` must be NULL or a pointer this library wrote into an out-pointer,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hid_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Writes a JSON array describing every registry entry (id, parameter
/// schema, constraints, anchor, kind) into `out_json`.
///
/// # Safety
/// `engine` must come from [`hid_engine_new`]; `out_json` must be a valid
/// pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn hid_list_identities(
    engine: *const HidEngine,
    out_json: *mut *mut c_char,
) -> HidStatus {
    let Some(engine) = engine.as_ref() else { return HidStatus::HidNullPointer };
    if out_json.is_null() {
        return HidStatus::HidNullPointer;
    }
    guarded(out_json, || {
        #[derive(Serialize)]
        struct ParamRow {
            name: &'static str,
            kind: &'static str,
        }
        #[derive(Serialize)]
        struct EntryRow {
            id: &'static str,
            params: Vec<ParamRow>,
            constraints: &'static str,
            anchor: &'static str,
            kind: &'static str,
        }
        let rows: Vec<EntryRow> = engine
            .registry
            .entries()
            .iter()
            .map(|spec| EntryRow {
                id: spec.id,
                params: spec
                    .params
                    .iter()
                    .map(|p| ParamRow { name: p.name, kind: p.kind.describe() })
                    .collect(),
                constraints: spec.constraints,
                anchor: spec.anchor,
                kind: match spec.kind {
                    hid_core::registry::EntryKind::Identity => "identity",
                    hid_core::registry::EntryKind::Relation => "relation",
                },
            })
            .collect();
        Ok(serde_json::to_string_pretty(&rows).expect("serializable"))
    })
}

/// Evaluates identity `id` at the parameters given as a JSON object mapping
/// parameter names to values (strings in the `p/q` form, or plain JSON
/// integers for the integer-kind parameters). Writes a JSON object with the
/// exact `lhs`, `rhs`, and `verdict`.
///
/// # Safety
/// Pointer arguments must be valid; `id` and `params_json` must be
/// NUL-terminated UTF-8.
#[no_mangle]
pub unsafe extern "C" fn hid_eval(
    engine: *const HidEngine,
    id: *const c_char,
    params_json: *const c_char,
    out_json: *mut *mut c_char,
) -> HidStatus {
    let Some(engine) = engine.as_ref() else { return HidStatus::HidNullPointer };
    if id.is_null() || params_json.is_null() || out_json.is_null() {
        return HidStatus::HidNullPointer;
    }
    let Ok(id) = CStr::from_ptr(id).to_str() else { return HidStatus::HidInvalidUtf8 };
    let Ok(params_text) = CStr::from_ptr(params_json).to_str() else {
        return HidStatus::HidInvalidUtf8;
    };
    guarded(out_json, || {
        let spec = engine
            .registry
            .lookup(id)
            .ok_or(HidStatus::HidUnknownIdentity)?;
        let object: Value =
            serde_json::from_str(params_text).map_err(|_| HidStatus::HidBadJson)?;
        let Value::Object(map) = object else { return Err(HidStatus::HidBadJson) };
        let mut params = Vec::with_capacity(map.len());
        for (name, value) in map {
            let kind = spec
                .params
                .iter()
                .find(|p| p.name == name)
                .map(|p| p.kind)
                .ok_or(HidStatus::HidBadParams)?;
            params.push((name, parse_param(kind, &value).ok_or(HidStatus::HidBadParams)?));
        }
        let evaluation = evaluate_identity(&engine.registry, id, &params).map_err(|e| match e {
            RegistryError::UnknownIdentity(_) => HidStatus::HidUnknownIdentity,
            _ => HidStatus::HidBadParams,
        })?;

        #[derive(Serialize)]
        struct EvalRow {
            id: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            lhs: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            rhs: Option<String>,
            verdict: &'static str,
        }
        let render = |o: &Option<EvalOutcome>| o.as_ref().map(|v| v.to_string());
        let row = EvalRow {
            id: evaluation.id.clone(),
            lhs: render(&evaluation.lhs),
            rhs: render(&evaluation.rhs),
            verdict: evaluation.verdict.as_str(),
        };
        Ok(serde_json::to_string_pretty(&row).expect("serializable"))
    })
}

/// Runs a verification sweep described by a JSON [`SweepConfig`]:
///
/// ```json
/// {"identity_ids": "all", "samples_per_identity": 200, "seed": 42,
///  "max_n": 6, "rational_height_bound": 12}
/// ```
///
/// Missing fields take their defaults. Writes the full verification report
/// as JSON. A sweep with failures still returns `HidOk`; inspect the report.
///
/// # Safety
/// Pointer arguments must be valid; `config_json` must be NUL-terminated
/// UTF-8.
#[no_mangle]
pub unsafe extern "C" fn hid_verify(
    engine: *const HidEngine,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> HidStatus {
    let Some(engine) = engine.as_ref() else { return HidStatus::HidNullPointer };
    if config_json.is_null() || out_json.is_null() {
        return HidStatus::HidNullPointer;
    }
    let Ok(config_text) = CStr::from_ptr(config_json).to_str() else {
        return HidStatus::HidInvalidUtf8;
    };
    guarded(out_json, || {
        let config: SweepConfig =
            serde_json::from_str(config_text).map_err(|_| HidStatus::HidBadJson)?;
        let report = sweep(&engine.registry, &config).map_err(|e| match e {
            RegistryError::UnknownIdentity(_) => HidStatus::HidUnknownIdentity,
            _ => HidStatus::HidBadParams,
        })?;
        Ok(report.to_json())
    })
}

/// Certifies the derivative relations and the theorem-to-theorem derivative
/// transport. `config_json` is a JSON [`ChainConfig`]; `{}` takes every
/// default. Writes the verification report as JSON.
///
/// # Safety
/// Pointer arguments must be valid; `config_json` must be NUL-terminated
/// UTF-8.
#[no_mangle]
pub unsafe extern "C" fn hid_chain(
    engine: *const HidEngine,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> HidStatus {
    let Some(engine) = engine.as_ref() else { return HidStatus::HidNullPointer };
    if config_json.is_null() || out_json.is_null() {
        return HidStatus::HidNullPointer;
    }
    let Ok(config_text) = CStr::from_ptr(config_json).to_str() else {
        return HidStatus::HidInvalidUtf8;
    };
    guarded(out_json, || {
        let config: ChainConfig =
            serde_json::from_str(config_text).map_err(|_| HidStatus::HidBadJson)?;
        Ok(verify_derivative_chain(&engine.registry, &config).to_json())
    })
}

/// Certifies the pre-limit-to-theorem limit extractions. `config_json` is a
/// JSON [`LimitConfig`]; `{}` takes every default.
///
/// # Safety
/// Pointer arguments must be valid; `config_json` must be NUL-terminated
/// UTF-8.
#[no_mangle]
pub unsafe extern "C" fn hid_limits(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> HidStatus {
    if config_json.is_null() || out_json.is_null() {
        return HidStatus::HidNullPointer;
    }
    let Ok(config_text) = CStr::from_ptr(config_json).to_str() else {
        return HidStatus::HidInvalidUtf8;
    };
    guarded(out_json, || {
        let config: LimitConfig =
            serde_json::from_str(config_text).map_err(|_| HidStatus::HidBadJson)?;
        Ok(verify_limits(&config).to_json())
    })
}

/// Runs random product-rule instances. `config_json` is a JSON
/// [`LemmaConfig`]; `{}` takes every default.
///
/// # Safety
/// Pointer arguments must be valid; `config_json` must be NUL-terminated
/// UTF-8.
#[no_mangle]
pub unsafe extern "C" fn hid_lemma(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> HidStatus {
    if config_json.is_null() || out_json.is_null() {
        return HidStatus::HidNullPointer;
    }
    let Ok(config_text) = CStr::from_ptr(config_json).to_str() else {
        return HidStatus::HidInvalidUtf8;
    };
    guarded(out_json, || {
        let config: LemmaConfig =
            serde_json::from_str(config_text).map_err(|_| HidStatus::HidBadJson)?;
        Ok(lemma_sweep(&config).to_json())
    })
}

fn parse_param(kind: ParamKind, value: &Value) -> Option<ParamValue> {
    match kind {
        ParamKind::NonNegInt | ParamKind::PosInt => match value {
            Value::Number(n) => n.as_u64().map(ParamValue::Nat),
            Value::String(s) => s.parse::<u64>().ok().map(ParamValue::Nat),
            _ => None,
        },
        ParamKind::Rational => match value {
            Value::String(s) => s.parse().ok().map(ParamValue::Rat),
            Value::Number(n) => n.as_i64().map(|v| ParamValue::Rat(v.into())),
            _ => None,
        },
    }
}

/// Runs `body` with panic isolation and writes its string result into `out`.
fn guarded<F>(out: *mut *mut c_char, body: F) -> HidStatus
where
    F: FnOnce() -> Result<String, HidStatus>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Err(_) => HidStatus::HidInternalError,
        Ok(Err(status)) => status,
        Ok(Ok(text)) => match CString::new(text) {
            Err(_) => HidStatus::HidInternalError,
            Ok(ctext) => {
                unsafe { *out = ctext.into_raw() };
                HidStatus::HidOk
            }
        },
    }
}
