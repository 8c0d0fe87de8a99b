//! C ABI over the sentence engine and the ranking metrics.
//!
//! Structured values cross the boundary as UTF-8 JSON. Every function
//! returns an [`OvpStatus`]; on failure a message is available from
//! [`ovp_last_error`] on the same thread. Strings handed out through `out`
//! parameters belong to the caller and are released with [`ovp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ovp_core::builder::{apply_choice, random_sentence, valid_choices};
use ovp_core::eval::{average_displacement, normalized_cosine, rbo};
use ovp_core::ovp2en::{encode, EncodeOptions};
use ovp_core::{render, validate, Lexicon, SentenceSelections, Slot};
use serde::Serialize;

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OvpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    /// Well-formed input the engine rejects: unknown lexemes, incomplete or
    /// contradictory selections, empty rankings.
    InvalidInput = 4,
    Io = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

/// Opaque engine handle owning a lexicon.
pub struct OvpEngine {
    custom: Option<Lexicon>,
}

impl OvpEngine {
    fn lexicon(&self) -> &Lexicon {
        self.custom.as_ref().unwrap_or_else(|| Lexicon::embedded())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OvpStatus, String);

impl Failure {
    fn input(e: impl ToString) -> Self {
        Failure(OvpStatus::InvalidInput, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording its error and catching panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OvpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OvpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal error");
            OvpStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(OvpStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(OvpStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn engine_arg<'a>(p: *const OvpEngine) -> Result<&'a OvpEngine, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(OvpStatus::NullArgument, "engine is null".into()))
}

unsafe fn selections_arg(p: *const c_char) -> Result<SentenceSelections, Failure> {
    let text = str_arg(p, "selections_json")?;
    serde_json::from_str(text).map_err(|e| Failure(OvpStatus::InvalidJson, e.to_string()))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(OvpStatus::NullArgument, format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(OvpStatus::NullArgument, "out is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(OvpStatus::Internal, e.to_string()))?;
    if out.is_null() {
        return Err(Failure(OvpStatus::NullArgument, "out is null".into()));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, value: &impl Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string(value).map_err(|e| Failure(OvpStatus::Internal, e.to_string()))?;
    write_string(out, s)
}

/// Engine over the built-in lexicon. Never null.
#[no_mangle]
pub extern "C" fn ovp_engine_new() -> *mut OvpEngine {
    Box::into_raw(Box::new(OvpEngine { custom: None }))
}

/// Engine over a lexicon TOML file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ovp_engine_from_lexicon_path(path: *const c_char, out: *mut *mut OvpEngine) -> OvpStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let lexicon = Lexicon::from_path(path).map_err(|e| Failure(OvpStatus::Io, format!("{path}: {e}")))?;
        write_out(out, Box::into_raw(Box::new(OvpEngine { custom: Some(lexicon) })))
    })
}

/// # Safety
/// `engine` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn ovp_engine_free(engine: *mut OvpEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Renders complete selections to the OVP surface string.
///
/// # Safety
/// Pointer arguments must be valid; `selections_json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ovp_render(
    engine: *const OvpEngine,
    selections_json: *const c_char,
    out_surface: *mut *mut c_char,
) -> OvpStatus {
    guard(|| {
        let engine = engine_arg(engine)?;
        let s = selections_arg(selections_json)?;
        let surface = render(engine.lexicon(), &s).map_err(Failure::input)?;
        write_string(out_surface, surface)
    })
}

/// Writes the verdict as `{"status": "complete" | "incomplete" | "invalid",
/// "details": [...]}`.
///
/// # Safety
/// As for [`ovp_render`].
#[no_mangle]
pub unsafe extern "C" fn ovp_validate(
    engine: *const OvpEngine,
    selections_json: *const c_char,
    out_json: *mut *mut c_char,
) -> OvpStatus {
    guard(|| {
        let engine = engine_arg(engine)?;
        let s = selections_arg(selections_json)?;
        write_json(out_json, &validate(engine.lexicon(), &s))
    })
}

/// Writes the offered lexemes for every slot as a JSON array.
///
/// # Safety
/// As for [`ovp_render`].
#[no_mangle]
pub unsafe extern "C" fn ovp_options(
    engine: *const OvpEngine,
    selections_json: *const c_char,
    out_json: *mut *mut c_char,
) -> OvpStatus {
    guard(|| {
        let engine = engine_arg(engine)?;
        let s = selections_arg(selections_json)?;
        let choices = valid_choices(engine.lexicon(), &s).map_err(Failure::input)?;
        write_json(out_json, &choices)
    })
}

/// Fills `slot` (e.g. `"object_suffix"`) with lexeme `id`; writes
/// `{"selections": ..., "cleared": [...]}`.
///
/// # Safety
/// As for [`ovp_render`]; `slot` and `id` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ovp_apply_choice(
    engine: *const OvpEngine,
    selections_json: *const c_char,
    slot: *const c_char,
    id: *const c_char,
    out_json: *mut *mut c_char,
) -> OvpStatus {
    guard(|| {
        let engine = engine_arg(engine)?;
        let s = selections_arg(selections_json)?;
        let slot: Slot = str_arg(slot, "slot")?.parse().map_err(Failure::input)?;
        let id = str_arg(id, "id")?;
        let applied = apply_choice(engine.lexicon(), &s, slot, id).map_err(Failure::input)?;
        write_json(out_json, &applied)
    })
}

/// Writes the seeded random sentence's selections.
///
/// # Safety
/// `engine` and `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ovp_random(engine: *const OvpEngine, seed: u64, out_json: *mut *mut c_char) -> OvpStatus {
    guard(|| {
        let engine = engine_arg(engine)?;
        write_json(out_json, &random_sentence(engine.lexicon(), seed))
    })
}

/// Writes the English-only structured form of complete selections.
///
/// # Safety
/// As for [`ovp_render`].
#[no_mangle]
pub unsafe extern "C" fn ovp_encode(
    engine: *const OvpEngine,
    selections_json: *const c_char,
    ti_as_past_continuous: bool,
    out_json: *mut *mut c_char,
) -> OvpStatus {
    guard(|| {
        let engine = engine_arg(engine)?;
        let s = selections_arg(selections_json)?;
        let structured =
            encode(engine.lexicon(), &s, EncodeOptions { ti_as_past_continuous }).map_err(Failure::input)?;
        write_json(out_json, &structured)
    })
}

/// Extrapolated rank-biased overlap of two rankings of item ids.
///
/// # Safety
/// `a` and `b` must point to `a_len` / `b_len` readable elements.
#[no_mangle]
pub unsafe extern "C" fn ovp_rbo(
    a: *const u64,
    a_len: usize,
    b: *const u64,
    b_len: usize,
    p: f64,
    out: *mut f64,
) -> OvpStatus {
    guard(|| {
        let a = slice_arg(a, a_len, "a")?;
        let b = slice_arg(b, b_len, "b")?;
        write_out(out, rbo(a, b, p).map_err(Failure::input)?)
    })
}

/// Mean absolute rank difference of the items of `target` in `computed`.
///
/// # Safety
/// As for [`ovp_rbo`]; both arrays have length `len`.
#[no_mangle]
pub unsafe extern "C" fn ovp_average_displacement(
    target: *const u64,
    computed: *const u64,
    len: usize,
    out: *mut f64,
) -> OvpStatus {
    guard(|| {
        let t = slice_arg(target, len, "target")?;
        let c = slice_arg(computed, len, "computed")?;
        write_out(out, average_displacement(t, c).map_err(Failure::input)?)
    })
}

/// Cosine similarity mapped onto [0, 1].
///
/// # Safety
/// `a` and `b` must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn ovp_normalized_cosine(a: *const f64, b: *const f64, len: usize, out: *mut f64) -> OvpStatus {
    guard(|| {
        let a = slice_arg(a, len, "a")?;
        let b = slice_arg(b, len, "b")?;
        write_out(out, normalized_cosine(a, b).map_err(Failure::input)?)
    })
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ovp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ovp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
