//! C ABI over the calbehav miner: feed calendar and call-log text in,
//! get an opaque rule set back, query it, free it.
//!
//! Conventions: every function that can fail returns a `CalbehavStatus`
//! and writes results through out-pointers; `calbehav_last_error` holds
//! a message for the most recent failure on the calling thread. Strings
//! returned through out-pointers are owned by the caller and must be
//! released with `calbehav_string_free`; rule sets with
//! `calbehav_rules_free`.

use calbehav::calendar::{expand_all, parse_icalendar, DateRange};
use calbehav::config::{DEFAULT_MIN_CONFIDENCE, DEFAULT_MIN_SUPPORT};
use calbehav::error::error_count;
use calbehav::mapping::{classify_calls, map_events_to_behavior, ContextAttribute};
use calbehav::miner::{build_agt, extract_rules, rules_to_json, BehavioralRule, PrecedenceMode};
use calbehav::phonelog::{parse_call_log, CallBehavior, RelationshipMap};
use calbehav::{Error, Ratio};
use serde_json::json;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result of a calbehav call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalbehavStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was malformed (bad UTF-8, bad window, bad threshold).
    InvalidArgument = 2,
    /// The calendar, call log, or relationship input failed to parse.
    ParseError = 3,
    /// The inputs produced no behavioral evidence to mine.
    NoEvidence = 4,
    /// An unexpected internal failure; see calbehav_last_error.
    InternalError = 5,
}

/// What a mined rule predicts the user does with a ringing call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalbehavBehavior {
    /// No rule matched the queried context.
    None = 0,
    Accept = 1,
    Reject = 2,
    Missed = 3,
}

impl From<CallBehavior> for CalbehavBehavior {
    fn from(behavior: CallBehavior) -> CalbehavBehavior {
        match behavior {
            CallBehavior::Accept => CalbehavBehavior::Accept,
            CallBehavior::Reject => CalbehavBehavior::Reject,
            CallBehavior::Missed => CalbehavBehavior::Missed,
        }
    }
}

/// Opaque set of mined behavioral rules.
pub struct CalbehavRules {
    rules: Vec<BehavioralRule>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes replaced above");
    });
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| {
        let mut current = slot.borrow_mut();
        if !current.as_bytes().is_empty() {
            *current = CString::default();
        }
    });
}

fn status_for(error: &Error) -> CalbehavStatus {
    match error {
        Error::NoEvidence => CalbehavStatus::NoEvidence,
        Error::InvalidWindow { .. } | Error::Config(_) | Error::Profile(_) | Error::TooFewInstances { .. } => {
            CalbehavStatus::InvalidArgument
        }
        Error::MissingColumn(_) | Error::Ingestion { .. } | Error::DuplicateKeyword(_) => CalbehavStatus::ParseError,
        Error::Csv(_) | Error::Json(_) => CalbehavStatus::ParseError,
        Error::Io { .. } => CalbehavStatus::InternalError,
    }
}

fn fail(status: CalbehavStatus, message: &str) -> CalbehavStatus {
    set_last_error(message);
    status
}

fn guard_status(f: impl FnOnce() -> CalbehavStatus) -> CalbehavStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(CalbehavStatus::InternalError, "internal panic"))
}

/// Borrows a required C string; None means the caller gets an error status.
unsafe fn required_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, CalbehavStatus> {
    if ptr.is_null() {
        return Err(fail(CalbehavStatus::NullArgument, &format!("{name} must not be null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(CalbehavStatus::InvalidArgument, &format!("{name} is not valid UTF-8")))
}

unsafe fn optional_str<'a>(ptr: *const c_char, name: &str) -> Result<Option<&'a str>, CalbehavStatus> {
    if ptr.is_null() {
        return Ok(None);
    }
    required_str(ptr, name).map(Some)
}

fn export_string(text: String, out: *mut *mut c_char) -> CalbehavStatus {
    let exported = match CString::new(text.replace('\0', " ")) {
        Ok(exported) => exported,
        Err(_) => return fail(CalbehavStatus::InternalError, "output contained NUL after sanitizing"),
    };
    unsafe { *out = exported.into_raw() };
    CalbehavStatus::Ok
}

fn mine_impl(
    calendar_text: &str,
    calls_text: &str,
    relationships_text: Option<&str>,
    window_text: Option<&str>,
    min_confidence_text: Option<&str>,
    min_support: usize,
    per_node_precedence: bool,
) -> Result<Vec<BehavioralRule>, (CalbehavStatus, String)> {
    let min_confidence = Ratio::parse_decimal(min_confidence_text.unwrap_or(DEFAULT_MIN_CONFIDENCE))
        .map_err(|e| (CalbehavStatus::InvalidArgument, format!("min_confidence: {e}")))?;
    if min_confidence > Ratio::ONE {
        return Err((CalbehavStatus::InvalidArgument, String::from("min_confidence must be at most 1")));
    }
    let min_support = if min_support == 0 { DEFAULT_MIN_SUPPORT } else { min_support };

    let calendar = parse_icalendar(calendar_text);
    let calendar_errors = error_count(&calendar.diagnostics);
    if calendar_errors > 0 {
        let first = calendar
            .diagnostics
            .iter()
            .find(|d| d.severity == calbehav::Severity::Error)
            .expect("counted above");
        return Err((CalbehavStatus::ParseError, format!("calendar: {calendar_errors} error(s), first: {first}")));
    }

    let log = parse_call_log(calls_text).map_err(|e| (status_for(&e), format!("call log: {e}")))?;
    let log_errors = error_count(&log.diagnostics);
    if log_errors > 0 {
        let first = log
            .diagnostics
            .iter()
            .find(|d| d.severity == calbehav::Severity::Error)
            .expect("counted above");
        return Err((CalbehavStatus::ParseError, format!("call log: {log_errors} error(s), first: {first}")));
    }

    let relationships = match relationships_text {
        None => RelationshipMap::default(),
        Some(text) => {
            let (map, diagnostics) =
                RelationshipMap::parse_csv(text).map_err(|e| (status_for(&e), format!("relationships: {e}")))?;
            let errors = error_count(&diagnostics);
            if errors > 0 {
                return Err((CalbehavStatus::ParseError, format!("relationships: {errors} error(s)")));
            }
            map
        }
    };

    let window = match window_text {
        Some(text) => DateRange::parse(text).map_err(|e| (CalbehavStatus::InvalidArgument, format!("window: {e}")))?,
        None => match (log.records.first(), log.records.last()) {
            (Some(first), Some(last)) => DateRange::new(first.timestamp.date(), last.timestamp.date()),
            _ => return Err((CalbehavStatus::NoEvidence, String::from("call log holds no usable records"))),
        },
    };

    let occurrences = expand_all(&calendar.events, window).map_err(|e| (status_for(&e), e.to_string()))?;
    let calls = classify_calls(&log.records);
    let instances = map_events_to_behavior(&occurrences, &calendar.events, &calls, &relationships);
    if instances.is_empty() {
        return Err((CalbehavStatus::NoEvidence, String::from("no call rang inside a calendar occurrence")));
    }

    let mode = if per_node_precedence { PrecedenceMode::PerNode } else { PrecedenceMode::Global };
    let root = build_agt(&instances, min_confidence, min_support, mode);
    Ok(extract_rules(&root, min_confidence))
}

/// Mines behavioral rules from iCalendar text and a call-log CSV.
///
/// `relationships_csv`, `window`, and `min_confidence` may be null for
/// their defaults (no relationships, the call log's own date span, and
/// 0.8). `min_support` 0 means the default of 3. On success `*out` owns
/// the rule set; free it with `calbehav_rules_free`.
///
/// # Safety
/// String arguments must be NUL-terminated and stay valid for the call.
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn calbehav_mine(
    calendar_ics: *const c_char,
    calls_csv: *const c_char,
    relationships_csv: *const c_char,
    window: *const c_char,
    min_confidence: *const c_char,
    min_support: usize,
    per_node_precedence: bool,
    out: *mut *mut CalbehavRules,
) -> CalbehavStatus {
    guard_status(|| {
        clear_last_error();
        if out.is_null() {
            return fail(CalbehavStatus::NullArgument, "out must not be null");
        }
        let calendar_text = match required_str(calendar_ics, "calendar_ics") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let calls_text = match required_str(calls_csv, "calls_csv") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let relationships_text = match optional_str(relationships_csv, "relationships_csv") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let window_text = match optional_str(window, "window") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let min_confidence_text = match optional_str(min_confidence, "min_confidence") {
            Ok(text) => text,
            Err(status) => return status,
        };
        match mine_impl(
            calendar_text,
            calls_text,
            relationships_text,
            window_text,
            min_confidence_text,
            min_support,
            per_node_precedence,
        ) {
            Ok(rules) => {
                *out = Box::into_raw(Box::new(CalbehavRules { rules }));
                CalbehavStatus::Ok
            }
            Err((status, message)) => {
                *out = std::ptr::null_mut();
                fail(status, &message)
            }
        }
    })
}

/// Number of rules in a mined set; 0 for null.
///
/// # Safety
/// `rules` must be null or a pointer from `calbehav_mine`.
#[no_mangle]
pub unsafe extern "C" fn calbehav_rules_len(rules: *const CalbehavRules) -> usize {
    catch_unwind(AssertUnwindSafe(|| if rules.is_null() { 0 } else { (*rules).rules.len() })).unwrap_or(0)
}

/// Writes the rule set as a JSON array (antecedent, consequent, support,
/// confidence) to `*out`. Free the string with `calbehav_string_free`.
///
/// # Safety
/// `rules` must come from `calbehav_mine`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn calbehav_rules_json(rules: *const CalbehavRules, out: *mut *mut c_char) -> CalbehavStatus {
    guard_status(|| {
        clear_last_error();
        if rules.is_null() || out.is_null() {
            return fail(CalbehavStatus::NullArgument, "rules and out must not be null");
        }
        let value = rules_to_json(&(*rules).rules);
        let mut text = serde_json::to_string_pretty(&value).expect("rules serialize");
        text.push('\n');
        export_string(text, out)
    })
}

/// Writes the rule set rendered one rule per line, strongest first, to
/// `*out`. Free the string with `calbehav_string_free`.
///
/// # Safety
/// `rules` must come from `calbehav_mine`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn calbehav_rules_text(rules: *const CalbehavRules, out: *mut *mut c_char) -> CalbehavStatus {
    guard_status(|| {
        clear_last_error();
        if rules.is_null() || out.is_null() {
            return fail(CalbehavStatus::NullArgument, "rules and out must not be null");
        }
        let mut text = String::new();
        for rule in &(*rules).rules {
            text.push_str(&rule.render());
            text.push('\n');
        }
        export_string(text, out)
    })
}

/// Predicts the behavior for one call context. `event_type` is
/// "Recurring" or "NonRecurring"; `day_time` uses the rendered form
/// "Monday[10:00-12:00]"; unmapped contacts use relationship "unknown".
/// The most specific matching rule wins (longest antecedent, then
/// highest confidence, then support). `*out_behavior` is
/// `CALBEHAV_BEHAVIOR_NONE` when nothing matches.
///
/// # Safety
/// All pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn calbehav_rules_match(
    rules: *const CalbehavRules,
    event_name: *const c_char,
    event_type: *const c_char,
    day_time: *const c_char,
    relationship: *const c_char,
    out_behavior: *mut CalbehavBehavior,
) -> CalbehavStatus {
    guard_status(|| {
        clear_last_error();
        if rules.is_null() || out_behavior.is_null() {
            return fail(CalbehavStatus::NullArgument, "rules and out_behavior must not be null");
        }
        let event_name = match required_str(event_name, "event_name") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let event_type = match required_str(event_type, "event_type") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let day_time = match required_str(day_time, "day_time") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let relationship = match required_str(relationship, "relationship") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let lookup = |attribute: ContextAttribute| -> &str {
            match attribute {
                ContextAttribute::EventName => event_name,
                ContextAttribute::EventType => event_type,
                ContextAttribute::DayTime => day_time,
                ContextAttribute::Relationship => relationship,
            }
        };

        // Same best-match policy as match_rule: most specific antecedent,
        // then confidence, then support, first rule wins ties.
        let mut best: Option<(&BehavioralRule, (usize, Ratio, usize))> = None;
        for rule in &(*rules).rules {
            if !rule.antecedent.iter().all(|(attribute, value)| lookup(*attribute) == value) {
                continue;
            }
            let key = (rule.antecedent.len(), rule.confidence, rule.support_count);
            match &best {
                Some((_, best_key)) if key <= *best_key => {}
                _ => best = Some((rule, key)),
            }
        }
        *out_behavior = match best {
            Some((rule, _)) => CalbehavBehavior::from(rule.consequent),
            None => CalbehavBehavior::None,
        };
        CalbehavStatus::Ok
    })
}

/// Expands iCalendar text over a window ("YYYY-MM-DD..YYYY-MM-DD") and
/// writes the dated occurrences as a JSON array to `*out`. Free the
/// string with `calbehav_string_free`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn calbehav_expand_json(
    calendar_ics: *const c_char,
    window: *const c_char,
    out: *mut *mut c_char,
) -> CalbehavStatus {
    guard_status(|| {
        clear_last_error();
        if out.is_null() {
            return fail(CalbehavStatus::NullArgument, "out must not be null");
        }
        let calendar_text = match required_str(calendar_ics, "calendar_ics") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let window_text = match required_str(window, "window") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let calendar = parse_icalendar(calendar_text);
        let errors = error_count(&calendar.diagnostics);
        if errors > 0 {
            return fail(CalbehavStatus::ParseError, &format!("calendar: {errors} error(s)"));
        }
        let range = match DateRange::parse(window_text) {
            Ok(range) => range,
            Err(e) => return fail(CalbehavStatus::InvalidArgument, &format!("window: {e}")),
        };
        let occurrences = match expand_all(&calendar.events, range) {
            Ok(occurrences) => occurrences,
            Err(e) => return fail(status_for(&e), &e.to_string()),
        };
        let rows: Vec<serde_json::Value> = occurrences
            .iter()
            .map(|o| {
                json!({
                    "event_uid": o.event_uid,
                    "date": o.date.to_string(),
                    "start_time": o.start_time.format("%H:%M:%S").to_string(),
                    "end_time": o.end_time.format("%H:%M:%S").to_string(),
                    "event_type": o.event_type.to_string(),
                })
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&rows).expect("occurrences serialize");
        text.push('\n');
        export_string(text, out)
    })
}

/// Releases a rule set from `calbehav_mine`. Null is a no-op.
///
/// # Safety
/// `rules` must be null or a pointer from `calbehav_mine`, freed once.
#[no_mangle]
pub unsafe extern "C" fn calbehav_rules_free(rules: *mut CalbehavRules) {
    if !rules.is_null() {
        drop(Box::from_raw(rules));
    }
}

/// Releases a string returned through an out-pointer. Null is a no-op.
///
/// # Safety
/// `text` must be null or a string this library returned, freed once.
#[no_mangle]
pub unsafe extern "C" fn calbehav_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Message for the most recent failure on this thread; empty when the
/// last call succeeded. Valid until the next calbehav call on the same
/// thread. Do not free.
#[no_mangle]
pub extern "C" fn calbehav_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string. Do not free.
#[no_mangle]
pub extern "C" fn calbehav_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
