//! C ABI over the `rispower` model.
//!
//! Descriptors cross the boundary as opaque `RispowerDescriptor` handles
//! created by `rispower_builtin`, `rispower_descriptor_from_json` or
//! `rispower_descriptor_load` and released with `rispower_descriptor_free`.
//! Every fallible call returns a `RispowerStatus`; on failure the message is
//! available from `rispower_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use rispower::catalog_io::{descriptor_from_json, descriptor_to_json, load_descriptor_with};
use rispower::{
    analysis, builtin, dynamic_power, parse_power, static_power_breakdown, CatalogError,
    CodingState, ModelError, PowerBreakdown, PowerMicrowatts, RisDescriptor, StaticBreakdown,
    ValidationOptions,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RispowerStatus {
    Ok = 0,
    NullPointer = 1,
    /// Invalid descriptor, coding state, argument or power string.
    Validation = 2,
    Io = 3,
    Overflow = 4,
    MissingControlBoardPower = 5,
    UnknownKey = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// Opaque handle to a validated descriptor.
pub struct RispowerDescriptor {
    inner: RisDescriptor,
}

/// Static power, all powers in microwatts.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RispowerStaticBreakdown {
    pub control_board_power_uw: u64,
    pub drive_circuit_count: u64,
    pub per_circuit_power_uw: u64,
    pub total_drive_power_uw: u64,
    pub static_total_uw: u64,
}

/// Static plus dynamic power, in microwatts.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RispowerPowerBreakdown {
    pub static_breakdown: RispowerStaticBreakdown,
    pub dynamic_uw: u64,
    pub total_uw: u64,
}

impl From<StaticBreakdown> for RispowerStaticBreakdown {
    fn from(b: StaticBreakdown) -> Self {
        RispowerStaticBreakdown {
            control_board_power_uw: b.control_board_power.as_microwatts(),
            drive_circuit_count: b.drive_circuit_count,
            per_circuit_power_uw: b.per_circuit_power.as_microwatts(),
            total_drive_power_uw: b.total_drive_power.as_microwatts(),
            static_total_uw: b.static_total.as_microwatts(),
        }
    }
}

impl From<PowerBreakdown> for RispowerPowerBreakdown {
    fn from(b: PowerBreakdown) -> Self {
        RispowerPowerBreakdown {
            static_breakdown: b.static_power.into(),
            dynamic_uw: b.dynamic.as_microwatts(),
            total_uw: b.total.as_microwatts(),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(RispowerStatus, String);

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let status = match &e {
            ModelError::MissingControlBoardPower { .. } => RispowerStatus::MissingControlBoardPower,
            ModelError::Quantity(rispower::QuantityError::Overflow(_)) => RispowerStatus::Overflow,
            _ => RispowerStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let status = match &e {
            CatalogError::UnknownKey(_) => RispowerStatus::UnknownKey,
            CatalogError::Io { .. } => RispowerStatus::Io,
            _ => RispowerStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `body`, converting failures and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RispowerStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            RispowerStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            RispowerStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RispowerStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RispowerStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(h: *const RispowerDescriptor) -> Result<&'a RisDescriptor, Failure> {
    h.as_ref().map(|h| &h.inner).ok_or_else(|| null("descriptor"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn boxed(d: RisDescriptor) -> *mut RispowerDescriptor {
    Box::into_raw(Box::new(RispowerDescriptor { inner: d }))
}

/// Message of the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next `rispower_*` call on this thread.
#[no_mangle]
pub extern "C" fn rispower_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Built-in catalog device: "pin-16x16", "varactor-8x16" or "rfswitch-8x8".
///
/// # Safety
/// `key` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_builtin(
    key: *const c_char,
    out: *mut *mut RispowerDescriptor,
) -> RispowerStatus {
    guard(|| {
        let d = builtin(c_str(key, "key")?)?;
        write_out(out, boxed(d))
    })
}

/// Parses a descriptor document. When `require_control_board_power` is
/// false, a missing board power is accepted and reported later by
/// `rispower_static_breakdown`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_descriptor_from_json(
    json: *const c_char,
    require_control_board_power: bool,
    out: *mut *mut RispowerDescriptor,
) -> RispowerStatus {
    guard(|| {
        let options = ValidationOptions {
            require_control_board_power,
            ..Default::default()
        };
        let d = descriptor_from_json(c_str(json, "json")?, &options)?;
        write_out(out, boxed(d))
    })
}

/// Reads a descriptor file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_descriptor_load(
    path: *const c_char,
    require_control_board_power: bool,
    out: *mut *mut RispowerDescriptor,
) -> RispowerStatus {
    guard(|| {
        let options = ValidationOptions {
            require_control_board_power,
            ..Default::default()
        };
        let d = load_descriptor_with(c_str(path, "path")?, &options)?;
        write_out(out, boxed(d))
    })
}

/// Canonical JSON of a descriptor, or null on a null handle. Release with
/// `rispower_string_free`.
///
/// # Safety
/// `descriptor` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rispower_descriptor_to_json(
    descriptor: *const RispowerDescriptor,
) -> *mut c_char {
    match descriptor.as_ref() {
        Some(d) => CString::new(descriptor_to_json(&d.inner))
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn rispower_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `descriptor` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn rispower_descriptor_free(descriptor: *mut RispowerDescriptor) {
    if !descriptor.is_null() {
        drop(Box::from_raw(descriptor));
    }
}

/// New handle equal to `descriptor` with its control-board power replaced.
///
/// # Safety
/// `descriptor` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_descriptor_with_control_board_power(
    descriptor: *const RispowerDescriptor,
    power_uw: u64,
    out: *mut *mut RispowerDescriptor,
) -> RispowerStatus {
    guard(|| {
        let d = handle(descriptor)?.with_control_board_power(PowerMicrowatts::new(power_uw));
        write_out(out, boxed(d))
    })
}

/// # Safety
/// `descriptor` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_cell_count(
    descriptor: *const RispowerDescriptor,
    out: *mut u64,
) -> RispowerStatus {
    guard(|| write_out(out, handle(descriptor)?.cell_count()))
}

/// Adjustable components needing a control signal (N_c).
///
/// # Safety
/// `descriptor` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_component_count(
    descriptor: *const RispowerDescriptor,
    out: *mut u64,
) -> RispowerStatus {
    guard(|| write_out(out, handle(descriptor)?.component_count()))
}

/// Cells sharing one control signal (N_g).
///
/// # Safety
/// `descriptor` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_group_size(
    descriptor: *const RispowerDescriptor,
    out: *mut u64,
) -> RispowerStatus {
    guard(|| write_out(out, handle(descriptor)?.group_size()))
}

/// ⌈component_count / (group_size · signals_per_circuit)⌉. Zero divisors
/// are a validation error.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_drive_circuit_count(
    component_count: u64,
    group_size: u64,
    signals_per_circuit: u64,
    out: *mut u64,
) -> RispowerStatus {
    guard(|| {
        if group_size == 0 || signals_per_circuit == 0 {
            return Err(Failure(
                RispowerStatus::Validation,
                "group size and signals per circuit must be positive".into(),
            ));
        }
        write_out(
            out,
            rispower::drive_circuit_count(component_count, group_size, signals_per_circuit),
        )
    })
}

/// # Safety
/// `descriptor` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_static_breakdown(
    descriptor: *const RispowerDescriptor,
    out: *mut RispowerStaticBreakdown,
) -> RispowerStatus {
    guard(|| {
        let b = static_power_breakdown(handle(descriptor)?)?;
        write_out(out, b.into())
    })
}

/// Total power for one coding state of `cell_count` row-major cell values.
///
/// # Safety
/// `descriptor` must be a live handle; `cells` must point to `cell_count`
/// readable values (or be null when `cell_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_total_power(
    descriptor: *const RispowerDescriptor,
    cells: *const u64,
    cell_count: size_t,
    out: *mut RispowerPowerBreakdown,
) -> RispowerStatus {
    guard(|| {
        let d = handle(descriptor)?;
        let cells = match (cells.is_null(), cell_count) {
            (_, 0) => Vec::new(),
            (true, _) => return Err(null("cells")),
            (false, n) => std::slice::from_raw_parts(cells, n).to_vec(),
        };
        let state = CodingState::new(d, cells)
            .map_err(|e| Failure(RispowerStatus::Validation, e.to_string()))?;
        let b = dynamic_power::total_power(d, &state)?;
        write_out(out, b.into())
    })
}

/// Largest dynamic power over all coding states, in microwatts.
///
/// # Safety
/// `descriptor` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_worst_case_dynamic(
    descriptor: *const RispowerDescriptor,
    out: *mut u64,
) -> RispowerStatus {
    guard(|| {
        let p = analysis::worst_case_dynamic(handle(descriptor)?)?;
        write_out(out, p.as_microwatts())
    })
}

/// Parses strings such as "0.066 mW" into exact microwatts.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rispower_parse_power(
    text: *const c_char,
    out: *mut u64,
) -> RispowerStatus {
    guard(|| {
        let p = parse_power(c_str(text, "text")?).map_err(|e| {
            let status = match e {
                rispower::QuantityError::Overflow(_) => RispowerStatus::Overflow,
                _ => RispowerStatus::Validation,
            };
            Failure(status, e.to_string())
        })?;
        write_out(out, p.as_microwatts())
    })
}
