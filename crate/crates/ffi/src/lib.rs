//! C ABI over the `qcap` library.
//!
//! Every function returns a [`QcapStatus`]. On failure the message is available
//! from [`qcap_last_error`] on the calling thread until the next failing call.

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::{Mutex, OnceLock};

use qcap::bounds::{entanglement_flux, flux_numeric_limit, reverse_coherent_info, two_way_capacity};
use qcap::channels::ChannelSpec;
use qcap::cli::spec::parse_channel;
use qcap::qkd_rates::{ideal_rate, ProtocolId};
use qcap::telesim::{stretch_check, QuditChannel};
use qcap::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    OutOfRange = 4,
    Unsupported = 5,
    Divergent = 6,
    NotCovariant = 7,
    DimensionTooLarge = 8,
    InvalidInput = 9,
    Panic = 10,
}

/// Opaque channel handle.
pub struct QcapChannel {
    spec: ChannelSpec,
}

/// Two-way capacity sandwich. The name pointers are static and never freed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QcapBounds {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub lower_name: *const c_char,
    pub upper_name: *const c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcapStatus {
    match e {
        Error::Parse { .. } => QcapStatus::Parse,
        Error::OutOfRange(_) | Error::IndexOutOfRange { .. } => QcapStatus::OutOfRange,
        Error::Unsupported { .. } | Error::NotGaussianFamily(_) | Error::NotDvFamily(_) => QcapStatus::Unsupported,
        Error::DivergentAtZero | Error::DivergentMember { .. } => QcapStatus::Divergent,
        Error::NotCovariant => QcapStatus::NotCovariant,
        Error::DimensionTooLarge(_) => QcapStatus::DimensionTooLarge,
        _ => QcapStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QcapStatus, String)>) -> QcapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcapStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QcapStatus::Panic
        }
    }
}

fn lib(e: Error) -> (QcapStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QcapStatus, String) {
    (QcapStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (QcapStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (QcapStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn channel<'a>(ch: *const QcapChannel) -> Result<&'a QcapChannel, (QcapStatus, String)> {
    ch.as_ref().ok_or_else(|| null("channel"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), (QcapStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn static_name(name: &'static str) -> *const c_char {
    static NAMES: OnceLock<Mutex<HashMap<&'static str, &'static CStr>>> = OnceLock::new();
    let mut names = NAMES.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap_or_else(|e| e.into_inner());
    names
        .entry(name)
        .or_insert_with(|| Box::leak(CString::new(name).expect("no interior nul").into_boxed_c_str()))
        .as_ptr()
}

/// Message of the last failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn qcap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `family:key=value,...` into a new handle released by [`qcap_channel_free`].
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcap_channel_parse(spec: *const c_char, out: *mut *mut QcapChannel) -> QcapStatus {
    guard(|| {
        let text = read_str(spec, "spec")?;
        let spec = parse_channel(text).map_err(lib)?;
        write(out, Box::into_raw(Box::new(QcapChannel { spec })))
    })
}

/// Releases a handle from [`qcap_channel_parse`]; null is ignored.
///
/// # Safety
/// `ch` must come from [`qcap_channel_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qcap_channel_free(ch: *mut QcapChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Best closed-form bounds on the two-way capacity.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcap_two_way_capacity(ch: *const QcapChannel, out: *mut QcapBounds) -> QcapStatus {
    guard(|| {
        let r = two_way_capacity(&channel(ch)?.spec);
        write(
            out,
            QcapBounds {
                lower: r.lower,
                upper: r.upper,
                exact: r.exact,
                lower_name: static_name(r.lower_name),
                upper_name: static_name(r.upper_name),
            },
        )
    })
}

/// Relative entropy of entanglement of the Choi matrix, in bits (may be infinite).
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcap_entanglement_flux(ch: *const QcapChannel, out: *mut f64) -> QcapStatus {
    guard(|| write(out, entanglement_flux(&channel(ch)?.spec)))
}

/// Reverse coherent information, floored at zero.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcap_reverse_coherent_info(ch: *const QcapChannel, out: *mut f64) -> QcapStatus {
    guard(|| write(out, reverse_coherent_info(&channel(ch)?.spec).map_err(lib)?.value))
}

/// Finite-`mu` relative entropy that tends to the flux of a Gaussian channel.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcap_flux_numeric_limit(ch: *const QcapChannel, mu: f64, out: *mut f64) -> QcapStatus {
    guard(|| write(out, flux_numeric_limit(&channel(ch)?.spec, mu).map_err(lib)?))
}

/// Simulates a discrete-variable channel by teleportation over its Choi matrix.
/// A channel that is not covariant reports `covariant = false` and status OK.
///
/// # Safety
/// `ch` must be a live handle; `covariant` and `distance` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qcap_stretch_check(
    ch: *const QcapChannel,
    covariant: *mut bool,
    distance: *mut f64,
) -> QcapStatus {
    guard(|| {
        if covariant.is_null() || distance.is_null() {
            return Err(null("output pointer"));
        }
        let q = QuditChannel::from_spec(&channel(ch)?.spec).map_err(lib)?;
        match stretch_check(&q) {
            Ok(r) => {
                write(covariant, true)?;
                write(distance, r.distance)
            }
            Err(Error::NotCovariant) => {
                write(covariant, false)?;
                write(distance, f64::NAN)
            }
            Err(e) => Err(lib(e)),
        }
    })
}

/// Ideal key rate of a one-parameter protocol token such as `"no-switching"`.
///
/// # Safety
/// `protocol` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcap_qkd_rate(protocol: *const c_char, eta: f64, out: *mut f64) -> QcapStatus {
    guard(|| {
        let token = read_str(protocol, "protocol")?;
        let p = ProtocolId::from_token(token)
            .ok_or_else(|| (QcapStatus::Parse, format!("unknown protocol '{token}'")))?;
        write(out, ideal_rate(p, eta).map_err(lib)?.value)
    })
}
