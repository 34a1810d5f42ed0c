//! C ABI over `wrapfree`.
//!
//! Every fallible function returns a [`WfStatus`]; on failure the message is
//! kept per thread and read back with [`wf_last_error_message`]. Objects are
//! opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use wrapfree::class_l::{solve_atoms, ClassLDescriptor};
use wrapfree::convolutions;
use wrapfree::measures::{CircleAtom, CircleMeasure, FourierDensity};
use wrapfree::wrapping::{unwrap_descriptor, wrap_descriptor};
use wrapfree::{BooleanIDDescriptor, Error, TransformHandle, TransformKind};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NoConvergence = 3,
    LeftDomain = 4,
    FixedPointStall = 5,
    Numeric = 6,
    Panic = 7,
    BufferTooSmall = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WfComplex {
    pub re: f64,
    pub im: f64,
}

impl From<WfComplex> for Complex64 {
    fn from(z: WfComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for WfComplex {
    fn from(z: Complex64) -> Self {
        WfComplex { re: z.re, im: z.im }
    }
}

/// A finite measure on the unit circle.
pub struct WfCircleMeasure(CircleMeasure);

/// A class-L descriptor `(beta, sigma)`.
pub struct WfClassL(ClassLDescriptor);

/// A Boolean infinitely divisible descriptor `(gamma, sigma)` on the circle.
pub struct WfBooleanId(BooleanIDDescriptor);

/// An `F`-transform on the upper half-plane or an `eta`-transform on the disk.
pub struct WfTransform(TransformHandle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> WfStatus {
    match e {
        Error::NoConvergence { .. } => WfStatus::NoConvergence,
        Error::LeftDomain => WfStatus::LeftDomain,
        Error::FixedPointStall { .. } => WfStatus::FixedPointStall,
        Error::NegativeMass | Error::InvalidMeasure(_) | Error::InvalidArgument(_) | Error::KindMismatch => {
            WfStatus::InvalidArgument
        }
        _ => WfStatus::Numeric,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), WfStatus>) -> WfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WfStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            WfStatus::Panic
        }
    }
}

fn lib<T>(r: wrapfree::Result<T>) -> Result<T, WfStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_last_error(e.to_string());
        s
    })
}

fn invalid(msg: &str) -> WfStatus {
    set_last_error(msg.to_string());
    WfStatus::InvalidArgument
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, WfStatus> {
    p.as_ref().ok_or_else(|| {
        set_last_error("null pointer".into());
        WfStatus::NullPointer
    })
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, WfStatus> {
    p.as_mut().ok_or_else(|| {
        set_last_error("null output pointer".into());
        WfStatus::NullPointer
    })
}

unsafe fn slice<'a, T>(p: *const T, n: usize) -> Result<&'a [T], WfStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        set_last_error("null array with nonzero length".into());
        return Err(WfStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Length in bytes, including the terminating NUL, of the last error message
/// on this thread; 0 when there is none.
#[no_mangle]
pub extern "C" fn wf_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes_with_nul().len()))
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must be writable for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn wf_last_error_message(buf: *mut c_char, cap: usize) -> WfStatus {
    if buf.is_null() {
        return WfStatus::NullPointer;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&b"\0"[..], |c| c.as_bytes_with_nul());
        if bytes.len() > cap {
            return WfStatus::BufferTooSmall;
        }
        std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
        WfStatus::Ok
    })
}

/// Builds a circle measure from atoms `(thetas[i], masses[i])` and the density
/// `c0 + 2 Re sum_n cn[n-1] e^{in theta}` with respect to `d theta / 2 pi`.
///
/// # Safety
/// Arrays must hold the stated number of elements; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_circle_measure_new(
    thetas: *const f64,
    masses: *const f64,
    n_atoms: usize,
    c0: f64,
    cn: *const WfComplex,
    n_modes: usize,
    result: *mut *mut WfCircleMeasure,
) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        let thetas = slice(thetas, n_atoms)?;
        let masses = slice(masses, n_atoms)?;
        let cn = slice(cn, n_modes)?;
        let atoms = thetas.iter().zip(masses).map(|(&theta, &mass)| CircleAtom { theta, mass }).collect();
        let fourier = FourierDensity { c0, cn: cn.iter().map(|&z| z.into()).collect() };
        *result = boxed(WfCircleMeasure(lib(CircleMeasure::new(atoms, fourier))?));
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wf_circle_measure_free(m: *mut WfCircleMeasure) {
    release(m);
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_circle_measure_total_mass(m: *const WfCircleMeasure, mass: *mut f64) -> WfStatus {
    guard(|| {
        *out(mass)? = deref(m)?.0.total_mass();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_classl_new(beta: f64, sigma: *const WfCircleMeasure, result: *mut *mut WfClassL) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        let sigma = deref(sigma)?.0.clone();
        *result = boxed(WfClassL(lib(ClassLDescriptor::new(beta, sigma))?));
        Ok(())
    })
}

/// # Safety
/// `d` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wf_classl_free(d: *mut WfClassL) {
    release(d);
}

/// Branch index `n = floor(-beta / 2 pi)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_classl_branch(d: *const WfClassL, branch: *mut i64) -> WfStatus {
    guard(|| {
        *out(branch)? = deref(d)?.0.branch();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_boolean_id_new(
    gamma: WfComplex,
    sigma: *const WfCircleMeasure,
    result: *mut *mut WfBooleanId,
) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        let sigma = deref(sigma)?.0.clone();
        *result = boxed(WfBooleanId(lib(BooleanIDDescriptor::new(gamma.into(), sigma))?));
        Ok(())
    })
}

/// # Safety
/// `b` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wf_boolean_id_free(b: *mut WfBooleanId) {
    release(b);
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_boolean_id_gamma(b: *const WfBooleanId, gamma: *mut WfComplex) -> WfStatus {
    guard(|| {
        *out(gamma)? = deref(b)?.0.gamma.into();
        Ok(())
    })
}

/// Wrapped descriptor of a class-L measure.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_wrap(d: *const WfClassL, result: *mut *mut WfBooleanId) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        *result = boxed(WfBooleanId(wrap_descriptor(&deref(d)?.0)));
        Ok(())
    })
}

/// Class-L descriptor `(-Arg gamma + 2 pi branch, sigma)` that wraps to `b`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_unwrap(b: *const WfBooleanId, branch: i64, result: *mut *mut WfClassL) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        *result = boxed(WfClassL(unwrap_descriptor(&deref(b)?.0, branch)));
        Ok(())
    })
}

/// `F`-transform of a class-L descriptor.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_classl_transform(d: *const WfClassL, result: *mut *mut WfTransform) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        *result = boxed(WfTransform(deref(d)?.0.to_handle()));
        Ok(())
    })
}

/// `eta`-transform of a Boolean descriptor.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_boolean_id_transform(b: *const WfBooleanId, result: *mut *mut WfTransform) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        *result = boxed(WfTransform(deref(b)?.0.to_handle()));
        Ok(())
    })
}

/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wf_transform_free(t: *mut WfTransform) {
    release(t);
}

/// 1 for an `eta`-transform on the disk, 0 for an `F`-transform on the upper half-plane.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_transform_is_eta(t: *const WfTransform, is_eta: *mut i32) -> WfStatus {
    guard(|| {
        *out(is_eta)? = i32::from(deref(t)?.0.kind() == TransformKind::Eta);
        Ok(())
    })
}

/// Evaluates `F(z)` or `eta(z)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_transform_eval(t: *const WfTransform, z: WfComplex, value: *mut WfComplex) -> WfStatus {
    guard(|| {
        let value = out(value)?;
        *value = lib(deref(t)?.0.eval(z.into()))?.into();
        Ok(())
    })
}

/// `F`-transform of the free additive convolution of two line laws.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_free_add(
    a: *const WfTransform,
    b: *const WfTransform,
    result: *mut *mut WfTransform,
) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        let r = lib(convolutions::free_add(&deref(a)?.0, &deref(b)?.0))?;
        *result = boxed(WfTransform(r.handle));
        Ok(())
    })
}

/// Monotone convolution: the composition `a(b(z))` of two transforms of one kind.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_monotone_compose(
    a: *const WfTransform,
    b: *const WfTransform,
    result: *mut *mut WfTransform,
) -> WfStatus {
    guard(|| {
        let result = out(result)?;
        *result = boxed(WfTransform(lib(convolutions::monotone_compose(&deref(a)?.0, &deref(b)?.0))?));
        Ok(())
    })
}

/// Atoms of a class-L law whose sigma is purely atomic, using `window`
/// singularity intervals on each side.
///
/// `count` receives the number of atoms. When `cap` is smaller, nothing is
/// written to the arrays and `WF_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `xs` and `ws` must be writable for `cap` elements; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_solve_atoms(
    d: *const WfClassL,
    window: usize,
    xs: *mut f64,
    ws: *mut f64,
    cap: usize,
    count: *mut usize,
) -> WfStatus {
    guard(|| {
        let count = out(count)?;
        if window == 0 {
            return Err(invalid("window must be positive"));
        }
        let sol = lib(solve_atoms(&deref(d)?.0, window))?;
        let atoms = sol.measure.atoms();
        *count = atoms.len();
        if atoms.len() > cap {
            set_last_error(format!("{} atoms do not fit in {cap}", atoms.len()));
            return Err(WfStatus::BufferTooSmall);
        }
        if !atoms.is_empty() && (xs.is_null() || ws.is_null()) {
            set_last_error("null output array".into());
            return Err(WfStatus::NullPointer);
        }
        for (i, a) in atoms.iter().enumerate() {
            *xs.add(i) = a.x;
            *ws.add(i) = a.w;
        }
        Ok(())
    })
}
