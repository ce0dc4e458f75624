//! C ABI over the exact (Gaussian rational) backend of `qplane`.
//!
//! Objects are opaque heap handles released with the matching `*_free`.
//! Every fallible call returns a [`QpStatus`]; on failure
//! [`qp_last_error_message`] describes the error on the calling thread.
//! Strings handed out by the library are released with [`qp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qplane::{
    adjoint, ccr_residual, compose, element_from_json_str, element_to_json, inner, nondegeneracy_scan,
    parse_element, project_k, toeplitz, DeformationParameter, Element, Error, Exact, Scalar,
    TruncatedOperator, TruncationDim, WeightSequence,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    BackendMismatch = 4,
    ZeroDeformation = 5,
    DeformationMismatch = 6,
    WeightSpec = 7,
    WeightOutOfRange = 8,
    PositivityViolation = 9,
    Domain = 10,
    DimensionMismatch = 11,
    WeightsMismatch = 12,
    Io = 13,
    Json = 14,
    Panic = 15,
}

impl From<&Error> for QpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::ZeroDeformation => QpStatus::ZeroDeformation,
            Error::DeformationMismatch { .. } => QpStatus::DeformationMismatch,
            Error::BackendMismatch(_) => QpStatus::BackendMismatch,
            Error::Syntax { .. } => QpStatus::Syntax,
            Error::WeightSpec(_) => QpStatus::WeightSpec,
            Error::WeightOutOfRange { .. } => QpStatus::WeightOutOfRange,
            Error::NonPositiveWeight { .. } => QpStatus::PositivityViolation,
            Error::Domain(_) => QpStatus::Domain,
            Error::DimensionMismatch { .. } => QpStatus::DimensionMismatch,
            Error::WeightsMismatch { .. } => QpStatus::WeightsMismatch,
            Error::Io(_) => QpStatus::Io,
            Error::Json(_) => QpStatus::Json,
        }
    }
}

/// Polynomial in `t`, `tb` with exact coefficients.
pub struct QpElement(Element<Exact>);

/// Weight sequence `w_0, w_1, …`.
pub struct QpWeights(WeightSequence<Exact>);

/// Truncated operator in the monomial basis.
pub struct QpOperator(TruncatedOperator<Exact>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(QpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            QpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            QpStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(QpStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(QpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(QpStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(QpStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(s)
        .map_err(|_| Failure(QpStatus::InvalidUtf8, "string contains NUL".into()))?
        .into_raw();
    Ok(())
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn qp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` with deformation parameter `q` (rational, e.g. `"3/4"`).
///
/// # Safety
/// `text` and `q` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_parse(
    text: *const c_char,
    q: *const c_char,
    out: *mut *mut QpElement,
) -> QpStatus {
    guard(|| {
        let q = DeformationParameter::parse(self::text(q, "q")?)?;
        let e = parse_element(self::text(text, "text")?, &q)?;
        put(out, QpElement(e))
    })
}

/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_from_json(json: *const c_char, out: *mut *mut QpElement) -> QpStatus {
    guard(|| {
        let e = element_from_json_str(text(json, "json")?)?;
        put(out, QpElement(e))
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_mul(
    a: *const QpElement,
    b: *const QpElement,
    out: *mut *mut QpElement,
) -> QpStatus {
    guard(|| {
        let p = handle(a, "a")?.0.try_mul(&handle(b, "b")?.0)?;
        put(out, QpElement(p))
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_add(
    a: *const QpElement,
    b: *const QpElement,
    out: *mut *mut QpElement,
) -> QpStatus {
    guard(|| {
        let s = handle(a, "a")?.0.try_add(&handle(b, "b")?.0)?;
        put(out, QpElement(s))
    })
}

/// # Safety
/// `a` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_star(a: *const QpElement, out: *mut *mut QpElement) -> QpStatus {
    guard(|| {
        let s = handle(a, "a")?.0.star();
        put(out, QpElement(s))
    })
}

/// Writes 1 to `out` if the elements are equal (same q and terms), else 0.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_equal(a: *const QpElement, b: *const QpElement, out: *mut i32) -> QpStatus {
    guard(|| {
        let eq = handle(a, "a")?.0 == handle(b, "b")?.0;
        if out.is_null() {
            return Err(Failure(QpStatus::NullPointer, "output pointer is null".into()));
        }
        *out = eq as i32;
        Ok(())
    })
}

/// Text form, reparsable by [`qp_element_parse`].
///
/// # Safety
/// `a` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_to_string(a: *const QpElement, out: *mut *mut c_char) -> QpStatus {
    guard(|| put_string(out, handle(a, "a")?.0.to_string()))
}

/// # Safety
/// `a` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_element_to_json(a: *const QpElement, out: *mut *mut c_char) -> QpStatus {
    guard(|| put_string(out, element_to_json(&handle(a, "a")?.0).to_string()))
}

/// # Safety
/// `a` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn qp_element_free(a: *mut QpElement) {
    free_box(a);
}

/// Accepts `factorial`, `constant:<c>`, `qfactorial:q=<r>:w0=<r>` and
/// `table:<path or JSON array>[:repeat-last]`.
///
/// # Safety
/// `spec` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_weights_parse(spec: *const c_char, out: *mut *mut QpWeights) -> QpStatus {
    guard(|| {
        let w = WeightSequence::parse(text(spec, "spec")?)?;
        put(out, QpWeights(w))
    })
}

/// # Safety
/// `w` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn qp_weights_free(w: *mut QpWeights) {
    free_box(w);
}

/// `⟨f, g⟩_w`, anti-linear in `f`, rendered as text (e.g. `"3/4"`, `"(1-2i)"`).
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_inner(
    f: *const QpElement,
    g: *const QpElement,
    w: *const QpWeights,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let v = inner(&handle(f, "f")?.0, &handle(g, "g")?.0, &handle(w, "w")?.0)?;
        put_string(out, v.render())
    })
}

/// Projection onto holomorphic polynomials.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_project(
    f: *const QpElement,
    w: *const QpWeights,
    out: *mut *mut QpElement,
) -> QpStatus {
    guard(|| {
        let p = project_k(&handle(f, "f")?.0, &handle(w, "w")?.0)?;
        put(out, QpElement(p))
    })
}

/// Truncated Toeplitz operator with symbol `g` on `span{φ_0, …, φ_{dim−1}}`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_toeplitz(
    g: *const QpElement,
    w: *const QpWeights,
    dim: usize,
    out: *mut *mut QpOperator,
) -> QpStatus {
    guard(|| {
        let t = toeplitz(&handle(g, "g")?.0, &handle(w, "w")?.0, TruncationDim::new(dim)?)?;
        put(out, QpOperator(t))
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_compose(
    a: *const QpOperator,
    b: *const QpOperator,
    out: *mut *mut QpOperator,
) -> QpStatus {
    guard(|| {
        let c = compose(&handle(a, "a")?.0, &handle(b, "b")?.0)?;
        put(out, QpOperator(c))
    })
}

/// # Safety
/// `a` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_adjoint(a: *const QpOperator, out: *mut *mut QpOperator) -> QpStatus {
    guard(|| {
        let t = adjoint(&handle(a, "a")?.0);
        put(out, QpOperator(t))
    })
}

/// # Safety
/// `a` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_dim(a: *const QpOperator, out: *mut usize) -> QpStatus {
    guard(|| {
        let n = handle(a, "a")?.0.dim();
        if out.is_null() {
            return Err(Failure(QpStatus::NullPointer, "output pointer is null".into()));
        }
        *out = n;
        Ok(())
    })
}

/// Number of leading columns unaffected by truncation.
///
/// # Safety
/// `a` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_interior_columns(a: *const QpOperator, out: *mut usize) -> QpStatus {
    guard(|| {
        let n = handle(a, "a")?.0.interior_columns();
        if out.is_null() {
            return Err(Failure(QpStatus::NullPointer, "output pointer is null".into()));
        }
        *out = n;
        Ok(())
    })
}

/// `⟨φ_row, T φ_col⟩` in double precision.
///
/// # Safety
/// `a` must be live; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_phi_entry(
    a: *const QpOperator,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> QpStatus {
    guard(|| {
        let t = &handle(a, "a")?.0;
        if row >= t.dim() || col >= t.dim() {
            return Err(Failure(
                QpStatus::Domain,
                format!("entry ({row}, {col}) outside dimension {}", t.dim()),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(Failure(QpStatus::NullPointer, "output pointer is null".into()));
        }
        let z = t.phi_entry(row, col);
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Exact entry as `coeff` and `radicand` strings, meaning `coeff·√radicand`.
///
/// # Safety
/// `a` must be live; `coeff` and `radicand` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_phi_entry_exact(
    a: *const QpOperator,
    row: usize,
    col: usize,
    coeff: *mut *mut c_char,
    radicand: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let t = &handle(a, "a")?.0;
        if row >= t.dim() || col >= t.dim() {
            return Err(Failure(
                QpStatus::Domain,
                format!("entry ({row}, {col}) outside dimension {}", t.dim()),
            ));
        }
        let e = t.phi_entry_exact(row, col);
        put_string(coeff, e.coeff.render())?;
        put_string(radicand, e.radicand.render()).inspect_err(|_| {
            qp_string_free(*coeff);
            *coeff = ptr::null_mut();
        })
    })
}

/// # Safety
/// `a` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_to_json(a: *const QpOperator, out: *mut *mut c_char) -> QpStatus {
    guard(|| put_string(out, handle(a, "a")?.0.to_json().to_string()))
}

/// # Safety
/// `a` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn qp_operator_free(a: *mut QpOperator) {
    free_box(a);
}

/// Residual of `[T_tb, T_t]_{1/q} = I` under the weights `[k]!_{1/q}·w0`,
/// rendered as text; `"0"` when the relation holds exactly.
///
/// # Safety
/// `q` and `w0` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_ccr_residual(
    q: *const c_char,
    w0: *const c_char,
    dim: usize,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let q = DeformationParameter::<Exact>::parse(text(q, "q")?)?;
        let w0 = qplane::parse_scalar::<Exact>(text(w0, "w0")?)?;
        let r = ccr_residual(&q, w0, TruncationDim::new(dim)?)?;
        put_string(out, r.residual.render())
    })
}

/// Hankel rank scan, as the same JSON report the command line prints.
///
/// # Safety
/// `w` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_degeneracy_json(
    w: *const QpWeights,
    m_max: u32,
    r_max: u32,
    s_max: u32,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let rep = nondegeneracy_scan(&handle(w, "w")?.0, m_max, r_max, s_max)?;
        put_string(out, rep.to_json().to_string())
    })
}
