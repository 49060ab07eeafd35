//! C ABI over `nbqi`.
//!
//! Every fallible call returns an [`NbqiStatus`]; results go through out
//! pointers. After a non-zero status, [`nbqi_last_error`] gives a message
//! for the calling thread. Handles are opaque and must be released with
//! their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use nbqi::bivariate::{self, BoxMesh};
use nbqi::cli::{build_family, FamilyArgs};
use nbqi::normest::{self, NormOptions};
use nbqi::quadrature::{self, QuadratureRule};
use nbqi::quasiinterp;
use nbqi::{Error, KnotSequence, QuasiInterpolant};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbqiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidKnots = 3,
    OutOfRange = 4,
    Unsupported = 5,
    Inadmissible = 6,
    Numerical = 7,
    NotDiscrete = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbqiCardinalKind {
    Discrete = 0,
    Integral = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbqiBoxMesh {
    ThreeDirection = 0,
    FourDirection = 1,
}

/// Knot sequence handle.
pub struct NbqiKnots(KnotSequence);

/// Quasi-interpolant handle.
pub struct NbqiOperator(QuasiInterpolant);

/// Quadrature rule handle.
pub struct NbqiQuadrature(QuadratureRule);

/// Real function passed from C; `user` is handed back unchanged.
pub type NbqiFunction = Option<unsafe extern "C" fn(x: f64, user: *mut c_void) -> f64>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> NbqiStatus {
    match err {
        Error::InvalidKnots(_) | Error::CoincidentNodes(_) => NbqiStatus::InvalidKnots,
        Error::IndexOutOfRange { .. } | Error::OutsideDomain { .. } => NbqiStatus::OutOfRange,
        Error::OrderTooLarge { .. } | Error::UnsupportedDegree { .. } => NbqiStatus::Unsupported,
        Error::Inadmissible { .. } => NbqiStatus::Inadmissible,
        Error::NotDiscrete => NbqiStatus::NotDiscrete,
        Error::InvalidParameter(_) | Error::Parse(_) => NbqiStatus::InvalidArgument,
        Error::Infeasible
        | Error::Unbounded
        | Error::Singular(_)
        | Error::NotExact { .. }
        | Error::Quadrature { .. } => NbqiStatus::Numerical,
    }
}

struct Fail(NbqiStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(NbqiStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> NbqiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NbqiStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            NbqiStatus::Panic
        }
    }
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn callback(f: NbqiFunction, user: *mut c_void) -> Result<impl Fn(f64) -> f64, Fail> {
    let f = f.ok_or_else(|| null("function"))?;
    let user = user as usize;
    // SAFETY: the caller promises `f` is callable with `user` for the
    // duration of the call.
    Ok(move |x: f64| unsafe { f(x, user as *mut c_void) })
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn nbqi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn nbqi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Clamped knots of degree `m` over `n` strictly increasing breakpoints.
///
/// # Safety
/// `breaks` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_knots_clamped(
    m: usize,
    breaks: *const f64,
    n: usize,
    out: *mut *mut NbqiKnots,
) -> NbqiStatus {
    guard(|| {
        let b = input(breaks, n, "breaks")?;
        let ks = KnotSequence::clamped(m, b)?;
        write(out, boxed(NbqiKnots(ks)), "out")
    })
}

/// Open knot layout emulating the bi-infinite uniform grid of step `h`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_knots_uniform(
    m: usize,
    spans: usize,
    h: f64,
    out: *mut *mut NbqiKnots,
) -> NbqiStatus {
    guard(|| {
        let ks = KnotSequence::uniform_emulation(m, spans, h)?;
        write(out, boxed(NbqiKnots(ks)), "out")
    })
}

/// Number of B-splines.
///
/// # Safety
/// `knots` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn nbqi_knots_len(knots: *const NbqiKnots) -> usize {
    knots.as_ref().map_or(0, |k| k.0.len())
}

/// # Safety
/// `knots` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nbqi_knots_free(knots: *mut NbqiKnots) {
    if !knots.is_null() {
        drop(Box::from_raw(knots));
    }
}

fn family_on(ks: &KnotSequence, name: &str, p: usize, q: usize) -> Result<QuasiInterpolant, Error> {
    match name {
        "schoenberg" | "s1" => quasiinterp::schoenberg(ks),
        "s2" => quasiinterp::s2(ks),
        "gs1" | "g1" => quasiinterp::gs1(ks),
        "gs2" | "g2" => quasiinterp::gs2(ks),
        "qstar" => quasiinterp::nb_dqi_nonuniform(ks, p),
        "nearbest" | "nb" => quasiinterp::near_best_dqi(ks, p, q),
        other => Err(Error::Parse(format!("unknown family '{other}'"))),
    }
}

/// Builds a family (`schoenberg`, `s2`, `gs1`, `gs2`, `qstar`, `nearbest`)
/// on `knots`. `p` and `q` are used by `qstar` and `nearbest` only.
///
/// # Safety
/// `knots` must be a live handle, `family` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_new(
    knots: *const NbqiKnots,
    family: *const c_char,
    p: usize,
    q: usize,
    out: *mut *mut NbqiOperator,
) -> NbqiStatus {
    guard(|| {
        let ks = handle(knots, "knots")?;
        if family.is_null() {
            return Err(null("family"));
        }
        let name = CStr::from_ptr(family)
            .to_str()
            .map_err(|_| Fail(NbqiStatus::InvalidArgument, "family is not UTF-8".into()))?
            .to_ascii_lowercase();
        let op = family_on(&ks.0, &name, p, q)?;
        write(out, boxed(NbqiOperator(op)), "out")
    })
}

/// Cardinal near-best operator of the given spline `order` (even),
/// stencil half-width `n` and exactness degree `r`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_cardinal(
    kind: NbqiCardinalKind,
    order: usize,
    n: usize,
    r: usize,
    out: *mut *mut NbqiOperator,
) -> NbqiStatus {
    guard(|| {
        let fa = FamilyArgs {
            family: match kind {
                NbqiCardinalKind::Discrete => "nb-dqi",
                NbqiCardinalKind::Integral => "nb-iqi",
            }
            .into(),
            m: order.saturating_sub(1),
            knots: String::new(),
            p: 0,
            q: 0,
            n,
            r,
            spans: quasiinterp::UNIFORM_SPANS,
        };
        if order == 0 {
            return Err(Fail(NbqiStatus::InvalidArgument, "order must be positive".into()));
        }
        let op = build_family(&fa, 0)?;
        write(out, boxed(NbqiOperator(op)), "out")
    })
}

/// # Safety
/// `op` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_free(op: *mut NbqiOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Number of coefficient functionals.
///
/// # Safety
/// `op` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_len(op: *const NbqiOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.len())
}

/// Largest functional norm, an upper bound for the operator norm.
///
/// # Safety
/// `op` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_nu_bound(op: *const NbqiOperator, out: *mut f64) -> NbqiStatus {
    guard(|| write(out, handle(op, "op")?.0.nu_bound(), "out"))
}

/// Claimed polynomial exactness degree.
///
/// # Safety
/// `op` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_degree(op: *const NbqiOperator, out: *mut usize) -> NbqiStatus {
    guard(|| write(out, handle(op, "op")?.0.exactness_degree(), "out"))
}

/// Writes the `nbqi_operator_len` spline coefficients of `Qf` into `coeffs`.
///
/// # Safety
/// `op` must be a live handle, `f` callable with `user`, and `coeffs`
/// writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_coefficients(
    op: *const NbqiOperator,
    f: NbqiFunction,
    user: *mut c_void,
    coeffs: *mut f64,
    cap: usize,
) -> NbqiStatus {
    guard(|| {
        let op = &handle(op, "op")?.0;
        if cap < op.len() {
            return Err(Fail(
                NbqiStatus::BufferTooSmall,
                format!("need {} coefficients, buffer holds {cap}", op.len()),
            ));
        }
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        let c = op.coefficients(callback(f, user)?)?;
        ptr::copy_nonoverlapping(c.as_ptr(), coeffs, c.len());
        Ok(())
    })
}

/// `(Qf)(x)`.
///
/// # Safety
/// `op` must be a live handle, `f` callable with `user`, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_eval(
    op: *const NbqiOperator,
    f: NbqiFunction,
    user: *mut c_void,
    x: f64,
    out: *mut f64,
) -> NbqiStatus {
    guard(|| {
        let v = handle(op, "op")?.0.eval(callback(f, user)?, x)?;
        write(out, v, "out")
    })
}

/// Sampled operator norm; `samples_per_span = 0` selects the default.
///
/// # Safety
/// `op` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_operator_norm(
    op: *const NbqiOperator,
    samples_per_span: usize,
    out: *mut f64,
) -> NbqiStatus {
    guard(|| {
        let mut opts = NormOptions::default();
        if samples_per_span > 0 {
            opts.samples_per_span = samples_per_span;
        }
        let est = normest::empirical_norm(&handle(op, "op")?.0, &opts)?;
        write(out, est.value, "out")
    })
}

/// Quadrature rule `∫Qf` of a discrete operator.
///
/// # Safety
/// `op` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_quadrature_new(
    op: *const NbqiOperator,
    out: *mut *mut NbqiQuadrature,
) -> NbqiStatus {
    guard(|| {
        let rule = quadrature::qi_to_quadrature(&handle(op, "op")?.0)?;
        write(out, boxed(NbqiQuadrature(rule)), "out")
    })
}

/// # Safety
/// `rule` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn nbqi_quadrature_len(rule: *const NbqiQuadrature) -> usize {
    rule.as_ref().map_or(0, |r| r.0.len())
}

/// Copies nodes and weights; either pointer may be NULL to skip it.
///
/// # Safety
/// `rule` must be a live handle; non-NULL buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn nbqi_quadrature_get(
    rule: *const NbqiQuadrature,
    nodes: *mut f64,
    weights: *mut f64,
    cap: usize,
) -> NbqiStatus {
    guard(|| {
        let r = &handle(rule, "rule")?.0;
        if cap < r.len() {
            return Err(Fail(
                NbqiStatus::BufferTooSmall,
                format!("need {} entries, buffer holds {cap}", r.len()),
            ));
        }
        if !nodes.is_null() {
            ptr::copy_nonoverlapping(r.nodes.as_ptr(), nodes, r.len());
        }
        if !weights.is_null() {
            ptr::copy_nonoverlapping(r.weights.as_ptr(), weights, r.len());
        }
        Ok(())
    })
}

/// Applies the rule to `f`.
///
/// # Safety
/// `rule` must be a live handle, `f` callable with `user`, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_quadrature_apply(
    rule: *const NbqiQuadrature,
    f: NbqiFunction,
    user: *mut c_void,
    out: *mut f64,
) -> NbqiStatus {
    guard(|| {
        let v = handle(rule, "rule")?.0.apply(callback(f, user)?);
        write(out, v, "out")
    })
}

/// # Safety
/// `rule` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nbqi_quadrature_free(rule: *mut NbqiQuadrature) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Near-best box-spline stencil at scale `s`: centre weight, common vertex
/// weight and the bound `ν`.
///
/// # Safety
/// All out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbqi_box_stencil(
    mesh: NbqiBoxMesh,
    s: usize,
    center: *mut f64,
    vertex: *mut f64,
    nu: *mut f64,
) -> NbqiStatus {
    guard(|| {
        let mesh = match mesh {
            NbqiBoxMesh::ThreeDirection => BoxMesh::ThreeDirection,
            NbqiBoxMesh::FourDirection => BoxMesh::FourDirection,
        };
        let c = bivariate::nb_box_coeffs(mesh, s)?;
        write(center, c.center, "center")?;
        write(vertex, c.vertex, "vertex")?;
        write(nu, c.nu, "nu")
    })
}
