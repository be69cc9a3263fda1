//! C ABI over `coorbit-core`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every call returns a [`CoorbitStatus`]; on failure the message is
//! available from [`coorbit_last_error`] until the next failing call on the
//! same thread. Results are written through out-pointers.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::slice;

use coorbit_core::cli;
use coorbit_core::coorbit::{self, NormSpec};
use coorbit_core::gaussian::{self, CVec, ComplexSymMatrix, GeneralizedGaussian, PhaseSpacePoint};
use coorbit_core::groups::{Group, GroupElement};
use coorbit_core::representations::{self, RepSpec};
use coorbit_core::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoorbitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotPositiveDefinite = 4,
    NotIntegrable = 5,
    TruncationTooSmall = 6,
    NotAFrame = 7,
    Diverged = 8,
    ConfigError = 9,
    ToleranceViolated = 10,
    Io = 11,
    Numerical = 12,
    Panic = 13,
}

/// A generalized Gaussian `c·exp(−πAt·t + b·t)`.
pub struct CoorbitGaussian {
    inner: GeneralizedGaussian,
}

/// A representation of one of the supported groups.
pub struct CoorbitRep {
    inner: RepSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(e: &Error) -> CoorbitStatus {
    match e {
        Error::DimensionMismatch { .. } => CoorbitStatus::DimensionMismatch,
        Error::NotPositiveDefinite { .. } => CoorbitStatus::NotPositiveDefinite,
        Error::NotIntegrable => CoorbitStatus::NotIntegrable,
        Error::TruncationTooSmall(_) => CoorbitStatus::TruncationTooSmall,
        Error::NotAFrame { .. } => CoorbitStatus::NotAFrame,
        Error::CgDiverged { .. } => CoorbitStatus::Diverged,
        Error::Numerical(_) => CoorbitStatus::Numerical,
        _ => CoorbitStatus::InvalidArgument,
    }
}

struct Fail(CoorbitStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn null(what: &str) -> Fail {
    Fail(CoorbitStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, mapping errors and panics to a status.
fn guard(f: impl FnOnce() -> Res<()>) -> CoorbitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CoorbitStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned());
            set_error(format!(
                "internal panic: {}",
                msg.unwrap_or_else(|| "unknown".into())
            ));
            CoorbitStatus::Panic
        }
    }
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn array<'a>(p: *const f64, n: usize, what: &str) -> Res<&'a [f64]> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, n))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Fail(
            CoorbitStatus::InvalidArgument,
            format!("`{what}` is not UTF-8"),
        )
    })
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Res<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failing call on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn coorbit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn coorbit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The standard Gaussian `2^{d/4} e^{−π|t|²}` on `ℝ^dim`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_gaussian_standard(
    dim: usize,
    out: *mut *mut CoorbitGaussian,
) -> CoorbitStatus {
    guard(|| {
        if dim == 0 {
            return Err(Fail(
                CoorbitStatus::InvalidArgument,
                "dimension must be positive".into(),
            ));
        }
        write(
            out,
            boxed(CoorbitGaussian {
                inner: GeneralizedGaussian::standard(dim),
            }),
            "out",
        )
    })
}

/// `c·exp(−πAt·t + b·t)` from row-major `A` (`dim²` entries, real and
/// imaginary parts) and `b` (`dim` entries).
///
/// # Safety
/// `a_re`, `a_im` must hold `dim*dim` doubles, `b_re`, `b_im` `dim` doubles,
/// and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_gaussian_new(
    dim: usize,
    amp_re: f64,
    amp_im: f64,
    a_re: *const f64,
    a_im: *const f64,
    b_re: *const f64,
    b_im: *const f64,
    out: *mut *mut CoorbitGaussian,
) -> CoorbitStatus {
    guard(|| {
        if dim == 0 {
            return Err(Fail(
                CoorbitStatus::InvalidArgument,
                "dimension must be positive".into(),
            ));
        }
        let (ar, ai) = (
            array(a_re, dim * dim, "a_re")?,
            array(a_im, dim * dim, "a_im")?,
        );
        let (br, bi) = (array(b_re, dim, "b_re")?, array(b_im, dim, "b_im")?);
        let m = coorbit_core::gaussian::CMat::from_fn(dim, dim, |i, j| {
            Complex64::new(ar[i * dim + j], ai[i * dim + j])
        });
        let quad = ComplexSymMatrix::try_new(m)?;
        let lin = CVec::from_fn(dim, |i, _| Complex64::new(br[i], bi[i]));
        let g = GeneralizedGaussian::new(Complex64::new(amp_re, amp_im), quad, lin)?;
        write(out, boxed(CoorbitGaussian { inner: g }), "out")
    })
}

/// `N_C g` for real symmetric row-major `C`.
///
/// # Safety
/// `g` must be a live handle, `c` must hold `dim²` doubles where `dim` is the
/// dimension of `g`, and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_gaussian_chirp(
    g: *const CoorbitGaussian,
    c: *const f64,
    out: *mut *mut CoorbitGaussian,
) -> CoorbitStatus {
    guard(|| {
        let g = &reference(g, "g")?.inner;
        let d = g.dim();
        let c = ComplexSymMatrix::real_from_rows(d, array(c, d * d, "c")?)?;
        write(
            out,
            boxed(CoorbitGaussian {
                inner: g.chirp(&c)?,
            }),
            "out",
        )
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coorbit_gaussian_free(g: *mut CoorbitGaussian) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_gaussian_dim(
    g: *const CoorbitGaussian,
    out: *mut usize,
) -> CoorbitStatus {
    guard(|| write(out, reference(g, "g")?.inner.dim(), "out"))
}

/// `g(t)`.
///
/// # Safety
/// `g` must be a live handle, `t` must hold `dim` doubles, and the outputs
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_gaussian_eval(
    g: *const CoorbitGaussian,
    t: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CoorbitStatus {
    guard(|| {
        let g = &reference(g, "g")?.inner;
        let v = g.eval(array(t, g.dim(), "t")?);
        write(out_re, v.re, "out_re")?;
        write(out_im, v.im, "out_im")
    })
}

/// `‖g‖₂`.
///
/// # Safety
/// `g` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_gaussian_norm(
    g: *const CoorbitGaussian,
    out: *mut f64,
) -> CoorbitStatus {
    guard(|| write(out, reference(g, "g")?.inner.norm(), "out"))
}

/// `V_g f(x, ξ)` in closed form.
///
/// # Safety
/// `f`, `g` must be live handles of equal dimension `d`, `x` and `xi` must
/// hold `d` doubles, and the outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_stft(
    f: *const CoorbitGaussian,
    g: *const CoorbitGaussian,
    x: *const f64,
    xi: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CoorbitStatus {
    guard(|| {
        let f = &reference(f, "f")?.inner;
        let g = &reference(g, "g")?.inner;
        let d = f.dim();
        let z = PhaseSpacePoint::new(array(x, d, "x")?.to_vec(), array(xi, d, "xi")?.to_vec())?;
        let v = gaussian::stft_closed(f, g, &z)?;
        write(out_re, v.re, "out_re")?;
        write(out_im, v.im, "out_im")
    })
}

/// `‖N_C φ‖_{M^p}` in closed form for real symmetric row-major `C`.
///
/// # Safety
/// `c` must hold `dim²` doubles and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_chirp_mp_norm(
    dim: usize,
    c: *const f64,
    p: f64,
    out: *mut f64,
) -> CoorbitStatus {
    guard(|| {
        let c = ComplexSymMatrix::real_from_rows(dim, array(c, dim * dim, "c")?)?;
        write(out, gaussian::chirp_mp_norm(&c, p)?, "out")
    })
}

/// Unweighted `‖V_g f‖_{L^p}` over phase space with default truncation.
///
/// # Safety
/// `f`, `g` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_modulation_norm(
    f: *const CoorbitGaussian,
    g: *const CoorbitGaussian,
    p: f64,
    out: *mut f64,
) -> CoorbitStatus {
    guard(|| {
        let (f, g) = (&reference(f, "f")?.inner, &reference(g, "g")?.inner);
        write(
            out,
            coorbit::modulation_norm(f, g, &NormSpec::new(p)?)?.value,
            "out",
        )
    })
}

/// Representation with parameters `(λ, μ)` of the group named `group`
/// (`heisenberg`, `heisenberg(d)`, `g6_16`, `g5_3`, `g6_19`, `dynin_folland`).
///
/// # Safety
/// `group` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_rep_new(
    group: *const c_char,
    lambda: f64,
    mu: f64,
    out: *mut *mut CoorbitRep,
) -> CoorbitStatus {
    guard(|| {
        let group: Group = string(group, "group")?.parse()?;
        write(
            out,
            boxed(CoorbitRep {
                inner: RepSpec::new(group, lambda, mu)?,
            }),
            "out",
        )
    })
}

/// # Safety
/// `rep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coorbit_rep_free(rep: *mut CoorbitRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Dimension of the space the representation acts on.
///
/// # Safety
/// `rep` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_rep_realization_dim(
    rep: *const CoorbitRep,
    out: *mut usize,
) -> CoorbitStatus {
    guard(|| write(out, reference(rep, "rep")?.inner.realization_dim(), "out"))
}

/// Number of group coordinates.
///
/// # Safety
/// `rep` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_rep_group_dim(
    rep: *const CoorbitRep,
    out: *mut usize,
) -> CoorbitStatus {
    guard(|| write(out, reference(rep, "rep")?.inner.group().total_dim(), "out"))
}

/// Exact formal dimension under the library's Haar normalization.
///
/// # Safety
/// `rep` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_rep_formal_dimension(
    rep: *const CoorbitRep,
    out: *mut f64,
) -> CoorbitStatus {
    guard(|| {
        write(
            out,
            reference(rep, "rep")?.inner.formal_dimension_exact(),
            "out",
        )
    })
}

/// `π(a) g` for the group element with coordinates `coords[0..n]`.
///
/// # Safety
/// `rep` and `g` must be live handles, `coords` must hold `n` doubles, and
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_rep_apply(
    rep: *const CoorbitRep,
    coords: *const f64,
    n: usize,
    g: *const CoorbitGaussian,
    out: *mut *mut CoorbitGaussian,
) -> CoorbitStatus {
    guard(|| {
        let rep = &reference(rep, "rep")?.inner;
        let g = &reference(g, "g")?.inner;
        let a = GroupElement::new(rep.group(), array(coords, n, "coords")?.to_vec())?;
        write(
            out,
            boxed(CoorbitGaussian {
                inner: representations::apply_rep(rep, &a, g)?,
            }),
            "out",
        )
    })
}

/// Unweighted coorbit norm `‖V_g^π f‖_{L^p(G/Z)}` with default truncation.
///
/// # Safety
/// All handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn coorbit_norm(
    rep: *const CoorbitRep,
    f: *const CoorbitGaussian,
    g: *const CoorbitGaussian,
    p: f64,
    out: *mut f64,
) -> CoorbitStatus {
    guard(|| {
        let rep = &reference(rep, "rep")?.inner;
        let (f, g) = (&reference(f, "f")?.inner, &reference(g, "g")?.inner);
        write(
            out,
            coorbit::coorbit_norm(rep, f, g, &NormSpec::new(p)?)?.value,
            "out",
        )
    })
}

/// Parses `config`, runs the experiment and writes its CSV and JSON into
/// `out_dir` (the configured directory when null). Returns
/// `ToleranceViolated` when the run completes but a check fails.
///
/// # Safety
/// `config` must be a NUL-terminated string, `out_dir` null or a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn coorbit_run_experiment(
    config: *const c_char,
    out_dir: *const c_char,
) -> CoorbitStatus {
    guard(|| {
        let text = string(config, "config")?;
        let c =
            cli::parse_config(text).map_err(|e| Fail(CoorbitStatus::ConfigError, e.to_string()))?;
        let dir = if out_dir.is_null() {
            c.output.clone()
        } else {
            string(out_dir, "out_dir")?.to_string()
        };
        let outcome = cli::run_experiment(&c)?;
        cli::write_artifacts(&c, &outcome, Path::new(&dir))
            .map_err(|e| Fail(CoorbitStatus::Io, e.to_string()))?;
        if outcome.pass {
            Ok(())
        } else {
            Err(Fail(
                CoorbitStatus::ToleranceViolated,
                format!("{}: tolerance violated", c.kind),
            ))
        }
    })
}
