//! C interface to `specscale`.
//!
//! Every entry point returns a [`SpecscaleStatus`]; on failure the message is
//! available from [`specscale_last_error`] on the calling thread. Objects are
//! opaque handles released with the matching `*_free` function. Matrices are
//! passed as row-major arrays of `n*n` doubles, real and imaginary parts
//! separately; a null imaginary part means zero.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use specscale::geometry::{horizontal_faces_3d_with, HorizontalFaceReport, DEFAULT_MATCH_TOL};
use specscale::io::parse_matrix_file;
use specscale::linalg::{cartesian_decompose, CartesianPair, ComplexMatrix, ExtendedReal};
use specscale::pencil::{pencil_spectrum, Method, PencilSpectrum};
use specscale::scale::{exposed_face, support_value};
use specscale::verify::{case_rng, test_directions, verify_subject, Status, Subject};
use specscale::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecscaleStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Validation = 4,
    Parse = 5,
    /// `det(A1 + λ·A2)` vanishes identically.
    SingularPencil = 6,
    /// `A2 = 0`, so there is no pencil.
    ZeroA2 = 7,
    NoConvergence = 8,
    Io = 9,
    /// A Rust panic was caught at the boundary.
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecscaleMethod {
    GeneralizedEig = 0,
    DetPoly = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecscaleSubject {
    Theorem21 = 0,
    Remark22 = 1,
    Lemma23 = 2,
    Remark24 = 3,
    Theorem25 = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecscaleVerdict {
    Passed = 0,
    Failed = 1,
    NotApplicable = 2,
}

/// Exposed face of `B(A)` in direction `u`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpecscaleFace {
    pub base: [f64; 3],
    pub far: [f64; 3],
    pub x_extent: f64,
    pub kernel_dim: usize,
    pub dimension: usize,
}

/// A face exposed by `(0, t1, t2)` with positive x-extent.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpecscaleHorizontalFace {
    pub t1: f64,
    pub t2: f64,
    /// `+∞` for the vertical direction `(0, 1)`.
    pub tan_theta: f64,
    pub x_extent: f64,
    pub kernel_dim: usize,
    /// Whether a real pencil root (or `∞`) was matched to this face.
    pub matched: bool,
    /// The matched root; NaN when unmatched.
    pub root: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecscaleVerification {
    pub verdict: SpecscaleVerdict,
    pub max_residual: f64,
    pub tolerance: f64,
}

/// A validated Hermitian pair `(A1, A2)`.
pub struct SpecscalePair(CartesianPair);

pub struct SpecscaleSpectrum(PencilSpectrum);

pub struct SpecscaleFaces(HorizontalFaceReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

type FfiResult = Result<(), SpecscaleStatus>;

fn fail(status: SpecscaleStatus, msg: impl Into<String>) -> SpecscaleStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> SpecscaleStatus {
    let status = match &e {
        Error::Dimension(_) => SpecscaleStatus::Dimension,
        Error::Validation(_) | Error::Precondition(_) => SpecscaleStatus::Validation,
        Error::Parse(_) => SpecscaleStatus::Parse,
        Error::SingularPencil => SpecscaleStatus::SingularPencil,
        Error::ZeroA2 => SpecscaleStatus::ZeroA2,
        Error::NoConvergence(_) => SpecscaleStatus::NoConvergence,
        Error::Io(_) => SpecscaleStatus::Io,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> FfiResult) -> SpecscaleStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpecscaleStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(SpecscaleStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn require<'a, T>(p: *const T, name: &str) -> Result<&'a T, SpecscaleStatus> {
    p.as_ref().ok_or_else(|| fail(SpecscaleStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, SpecscaleStatus> {
    p.as_mut().ok_or_else(|| fail(SpecscaleStatus::NullPointer, format!("{name} is null")))
}

unsafe fn matrix(n: usize, re: *const f64, im: *const f64, name: &str) -> Result<ComplexMatrix, SpecscaleStatus> {
    if n == 0 {
        return Err(fail(SpecscaleStatus::Dimension, "n must be at least 1"));
    }
    let len = n.checked_mul(n).ok_or_else(|| fail(SpecscaleStatus::Dimension, "n is too large"))?;
    require(re, name)?;
    let re = std::slice::from_raw_parts(re, len);
    let im = if im.is_null() { vec![0.0; len] } else { std::slice::from_raw_parts(im, len).to_vec() };
    ComplexMatrix::from_row_major(n, re, &im).map_err(from_error)
}

fn subject(s: SpecscaleSubject) -> Subject {
    match s {
        SpecscaleSubject::Theorem21 => Subject::Theorem21,
        SpecscaleSubject::Remark22 => Subject::Remark22,
        SpecscaleSubject::Lemma23 => Subject::Lemma23,
        SpecscaleSubject::Remark24 => Subject::Remark24,
        SpecscaleSubject::Theorem25 => Subject::Theorem25,
    }
}

fn extended(r: ExtendedReal) -> f64 {
    match r {
        ExtendedReal::Finite(x) => x,
        ExtendedReal::Infinity => f64::INFINITY,
    }
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn specscale_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn specscale_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Cartesian pair of a general complex matrix `A = A1 + i·A2`.
///
/// # Safety
/// `re` (and `im` unless null) must point to `n*n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specscale_pair_from_matrix(
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut SpecscalePair,
) -> SpecscaleStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let a = matrix(n, re, im, "re")?;
        *out = Box::into_raw(Box::new(SpecscalePair(cartesian_decompose(&a))));
        Ok(())
    })
}

/// Pair from Hermitian `A1` and `A2`, checked within `hermit_tol`.
///
/// # Safety
/// Each non-null array must hold `n*n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specscale_pair_from_hermitian(
    n: usize,
    a1_re: *const f64,
    a1_im: *const f64,
    a2_re: *const f64,
    a2_im: *const f64,
    hermit_tol: f64,
    out: *mut *mut SpecscalePair,
) -> SpecscaleStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let a1 = matrix(n, a1_re, a1_im, "a1_re")?;
        let a2 = matrix(n, a2_re, a2_im, "a2_re")?;
        let pair = CartesianPair::with_tolerance(a1, a2, hermit_tol).map_err(from_error)?;
        *out = Box::into_raw(Box::new(SpecscalePair(pair)));
        Ok(())
    })
}

/// Pair from a JSON matrix file.
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specscale_pair_from_file(path: *const c_char, out: *mut *mut SpecscalePair) -> SpecscaleStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        require(path, "path")?;
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| fail(SpecscaleStatus::InvalidArgument, "path is not UTF-8"))?;
        let pair = parse_matrix_file(Path::new(path)).map_err(from_error)?;
        *out = Box::into_raw(Box::new(SpecscalePair(pair)));
        Ok(())
    })
}

/// # Safety
/// `pair` must come from a `specscale_pair_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn specscale_pair_free(pair: *mut SpecscalePair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Dimension `n`, or 0 for a null handle.
///
/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specscale_pair_dim(pair: *const SpecscalePair) -> usize {
    pair.as_ref().map_or(0, |p| p.0.dim())
}

/// Support function `h(u)` for a unit vector `u`.
///
/// # Safety
/// `u` must point to 3 doubles; `pair` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specscale_support_value(
    pair: *const SpecscalePair,
    u: *const f64,
    out: *mut f64,
) -> SpecscaleStatus {
    guard(|| {
        let pair = require(pair, "pair")?;
        let out = self::out(out, "out")?;
        require(u, "u")?;
        let u = std::slice::from_raw_parts(u, 3);
        *out = support_value(&pair.0, [u[0], u[1], u[2]]).map_err(from_error)?;
        Ok(())
    })
}

/// Face of `B(A)` exposed by the unit vector `u`.
///
/// # Safety
/// `u` must point to 3 doubles; `pair` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specscale_exposed_face(
    pair: *const SpecscalePair,
    u: *const f64,
    tol: f64,
    out: *mut SpecscaleFace,
) -> SpecscaleStatus {
    guard(|| {
        let pair = require(pair, "pair")?;
        let out = self::out(out, "out")?;
        require(u, "u")?;
        let u = std::slice::from_raw_parts(u, 3);
        let f = exposed_face(&pair.0, [u[0], u[1], u[2]], tol).map_err(from_error)?;
        *out = SpecscaleFace {
            base: f.base,
            far: f.far,
            x_extent: f.x_extent,
            kernel_dim: f.kernel_dim,
            dimension: f.dimension,
        };
        Ok(())
    })
}

/// Spectrum of `A1 + λ·A2`. A singular pencil is not an error: check
/// [`specscale_spectrum_is_regular`].
///
/// # Safety
/// `pair` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specscale_pencil_spectrum(
    pair: *const SpecscalePair,
    method: SpecscaleMethod,
    tol: f64,
    out: *mut *mut SpecscaleSpectrum,
) -> SpecscaleStatus {
    guard(|| {
        let pair = require(pair, "pair")?;
        let out = self::out(out, "out")?;
        let method = match method {
            SpecscaleMethod::GeneralizedEig => Method::GeneralizedEig,
            SpecscaleMethod::DetPoly => Method::DetPoly,
        };
        let s = pencil_spectrum(&pair.0, method, tol).map_err(from_error)?;
        *out = Box::into_raw(Box::new(SpecscaleSpectrum(s)));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn specscale_spectrum_free(spectrum: *mut SpecscaleSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specscale_spectrum_is_regular(spectrum: *const SpecscaleSpectrum) -> bool {
    spectrum.as_ref().is_some_and(|s| s.0.regular)
}

/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specscale_spectrum_has_infinity(spectrum: *const SpecscaleSpectrum) -> bool {
    spectrum.as_ref().is_some_and(|s| s.0.has_infinity)
}

/// Number of finite eigenvalues, counted with multiplicity.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specscale_spectrum_finite_count(spectrum: *const SpecscaleSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.finite.len())
}

/// Finite eigenvalue `index`, sorted by real then imaginary part.
///
/// # Safety
/// `spectrum`, `re` and `im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specscale_spectrum_finite(
    spectrum: *const SpecscaleSpectrum,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> SpecscaleStatus {
    guard(|| {
        let s = require(spectrum, "spectrum")?;
        let (re, im) = (out(re, "re")?, out(im, "im")?);
        let z = s.0.finite.get(index).ok_or_else(|| {
            fail(SpecscaleStatus::InvalidArgument, format!("index {index} out of range ({})", s.0.finite.len()))
        })?;
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Number of distinct real eigenvalues.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specscale_spectrum_real_count(spectrum: *const SpecscaleSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.real_subset.len())
}

/// Copies up to `capacity` real eigenvalues (ascending) into `values`; returns
/// the number copied.
///
/// # Safety
/// `values` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn specscale_spectrum_reals(
    spectrum: *const SpecscaleSpectrum,
    values: *mut f64,
    capacity: usize,
) -> usize {
    let (Some(s), false) = (spectrum.as_ref(), values.is_null()) else {
        return 0;
    };
    let k = s.0.real_subset.len().min(capacity);
    std::ptr::copy_nonoverlapping(s.0.real_subset.as_ptr(), values, k);
    k
}

/// Horizontal faces of `B(A)` matched to the real pencil spectrum. Fails with
/// `SPECSCALE_STATUS_SINGULAR_PENCIL` for a singular pencil.
///
/// # Safety
/// `pair` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specscale_horizontal_faces(
    pair: *const SpecscalePair,
    tol: f64,
    out: *mut *mut SpecscaleFaces,
) -> SpecscaleStatus {
    guard(|| {
        let pair = require(pair, "pair")?;
        let out = self::out(out, "out")?;
        let r = horizontal_faces_3d_with(&pair.0, tol, DEFAULT_MATCH_TOL).map_err(from_error)?;
        *out = Box::into_raw(Box::new(SpecscaleFaces(r)));
        Ok(())
    })
}

/// # Safety
/// `faces` must be null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn specscale_faces_free(faces: *mut SpecscaleFaces) {
    if !faces.is_null() {
        drop(Box::from_raw(faces));
    }
}

/// # Safety
/// `faces` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specscale_faces_count(faces: *const SpecscaleFaces) -> usize {
    faces.as_ref().map_or(0, |f| f.0.faces.len())
}

/// True when every face has a root and every real root (and `∞`) has a face.
///
/// # Safety
/// `faces` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specscale_faces_consistent(faces: *const SpecscaleFaces) -> bool {
    faces.as_ref().is_some_and(|f| f.0.is_consistent())
}

/// # Safety
/// `faces` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specscale_faces_get(
    faces: *const SpecscaleFaces,
    index: usize,
    out: *mut SpecscaleHorizontalFace,
) -> SpecscaleStatus {
    guard(|| {
        let r = &require(faces, "faces")?.0;
        let out = self::out(out, "out")?;
        let f = r.faces.get(index).ok_or_else(|| {
            fail(SpecscaleStatus::InvalidArgument, format!("index {index} out of range ({})", r.faces.len()))
        })?;
        let m = r.matched.iter().find(|m| m.face == index);
        let (t1, t2) = f.t.map_or((0.0, 0.0), |t| (t.t1(), t.t2()));
        *out = SpecscaleHorizontalFace {
            t1,
            t2,
            tan_theta: f.tan_theta.map_or(f64::NAN, extended),
            x_extent: f.x_extent,
            kernel_dim: f.kernel_dim,
            matched: m.is_some(),
            root: m.map_or(f64::NAN, |m| extended(m.root)),
        };
        Ok(())
    })
}

/// Runs one verification subject on `pair`. `directions` random directions
/// (plus the axes) drawn from `seed` feed the support comparisons.
///
/// # Safety
/// `pair` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specscale_verify(
    pair: *const SpecscalePair,
    which: SpecscaleSubject,
    directions: usize,
    grid: usize,
    tol: f64,
    seed: u64,
    out: *mut SpecscaleVerification,
) -> SpecscaleStatus {
    guard(|| {
        let pair = require(pair, "pair")?;
        let out = self::out(out, "out")?;
        let mut rng = case_rng(seed, 7, 0);
        let ts = test_directions(directions, &mut rng);
        let r = verify_subject(subject(which), &pair.0, &ts, grid, tol).map_err(from_error)?;
        *out = SpecscaleVerification {
            verdict: match r.status {
                Status::Passed => SpecscaleVerdict::Passed,
                Status::Failed => SpecscaleVerdict::Failed,
                Status::NotApplicable => SpecscaleVerdict::NotApplicable,
            },
            max_residual: r.max_residual,
            tolerance: r.tolerance,
        };
        Ok(())
    })
}
