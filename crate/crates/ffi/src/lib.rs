//! C interface to `vacpol`.
//!
//! Every function returns a [`VacpolStatus`] and writes results through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`vacpol_last_error`]. Lengths are in Bohr radii and potentials in hartree.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use vacpol::fermi::{make_fermi, FermiDistribution};
use vacpol::kallen_sabry::{ks_point, ks_potential};
use vacpol::specfun::bickley;
use vacpol::uehling_fermi::{uehling_fermi, FermiMethod};
use vacpol::uehling_point::{g, uehling_point_with, PointMethod};
use vacpol::{AccuracyControl, Error, PhysicalConstants};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VacpolStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Range = 3,
    NoConvergence = 4,
    Contract = 5,
    Config = 6,
    Panic = 7,
}

pub const VACPOL_POINT_QUADRATURE: i32 = 0;
pub const VACPOL_POINT_BICKLEY: i32 = 1;
pub const VACPOL_POINT_MEZO: i32 = 2;
pub const VACPOL_POINT_SMALL_R: i32 = 3;
pub const VACPOL_POINT_LARGE_R: i32 = 4;
pub const VACPOL_POINT_PYYKKO: i32 = 5;

pub const VACPOL_FERMI_DIRECT: i32 = 0;
pub const VACPOL_FERMI_SOMMERFELD: i32 = 1;

/// A Fermi charge distribution. Create with [`vacpol_nucleus_new`] or
/// [`vacpol_nucleus_physical`], release with [`vacpol_nucleus_free`].
pub struct VacpolNucleus {
    dist: FermiDistribution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> VacpolStatus {
    match e {
        Error::Domain { .. } => VacpolStatus::Domain,
        Error::Range { .. } => VacpolStatus::Range,
        Error::NoConvergence { .. } => VacpolStatus::NoConvergence,
        Error::Contract { .. } => VacpolStatus::Contract,
        Error::Config(_) => VacpolStatus::Config,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> VacpolStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            VacpolStatus::Ok
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(&format!("null pointer passed as {name}"));
            VacpolStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            VacpolStatus::Panic
        }
    }
}

fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: the caller passes either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or(Failure::Null(name))
}

fn handle<'a>(p: *const VacpolNucleus) -> Result<&'a VacpolNucleus, Failure> {
    // SAFETY: null or a live handle from a constructor.
    unsafe { p.as_ref() }.ok_or(Failure::Null("nucleus"))
}

fn store(p: *mut f64, v: f64) {
    // SAFETY: null or a valid, writable pointer.
    if let Some(slot) = unsafe { p.as_mut() } {
        *slot = v;
    }
}

fn accuracy(rel_tol: f64) -> Result<AccuracyControl, Failure> {
    Ok(AccuracyControl::with_tol(rel_tol)?)
}

fn point_method(m: i32) -> Result<PointMethod, Failure> {
    Ok(match m {
        VACPOL_POINT_QUADRATURE => PointMethod::Quadrature,
        VACPOL_POINT_BICKLEY => PointMethod::Bickley,
        VACPOL_POINT_MEZO => PointMethod::Mezo,
        VACPOL_POINT_SMALL_R => PointMethod::AsymptoticSmall,
        VACPOL_POINT_LARGE_R => PointMethod::AsymptoticLarge,
        VACPOL_POINT_PYYKKO => PointMethod::PyykkoFit,
        _ => return Err(Error::Config(format!("unknown point method {m}")).into()),
    })
}

fn fermi_method(m: i32) -> Result<FermiMethod, Failure> {
    Ok(match m {
        VACPOL_FERMI_DIRECT => FermiMethod::Direct,
        VACPOL_FERMI_SOMMERFELD => FermiMethod::Sommerfeld,
        _ => return Err(Error::Config(format!("unknown Fermi method {m}")).into()),
    })
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn vacpol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn vacpol_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul byte"),
    };
    VERSION.as_ptr()
}

/// Uehling kernel `g(z)`, `z ≥ 0`.
#[no_mangle]
pub extern "C" fn vacpol_g(z: f64, value: *mut f64) -> VacpolStatus {
    guard(|| {
        *out(value, "value")? = g(z)?;
        Ok(())
    })
}

/// Bickley-Naylor function `Ki_n(z)`.
#[no_mangle]
pub extern "C" fn vacpol_bickley(n: u32, z: f64, value: *mut f64) -> VacpolStatus {
    guard(|| {
        *out(value, "value")? = bickley(n, z)?;
        Ok(())
    })
}

/// Point-nucleus Uehling potential at `r` for charge `z_nuc`.
/// `est_error` may be null.
#[no_mangle]
pub extern "C" fn vacpol_uehling_point(
    r: f64,
    z_nuc: f64,
    method: i32,
    rel_tol: f64,
    value: *mut f64,
    est_error: *mut f64,
) -> VacpolStatus {
    guard(|| {
        let v = out(value, "value")?;
        let p = uehling_point_with(r, z_nuc, point_method(method)?, &PhysicalConstants::default(), &accuracy(rel_tol)?)?;
        *v = p.value;
        store(est_error, p.est_error);
        Ok(())
    })
}

/// New nucleus with charge `z`, half-density radius `xi` and diffuseness `a`.
#[no_mangle]
pub extern "C" fn vacpol_nucleus_new(z: f64, xi: f64, a: f64, nucleus: *mut *mut VacpolNucleus) -> VacpolStatus {
    guard(|| {
        let slot = out(nucleus, "nucleus")?;
        let dist = make_fermi(z, xi, a)?;
        *slot = Box::into_raw(Box::new(VacpolNucleus { dist }));
        Ok(())
    })
}

/// New nucleus of charge `z` with the default radius and surface thickness.
#[no_mangle]
pub extern "C" fn vacpol_nucleus_physical(z: f64, nucleus: *mut *mut VacpolNucleus) -> VacpolStatus {
    guard(|| {
        let slot = out(nucleus, "nucleus")?;
        let dist = FermiDistribution::physical(z)?;
        *slot = Box::into_raw(Box::new(VacpolNucleus { dist }));
        Ok(())
    })
}

/// Releases a nucleus. Null is ignored.
///
/// # Safety
/// `nucleus` must come from one of the constructors and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vacpol_nucleus_free(nucleus: *mut VacpolNucleus) {
    if !nucleus.is_null() {
        drop(Box::from_raw(nucleus));
    }
}

/// Half-density radius, diffuseness and central density of a nucleus.
/// Any out pointer may be null.
#[no_mangle]
pub extern "C" fn vacpol_nucleus_params(
    nucleus: *const VacpolNucleus,
    xi: *mut f64,
    a: *mut f64,
    rho0: *mut f64,
) -> VacpolStatus {
    guard(|| {
        let n = handle(nucleus)?;
        store(xi, n.dist.xi);
        store(a, n.dist.a);
        store(rho0, n.dist.rho0);
        Ok(())
    })
}

fn with_nucleus(
    nucleus: *const VacpolNucleus,
    value: *mut f64,
    est_error: *mut f64,
    eval: impl FnOnce(&FermiDistribution) -> Result<(f64, f64), Failure>,
) -> VacpolStatus {
    guard(|| {
        let n = handle(nucleus)?;
        let v = out(value, "value")?;
        let (val, err) = eval(&n.dist)?;
        *v = val;
        store(est_error, err);
        Ok(())
    })
}

/// Uehling potential of a Fermi nucleus at `r`. `est_error` may be null.
#[no_mangle]
pub extern "C" fn vacpol_uehling_fermi(
    nucleus: *const VacpolNucleus,
    r: f64,
    method: i32,
    rel_tol: f64,
    value: *mut f64,
    est_error: *mut f64,
) -> VacpolStatus {
    with_nucleus(nucleus, value, est_error, |d| {
        let p = uehling_fermi(r, d, fermi_method(method)?, &accuracy(rel_tol)?, &PhysicalConstants::default())?;
        Ok((p.value, p.est_error))
    })
}

/// Källén-Sabry potential of a Fermi nucleus at `r`. `est_error` may be null.
#[no_mangle]
pub extern "C" fn vacpol_ks_potential(
    nucleus: *const VacpolNucleus,
    r: f64,
    rel_tol: f64,
    value: *mut f64,
    est_error: *mut f64,
) -> VacpolStatus {
    with_nucleus(nucleus, value, est_error, |d| {
        let p = ks_potential(r, d, &accuracy(rel_tol)?, &PhysicalConstants::default())?;
        Ok((p.value, p.est_error))
    })
}

/// Point-nucleus Källén-Sabry potential. `est_error` may be null.
#[no_mangle]
pub extern "C" fn vacpol_ks_point(
    r: f64,
    z_nuc: f64,
    rel_tol: f64,
    value: *mut f64,
    est_error: *mut f64,
) -> VacpolStatus {
    guard(|| {
        let v = out(value, "value")?;
        let p = ks_point(r, z_nuc, &PhysicalConstants::default(), &accuracy(rel_tol)?)?;
        *v = p.value;
        store(est_error, p.est_error);
        Ok(())
    })
}
