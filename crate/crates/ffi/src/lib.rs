//! C ABI for the swanson library.
//!
//! Models live behind an opaque [`SwansonModel`] handle. Every fallible call returns a
//! [`SwansonStatus`]; on failure the message is kept per thread and can be read with
//! [`swanson_last_error`]. Panics are caught at the boundary and reported as
//! `SWANSON_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use swanson::cli::{MethodChoice, Model, RunConfig};
use swanson::mapping::DomainClass;
use swanson::model::{omega_tilde, SwansonParams};
use swanson::potential::v_eff_general;
use swanson::specfun::{hyp1f1, KummerArgs};
use swanson::spectrum::SpectrumResult;
use swanson::Error;

/// Result of every fallible call. The numeric values match the CLI exit codes where
/// both exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwansonStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    InvalidArgument = 1,
    /// Bad configuration, formula or parameters.
    Config = 2,
    /// The requested law does not apply to the domain.
    Domain = 3,
    /// Numerical failure (quadrature, roots, series, positivity).
    Numeric = 4,
    /// The library panicked; the handle involved should be freed.
    Panic = 5,
}

/// Shape of the image of the coordinate map.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwansonDomain {
    UnboundedLine = 0,
    BoundedInterval = 1,
    SemiBoundedBelow = 2,
    SemiBoundedAbove = 3,
}

/// Opaque model handle.
pub struct SwansonModel {
    inner: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SwansonStatus {
    match e.exit_code() {
        2 => SwansonStatus::Config,
        3 => SwansonStatus::Domain,
        _ => SwansonStatus::Numeric,
    }
}

enum Failure {
    Arg(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SwansonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SwansonStatus::Ok,
        Ok(Err(Failure::Arg(msg))) => {
            set_error(msg);
            SwansonStatus::InvalidArgument
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SwansonStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Arg(format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Arg(format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::Arg(format!("{what} is null")))
}

unsafe fn model_arg<'a>(p: *const SwansonModel) -> Result<&'a Model, Failure> {
    p.as_ref().map(|m| &m.inner).ok_or_else(|| Failure::Arg("model is null".into()))
}

unsafe fn publish(cfg: RunConfig, out: *mut *mut SwansonModel) -> Result<(), Failure> {
    let out = out_arg(out, "out")?;
    *out = std::ptr::null_mut();
    let inner = cfg.build_model()?;
    *out = Box::into_raw(Box::new(SwansonModel { inner }));
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn swanson_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn swanson_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build a model from a catalog profile with `w` derived from `alpha`, `beta` and `k = 1`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer. The handle written to
/// `*out` must be released with [`swanson_model_free`].
#[no_mangle]
pub unsafe extern "C" fn swanson_model_from_profile(
    name: *const c_char,
    alpha: f64,
    beta: f64,
    out: *mut *mut SwansonModel,
) -> SwansonStatus {
    guard(|| {
        let cfg = RunConfig {
            profile: Some(str_arg(name, "name")?.to_string()),
            alpha,
            beta,
            ..RunConfig::default()
        };
        publish(cfg, out)
    })
}

/// Build a model from a JSON object with the same keys as the command-line config file
/// (`profile`, `m`, `A`, `B`, `params`, `w`, `alpha`, `beta`, `k`, `convention_shift`, ...).
///
/// # Safety
/// As for [`swanson_model_from_profile`].
#[no_mangle]
pub unsafe extern "C" fn swanson_model_from_json(json: *const c_char, out: *mut *mut SwansonModel) -> SwansonStatus {
    guard(|| {
        let cfg: RunConfig = serde_json::from_str(str_arg(json, "json")?).map_err(Error::from)?;
        publish(cfg, out)
    })
}

/// Release a model. Null is ignored.
///
/// # Safety
/// `model` must come from one of the constructors and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn swanson_model_free(model: *mut SwansonModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Domain class and image ends. Infinite ends are reported as `+-INFINITY`.
///
/// # Safety
/// `model` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn swanson_model_domain(
    model: *const SwansonModel,
    class: *mut SwansonDomain,
    zminus: *mut f64,
    zplus: *mut f64,
) -> SwansonStatus {
    guard(|| {
        let d = model_arg(model)?.domain;
        *out_arg(class, "class")? = match d {
            DomainClass::UnboundedLine => SwansonDomain::UnboundedLine,
            DomainClass::BoundedInterval { .. } => SwansonDomain::BoundedInterval,
            DomainClass::SemiBoundedBelow { .. } => SwansonDomain::SemiBoundedBelow,
            DomainClass::SemiBoundedAbove { .. } => SwansonDomain::SemiBoundedAbove,
        };
        *out_arg(zminus, "zminus")? = d.zminus();
        *out_arg(zplus, "zplus")? = d.zplus();
        Ok(())
    })
}

/// Coordinate map `z(x)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn swanson_model_z(model: *const SwansonModel, x: f64, out: *mut f64) -> SwansonStatus {
    guard(|| {
        *out_arg(out, "out")? = model_arg(model)?.map.z_at(x)?;
        Ok(())
    })
}

/// Effective potential at `x`.
///
/// # Safety
/// `model` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn swanson_model_v_eff(model: *const SwansonModel, x: f64, out: *mut f64) -> SwansonStatus {
    guard(|| {
        let m = model_arg(model)?;
        *out_arg(out, "out")? = v_eff_general(&m.spec, &m.map, x)?;
        Ok(())
    })
}

unsafe fn copy_levels(r: &SpectrumResult, energies: *mut f64, capacity: usize, count: *mut usize) -> Result<(), Failure> {
    *out_arg(count, "count")? = r.levels.len();
    if capacity > 0 && energies.is_null() {
        return Err(Failure::Arg("energies is null".into()));
    }
    for (i, l) in r.levels.iter().take(capacity).enumerate() {
        *energies.add(i) = l.energy;
    }
    Ok(())
}

/// Analytic spectrum by the law that fits the domain, levels up to index `n_max`.
///
/// Up to `capacity` energies go to `energies`; `*count` receives the total number of
/// levels, so a call with `capacity = 0` sizes the buffer. Semi-bounded domains report
/// `SWANSON_STATUS_DOMAIN`; use [`swanson_model_oracle_spectrum`] there.
///
/// # Safety
/// `model` must be a live handle, `energies` must hold `capacity` doubles and `count`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn swanson_model_spectrum(
    model: *const SwansonModel,
    n_max: usize,
    energies: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> SwansonStatus {
    guard(|| {
        let r = model_arg(model)?.analytic_spectrum(MethodChoice::Auto, n_max)?;
        copy_levels(&r, energies, capacity, count)
    })
}

/// Lowest `levels` eigenvalues of the finite-difference discretization in `x`.
/// `grid = 0` picks the default number of intervals.
///
/// # Safety
/// As for [`swanson_model_spectrum`].
#[no_mangle]
pub unsafe extern "C" fn swanson_model_oracle_spectrum(
    model: *const SwansonModel,
    grid: usize,
    levels: usize,
    energies: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> SwansonStatus {
    guard(|| {
        let grid = (grid > 0).then_some(grid);
        let r = model_arg(model)?.oracle_x(grid, None, levels)?;
        copy_levels(&r, energies, capacity, count)
    })
}

/// Effective frequency for `H = w(a^+ a + 1/2) + alpha a^2 + beta a^+^2` with `[a, a^+] = 1/k`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn swanson_omega_tilde(w: f64, alpha: f64, beta: f64, k: f64, out: *mut f64) -> SwansonStatus {
    guard(|| {
        let p = SwansonParams::new(w, alpha, beta, k)?;
        *out_arg(out, "out")? = omega_tilde(&p)?;
        Ok(())
    })
}

/// Confluent hypergeometric function `M(a, b, y)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn swanson_hyp1f1(a: f64, b: f64, y: f64, out: *mut f64) -> SwansonStatus {
    guard(|| {
        *out_arg(out, "out")? = hyp1f1(KummerArgs { a, b, y })?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(swanson_last_error()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Config("x".into())), SwansonStatus::Config);
        assert_eq!(status_of(&Error::DomainMismatch("x".into())), SwansonStatus::Domain);
        assert_eq!(status_of(&Error::InvalidRegime("x".into())), SwansonStatus::Numeric);
    }

    #[test]
    fn panics_are_contained() {
        assert_eq!(guard(|| panic!("boom")), SwansonStatus::Panic);
        assert_eq!(last_error(), "panic: boom");
    }

    #[test]
    fn null_out_pointer() {
        let s = unsafe { swanson_hyp1f1(1.0, 1.0, 1.0, std::ptr::null_mut()) };
        assert_eq!(s, SwansonStatus::InvalidArgument);
        assert_eq!(last_error(), "out is null");
    }
}
