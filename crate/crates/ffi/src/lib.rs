//! C ABI over the virtual plasmodium engine: opaque simulation handles
//! built from TOML experiment configs, stepped incrementally, with scalar
//! state queries and greyscale frame snapshots.
//!
//! Every function is safe to call with null handles (it reports
//! `PLASMO_NULL_ARG`). Handles are not thread-safe; drive each simulation
//! from one thread. Error details for the most recent failure on the
//! current thread are available via [`plasmo_last_error`].

use libc::{c_char, size_t};
use plasmo::batch::ExperimentSpec;
use plasmo::config::ExperimentFile;
use plasmo::experiments::{AnySim, Sim};
use plasmo::raster::render_frame;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlasmoStatus {
    PlasmoOk = 0,
    PlasmoNullArg = 1,
    PlasmoInvalidUtf8 = 2,
    PlasmoInvalidConfig = 3,
    PlasmoRunError = 4,
    PlasmoBufferTooSmall = 5,
    PlasmoPanic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let cleaned: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(cleaned).unwrap());
}

/// An in-flight experiment run; opaque to C.
pub struct PlasmoSim {
    sim: AnySim,
}

fn guard<F: FnOnce() -> PlasmoStatus>(f: F) -> PlasmoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in plasmo".into());
            set_error(&msg);
            PlasmoStatus::PlasmoPanic
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn plasmo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the most recent error message for this thread into `buf`
/// (NUL-terminated, truncated to `len`). Returns the full message length.
#[no_mangle]
pub extern "C" fn plasmo_last_error(buf: *mut c_char, len: size_t) -> size_t {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                // always terminate
                *buf.add(n - 1) = 0;
            }
        }
        bytes.len() - 1
    })
}

unsafe fn parse_config(config_toml: *const c_char, seed: u64) -> Result<ExperimentSpec, PlasmoStatus> {
    if config_toml.is_null() {
        set_error("config_toml is null");
        return Err(PlasmoStatus::PlasmoNullArg);
    }
    let text = match CStr::from_ptr(config_toml).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("config_toml is not valid UTF-8");
            return Err(PlasmoStatus::PlasmoInvalidUtf8);
        }
    };
    let file = match ExperimentFile::parse(text) {
        Ok(f) => f,
        Err(e) => {
            set_error(&e.to_string());
            return Err(PlasmoStatus::PlasmoInvalidConfig);
        }
    };
    match file.resolve(Path::new(".")) {
        Ok(spec) => Ok(spec.with_seed(seed)),
        Err(e) => {
            set_error(&e.to_string());
            Err(PlasmoStatus::PlasmoInvalidConfig)
        }
    }
}

/// Build a simulation from a TOML experiment config (same format the CLI
/// reads) at the given seed. On success stores a heap handle in `out`;
/// release it with [`plasmo_sim_free`].
///
/// # Safety
/// `config_toml` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_new(
    config_toml: *const c_char,
    seed: u64,
    out: *mut *mut PlasmoSim,
) -> PlasmoStatus {
    guard(|| {
        if out.is_null() {
            set_error("out is null");
            return PlasmoStatus::PlasmoNullArg;
        }
        let spec = match parse_config(config_toml, seed) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spec.make_sim() {
            Ok(sim) => {
                *out = Box::into_raw(Box::new(PlasmoSim { sim }));
                PlasmoStatus::PlasmoOk
            }
            Err(e) => {
                set_error(&e.to_string());
                PlasmoStatus::PlasmoInvalidConfig
            }
        }
    })
}

/// Advance the simulation by at most `steps` scheduler steps, stopping
/// early when the run halts. `done` (optional) reports whether the run has
/// finished.
///
/// # Safety
/// `sim` must be a live handle from [`plasmo_sim_new`].
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_step(
    sim: *mut PlasmoSim,
    steps: u64,
    done: *mut bool,
) -> PlasmoStatus {
    guard(|| {
        let Some(handle) = sim.as_mut() else {
            set_error("sim is null");
            return PlasmoStatus::PlasmoNullArg;
        };
        for _ in 0..steps {
            if !handle.sim.step() {
                break;
            }
        }
        if !done.is_null() {
            *done = handle.sim.is_done();
        }
        PlasmoStatus::PlasmoOk
    })
}

/// Current scheduler step count.
///
/// # Safety
/// `sim` must be a live handle (null returns 0).
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_step_count(sim: *const PlasmoSim) -> u64 {
    sim.as_ref().map_or(0, |h| h.sim.world().step_count())
}

/// Current number of live particles.
///
/// # Safety
/// `sim` must be a live handle (null returns 0).
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_population(sim: *const PlasmoSim) -> u64 {
    sim.as_ref().map_or(0, |h| h.sim.world().population() as u64)
}

/// Mean particle position.
///
/// # Safety
/// `sim`, `x`, `y` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_centroid(
    sim: *const PlasmoSim,
    x: *mut f64,
    y: *mut f64,
) -> PlasmoStatus {
    guard(|| {
        let Some(handle) = sim.as_ref() else {
            set_error("sim is null");
            return PlasmoStatus::PlasmoNullArg;
        };
        if x.is_null() || y.is_null() {
            set_error("x or y is null");
            return PlasmoStatus::PlasmoNullArg;
        }
        match handle.sim.world().centroid() {
            Ok(c) => {
                *x = c.x;
                *y = c.y;
                PlasmoStatus::PlasmoOk
            }
            Err(e) => {
                set_error(&e.to_string());
                PlasmoStatus::PlasmoRunError
            }
        }
    })
}

/// Lattice dimensions.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_size(
    sim: *const PlasmoSim,
    width: *mut u32,
    height: *mut u32,
) -> PlasmoStatus {
    guard(|| {
        let Some(handle) = sim.as_ref() else {
            set_error("sim is null");
            return PlasmoStatus::PlasmoNullArg;
        };
        if width.is_null() || height.is_null() {
            set_error("width or height is null");
            return PlasmoStatus::PlasmoNullArg;
        }
        *width = handle.sim.world().field().width() as u32;
        *height = handle.sim.world().field().height() as u32;
        PlasmoStatus::PlasmoOk
    })
}

/// Render the current state as 8-bit greyscale (row-major, particles at
/// 255 over the clamped trail field) into a caller buffer of at least
/// width*height bytes.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_render(
    sim: *const PlasmoSim,
    buf: *mut u8,
    len: size_t,
) -> PlasmoStatus {
    guard(|| {
        let Some(handle) = sim.as_ref() else {
            set_error("sim is null");
            return PlasmoStatus::PlasmoNullArg;
        };
        if buf.is_null() {
            set_error("buf is null");
            return PlasmoStatus::PlasmoNullArg;
        }
        let img = render_frame(handle.sim.world());
        let needed = img.width() * img.height();
        if len < needed {
            set_error("frame buffer too small");
            return PlasmoStatus::PlasmoBufferTooSmall;
        }
        std::ptr::copy_nonoverlapping(img.pixels().as_ptr(), buf, needed);
        PlasmoStatus::PlasmoOk
    })
}

/// Run an experiment to completion and report its scored error (final
/// distance for centroid/mean runs, time-averaged tracking error) and halt
/// step.
///
/// # Safety
/// `config_toml` must be a valid NUL-terminated string; out pointers may be
/// null if the caller does not need them.
#[no_mangle]
pub unsafe extern "C" fn plasmo_run_experiment(
    config_toml: *const c_char,
    seed: u64,
    out_error: *mut f64,
    out_halt_step: *mut u64,
) -> PlasmoStatus {
    guard(|| {
        let spec = match parse_config(config_toml, seed) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spec.run() {
            Ok(outcome) => {
                if !out_error.is_null() {
                    *out_error = outcome.error;
                }
                if !out_halt_step.is_null() {
                    *out_halt_step = outcome.metrics.halt_step();
                }
                PlasmoStatus::PlasmoOk
            }
            Err(e) => {
                set_error(&e.to_string());
                PlasmoStatus::PlasmoRunError
            }
        }
    })
}

/// Release a handle from [`plasmo_sim_new`]. Null is a no-op.
///
/// # Safety
/// `sim` must be a handle from [`plasmo_sim_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plasmo_sim_free(sim: *mut PlasmoSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}
