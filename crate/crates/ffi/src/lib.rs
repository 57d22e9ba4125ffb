//! C ABI over `bohr_core`.
//!
//! Objects are opaque handles created by `*_new` and released by `*_free`.
//! Every fallible call returns a [`BohrStatus`]; on failure the message is
//! kept per thread and read with [`bohr_last_error_message`]. Panics never
//! cross the boundary and are reported as `BOHR_STATUS_PANIC`.
//!
//! Family and theorem selectors are passed as `uint32_t` and validated, so
//! an out-of-range value is an error rather than undefined behaviour.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bohr_core::bohr::{self, Sharpness, Theorem, TheoremId};
use bohr_core::radius_equations::{Equation, Family, Params};
use bohr_core::rootfind::{self, RootEnclosure};
use bohr_core::tables::{self, Status, TableRow};
use bohr_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BohrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    NoRoot = 4,
    Numerical = 5,
    NotApplicable = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BohrFamily {
    D = 0,
    E = 1,
    F = 2,
    G = 3,
    H = 4,
    FA = 5,
    GA = 6,
    HA = 7,
    RU = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BohrTheoremId {
    T2_1 = 0,
    T2_2 = 1,
    T2_3 = 2,
    T3_1 = 3,
    T3_2 = 4,
    T4_1 = 5,
    T4_2 = 6,
    T4_3 = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BohrRowStatus {
    Match = 0,
    Mismatch = 1,
    ErratumSuspected = 2,
}

/// Mirrors `Params`; each family reads only some fields.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BohrParams {
    pub big_k: f64,
    pub m: u32,
    pub t: f64,
    pub lambda: f64,
    pub p: f64,
    pub alpha: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BohrEnclosure {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub evaluations: u64,
    pub tol: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BohrTableRow {
    pub table_id: u8,
    pub family: u32,
    pub params: BohrParams,
    pub paper_value: f64,
    pub computed: f64,
    pub abs_diff: f64,
    pub status: BohrRowStatus,
}

pub struct BohrEquation(Equation);
pub struct BohrTheorem(Theorem);
pub struct BohrTable(Vec<TableRow>);

impl From<BohrParams> for Params {
    fn from(p: BohrParams) -> Self {
        Params {
            big_k: p.big_k,
            m: p.m,
            t: p.t,
            lambda: p.lambda,
            p: p.p,
            alpha: p.alpha,
        }
    }
}

impl From<Params> for BohrParams {
    fn from(p: Params) -> Self {
        BohrParams {
            big_k: p.big_k,
            m: p.m,
            t: p.t,
            lambda: p.lambda,
            p: p.p,
            alpha: p.alpha,
        }
    }
}

impl From<RootEnclosure> for BohrEnclosure {
    fn from(e: RootEnclosure) -> Self {
        BohrEnclosure {
            lo: e.lo,
            hi: e.hi,
            f_lo: e.f_lo,
            f_hi: e.f_hi,
            evaluations: e.evaluations as u64,
            tol: e.tol,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> BohrStatus {
    match e {
        Error::InvalidParameter { .. } => BohrStatus::InvalidParameter,
        Error::Domain(_) => BohrStatus::Domain,
        Error::NoRoot { .. } => BohrStatus::NoRoot,
        Error::Numerical { .. } => BohrStatus::Numerical,
        Error::NotApplicable(_) => BohrStatus::NotApplicable,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (BohrStatus, String)>) -> BohrStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BohrStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            BohrStatus::Panic
        }
    }
}

fn core(e: Error) -> (BohrStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BohrStatus, String) {
    (BohrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (BohrStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), (BohrStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn family_from(code: u32) -> Result<Family, (BohrStatus, String)> {
    Family::ALL.get(code as usize).copied().ok_or_else(|| {
        (
            BohrStatus::InvalidParameter,
            format!("family code {code} is outside 0..=8"),
        )
    })
}

fn theorem_from(code: u32) -> Result<TheoremId, (BohrStatus, String)> {
    TheoremId::ALL.get(code as usize).copied().ok_or_else(|| {
        (
            BohrStatus::InvalidParameter,
            format!("theorem code {code} is outside 0..=7"),
        )
    })
}

/// Version string of the library, statically allocated.
#[no_mangle]
pub extern "C" fn bohr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn bohr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `K = 1, m = 1, t = 0, lambda = 1, p = 0.5, alpha = 1`.
#[no_mangle]
pub extern "C" fn bohr_params_default() -> BohrParams {
    Params::default().into()
}

/// Upper bound on the radii, `1/3`.
#[no_mangle]
pub extern "C" fn bohr_cap() -> f64 {
    bohr_core::BOHR_CAP
}

#[no_mangle]
pub unsafe extern "C" fn bohr_equation_new(
    family: u32,
    params: *const BohrParams,
    out: *mut *mut BohrEquation,
) -> BohrStatus {
    guard(|| {
        let params = *deref(params, "params")?;
        let eq = Equation::new(family_from(family)?, params.into()).map_err(core)?;
        store(out, Box::into_raw(Box::new(BohrEquation(eq))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn bohr_equation_free(eq: *mut BohrEquation) {
    if !eq.is_null() {
        drop(Box::from_raw(eq));
    }
}

#[no_mangle]
pub unsafe extern "C" fn bohr_equation_evaluate(
    eq: *const BohrEquation,
    r: f64,
    out: *mut f64,
) -> BohrStatus {
    guard(|| {
        let v = deref(eq, "equation")?.0.evaluate(r).map_err(core)?;
        store(out, v, "out")
    })
}

/// Domain `(lo, hi)` of the family.
#[no_mangle]
pub unsafe extern "C" fn bohr_equation_domain(
    eq: *const BohrEquation,
    lo: *mut f64,
    hi: *mut f64,
) -> BohrStatus {
    guard(|| {
        let (a, b) = deref(eq, "equation")?.0.domain();
        store(lo, a, "lo")?;
        store(hi, b, "hi")
    })
}

#[no_mangle]
pub unsafe extern "C" fn bohr_equation_solve(
    eq: *const BohrEquation,
    tol: f64,
    out: *mut BohrEnclosure,
) -> BohrStatus {
    guard(|| {
        let e = rootfind::solve(&deref(eq, "equation")?.0, tol).map_err(core)?;
        store(out, e.into(), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn bohr_theorem_new(
    id: u32,
    params: *const BohrParams,
    out: *mut *mut BohrTheorem,
) -> BohrStatus {
    guard(|| {
        let params = *deref(params, "params")?;
        let thm = Theorem::new(theorem_from(id)?, params.into()).map_err(core)?;
        store(out, Box::into_raw(Box::new(BohrTheorem(thm))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn bohr_theorem_free(thm: *mut BohrTheorem) {
    if !thm.is_null() {
        drop(Box::from_raw(thm));
    }
}

/// Root enclosure and `min(root, 1/3)`; either output may be NULL.
#[no_mangle]
pub unsafe extern "C" fn bohr_theorem_effective_radius(
    thm: *const BohrTheorem,
    tol: f64,
    root: *mut BohrEnclosure,
    capped: *mut f64,
) -> BohrStatus {
    guard(|| {
        let e = deref(thm, "theorem")?.0.effective_radius(tol).map_err(core)?;
        if !root.is_null() {
            root.write(e.root.into());
        }
        if !capped.is_null() {
            capped.write(e.capped);
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bohr_theorem_rhs(thm: *const BohrTheorem, out: *mut f64) -> BohrStatus {
    guard(|| store(out, deref(thm, "theorem")?.0.rhs(), "out"))
}

/// Value of the left-hand side for the extremal mapping (`mu = 1`) at `r`.
#[no_mangle]
pub unsafe extern "C" fn bohr_theorem_extremal_lhs(
    thm: *const BohrTheorem,
    r: f64,
    out: *mut f64,
) -> BohrStatus {
    guard(|| {
        let thm = &deref(thm, "theorem")?.0;
        let f = bohr::make_extremal(thm, bohr_core::C64::new(1.0, 0.0)).map_err(core)?;
        store(out, bohr::lhs(thm, &f, r).map_err(core)?, "out")
    })
}

/// Returns `BOHR_STATUS_NOT_APPLICABLE` when the root exceeds `1/3`.
#[no_mangle]
pub unsafe extern "C" fn bohr_theorem_check_sharpness(
    thm: *const BohrTheorem,
    eps: f64,
    below_ok: *mut bool,
    above_violates: *mut bool,
) -> BohrStatus {
    guard(|| {
        match bohr::check_sharpness(&deref(thm, "theorem")?.0, eps).map_err(core)? {
            Sharpness::Checked {
                below_ok: b,
                above_violates: a,
            } => {
                store(below_ok, b, "below_ok")?;
                store(above_violates, a, "above_violates")
            }
            Sharpness::NotApplicable { root } => Err((
                BohrStatus::NotApplicable,
                format!("root {root} exceeds 1/3"),
            )),
        }
    })
}

/// Seeded Monte-Carlo run; writes the number of violated checks.
#[no_mangle]
pub unsafe extern "C" fn bohr_theorem_monte_carlo(
    thm: *const BohrTheorem,
    seed: u64,
    samples: u64,
    radii: usize,
    violations: *mut u64,
) -> BohrStatus {
    guard(|| {
        if radii == 0 {
            return Err((BohrStatus::InvalidParameter, "radii must be positive".into()));
        }
        let rep = bohr::monte_carlo(&deref(thm, "theorem")?.0, seed, samples, radii)
            .map_err(core)?;
        store(violations, rep.violations.len() as u64, "violations")
    })
}

/// Table 1..7, or 0 for all tables.
#[no_mangle]
pub unsafe extern "C" fn bohr_table_new(id: u8, out: *mut *mut BohrTable) -> BohrStatus {
    guard(|| {
        let rows = if id == 0 {
            tables::reproduce_all()
        } else {
            tables::reproduce_table(id)
        }
        .map_err(core)?;
        store(out, Box::into_raw(Box::new(BohrTable(rows))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn bohr_table_free(table: *mut BohrTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of rows; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn bohr_table_len(table: *const BohrTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn bohr_table_row(
    table: *const BohrTable,
    index: usize,
    out: *mut BohrTableRow,
) -> BohrStatus {
    guard(|| {
        let rows = &deref(table, "table")?.0;
        let r = rows.get(index).ok_or_else(|| {
            (
                BohrStatus::InvalidParameter,
                format!("row {index} out of range 0..{}", rows.len()),
            )
        })?;
        let row = BohrTableRow {
            table_id: r.table_id,
            family: Family::ALL.iter().position(|&f| f == r.family).unwrap() as u32,
            params: r.params.into(),
            paper_value: r.paper_value,
            computed: r.computed,
            abs_diff: r.abs_diff,
            status: match r.status {
                Status::Match => BohrRowStatus::Match,
                Status::Mismatch => BohrRowStatus::Mismatch,
                Status::ErratumSuspected => BohrRowStatus::ErratumSuspected,
            },
        };
        store(out, row, "out")
    })
}
