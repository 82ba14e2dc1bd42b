//! C ABI for `densclass`.
//!
//! Rules and ring configurations are opaque handles created by `dc_*`
//! constructors and released with the matching `*_free`. Every fallible
//! call returns a [`DcStatus`]; on failure a message for the calling
//! thread is available from [`dc_last_error`]. Output parameters are only
//! written on success unless noted. Panics are caught and reported as
//! `DC_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use densclass::bounds;
use densclass::ca::{evolve, RingConfig, Rule, Symbol, WindowConfig};
use densclass::eroder::{verify_linear_eroder, washout_time};
use densclass::montecarlo::{run_trial, Topology, TrialSpec, Verdict};
use densclass::rng;
use densclass::sparseness::{cover_certificate, erase_up_to, OutsideMode, SiteSet, SparsenessParams};
use densclass::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownRule = 3,
    NonFixedBackground = 4,
    TooLarge = 5,
    Parse = 6,
    AlphaNotLessThanOne = 7,
    DomainMismatch = 8,
    BufferTooSmall = 9,
    Io = 10,
    Internal = 11,
}

/// A cellular automaton rule.
pub struct DcRule {
    inner: Rule,
}

/// A configuration on a ring of `n` cells.
pub struct DcRing {
    inner: RingConfig,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DcVerdict {
    Fixed0 = 0,
    Fixed1 = 1,
    Unresolved = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DcTrialResult {
    pub verdict: DcVerdict,
    /// -1 when unresolved.
    pub fixation_time: i64,
    pub initial_ones: u64,
    /// 1 correct, 0 incorrect, -1 no strict majority.
    pub correct: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(DcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match &e {
            Error::InvalidArgument(_) | Error::InvalidRule(_) => DcStatus::InvalidArgument,
            Error::UnknownRule(_) => DcStatus::UnknownRule,
            Error::NonFixedBackground { .. } => DcStatus::NonFixedBackground,
            Error::TooLarge(_) | Error::WindowTooLarge { .. } => DcStatus::TooLarge,
            Error::Parse(_) => DcStatus::Parse,
            Error::AlphaNotLessThanOne(_) => DcStatus::AlphaNotLessThanOne,
            Error::DomainMismatch(_) | Error::OverlappingIslands(..) => DcStatus::DomainMismatch,
            Error::Io(_) => DcStatus::Io,
        };
        Fail(status, e.to_string())
    }
}

fn fail<T>(status: DcStatus, msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(status, msg.into()))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            DcStatus::Internal
        }
    }
}

unsafe fn nonnull<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(DcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(DcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return fail(DcStatus::NullPointer, format!("{what} is null"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn symbol(b: u8) -> Result<Symbol, Fail> {
    match b {
        0 => Ok(Symbol::Zero),
        1 => Ok(Symbol::One),
        _ => fail(DcStatus::InvalidArgument, format!("symbol must be 0 or 1, got {b}")),
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Identifier of the random generator and seed-splitting scheme.
#[no_mangle]
pub extern "C" fn dc_prng_id() -> *const c_char {
    static ID: &CStr = c"pcg64-xsl-rr-128/64+seed_from_u64;bernoulli=u64<floor(p*2^64);split=splitmix64";
    ID.as_ptr()
}

/// Looks up a built-in rule (`gkl`, `traffic`, `modified_traffic`,
/// `smoothing`, `and_erosion`, `or_erosion`, `ruleN`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_rule_by_name(name: *const c_char, out_rule: *mut *mut DcRule) -> DcStatus {
    guard(|| {
        let out_rule = out(out_rule, "out_rule")?;
        if name.is_null() {
            return fail(DcStatus::NullPointer, "name is null");
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .or_else(|_| fail(DcStatus::Parse, "name is not UTF-8"))?;
        let rule = Rule::by_name(name)?;
        *out_rule = Box::into_raw(Box::new(DcRule { inner: rule }));
        Ok(())
    })
}

/// Builds a rule of `radius` from its `2^(2 radius + 1)` outputs (0/1),
/// indexed with the leftmost neighbour as the most significant bit.
///
/// # Safety
/// `table` must point to `len` bytes and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_rule_from_table(
    radius: u32,
    table: *const u8,
    len: usize,
    out_rule: *mut *mut DcRule,
) -> DcStatus {
    guard(|| {
        let out_rule = out(out_rule, "out_rule")?;
        let table = slice(table, len, "table")?;
        let symbols = table.iter().map(|&b| symbol(b)).collect::<Result<Vec<_>, _>>()?;
        let rule = Rule::from_table("custom", radius as usize, symbols)?;
        *out_rule = Box::into_raw(Box::new(DcRule { inner: rule }));
        Ok(())
    })
}

/// The rule with 0 and 1 exchanged and space reflected.
///
/// # Safety
/// `rule` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_rule_conjugate(rule: *const DcRule, out_rule: *mut *mut DcRule) -> DcStatus {
    guard(|| {
        let rule = nonnull(rule, "rule")?;
        let out_rule = out(out_rule, "out_rule")?;
        *out_rule = Box::into_raw(Box::new(DcRule {
            inner: rule.inner.conjugate(),
        }));
        Ok(())
    })
}

/// # Safety
/// `rule` must be a live handle and `out_radius` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_rule_radius(rule: *const DcRule, out_radius: *mut u32) -> DcStatus {
    guard(|| {
        let rule = nonnull(rule, "rule")?;
        *out(out_radius, "out_radius")? = rule.inner.radius() as u32;
        Ok(())
    })
}

/// Copies the lookup table into `buf`. `*out_len` receives the table
/// length; with a short buffer the call fails with
/// `DC_STATUS_BUFFER_TOO_SMALL` and writes only `*out_len`.
///
/// # Safety
/// `rule` must be a live handle, `buf` hold `cap` bytes, `out_len` be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn dc_rule_table(
    rule: *const DcRule,
    buf: *mut u8,
    cap: usize,
    out_len: *mut usize,
) -> DcStatus {
    guard(|| {
        let rule = nonnull(rule, "rule")?;
        let out_len = out(out_len, "out_len")?;
        let table = rule.inner.table();
        *out_len = table.len();
        if cap < table.len() {
            return fail(DcStatus::BufferTooSmall, format!("table needs {} bytes", table.len()));
        }
        if buf.is_null() {
            return fail(DcStatus::NullPointer, "buf is null");
        }
        for (i, s) in table.iter().enumerate() {
            *buf.add(i) = s.as_bit();
        }
        Ok(())
    })
}

/// # Safety
/// `rule` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dc_rule_free(rule: *mut DcRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// A ring from `n` cells given as 0/1 bytes.
///
/// # Safety
/// `bits` must point to `n` bytes and `out_ring` be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_ring_from_bits(bits: *const u8, n: usize, out_ring: *mut *mut DcRing) -> DcStatus {
    guard(|| {
        let out_ring = out(out_ring, "out_ring")?;
        let bits = slice(bits, n, "bits")?;
        let cells = bits.iter().map(|&b| symbol(b)).collect::<Result<Vec<_>, _>>()?;
        *out_ring = Box::into_raw(Box::new(DcRing {
            inner: RingConfig::from_symbols(&cells)?,
        }));
        Ok(())
    })
}

/// A Bernoulli(p) ring of `n` cells from the stream of `seed`.
///
/// # Safety
/// `out_ring` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_ring_sample(n: usize, p: f64, seed: u64, out_ring: *mut *mut DcRing) -> DcStatus {
    guard(|| {
        let out_ring = out(out_ring, "out_ring")?;
        let cells = rng::bernoulli_bits(n, p, seed)?;
        *out_ring = Box::into_raw(Box::new(DcRing {
            inner: RingConfig::new(cells)?,
        }));
        Ok(())
    })
}

/// # Safety
/// `ring` must be a live handle and `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_ring_len(ring: *const DcRing, out_len: *mut usize) -> DcStatus {
    guard(|| {
        let ring = nonnull(ring, "ring")?;
        *out(out_len, "out_len")? = ring.inner.len();
        Ok(())
    })
}

/// # Safety
/// `ring` must be a live handle and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_ring_count_ones(ring: *const DcRing, out_count: *mut usize) -> DcStatus {
    guard(|| {
        let ring = nonnull(ring, "ring")?;
        *out(out_count, "out_count")? = ring.inner.count_ones();
        Ok(())
    })
}

/// Copies the cells as 0/1 bytes into `buf`, which must hold the ring
/// length.
///
/// # Safety
/// `ring` must be a live handle and `buf` hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn dc_ring_bits(ring: *const DcRing, buf: *mut u8, cap: usize) -> DcStatus {
    guard(|| {
        let ring = nonnull(ring, "ring")?;
        let n = ring.inner.len();
        if cap < n {
            return fail(DcStatus::BufferTooSmall, format!("ring needs {n} bytes"));
        }
        if buf.is_null() {
            return fail(DcStatus::NullPointer, "buf is null");
        }
        for (i, b) in ring.inner.cells().iter().enumerate() {
            *buf.add(i) = u8::from(b);
        }
        Ok(())
    })
}

/// A new ring holding `rule` applied `steps` times to `ring`.
///
/// # Safety
/// `ring` and `rule` must be live handles and `out_ring` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_ring_evolve(
    ring: *const DcRing,
    rule: *const DcRule,
    steps: usize,
    out_ring: *mut *mut DcRing,
) -> DcStatus {
    guard(|| {
        let ring = nonnull(ring, "ring")?;
        let rule = nonnull(rule, "rule")?;
        let out_ring = out(out_ring, "out_ring")?;
        let next = evolve(&rule.inner, &ring.inner, steps)?;
        *out_ring = Box::into_raw(Box::new(DcRing { inner: next }));
        Ok(())
    })
}

/// # Safety
/// `ring` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dc_ring_free(ring: *mut DcRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Steps until the configuration equal to `background` except at the
/// `count` sites in `errors` is uniform again. `*out_time` is -1 if that
/// does not happen within `t_max` steps.
///
/// # Safety
/// `rule` must be a live handle, `errors` hold `count` values and
/// `out_time` be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_washout_time(
    rule: *const DcRule,
    background: u8,
    errors: *const i64,
    count: usize,
    t_max: usize,
    out_time: *mut i64,
) -> DcStatus {
    guard(|| {
        let rule = nonnull(rule, "rule")?;
        let errors = slice(errors, count, "errors")?;
        let out_time = out(out_time, "out_time")?;
        let x = WindowConfig::with_errors(symbol(background)?, errors);
        *out_time = washout_time(&rule.inner, &x, t_max)?.map_or(-1, |t| t as i64);
        Ok(())
    })
}

/// Checks every perturbation of diameter `1..=n_max` on `background`
/// washes out within `m n` steps. If `out_max_times` is not null it
/// receives `n_max` worst-case times (-1 where a pattern never washed
/// out).
///
/// # Safety
/// `rule` must be a live handle, `out_pass` writable and `out_max_times`
/// null or room for `n_max` values.
#[no_mangle]
pub unsafe extern "C" fn dc_verify_linear_eroder(
    rule: *const DcRule,
    background: u8,
    m: usize,
    n_max: usize,
    out_pass: *mut bool,
    out_max_times: *mut i64,
) -> DcStatus {
    guard(|| {
        let rule = nonnull(rule, "rule")?;
        let out_pass = out(out_pass, "out_pass")?;
        let report = verify_linear_eroder(&rule.inner, symbol(background)?, m, n_max)?;
        *out_pass = report.pass;
        if !out_max_times.is_null() {
            for (i, row) in report.rows.iter().enumerate() {
                *out_max_times.add(i) = row.max_washout_time.map_or(-1, |t| t as i64);
            }
        }
        Ok(())
    })
}

/// Runs erasure stages `1..=l_max` on the sites `members` inside
/// `[window_lo, window_hi]`. `outside_unknown` selects whether sites
/// beyond the window are unknown (1) or empty (0).
/// `out_residual_counts` receives `|E_l|` for `l = 0..=l_max`,
/// `out_separation_ok` whether all erased islands are pairwise well
/// separated, and `out_cover_separation_ok` (may be null) the same for the
/// islands not contained in another one.
///
/// # Safety
/// `members` must hold `count` values, `out_residual_counts` room for
/// `l_max + 1` values, `out_separation_ok` be writable and
/// `out_cover_separation_ok` null or writable.
#[no_mangle]
pub unsafe extern "C" fn dc_erase(
    members: *const i64,
    count: usize,
    window_lo: i64,
    window_hi: i64,
    k: u64,
    l_max: u64,
    outside_unknown: u8,
    out_residual_counts: *mut u64,
    out_separation_ok: *mut bool,
    out_cover_separation_ok: *mut bool,
) -> DcStatus {
    guard(|| {
        let members = slice(members, count, "members")?;
        let out_ok = out(out_separation_ok, "out_separation_ok")?;
        if out_residual_counts.is_null() {
            return fail(DcStatus::NullPointer, "out_residual_counts is null");
        }
        if l_max == 0 {
            return fail(DcStatus::InvalidArgument, "l_max must be at least 1");
        }
        let outside = match outside_unknown {
            0 => OutsideMode::Empty,
            1 => OutsideMode::Unknown,
            other => return fail(DcStatus::InvalidArgument, format!("outside_unknown is {other}")),
        };
        let params = SparsenessParams::new(k)?;
        let e = SiteSet::new(window_lo..=window_hi, members.iter().copied(), outside)?;
        let trace = erase_up_to(&e, &params, l_max);
        *out_residual_counts = e.len() as u64;
        for (i, s) in trace.stages.iter().enumerate() {
            *out_residual_counts.add(i + 1) = s.residual_count as u64;
        }
        let cert = cover_certificate(&trace);
        *out_ok = cert.separation_ok;
        if let Some(cover_ok) = out_cover_separation_ok.as_mut() {
            *cover_ok = cert.cover_separation_ok;
        }
        Ok(())
    })
}

/// The threshold `1 / (2k)^2` as a reduced fraction.
///
/// # Safety
/// `out_num` and `out_den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_p_threshold(k: u64, out_num: *mut u64, out_den: *mut u64) -> DcStatus {
    guard(|| {
        let num = out(out_num, "out_num")?;
        let den = out(out_den, "out_den")?;
        if k == 0 {
            return fail(DcStatus::InvalidArgument, "k must be at least 1");
        }
        if k > u32::MAX as u64 {
            return fail(DcStatus::TooLarge, "k too large for a 64-bit denominator");
        }
        let t = bounds::p_threshold(k);
        *num = u64::try_from(t.numer()).expect("numerator is 1");
        *den = u64::try_from(t.denom()).expect("checked range");
        Ok(())
    })
}

/// Whether the tree count from the recursion stays below
/// `(2k)^(2^(m+1))`.
///
/// # Safety
/// `out_holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_tree_count_closed_form_holds(k: u64, m: u32, out_holds: *mut bool) -> DcStatus {
    guard(|| {
        let holds = out(out_holds, "out_holds")?;
        if k == 0 {
            return fail(DcStatus::InvalidArgument, "k must be at least 1");
        }
        *holds = bounds::tree_count_bound(k, m)?.closed_form_holds();
        Ok(())
    })
}

/// One classification trial on an odd ring of `n` cells.
///
/// # Safety
/// `rule` must be a live handle and `out_result` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_run_trial(
    rule: *const DcRule,
    n: usize,
    p: f64,
    t_max: usize,
    seed: u64,
    out_result: *mut DcTrialResult,
) -> DcStatus {
    guard(|| {
        let rule = nonnull(rule, "rule")?;
        let out_result = out(out_result, "out_result")?;
        let record = run_trial(&TrialSpec {
            rule: rule.inner.clone(),
            topology: Topology::Ring { n },
            p,
            t_max,
            seed,
        })?;
        *out_result = DcTrialResult {
            verdict: match record.verdict {
                Verdict::Fixed0 => DcVerdict::Fixed0,
                Verdict::Fixed1 => DcVerdict::Fixed1,
                Verdict::Unresolved => DcVerdict::Unresolved,
            },
            fixation_time: record.fixation_time.map_or(-1, |t| t as i64),
            initial_ones: record.initial_ones as u64,
            correct: record.correct.map_or(-1, i32::from),
        };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prng_id_matches_core() {
        let id = unsafe { CStr::from_ptr(dc_prng_id()) };
        assert_eq!(id.to_str().unwrap(), rng::PRNG_ID);
    }
}
