//! C interface to `hindman`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `hm_*_free`. Every fallible call returns an
//! [`HmStatus`]; on failure [`hm_last_error`] describes the cause for the
//! calling thread. Output arrays follow one convention: `*written` receives
//! the required length, and `HM_STATUS_BUFFER_TOO_SMALL` is returned when it
//! exceeds `cap`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hindman::cli::parse_predicate;
use hindman::driver::{extend_decide, Decision, DriverError, Side};
use hindman::family::{bounded_fip, frechet_family, trivial_family, Family, FipPolicy, Verdict};
use hindman::oracle::{min_forcing_bound, verify_witness, Target};
use hindman::search::SearchLimits;
use hindman::setexpr::{finite_sums, nonempty_sums, NatSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    NoWitness = 3,
    Inconclusive = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmVerdict {
    Refuted = 0,
    Unknown = 1,
    Verified = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmSide {
    A = 0,
    Complement = 1,
}

/// Bounded-verification parameters; see [`hm_policy_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HmPolicy {
    pub bound: u64,
    pub min_count: usize,
    pub tail_fraction: f64,
    pub max_f: usize,
    pub inst_bound: u64,
}

/// A symbolic set of naturals.
pub struct HmSet(NatSet);

/// A family of sets with generator schemas.
pub struct HmFamily(Family);

/// The result of `hm_decide`.
pub struct HmDecision(Decision);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(HmStatus, String);

impl Fail {
    fn null(what: &str) -> Self {
        Fail(HmStatus::NullArgument, format!("{what} is null"))
    }

    fn input(e: impl ToString) -> Self {
        Fail(HmStatus::InvalidInput, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            HmStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail::null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_array<T: Copy>(src: &[T], dst: *mut T, cap: usize, written: *mut usize) -> Result<(), Fail> {
    *out(written, "written")? = src.len();
    if src.len() > cap {
        return Err(Fail(HmStatus::BufferTooSmall, format!("{} elements needed, capacity {cap}", src.len())));
    }
    if !src.is_empty() {
        if dst.is_null() {
            return Err(Fail::null("out"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    }
    Ok(())
}

unsafe fn policy(p: *const HmPolicy) -> Result<FipPolicy, Fail> {
    let Some(p) = p.as_ref() else {
        return Ok(FipPolicy::default());
    };
    let policy = FipPolicy {
        bound: p.bound,
        min_count: p.min_count,
        tail_fraction: p.tail_fraction,
        max_f: p.max_f,
        inst_bound: p.inst_bound,
    };
    policy.validate().map_err(Fail::input)?;
    Ok(policy)
}

fn verdict(v: Verdict) -> HmVerdict {
    match v {
        Verdict::RefutedAtBound => HmVerdict::Refuted,
        Verdict::Unknown => HmVerdict::Unknown,
        Verdict::VerifiedAtBound => HmVerdict::Verified,
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next `hm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn hm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn hm_policy_default() -> HmPolicy {
    let p = FipPolicy::default();
    HmPolicy {
        bound: p.bound,
        min_count: p.min_count,
        tail_fraction: p.tail_fraction,
        max_f: p.max_f,
        inst_bound: p.inst_bound,
    }
}

/// Parses a predicate such as `n % 3 == 0 && n > 10`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out_set` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_set_parse(text: *const c_char, out_set: *mut *mut HmSet) -> HmStatus {
    guard(|| {
        let slot = out(out_set, "out")?;
        *slot = ptr::null_mut();
        if text.is_null() {
            return Err(Fail::null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(Fail::input)?;
        let set = parse_predicate(text).map_err(Fail::input)?;
        *slot = Box::into_raw(Box::new(HmSet(set)));
        Ok(())
    })
}

/// # Safety
/// `base` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn hm_set_explicit(base: *const u64, len: usize, out_set: *mut *mut HmSet) -> HmStatus {
    guard(|| {
        let slot = out(out_set, "out")?;
        *slot = ptr::null_mut();
        let elems = slice(base, len, "elements")?.to_vec();
        let set = NatSet::explicit(elems).map_err(Fail::input)?;
        *slot = Box::into_raw(Box::new(HmSet(set)));
        Ok(())
    })
}

/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hm_set_free(set: *mut HmSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle and `member` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_set_member(set: *const HmSet, n: u64, member: *mut bool) -> HmStatus {
    guard(|| {
        let set = deref(set, "set")?;
        *out(member, "member")? = set.0.member(n);
        Ok(())
    })
}

/// Subset sums of `base`, sorted, with 0 unless `nonempty`.
///
/// # Safety
/// `base` must point to `len` values, `dst` to `cap` slots.
#[no_mangle]
pub unsafe extern "C" fn hm_finite_sums(
    base: *const u64,
    len: usize,
    nonempty: bool,
    dst: *mut u64,
    cap: usize,
    written: *mut usize,
) -> HmStatus {
    guard(|| {
        let base = slice(base, len, "base")?;
        let sums = if nonempty { nonempty_sums(base) } else { finite_sums(base) }.map_err(Fail::input)?;
        write_array(&sums, dst, cap, written)
    })
}

fn new_family(f: Family) -> *mut HmFamily {
    Box::into_raw(Box::new(HmFamily(f)))
}

/// The family `{ℕ}`.
#[no_mangle]
pub extern "C" fn hm_family_trivial() -> *mut HmFamily {
    new_family(trivial_family())
}

/// The cofinite filter generated by the tails.
#[no_mangle]
pub extern "C" fn hm_family_frechet() -> *mut HmFamily {
    new_family(frechet_family())
}

/// A copy of `family` with `set` appended as a generator.
///
/// # Safety
/// `family` and `set` must be live handles, `out_family` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_family_append(
    family: *const HmFamily,
    set: *const HmSet,
    out_family: *mut *mut HmFamily,
) -> HmStatus {
    guard(|| {
        let slot = out(out_family, "out")?;
        *slot = ptr::null_mut();
        let (family, set) = (deref(family, "family")?, deref(set, "set")?);
        let f = family.0.append_generator(set.0.clone(), "appended").map_err(Fail::input)?;
        *slot = new_family(f);
        Ok(())
    })
}

/// # Safety
/// `family` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hm_family_free(family: *mut HmFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Bounded finite intersection property. A null `policy` means the defaults.
///
/// # Safety
/// `family` must be a live handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_fip(family: *const HmFamily, policy_: *const HmPolicy, result: *mut HmVerdict) -> HmStatus {
    guard(|| {
        let family = deref(family, "family")?;
        let p = policy(policy_)?;
        *out(result, "result")? = verdict(bounded_fip(&family.0, &p).verdict);
        Ok(())
    })
}

/// Extends `family` until it decides `set` with witnesses of length `m`.
/// `max_nodes == 0` keeps the default search budget. Returns
/// `HM_STATUS_INCONCLUSIVE` when no certificate exists at the bound.
///
/// # Safety
/// `family` and `set` must be live handles, `out_decision` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_decide(
    family: *const HmFamily,
    set: *const HmSet,
    m: usize,
    policy_: *const HmPolicy,
    max_nodes: usize,
    out_decision: *mut *mut HmDecision,
) -> HmStatus {
    guard(|| {
        let slot = out(out_decision, "out")?;
        *slot = ptr::null_mut();
        let (family, set) = (deref(family, "family")?, deref(set, "set")?);
        let p = policy(policy_)?;
        let mut limits = SearchLimits::default();
        if max_nodes > 0 {
            limits.max_nodes = max_nodes;
        }
        let d = extend_decide(&family.0, &set.0, m, &p, &limits).map_err(|e| {
            let status = match e {
                DriverError::NoWitnessAtBound { .. } => HmStatus::NoWitness,
                DriverError::BudgetExhausted(_) | DriverError::Inconclusive(_) | DriverError::ExtractionStuck { .. } => {
                    HmStatus::Inconclusive
                }
                _ => HmStatus::InvalidInput,
            };
            Fail(status, e.to_string())
        })?;
        *slot = Box::into_raw(Box::new(HmDecision(d)));
        Ok(())
    })
}

/// # Safety
/// `decision` must be a live handle and `side` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_decision_side(decision: *const HmDecision, side: *mut HmSide) -> HmStatus {
    guard(|| {
        let d = deref(decision, "decision")?;
        *out(side, "side")? = match d.0.side {
            Side::A => HmSide::A,
            Side::Complement => HmSide::Complement,
        };
        Ok(())
    })
}

/// The witness `S` for side A; zero elements for side Aᶜ.
///
/// # Safety
/// `decision` must be a live handle, `dst` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn hm_decision_witness(
    decision: *const HmDecision,
    dst: *mut u64,
    cap: usize,
    written: *mut usize,
) -> HmStatus {
    guard(|| {
        let d = deref(decision, "decision")?;
        let seq = d.0.witness.as_ref().map_or(&[][..], |w| &w.seq[..]);
        write_array(seq, dst, cap, written)
    })
}

/// A new handle to the extended family.
///
/// # Safety
/// `decision` must be a live handle, `out_family` writable.
#[no_mangle]
pub unsafe extern "C" fn hm_decision_family(decision: *const HmDecision, out_family: *mut *mut HmFamily) -> HmStatus {
    guard(|| {
        let slot = out(out_family, "out")?;
        *slot = new_family(deref(decision, "decision")?.0.family.clone());
        Ok(())
    })
}

/// # Safety
/// `decision` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hm_decision_free(decision: *mut HmDecision) {
    if !decision.is_null() {
        drop(Box::from_raw(decision));
    }
}

/// Exact check that every nonempty sum of `seq` lies in `set`.
///
/// # Safety
/// `set` must be a live handle, `seq` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn hm_verify_set(set: *const HmSet, seq: *const u64, len: usize, holds: *mut bool) -> HmStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let s = slice(seq, len, "seq")?;
        *out(holds, "holds")? = verify_witness(Target::Set(&set.0), s).map_err(Fail::input)?;
        Ok(())
    })
}

/// Exact check against color class `color` of a coloring of `[1..n]`,
/// `assignment[i]` being the color of `i + 1`.
///
/// # Safety
/// `assignment` must hold `n` values, `seq` `len` values.
#[no_mangle]
pub unsafe extern "C" fn hm_verify_coloring(
    assignment: *const u8,
    n: usize,
    color: u8,
    seq: *const u64,
    len: usize,
    holds: *mut bool,
) -> HmStatus {
    guard(|| {
        let assignment = slice(assignment, n, "assignment")?;
        let s = slice(seq, len, "seq")?;
        let ok = verify_witness(Target::Class { assignment, color }, s).map_err(Fail::input)?;
        *out(holds, "holds")? = ok;
        Ok(())
    })
}

/// Least `N ≤ max` at which every `k`-coloring of `[1..N]` has a
/// monochromatic `NS(S)`, `|S| = m`. Returns `HM_STATUS_NO_WITNESS` when
/// there is none up to `max`.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_min_forcing_bound(k: usize, m: usize, max: u64, jobs: usize, value: *mut u64) -> HmStatus {
    guard(|| {
        let slot = out(value, "value")?;
        let r = min_forcing_bound(k, m, max, jobs.max(1), true).map_err(Fail::input)?;
        *slot = r.value.ok_or_else(|| Fail(HmStatus::NoWitness, format!("no forcing bound up to {max}")))?;
        Ok(())
    })
}
