//! C ABI over `rrr-core`.
//!
//! Conventions:
//! - Models, relaxed solutions and rounding distributions are opaque handles
//!   created by `rrr_*_new`/`rrr_*_build`-style calls and released with the
//!   matching `*_free`. Freeing NULL is a no-op.
//! - Every fallible call returns an [`RrrStatus`]; results come back through
//!   out-pointers, which are written only on success.
//! - On failure, [`rrr_last_error`] returns a message for the calling thread.
//! - Matrices are dense, row-major `double` arrays; assignments are `int8_t`
//!   arrays holding -1/+1 or 0/1 according to the model's domain.
//! - Panics never cross the boundary; they surface as `RRR_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rrr_core::generate::{gen_hard_rbm, gen_random_rbm, HardRbmOptions};
use rrr_core::gibbs::{annealed_gibbs_uniform, rrr_ag_clamped, AnnealSchedule, ChainState, Clamp};
use rrr_core::oracle::brute_force_map;
use rrr_core::partition::{ais_logz, exact_logz_mrf, exact_logz_rbm, rrr_is, rrr_is_exact_support};
use rrr_core::relax::{solve_lrp, LrpOptions, RelaxedSolution, StepRule};
use rrr_core::rounding::{build_px_k2, enumerate_support_k2, px_query, rrr_map_sample, RoundingDistributionK2};
use rrr_core::{rbm_score, score, Assignment, Domain, Embedding, Error, Instance, Matrix, MrfParams, RbmParams};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RrrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    DomainMismatch = 4,
    CapExceeded = 5,
    UnsupportedWidth = 6,
    Format = 7,
    Io = 8,
    Numeric = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Values accepted wherever a `domain` argument is taken.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RrrDomain {
    /// Variables take values in {-1, +1}.
    PlusMinusOne = 0,
    /// Variables take values in {0, 1}.
    ZeroOne = 1,
}

/// Relaxation solver settings; initialize with [`rrr_lrp_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RrrLrpOptions {
    pub width: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    /// Nonzero selects Armijo backtracking instead of the fixed 1/L step.
    pub backtracking: u8,
    pub restarts: usize,
    pub seed: u64,
}

pub struct RrrMrf {
    inner: MrfParams,
}

pub struct RrrRbm {
    inner: RbmParams,
}

pub struct RrrRelaxed {
    inner: RelaxedSolution,
}

/// Exact width-2 rounding distribution together with the solution it came from.
pub struct RrrPx {
    dist: RoundingDistributionK2,
    x: Matrix,
}

enum Failure {
    Null(&'static str),
    Arg(String),
    BufferTooSmall { needed: usize, given: usize },
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type FfiResult<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(f: &Failure) -> RrrStatus {
    match f {
        Failure::Null(_) => RrrStatus::NullPointer,
        Failure::Arg(_) => RrrStatus::InvalidArgument,
        Failure::BufferTooSmall { .. } => RrrStatus::BufferTooSmall,
        Failure::Core(e) => match e {
            Error::DimensionMismatch { .. } | Error::IndexOutOfRange { .. } => RrrStatus::DimensionMismatch,
            Error::DomainMismatch { .. } | Error::InvalidAssignment { .. } => RrrStatus::DomainMismatch,
            Error::CapExceeded { .. } => RrrStatus::CapExceeded,
            Error::UnsupportedWidth(_) => RrrStatus::UnsupportedWidth,
            Error::Format(_) | Error::Json(_) => RrrStatus::Format,
            Error::Io(_) => RrrStatus::Io,
            Error::NonFinite(_) | Error::ZeroProposalProbability => RrrStatus::Numeric,
            Error::InvalidOption(_) | Error::EmptyBatch => RrrStatus::InvalidArgument,
        },
    }
}

fn message_of(f: &Failure) -> String {
    match f {
        Failure::Null(what) => format!("{what} is NULL"),
        Failure::Arg(msg) => msg.clone(),
        Failure::BufferTooSmall { needed, given } => {
            format!("output buffer holds {given} entries, {needed} needed")
        }
        Failure::Core(e) => e.to_string(),
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> FfiResult<()>) -> RrrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            RrrStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(message_of(&f));
            status_of(&f)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            RrrStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> FfiResult<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &'static str) -> FfiResult<&'a mut [T]> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or(Failure::Null(what))
}

fn domain_of(code: u32) -> FfiResult<Domain> {
    match code {
        0 => Ok(Domain::PlusMinusOne),
        1 => Ok(Domain::ZeroOne),
        other => Err(Failure::Arg(format!("unknown domain code {other}"))),
    }
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn need(needed: usize, given: usize) -> FfiResult<()> {
    if given < needed {
        Err(Failure::BufferTooSmall { needed, given })
    } else {
        Ok(())
    }
}

/// Message describing the last failed call on this thread, or NULL if the
/// last call succeeded. Valid until the next call into the library on the
/// same thread; do not free.
#[no_mangle]
pub extern "C" fn rrr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rrr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn rrr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- models

/// Creates an MRF from an `n × n` row-major matrix (symmetrized on the way in).
///
/// # Safety
/// `a` must point to `n * n` doubles; `out_mrf` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rrr_mrf_new(a: *const f64, n: usize, domain: u32, out_mrf: *mut *mut RrrMrf) -> RrrStatus {
    guard(|| {
        let out_mrf = out(out_mrf, "out_mrf")?;
        let len = n.checked_mul(n).ok_or_else(|| Failure::Arg("n is too large".into()))?;
        let data = slice(a, len, "a")?.to_vec();
        let params = MrfParams::new(Matrix::from_vec(n, n, data)?, domain_of(domain)?)?;
        *out_mrf = boxed(RrrMrf { inner: params });
        Ok(())
    })
}

/// # Safety
/// `mrf` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn rrr_mrf_free(mrf: *mut RrrMrf) {
    if !mrf.is_null() {
        drop(Box::from_raw(mrf));
    }
}

/// Number of variables, or 0 for NULL.
///
/// # Safety
/// `mrf` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rrr_mrf_n(mrf: *const RrrMrf) -> usize {
    mrf.as_ref().map_or(0, |m| m.inner.n())
}

/// Copies the symmetrized `n × n` matrix into `a_out`.
///
/// # Safety
/// `a_out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rrr_mrf_matrix(mrf: *const RrrMrf, a_out: *mut f64, len: usize) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let data = m.inner.matrix().as_slice();
        need(data.len(), len)?;
        slice_mut(a_out, len, "a_out")?[..data.len()].copy_from_slice(data);
        Ok(())
    })
}

/// `xᵀAx`.
///
/// # Safety
/// `x` must hold `n` entries; `score_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_mrf_score(mrf: *const RrrMrf, x: *const i8, n: usize, score_out: *mut f64) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let a = Assignment::new(slice(x, n, "x")?.to_vec(), m.inner.domain())?;
        *out(score_out, "score_out")? = score(&m.inner, &a)?;
        Ok(())
    })
}

/// Parses an MRF instance document (`"kind": "mrf"`).
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rrr_mrf_from_json(json: *const c_char, out_mrf: *mut *mut RrrMrf) -> RrrStatus {
    guard(|| {
        let out_mrf = out(out_mrf, "out_mrf")?;
        match parse_instance(json)? {
            Instance::Mrf(inner) => {
                *out_mrf = boxed(RrrMrf { inner });
                Ok(())
            }
            Instance::Rbm(_) => Err(Error::Format("expected an mrf instance, found rbm".into()).into()),
        }
    })
}

/// Serializes an MRF as an instance document. Free the result with
/// [`rrr_string_free`].
///
/// # Safety
/// `json_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_mrf_to_json(mrf: *const RrrMrf, json_out: *mut *mut c_char) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let text = Instance::Mrf(m.inner.clone()).to_json()?;
        *out(json_out, "json_out")? = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

unsafe fn parse_instance(json: *const c_char) -> FfiResult<Instance> {
    if json.is_null() {
        return Err(Failure::Null("json"));
    }
    let text = CStr::from_ptr(json)
        .to_str()
        .map_err(|_| Failure::Core(Error::Format("instance text is not UTF-8".into())))?;
    Ok(Instance::from_json(text)?)
}

/// Creates an RBM from an `m × p` row-major weight matrix and bias vectors.
///
/// # Safety
/// `w` must hold `m * p` doubles, `a` `m` doubles and `b` `p` doubles.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_new(
    w: *const f64,
    m: usize,
    p: usize,
    a: *const f64,
    b: *const f64,
    domain: u32,
    out_rbm: *mut *mut RrrRbm,
) -> RrrStatus {
    guard(|| {
        let out_rbm = out(out_rbm, "out_rbm")?;
        let len = m.checked_mul(p).ok_or_else(|| Failure::Arg("m * p is too large".into()))?;
        let w = Matrix::from_vec(m, p, slice(w, len, "w")?.to_vec())?;
        let params = RbmParams::new(w, slice(a, m, "a")?.to_vec(), slice(b, p, "b")?.to_vec(), domain_of(domain)?)?;
        *out_rbm = boxed(RrrRbm { inner: params });
        Ok(())
    })
}

/// ±1 RBM with all parameters drawn from N(0, 1).
///
/// # Safety
/// `out_rbm` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_random(m: usize, p: usize, seed: u64, out_rbm: *mut *mut RrrRbm) -> RrrStatus {
    guard(|| {
        let out_rbm = out(out_rbm, "out_rbm")?;
        *out_rbm = boxed(RrrRbm {
            inner: gen_random_rbm(m, p, seed)?,
        });
        Ok(())
    })
}

/// Random ±1 RBM with `pairs` planted (visible, hidden) pairs.
///
/// # Safety
/// `out_rbm` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_hard(
    m: usize,
    p: usize,
    pairs: usize,
    couple: f64,
    bias: f64,
    seed: u64,
    out_rbm: *mut *mut RrrRbm,
) -> RrrStatus {
    guard(|| {
        let out_rbm = out(out_rbm, "out_rbm")?;
        let opts = HardRbmOptions { pairs, couple, bias };
        *out_rbm = boxed(RrrRbm {
            inner: gen_hard_rbm(m, p, &opts, seed)?,
        });
        Ok(())
    })
}

/// Parses an RBM instance document (`"kind": "rbm"`).
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_from_json(json: *const c_char, out_rbm: *mut *mut RrrRbm) -> RrrStatus {
    guard(|| {
        let out_rbm = out(out_rbm, "out_rbm")?;
        match parse_instance(json)? {
            Instance::Rbm(inner) => {
                *out_rbm = boxed(RrrRbm { inner });
                Ok(())
            }
            Instance::Mrf(_) => Err(Error::Format("expected an rbm instance, found mrf".into()).into()),
        }
    })
}

/// # Safety
/// `json_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_to_json(rbm: *const RrrRbm, json_out: *mut *mut c_char) -> RrrStatus {
    guard(|| {
        let r = handle(rbm, "rbm")?;
        let text = Instance::Rbm(r.inner.clone()).to_json()?;
        *out(json_out, "json_out")? = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `rbm` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_free(rbm: *mut RrrRbm) {
    if !rbm.is_null() {
        drop(Box::from_raw(rbm));
    }
}

/// `vᵀWh + aᵀv + bᵀh`.
///
/// # Safety
/// `v` must hold `m` entries and `h` `p` entries.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_score(
    rbm: *const RrrRbm,
    v: *const i8,
    m: usize,
    h: *const i8,
    p: usize,
    score_out: *mut f64,
) -> RrrStatus {
    guard(|| {
        let r = handle(rbm, "rbm")?;
        let d = r.inner.domain();
        let v = Assignment::new(slice(v, m, "v")?.to_vec(), d)?;
        let h = Assignment::new(slice(h, p, "h")?.to_vec(), d)?;
        *out(score_out, "score_out")? = rbm_score(&r.inner, &v, &h)?;
        Ok(())
    })
}

/// Rewrites an RBM as a ±1 MRF over `(aux, v, h)`. For every RBM state,
/// `rbm score = mrf score of (+1, v, h) + *offset_out` (the offset is 0 for
/// ±1 RBMs).
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_rbm_embed(rbm: *const RrrRbm, out_mrf: *mut *mut RrrMrf, offset_out: *mut f64) -> RrrStatus {
    guard(|| {
        let r = handle(rbm, "rbm")?;
        let out_mrf = out(out_mrf, "out_mrf")?;
        let offset_out = out(offset_out, "offset_out")?;
        let emb = Embedding::of_rbm(&r.inner)?;
        *offset_out = emb.offset;
        *out_mrf = boxed(RrrMrf { inner: emb.mrf });
        Ok(())
    })
}

// ------------------------------------------------------------- inference

/// Exhaustive MAP search (n ≤ 24). Ties resolve to the lexicographically
/// smallest assignment.
///
/// # Safety
/// `x_out` must hold `n` entries.
#[no_mangle]
pub unsafe extern "C" fn rrr_brute_force_map(mrf: *const RrrMrf, x_out: *mut i8, n: usize, score_out: *mut f64) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        need(m.inner.n(), n)?;
        let x_out = slice_mut(x_out, n, "x_out")?;
        let score_out = out(score_out, "score_out")?;
        let (best, s) = brute_force_map(&m.inner)?;
        x_out[..best.len()].copy_from_slice(best.values());
        *score_out = s;
        Ok(())
    })
}

/// Fills `opts` with the default solver settings (width 2, 8 restarts,
/// 10 000 iterations, relative tolerance 1e-8, fixed step, seed 0).
///
/// # Safety
/// `opts` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_lrp_options_default(opts: *mut RrrLrpOptions) -> RrrStatus {
    guard(|| {
        let d = LrpOptions::default();
        *out(opts, "opts")? = RrrLrpOptions {
            width: d.width,
            max_iters: d.max_iters,
            rel_tol: d.rel_tol,
            backtracking: u8::from(d.step_rule == StepRule::Backtracking),
            restarts: d.restarts,
            seed: d.seed,
        };
        Ok(())
    })
}

/// Solves the width-k relaxation by projected gradient ascent.
///
/// # Safety
/// `opts` may be NULL (defaults); `out_relaxed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_solve_lrp(
    mrf: *const RrrMrf,
    opts: *const RrrLrpOptions,
    out_relaxed: *mut *mut RrrRelaxed,
) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let out_relaxed = out(out_relaxed, "out_relaxed")?;
        let opts = match opts.as_ref() {
            None => LrpOptions::default(),
            Some(o) => LrpOptions {
                width: o.width,
                max_iters: o.max_iters,
                rel_tol: o.rel_tol,
                step_rule: if o.backtracking != 0 {
                    StepRule::Backtracking
                } else {
                    StepRule::FixedInverseLipschitz
                },
                restarts: o.restarts,
                seed: o.seed,
            },
        };
        *out_relaxed = boxed(RrrRelaxed {
            inner: solve_lrp(&m.inner, &opts)?,
        });
        Ok(())
    })
}

/// # Safety
/// `relaxed` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rrr_relaxed_free(relaxed: *mut RrrRelaxed) {
    if !relaxed.is_null() {
        drop(Box::from_raw(relaxed));
    }
}

/// Relaxed objective `tr(XᵀAX)`, or NaN for NULL.
///
/// # Safety
/// `relaxed` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rrr_relaxed_objective(relaxed: *const RrrRelaxed) -> f64 {
    relaxed.as_ref().map_or(f64::NAN, |r| r.inner.objective)
}

/// Width k of the solution, or 0 for NULL.
///
/// # Safety
/// `relaxed` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rrr_relaxed_width(relaxed: *const RrrRelaxed) -> usize {
    relaxed.as_ref().map_or(0, |r| r.inner.width())
}

/// Copies the `n × k` solution matrix, row-major.
///
/// # Safety
/// `x_out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rrr_relaxed_matrix(relaxed: *const RrrRelaxed, x_out: *mut f64, len: usize) -> RrrStatus {
    guard(|| {
        let r = handle(relaxed, "relaxed")?;
        let data = r.inner.x.as_slice();
        need(data.len(), len)?;
        slice_mut(x_out, len, "x_out")?[..data.len()].copy_from_slice(data);
        Ok(())
    })
}

/// Draws `count` hyperplane roundings of the relaxed solution. Sample `t`
/// occupies `samples_out[t*n .. (t+1)*n]`; its score is `scores_out[t]`.
///
/// # Safety
/// `samples_out` must hold `count * n` entries, `scores_out` `count`.
#[no_mangle]
pub unsafe extern "C" fn rrr_sample(
    mrf: *const RrrMrf,
    relaxed: *const RrrRelaxed,
    count: usize,
    seed: u64,
    samples_out: *mut i8,
    scores_out: *mut f64,
) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let r = handle(relaxed, "relaxed")?;
        let n = m.inner.n();
        let total = count.checked_mul(n).ok_or_else(|| Failure::Arg("count * n is too large".into()))?;
        let samples_out = slice_mut(samples_out, total, "samples_out")?;
        let scores_out = slice_mut(scores_out, count, "scores_out")?;
        let batch = rrr_map_sample(&m.inner, &r.inner.x, count, seed)?;
        for (t, (x, s)) in batch.samples.iter().zip(&batch.scores).enumerate() {
            samples_out[t * n..(t + 1) * n].copy_from_slice(x.values());
            scores_out[t] = *s;
        }
        Ok(())
    })
}

fn finish_chain(state: &ChainState, x_out: &mut [i8], score_out: &mut f64) {
    x_out[..state.best.len()].copy_from_slice(state.best.values());
    *score_out = state.best_score;
}

fn clamp_of(flag: u8) -> Clamp {
    if flag != 0 {
        Clamp::Auxiliary
    } else {
        Clamp::None
    }
}

/// Annealed Gibbs from `chains` uniform random starts, `sweeps` sweeps each on
/// a linear schedule from `t_high` to 1. Writes the best state seen.
/// A nonzero `clamp_auxiliary` holds coordinate 0 at +1, which is what an
/// embedded RBM (see `rrr_rbm_embed`) needs.
///
/// # Safety
/// `x_out` must hold `n` entries.
#[no_mangle]
pub unsafe extern "C" fn rrr_annealed_gibbs(
    mrf: *const RrrMrf,
    t_high: f64,
    sweeps: usize,
    chains: usize,
    clamp_auxiliary: u8,
    seed: u64,
    x_out: *mut i8,
    n: usize,
    score_out: *mut f64,
) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        need(m.inner.n(), n)?;
        let x_out = slice_mut(x_out, n, "x_out")?;
        let score_out = out(score_out, "score_out")?;
        let schedule = AnnealSchedule::linear(t_high, sweeps)?;
        let state = annealed_gibbs_uniform(&m.inner, &schedule, chains, clamp_of(clamp_auxiliary), seed)?;
        finish_chain(&state, x_out, score_out);
        Ok(())
    })
}

/// Annealed Gibbs started from `chains` roundings of the relaxed solution;
/// `clamp_auxiliary` as for `rrr_annealed_gibbs`.
///
/// # Safety
/// `x_out` must hold `n` entries.
#[no_mangle]
pub unsafe extern "C" fn rrr_rrr_ag(
    mrf: *const RrrMrf,
    relaxed: *const RrrRelaxed,
    t_high: f64,
    sweeps: usize,
    chains: usize,
    clamp_auxiliary: u8,
    seed: u64,
    x_out: *mut i8,
    n: usize,
    score_out: *mut f64,
) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let r = handle(relaxed, "relaxed")?;
        need(m.inner.n(), n)?;
        let x_out = slice_mut(x_out, n, "x_out")?;
        let score_out = out(score_out, "score_out")?;
        let schedule = AnnealSchedule::linear(t_high, sweeps)?;
        let state = rrr_ag_clamped(&m.inner, &r.inner.x, &schedule, chains, clamp_of(clamp_auxiliary), seed)?;
        finish_chain(&state, x_out, score_out);
        Ok(())
    })
}

// ------------------------------------------------- rounding distribution

/// Builds the exact rounding distribution of a width-2 solution.
///
/// # Safety
/// `out_px` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_px_build(relaxed: *const RrrRelaxed, out_px: *mut *mut RrrPx) -> RrrStatus {
    guard(|| {
        let r = handle(relaxed, "relaxed")?;
        let out_px = out(out_px, "out_px")?;
        let dist = build_px_k2(&r.inner.x)?;
        *out_px = boxed(RrrPx {
            dist,
            x: r.inner.x.clone(),
        });
        Ok(())
    })
}

/// # Safety
/// `px` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rrr_px_free(px: *mut RrrPx) {
    if !px.is_null() {
        drop(Box::from_raw(px));
    }
}

/// Probability that rounding produces the ±1 assignment `x`.
///
/// # Safety
/// `x` must hold `n` entries.
#[no_mangle]
pub unsafe extern "C" fn rrr_px_query(px: *const RrrPx, x: *const i8, n: usize, prob_out: *mut f64) -> RrrStatus {
    guard(|| {
        let d = handle(px, "px")?;
        let a = Assignment::pm1(slice(x, n, "x")?.to_vec())?;
        *out(prob_out, "prob_out")? = px_query(&d.dist, &d.x, &a)?;
        Ok(())
    })
}

/// Writes the support of the distribution: pattern `s` goes to
/// `assignments_out[s*n .. (s+1)*n]` with probability `probs_out[s]`.
/// `capacity` is the number of patterns the buffers can hold; `2n` always
/// suffices. `*count_out` receives the support size, also when the buffers
/// are too small (status `RRR_STATUS_BUFFER_TOO_SMALL`).
///
/// # Safety
/// `assignments_out` must hold `capacity * n` entries, `probs_out` `capacity`.
#[no_mangle]
pub unsafe extern "C" fn rrr_px_support(
    px: *const RrrPx,
    assignments_out: *mut i8,
    probs_out: *mut f64,
    capacity: usize,
    count_out: *mut usize,
) -> RrrStatus {
    guard(|| {
        let d = handle(px, "px")?;
        let count_out = out(count_out, "count_out")?;
        let n = d.dist.n();
        let support = enumerate_support_k2(&d.dist, &d.x)?;
        *count_out = support.len();
        need(support.len(), capacity)?;
        let total = capacity.checked_mul(n).ok_or_else(|| Failure::Arg("capacity * n is too large".into()))?;
        let assignments_out = slice_mut(assignments_out, total, "assignments_out")?;
        let probs_out = slice_mut(probs_out, capacity, "probs_out")?;
        for (s, (a, p)) in support.iter().enumerate() {
            assignments_out[s * n..(s + 1) * n].copy_from_slice(a.values());
            probs_out[s] = *p;
        }
        Ok(())
    })
}

// ------------------------------------------------------ log-partition

/// Exact `log Σ exp(xᵀAx)` (n ≤ 24).
///
/// # Safety
/// `logz_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_exact_logz_mrf(mrf: *const RrrMrf, logz_out: *mut f64) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        *out(logz_out, "logz_out")? = exact_logz_mrf(&m.inner)?;
        Ok(())
    })
}

/// Exact RBM `log Z` with the hidden layer summed out (m ≤ 24).
///
/// # Safety
/// `logz_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_exact_logz_rbm(rbm: *const RrrRbm, logz_out: *mut f64) -> RrrStatus {
    guard(|| {
        let r = handle(rbm, "rbm")?;
        *out(logz_out, "logz_out")? = exact_logz_rbm(&r.inner)?;
        Ok(())
    })
}

/// Annealed importance sampling estimate of the RBM `log Z`.
/// `weight_std_out` may be NULL.
///
/// # Safety
/// `logz_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_ais_logz(
    rbm: *const RrrRbm,
    num_temps: usize,
    num_runs: usize,
    seed: u64,
    logz_out: *mut f64,
    weight_std_out: *mut f64,
) -> RrrStatus {
    guard(|| {
        let r = handle(rbm, "rbm")?;
        let logz_out = out(logz_out, "logz_out")?;
        let report = ais_logz(&r.inner, num_temps, num_runs, seed)?;
        *logz_out = report.log_z;
        if let Some(w) = weight_std_out.as_mut() {
            *w = report.log_weight_std.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// Importance-sampling estimate of `log Z` with the rounding distribution of
/// a width-2 solution as proposal, from `count` samples.
///
/// # Safety
/// `logz_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_rrr_is(
    mrf: *const RrrMrf,
    relaxed: *const RrrRelaxed,
    count: usize,
    seed: u64,
    logz_out: *mut f64,
) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let r = handle(relaxed, "relaxed")?;
        let logz_out = out(logz_out, "logz_out")?;
        *logz_out = rrr_is(&m.inner, &r.inner.x, count, seed)?.log_z;
        Ok(())
    })
}

/// The expectation of the importance-sampling estimator: `log Σ exp(xᵀAx)`
/// over the support of the rounding distribution.
///
/// # Safety
/// `logz_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rrr_rrr_is_exact_support(
    mrf: *const RrrMrf,
    relaxed: *const RrrRelaxed,
    logz_out: *mut f64,
) -> RrrStatus {
    guard(|| {
        let m = handle(mrf, "mrf")?;
        let r = handle(relaxed, "relaxed")?;
        let logz_out = out(logz_out, "logz_out")?;
        *logz_out = rrr_is_exact_support(&m.inner, &r.inner.x)?;
        Ok(())
    })
}
