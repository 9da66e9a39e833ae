//! C ABI for the `stanley` library.
//!
//! Every fallible function returns a [`StanleyStatus`]; on failure the message is
//! available from [`stanley_last_error`] on the same thread. Handles are opaque
//! and must be released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stanley::analyzer::{certify_with, CertifyOptions, IndependenceCertificate};
use stanley::constructor::{adk, CertifiedSeed, MAX_CERTIFY_HORIZON};
use stanley::search::{ChainCaps, ChainSearch};
use stanley::{
    is_three_free, obstruction_set, s0_term, Error, GeneratedSequence, SeedSet, SieveConfig, Triadic,
};

/// Result codes. The nonzero values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StanleyStatus {
    Ok = 0,
    /// Malformed input, including null pointers.
    InputError = 1,
    /// A precondition or domain restriction was violated, or more terms are needed.
    PreconditionError = 2,
    /// A memory or search cap was reached.
    ResourceError = 3,
    /// An internal consistency check failed.
    InconsistencyError = 4,
    /// The library panicked; the call had no effect.
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(err: Error) -> StanleyStatus {
    let status = match err.exit_code() {
        1 => StanleyStatus::InputError,
        2 => StanleyStatus::PreconditionError,
        3 => StanleyStatus::ResourceError,
        _ => StanleyStatus::InconsistencyError,
    };
    set_last_error(err.to_string());
    status
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Error>) -> StanleyStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => StanleyStatus::Ok,
        Ok(Err(e)) => fail(e),
        Err(_) => {
            set_last_error("panic inside the stanley library".into());
            StanleyStatus::Panic
        }
    }
}

fn null_error(what: &str) -> Error {
    Error::Input(format!("{what} must not be null"))
}

/// Borrows `len` values at `ptr`; a null pointer is allowed only when `len` is 0.
unsafe fn slice<'a>(ptr: *const u64, len: usize, what: &str) -> Result<&'a [u64], Error> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null_error(what));
    }
    // SAFETY: the caller guarantees `ptr` points to `len` readable values.
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

unsafe fn seed_from_raw(ptr: *const u64, len: usize) -> Result<SeedSet, Error> {
    // SAFETY: forwarded caller guarantee.
    SeedSet::new(unsafe { slice(ptr, len, "seed") }?.to_vec())
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Error> {
    if out.is_null() {
        return Err(null_error(what));
    }
    // SAFETY: non-null and, per the caller, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

/// The message of the last failed call on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn stanley_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn stanley_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A triadic number `num / 3^den_pow3` in lowest terms.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StanleyTriadic {
    pub num: i64,
    pub den_pow3: u32,
}

impl TryFrom<Triadic> for StanleyTriadic {
    type Error = Error;

    fn try_from(t: Triadic) -> Result<Self, Error> {
        let num = i64::try_from(t.num())
            .map_err(|_| Error::OutOfRange(format!("numerator of {t} does not fit in 64 bits")))?;
        Ok(StanleyTriadic {
            num,
            den_pow3: t.den_pow3(),
        })
    }
}

/// An independence certificate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StanleyCertificate {
    pub horizon: usize,
    pub kappa: u32,
    pub lambda: i64,
    pub rho: u64,
    pub alpha: StanleyTriadic,
    pub proven: bool,
}

impl TryFrom<&IndependenceCertificate> for StanleyCertificate {
    type Error = Error;

    fn try_from(c: &IndependenceCertificate) -> Result<Self, Error> {
        Ok(StanleyCertificate {
            horizon: c.horizon,
            kappa: c.kappa,
            lambda: c.lambda,
            rho: c.rho,
            alpha: c.alpha.try_into()?,
            proven: c.proven,
        })
    }
}

/// Opaque handle to a generated Stanley sequence.
pub struct StanleySequence(GeneratedSequence);

/// Opaque handle to a seed set.
pub struct StanleySeed(SeedSet);

/// Generates the first `count` terms of S(seed).
///
/// # Safety
/// `seed` must point to `seed_len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stanley_sequence_generate(
    seed: *const u64,
    seed_len: usize,
    count: usize,
    out: *mut *mut StanleySequence,
) -> StanleyStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantee.
        let seed = unsafe { seed_from_raw(seed, seed_len) }?;
        let seq = GeneratedSequence::generate_with(&seed, count, SieveConfig::from_env()?)?;
        let handle = Box::into_raw(Box::new(StanleySequence(seq)));
        // SAFETY: forwarded caller guarantee.
        unsafe { write_out(out, handle, "out") }.inspect_err(|_| {
            // SAFETY: `handle` was just created and never shared.
            drop(unsafe { Box::from_raw(handle) });
        })
    })
}

/// Appends `additional` terms. On a resource error the terms produced so far are kept.
///
/// # Safety
/// `seq` must be a live handle from [`stanley_sequence_generate`].
#[no_mangle]
pub unsafe extern "C" fn stanley_sequence_extend(seq: *mut StanleySequence, additional: usize) -> StanleyStatus {
    guard(|| {
        // SAFETY: the caller guarantees a live, unaliased handle.
        let seq = unsafe { seq.as_mut() }.ok_or_else(|| null_error("seq"))?;
        seq.0.extend(additional)
    })
}

/// Number of terms, or 0 for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stanley_sequence_len(seq: *const StanleySequence) -> usize {
    // SAFETY: the caller guarantees null or a live handle.
    unsafe { seq.as_ref() }.map_or(0, |s| s.0.len())
}

/// Pointer to the terms, valid until the handle is extended or freed. Null for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stanley_sequence_terms(seq: *const StanleySequence) -> *const u64 {
    // SAFETY: the caller guarantees null or a live handle.
    unsafe { seq.as_ref() }.map_or(ptr::null(), |s| s.0.terms().as_ptr())
}

/// Releases a sequence handle. Null is ignored.
///
/// # Safety
/// `seq` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn stanley_sequence_free(seq: *mut StanleySequence) {
    if !seq.is_null() {
        // SAFETY: the caller hands back ownership of a live handle.
        drop(unsafe { Box::from_raw(seq) });
    }
}

/// Certifies the sequence with threshold at most `kmax`.
///
/// Writes `*found = false` when no certificate exists within the generated terms.
///
/// # Safety
/// `seq` must be a live handle; `out` and `found` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stanley_certify(
    seq: *const StanleySequence,
    kmax: u32,
    out: *mut StanleyCertificate,
    found: *mut bool,
) -> StanleyStatus {
    guard(|| {
        // SAFETY: the caller guarantees a live handle.
        let seq = unsafe { seq.as_ref() }.ok_or_else(|| null_error("seq"))?;
        let omega = seq.0.obstruction().omega;
        let cert = certify_with(&seq.0, omega, CertifyOptions { kmax })?;
        if let Some(c) = &cert {
            // SAFETY: forwarded caller guarantee.
            unsafe { write_out(out, c.try_into()?, "out") }?;
        }
        // SAFETY: forwarded caller guarantee.
        unsafe { write_out(found, cert.is_some(), "found") }
    })
}

/// ω(seed): the largest integer below max(seed) that is neither in nor covered
/// by the seed, or -1.
///
/// # Safety
/// `seed` must point to `seed_len` readable values; `omega` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stanley_omega(seed: *const u64, seed_len: usize, omega: *mut i64) -> StanleyStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantee.
        let seed = unsafe { seed_from_raw(seed, seed_len) }?;
        // SAFETY: forwarded caller guarantee.
        unsafe { write_out(omega, obstruction_set(&seed).omega, "omega") }
    })
}

/// The `n`-th term of S(0).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stanley_s0_term(n: u64, out: *mut u64) -> StanleyStatus {
    guard(|| {
        let v = u64::try_from(s0_term(n))
            .map_err(|_| Error::OutOfRange(format!("s0_term({n}) does not fit in 64 bits")))?;
        // SAFETY: forwarded caller guarantee.
        unsafe { write_out(out, v, "out") }
    })
}

/// Whether the strictly increasing set has no 3-term arithmetic progression.
///
/// # Safety
/// `set` must point to `len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stanley_is_three_free(set: *const u64, len: usize, out: *mut bool) -> StanleyStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantee.
        let set = unsafe { slice(set, len, "set") }?;
        let free = is_three_free(set)?;
        // SAFETY: forwarded caller guarantee.
        unsafe { write_out(out, free, "out") }
    })
}

/// Builds seed^d_k and its predicted repeat and scaling factors.
///
/// # Safety
/// `seed` must point to `seed_len` readable values; the three outputs must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stanley_adk(
    seed: *const u64,
    seed_len: usize,
    k: u32,
    d: i64,
    out_seed: *mut *mut StanleySeed,
    predicted_rho: *mut u64,
    predicted_alpha: *mut StanleyTriadic,
) -> StanleyStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantee.
        let seed = unsafe { seed_from_raw(seed, seed_len) }?;
        let mut a = CertifiedSeed::materialize(&seed, MAX_CERTIFY_HORIZON)?;
        let needed = (1usize << k.min(40)) + 1;
        if a.seq.len() < needed {
            a.seq.extend(needed - a.seq.len())?;
        }
        let c = adk(&a.seq, &a.cert, a.omega(), k, d)?;
        let alpha: StanleyTriadic = c.predicted_alpha.try_into()?;
        if out_seed.is_null() || predicted_rho.is_null() || predicted_alpha.is_null() {
            return Err(null_error("outputs"));
        }
        // SAFETY: checked non-null above; the caller guarantees validity.
        unsafe {
            predicted_rho.write(c.predicted_rho);
            predicted_alpha.write(alpha);
            out_seed.write(Box::into_raw(Box::new(StanleySeed(c.seed))));
        }
        Ok(())
    })
}

/// Searches a construction chain from {0} to scaling factor `target` and returns
/// the final seed, its certificate, and the chain depth.
///
/// # Safety
/// All outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stanley_target_scaling(
    target: StanleyTriadic,
    out_seed: *mut *mut StanleySeed,
    out_cert: *mut StanleyCertificate,
    depth: *mut usize,
) -> StanleyStatus {
    guard(|| {
        if out_seed.is_null() || out_cert.is_null() || depth.is_null() {
            return Err(null_error("outputs"));
        }
        let target = Triadic::new(target.num as i128, target.den_pow3);
        let chain = ChainSearch::new(ChainCaps::default()).target_scaling(target)?;
        let cert = StanleyCertificate::try_from(&chain.final_certificate)?;
        // SAFETY: checked non-null above; the caller guarantees validity.
        unsafe {
            out_cert.write(cert);
            depth.write(chain.depth());
            out_seed.write(Box::into_raw(Box::new(StanleySeed(chain.final_seed))));
        }
        Ok(())
    })
}

/// Number of seed elements, or 0 for a null handle.
///
/// # Safety
/// `seed` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stanley_seed_len(seed: *const StanleySeed) -> usize {
    // SAFETY: the caller guarantees null or a live handle.
    unsafe { seed.as_ref() }.map_or(0, |s| s.0.len())
}

/// Pointer to the sorted elements, valid until the handle is freed. Null for a null handle.
///
/// # Safety
/// `seed` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stanley_seed_elements(seed: *const StanleySeed) -> *const u64 {
    // SAFETY: the caller guarantees null or a live handle.
    unsafe { seed.as_ref() }.map_or(ptr::null(), |s| s.0.elements().as_ptr())
}

/// Releases a seed handle. Null is ignored.
///
/// # Safety
/// `seed` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn stanley_seed_free(seed: *mut StanleySeed) {
    if !seed.is_null() {
        // SAFETY: the caller hands back ownership of a live handle.
        drop(unsafe { Box::from_raw(seed) });
    }
}
