//! C ABI for the streamsample library.
//!
//! Samplers are opaque heap-allocated handles created by `ss_*_new`
//! functions and released by the matching `ss_*_free`; items are opaque
//! `uint64_t` values chosen by the caller (indices, row ids, pointers).
//! Every fallible call returns an [`SsStatus`]; out-parameters are only
//! written on `Ok`.
//!
//! Handles are not thread-safe; drive each from one thread at a time.
//! The generated header lives at `include/streamsample.h`.

use std::os::raw::c_char;

use streamsample::error::SampleError;
use streamsample::method::{ReservoirMethod, SequentialMethod};
use streamsample::reservoir::ReservoirSampler;
use streamsample::rng::StreamRng;
use streamsample::sequential::{SequentialState, StreamTotal};

/// Result of a fallible API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    /// Success.
    Ok = 0,
    /// A sequential sampler has emitted its full sample.
    Done = 1,
    /// A required pointer argument was null.
    NullPointer = 2,
    /// Sample capacity must be at least 1.
    InvalidCapacity = 3,
    /// Weight must be positive and finite.
    InvalidWeight = 4,
    /// Weight supplied to an unweighted method.
    WeightNotAllowed = 5,
    /// Weighted method updated without a weight.
    WeightRequired = 6,
    /// Merge inputs disagree on method or capacity.
    IncompatibleMerge = 7,
    /// Without-replacement request with K larger than the population.
    SampleTooLarge = 8,
    /// Declared total must be positive (and finite for weights).
    InvalidTotal = 9,
    /// Weighted sequential sampling without replacement is impossible
    /// knowing only the total weight.
    Unsupported = 10,
    /// Stream ended before the declared total was consumed.
    Truncated = 11,
    /// Output buffer capacity is smaller than the sample.
    BufferTooSmall = 12,
    /// Wrong driver call for the method (skip-driven vs weight-driven).
    WrongDriver = 13,
}

fn status_of(error: &SampleError) -> SsStatus {
    match error {
        SampleError::InvalidCapacity => SsStatus::InvalidCapacity,
        SampleError::InvalidWeight(_) => SsStatus::InvalidWeight,
        SampleError::UnexpectedWeight(_) => SsStatus::WeightNotAllowed,
        SampleError::MissingWeight(_) => SsStatus::WeightRequired,
        SampleError::IncompatibleMerge(_) | SampleError::IncompatibleCombine(_) => {
            SsStatus::IncompatibleMerge
        }
        SampleError::SampleLargerThanPopulation { .. } => SsStatus::SampleTooLarge,
        SampleError::InvalidTotal => SsStatus::InvalidTotal,
        SampleError::WeightedSequentialWithoutReplacement => SsStatus::Unsupported,
        SampleError::TruncatedCount { .. } | SampleError::TruncatedWeight { .. } => {
            SsStatus::Truncated
        }
        SampleError::OracleTooLarge { .. } => SsStatus::Unsupported,
    }
}

/// Reservoir sampling method selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsReservoirMethod {
    AlgR = 0,
    AlgL = 1,
    AlgRswrSkip = 2,
    AlgARes = 3,
    AlgAExpJ = 4,
    AlgWrswrSkip = 5,
}

impl From<SsReservoirMethod> for ReservoirMethod {
    fn from(m: SsReservoirMethod) -> Self {
        match m {
            SsReservoirMethod::AlgR => ReservoirMethod::AlgR,
            SsReservoirMethod::AlgL => ReservoirMethod::AlgL,
            SsReservoirMethod::AlgRswrSkip => ReservoirMethod::AlgRswrSkip,
            SsReservoirMethod::AlgARes => ReservoirMethod::AlgARes,
            SsReservoirMethod::AlgAExpJ => ReservoirMethod::AlgAExpJ,
            SsReservoirMethod::AlgWrswrSkip => ReservoirMethod::AlgWrswrSkip,
        }
    }
}

/// Sequential sampling method selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsSequentialMethod {
    AlgD = 0,
    AlgHiddenShuffle = 1,
    AlgOrdSwr = 2,
    AlgOrdWswr = 3,
}

impl From<SsSequentialMethod> for SequentialMethod {
    fn from(m: SsSequentialMethod) -> Self {
        match m {
            SsSequentialMethod::AlgD => SequentialMethod::AlgD,
            SsSequentialMethod::AlgHiddenShuffle => SequentialMethod::AlgHiddenShuffle,
            SsSequentialMethod::AlgOrdSwr => SequentialMethod::AlgOrdSwr,
            SsSequentialMethod::AlgOrdWswr => SequentialMethod::AlgOrdWswr,
        }
    }
}

/// Opaque reservoir sampler over u64 items.
pub struct SsReservoir(ReservoirSampler<u64>);

/// Opaque sequential sampler state.
pub struct SsSequential(SequentialState);

/// Create a reservoir sampler. On `Ok` the caller owns the handle and
/// must release it with `ss_reservoir_free`.
#[no_mangle]
pub extern "C" fn ss_reservoir_new(
    method: SsReservoirMethod,
    capacity: u64,
    seed: u64,
    out: *mut *mut SsReservoir,
) -> SsStatus {
    if out.is_null() {
        return SsStatus::NullPointer;
    }
    match ReservoirSampler::new(method.into(), capacity as usize, StreamRng::new(seed)) {
        Ok(sampler) => {
            unsafe { *out = Box::into_raw(Box::new(SsReservoir(sampler))) };
            SsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a reservoir handle; null is a no-op.
#[no_mangle]
pub extern "C" fn ss_reservoir_free(reservoir: *mut SsReservoir) {
    if !reservoir.is_null() {
        drop(unsafe { Box::from_raw(reservoir) });
    }
}

/// Process one element of an unweighted stream.
#[no_mangle]
pub extern "C" fn ss_reservoir_fit(reservoir: *mut SsReservoir, item: u64) -> SsStatus {
    let Some(r) = (unsafe { reservoir.as_mut() }) else {
        return SsStatus::NullPointer;
    };
    match r.0.fit(item) {
        Ok(()) => SsStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Process one element of a weighted stream.
#[no_mangle]
pub extern "C" fn ss_reservoir_fit_weighted(
    reservoir: *mut SsReservoir,
    item: u64,
    weight: f64,
) -> SsStatus {
    let Some(r) = (unsafe { reservoir.as_mut() }) else {
        return SsStatus::NullPointer;
    };
    match r.0.fit_weighted(item, weight) {
        Ok(()) => SsStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Current sample length (min(n, K) without replacement, K with).
#[no_mangle]
pub extern "C" fn ss_reservoir_len(reservoir: *const SsReservoir) -> u64 {
    unsafe { reservoir.as_ref() }.map_or(0, |r| r.0.len() as u64)
}

/// Stream elements processed so far.
#[no_mangle]
pub extern "C" fn ss_reservoir_items_seen(reservoir: *const SsReservoir) -> u64 {
    unsafe { reservoir.as_ref() }.map_or(0, |r| r.0.items_seen())
}

/// Cumulative weight processed so far (0 for unweighted methods).
#[no_mangle]
pub extern "C" fn ss_reservoir_weight_seen(reservoir: *const SsReservoir) -> f64 {
    unsafe { reservoir.as_ref() }.map_or(0.0, |r| r.0.weight_seen())
}

/// Snapshot the current sample into `buffer` (capacity in items).
/// Writes the sample length to `written`. The sampler is unchanged.
#[no_mangle]
pub extern "C" fn ss_reservoir_value(
    reservoir: *const SsReservoir,
    buffer: *mut u64,
    buffer_capacity: usize,
    written: *mut usize,
) -> SsStatus {
    let Some(r) = (unsafe { reservoir.as_ref() }) else {
        return SsStatus::NullPointer;
    };
    if buffer.is_null() || written.is_null() {
        return SsStatus::NullPointer;
    }
    let sample = r.0.value();
    if sample.items.len() > buffer_capacity {
        return SsStatus::BufferTooSmall;
    }
    let out = unsafe { std::slice::from_raw_parts_mut(buffer, sample.items.len()) };
    out.copy_from_slice(&sample.items);
    unsafe { *written = sample.items.len() };
    SsStatus::Ok
}

/// Merge two samplers of identical method and capacity into a fresh
/// handle distributed as one sampler over the concatenated partitions.
/// Inputs are unchanged; the caller owns the new handle.
#[no_mangle]
pub extern "C" fn ss_reservoir_merge(
    a: *const SsReservoir,
    b: *const SsReservoir,
    seed: u64,
    out: *mut *mut SsReservoir,
) -> SsStatus {
    let (Some(a), Some(b)) = (unsafe { a.as_ref() }, unsafe { b.as_ref() }) else {
        return SsStatus::NullPointer;
    };
    if out.is_null() {
        return SsStatus::NullPointer;
    }
    match ReservoirSampler::merge(&[&a.0, &b.0], StreamRng::new(seed)) {
        Ok(merged) => {
            unsafe { *out = Box::into_raw(Box::new(SsReservoir(merged))) };
            SsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Create a sequential sampler for a stream of `total` elements.
/// AlgORDWSWR needs a weight total; use `ss_sequential_new_weighted`.
#[no_mangle]
pub extern "C" fn ss_sequential_new_count(
    method: SsSequentialMethod,
    k: u64,
    total: u64,
    seed: u64,
    out: *mut *mut SsSequential,
) -> SsStatus {
    if out.is_null() {
        return SsStatus::NullPointer;
    }
    match SequentialState::new(
        method.into(),
        k,
        StreamTotal::Count(total),
        StreamRng::new(seed),
    ) {
        Ok(state) => {
            unsafe { *out = Box::into_raw(Box::new(SsSequential(state))) };
            SsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Create a weighted sequential sampler for a stream whose weights sum
/// to `total_weight`; AlgORDWSWR is the one weighted sequential method.
/// Requesting a without-replacement method here is the impossible
/// weighted-sequential-without-replacement combination and yields
/// `Unsupported`.
#[no_mangle]
pub extern "C" fn ss_sequential_new_weighted(
    method: SsSequentialMethod,
    k: u64,
    total_weight: f64,
    seed: u64,
    out: *mut *mut SsSequential,
) -> SsStatus {
    if out.is_null() {
        return SsStatus::NullPointer;
    }
    match SequentialState::new(
        method.into(),
        k,
        StreamTotal::Weight(total_weight),
        StreamRng::new(seed),
    ) {
        Ok(state) => {
            unsafe { *out = Box::into_raw(Box::new(SsSequential(state))) };
            SsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a sequential handle; null is a no-op.
#[no_mangle]
pub extern "C" fn ss_sequential_free(state: *mut SsSequential) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Total multiplicity still to emit.
#[no_mangle]
pub extern "C" fn ss_sequential_remaining(state: *const SsSequential) -> u64 {
    unsafe { state.as_ref() }.map_or(0, |s| s.0.remaining())
}

/// Next skip instruction for count-driven methods (AlgD,
/// AlgHiddenShuffle, AlgORDSWR): pass over `skip` elements, then select
/// the next element `multiplicity` times. Returns `Done` once the sample
/// is complete and `WrongDriver` for AlgORDWSWR.
#[no_mangle]
pub extern "C" fn ss_sequential_next_skip(
    state: *mut SsSequential,
    skip: *mut u64,
    multiplicity: *mut u64,
) -> SsStatus {
    let Some(s) = (unsafe { state.as_mut() }) else {
        return SsStatus::NullPointer;
    };
    if skip.is_null() || multiplicity.is_null() {
        return SsStatus::NullPointer;
    }
    if s.0.method() == SequentialMethod::AlgOrdWswr {
        return SsStatus::WrongDriver;
    }
    match s.0.next_step() {
        Some(step) => {
            unsafe {
                *skip = step.skip;
                *multiplicity = step.multiplicity;
            }
            SsStatus::Ok
        }
        None => SsStatus::Done,
    }
}

/// Advance a weighted sequential sampler past one element of the given
/// weight; `multiplicity` receives how many draws selected it (0 means
/// skipped). Returns `Done` once the sample is complete and
/// `WrongDriver` for count-driven methods.
#[no_mangle]
pub extern "C" fn ss_sequential_offer_weight(
    state: *mut SsSequential,
    weight: f64,
    multiplicity: *mut u64,
) -> SsStatus {
    let Some(s) = (unsafe { state.as_mut() }) else {
        return SsStatus::NullPointer;
    };
    if multiplicity.is_null() {
        return SsStatus::NullPointer;
    }
    if s.0.method() != SequentialMethod::AlgOrdWswr {
        return SsStatus::WrongDriver;
    }
    if s.0.is_exhausted() {
        return SsStatus::Done;
    }
    match s.0.offer_weight(weight) {
        Ok(m) => {
            unsafe { *multiplicity = m };
            SsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
