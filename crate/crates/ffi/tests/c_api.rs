//! Exercises the C ABI exactly as a foreign caller would: raw pointers,
//! status codes, caller-owned buffers.

use streamsample_ffi::*;

fn new_reservoir(method: SsReservoirMethod, k: u64, seed: u64) -> *mut SsReservoir {
    let mut handle: *mut SsReservoir = std::ptr::null_mut();
    assert_eq!(ss_reservoir_new(method, k, seed, &mut handle), SsStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn reservoir_lifecycle_over_long_stream() {
    let r = new_reservoir(SsReservoirMethod::AlgL, 10, 42);
    for item in 0..100_000u64 {
        assert_eq!(ss_reservoir_fit(r, item), SsStatus::Ok);
    }
    assert_eq!(ss_reservoir_len(r), 10);
    assert_eq!(ss_reservoir_items_seen(r), 100_000);

    let mut buf = [0u64; 10];
    let mut written = 0usize;
    assert_eq!(
        ss_reservoir_value(r, buf.as_mut_ptr(), buf.len(), &mut written),
        SsStatus::Ok
    );
    assert_eq!(written, 10);
    assert!(buf.iter().all(|&x| x < 100_000));

    let mut small = [0u64; 3];
    assert_eq!(
        ss_reservoir_value(r, small.as_mut_ptr(), small.len(), &mut written),
        SsStatus::BufferTooSmall
    );
    ss_reservoir_free(r);
}

#[test]
fn weighted_reservoir_accumulates_weight() {
    let r = new_reservoir(SsReservoirMethod::AlgAExpJ, 3, 1);
    for item in 0..50u64 {
        assert_eq!(
            ss_reservoir_fit_weighted(r, item, 1.0 + item as f64),
            SsStatus::Ok
        );
    }
    let expected: f64 = (0..50).map(|i| 1.0 + i as f64).sum();
    assert!((ss_reservoir_weight_seen(r) - expected).abs() < 1e-9);
    ss_reservoir_free(r);
}

#[test]
fn status_codes_for_misuse() {
    let mut out: *mut SsReservoir = std::ptr::null_mut();
    assert_eq!(
        ss_reservoir_new(SsReservoirMethod::AlgR, 0, 0, &mut out),
        SsStatus::InvalidCapacity
    );
    assert_eq!(
        ss_reservoir_new(SsReservoirMethod::AlgR, 2, 0, std::ptr::null_mut()),
        SsStatus::NullPointer
    );
    assert_eq!(ss_reservoir_fit(std::ptr::null_mut(), 1), SsStatus::NullPointer);

    let unweighted = new_reservoir(SsReservoirMethod::AlgL, 2, 0);
    assert_eq!(
        ss_reservoir_fit_weighted(unweighted, 1, 1.0),
        SsStatus::WeightNotAllowed
    );
    ss_reservoir_free(unweighted);

    let weighted = new_reservoir(SsReservoirMethod::AlgARes, 2, 0);
    assert_eq!(ss_reservoir_fit(weighted, 1), SsStatus::WeightRequired);
    assert_eq!(
        ss_reservoir_fit_weighted(weighted, 1, -1.0),
        SsStatus::InvalidWeight
    );
    assert_eq!(
        ss_reservoir_fit_weighted(weighted, 1, f64::NAN),
        SsStatus::InvalidWeight
    );
    ss_reservoir_free(weighted);
}

#[test]
fn merge_combines_partitions_and_checks_compatibility() {
    let a = new_reservoir(SsReservoirMethod::AlgL, 2, 10);
    let b = new_reservoir(SsReservoirMethod::AlgL, 2, 11);
    for item in 0..3u64 {
        assert_eq!(ss_reservoir_fit(a, item), SsStatus::Ok);
        assert_eq!(ss_reservoir_fit(b, item + 3), SsStatus::Ok);
    }
    let mut merged: *mut SsReservoir = std::ptr::null_mut();
    assert_eq!(ss_reservoir_merge(a, b, 12, &mut merged), SsStatus::Ok);
    assert_eq!(ss_reservoir_items_seen(merged), 6);
    assert_eq!(ss_reservoir_len(merged), 2);
    // Inputs stay usable and unchanged.
    assert_eq!(ss_reservoir_items_seen(a), 3);

    let mismatched = new_reservoir(SsReservoirMethod::AlgR, 2, 13);
    let mut out: *mut SsReservoir = std::ptr::null_mut();
    assert_eq!(
        ss_reservoir_merge(a, mismatched, 14, &mut out),
        SsStatus::IncompatibleMerge
    );

    ss_reservoir_free(a);
    ss_reservoir_free(b);
    ss_reservoir_free(merged);
    ss_reservoir_free(mismatched);
}

#[test]
fn sequential_skip_driver() {
    let mut s: *mut SsSequential = std::ptr::null_mut();
    assert_eq!(
        ss_sequential_new_count(SsSequentialMethod::AlgD, 4, 4, 7, &mut s),
        SsStatus::Ok
    );
    // K = N: every skip is zero, each selection once.
    let mut positions = Vec::new();
    let mut cursor = 0u64;
    loop {
        let (mut skip, mut mult) = (0u64, 0u64);
        match ss_sequential_next_skip(s, &mut skip, &mut mult) {
            SsStatus::Ok => {
                cursor += skip;
                positions.push(cursor);
                cursor += 1;
                assert_eq!(mult, 1);
            }
            SsStatus::Done => break,
            other => panic!("unexpected status {other:?}"),
        }
    }
    assert_eq!(positions, vec![0, 1, 2, 3]);
    assert_eq!(ss_sequential_remaining(s), 0);
    ss_sequential_free(s);

    // With replacement: multiplicities sum to K and positions ascend.
    let mut s: *mut SsSequential = std::ptr::null_mut();
    assert_eq!(
        ss_sequential_new_count(SsSequentialMethod::AlgOrdSwr, 8, 5, 9, &mut s),
        SsStatus::Ok
    );
    let mut total = 0u64;
    let mut last = None;
    let mut cursor = 0u64;
    loop {
        let (mut skip, mut mult) = (0u64, 0u64);
        match ss_sequential_next_skip(s, &mut skip, &mut mult) {
            SsStatus::Ok => {
                cursor += skip;
                assert!(Some(cursor) > last);
                assert!(cursor < 5);
                last = Some(cursor);
                cursor += 1;
                total += mult;
            }
            SsStatus::Done => break,
            other => panic!("unexpected status {other:?}"),
        }
    }
    assert_eq!(total, 8);
    ss_sequential_free(s);
}

#[test]
fn sequential_weight_driver() {
    let mut s: *mut SsSequential = std::ptr::null_mut();
    assert_eq!(
        ss_sequential_new_weighted(SsSequentialMethod::AlgOrdWswr, 6, 10.0, 3, &mut s),
        SsStatus::Ok
    );
    let weights = [1.0f64, 2.0, 3.0, 4.0];
    let mut total = 0u64;
    for &w in &weights {
        let mut mult = 0u64;
        match ss_sequential_offer_weight(s, w, &mut mult) {
            SsStatus::Ok => total += mult,
            SsStatus::Done => break,
            other => panic!("unexpected status {other:?}"),
        }
    }
    assert_eq!(total, 6, "all draws land within the declared weight");
    let mut mult = 0u64;
    assert_eq!(ss_sequential_offer_weight(s, 1.0, &mut mult), SsStatus::Done);
    ss_sequential_free(s);
}

#[test]
fn driver_mismatch_is_rejected() {
    let mut count_driven: *mut SsSequential = std::ptr::null_mut();
    assert_eq!(
        ss_sequential_new_count(SsSequentialMethod::AlgD, 2, 10, 0, &mut count_driven),
        SsStatus::Ok
    );
    let mut mult = 0u64;
    assert_eq!(
        ss_sequential_offer_weight(count_driven, 1.0, &mut mult),
        SsStatus::WrongDriver
    );
    ss_sequential_free(count_driven);

    let mut weight_driven: *mut SsSequential = std::ptr::null_mut();
    assert_eq!(
        ss_sequential_new_weighted(SsSequentialMethod::AlgOrdWswr, 2, 5.0, 0, &mut weight_driven),
        SsStatus::Ok
    );
    let (mut skip, mut m) = (0u64, 0u64);
    assert_eq!(
        ss_sequential_next_skip(weight_driven, &mut skip, &mut m),
        SsStatus::WrongDriver
    );
    ss_sequential_free(weight_driven);
}

#[test]
fn construction_validation_statuses() {
    let mut out: *mut SsSequential = std::ptr::null_mut();
    assert_eq!(
        ss_sequential_new_count(SsSequentialMethod::AlgD, 5, 3, 0, &mut out),
        SsStatus::SampleTooLarge
    );
    assert_eq!(
        ss_sequential_new_count(SsSequentialMethod::AlgD, 1, 0, 0, &mut out),
        SsStatus::InvalidTotal
    );
    assert_eq!(
        ss_sequential_new_count(SsSequentialMethod::AlgOrdWswr, 1, 5, 0, &mut out),
        SsStatus::WeightRequired
    );
    // The impossible request: a without-replacement method from a weight
    // total alone.
    assert_eq!(
        ss_sequential_new_weighted(SsSequentialMethod::AlgD, 1, 5.0, 0, &mut out),
        SsStatus::Unsupported
    );
    assert_eq!(
        ss_sequential_new_weighted(SsSequentialMethod::AlgHiddenShuffle, 1, 5.0, 0, &mut out),
        SsStatus::Unsupported
    );
}

#[test]
fn version_is_nul_terminated() {
    let ptr = ss_version();
    let version = unsafe { std::ffi::CStr::from_ptr(ptr) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/streamsample.h"),
    )
    .expect("header generated by build script");
    for symbol in [
        "ss_reservoir_new",
        "ss_reservoir_fit",
        "ss_reservoir_fit_weighted",
        "ss_reservoir_value",
        "ss_reservoir_merge",
        "ss_reservoir_free",
        "ss_sequential_new_count",
        "ss_sequential_new_weighted",
        "ss_sequential_next_skip",
        "ss_sequential_offer_weight",
        "ss_sequential_free",
        "ss_version",
        "SS_STATUS_UNSUPPORTED",
        "typedef struct SsReservoir SsReservoir",
    ] {
        assert!(header.contains(symbol), "header missing `{symbol}`");
    }
}
