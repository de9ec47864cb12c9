//! Property tests for the structural invariants that hold for every
//! seed, capacity and stream length.

use proptest::prelude::*;

use streamsample::method::{ReservoirMethod, SequentialMethod};
use streamsample::reservoir::ReservoirSampler;
use streamsample::rng::StreamRng;
use streamsample::sequential::SequentialSampler;

proptest! {
    #[test]
    fn reservoir_size_and_counters(
        method_idx in 0usize..6,
        k in 1usize..20,
        n in 0u64..400,
        seed in any::<u64>(),
    ) {
        let method = ReservoirMethod::ALL[method_idx];
        let mut sampler = ReservoirSampler::new(method, k, StreamRng::new(seed)).unwrap();
        let mut weight_total = 0.0;
        for x in 0..n {
            if method.weighted() {
                let w = 0.5 + (x % 7) as f64;
                weight_total += w;
                sampler.fit_weighted(x, w).unwrap();
            } else {
                sampler.fit(x).unwrap();
            }
        }
        prop_assert_eq!(sampler.items_seen(), n);
        let expected_len = if method.with_replacement() {
            if n == 0 { 0 } else { k }
        } else {
            (n as usize).min(k)
        };
        prop_assert_eq!(sampler.len(), expected_len);
        prop_assert_eq!(sampler.buffer_capacity(), k);
        if method.weighted() {
            prop_assert!((sampler.weight_seen() - weight_total).abs() < 1e-9);
        }
        let value = sampler.value();
        prop_assert_eq!(value.len(), expected_len);
        prop_assert!(value.items.iter().all(|&x| x < n.max(1)));
    }

    #[test]
    fn sequential_emissions_ordered_and_complete(
        method_idx in 0usize..3,
        k in 1u64..15,
        extra in 0u64..60,
        seed in any::<u64>(),
    ) {
        let method = [
            SequentialMethod::AlgD,
            SequentialMethod::AlgHiddenShuffle,
            SequentialMethod::AlgOrdSwr,
        ][method_idx];
        let n = k + extra;
        let sample: Vec<_> =
            SequentialSampler::new(method, k, n, 0..n as u32, StreamRng::new(seed))
                .unwrap()
                .map(|e| e.unwrap())
                .collect();
        prop_assert!(sample.windows(2).all(|w| w[0].position < w[1].position));
        prop_assert!(sample.iter().all(|e| e.position < n));
        prop_assert!(sample.iter().all(|e| e.item as u64 == e.position));
        prop_assert_eq!(sample.iter().map(|e| e.multiplicity).sum::<u64>(), k);
        if !method.with_replacement() {
            prop_assert!(sample.iter().all(|e| e.multiplicity == 1));
        }
    }

    #[test]
    fn merge_preserves_counters_for_any_split(
        k in 1usize..8,
        n_a in 0u64..50,
        n_b in 0u64..50,
        seed in any::<u64>(),
    ) {
        let mut a = ReservoirSampler::new(ReservoirMethod::AlgL, k, StreamRng::new(seed)).unwrap();
        let mut b =
            ReservoirSampler::new(ReservoirMethod::AlgL, k, StreamRng::new(seed ^ 1)).unwrap();
        for x in 0..n_a {
            a.fit(x).unwrap();
        }
        for x in n_a..n_a + n_b {
            b.fit(x).unwrap();
        }
        let merged = ReservoirSampler::merge(&[&a, &b], StreamRng::new(seed ^ 2)).unwrap();
        prop_assert_eq!(merged.items_seen(), n_a + n_b);
        prop_assert_eq!(merged.len(), ((n_a + n_b) as usize).min(k));
        let mut items = merged.value().items;
        items.sort_unstable();
        items.dedup();
        prop_assert_eq!(items.len(), merged.len(), "merged sample must hold distinct items");
        // Inputs untouched.
        prop_assert_eq!(a.items_seen(), n_a);
        prop_assert_eq!(b.items_seen(), n_b);
    }
}
