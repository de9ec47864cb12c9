//! One-shot sampling from any iterator.
//!
//! Dispatches on what the caller knows: with a declared total the stream
//! is sampled sequentially in one ordered pass; without one, a reservoir
//! method runs. Either way the iterator is consumed once and never
//! materialized.

use crate::error::{Result, SampleError};
use crate::method::{Method, ReservoirMethod, SequentialMethod};
use crate::reservoir::ReservoirSampler;
use crate::rng::StreamRng;
use crate::sample::SampleResult;
use crate::sequential::{SequentialSampler, WeightedSequentialSampler};

/// Sample `k` items from an unweighted stream.
///
/// With `known_total = Some(n)` the stream is sampled sequentially (AlgD,
/// or AlgORDSWR with replacement) and the result is in stream order; the
/// stream must then actually yield `n` elements. Without replacement the
/// sample size is min(k, n). With no declared total a reservoir method
/// runs (AlgL, or AlgRSWRSKIP with replacement).
pub fn itsample<I>(
    stream: I,
    k: usize,
    replace: bool,
    known_total: Option<u64>,
    rng: StreamRng,
) -> Result<SampleResult<I::Item>>
where
    I: IntoIterator,
    I::Item: Clone,
{
    match known_total {
        None => {
            let method = if replace {
                ReservoirMethod::AlgRswrSkip
            } else {
                ReservoirMethod::AlgL
            };
            let mut sampler = ReservoirSampler::new(method, k, rng)?;
            for item in stream {
                sampler.fit(item)?;
            }
            Ok(sampler.value())
        }
        Some(n) => {
            let method = if replace {
                SequentialMethod::AlgOrdSwr
            } else {
                SequentialMethod::AlgD
            };
            let k_eff = if replace { k as u64 } else { (k as u64).min(n) };
            if n == 0 || k_eff == 0 {
                return Ok(SampleResult {
                    items: Vec::new(),
                    method: Method::Sequential(method),
                    items_processed: 0,
                    weight_processed: 0.0,
                });
            }
            let sampler = SequentialSampler::new(method, k_eff, n, stream.into_iter(), rng)?;
            collect_sequential(sampler, method)
        }
    }
}

/// Sample `k` items from a weighted stream of `(item, weight)` pairs.
///
/// With `known_total_weight` and `replace` the stream is sampled
/// sequentially (AlgORDWSWR). A declared total without replacement is
/// rejected: the total weight alone cannot determine without-replacement
/// inclusion probabilities. With no declared total a weighted reservoir
/// runs (AlgAExpJ, or AlgWRSWRSKIP with replacement).
pub fn itsample_weighted<I, T>(
    stream: I,
    k: usize,
    replace: bool,
    known_total_weight: Option<f64>,
    rng: StreamRng,
) -> Result<SampleResult<T>>
where
    I: IntoIterator<Item = (T, f64)>,
    T: Clone,
{
    match known_total_weight {
        None => {
            let method = if replace {
                ReservoirMethod::AlgWrswrSkip
            } else {
                ReservoirMethod::AlgAExpJ
            };
            let mut sampler = ReservoirSampler::new(method, k, rng)?;
            for (item, weight) in stream {
                sampler.fit_weighted(item, weight)?;
            }
            Ok(sampler.value())
        }
        Some(_) if !replace => Err(SampleError::WeightedSequentialWithoutReplacement),
        Some(total) => {
            let sampler =
                WeightedSequentialSampler::new(k as u64, total, stream.into_iter(), rng)?;
            collect_weighted_sequential(sampler)
        }
    }
}

fn collect_sequential<I: Iterator>(
    sampler: SequentialSampler<I>,
    method: SequentialMethod,
) -> Result<SampleResult<I::Item>>
where
    I::Item: Clone,
{
    let mut items = Vec::new();
    let mut sampler = sampler;
    for emission in &mut sampler {
        let e = emission?;
        for _ in 0..e.multiplicity {
            items.push(e.item.clone());
        }
    }
    Ok(SampleResult {
        items,
        method: Method::Sequential(method),
        items_processed: sampler.state().consumed(),
        weight_processed: 0.0,
    })
}

fn collect_weighted_sequential<I, T>(
    sampler: WeightedSequentialSampler<I, T>,
) -> Result<SampleResult<T>>
where
    I: Iterator<Item = (T, f64)>,
    T: Clone,
{
    let mut items = Vec::new();
    let mut sampler = sampler;
    for emission in &mut sampler {
        let e = emission?;
        for _ in 0..e.multiplicity {
            items.push(e.item.clone());
        }
    }
    Ok(SampleResult {
        items,
        method: Method::Sequential(SequentialMethod::AlgOrdWswr),
        items_processed: sampler.state().consumed(),
        weight_processed: sampler.state().consumed_weight(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> StreamRng {
        StreamRng::new(seed)
    }

    #[test]
    fn k_equals_n_returns_the_whole_population() {
        let result = itsample(1..=100u32, 100, false, Some(100), rng(1)).unwrap();
        let mut items = result.items;
        items.sort_unstable();
        assert_eq!(items, (1..=100).collect::<Vec<_>>());
    }

    #[test]
    fn k_exceeding_n_without_replacement_clamps() {
        let result = itsample(1..=5u32, 10, false, Some(5), rng(2)).unwrap();
        assert_eq!(result.len(), 5);
    }

    #[test]
    fn empty_stream_without_total_yields_empty_sample() {
        let result = itsample(std::iter::empty::<u32>(), 5, false, None, rng(3)).unwrap();
        assert!(result.is_empty());
        assert_eq!(result.items_processed, 0);
    }

    #[test]
    fn long_generator_yields_k_members() {
        let result = itsample(1..=1_000_000u64, 10, false, None, rng(4)).unwrap();
        assert_eq!(result.len(), 10);
        assert!(result.items.iter().all(|&x| (1..=1_000_000).contains(&x)));
        assert_eq!(result.items_processed, 1_000_000);
        assert_eq!(result.method, Method::Reservoir(ReservoirMethod::AlgL));
    }

    #[test]
    fn with_replacement_returns_exactly_k() {
        let result = itsample(1..=3u32, 8, true, Some(3), rng(5)).unwrap();
        assert_eq!(result.len(), 8);
        let reservoir = itsample(1..=3u32, 8, true, None, rng(5)).unwrap();
        assert_eq!(reservoir.len(), 8);
        assert_eq!(
            reservoir.method,
            Method::Reservoir(ReservoirMethod::AlgRswrSkip)
        );
    }

    #[test]
    fn weighted_dispatch() {
        let pairs = vec![("a", 1.0), ("b", 2.0), ("c", 3.0)];
        let r = itsample_weighted(pairs.clone(), 2, false, None, rng(6)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.method, Method::Reservoir(ReservoirMethod::AlgAExpJ));
        assert!((r.weight_processed - 6.0).abs() < 1e-12);

        let r = itsample_weighted(pairs.clone(), 2, true, Some(6.0), rng(7)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.method, Method::Sequential(SequentialMethod::AlgOrdWswr));
    }

    #[test]
    fn weighted_without_replacement_with_total_is_impossible() {
        let pairs = vec![("a", 1.0), ("b", 2.0)];
        assert_eq!(
            itsample_weighted(pairs, 1, false, Some(3.0), rng(8)).unwrap_err(),
            SampleError::WeightedSequentialWithoutReplacement
        );
    }

    #[test]
    fn truncated_declared_total_propagates() {
        assert!(matches!(
            itsample(1..=4u32, 10, false, Some(10), rng(9)),
            Err(SampleError::TruncatedCount { .. })
        ));
    }
}
