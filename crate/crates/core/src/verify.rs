//! Statistical verification matrix: every sampler against its exact law
//! on small instances, reported as one pass/fail row each.
//!
//! The trial runners here are the single source of "run one seeded
//! sampler, canonicalize its outcome" used both by the `verify` command
//! and the acceptance test suite.

use crate::method::{ReservoirMethod, SequentialMethod};
use crate::oracle::{self, ChiSquareOutcome, ExactLaw, Outcome};
use crate::reservoir::ReservoirSampler;
use crate::rng::StreamRng;
use crate::sequential::{self, SequentialSampler, WeightedSequentialSampler};

/// Significance level for every goodness-of-fit check, with one reseed
/// permitted on failure.
pub const ALPHA: f64 = 0.001;

/// Run one seeded reservoir trial over items 0..n and return the
/// canonical outcome.
pub fn reservoir_trial(method: ReservoirMethod, n: u32, k: usize, seed: u64) -> Outcome {
    let mut s = ReservoirSampler::new(method, k, StreamRng::new(seed)).unwrap();
    for x in 0..n {
        s.fit(x).unwrap();
    }
    oracle::outcome(s.value().items)
}

/// Run one seeded weighted reservoir trial over the given weights.
pub fn weighted_reservoir_trial(
    method: ReservoirMethod,
    weights: &[f64],
    k: usize,
    seed: u64,
) -> Outcome {
    let mut s = ReservoirSampler::new(method, k, StreamRng::new(seed)).unwrap();
    for (i, &w) in weights.iter().enumerate() {
        s.fit_weighted(i as u32, w).unwrap();
    }
    oracle::outcome(s.value().items)
}

/// Run one seeded sequential trial over items 0..n, expanding
/// multiplicities into the outcome.
pub fn sequential_trial(method: SequentialMethod, n: u64, k: u64, seed: u64) -> Outcome {
    let sampler =
        SequentialSampler::new(method, k, n, 0..n as u32, StreamRng::new(seed)).unwrap();
    let mut expanded = Vec::new();
    for e in sampler {
        let e = e.unwrap();
        for _ in 0..e.multiplicity {
            expanded.push(e.item);
        }
    }
    oracle::outcome(expanded)
}

/// Run one seeded weighted sequential (AlgORDWSWR) trial.
pub fn ord_wswr_trial(weights: &[f64], k: u64, seed: u64) -> Outcome {
    let total: f64 = weights.iter().sum();
    let stream = weights.iter().enumerate().map(|(i, &w)| (i as u32, w));
    let sampler = WeightedSequentialSampler::new(k, total, stream, StreamRng::new(seed)).unwrap();
    let mut expanded = Vec::new();
    for e in sampler {
        let e = e.unwrap();
        for _ in 0..e.multiplicity {
            expanded.push(e.item);
        }
    }
    oracle::outcome(expanded)
}

/// Merge trial for unweighted methods: partition items 0..n across
/// `parts` equal partitions, sample each, merge, return the merged
/// outcome.
pub fn merge_trial(method: ReservoirMethod, n: u32, parts: u32, k: usize, seed: u64) -> Outcome {
    let per = n / parts;
    let samplers: Vec<_> = (0..parts)
        .map(|p| {
            let mut s =
                ReservoirSampler::new(method, k, StreamRng::new(seed * (parts as u64 + 1) + p as u64))
                    .unwrap();
            for x in (p * per)..((p + 1) * per) {
                s.fit(x).unwrap();
            }
            s
        })
        .collect();
    let refs: Vec<&ReservoirSampler<u32>> = samplers.iter().collect();
    let merged = ReservoirSampler::merge(
        &refs,
        StreamRng::new(seed * (parts as u64 + 1) + parts as u64),
    )
    .unwrap();
    oracle::outcome(merged.value().items)
}

/// Merge trial for weighted methods: `partitions` lists each partition's
/// item weights; item indices run consecutively across partitions.
pub fn weighted_merge_trial(
    method: ReservoirMethod,
    partitions: &[&[f64]],
    k: usize,
    seed: u64,
) -> Outcome {
    let span = partitions.len() as u64 + 1;
    let mut next_item = 0u32;
    let samplers: Vec<_> = partitions
        .iter()
        .enumerate()
        .map(|(p, weights)| {
            let mut s =
                ReservoirSampler::new(method, k, StreamRng::new(seed * span + p as u64)).unwrap();
            for &w in *weights {
                s.fit_weighted(next_item, w).unwrap();
                next_item += 1;
            }
            s
        })
        .collect();
    let refs: Vec<&ReservoirSampler<u32>> = samplers.iter().collect();
    let merged =
        ReservoirSampler::merge(&refs, StreamRng::new(seed * span + partitions.len() as u64))
            .unwrap();
    oracle::outcome(merged.value().items)
}

/// Combine trial: sample each weighted partition with AlgORDWSWR, combine
/// proportionally, and return the first output draw (the global marginal).
pub fn combine_marginal_trial(partitions: &[&[f64]], k: u64, seed: u64) -> Outcome {
    let span = partitions.len() as u64 + 1;
    let mut offset = 0u32;
    let mut locals = Vec::new();
    let mut totals = Vec::new();
    for (p, weights) in partitions.iter().enumerate() {
        let total: f64 = weights.iter().sum();
        let stream = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (offset + i as u32, w));
        let sampler =
            WeightedSequentialSampler::new(k, total, stream, StreamRng::new(seed * span + p as u64))
                .unwrap();
        let mut expanded = Vec::new();
        for e in sampler {
            let e = e.unwrap();
            for _ in 0..e.multiplicity {
                expanded.push(e.item);
            }
        }
        locals.push(crate::sample::SampleResult {
            items: expanded,
            method: crate::method::Method::Sequential(SequentialMethod::AlgOrdWswr),
            items_processed: weights.len() as u64,
            weight_processed: total,
        });
        totals.push(total);
        offset += weights.len() as u32;
    }
    let mut rng = StreamRng::new(seed * span + partitions.len() as u64);
    let combined = sequential::combine(&locals, &totals, k as usize, &mut rng).unwrap();
    vec![combined.items[0]]
}

/// One row of the verification matrix.
pub struct VerifyRow {
    pub name: String,
    pub outcome: ChiSquareOutcome,
}

fn row<F>(name: &str, trials: u64, law: &ExactLaw, factory: F) -> VerifyRow
where
    F: Fn(u64) -> Outcome + Sync,
{
    VerifyRow {
        name: name.to_string(),
        outcome: oracle::check_law_with_reseed(trials, ALPHA, law, factory),
    }
}

/// Run the full sampler-versus-oracle matrix at the given trial count.
pub fn verification_matrix(trials: u64) -> Vec<VerifyRow> {
    let mut rows = Vec::new();

    // Uniform without-replacement subset law, reservoir and sequential.
    for (n, k) in [(5u32, 2usize), (6, 3)] {
        let law = oracle::uniform_subset_law(n as usize, k).unwrap();
        for method in [ReservoirMethod::AlgR, ReservoirMethod::AlgL] {
            rows.push(row(
                &format!("{method} uniform subsets N={n} K={k}"),
                trials,
                &law,
                |seed| reservoir_trial(method, n, k, seed),
            ));
        }
        for method in [SequentialMethod::AlgD, SequentialMethod::AlgHiddenShuffle] {
            rows.push(row(
                &format!("{method} uniform subsets N={n} K={k}"),
                trials,
                &law,
                |seed| sequential_trial(method, n as u64, k as u64, seed),
            ));
        }
    }

    // Weighted without replacement: successive-draw law.
    let weights = [1.0, 2.0, 3.0];
    let law = oracle::exact_law_without_replacement(&weights, 2).unwrap();
    for method in [ReservoirMethod::AlgARes, ReservoirMethod::AlgAExpJ] {
        rows.push(row(
            &format!("{method} weights [1,2,3] K=2"),
            trials,
            &law,
            |seed| weighted_reservoir_trial(method, &weights, 2, seed),
        ));
    }

    // Uniform with replacement: joint multiset law.
    let law = oracle::exact_law_with_replacement(&[1.0; 4], 3).unwrap();
    rows.push(row(
        "AlgRSWRSKIP multisets N=4 K=3",
        trials,
        &law,
        |seed| reservoir_trial(ReservoirMethod::AlgRswrSkip, 4, 3, seed),
    ));
    let law = oracle::exact_law_with_replacement(&[1.0; 3], 2).unwrap();
    rows.push(row("AlgORDSWR multisets N=3 K=2", trials, &law, |seed| {
        sequential_trial(SequentialMethod::AlgOrdSwr, 3, 2, seed)
    }));

    // Weighted with replacement: iid w/W law.
    let weights = [1.0, 2.0, 3.0, 4.0];
    for k in [1usize, 2] {
        let law = oracle::exact_law_with_replacement(&weights, k).unwrap();
        rows.push(row(
            &format!("AlgWRSWRSKIP weights [1,2,3,4] K={k}"),
            trials,
            &law,
            |seed| weighted_reservoir_trial(ReservoirMethod::AlgWrswrSkip, &weights, k, seed),
        ));
        rows.push(row(
            &format!("AlgORDWSWR weights [1,2,3,4] K={k}"),
            trials,
            &law,
            |seed| ord_wswr_trial(&weights, k as u64, seed),
        ));
    }

    // Merged partitions against the single-stream laws.
    let law = oracle::uniform_subset_law(6, 2).unwrap();
    rows.push(row(
        "merge AlgL [1..3]+[4..6] K=2",
        trials,
        &law,
        |seed| merge_trial(ReservoirMethod::AlgL, 6, 2, 2, seed),
    ));
    let all_weights = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let law = oracle::exact_law_without_replacement(&all_weights, 2).unwrap();
    rows.push(row(
        "merge AlgAExpJ unequal partition weights K=2",
        trials,
        &law,
        |seed| {
            weighted_merge_trial(
                ReservoirMethod::AlgAExpJ,
                &[&all_weights[..3], &all_weights[3..]],
                2,
                seed,
            )
        },
    ));
    let law = oracle::exact_law_with_replacement(&all_weights, 2).unwrap();
    rows.push(row(
        "merge AlgWRSWRSKIP unequal partition weights K=2",
        trials,
        &law,
        |seed| {
            weighted_merge_trial(
                ReservoirMethod::AlgWrswrSkip,
                &[&all_weights[..3], &all_weights[3..]],
                2,
                seed,
            )
        },
    ));

    // Combine: global marginals from partition samples.
    let law = oracle::exact_law_with_replacement(&[1.0, 2.0, 3.0, 4.0], 1).unwrap();
    rows.push(row(
        "combine AlgORDWSWR global marginals",
        trials,
        &law,
        |seed| combine_marginal_trial(&[&[1.0, 2.0], &[3.0, 4.0]], 2, seed),
    ));

    rows
}
