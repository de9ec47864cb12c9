//! Brute-force exact sampling laws and the chi-square machinery used to
//! validate every sampler against them.
//!
//! The enumerations here are deliberately independent of the samplers:
//! the weighted without-replacement law is built by enumerating ordered
//! successive draws with renormalization (the law the priority-key
//! methods are proven equivalent to), and the with-replacement law is the
//! plain product law. Both are capped at tiny instances; that is all a
//! goodness-of-fit test needs.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Result, SampleError};

/// Largest instance the factorial/product enumerations accept.
pub const MAX_ORACLE_ITEMS: usize = 8;

/// An outcome is the canonical (sorted) item-index list of one sample:
/// distinct indices for without-replacement laws, repeats allowed for
/// with-replacement laws.
pub type Outcome = Vec<u32>;

/// Canonicalize a drawn sample into an outcome key.
pub fn outcome(mut items: Vec<u32>) -> Outcome {
    items.sort_unstable();
    items
}

/// Exact finite law: outcome -> probability.
#[derive(Debug, Clone)]
pub struct ExactLaw {
    probs: BTreeMap<Outcome, f64>,
}

impl ExactLaw {
    fn from_map(probs: BTreeMap<Outcome, f64>) -> Self {
        let law = Self { probs };
        debug_assert!(law.total_probability_ok());
        law
    }

    /// Build a law from explicit probabilities.
    ///
    /// Panics unless they are nonnegative and sum to 1 within 1e-12.
    pub fn from_probabilities(probs: BTreeMap<Outcome, f64>) -> Result<Self> {
        let law = Self { probs };
        assert!(
            law.total_probability_ok(),
            "probabilities must be nonnegative and sum to 1"
        );
        Ok(law)
    }

    pub fn probabilities(&self) -> &BTreeMap<Outcome, f64> {
        &self.probs
    }

    pub fn probability(&self, key: &[u32]) -> f64 {
        self.probs.get(key).copied().unwrap_or(0.0)
    }

    pub fn outcomes(&self) -> usize {
        self.probs.len()
    }

    pub fn total_probability_ok(&self) -> bool {
        let sum: f64 = self.probs.values().sum();
        (sum - 1.0).abs() <= 1e-12 && self.probs.values().all(|&p| p >= 0.0)
    }

    /// P(item i appears at least once in the sample), for each item.
    pub fn inclusion_probabilities(&self, n_items: usize) -> Vec<f64> {
        let mut incl = vec![0.0; n_items];
        for (key, &p) in &self.probs {
            let mut seen = vec![false; n_items];
            for &i in key {
                if !seen[i as usize] {
                    seen[i as usize] = true;
                    incl[i as usize] += p;
                }
            }
        }
        incl
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.len() > MAX_ORACLE_ITEMS {
        return Err(SampleError::OracleTooLarge {
            max: MAX_ORACLE_ITEMS,
            got: weights.len(),
        });
    }
    for &w in weights {
        if !(w.is_finite() && w > 0.0) {
            return Err(SampleError::InvalidWeight(w));
        }
    }
    Ok(())
}

/// Uniform K-subset law over `n` items: every subset at 1/C(n, K).
pub fn uniform_subset_law(n: usize, k: usize) -> Result<ExactLaw> {
    if n > MAX_ORACLE_ITEMS {
        return Err(SampleError::OracleTooLarge {
            max: MAX_ORACLE_ITEMS,
            got: n,
        });
    }
    assert!(k <= n, "subset size exceeds population");
    let mut map = BTreeMap::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let key: Outcome = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
        map.insert(key, 0.0);
    }
    let p = 1.0 / map.len() as f64;
    for v in map.values_mut() {
        *v = p;
    }
    Ok(ExactLaw::from_map(map))
}

/// Weighted without-replacement law by enumerating ordered successive
/// draws: draw i with probability w_i over the remaining total, remove
/// it, repeat K times, then marginalize order away.
pub fn exact_law_without_replacement(weights: &[f64], k: usize) -> Result<ExactLaw> {
    check_weights(weights)?;
    assert!(k <= weights.len(), "sample size exceeds population");
    let mut map: BTreeMap<Outcome, f64> = BTreeMap::new();
    let total: f64 = weights.iter().sum();
    let mut chosen: Vec<u32> = Vec::with_capacity(k);

    fn recurse(
        weights: &[f64],
        chosen: &mut Vec<u32>,
        remaining_total: f64,
        prob: f64,
        k_left: usize,
        map: &mut BTreeMap<Outcome, f64>,
    ) {
        if k_left == 0 {
            *map.entry(outcome(chosen.clone())).or_insert(0.0) += prob;
            return;
        }
        for (i, &w) in weights.iter().enumerate() {
            let i = i as u32;
            if chosen.contains(&i) {
                continue;
            }
            chosen.push(i);
            recurse(
                weights,
                chosen,
                remaining_total - w,
                prob * w / remaining_total,
                k_left - 1,
                map,
            );
            chosen.pop();
        }
    }

    recurse(weights, &mut chosen, total, 1.0, k, &mut map);
    Ok(ExactLaw::from_map(map))
}

/// With-replacement law: K iid draws with P(i) = w_i / W, marginalized
/// from ordered tuples to multisets.
pub fn exact_law_with_replacement(weights: &[f64], k: usize) -> Result<ExactLaw> {
    check_weights(weights)?;
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut map: BTreeMap<Outcome, f64> = BTreeMap::new();
    // Odometer over the n^k ordered tuples.
    let mut idx = vec![0usize; k];
    loop {
        let prob: f64 = idx.iter().map(|&i| weights[i] / total).product();
        let key = outcome(idx.iter().map(|&i| i as u32).collect());
        *map.entry(key).or_insert(0.0) += prob;
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(ExactLaw::from_map(map));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Empirical outcome counts over seeded independent trials.
///
/// Trial t runs the factory with seed `seed_base + t`; trials are
/// independent, so they run in parallel and the counts merge
/// commutatively.
pub fn empirical_law<F>(trials: u64, seed_base: u64, factory: F) -> BTreeMap<Outcome, u64>
where
    F: Fn(u64) -> Outcome + Sync,
{
    use rayon::prelude::*;
    (0..trials)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<Outcome, u64>, t| {
            *acc.entry(factory(seed_base + t)).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}

/// Result of a Pearson goodness-of-fit test.
#[derive(Debug, Clone)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub degrees_of_freedom: usize,
    pub pass: bool,
}

/// Upper chi-square quantile: the critical value at significance `alpha`.
pub fn chi_square_critical(degrees_of_freedom: usize, alpha: f64) -> f64 {
    ChiSquared::new(degrees_of_freedom as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - alpha)
}

/// Pearson chi-square test of observed counts against an exact law.
///
/// Outcomes whose expected count falls below 5 are pooled into one tail
/// bucket before computing the statistic. An observed outcome with zero
/// probability under the law fails outright.
pub fn chi_square_test(
    observed: &BTreeMap<Outcome, u64>,
    law: &ExactLaw,
    alpha: f64,
) -> ChiSquareOutcome {
    let trials: u64 = observed.values().sum();
    let trials_f = trials as f64;

    for key in observed.keys() {
        if law.probability(key) == 0.0 {
            return ChiSquareOutcome {
                statistic: f64::INFINITY,
                critical: 0.0,
                degrees_of_freedom: 0,
                pass: false,
            };
        }
    }

    let mut buckets: Vec<(f64, f64)> = Vec::new(); // (expected, observed)
    let mut tail = (0.0f64, 0.0f64);
    for (key, &p) in law.probabilities() {
        let expected = p * trials_f;
        let obs = observed.get(key).copied().unwrap_or(0) as f64;
        if expected < 5.0 {
            tail.0 += expected;
            tail.1 += obs;
        } else {
            buckets.push((expected, obs));
        }
    }
    if tail.0 > 0.0 {
        buckets.push(tail);
    }

    if buckets.len() < 2 {
        // Degenerate single-outcome law: trivially consistent.
        return ChiSquareOutcome {
            statistic: 0.0,
            critical: 0.0,
            degrees_of_freedom: 0,
            pass: true,
        };
    }

    let statistic: f64 = buckets
        .iter()
        .map(|&(e, o)| (o - e) * (o - e) / e)
        .sum();
    let df = buckets.len() - 1;
    let critical = chi_square_critical(df, alpha);
    ChiSquareOutcome {
        statistic,
        critical,
        degrees_of_freedom: df,
        pass: statistic < critical,
    }
}

/// Goodness-of-fit with the suite's flake policy: test at `alpha`, and on
/// failure rerun once on a fresh disjoint seed block before declaring a
/// true failure.
pub fn check_law_with_reseed<F>(
    trials: u64,
    alpha: f64,
    law: &ExactLaw,
    factory: F,
) -> ChiSquareOutcome
where
    F: Fn(u64) -> Outcome + Sync,
{
    let first = chi_square_test(&empirical_law(trials, 0, &factory), law, alpha);
    if first.pass {
        return first;
    }
    chi_square_test(&empirical_law(trials, trials, &factory), law, alpha)
}
