//! Sequential samplers: O(1)-state iterator adapters for streams whose
//! total element count N (or total weight W) is known up front.
//!
//! Instead of maintaining a reservoir, these compute how far to skip
//! ahead before the next selection and emit selected elements in stream
//! order as the iterator is consumed. Methods:
//!
//! * [`SequentialMethod::AlgD`] — Vitter (1987) acceptance-rejection
//!   skips, uniform without replacement.
//! * [`SequentialMethod::AlgHiddenShuffle`] — same subset law realized by
//!   splitting the sample into items from the last-K window ("high") and
//!   the rest ("low"), then skip-sampling each region in order.
//! * [`SequentialMethod::AlgOrdSwr`] — uniform with replacement via
//!   incrementally generated sorted uniform thresholds (Bentley & Saxe
//!   1980).
//! * [`SequentialMethod::AlgOrdWswr`] — weighted with replacement via the
//!   same thresholds scaled to total weight.
//!
//! There is no weighted sequential method without replacement: knowing
//! only the remaining total weight leaves per-element inclusion
//! probabilities undetermined, so such requests fail at construction.
//!
//! A with-replacement selection may cover several consecutive draws; the
//! emission then carries a multiplicity instead of repeating the item,
//! since a single-pass consumer cannot rewind.

use crate::error::{Result, SampleError};
use crate::method::SequentialMethod;
use crate::reservoir::hypergeometric;
use crate::rng::StreamRng;
use crate::sample::{Emission, SampleResult};

/// Declared stream total: element count or cumulative weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StreamTotal {
    Count(u64),
    Weight(f64),
}

/// Relative slack allowed between the declared total weight and the
/// accumulated stream weight before exhaustion counts as truncation;
/// absorbs floating-point drift between two summations of the same data.
const WEIGHT_DRIFT_TOLERANCE: f64 = 1e-9;

/// One skip instruction: pass over `skip` elements, then select the next
/// element `multiplicity` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub skip: u64,
    pub multiplicity: u64,
}

/// Draw the skip before the next selection of a uniform k-subset of the
/// next n elements: P(S >= s) = prod_{i<s} (1 - k/(n-i)), inverted by
/// scanning the survival product. One variate, O(S) arithmetic.
pub fn skip_without_replacement(k: u64, n: u64, rng: &mut StreamRng) -> u64 {
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    if k == n {
        return 0;
    }
    let u = rng.uniform01();
    let mut s = 0u64;
    let mut top = (n - k) as f64;
    let mut rest = n as f64;
    let mut survival = top / rest;
    while survival > u && s < n - k {
        s += 1;
        top -= 1.0;
        rest -= 1.0;
        survival *= top / rest;
    }
    s
}

/// Vitter's Algorithm D acceptance-rejection skip; O(1) expected
/// variates. `vprime` carries U^(1/k) between selections the way the
/// published algorithm does: a quick acceptance leaves behind a value
/// already distributed as U^(1/(k-1)).
///
/// Callers guarantee k >= 2 and alpha-condition 13 k < n.
fn vitter_d_skip(k: u64, n: u64, vprime: &mut Option<f64>, rng: &mut StreamRng) -> u64 {
    let nf = n as f64;
    let kf = k as f64;
    let kinv = 1.0 / kf;
    let km1inv = 1.0 / (kf - 1.0);
    let qu1 = n - k + 1;
    let qu1f = qu1 as f64;
    let mut v = vprime
        .take()
        .unwrap_or_else(|| (rng.uniform01().ln() * kinv).exp());
    loop {
        // Candidate skip from the continuous envelope, resampled until it
        // lands inside the support [0, n - k].
        let (x, s) = loop {
            let x = nf * (1.0 - v);
            if x < qu1f {
                break (x, x.floor() as u64);
            }
            v = (rng.uniform01().ln() * kinv).exp();
        };
        let u = rng.uniform01();
        let y1 = ((u * nf / qu1f).ln() * km1inv).exp();
        let vnew = y1 * (1.0 - x / nf) * (qu1f / (qu1f - s as f64));
        if vnew <= 1.0 {
            // Quick squeeze acceptance.
            *vprime = Some(vnew);
            return s;
        }
        // Exact test: compare against the true pmf via the product
        // y2 = prod_{i<m} (n-1-i)/(bottom-i) with m = min(s, k-1) factors.
        let mut y2 = 1.0;
        let mut top = nf - 1.0;
        let (mut bottom, limit) = if k - 1 > s {
            (nf - kf, n - s)
        } else {
            (nf - s as f64 - 1.0, qu1)
        };
        for _ in 0..(n - limit) {
            y2 *= top / bottom;
            top -= 1.0;
            bottom -= 1.0;
        }
        if nf / (nf - x) >= y1 * (y2.ln() * km1inv).exp() {
            *vprime = Some((rng.uniform01().ln() * km1inv).exp());
            return s;
        }
        v = (rng.uniform01().ln() * kinv).exp();
    }
}

/// Ascending order statistics of K iid uniforms on (0, 1), generated one
/// at a time with O(1) state: the descending running-maximum construction
/// u <- u * U^(1/remaining) applied to the reflected sample.
#[derive(Debug, Clone)]
pub struct SortedUniforms {
    remaining: u64,
    running_max: f64,
}

impl SortedUniforms {
    pub fn new(k: u64) -> Self {
        Self {
            remaining: k,
            running_max: 1.0,
        }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Next threshold, nondecreasing across calls; None once K were drawn.
    pub fn next(&mut self, rng: &mut StreamRng) -> Option<f64> {
        if self.remaining == 0 {
            return None;
        }
        self.running_max *= (rng.uniform01().ln() / self.remaining as f64).exp();
        self.remaining -= 1;
        Some(1.0 - self.running_max)
    }
}

#[derive(Debug, Clone)]
enum Core {
    D {
        n_remaining: u64,
        vprime: Option<f64>,
    },
    HiddenShuffle {
        low_left: u64,
        low_window: u64,
        high_left: u64,
        high_window: u64,
        /// Unselected low-region positions still to pass over before the
        /// first high-region emission.
        extra: u64,
    },
    OrdSwr {
        population: u64,
        thresholds: SortedUniforms,
        pending: Option<u64>,
    },
    OrdWswr {
        total_weight: f64,
        thresholds: SortedUniforms,
        pending: Option<f64>,
        consumed_weight: f64,
    },
}

/// Sampler state, independent of any concrete stream. Size is a small
/// constant regardless of K and N: thresholds and skips are generated
/// incrementally, never stored as lists.
///
/// Drive it with [`next_step`](Self::next_step) (unweighted methods) or
/// [`offer_weight`](Self::offer_weight) (weighted), or wrap a stream with
/// [`SequentialSampler`] / [`WeightedSequentialSampler`]. Exhausted state
/// is terminal.
#[derive(Debug, Clone)]
pub struct SequentialState {
    method: SequentialMethod,
    sample_size: u64,
    emitted: u64,
    consumed: u64,
    rng: StreamRng,
    core: Core,
}

impl SequentialState {
    /// Validate a request and build the sampler state.
    ///
    /// Without-replacement methods need `Count(n)` with K <= n; AlgORDSWR
    /// needs `Count`, AlgORDWSWR needs `Weight`. Asking a
    /// without-replacement method to work from a weight total is the
    /// impossible weighted-sequential-without-replacement request and is
    /// rejected as such.
    pub fn new(
        method: SequentialMethod,
        k: u64,
        total: StreamTotal,
        mut rng: StreamRng,
    ) -> Result<Self> {
        if k == 0 {
            return Err(SampleError::InvalidCapacity);
        }
        match total {
            StreamTotal::Count(0) => return Err(SampleError::InvalidTotal),
            StreamTotal::Weight(w) if !(w.is_finite() && w > 0.0) => {
                return Err(SampleError::InvalidTotal)
            }
            _ => {}
        }
        let core = match (method, total) {
            (SequentialMethod::AlgD | SequentialMethod::AlgHiddenShuffle, StreamTotal::Weight(_)) => {
                return Err(SampleError::WeightedSequentialWithoutReplacement)
            }
            (SequentialMethod::AlgD, StreamTotal::Count(n)) => {
                if k > n {
                    return Err(SampleError::SampleLargerThanPopulation { k, n });
                }
                Core::D {
                    n_remaining: n,
                    vprime: None,
                }
            }
            (SequentialMethod::AlgHiddenShuffle, StreamTotal::Count(n)) => {
                if k > n {
                    return Err(SampleError::SampleLargerThanPopulation { k, n });
                }
                // Split the sample between the last-K window and the rest;
                // the split count is hypergeometric, and each side is then
                // a uniform subset of its window, emitted in order.
                let high = hypergeometric(n, k, k, &mut rng);
                let low = k - high;
                let low_window = n - k;
                Core::HiddenShuffle {
                    low_left: low,
                    low_window,
                    high_left: high,
                    high_window: k,
                    extra: if low == 0 { low_window } else { 0 },
                }
            }
            (SequentialMethod::AlgOrdSwr, StreamTotal::Count(n)) => Core::OrdSwr {
                population: n,
                thresholds: SortedUniforms::new(k),
                pending: None,
            },
            (SequentialMethod::AlgOrdSwr, StreamTotal::Weight(_)) => {
                return Err(SampleError::UnexpectedWeight(method.name()))
            }
            (SequentialMethod::AlgOrdWswr, StreamTotal::Weight(w)) => Core::OrdWswr {
                total_weight: w,
                thresholds: SortedUniforms::new(k),
                pending: None,
                consumed_weight: 0.0,
            },
            (SequentialMethod::AlgOrdWswr, StreamTotal::Count(_)) => {
                return Err(SampleError::MissingWeight(method.name()))
            }
        };
        Ok(Self {
            method,
            sample_size: k,
            emitted: 0,
            consumed: 0,
            rng,
            core,
        })
    }

    pub fn method(&self) -> SequentialMethod {
        self.method
    }

    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// Total multiplicity still to emit.
    pub fn remaining(&self) -> u64 {
        self.sample_size - self.emitted
    }

    /// Stream elements the state expects to have been consumed so far
    /// (selections plus skipped elements). Maintained by the step API.
    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining() == 0
    }

    /// Next skip instruction for the position-based methods (AlgD,
    /// AlgHiddenShuffle, AlgORDSWR). None once the sample is complete.
    ///
    /// Panics if called on AlgORDWSWR, which is driven by weights.
    pub fn next_step(&mut self) -> Option<Step> {
        if self.is_exhausted() {
            return None;
        }
        let step = match &mut self.core {
            Core::D {
                n_remaining,
                vprime,
            } => {
                let k = self.sample_size - self.emitted;
                let n = *n_remaining;
                debug_assert!(k >= 1 && k <= n);
                let skip = if 13 * k >= n {
                    // Dense regime: the plain survival-product scan is
                    // cheaper than rejection.
                    *vprime = None;
                    skip_without_replacement(k, n, &mut self.rng)
                } else if k == 1 {
                    let v = vprime
                        .take()
                        .unwrap_or_else(|| self.rng.uniform01());
                    ((n as f64 * v) as u64).min(n - 1)
                } else {
                    vitter_d_skip(k, n, vprime, &mut self.rng)
                };
                *n_remaining = n - skip - 1;
                Step {
                    skip,
                    multiplicity: 1,
                }
            }
            Core::HiddenShuffle {
                low_left,
                low_window,
                high_left,
                high_window,
                extra,
            } => {
                if *low_left > 0 {
                    let s = skip_without_replacement(*low_left, *low_window, &mut self.rng);
                    *low_window -= s + 1;
                    *low_left -= 1;
                    if *low_left == 0 {
                        *extra = *low_window;
                        *low_window = 0;
                    }
                    Step {
                        skip: s,
                        multiplicity: 1,
                    }
                } else {
                    let s = skip_without_replacement(*high_left, *high_window, &mut self.rng);
                    *high_window -= s + 1;
                    *high_left -= 1;
                    let skip = s + *extra;
                    *extra = 0;
                    Step {
                        skip,
                        multiplicity: 1,
                    }
                }
            }
            Core::OrdSwr {
                population,
                thresholds,
                pending,
            } => {
                let n = *population;
                let draw = |th: &mut SortedUniforms, rng: &mut StreamRng| {
                    th.next(rng).map(|v| ((v * n as f64) as u64).min(n - 1))
                };
                let position = match pending.take() {
                    Some(p) => p,
                    None => draw(thresholds, &mut self.rng).expect("remaining() > 0"),
                };
                let mut multiplicity = 1;
                while let Some(p) = draw(thresholds, &mut self.rng) {
                    if p == position {
                        multiplicity += 1;
                    } else {
                        *pending = Some(p);
                        break;
                    }
                }
                Step {
                    skip: position - self.consumed,
                    multiplicity,
                }
            }
            Core::OrdWswr { .. } => panic!("AlgORDWSWR is weight-driven; use offer_weight"),
        };
        self.consumed += step.skip + 1;
        self.emitted += step.multiplicity;
        debug_assert!(self.emitted <= self.sample_size);
        Some(step)
    }

    /// Advance the weighted sampler (AlgORDWSWR) past one stream element
    /// of the given weight; returns how many of the K draws select it.
    ///
    /// Panics if called on a position-based method.
    pub fn offer_weight(&mut self, weight: f64) -> Result<u64> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(SampleError::InvalidWeight(weight));
        }
        let Core::OrdWswr {
            total_weight,
            thresholds,
            pending,
            consumed_weight,
        } = &mut self.core
        else {
            panic!("offer_weight only drives AlgORDWSWR");
        };
        let total = *total_weight;
        *consumed_weight += weight;
        let mut multiplicity = 0;
        loop {
            let t = match *pending {
                Some(t) => t,
                None => match thresholds.next(&mut self.rng) {
                    Some(v) => v * total,
                    None => break,
                },
            };
            if t <= *consumed_weight {
                multiplicity += 1;
                *pending = None;
            } else {
                *pending = Some(t);
                break;
            }
        }
        self.consumed += 1;
        self.emitted += multiplicity;
        Ok(multiplicity)
    }

    /// Stream weight consumed so far (AlgORDWSWR only).
    pub fn consumed_weight(&self) -> f64 {
        match &self.core {
            Core::OrdWswr {
                consumed_weight, ..
            } => *consumed_weight,
            _ => 0.0,
        }
    }

    fn declared_weight(&self) -> f64 {
        match &self.core {
            Core::OrdWswr { total_weight, .. } => *total_weight,
            _ => 0.0,
        }
    }
}

/// Iterator adapter for the position-based sequential methods.
///
/// Yields `Ok(Emission)` per selected element, in stream order. If the
/// stream ends before the declared population was available, yields one
/// `Err(TruncatedCount)` and fuses.
#[derive(Debug)]
pub struct SequentialSampler<I> {
    state: SequentialState,
    stream: I,
    declared: u64,
    failed: bool,
}

impl<I: Iterator> SequentialSampler<I> {
    /// Sample `k` of the `n`-element `stream` with the given method
    /// (AlgD, AlgHiddenShuffle or AlgORDSWR).
    pub fn new(
        method: SequentialMethod,
        k: u64,
        n: u64,
        stream: I,
        rng: StreamRng,
    ) -> Result<Self> {
        let state = SequentialState::new(method, k, StreamTotal::Count(n), rng)?;
        Ok(Self {
            state,
            stream,
            declared: n,
            failed: false,
        })
    }

    pub fn state(&self) -> &SequentialState {
        &self.state
    }
}

impl<I: Iterator> Iterator for SequentialSampler<I> {
    type Item = Result<Emission<I::Item>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let before = self.state.consumed();
        let step = self.state.next_step()?;
        match self.stream.nth(step.skip as usize) {
            Some(item) => Some(Ok(Emission {
                item,
                position: before + step.skip,
                multiplicity: step.multiplicity,
            })),
            None => {
                self.failed = true;
                Some(Err(SampleError::TruncatedCount {
                    declared: self.declared,
                    missing: self.declared - before,
                }))
            }
        }
    }
}

/// Iterator adapter for weighted sequential sampling with replacement
/// (AlgORDWSWR) over a stream of `(item, weight)` pairs.
#[derive(Debug)]
pub struct WeightedSequentialSampler<I, T> {
    state: SequentialState,
    stream: I,
    position: u64,
    last: Option<T>,
    failed: bool,
}

impl<I, T> WeightedSequentialSampler<I, T>
where
    I: Iterator<Item = (T, f64)>,
{
    /// Sample `k` draws from a stream whose weights sum to `total_weight`.
    pub fn new(k: u64, total_weight: f64, stream: I, rng: StreamRng) -> Result<Self> {
        let state = SequentialState::new(
            SequentialMethod::AlgOrdWswr,
            k,
            StreamTotal::Weight(total_weight),
            rng,
        )?;
        Ok(Self {
            state,
            stream,
            position: 0,
            last: None,
            failed: false,
        })
    }

    pub fn state(&self) -> &SequentialState {
        &self.state
    }
}

impl<I, T> Iterator for WeightedSequentialSampler<I, T>
where
    I: Iterator<Item = (T, f64)>,
    T: Clone,
{
    type Item = Result<Emission<T>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            if self.state.is_exhausted() {
                return None;
            }
            match self.stream.next() {
                Some((item, weight)) => {
                    let position = self.position;
                    self.position += 1;
                    self.last = Some(item.clone());
                    match self.state.offer_weight(weight) {
                        Ok(0) => continue,
                        Ok(multiplicity) => {
                            return Some(Ok(Emission {
                                item,
                                position,
                                multiplicity,
                            }))
                        }
                        Err(e) => {
                            self.failed = true;
                            return Some(Err(e));
                        }
                    }
                }
                None => {
                    let declared = self.state.declared_weight();
                    let missing = declared - self.state.consumed_weight();
                    if missing <= declared * WEIGHT_DRIFT_TOLERANCE {
                        // Float drift between the caller's total and our
                        // accumulation: the leftover thresholds all sit
                        // within the slack, so they belong to the final
                        // element.
                        if let Some(item) = self.last.clone() {
                            let multiplicity = self.state.remaining();
                            self.state.emitted = self.state.sample_size;
                            if multiplicity > 0 {
                                return Some(Ok(Emission {
                                    item,
                                    position: self.position - 1,
                                    multiplicity,
                                }));
                            }
                            return None;
                        }
                    }
                    self.failed = true;
                    return Some(Err(SampleError::TruncatedWeight { declared, missing }));
                }
            }
        }
    }
}

/// Combine with-replacement partition samples into one global sample.
///
/// Each local sample must hold exactly `k` draws from its partition;
/// `partition_weights` are the true partition totals (element counts for
/// unweighted streams). Every output draw picks a partition with
/// probability proportional to its weight and is assigned a distinct
/// element of that partition's local sample, which re-weights the local
/// iid draws into globally correct inclusion probabilities.
pub fn combine<T: Clone>(
    samples: &[SampleResult<T>],
    partition_weights: &[f64],
    k: usize,
    rng: &mut StreamRng,
) -> Result<SampleResult<T>> {
    if samples.is_empty() || samples.len() != partition_weights.len() {
        return Err(SampleError::IncompatibleCombine(format!(
            "{} samples vs {} partition weights",
            samples.len(),
            partition_weights.len()
        )));
    }
    if k == 0 {
        return Err(SampleError::InvalidCapacity);
    }
    for &w in partition_weights {
        if !(w.is_finite() && w > 0.0) {
            return Err(SampleError::InvalidWeight(w));
        }
    }
    for (i, s) in samples.iter().enumerate() {
        if s.items.len() != k {
            return Err(SampleError::IncompatibleCombine(format!(
                "local sample {} has {} draws, expected k = {}",
                i,
                s.items.len(),
                k
            )));
        }
    }

    let total: f64 = partition_weights.iter().sum();
    let picks: Vec<usize> = (0..k)
        .map(|_| {
            let mut u = rng.uniform01() * total;
            for (j, &w) in partition_weights.iter().enumerate() {
                if u < w {
                    return j;
                }
                u -= w;
            }
            partition_weights.len() - 1
        })
        .collect();

    let mut counts = vec![0usize; samples.len()];
    for &j in &picks {
        counts[j] += 1;
    }
    let mut pools: Vec<std::vec::IntoIter<usize>> = counts
        .iter()
        .map(|&c| crate::reservoir::distinct_indices(k, c, rng).into_iter())
        .collect();
    let items: Vec<T> = picks
        .into_iter()
        .map(|j| {
            let idx = pools[j].next().expect("pool sized to its pick count");
            samples[j].items[idx].clone()
        })
        .collect();

    Ok(SampleResult {
        items,
        method: samples[0].method,
        items_processed: samples.iter().map(|s| s.items_processed).sum(),
        weight_processed: total,
    })
}
