//! Fixed-size reservoir samplers updated per stream element.
//!
//! Six methods behind one type, split by weighting and replacement:
//!
//! | method       | weighted | replacement | update cost                |
//! |--------------|----------|-------------|----------------------------|
//! | AlgR         | no       | without     | 1 variate per item         |
//! | AlgL         | no       | without     | skip counting, o(N) variates |
//! | AlgRSWRSKIP  | no       | with        | skip counting              |
//! | AlgARes      | yes      | without     | priority key per item      |
//! | AlgAExpJ     | yes      | without     | exponential weight jumps   |
//! | AlgWRSWRSKIP | yes      | with        | weight-threshold skips     |
//!
//! References: Vitter (1985) for AlgR, Li (1994) for AlgL, Park et al.
//! (2004) for skip-based with-replacement sampling, Efraimidis & Spirakis
//! (2006) for A-Res and A-ExpJ.
//!
//! A sampler is single-threaded; run one per partition and [`merge`]
//! afterwards for parallel workflows. Merging returns a fresh sampler
//! whose sample is distributed as if a single sampler had processed the
//! concatenated partitions, and the merged sampler remains valid for
//! further `fit` calls.
//!
//! [`merge`]: ReservoirSampler::merge

use crate::error::{Result, SampleError};
use crate::method::{Method, ReservoirMethod};
use crate::rng::StreamRng;
use crate::sample::SampleResult;

// Largest f64 below 1.0; priority keys are clamped into
// [MIN_POSITIVE, KEY_MAX] so logs of keys stay finite and nonzero.
const KEY_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

fn check_weight(weight: f64) -> Result<()> {
    if weight.is_finite() && weight > 0.0 {
        Ok(())
    } else {
        Err(SampleError::InvalidWeight(weight))
    }
}

/// Priority key U^(1/w), computed in log space and clamped inside (0, 1).
fn priority_key(rng: &mut StreamRng, weight: f64) -> f64 {
    (rng.uniform01().ln() / weight)
        .exp()
        .clamp(f64::MIN_POSITIVE, KEY_MAX)
}

/// Algorithm L skip: floor(ln U / ln(1 - w)), saturating.
fn skip_from_threshold(rng: &mut StreamRng, w: f64) -> u64 {
    (rng.uniform01().ln() / (1.0 - w).ln()).floor() as u64
}

/// Algorithm L's running quantity at `n` items seen: the probability
/// that the next item enters the reservoir. With iid uniform priority
/// keys this is 1 minus the K-th largest of n keys, i.e. Beta(K, n-K+1);
/// at n = K it reduces to U^(1/K), matching the fill-time init. The K-th
/// largest is generated by the descending running-maximum construction.
/// Used to re-seed a merged sampler so it keeps accepting fits.
fn algl_threshold(rng: &mut StreamRng, n: u64, k: usize) -> f64 {
    let mut m = 1.0f64;
    for i in 0..k as u64 {
        m *= (rng.uniform01().ln() / (n - i) as f64).exp();
    }
    (1.0 - m).clamp(f64::MIN_POSITIVE, KEY_MAX)
}

/// Exact hypergeometric draw by urn simulation: `draws` sequential
/// without-replacement Bernoulli steps in integer arithmetic.
pub(crate) fn hypergeometric(total: u64, successes: u64, draws: u64, rng: &mut StreamRng) -> u64 {
    debug_assert!(successes <= total && draws <= total);
    let mut successes_left = successes;
    let mut remaining = total;
    let mut hits = 0;
    for _ in 0..draws {
        if rng.below(remaining) < successes_left {
            hits += 1;
            successes_left -= 1;
        }
        remaining -= 1;
    }
    hits
}

/// First `count` positions of a uniform random permutation of `0..pool`.
pub(crate) fn distinct_indices(pool: usize, count: usize, rng: &mut StreamRng) -> Vec<usize> {
    debug_assert!(count <= pool);
    let mut idx: Vec<usize> = (0..pool).collect();
    for i in 0..count {
        let j = i + rng.index(pool - i);
        idx.swap(i, j);
    }
    idx.truncate(count);
    idx
}

fn subsample<T: Clone>(buf: &[T], count: usize, rng: &mut StreamRng) -> Vec<T> {
    distinct_indices(buf.len(), count, rng)
        .into_iter()
        .map(|i| buf[i].clone())
        .collect()
}

/// Write `item` into each slot independently with probability `p`,
/// conditioned on at least one write happening.
///
/// The first written slot index has the truncated-geometric law
/// P(F <= f) = (1 - q^f)/(1 - q^K), drawn by inversion; the remaining
/// slots continue as unconditioned Bernoulli(p) via geometric gaps. This
/// is the conditional law itself, so it stays O(1 + Kp) expected work
/// even when P(at least one write) is tiny, where resampling a
/// Binomial(K, p) until it is nonzero would stall.
fn conditioned_slot_update<T: Clone>(slots: &mut [T], p: f64, item: &T, rng: &mut StreamRng) {
    let k = slots.len() as u64;
    let q = 1.0 - p;
    let ln_q = q.ln(); // strictly negative: p is in (0, 1)
    let q_k = (k as f64 * ln_q).exp();
    let u = rng.uniform01();
    let first = ((1.0 - u * (1.0 - q_k)).ln() / ln_q).ceil() as u64;
    let first = first.clamp(1, k);
    slots[(first - 1) as usize] = item.clone();
    let mut pos = first;
    loop {
        let gap = (rng.uniform01().ln() / ln_q).floor() as u64; // saturating cast
        pos = pos.saturating_add(1).saturating_add(gap);
        if pos > k {
            break;
        }
        slots[(pos - 1) as usize] = item.clone();
    }
}

#[derive(Debug, Clone)]
struct SkipState {
    /// Algorithm L's running threshold w, in (0, 1).
    threshold: f64,
    /// Items still to pass before the next replacement.
    remaining: u64,
}

#[derive(Debug, Clone)]
enum Inner<T> {
    R {
        buf: Vec<T>,
    },
    L {
        buf: Vec<T>,
        skip: Option<SkipState>,
    },
    RswrSkip {
        slots: Vec<T>,
        remaining: u64,
    },
    ARes {
        heap: KeyedHeap<T>,
    },
    AExpJ {
        heap: KeyedHeap<T>,
        /// Weight left to skip before the next replacement; set once full.
        jump_remaining: f64,
    },
    WrswrSkip {
        slots: Vec<T>,
        /// Cumulative-weight threshold that triggers the next update.
        update_at: f64,
    },
}

/// Min-heap of (priority key, item) pairs; the root carries the smallest
/// key, which is the insertion threshold for the weighted
/// without-replacement methods.
#[derive(Debug, Clone)]
struct KeyedHeap<T> {
    entries: Vec<(f64, T)>,
}

impl<T> KeyedHeap<T> {
    fn with_capacity(k: usize) -> Self {
        Self {
            entries: Vec::with_capacity(k),
        }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    fn min_key(&self) -> f64 {
        self.entries[0].0
    }

    fn push(&mut self, key: f64, item: T) {
        self.entries.push((key, item));
        let mut i = self.entries.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            if self.entries[parent].0 <= self.entries[i].0 {
                break;
            }
            self.entries.swap(parent, i);
            i = parent;
        }
    }

    fn replace_min(&mut self, key: f64, item: T) {
        self.entries[0] = (key, item);
        let n = self.entries.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut smallest = i;
            if l < n && self.entries[l].0 < self.entries[smallest].0 {
                smallest = l;
            }
            if r < n && self.entries[r].0 < self.entries[smallest].0 {
                smallest = r;
            }
            if smallest == i {
                break;
            }
            self.entries.swap(i, smallest);
            i = smallest;
        }
    }

    fn rebuild(entries: Vec<(f64, T)>) -> Self {
        let mut heap = Self {
            entries: Vec::with_capacity(entries.len()),
        };
        for (key, item) in entries {
            heap.push(key, item);
        }
        heap
    }
}

/// A fixed-capacity sampler over a stream of unknown length.
///
/// `fit` processes one element (`fit_weighted` for the weighted methods),
/// `value` snapshots the current sample, and `merge` combines samplers
/// run over disjoint partitions. At any point the sample is valid for the
/// stream seen so far. Without-replacement samples are unordered.
#[derive(Debug, Clone)]
pub struct ReservoirSampler<T> {
    method: ReservoirMethod,
    capacity: usize,
    items_seen: u64,
    weight_seen: f64,
    rng: StreamRng,
    inner: Inner<T>,
}

impl<T: Clone> ReservoirSampler<T> {
    /// Create an empty sampler with capacity `k`.
    pub fn new(method: ReservoirMethod, k: usize, rng: StreamRng) -> Result<Self> {
        if k == 0 {
            return Err(SampleError::InvalidCapacity);
        }
        let inner = match method {
            ReservoirMethod::AlgR => Inner::R {
                buf: Vec::with_capacity(k),
            },
            ReservoirMethod::AlgL => Inner::L {
                buf: Vec::with_capacity(k),
                skip: None,
            },
            ReservoirMethod::AlgRswrSkip => Inner::RswrSkip {
                slots: Vec::with_capacity(k),
                remaining: 0,
            },
            ReservoirMethod::AlgARes => Inner::ARes {
                heap: KeyedHeap::with_capacity(k),
            },
            ReservoirMethod::AlgAExpJ => Inner::AExpJ {
                heap: KeyedHeap::with_capacity(k),
                jump_remaining: 0.0,
            },
            ReservoirMethod::AlgWrswrSkip => Inner::WrswrSkip {
                slots: Vec::with_capacity(k),
                update_at: 0.0,
            },
        };
        Ok(Self {
            method,
            capacity: k,
            items_seen: 0,
            weight_seen: 0.0,
            rng,
            inner,
        })
    }

    pub fn method(&self) -> ReservoirMethod {
        self.method
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn items_seen(&self) -> u64 {
        self.items_seen
    }

    pub fn weight_seen(&self) -> f64 {
        self.weight_seen
    }

    /// Current sample length: min(n, K) without replacement, K with.
    pub fn len(&self) -> usize {
        match &self.inner {
            Inner::R { buf } | Inner::L { buf, .. } => buf.len(),
            Inner::RswrSkip { slots, .. } | Inner::WrswrSkip { slots, .. } => slots.len(),
            Inner::ARes { heap } | Inner::AExpJ { heap, .. } => heap.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Allocated buffer slots; stays at K no matter how long the stream.
    pub fn buffer_capacity(&self) -> usize {
        match &self.inner {
            Inner::R { buf } | Inner::L { buf, .. } => buf.capacity(),
            Inner::RswrSkip { slots, .. } | Inner::WrswrSkip { slots, .. } => slots.capacity(),
            Inner::ARes { heap } | Inner::AExpJ { heap, .. } => heap.entries.capacity(),
        }
    }

    /// Variates drawn by this sampler's generator so far.
    pub fn variates(&self) -> u64 {
        self.rng.variates()
    }

    /// Process one element of an unweighted stream.
    pub fn fit(&mut self, item: T) -> Result<()> {
        if self.method.weighted() {
            return Err(SampleError::MissingWeight(self.method.name()));
        }
        self.items_seen += 1;
        let n = self.items_seen;
        let k = self.capacity;
        match &mut self.inner {
            Inner::R { buf } => {
                if buf.len() < k {
                    buf.push(item);
                } else {
                    // One draw decides both acceptance (j < K, i.e. with
                    // probability K/n) and the replaced slot.
                    let j = self.rng.below(n);
                    if (j as usize) < k {
                        buf[j as usize] = item;
                    }
                }
            }
            Inner::L { buf, skip } => {
                if buf.len() < k {
                    buf.push(item);
                    if buf.len() == k {
                        let threshold = (self.rng.uniform01().ln() / k as f64).exp();
                        let remaining = skip_from_threshold(&mut self.rng, threshold);
                        *skip = Some(SkipState {
                            threshold,
                            remaining,
                        });
                    }
                } else {
                    let state = skip.as_mut().expect("skip state set when full");
                    if state.remaining > 0 {
                        state.remaining -= 1;
                    } else {
                        let slot = self.rng.index(k);
                        buf[slot] = item;
                        state.threshold *= (self.rng.uniform01().ln() / k as f64).exp();
                        state.remaining = skip_from_threshold(&mut self.rng, state.threshold);
                    }
                }
            }
            Inner::RswrSkip { slots, remaining } => {
                if slots.is_empty() {
                    *slots = vec![item; k];
                    *remaining = uniform_swr_skip(&mut self.rng, n, k);
                } else if *remaining > 0 {
                    *remaining -= 1;
                } else {
                    conditioned_slot_update(slots, 1.0 / n as f64, &item, &mut self.rng);
                    *remaining = uniform_swr_skip(&mut self.rng, n, k);
                }
            }
            _ => unreachable!("weighted methods rejected above"),
        }
        Ok(())
    }

    /// Process one element of a weighted stream.
    pub fn fit_weighted(&mut self, item: T, weight: f64) -> Result<()> {
        if !self.method.weighted() {
            return Err(SampleError::UnexpectedWeight(self.method.name()));
        }
        check_weight(weight)?;
        self.items_seen += 1;
        self.weight_seen += weight;
        let k = self.capacity;
        match &mut self.inner {
            Inner::ARes { heap } => {
                let key = priority_key(&mut self.rng, weight);
                if heap.len() < k {
                    heap.push(key, item);
                } else if key > heap.min_key() {
                    heap.replace_min(key, item);
                }
            }
            Inner::AExpJ {
                heap,
                jump_remaining,
            } => {
                if heap.len() < k {
                    let key = priority_key(&mut self.rng, weight);
                    heap.push(key, item);
                    if heap.len() == k {
                        *jump_remaining = self.rng.uniform01().ln() / heap.min_key().ln();
                    }
                } else {
                    *jump_remaining -= weight;
                    if *jump_remaining <= 0.0 {
                        // The jump landed inside this item's weight span:
                        // its key is drawn conditioned on beating the
                        // current threshold, i.e. uniform on (T^w, 1)
                        // raised to 1/w.
                        let t = heap.min_key();
                        let t_pow = (weight * t.ln()).exp();
                        let r = t_pow + self.rng.uniform01() * (1.0 - t_pow);
                        let key = (r.ln() / weight).exp().clamp(f64::MIN_POSITIVE, KEY_MAX);
                        heap.replace_min(key, item);
                        *jump_remaining = self.rng.uniform01().ln() / heap.min_key().ln();
                    }
                }
            }
            Inner::WrswrSkip { slots, update_at } => {
                let total = self.weight_seen;
                if slots.is_empty() {
                    *slots = vec![item; k];
                    *update_at = weight_swr_target(&mut self.rng, total, k);
                } else if total >= *update_at {
                    conditioned_slot_update(slots, weight / total, &item, &mut self.rng);
                    *update_at = weight_swr_target(&mut self.rng, total, k);
                }
            }
            _ => unreachable!("unweighted methods rejected above"),
        }
        Ok(())
    }

    /// Snapshot the current sample without mutating the sampler.
    pub fn value(&self) -> SampleResult<T> {
        let items = match &self.inner {
            Inner::R { buf } | Inner::L { buf, .. } => buf.clone(),
            Inner::RswrSkip { slots, .. } | Inner::WrswrSkip { slots, .. } => slots.clone(),
            Inner::ARes { heap } | Inner::AExpJ { heap, .. } => {
                heap.entries.iter().map(|(_, item)| item.clone()).collect()
            }
        };
        SampleResult {
            items,
            method: Method::Reservoir(self.method),
            items_processed: self.items_seen,
            weight_processed: self.weight_seen,
        }
    }

    /// Combine samplers run over disjoint partitions of one stream.
    ///
    /// Inputs must share method and capacity. The result is statistically
    /// consistent with a single sampler having processed the
    /// concatenation, and the inputs are left untouched.
    pub fn merge(inputs: &[&ReservoirSampler<T>], mut rng: StreamRng) -> Result<Self> {
        if inputs.len() < 2 {
            return Err(SampleError::IncompatibleMerge(
                "merge needs at least two samplers".into(),
            ));
        }
        let method = inputs[0].method;
        let capacity = inputs[0].capacity;
        for s in &inputs[1..] {
            if s.method != method {
                return Err(SampleError::IncompatibleMerge(format!(
                    "method mismatch: {} vs {}",
                    method.name(),
                    s.method.name()
                )));
            }
            if s.capacity != capacity {
                return Err(SampleError::IncompatibleMerge(format!(
                    "capacity mismatch: {} vs {}",
                    capacity, s.capacity
                )));
            }
        }
        let mut acc = inputs[0].clone_with_fresh_rng(StreamRng::new(rng.next_u64()));
        for next in &inputs[1..] {
            acc = merge_pair(&acc, next, &mut rng)?;
        }
        Ok(acc)
    }

    fn clone_with_fresh_rng(&self, rng: StreamRng) -> Self {
        let mut cloned = self.clone();
        cloned.rng = rng;
        cloned
    }
}

/// Skip before the next slot update for uniform with-replacement
/// sampling: P(skip >= s | n seen) = (n/(n+s))^K, inverted as
/// floor(n (U^(-1/K) - 1)).
fn uniform_swr_skip(rng: &mut StreamRng, n: u64, k: usize) -> u64 {
    let v = (-rng.uniform01().ln() / k as f64).exp();
    (n as f64 * (v - 1.0)).floor() as u64
}

/// Cumulative-weight target for the next update in weighted
/// with-replacement sampling: W' = W / U^(1/K), so that
/// P(no update while weight grows from W to x) = (W/x)^K.
fn weight_swr_target(rng: &mut StreamRng, total: f64, k: usize) -> f64 {
    total / (rng.uniform01().ln() / k as f64).exp()
}

fn merge_pair<T: Clone>(
    a: &ReservoirSampler<T>,
    b: &ReservoirSampler<T>,
    rng: &mut StreamRng,
) -> Result<ReservoirSampler<T>> {
    let k = a.capacity;
    let method = a.method;
    let items_seen = a.items_seen + b.items_seen;
    let weight_seen = a.weight_seen + b.weight_seen;

    let inner = match (&a.inner, &b.inner) {
        (Inner::R { buf: ba }, Inner::R { buf: bb }) => Inner::R {
            buf: merge_uniform_buffers(ba, a.items_seen, bb, b.items_seen, k, rng),
        },
        (Inner::L { buf: ba, .. }, Inner::L { buf: bb, .. }) => {
            let buf = merge_uniform_buffers(ba, a.items_seen, bb, b.items_seen, k, rng);
            let skip = if buf.len() == k {
                let threshold = algl_threshold(rng, items_seen, k);
                let remaining = skip_from_threshold(rng, threshold);
                Some(SkipState {
                    threshold,
                    remaining,
                })
            } else {
                None
            };
            Inner::L { buf, skip }
        }
        (Inner::RswrSkip { slots: sa, .. }, Inner::RswrSkip { slots: sb, .. }) => {
            let share = a.items_seen as f64 / items_seen as f64;
            let slots = merge_replacement_slots(sa, sb, share, k, items_seen == 0, rng);
            let remaining = if slots.is_empty() {
                0
            } else {
                uniform_swr_skip(rng, items_seen, k)
            };
            Inner::RswrSkip { slots, remaining }
        }
        (Inner::WrswrSkip { slots: sa, .. }, Inner::WrswrSkip { slots: sb, .. }) => {
            let share = a.weight_seen / weight_seen;
            let slots = merge_replacement_slots(sa, sb, share, k, items_seen == 0, rng);
            let update_at = if slots.is_empty() {
                0.0
            } else {
                weight_swr_target(rng, weight_seen, k)
            };
            Inner::WrswrSkip { slots, update_at }
        }
        (Inner::ARes { heap: ha }, Inner::ARes { heap: hb }) => Inner::ARes {
            heap: merge_keyed(ha, hb, k),
        },
        (Inner::AExpJ { heap: ha, .. }, Inner::AExpJ { heap: hb, .. }) => {
            let heap = merge_keyed(ha, hb, k);
            let jump_remaining = if heap.len() == k {
                rng.uniform01().ln() / heap.min_key().ln()
            } else {
                0.0
            };
            Inner::AExpJ {
                heap,
                jump_remaining,
            }
        }
        _ => unreachable!("method equality checked by merge"),
    };

    Ok(ReservoirSampler {
        method,
        capacity: k,
        items_seen,
        weight_seen,
        rng: StreamRng::new(rng.next_u64()),
        inner,
    })
}

/// Uniform without-replacement merge: the count taken from partition `a`
/// is Hypergeometric(n_a + n_b, n_a, min(K, n_a + n_b)); each side is
/// then subsampled uniformly.
fn merge_uniform_buffers<T: Clone>(
    buf_a: &[T],
    n_a: u64,
    buf_b: &[T],
    n_b: u64,
    k: usize,
    rng: &mut StreamRng,
) -> Vec<T> {
    let total = n_a + n_b;
    let take = (k as u64).min(total);
    let from_a = hypergeometric(total, n_a, take, rng);
    let mut buf = Vec::with_capacity(k);
    buf.extend(subsample(buf_a, from_a as usize, rng));
    buf.extend(subsample(buf_b, (take - from_a) as usize, rng));
    buf
}

/// With-replacement merge. Slots of each input are iid draws from its
/// partition, so each output slot picks a partition proportionally to its
/// share and is then assigned a *distinct* input slot within that
/// partition: reusing an input slot would duplicate its value across
/// output slots and correlate them, breaking the iid law of the
/// concatenated stream.
fn merge_replacement_slots<T: Clone>(
    slots_a: &[T],
    slots_b: &[T],
    share_a: f64,
    k: usize,
    both_empty: bool,
    rng: &mut StreamRng,
) -> Vec<T> {
    if both_empty {
        return Vec::with_capacity(k);
    }
    if slots_a.is_empty() {
        return subsample(slots_b, k, rng);
    }
    if slots_b.is_empty() {
        return subsample(slots_a, k, rng);
    }
    let picks: Vec<bool> = (0..k).map(|_| rng.uniform01() < share_a).collect();
    let count_a = picks.iter().filter(|&&p| p).count();
    let mut idx_a = distinct_indices(slots_a.len(), count_a, rng).into_iter();
    let mut idx_b = distinct_indices(slots_b.len(), k - count_a, rng).into_iter();
    picks
        .into_iter()
        .map(|from_a| {
            if from_a {
                slots_a[idx_a.next().expect("count matches")].clone()
            } else {
                slots_b[idx_b.next().expect("count matches")].clone()
            }
        })
        .collect()
}

/// Key-retaining merge for the priority-key methods: the union's K
/// largest keys are exactly the K largest keys of the concatenated
/// stream, so this merge is exact with no re-sampling.
fn merge_keyed<T: Clone>(a: &KeyedHeap<T>, b: &KeyedHeap<T>, k: usize) -> KeyedHeap<T> {
    let mut entries: Vec<(f64, T)> = a.entries.iter().chain(b.entries.iter()).cloned().collect();
    entries.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("keys are never NaN"));
    entries.truncate(k);
    KeyedHeap::rebuild(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn rng(seed: u64) -> StreamRng {
        StreamRng::new(seed)
    }

    #[test]
    fn zero_capacity_is_rejected() {
        assert_eq!(
            ReservoirSampler::<u32>::new(ReservoirMethod::AlgR, 0, rng(0)).unwrap_err(),
            SampleError::InvalidCapacity
        );
    }

    #[test]
    fn fresh_sampler_is_empty() {
        let s = ReservoirSampler::<u32>::new(ReservoirMethod::AlgL, 10, rng(0)).unwrap();
        assert_eq!(s.len(), 0);
        assert_eq!(s.items_seen(), 0);
        let v = s.value();
        assert!(v.is_empty());
        assert_eq!(v.items_processed, 0);
    }

    #[test]
    fn weighted_construction_starts_at_zero_weight() {
        let s = ReservoirSampler::<u32>::new(ReservoirMethod::AlgWrswrSkip, 3, rng(0)).unwrap();
        assert_eq!(s.weight_seen(), 0.0);
        assert!(s.method().weighted());
    }

    #[test]
    fn short_stream_keeps_everything() {
        for method in [ReservoirMethod::AlgR, ReservoirMethod::AlgL] {
            let mut s = ReservoirSampler::new(method, 3, rng(1)).unwrap();
            for x in ["a", "b", "c"] {
                s.fit(x).unwrap();
            }
            let mut items = s.value().items;
            items.sort_unstable();
            assert_eq!(items, vec!["a", "b", "c"], "{method}");
        }
    }

    #[test]
    fn under_full_reservoir_returns_exactly_what_it_saw() {
        let mut s = ReservoirSampler::new(ReservoirMethod::AlgL, 10, rng(3)).unwrap();
        for x in 0..5u32 {
            s.fit(x).unwrap();
        }
        let mut items = s.value().items;
        items.sort_unstable();
        assert_eq!(items, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn membership_and_size_on_long_stream() {
        let mut s = ReservoirSampler::new(ReservoirMethod::AlgR, 10, rng(4)).unwrap();
        for x in 1..=100_000u64 {
            s.fit(x).unwrap();
        }
        let v = s.value();
        assert_eq!(v.len(), 10);
        assert!(v.items.iter().all(|&x| (1..=100_000).contains(&x)));
        assert_eq!(v.items_processed, 100_000);
    }

    #[test]
    fn buffer_never_grows_past_capacity() {
        for method in ReservoirMethod::ALL {
            let mut s = ReservoirSampler::new(method, 8, rng(5)).unwrap();
            let cap0 = {
                // capacity as allocated at construction
                for x in 0..200_000u64 {
                    if method.weighted() {
                        s.fit_weighted(x, 1.0 + (x % 7) as f64).unwrap();
                    } else {
                        s.fit(x).unwrap();
                    }
                }
                s.buffer_capacity()
            };
            assert_eq!(cap0, 8, "{method}: buffer must stay at K slots");
            assert_eq!(s.len(), 8);
        }
    }

    #[test]
    fn weight_validation() {
        let mut s = ReservoirSampler::new(ReservoirMethod::AlgARes, 2, rng(6)).unwrap();
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                s.fit_weighted(1u32, bad),
                Err(SampleError::InvalidWeight(_))
            ));
        }
        // Failed fits must not count.
        assert_eq!(s.items_seen(), 0);
        assert_eq!(s.weight_seen(), 0.0);
    }

    #[test]
    fn weight_usage_errors() {
        let mut unweighted = ReservoirSampler::new(ReservoirMethod::AlgL, 2, rng(7)).unwrap();
        assert!(matches!(
            unweighted.fit_weighted(1u32, 1.0),
            Err(SampleError::UnexpectedWeight(_))
        ));
        let mut weighted = ReservoirSampler::new(ReservoirMethod::AlgAExpJ, 2, rng(7)).unwrap();
        assert!(matches!(
            weighted.fit(1u32),
            Err(SampleError::MissingWeight(_))
        ));
    }

    #[test]
    fn weight_seen_accumulates() {
        let mut s = ReservoirSampler::new(ReservoirMethod::AlgWrswrSkip, 2, rng(8)).unwrap();
        let mut last = 0.0;
        for x in 0..50u32 {
            s.fit_weighted(x, 0.5 + x as f64).unwrap();
            assert!(s.weight_seen() > last);
            last = s.weight_seen();
        }
        let expected: f64 = (0..50).map(|x| 0.5 + x as f64).sum();
        assert!((s.weight_seen() - expected).abs() < 1e-9);
    }

    #[test]
    fn with_replacement_fills_all_slots_after_first_item() {
        let mut s = ReservoirSampler::new(ReservoirMethod::AlgRswrSkip, 5, rng(9)).unwrap();
        s.fit(42u32).unwrap();
        assert_eq!(s.value().items, vec![42; 5]);
        let mut w = ReservoirSampler::new(ReservoirMethod::AlgWrswrSkip, 4, rng(9)).unwrap();
        w.fit_weighted(7u32, 2.0).unwrap();
        assert_eq!(w.value().items, vec![7; 4]);
    }

    fn run_unweighted(method: ReservoirMethod, n: u32, k: usize, seed: u64) -> Vec<u32> {
        let mut s = ReservoirSampler::new(method, k, rng(seed)).unwrap();
        for x in 0..n {
            s.fit(x).unwrap();
        }
        oracle::outcome(s.value().items)
    }

    fn run_weighted(method: ReservoirMethod, weights: &[f64], k: usize, seed: u64) -> Vec<u32> {
        let mut s = ReservoirSampler::new(method, k, rng(seed)).unwrap();
        for (i, &w) in weights.iter().enumerate() {
            s.fit_weighted(i as u32, w).unwrap();
        }
        oracle::outcome(s.value().items)
    }

    #[test]
    fn alg_l_matches_uniform_pair_law() {
        let law = oracle::uniform_subset_law(5, 2).unwrap();
        let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
            run_unweighted(ReservoirMethod::AlgL, 5, 2, seed)
        });
        assert!(r.pass, "chi2 {} >= {}", r.statistic, r.critical);
    }

    #[test]
    fn alg_r_and_alg_l_share_the_subset_law() {
        // Skip equivalence: both match the same exact oracle.
        let law = oracle::uniform_subset_law(6, 3).unwrap();
        for method in [ReservoirMethod::AlgR, ReservoirMethod::AlgL] {
            let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
                run_unweighted(method, 6, 3, seed)
            });
            assert!(r.pass, "{method}: chi2 {} >= {}", r.statistic, r.critical);
        }
    }

    #[test]
    fn equal_weights_reduce_to_uniform_pairs() {
        let law = oracle::uniform_subset_law(3, 2).unwrap();
        for method in [ReservoirMethod::AlgARes, ReservoirMethod::AlgAExpJ] {
            let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
                run_weighted(method, &[1.0, 1.0, 1.0], 2, seed)
            });
            assert!(r.pass, "{method}: chi2 {} >= {}", r.statistic, r.critical);
        }
    }

    #[test]
    fn weighted_single_slot_frequencies() {
        let weights = [1.0, 2.0, 3.0];
        let law = oracle::exact_law_with_replacement(&weights, 1).unwrap();
        let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
            run_weighted(ReservoirMethod::AlgWrswrSkip, &weights, 1, seed)
        });
        assert!(r.pass, "chi2 {} >= {}", r.statistic, r.critical);
    }

    #[test]
    fn ares_and_aexpj_share_the_weighted_law() {
        let weights = [1.0, 2.0, 3.0];
        let law = oracle::exact_law_without_replacement(&weights, 2).unwrap();
        for method in [ReservoirMethod::AlgARes, ReservoirMethod::AlgAExpJ] {
            let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
                run_weighted(method, &weights, 2, seed)
            });
            assert!(r.pass, "{method}: chi2 {} >= {}", r.statistic, r.critical);
        }
    }

    #[test]
    fn aexpj_skips_most_items_on_long_streams() {
        // The exponential-jump path must not touch the generator on
        // skipped items: variates stay far below one per element.
        let mut s = ReservoirSampler::new(ReservoirMethod::AlgAExpJ, 10, rng(11)).unwrap();
        let mut wrng = StreamRng::new(999);
        for x in 0..100_000u64 {
            let w = 0.5 + wrng.uniform01();
            s.fit_weighted(x, w).unwrap();
        }
        assert!(
            s.variates() < 10_000,
            "A-ExpJ drew {} variates over 10^5 items",
            s.variates()
        );
    }

    #[test]
    fn merge_rejects_mismatched_samplers() {
        let a = ReservoirSampler::<u32>::new(ReservoirMethod::AlgL, 2, rng(1)).unwrap();
        let b = ReservoirSampler::<u32>::new(ReservoirMethod::AlgR, 2, rng(2)).unwrap();
        let c = ReservoirSampler::<u32>::new(ReservoirMethod::AlgL, 3, rng(3)).unwrap();
        assert!(matches!(
            ReservoirSampler::merge(&[&a, &b], rng(0)),
            Err(SampleError::IncompatibleMerge(_))
        ));
        assert!(matches!(
            ReservoirSampler::merge(&[&a, &c], rng(0)),
            Err(SampleError::IncompatibleMerge(_))
        ));
        assert!(matches!(
            ReservoirSampler::merge(&[&a], rng(0)),
            Err(SampleError::IncompatibleMerge(_))
        ));
    }

    #[test]
    fn merge_with_empty_sampler_is_identity_in_law() {
        let law = oracle::uniform_subset_law(4, 2).unwrap();
        let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
            let empty =
                ReservoirSampler::<u32>::new(ReservoirMethod::AlgL, 2, rng(seed * 3 + 1)).unwrap();
            let mut s = ReservoirSampler::new(ReservoirMethod::AlgL, 2, rng(seed * 3 + 2)).unwrap();
            for x in 0..4u32 {
                s.fit(x).unwrap();
            }
            let merged =
                ReservoirSampler::merge(&[&empty, &s], rng(seed * 3 + 3)).unwrap();
            oracle::outcome(merged.value().items)
        });
        assert!(r.pass, "chi2 {} >= {}", r.statistic, r.critical);
        let counters = {
            let empty = ReservoirSampler::<u32>::new(ReservoirMethod::AlgL, 2, rng(1)).unwrap();
            let mut s = ReservoirSampler::new(ReservoirMethod::AlgL, 2, rng(2)).unwrap();
            for x in 0..4u32 {
                s.fit(x).unwrap();
            }
            ReservoirSampler::merge(&[&empty, &s], rng(3)).unwrap()
        };
        assert_eq!(counters.items_seen(), 4);
    }

    #[test]
    fn merged_sampler_accepts_further_fits() {
        // Merge two partitions, keep streaming into the result; the final
        // sample must still follow the uniform subset law over all items.
        let law = oracle::uniform_subset_law(6, 2).unwrap();
        let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
            let mut a = ReservoirSampler::new(ReservoirMethod::AlgL, 2, rng(seed * 4 + 1)).unwrap();
            let mut b = ReservoirSampler::new(ReservoirMethod::AlgL, 2, rng(seed * 4 + 2)).unwrap();
            for x in 0..2u32 {
                a.fit(x).unwrap();
            }
            for x in 2..4u32 {
                b.fit(x).unwrap();
            }
            let mut merged = ReservoirSampler::merge(&[&a, &b], rng(seed * 4 + 3)).unwrap();
            for x in 4..6u32 {
                merged.fit(x).unwrap();
            }
            oracle::outcome(merged.value().items)
        });
        assert!(r.pass, "chi2 {} >= {}", r.statistic, r.critical);
    }

    #[test]
    fn merge_weighted_single_slot_shares() {
        // Partition weights 1 vs 3 with K = 1: partition b at 3/4.
        let mut hits = 0u32;
        let trials = 40_000;
        for seed in 0..trials {
            let mut a = ReservoirSampler::new(ReservoirMethod::AlgWrswrSkip, 1, rng(seed * 3 + 1))
                .unwrap();
            a.fit_weighted('a', 1.0).unwrap();
            let mut b = ReservoirSampler::new(ReservoirMethod::AlgWrswrSkip, 1, rng(seed * 3 + 2))
                .unwrap();
            b.fit_weighted('b', 3.0).unwrap();
            let merged = ReservoirSampler::merge(&[&a, &b], rng(seed * 3 + 3)).unwrap();
            if merged.value().items == vec!['b'] {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.75).abs() < 0.01, "frequency {freq}");
    }

    #[test]
    fn merge_associativity_in_distribution() {
        let law = oracle::uniform_subset_law(6, 2).unwrap();
        for left_first in [true, false] {
            let r = oracle::check_law_with_reseed(20_000, 0.001, &law, |seed| {
                let mut parts = Vec::new();
                for p in 0..3u32 {
                    let mut s =
                        ReservoirSampler::new(ReservoirMethod::AlgL, 2, rng(seed * 7 + p as u64))
                            .unwrap();
                    for x in (p * 2)..(p * 2 + 2) {
                        s.fit(x).unwrap();
                    }
                    parts.push(s);
                }
                let merged = if left_first {
                    let ab =
                        ReservoirSampler::merge(&[&parts[0], &parts[1]], rng(seed * 7 + 4)).unwrap();
                    ReservoirSampler::merge(&[&ab, &parts[2]], rng(seed * 7 + 5)).unwrap()
                } else {
                    let bc =
                        ReservoirSampler::merge(&[&parts[1], &parts[2]], rng(seed * 7 + 4)).unwrap();
                    ReservoirSampler::merge(&[&parts[0], &bc], rng(seed * 7 + 5)).unwrap()
                };
                oracle::outcome(merged.value().items)
            });
            assert!(r.pass, "left_first={left_first}: chi2 {}", r.statistic);
        }
    }

    #[test]
    fn hypergeometric_support_and_mean() {
        let mut r = rng(12);
        let mut sum = 0u64;
        let trials = 20_000;
        for _ in 0..trials {
            let h = hypergeometric(10, 4, 5, &mut r);
            assert!(h <= 4 && h + 5 <= 10 + 4); // support: max(0, 5-6) <= h <= min(5, 4)
            sum += h;
        }
        let mean = sum as f64 / trials as f64;
        assert!((mean - 2.0).abs() < 0.05, "mean {mean}"); // E = 5 * 4/10
    }

    #[test]
    fn distinct_indices_are_distinct() {
        let mut r = rng(13);
        for _ in 0..100 {
            let mut idx = distinct_indices(10, 7, &mut r);
            idx.sort_unstable();
            idx.dedup();
            assert_eq!(idx.len(), 7);
        }
    }
}
