//! Deterministic, seedable randomness for reproducible sampler runs.
//!
//! Generator: xoshiro256++ (Blackman & Vigna), seeded through SplitMix64.
//! Period 2^256 - 1, passes BigCrush, and the output sequence is a pure
//! function of the seed on every platform (integer ops only).
//!
//! Every stochastic operation in this crate takes a [`StreamRng`]
//! explicitly; there is no thread-local global generator. The struct also
//! counts how many raw 64-bit variates it has produced, which is what the
//! variate-economy assertions in the test suite measure.

/// Seedable pseudorandom source with a variate counter.
///
/// Not `Copy`: copying an RNG duplicates its stream. Clone explicitly when
/// two identical streams are actually wanted.
#[derive(Debug, Clone)]
pub struct StreamRng {
    state: [u64; 4],
    variates: u64,
}

#[inline]
fn splitmix64(x: &mut u64) -> u64 {
    *x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl StreamRng {
    /// Create a generator from a 64-bit seed.
    pub fn new(seed: u64) -> Self {
        let mut s = seed;
        let state = [
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
        ];
        Self { state, variates: 0 }
    }

    /// Next raw 64-bit output (xoshiro256++ step). Counts as one variate.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        self.variates += 1;
        result
    }

    /// Uniform variate strictly inside (0, 1).
    ///
    /// Maps the top 52 bits to ((b + 0.5) / 2^52): the minimum is 2^-53 and
    /// the maximum is 1 - 2^-53, both exactly representable, so `ln` and
    /// division in the skip formulas never see 0 or 1.
    #[inline]
    pub fn uniform01(&mut self) -> f64 {
        ((self.next_u64() >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
    }

    /// Uniform integer in `[0, bound)` via Lemire's multiply-then-reject.
    ///
    /// Panics if `bound` is zero.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        loop {
            let x = self.next_u64();
            let m = (x as u128) * (bound as u128);
            let low = m as u64;
            if low >= bound || low >= low.wrapping_neg() % bound {
                return (m >> 64) as u64;
            }
        }
    }

    /// Uniform index in `[0, bound)`.
    #[inline]
    pub fn index(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Number of raw 64-bit variates generated so far.
    pub fn variates(&self) -> u64 {
        self.variates
    }
}
