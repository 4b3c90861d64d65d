//! Seedable, splittable pseudo-random generator.
//!
//! The generator is xoshiro256** seeded through SplitMix64. Output depends only
//! on the seed and the call sequence, never on the platform, so every run that
//! starts from the same master seed replays bit-identically. Independent
//! streams are obtained with [`Rng::fork`], which hashes `(seed, stream_id)`
//! into a fresh seed; forking does not advance the parent.

/// One SplitMix64 step. Also used as the mixing function for seed derivation.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a master seed together with a path of stream identifiers.
///
/// `derive_seed(s, &[g, i])` is how per-individual GA evaluation seeds are
/// produced, so the result must never depend on evaluation order.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut acc = master;
    let mut out = splitmix64(&mut acc);
    for &p in path {
        let mut s = out ^ p.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        out = splitmix64(&mut s);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    state: [u64; 4],
    seed: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut state = [0u64; 4];
        for s in &mut state {
            *s = splitmix64(&mut sm);
        }
        // xoshiro must not start from the all-zero state; SplitMix64 never
        // yields four zeros in a row, but keep the guard explicit.
        if state.iter().all(|&s| s == 0) {
            state[0] = 1;
        }
        Self { state, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child generator for an independent stream.
    pub fn fork(&self, stream_id: u64) -> Rng {
        Rng::new(derive_seed(self.seed, &[stream_id]))
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`. Requires `lo < hi`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo < hi, "uniform requires lo < hi");
        let x = lo + (hi - lo) * self.next_f64();
        // rounding can land exactly on `hi` when the interval is tiny
        if x >= hi {
            lo
        } else {
            x
        }
    }

    /// Gaussian draw via Box–Muller. `std` may be zero.
    pub fn normal(&mut self, mean: f64, std: f64) -> f64 {
        debug_assert!(std >= 0.0);
        // 1 - u lies in (0, 1], so the log is finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        mean + std * z
    }

    /// Unbiased integer in `[0, n)` (Lemire's multiply-and-reject). Requires `n >= 1`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n >= 1, "index requires n >= 1");
        let n = n as u64;
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }

    /// Bernoulli trial with success probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    /// `k` distinct indices from `0..n`, in draw order (partial Fisher–Yates).
    pub fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} distinct values from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
