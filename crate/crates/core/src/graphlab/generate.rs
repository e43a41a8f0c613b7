//! Seeded random regular bipartite graphs via the pairing model.

use super::{BipartiteGraph, Error};

/// SplitMix64 (Steele, Lea, Flood): a 64-bit mixing generator with a single
/// additive state word. Small, fast, and fully specified by the constants
/// below, so any implementation reproduces the same stream from a seed.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..n` by rejection (no modulo bias).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let k = self.below(i as u64 + 1) as usize;
            items.swap(i, k);
        }
    }
}

pub const DEFAULT_RETRY_BUDGET: usize = 100_000;

/// Pairing-model sampler: r stubs per vertex on each side, a random perfect
/// matching between the stub sets, rejecting any draw that produces a
/// repeated edge. Deterministic for a given seed. Not exactly uniform over
/// simple graphs; reports label the sampler.
pub fn rand_regular(nside: usize, r: usize, seed: u64) -> Result<BipartiteGraph, Error> {
    rand_regular_with_budget(nside, r, seed, DEFAULT_RETRY_BUDGET)
}

pub fn rand_regular_with_budget(
    nside: usize,
    r: usize,
    seed: u64,
    budget: usize,
) -> Result<BipartiteGraph, Error> {
    if r == 0 || r > nside || nside > 16 {
        return Err(Error::BadParams(format!("nside = {nside}, r = {r}")));
    }
    let mut gen = SplitMix64::new(seed);
    sample_with(&mut gen, nside, r, budget)
}

pub(super) fn sample_with(
    gen: &mut SplitMix64,
    nside: usize,
    r: usize,
    budget: usize,
) -> Result<BipartiteGraph, Error> {
    let mut right_stubs: Vec<usize> = (0..nside * r).map(|t| t / r).collect();
    for _ in 0..budget {
        gen.shuffle(&mut right_stubs);
        let mut rows = vec![0u32; nside];
        let mut simple = true;
        'stubs: for (t, &right) in right_stubs.iter().enumerate() {
            let left = t / r;
            if rows[left] >> right & 1 == 1 {
                simple = false;
                break 'stubs;
            }
            rows[left] |= 1 << right;
        }
        if simple {
            return BipartiteGraph::new(nside, r, rows);
        }
    }
    Err(Error::RetryBudgetExhausted { attempts: budget })
}
