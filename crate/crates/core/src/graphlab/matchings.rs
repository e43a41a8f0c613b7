//! Exact i-matching counts.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BipartiteGraph, Error};
use crate::numutil::factorial;

/// Matching counts `m_0..m_nside`; `m_0 = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatchVector(pub Vec<BigInt>);

impl MatchVector {
    pub fn count(&self, i: usize) -> &BigInt {
        &self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Number of i-matchings of the complete graph on `v` vertices:
/// `v! / ((v-2i)! i! 2^i)`, exact.
pub fn mbar(v: usize, i: usize) -> Result<BigInt, Error> {
    if v % 2 != 0 {
        return Err(Error::RangeViolation(format!("v = {v} must be even")));
    }
    if 2 * i > v {
        return Err(Error::RangeViolation(format!("2i = {} exceeds v = {v}", 2 * i)));
    }
    let num = factorial(v);
    let den = factorial(v - 2 * i) * factorial(i) * BigInt::from(2).pow(i as u32);
    Ok(num / den)
}

/// Exact matching counts by dynamic programming over left vertices with a
/// bitmask of used right vertices.
pub fn match_counts(g: &BipartiteGraph) -> MatchVector {
    let n = g.nside();
    let full = 1usize << n;
    let mut dp = vec![BigInt::zero(); full];
    dp[0] = BigInt::one();
    for &row in g.rows() {
        let mut next = dp.clone(); // leaving this left vertex unmatched
        for mask in 0..full {
            if dp[mask].is_zero() {
                continue;
            }
            let mut avail = row as usize & !mask;
            while avail != 0 {
                let j = avail.trailing_zeros() as usize;
                avail &= avail - 1;
                let m2 = mask | (1 << j);
                let add = dp[mask].clone();
                next[m2] += add;
            }
        }
        dp = next;
    }
    let mut m = vec![BigInt::zero(); n + 1];
    for (mask, count) in dp.into_iter().enumerate() {
        m[mask.count_ones() as usize] += count;
    }
    MatchVector(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphlab::{complete_bipartite, cycle_bipartite};

    #[test]
    fn mbar_small_values() {
        assert_eq!(mbar(4, 1).unwrap(), BigInt::from(6));
        assert_eq!(mbar(6, 3).unwrap(), BigInt::from(15));
        assert_eq!(mbar(10, 0).unwrap(), BigInt::from(1));
        assert!(mbar(4, 3).is_err());
        assert!(mbar(5, 1).is_err());
    }

    #[test]
    fn k33_match_vector() {
        let m = match_counts(&complete_bipartite(3));
        let want: Vec<BigInt> = [1, 9, 18, 6].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(m.0, want);
    }

    #[test]
    fn c6_match_vector() {
        let m = match_counts(&cycle_bipartite(3));
        let want: Vec<BigInt> = [1, 6, 9, 2].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(m.0, want);
    }

    #[test]
    fn m0_is_one_and_m1_is_edge_count() {
        for g in [complete_bipartite(4), cycle_bipartite(5)] {
            let m = match_counts(&g);
            assert_eq!(m.count(0), &BigInt::one());
            assert_eq!(m.count(1), &BigInt::from((g.nside() * g.r()) as u64));
        }
    }
}
