//! Independent oracles for the graph module: a naive edge-subset matching
//! counter, and a high-precision fixed-point logarithm evaluation of the
//! difference ladder that cross-checks the exact rational sign decisions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use matchkit::graphlab::{
    delta_sign, match_counts, mbar, positivity, rand_regular, BipartiteGraph, Sign, SplitMix64,
};

// ---- naive edge-subset oracle ----

fn brute_force_counts(g: &BipartiteGraph) -> Vec<u64> {
    let edges = g.edges();
    let mut m = vec![0u64; g.nside() + 1];
    for subset in 0u32..(1 << edges.len()) {
        let mut left = 0u32;
        let mut right = 0u32;
        let mut ok = true;
        let mut size = 0;
        for (idx, &(a, b)) in edges.iter().enumerate() {
            if subset >> idx & 1 == 0 {
                continue;
            }
            if left >> a & 1 == 1 || right >> b & 1 == 1 {
                ok = false;
                break;
            }
            left |= 1 << a;
            right |= 1 << b;
            size += 1;
        }
        if ok {
            m[size] += 1;
        }
    }
    m
}

fn all_regular_matrices(nside: usize, r: usize) -> Vec<BipartiteGraph> {
    let mut out = Vec::new();
    let patterns: Vec<u32> = (0u32..1 << nside)
        .filter(|m| m.count_ones() as usize == r)
        .collect();
    fn rec(
        nside: usize,
        r: usize,
        patterns: &[u32],
        rows: &mut Vec<u32>,
        colsum: &mut [usize],
        out: &mut Vec<BipartiteGraph>,
    ) {
        if rows.len() == nside {
            out.push(BipartiteGraph::new(nside, r, rows.clone()).unwrap());
            return;
        }
        let remaining = nside - rows.len();
        'pat: for &pat in patterns {
            for c in 0..nside {
                let add = (pat >> c & 1) as usize;
                if colsum[c] + add > r || r - (colsum[c] + add) > remaining - 1 {
                    continue 'pat;
                }
            }
            for c in 0..nside {
                colsum[c] += (pat >> c & 1) as usize;
            }
            rows.push(pat);
            rec(nside, r, patterns, rows, colsum, out);
            rows.pop();
            for c in 0..nside {
                colsum[c] -= (pat >> c & 1) as usize;
            }
        }
    }
    rec(nside, r, &patterns, &mut Vec::new(), &mut vec![0; nside], &mut out);
    out
}

#[test]
fn match_counts_agree_with_edge_subset_oracle_up_to_8_edges() {
    // every r-regular bipartite shape with nside * r <= 8
    let mut checked = 0usize;
    for nside in 1..=8usize {
        for r in 1..=nside {
            if nside * r > 8 {
                continue;
            }
            for g in all_regular_matrices(nside, r) {
                let fast = match_counts(&g);
                let brute = brute_force_counts(&g);
                for i in 0..=nside {
                    assert_eq!(
                        fast.count(i),
                        &BigInt::from(brute[i]),
                        "mismatch at {g}, i = {i}"
                    );
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 40_000, "only {checked} graphs checked");
}

#[test]
fn match_vector_edge_count_and_near_perfect_entries() {
    // m_1 = nside * r and m_nside >= 1 on every regular graph tested
    for seed in 0..200u64 {
        let nside = 3 + (seed % 4) as usize;
        let r = 2 + (seed % 2) as usize;
        let g = rand_regular(nside, r.min(nside), seed).unwrap();
        let m = match_counts(&g);
        assert_eq!(m.count(1), &BigInt::from(g.nside() * g.r()));
        assert!(m.count(g.nside()) > &BigInt::zero(), "no perfect matching in {g}");
    }
}

// ---- high-precision logarithm oracle ----

/// Fixed-point value scaled by 10^70.
fn scale() -> BigInt {
    BigInt::from(10u32).pow(70)
}

/// atanh(num/den) for 0 <= num/den < 1/2, scaled by 10^70.
fn atanh_fp(num: &BigInt, den: &BigInt) -> BigInt {
    let s = scale();
    let x = num * &s / den;
    let xsq_num = num * num;
    let xsq_den = den * den;
    let mut term = x.clone();
    let mut total = BigInt::zero();
    let mut k = 0u32;
    while !term.is_zero() {
        total += &term / (2 * k + 1);
        term = term * &xsq_num / &xsq_den;
        k += 1;
        assert!(k < 10_000, "atanh series failed to converge");
    }
    total
}

/// ln 2 = 2 atanh(1/3), scaled.
fn ln2_fp() -> BigInt {
    2 * atanh_fp(&BigInt::one(), &BigInt::from(3))
}

/// ln(num/den) for a positive rational, scaled by 10^70: reduce to
/// m in [1, 2) by powers of two, then ln m = 2 atanh((m-1)/(m+1)).
fn ln_fp(num: &BigInt, den: &BigInt) -> BigInt {
    assert!(num.is_positive() && den.is_positive());
    let mut num = num.clone();
    let mut den = den.clone();
    let mut k = 0i64;
    while num >= 2 * &den {
        den *= 2;
        k += 1;
    }
    while num < den {
        num *= 2;
        k -= 1;
    }
    let m_minus = &num - &den;
    let m_plus = &num + &den;
    k * ln2_fp() + 2 * atanh_fp(&m_minus, &m_plus)
}

#[test]
fn exact_signs_match_high_precision_log_evaluation() {
    // |error| in the fixed-point ladder value stays far below 10^-40 * scale,
    // so any magnitude above that threshold has a trustworthy sign.
    let threshold = BigInt::from(10u32).pow(30); // 10^-40 in scaled units
    let mut gen = SplitMix64::new(20_26);
    let mut checked = 0;
    while checked < 100 {
        let nside = 3 + (gen.below(4)) as usize; // 3..=6
        let r = if nside == 3 { 2 } else { 2 + gen.below(2) as usize };
        let g = rand_regular(nside, r, gen.next_u64()).unwrap();
        let mv = match_counts(&g);
        let v = g.v();
        // ln q_t = ln(m_t (v-1)^t) - ln(r^t mbar_t)
        let lnq: Vec<BigInt> = (0..=nside)
            .map(|t| {
                let num = mv.count(t) * BigInt::from(v as u32 - 1).pow(t as u32);
                let den = BigInt::from(r as u32).pow(t as u32) * mbar(v, t).unwrap();
                ln_fp(&num, &den)
            })
            .collect();
        for k in 0..=nside {
            for i in 0..=(nside - k) {
                let exact = delta_sign(&mv, v, r, k, i).unwrap();
                let mut float = BigInt::zero();
                for j in 0..=k {
                    let c = binomial_int(k, j);
                    let term = &lnq[i + j] * &c;
                    if (k - j) % 2 == 0 {
                        float += term;
                    } else {
                        float -= term;
                    }
                }
                if float.magnitude() > threshold.magnitude() {
                    let float_sign = if float.is_positive() {
                        Sign::Positive
                    } else {
                        Sign::Negative
                    };
                    assert_eq!(
                        exact, float_sign,
                        "sign disagreement at {g}, k = {k}, i = {i}: scaled value {float}"
                    );
                } else {
                    assert_eq!(
                        exact,
                        Sign::Zero,
                        "exact sign nonzero but high-precision value tiny at {g}, k = {k}, i = {i}"
                    );
                }
            }
        }
        checked += 1;
    }
}

fn binomial_int(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[test]
fn positivity_report_consistency() {
    // the ladder, the violation list, and the pass flag tell one story
    for seed in [3u64, 17, 99] {
        let g = rand_regular(6, 3, seed).unwrap();
        let rep = positivity(&g).unwrap();
        let negatives: Vec<(usize, usize)> = rep
            .ladder
            .signs
            .iter()
            .filter(|(_, s)| **s == Sign::Negative)
            .map(|(ki, _)| *ki)
            .collect();
        assert_eq!(negatives, rep.violations);
        assert_eq!(rep.pass, rep.violations.is_empty());
    }
}
