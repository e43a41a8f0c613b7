//! Exhaustive enumeration of r-regular biadjacency matrices with
//! canonical-form deduplication under independent row/column permutations and
//! the side swap.
//!
//! Enumeration backtracks over rows in non-increasing bitmask order (every
//! matrix row-sorts uniquely, and the number of row orderings of a sorted
//! matrix is `n! / prod(mult!)`, which recovers exact labeled counts). The
//! canonical key maximizes the row-major bit string: rows are placed one at a
//! time while an ordered partition of the columns is refined support-first,
//! which realizes the optimal column order for any fixed row order; ties
//! branch.

use std::collections::BTreeMap;

use super::{BipartiteGraph, Error};

/// One isomorphism class: canonical key, a representative, and the number of
/// distinct biadjacency matrices (labeled graphs with sides fixed) in the
/// class that the enumeration saw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphClass {
    pub canon: u128,
    pub rep: BipartiteGraph,
    pub labeled_count: u128,
}

/// All r-regular biadjacency matrices with rows in non-increasing bitmask
/// order, via backtracking with column-capacity pruning. Calls `visit` with
/// each sorted matrix.
fn for_each_row_sorted(nside: usize, r: usize, visit: &mut impl FnMut(&[u32])) {
    let patterns: Vec<u32> = {
        let mut v: Vec<u32> = (0u32..1 << nside)
            .filter(|m| m.count_ones() as usize == r)
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let mut rows: Vec<u32> = Vec::with_capacity(nside);
    let mut colsum = vec![0usize; nside];
    fn rec(
        nside: usize,
        r: usize,
        patterns: &[u32],
        rows: &mut Vec<u32>,
        colsum: &mut [usize],
        max_value: u32,
        visit: &mut impl FnMut(&[u32]),
    ) {
        if rows.len() == nside {
            visit(rows);
            return;
        }
        let remaining = nside - rows.len();
        'pattern: for &pat in patterns {
            if pat > max_value {
                continue;
            }
            for c in 0..nside {
                if pat >> c & 1 == 1 && colsum[c] + 1 > r {
                    continue 'pattern;
                }
            }
            for c in 0..nside {
                let add = (pat >> c & 1) as usize;
                // every column still needs r - colsum ones from remaining-1 rows
                if r - (colsum[c] + add) > remaining - 1 {
                    continue 'pattern;
                }
            }
            for c in 0..nside {
                colsum[c] += (pat >> c & 1) as usize;
            }
            rows.push(pat);
            rec(nside, r, patterns, rows, colsum, pat, visit);
            rows.pop();
            for c in 0..nside {
                colsum[c] -= (pat >> c & 1) as usize;
            }
        }
    }
    rec(nside, r, &patterns, &mut rows, &mut colsum, u32::MAX, visit);
}

/// Number of row orderings of a sorted matrix: `n! / prod(mult_v!)` over the
/// multiplicities of equal rows.
fn row_orderings(rows: &[u32]) -> u128 {
    let mut fact = vec![1u128; rows.len() + 1];
    for i in 1..=rows.len() {
        fact[i] = fact[i - 1] * i as u128;
    }
    let mut denom = 1u128;
    let mut run = 1usize;
    for i in 1..=rows.len() {
        if i < rows.len() && rows[i] == rows[i - 1] {
            run += 1;
        } else {
            denom *= fact[run];
            run = 1;
        }
    }
    fact[rows.len()] / denom
}

/// Canonical key: the maximum over row permutations, column permutations, and
/// the side swap of the row-major biadjacency bit string, packed into a u128
/// (row 0 in the most significant bits).
pub fn canonical_key(g: &BipartiteGraph) -> u128 {
    let n = g.nside();
    assert!(n * n <= 128, "canonical key needs nside^2 <= 128");
    let rows = g.rows().to_vec();
    let mut cols = vec![0u32; n];
    for i in 0..n {
        for c in 0..n {
            if rows[i] >> c & 1 == 1 {
                cols[c] |= 1 << i;
            }
        }
    }
    max_string(&rows, n).max(max_string(&cols, n))
}

/// Branch-and-bound maximization of the row-major string for one orientation.
fn max_string(rows: &[u32], n: usize) -> u128 {
    // ordered column partition: contiguous groups in `order` with group ids
    let mut best = 0u128;
    let order: Vec<usize> = (0..n).collect();
    let groups: Vec<usize> = vec![0; n]; // group id per position in `order`
    let mut used = vec![false; n];
    bnb(rows, n, &order, &groups, &mut used, 0, 0, &mut best);
    best
}

fn bnb(
    rows: &[u32],
    n: usize,
    order: &[usize],
    groups: &[usize],
    used: &mut [bool],
    depth: usize,
    prefix: u128,
    best: &mut u128,
) {
    if depth == n {
        if prefix > *best {
            *best = prefix;
        }
        return;
    }
    // For each unused row, the best achievable bit pattern at this depth:
    // within every column group, support columns first.
    let mut best_pat = 0u32;
    let mut winners: Vec<usize> = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let mut pat = 0u32;
        let mut pos = 0;
        while pos < n {
            let gid = groups[pos];
            let mut len = 0;
            let mut ones = 0;
            let mut q = pos;
            while q < n && groups[q] == gid {
                if rows[i] >> order[q] & 1 == 1 {
                    ones += 1;
                }
                len += 1;
                q += 1;
            }
            for t in 0..len {
                pat <<= 1;
                if t < ones {
                    pat |= 1;
                }
            }
            pos = q;
        }
        if pat > best_pat {
            best_pat = pat;
            winners.clear();
            winners.push(i);
        } else if pat == best_pat {
            winners.push(i);
        }
    }
    let new_prefix = (prefix << n) | best_pat as u128;
    for &i in &winners {
        // refine: inside each group, support columns first, splitting the group
        let mut new_order = Vec::with_capacity(n);
        let mut new_groups = Vec::with_capacity(n);
        let mut gid_counter = 0;
        let mut pos = 0;
        while pos < n {
            let gid = groups[pos];
            let mut members = Vec::new();
            let mut q = pos;
            while q < n && groups[q] == gid {
                members.push(order[q]);
                q += 1;
            }
            let (sup, non): (Vec<usize>, Vec<usize>) =
                members.iter().partition(|&&c| rows[i] >> c & 1 == 1);
            if !sup.is_empty() {
                for c in sup {
                    new_order.push(c);
                    new_groups.push(gid_counter);
                }
                gid_counter += 1;
            }
            if !non.is_empty() {
                for c in non {
                    new_order.push(c);
                    new_groups.push(gid_counter);
                }
                gid_counter += 1;
            }
            pos = q;
        }
        used[i] = true;
        bnb(rows, n, &new_order, &new_groups, used, depth + 1, new_prefix, best);
        used[i] = false;
    }
}

/// Exhaustive enumeration up to isomorphism, with per-class labeled counts.
/// Classes come out sorted by canonical key, descending.
pub fn enum_classes(nside: usize, r: usize) -> Result<Vec<GraphClass>, Error> {
    if r == 0 || r > nside {
        return Err(Error::BadParams(format!("nside = {nside}, r = {r}")));
    }
    if nside * nside > 128 {
        return Err(Error::BadParams(format!(
            "nside = {nside} too large for exhaustive canonical forms"
        )));
    }
    let mut classes: BTreeMap<u128, (Vec<u32>, u128)> = BTreeMap::new();
    for_each_row_sorted(nside, r, &mut |rows| {
        let g = BipartiteGraph::new(nside, r, rows.to_vec()).expect("enumerated matrix is regular");
        let key = canonical_key(&g);
        let labeled = row_orderings(rows);
        let entry = classes.entry(key).or_insert_with(|| (rows.to_vec(), 0));
        entry.1 += labeled;
    });
    Ok(classes
        .into_iter()
        .rev()
        .map(|(canon, (rows, labeled_count))| GraphClass {
            canon,
            rep: BipartiteGraph::new(nside, r, rows).expect("representative is regular"),
            labeled_count,
        })
        .collect())
}

/// Representatives only.
pub fn enum_regular(nside: usize, r: usize) -> Result<Vec<BipartiteGraph>, Error> {
    Ok(enum_classes(nside, r)?
        .into_iter()
        .map(|c| c.rep)
        .collect())
}
