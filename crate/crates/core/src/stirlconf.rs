//! Unsigned Stirling numbers of the first kind, their polynomial extension in
//! the upper index, ordered weighted set partitions, and the exact zero-sum
//! check over their evaluations.


use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactalg::{self, interpolate_poly, rat, MultiPoly, Rational, VarId};
use crate::graphlab::SplitMix64;
use crate::numutil::factorial;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("index out of range: {0}")]
    RangeViolation(String),
    #[error("degree-2w extension failed validation at n = {at}; the polynomial claim is violated")]
    DegreeClaim { at: usize },
    #[error("need {need} distinct values, got {got}")]
    BadValues { need: usize, got: usize },
    #[error(transparent)]
    Exact(#[from] exactalg::Error),
}

/// Unsigned Stirling number of the first kind: the coefficient of `x^k` in
/// the rising factorial `x (x+1) ... (x+n-1)`.
pub fn stirling1(n: usize, k: usize) -> Result<BigInt, Error> {
    if k > n {
        return Err(Error::RangeViolation(format!("k = {k} exceeds n = {n}")));
    }
    // row recurrence: s(n, k) = s(n-1, k-1) + (n-1) s(n-1, k)
    let mut row = vec![BigInt::zero(); n + 1];
    row[0] = BigInt::one();
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); n + 1];
        for t in 0..m {
            if row[t].is_zero() {
                continue;
            }
            next[t + 1] += &row[t];
            next[t] += &row[t] * (m - 1);
        }
        row = next;
    }
    Ok(row[k].clone())
}

fn pw_var() -> VarId {
    VarId::new("x")
}

/// The degree-2w polynomial `P_w` with `P_w(n) = stirling1(n, n-w)` for every
/// integer `n >= w`, found by interpolation at `2w + 1` nodes and validated
/// at two extra nodes.
pub fn pw_poly(w: usize) -> Result<MultiPoly, Error> {
    let nodes: Vec<(Rational, MultiPoly)> = (w..=3 * w + 2)
        .map(|n| {
            let v = stirling1(n, n - w).expect("n >= w");
            (
                rat(n as i64),
                MultiPoly::constant(Rational::from_integer(v)),
            )
        })
        .collect();
    interpolate_poly(pw_var(), &nodes, 2 * w).map_err(|e| match e {
        exactalg::Error::InterpValidation { at } => Error::DegreeClaim {
            at: at.parse().unwrap_or(0),
        },
        other => Error::Exact(other),
    })
}

/// Evaluate `P_w` at a polynomial argument (covers rational arguments as
/// constants).
pub fn pw_eval(pw: &MultiPoly, at: &MultiPoly) -> MultiPoly {
    pw.subst_var(pw_var(), at).expect("P_w has forward powers")
}

/// An ordered sequence of disjoint nonempty blocks covering `{0..g-1}`, each
/// block carrying a nonnegative weight; the weights sum to the configured
/// total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedConfiguration {
    pub blocks: Vec<Vec<usize>>,
    pub weights: Vec<usize>,
}

impl WeightedConfiguration {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// All unordered set partitions of `{0..g-1}` in restricted-growth order,
/// blocks listed by first element.
fn set_partitions(g: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(g: usize, next: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next == g {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            rec(g, next + 1, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![next]);
        rec(g, next + 1, blocks, out);
        blocks.pop();
    }
    rec(g, 0, &mut blocks, &mut out);
    out
}

/// Compositions of `w` into `b` nonnegative parts in colexicographic order
/// (last coordinate varies slowest, ascending).
fn compositions_colex(w: usize, b: usize) -> Vec<Vec<usize>> {
    if b == 0 {
        return if w == 0 { vec![vec![]] } else { vec![] };
    }
    if b == 1 {
        return vec![vec![w]];
    }
    let mut out = Vec::new();
    for last in 0..=w {
        for mut head in compositions_colex(w - last, b - 1) {
            head.push(last);
            out.push(head);
        }
    }
    out
}

/// Permutations of `0..n` in lexicographic order.
fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    loop {
        out.push(items.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| items[i] < items[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| items[j] > items[i]).unwrap();
        items.swap(i, j);
        items[i + 1..].reverse();
    }
    out
}

/// Lazy deterministic stream over every weighted configuration of `(g, w)`:
/// restricted-growth partitions, then block orderings in lexicographic order,
/// then weight compositions in colexicographic order.
pub struct WeightedConfigs {
    partitions: Vec<Vec<Vec<usize>>>,
    w: usize,
    part_idx: usize,
    perms: Vec<Vec<usize>>,
    comps: Vec<Vec<usize>>,
    perm_idx: usize,
    comp_idx: usize,
}

/// Stream of all weighted configurations. `w` must satisfy `0 <= w <= g - 2`.
pub fn enum_weighted_configs(g: usize, w: usize) -> Result<WeightedConfigs, Error> {
    if g < 2 {
        return Err(Error::RangeViolation(format!("g = {g} must be at least 2")));
    }
    if w + 2 > g {
        return Err(Error::RangeViolation(format!(
            "w = {w} exceeds g - 2 = {}",
            g - 2
        )));
    }
    let partitions = set_partitions(g);
    let mut it = WeightedConfigs {
        partitions,
        w,
        part_idx: 0,
        perms: Vec::new(),
        comps: Vec::new(),
        perm_idx: 0,
        comp_idx: 0,
    };
    it.load_partition();
    Ok(it)
}

impl WeightedConfigs {
    fn load_partition(&mut self) {
        if self.part_idx < self.partitions.len() {
            let b = self.partitions[self.part_idx].len();
            self.perms = permutations_lex(b);
            self.comps = compositions_colex(self.w, b);
            self.perm_idx = 0;
            self.comp_idx = 0;
        }
    }
}

impl Iterator for WeightedConfigs {
    type Item = WeightedConfiguration;

    fn next(&mut self) -> Option<WeightedConfiguration> {
        while self.part_idx < self.partitions.len() {
            if self.perm_idx < self.perms.len() && self.comp_idx < self.comps.len() {
                let part = &self.partitions[self.part_idx];
                let perm = &self.perms[self.perm_idx];
                let cfg = WeightedConfiguration {
                    blocks: perm.iter().map(|&b| part[b].clone()).collect(),
                    weights: self.comps[self.comp_idx].clone(),
                };
                self.comp_idx += 1;
                if self.comp_idx == self.comps.len() {
                    self.comp_idx = 0;
                    self.perm_idx += 1;
                }
                return Some(cfg);
            }
            self.part_idx += 1;
            self.load_partition();
        }
        None
    }
}

/// Closed-form stream length: `sum_b b! S(g, b) C(w + b - 1, b - 1)`.
pub fn weighted_config_count(g: usize, w: usize) -> u128 {
    // Stirling numbers of the second kind, small table
    let mut s2 = vec![vec![0u128; g + 1]; g + 1];
    s2[0][0] = 1;
    for n in 1..=g {
        for k in 1..=n {
            s2[n][k] = s2[n - 1][k - 1] + k as u128 * s2[n - 1][k];
        }
    }
    let binom = |n: usize, k: usize| -> u128 {
        if k > n {
            return 0;
        }
        let mut acc = 1u128;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc
    };
    let mut fact = 1u128;
    let mut total = 0u128;
    for b in 1..=g {
        fact *= b as u128;
        total += fact * s2[g][b] * binom(w + b - 1, b - 1);
    }
    total
}

/// Values assigned to the ground set: distinct rationals, or symbolic
/// variables for the polynomial-identity form of the check.
#[derive(Clone, Debug)]
pub enum CValues {
    Rationals(Vec<Rational>),
    Symbolic(Vec<VarId>),
}

impl CValues {
    fn len(&self) -> usize {
        match self {
            CValues::Rationals(v) => v.len(),
            CValues::Symbolic(v) => v.len(),
        }
    }

    fn value_poly(&self, idx: usize) -> MultiPoly {
        match self {
            CValues::Rationals(v) => MultiPoly::constant(v[idx].clone()),
            CValues::Symbolic(v) => MultiPoly::var(v[idx]),
        }
    }
}

/// Evaluation of one weighted configuration:
/// `(-1)^b (1/b) prod_i P_{w_i}(t_i)` with `t_i` the sum of the values in
/// block i. Rational inputs yield a constant polynomial.
pub fn config_eval(cfg: &WeightedConfiguration, values: &CValues) -> Result<MultiPoly, Error> {
    let b = cfg.block_count();
    let wmax = cfg.weights.iter().copied().max().unwrap_or(0);
    let pws: Vec<MultiPoly> = (0..=wmax).map(pw_poly).collect::<Result<_, _>>()?;
    let mut acc = MultiPoly::constant(Rational::new(
        BigInt::from(if b % 2 == 0 { 1 } else { -1 }),
        BigInt::from(b as i64),
    ));
    for (block, &wi) in cfg.blocks.iter().zip(&cfg.weights) {
        let mut t = MultiPoly::zero();
        for &e in block {
            t = &t + &values.value_poly(e);
        }
        acc = &acc * &pw_eval(&pws[wi], &t);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChapmanReport {
    pub g: usize,
    pub w: usize,
    pub mode: String,
    pub seed: Option<u64>,
    pub c_values: Vec<String>,
    pub config_count: u128,
    /// Canonical serialization of the total (the zero polynomial prints "0").
    pub sum: String,
    pub pass: bool,
}

/// Seeded distinct rationals for the ground set.
pub fn random_distinct_rationals(g: usize, seed: u64) -> Vec<Rational> {
    let mut gen = SplitMix64::new(seed);
    let mut out: Vec<Rational> = Vec::with_capacity(g);
    while out.len() < g {
        let num = gen.below(201) as i64 - 100;
        let den = gen.below(12) as i64 + 1;
        let cand = crate::exactalg::ratio(num, den);
        if !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Sum the evaluations of every weighted configuration of `(g, w)` and check
/// the total is exactly zero (the zero polynomial in symbolic mode).
pub fn chapman_check(g: usize, w: usize, values: &CValues, seed: Option<u64>) -> Result<ChapmanReport, Error> {
    if values.len() != g {
        return Err(Error::BadValues {
            need: g,
            got: values.len(),
        });
    }
    if let CValues::Rationals(v) = values {
        for i in 0..v.len() {
            for k in (i + 1)..v.len() {
                if v[i] == v[k] {
                    return Err(Error::BadValues { need: g, got: i });
                }
            }
        }
    }
    // probe the range restrictions through the enumerator
    let _ = enum_weighted_configs(g, w)?;
    let partitions = set_partitions(g);
    let pws: Vec<MultiPoly> = (0..=w).map(pw_poly).collect::<Result<_, _>>()?;

    // Per partition: cache P_{w'}(t_B) for every block and weight, then sum
    // over weight assignments. Every ordering of the blocks contributes the
    // same product as the corresponding assignment, so the stream total is
    // b! times the per-assignment sum — the regrouping is exact and is
    // checked against the literal stream sum in tests.
    let results: Vec<(MultiPoly, u128)> = partitions
        .par_iter()
        .map(|part| {
            let b = part.len();
            let pvals: Vec<Vec<MultiPoly>> = part
                .iter()
                .map(|block| {
                    let mut t = MultiPoly::zero();
                    for &e in block {
                        t = &t + &values.value_poly(e);
                    }
                    (0..=w).map(|wi| pw_eval(&pws[wi], &t)).collect()
                })
                .collect();
            let sign_over_b = Rational::new(
                BigInt::from(if b % 2 == 0 { 1 } else { -1 }),
                BigInt::from(b as i64),
            );
            let orderings = factorial(b);
            let comps = compositions_colex(w, b);
            let count = comps.len() as u128 * orderings.to_u128().expect("b <= 12");
            let scale = Rational::from_integer(orderings);
            let local = if let CValues::Rationals(_) = values {
                let qvals: Vec<Vec<Rational>> = pvals
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|p| p.as_constant().expect("rational mode"))
                            .collect()
                    })
                    .collect();
                let mut acc = Rational::zero();
                for comp in &comps {
                    let mut prod = sign_over_b.clone();
                    for (blk, &wi) in comp.iter().enumerate() {
                        prod *= &qvals[blk][wi];
                    }
                    acc += prod;
                }
                MultiPoly::constant(acc * scale)
            } else {
                let mut acc = MultiPoly::zero();
                for comp in &comps {
                    let mut prod = MultiPoly::constant(sign_over_b.clone());
                    for (blk, &wi) in comp.iter().enumerate() {
                        prod = &prod * &pvals[blk][wi];
                    }
                    acc = &acc + &prod;
                }
                acc.scale(&scale)
            };
            (local, count)
        })
        .collect();
    let mut total = MultiPoly::zero();
    let mut config_count = 0u128;
    for (p, c) in results {
        total = &total + &p;
        config_count += c;
    }
    debug_assert_eq!(config_count, weighted_config_count(g, w));
    let (mode, c_values) = match values {
        CValues::Rationals(v) => (
            "random-rational".to_string(),
            v.iter().map(|r| r.to_string()).collect(),
        ),
        CValues::Symbolic(v) => (
            "symbolic".to_string(),
            v.iter().map(|v| v.name()).collect(),
        ),
    };
    Ok(ChapmanReport {
        g,
        w,
        mode,
        seed,
        c_values,
        config_count,
        sum: total.to_string(),
        pass: total.is_zero(),
    })
}

/// Ground-set variables `c1..cg` for symbolic checks.
pub fn symbolic_ground_set(g: usize) -> Vec<VarId> {
    (1..=g).map(|i| VarId::new(&format!("c{i}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouped_sum_equals_literal_stream_sum() {
        // chapman_check's per-assignment regrouping must reproduce the
        // literal config-by-config stream total exactly
        for g in 2..=5usize {
            for w in 0..=(g - 2) {
                let vals = CValues::Rationals(random_distinct_rationals(g, 7 * g as u64 + w as u64));
                let mut literal = MultiPoly::zero();
                let mut n = 0u128;
                for cfg in enum_weighted_configs(g, w).unwrap() {
                    literal = &literal + &config_eval(&cfg, &vals).unwrap();
                    n += 1;
                }
                let rep = chapman_check(g, w, &vals, None).unwrap();
                assert_eq!(rep.sum, literal.to_string(), "g = {g}, w = {w}");
                assert_eq!(rep.config_count, n);
            }
        }
        // symbolic spot check
        let vals = CValues::Symbolic(symbolic_ground_set(4));
        let mut literal = MultiPoly::zero();
        for cfg in enum_weighted_configs(4, 2).unwrap() {
            literal = &literal + &config_eval(&cfg, &vals).unwrap();
        }
        let rep = chapman_check(4, 2, &vals, None).unwrap();
        assert_eq!(rep.sum, literal.to_string());
    }

    #[test]
    fn stirling_small_values() {
        assert_eq!(stirling1(3, 3).unwrap(), BigInt::from(1));
        assert_eq!(stirling1(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(stirling1(3, 1).unwrap(), BigInt::from(2));
        assert_eq!(stirling1(0, 0).unwrap(), BigInt::from(1));
        assert!(stirling1(2, 3).is_err());
    }

    #[test]
    fn pw_small_cases() {
        assert_eq!(pw_poly(0).unwrap(), MultiPoly::one());
        // P_1(x) = x(x-1)/2
        let p1 = pw_poly(1).unwrap();
        assert_eq!(p1.to_string(), "1/2*x^2 - 1/2*x");
        let at3 = pw_eval(&p1, &MultiPoly::int(3));
        assert_eq!(at3, MultiPoly::int(3)); // = stirling1(3, 2)
    }

    #[test]
    fn pw_matches_stirling_well_beyond_nodes() {
        for w in 0..=4usize {
            let pw = pw_poly(w).unwrap();
            for n in w..=(3 * w + 6) {
                let got = pw_eval(&pw, &MultiPoly::int(n as i64));
                let want =
                    MultiPoly::constant(Rational::from_integer(stirling1(n, n - w).unwrap()));
                assert_eq!(got, want, "w = {w}, n = {n}");
            }
        }
    }

    #[test]
    fn enumeration_matches_closed_form_counts() {
        for g in 2..=6usize {
            for w in 0..=(g - 2) {
                let n = enum_weighted_configs(g, w).unwrap().count() as u128;
                assert_eq!(n, weighted_config_count(g, w), "g = {g}, w = {w}");
            }
        }
    }

    #[test]
    fn g2_w0_stream_by_hand() {
        let cfgs: Vec<WeightedConfiguration> =
            enum_weighted_configs(2, 0).unwrap().collect();
        assert_eq!(cfgs.len(), 3);
        // {0,1} single block, then the two orderings of {0},{1}
        assert_eq!(cfgs[0].blocks, vec![vec![0, 1]]);
        assert_eq!(cfgs[1].blocks, vec![vec![0], vec![1]]);
        assert_eq!(cfgs[2].blocks, vec![vec![1], vec![0]]);
    }

    #[test]
    fn g3_w0_is_fubini_13() {
        let n = enum_weighted_configs(3, 0).unwrap().count();
        assert_eq!(n, 13);
    }

    #[test]
    fn range_restrictions() {
        assert!(enum_weighted_configs(1, 0).is_err());
        assert!(enum_weighted_configs(3, 2).is_err()); // w > g - 2
    }

    #[test]
    fn config_eval_hand_values() {
        let vals = CValues::Rationals(vec![rat(1), rat(2)]);
        let single = WeightedConfiguration {
            blocks: vec![vec![0, 1]],
            weights: vec![0],
        };
        assert_eq!(config_eval(&single, &vals).unwrap(), MultiPoly::int(-1));
        let pair = WeightedConfiguration {
            blocks: vec![vec![0], vec![1]],
            weights: vec![0, 0],
        };
        assert_eq!(
            config_eval(&pair, &vals).unwrap(),
            MultiPoly::constant(crate::exactalg::ratio(1, 2))
        );
    }

    #[test]
    fn chapman_g2_hand_sum() {
        let vals = CValues::Rationals(vec![rat(5), rat(-7)]);
        let rep = chapman_check(2, 0, &vals, None).unwrap();
        assert_eq!(rep.config_count, 3);
        assert!(rep.pass);
        assert_eq!(rep.sum, "0");
    }

    #[test]
    fn chapman_small_random_and_symbolic() {
        for (g, w) in [(3usize, 1usize), (4, 2), (5, 1)] {
            let vals = CValues::Rationals(random_distinct_rationals(g, 99));
            let rep = chapman_check(g, w, &vals, Some(99)).unwrap();
            assert!(rep.pass, "g = {g}, w = {w}: sum = {}", rep.sum);
        }
        let vals = CValues::Symbolic(symbolic_ground_set(3));
        let rep = chapman_check(3, 1, &vals, None).unwrap();
        assert!(rep.pass, "symbolic g=3 w=1: {}", rep.sum);
    }

    #[test]
    fn chapman_sum_is_label_symmetric() {
        // permuting the assigned values leaves the total at zero (and the
        // config-level multiset of evaluations unchanged)
        let a = CValues::Rationals(vec![rat(2), rat(3), rat(5), rat(8)]);
        let b = CValues::Rationals(vec![rat(8), rat(2), rat(5), rat(3)]);
        let ra = chapman_check(4, 2, &a, None).unwrap();
        let rb = chapman_check(4, 2, &b, None).unwrap();
        assert!(ra.pass && rb.pass);
    }

    #[test]
    fn duplicate_values_rejected() {
        let vals = CValues::Rationals(vec![rat(1), rat(1)]);
        assert!(matches!(
            chapman_check(2, 0, &vals, None),
            Err(Error::BadValues { .. })
        ));
    }

    #[test]
    fn factored_route_agrees_with_enumerated_sum() {
        // independent oracle: per unordered partition the ordered sum equals
        // b! [z^w] prod_B (sum_w' P_w'(t_B) z^w'), scaled by (-1)^b / b
        let g = 5;
        let w = 2;
        let vals = random_distinct_rationals(g, 4242);
        let cvals = CValues::Rationals(vals.clone());
        let mut enumerated = MultiPoly::zero();
        for cfg in enum_weighted_configs(g, w).unwrap() {
            enumerated = &enumerated + &config_eval(&cfg, &cvals).unwrap();
        }
        let mut factored = Rational::zero();
        let pws: Vec<MultiPoly> = (0..=w).map(|t| pw_poly(t).unwrap()).collect();
        for part in set_partitions(g) {
            let b = part.len();
            // z-polynomial per block
            let mut prod = vec![Rational::zero(); w + 1];
            prod[0] = Rational::one();
            for block in &part {
                let t: Rational = block.iter().map(|&e| vals[e].clone()).sum();
                let series: Vec<Rational> = (0..=w)
                    .map(|wi| {
                        pw_eval(&pws[wi], &MultiPoly::constant(t.clone()))
                            .as_constant()
                            .unwrap()
                    })
                    .collect();
                let mut next = vec![Rational::zero(); w + 1];
                for a in 0..=w {
                    for bb in 0..=(w - a) {
                        let term = &prod[a] * &series[bb];
                        next[a + bb] = &next[a + bb] + &term;
                    }
                }
                prod = next;
            }
            let sign = if b % 2 == 0 { 1 } else { -1 };
            let fact_over_b = Rational::new(
                BigInt::from(sign) * factorial(b),
                BigInt::from(b as u64),
            );
            factored += fact_over_b * prod[w].clone();
        }
        assert_eq!(enumerated.as_constant().unwrap(), factored);
        assert!(factored.is_zero());
    }
}
