//! The log-ratio ladder `d(i)` and its finite differences, decided by exact
//! rational comparison.
//!
//! With `q_t = m_t (v-1)^t / (r^t mbar_t)`, the sign of
//! `Delta^k d(i) = sum_j (-1)^{k-j} C(k,j) ln q_{i+j}` equals the sign of
//! `prod_j q_{i+j}^{(-1)^{k-j} C(k,j)} - 1`, which is settled by comparing
//! two exact rational products. No floating point is involved anywhere.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::matchings::{match_counts, mbar, MatchVector};
use super::{BipartiteGraph, Error};
use crate::exactalg::Rational;
use crate::numutil::binomial;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl From<Ordering> for Sign {
    fn from(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

/// Signs of all meaningful `Delta^k d(i)` on one graph, keyed by `(k, i)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SignLadder {
    pub nside: usize,
    pub signs: BTreeMap<(usize, usize), Sign>,
}

fn rational_pow(q: &Rational, e: &BigInt) -> Rational {
    let mut acc = Rational::one();
    let mut base = q.clone();
    let mut e = e.to_u64().expect("exponent fits in u64");
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Exact sign of `Delta^k d(i)` from a matching vector.
pub fn delta_sign(
    mv: &MatchVector,
    v: usize,
    r: usize,
    k: usize,
    i: usize,
) -> Result<Sign, Error> {
    let nside = v / 2;
    if i + k > nside {
        return Err(Error::RangeViolation(format!(
            "i + k = {} exceeds nside = {nside}",
            i + k
        )));
    }
    // Accumulate the positive- and negative-exponent parts separately and
    // compare them.
    let mut pos = Rational::one();
    let mut neg = Rational::one();
    for j in 0..=k {
        let t = i + j;
        let mt = mv.count(t);
        if mt.is_zero() {
            return Err(Error::ZeroMatchCount { t });
        }
        let q = Rational::new(
            mt * BigInt::from(v as u64 - 1).pow(t as u32),
            BigInt::from(r as u64).pow(t as u32) * mbar(v, t)?,
        );
        let c = binomial(k, j);
        let qc = rational_pow(&q, &c);
        if (k - j) % 2 == 0 {
            pos *= qc;
        } else {
            neg *= qc;
        }
    }
    Ok(Sign::from(pos.cmp(&neg)))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PositivityReport {
    pub ladder: SignLadder,
    /// `(k, i)` pairs where the sign is negative.
    pub violations: Vec<(usize, usize)>,
    pub pass: bool,
}

/// Evaluate every meaningful `Delta^k d(i)` (i >= 0, k >= 0, i + k <= nside;
/// beyond that `m_t = 0` and the ladder is undefined) and report the
/// violating pairs.
pub fn positivity(g: &BipartiteGraph) -> Result<PositivityReport, Error> {
    let mv = match_counts(g);
    let nside = g.nside();
    let mut signs = BTreeMap::new();
    let mut violations = Vec::new();
    for k in 0..=nside {
        for i in 0..=(nside - k) {
            let s = delta_sign(&mv, g.v(), g.r(), k, i)?;
            if s == Sign::Negative {
                violations.push((k, i));
            }
            signs.insert((k, i), s);
        }
    }
    Ok(PositivityReport {
        ladder: SignLadder { nside, signs },
        pass: violations.is_empty(),
        violations,
    })
}
