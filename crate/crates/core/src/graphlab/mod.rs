//! Exact matching counts on regular bipartite graphs, the log-ratio ladder
//! and its finite differences, positivity testing, and exhaustive/sampled
//! censuses.

mod census;
mod enumerate;
mod generate;
mod matchings;
mod positivity;

pub use census::{census, CensusMode, CensusReport, ViolationWitness};
pub use enumerate::{canonical_key, enum_classes, enum_regular, GraphClass};
pub use generate::{rand_regular, rand_regular_with_budget, SplitMix64};
pub use matchings::{match_counts, mbar, MatchVector};
pub use positivity::{delta_sign, positivity, PositivityReport, Sign, SignLadder};

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("bad graph dimensions: {0}")]
    BadDimensions(String),
    #[error("graph is not {r}-regular: {detail}")]
    NotRegular { r: usize, detail: String },
    #[error("index out of range: {0}")]
    RangeViolation(String),
    #[error("invariant violated: zero matching count m_{t} inside the meaningful range")]
    ZeroMatchCount { t: usize },
    #[error("pairing sampler exhausted its retry budget of {attempts}")]
    RetryBudgetExhausted { attempts: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Biadjacency view of an r-regular bipartite graph with `nside` vertices on
/// each side (v = 2 nside in total). Row bit `j` of `rows[i]` is the edge
/// between left vertex `i` and right vertex `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct BipartiteGraph {
    nside: usize,
    r: usize,
    rows: Vec<u32>,
}

impl BipartiteGraph {
    pub fn new(nside: usize, r: usize, rows: Vec<u32>) -> Result<BipartiteGraph, Error> {
        if nside == 0 || nside > 16 {
            return Err(Error::BadDimensions(format!(
                "nside = {nside} outside supported range 1..=16"
            )));
        }
        if r == 0 || r > nside {
            return Err(Error::BadDimensions(format!(
                "regularity r = {r} with nside = {nside}"
            )));
        }
        if rows.len() != nside {
            return Err(Error::BadDimensions(format!(
                "{} rows for nside = {nside}",
                rows.len()
            )));
        }
        let full = (1u32 << nside) - 1;
        let mut colsum = vec![0usize; nside];
        for (i, &row) in rows.iter().enumerate() {
            if row & !full != 0 {
                return Err(Error::BadDimensions(format!("row {i} has bits beyond column {nside}")));
            }
            if row.count_ones() as usize != r {
                return Err(Error::NotRegular {
                    r,
                    detail: format!("row {i} has degree {}", row.count_ones()),
                });
            }
            for c in 0..nside {
                if row >> c & 1 == 1 {
                    colsum[c] += 1;
                }
            }
        }
        if let Some(c) = colsum.iter().position(|&s| s != r) {
            return Err(Error::NotRegular {
                r,
                detail: format!("column {c} has degree {}", colsum[c]),
            });
        }
        Ok(BipartiteGraph { nside, r, rows })
    }

    pub fn nside(&self) -> usize {
        self.nside
    }

    /// Total vertex count v = 2 nside.
    pub fn v(&self) -> usize {
        2 * self.nside
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        self.rows[left] >> right & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.nside * self.r);
        for i in 0..self.nside {
            for j in 0..self.nside {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Rows as 0/1 strings, column 0 first.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&row| {
                (0..self.nside)
                    .map(|c| if row >> c & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Parse the text record produced by `Display`.
    pub fn parse_record(s: &str) -> Result<BipartiteGraph, Error> {
        let mut nside = None;
        let mut r = None;
        let mut rows: Option<Vec<u32>> = None;
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::BadParams(format!("bad field `{field}`")))?;
            match key {
                "nside" => {
                    nside = Some(value.parse().map_err(|_| {
                        Error::BadParams(format!("bad nside `{value}`"))
                    })?)
                }
                "r" => {
                    r = Some(value.parse().map_err(|_| {
                        Error::BadParams(format!("bad r `{value}`"))
                    })?)
                }
                "rows" => {
                    let mut parsed = Vec::new();
                    for rowstr in value.split(',') {
                        let mut row = 0u32;
                        for (c, ch) in rowstr.chars().enumerate() {
                            match ch {
                                '1' => row |= 1 << c,
                                '0' => {}
                                _ => {
                                    return Err(Error::BadParams(format!(
                                        "bad row string `{rowstr}`"
                                    )))
                                }
                            }
                        }
                        parsed.push(row);
                    }
                    rows = Some(parsed);
                }
                _ => return Err(Error::BadParams(format!("unknown field `{key}`"))),
            }
        }
        match (nside, r, rows) {
            (Some(n), Some(r), Some(rows)) => BipartiteGraph::new(n, r, rows),
            _ => Err(Error::BadParams("record needs nside, r, rows".to_string())),
        }
    }

    /// True when the graph is connected (every vertex has degree >= 1 here,
    /// so a single search settles it).
    pub fn is_connected(&self) -> bool {
        let n = self.nside;
        let mut seen_left = vec![false; n];
        let mut seen_right = vec![false; n];
        let mut stack = vec![(true, 0usize)];
        seen_left[0] = true;
        while let Some((is_left, v)) = stack.pop() {
            if is_left {
                for j in 0..n {
                    if self.has_edge(v, j) && !seen_right[j] {
                        seen_right[j] = true;
                        stack.push((false, j));
                    }
                }
            } else {
                for i in 0..n {
                    if self.has_edge(i, v) && !seen_left[i] {
                        seen_left[i] = true;
                        stack.push((true, i));
                    }
                }
            }
        }
        seen_left.into_iter().all(|b| b) && seen_right.into_iter().all(|b| b)
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nside={} r={} rows={}",
            self.nside,
            self.r,
            self.row_strings().join(",")
        )
    }
}

/// K_{n,n}: the complete bipartite graph (all-ones biadjacency).
pub fn complete_bipartite(nside: usize) -> BipartiteGraph {
    let full = (1u32 << nside) - 1;
    BipartiteGraph::new(nside, nside, vec![full; nside]).expect("complete graph is regular")
}

/// The 2n-cycle as a 2-regular bipartite graph: left i adjacent to right i
/// and right i+1 (mod n).
pub fn cycle_bipartite(nside: usize) -> BipartiteGraph {
    assert!(nside >= 2);
    let rows = (0..nside)
        .map(|i| (1u32 << i) | (1 << ((i + 1) % nside)))
        .collect();
    BipartiteGraph::new(nside, 2, rows).expect("cycle is 2-regular")
}
