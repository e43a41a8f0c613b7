//! Desk-scale checkers for the two structural conjectures about the solved
//! `F_i`: affine dependence on the `u` variables, and per-monomial
//! coefficients that are rational functions of `p` vanishing at infinity.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::bellkit::BellContext;
use crate::exactalg::{fit_ratfn, Monomial, MultiPoly, Rational, VarId};
use crate::ftransform::{self, solve_f, FSolution};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Transform(#[from] ftransform::Error),
    #[error(transparent)]
    Bell(#[from] crate::bellkit::Error),
    #[error("window [{p_min}, {p_max}] too small: need at least {need} sample points")]
    WindowTooSmall {
        p_min: usize,
        p_max: usize,
        need: usize,
    },
    #[error("monomial mentions `{var}`, which is not a reduced u/d variable")]
    ForeignVariable { var: String },
    #[error("target index i = {0} must be at least 2")]
    BadIndex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// Shared per-p solution cache; solutions are immutable once computed.
#[derive(Default)]
pub struct FCache {
    map: Mutex<BTreeMap<usize, Arc<FSolution>>>,
}

impl FCache {
    pub fn new() -> FCache {
        FCache::default()
    }

    pub fn get(&self, p: usize) -> Result<Arc<FSolution>, Error> {
        if let Some(sol) = self.map.lock().unwrap().get(&p) {
            return Ok(sol.clone());
        }
        let ctx = BellContext::new(p)?;
        let sol = Arc::new(solve_f(&ctx)?);
        let mut guard = self.map.lock().unwrap();
        Ok(guard.entry(p).or_insert(sol).clone())
    }
}

// ---- Conjecture 1: affine u-dependence ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conj1Report {
    pub p: usize,
    pub pass: bool,
    /// First monomial of total u-degree >= 2, if any.
    pub witness: Option<UDegreeWitness>,
    /// Whether any monomial is entirely free of u variables (reported, not a
    /// failure).
    pub has_u_free_monomials: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UDegreeWitness {
    pub i: usize,
    pub monomial: String,
    pub u_degree: i64,
}

fn u_degree(ctx: &BellContext, m: &Monomial) -> i64 {
    let uset: BTreeSet<VarId> = (2..=ctx.p()).map(|k| ctx.u_var(k)).collect();
    m.iter()
        .filter(|(v, _)| uset.contains(v))
        .map(|(_, e)| e as i64)
        .sum()
}

/// Check that every monomial of every `F_i` has total u-degree at most 1.
pub fn check_conj1(p: usize) -> Result<Conj1Report, Error> {
    let ctx = BellContext::new(p)?;
    let sol = solve_f(&ctx)?;
    Ok(check_conj1_solution(&ctx, &sol))
}

/// Same check against an externally supplied solution (used for
/// fault-injection tests).
pub fn check_conj1_solution(ctx: &BellContext, sol: &FSolution) -> Conj1Report {
    let mut witness = None;
    let mut has_u_free = false;
    'outer: for (i, fi) in sol.iter() {
        for (m, _) in fi.iter() {
            let deg = u_degree(ctx, m);
            if deg == 0 {
                has_u_free = true;
            }
            if deg >= 2 {
                witness = Some(UDegreeWitness {
                    i,
                    monomial: m.to_string(),
                    u_degree: deg,
                });
                break 'outer;
            }
        }
    }
    Conj1Report {
        p: ctx.p(),
        pass: witness.is_none(),
        witness,
        has_u_free_monomials: has_u_free,
    }
}

// ---- Conjecture 2: rational-in-p coefficients vanishing at infinity ----

/// Sampled coefficient of one monomial of `F_i` as `p` varies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTrace {
    pub i: usize,
    pub monomial: Monomial,
    pub samples: Vec<(usize, Rational)>,
    /// Window members where the monomial mentions a variable outside the
    /// reduced set for that `p` (skipped, not zero).
    pub skipped: Vec<usize>,
}

/// Classify a monomial's variables: `u_k` needs `k <= p`, `d_k` needs
/// `k <= p - 1` (d_p is eliminated). Returns the largest admissible index
/// requirement, i.e. the smallest `p` at which the monomial is expressible.
fn min_admissible_p(m: &Monomial) -> Result<usize, Error> {
    let mut need = 2;
    for (v, _) in m.iter() {
        let name = v.name();
        let (kind, idx) = name.split_at(1);
        let k: usize = idx.parse().map_err(|_| Error::ForeignVariable {
            var: name.clone(),
        })?;
        match kind {
            "u" if k >= 2 => need = need.max(k),
            "d" if k >= 1 => need = need.max(k + 1),
            _ => {
                return Err(Error::ForeignVariable { var: name });
            }
        }
    }
    Ok(need)
}

/// Extract the coefficient of `monomial` in `F_i` for every `p` in the
/// window, sharing solutions through the cache.
pub fn trace_coefficient(
    cache: &FCache,
    i: usize,
    monomial: &Monomial,
    p_min: usize,
    p_max: usize,
) -> Result<CoeffTrace, Error> {
    if i < 2 {
        return Err(Error::BadIndex(i));
    }
    let admissible = min_admissible_p(monomial)?;
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for p in p_min..=p_max {
        if p < i || p < admissible {
            skipped.push(p);
            continue;
        }
        let sol = cache.get(p)?;
        samples.push((p, sol.f(i).coeff(monomial)));
    }
    Ok(CoeffTrace {
        i,
        monomial: monomial.clone(),
        samples,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Exact fit found, numerator degree below denominator degree.
    FittedVanishing {
        fit: String,
        deg_num: Option<usize>,
        deg_den: usize,
    },
    /// Exact fit found but it does not vanish at infinity: a counterexample
    /// witness for the conjecture.
    FittedNotVanishing {
        fit: String,
        deg_num: Option<usize>,
        deg_den: usize,
    },
    /// No fit within the degree budget; not a failure.
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialReport {
    pub monomial: String,
    pub samples: Vec<(usize, String)>,
    pub skipped_p: Vec<usize>,
    /// Window members whose `F_i` actually contains the monomial; a proper
    /// subset signals support change across the window.
    pub present_at: Vec<usize>,
    pub support_constant: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conj2Report {
    pub i: usize,
    pub p_min: usize,
    pub p_max: usize,
    pub budget: usize,
    pub holdout: usize,
    /// The coefficient of `u_i` in `F_i` must be exactly 1 at every window
    /// member.
    pub leading_coefficient_one: bool,
    pub leading_failures: Vec<(usize, String)>,
    pub monomials: Vec<MonomialReport>,
    pub status: CheckStatus,
}

/// Search `(deg_num, deg_den)` with `deg_num + deg_den <= budget` for an
/// exact rational fit through all but the last `holdout` samples, then demand
/// exact reproduction of the held-out samples. Search order is by total
/// degree, then by numerator degree, so verdicts are deterministic.
pub fn classify_trace(
    samples: &[(usize, Rational)],
    budget: usize,
    holdout: usize,
) -> Verdict {
    if samples.len() < holdout + 2 {
        return Verdict::Inconclusive {
            reason: format!("only {} samples available", samples.len()),
        };
    }
    let split = samples.len() - holdout;
    let var = VarId::new("p");
    let points: Vec<(Rational, Rational)> = samples
        .iter()
        .map(|(p, v)| (crate::exactalg::rat(*p as i64), v.clone()))
        .collect();
    let (fit_pts, hold_pts) = points.split_at(split);
    for total in 0..=budget {
        for deg_num in 0..=total {
            let deg_den = total - deg_num;
            if fit_pts.len() < deg_num + deg_den + 2 {
                continue;
            }
            let Ok(f) = fit_ratfn(var, fit_pts, deg_num, deg_den) else {
                continue;
            };
            let holdout_ok = hold_pts
                .iter()
                .all(|(x, v)| f.eval(x).map(|got| &got == v).unwrap_or(false));
            if !holdout_ok {
                continue;
            }
            let (dn, dd) = (f.deg_num(), f.deg_den());
            return if f.vanishes_at_infinity() {
                Verdict::FittedVanishing {
                    fit: f.to_string(),
                    deg_num: dn,
                    deg_den: dd,
                }
            } else {
                Verdict::FittedNotVanishing {
                    fit: f.to_string(),
                    deg_num: dn,
                    deg_den: dd,
                }
            };
        }
    }
    Verdict::Inconclusive {
        reason: format!("no exact fit with deg_num + deg_den <= {budget}"),
    }
}

/// Full Conjecture-2 check for `F_i` over a `p` window.
pub fn check_conj2(
    cache: &FCache,
    i: usize,
    p_min: usize,
    p_max: usize,
    budget: usize,
    holdout: usize,
) -> Result<Conj2Report, Error> {
    if i < 2 {
        return Err(Error::BadIndex(i));
    }
    let p_min = p_min.max(i).max(2);
    let window: Vec<usize> = (p_min..=p_max).collect();
    // Enough room for the widest fit (budget + 2 points) plus the holdout.
    let need = budget + 2 + holdout;
    if window.len() < need {
        return Err(Error::WindowTooSmall { p_min, p_max, need });
    }

    // Leading coefficient of u_i must be 1 throughout.
    let mut leading_failures = Vec::new();
    let mut union_support: BTreeSet<Monomial> = BTreeSet::new();
    let mut presence: BTreeMap<Monomial, Vec<usize>> = BTreeMap::new();
    for &p in &window {
        let sol = cache.get(p)?;
        let ctx = BellContext::new(p)?;
        let ui = Monomial::var(ctx.u_var(i));
        let fi = sol.f(i);
        let lead = fi.coeff(&ui);
        if lead != crate::exactalg::rat(1) {
            leading_failures.push((p, lead.to_string()));
        }
        let reduced = &fi - &MultiPoly::term(ui, lead);
        for (m, _) in reduced.iter() {
            union_support.insert(m.clone());
            presence.entry(m.clone()).or_default().push(p);
        }
    }

    let mut monomials = Vec::new();
    let mut any_not_vanishing = false;
    let mut any_inconclusive = false;
    for m in &union_support {
        let trace = trace_coefficient(cache, i, m, p_min, p_max)?;
        let verdict = classify_trace(&trace.samples, budget, holdout);
        match &verdict {
            Verdict::FittedNotVanishing { .. } => any_not_vanishing = true,
            Verdict::Inconclusive { .. } => any_inconclusive = true,
            Verdict::FittedVanishing { .. } => {}
        }
        let present_at = presence.get(m).cloned().unwrap_or_default();
        let valid_window: Vec<usize> = trace.samples.iter().map(|(p, _)| *p).collect();
        monomials.push(MonomialReport {
            monomial: m.to_string(),
            samples: trace
                .samples
                .iter()
                .map(|(p, v)| (*p, v.to_string()))
                .collect(),
            skipped_p: trace.skipped.clone(),
            support_constant: present_at == valid_window,
            present_at,
            verdict,
        });
    }
    monomials.sort_by(|a, b| a.monomial.cmp(&b.monomial));

    let leading_ok = leading_failures.is_empty();
    let status = if !leading_ok || any_not_vanishing {
        CheckStatus::Fail
    } else if any_inconclusive {
        CheckStatus::Inconclusive
    } else {
        CheckStatus::Pass
    };
    Ok(Conj2Report {
        i,
        p_min,
        p_max,
        budget,
        holdout,
        leading_coefficient_one: leading_ok,
        leading_failures,
        monomials,
        status,
    })
}
