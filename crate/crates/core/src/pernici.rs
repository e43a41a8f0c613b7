//! Matching-series identity checks: the tree generating series `T_r`, the
//! idealized j-matching counts `M_j`, the `a_h(r, j)` correction table, and
//! the exact `[j^k n^{-h}]` identities satisfied by `ln(1 + sum a_s / n^s)`,
//! including the free-u strengthening and the shifted-argument family with
//! symbolic weights `c_i`.
//!
//! `r` is handled symbolically by default (Laurent polynomials, so division
//! by `r^j` is exact); a rational-r mode exists for speed. The `1/n`
//! bookkeeping uses a forward variable `n_inv` with `n^-h == n_inv^h`.
//!
//! Convention note: the weights used in the `M_j` exponent are
//! `u_s = [x^s] T_r` (so `u_1 = r`). This is the normalization under which
//! the whole identity suite — `a_1(r,2) = -u_2/r^2` and the
//! `(1/r^h - 2)/((h+1)h)` main values — holds exactly; doubling `u_s` breaks
//! the main values while leaving the vanishing claims intact.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactalg::{
    self, interpolate_poly, rat, Monomial, MultiPoly, Rational, TruncSeries, VarId,
};
use crate::numutil::factorial;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("r = 1 makes the tree series singular")]
    RSingular,
    #[error("h_max must be at least 1")]
    BadHMax,
    #[error("jmax_sample = {got} too small: need at least {need} for degree-2h interpolation plus validation")]
    JmaxTooSmall { got: usize, need: usize },
    #[error("z = {z} exceeds the 1/n truncation order {h_max}; the term cannot contribute")]
    ZTooLarge { z: usize, h_max: usize },
    #[error("z values must be distinct positive integers")]
    BadSpec,
    #[error("j-interpolation failed for h = {h}: {source}")]
    Interp { h: usize, source: exactalg::Error },
    #[error(transparent)]
    Exact(#[from] exactalg::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// How `r` is carried through the computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RMode {
    /// Laurent variable `r`.
    Symbolic,
    /// Fixed rational value (must not be 1).
    Value(Rational),
}

impl RMode {
    pub fn label(&self) -> String {
        match self {
            RMode::Symbolic => "sym".to_string(),
            RMode::Value(v) => v.to_string(),
        }
    }

    fn poly(&self) -> MultiPoly {
        match self {
            RMode::Symbolic => MultiPoly::var(r_var()),
            RMode::Value(v) => MultiPoly::constant(v.clone()),
        }
    }

    /// `r^-k`, exact in both modes.
    fn inv_pow(&self, k: usize) -> MultiPoly {
        match self {
            RMode::Symbolic => MultiPoly::term(
                Monomial::from_pairs(&[(r_var(), -(k as i32))]),
                Rational::one(),
            ),
            RMode::Value(v) => {
                MultiPoly::constant(exactalg::pow_rational(&(Rational::one() / v), k as u32))
            }
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if let RMode::Value(v) = self {
            if v == &rat(1) {
                return Err(Error::RSingular);
            }
            if v.is_zero() {
                return Err(Error::RSingular);
            }
        }
        Ok(())
    }
}

pub fn x_var() -> VarId {
    VarId::new("x")
}
pub fn n_var() -> VarId {
    VarId::new("n")
}
pub fn n_inv_var() -> VarId {
    VarId::new("n_inv")
}
pub fn j_var() -> VarId {
    VarId::new("j")
}
pub fn r_var() -> VarId {
    VarId::laurent("r")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerniciParams {
    pub r_mode: RMode,
    /// Truncation order in 1/n; identities are checked for h <= h_max.
    pub h_max: usize,
    /// Largest j-power tracked when slicing.
    pub j_deg: usize,
    /// Largest integer j sampled for the interpolation in j.
    pub jmax_sample: usize,
}

impl PerniciParams {
    /// Defaults: `j_deg = 2 h_max`, `jmax_sample = 2 h_max + 4` (degree-2h
    /// nodes plus validation points).
    pub fn new(r_mode: RMode, h_max: usize) -> Result<PerniciParams, Error> {
        if h_max < 1 {
            return Err(Error::BadHMax);
        }
        r_mode.validate()?;
        Ok(PerniciParams {
            r_mode,
            h_max,
            j_deg: 2 * h_max,
            jmax_sample: 2 * h_max + 4,
        })
    }

    pub fn with_jmax(mut self, jmax: usize) -> Result<PerniciParams, Error> {
        let need = 2 * self.h_max + 2;
        if jmax < need {
            return Err(Error::JmaxTooSmall { got: jmax, need });
        }
        self.jmax_sample = jmax;
        Ok(self)
    }

    fn check(&self) -> Result<(), Error> {
        if self.h_max < 1 {
            return Err(Error::BadHMax);
        }
        let need = 2 * self.h_max + 2;
        if self.jmax_sample < need {
            return Err(Error::JmaxTooSmall {
                got: self.jmax_sample,
                need,
            });
        }
        self.r_mode.validate()
    }
}

/// The tree generating series
/// `T_r = 2(r-1) / (2(r-1) - r + r sqrt(1 - 4x(r-1)))`
/// to the given order, built from the square-root and reciprocal series.
/// Coefficients are polynomials in `r` (no true denominators appear).
pub fn t_series(r_mode: &RMode, order: usize) -> Result<TruncSeries, Error> {
    r_mode.validate()?;
    let rp = r_mode.poly();
    let r_minus_1 = &rp - &MultiPoly::one();
    let two_r_minus_2 = r_minus_1.scale(&rat(2));
    // inner = 1 - 4(r-1) x
    let mut inner = TruncSeries::one(x_var(), order);
    inner.set_coeff(1, r_minus_1.scale(&rat(-4)));
    let sq = inner.sqrt()?;
    // denominator D = 2(r-1) - r + r sqrt(...); constant term is 2(r-1)
    let mut den = sq.scale(&rp);
    den.set_coeff(0, den.coeff(0) + &(&two_r_minus_2 - &rp));
    // normalize: every coefficient of D is divisible by 2(r-1)
    let mut unit = TruncSeries::zero(x_var(), order);
    for k in 0..=order {
        let q = den
            .coeff(k)
            .div_exact(&two_r_minus_2)
            .ok_or_else(|| Error::Internal(format!("denominator coefficient of x^{k} not divisible by 2(r-1)")))?;
        unit.set_coeff(k, q);
    }
    Ok(unit.recip()?)
}

/// Matching-series weights `u_s = [x^s] T_r` for s = 1..smax
/// (index s-1 in the returned vector; `u_1 = r`).
pub fn u_coeffs(r_mode: &RMode, smax: usize) -> Result<Vec<MultiPoly>, Error> {
    let t = t_series(r_mode, smax)?;
    Ok((1..=smax).map(|s| t.coeff(s).clone()).collect())
}

/// `M_j = [x^j] exp(n r x - sum_{s=2..j} (n u_s / s)(-x)^s)`, a polynomial in
/// `n` of degree `j`. The sum may stop at `s = j` without affecting `[x^j]`.
/// `u[s-1]` supplies `u_s`; only the first `j` entries are read.
pub fn m_j(j: usize, u: &[MultiPoly], r_poly: &MultiPoly) -> MultiPoly {
    assert!(j >= 1, "M_j needs j >= 1");
    assert!(u.len() >= j, "need u_1..u_j");
    let n = MultiPoly::var(n_var());
    let mut s = TruncSeries::zero(x_var(), j);
    s.set_coeff(1, &n * r_poly);
    for t in 2..=j {
        // -(u_t / t)(-1)^t = (-1)^{t+1} u_t / t
        let sign = if t % 2 == 0 { -1 } else { 1 };
        let c = Rational::new(sign.into(), (t as i64).into());
        s.set_coeff(t, (&n * &u[t - 1]).scale(&c));
    }
    s.exp().expect("zero constant term").coeff(j).clone()
}

/// The `a_h(r, j)` table: sampled entries from
/// `j! M_j / (n^j r^j) = 1 + sum_h a_h(r, j) n_inv^h`, plus per-h
/// interpolations as polynomials in `j` of degree at most `2h` (validated on
/// every extra sample).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATable {
    pub h_max: usize,
    pub jmax_sample: usize,
    /// (h, j) -> a_h(r, j); zero entries are stored explicitly.
    pub entries: BTreeMap<(usize, usize), MultiPoly>,
    /// h -> polynomial in `j` (and `r`) matching the entries at every sample.
    pub jpolys: BTreeMap<usize, MultiPoly>,
}

impl ATable {
    pub fn entry(&self, h: usize, j: usize) -> &MultiPoly {
        &self.entries[&(h, j)]
    }

    pub fn jpoly(&self, h: usize) -> &MultiPoly {
        &self.jpolys[&h]
    }
}

/// Build the table with the standard weights `u_s(r)`.
pub fn a_table(params: &PerniciParams) -> Result<ATable, Error> {
    params.check()?;
    let u = u_coeffs(&params.r_mode, params.jmax_sample)?;
    a_table_with_weights(params, &u)
}

/// Build the table from explicit weights (u_2 onward may be anything, e.g.
/// free symbolic variables; `u[0]` must still be the degree-1 weight used in
/// the linear exponent term — it is ignored in favor of `r` itself).
pub fn a_table_with_weights(params: &PerniciParams, u: &[MultiPoly]) -> Result<ATable, Error> {
    params.check()?;
    let rp = params.r_mode.poly();
    let h_max = params.h_max;
    let jmax = params.jmax_sample;
    let mut entries = BTreeMap::new();
    for j in 1..=jmax {
        let m = m_j(j, u, &rp);
        let jfact = Rational::from_integer(factorial(j));
        let rinv = params.r_mode.inv_pow(j);
        for h in 1..=h_max {
            let e = if h > j {
                MultiPoly::zero()
            } else {
                let c = m.coeff_of_power(n_var(), (j - h) as i32);
                &c.scale(&jfact) * &rinv
            };
            entries.insert((h, j), e);
        }
    }
    let mut jpolys = BTreeMap::new();
    for h in 1..=h_max {
        let points: Vec<(Rational, MultiPoly)> = (1..=jmax)
            .map(|j| (rat(j as i64), entries[&(h, j)].clone()))
            .collect();
        let poly = interpolate_poly(j_var(), &points, 2 * h)
            .map_err(|source| Error::Interp { h, source })?;
        jpolys.insert(h, poly);
    }
    Ok(ATable {
        h_max,
        jmax_sample: jmax,
        entries,
        jpolys,
    })
}

/// `ln(1 + sum_{s=1..h_max} a_s(r,j) n_inv^s)` truncated at `n_inv^h_max`,
/// returned as `[j^k n_inv^h]` extractions keyed by `(k, h)`.
pub fn log_coeffs(
    table: &ATable,
    params: &PerniciParams,
) -> Result<BTreeMap<(usize, usize), MultiPoly>, Error> {
    let h_max = params.h_max;
    let mut f = TruncSeries::one(n_inv_var(), h_max);
    for h in 1..=h_max {
        f.set_coeff(h, table.jpoly(h).clone());
    }
    log_slices(&f, params)
}

fn log_slices(
    f: &TruncSeries,
    params: &PerniciParams,
) -> Result<BTreeMap<(usize, usize), MultiPoly>, Error> {
    let l = f.log()?;
    let mut out = BTreeMap::new();
    for h in 0..=params.h_max {
        let lc = l.coeff(h);
        for k in 0..=params.j_deg {
            out.insert((k, h), lc.coeff_of_power(j_var(), k as i32));
        }
    }
    Ok(out)
}

// ---- reports ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceClaim {
    /// `[j^k n^-h]` with k >= h+2 must vanish.
    Vanishes,
    /// `[j^{h+1} n^-h]` must equal `(1/r^h - 2)/((h+1)h)`.
    MainValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceCheck {
    pub h: usize,
    pub k: usize,
    pub claim: SliceClaim,
    pub expected: String,
    pub got: String,
    pub ok: bool,
}

/// The slice-by-slice comparison shared by every identity checker here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub r_label: String,
    pub h_max: usize,
    pub j_deg: usize,
    pub slices: Vec<SliceCheck>,
    pub pass: bool,
}

fn main_value(params: &PerniciParams, h: usize) -> MultiPoly {
    // (1/r^h - 2) / ((h+1) h)
    let scale = Rational::one() / rat(((h + 1) * h) as i64);
    (&params.r_mode.inv_pow(h) - &MultiPoly::int(2)).scale(&scale)
}

fn build_slice_report(
    slices_by_kh: &BTreeMap<(usize, usize), MultiPoly>,
    params: &PerniciParams,
) -> SliceReport {
    let mut slices = Vec::new();
    let mut pass = true;
    for h in 1..=params.h_max {
        for k in (h + 1)..=params.j_deg {
            let got = &slices_by_kh[&(k, h)];
            let (claim, expected) = if k == h + 1 {
                (SliceClaim::MainValue, main_value(params, h))
            } else {
                (SliceClaim::Vanishes, MultiPoly::zero())
            };
            let ok = got == &expected;
            pass &= ok;
            slices.push(SliceCheck {
                h,
                k,
                claim,
                expected: expected.to_string(),
                got: got.to_string(),
                ok,
            });
        }
    }
    SliceReport {
        r_label: params.r_mode.label(),
        h_max: params.h_max,
        j_deg: params.j_deg,
        slices,
        pass,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerniciReport {
    pub table_checks: Vec<NamedCheck>,
    pub slice_report: SliceReport,
    pub pass: bool,
}

/// Verify the two log-slice identities together with the structural table
/// facts (`a_h(r,1) = 0`, `a_1(r,2) = -u_2/r^2`, zero log constant term).
pub fn check_16_17(params: &PerniciParams) -> Result<PerniciReport, Error> {
    let table = a_table(params)?;
    let mut table_checks = Vec::new();
    for h in 1..=params.h_max {
        let e = table.entry(h, 1);
        table_checks.push(NamedCheck {
            name: format!("a_{h}(r,1) = 0"),
            ok: e.is_zero(),
            detail: e.to_string(),
        });
    }
    let u = u_coeffs(&params.r_mode, 2)?;
    let want = (&-&u[1] * &params.r_mode.inv_pow(2)).clone();
    let got = table.entry(1, 2);
    table_checks.push(NamedCheck {
        name: "a_1(r,2) = -u_2/r^2".to_string(),
        ok: got == &want,
        detail: format!("got {got}, expected {want}"),
    });
    let slices_by_kh = log_coeffs(&table, params)?;
    let zero_row_ok = (0..=params.j_deg).all(|k| slices_by_kh[&(k, 0)].is_zero());
    table_checks.push(NamedCheck {
        name: "[n_inv^0] ln(...) = 0".to_string(),
        ok: zero_row_ok,
        detail: String::new(),
    });
    let slice_report = build_slice_report(&slices_by_kh, params);
    let pass = slice_report.pass && table_checks.iter().all(|c| c.ok);
    Ok(PerniciReport {
        table_checks,
        slice_report,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeUReport {
    pub h_max: usize,
    pub free_u_names: Vec<String>,
    /// Vanishing slices (k >= h+2), which must be identically zero in the
    /// free u's and r.
    pub vanishing: Vec<SliceCheck>,
    /// The k = h+1 slices are recorded for reference but carry no claim in
    /// the free-u setting.
    pub observed_main: Vec<(usize, String)>,
    pub pass: bool,
}

/// The strengthened vanishing check: replace the computed weights by free
/// symbolic variables `u_2 .. u_{jmax}` (only `u_2..u_{h+1}` can reach the
/// `n_inv^h` slice) and demand that every `k >= h+2` extraction is the zero
/// polynomial identically in all of them and in Laurent `r`.
pub fn check_16_free_u(h_max: usize) -> Result<FreeUReport, Error> {
    let params = PerniciParams::new(RMode::Symbolic, h_max)?;
    let mut weights: Vec<MultiPoly> = Vec::new();
    let mut names = Vec::new();
    weights.push(MultiPoly::var(r_var())); // u_1 slot; unused by m_j's linear term shape
    for s in 2..=params.jmax_sample {
        let v = VarId::new(&format!("u{s}"));
        if s <= h_max + 1 {
            names.push(v.name());
        }
        weights.push(MultiPoly::var(v));
    }
    let table = a_table_with_weights(&params, &weights)?;
    let slices_by_kh = log_coeffs(&table, &params)?;
    let mut vanishing = Vec::new();
    let mut observed_main = Vec::new();
    let mut pass = true;
    for h in 1..=h_max {
        for k in (h + 2)..=params.j_deg {
            let got = &slices_by_kh[&(k, h)];
            let ok = got.is_zero();
            pass &= ok;
            vanishing.push(SliceCheck {
                h,
                k,
                claim: SliceClaim::Vanishes,
                expected: "0".to_string(),
                got: got.to_string(),
                ok,
            });
        }
        observed_main.push((h, slices_by_kh[&(h + 1, h)].to_string()));
    }
    Ok(FreeUReport {
        h_max,
        free_u_names: names,
        vanishing,
        observed_main,
        pass,
    })
}

/// A shifted-argument combination: positive integers `z_i` with symbolic
/// weights `c_i`, each contributing
/// `c_i j(j-1)...(j-z_i+1) (1/(n r))^{z_i} sum_s a_s(r, j - z_i)/n^s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AwesomeSpec {
    terms: Vec<(VarId, usize)>,
    h_max: usize,
}

impl AwesomeSpec {
    /// `zs` must be distinct positive integers, each at most `h_max`; the
    /// symbolic weights are named `c1, c2, ...` in order.
    pub fn new(zs: &[usize], h_max: usize) -> Result<AwesomeSpec, Error> {
        let mut seen = std::collections::BTreeSet::new();
        for &z in zs {
            if z == 0 || !seen.insert(z) {
                return Err(Error::BadSpec);
            }
            if z > h_max {
                return Err(Error::ZTooLarge { z, h_max });
            }
        }
        let terms = zs
            .iter()
            .enumerate()
            .map(|(idx, &z)| (VarId::new(&format!("c{}", idx + 1)), z))
            .collect();
        Ok(AwesomeSpec { terms, h_max })
    }

    pub fn terms(&self) -> &[(VarId, usize)] {
        &self.terms
    }

    pub fn zs(&self) -> Vec<usize> {
        self.terms.iter().map(|&(_, z)| z).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AwesomeReport {
    pub zs: Vec<usize>,
    pub slice_report: SliceReport,
    pub pass: bool,
}

/// Falling factorial `j (j-1) ... (j-z+1)` as a polynomial in `j`.
fn falling_factorial(z: usize) -> MultiPoly {
    let j = MultiPoly::var(j_var());
    let mut acc = MultiPoly::one();
    for t in 0..z {
        acc = &acc * &(&j - &MultiPoly::int(t as i64));
    }
    acc
}

/// Check the two slice identities for the shifted-argument combination,
/// identically in the symbolic `c_i`. An empty spec reduces exactly to
/// [`check_16_17`]'s slice report.
pub fn awesome_check(spec: &AwesomeSpec, params: &PerniciParams) -> Result<AwesomeReport, Error> {
    if spec.h_max != params.h_max {
        return Err(Error::Internal(format!(
            "spec built for h_max = {}, params have h_max = {}",
            spec.h_max, params.h_max
        )));
    }
    let table = a_table(params)?;
    let h_max = params.h_max;
    let mut f = TruncSeries::one(n_inv_var(), h_max);
    for h in 1..=h_max {
        f.set_coeff(h, table.jpoly(h).clone());
    }
    let jp = MultiPoly::var(j_var());
    for &(c, z) in spec.terms() {
        let prefix = &(&MultiPoly::var(c) * &falling_factorial(z)) * &params.r_mode.inv_pow(z);
        let shifted_j = &jp - &MultiPoly::int(z as i64);
        for s in 0..=(h_max - z) {
            let a_shift = if s == 0 {
                MultiPoly::one()
            } else {
                table.jpoly(s).subst_var(j_var(), &shifted_j)?
            };
            let add = &prefix * &a_shift;
            f.set_coeff(z + s, &f.coeff(z + s).clone() + &add);
        }
    }
    let slices_by_kh = log_slices(&f, params)?;
    let slice_report = build_slice_report(&slices_by_kh, params);
    let pass = slice_report.pass;
    Ok(AwesomeReport {
        zs: spec.zs(),
        slice_report,
        pass,
    })
}
