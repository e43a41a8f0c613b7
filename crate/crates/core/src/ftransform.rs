//! The order-p coefficient transform: construct the unique `F_2..F_p` with
//!
//! ```text
//! [x^p] exp(sum_i (y u_i + d_i) x^i)  =  [x^p] exp(sum_i y F_i x^i)
//! ```
//!
//! as an equality of polynomials in `y`, with `d_p` eliminated so both sides
//! live in the reduced variables `{d_1..d_{p-1}, u_2..u_p}`. Solving proceeds
//! for m = 2..p in increasing order: matching the `y^{p-m+1}` coefficients
//! determines `F_m` linearly with constant pivot `1/(p-m)!`, all other terms
//! involving only `F_2..F_{m-1}`.

use std::collections::BTreeMap;

use num_traits::One;

use crate::bellkit::{self, bell_lhs_eq6, eliminate_top_d, BellContext};
use crate::exactalg::{MultiPoly, Rational, TruncSeries};
use crate::numutil::factorial;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Bell(#[from] bellkit::Error),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

/// Solved transform for a fixed `p`: `F_i` for i = 2..p (F_1 is the constant
/// 1 and is implicit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSolution {
    p: usize,
    f: BTreeMap<usize, MultiPoly>,
}

impl FSolution {
    /// Assemble a solution from explicit parts. Intended for fault-injection
    /// fixtures; [`solve_f`] is the normal constructor.
    pub fn from_parts(p: usize, f: BTreeMap<usize, MultiPoly>) -> FSolution {
        FSolution { p, f }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `F_i`; i = 1 yields the constant 1.
    pub fn f(&self, i: usize) -> MultiPoly {
        if i == 1 {
            return MultiPoly::one();
        }
        self.f[&i].clone()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &MultiPoly)> {
        self.f.iter().map(|(&i, p)| (i, p))
    }
}

/// The `y^k` coefficients (k = 0..p) of `[x^p] exp(sum (y u_i + d_i) x^i)`
/// with `d_p` eliminated. The k = 0 entry must be identically zero and the
/// k = p entry must be `1/p!`; either failing signals a broken elimination.
pub fn lhs_y_poly(ctx: &BellContext) -> Result<BTreeMap<usize, MultiPoly>, Error> {
    let p = ctx.p();
    let y = MultiPoly::var(ctx.y());
    let dp = eliminate_top_d(ctx);
    let mut s = TruncSeries::zero(ctx.x(), p);
    for i in 1..=p {
        let di = if i == p { dp.clone() } else { ctx.d_poly(i) };
        s.set_coeff(i, &(&y * &ctx.u_poly(i)) + &di);
    }
    let l = s.exp().expect("zero constant term").coeff(p).clone();
    let mut out = BTreeMap::new();
    for k in 0..=p {
        out.insert(k, l.coeff_of_power(ctx.y(), k as i32));
    }
    if !out[&0].is_zero() {
        return Err(Error::InternalInvariant(format!(
            "y^0 coefficient nonzero after d_{p} elimination: {}",
            out[&0]
        )));
    }
    let want_top = MultiPoly::constant(Rational::one() / Rational::from_integer(factorial(p)));
    if out[&p] != want_top {
        return Err(Error::InternalInvariant(format!(
            "y^{p} coefficient is {}, expected 1/{p}!",
            out[&p]
        )));
    }
    Ok(out)
}

/// `[x^p] exp(y sum F_i x^i)` for the given (possibly partial) `F` map, as a
/// map from y-powers to coefficient polynomials. `F_1 = 1`; indices missing
/// from `f` are treated as zero.
fn rhs_y_poly(ctx: &BellContext, f: &BTreeMap<usize, MultiPoly>) -> BTreeMap<usize, MultiPoly> {
    let p = ctx.p();
    let y = MultiPoly::var(ctx.y());
    let mut g = TruncSeries::zero(ctx.x(), p);
    g.set_coeff(1, y.clone());
    for i in 2..=p {
        if let Some(fi) = f.get(&i) {
            g.set_coeff(i, &y * fi);
        }
    }
    let r = g.exp().expect("zero constant term").coeff(p).clone();
    let mut out = BTreeMap::new();
    for k in 0..=p {
        out.insert(k, r.coeff_of_power(ctx.y(), k as i32));
    }
    out
}

/// Solve for `F_2..F_p` by the inductive construction.
pub fn solve_f(ctx: &BellContext) -> Result<FSolution, Error> {
    let p = ctx.p();
    let lhs = lhs_y_poly(ctx)?;
    let mut f: BTreeMap<usize, MultiPoly> = BTreeMap::new();
    for m in 2..=p {
        let k = p - m + 1;
        // Known part: the y^k coefficient with F_m..F_p set to zero. F_m
        // enters linearly with pivot 1/(k-1)!; higher indices cannot appear
        // in this y-slice.
        let known = rhs_y_poly(ctx, &f);
        let pivot_inv = Rational::from_integer(factorial(k - 1));
        let fm = (&lhs[&k] - &known[&k]).scale(&pivot_inv);
        f.insert(m, fm);
        // The step must make the y^k slices agree exactly.
        let check = rhs_y_poly(ctx, &f);
        if check[&k] != lhs[&k] {
            return Err(Error::InternalInvariant(format!(
                "pivot step failed at p = {p}, m = {m}"
            )));
        }
    }
    Ok(FSolution { p, f })
}

/// Outcome of [`verify_transform`]: either every route agrees exactly, or the
/// first differing y-power with a witness monomial from the difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub witness: Option<TransformWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformWitness {
    /// Which pair of routes disagreed.
    pub routes: String,
    pub y_power: usize,
    pub monomial: String,
}

/// Recompute both sides of the defining identity from scratch — the left via
/// the exponential series, the right via the exponential series over
/// `y F_i`, and the left again via the Bell-convolution route — and check
/// that all three agree exactly as polynomials in `y`.
pub fn verify_transform(ctx: &BellContext, sol: &FSolution) -> Verification {
    let p = ctx.p();
    debug_assert_eq!(p, sol.p());
    let lhs = match lhs_y_poly(ctx) {
        Ok(l) => l,
        Err(e) => {
            return Verification {
                ok: false,
                witness: Some(TransformWitness {
                    routes: format!("left-exponential route failed: {e}"),
                    y_power: 0,
                    monomial: String::new(),
                }),
            }
        }
    };
    let mut fmap = BTreeMap::new();
    for (i, fi) in sol.iter() {
        fmap.insert(i, fi.clone());
    }
    let rhs = rhs_y_poly(ctx, &fmap);
    // Bell-convolution evaluation of the left side, scaled back by p!.
    let conv = ctx.reduce_top_d(&bell_lhs_eq6(ctx));
    let scale = Rational::one() / Rational::from_integer(factorial(p));
    let mut bell: BTreeMap<usize, MultiPoly> = BTreeMap::new();
    for k in 0..=p {
        bell.insert(k, conv.coeff_of_power(ctx.y(), k as i32).scale(&scale));
    }
    for k in 0..=p {
        if let Some(w) = first_difference("exp-lhs vs exp-rhs", k, &lhs[&k], &rhs[&k]) {
            return Verification {
                ok: false,
                witness: Some(w),
            };
        }
        if let Some(w) = first_difference("exp-lhs vs bell-convolution", k, &lhs[&k], &bell[&k]) {
            return Verification {
                ok: false,
                witness: Some(w),
            };
        }
    }
    Verification {
        ok: true,
        witness: None,
    }
}

fn first_difference(
    routes: &str,
    k: usize,
    a: &MultiPoly,
    b: &MultiPoly,
) -> Option<TransformWitness> {
    let diff = a - b;
    if diff.is_zero() {
        return None;
    }
    let (mono, _) = diff.sorted_terms().into_iter().next().unwrap();
    Some(TransformWitness {
        routes: routes.to_string(),
        y_power: k,
        monomial: mono.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{ratio, Monomial};

    #[test]
    fn lhs_p2_hand_values() {
        let ctx = BellContext::new(2).unwrap();
        let l = lhs_y_poly(&ctx).unwrap();
        let want = &MultiPoly::var(ctx.u_var(2)) + &MultiPoly::var(ctx.d_var(1));
        assert_eq!(l[&1], want);
        assert_eq!(l[&2], MultiPoly::constant(ratio(1, 2)));
    }

    #[test]
    fn lhs_p3_hand_values() {
        let ctx = BellContext::new(3).unwrap();
        let l = lhs_y_poly(&ctx).unwrap();
        // k=2 -> u2 + d1/2; k=3 -> 1/6
        let want = &MultiPoly::var(ctx.u_var(2)) + &MultiPoly::var(ctx.d_var(1)).scale(&ratio(1, 2));
        assert_eq!(l[&2], want);
        assert_eq!(l[&3], MultiPoly::constant(ratio(1, 6)));
    }

    #[test]
    fn solve_p2() {
        let ctx = BellContext::new(2).unwrap();
        let sol = solve_f(&ctx).unwrap();
        assert_eq!(sol.f(2).to_string(), "d1 + u2");
    }

    #[test]
    fn solve_p3() {
        let ctx = BellContext::new(3).unwrap();
        let sol = solve_f(&ctx).unwrap();
        assert_eq!(sol.f(2).to_string(), "1/2*d1 + u2");
        // F_3 = u3 + d2 + u2 d1 + d1^2/2
        let d1 = MultiPoly::var(ctx.d_var(1));
        let want = &(&(&MultiPoly::var(ctx.u_var(3)) + &MultiPoly::var(ctx.d_var(2)))
            + &(&MultiPoly::var(ctx.u_var(2)) * &d1))
            + &d1.pow(2).scale(&ratio(1, 2));
        assert_eq!(sol.f(3), want);
    }

    #[test]
    fn pure_u_m_coefficient_is_one() {
        for p in 2..=8 {
            let ctx = BellContext::new(p).unwrap();
            let sol = solve_f(&ctx).unwrap();
            for i in 2..=p {
                let c = sol.f(i).coeff(&Monomial::var(ctx.u_var(i)));
                assert_eq!(c, crate::exactalg::rat(1), "p = {p}, i = {i}");
            }
        }
    }

    #[test]
    fn verify_small_p() {
        for p in 2..=6 {
            let ctx = BellContext::new(p).unwrap();
            let sol = solve_f(&ctx).unwrap();
            let v = verify_transform(&ctx, &sol);
            assert!(v.ok, "p = {p}: {:?}", v.witness);
        }
    }

    #[test]
    fn perturbed_solution_is_caught() {
        let ctx = BellContext::new(3).unwrap();
        let sol = solve_f(&ctx).unwrap();
        let mut f = BTreeMap::new();
        f.insert(2, &sol.f(2) + &MultiPoly::one());
        f.insert(3, sol.f(3));
        let bad = FSolution { p: 3, f };
        let v = verify_transform(&ctx, &bad);
        assert!(!v.ok);
        let w = v.witness.unwrap();
        assert_eq!(w.y_power, 2);
    }

    #[test]
    fn resolving_is_deterministic() {
        let ctx = BellContext::new(5).unwrap();
        let a = solve_f(&ctx).unwrap();
        let b = solve_f(&ctx).unwrap();
        assert_eq!(a, b);
        for i in 2..=5 {
            assert_eq!(a.f(i).to_string(), b.f(i).to_string());
        }
    }

    /// Alternate solving route: carry `F_m` as a symbolic placeholder and
    /// extract pivot and constant part from the linear dependence, rather
    /// than computing the known part with `F_m = 0`.
    fn solve_f_placeholder(ctx: &BellContext) -> FSolution {
        let p = ctx.p();
        let lhs = lhs_y_poly(ctx).unwrap();
        let y = MultiPoly::var(ctx.y());
        let mut f: BTreeMap<usize, MultiPoly> = BTreeMap::new();
        for m in 2..=p {
            let k = p - m + 1;
            let placeholder = crate::exactalg::VarId::new("fresh_unknown_fm");
            let mut g = TruncSeries::zero(ctx.x(), p);
            g.set_coeff(1, y.clone());
            for i in 2..m {
                g.set_coeff(i, &y * &f[&i]);
            }
            g.set_coeff(m, &y * &MultiPoly::var(placeholder));
            let rk = g
                .exp()
                .unwrap()
                .coeff(p)
                .coeff_of_power(ctx.y(), k as i32);
            let pivot = rk.coeff_of_power(placeholder, 1);
            let pivot = pivot
                .as_constant()
                .expect("pivot must be a constant");
            let known = rk.coeff_of_power(placeholder, 0);
            assert!(rk.degree_in(placeholder) <= 1, "F_m must enter linearly");
            let fm = (&lhs[&k] - &known).scale(&(Rational::one() / pivot));
            f.insert(m, fm);
        }
        FSolution { p, f }
    }

    #[test]
    fn placeholder_route_agrees() {
        for p in 2..=6 {
            let ctx = BellContext::new(p).unwrap();
            assert_eq!(solve_f(&ctx).unwrap(), solve_f_placeholder(&ctx), "p = {p}");
        }
    }
}
