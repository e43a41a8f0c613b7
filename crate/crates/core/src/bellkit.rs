//! Complete Bell polynomials and the top-coefficient elimination they induce.
//!
//! The context fixes an order `p >= 2` and the variable families
//! `d_1..d_p` and `u_1..u_p` (with `u_1 = 1` by convention). The constraint
//! `[x^p] exp(sum d_i x^i) = 0` determines `d_p` in terms of the lower `d`s;
//! everything downstream works in that reduced variable set.

use crate::exactalg::{self, MultiPoly, Rational, TruncSeries, VarId};
use crate::numutil::{binomial, factorial};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("the setting is vacuous below p = 2 (got p = {0})")]
    PTooSmall(usize),
    #[error("expected {want} Bell arguments, got {got}")]
    ArgCount { want: usize, got: usize },
    #[error(transparent)]
    Exact(#[from] exactalg::Error),
}

/// Fixed order `p` plus its variable families.
#[derive(Clone, Debug)]
pub struct BellContext {
    p: usize,
    x: VarId,
    y: VarId,
    u: Vec<VarId>,
    d: Vec<VarId>,
}

impl BellContext {
    pub fn new(p: usize) -> Result<BellContext, Error> {
        if p < 2 {
            return Err(Error::PTooSmall(p));
        }
        Ok(BellContext {
            p,
            x: VarId::new("x"),
            y: VarId::new("y"),
            u: (1..=p).map(|i| VarId::new(&format!("u{i}"))).collect(),
            d: (1..=p).map(|i| VarId::new(&format!("d{i}"))).collect(),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn x(&self) -> VarId {
        self.x
    }

    pub fn y(&self) -> VarId {
        self.y
    }

    /// The variable u_i (i >= 2). u_1 is the constant 1, not a variable.
    pub fn u_var(&self, i: usize) -> VarId {
        assert!((2..=self.p).contains(&i), "u_{i} out of range");
        self.u[i - 1]
    }

    pub fn d_var(&self, i: usize) -> VarId {
        assert!((1..=self.p).contains(&i), "d_{i} out of range");
        self.d[i - 1]
    }

    /// u_i as a polynomial (u_1 = 1).
    pub fn u_poly(&self, i: usize) -> MultiPoly {
        if i == 1 {
            MultiPoly::one()
        } else {
            MultiPoly::var(self.u_var(i))
        }
    }

    pub fn d_poly(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.d_var(i))
    }

    /// Substitute the forced value of `d_p` into `poly`.
    pub fn reduce_top_d(&self, poly: &MultiPoly) -> MultiPoly {
        let dp = eliminate_top_d(self);
        poly.subst_var(self.d_var(self.p), &dp)
            .expect("d_p substitution")
    }
}

/// Complete Bell polynomial `B_m(x_1..x_m)` of the given arguments, via the
/// binomial recurrence `B_{n+1} = sum_i C(n,i) B_{n-i} x_{i+1}`.
///
/// Satisfies `B_m(1! a_1, ..., m! a_m) = m! [x^m] exp(sum a_i x^i)`.
pub fn bell_complete(m: usize, args: &[MultiPoly]) -> Result<MultiPoly, Error> {
    if args.len() != m {
        return Err(Error::ArgCount {
            want: m,
            got: args.len(),
        });
    }
    let mut bs: Vec<MultiPoly> = Vec::with_capacity(m + 1);
    bs.push(MultiPoly::one());
    for n in 0..m {
        // B_{n+1}
        let mut acc = MultiPoly::zero();
        for i in 0..=n {
            let c = Rational::from_integer(binomial(n, i));
            let t = &bs[n - i] * &args[i];
            acc = &acc + &t.scale(&c);
        }
        bs.push(acc);
    }
    Ok(bs.pop().unwrap())
}

/// The polynomial in `d_1..d_{p-1}` that `d_p` must equal so that
/// `[x^p] exp(sum_{i=1..p} d_i x^i) = 0`, namely
/// `-[x^p] exp(sum_{i<p} d_i x^i)`.
pub fn eliminate_top_d(ctx: &BellContext) -> MultiPoly {
    let p = ctx.p();
    let mut s = TruncSeries::zero(ctx.x(), p);
    for i in 1..p {
        s.set_coeff(i, ctx.d_poly(i));
    }
    let e = s.exp().expect("zero constant term");
    -e.coeff(p)
}

/// Left side of the order-`p` Bell identity written as the binomial
/// convolution
/// `sum_i C(p,i) B_{p-i}[1! y u_1, ..., (p-i)! y u_{p-i}] B_i(1! d_1, ..., i! d_i)`,
/// equal to `B_p[1!(y u_1 + d_1), ..., p!(y u_p + d_p)]`. Returned raw, with
/// `d_p` still present.
pub fn bell_lhs_eq6(ctx: &BellContext) -> MultiPoly {
    let p = ctx.p();
    let y = MultiPoly::var(ctx.y());
    let mut acc = MultiPoly::zero();
    for i in 0..=p {
        let yu_args: Vec<MultiPoly> = (1..=(p - i))
            .map(|k| {
                (&y * &ctx.u_poly(k)).scale(&Rational::from_integer(factorial(k)))
            })
            .collect();
        let d_args: Vec<MultiPoly> = (1..=i)
            .map(|k| ctx.d_poly(k).scale(&Rational::from_integer(factorial(k))))
            .collect();
        let b_yu = bell_complete(p - i, &yu_args).expect("arg count");
        let b_d = bell_complete(i, &d_args).expect("arg count");
        let c = Rational::from_integer(binomial(p, i));
        acc = &acc + &(&b_yu * &b_d).scale(&c);
    }
    acc
}

/// `B_p` applied directly to the summed arguments `i!(y u_i + d_i)`; the
/// other route to the same polynomial as [`bell_lhs_eq6`].
pub fn bell_lhs_direct(ctx: &BellContext) -> MultiPoly {
    let p = ctx.p();
    let y = MultiPoly::var(ctx.y());
    let args: Vec<MultiPoly> = (1..=p)
        .map(|k| {
            (&(&y * &ctx.u_poly(k)) + &ctx.d_poly(k))
                .scale(&Rational::from_integer(factorial(k)))
        })
        .collect();
    bell_complete(p, &args).expect("arg count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;
    use num_traits::One;

    fn vars(names: &[&str]) -> Vec<MultiPoly> {
        names.iter().map(|n| MultiPoly::var(VarId::new(n))).collect()
    }

    #[test]
    fn b0_is_one() {
        assert_eq!(bell_complete(0, &[]).unwrap(), MultiPoly::one());
    }

    #[test]
    fn b2_b3_by_recurrence() {
        let xs = vars(&["x1", "x2", "x3"]);
        let b2 = bell_complete(2, &xs[..2]).unwrap();
        assert_eq!(b2.to_string(), "x1^2 + x2");
        let b3 = bell_complete(3, &xs).unwrap();
        assert_eq!(b3.to_string(), "x1^3 + 3*x1*x2 + x3");
    }

    #[test]
    fn arg_count_mismatch() {
        let xs = vars(&["x1"]);
        assert!(matches!(
            bell_complete(2, &xs),
            Err(Error::ArgCount { want: 2, got: 1 })
        ));
    }

    #[test]
    fn eliminate_small_p() {
        let ctx = BellContext::new(2).unwrap();
        let e = eliminate_top_d(&ctx);
        // d2 = -d1^2/2
        assert_eq!(e.to_string(), "-1/2*d1^2");

        let ctx = BellContext::new(3).unwrap();
        let e = eliminate_top_d(&ctx);
        // d3 = -(d1 d2 + d1^3/6)
        let d1 = MultiPoly::var(ctx.d_var(1));
        let d2 = MultiPoly::var(ctx.d_var(2));
        let want = -&(&(&d1 * &d2) + &d1.pow(3).scale(&ratio(1, 6)));
        assert_eq!(e, want);
    }

    #[test]
    fn substituting_back_zeroes_the_coefficient() {
        for p in 2..=8 {
            let ctx = BellContext::new(p).unwrap();
            let mut s = TruncSeries::zero(ctx.x(), p);
            for i in 1..=p {
                s.set_coeff(i, ctx.d_poly(i));
            }
            let full = s.exp().unwrap().coeff(p).clone();
            assert!(ctx.reduce_top_d(&full).is_zero(), "p = {p}");
        }
    }

    #[test]
    fn p_one_rejected() {
        assert!(matches!(BellContext::new(1), Err(Error::PTooSmall(1))));
    }

    #[test]
    fn bell_matches_exp_coefficients_symbolically() {
        // B_m(1! a_1, ..., m! a_m) = m! [x^m] exp(sum a_i x^i), m <= 10
        let x = VarId::new("x");
        for m in 1..=10usize {
            let avars: Vec<MultiPoly> = (1..=m)
                .map(|i| MultiPoly::var(VarId::new(&format!("a{i}"))))
                .collect();
            let args: Vec<MultiPoly> = avars
                .iter()
                .enumerate()
                .map(|(i, a)| a.scale(&Rational::from_integer(factorial(i + 1))))
                .collect();
            let b = bell_complete(m, &args).unwrap();
            let mut s = TruncSeries::zero(x, m);
            for (i, a) in avars.iter().enumerate() {
                s.set_coeff(i + 1, a.clone());
            }
            let want = s
                .exp()
                .unwrap()
                .coeff(m)
                .scale(&Rational::from_integer(factorial(m)));
            assert_eq!(b, want, "m = {m}");
        }
    }

    #[test]
    fn reduced_bell_of_d_args_is_zero() {
        // After eliminating d_p, B_p(1! d_1, ..., p! d_p) = 0 identically.
        for p in 2..=12usize {
            let ctx = BellContext::new(p).unwrap();
            let args: Vec<MultiPoly> = (1..=p)
                .map(|k| ctx.d_poly(k).scale(&Rational::from_integer(factorial(k))))
                .collect();
            let b = bell_complete(p, &args).unwrap();
            assert!(ctx.reduce_top_d(&b).is_zero(), "p = {p}");
        }
    }

    #[test]
    fn convolution_matches_direct_bell() {
        for p in 2..=10usize {
            let ctx = BellContext::new(p).unwrap();
            assert_eq!(bell_lhs_eq6(&ctx), bell_lhs_direct(&ctx), "p = {p}");
        }
    }

    #[test]
    fn convolution_y0_coefficient_vanishes_after_reduction() {
        for p in [2usize, 3, 5] {
            let ctx = BellContext::new(p).unwrap();
            let lhs = ctx.reduce_top_d(&bell_lhs_eq6(&ctx));
            let y0 = lhs.coeff_of_power(ctx.y(), 0);
            assert!(y0.is_zero(), "p = {p}");
        }
    }

    #[test]
    fn convolution_matches_lhs_y_poly_at_p2() {
        // (reduced eq6 result) / 2! has y-coefficients (u2+d1) at y and 1/2 at y^2
        let ctx = BellContext::new(2).unwrap();
        let lhs = ctx
            .reduce_top_d(&bell_lhs_eq6(&ctx))
            .scale(&(Rational::one() / Rational::from_integer(factorial(2))));
        let y1 = lhs.coeff_of_power(ctx.y(), 1);
        let want = &MultiPoly::var(ctx.u_var(2)) + &MultiPoly::var(ctx.d_var(1));
        assert_eq!(y1, want);
        assert_eq!(lhs.coeff_of_power(ctx.y(), 2), MultiPoly::constant(ratio(1, 2)));
    }
}
