//! Property tests for the exact kernel.

use proptest::prelude::*;

use matchkit::exactalg::{interpolate_poly, Monomial, MultiPoly, TruncSeries, VarId};
use matchkit::{rat, ratio, Rational};

fn vars() -> Vec<VarId> {
    vec![VarId::new("a"), VarId::new("b"), VarId::new("c")]
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0usize..3, 0i32..4), 0..3).prop_map(|pairs| {
        let vs = vars();
        let pairs: Vec<(VarId, i32)> = pairs.into_iter().map(|(i, e)| (vs[i], e)).collect();
        Monomial::from_pairs(&pairs)
    })
}

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((arb_monomial(), arb_rational()), 0..5).prop_map(|terms| {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    })
}

fn arb_zero_constant_series() -> impl Strategy<Value = TruncSeries> {
    (3usize..=8, proptest::collection::vec(arb_poly(), 8)).prop_map(|(order, coeffs)| {
        let x = VarId::new("x");
        let mut s = TruncSeries::zero(x, order);
        for k in 1..=order {
            s.set_coeff(k, coeffs[k - 1].clone());
        }
        s
    })
}

proptest! {
    #[test]
    fn poly_add_commutes(p in arb_poly(), q in arb_poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
    }

    #[test]
    fn poly_mul_commutes(p in arb_poly(), q in arb_poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn poly_ops_associate(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn poly_mul_distributes(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn display_is_stable_under_term_insertion_order(p in arb_poly()) {
        // rebuilding the polynomial from its terms in reverse order must not
        // change the canonical serialization
        let mut rebuilt = MultiPoly::zero();
        let terms: Vec<_> = p.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, c) in terms.into_iter().rev() {
            rebuilt.add_term(m, c);
        }
        prop_assert_eq!(p.to_string(), rebuilt.to_string());
    }

    #[test]
    fn exp_log_round_trip(s in arb_zero_constant_series()) {
        let rt = s.exp().unwrap().log().unwrap();
        prop_assert_eq!(rt, s);
    }

    #[test]
    fn sqrt_squares_back(s in arb_zero_constant_series()) {
        let mut one_plus = s.clone();
        one_plus.set_coeff(0, MultiPoly::one());
        let q = one_plus.sqrt().unwrap();
        prop_assert_eq!(q.mul(&q).unwrap(), one_plus);
    }

    #[test]
    fn recip_multiplies_to_one(s in arb_zero_constant_series(), c in arb_rational()) {
        prop_assume!(!num_traits::Zero::is_zero(&c));
        let mut unit = s.clone();
        unit.set_coeff(0, MultiPoly::constant(c));
        let inv = unit.recip().unwrap();
        prop_assert_eq!(
            unit.mul(&inv).unwrap(),
            TruncSeries::one(unit.var(), unit.order())
        );
    }

    #[test]
    fn series_mul_commutes(a in arb_zero_constant_series(), b in arb_zero_constant_series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn interpolation_reproduces_points(
        coeffs in proptest::collection::vec(arb_rational(), 1..6),
    ) {
        let x = VarId::new("x");
        let deg = coeffs.len() - 1;
        let horner = |at: &Rational| {
            let mut acc = rat(0);
            for c in coeffs.iter().rev() {
                acc = acc * at + c;
            }
            acc
        };
        let pts: Vec<(Rational, MultiPoly)> = (0..=(deg as i64 + 2))
            .map(|t| (rat(t), MultiPoly::constant(horner(&rat(t)))))
            .collect();
        let poly = interpolate_poly(x, &pts, deg).unwrap();
        for (at, want) in &pts {
            let got = poly.subst_var(x, &MultiPoly::constant(at.clone())).unwrap();
            prop_assert_eq!(&got, want);
        }
    }
}
