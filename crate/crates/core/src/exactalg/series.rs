//! Truncated formal power series in one variable with polynomial coefficients.
//!
//! A series of order `T` stores exactly `T + 1` coefficients; every operation
//! discards terms above the truncation order, and binary operations truncate
//! to the minimum of the two operand orders.

use num_traits::One;

use super::poly::MultiPoly;
use super::vars::VarId;
use super::{Error, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    var: VarId,
    coeffs: Vec<MultiPoly>,
}

impl TruncSeries {
    pub fn zero(var: VarId, order: usize) -> TruncSeries {
        TruncSeries {
            var,
            coeffs: vec![MultiPoly::zero(); order + 1],
        }
    }

    pub fn one(var: VarId, order: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(var, order);
        s.coeffs[0] = MultiPoly::one();
        s
    }

    pub fn constant(var: VarId, order: usize, c: MultiPoly) -> TruncSeries {
        let mut s = TruncSeries::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    /// Build from explicit coefficients; the slice length fixes the order.
    pub fn from_coeffs(var: VarId, coeffs: Vec<MultiPoly>) -> TruncSeries {
        assert!(!coeffs.is_empty(), "a series needs at least the x^0 slot");
        TruncSeries { var, coeffs }
    }

    pub fn var(&self) -> VarId {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `var^k`; panics when `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k]
    }

    /// Range-checked coefficient extraction.
    pub fn coeff_at(&self, k: usize) -> Result<MultiPoly, Error> {
        if k > self.order() {
            return Err(Error::CoeffOutOfRange {
                k,
                order: self.order(),
            });
        }
        Ok(self.coeffs[k].clone())
    }

    pub fn set_coeff(&mut self, k: usize, p: MultiPoly) {
        if k <= self.order() {
            self.coeffs[k] = p;
        }
    }

    /// Truncate (or keep) to the given order.
    pub fn truncated(&self, order: usize) -> TruncSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        while coeffs.len() < order + 1 {
            coeffs.push(MultiPoly::zero());
        }
        TruncSeries {
            var: self.var,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_var(&self, other: &TruncSeries) -> Result<(), Error> {
        if self.var != other.var {
            return Err(Error::VariableMismatch {
                a: self.var.name(),
                b: other.var.name(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries, Error> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        let mut out = TruncSeries::zero(self.var, order);
        for k in 0..=order {
            out.coeffs[k] = &self.coeffs[k] + &other.coeffs[k];
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries, Error> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        let mut out = TruncSeries::zero(self.var, order);
        for k in 0..=order {
            out.coeffs[k] = &self.coeffs[k] - &other.coeffs[k];
        }
        Ok(out)
    }

    pub fn scale(&self, c: &MultiPoly) -> TruncSeries {
        TruncSeries {
            var: self.var,
            coeffs: self.coeffs.iter().map(|p| p * c).collect(),
        }
    }

    /// Cauchy product, truncated to the minimum of the two orders.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries, Error> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        let mut out = TruncSeries::zero(self.var, order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for k in 0..=(order - i) {
                if other.coeffs[k].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &other.coeffs[k];
                out.coeffs[i + k] = &out.coeffs[i + k] + &prod;
            }
        }
        Ok(out)
    }

    /// exp of a series with zero constant term, via the derivative
    /// recurrence `m e_m = sum_{k=1..m} k s_k e_{m-k}`.
    pub fn exp(&self) -> Result<TruncSeries, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        let order = self.order();
        let mut e = TruncSeries::zero(self.var, order);
        e.coeffs[0] = MultiPoly::one();
        for m in 1..=order {
            let mut acc = MultiPoly::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let t = &self.coeffs[k] * &e.coeffs[m - k];
                acc = &acc + &t.scale(&Rational::from_integer(k.into()));
            }
            e.coeffs[m] = acc.scale(&(Rational::one() / Rational::from_integer(m.into())));
        }
        Ok(e)
    }

    /// log of a series with constant term 1:
    /// `l_m = s_m - (1/m) sum_{k=1..m-1} k l_k s_{m-k}`.
    pub fn log(&self) -> Result<TruncSeries, Error> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let order = self.order();
        let mut l = TruncSeries::zero(self.var, order);
        for m in 1..=order {
            let mut acc = MultiPoly::zero();
            for k in 1..m {
                if l.coeffs[k].is_zero() || self.coeffs[m - k].is_zero() {
                    continue;
                }
                let t = &l.coeffs[k] * &self.coeffs[m - k];
                acc = &acc + &t.scale(&Rational::from_integer(k.into()));
            }
            l.coeffs[m] =
                &self.coeffs[m] - &acc.scale(&(Rational::one() / Rational::from_integer(m.into())));
        }
        Ok(l)
    }

    /// Square root with constant term +1 of a series with constant term 1:
    /// `r_m = (s_m - sum_{k=1..m-1} r_k r_{m-k}) / 2`.
    pub fn sqrt(&self) -> Result<TruncSeries, Error> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let order = self.order();
        let mut r = TruncSeries::zero(self.var, order);
        r.coeffs[0] = MultiPoly::one();
        let half = super::ratio(1, 2);
        for m in 1..=order {
            let mut acc = MultiPoly::zero();
            for k in 1..m {
                acc = &acc + &(&r.coeffs[k] * &r.coeffs[m - k]);
            }
            r.coeffs[m] = (&self.coeffs[m] - &acc).scale(&half);
        }
        Ok(r)
    }

    /// Multiplicative inverse. The constant term must be invertible: either a
    /// nonzero rational, or a single monomial whose variables are all Laurent.
    pub fn recip(&self) -> Result<TruncSeries, Error> {
        let inv0 = invert_poly(&self.coeffs[0]).ok_or(Error::NonInvertibleConstant)?;
        let order = self.order();
        let mut c = TruncSeries::zero(self.var, order);
        c.coeffs[0] = inv0.clone();
        let neg_inv0 = -&inv0;
        for m in 1..=order {
            let mut acc = MultiPoly::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[k] * &c.coeffs[m - k]);
            }
            c.coeffs[m] = &neg_inv0 * &acc;
        }
        Ok(c)
    }
}

/// Inverse of a polynomial when it is a unit: a nonzero constant, or a single
/// term whose monomial involves only Laurent variables.
fn invert_poly(p: &MultiPoly) -> Option<MultiPoly> {
    if p.is_zero() || p.num_terms() != 1 {
        return None;
    }
    let (m, c) = p.iter().next().unwrap();
    let minv = m.try_inverse().ok()?;
    Some(MultiPoly::term(minv, Rational::one() / c))
}
