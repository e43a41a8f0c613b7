//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Invariants:
//! - no zero coefficients are stored
//! - monomial exponent vectors are sorted by `VarId` and contain no zero exponents
//! - negative exponents only appear on Laurent-flagged variables
//!
//! Display output is canonical: monomials sorted graded-lexicographically by
//! variable *name*, highest first, so equal polynomials always serialize
//! identically regardless of interning order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::vars::VarId;
use super::{Error, Rational};

/// Exponent vector: sorted `(var, exp)` pairs, exp != 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, i32)>);

impl Monomial {
    /// The empty (constant) monomial.
    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    /// Build from `(var, exp)` pairs; merges duplicates, drops zero exponents,
    /// and rejects negative exponents on non-Laurent variables.
    pub fn try_from_pairs(pairs: &[(VarId, i32)]) -> Result<Monomial, Error> {
        let mut map: BTreeMap<VarId, i32> = BTreeMap::new();
        for &(v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        map.retain(|_, e| *e != 0);
        for (v, e) in &map {
            if *e < 0 && !v.is_laurent() {
                return Err(Error::NegativeExponent {
                    var: v.name(),
                    exp: *e,
                });
            }
        }
        Ok(Monomial(map.into_iter().collect()))
    }

    /// Like [`Monomial::try_from_pairs`] but panics on a range violation.
    pub fn from_pairs(pairs: &[(VarId, i32)]) -> Monomial {
        Self::try_from_pairs(pairs).expect("invalid monomial")
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i32)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn exponent_of(&self, v: VarId) -> i32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Product of two monomials (exponent sum). Cancellation may remove vars.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(VarId, i32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut k) = (0, 0);
        while i < self.0.len() && k < other.0.len() {
            match self.0[i].0.cmp(&other.0[k].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[k]);
                    k += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[k].1;
                    if e != 0 {
                        out.push((self.0[i].0, e));
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[k..]);
        Monomial(out)
    }

    /// Inverse monomial; only valid when every variable is Laurent.
    pub fn try_inverse(&self) -> Result<Monomial, Error> {
        Monomial::try_from_pairs(&self.0.iter().map(|&(v, e)| (v, -e)).collect::<Vec<_>>())
    }

    /// Exponent of this monomial with `v` removed.
    fn without(&self, v: VarId) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    /// Graded-lexicographic comparison keyed by variable *names*, used only
    /// for canonical display ordering.
    fn grlex_name_cmp(&self, other: &Monomial) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a: Vec<(String, i32)> = self.0.iter().map(|&(v, e)| (v.name(), e)).collect();
        let mut b: Vec<(String, i32)> = other.0.iter().map(|&(v, e)| (v.name(), e)).collect();
        a.sort();
        b.sort();
        let (mut i, mut k) = (0, 0);
        while i < a.len() && k < b.len() {
            match a[i].0.cmp(&b[k].0) {
                // A variable present only on one side: that side has the
                // higher exponent on the earliest differing name.
                Ordering::Less => return if a[i].1 > 0 { Ordering::Greater } else { Ordering::Less },
                Ordering::Greater => return if b[k].1 > 0 { Ordering::Less } else { Ordering::Greater },
                Ordering::Equal => match a[i].1.cmp(&b[k].1) {
                    Ordering::Equal => {
                        i += 1;
                        k += 1;
                    }
                    ord => return ord,
                },
            }
        }
        match (i < a.len(), k < b.len()) {
            (true, false) => {
                if a[i].1 > 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                if b[k].1 > 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => Ordering::Equal,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<(String, i32)> = self.0.iter().map(|&(v, e)| (v.name(), e)).collect();
        parts.sort();
        let body = parts
            .iter()
            .map(|(n, e)| {
                if *e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        write!(f, "{body}")
    }
}

/// Sparse multivariate polynomial over [`Rational`].
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        MultiPoly { terms }
    }

    /// Constant polynomial from a machine integer.
    pub fn int(n: i64) -> MultiPoly {
        MultiPoly::constant(Rational::from_integer(n.into()))
    }

    pub fn var(v: VarId) -> MultiPoly {
        MultiPoly::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Exact coefficient of monomial `m` (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::unit())
    }

    /// If the polynomial is a constant, return it.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::unit()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiply by a single monomial with coefficient.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, v)| (mm.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        if e == 0 {
            return MultiPoly::one();
        }
        let mut base = self.clone();
        let mut acc: Option<MultiPoly> = None;
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        acc.unwrap()
    }

    /// Max exponent of `v` over all terms (0 for a polynomial free of `v`).
    pub fn degree_in(&self, v: VarId) -> i32 {
        self.terms
            .keys()
            .map(|m| m.exponent_of(v))
            .max()
            .unwrap_or(0)
    }

    /// Max total degree over all terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// View as a polynomial in `v`: exponent -> coefficient polynomial
    /// (free of `v`). The zero polynomial yields an empty map.
    pub fn coeffs_in(&self, v: VarId) -> BTreeMap<i32, MultiPoly> {
        let mut out: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            out.entry(e)
                .or_insert_with(MultiPoly::zero)
                .add_term(m.without(v), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, v: VarId, k: i32) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent_of(v) == k {
                out.add_term(m.without(v), c.clone());
            }
        }
        out
    }

    /// Substitute `v := rep`. All occurrences of `v` must have non-negative
    /// exponents.
    pub fn subst_var(&self, v: VarId, rep: &MultiPoly) -> Result<MultiPoly, Error> {
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one()];
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e < 0 {
                return Err(Error::NegativeExponent {
                    var: v.name(),
                    exp: e,
                });
            }
            while powers.len() <= e as usize {
                let next = &powers[powers.len() - 1] * rep;
                powers.push(next);
            }
            out = &out + &powers[e as usize].mul_term(&m.without(v), c);
        }
        Ok(out)
    }

    /// Substitute `v := value` for a rational value; negative exponents on
    /// Laurent variables use the inverse (the value must then be nonzero).
    pub fn subst_var_rational(&self, v: VarId, value: &Rational) -> Result<MultiPoly, Error> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            let factor = if e >= 0 {
                pow_rational(value, e as u32)
            } else {
                if value.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                pow_rational(&(Rational::one() / value), (-e) as u32)
            };
            out.add_term(m.without(v), c * &factor);
        }
        Ok(out)
    }

    /// Full evaluation: every variable of the polynomial must be assigned.
    pub fn eval(&self, values: &BTreeMap<VarId, Rational>) -> Result<Rational, Error> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let val = values.get(&v).ok_or_else(|| Error::UnboundVariable {
                    var: v.name(),
                })?;
                if e < 0 {
                    if val.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    t *= pow_rational(&(Rational::one() / val), (-e) as u32);
                } else {
                    t *= pow_rational(val, e as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// The set of variables that actually occur.
    pub fn vars(&self) -> Vec<VarId> {
        let mut set: Vec<VarId> = Vec::new();
        for m in self.terms.keys() {
            for (v, _) in m.iter() {
                if !set.contains(&v) {
                    set.push(v);
                }
            }
        }
        set.sort();
        set
    }

    /// Exact division by a divisor that is univariate with a constant leading
    /// coefficient (this covers scalars and polynomials such as `2r - 2`).
    /// Returns `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let dvars = divisor.vars();
        if dvars.len() != 1 {
            return None;
        }
        let v = dvars[0];
        let dcoeffs = divisor.coeffs_in(v);
        let (&dtop, lead) = dcoeffs.iter().next_back().unwrap();
        let lead = lead.as_constant()?;
        if dtop < 0 {
            return None;
        }
        let mut rem = self.coeffs_in(v);
        let mut quo: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        while let Some((&rtop, _)) = rem.iter().next_back() {
            if rtop < dtop {
                return None;
            }
            let q = rem[&rtop].scale(&(Rational::one() / lead.clone()));
            for (de, dc) in &dcoeffs {
                let e = rtop - dtop + de;
                let delta = match dc.as_constant() {
                    Some(c) => q.scale(&c),
                    None => &q * dc,
                };
                let cur = rem.remove(&e).unwrap_or_else(MultiPoly::zero);
                let next = &cur - &delta;
                if !next.is_zero() {
                    rem.insert(e, next);
                }
            }
            quo.insert(rtop - dtop, q);
        }
        let mut out = MultiPoly::zero();
        for (e, p) in quo {
            let m = Monomial::try_from_pairs(&[(v, e)]).ok()?;
            out = &out + &p.mul_term(&m, &Rational::one());
        }
        Some(out)
    }

    /// Canonical monomial stream in display order (graded lex by name, highest
    /// first).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_name_cmp(a.0));
        v
    }
}

pub(crate) fn pow_rational(base: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
