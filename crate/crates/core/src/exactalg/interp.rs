//! Exact polynomial interpolation and Cauchy rational-function fitting.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::vars::VarId;
use super::{Error, Rational};

/// Interpolate the unique polynomial in `var` of degree <= `degbound` through
/// the first `degbound + 1` points, then validate it against every remaining
/// point. Values may be polynomials in other variables.
pub fn interpolate_poly(
    var: VarId,
    points: &[(Rational, MultiPoly)],
    degbound: usize,
) -> Result<MultiPoly, Error> {
    if points.len() < degbound + 1 {
        return Err(Error::InsufficientPoints {
            got: points.len(),
            need: degbound + 1,
        });
    }
    for i in 0..points.len() {
        for k in (i + 1)..points.len() {
            if points[i].0 == points[k].0 {
                return Err(Error::DuplicateAbscissa {
                    at: points[i].0.to_string(),
                });
            }
        }
    }
    let nodes = &points[..degbound + 1];
    // Newton divided differences with polynomial values.
    let xs: Vec<&Rational> = nodes.iter().map(|(a, _)| a).collect();
    let mut dd: Vec<MultiPoly> = nodes.iter().map(|(_, v)| v.clone()).collect();
    let mut coefs: Vec<MultiPoly> = vec![dd[0].clone()];
    for lvl in 1..nodes.len() {
        let mut next = Vec::with_capacity(dd.len() - 1);
        for i in 0..dd.len() - 1 {
            let denom = xs[i + lvl] - xs[i];
            next.push((&dd[i + 1] - &dd[i]).scale(&(Rational::one() / denom)));
        }
        dd = next;
        coefs.push(dd[0].clone());
    }
    // Expand the Newton form into monomials of `var`.
    let x = MultiPoly::var(var);
    let mut poly = MultiPoly::zero();
    let mut basis = MultiPoly::one();
    for (lvl, c) in coefs.iter().enumerate() {
        poly = &poly + &(&basis * c);
        if lvl + 1 < coefs.len() {
            basis = &basis * &(&x - &MultiPoly::constant(xs[lvl].clone()));
        }
    }
    // Validate on the held-back points.
    for (a, v) in &points[degbound + 1..] {
        let got = poly.subst_var(var, &MultiPoly::constant(a.clone()))?;
        if &got != v {
            return Err(Error::InterpValidation { at: a.to_string() });
        }
    }
    Ok(poly)
}

/// A reduced rational function in one variable: `gcd(num, den) = 1`, monic
/// denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFn {
    var: VarId,
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFn {
    pub fn var(&self) -> VarId {
        self.var
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    /// Degree of the numerator; `None` for the zero numerator.
    pub fn deg_num(&self) -> Option<usize> {
        if self.num.is_zero() {
            None
        } else {
            Some(self.num.degree_in(self.var) as usize)
        }
    }

    pub fn deg_den(&self) -> usize {
        self.den.degree_in(self.var) as usize
    }

    /// True when the function tends to zero as the variable grows:
    /// numerator degree strictly below denominator degree (the zero function
    /// counts as vanishing).
    pub fn vanishes_at_infinity(&self) -> bool {
        match self.deg_num() {
            None => true,
            Some(dn) => dn < self.deg_den(),
        }
    }

    /// Evaluate; `None` where the denominator vanishes.
    pub fn eval(&self, at: &Rational) -> Option<Rational> {
        let d = eval_univar(&self.den, self.var, at);
        if d.is_zero() {
            return None;
        }
        Some(eval_univar(&self.num, self.var, at) / d)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Exact Cauchy interpolation: find `N/D` with `deg N <= deg_num`,
/// `deg D <= deg_den` solving `N(x_i) - v_i D(x_i) = 0` for every supplied
/// point, normalized monic and reduced to lowest terms, then verified to
/// reproduce every point.
pub fn fit_ratfn(
    var: VarId,
    points: &[(Rational, Rational)],
    deg_num: usize,
    deg_den: usize,
) -> Result<RationalFn, Error> {
    let need = deg_num + deg_den + 2;
    if points.len() < need {
        return Err(Error::InsufficientPoints {
            got: points.len(),
            need,
        });
    }
    for i in 0..points.len() {
        for k in (i + 1)..points.len() {
            if points[i].0 == points[k].0 {
                return Err(Error::DuplicateAbscissa {
                    at: points[i].0.to_string(),
                });
            }
        }
    }
    // Unknowns: n_0..n_deg_num, d_0..d_deg_den.
    let cols = deg_num + 1 + deg_den + 1;
    let mut matrix: Vec<Vec<Rational>> = Vec::with_capacity(points.len());
    for (x, v) in points {
        let mut row = Vec::with_capacity(cols);
        let mut xp = Rational::one();
        for _ in 0..=deg_num {
            row.push(xp.clone());
            xp *= x;
        }
        let mut xp = Rational::one();
        for _ in 0..=deg_den {
            row.push(-(v * &xp));
            xp *= x;
        }
        matrix.push(row);
    }
    let sol = nullspace_vector(matrix).ok_or(Error::NoSolution)?;
    let num_c = sol[..=deg_num].to_vec();
    let den_c = sol[deg_num + 1..].to_vec();
    if den_c.iter().all(|c| c.is_zero()) {
        return Err(Error::NoSolution);
    }
    let (num_c, den_c) = reduce_fraction(num_c, den_c);
    let ratfn = RationalFn {
        var,
        num: dense_to_poly(var, &num_c),
        den: dense_to_poly(var, &den_c),
    };
    for (x, v) in points {
        match ratfn.eval(x) {
            None => {
                return Err(Error::DenominatorVanishes { at: x.to_string() });
            }
            Some(got) => {
                if &got != v {
                    return Err(Error::FitValidation { at: x.to_string() });
                }
            }
        }
    }
    Ok(ratfn)
}

/// One deterministic nontrivial nullspace vector of the given matrix, or
/// `None` when the kernel is trivial. Gauss-Jordan over the rationals; the
/// first free column is set to 1 and the remaining free columns to 0.
pub fn nullspace_vector(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    if m.is_empty() {
        return None;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let mut sel = None;
        for r in rank..rows {
            if !m[r][col].is_zero() {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        m.swap(rank, sel);
        let inv = Rational::one() / m[rank][col].clone();
        for c in col..cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let free = (0..cols).find(|&c| pivot_of_col[c].is_none())?;
    let mut sol = vec![Rational::zero(); cols];
    sol[free] = Rational::one();
    for col in 0..cols {
        if let Some(r) = pivot_of_col[col] {
            sol[col] = -m[r][free].clone();
        }
    }
    Some(sol)
}

// ---- dense univariate helpers (private) ----

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn dense_deg(v: &[Rational]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn dense_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = dense_deg(b).expect("division by zero polynomial");
    let mut rem: Vec<Rational> = a.to_vec();
    let mut quo = vec![Rational::zero(); a.len().max(db + 1)];
    while let Some(dr) = dense_deg(&rem) {
        if dr < db {
            break;
        }
        let f = &rem[dr] / &b[db];
        quo[dr - db] = f.clone();
        for i in 0..=db {
            let delta = &f * &b[i];
            rem[dr - db + i] = &rem[dr - db + i] - &delta;
        }
    }
    (trim(quo), trim(rem))
}

fn dense_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while dense_deg(&y).is_some() {
        let (_, r) = dense_divrem(&x, &y);
        x = y;
        y = r;
    }
    // normalize monic
    if let Some(d) = dense_deg(&x) {
        let lead = x[d].clone();
        for c in x.iter_mut() {
            *c = &*c / &lead;
        }
    }
    x
}

/// Reduce num/den to lowest terms and make the denominator monic.
fn reduce_fraction(num: Vec<Rational>, den: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let num = trim(num);
    let den = trim(den);
    let (mut num, mut den) = if dense_deg(&num).is_none() {
        (num, den)
    } else {
        let g = dense_gcd(&num, &den);
        if dense_deg(&g) == Some(0) {
            (num, den)
        } else {
            let (qn, rn) = dense_divrem(&num, &g);
            let (qd, rd) = dense_divrem(&den, &g);
            debug_assert!(dense_deg(&rn).is_none() && dense_deg(&rd).is_none());
            let _ = (rn, rd);
            (qn, qd)
        }
    };
    let dl = dense_deg(&den).expect("zero denominator after reduction");
    let lead = den[dl].clone();
    for c in den.iter_mut() {
        *c = &*c / &lead;
    }
    for c in num.iter_mut() {
        *c = &*c / &lead;
    }
    (num, den)
}

fn dense_to_poly(var: VarId, coeffs: &[Rational]) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let m = super::Monomial::from_pairs(&[(var, e as i32)]);
            p.add_term(m, c.clone());
        }
    }
    p
}

fn eval_univar(p: &MultiPoly, var: VarId, at: &Rational) -> Rational {
    let mut values = BTreeMap::new();
    values.insert(var, at.clone());
    p.eval(&values).expect("univariate evaluation")
}

/// Evaluate a univariate polynomial at a rational point.
pub fn eval_poly_at(p: &MultiPoly, var: VarId, at: &Rational) -> Rational {
    eval_univar(p, var, at)
}
