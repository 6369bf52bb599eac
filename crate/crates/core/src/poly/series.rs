//! Total-degree truncated power series.
//!
//! A series of order `N` knows every coefficient of total degree `<= N`.
//! Binary operations truncate to the smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::polynomial::{add_term, conjugate_swap_terms, derive_terms, fmt_terms, mul_terms, Monomial, Terms};
use super::table::{same_table, Table};
use super::MultiPolynomial;
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    table: Table,
    order: u32,
    terms: Terms,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, o: &Self) -> bool {
        self.order == o.order && same_table(&self.table, &o.table) && self.terms == o.terms
    }
}

fn truncated(terms: Terms, order: u32) -> Terms {
    terms.into_iter().filter(|(m, _)| m.degree() <= order).collect()
}

impl TruncatedSeries {
    pub fn zero(table: &Table, order: u32) -> Self {
        TruncatedSeries { table: table.clone(), order, terms: Terms::new() }
    }

    pub fn constant(table: &Table, c: GR, order: u32) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, Monomial::one(table.len()), c);
        TruncatedSeries { table: table.clone(), order, terms }
    }

    pub fn one(table: &Table, order: u32) -> Self {
        Self::constant(table, GR::one(), order)
    }

    pub fn var(table: &Table, i: usize, order: u32) -> Self {
        let mut terms = Terms::new();
        if order >= 1 {
            terms.insert(Monomial::var(table.len(), i), GR::one());
        }
        TruncatedSeries { table: table.clone(), order, terms }
    }

    pub fn from_polynomial(p: &MultiPolynomial, order: u32) -> Self {
        TruncatedSeries { table: p.table().clone(), order, terms: truncated(p.raw_terms().clone(), order) }
    }

    /// Univariate series from its coefficient list `c0, c1, ...`; the order is
    /// `coeffs.len() - 1`.
    pub fn from_coeffs(table: &Table, v: usize, coeffs: &[GR]) -> Self {
        assert!(!coeffs.is_empty(), "empty coefficient list");
        let mut terms = Terms::new();
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; table.len()];
            e[v] = k as u32;
            add_term(&mut terms, Monomial(e), c.clone());
        }
        TruncatedSeries { table: table.clone(), order: coeffs.len() as u32 - 1, terms }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GR)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> GR {
        self.terms.get(&Monomial(m.to_vec())).cloned().unwrap_or_else(GR::zero)
    }

    pub fn constant_term(&self) -> GR {
        self.coeff(&vec![0; self.table.len()])
    }

    /// Lowest total degree present, `None` for the zero series.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Univariate coefficient list in variable `v`, assuming no other variable
    /// occurs.
    pub fn univariate_coeffs(&self, v: usize) -> Vec<GR> {
        let mut out = vec![GR::zero(); self.order as usize + 1];
        for (m, c) in &self.terms {
            out[m.0[v] as usize] = c.clone();
        }
        out
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        TruncatedSeries { table: self.table.clone(), order, terms: truncated(self.terms.clone(), order) }
    }

    /// Forgets the order; the known part as an exact polynomial.
    pub fn to_polynomial(&self) -> MultiPolynomial {
        MultiPolynomial::from_raw(&self.table, self.terms.clone())
    }

    /// Equality of the parts both series know.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let n = self.order.min(o.order);
        (self - o).truncate(n).is_zero()
    }

    fn check_table(&self, o: &Self) {
        assert!(same_table(&self.table, &o.table), "series arithmetic across different variable tables");
    }

    pub fn scale(&self, c: &GR) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table, self.order);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        TruncatedSeries { table: self.table.clone(), order: self.order, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.table, self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Result order is `N - 1` (saturating at 0).
    pub fn partial_derivative(&self, v: usize) -> Self {
        let order = self.order.saturating_sub(1);
        TruncatedSeries { table: self.table.clone(), order, terms: truncated(derive_terms(&self.terms, v), order) }
    }

    pub fn conjugate_swap(&self) -> Result<Self> {
        Ok(TruncatedSeries {
            table: self.table.clone(),
            order: self.order,
            terms: conjugate_swap_terms(&self.terms, &self.table)?,
        })
    }

    /// Multiplicative inverse by Newton iteration `g <- g (2 - f g)`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().ok_or_else(|| Error::NonUnit(format!("series with zero constant term: {self}")))?;
        let mut g = Self::constant(&self.table, inv0, 0);
        let mut prec = 0u32;
        let two = Self::constant(&self.table, GR::from_int(2), self.order);
        while prec < self.order {
            prec = (2 * prec + 1).min(self.order);
            let g_p = g.with_order(prec);
            let f_p = self.truncate(prec);
            g = &g_p * &(&two.truncate(prec) - &(&f_p * &g_p));
        }
        Ok(g.with_order(self.order))
    }

    /// Reinterprets the known terms at a different order (zero-extending when
    /// raising it). Only valid when the caller knows the omitted terms vanish.
    pub(crate) fn with_order(&self, order: u32) -> Self {
        TruncatedSeries { table: self.table.clone(), order, terms: truncated(self.terms.clone(), order) }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inverse()?)
    }

    /// `self^(p/q)` for a series with constant term 1, via the binomial series.
    pub fn pow_ratio(&self, p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Invalid("zero exponent denominator".into()));
        }
        if !self.constant_term().is_one() {
            return Err(Error::NonUnit(format!("fractional power needs constant term 1, got {}", self.constant_term())));
        }
        let alpha = BigRational::new(p.into(), q.into());
        let u = self - &Self::one(&self.table, self.order);
        // binom(alpha, k) built incrementally, then Horner in u.
        let mut binoms = vec![BigRational::one()];
        for k in 1..=self.order as i64 {
            let prev = binoms.last().unwrap().clone();
            binoms.push(prev * (&alpha - BigRational::from_integer((k - 1).into())) / BigRational::from_integer(k.into()));
        }
        Ok(Self::horner(&u, &binoms))
    }

    fn horner(u: &Self, coeffs: &[BigRational]) -> Self {
        let mut acc = Self::zero(&u.table, u.order);
        for c in coeffs.iter().rev() {
            acc = &(&acc * u) + &Self::constant(&u.table, GR::from_real(c.clone()), u.order);
        }
        acc
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonUnit("exp needs a series with zero constant term".into()));
        }
        let mut coeffs = vec![BigRational::one()];
        for k in 1..=self.order as i64 {
            let prev = coeffs.last().unwrap().clone();
            coeffs.push(prev / BigRational::from_integer(k.into()));
        }
        Ok(Self::horner(self, &coeffs))
    }

    /// Substitutes series for variables. `subs[i] = None` maps variable `i`
    /// to the same-named variable of `target`. Substituted series must have
    /// zero constant term, otherwise unknown high-order terms would leak into
    /// low degrees.
    pub fn compose(&self, target: &Table, subs: &[Option<TruncatedSeries>]) -> Result<TruncatedSeries> {
        let mut order = self.order;
        let mut images = Vec::with_capacity(self.table.len());
        for i in 0..self.table.len() {
            let used = self.uses_var(i);
            let img = match subs.get(i).and_then(|s| s.as_ref()) {
                Some(s) => {
                    if !same_table(s.table(), target) {
                        return Err(Error::TableMismatch("substituted series over another table".into()));
                    }
                    if used && !s.constant_term().is_zero() {
                        return Err(Error::Composition(format!(
                            "series substituted for `{}` has nonzero constant term {}",
                            self.table.name(i),
                            s.constant_term()
                        )));
                    }
                    if used {
                        order = order.min(s.order());
                    }
                    Some(s.clone())
                }
                None if used => {
                    let j = target.position(self.table.name(i)).ok_or_else(|| {
                        Error::TableMismatch(format!("variable `{}` not in target table", self.table.name(i)))
                    })?;
                    Some(TruncatedSeries::var(target, j, self.order))
                }
                None => None,
            };
            images.push(img);
        }
        let mut powers: Vec<Vec<TruncatedSeries>> = images
            .iter()
            .map(|s| match s {
                Some(s) => vec![TruncatedSeries::one(target, order), s.truncate(order)],
                None => vec![TruncatedSeries::one(target, order)],
            })
            .collect();
        let mut acc = Terms::new();
        for (m, c) in &self.terms {
            let mut t = TruncatedSeries::constant(target, c.clone(), order);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &powers[i][1];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            for (m2, c2) in t.terms {
                add_term(&mut acc, m2, c2);
            }
        }
        Ok(TruncatedSeries { table: target.clone(), order, terms: acc })
    }

    pub fn compose_named(&self, target: &Table, subs: &[(&str, TruncatedSeries)]) -> Result<TruncatedSeries> {
        let mut v: Vec<Option<TruncatedSeries>> = vec![None; self.table.len()];
        for (name, s) in subs {
            if let Some(i) = self.table.position(name) {
                v[i] = Some(s.clone());
            }
        }
        self.compose(target, &v)
    }

    /// Sets the listed variables to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| vars.iter().all(|&v| m.0[v] == 0)).map(|(m, c)| (m.clone(), c.clone())).collect();
        TruncatedSeries { table: self.table.clone(), order: self.order, terms }
    }

    /// Coefficient of `v^e` as a series in the remaining variables, known to
    /// order `N - e`.
    pub fn coefficient_of(&self, v: usize, e: u32) -> Result<Self> {
        if e > self.order {
            return Err(Error::OrderInsufficient { what: format!("coefficient of {}^{e}", self.table.name(v)), required: e, available: self.order });
        }
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            if m.0[v] == e {
                let mut m2 = m.clone();
                m2.0[v] = 0;
                add_term(&mut out, m2, c.clone());
            }
        }
        Ok(TruncatedSeries { table: self.table.clone(), order: self.order - e, terms: out })
    }

    /// Same series over another table, matching variables by name.
    pub fn embed(&self, target: &Table) -> Result<TruncatedSeries> {
        let p = self.to_polynomial().embed(target)?;
        Ok(TruncatedSeries::from_polynomial(&p, self.order))
    }

    /// Exact value at a point, only meaningful for series known to be
    /// polynomials.
    pub fn evaluate_polynomial(&self, point: &[Option<GR>]) -> Result<GR> {
        self.to_polynomial().evaluate(point)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.terms, &self.table, f)?;
        write!(f, " + O({})", self.order + 1)
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, o: &TruncatedSeries) -> TruncatedSeries {
        self.check_table(o);
        let order = self.order.min(o.order);
        let mut terms = truncated(self.terms.clone(), order);
        for (m, c) in &o.terms {
            if m.degree() <= order {
                add_term(&mut terms, m.clone(), c.clone());
            }
        }
        TruncatedSeries { table: self.table.clone(), order, terms }
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, o: &TruncatedSeries) -> TruncatedSeries {
        self + &-o
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, o: &TruncatedSeries) -> TruncatedSeries {
        self.check_table(o);
        let order = self.order.min(o.order);
        TruncatedSeries { table: self.table.clone(), order, terms: mul_terms(&self.terms, &o.terms, Some(order)) }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&-GR::one())
    }
}
