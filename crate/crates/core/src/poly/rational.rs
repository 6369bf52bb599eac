//! Quotients of polynomials, kept unreduced (no gcd over Q(i)).

use std::fmt;

use num_traits::{One, Zero};

use super::table::{same_table, Table};
use super::{MultiPolynomial, TruncatedSeries};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: MultiPolynomial,
    den: MultiPolynomial,
}

impl RationalFunction {
    pub fn new(num: MultiPolynomial, den: MultiPolynomial) -> Result<Self> {
        if !same_table(num.table(), den.table()) {
            return Err(Error::TableMismatch("numerator and denominator over different tables".into()));
        }
        if den.is_zero() {
            return Err(Error::NonUnit("zero denominator".into()));
        }
        Ok(RationalFunction { num, den }.normalized())
    }

    pub fn from_polynomial(p: MultiPolynomial) -> Self {
        let den = MultiPolynomial::one(p.table());
        RationalFunction { num: p, den }
    }

    pub fn constant(table: &Table, c: GR) -> Self {
        Self::from_polynomial(MultiPolynomial::constant(table, c))
    }

    /// Scales so that the leading denominator coefficient is 1; a constant
    /// denominator is folded into the numerator.
    fn normalized(self) -> Self {
        let lead = self.den.terms().next_back().map(|(_, c)| c.clone()).unwrap_or_else(GR::one);
        let inv = lead.inv().expect("nonzero leading coefficient");
        let num = self.num.scale(&inv);
        let den = self.den.scale(&inv);
        if den.is_constant() {
            return RationalFunction { num, den };
        }
        if num.is_zero() {
            return RationalFunction { den: MultiPolynomial::one(num.table()), num };
        }
        RationalFunction { num, den }
    }

    pub fn numerator(&self) -> &MultiPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPolynomial {
        &self.den
    }

    pub fn table(&self) -> &Table {
        self.num.table()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial, when the denominator is constant.
    pub fn as_polynomial(&self) -> Option<MultiPolynomial> {
        self.is_polynomial().then(|| self.num.scale(&self.den.constant_term().inv().expect("nonzero constant")))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn evaluate(&self, point: &[Option<GR>]) -> Result<GR> {
        let d = self.den.evaluate(point)?;
        let inv = d.inv().ok_or_else(|| Error::NonUnit(format!("denominator {} vanishes at the point", self.den)))?;
        Ok(&self.num.evaluate(point)? * &inv)
    }

    pub fn eval_all(&self, point: &[GR]) -> Result<GR> {
        let p: Vec<Option<GR>> = point.iter().cloned().map(Some).collect();
        self.evaluate(&p)
    }

    /// Expansion at the origin.
    pub fn to_series(&self, order: u32) -> Result<TruncatedSeries> {
        let d = self.den.to_series(order).inverse().map_err(|_| {
            Error::NonUnit(format!("denominator {} vanishes at the expansion point", self.den))
        })?;
        Ok(&self.num.to_series(order) * &d)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFunction { num: &self.num + &o.num, den: self.den.clone() }.normalized();
        }
        RationalFunction { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }.normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction { num: &self.num * &o.num, den: &self.den * &o.den }.normalized()
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::NonUnit("division by the zero rational function".into()));
        }
        Ok(RationalFunction { num: &self.num * &o.den, den: &self.den * &o.num }.normalized())
    }

    pub fn scale(&self, c: &GR) -> Self {
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }.normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn partial_derivative(&self, v: usize) -> Self {
        let num = &(&self.num.partial_derivative(v) * &self.den) - &(&self.num * &self.den.partial_derivative(v));
        RationalFunction { num, den: self.den.pow(2) }.normalized()
    }

    pub fn conjugate_swap(&self) -> Result<Self> {
        Ok(RationalFunction { num: self.num.conjugate_swap()?, den: self.den.conjugate_swap()? }.normalized())
    }

    /// Polynomial substitution into numerator and denominator.
    pub fn substitute(&self, target: &Table, subs: &[Option<MultiPolynomial>]) -> Result<Self> {
        Self::new(self.num.substitute(target, subs)?, self.den.substitute(target, subs)?)
    }

    pub fn embed(&self, target: &Table) -> Result<Self> {
        Self::new(self.num.embed(target)?, self.den.embed(target)?)
    }

    /// `p(r_1, ..., r_m)` for rational images; `None` maps by name.
    pub fn compose_polynomial(p: &MultiPolynomial, target: &Table, subs: &[Option<RationalFunction>]) -> Result<Self> {
        let mut acc = RationalFunction::constant(target, GR::zero());
        let src = p.table();
        let images: Vec<Option<RationalFunction>> = (0..src.len())
            .map(|i| match subs.get(i).and_then(|s| s.as_ref()) {
                Some(r) => Ok(Some(r.clone())),
                None if p.uses_var(i) => Ok(Some(RationalFunction::from_polynomial(MultiPolynomial::var(
                    target,
                    target.position(src.name(i)).ok_or_else(|| {
                        Error::TableMismatch(format!("variable `{}` not in target table", src.name(i)))
                    })?,
                )))),
                None => Ok(None),
            })
            .collect::<Result<_>>()?;
        for (m, c) in p.terms() {
            let mut t = RationalFunction::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].as_ref().expect("used variable has an image").pow(e));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl PartialEq for RationalFunction {
    /// Equality as functions: cross-multiplication.
    fn eq(&self, o: &Self) -> bool {
        same_table(self.table(), o.table()) && &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableTable;

    #[test]
    fn series_of_quotient() {
        let t = VariableTable::plain(&["t"]);
        let x = MultiPolynomial::var(&t, 0);
        let r = RationalFunction::new(x.clone(), &MultiPolynomial::one(&t) + &x.pow(2)).unwrap();
        let s = r.to_series(7).unwrap();
        let want: Vec<GR> = [0, 1, 0, -1, 0, 1, 0, -1].iter().map(|&k| GR::from_int(k)).collect();
        assert_eq!(s.univariate_coeffs(0), want);
        assert!(RationalFunction::new(MultiPolynomial::one(&t), x).unwrap().to_series(3).is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let t = VariableTable::plain(&["a", "b"]);
        let a = RationalFunction::from_polynomial(MultiPolynomial::var(&t, 0));
        let b = RationalFunction::new(MultiPolynomial::one(&t), MultiPolynomial::var(&t, 1)).unwrap();
        let s = a.add(&b);
        assert_eq!(s.sub(&b), a);
        assert_eq!(s.mul(&b).div(&b).unwrap(), s);
        let d = b.partial_derivative(1);
        assert_eq!(d, b.pow(2).neg());
    }
}
