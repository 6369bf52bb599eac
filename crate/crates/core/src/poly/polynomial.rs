//! Sparse multivariate polynomials over the Gaussian rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::table::{same_table, Table};
use super::TruncatedSeries;
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lex with the first variable most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub(crate) type Terms = BTreeMap<Monomial, GR>;

pub(crate) fn add_term(terms: &mut Terms, m: Monomial, c: GR) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Product of two term maps, dropping everything above `max_deg`.
pub(crate) fn mul_terms(a: &Terms, b: &Terms, max_deg: Option<u32>) -> Terms {
    if a.len() * b.len() >= 64 {
        return mul_terms_scaled(a, b, max_deg);
    }
    let mut acc: HashMap<Monomial, GR> = HashMap::new();
    for (ma, ca) in a {
        let da = ma.degree();
        if max_deg.is_some_and(|n| da > n) {
            break;
        }
        for (mb, cb) in b {
            if max_deg.is_some_and(|n| da + mb.degree() > n) {
                break;
            }
            let m = ma.mul(mb);
            let c = ca * cb;
            acc.entry(m).and_modify(|x| *x += &c).or_insert(c);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `(D, [(m, D·c)])` with `D` the lcm of all denominators.
fn integral(t: &Terms) -> (BigInt, Vec<(&Monomial, BigInt, BigInt)>) {
    let mut den = BigInt::one();
    for c in t.values() {
        den = den.lcm(c.re().denom()).lcm(c.im().denom());
    }
    let scaled = |r: &BigRational| r.numer() * (&den / r.denom());
    let v = t.iter().map(|(m, c)| (m, scaled(c.re()), scaled(c.im()))).collect();
    (den, v)
}

/// Same product, convolved over Gaussian integers with a single reduction
/// per output coefficient.
fn mul_terms_scaled(a: &Terms, b: &Terms, max_deg: Option<u32>) -> Terms {
    let (da, ia) = integral(a);
    let (db, ib) = integral(b);
    let mut acc: HashMap<Monomial, (BigInt, BigInt)> = HashMap::new();
    for (ma, ar, ai) in &ia {
        let dga = ma.degree();
        if max_deg.is_some_and(|n| dga > n) {
            break;
        }
        for (mb, br, bi) in &ib {
            if max_deg.is_some_and(|n| dga + mb.degree() > n) {
                break;
            }
            let e = acc.entry(ma.mul(mb)).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            e.0 += ar * br - ai * bi;
            e.1 += ar * bi + ai * br;
        }
    }
    let den = da * db;
    acc.into_iter()
        .filter(|(_, (r, i))| !r.is_zero() || !i.is_zero())
        .map(|(m, (r, i))| (m, GR::new(BigRational::new(r, den.clone()), BigRational::new(i, den.clone()))))
        .collect()
}

pub(crate) fn derive_terms(terms: &Terms, v: usize) -> Terms {
    let mut out = Terms::new();
    for (m, c) in terms {
        let e = m.0[v];
        if e == 0 {
            continue;
        }
        let mut m2 = m.clone();
        m2.0[v] -= 1;
        add_term(&mut out, m2, c * &GR::from_int(e as i64));
    }
    out
}

pub(crate) fn conjugate_swap_terms(terms: &Terms, table: &Table) -> Result<Terms> {
    let n = table.len();
    let mut perm = vec![0usize; n];
    for (i, p) in perm.iter_mut().enumerate() {
        *p = i;
    }
    for (i, p) in perm.iter_mut().enumerate() {
        if let Some(q) = table.partner(i) {
            *p = q;
        }
    }
    let mut out = Terms::new();
    for (m, c) in terms {
        let mut e = vec![0; n];
        for (i, &x) in m.0.iter().enumerate() {
            if x > 0 {
                if table.partner(i).is_none() && table.var(i).kind != super::VarKind::Parameter {
                    return Err(Error::MalformedTable(format!(
                        "variable `{}` has no conjugate partner",
                        table.name(i)
                    )));
                }
                e[perm[i]] += x;
            }
        }
        add_term(&mut out, Monomial(e), c.conj());
    }
    Ok(out)
}

pub(crate) fn fmt_terms(terms: &Terms, table: &Table, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (m, c)) in terms.iter().rev().enumerate() {
        let (neg, mag) = if c.is_real() && c.re() < &BigRational::zero() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        let sign = match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        write!(f, "{sign}")?;
        let vars: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { table.name(i).to_string() } else { format!("{}^{}", table.name(i), e) })
            .collect();
        let coeff = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
        if vars.is_empty() {
            write!(f, "{coeff}")?;
        } else if mag.is_one() {
            write!(f, "{}", vars.join("*"))?;
        } else {
            write!(f, "{}*{}", coeff, vars.join("*"))?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct MultiPolynomial {
    table: Table,
    terms: Terms,
}

impl PartialEq for MultiPolynomial {
    fn eq(&self, o: &Self) -> bool {
        same_table(&self.table, &o.table) && self.terms == o.terms
    }
}

impl MultiPolynomial {
    pub fn zero(table: &Table) -> Self {
        MultiPolynomial { table: table.clone(), terms: Terms::new() }
    }

    pub fn constant(table: &Table, c: GR) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, Monomial::one(table.len()), c);
        MultiPolynomial { table: table.clone(), terms }
    }

    pub fn one(table: &Table) -> Self {
        Self::constant(table, GR::one())
    }

    pub fn var(table: &Table, i: usize) -> Self {
        let mut terms = Terms::new();
        terms.insert(Monomial::var(table.len(), i), GR::one());
        MultiPolynomial { table: table.clone(), terms }
    }

    pub fn var_named(table: &Table, name: &str) -> Result<Self> {
        Ok(Self::var(table, table.require(name)?))
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, GR)>>(table: &Table, it: I) -> Result<Self> {
        let mut terms = Terms::new();
        for (e, c) in it {
            if e.len() != table.len() {
                return Err(Error::MalformedTable(format!(
                    "exponent vector of length {} for a table of {} variables",
                    e.len(),
                    table.len()
                )));
            }
            add_term(&mut terms, Monomial(e), c);
        }
        Ok(MultiPolynomial { table: table.clone(), terms })
    }

    pub(crate) fn from_raw(table: &Table, terms: Terms) -> Self {
        MultiPolynomial { table: table.clone(), terms }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GR)> {
        self.terms.iter()
    }

    pub(crate) fn raw_terms(&self) -> &Terms {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
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

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    fn check_table(&self, o: &Self) {
        assert!(
            same_table(&self.table, &o.table),
            "polynomial arithmetic across different variable tables"
        );
    }

    pub fn scale(&self, c: &GR) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        MultiPolynomial { table: self.table.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.table);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_derivative(&self, v: usize) -> Self {
        MultiPolynomial { table: self.table.clone(), terms: derive_terms(&self.terms, v) }
    }

    /// Formal conjugation: swap every variable with its partner and conjugate
    /// every coefficient. Parameters without partners are treated as real.
    pub fn conjugate_swap(&self) -> Result<Self> {
        Ok(MultiPolynomial { table: self.table.clone(), terms: conjugate_swap_terms(&self.terms, &self.table)? })
    }

    pub fn is_real(&self) -> Result<bool> {
        Ok(self.conjugate_swap()? == *self)
    }

    /// Exact value at a point; `point[i]` is the value of variable `i`.
    pub fn evaluate(&self, point: &[Option<GR>]) -> Result<GR> {
        let mut acc = GR::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let x = point
                        .get(i)
                        .and_then(|x| x.as_ref())
                        .ok_or_else(|| Error::Unassigned(self.table.name(i).to_string()))?;
                    t *= &x.pow(e);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn evaluate_named(&self, point: &[(&str, GR)]) -> Result<GR> {
        let mut p = vec![None; self.table.len()];
        for (name, v) in point {
            if let Some(i) = self.table.position(name) {
                p[i] = Some(v.clone());
            }
        }
        self.evaluate(&p)
    }

    pub fn eval_all(&self, point: &[GR]) -> Result<GR> {
        let p: Vec<Option<GR>> = point.iter().cloned().map(Some).collect();
        self.evaluate(&p)
    }

    /// Replaces some variables by constants, keeping the table.
    pub fn substitute_constants(&self, values: &[(usize, GR)]) -> Self {
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut c2 = c.clone();
            for (v, x) in values {
                let e = m2.0[*v];
                if e > 0 {
                    c2 *= &x.pow(e);
                    m2.0[*v] = 0;
                }
            }
            add_term(&mut out, m2, c2);
        }
        MultiPolynomial { table: self.table.clone(), terms: out }
    }

    /// Polynomial substitution into `target`. `subs[i] = None` maps variable
    /// `i` to the variable of the same name in `target`.
    pub fn substitute(&self, target: &Table, subs: &[Option<MultiPolynomial>]) -> Result<MultiPolynomial> {
        let images = self.images(target, subs)?;
        let mut powers: Vec<Vec<MultiPolynomial>> = images.iter().map(|p| vec![MultiPolynomial::one(target), p.clone()]).collect();
        let mut acc = MultiPolynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPolynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    fn images(&self, target: &Table, subs: &[Option<MultiPolynomial>]) -> Result<Vec<MultiPolynomial>> {
        (0..self.table.len())
            .map(|i| match subs.get(i).and_then(|s| s.as_ref()) {
                Some(p) => {
                    if !same_table(p.table(), target) {
                        return Err(Error::TableMismatch("substituted polynomial over another table".into()));
                    }
                    Ok(p.clone())
                }
                None => {
                    if self.uses_var(i) {
                        Ok(MultiPolynomial::var(target, target.require(self.table.name(i)).map_err(|_| {
                            Error::TableMismatch(format!("variable `{}` not in target table", self.table.name(i)))
                        })?))
                    } else {
                        Ok(MultiPolynomial::zero(target))
                    }
                }
            })
            .collect()
    }

    /// Substitutes named polynomials, mapping all other variables by name.
    pub fn substitute_named(&self, target: &Table, subs: &[(&str, MultiPolynomial)]) -> Result<MultiPolynomial> {
        let mut v: Vec<Option<MultiPolynomial>> = vec![None; self.table.len()];
        for (name, p) in subs {
            if let Some(i) = self.table.position(name) {
                v[i] = Some(p.clone());
            }
        }
        self.substitute(target, &v)
    }

    /// Same polynomial over another table, matching variables by name.
    pub fn embed(&self, target: &Table) -> Result<MultiPolynomial> {
        let mut out = Terms::new();
        let map: Vec<Option<usize>> = (0..self.table.len()).map(|i| target.position(self.table.name(i))).collect();
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    let j = map[i].ok_or_else(|| {
                        Error::TableMismatch(format!("variable `{}` not in target table", self.table.name(i)))
                    })?;
                    e[j] += x;
                }
            }
            add_term(&mut out, Monomial(e), c.clone());
        }
        Ok(MultiPolynomial { table: target.clone(), terms: out })
    }

    /// Series substitution; the polynomial itself is exact, so substituted
    /// series may carry constant terms.
    pub fn substitute_series(&self, target: &Table, subs: &[Option<TruncatedSeries>], order: u32) -> Result<TruncatedSeries> {
        let mut images = Vec::with_capacity(self.table.len());
        let mut ord = order;
        for i in 0..self.table.len() {
            let used = self.uses_var(i);
            let img = match subs.get(i).and_then(|s| s.as_ref()) {
                Some(s) => {
                    if !same_table(s.table(), target) {
                        return Err(Error::TableMismatch("substituted series over another table".into()));
                    }
                    if used {
                        ord = ord.min(s.order());
                    }
                    s.clone()
                }
                None if used => TruncatedSeries::var(
                    target,
                    target.position(self.table.name(i)).ok_or_else(|| {
                        Error::TableMismatch(format!("variable `{}` not in target table", self.table.name(i)))
                    })?,
                    order,
                ),
                None => TruncatedSeries::zero(target, order),
            };
            images.push(img);
        }
        let mut powers: Vec<Vec<TruncatedSeries>> =
            images.iter().map(|s| vec![TruncatedSeries::one(target, ord), s.truncate(ord)]).collect();
        let mut acc = TruncatedSeries::zero(target, ord);
        for (m, c) in &self.terms {
            let mut t = TruncatedSeries::constant(target, c.clone(), ord);
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
            acc = &acc + &t;
        }
        Ok(acc)
    }

    pub fn to_series(&self, order: u32) -> TruncatedSeries {
        TruncatedSeries::from_polynomial(self, order)
    }

    /// Coefficient of `v^e` as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: usize, e: u32) -> MultiPolynomial {
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            if m.0[v] == e {
                let mut m2 = m.clone();
                m2.0[v] = 0;
                add_term(&mut out, m2, c.clone());
            }
        }
        MultiPolynomial { table: self.table.clone(), terms: out }
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPolynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        MultiPolynomial { table: self.table.clone(), terms }
    }
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.terms, &self.table, f)
    }
}

impl<'a> Add<&'a MultiPolynomial> for &'a MultiPolynomial {
    type Output = MultiPolynomial;
    fn add(self, o: &MultiPolynomial) -> MultiPolynomial {
        self.check_table(o);
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        MultiPolynomial { table: self.table.clone(), terms }
    }
}

impl<'a> Sub<&'a MultiPolynomial> for &'a MultiPolynomial {
    type Output = MultiPolynomial;
    fn sub(self, o: &MultiPolynomial) -> MultiPolynomial {
        self.check_table(o);
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m.clone(), -c);
        }
        MultiPolynomial { table: self.table.clone(), terms }
    }
}

impl<'a> Mul<&'a MultiPolynomial> for &'a MultiPolynomial {
    type Output = MultiPolynomial;
    fn mul(self, o: &MultiPolynomial) -> MultiPolynomial {
        self.check_table(o);
        MultiPolynomial { table: self.table.clone(), terms: mul_terms(&self.terms, &o.terms, None) }
    }
}

impl Neg for &MultiPolynomial {
    type Output = MultiPolynomial;
    fn neg(self) -> MultiPolynomial {
        self.scale(&-GR::one())
    }
}
