//! Annihilating polynomials of truncated series, by exact kernels of Taylor
//! coefficient matrices.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Monomial, MultiPolynomial, Table, TruncatedSeries, VarKind, VariableTable};

/// Extra Taylor coefficients beyond the unknown count.
pub const MARGIN: u32 = 4;

#[derive(Clone, Debug)]
pub struct Annihilator {
    /// Over `(f, t)` or `(f, v1..vm)`; `f` is variable 0.
    pub poly: MultiPolynomial,
    /// Degree in `f`.
    pub q: u32,
    /// Degree bound in the other variables (univariate `k`, or total degree
    /// for the multivariate ansatz).
    pub k: u32,
    /// Certified truncation order.
    pub order: u32,
    pub kernel_dim: usize,
    pub searched: Vec<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub enum Search {
    Found(Annihilator),
    NotFound { searched: Vec<(u32, u32)> },
}

impl Search {
    pub fn found(&self) -> Option<&Annihilator> {
        match self {
            Search::Found(a) => Some(a),
            Search::NotFound { .. } => None,
        }
    }

    pub fn into_found(self) -> Option<Annihilator> {
        match self {
            Search::Found(a) => Some(a),
            Search::NotFound { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NotFoundReport {
    pub status: &'static str,
    pub searched: Vec<(u32, u32)>,
}

/// Sets one coefficient to 1: among the terms of highest degree in variable
/// 0, the one lowest in graded order.
pub fn normalize_annihilator(p: &MultiPolynomial) -> MultiPolynomial {
    let top = p.degree_in(0);
    let pivot = p.terms().filter(|(m, _)| m.exps()[0] == top).map(|(m, c)| (m.clone(), c.clone())).min_by(|a, b| a.0.cmp(&b.0));
    match pivot.and_then(|(_, c)| c.inv()) {
        Some(inv) => p.scale(&inv),
        None => p.clone(),
    }
}

/// `(f, <series variables>)`, with `f` named `fname`.
pub fn annihilator_table(fname: &str, vars: &Table) -> Table {
    let mut b = VariableTable::builder().var(fname, VarKind::MapSymbol);
    for v in vars.vars() {
        b = b.var(&v.name, v.kind);
    }
    b.build().expect("annihilator table")
}

/// `P(f, v)` truncated at the order of `f`.
pub fn substitute_annihilator(p: &MultiPolynomial, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let t = f.table();
    let order = f.order();
    let mut subs: Vec<Option<TruncatedSeries>> = vec![Some(f.clone())];
    subs.extend((0..t.len()).map(|i| Some(TruncatedSeries::var(t, i, order))));
    p.substitute_series(t, &subs, order)
}

fn powers(f: &TruncatedSeries, q: u32) -> Vec<TruncatedSeries> {
    let mut out = vec![TruncatedSeries::one(f.table(), f.order())];
    for i in 1..=q as usize {
        let next = &out[i - 1] * f;
        out.push(next);
    }
    out
}

/// Monomials in `m` variables of total degree at most `d`, graded order.
fn monomials_upto(m: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    fn rec(m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(m, left - e, cur, out);
            cur.pop();
        }
    }
    rec(m, d, &mut Vec::new(), &mut out);
    out.sort_by_key(|a| Monomial(a.clone()));
    out
}

/// Builds the kernel problem for the columns `f^i v^α` and returns a
/// normalized, verified annihilator if the kernel is nontrivial.
fn solve_columns(f: &TruncatedSeries, fname: &str, cols: &[(u32, Vec<u32>)], fpow: &[TruncatedSeries]) -> Result<Option<(MultiPolynomial, usize)>> {
    let t = f.table();
    let m = t.len();
    let order = f.order();
    let rows = monomials_upto(m, order);
    let row_index: std::collections::HashMap<Vec<u32>, usize> = rows.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let mut mat = Matrix::zeros(rows.len(), cols.len());
    for (c, (i, alpha)) in cols.iter().enumerate() {
        for (mono, coef) in fpow[*i as usize].terms() {
            let e: Vec<u32> = mono.exps().iter().zip(alpha).map(|(a, b)| a + b).collect();
            if e.iter().sum::<u32>() > order {
                continue;
            }
            if let Some(&r) = row_index.get(&e) {
                mat[(r, c)] = coef.clone();
            }
        }
    }
    let kernel = mat.nullspace();
    let Some(v) = kernel.first() else { return Ok(None) };
    let at = annihilator_table(fname, t);
    let terms = cols.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|((i, alpha), c)| {
        let mut e = vec![*i];
        e.extend(alpha);
        (e, c.clone())
    });
    let p = normalize_annihilator(&MultiPolynomial::from_terms(&at, terms)?);
    if !substitute_annihilator(&p, f)?.is_zero() {
        return Err(Error::Inconsistent("kernel vector fails substitution check".into()));
    }
    Ok(Some((p, kernel.len())))
}

/// Deepens over `s = q + k` (smaller `q` first) up to the bounds. `f` must be
/// univariate.
pub fn find_annihilator(f: &TruncatedSeries, qmax: u32, kmax: u32) -> Result<Search> {
    find_annihilator_named(f, "f", qmax, kmax)
}

pub fn find_annihilator_named(f: &TruncatedSeries, fname: &str, qmax: u32, kmax: u32) -> Result<Search> {
    if f.table().len() != 1 {
        return Err(Error::Invalid(format!("univariate search needs one variable, series has {}", f.table().len())));
    }
    let n = f.order();
    let fpow = powers(f, qmax);
    let mut searched = Vec::new();
    for s in 1..=qmax + kmax {
        for q in 1..=qmax.min(s) {
            let k = s - q;
            if k > kmax {
                continue;
            }
            let needed = (q + 1) * (k + 1) + MARGIN;
            if n + 1 < needed {
                return Err(Error::OrderInsufficient { what: format!("annihilator search at (q, k) = ({q}, {k})"), required: needed - 1, available: n });
            }
            searched.push((q, k));
            let cols: Vec<(u32, Vec<u32>)> = (0..=q).flat_map(|i| (0..=k).map(move |j| (i, vec![j]))).collect();
            if let Some((poly, kernel_dim)) = solve_columns(f, fname, &cols, &fpow)? {
                return Ok(Search::Found(Annihilator { q: poly.degree_in(0), k, poly, order: n, kernel_dim, searched }));
            }
        }
    }
    Ok(Search::NotFound { searched })
}

/// Ansatz over all `f^i v^α` of total degree at most `D'`, deepening
/// `D' = 1..=D`. `searched` records `(D', 0)`.
pub fn multivariate_annihilator(f: &TruncatedSeries, degree: u32) -> Result<Search> {
    multivariate_annihilator_named(f, "f", degree)
}

pub fn multivariate_annihilator_named(f: &TruncatedSeries, fname: &str, degree: u32) -> Result<Search> {
    let m = f.table().len();
    let n = f.order();
    let fpow = powers(f, degree);
    let mut searched = Vec::new();
    for dd in 1..=degree {
        let needed = 2 * dd + MARGIN;
        if n < needed {
            return Err(Error::OrderInsufficient { what: format!("multivariate annihilator at degree {dd}"), required: needed, available: n });
        }
        searched.push((dd, 0));
        let cols: Vec<(u32, Vec<u32>)> = monomials_upto(m + 1, dd)
            .into_iter()
            .map(|e| (e[0], e[1..].to_vec()))
            .collect();
        if let Some((poly, kernel_dim)) = solve_columns(f, fname, &cols, &fpow)? {
            let q = poly.degree_in(0);
            return Ok(Search::Found(Annihilator { poly, q, k: dd, order: n, kernel_dim, searched }));
        }
    }
    Ok(Search::NotFound { searched })
}
