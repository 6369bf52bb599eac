//! Implicit function solver: `G(v, w(v)) = 0`, `w(0) = 0`, as truncated series.

use num_traits::Zero;

use super::{MultiPolynomial, Table, TruncatedSeries};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;
use crate::linalg::Matrix;

type SeriesMatrix = Vec<Vec<TruncatedSeries>>;

fn mat_mul(a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = &a[i][0] * &b[0][j];
                    for (k, bk) in b.iter().enumerate().skip(1) {
                        acc = &acc + &(&a[i][k] * &bk[j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_vec(a: &SeriesMatrix, v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    a.iter()
        .map(|row| {
            let mut acc = &row[0] * &v[0];
            for (x, y) in row.iter().zip(v).skip(1) {
                acc = &acc + &(x * y);
            }
            acc
        })
        .collect()
}

/// Solves `G = 0` for the unknowns (indices into `G`'s table). Every other
/// variable occurring in `G` must have a same-named variable in `free`; the
/// result is a list of series over `free`.
///
/// True Newton iteration with precision `p -> 2p + 1`; the inverse Jacobian
/// is refined alongside by Newton-Schulz steps starting from the exact
/// inverse at the origin. The final residual is checked exactly.
pub fn newton_implicit_solve(g: &[MultiPolynomial], unknowns: &[usize], free: &Table, order: u32) -> Result<Vec<TruncatedSeries>> {
    let d = unknowns.len();
    if g.len() != d {
        return Err(Error::Invalid(format!("{} equations for {} unknowns", g.len(), d)));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let table = g[0].table().clone();
    for (j, gj) in g.iter().enumerate() {
        let c = gj.constant_term();
        if !c.is_zero() {
            return Err(Error::Basepoint(format!("equation {} has value {} at the origin", j + 1, c)));
        }
    }
    let jac: Vec<Vec<MultiPolynomial>> = g.iter().map(|gj| unknowns.iter().map(|&w| gj.partial_derivative(w)).collect()).collect();
    let j0 = Matrix::from_rows(jac.iter().map(|r| r.iter().map(|p| p.constant_term()).collect()).collect());
    let j0inv = j0.inverse().ok_or(Error::SingularJacobian)?;

    let mut w: Vec<TruncatedSeries> = (0..d).map(|_| TruncatedSeries::zero(free, 0)).collect();
    let mut x: SeriesMatrix =
        (0..d).map(|i| (0..d).map(|j| TruncatedSeries::constant(free, j0inv[(i, j)].clone(), 0)).collect()).collect();
    let mut prec = 0u32;
    while prec < order {
        let next = (2 * prec + 1).min(order);
        let subs = substitution(&table, unknowns, &w, next);
        let gv: Vec<TruncatedSeries> = g.iter().map(|gj| gj.substitute_series(free, &subs, next)).collect::<Result<_>>()?;
        let xw: SeriesMatrix = x.iter().map(|r| r.iter().map(|s| s.with_order(next)).collect()).collect();
        let corr = mat_vec(&xw, &gv);
        w = w.iter().zip(&corr).map(|(wi, ci)| &wi.with_order(next) - ci).collect();
        if next < order {
            let subs = substitution(&table, unknowns, &w, next);
            let jv: SeriesMatrix = jac
                .iter()
                .map(|r| r.iter().map(|p| p.substitute_series(free, &subs, next)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            let jx = mat_mul(&jv, &xw);
            let two_minus: SeriesMatrix = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let id = if i == j { GR::from_int(2) } else { GR::zero() };
                            &TruncatedSeries::constant(free, id, next) - &jx[i][j]
                        })
                        .collect()
                })
                .collect();
            x = mat_mul(&xw, &two_minus);
        }
        prec = next;
    }
    let residual = residual(g, unknowns, free, &w, order)?;
    if let Some((j, r)) = residual.iter().enumerate().find(|(_, r)| !r.is_zero()) {
        return Err(Error::Inconsistent(format!("Newton residual of equation {} is nonzero: {}", j + 1, r)));
    }
    Ok(w)
}

fn substitution(table: &Table, unknowns: &[usize], w: &[TruncatedSeries], order: u32) -> Vec<Option<TruncatedSeries>> {
    let mut subs = vec![None; table.len()];
    for (k, &u) in unknowns.iter().enumerate() {
        subs[u] = Some(w[k].with_order(order));
    }
    subs
}

/// `G(v, w(v))` truncated to `order`.
pub fn residual(g: &[MultiPolynomial], unknowns: &[usize], free: &Table, w: &[TruncatedSeries], order: u32) -> Result<Vec<TruncatedSeries>> {
    let Some(first) = g.first() else { return Ok(Vec::new()) };
    let subs = substitution(first.table(), unknowns, w, order);
    g.iter().map(|gj| gj.substitute_series(free, &subs, order)).collect()
}

/// Series-level version: `G` is known to order `N`; since the unknowns start
/// at degree 1 the unknown tail of `G` only affects degrees above `N`.
pub fn newton_solve_series(g: &[TruncatedSeries], unknowns: &[usize], free: &Table, order: u32) -> Result<Vec<TruncatedSeries>> {
    let avail = g.iter().map(|s| s.order()).min().unwrap_or(order);
    if avail < order {
        return Err(Error::OrderInsufficient { what: "implicit solve".into(), required: order, available: avail });
    }
    let polys: Vec<MultiPolynomial> = g.iter().map(|s| s.truncate(order).to_polynomial()).collect();
    newton_implicit_solve(&polys, unknowns, free, order)
}

/// Convenience: unknowns and free variables given by name; the free table is
/// built from the listed names.
pub fn solve_named(g: &[MultiPolynomial], unknowns: &[&str], free: &[&str], order: u32) -> Result<(Table, Vec<TruncatedSeries>)> {
    let table = g.first().map(|p| p.table().clone()).ok_or_else(|| Error::Invalid("empty system".into()))?;
    let u: Vec<usize> = unknowns.iter().map(|n| table.require(n)).collect::<Result<_>>()?;
    let ft = super::VariableTable::plain(free);
    let w = newton_implicit_solve(g, &u, &ft, order)?;
    Ok((ft, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableTable;

    #[test]
    fn linear_and_catalan() {
        let t = VariableTable::plain(&["v", "w"]);
        let v = MultiPolynomial::var(&t, 0);
        let w = MultiPolynomial::var(&t, 1);
        let (_, sol) = solve_named(&[&w + &v], &["w"], &["v"], 6).unwrap();
        assert_eq!(sol[0].univariate_coeffs(0), [0, -1, 0, 0, 0, 0, 0].map(GR::from_int).to_vec());

        let g = &(&w - &v) - &w.pow(2);
        let (_, sol) = solve_named(&[g], &["w"], &["v"], 4).unwrap();
        assert_eq!(sol[0].univariate_coeffs(0), [0, 1, 1, 2, 5].map(GR::from_int).to_vec());
    }

    #[test]
    fn geometric_in_two_variables() {
        let t = VariableTable::plain(&["v1", "v2", "w"]);
        let v1 = MultiPolynomial::var(&t, 0);
        let v2 = MultiPolynomial::var(&t, 1);
        let w = MultiPolynomial::var(&t, 2);
        let g = &(&w - &v1) - &(&v2 * &w);
        let (ft, sol) = solve_named(&[g], &["w"], &["v1", "v2"], 3).unwrap();
        let a = MultiPolynomial::var(&ft, 0);
        let b = MultiPolynomial::var(&ft, 1);
        let want = &(&a + &(&a * &b)) + &(&a * &b.pow(2));
        assert_eq!(sol[0], want.to_series(3));
    }

    #[test]
    fn errors() {
        let t = VariableTable::plain(&["v", "w"]);
        let v = MultiPolynomial::var(&t, 0);
        let w = MultiPolynomial::var(&t, 1);
        assert_eq!(solve_named(&[&w.pow(2) - &v], &["w"], &["v"], 3).unwrap_err(), Error::SingularJacobian);
        let g = &w + &MultiPolynomial::one(&t);
        assert!(matches!(solve_named(&[g], &["w"], &["v"], 3), Err(Error::Basepoint(_))));
    }
}
