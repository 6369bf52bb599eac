//! Tangent Cauchy–Riemann operators with polynomial coefficients.
//!
//! For a normalized system with `z = (x, y)`, `T_q = Δ ∂/∂x_q − Σ_j a_jq ∂/∂y_j`
//! where `Δ = det[∂ρ_s/∂y_j]` and `a_jq = Σ_s adj_js ∂ρ_s/∂x_q`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{poly_adjugate, poly_det};
use crate::manifold::{complexified_graph, DefiningSystem};
use crate::poly::{same_table, MultiPolynomial, Table, TruncatedSeries};

#[derive(Clone, Debug)]
pub struct TangentOperator {
    /// Zero-based index `q` of the `x` direction.
    pub q: usize,
    pub delta: MultiPolynomial,
    /// `a_jq` for `j = 1..d`.
    pub coeffs: Vec<MultiPolynomial>,
    n: usize,
    k: usize,
}

pub fn tangent_operators(m: &DefiningSystem) -> Result<Vec<TangentOperator>> {
    let (n, k, d) = (m.n(), m.k(), m.d());
    let t = m.table();
    // B[s][j] = ∂ρ_s/∂y_j
    let b: Vec<Vec<MultiPolynomial>> = m.rho().iter().map(|r| (0..d).map(|j| r.partial_derivative(k + j)).collect()).collect();
    let delta = poly_det(&b, t);
    if delta.constant_term().is_zero() {
        return Err(Error::Normalization("matrix [∂ρ_s/∂y_j] is singular at the origin".into()));
    }
    let adj = poly_adjugate(&b, t);
    Ok((0..k)
        .map(|q| {
            let coeffs = (0..d)
                .map(|j| {
                    let mut acc = MultiPolynomial::zero(t);
                    for (s, r) in m.rho().iter().enumerate() {
                        acc = &acc + &(&adj[j][s] * &r.partial_derivative(q));
                    }
                    acc
                })
                .collect();
            TangentOperator { q, delta: delta.clone(), coeffs, n, k }
        })
        .collect())
}

impl TangentOperator {
    fn check(&self, t: &Table) -> Result<()> {
        if !same_table(t, self.delta.table()) {
            return Err(Error::TableMismatch("operand is not over the manifold's variable table".into()));
        }
        Ok(())
    }

    /// `T_q h`, or `T̄_q h` (conjugated coefficients, derivatives in `x̄, ȳ`).
    pub fn apply(&self, h: &MultiPolynomial, conjugated: bool) -> Result<MultiPolynomial> {
        self.check(h.table())?;
        let (shift, delta, coeffs) = self.coefficients(conjugated)?;
        let mut out = &delta * &h.partial_derivative(shift + self.q);
        for (j, a) in coeffs.iter().enumerate() {
            out = &out - &(a * &h.partial_derivative(shift + self.k + j));
        }
        Ok(out)
    }

    pub fn apply_series(&self, h: &TruncatedSeries, conjugated: bool) -> Result<TruncatedSeries> {
        self.check(h.table())?;
        let (shift, delta, coeffs) = self.coefficients(conjugated)?;
        let ord = h.order();
        let mut out = &delta.to_series(ord) * &h.partial_derivative(shift + self.q);
        for (j, a) in coeffs.iter().enumerate() {
            out = &out - &(&a.to_series(ord) * &h.partial_derivative(shift + self.k + j));
        }
        Ok(out)
    }

    fn coefficients(&self, conjugated: bool) -> Result<(usize, MultiPolynomial, Vec<MultiPolynomial>)> {
        if !conjugated {
            return Ok((0, self.delta.clone(), self.coeffs.clone()));
        }
        let coeffs = self.coeffs.iter().map(|a| a.conjugate_swap()).collect::<Result<_>>()?;
        Ok((self.n, self.delta.conjugate_swap()?, coeffs))
    }
}

/// `T̄_q h ≡ 0` on the complexified manifold for every `q`, to `order`.
pub fn cr_function_test(m: &DefiningSystem, h: &MultiPolynomial, order: u32) -> Result<bool> {
    let ops = tangent_operators(m)?;
    let graph = complexified_graph(m, order)?;
    for op in &ops {
        if !graph.vanishes(&op.apply(h, true)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
