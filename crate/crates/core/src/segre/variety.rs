//! Segre varieties `Q(ζ) = {w : ρ(w, ζ̄) = 0}` and the Segre family of a
//! normalized manifold.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;
use crate::manifold::DefiningSystem;
use crate::poly::{newton_implicit_solve, MultiPolynomial, Table, TruncatedSeries, VarKind, VariableTable};

#[derive(Clone, Debug)]
pub struct SegreVariety {
    pub zeta: Vec<GR>,
    /// Variables `w1..wn`.
    pub table: Table,
    pub system: Vec<MultiPolynomial>,
}

pub fn segre_variety(m: &DefiningSystem, zeta: &[GR]) -> Result<SegreVariety> {
    let n = m.n();
    if zeta.len() != n {
        return Err(Error::Invalid(format!("point has {} coordinates, expected {n}", zeta.len())));
    }
    let mut b = VariableTable::builder();
    for i in 1..=n {
        b = b.var(&format!("w{i}"), VarKind::Holomorphic);
    }
    let table = b.build()?;
    let mut subs: Vec<Option<MultiPolynomial>> = (0..n).map(|i| Some(MultiPolynomial::var(&table, i))).collect();
    subs.extend(zeta.iter().map(|x| Some(MultiPolynomial::constant(&table, x.conj()))));
    let system = m.rho().iter().map(|r| r.substitute(&table, &subs)).collect::<Result<_>>()?;
    Ok(SegreVariety { zeta: zeta.to_vec(), table, system })
}

impl SegreVariety {
    pub fn contains(&self, w: &[GR]) -> bool {
        self.system.iter().all(|p| p.eval_all(w).map(|v| v.is_zero()).unwrap_or(false))
    }
}

/// `w ∈ Q(ζ)` by direct evaluation of `ρ(w, ζ̄)`.
pub fn in_segre(m: &DefiningSystem, w: &[GR], zeta: &[GR]) -> bool {
    let point: Vec<GR> = w.iter().cloned().chain(zeta.iter().map(|x| x.conj())).collect();
    m.rho().iter().all(|r| r.eval_all(&point).map(|v| v.is_zero()).unwrap_or(false))
}

/// Segre family of a normalized manifold through the origin.
///
/// `S(z, θ̄)` solves `ρ(z, θ̄, τ̄) = 0` for `τ̄`; it lives over `z1..zn,
/// zb1..zbk`, where `zb_q` stands for `θ̄_q`. `R(x, θ̄, τ̄)` solves the same
/// system for `y`, over `z1..zk, zb1..zbn`.
#[derive(Clone, Debug)]
pub struct SegreFamily {
    pub s: Vec<TruncatedSeries>,
    pub r: Vec<TruncatedSeries>,
    /// `σ0(θ̄) = S(0, θ̄)`; the exact polynomial when the truncated solve
    /// terminates.
    pub sigma0: Vec<TruncatedSeries>,
    pub sigma0_exact: Option<Vec<MultiPolynomial>>,
    pub order: u32,
}

pub fn segre_family_representation(m: &DefiningSystem, order: u32) -> Result<SegreFamily> {
    let (n, k) = (m.n(), m.k());
    let t = m.table();
    let s_table = t.subset(&(0..n + k).collect::<Vec<_>>());
    let tau: Vec<usize> = (n + k..2 * n).collect();
    let s = newton_implicit_solve(m.rho(), &tau, &s_table, order)?;
    let r_table = t.subset(&(0..k).chain(n..2 * n).collect::<Vec<_>>());
    let y: Vec<usize> = (k..n).collect();
    let r = newton_implicit_solve(m.rho(), &y, &r_table, order)?;
    let zs: Vec<usize> = (0..n).collect();
    let sigma0: Vec<TruncatedSeries> = s.iter().map(|x| x.set_zero(&zs)).collect();
    let sigma0_exact = exact_sigma0(m, &s_table, &sigma0)?;
    Ok(SegreFamily { s, r, sigma0, sigma0_exact, order })
}

/// `σ0` as an exact polynomial, if `ρ(0, θ̄, σ0(θ̄)) = 0` holds identically.
fn exact_sigma0(m: &DefiningSystem, s_table: &Table, sigma0: &[TruncatedSeries]) -> Result<Option<Vec<MultiPolynomial>>> {
    let (n, k) = (m.n(), m.k());
    let cand: Vec<MultiPolynomial> = sigma0.iter().map(|s| s.to_polynomial()).collect();
    let mut subs: Vec<Option<MultiPolynomial>> = vec![Some(MultiPolynomial::zero(s_table)); 2 * n];
    for q in 0..k {
        subs[n + q] = Some(MultiPolynomial::var(s_table, n + q));
    }
    for (j, c) in cand.iter().enumerate() {
        subs[n + k + j] = Some(c.clone());
    }
    for r in m.rho() {
        if !r.substitute(s_table, &subs)?.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(cand))
}

impl SegreFamily {
    /// `σ0(θ̄)` at a numeric `θ`, when exact.
    pub fn sigma0_at(&self, theta: &[GR]) -> Option<Vec<GR>> {
        let polys = self.sigma0_exact.as_ref()?;
        let t = polys.first().map(|p| p.table().clone())?;
        let n = t.len() - theta.len();
        let mut point = vec![Some(GR::zero()); t.len()];
        for (q, th) in theta.iter().enumerate() {
            point[n + q] = Some(th.conj());
        }
        polys.iter().map(|p| p.evaluate(&point).ok()).collect()
    }
}
