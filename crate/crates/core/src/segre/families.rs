//! Lifted fields along Segre leaves and the curve families cut out of Segre
//! varieties by parallel coordinate planes.

use num_traits::{One, Zero};
use serde::Serialize;

use super::variety::{segre_family_representation, SegreFamily};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;
use crate::linalg::Matrix;
use crate::manifold::DefiningSystem;
use crate::poly::{newton_implicit_solve, MultiPolynomial, Table, TruncatedSeries, VariableTable};
use crate::tangent::{tangent_operators, TangentOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaGrid {
    /// `{0, e_a, i·e_a}`, widened by `{e_a ± e_b}` when rank deficient.
    Default,
    /// Both parts from the start.
    Extended,
}

fn unit(k: usize, a: usize, c: GR) -> Vec<GR> {
    (0..k).map(|i| if i == a { c.clone() } else { GR::zero() }).collect()
}

pub fn base_grid(k: usize) -> Vec<Vec<GR>> {
    let mut g = vec![vec![GR::zero(); k]];
    for a in 0..k {
        g.push(unit(k, a, GR::one()));
        g.push(unit(k, a, GR::i()));
    }
    g
}

pub fn fallback_grid(k: usize) -> Vec<Vec<GR>> {
    let mut g = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for s in [GR::one(), -GR::one()] {
                let mut v = unit(k, a, GR::one());
                v[b] = s;
                g.push(v);
            }
        }
    }
    g
}

/// Lifted fields `Y_j(θ̄)(0) = (e_j, −a_{·j}/Δ)` evaluated at
/// `(0, θ̄, σ0(θ̄))`, one per `j`.
#[derive(Clone, Debug, Serialize)]
pub struct LiftedFields {
    pub theta: Vec<GR>,
    pub vectors: Vec<Vec<GR>>,
}

pub struct SegreContext {
    pub m: DefiningSystem,
    pub family: SegreFamily,
    pub ops: Vec<TangentOperator>,
}

impl SegreContext {
    pub fn new(m: &DefiningSystem, order: u32) -> Result<Self> {
        Ok(SegreContext { m: m.clone(), family: segre_family_representation(m, order)?, ops: tangent_operators(m)? })
    }

    /// Point `(z = 0, zb = (θ̄, σ0(θ̄)))` in the manifold's table.
    fn base_values(&self, theta: &[GR]) -> Option<Vec<GR>> {
        let (n, k) = (self.m.n(), self.m.k());
        let sigma = self.family.sigma0_at(theta)?;
        let mut v = vec![GR::zero(); 2 * n];
        for q in 0..k {
            v[n + q] = theta[q].conj();
        }
        for (j, s) in sigma.into_iter().enumerate() {
            v[n + k + j] = s;
        }
        Some(v)
    }

    pub fn lifted_fields(&self, theta: &[GR]) -> Result<LiftedFields> {
        let (n, k) = (self.m.n(), self.m.k());
        let point = self
            .base_values(theta)
            .ok_or_else(|| Error::Inconsistent("Segre base σ0 is not an exact polynomial; numeric θ unavailable".into()))?;
        let vectors = self
            .ops
            .iter()
            .map(|op| {
                let delta = op.delta.eval_all(&point)?;
                let inv = delta.inv().ok_or_else(|| Error::NonUnit("Δ vanishes at the Segre base point".into()))?;
                let mut v = unit(n, op.q, GR::one());
                for (l, a) in op.coeffs.iter().enumerate() {
                    v[k + l] = -&(&a.eval_all(&point)? * &inv);
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        Ok(LiftedFields { theta: theta.to_vec(), vectors })
    }

    /// Rank of the span of `Y_j(θ̄)` as `θ` ranges near 0, from the Taylor
    /// coefficients in `θ̄`. Used when `σ0` is not exact.
    pub fn taylor_span_rank(&self) -> Result<usize> {
        let (n, k) = (self.m.n(), self.m.k());
        let st = self.family.sigma0[0].table().clone();
        let ord = self.family.order;
        let mut subs: Vec<Option<TruncatedSeries>> = vec![Some(TruncatedSeries::zero(&st, ord)); 2 * n];
        for q in 0..k {
            subs[n + q] = Some(TruncatedSeries::var(&st, n + q, ord));
        }
        for (j, s) in self.family.sigma0.iter().enumerate() {
            subs[n + k + j] = Some(s.clone());
        }
        let mut rows: Vec<Vec<GR>> = Vec::new();
        for op in &self.ops {
            let delta = op.delta.substitute_series(&st, &subs, ord)?;
            let inv = delta.inverse()?;
            let comps: Vec<TruncatedSeries> =
                op.coeffs.iter().map(|a| Ok(-&(&a.substitute_series(&st, &subs, ord)? * &inv))).collect::<Result<_>>()?;
            let mut monos: Vec<Vec<u32>> = comps.iter().flat_map(|c| c.terms().map(|(m, _)| m.exps().to_vec())).collect();
            monos.push(vec![0; st.len()]);
            monos.sort();
            monos.dedup();
            for mono in monos {
                let mut v = vec![GR::zero(); n];
                if mono.iter().all(|&e| e == 0) {
                    v[op.q] = GR::one();
                }
                for (l, c) in comps.iter().enumerate() {
                    v[k + l] = c.coeff(&mono);
                }
                rows.push(v);
            }
        }
        Ok(Matrix::from_rows(rows).rank())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanningVerdict {
    pub spans: bool,
    pub rank: usize,
    pub n: usize,
    pub grid: Vec<Vec<GR>>,
    pub fields: Vec<LiftedFields>,
    /// Set when the Taylor-coefficient span was used instead of a grid.
    pub taylor_fallback: bool,
}

fn rank_of(fields: &[LiftedFields]) -> usize {
    let rows: Vec<Vec<GR>> = fields.iter().flat_map(|f| f.vectors.iter().cloned()).collect();
    if rows.is_empty() {
        0
    } else {
        Matrix::from_rows(rows).rank()
    }
}

/// Spanning verdict over an explicit list of `θ` values.
pub fn lifted_fields_on_grid(ctx: &SegreContext, grid: &[Vec<GR>]) -> Result<SpanningVerdict> {
    let n = ctx.m.n();
    let fields: Vec<LiftedFields> = grid.iter().map(|th| ctx.lifted_fields(th)).collect::<Result<_>>()?;
    let rank = rank_of(&fields);
    Ok(SpanningVerdict { spans: rank == n, rank, n, grid: grid.to_vec(), fields, taylor_fallback: false })
}

pub fn lifted_fields(ctx: &SegreContext, grid: ThetaGrid) -> Result<SpanningVerdict> {
    let k = ctx.m.k();
    if ctx.family.sigma0_exact.is_none() {
        let rank = ctx.taylor_span_rank()?;
        let n = ctx.m.n();
        return Ok(SpanningVerdict { spans: rank == n, rank, n, grid: Vec::new(), fields: Vec::new(), taylor_fallback: true });
    }
    let mut pts = base_grid(k);
    if grid == ThetaGrid::Extended {
        pts.extend(fallback_grid(k));
    }
    let v = lifted_fields_on_grid(ctx, &pts)?;
    if v.spans || grid == ThetaGrid::Extended {
        return Ok(v);
    }
    pts.extend(fallback_grid(k));
    lifted_fields_on_grid(ctx, &pts)
}

/// Nonsingular family of curves `(t, c) ↦ z`, centred so that `(0, 0) ↦ 0`.
#[derive(Clone, Debug)]
pub struct CurveFamily {
    pub index: usize,
    /// `t, c1..c_{n-1}`.
    pub params: Table,
    pub map: Vec<TruncatedSeries>,
    /// The parametrization as exact polynomials, when it is one.
    pub exact: Option<Vec<MultiPolynomial>>,
    pub tangent: Vec<GR>,
    pub label: String,
}

pub fn param_table(n: usize) -> Table {
    let names: Vec<String> = std::iter::once("t".to_string()).chain((1..n).map(|i| format!("c{i}"))).collect();
    VariableTable::plain(&names)
}

impl CurveFamily {
    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Lines parallel to the `z_m` axis: `z_m = t`, the other coordinates `c`.
    pub fn coordinate_lines(n: usize, m: usize, order: u32) -> Self {
        let params = param_table(n);
        let mut c = 1;
        let polys: Vec<MultiPolynomial> = (0..n)
            .map(|i| {
                if i == m {
                    MultiPolynomial::var(&params, 0)
                } else {
                    c += 1;
                    MultiPolynomial::var(&params, c - 1)
                }
            })
            .collect();
        let tangent = unit(n, m, GR::one());
        CurveFamily {
            index: m,
            params,
            map: polys.iter().map(|p| p.to_series(order)).collect(),
            exact: Some(polys),
            tangent,
            label: format!("z{}-lines", m + 1),
        }
    }

    pub fn jacobian_at_base(&self) -> Matrix {
        let n = self.n();
        Matrix::from_rows(
            self.map
                .iter()
                .map(|s| (0..n).map(|v| s.partial_derivative(v).constant_term()).collect())
                .collect(),
        )
    }

    pub fn nonsingular(&self) -> bool {
        self.jacobian_at_base().rank() == self.n()
    }

    /// The curve `t ↦ R(t, c)` for fixed parameters, as exact polynomials.
    pub fn exact_curve(&self, c: &[GR]) -> Option<Vec<MultiPolynomial>> {
        let polys = self.exact.as_ref()?;
        let tt = VariableTable::plain(&["t"]);
        let mut subs: Vec<Option<MultiPolynomial>> = vec![Some(MultiPolynomial::var(&tt, 0))];
        subs.extend(c.iter().map(|x| Some(MultiPolynomial::constant(&tt, x.clone()))));
        polys.iter().map(|p| p.substitute(&tt, &subs).ok()).collect()
    }

    /// The curve through the base, `t ↦ R(t, 0)`, as a series.
    pub fn base_curve(&self) -> Result<Vec<TruncatedSeries>> {
        let tt = VariableTable::plain(&["t"]);
        let ord = self.map.first().map_or(0, |s| s.order());
        let mut subs: Vec<Option<TruncatedSeries>> = vec![Some(TruncatedSeries::var(&tt, 0, ord))];
        subs.extend((1..self.n()).map(|_| Some(TruncatedSeries::zero(&tt, ord))));
        self.map.iter().map(|s| s.compose(&tt, &subs)).collect()
    }
}

/// Family `(j, θ)`: inside the Segre variety `Q(θ, τ)` through the point
/// `(x|x_j=0, b)`, the curve with `x_j = t` and the other `x` fixed.
pub fn segre_curve_family(ctx: &SegreContext, index: usize, j: usize, theta: &[GR], order: u32) -> Result<CurveFamily> {
    let (n, k, d) = (ctx.m.n(), ctx.m.k(), ctx.m.d());
    let sigma = ctx
        .family
        .sigma0_at(theta)
        .ok_or_else(|| Error::Inconsistent("Segre base σ0 is not exact; cannot build curves at numeric θ".into()))?;
    let mut names: Vec<String> = std::iter::once("t".to_string()).chain((1..n).map(|i| format!("c{i}"))).collect();
    names.extend((1..=d).map(|l| format!("s{l}")));
    names.extend((1..=d).map(|l| format!("Y{l}")));
    let gt = VariableTable::plain(&names);
    let params = param_table(n);
    let var = |i: usize| MultiPolynomial::var(&gt, i);
    let cst = |c: GR| MultiPolynomial::constant(&gt, c);
    // x coordinates: x_j = t, the others take c1.. in order; b takes the rest.
    let mut next = 1;
    let mut x: Vec<MultiPolynomial> = Vec::new();
    let mut x0: Vec<MultiPolynomial> = Vec::new();
    for q in 0..k {
        if q == j {
            x.push(var(0));
            x0.push(MultiPolynomial::zero(&gt));
        } else {
            x.push(var(next));
            x0.push(var(next));
            next += 1;
        }
    }
    let b: Vec<MultiPolynomial> = (0..d).map(|l| var(next + l)).collect();
    let s: Vec<MultiPolynomial> = (0..d).map(|l| var(n + l)).collect();
    let y: Vec<MultiPolynomial> = (0..d).map(|l| var(n + d + l)).collect();
    let conj_part: Vec<Option<MultiPolynomial>> = (0..k)
        .map(|q| Some(cst(theta[q].conj())))
        .chain((0..d).map(|l| Some(&cst(sigma[l].clone()) + &s[l])))
        .collect();
    let subs_curve: Vec<Option<MultiPolynomial>> = x.iter().chain(&y).cloned().map(Some).chain(conj_part.clone()).collect();
    let subs_point: Vec<Option<MultiPolynomial>> = x0.iter().chain(&b).cloned().map(Some).chain(conj_part).collect();
    let mut g = Vec::with_capacity(2 * d);
    for r in ctx.m.rho() {
        g.push(r.substitute(&gt, &subs_point)?);
    }
    for r in ctx.m.rho() {
        g.push(r.substitute(&gt, &subs_curve)?);
    }
    let unknowns: Vec<usize> = (n..n + 2 * d).collect();
    let sol = newton_implicit_solve(&g, &unknowns, &params, order)?;
    let ys = &sol[d..];
    // z = (x, Y) over the parameter table.
    let to_params = |p: &MultiPolynomial| p.embed(&params);
    let mut map: Vec<TruncatedSeries> = x.iter().map(|p| Ok(to_params(p)?.to_series(order))).collect::<Result<_>>()?;
    map.extend(ys.iter().cloned());
    let cand: Vec<MultiPolynomial> = sol.iter().map(|s| s.to_polynomial()).collect();
    let mut subs: Vec<Option<MultiPolynomial>> = (0..n).map(|i| Some(MultiPolynomial::var(&params, i))).collect();
    subs.extend(cand.iter().cloned().map(Some));
    let mut exact_ok = true;
    for gi in &g {
        if !gi.substitute(&params, &subs)?.is_zero() {
            exact_ok = false;
            break;
        }
    }
    let exact = if exact_ok {
        let mut polys: Vec<MultiPolynomial> = x.iter().map(to_params).collect::<Result<_>>()?;
        polys.extend(cand[d..].iter().cloned());
        Some(polys)
    } else {
        None
    };
    let tangent = map.iter().map(|s| s.partial_derivative(0).constant_term()).collect();
    let label = format!("segre(j={}, theta=({}))", j + 1, theta.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
    Ok(CurveFamily { index, params, map, exact, tangent, label })
}

/// Picks `n` pairs `(j, θ)` with independent lifted fields and builds their
/// curve families.
pub fn curve_families_from_segre(ctx: &SegreContext, verdict: &SpanningVerdict, order: u32) -> Result<Vec<CurveFamily>> {
    let n = ctx.m.n();
    if !verdict.spans || verdict.taylor_fallback {
        return Err(Error::Inconsistent(format!("lifted fields span rank {} < {n}", verdict.rank)));
    }
    let mut chosen: Vec<(usize, Vec<GR>)> = Vec::new();
    let mut rows: Vec<Vec<GR>> = Vec::new();
    for f in &verdict.fields {
        for (j, v) in f.vectors.iter().enumerate() {
            let mut trial = rows.clone();
            trial.push(v.clone());
            if Matrix::from_rows(trial.clone()).rank() == trial.len() {
                rows = trial;
                chosen.push((j, f.theta.clone()));
            }
        }
    }
    if chosen.len() < n {
        return Err(Error::Inconsistent(format!("only {} independent lifted fields", chosen.len())));
    }
    chosen
        .iter()
        .enumerate()
        .map(|(m, (j, th))| segre_curve_family(ctx, m, *j, th, order))
        .collect()
}

/// Tangent vectors of the families at the base are independent.
pub fn general_position(families: &[CurveFamily]) -> bool {
    let n = families.first().map_or(0, |f| f.n());
    families.len() == n && Matrix::from_rows(families.iter().map(|f| f.tangent.clone()).collect()).rank() == n
}
