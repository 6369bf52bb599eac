//! Reflection of a CR map through the target's defining functions: the Φ
//! polynomials, the rank checks on them, and the algebraic system containing
//! the graph of the map over a Segre variety.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;
use crate::linalg::Matrix;
use crate::manifold::{complexified_graph, fmt_point, normalize_at_point, DefiningSystem, LeviData, NormalizationMap};
use crate::poly::{newton_implicit_solve, MultiPolynomial, RationalFunction, Table, TruncatedSeries, VarKind, VariableTable};
use crate::tangent::tangent_operators;

/// A map between two normalized manifolds, `F̃(0) = 0`.
#[derive(Clone, Debug)]
pub struct CrMapData {
    pub source: DefiningSystem,
    pub target: DefiningSystem,
    pub source_map: NormalizationMap,
    pub target_map: NormalizationMap,
    /// Components over the source's complex table (no `zb`).
    pub f: Vec<RationalFunction>,
    /// `n' × n`, `dF̃(0)`.
    pub jacobian: Matrix,
    /// `F(C w + p)`, the original components in normalized source coordinates.
    pub pulled: Vec<RationalFunction>,
    pub basepoint_image: Vec<GR>,
}

fn eval_map(f: &[RationalFunction], z: &[GR]) -> Result<Vec<GR>> {
    let point: Vec<Option<GR>> = z.iter().cloned().map(Some).collect();
    f.iter()
        .map(|c| {
            let mut pt = point.clone();
            pt.resize(c.table().len(), None);
            c.evaluate(&pt)
        })
        .collect()
}

pub fn jacobian_at(f: &[RationalFunction], n: usize, z: &[GR]) -> Result<Matrix> {
    let rows = f
        .iter()
        .map(|c| (0..n).map(|s| c.partial_derivative(s).evaluate(&point_opts(z, c.table().len()))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

fn point_opts(z: &[GR], len: usize) -> Vec<Option<GR>> {
    let mut v: Vec<Option<GR>> = z.iter().cloned().map(Some).collect();
    v.resize(len, None);
    v
}

/// Normalizes source at `p` and target at `F(p)` and rewrites the map as
/// `F̃ = C'⁻¹ (F(C w + p) − p')`.
pub fn normalize_map(m: &DefiningSystem, mp: &DefiningSystem, map: &[RationalFunction], p: &[GR]) -> Result<CrMapData> {
    let (n, np) = (m.n(), mp.n());
    if map.len() != np {
        return Err(Error::Invalid(format!("map has {} components, target dimension is {np}", map.len())));
    }
    let t = m.table().clone();
    let comps: Vec<RationalFunction> = map.iter().map(|c| c.embed(&t)).collect::<Result<_>>()?;
    if let Some(i) = comps.iter().position(|c| (n..2 * n).any(|v| c.numerator().uses_var(v) || c.denominator().uses_var(v))) {
        return Err(Error::Invalid(format!("map component F{} is not holomorphic", i + 1)));
    }
    let pp = eval_map(&comps, p).map_err(|e| Error::Basepoint(format!("map undefined at the base point: {e}")))?;
    mp.require_point(&pp)?;
    let (source_map, source) = normalize_at_point(m, p)?;
    let (target_map, target) = normalize_at_point(mp, &pp)?;
    let hol: Vec<usize> = (0..n).collect();
    let subs = source_map.forward_substitution(&t, &hol, None);
    let pulled: Vec<RationalFunction> = comps.iter().map(|c| c.substitute(&t, &subs)).collect::<Result<_>>()?;
    let f: Vec<RationalFunction> = (0..np)
        .map(|r| {
            let mut acc = RationalFunction::constant(&t, GR::zero());
            for (i, c) in pulled.iter().enumerate() {
                let coef = &target_map.c_inv[(r, i)];
                if coef.is_zero() {
                    continue;
                }
                let shifted = c.sub(&RationalFunction::constant(&t, pp[i].clone()));
                acc = acc.add(&shifted.scale(coef));
            }
            acc
        })
        .collect();
    let jacobian = jacobian_at(&f, n, &vec![GR::zero(); n])?;
    Ok(CrMapData { source, target, source_map, target_map, f, jacobian, pulled, basepoint_image: pp })
}

impl CrMapData {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn np(&self) -> usize {
        self.target.n()
    }

    /// Components as series in `z1..zn` over the source's complex table.
    pub fn series(&self, order: u32) -> Result<Vec<TruncatedSeries>> {
        self.f.iter().map(|c| c.to_series(order)).collect()
    }

    pub fn value_at(&self, z: &[GR]) -> Result<Vec<GR>> {
        eval_map(&self.f, z)
    }
}

/// `ρ'(F̃, conj F̃)` restricted to the complexified source, to `order`.
pub fn membership_residual(data: &CrMapData, order: u32) -> Result<TruncatedSeries> {
    let t = data.source.table();
    let np = data.np();
    let fs = data.series(order)?;
    let mut subs: Vec<Option<TruncatedSeries>> = vec![None; 2 * np];
    for (i, s) in fs.iter().enumerate() {
        subs[i] = Some(s.clone());
        subs[np + i] = Some(s.conjugate_swap()?);
    }
    let graph = complexified_graph(&data.source, order)?;
    let mut total = TruncatedSeries::zero(&graph.free, order);
    let mut first_bad: Option<TruncatedSeries> = None;
    for r in data.target.rho() {
        let h = graph.restrict_series(&r.substitute_series(t, &subs, order)?)?;
        if first_bad.is_none() && !h.is_zero() {
            first_bad = Some(h.clone());
        }
        total = &total + &h;
    }
    Ok(first_bad.unwrap_or(total))
}

pub fn membership_check(data: &CrMapData, order: u32) -> Result<bool> {
    Ok(membership_residual(data, order)?.is_zero())
}

/// `z, zb, F, Fb, D, Db` with conjugate pairings; `D{r}_{s}` stands for
/// `∂F_r/∂z_s`.
pub fn extended_table(n: usize, np: usize) -> Table {
    let mut b = VariableTable::builder();
    for i in 1..=n {
        b = b.var(&format!("z{i}"), VarKind::Holomorphic);
    }
    for i in 1..=n {
        b = b.conjugate(&format!("zb{i}"), &format!("z{i}"));
    }
    for r in 1..=np {
        b = b.var(&format!("F{r}"), VarKind::MapSymbol);
    }
    for r in 1..=np {
        b = b.conjugate(&format!("Fb{r}"), &format!("F{r}"));
    }
    for r in 1..=np {
        for s in 1..=n {
            b = b.var(&format!("D{r}_{s}"), VarKind::DerivativeSymbol);
        }
    }
    for r in 1..=np {
        for s in 1..=n {
            b = b.conjugate(&format!("Db{r}_{s}"), &format!("D{r}_{s}"));
        }
    }
    b.build().expect("extended alphabet")
}

#[derive(Clone, Copy, Debug)]
struct Ext {
    n: usize,
    np: usize,
}

impl Ext {
    fn f(&self, r: usize) -> usize {
        2 * self.n + r
    }
    fn fb(&self, r: usize) -> usize {
        2 * self.n + self.np + r
    }
    fn d(&self, r: usize, s: usize) -> usize {
        2 * self.n + 2 * self.np + r * self.n + s
    }
    fn db(&self, r: usize, s: usize) -> usize {
        2 * self.n + 2 * self.np + self.np * self.n + r * self.n + s
    }
}

#[derive(Clone, Debug)]
pub struct PhiSystem {
    pub table: Table,
    pub n: usize,
    pub np: usize,
    pub k: usize,
    pub kp: usize,
    pub dp: usize,
    /// `phi[q][j]`.
    pub phi: Vec<Vec<MultiPolynomial>>,
    /// `ρ'_s(F, Fb)`.
    pub target_rho: Vec<MultiPolynomial>,
    /// `0̃`: everything zero except `D = dF̃(0)`, `Db` its conjugate.
    pub zero_point: Vec<GR>,
}

/// `ρ'` over the extended table with `z' -> F`, `zb' -> Fb`.
fn target_in_symbols(mp: &DefiningSystem, t: &Table, e: Ext) -> Vec<Option<MultiPolynomial>> {
    let np = mp.n();
    let mut subs = vec![None; 2 * np];
    for r in 0..np {
        subs[r] = Some(MultiPolynomial::var(t, e.f(r)));
        subs[np + r] = Some(MultiPolynomial::var(t, e.fb(r)));
    }
    subs
}

/// `Φ_qj = T_q ρ'_j(F, F̄)` with `F`, `F̄`, `∂F/∂z` as formal symbols.
pub fn phi_polynomials(m: &DefiningSystem, mp: &DefiningSystem, jacobian: &Matrix) -> Result<PhiSystem> {
    let (n, np, k, kp, dp) = (m.n(), mp.n(), m.k(), mp.k(), mp.d());
    let t = extended_table(n, np);
    let e = Ext { n, np };
    let ops = tangent_operators(m)?;
    let subs = target_in_symbols(mp, &t, e);
    let target_rho: Vec<MultiPolynomial> = mp.rho().iter().map(|r| r.substitute(&t, &subs)).collect::<Result<_>>()?;
    // dρ[j][r] = ∂ρ'_j/∂z'_r (F, Fb)
    let drho: Vec<Vec<MultiPolynomial>> = mp
        .rho()
        .iter()
        .map(|r| (0..np).map(|i| r.partial_derivative(i).substitute(&t, &subs)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut phi = Vec::with_capacity(k);
    for op in &ops {
        let delta = op.delta.embed(&t)?;
        let a: Vec<MultiPolynomial> = op.coeffs.iter().map(|c| c.embed(&t)).collect::<Result<_>>()?;
        // T_q F_r = Δ D_{r,q} − Σ_l a_lq D_{r,k+l}
        let tf: Vec<MultiPolynomial> = (0..np)
            .map(|r| {
                let mut acc = &delta * &MultiPolynomial::var(&t, e.d(r, op.q));
                for (l, al) in a.iter().enumerate() {
                    acc = &acc - &(al * &MultiPolynomial::var(&t, e.d(r, k + l)));
                }
                acc
            })
            .collect();
        let row = drho
            .iter()
            .map(|dj| {
                let mut acc = MultiPolynomial::zero(&t);
                for (r, g) in dj.iter().enumerate() {
                    acc = &acc + &(g * &tf[r]);
                }
                acc
            })
            .collect();
        phi.push(row);
    }
    let mut zero_point = vec![GR::zero(); t.len()];
    for r in 0..np {
        for s in 0..n {
            zero_point[e.d(r, s)] = jacobian[(r, s)].clone();
            zero_point[e.db(r, s)] = jacobian[(r, s)].conj();
        }
    }
    Ok(PhiSystem { table: t, n, np, k, kp, dp, phi, target_rho, zero_point })
}

impl PhiSystem {
    fn ext(&self) -> Ext {
        Ext { n: self.n, np: self.np }
    }

    /// `(∂h/∂Fb_s)(0̃)` for `s < upto`.
    fn fb_gradient(&self, h: &MultiPolynomial, upto: usize) -> Vec<GR> {
        let e = self.ext();
        (0..upto).map(|s| h.partial_derivative(e.fb(s)).eval_all(&self.zero_point).expect("full point")).collect()
    }

    pub fn get(&self, q: usize, j: usize) -> &MultiPolynomial {
        &self.phi[q][j]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiSelection {
    /// Zero-based `(q, j)` pairs.
    pub pairs: Vec<(usize, usize)>,
    /// `k' × k'` Jacobian in `Fb_1..Fb_k'` at `0̃`.
    pub jacobian: Vec<Vec<GR>>,
}

/// Greedy pivots over `(j, q)` in lexicographic order until the `k' × k'`
/// Jacobian in the `F̄` symbols is invertible.
pub fn select_phi_subset(sys: &PhiSystem) -> Result<PhiSelection> {
    let kp = sys.kp;
    let mut pairs = Vec::new();
    let mut rows: Vec<Vec<GR>> = Vec::new();
    'outer: for j in 0..sys.dp {
        for q in 0..sys.k {
            if rows.len() == kp {
                break 'outer;
            }
            let g = sys.fb_gradient(&sys.phi[q][j], kp);
            let mut trial = rows.clone();
            trial.push(g);
            if Matrix::from_rows(trial.clone()).rank() == trial.len() {
                rows = trial;
                pairs.push((q, j));
            }
        }
    }
    if rows.len() < kp {
        return Err(Error::Inconsistent(format!(
            "Φ Jacobian in the conjugate map symbols has rank {} < {kp}, contradicting the rank condition",
            rows.len()
        )));
    }
    Ok(PhiSelection { pairs, jacobian: rows })
}

#[derive(Clone, Debug)]
pub struct FullSystem {
    pub selection: PhiSelection,
    /// `P_j = conj(Φ_{q(j) j})`, then `ρ'_s(F, Fb)`.
    pub conjugated: Vec<MultiPolynomial>,
    pub target_rho: Vec<MultiPolynomial>,
    /// `n' × n'` Jacobian of `(Φ_sel, ρ'(F, Fb))` in `Fb` at `0̃`.
    pub jacobian: Matrix,
    pub rank: usize,
    pub pass: bool,
}

pub fn full_system(sys: &PhiSystem, selection: PhiSelection) -> Result<FullSystem> {
    if sys.dp == 0 || sys.kp == 0 {
        return Err(Error::Invalid(format!("target needs d' >= 1 and k' >= 1 (got d' = {}, k' = {})", sys.dp, sys.kp)));
    }
    let sel: Vec<&MultiPolynomial> = selection.pairs.iter().map(|&(q, j)| &sys.phi[q][j]).collect();
    let rows: Vec<Vec<GR>> =
        sel.iter().copied().chain(sys.target_rho.iter()).map(|h| sys.fb_gradient(h, sys.np)).collect();
    let jacobian = Matrix::from_rows(rows);
    let rank = jacobian.rank();
    let conjugated = sel.iter().map(|h| h.conjugate_swap()).collect::<Result<_>>()?;
    Ok(FullSystem { selection, conjugated, target_rho: sys.target_rho.clone(), jacobian, rank, pass: rank == sys.np })
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub pass: bool,
    pub rank: usize,
    pub required: usize,
    /// Rows `L'^j (dF̃(0) e_q)`, `j` outer.
    pub rows: Vec<Vec<GR>>,
}

/// Rank of the stacked vectors `L^j v_q` against `k'`.
pub fn condition_2_5_matrices(levi: &[Matrix], vectors: &[Vec<GR>], kp: usize) -> RankCertificate {
    let rows: Vec<Vec<GR>> = levi.iter().flat_map(|l| vectors.iter().map(move |v| l.mul_vec(v))).collect();
    let rank = if rows.is_empty() || kp == 0 { 0 } else { Matrix::from_rows(rows.clone()).rank() };
    RankCertificate { pass: kp > 0 && rank == kp, rank, required: kp, rows }
}

/// The images `dF̃(0) e_q`, `q < k`, lie in `T^c` of the normalized target,
/// which is spanned by the first `k'` unit vectors.
pub fn condition_2_5_check(target_levi: &LeviData, jacobian: &Matrix, k: usize) -> RankCertificate {
    let kp = target_levi.k();
    let vectors: Vec<Vec<GR>> = (0..k).map(|q| (0..kp).map(|r| jacobian[(r, q)].clone()).collect()).collect();
    condition_2_5_matrices(&target_levi.levi_matrices, &vectors, kp)
}

/// The polynomial system in `(z, z')` whose zero set contains the graph of
/// `F̃` over `Q(ζ)`.
#[derive(Clone, Debug)]
pub struct AtildeSystem {
    pub zeta: Vec<GR>,
    /// `z1..zn, zp1..zpn'`.
    pub table: Table,
    pub equations: Vec<MultiPolynomial>,
}

pub fn atilde_system(data: &CrMapData, sys: &PhiSystem, full: &FullSystem, zeta: &[GR]) -> Result<AtildeSystem> {
    let (n, np) = (data.n(), data.np());
    data.source.require_point(zeta)?;
    let fz = data.value_at(zeta)?;
    let dfz = jacobian_at(&data.f, n, zeta)?;
    let names: Vec<String> = (1..=n).map(|i| format!("z{i}")).chain((1..=np).map(|r| format!("zp{r}"))).collect();
    let mut b = VariableTable::builder();
    for nm in &names {
        b = b.var(nm, VarKind::Holomorphic);
    }
    let table = b.build()?;
    let e = sys.ext();
    let cst = |c: GR| Some(MultiPolynomial::constant(&table, c));
    let mut subs: Vec<Option<MultiPolynomial>> = vec![None; sys.table.len()];
    for i in 0..n {
        subs[i] = Some(MultiPolynomial::var(&table, i));
        subs[n + i] = cst(zeta[i].conj());
    }
    for r in 0..np {
        subs[e.f(r)] = Some(MultiPolynomial::var(&table, n + r));
        subs[e.fb(r)] = cst(fz[r].conj());
        for s in 0..n {
            subs[e.d(r, s)] = cst(dfz[(r, s)].clone());
            subs[e.db(r, s)] = cst(dfz[(r, s)].conj());
        }
    }
    let mut equations: Vec<MultiPolynomial> = full.conjugated.iter().map(|p| p.substitute(&table, &subs)).collect::<Result<_>>()?;
    let mut tsubs: Vec<Option<MultiPolynomial>> = vec![None; 2 * np];
    for r in 0..np {
        tsubs[r] = Some(MultiPolynomial::var(&table, n + r));
        tsubs[np + r] = cst(fz[r].conj());
    }
    for r in data.target.rho() {
        equations.push(r.substitute(&table, &tsubs)?);
    }
    let mut ssubs: Vec<Option<MultiPolynomial>> = vec![None; 2 * n];
    for i in 0..n {
        ssubs[i] = Some(MultiPolynomial::var(&table, i));
        ssubs[n + i] = cst(zeta[i].conj());
    }
    for r in data.source.rho() {
        equations.push(r.substitute(&table, &ssubs)?);
    }
    Ok(AtildeSystem { zeta: zeta.to_vec(), table, equations })
}

/// `Q(ζ)` near `ζ` as `z = ζ + (u, v(u))`, series over `u1..uk`.
pub fn segre_graph_parametrization(m: &DefiningSystem, zeta: &[GR], order: u32) -> Result<Vec<TruncatedSeries>> {
    let (n, k, d) = (m.n(), m.k(), m.d());
    m.require_point(zeta)?;
    let names: Vec<String> = (1..=k).map(|i| format!("u{i}")).chain((1..=d).map(|j| format!("v{j}"))).collect();
    let gt = VariableTable::plain(&names);
    let mut subs: Vec<Option<MultiPolynomial>> = (0..n)
        .map(|i| Some(&MultiPolynomial::constant(&gt, zeta[i].clone()) + &MultiPolynomial::var(&gt, i)))
        .collect();
    subs.extend(zeta.iter().map(|x| Some(MultiPolynomial::constant(&gt, x.conj()))));
    let g: Vec<MultiPolynomial> = m.rho().iter().map(|r| r.substitute(&gt, &subs)).collect::<Result<_>>()?;
    let ut = gt.subset(&(0..k).collect::<Vec<_>>());
    let v = newton_implicit_solve(&g, &(k..n).collect::<Vec<_>>(), &ut, order)?;
    Ok((0..n)
        .map(|i| {
            let c = TruncatedSeries::constant(&ut, zeta[i].clone(), order);
            if i < k {
                &c + &TruncatedSeries::var(&ut, i, order)
            } else {
                &c + &v[i - k]
            }
        })
        .collect())
}

/// Every equation vanishes on `(z(u), F(z(u)))` modulo degree `order + 1`.
pub fn verify_graph_in_variety(sys: &AtildeSystem, f: &[RationalFunction], param: &[TruncatedSeries], order: u32) -> Result<bool> {
    let n = param.len();
    let ut = param.first().ok_or_else(|| Error::Invalid("empty parametrization".into()))?.table().clone();
    let fs: Vec<TruncatedSeries> = f
        .iter()
        .map(|c| {
            let mut zs: Vec<Option<TruncatedSeries>> = param.iter().cloned().map(Some).collect();
            zs.resize(c.table().len(), None);
            let num = c.numerator().substitute_series(&ut, &zs, order)?;
            let den = c.denominator().substitute_series(&ut, &zs, order)?;
            if den.constant_term().is_zero() {
                return Err(Error::NonUnit(format!("map denominator vanishes at ({})", fmt_point(&sys.zeta))));
            }
            num.div(&den)
        })
        .collect::<Result<_>>()?;
    let subs: Vec<Option<TruncatedSeries>> = param.iter().chain(&fs).cloned().map(Some).collect();
    debug_assert_eq!(subs.len(), n + f.len());
    for eq in &sys.equations {
        if !eq.substitute_series(&ut, &subs, order)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rational points of a normalized manifold whose equations are affine in
/// `Re y` once `x` and `Im y` are fixed. `0` comes first.
pub fn rational_points(m: &DefiningSystem, count: usize) -> Vec<Vec<GR>> {
    let (n, k, d) = (m.n(), m.k(), m.d());
    let xs = [
        GR::zero(),
        GR::from_ratio(1, 2),
        GR::from_parts(0, 1, 1, 3),
        GR::from_ratio(-1, 4),
        GR::from_ratio(1, 5),
    ];
    let ims = [GR::zero(), GR::from_ratio(1, 3), GR::from_ratio(-1, 7)];
    let st = VariableTable::plain(&(1..=d).map(|j| format!("s{j}")).collect::<Vec<_>>());
    let mut out: Vec<Vec<GR>> = Vec::new();
    let mut cands: Vec<(usize, usize, usize)> = Vec::new();
    for sum in 0..xs.len() + ims.len() {
        for a in 0..xs.len() {
            for b in 0..ims.len() {
                if a + b == sum {
                    for q in 0..k.max(1) {
                        if a > 0 || q == 0 {
                            cands.push((a, b, q));
                        }
                    }
                }
            }
        }
    }
    for (a, b, q) in cands {
        if out.len() >= count {
            break;
        }
        let mut subs: Vec<Option<MultiPolynomial>> = vec![None; 2 * n];
        for i in 0..k {
            let x = if i == q { xs[a].clone() } else { GR::zero() };
            subs[i] = Some(MultiPolynomial::constant(&st, x.clone()));
            subs[n + i] = Some(MultiPolynomial::constant(&st, x.conj()));
        }
        for j in 0..d {
            let s = MultiPolynomial::var(&st, j);
            let it = &ims[b] * &GR::i();
            subs[k + j] = Some(&s + &MultiPolynomial::constant(&st, it.clone()));
            subs[n + k + j] = Some(&s - &MultiPolynomial::constant(&st, it));
        }
        let Ok(eqs) = m.rho().iter().map(|r| r.substitute(&st, &subs)).collect::<Result<Vec<_>>>() else { continue };
        if eqs.iter().any(|e| e.total_degree() > 1) {
            continue;
        }
        let a_rows: Vec<Vec<GR>> = eqs.iter().map(|e| (0..d).map(|j| e.coeff(&unit_exp(d, j))).collect()).collect();
        let rhs: Vec<GR> = eqs.iter().map(|e| -e.constant_term()).collect();
        let Some(sol) = Matrix::from_rows(a_rows).solve(&rhs) else { continue };
        if sol.iter().any(|s| !s.im().is_zero()) {
            continue;
        }
        let mut z = vec![GR::zero(); n];
        for i in 0..k {
            if i == q {
                z[i] = xs[a].clone();
            }
        }
        for j in 0..d {
            z[k + j] = &sol[j] + &(&ims[b] * &GR::i());
        }
        if m.contains(&z) && !out.contains(&z) {
            out.push(z);
        }
    }
    out
}

fn unit_exp(d: usize, j: usize) -> Vec<u32> {
    (0..d).map(|i| u32::from(i == j)).collect()
}
