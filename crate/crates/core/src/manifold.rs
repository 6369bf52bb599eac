//! Generic real algebraic manifolds `M = {ρ_1 = … = ρ_d = 0}` in Cⁿ.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;
use crate::linalg::{real_rank, Matrix};
use crate::poly::{newton_implicit_solve, MultiPolynomial, Table, TruncatedSeries, VariableTable};

#[derive(Clone, Debug, PartialEq)]
pub struct DefiningSystem {
    n: usize,
    table: Table,
    rho: Vec<MultiPolynomial>,
}

impl DefiningSystem {
    /// `rho` must live over `VariableTable::complex(n)` (or an equal table).
    pub fn new(n: usize, rho: Vec<MultiPolynomial>) -> Result<Self> {
        let table = VariableTable::complex(n);
        if rho.is_empty() || rho.len() > n {
            return Err(Error::Invalid(format!("codimension {} not in 1..={n}", rho.len())));
        }
        let rho = rho.iter().map(|r| r.embed(&table)).collect::<Result<Vec<_>>>()?;
        Ok(DefiningSystem { n, table, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.rho.len()
    }

    /// CR dimension `n - d`.
    pub fn k(&self) -> usize {
        self.n - self.rho.len()
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn rho(&self) -> &[MultiPolynomial] {
        &self.rho
    }

    pub fn hol(&self, i: usize) -> usize {
        i
    }

    pub fn conj(&self, i: usize) -> usize {
        self.n + i
    }

    /// Indices `j` with `ρ_j ≠ conjugate_swap(ρ_j)`, with the difference.
    pub fn non_real(&self) -> Vec<(usize, MultiPolynomial)> {
        self.rho
            .iter()
            .enumerate()
            .filter_map(|(j, r)| {
                let c = r.conjugate_swap().expect("complex table has all partners");
                (c != *r).then(|| (j, r - &c))
            })
            .collect()
    }

    /// `z ++ conj(z)`, the evaluation vector of a point.
    pub fn point_values(&self, z: &[GR]) -> Vec<GR> {
        z.iter().cloned().chain(z.iter().map(|x| x.conj())).collect()
    }

    pub fn values_at(&self, z: &[GR]) -> Vec<GR> {
        let pv = self.point_values(z);
        self.rho.iter().map(|r| r.eval_all(&pv).expect("all variables assigned")).collect()
    }

    pub fn contains(&self, z: &[GR]) -> bool {
        self.values_at(z).iter().all(|v| v.is_zero())
    }

    /// `[∂ρ_j/∂z_k](p)`, or the antiholomorphic gradient with `conjugate`.
    pub fn gradient(&self, z: &[GR], conjugate: bool) -> Matrix {
        let pv = self.point_values(z);
        Matrix::from_rows(
            self.rho
                .iter()
                .map(|r| {
                    (0..self.n)
                        .map(|k| {
                            let v = if conjugate { self.conj(k) } else { self.hol(k) };
                            r.partial_derivative(v).eval_all(&pv).expect("all variables assigned")
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Hessian `[∂²ρ_j/∂z_ν∂zb_μ](p)`.
    pub fn mixed_hessian(&self, j: usize, z: &[GR]) -> Matrix {
        let pv = self.point_values(z);
        let r = &self.rho[j];
        Matrix::from_rows(
            (0..self.n)
                .map(|nu| {
                    let d = r.partial_derivative(self.hol(nu));
                    (0..self.n).map(|mu| d.partial_derivative(self.conj(mu)).eval_all(&pv).unwrap()).collect()
                })
                .collect(),
        )
    }

    pub fn require_point(&self, z: &[GR]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::Basepoint(format!("point has {} coordinates, expected {}", z.len(), self.n)));
        }
        let vals = self.values_at(z);
        if let Some((j, v)) = vals.iter().enumerate().find(|(_, v)| !v.is_zero()) {
            return Err(Error::NotOnManifold(format!("rho{} = {} at ({})", j + 1, v, fmt_point(z))));
        }
        Ok(())
    }
}

pub fn fmt_point(z: &[GR]) -> String {
    z.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericityReport {
    pub real: bool,
    /// `ρ_j - conjugate_swap(ρ_j)` for every non-real defining function.
    pub non_real: Vec<(usize, String)>,
    pub antiholomorphic_rank: usize,
    pub codimension: usize,
    pub pass: bool,
}

pub fn check_defining_system(m: &DefiningSystem, p: &[GR]) -> Result<GenericityReport> {
    m.require_point(p)?;
    let non_real: Vec<(usize, String)> = m.non_real().into_iter().map(|(j, diff)| (j + 1, diff.to_string())).collect();
    let rank = m.gradient(p, true).rank();
    let real = non_real.is_empty();
    Ok(GenericityReport { real, non_real, antiholomorphic_rank: rank, codimension: m.d(), pass: real && rank == m.d() })
}

fn require_generic(m: &DefiningSystem, p: &[GR]) -> Result<()> {
    let r = check_defining_system(m, p)?;
    if !r.pass {
        return Err(Error::Normalization(if !r.real {
            "defining functions are not real".into()
        } else {
            format!("not generic: antiholomorphic gradient rank {} < {}", r.antiholomorphic_rank, r.codimension)
        }));
    }
    Ok(())
}

/// Pivot columns chosen greedily from the right so that they are
/// independent, and the remaining (free) columns.
fn split_columns(a: &Matrix) -> (Vec<usize>, Vec<usize>) {
    let mut piv: Vec<usize> = Vec::new();
    for c in (0..a.cols()).rev() {
        let mut trial = piv.clone();
        trial.push(c);
        if a.select_columns(&trial).rank() == trial.len() {
            piv = trial;
        }
    }
    piv.sort_unstable();
    let free = (0..a.cols()).filter(|c| !piv.contains(c)).collect();
    (piv, free)
}

/// Tangent basis `u_q = e_f - a_P⁻¹ a_f` and the right inverse columns.
fn tangent_frame(a: &Matrix) -> Result<(Vec<Vec<GR>>, Vec<Vec<GR>>)> {
    let (piv, free) = split_columns(a);
    if piv.len() != a.rows() {
        return Err(Error::Normalization(format!("holomorphic gradient has rank {} < {}", piv.len(), a.rows())));
    }
    let ap_inv = a.select_columns(&piv).inverse().expect("independent pivot columns");
    let n = a.cols();
    let tangent = free
        .iter()
        .map(|&f| {
            let mut u = vec![GR::zero(); n];
            u[f] = GR::one();
            let s = ap_inv.mul_vec(&a.column(f));
            for (i, &pc) in piv.iter().enumerate() {
                u[pc] = -&s[i];
            }
            u
        })
        .collect();
    let transverse = (0..a.rows())
        .map(|j| {
            let mut v = vec![GR::zero(); n];
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = ap_inv[(i, j)].clone();
            }
            v
        })
        .collect();
    Ok((tangent, transverse))
}

/// Exact basis of `T_p^c M`, `n - d` vectors.
pub fn complex_tangent_basis(m: &DefiningSystem, p: &[GR]) -> Result<Vec<Vec<GR>>> {
    require_generic(m, p)?;
    Ok(tangent_frame(&m.gradient(p, false))?.0)
}

/// Affine change `z = C w + p`; the first `k` columns of `C` span the complex
/// tangent space, the last `d` are transverse.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationMap {
    pub c: Matrix,
    pub c_inv: Matrix,
    pub p: Vec<GR>,
}

impl NormalizationMap {
    pub fn identity(n: usize) -> Self {
        NormalizationMap { c: Matrix::identity(n), c_inv: Matrix::identity(n), p: vec![GR::zero(); n] }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn forward(&self, w: &[GR]) -> Vec<GR> {
        self.c.mul_vec(w).iter().zip(&self.p).map(|(a, b)| a + b).collect()
    }

    pub fn inverse(&self, z: &[GR]) -> Vec<GR> {
        let d: Vec<GR> = z.iter().zip(&self.p).map(|(a, b)| a - b).collect();
        self.c_inv.mul_vec(&d)
    }

    fn affine_images(&self, table: &Table, c: &Matrix, shift: &[GR], hol: &[usize], conj: Option<&[usize]>) -> Vec<Option<MultiPolynomial>> {
        let n = self.n();
        let mut subs = vec![None; table.len()];
        for i in 0..n {
            let mut acc = MultiPolynomial::constant(table, shift[i].clone());
            let mut acc_b = MultiPolynomial::constant(table, shift[i].conj());
            for j in 0..n {
                acc = &acc + &MultiPolynomial::var(table, hol[j]).scale(&c[(i, j)]);
                if let Some(cv) = conj {
                    acc_b = &acc_b + &MultiPolynomial::var(table, cv[j]).scale(&c[(i, j)].conj());
                }
            }
            subs[hol[i]] = Some(acc);
            if let Some(cv) = conj {
                subs[cv[i]] = Some(acc_b);
            }
        }
        subs
    }

    /// Substitution list `z_i -> (C w + p)_i`, `zb_i -> conj`, for a table
    /// whose variables `hol[i]` / `conj[i]` are the coordinates.
    pub fn forward_substitution(&self, table: &Table, hol: &[usize], conj: Option<&[usize]>) -> Vec<Option<MultiPolynomial>> {
        self.affine_images(table, &self.c, &self.p, hol, conj)
    }

    /// Substitution list `w_i -> (C⁻¹ (z - p))_i`.
    pub fn inverse_substitution(&self, table: &Table, hol: &[usize], conj: Option<&[usize]>) -> Vec<Option<MultiPolynomial>> {
        let shift: Vec<GR> = self.c_inv.mul_vec(&self.p).iter().map(|x| -x).collect();
        self.affine_images(table, &self.c_inv, &shift, hol, conj)
    }

    /// `h(C w + p, conj(C w + p))` for `h` over the complex table.
    pub fn pull_back(&self, h: &MultiPolynomial) -> Result<MultiPolynomial> {
        let t = h.table();
        let n = self.n();
        let hol: Vec<usize> = (0..n).collect();
        let conj: Vec<usize> = (n..2 * n).collect();
        h.substitute(t, &self.forward_substitution(t, &hol, Some(&conj)))
    }

    /// Inverse of [`pull_back`](Self::pull_back).
    pub fn push_forward(&self, h: &MultiPolynomial) -> Result<MultiPolynomial> {
        let t = h.table();
        let n = self.n();
        let hol: Vec<usize> = (0..n).collect();
        let conj: Vec<usize> = (n..2 * n).collect();
        h.substitute(t, &self.inverse_substitution(t, &hol, Some(&conj)))
    }
}

/// Brings `M` to the normal form at `p`: zero constant term and linear part
/// `y_j + ȳ_j`, with `z = (x, y)`, `x = (z_1..z_k)`, `y = (z_{k+1}..z_n)`.
pub fn normalize_at_point(m: &DefiningSystem, p: &[GR]) -> Result<(NormalizationMap, DefiningSystem)> {
    require_generic(m, p)?;
    let a = m.gradient(p, false);
    let (tangent, transverse) = tangent_frame(&a)?;
    let cols: Vec<Vec<GR>> = tangent.into_iter().chain(transverse).collect();
    let c = Matrix::from_columns(&cols);
    let c_inv = c.inverse().ok_or_else(|| Error::Normalization("normalizing matrix is singular".into()))?;
    let map = NormalizationMap { c, c_inv, p: p.to_vec() };
    let rho = m.rho.iter().map(|r| map.pull_back(r)).collect::<Result<Vec<_>>>()?;
    let out = DefiningSystem { n: m.n, table: m.table.clone(), rho };
    check_normal_form(&out)?;
    Ok((map, out))
}

/// Constant term zero and linear part exactly `y_j + ȳ_j`.
pub fn check_normal_form(m: &DefiningSystem) -> Result<()> {
    let (n, k) = (m.n, m.k());
    for (j, r) in m.rho.iter().enumerate() {
        let mut want = MultiPolynomial::var(&m.table, k + j);
        want = &want + &MultiPolynomial::var(&m.table, n + k + j);
        let lin = &r.homogeneous_part(0) + &r.homogeneous_part(1);
        if lin != want {
            return Err(Error::Normalization(format!("rho{} has linear part {}, expected {}", j + 1, lin, want)));
        }
    }
    Ok(())
}

/// `H_p(ρ_j, u, v)` for all `j`.
pub fn levi_form_value(m: &DefiningSystem, p: &[GR], u: &[GR], v: &[GR]) -> Result<Vec<GR>> {
    let a = m.gradient(p, false);
    for (name, x) in [("u", u), ("v", v)] {
        if x.len() != m.n || a.mul_vec(x).iter().any(|c| !c.is_zero()) {
            return Err(Error::NotTangent(format!("{name} = ({})", fmt_point(x))));
        }
    }
    Ok(levi_values_unchecked(m, p, u, v))
}

fn levi_values_unchecked(m: &DefiningSystem, p: &[GR], u: &[GR], v: &[GR]) -> Vec<GR> {
    let vb: Vec<GR> = v.iter().map(|x| x.conj()).collect();
    (0..m.d())
        .map(|j| {
            let h = m.mixed_hessian(j, p);
            h.mul_vec(&vb).iter().zip(u).map(|(a, b)| a * b).sum()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct LeviData {
    pub basepoint: Vec<GR>,
    pub tangent_basis: Vec<Vec<GR>>,
    /// `L^j[a][b] = H_p(ρ_j, u_b, u_a)`, Hermitian.
    pub levi_matrices: Vec<Matrix>,
}

pub fn levi_operator_matrices(m: &DefiningSystem, p: &[GR]) -> Result<LeviData> {
    let basis = complex_tangent_basis(m, p)?;
    let k = basis.len();
    let mats = (0..m.d())
        .map(|j| {
            let mut l = Matrix::zeros(k, k);
            for a in 0..k {
                for b in 0..k {
                    l[(a, b)] = levi_values_unchecked(m, p, &basis[b], &basis[a])[j].clone();
                }
            }
            l
        })
        .collect();
    Ok(LeviData { basepoint: p.to_vec(), tangent_basis: basis, levi_matrices: mats })
}

impl LeviData {
    pub fn k(&self) -> usize {
        self.tangent_basis.len()
    }

    pub fn d(&self) -> usize {
        self.levi_matrices.len()
    }

    /// `(u^* L^1 u, …, u^* L^d u)` for a coordinate vector `u` in the tangent basis.
    pub fn quadratic_values(&self, u: &[GR]) -> Vec<GR> {
        let ub: Vec<GR> = u.iter().map(|x| x.conj()).collect();
        self.levi_matrices.iter().map(|l| l.mul_vec(u).iter().zip(&ub).map(|(a, b)| a * b).sum()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum ConeWitness {
    /// `d` linearly independent value vectors.
    Spanning(Vec<Vec<GR>>),
    /// A nonzero covector vanishing on every value vector.
    Annihilator(Vec<GR>),
}

#[derive(Clone, Debug)]
pub struct LeviConeVerdict {
    pub nondegenerate: bool,
    pub rank: usize,
    pub witness: ConeWitness,
}

/// Grid `{e_a, e_a ± e_b, e_a ± i·e_b}` in the tangent basis.
pub fn tangent_grid(k: usize) -> Vec<Vec<GR>> {
    let e = |a: usize| -> Vec<GR> { (0..k).map(|i| if i == a { GR::one() } else { GR::zero() }).collect() };
    let mut out = Vec::new();
    for a in 0..k {
        out.push(e(a));
        for b in a + 1..k {
            for c in [GR::one(), -GR::one(), GR::i(), -GR::i()] {
                let mut v = e(a);
                v[b] = c;
                out.push(v);
            }
        }
    }
    out
}

pub fn levi_cone_nondegenerate(levi: &LeviData) -> LeviConeVerdict {
    let d = levi.d();
    let values: Vec<Vec<GR>> = tangent_grid(levi.k()).iter().map(|u| levi.quadratic_values(u)).collect();
    let rank = real_rank(&values);
    if rank == d {
        let mut chosen: Vec<Vec<GR>> = Vec::new();
        for v in &values {
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if real_rank(&trial) == trial.len() {
                chosen = trial;
            }
        }
        return LeviConeVerdict { nondegenerate: true, rank, witness: ConeWitness::Spanning(chosen) };
    }
    let rows: Vec<Vec<GR>> = if values.is_empty() {
        vec![vec![GR::zero(); d]]
    } else {
        values.iter().map(|v| v.iter().map(|x| GR::from_real(x.re().clone())).collect()).collect()
    };
    let cov = Matrix::from_rows(rows).nullspace().into_iter().next().unwrap_or_else(|| vec![GR::zero(); d]);
    LeviConeVerdict { nondegenerate: false, rank, witness: ConeWitness::Annihilator(cov) }
}

pub fn levi_form_nondegenerate(levi: &LeviData) -> bool {
    let k = levi.k();
    let mut stacked = Matrix::zeros(0, k);
    for l in &levi.levi_matrices {
        stacked = stacked.stack(l);
    }
    stacked.rank() == k
}

/// Complexified normalized manifold as a graph `y = φ(x, zb)` over the
/// variables `z1..zk, zb1..zbn`.
#[derive(Clone, Debug)]
pub struct ComplexGraph {
    pub free: Table,
    pub phi: Vec<TruncatedSeries>,
    pub order: u32,
    source: Table,
    k: usize,
}

pub fn complexified_graph(m: &DefiningSystem, order: u32) -> Result<ComplexGraph> {
    let (n, k) = (m.n, m.k());
    let keep: Vec<usize> = (0..k).chain(n..2 * n).collect();
    let free = m.table.subset(&keep);
    let unknowns: Vec<usize> = (k..n).collect();
    let phi = newton_implicit_solve(&m.rho, &unknowns, &free, order)?;
    Ok(ComplexGraph { free, phi, order, source: m.table.clone(), k })
}

impl ComplexGraph {
    fn substitution(&self, table: &Table, order: u32) -> Result<Vec<Option<TruncatedSeries>>> {
        let mut subs = vec![None; table.len()];
        for (j, s) in self.phi.iter().enumerate() {
            let name = self.source.name(self.k + j);
            let i = table.require(name)?;
            subs[i] = Some(s.truncate(order));
        }
        Ok(subs)
    }

    /// Restriction of a polynomial in `(z, zb)` to the complexified manifold.
    pub fn restrict(&self, h: &MultiPolynomial) -> Result<TruncatedSeries> {
        let subs = self.substitution(h.table(), self.order)?;
        h.substitute_series(&self.free, &subs, self.order)
    }

    /// Same for a series in `(z, zb)` centred at the base point.
    pub fn restrict_series(&self, h: &TruncatedSeries) -> Result<TruncatedSeries> {
        let subs = self.substitution(h.table(), self.order)?;
        h.compose(&self.free, &subs)
    }

    pub fn vanishes(&self, h: &MultiPolynomial) -> Result<bool> {
        Ok(self.restrict(h)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, rho: &[&str]) -> DefiningSystem {
        crate::io::parse::system_from_strs(n, rho).unwrap()
    }

    fn origin(n: usize) -> Vec<GR> {
        vec![GR::zero(); n]
    }

    #[test]
    fn genericity_examples() {
        let m0 = sys(2, &["z2 + zb2 + z1*zb1"]);
        assert!(check_defining_system(&m0, &origin(2)).unwrap().pass);
        let dup = sys(2, &["z2 + zb2 + z1*zb1", "z2 + zb2 + z1*zb1"]);
        assert!(!check_defining_system(&dup, &origin(2)).unwrap().pass);
        let t = VariableTable::complex(2);
        let z1 = MultiPolynomial::var(&t, 0);
        let zb1 = MultiPolynomial::var(&t, 2);
        let bad = DefiningSystem::new(2, vec![&z1 + &(&z1 * &zb1)]).unwrap();
        let r = check_defining_system(&bad, &origin(2)).unwrap();
        assert!(!r.real && !r.pass);
        assert!(matches!(check_defining_system(&m0, &[GR::one(), GR::one()]), Err(Error::NotOnManifold(_))));
    }

    #[test]
    fn tangent_examples() {
        let m0 = sys(2, &["z2 + zb2 + z1*zb1"]);
        assert_eq!(complex_tangent_basis(&m0, &origin(2)).unwrap(), vec![vec![GR::one(), GR::zero()]]);
        let c2 = sys(3, &["z2 + zb2 + z1*zb1", "z3 + zb3 + z1*zb1"]);
        assert_eq!(complex_tangent_basis(&c2, &origin(3)).unwrap(), vec![vec![GR::one(), GR::zero(), GR::zero()]]);
    }

    #[test]
    fn normalization_examples() {
        let m0 = sys(2, &["z2 + zb2 + z1*zb1"]);
        let (map, out) = normalize_at_point(&m0, &origin(2)).unwrap();
        assert_eq!(map, NormalizationMap::identity(2));
        assert_eq!(out, m0);
        let (_, out) = normalize_at_point(&m0, &[GR::zero(), GR::i()]).unwrap();
        assert_eq!(out, m0);
        let m = sys(2, &["z2 + zb2 + 2*z1 + 2*zb1 + z1*zb1"]);
        let (map, out) = normalize_at_point(&m, &origin(2)).unwrap();
        assert_eq!(map.c, Matrix::from_ints(&[&[1, 0], &[-2, 1]]));
        assert_eq!(out, m0);
        let back = map.push_forward(&out.rho()[0]).unwrap();
        assert_eq!(back, m.rho()[0]);
    }

    #[test]
    fn levi_examples() {
        let m0 = sys(2, &["z2 + zb2 + z1*zb1"]);
        let u = vec![GR::one(), GR::zero()];
        assert_eq!(levi_form_value(&m0, &origin(2), &u, &u).unwrap(), vec![GR::one()]);
        assert!(matches!(levi_form_value(&m0, &origin(2), &[GR::zero(), GR::one()], &u), Err(Error::NotTangent(_))));
        let flat = sys(2, &["z2 + zb2"]);
        let lf = levi_operator_matrices(&flat, &origin(2)).unwrap();
        assert_eq!(lf.levi_matrices, vec![Matrix::from_ints(&[&[0]])]);
        assert!(!levi_form_nondegenerate(&lf));
        assert!(!levi_cone_nondegenerate(&lf).nondegenerate);
        let c2 = sys(3, &["z2 + zb2 + z1*zb1", "z3 + zb3 + z1*zb1"]);
        let l2 = levi_operator_matrices(&c2, &origin(3)).unwrap();
        assert_eq!(l2.levi_matrices, vec![Matrix::from_ints(&[&[1]]), Matrix::from_ints(&[&[1]])]);
        assert!(levi_form_nondegenerate(&l2));
    }

    #[test]
    fn levi_cone_examples() {
        let m0 = sys(2, &["z2 + zb2 + z1*zb1"]);
        assert!(levi_cone_nondegenerate(&levi_operator_matrices(&m0, &origin(2)).unwrap()).nondegenerate);
        let deg = sys(3, &["z2 + zb2 + z1*zb1", "z3 + zb3"]);
        let v = levi_cone_nondegenerate(&levi_operator_matrices(&deg, &origin(3)).unwrap());
        assert!(!v.nondegenerate);
        match v.witness {
            ConeWitness::Annihilator(c) => assert_eq!(c, vec![GR::zero(), GR::one()]),
            _ => panic!("expected annihilating covector"),
        }
        let c4 = sys(4, &["z3 + zb3 + z1*zb1 - z2*zb2", "z4 + zb4 + z1*zb2 + z2*zb1"]);
        let v = levi_cone_nondegenerate(&levi_operator_matrices(&c4, &origin(4)).unwrap());
        assert!(v.nondegenerate && v.rank == 2);
    }

    #[test]
    fn graph_membership() {
        let m0 = sys(2, &["z2 + zb2 + z1*zb1"]);
        let g = complexified_graph(&m0, 8).unwrap();
        assert!(g.vanishes(&m0.rho()[0]).unwrap());
        assert!(!g.vanishes(&MultiPolynomial::var(m0.table(), 2)).unwrap());
    }
}
