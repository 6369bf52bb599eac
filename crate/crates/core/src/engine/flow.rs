//! Translations along a curve family and the curvilinear chart they generate.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{newton_solve_series, MultiPolynomial, Table, TruncatedSeries, VarKind, VariableTable};
use crate::segre::families::{general_position, CurveFamily};

/// `z1..zn` as holomorphic variables.
pub fn z_table(n: usize) -> Table {
    let mut b = VariableTable::builder();
    for i in 1..=n {
        b = b.var(&format!("z{i}"), VarKind::Holomorphic);
    }
    b.build().expect("z table")
}

pub fn t_table(n: usize) -> Table {
    VariableTable::plain(&(1..=n).map(|i| format!("t{i}")).collect::<Vec<_>>())
}

/// `z ↦ φ(τ)(z)`, series over `tau, z1..zn`.
#[derive(Clone, Debug)]
pub struct FamilyFlow {
    pub table: Table,
    pub map: Vec<TruncatedSeries>,
}

/// Inverts `(t, c) ↦ z`, shifts `t` by `τ` and maps forward.
pub fn family_flow(fam: &CurveFamily, order: u32) -> Result<FamilyFlow> {
    let n = fam.n();
    if !fam.nonsingular() {
        return Err(Error::Inconsistent(format!("family {} is singular at the base", fam.label)));
    }
    let mut names: Vec<String> = vec!["tau".into()];
    names.extend((1..=n).map(|i| format!("z{i}")));
    let free = VariableTable::plain(&names);
    names.extend(fam.params.names());
    let big = VariableTable::plain(&names);
    let g: Vec<TruncatedSeries> = fam
        .map
        .iter()
        .enumerate()
        .map(|(i, r)| Ok(&r.embed(&big)? - &TruncatedSeries::var(&big, 1 + i, order)))
        .collect::<Result<_>>()?;
    let unknowns: Vec<usize> = (n + 1..2 * n + 1).collect();
    let inv = newton_solve_series(&g, &unknowns, &free, order)?;
    let mut subs: Vec<Option<TruncatedSeries>> = inv.iter().cloned().map(Some).collect();
    subs[0] = Some(&inv[0] + &TruncatedSeries::var(&free, 0, order));
    let map = fam.map.iter().map(|r| r.compose(&free, &subs)).collect::<Result<_>>()?;
    Ok(FamilyFlow { table: free, map })
}

impl FamilyFlow {
    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// `φ(τ)(z)` with `τ` and `z` given as series over `target`.
    pub fn apply(&self, target: &Table, tau: &TruncatedSeries, z: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
        let subs: Vec<Option<TruncatedSeries>> = std::iter::once(tau).chain(z).cloned().map(Some).collect();
        self.map.iter().map(|s| s.compose(target, &subs)).collect()
    }

    /// `φ(τ1) ∘ φ(τ2) = φ(τ1 + τ2)` to the working order.
    pub fn group_law_holds(&self) -> Result<bool> {
        let n = self.n();
        let order = self.map.iter().map(|s| s.order()).min().unwrap_or(0);
        let mut names: Vec<String> = vec!["tau1".into(), "tau2".into()];
        names.extend((1..=n).map(|i| format!("z{i}")));
        let t = VariableTable::plain(&names);
        let z: Vec<TruncatedSeries> = (0..n).map(|i| TruncatedSeries::var(&t, 2 + i, order)).collect();
        let tau1 = TruncatedSeries::var(&t, 0, order);
        let tau2 = TruncatedSeries::var(&t, 1, order);
        let inner = self.apply(&t, &tau2, &z)?;
        let lhs = self.apply(&t, &tau1, &inner)?;
        let rhs = self.apply(&t, &(&tau1 + &tau2), &z)?;
        Ok(lhs.iter().zip(&rhs).all(|(a, b)| a.agrees_with(b)))
    }
}

/// `t ↦ z = φ^{(n)}(t_n) ∘ … ∘ φ^{(1)}(t_1)(0)` and its inverse.
#[derive(Clone, Debug)]
pub struct FlowChart {
    pub t: Table,
    pub z: Table,
    pub flows: Vec<FamilyFlow>,
    pub forward: Vec<TruncatedSeries>,
    pub inverse: Vec<TruncatedSeries>,
    /// Polynomial forward/inverse pair when the compositions are exactly the
    /// identity.
    pub exact: Option<(Vec<MultiPolynomial>, Vec<MultiPolynomial>)>,
    pub order: u32,
}

pub fn curvilinear_chart(families: &[CurveFamily], order: u32) -> Result<FlowChart> {
    if !general_position(families) {
        return Err(Error::Inconsistent("curve families are not in general position at the base point".into()));
    }
    let n = families.len();
    let t = t_table(n);
    let z = z_table(n);
    let flows: Vec<FamilyFlow> = families.iter().map(|f| family_flow(f, order)).collect::<Result<_>>()?;
    let mut cur: Vec<TruncatedSeries> = (0..n).map(|_| TruncatedSeries::zero(&t, order)).collect();
    for (m, fl) in flows.iter().enumerate() {
        cur = fl.apply(&t, &TruncatedSeries::var(&t, m, order), &cur)?;
    }
    let forward = cur;
    // forward(t) − z = 0 for t, over z.
    let mut names = z.names();
    names.extend(t.names());
    let big = VariableTable::plain(&names);
    let g: Vec<TruncatedSeries> = forward
        .iter()
        .enumerate()
        .map(|(i, s)| Ok(&s.embed(&big)? - &TruncatedSeries::var(&big, i, order)))
        .collect::<Result<_>>()?;
    let inverse = newton_solve_series(&g, &(n..2 * n).collect::<Vec<_>>(), &z, order)?;
    let exact = exact_pair(&t, &z, &forward, &inverse)?;
    Ok(FlowChart { t, z, flows, forward, inverse, exact, order })
}

fn exact_pair(
    t: &Table,
    z: &Table,
    forward: &[TruncatedSeries],
    inverse: &[TruncatedSeries],
) -> Result<Option<(Vec<MultiPolynomial>, Vec<MultiPolynomial>)>> {
    let fp: Vec<MultiPolynomial> = forward.iter().map(|s| s.to_polynomial()).collect();
    let ip: Vec<MultiPolynomial> = inverse.iter().map(|s| s.to_polynomial()).collect();
    let isubs: Vec<Option<MultiPolynomial>> = ip.iter().cloned().map(Some).collect();
    let fsubs: Vec<Option<MultiPolynomial>> = fp.iter().cloned().map(Some).collect();
    for (i, f) in fp.iter().enumerate() {
        if f.substitute(z, &isubs)? != MultiPolynomial::var(z, i) {
            return Ok(None);
        }
    }
    for (i, g) in ip.iter().enumerate() {
        if g.substitute(t, &fsubs)? != MultiPolynomial::var(t, i) {
            return Ok(None);
        }
    }
    Ok(Some((fp, ip)))
}

impl FlowChart {
    pub fn n(&self) -> usize {
        self.forward.len()
    }

    pub fn jacobian_at_base(&self) -> Matrix {
        let n = self.n();
        Matrix::from_rows(self.forward.iter().map(|s| (0..n).map(|v| s.partial_derivative(v).constant_term()).collect()).collect())
    }

    /// `inverse ∘ forward = id` to the working order.
    pub fn round_trip_holds(&self) -> Result<bool> {
        let subs: Vec<Option<TruncatedSeries>> = self.forward.iter().cloned().map(Some).collect();
        for (i, g) in self.inverse.iter().enumerate() {
            let back = g.compose(&self.t, &subs)?;
            if !back.agrees_with(&TruncatedSeries::var(&self.t, i, self.order)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `f ∘ forward`, for `f` a series in `z1..zn` (by name).
    pub fn pull_back(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let mut subs: Vec<Option<TruncatedSeries>> = vec![None; f.table().len()];
        for (i, s) in self.forward.iter().enumerate() {
            if let Some(j) = f.table().position(self.z.name(i)) {
                subs[j] = Some(s.clone());
            }
        }
        if subs.iter().enumerate().any(|(j, s)| s.is_none() && f.uses_var(j)) {
            return Err(Error::TableMismatch("function uses variables outside z1..zn".into()));
        }
        let out = f.compose(&self.t, &subs)?;
        Ok(if out.order() > self.order { out.truncate(self.order) } else { out })
    }

    pub fn base_is_origin(&self) -> bool {
        self.forward.iter().all(|s| s.constant_term().is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational as GR;
    use crate::io::parse::{poly, system_from_strs};
    use crate::segre::families::{curve_families_from_segre, lifted_fields_on_grid, SegreContext};
    use num_traits::One;

    fn m0_families(order: u32) -> Vec<CurveFamily> {
        let m = system_from_strs(2, &["z2 + zb2 + z1*zb1"]).unwrap();
        let ctx = SegreContext::new(&m, order).unwrap();
        let v = lifted_fields_on_grid(&ctx, &[vec![GR::zero()], vec![GR::one()]]).unwrap();
        curve_families_from_segre(&ctx, &v, order).unwrap()
    }

    #[test]
    fn coordinate_line_flow_is_translation() {
        let fam = CurveFamily::coordinate_lines(3, 1, 8);
        let fl = family_flow(&fam, 8).unwrap();
        let t = &fl.table;
        let want = ["z1", "z2 + tau", "z3"];
        for (s, w) in fl.map.iter().zip(want) {
            assert_eq!(s.to_polynomial(), poly(t, w).unwrap());
        }
        assert!(fl.group_law_holds().unwrap());
    }

    #[test]
    fn quadric_flows_and_chart() {
        let fams = m0_families(12);
        let fl = family_flow(&fams[1], 12).unwrap();
        let t = &fl.table;
        assert_eq!(fl.map[0].to_polynomial(), poly(t, "z1 + tau").unwrap());
        assert_eq!(fl.map[1].to_polynomial(), poly(t, "z2 - tau").unwrap());
        assert!(fl.group_law_holds().unwrap());
        let ch = curvilinear_chart(&fams, 12).unwrap();
        assert_eq!(ch.forward[0].to_polynomial(), poly(&ch.t, "t1 + t2").unwrap());
        assert_eq!(ch.forward[1].to_polynomial(), poly(&ch.t, "-t2").unwrap());
        assert_eq!(ch.inverse[0].to_polynomial(), poly(&ch.z, "z1 + z2").unwrap());
        assert_eq!(ch.inverse[1].to_polynomial(), poly(&ch.z, "-z2").unwrap());
        assert!(ch.round_trip_holds().unwrap());
        assert!(ch.exact.is_some());
    }

    #[test]
    fn dependent_families_rejected() {
        let fams = vec![CurveFamily::coordinate_lines(2, 0, 6), CurveFamily::coordinate_lines(2, 0, 6)];
        assert!(curvilinear_chart(&fams, 6).is_err());
    }
}
