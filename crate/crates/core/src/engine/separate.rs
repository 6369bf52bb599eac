//! Algebraicity along curve families, then jointly in curvilinear
//! coordinates.

use num_traits::{One, Zero};

use super::annihilator::{
    annihilator_table, find_annihilator_named, multivariate_annihilator_named, normalize_annihilator, substitute_annihilator,
    Annihilator, Search,
};
use super::flow::{curvilinear_chart, z_table, FlowChart};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;
use crate::poly::{MultiPolynomial, RationalFunction, Table, TruncatedSeries, VariableTable};
use crate::segre::families::CurveFamily;

/// A function near the base point, in `z1..zn`.
#[derive(Clone, Debug)]
pub enum LocalFunction {
    Rational(RationalFunction),
    Series(TruncatedSeries),
}

impl LocalFunction {
    fn table(&self) -> &Table {
        match self {
            LocalFunction::Rational(r) => r.table(),
            LocalFunction::Series(s) => s.table(),
        }
    }

    /// Series over `z1..zn`.
    pub fn series(&self, n: usize, order: u32) -> Result<TruncatedSeries> {
        let zt = z_table(n);
        let used_outside = (0..self.table().len()).filter(|&i| self.uses_var(i)).any(|i| zt.position(self.table().name(i)).is_none());
        if used_outside {
            return Err(Error::Invalid("function depends on variables other than z1..zn".into()));
        }
        match self {
            LocalFunction::Rational(r) => r.embed(&zt)?.to_series(order),
            LocalFunction::Series(s) => {
                let s = s.embed(&zt)?;
                Ok(if s.order() > order { s.truncate(order) } else { s })
            }
        }
    }

    fn uses_var(&self, i: usize) -> bool {
        match self {
            LocalFunction::Rational(r) => r.numerator().uses_var(i) || r.denominator().uses_var(i),
            LocalFunction::Series(s) => s.uses_var(i),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub qmax: u32,
    pub kmax: u32,
    pub degree: u32,
    pub samples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { qmax: 3, kmax: 3, degree: 3, samples: 3 }
    }
}

/// `0, 1/2, −1/3, 1/4, −1/5, …`
pub fn sample_values(count: usize) -> Vec<GR> {
    (0..count)
        .map(|s| if s == 0 { GR::zero() } else { GR::from_ratio(if s % 2 == 1 { 1 } else { -1 }, s as i64 + 1) })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CurveCheck {
    pub family: usize,
    pub label: String,
    /// Common value of the transverse parameters.
    pub c: GR,
    pub result: Search,
}

#[derive(Clone, Debug)]
pub struct SeparateCertificate {
    pub curves: Vec<CurveCheck>,
    /// Annihilators of `f` restricted to `t_{m+1} = … = t_n = 0`, in chart
    /// coordinates.
    pub stages: Vec<Search>,
    pub chart_exact: bool,
    /// Final annihilator over `(f, z1..zn)`.
    pub annihilator: Annihilator,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub enum SeparateOutcome {
    Certified(SeparateCertificate),
    CurveFailed { family: usize, label: String, c: GR, searched: Vec<(u32, u32)>, curves: Vec<CurveCheck> },
    FinalNotFound { searched: Vec<(u32, u32)>, curves: Vec<CurveCheck> },
}

/// `∂^s f/∂t_{m}^s` at `t_m = 0` with the later variables set to zero, for
/// `s = 0..=s_max` (`m` zero-based).
pub fn derivative_jets(f: &TruncatedSeries, m: usize, s_max: u32) -> Result<Vec<TruncatedSeries>> {
    if s_max > f.order() {
        return Err(Error::OrderInsufficient { what: format!("jets up to order {s_max}"), required: s_max, available: f.order() });
    }
    let later: Vec<usize> = (m + 1..f.table().len()).collect();
    let g = f.set_zero(&later);
    let mut fact = GR::one();
    (0..=s_max)
        .map(|s| {
            if s > 0 {
                fact = &fact * &GR::from_int(s as i64);
            }
            Ok(g.coefficient_of(m, s)?.scale(&fact))
        })
        .collect()
}

/// `t ↦ f(R(t, c))` as a series in `t`, `None` when undefined at `t = 0`.
fn restrict_to_curve(f: &LocalFunction, fs: &TruncatedSeries, fam: &CurveFamily, c: &GR, order: u32) -> Result<Option<TruncatedSeries>> {
    let n = fam.n();
    let tt = VariableTable::plain(&["t"]);
    if c.is_zero() {
        let curve = fam.base_curve()?;
        let subs: Vec<Option<TruncatedSeries>> = curve.into_iter().map(Some).collect();
        return Ok(Some(fs.compose(&tt, &subs)?.truncate(order)));
    }
    let (LocalFunction::Rational(r), Some(curve)) = (f, fam.exact_curve(&vec![c.clone(); n - 1])) else { return Ok(None) };
    let zt = z_table(n);
    let r = r.embed(&zt)?;
    let subs: Vec<Option<MultiPolynomial>> = curve.into_iter().map(Some).collect();
    let num = r.numerator().substitute(&tt, &subs)?;
    let den = r.denominator().substitute(&tt, &subs)?;
    if den.constant_term().is_zero() {
        return Ok(None);
    }
    Ok(Some(RationalFunction::new(num, den)?.to_series(order)?))
}

pub fn separate_algebraicity(f: &LocalFunction, fname: &str, families: &[CurveFamily], bounds: Bounds, order: u32) -> Result<SeparateOutcome> {
    let chart = curvilinear_chart(families, order)?;
    separate_with_chart(f, fname, families, &chart, bounds, order)
}

pub fn separate_with_chart(
    f: &LocalFunction,
    fname: &str,
    families: &[CurveFamily],
    chart: &FlowChart,
    bounds: Bounds,
    order: u32,
) -> Result<SeparateOutcome> {
    let n = chart.n();
    let fs = f.series(n, order)?;
    let mut curves = Vec::new();
    for (m, fam) in families.iter().enumerate() {
        for c in sample_values(bounds.samples.max(1)) {
            if !c.is_zero() && (fam.exact.is_none() || !matches!(f, LocalFunction::Rational(_))) {
                continue;
            }
            let Some(g) = restrict_to_curve(f, &fs, fam, &c, order)? else { continue };
            let result = find_annihilator_named(&g, fname, bounds.qmax, bounds.kmax)?;
            if let Search::NotFound { searched } = &result {
                return Ok(SeparateOutcome::CurveFailed { family: m, label: fam.label.clone(), c, searched: searched.clone(), curves });
            }
            curves.push(CurveCheck { family: m, label: fam.label.clone(), c, result });
        }
    }
    let ft = chart.pull_back(&fs)?;
    let mut stages = Vec::with_capacity(n);
    for m in 0..n {
        let keep: Vec<usize> = (0..=m).collect();
        let sub = chart.t.subset(&keep);
        let stage = ft.set_zero(&(m + 1..n).collect::<Vec<_>>()).embed(&sub)?;
        stages.push(multivariate_annihilator_named(&stage, fname, bounds.degree)?);
    }
    let annihilator = match (&chart.exact, stages.last().and_then(|s| s.found())) {
        (Some((_, inv)), Some(pt)) => {
            let at = annihilator_table(fname, &z_table(n));
            let mut subs: Vec<Option<MultiPolynomial>> = vec![Some(MultiPolynomial::var(&at, 0))];
            for g in inv {
                subs.push(Some(g.embed(&at)?));
            }
            let p = normalize_annihilator(&pt.poly.substitute(&at, &subs)?);
            if !substitute_annihilator(&p, &fs)?.is_zero() {
                return Err(Error::Inconsistent("annihilator does not survive the change to z coordinates".into()));
            }
            Annihilator { q: p.degree_in(0), k: p.total_degree(), poly: p, order, kernel_dim: pt.kernel_dim, searched: pt.searched.clone() }
        }
        _ => match multivariate_annihilator_named(&fs, fname, bounds.degree)? {
            Search::Found(a) => a,
            Search::NotFound { searched } => return Ok(SeparateOutcome::FinalNotFound { searched, curves }),
        },
    };
    Ok(SeparateOutcome::Certified(SeparateCertificate { curves, stages, chart_exact: chart.exact.is_some(), annihilator, order }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::{poly, rational, system_from_strs};
    use crate::segre::families::{curve_families_from_segre, lifted_fields_on_grid, SegreContext};

    fn coord(n: usize, order: u32) -> Vec<CurveFamily> {
        (0..n).map(|m| CurveFamily::coordinate_lines(n, m, order)).collect()
    }

    #[test]
    fn jets() {
        let t = VariableTable::plain(&["t1", "t2"]);
        let f = poly(&t, "t1 + t2^2").unwrap().to_series(8);
        let j = derivative_jets(&f, 1, 3).unwrap();
        let want = ["t1", "0", "2", "0"];
        for (s, w) in j.iter().zip(want) {
            assert_eq!(s.to_polynomial(), poly(&t, w).unwrap());
        }
        let g = (&TruncatedSeries::one(&t, 8) - &poly(&t, "t1*t2").unwrap().to_series(8)).inverse().unwrap();
        let j = derivative_jets(&g, 1, 3).unwrap();
        assert_eq!(j[3].to_polynomial(), poly(&t, "6*t1^3").unwrap());
        assert!(derivative_jets(&g, 1, 9).is_err());
    }

    #[test]
    fn classical_claim() {
        let zt = VariableTable::complex(2);
        let f = LocalFunction::Rational(rational(&zt, "z1*z2/(1 - z1*z2)").unwrap());
        let out = separate_algebraicity(&f, "f", &coord(2, 12), Bounds::default(), 12).unwrap();
        let SeparateOutcome::Certified(cert) = out else { panic!("{out:?}") };
        let p = &cert.annihilator.poly;
        assert_eq!(p, &poly(p.table(), "f - z1*z2*f - z1*z2").unwrap());
        assert_eq!(cert.curves.len(), 6);
    }

    #[test]
    fn quadric_families_polynomial() {
        let m = system_from_strs(2, &["z2 + zb2 + z1*zb1"]).unwrap();
        let ctx = SegreContext::new(&m, 12).unwrap();
        let v = lifted_fields_on_grid(&ctx, &[vec![GR::zero()], vec![GR::one()]]).unwrap();
        let fams = curve_families_from_segre(&ctx, &v, 12).unwrap();
        let f = LocalFunction::Rational(rational(&VariableTable::complex(2), "z2 + z1^2").unwrap());
        let SeparateOutcome::Certified(cert) = separate_algebraicity(&f, "f", &fams, Bounds::default(), 12).unwrap() else { panic!() };
        let p = &cert.annihilator.poly;
        assert_eq!(p, &poly(p.table(), "f - z2 - z1^2").unwrap());
        assert!(cert.chart_exact);
    }

    #[test]
    fn agrees_with_direct_search() {
        let zt = VariableTable::complex(2);
        let cases = ["1/(1 - z1)", "z1*z2/(1 - z1*z2)", "(z1 + z2)/(1 - z2)", "1/(1 - z1 - z2)", "z1^2/(1 + z2)", "1/((1 - z1)*(1 - z2)^2)"];
        let mut agreed = (0, 0);
        for c in cases {
            let f = LocalFunction::Rational(rational(&zt, c).unwrap());
            let sep = matches!(separate_algebraicity(&f, "f", &coord(2, 12), Bounds::default(), 12).unwrap(), SeparateOutcome::Certified(_));
            let direct = multivariate_annihilator_named(&f.series(2, 12).unwrap(), "f", 3).unwrap().found().is_some();
            assert_eq!(sep, direct, "{c}");
            if sep {
                agreed.0 += 1;
            } else {
                agreed.1 += 1;
            }
        }
        assert!(agreed.0 >= 5, "{agreed:?}");
    }

    #[test]
    fn exponential_fails_on_first_family() {
        let zt = z_table(2);
        let f = LocalFunction::Series(TruncatedSeries::var(&zt, 0, 24).exp().unwrap());
        match separate_algebraicity(&f, "f", &coord(2, 24), Bounds::default(), 24).unwrap() {
            SeparateOutcome::CurveFailed { family, .. } => assert_eq!(family, 0),
            other => panic!("{other:?}"),
        }
    }
}
