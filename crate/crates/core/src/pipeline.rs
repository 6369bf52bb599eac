//! End-to-end extension of a holomorphic map between real algebraic CR
//! manifolds: hypotheses, reflection systems, curve families, annihilators.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::engine::annihilator::{normalize_annihilator, Annihilator};
use crate::engine::flow::{curvilinear_chart, z_table};
use crate::engine::separate::{separate_with_chart, Bounds, LocalFunction, SeparateCertificate, SeparateOutcome};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational as GR;
use crate::io::report;
use crate::manifold::{check_defining_system, levi_cone_nondegenerate, levi_operator_matrices, ConeWitness, DefiningSystem, NormalizationMap};
use crate::poly::{MultiPolynomial, RationalFunction};
use crate::segre::families::{curve_families_from_segre, lifted_fields, CurveFamily, SegreContext, SpanningVerdict, ThetaGrid};
use crate::segre::reflection::{
    atilde_system, condition_2_5_check, full_system, membership_residual, normalize_map, phi_polynomials, rational_points,
    segre_graph_parametrization, select_phi_subset, verify_graph_in_variety, CrMapData, FullSystem, PhiSystem,
};

#[derive(Clone, Debug)]
pub struct Problem {
    pub source: DefiningSystem,
    pub target: DefiningSystem,
    pub map: Vec<RationalFunction>,
    pub basepoint: Vec<GR>,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub order: u32,
    pub bounds: Bounds,
    pub theta_grid: ThetaGrid,
    /// Points `ζ` at which the graph is checked against its variety.
    pub graph_samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { order: 12, bounds: Bounds::default(), theta_grid: ThetaGrid::Default, graph_samples: 3 }
    }
}

#[derive(Clone, Debug)]
pub struct Condition {
    /// Label of the hypothesis, e.g. `Eq (2.3)`.
    pub name: &'static str,
    pub description: &'static str,
    /// `None` when skipped because an earlier check failed.
    pub pass: Option<bool>,
    pub detail: Value,
}

impl Condition {
    fn new(name: &'static str, description: &'static str, pass: bool, detail: Value) -> Self {
        Condition { name, description, pass: Some(pass), detail }
    }

    fn skipped(name: &'static str, description: &'static str, why: &str) -> Self {
        Condition { name, description, pass: None, detail: json!({"skipped": why}) }
    }

    pub fn to_json(&self) -> Value {
        let status = match self.pass {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "skipped",
        };
        json!({"name": self.name, "description": self.description, "status": status, "detail": self.detail})
    }
}

const GENERIC: (&str, &str) = ("Eq (2.1)", "generic real algebraic defining system");
const MEMBER: (&str, &str) = ("Eq (2.4)", "map sends the source into the target");
const CONE: (&str, &str) = ("Eq (2.3)", "Levi cone of the source has interior");
const RANK: (&str, &str) = ("Eq (2.5)", "Levi images of dF span the target CR directions");
const SELECT: (&str, &str) = ("Lemma 3.1", "invertible Φ subset in the conjugate map symbols");
const BLOCK: (&str, &str) = ("Lemma 3.2", "conjugated system has full rank in the conjugate map symbols");
const SPAN: (&str, &str) = ("Lemma 4.3", "lifted Segre fields span");

/// All verdicts plus the intermediate objects needed downstream.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub conditions: Vec<Condition>,
    pub data: Option<CrMapData>,
    pub phi: Option<PhiSystem>,
    pub full: Option<FullSystem>,
    pub spanning: Option<SpanningVerdict>,
}

impl HypothesisReport {
    pub fn pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass == Some(true))
    }

    pub fn first_failure(&self) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.pass == Some(false))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "failed": self.first_failure().map(|c| c.name),
            "conditions": self.conditions.iter().map(Condition::to_json).collect::<Vec<_>>(),
        })
    }
}

fn genericity(label: &str, m: &DefiningSystem, p: &[GR]) -> Result<(bool, Value)> {
    let g = check_defining_system(m, p)?;
    Ok((g.pass, json!({"manifold": label, "report": serde_json::to_value(&g).expect("serializable")})))
}

pub fn hypothesis_report(problem: &Problem, opts: &Options) -> Result<HypothesisReport> {
    let mut conditions = Vec::new();
    let mut out = HypothesisReport { conditions: Vec::new(), data: None, phi: None, full: None, spanning: None };
    let p = &problem.basepoint;
    problem.source.require_point(p)?;
    let (ok_s, det_s) = genericity("source", &problem.source, p)?;
    let data = normalize_map(&problem.source, &problem.target, &problem.map, p);
    let pp = match &data {
        Ok(d) => Some(d.basepoint_image.clone()),
        Err(_) => None,
    };
    let (ok_t, det_t) = match &pp {
        Some(pp) => genericity("target", &problem.target, pp)?,
        None => (false, json!({"manifold": "target", "error": "map image is not a point of the target"})),
    };
    conditions.push(Condition::new(GENERIC.0, GENERIC.1, ok_s && ok_t, json!([det_s, det_t])));
    let data = match data {
        Ok(d) if ok_s && ok_t => d,
        Ok(_) => {
            for (n, d) in [MEMBER, CONE, RANK, SELECT, BLOCK, SPAN] {
                conditions.push(Condition::skipped(n, d, "defining systems are not generic"));
            }
            out.conditions = conditions;
            return Ok(out);
        }
        Err(e) => {
            let name = if matches!(e, Error::NotOnManifold(_)) { MEMBER } else { GENERIC };
            conditions.push(Condition::new(name.0, name.1, false, json!({"error": e.to_string()})));
            out.conditions = conditions;
            return Ok(out);
        }
    };
    let residual = membership_residual(&data, opts.order)?;
    let member_ok = residual.is_zero();
    let mut mdet = json!({"order": opts.order, "basepoint_image": report::vector(&data.basepoint_image)});
    if !member_ok {
        mdet["residual"] = report::series(&residual);
    }
    conditions.push(Condition::new(MEMBER.0, MEMBER.1, member_ok, mdet));

    let z0 = vec![GR::zero(); data.n()];
    let levi = levi_operator_matrices(&data.source, &z0)?;
    let cone = levi_cone_nondegenerate(&levi);
    let witness = match &cone.witness {
        ConeWitness::Spanning(v) => json!({"spanning_values": report::rows(v)}),
        ConeWitness::Annihilator(c) => json!({"annihilating_covector": report::vector(c)}),
    };
    conditions.push(Condition::new(
        CONE.0,
        CONE.1,
        cone.nondegenerate,
        json!({"rank": cone.rank, "codimension": levi.d(), "levi_matrices": levi.levi_matrices.iter().map(report::matrix).collect::<Vec<_>>(), "witness": witness}),
    ));

    let zp0 = vec![GR::zero(); data.np()];
    let levi_t = levi_operator_matrices(&data.target, &zp0)?;
    let rank = condition_2_5_check(&levi_t, &data.jacobian, data.source.k());
    conditions.push(Condition::new(
        RANK.0,
        RANK.1,
        rank.pass,
        json!({"rank": rank.rank, "required": rank.required, "rows": report::rows(&rank.rows), "jacobian": report::matrix(&data.jacobian)}),
    ));

    if rank.pass && data.target.k() >= 1 {
        let sys = phi_polynomials(&data.source, &data.target, &data.jacobian)?;
        match select_phi_subset(&sys) {
            Ok(sel) => {
                let pairs: Vec<Value> = sel.pairs.iter().map(|(q, j)| json!([q + 1, j + 1])).collect();
                conditions.push(Condition::new(SELECT.0, SELECT.1, true, json!({"pairs": pairs, "jacobian": report::rows(&sel.jacobian)})));
                let full = full_system(&sys, sel)?;
                conditions.push(Condition::new(
                    BLOCK.0,
                    BLOCK.1,
                    full.pass,
                    json!({"rank": full.rank, "required": sys.np, "jacobian": report::matrix(&full.jacobian)}),
                ));
                out.full = Some(full);
            }
            Err(e) => {
                conditions.push(Condition::new(SELECT.0, SELECT.1, false, json!({"error": e.to_string()})));
                conditions.push(Condition::skipped(BLOCK.0, BLOCK.1, "no Φ subset"));
            }
        }
        out.phi = Some(sys);
    } else {
        let why = if rank.pass { "target has no CR directions" } else { "rank condition failed" };
        conditions.push(Condition::skipped(SELECT.0, SELECT.1, why));
        conditions.push(Condition::skipped(BLOCK.0, BLOCK.1, why));
    }

    let ctx = SegreContext::new(&data.source, opts.order)?;
    let span = lifted_fields(&ctx, opts.theta_grid)?;
    conditions.push(Condition::new(
        SPAN.0,
        SPAN.1,
        span.spans,
        json!({"rank": span.rank, "n": span.n, "grid": report::rows(&span.grid), "taylor_fallback": span.taylor_fallback}),
    ));
    out.spanning = Some(span);
    out.data = Some(data);
    out.conditions = conditions;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GraphCheck {
    /// Normalized coordinates.
    pub zeta: Vec<GR>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ComponentCertificate {
    pub name: String,
    pub separate: SeparateCertificate,
    /// Over `(F_i, z1..zn)` in the original coordinates.
    pub annihilator: Annihilator,
    /// `P(F_i(z), z) = 0` as a rational function identity.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct ExtensionCertificate {
    pub report: HypothesisReport,
    pub families: Vec<CurveFamily>,
    pub components: Vec<ComponentCertificate>,
    pub graph_checks: Vec<GraphCheck>,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub enum ExtensionOutcome {
    Certified(Box<ExtensionCertificate>),
    HypothesisFailed(Box<HypothesisReport>),
    /// Some component or curve had no annihilator within the bounds.
    NotFound { report: Box<HypothesisReport>, component: String, detail: Value },
}

/// `P(F, w)` with `w = C⁻¹ (z − p)`, renormalized.
pub fn to_original_coordinates(p: &MultiPolynomial, map: &NormalizationMap) -> Result<MultiPolynomial> {
    let t = p.table();
    let hol: Vec<usize> = (1..t.len()).collect();
    let subs = map.inverse_substitution(t, &hol, None);
    Ok(normalize_annihilator(&p.substitute(t, &subs)?))
}

fn exact_check(p: &MultiPolynomial, f: &RationalFunction, n: usize) -> Result<bool> {
    let zt = z_table(n);
    let mut subs: Vec<Option<RationalFunction>> = vec![Some(f.embed(&zt)?)];
    subs.extend((0..n).map(|i| Some(RationalFunction::from_polynomial(MultiPolynomial::var(&zt, i)))));
    Ok(RationalFunction::compose_polynomial(p, &zt, &subs)?.is_zero())
}

pub fn extend_map(problem: &Problem, opts: &Options) -> Result<ExtensionOutcome> {
    let report = hypothesis_report(problem, opts)?;
    if !report.pass() {
        return Ok(ExtensionOutcome::HypothesisFailed(Box::new(report)));
    }
    let data = report.data.as_ref().expect("data present when hypotheses pass");
    let (n, order) = (data.n(), opts.order);
    let ctx = SegreContext::new(&data.source, order)?;
    let span = report.spanning.as_ref().expect("spanning verdict");
    let families = curve_families_from_segre(&ctx, span, order)?;
    let chart = curvilinear_chart(&families, order)?;
    let mut components = Vec::new();
    for (i, f) in data.pulled.iter().enumerate() {
        let name = format!("F{}", i + 1);
        let lf = LocalFunction::Rational(f.embed(&z_table(n))?);
        match separate_with_chart(&lf, &name, &families, &chart, opts.bounds, order)? {
            SeparateOutcome::Certified(cert) => {
                let poly = to_original_coordinates(&cert.annihilator.poly, &data.source_map)?;
                let exact = exact_check(&poly, &problem.map[i], n)?;
                let annihilator = Annihilator { q: poly.degree_in(0), k: poly.total_degree(), poly, ..cert.annihilator.clone() };
                components.push(ComponentCertificate { name, separate: cert, annihilator, exact });
            }
            SeparateOutcome::CurveFailed { family, label, c, searched, .. } => {
                let detail = json!({"family": family + 1, "label": label, "c": report::gr(&c), "searched": report::searched(&searched)});
                return Ok(ExtensionOutcome::NotFound { report: Box::new(report), component: name, detail });
            }
            SeparateOutcome::FinalNotFound { searched, .. } => {
                let detail = json!({"stage": "final", "searched": report::searched(&searched)});
                return Ok(ExtensionOutcome::NotFound { report: Box::new(report), component: name, detail });
            }
        }
    }
    let sys = report.phi.as_ref().expect("phi system");
    let full = report.full.as_ref().expect("full system");
    let mut graph_checks = Vec::new();
    for zeta in rational_points(&data.source, opts.graph_samples) {
        let a = atilde_system(data, sys, full, &zeta)?;
        let q = segre_graph_parametrization(&data.source, &zeta, order)?;
        let pass = verify_graph_in_variety(&a, &data.f, &q, order)?;
        graph_checks.push(GraphCheck { zeta, pass });
    }
    if graph_checks.iter().any(|g| !g.pass) {
        return Err(Error::Inconsistent("graph of the map leaves its reflection variety".into()));
    }
    Ok(ExtensionOutcome::Certified(Box::new(ExtensionCertificate { report, families, components, graph_checks, order })))
}

pub fn family_json(f: &CurveFamily) -> Value {
    json!({
        "index": f.index + 1,
        "label": f.label,
        "tangent": report::vector(&f.tangent),
        "exact": f.exact.as_ref().map(|ps| ps.iter().map(report::polynomial).collect::<Vec<_>>()),
    })
}

impl ExtensionCertificate {
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                let curves: Vec<Value> = c
                    .separate
                    .curves
                    .iter()
                    .map(|k| json!({"family": k.family + 1, "c": report::gr(&k.c), "annihilator": report::search(&k.result)}))
                    .collect();
                json!({
                    "component": c.name,
                    "annihilator": report::annihilator(&c.annihilator),
                    "exact": c.exact,
                    "chart_exact": c.separate.chart_exact,
                    "normalized_coordinates_annihilator": report::annihilator(&c.separate.annihilator),
                    "stages": c.separate.stages.iter().map(report::search).collect::<Vec<_>>(),
                    "curves": curves,
                })
            })
            .collect();
        json!({
            "status": "certified",
            "order": self.order,
            "hypotheses": self.report.to_json(),
            "families": self.families.iter().map(family_json).collect::<Vec<_>>(),
            "components": comps,
            "graph_checks": self.graph_checks.iter().map(|g| json!({"zeta": report::vector(&g.zeta), "pass": g.pass})).collect::<Vec<_>>(),
        })
    }
}

impl ExtensionOutcome {
    pub fn to_json(&self) -> Value {
        match self {
            ExtensionOutcome::Certified(c) => c.to_json(),
            ExtensionOutcome::HypothesisFailed(r) => {
                let mut v = r.to_json();
                v["status"] = json!("hypothesis_failed");
                v
            }
            ExtensionOutcome::NotFound { report: r, component, detail } => json!({
                "status": "not_found",
                "component": component,
                "detail": detail,
                "hypotheses": r.to_json(),
            }),
        }
    }
}
