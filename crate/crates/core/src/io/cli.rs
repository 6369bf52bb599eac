//! `cralg` command line: subcommands, exit codes, JSON output.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use super::parse::{eval_rational, eval_series, parse_input, ProblemFile};
use super::report;
use crate::engine::annihilator::{find_annihilator, multivariate_annihilator, Search};
use crate::engine::flow::z_table;
use crate::engine::separate::{separate_algebraicity, Bounds, LocalFunction, SeparateOutcome};
use crate::error::Error;
use crate::linalg::Matrix;
use crate::manifold::{
    check_defining_system, levi_cone_nondegenerate, levi_form_nondegenerate, levi_operator_matrices, normalize_at_point, ConeWitness,
    DefiningSystem, NormalizationMap,
};
use crate::pipeline::{extend_map, family_json, hypothesis_report, to_original_coordinates, ExtensionOutcome, Options, Problem};
use crate::poly::{TruncatedSeries, VariableTable};
use crate::segre::families::{curve_families_from_segre, lifted_fields, CurveFamily, SegreContext, ThetaGrid};
use crate::tangent::tangent_operators;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cralg", version, about = "Exact checks and algebraicity certificates for CR maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Truncation order N (default 12, or the file's `order`).
    #[arg(long, global = true)]
    order: Option<u32>,
    #[arg(long, global = true)]
    qmax: Option<u32>,
    #[arg(long, global = true)]
    kmax: Option<u32>,
    /// Total degree bound for multivariate annihilators.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Sampled curves per family.
    #[arg(long, global = true)]
    samples: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    theta_grid: Option<GridArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridArg {
    Default,
    Extended,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Genericity of the defining system at the base point.
    CheckManifold { file: PathBuf },
    /// Levi matrices and Levi cone verdict.
    Levi { file: PathBuf },
    /// Tangent CR operators of the normalized system.
    TangentOps { file: PathBuf },
    /// Segre family, lifted fields and curve families.
    Segre { file: PathBuf },
    /// Hypothesis report for a map.
    CheckMap { file: PathBuf },
    /// Full extension certificate for a map.
    ExtendMap { file: PathBuf },
    /// Annihilating polynomial of a series.
    Annihilator { file: PathBuf },
    /// Separate algebraicity along curve families.
    SeparateAlg { file: PathBuf },
}

pub struct CommandOutput {
    pub code: i32,
    /// Report text, empty when written to `--out`.
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    status: &'static str,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, status) = match e {
            Error::OrderInsufficient { .. } => (EXIT_NOT_FOUND, "order_insufficient"),
            _ => (EXIT_HYPOTHESIS, "error"),
        };
        Failure { code, status, msg: e.to_string() }
    }
}

type Run = std::result::Result<(i32, Value), Failure>;

struct Ctx {
    pf: ProblemFile,
    order: u32,
    bounds: Bounds,
    grid: ThetaGrid,
}

fn load(path: &PathBuf, cli: &Cli) -> std::result::Result<Ctx, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_PARSE, status: "parse_error", msg: format!("{}: {e}", path.display()) })?;
    let pf = parse_input(&text).map_err(|e| Failure { code: EXIT_PARSE, status: "parse_error", msg: format!("{}: {e}", path.display()) })?;
    let d = Bounds::default();
    let bounds = Bounds {
        qmax: cli.qmax.or(pf.qmax).unwrap_or(d.qmax),
        kmax: cli.kmax.or(pf.kmax).unwrap_or(d.kmax),
        degree: cli.degree.or(pf.degree).unwrap_or(d.degree),
        samples: cli.samples.or(pf.samples).map_or(d.samples, |s| s as usize),
    };
    let grid = match cli.theta_grid {
        Some(GridArg::Extended) => ThetaGrid::Extended,
        _ => ThetaGrid::Default,
    };
    Ok(Ctx { order: cli.order.or(pf.order).unwrap_or(12), pf, bounds, grid })
}

fn verdict(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_HYPOTHESIS
    }
}

fn source(c: &Ctx) -> std::result::Result<DefiningSystem, Failure> {
    if c.pf.rho.is_empty() {
        return Err(Failure { code: EXIT_PARSE, status: "parse_error", msg: "no defining functions rho1.. given".into() });
    }
    Ok(c.pf.source()?)
}

fn check_manifold(c: &Ctx) -> Run {
    let m = source(c)?;
    let p = c.pf.basepoint_or_origin();
    let g = check_defining_system(&m, &p)?;
    let pass = g.pass;
    Ok((verdict(pass), json!({"pass": pass, "basepoint": report::vector(&p), "genericity": serde_json::to_value(&g).expect("serializable")})))
}

fn levi(c: &Ctx) -> Run {
    let m = source(c)?;
    let p = c.pf.basepoint_or_origin();
    let l = levi_operator_matrices(&m, &p)?;
    let v = levi_cone_nondegenerate(&l);
    let witness = match &v.witness {
        ConeWitness::Spanning(x) => json!({"spanning_values": report::rows(x)}),
        ConeWitness::Annihilator(x) => json!({"annihilating_covector": report::vector(x)}),
    };
    Ok((
        verdict(v.nondegenerate),
        json!({
            "pass": v.nondegenerate,
            "condition": "Eq (2.3)",
            "tangent_basis": report::rows(&l.tangent_basis),
            "levi_matrices": l.levi_matrices.iter().map(report::matrix).collect::<Vec<_>>(),
            "cone_rank": v.rank,
            "codimension": l.d(),
            "levi_form_nondegenerate": levi_form_nondegenerate(&l),
            "witness": witness,
        }),
    ))
}

fn normalization_json(map: &NormalizationMap) -> Value {
    json!({"matrix": report::matrix(&map.c), "basepoint": report::vector(&map.p)})
}

fn tangent_ops(c: &Ctx) -> Run {
    let m = source(c)?;
    let (map, nm) = normalize_at_point(&m, &c.pf.basepoint_or_origin())?;
    let ops = tangent_operators(&nm)?;
    let mut tangent = true;
    let mut out = Vec::new();
    for op in &ops {
        for r in nm.rho() {
            tangent &= op.apply(r, false)?.is_zero();
        }
        out.push(json!({"q": op.q + 1, "delta": report::polynomial(&op.delta), "coeffs": op.coeffs.iter().map(report::polynomial).collect::<Vec<_>>()}));
    }
    Ok((
        verdict(tangent),
        json!({
            "pass": tangent,
            "normalization": normalization_json(&map),
            "normalized_rho": nm.rho().iter().map(report::polynomial).collect::<Vec<_>>(),
            "operators": out,
            "annihilate_rho": tangent,
        }),
    ))
}

fn segre(c: &Ctx) -> Run {
    let m = source(c)?;
    let (map, nm) = normalize_at_point(&m, &c.pf.basepoint_or_origin())?;
    let ctx = SegreContext::new(&nm, c.order)?;
    let v = lifted_fields(&ctx, c.grid)?;
    let fields: Vec<Value> = v.fields.iter().map(|f| json!({"theta": report::vector(&f.theta), "vectors": report::rows(&f.vectors)})).collect();
    let mut body = json!({
        "pass": v.spans,
        "condition": "Lemma 4.3",
        "normalization": normalization_json(&map),
        "order": c.order,
        "segre_function": ctx.family.s.iter().map(report::series).collect::<Vec<_>>(),
        "sigma0_exact": ctx.family.sigma0_exact.as_ref().map(|ps| ps.iter().map(report::polynomial).collect::<Vec<_>>()),
        "spanning": {"rank": v.rank, "n": v.n, "taylor_fallback": v.taylor_fallback, "fields": fields},
    });
    if v.spans && !v.taylor_fallback {
        let fams = curve_families_from_segre(&ctx, &v, c.order)?;
        body["families"] = Value::Array(fams.iter().map(family_json).collect());
    }
    Ok((verdict(v.spans), body))
}

fn problem(c: &Ctx) -> std::result::Result<(Problem, Options), Failure> {
    let pf = &c.pf;
    if pf.map.is_empty() {
        return Err(Failure { code: EXIT_PARSE, status: "parse_error", msg: "no map components F1.. given".into() });
    }
    let pb = Problem { source: pf.source()?, target: pf.target()?, map: pf.map.clone(), basepoint: pf.basepoint_or_origin() };
    let opts = Options { order: c.order, bounds: c.bounds, theta_grid: c.grid, graph_samples: 3 };
    Ok((pb, opts))
}

fn check_map(c: &Ctx) -> Run {
    let (pb, opts) = problem(c)?;
    let r = hypothesis_report(&pb, &opts)?;
    Ok((verdict(r.pass()), r.to_json()))
}

fn extend(c: &Ctx) -> Run {
    let (pb, opts) = problem(c)?;
    let out = extend_map(&pb, &opts)?;
    let code = match &out {
        ExtensionOutcome::Certified(_) => EXIT_PASS,
        ExtensionOutcome::HypothesisFailed(_) => EXIT_HYPOTHESIS,
        ExtensionOutcome::NotFound { .. } => EXIT_NOT_FOUND,
    };
    Ok((code, out.to_json()))
}

fn search_code(s: &Search) -> i32 {
    match s {
        Search::Found(_) => EXIT_PASS,
        Search::NotFound { .. } => EXIT_NOT_FOUND,
    }
}

fn annihilator(c: &Ctx) -> Run {
    let pf = &c.pf;
    let names = pf.vars.clone().unwrap_or_else(|| vec!["t".into()]);
    let t = VariableTable::plain(&names);
    let f = match (&pf.coeffs, &pf.f) {
        (Some(cs), _) if names.len() == 1 => TruncatedSeries::from_coeffs(&t, 0, cs),
        (Some(_), _) => return Err(Failure { code: EXIT_PARSE, status: "parse_error", msg: "coeffs needs a single variable".into() }),
        (None, Some(e)) => eval_series(e, &t, c.order, Default::default())
            .map_err(|e| Failure { code: EXIT_PARSE, status: "parse_error", msg: e.to_string() })?,
        (None, None) => return Err(Failure { code: EXIT_PARSE, status: "parse_error", msg: "no `f` or `coeffs` given".into() }),
    };
    let (s, bounds) = if names.len() == 1 {
        (find_annihilator(&f, c.bounds.qmax, c.bounds.kmax)?, json!({"qmax": c.bounds.qmax, "kmax": c.bounds.kmax}))
    } else {
        (multivariate_annihilator(&f, c.bounds.degree)?, json!({"degree": c.bounds.degree}))
    };
    let mut body = report::search(&s);
    body["order"] = json!(f.order());
    body["bounds"] = bounds;
    Ok((search_code(&s), body))
}

fn separate(c: &Ctx) -> Run {
    let pf = &c.pf;
    let n = pf.n.ok_or_else(|| Failure { code: EXIT_PARSE, status: "parse_error", msg: "`n` must be declared".into() })?;
    let e = pf.f.as_ref().ok_or_else(|| Failure { code: EXIT_PARSE, status: "parse_error", msg: "no `f` given".into() })?;
    let p = pf.basepoint_or_origin();
    let segre = pf.families.as_deref() == Some("segre");
    let (map, families): (NormalizationMap, Vec<CurveFamily>) = if segre {
        let m = pf.source()?;
        let (map, nm) = normalize_at_point(&m, &p)?;
        let ctx = SegreContext::new(&nm, c.order)?;
        let v = lifted_fields(&ctx, c.grid)?;
        if !v.spans {
            return Ok((EXIT_HYPOTHESIS, json!({"pass": false, "condition": "Lemma 4.3", "rank": v.rank, "n": v.n})));
        }
        (map, curve_families_from_segre(&ctx, &v, c.order)?)
    } else {
        let map = NormalizationMap { c: Matrix::identity(n), c_inv: Matrix::identity(n), p: p.clone() };
        (map, (0..n).map(|m| CurveFamily::coordinate_lines(n, m, c.order)).collect())
    };
    let zt = VariableTable::complex(n);
    let hol: Vec<usize> = (0..n).collect();
    let f = match eval_rational(e, &zt, Default::default()) {
        Ok(r) => LocalFunction::Rational(r.substitute(&zt, &map.forward_substitution(&zt, &hol, None))?),
        Err(_) => {
            if map.c != Matrix::identity(n) || p.iter().any(|x| !x.is_zero()) {
                return Err(Failure { code: EXIT_PARSE, status: "parse_error", msg: "non-rational f needs the origin as base point and an already normalized system".into() });
            }
            let s = eval_series(e, &z_table(n), c.order, Default::default()).map_err(|e| Failure { code: EXIT_PARSE, status: "parse_error", msg: e.to_string() })?;
            LocalFunction::Series(s)
        }
    };
    let out = separate_algebraicity(&f, "f", &families, c.bounds, c.order)?;
    let curves_json = |cs: &[crate::engine::separate::CurveCheck]| -> Vec<Value> {
        cs.iter().map(|k| json!({"family": k.family + 1, "label": k.label, "c": report::gr(&k.c), "annihilator": report::search(&k.result)})).collect()
    };
    let fams: Vec<Value> = families.iter().map(family_json).collect();
    Ok(match out {
        SeparateOutcome::Certified(cert) => {
            let p = to_original_coordinates(&cert.annihilator.poly, &map)?;
            let a = crate::engine::annihilator::Annihilator { q: p.degree_in(0), k: p.total_degree(), poly: p, ..cert.annihilator.clone() };
            (
                EXIT_PASS,
                json!({
                    "status": "certified",
                    "order": c.order,
                    "families": fams,
                    "curves": curves_json(&cert.curves),
                    "stages": cert.stages.iter().map(report::search).collect::<Vec<_>>(),
                    "chart_exact": cert.chart_exact,
                    "annihilator": report::annihilator(&a),
                }),
            )
        }
        SeparateOutcome::CurveFailed { family, label, c: cv, searched, curves } => (
            EXIT_NOT_FOUND,
            json!({"status": "not_found", "family": family + 1, "label": label, "c": report::gr(&cv), "searched": report::searched(&searched), "curves": curves_json(&curves)}),
        ),
        SeparateOutcome::FinalNotFound { searched, curves } => (
            EXIT_NOT_FOUND,
            json!({"status": "not_found", "stage": "final", "searched": report::searched(&searched), "curves": curves_json(&curves)}),
        ),
    })
}

fn name_of(cmd: &Cmd) -> (&'static str, &PathBuf) {
    match cmd {
        Cmd::CheckManifold { file } => ("check-manifold", file),
        Cmd::Levi { file } => ("levi", file),
        Cmd::TangentOps { file } => ("tangent-ops", file),
        Cmd::Segre { file } => ("segre", file),
        Cmd::CheckMap { file } => ("check-map", file),
        Cmd::ExtendMap { file } => ("extend-map", file),
        Cmd::Annihilator { file } => ("annihilator", file),
        Cmd::SeparateAlg { file } => ("separate-alg", file),
    }
}

pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput { code, stdout: String::new(), stderr: text }
            } else {
                CommandOutput { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (name, file) = name_of(&cli.cmd);
    let result: Run = load(file, &cli).and_then(|c| match &cli.cmd {
        Cmd::CheckManifold { .. } => check_manifold(&c),
        Cmd::Levi { .. } => levi(&c),
        Cmd::TangentOps { .. } => tangent_ops(&c),
        Cmd::Segre { .. } => segre(&c),
        Cmd::CheckMap { .. } => check_map(&c),
        Cmd::ExtendMap { .. } => extend(&c),
        Cmd::Annihilator { .. } => annihilator(&c),
        Cmd::SeparateAlg { .. } => separate(&c),
    });
    let (code, body, stderr) = match result {
        Ok((code, body)) => (code, body, String::new()),
        Err(f) => (f.code, json!({"status": f.status, "error": f.msg}), format!("cralg {name}: {}\n", f.msg)),
    };
    let text = report::to_text(&report::envelope(name, body));
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => CommandOutput { code, stdout: String::new(), stderr },
            Err(e) => CommandOutput { code: EXIT_PARSE, stdout: text, stderr: format!("cannot write {}: {e}\n", path.display()) },
        },
        None => CommandOutput { code, stdout: text, stderr },
    }
}
