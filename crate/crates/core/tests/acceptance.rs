//! Acceptance criteria 1-10. Runs without the libtest harness so every
//! criterion prints its verdict line, pass or fail.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use cr_algebraicity::engine::annihilator::{find_annihilator, Search};
use cr_algebraicity::engine::flow::{curvilinear_chart, family_flow};
use cr_algebraicity::engine::separate::{separate_algebraicity, Bounds, LocalFunction, SeparateOutcome};
use cr_algebraicity::io::cli::run_command;
use cr_algebraicity::io::parse::{poly, rational, system_from_strs};
use cr_algebraicity::linalg::Matrix;
use cr_algebraicity::manifold::{levi_operator_matrices, DefiningSystem, LeviData};
use cr_algebraicity::pipeline::{extend_map, hypothesis_report, ExtensionOutcome, Options, Problem};
use cr_algebraicity::poly::{newton_implicit_solve, residual, MultiPolynomial, TruncatedSeries, VarKind, VariableTable};
use cr_algebraicity::segre::families::{curve_families_from_segre, lifted_fields_on_grid, CurveFamily, SegreContext};
use cr_algebraicity::segre::reflection::condition_2_5_check;
use cr_algebraicity::segre::variety::{in_segre, segre_variety};
use cr_algebraicity::tangent::tangent_operators;
use cr_algebraicity::GaussianRational as GR;
use num_traits::{One, Zero};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($c:expr, $($msg:tt)+) => {
        if !$c {
            return Err(format!($($msg)+));
        }
    };
}

fn m0() -> DefiningSystem {
    system_from_strs(2, &["z2 + zb2 + z1*zb1"]).unwrap()
}

fn systems(seed: u64, count: usize, y_affine: bool) -> Vec<DefiningSystem> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let (n, d) = random_dims(&mut r);
            random_system(&mut r, n, d, y_affine)
        })
        .collect()
}

fn c1_tangency() -> Outcome {
    let mut checked = 0;
    for m in systems(1, 20, false).into_iter().chain(systems(2, 20, true)) {
        let ops = tangent_operators(&m).map_err(|e| e.to_string())?;
        ensure!(ops.len() == m.k(), "expected {} operators, got {}", m.k(), ops.len());
        for op in &ops {
            for (l, rho) in m.rho().iter().enumerate() {
                let v = op.apply(rho, false).map_err(|e| e.to_string())?;
                ensure!(v.is_zero(), "T_{} rho_{} = {} for {:?}", op.q + 1, l + 1, v, m.rho().iter().map(|p| p.to_string()).collect::<Vec<_>>());
                checked += 1;
            }
        }
    }
    Ok(format!("40 systems, {checked} identities T_q rho_l = 0"))
}

/// `w` with prescribed CR coordinates and `ρ(w, ζ̄) = 0`.
fn segre_point(m: &DefiningSystem, wx: &[GR], zeta: &[GR]) -> Option<Vec<GR>> {
    let (n, k, d) = (m.n(), m.k(), m.d());
    let st = VariableTable::plain(&(1..=d).map(|j| format!("s{j}")).collect::<Vec<_>>());
    let c = |x: &GR| Some(MultiPolynomial::constant(&st, x.clone()));
    let mut subs: Vec<Option<MultiPolynomial>> = (0..k).map(|i| c(&wx[i])).collect();
    subs.extend((0..d).map(|j| Some(MultiPolynomial::var(&st, j))));
    subs.extend(zeta.iter().map(|x| c(&x.conj())));
    let eqs: Vec<MultiPolynomial> = m.rho().iter().map(|r| r.substitute(&st, &subs).unwrap()).collect();
    let s = solve_affine(&eqs, &st)?;
    let mut w = wx[..k].to_vec();
    w.extend(s);
    debug_assert_eq!(w.len(), n);
    Some(w)
}

/// A point of `M` with the given CR coordinates and imaginary parts.
fn manifold_point(m: &DefiningSystem, x: &[GR], im: &[GR]) -> Option<Vec<GR>> {
    let (k, d) = (m.k(), m.d());
    let st = VariableTable::plain(&(1..=d).map(|j| format!("s{j}")).collect::<Vec<_>>());
    let c = |x: GR| Some(MultiPolynomial::constant(&st, x));
    let mut subs: Vec<Option<MultiPolynomial>> = (0..k).map(|i| c(x[i].clone())).collect();
    for (j, b) in im.iter().enumerate() {
        subs.push(Some(&MultiPolynomial::var(&st, j) + &MultiPolynomial::constant(&st, b * &GR::i())));
    }
    subs.extend((0..k).map(|i| c(x[i].conj())));
    for (j, b) in im.iter().enumerate() {
        subs.push(Some(&MultiPolynomial::var(&st, j) - &MultiPolynomial::constant(&st, b * &GR::i())));
    }
    let eqs: Vec<MultiPolynomial> = m.rho().iter().map(|r| r.substitute(&st, &subs).unwrap()).collect();
    let s = solve_affine(&eqs, &st)?;
    let mut z = x[..k].to_vec();
    z.extend(s.iter().zip(im).map(|(a, b)| a + &(b * &GR::i())));
    Some(z)
}

fn c2_segre_involution() -> Outcome {
    let mut r = rng(3);
    let (mut pairs, mut on_segre, mut on_m, mut diag) = (0, 0, 0, 0);
    for m in systems(2, 20, true) {
        let (n, k, d) = (m.n(), m.k(), m.d());
        for _ in 0..3 {
            let zeta = point(&mut r, n);
            let wx = point(&mut r, k);
            let Some(w) = segre_point(&m, &wx, &zeta) else { continue };
            let q = segre_variety(&m, &zeta).unwrap();
            ensure!(q.contains(&w) && in_segre(&m, &w, &zeta), "constructed point not in Q(zeta)");
            ensure!(in_segre(&m, &zeta, &w), "w in Q(zeta) but zeta not in Q(w)");
            on_segre += 1;
            let mut off = w.clone();
            off[k] = &off[k] + &GR::one();
            ensure!(in_segre(&m, &off, &zeta) == in_segre(&m, &zeta, &off), "involution fails off Q(zeta)");
            let other = point(&mut r, n);
            ensure!(in_segre(&m, &other, &zeta) == in_segre(&m, &zeta, &other), "involution fails on a random pair");
            pairs += 3;
        }
        for _ in 0..2 {
            let x: Vec<GR> = point(&mut r, k);
            let im: Vec<GR> = (0..d).map(|_| small_real(&mut r)).collect();
            let Some(z) = manifold_point(&m, &x, &im) else { continue };
            ensure!(m.contains(&z) && in_segre(&m, &z, &z), "point of M not in its own Segre variety");
            on_m += 1;
            let mut off = z.clone();
            off[k] = &off[k] + &GR::one();
            ensure!(m.contains(&off) == in_segre(&m, &off, &off), "reflexivity fails off M");
            diag += 2;
        }
    }
    ensure!(pairs >= 50 && on_segre >= 25, "only {pairs} pairs ({on_segre} on a Segre variety)");
    ensure!(on_m >= 20, "only {on_m} points of M");
    Ok(format!("{pairs} pairs ({on_segre} with w in Q(zeta)), {diag} diagonal checks ({on_m} on M)"))
}

fn series_t(order: u32) -> (cr_algebraicity::poly::Table, TruncatedSeries, TruncatedSeries) {
    let t = VariableTable::plain(&["t"]);
    let one = TruncatedSeries::one(&t, order);
    let tv = TruncatedSeries::var(&t, 0, order);
    (t, one, tv)
}

fn c3_annihilator_oracle() -> Outcome {
    const N: u32 = 32;
    let (t, one, tv) = series_t(N);
    let mut r = rng(4);
    let mut found = 0;
    for _ in 0..5 {
        let deg = |r: &mut rand_chacha::ChaCha8Rng| r.gen_range(0..=3u32);
        let rand_poly = |r: &mut rand_chacha::ChaCha8Rng, d: u32| -> MultiPolynomial {
            MultiPolynomial::from_terms(&t, (0..=d).map(|e| (vec![e], small(r)))).unwrap()
        };
        let (dp, dq) = (deg(&mut r), deg(&mut r));
        let p = rand_poly(&mut r, dp);
        let mut q = rand_poly(&mut r, dq);
        if q.constant_term().is_zero() {
            q = &q + &MultiPolynomial::one(&t);
        }
        let f = p.to_series(N).div(&q.to_series(N)).unwrap();
        let a = match find_annihilator(&f, 3, 3).unwrap() {
            Search::Found(a) => a,
            Search::NotFound { .. } => return Err(format!("no annihilator for ({p})/({q})")),
        };
        ensure!(a.q == 1 && a.k <= dp.max(dq), "({p})/({q}) gave degrees ({}, {})", a.q, a.k);
        // P = A(t) f - B(t) with B/A = p/q.
        let at = a.poly.table().clone();
        let coef = |e: u32| -> MultiPolynomial {
            let c = a.poly.coefficient_of(0, e);
            MultiPolynomial::from_terms(&t, c.terms().map(|(m, c)| (vec![m.exps()[1]], c.clone()))).unwrap()
        };
        let (aa, bb) = (coef(1), -&coef(0));
        ensure!(&aa * &p == &bb * &q, "P = {} does not represent ({p})/({q})", a.poly);
        let _ = at;
        found += 1;
    }
    let cases: Vec<(&str, TruncatedSeries, &str)> = vec![
        ("sqrt(1+t)", (&one + &tv).pow_ratio(1, 2).unwrap(), "f^2 - 1 - t"),
        ("sqrt(1-4t)", (&one - &tv.scale(&GR::from_int(4))).pow_ratio(1, 2).unwrap(), "f^2 - 1 + 4*t"),
        ("cbrt(1+t)", (&one + &tv).pow_ratio(1, 3).unwrap(), "f^3 - 1 - t"),
        ("1/(1-t)^2", (&one - &tv).pow(2).inverse().unwrap(), "(1 - t)^2*f - 1"),
        ("t/(1+t^2)", tv.div(&(&one + &tv.pow(2))).unwrap(), "(1 + t^2)*f - t"),
    ];
    for (name, f, want) in cases {
        let Search::Found(a) = find_annihilator(&f, 3, 3).unwrap() else { return Err(format!("{name}: not found")) };
        let w = poly(a.poly.table(), want).unwrap();
        ensure!(proportional(&a.poly, &w), "{name}: got {}, expected {want}", a.poly);
        found += 1;
    }
    let e = tv.exp().unwrap();
    match find_annihilator(&e, 3, 3).unwrap() {
        Search::NotFound { searched } => ensure!(searched.last() == Some(&(3, 3)), "exp search ended at {:?}", searched.last()),
        Search::Found(a) => return Err(format!("exp gave {}", a.poly)),
    }
    Ok(format!("{found}/10 minimal polynomials recovered at N = {N}, exp not found within (3, 3)"))
}

fn c4_classical() -> Outcome {
    let zt = VariableTable::complex(2);
    let f = LocalFunction::Rational(rational(&zt, "z1*z2/(1 - z1*z2)").unwrap());
    let fams: Vec<CurveFamily> = (0..2).map(|m| CurveFamily::coordinate_lines(2, m, 12)).collect();
    match separate_algebraicity(&f, "f", &fams, Bounds::default(), 12).map_err(|e| e.to_string())? {
        SeparateOutcome::Certified(c) => {
            let p = &c.annihilator.poly;
            let want = poly(p.table(), "(1 - z1*z2)*f - z1*z2").unwrap();
            ensure!(proportional(p, &want), "got {p}");
            Ok(format!("P = {p}, {} curve checks", c.curves.len()))
        }
        other => Err(format!("{other:?}")),
    }
}

fn c5_end_to_end() -> Outcome {
    let t = VariableTable::complex(2);
    let cases: [(&str, [&str; 2], Vec<GR>, [&str; 2]); 3] = [
        ("identity", ["z1", "z2"], vec![GR::zero(); 2], ["F1 - z1", "F2 - z2"]),
        ("automorphism", ["z1 + 1", "z2 - z1 - 1/2"], vec![GR::zero(); 2], ["F1 - z1 - 1", "F2 - z2 + z1 + 1/2"]),
        ("rational", ["z1/z2", "1/z2"], vec![GR::zero(), GR::i()], ["z2*F1 - z1", "z2*F2 - 1"]),
    ];
    let mut lines = Vec::new();
    for (name, map, p, want) in cases {
        let start = Instant::now();
        let pb = Problem { source: m0(), target: m0(), map: map.iter().map(|s| rational(&t, s).unwrap()).collect(), basepoint: p };
        let out = extend_map(&pb, &Options::default()).map_err(|e| e.to_string())?;
        let ExtensionOutcome::Certified(c) = out else { return Err(format!("{name}: {}", out.to_json())) };
        ensure!(c.report.conditions.iter().all(|k| k.pass == Some(true)), "{name}: a hypothesis check did not pass");
        ensure!(c.graph_checks.len() == 3 && c.graph_checks.iter().all(|g| g.pass), "{name}: graph check failed");
        for (comp, w) in c.components.iter().zip(want) {
            let wp = poly(comp.annihilator.poly.table(), w).unwrap();
            ensure!(proportional(&comp.annihilator.poly, &wp), "{name}: got {}, expected {w}", comp.annihilator.poly);
            ensure!(comp.exact, "{name}: {} not verified exactly", comp.name);
        }
        ensure!(start.elapsed() < Duration::from_secs(60), "{name} took {:?}", start.elapsed());
        lines.push(format!("{name} {:.1}s", start.elapsed().as_secs_f64()));
    }
    Ok(lines.join(", "))
}

fn cli_failure(file: &str) -> Result<String, String> {
    let path = problems_dir().join(file);
    let out = run_command(["cralg", "extend-map", path.to_str().unwrap()]);
    ensure!(out.code == 1, "{file}: exit code {}", out.code);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    Ok(v["failed"].as_str().unwrap_or("").to_string())
}

fn c6_negative_controls() -> Outcome {
    let a = cli_failure("degenerate_cone.crm")?;
    ensure!(a == "Eq (2.3)", "degenerate cone names {a:?}");
    let b = cli_failure("constant_map.crm")?;
    ensure!(b == "Eq (2.5)", "constant map names {b:?}");
    Ok(format!("degenerate cone -> 1 ({a}), constant map -> 1 ({b})"))
}

fn c7_spanning() -> Outcome {
    let grid = [vec![GR::zero()], vec![GR::one()]];
    let v = lifted_fields_on_grid(&SegreContext::new(&m0(), 12).unwrap(), &grid).unwrap();
    ensure!(v.spans && v.rank == 2, "M0 rank {}", v.rank);
    let flat = system_from_strs(2, &["z2 + zb2"]).unwrap();
    let w = lifted_fields_on_grid(&SegreContext::new(&flat, 12).unwrap(), &grid).unwrap();
    ensure!(!w.spans && w.rank == 1, "flat rank {}", w.rank);
    let t = VariableTable::complex(2);
    let pb = Problem { source: flat, target: m0(), map: vec![rational(&t, "z1").unwrap(), rational(&t, "z2").unwrap()], basepoint: vec![GR::zero(); 2] };
    let rep = hypothesis_report(&pb, &Options::default()).unwrap();
    ensure!(!rep.pass(), "flat source passed the hypotheses");
    ensure!(rep.conditions.iter().any(|c| c.name == "Lemma 4.3" && c.pass == Some(false)), "spanning not reported as failed");
    let out = run_command(["cralg", "segre", problems_dir().join("flat_hyperplane.crm").to_str().unwrap()]);
    ensure!(out.code == 1, "segre on the flat hyperplane exits {}", out.code);
    Ok(format!("M0 rank {}, flat rank {} (hypothesis failed)", v.rank, w.rank))
}

fn recombined(levi: &LeviData, a: &Matrix) -> LeviData {
    let d = levi.d();
    let mats = (0..d)
        .map(|j| {
            let mut acc = Matrix::zeros(levi.k(), levi.k());
            for l in 0..d {
                for x in 0..levi.k() {
                    for y in 0..levi.k() {
                        acc[(x, y)] = &acc[(x, y)] + &(&a[(j, l)] * &levi.levi_matrices[l][(x, y)]);
                    }
                }
            }
            acc
        })
        .collect();
    LeviData { basepoint: levi.basepoint.clone(), tangent_basis: levi.tangent_basis.clone(), levi_matrices: mats }
}

fn c8_recombination() -> Outcome {
    let target = system_from_strs(4, &["z3 + zb3 + z1*zb1", "z4 + zb4 + z1*zb2 + z2*zb1"]).unwrap();
    let levi = levi_operator_matrices(&target, &vec![GR::zero(); 4]).unwrap();
    let mut r = rng(8);
    let jac = |col: [i64; 4]| {
        let mut m = Matrix::identity(4);
        for (i, c) in col.iter().enumerate() {
            m[(i, 0)] = GR::from_int(*c);
        }
        m
    };
    let mut jacs = vec![jac([1, 0, 0, 0]), jac([0, 1, 0, 0]), jac([2, -3, 1, 0]), jac([0, 0, 1, 1])];
    for _ in 0..4 {
        jacs.push(Matrix::from_rows((0..4).map(|_| point(&mut r, 4)).collect()));
    }
    let base: Vec<_> = jacs.iter().map(|j| condition_2_5_check(&levi, j, 1)).collect();
    ensure!(base.iter().any(|c| c.pass) && base.iter().any(|c| !c.pass), "controls do not separate pass and fail");
    let mut trials = 0;
    while trials < 10 {
        let a = Matrix::from_rows((0..2).map(|_| point(&mut r, 2)).collect());
        if a.det().is_zero() {
            continue;
        }
        let lt = recombined(&levi, &a);
        for (j, b) in jacs.iter().zip(&base) {
            let c = condition_2_5_check(&lt, j, 1);
            ensure!(c.pass == b.pass && c.rank == b.rank, "verdict changed under recombination");
        }
        trials += 1;
    }
    Ok(format!("{trials} recombinations x {} maps, verdicts unchanged ({} pass)", jacs.len(), base.iter().filter(|c| c.pass).count()))
}

/// Fixed-point iteration `u ← -A⁻¹(Bx + h(x, u))`, one order per step.
fn picard(g: &[MultiPolynomial], unknowns: &[usize], ainv: &Matrix, free: &cr_algebraicity::poly::Table, order: u32) -> Vec<TruncatedSeries> {
    let d = unknowns.len();
    let table = g[0].table().clone();
    let mut u: Vec<TruncatedSeries> = vec![TruncatedSeries::zero(free, order); d];
    for _ in 0..=order {
        let mut subs: Vec<Option<TruncatedSeries>> = vec![None; table.len()];
        for (k, &ix) in unknowns.iter().enumerate() {
            subs[ix] = Some(u[k].clone());
        }
        // g(x, u) - A u is the nonlinear remainder plus the x part.
        let vals: Vec<TruncatedSeries> = g.iter().map(|p| p.substitute_series(free, &subs, order).unwrap()).collect();
        let rest: Vec<TruncatedSeries> = (0..d)
            .map(|j| {
                let mut acc = vals[j].clone();
                for (k, uk) in u.iter().enumerate() {
                    let a = g[j].coeff(&unit(table.len(), unknowns[k]));
                    acc = &acc - &uk.scale(&a);
                }
                acc
            })
            .collect();
        u = (0..d)
            .map(|j| {
                let mut acc = TruncatedSeries::zero(free, order);
                for (k, rk) in rest.iter().enumerate() {
                    acc = &acc - &rk.scale(&ainv[(j, k)]);
                }
                acc
            })
            .collect();
    }
    u
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    (0..n).map(|j| u32::from(j == i)).collect()
}

fn c9_newton() -> Outcome {
    const ORDER: u32 = 16;
    let mut r = rng(9);
    let mut compared = 0;
    for case in 0..20 {
        let d = r.gen_range(1..=2usize);
        let m = r.gen_range(1..=2usize);
        let mut b = VariableTable::builder();
        for i in 1..=m {
            b = b.var(&format!("x{i}"), VarKind::Parameter);
        }
        for j in 1..=d {
            b = b.var(&format!("u{j}"), VarKind::Parameter);
        }
        let table = b.build().unwrap();
        let free = table.subset(&(0..m).collect::<Vec<_>>());
        let unknowns: Vec<usize> = (m..m + d).collect();
        let a = loop {
            let a = Matrix::from_rows((0..d).map(|_| point(&mut r, d)).collect());
            if !a.det().is_zero() {
                break a;
            }
        };
        let g: Vec<MultiPolynomial> = (0..d)
            .map(|j| {
                let mut terms: Vec<(Vec<u32>, GR)> = (0..d).map(|k| (unit(m + d, m + k), a[(j, k)].clone())).collect();
                terms.extend((0..m).map(|i| (unit(m + d, i), small(&mut r))));
                for _ in 0..r.gen_range(1..=4) {
                    let deg = r.gen_range(2..=3);
                    let mut e = vec![0u32; m + d];
                    for _ in 0..deg {
                        e[r.gen_range(0..m + d)] += 1;
                    }
                    terms.push((e, small(&mut r)));
                }
                MultiPolynomial::from_terms(&table, terms).unwrap()
            })
            .collect();
        let w = newton_implicit_solve(&g, &unknowns, &free, ORDER).map_err(|e| format!("case {case}: {e}"))?;
        let res = residual(&g, &unknowns, &free, &w, ORDER).unwrap();
        ensure!(res.iter().all(|x| x.is_zero()), "case {case}: nonzero residual");
        if case % 4 == 0 {
            let p = picard(&g, &unknowns, &a.inverse().unwrap(), &free, ORDER);
            ensure!(p.iter().zip(&w).all(|(x, y)| x == y), "case {case}: Newton and fixed-point solutions differ");
            compared += 1;
        }
    }
    Ok(format!("20 systems, residual 0 mod order {ORDER}, {compared} matched fixed-point iteration"))
}

fn c10_flow() -> Outcome {
    let ctx = SegreContext::new(&m0(), 12).unwrap();
    let v = lifted_fields_on_grid(&ctx, &[vec![GR::zero()], vec![GR::one()]]).unwrap();
    let fams = curve_families_from_segre(&ctx, &v, 12).unwrap();
    for f in &fams {
        let flow = family_flow(f, 12).map_err(|e| e.to_string())?;
        ensure!(flow.group_law_holds().unwrap(), "group law fails for {}", f.label);
    }
    let chart = curvilinear_chart(&fams, 12).unwrap();
    ensure!(chart.round_trip_holds().unwrap(), "inverse(forward(t)) != t");
    ensure!(!chart.jacobian_at_base().det().is_zero(), "chart singular at the base point");
    Ok(format!("{} families, group law and chart round trip at order 12", fams.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome, u64); 10] = [
        (1, "adjugate tangency identity", c1_tangency, 10),
        (2, "Segre reflexivity and involution", c2_segre_involution, 5),
        (3, "annihilator oracle", c3_annihilator_oracle, 30),
        (4, "classical separate algebraicity", c4_classical, 10),
        (5, "hyperquadric end to end", c5_end_to_end, 180),
        (6, "negative controls", c6_negative_controls, 5),
        (7, "Segre spanning", c7_spanning, 5),
        (8, "Levi recombination invariance", c8_recombination, 5),
        (9, "Newton residuals", c9_newton, 10),
        (10, "flow group law and chart", c10_flow, 5),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, f, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str()) || *s == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        let out = match out {
            Ok(d) if secs > budget as f64 => Err(format!("{d}; over the {budget}s budget")),
            o => o,
        };
        match out {
            Ok(d) => println!("criterion {id:>2} PASS  {name} ({secs:.2}s): {d}"),
            Err(e) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({secs:.2}s): {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
