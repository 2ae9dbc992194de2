//! Subcommand implementations; each returns a complete run report.

use std::path::Path;

use serde::Serialize;
use soliton_core::closed_forms::{
    grim_reaper_jet, lorentz_profile_jet, ClosedFormError, GrimReaperParams, LorentzCase, LorentzProfileParams,
};
use soliton_core::geometry::{residual_graph, FuncJet, Jet2, ResidualMode, Vector3};
use soliton_core::ode::{bowl_residuals, integrate_adaptive, integrate_rk4, shoot_bowl, system, Termination};
use soliton_core::probe::{
    build_objective, probe_run, AnsatzSpec, Family, NmConfig, Structure, VelocitySpec, DEFAULT_GRID,
};
use soliton_symbolic::replay::{
    replay_all, replay_theorem1, replay_theorem2, replay_theorem2_brackets, replay_theorem3,
};
use soliton_symbolic::replay::{Subcase, Theorem3Case};
use soliton_symbolic::{Report, Verdict};

use crate::args::{
    BowlArgs, ExportArgs, FamilyArg, GrimArgs, LorentzArgs, Method, ProbeArgs, ResidualArgs, Stepping, StructureArg,
    VerifyArgs,
};
use crate::config::{config_hash, linspace, SurfaceConfig, SurfaceKind, DEFAULT_TOLERANCE};
use crate::report::{render, write_file, RunReport, Table};
use crate::CliError;

/// Radius below which a bowl trajectory is compared with `u0 + v3 r^2 / 2`.
pub const AXIS_RADIUS: f64 = 0.05;
/// Curvature floor used by homothetical probes unless one is given.
pub const DEFAULT_FLOOR: f64 = 0.1;
/// Slope cap used by every probe unless one is given.
pub const DEFAULT_CAP: f64 = 10.0;

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

/// Largest magnitude; a NaN counts as infinitely large.
fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m: f64, v| if v.is_nan() { f64::INFINITY } else { m.max(v.abs()) })
}

pub fn residual(a: &ResidualArgs, command: &str) -> Result<RunReport, CliError> {
    let bytes = read(&a.config)?;
    let cfg = SurfaceConfig::from_slice(&bytes)?;
    let surface = cfg.compile()?;
    let v = Vector3::from_array(a.velocity.unwrap_or(cfg.velocity));
    let tol = a.tol.or(cfg.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage(format!("tolerance {tol} must be non-negative")));
    }
    let mut report = RunReport::new(command);
    report.config_hash = Some(config_hash(&bytes));
    let mut columns = surface.coordinates().to_vec();
    columns.push("residual");
    let mut table = Table::new(&columns, [0, columns.len() - 1]);
    let (mut worst, mut worst_at, mut sum_sq) = (0.0f64, Vec::new(), 0.0);
    for p in surface.grid(a.grid as usize) {
        let r = surface.residual(&p, v)?;
        if !r.is_finite() {
            return Err(CliError::Domain(format!("residual is not finite at {p:?}")));
        }
        if r.abs() > worst || worst_at.is_empty() {
            worst = r.abs();
            worst_at = p.clone();
        }
        sum_sq += r * r;
        let mut row = p;
        row.push(r);
        table.rows.push(row);
    }
    let n = table.rows.len();
    report.stat("points", n as f64);
    report.stat("max_abs_residual", worst);
    report.stat("mean_square_residual", sum_sq / n as f64);
    report.stat("tolerance", tol);
    for (name, value) in surface.coordinates().iter().zip(&worst_at) {
        report.stat(&format!("worst_{name}"), *value);
    }
    for (name, value) in ["v1", "v2", "v3"].iter().zip(v.to_array()) {
        report.stat(name, value);
    }
    if a.velocity.is_some() {
        report.notes.push("velocity taken from the command line".into());
    }
    let what = match cfg.kind {
        SurfaceKind::LorentzCylinder => "max |cylinder residual|",
        _ => "max |H - <N, v>|",
    };
    report.verdict(what, worst <= tol, format!("{worst:.3e} over {n} points, tolerance {tol:.1e}"));
    report.table = Some(table);
    Ok(report)
}

fn closed_form_error(e: ClosedFormError) -> CliError {
    CliError::Domain(e.to_string())
}

fn check_stepping(s: &Stepping, s0: f64, s1: f64) -> Result<(), CliError> {
    if s0.is_nan() || s1.is_nan() || s0 >= s1 {
        return Err(CliError::Usage(format!("need s0 < s1, got {s0} and {s1}")));
    }
    if !(s.h > 0.0 && s.step_tol > 0.0 && s.tol >= 0.0) {
        return Err(CliError::Usage("step sizes and tolerances must be positive".into()));
    }
    Ok(())
}

/// Integrates `u'' = rhs(u')` from the closed-form data at `s0` and tabulates
/// `(s, u, u', u - closed)` on the output grid.
fn profile_table(
    closed: &dyn Fn(f64) -> Result<FuncJet, ClosedFormError>,
    rhs: impl Fn(f64) -> f64,
    s0: f64,
    s1: f64,
    st: &Stepping,
) -> Result<Table, CliError> {
    let sys = system(2, |_t, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = rhs(y[1]);
    });
    let start = closed(s0).map_err(closed_form_error)?;
    let mut y = vec![start.value, start.d1];
    let mut table = Table::new(&["s", "u", "u'", "residual"], [0, 1]);
    let grid = linspace(s0, s1, st.grid as usize);
    for (i, &s) in grid.iter().enumerate() {
        if i > 0 {
            let t0 = grid[i - 1];
            let tr = match st.method {
                Method::Rk4 => integrate_rk4(&sys, t0, &y, s, st.h)?,
                Method::Adaptive => integrate_adaptive(&sys, t0, &y, s, st.step_tol)?,
            };
            if tr.termination != Termination::SpanEnd {
                return Err(CliError::Domain(format!(
                    "integration stopped ({:?}) near s = {}",
                    tr.termination,
                    tr.last().t
                )));
            }
            y = tr.last().y.clone();
        }
        let exact = closed(s).map_err(closed_form_error)?;
        table.rows.push(vec![s, y[0], y[1], y[0] - exact.value]);
    }
    Ok(table)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Rk4 => "rk4",
        Method::Adaptive => "adaptive",
    }
}

fn finish_profile(report: &mut RunReport, table: Table, st: &Stepping, closed_residual: f64) {
    let dev = max_abs(table.rows.iter().map(|r| r[3]));
    report.stat("rows", table.rows.len() as f64);
    report.stat("max_abs_deviation", dev);
    report.stat("closed_form_residual", closed_residual);
    report.stat("tolerance", st.tol);
    report
        .notes
        .push(format!("method {}; residual column is integrated u minus the closed form", method_name(st.method)));
    report.verdict("max |u - closed form|", dev <= st.tol, format!("{dev:.3e}, tolerance {:.1e}", st.tol));
    report.verdict(
        "closed form solves the equation",
        closed_residual <= DEFAULT_TOLERANCE,
        format!("max residual {closed_residual:.3e}, tolerance {DEFAULT_TOLERANCE:.1e}"),
    );
    report.table = Some(table);
}

pub fn grim_reaper(a: &GrimArgs, command: &str) -> Result<RunReport, CliError> {
    check_stepping(&a.stepping, a.s0, a.s1)?;
    let p = GrimReaperParams { k: a.k, a: a.a, b: a.b, theta: 0.0 };
    let closed = |s: f64| grim_reaper_jet(&p, s);
    let table = profile_table(&closed, |u1| p.k * (1.0 + u1 * u1), a.s0, a.s1, &a.stepping)?;
    let v = Vector3::new(0.0, 0.0, p.speed());
    let mut worst = 0.0f64;
    for row in &table.rows {
        let g = closed(row[0]).map_err(closed_form_error)?;
        let j = Jet2::translation(&FuncJet::constant(0.0, 0.0), &g);
        worst = worst.max(residual_graph(&j, v, ResidualMode::Normalized).abs());
    }
    let mut report = RunReport::new(command);
    report.stat("k", p.k);
    report.stat("v3", v.z);
    finish_profile(&mut report, table, &a.stepping, worst);
    Ok(report)
}

/// Default `(a, s0, s1)` keeping each profile away from its singularities.
fn lorentz_defaults(case: LorentzCase) -> (f64, f64, f64) {
    match case {
        LorentzCase::SpacelikeCosh => (0.0, -0.5, 0.5),
        LorentzCase::SpacelikeSinh => (1.0, 0.0, 0.5),
        LorentzCase::TimelikeCos => (0.0, -0.3, 0.3),
    }
}

pub fn lorentz(a: &LorentzArgs, command: &str) -> Result<RunReport, CliError> {
    let case = LorentzCase::parse(&a.case).ok_or_else(|| {
        CliError::Usage(format!("unknown case {:?} (spacelike-cosh, spacelike-sinh, timelike-cos)", a.case))
    })?;
    let (da, ds0, ds1) = lorentz_defaults(case);
    let (s0, s1) = (a.s0.unwrap_or(ds0), a.s1.unwrap_or(ds1));
    check_stepping(&a.stepping, s0, s1)?;
    let p = LorentzProfileParams { case, a: a.a.unwrap_or(da), b: a.b };
    let v = a.velocity.map(Vector3::from_array).unwrap_or(case.velocity());
    let closed = |s: f64| lorentz_profile_jet(&p, s);
    let table = profile_table(&closed, |u1| case.ode_rhs(u1, v), s0, s1, &a.stepping)?;
    let mut worst = 0.0f64;
    for row in &table.rows {
        let j = closed(row[0]).map_err(closed_form_error)?;
        worst = worst.max((j.d2 - case.ode_rhs(j.d1, v)).abs());
    }
    let mut report = RunReport::new(command);
    for (name, value) in ["v1", "v2", "v3"].iter().zip(v.to_array()) {
        report.stat(name, value);
    }
    report.notes.push(format!("profile {}", case.name()));
    finish_profile(&mut report, table, &a.stepping, worst);
    Ok(report)
}

pub fn bowl(a: &BowlArgs, command: &str) -> Result<RunReport, CliError> {
    if !(a.step_tol > 0.0 && a.tol >= 0.0 && a.axis_tol >= 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    let tr = shoot_bowl(a.u0, a.v3, a.rmax, a.step_tol)?;
    let mut table = Table::new(&["r", "u", "u'"], [0, 1]);
    table.rows = tr.samples.iter().map(|s| vec![s.t, s.y[0], s.y[1]]).collect();
    let defect = max_abs(bowl_residuals(&tr, a.v3).into_iter().map(|r| r.1));
    let axis =
        max_abs(tr.samples.iter().filter(|s| s.t <= AXIS_RADIUS).map(|s| s.y[0] - (a.u0 + a.v3 * s.t * s.t / 2.0)));
    let monotone = table.rows.windows(2).all(|w| w[1][2] >= w[0][2]);
    let mut report = RunReport::new(command);
    report.stat("samples", table.rows.len() as f64);
    report.stat("r_end", tr.last().t);
    report.stat("max_ode_defect", defect);
    report.stat("max_axis_deviation", axis);
    report.stat("slope_monotone", if monotone { 1.0 } else { 0.0 });
    report.verdict(
        "trajectory reaches rmax",
        tr.termination == Termination::SpanEnd,
        format!("{:?} at r = {}", tr.termination, tr.last().t),
    );
    report.verdict("max pointwise ODE defect", defect <= a.tol, format!("{defect:.3e}, tolerance {:.1e}", a.tol));
    report.verdict(
        "agreement with u0 + v3 r^2 / 2 for r <= 0.05",
        axis <= a.axis_tol,
        format!("{axis:.3e}, tolerance {:.1e}", a.axis_tol),
    );
    report.table = Some(table);
    Ok(report)
}

fn select_reports(a: &VerifyArgs) -> Result<Vec<Report>, CliError> {
    if a.all {
        return Ok(replay_all()?);
    }
    let sub = a.subcase.as_deref();
    Ok(match (a.theorem, sub) {
        (Some(1), None) => vec![replay_theorem1()?],
        (Some(1), Some(s)) => return Err(CliError::Usage(format!("theorem 1 has no subcase {s:?}"))),
        (Some(2), None) => {
            let mut out = vec![replay_theorem2_brackets()?];
            for s in Subcase::ALL {
                out.push(replay_theorem2(s)?);
            }
            out
        }
        (Some(2), Some("brackets")) => vec![replay_theorem2_brackets()?],
        (Some(2), Some(s)) => vec![replay_theorem2(s.parse::<Subcase>().map_err(CliError::Usage)?)?],
        (Some(3), None) => Theorem3Case::ALL.into_iter().map(replay_theorem3).collect::<Result<_, _>>()?,
        (Some(3), Some(s)) => vec![replay_theorem3(s.parse::<Theorem3Case>().map_err(CliError::Usage)?)?],
        _ => return Err(CliError::Usage("pass --theorem 1|2|3 or --all".into())),
    })
}

pub fn verify(a: &VerifyArgs, command: &str) -> Result<RunReport, CliError> {
    let reports = select_reports(a)?;
    let mut report = RunReport::new(command);
    let count = |v: Verdict| reports.iter().flat_map(|r| &r.checks).filter(|c| c.verdict == v).count() as f64;
    report.stat("checks", reports.iter().map(|r| r.checks.len()).sum::<usize>() as f64);
    report.stat("exact", count(Verdict::Exact));
    report.stat("up_to_constant", count(Verdict::UpToConstant));
    report.stat("info", count(Verdict::Info));
    report.stat("mismatches", count(Verdict::Mismatch));
    for r in &reports {
        report.transcript.push_str(&r.transcript());
        let flagged: Vec<String> = r
            .checks
            .iter()
            .filter(|c| c.verdict == Verdict::UpToConstant)
            .map(|c| format!("{} by {}", c.name, c.constant.as_deref().unwrap_or("?")))
            .collect();
        let detail = if flagged.is_empty() {
            format!("{} checks", r.checks.len())
        } else {
            format!("{} checks; up to constant: {}", r.checks.len(), flagged.join(", "))
        };
        report.verdict(r.title.clone(), r.passed(), detail);
    }
    Ok(report)
}

#[derive(Serialize)]
struct ProbeSettings<'a> {
    ansatz: &'a AnsatzSpec,
    restarts: usize,
    seed: u64,
    nm: &'a NmConfig,
}

fn seed_from_env(default: u64) -> Result<(u64, bool), CliError> {
    match std::env::var("SOLITON_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(|v| (v, true))
            .map_err(|_| CliError::Usage(format!("SOLITON_SEED={s:?} is not an unsigned integer"))),
        Err(_) => Ok((default, false)),
    }
}

pub fn probe(a: &ProbeArgs, command: &str) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command);
    let structure = match a.structure {
        StructureArg::Translation => Structure::Translation,
        StructureArg::AffineTranslation => Structure::AffineTranslation { c: a.shear },
        StructureArg::SpaceTranslation => Structure::SpaceTranslation,
        StructureArg::Homothetical => Structure::Homothetical,
    };
    let family = match a.family {
        FamilyArg::Polynomial => Family::Polynomial { degree: a.degree },
        FamilyArg::Spline => Family::CubicSpline { knots: a.degree },
    };
    let default_floor = (a.structure == StructureArg::Homothetical).then_some(DEFAULT_FLOOR);
    let floor = match (a.floor, default_floor) {
        (Some(f), _) => (f > 0.0).then_some(f),
        (None, Some(f)) => {
            report.notes.push(format!("curvature floor {f} (tool default)"));
            Some(f)
        }
        (None, None) => None,
    };
    let cap = match a.cap {
        Some(c) => (c > 0.0).then_some(c),
        None => {
            report.notes.push(format!("slope cap W <= {DEFAULT_CAP} (tool default)"));
            Some(DEFAULT_CAP)
        }
    };
    let spec = AnsatzSpec {
        family,
        structure,
        x_domain: a.x_domain,
        y_domain: a.y_domain,
        velocity: a.velocity.map(|v| VelocitySpec::Fixed(Vector3::from_array(v))).unwrap_or(VelocitySpec::Free),
        curvature_floor: floor,
        slope_cap: cap,
    };
    let (seed, from_env) = seed_from_env(a.seed)?;
    if from_env {
        report.notes.push(format!("seed {seed} from SOLITON_SEED"));
    }
    let nm = NmConfig { max_evals: a.max_evals, ..NmConfig::default() };
    let settings = serde_json::to_vec(&ProbeSettings { ansatz: &spec, restarts: a.restarts, seed, nm: &nm })
        .map_err(|e| CliError::Usage(e.to_string()))?;
    report.config_hash = Some(config_hash(&settings));
    let result = probe_run(&spec, a.restarts, seed, &nm)?;
    let obj = build_objective(&spec, DEFAULT_GRID)?;
    report.notes.push("probe: a residual search over a finite ansatz, not an existence or nonexistence proof".into());
    report.stat("best_objective", result.best_objective);
    report.stat("best_penalty", result.best_penalty);
    report.stat("evaluations", result.evaluations as f64);
    report.stat("restart_index", result.restart_index as f64);
    report.stat("restarts", a.restarts as f64);
    report.stat("seed", seed as f64);
    report.stat("max_w", obj.max_slope_factor(&result.best_params));
    report.stat("worst_restart_objective", result.restart_minima.iter().cloned().fold(0.0, f64::max));
    if let Some(t) = a.expect_above {
        let ok = result.best_objective >= t;
        report.verdict("best objective >= threshold", ok, format!("{:.3e} vs {t:.1e}", result.best_objective));
    }
    if let Some(t) = a.expect_below {
        let ok = result.best_objective <= t;
        report.verdict("best objective <= threshold", ok, format!("{:.3e} vs {t:.1e}", result.best_objective));
    }
    let mut table = Table::new(&["step", "restart", "iteration", "objective"], [0, 3]);
    table.rows = result
        .trace
        .iter()
        .enumerate()
        .map(|(i, t)| vec![i as f64, t.restart as f64, t.iteration as f64, t.objective])
        .collect();
    report.table = Some(table);
    Ok(report)
}

pub fn export(a: &ExportArgs) -> Result<(), CliError> {
    let bytes = read(&a.report)?;
    let report: RunReport =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Config(format!("{}: {e}", a.report.display())))?;
    let text = render(&report, a.format, a.column.as_deref())?;
    write_file(&a.out, &text)
}
