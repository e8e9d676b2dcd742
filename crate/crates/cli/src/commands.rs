use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::json;
use singrev::numfmt::sig17;
use singrev::periodicity::PeriodicityReport;
use singrev::surface::label_surface_singularities;
use singrev::{
    check_periodicity, classify, cross_check, find_singular_points, periodic_constants, revolve,
    ProblemSpec, Profile, SingularPointReport,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg;

/// Writes `contents` to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

/// The spec with `H`, when given, checked against `m = H·l`.
fn audited_spec(cfg: &RunConfig) -> Result<ProblemSpec, CliError> {
    let spec = cfg.spec()?;
    spec.audit_h_display(cfg.tol.zero)?;
    Ok(spec)
}

fn profile(cfg: &RunConfig) -> Result<Profile, CliError> {
    Ok(Profile::with_tolerances(audited_spec(cfg)?, cfg.tol)?)
}

pub fn trace(cfg: &RunConfig) -> Result<String, CliError> {
    let samples = profile(cfg)?.trace(cfg.samples)?;
    let mut out = String::from("t,x,y,phi,eta,F,G,l\n");
    for s in &samples {
        let row = [s.t, s.x, s.y, s.phi, s.eta, s.f, s.g, s.l].map(sig17);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn singular_reports(spec: &ProblemSpec, cfg: &RunConfig) -> Result<Vec<SingularPointReport>, CliError> {
    find_singular_points(spec, &cfg.tol)?
        .into_iter()
        .map(|p| classify(spec, p, &cfg.tol).map_err(CliError::from))
        .collect()
}

/// Human-readable summary and the JSON report.
pub fn singularities(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let profile = profile(cfg)?;
    let spec = profile.spec();
    let reports = singular_reports(spec, cfg)?;
    let mut text = String::new();
    let mut points = Vec::new();
    if reports.is_empty() {
        let _ = writeln!(text, "no singular points in [{}, {}]", spec.t_min, spec.t_max);
    }
    for r in &reports {
        let kind = if r.is_front { "front" } else { "frontal not front" };
        let check = cross_check(&profile, r.p);
        let verdict = match &check {
            Ok(c) if c.agree => "agree".to_string(),
            Ok(c) => format!("DISAGREE, curve jet gives {}", c.by_curve_jet.class.label()),
            Err(e) => format!("unavailable: {e}"),
        };
        let _ = writeln!(
            text,
            "p = {}: {}, {kind}, {} (cross-check: {verdict})",
            sig17(r.p),
            r.cusp_class.label(),
            r.surface_label
        );
        for w in &r.warnings {
            let _ = writeln!(text, "  warning: {w}");
        }
        points.push(json!({
            "report": r,
            "cross_check": check.as_ref().ok(),
            "cross_check_error": check.as_ref().err().map(|e| e.to_string()),
        }));
    }
    let doc = json!({
        "t_min": spec.t_min,
        "t_max": spec.t_max,
        "points": points,
    });
    Ok((text, to_json(&doc)))
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn periodicity_text(r: &PeriodicityReport) -> String {
    let mut text = String::new();
    let rows = [
        ("L", sig17(r.period)),
        ("eta(L)", sig17(r.eta_l)),
        ("F(L)", sig17(r.f_l)),
        ("G(L)", sig17(r.g_l)),
        ("branch", format!("{:?}", r.branch)),
        ("phi0", sig17(r.phi0)),
        ("residual", sig17(r.residual)),
        ("threshold", sig17(r.threshold)),
        ("condition_residual", sig17(r.condition_residual)),
        ("periodic", r.periodic.to_string()),
    ];
    for (k, v) in rows {
        let _ = writeln!(text, "{k} = {v}");
    }
    if let Some(t) = r.translation {
        let _ = writeln!(text, "T = {}", sig17(t));
    }
    for w in &r.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    text
}

pub fn periodicity(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let spec = audited_spec(cfg)?;
    let report = check_periodicity(&spec, cfg.period()?, &cfg.tol)?;
    let doc = serde_json::to_value(&report).expect("report serializes");
    Ok((periodicity_text(&report), to_json(&doc)))
}

pub fn solve_constants(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let period = cfg.period()?;
    match periodic_constants(&cfg.l, &cfg.m, period, &cfg.tol)? {
        Some((c1, c2)) => Ok((
            format!("c1 = {}\nc2 = {}\n", sig17(c1), sig17(c2)),
            to_json(&json!({ "L": period, "c1": c1, "c2": c2 })),
        )),
        None => Ok((
            "no constants: 1 - cos eta(L) = 0, so periodicity does not depend on c1, c2\n".into(),
            to_json(&json!({ "L": period, "c1": null, "c2": null })),
        )),
    }
}

pub fn plot(cfg: &RunConfig) -> Result<String, CliError> {
    let profile = profile(cfg)?;
    let samples = profile.trace(cfg.samples)?;
    let marks = find_singular_points(profile.spec(), &cfg.tol)?
        .into_iter()
        .map(|p| profile.point(p).map(|s| (s.x, s.y)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(svg::render(&samples, &marks))
}

pub fn mesh(cfg: &RunConfig) -> Result<String, CliError> {
    let profile = profile(cfg)?;
    let samples = profile.trace(cfg.samples)?;
    let mut mesh = revolve(&samples, cfg.n_theta)?;
    let reports = singular_reports(profile.spec(), cfg)?;
    mesh.annotate(label_surface_singularities(&reports));
    Ok(mesh.to_obj_string())
}
