//! One function per subcommand; each writes its CSV files and a JSON sidecar
//! carrying the configuration of the run.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use pswedge::arrays::{semi_coeffs, semi_residual, Face};
use pswedge::factorization::{
    aaa_fit, factor_rational, lambda_from_integral, lambda_from_rational, CauchyFactorization, LambdaCoeffs,
    LambdaSource,
};
use pswedge::field_oracle::{self, direct_oracle, evaluate_grid, foldy_residuals, FieldGrid};
use pswedge::kernel::{kernel, ProblemConfig};
use pswedge::pipeline::{solve_wedge, Prepared, WedgeSolution};
use pswedge::wedge::{bottom_residual, build_matrices, resonance_check, scheme_spectral_radius, top_residual};
use pswedge::{Error, Result};
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{cplx, num, Output};

/// Rows of the coupled and semi-infinite residual checks.
pub const RESIDUAL_ROWS: usize = 100;
/// Radius of the interior circle on which the two factorisations are compared.
const CHECK_RADIUS: f64 = 0.9;
const CHECK_POINTS: usize = 32;

pub fn warn(message: &str) {
    eprintln!("{}", json!({ "warning": message }));
}

/// Abort on a resonance hit unless the caller allows it.
pub fn guard_resonance(run: &RunConfig, allow: bool) -> Result<()> {
    let report = resonance_check(&run.problem()?, &run.resonance_angles());
    if report.is_resonant() {
        if !allow {
            return Err(Error::Resonance(report));
        }
        warn(&format!("resonant configuration: {report}"));
    }
    Ok(())
}

pub fn lambda(run: &RunConfig, cfg: &ProblemConfig, m: usize) -> Result<LambdaCoeffs> {
    match run.lambda_source {
        LambdaSource::Rational => lambda_from_rational(&aaa_fit(cfg, &run.aaa)?, m),
        LambdaSource::Integral => lambda_from_integral(cfg, m, run.n_quad),
    }
}

pub fn kernel_cmd(run: &RunConfig, out: &Output) -> Result<()> {
    let cfg = run.problem()?;
    let n = run.kernel_samples;
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let t = -PI + TAU * (j as f64 + 0.5) / n as f64;
        let z = Complex64::from_polar(1.0, t);
        let value = kernel(&cfg, z, run.kernel)?;
        let [re, im] = cplx(value);
        rows.push(vec![num(t), re, im]);
    }
    out.csv("kernel.csv", &["t", "re", "im"], rows)?;
    out.json("kernel.json", &json!({ "command": "kernel", "method": run.kernel.label(), "config": run }))
}

pub fn factor_cmd(run: &RunConfig, out: &Output) -> Result<()> {
    let cfg = run.problem()?;
    let rk = aaa_fit(&cfg, &run.aaa)?;
    let factors = factor_rational(&rk, rk.anchor);
    let mut roots = Vec::new();
    for (kind, list) in [
        ("zero_in", &rk.zeros_in),
        ("pole_in", &rk.poles_in),
        ("zero_out", &rk.zeros_out),
        ("pole_out", &rk.poles_out),
    ] {
        for &z in list {
            let [re, im] = cplx(z);
            roots.push(vec![kind.to_string(), re, im]);
        }
    }
    out.csv("factor_roots.csv", &["kind", "re", "im"], roots)?;

    let cauchy = CauchyFactorization::with_anchor(&cfg, run.n_quad, rk.anchor)?;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::with_capacity(CHECK_POINTS);
    for j in 0..CHECK_POINTS {
        let phi = TAU * j as f64 / CHECK_POINTS as f64;
        let z = Complex64::from_polar(CHECK_RADIUS, phi);
        let rational = factors.k_plus(z);
        let integral = cauchy.k_plus(z)?;
        let rel = (rational - integral).norm() / integral.norm();
        worst = worst.max(rel);
        let [a, b] = cplx(rational);
        let [c, d] = cplx(integral);
        rows.push(vec![num(phi), a, b, c, d, num(rel)]);
    }
    out.csv(
        "factor_check.csv",
        &["phi", "re_rational", "im_rational", "re_integral", "im_integral", "rel_diff"],
        rows,
    )?;
    out.json(
        "factor.json",
        &json!({
            "command": "factor",
            "degree": rk.degree(),
            "fit_error": rk.fit_error,
            "reciprocal_defect": rk.reciprocal_defect,
            "anchor": rk.anchor,
            "attempts": rk.attempts,
            "K1": [rk.K1.re, rk.K1.im],
            "cross_validation_max_rel": worst,
            "config": run,
        }),
    )
}

pub fn lambda_cmd(run: &RunConfig, out: &Output) -> Result<()> {
    let cfg = run.problem()?;
    let lam = lambda(run, &cfg, run.m)?;
    let rows = lam.values.iter().enumerate().map(|(n, &l)| {
        let [re, im] = cplx(l);
        vec![n.to_string(), re, im]
    });
    out.csv("lambda.csv", &["n", "re", "im"], rows)?;
    out.json(
        "lambda.json",
        &json!({
            "command": "lambda",
            "source": lam.source,
            "decay": lam.get(lam.order()).norm() / lam.get(0).norm(),
            "config": run,
        }),
    )
}

pub fn semi_cmd(run: &RunConfig, out: &Output, allow: bool) -> Result<()> {
    guard_resonance(run, allow)?;
    let cfg = run.problem()?;
    let prepared = Prepared::new(&cfg, &run.aaa, run.m)?;
    let semi = semi_coeffs(&cfg, &prepared.lambda, &prepared.factors, run.m, Face::Top)?;
    let rows = semi.values.iter().enumerate().map(|(m, &a)| {
        let [re, im] = cplx(a);
        vec![m.to_string(), re, im]
    });
    out.csv("semi.csv", &["m", "re", "im"], rows)?;
    let residual = semi_residual(&cfg, &semi, RESIDUAL_ROWS.min(run.m))?;
    out.json(
        "semi.json",
        &json!({
            "command": "semi",
            "beta": semi.beta,
            "residual_rows": residual.len(),
            "max_residual": residual.iter().copied().fold(0.0, f64::max),
            "config": run,
        }),
    )
}

pub fn rho_cmd(run: &RunConfig, out: &Output) -> Result<()> {
    let base = run.problem()?;
    let lam = lambda(run, &base, run.rho_m)?;
    let rows = rho_sweep(&base, &lam, run.rho_m, &run.sweep_alphas())?;
    out.csv("rho.csv", &["alpha", "rho_ab", "rho_ba"], rows)?;
    out.json("rho.json", &json!({ "command": "rho", "M": run.rho_m, "config": run }))
}

/// `(α, ρ_AB, ρ_BA)` rows; `λ` does not depend on `α`, so one set serves all.
pub fn rho_sweep(base: &ProblemConfig, lam: &LambdaCoeffs, m: usize, alphas: &[f64]) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let cfg = ProblemConfig { alpha, ..*base };
        if cfg.validate().is_err() {
            warn(&format!("skipping alpha = {alpha}: geometry violates sin(alpha) > a/s"));
            continue;
        }
        let radius = scheme_spectral_radius(&build_matrices(&cfg, lam, m)?)?;
        rows.push(vec![num(alpha), num(radius.rho_ab), num(radius.rho_ba)]);
    }
    Ok(rows)
}

pub fn solve(run: &RunConfig, allow: bool) -> Result<(ProblemConfig, Prepared, WedgeSolution)> {
    guard_resonance(run, allow)?;
    let cfg = run.problem()?;
    for w in cfg.warnings() {
        warn(&w);
    }
    let prepared = Prepared::new(&cfg, &run.aaa, run.m)?;
    let solution = solve_wedge(&prepared, run.m, run.j_max, run.tol_iter)?;
    Ok((cfg, prepared, solution))
}

pub fn wedge_cmd(run: &RunConfig, out: &Output, allow: bool) -> Result<()> {
    let (cfg, _, sol) = solve(run, allow)?;
    let radius = scheme_spectral_radius(&sol.mats)?;
    if radius.rho_ab >= 1.0 {
        warn(&format!("spectral radius {} is not below 1; the scheme may not converge", radius.rho_ab));
    }
    let state = &sol.state;
    let coeffs = state
        .a
        .iter()
        .enumerate()
        .map(|(m, &c)| (m as i64, c, "top"))
        .chain(state.b.iter().enumerate().map(|(n, &c)| (-(n as i64) - 1, c, "bottom")))
        .map(|(index, c, face)| {
            let [re, im] = cplx(c);
            vec![index.to_string(), re, im, face.to_string()]
        });
    out.csv("wedge_coeffs.csv", &["index", "re", "im", "face"], coeffs)?;
    let history = state
        .history
        .iter()
        .map(|h| vec![h.iteration.to_string(), num(h.err_a), num(h.err_b)]);
    out.csv("wedge_history.csv", &["j", "delta_a", "delta_b"], history)?;
    let rows = RESIDUAL_ROWS.min(run.m);
    let top = top_residual(&cfg, &state.a, &state.b, rows)?;
    let bottom = bottom_residual(&cfg, &state.a, &state.b, rows)?;
    let last = state.history.last();
    out.json(
        "wedge.json",
        &json!({
            "command": "wedge",
            "rhoAB": radius.rho_ab,
            "rhoBA": radius.rho_ba,
            "iterations": state.iteration,
            "final_delta_a": last.map(|h| h.err_a),
            "final_delta_b": last.map(|h| h.err_b),
            "P": sol.mats.p,
            "max_residual_top": top.iter().copied().fold(0.0, f64::max),
            "max_residual_bottom": bottom.iter().copied().fold(0.0, f64::max),
            "config": run,
        }),
    )
}

pub fn write_field(out: &Output, name: &str, grid: &FieldGrid) -> Result<()> {
    let rows = grid.values.iter().zip(&grid.mask).enumerate().map(|(i, (&v, &masked))| {
        let p = grid.point(i);
        let [re, im] = cplx(v);
        vec![num(p[0]), num(p[1]), re, im, u8::from(masked).to_string()]
    });
    out.csv(name, &["x", "y", "re", "im", "masked"], rows)
}

pub fn field_cmd(run: &RunConfig, out: &Output, allow: bool) -> Result<()> {
    let (cfg, _, sol) = solve(run, allow)?;
    let grid = evaluate_grid(&cfg, &sol.scatterers(&cfg), &run.grid, run.field, run.mask())?;
    write_field(out, "field.csv", &grid)?;
    out.json(
        "field.json",
        &json!({ "command": "field", "kind": run.field, "iterations": sol.state.iteration, "config": run }),
    )
}

pub fn oracle_cmd(run: &RunConfig, out: &Output) -> Result<()> {
    let cfg = run.problem()?;
    let set = direct_oracle(&cfg, run.oracle_n)?;
    let n = run.oracle_n as i64;
    let indices = std::iter::once(0).chain(1..=n).chain((1..=n).map(|i| -i));
    let rows = indices.zip(set.centers.iter().zip(&set.coeffs)).map(|(i, (p, &c))| {
        let [re, im] = cplx(c);
        vec![i.to_string(), num(p[0]), num(p[1]), re, im]
    });
    out.csv("oracle_coeffs.csv", &["index", "x", "y", "re", "im"], rows)?;
    let grid = evaluate_grid(&cfg, &set, &run.grid, run.field, run.mask())?;
    write_field(out, "oracle_field.csv", &grid)?;
    let residual = foldy_residuals(&cfg, &set)?;
    out.json(
        "oracle.json",
        &json!({
            "command": "oracle",
            "scatterers": set.len(),
            "max_row_residual": residual.iter().copied().fold(0.0, f64::max),
            "config": run,
        }),
    )
}

/// Scheme field against the dense oracle on the configured grid, both masked
/// around the centres of either set.
pub fn scheme_vs_oracle(run: &RunConfig, allow: bool) -> Result<(FieldGrid, FieldGrid, field_oracle::Comparison)> {
    let (cfg, _, sol) = solve(run, allow)?;
    let mut scheme = evaluate_grid(&cfg, &sol.scatterers(&cfg), &run.grid, run.field, run.mask())?;
    let oracle_set = direct_oracle(&cfg, run.oracle_n)?;
    let mut oracle = evaluate_grid(&cfg, &oracle_set, &run.grid, run.field, run.mask())?;
    let scheme_mask = scheme.mask.clone();
    oracle.merge_mask(&scheme_mask)?;
    let oracle_mask = oracle.mask.clone();
    scheme.merge_mask(&oracle_mask)?;
    let comparison = field_oracle::compare(&scheme, &oracle)?;
    Ok((scheme, oracle, comparison))
}

pub fn compare_cmd(run: Option<&RunConfig>, files: Option<(&Path, &Path)>, out: &Output, allow: bool) -> Result<()> {
    match (files, run) {
        (Some((a, b)), _) => {
            let ga = read_field(a)?;
            let gb = read_field(b)?;
            let c = field_oracle::compare(&ga, &gb)?;
            let summary = json!({ "command": "compare", "a": a, "b": b, "rel_l2": c.rel_l2, "max_abs": c.max_abs });
            println!("{summary}");
            out.json("compare.json", &summary)
        }
        (None, Some(run)) => {
            let (scheme, oracle, c) = scheme_vs_oracle(run, allow)?;
            write_field(out, "scheme_field.csv", &scheme)?;
            write_field(out, "oracle_field.csv", &oracle)?;
            let summary = json!({ "command": "compare", "rel_l2": c.rel_l2, "max_abs": c.max_abs, "config": run });
            println!("{}", json!({ "rel_l2": c.rel_l2, "max_abs": c.max_abs }));
            out.json("compare.json", &summary)
        }
        (None, None) => Err(Error::Config("compare needs --a and --b, or --config".into())),
    }
}

/// Parse a field CSV written by [`write_field`].
pub fn read_field(path: &Path) -> Result<FieldGrid> {
    let text = std::fs::read_to_string(path)?;
    let bad = |line: usize| Error::Config(format!("{}: malformed field row {line}", path.display()));
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut values = Vec::new();
    let mut mask = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(bad(i));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| bad(i));
        xs.push(parse(cols[0])?);
        ys.push(parse(cols[1])?);
        values.push(Complex64::new(parse(cols[2])?, parse(cols[3])?));
        mask.push(cols[4] == "1");
    }
    if values.is_empty() {
        return Err(Error::Shape(format!("{}: no field rows", path.display())));
    }
    let nx = xs.iter().skip(1).position(|&x| x == xs[0]).map(|p| p + 1).unwrap_or(xs.len());
    if nx < 2 || values.len() % nx != 0 {
        return Err(Error::Shape(format!("{}: not a rectangular grid", path.display())));
    }
    let ny = values.len() / nx;
    Ok(FieldGrid {
        x0: xs[0],
        x1: xs[nx - 1],
        y0: ys[0],
        y1: ys[values.len() - 1],
        nx,
        ny,
        values,
        mask,
    })
}
