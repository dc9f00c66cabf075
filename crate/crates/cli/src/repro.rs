//! Figure pipelines with fixed parameters.

use std::f64::consts::PI;

use clap::ValueEnum;
use num_complex::Complex64;
use pswedge::factorization::{aaa_fit, lambda_from_integral, lambda_from_rational, DEFAULT_QUADRATURE_NODES};
use pswedge::field_oracle::{evaluate_grid, scattered, wedge_scatterers, FieldKind};
use pswedge::kernel::{rate_ladder, ProblemConfig};
use pswedge::pipeline::Prepared;
use pswedge::wedge::{iterate_observed, scheme_spectral_radius};
use pswedge::Result;
use serde_json::json;

use crate::commands::{rho_sweep, scheme_vs_oracle, write_field};
use crate::config::RunConfig;
use crate::output::{cplx, num, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig10,
    All,
}

/// Coefficients entering the convergence norms.
const NORM_COEFFS: usize = 100;

fn case(k: f64, theta: f64) -> ProblemConfig {
    ProblemConfig::new(k, 0.1, 0.01, 5.0 * PI / 6.0, theta).expect("test configuration is valid")
}

/// The two wedge test cases: `k = 5π, θ_I = 0` and `k = 15π, θ_I = π/2`.
pub fn test_cases() -> [(&'static str, ProblemConfig); 2] {
    [("case1", case(5.0 * PI, 0.0)), ("case2", case(15.0 * PI, 0.5 * PI))]
}

fn kernel_case() -> ProblemConfig {
    ProblemConfig::new(1.0, 1.0, 0.01, 0.5 * PI, 0.0).expect("ks = 1, ka = 0.01 is valid")
}

pub fn run(figure: Figure, out: &Output, seed: Option<u64>) -> Result<()> {
    let with_seed = |cfg: ProblemConfig| {
        let mut run = RunConfig::with_physics(cfg);
        if let Some(seed) = seed {
            run.aaa.seed = seed;
        }
        run
    };
    let all = figure == Figure::All;
    if all || figure == Figure::Fig3 {
        fig3(&out.sub("fig3")?, &with_seed)?;
    }
    if all || figure == Figure::Fig4 {
        fig4(&out.sub("fig4")?, &with_seed)?;
    }
    if all || figure == Figure::Fig5 {
        fig5(&out.sub("fig5")?, &with_seed)?;
    }
    if all || figure == Figure::Fig6 {
        fig6(&out.sub("fig6")?, &with_seed)?;
    }
    if all || figure == Figure::Fig7 {
        fig7(&out.sub("fig7")?, &with_seed)?;
    }
    if all || figure == Figure::Fig8 {
        fig8(&out.sub("fig8")?)?;
    }
    if all || figure == Figure::Fig10 {
        fig10(&out.sub("fig10")?, &with_seed)?;
    }
    Ok(())
}

/// Scattered field of the isolated-face approximation.
fn fig3(out: &Output, with_seed: &impl Fn(ProblemConfig) -> RunConfig) -> Result<()> {
    for (name, cfg) in test_cases() {
        let run = with_seed(cfg);
        let prepared = Prepared::new(&cfg, &run.aaa, run.m)?;
        let (top, bottom) = prepared.isolated(run.m)?;
        let set = wedge_scatterers(&cfg, &top.values, &bottom.values);
        let grid = evaluate_grid(&cfg, &set, &run.grid, FieldKind::Scattered, run.mask())?;
        write_field(out, &format!("{name}_field.csv"), &grid)?;
        out.json(&format!("{name}.json"), &json!({ "figure": "fig3", "config": run }))?;
    }
    Ok(())
}

/// Spectral radius against `α`, varying `k` (left) and `a` (right).
fn fig4(out: &Output, with_seed: &impl Fn(ProblemConfig) -> RunConfig) -> Result<()> {
    let base = case(5.0 * PI, 0.0);
    let sweeps: [(&str, Vec<ProblemConfig>); 2] = [
        (
            "rho_k",
            [1.0, 3.0, 5.0, 7.0].iter().map(|&f| ProblemConfig { k: f * PI, ..base }).collect(),
        ),
        (
            "rho_a",
            [0.002, 0.005, 0.01, 0.02].iter().map(|&a| ProblemConfig { a, ..base }).collect(),
        ),
    ];
    for (name, cfgs) in sweeps {
        let mut rows = Vec::new();
        let mut runs = Vec::new();
        for cfg in cfgs {
            let run = with_seed(cfg);
            let lam = lambda_from_rational(&aaa_fit(&cfg, &run.aaa)?, run.rho_m)?;
            for row in rho_sweep(&cfg, &lam, run.rho_m, &run.sweep_alphas())? {
                rows.push([vec![num(cfg.k), num(cfg.a)], row].concat());
            }
            runs.push(run);
        }
        out.csv(&format!("{name}.csv"), &["k", "a", "alpha", "rho_ab", "rho_ba"], rows)?;
        out.json(&format!("{name}.json"), &json!({ "figure": "fig4", "configs": runs }))?;
    }
    Ok(())
}

fn norm_diff(x: &[Complex64], y: &[Complex64], n: usize) -> f64 {
    x.iter().zip(y).take(n).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// `‖A(j) - A(50)‖∞` and `‖B(j) - B(50)‖∞` over the first coefficients, with `ρ^j`.
fn fig5(out: &Output, with_seed: &impl Fn(ProblemConfig) -> RunConfig) -> Result<()> {
    for (name, cfg) in test_cases() {
        let run = with_seed(cfg);
        let prepared = Prepared::new(&cfg, &run.aaa, run.m)?;
        let (top, bottom) = prepared.isolated(run.m)?;
        let mats = prepared.matrices(run.m)?;
        let mut iterates = Vec::new();
        let state = iterate_observed(&mats, &top, &bottom, run.j_max, 0.0, |_, a, b| {
            iterates.push((a[..=NORM_COEFFS].to_vec(), b[..NORM_COEFFS].to_vec()));
        })?;
        let radius = scheme_spectral_radius(&mats)?;
        let (fa, fb) = iterates.last().cloned().unwrap_or_default();
        let rows = iterates.iter().enumerate().map(|(j, (a, b))| {
            vec![
                j.to_string(),
                num(norm_diff(a, &fa, NORM_COEFFS + 1)),
                num(norm_diff(b, &fb, NORM_COEFFS)),
                num(radius.rho_ab.powi(j as i32)),
            ]
        });
        out.csv(&format!("{name}_convergence.csv"), &["j", "err_a", "err_b", "rho_j"], rows)?;
        out.json(
            &format!("{name}.json"),
            &json!({ "figure": "fig5", "rhoAB": radius.rho_ab, "rhoBA": radius.rho_ba, "iterations": state.iteration, "config": run }),
        )?;
    }
    Ok(())
}

/// Iterative scheme against the dense 61-scatterer oracle.
fn fig6(out: &Output, with_seed: &impl Fn(ProblemConfig) -> RunConfig) -> Result<()> {
    for (name, cfg) in test_cases() {
        let mut run = with_seed(cfg);
        run.j_max = 25;
        let (scheme, oracle, c) = scheme_vs_oracle(&run, false)?;
        write_field(out, &format!("{name}_scheme.csv"), &scheme)?;
        write_field(out, &format!("{name}_oracle.csv"), &oracle)?;
        out.json(
            &format!("{name}.json"),
            &json!({ "figure": "fig6", "rel_l2": c.rel_l2, "max_abs": c.max_abs, "config": run }),
        )?;
    }
    Ok(())
}

/// Difference between the 25th iterate and the isolated approximation, and the
/// error of `Re Φ(3s/2, θ)` over the first iterations.
fn fig7(out: &Output, with_seed: &impl Fn(ProblemConfig) -> RunConfig) -> Result<()> {
    let (_, cfg) = test_cases()[0];
    let mut run = with_seed(cfg);
    run.j_max = 25;
    let prepared = Prepared::new(&cfg, &run.aaa, run.m)?;
    let (top, bottom) = prepared.isolated(run.m)?;
    let mats = prepared.matrices(run.m)?;
    let mut iterates = Vec::new();
    iterate_observed(&mats, &top, &bottom, run.j_max, 0.0, |_, a, b| iterates.push((a.to_vec(), b.to_vec())))?;
    let (fa, fb) = iterates.last().cloned().unwrap_or_default();
    let da: Vec<Complex64> = fa.iter().zip(&top.values).map(|(x, y)| x - y).collect();
    let db: Vec<Complex64> = fb.iter().zip(&bottom.values).map(|(x, y)| x - y).collect();
    let full = wedge_scatterers(&cfg, &fa, &fb);
    let mut grid = evaluate_grid(&cfg, &wedge_scatterers(&cfg, &da, &db), &run.grid, FieldKind::Scattered, 0.0)?;
    let mask = evaluate_grid(&cfg, &full, &run.grid, FieldKind::Incident, run.mask())?.mask;
    grid.merge_mask(&mask)?;
    write_field(out, "difference.csv", &grid)?;

    let r = 1.5 * cfg.s;
    let thetas: Vec<f64> = (0..8).map(|i| PI * i as f64 / 4.0).collect();
    let reference: Vec<f64> = thetas
        .iter()
        .map(|&t| scattered(&cfg, &full, [r * t.cos(), r * t.sin()]).map(|v| v.re))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (j, (a, b)) in iterates.iter().enumerate().take(11) {
        let set = wedge_scatterers(&cfg, a, b);
        for (&t, &want) in thetas.iter().zip(&reference) {
            let got = scattered(&cfg, &set, [r * t.cos(), r * t.sin()])?.re;
            rows.push(vec![j.to_string(), num(t), num(got - want)]);
        }
    }
    out.csv("points.csv", &["j", "theta", "error_re"], rows)?;
    out.json("fig7.json", &json!({ "figure": "fig7", "radius": r, "config": run }))
}

/// Kernel convergence ladder at `ks = 1, ka = 0.01, z = 1`.
fn fig8(out: &Output) -> Result<()> {
    let cfg = kernel_case();
    let ladder = rate_ladder(&cfg)?;
    let mut rows = Vec::new();
    for series in &ladder {
        for ((&l, &v), &e) in series.truncations.iter().zip(&series.values).zip(&series.errors) {
            let [re, im] = cplx(v);
            rows.push(vec![series.method.clone(), l.to_string(), re, im, num(e)]);
        }
    }
    out.csv("ladder.csv", &["method", "L", "re", "im", "error"], rows)?;
    let slopes = ladder.iter().map(|s| vec![s.method.clone(), num(s.slope), num(s.expected_slope)]);
    out.csv("slopes.csv", &["method", "slope", "expected"], slopes)?;
    out.json("fig8.json", &json!({ "figure": "fig8", "config": RunConfig::with_physics(cfg) }))
}

/// `λ_0..λ_1000` from the rational fit and from the integrals.
fn fig10(out: &Output, with_seed: &impl Fn(ProblemConfig) -> RunConfig) -> Result<()> {
    let cfg = kernel_case();
    let run = with_seed(cfg);
    let rational = lambda_from_rational(&aaa_fit(&cfg, &run.aaa)?, run.m)?;
    let integral = lambda_from_integral(&cfg, run.m, DEFAULT_QUADRATURE_NODES)?;
    let mut worst: f64 = 0.0;
    let rows: Vec<Vec<String>> = rational
        .values
        .iter()
        .zip(&integral.values)
        .enumerate()
        .map(|(n, (&r, &i))| {
            worst = worst.max((r - i).norm());
            let [a, b] = cplx(r);
            let [c, d] = cplx(i);
            vec![n.to_string(), a, b, c, d]
        })
        .collect();
    out.csv("lambda.csv", &["n", "re_rational", "im_rational", "re_integral", "im_integral"], rows)?;
    out.json(
        "fig10.json",
        &json!({ "figure": "fig10", "max_abs_diff_over_lambda0": worst / rational.get(0).norm(), "config": run }),
    )
}
