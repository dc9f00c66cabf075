//! Coupling matrices between the two wedge faces, the iterative scheme for
//! the wedge scattering coefficients, its spectral radius and the resonance
//! conditions under which the scheme is not applicable.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::arrays::{hankel_row, ArrayCoeffs, Face};
use crate::error::{Error, Result};
use crate::factorization::LambdaCoeffs;
use crate::kernel::ProblemConfig;
use crate::linalg::{spectral_radius, CMatrix};
use crate::specfun::hankel0;

/// Relative size below which `λ_p` no longer enters the inner sums.
pub const LAMBDA_CUTOFF: f64 = 1e-14;
/// Distance to an integer that counts as a resonance.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;
/// Steps over which a tenfold growth of the deltas means divergence.
pub const DIVERGENCE_WINDOW: usize = 5;
pub const DIVERGENCE_GROWTH: f64 = 10.0;

/// Distance between scatterer `m` of one face and scatterer `n` of the other,
/// in units of the spacing: `√(m² + n² - 2mn cos 2α)`.
pub fn lambda_alpha(m: usize, n: usize, alpha: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (m * m + n * n - 2.0 * m * n * (2.0 * alpha).cos()).max(0.0).sqrt()
}

/// Truncated coupling operators: `ma` is `M x (M+1)` and maps top coefficients
/// to bottom ones, `mb` is `(M+1) x M` and maps bottom to top.
#[derive(Clone, Debug)]
pub struct IterationMatrices {
    pub ma: CMatrix,
    pub mb: CMatrix,
    pub m: usize,
    pub p: usize,
}

/// Index of the last `λ_p` with `|λ_p| ≥ LAMBDA_CUTOFF·|λ_0|`, capped at `m`.
pub fn inner_truncation(lam: &LambdaCoeffs, m: usize) -> usize {
    let floor = LAMBDA_CUTOFF * lam.get(0).norm();
    (0..=m.min(lam.order())).rev().find(|&p| lam.get(p).norm() >= floor).unwrap_or(0)
}

/// Assemble both matrices.
///
/// With `H[q][r] = H0(ks Λ(q, r))` and `S[q][n] = Σ_p λ_p H[q][p+n]`, the
/// entries are `C[m][q] = Σ_{n=1}^m λ_{m-n} S[q][n]`, `MA[m][q] = C[m][q]` and
/// `MB[m][q] = C[m][q] + λ_m S[q][0]`.
pub fn build_matrices(cfg: &ProblemConfig, lam: &LambdaCoeffs, m: usize) -> Result<IterationMatrices> {
    cfg.validate()?;
    if m == 0 {
        return Err(Error::Config("truncation M must be positive".into()));
    }
    if lam.values.len() < m + 1 {
        return Err(Error::Shape(format!(
            "{} lambda coefficients needed, got {}",
            m + 1,
            lam.values.len()
        )));
    }
    let p = inner_truncation(lam, m);
    let ks = cfg.ks();
    let width = p + m + 1;
    let l = &lam.values[..=m];

    let mut s = vec![Complex64::default(); (m + 1) * (m + 1)];
    let mut h = vec![Complex64::default(); width];
    for q in 0..=m {
        for (r, slot) in h.iter_mut().enumerate() {
            *slot = if q == 0 && r == 0 {
                Complex64::default()
            } else {
                hankel0(ks * lambda_alpha(q, r, cfg.alpha))?
            };
        }
        let row = &mut s[q * (m + 1)..(q + 1) * (m + 1)];
        for (n, slot) in row.iter_mut().enumerate() {
            *slot = l[..=p].iter().zip(&h[n..=n + p]).map(|(a, b)| a * b).sum();
        }
    }

    let mut ma = CMatrix::zeros(m, m + 1);
    let mut mb = CMatrix::zeros(m + 1, m);
    for q in 0..=m {
        let row = &s[q * (m + 1)..(q + 1) * (m + 1)];
        for mm in 0..=m {
            let c: Complex64 = (1..=mm).map(|n| l[mm - n] * row[n]).sum();
            if mm >= 1 {
                ma[(mm - 1, q)] = c;
            }
            if q >= 1 {
                mb[(mm, q - 1)] = c + l[mm] * row[0];
            }
        }
    }
    Ok(IterationMatrices { ma, mb, m, p })
}

/// Per-step infinity-norm changes of the two coefficient vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub iteration: usize,
    pub err_a: f64,
    pub err_b: f64,
}

/// Coefficients after `iteration` steps, `a = A_0..A_M` and `b = B_{-1}..B_{-M}`.
#[derive(Clone, Debug, Serialize)]
pub struct ScatteringState {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub iteration: usize,
    pub history: Vec<StepRecord>,
}

fn max_abs_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

fn affine(base: &[Complex64], mat: &CMatrix, x: &[Complex64]) -> Result<Vec<Complex64>> {
    Ok(base.iter().zip(mat.matvec(x)?).map(|(b, y)| b - y).collect())
}

fn diverging(history: &[StepRecord]) -> bool {
    let last = match history.last() {
        Some(step) => step,
        None => return false,
    };
    let size = |s: &StepRecord| s.err_a.max(s.err_b);
    if !size(last).is_finite() {
        return true;
    }
    if history.len() <= DIVERGENCE_WINDOW {
        return false;
    }
    let window = &history[history.len() - DIVERGENCE_WINDOW - 1..];
    let growing = window.windows(2).all(|w| size(&w[1]) > size(&w[0]));
    growing && size(last) > DIVERGENCE_GROWTH * size(&window[0])
}

/// Run `A(j) = A(0) - MB B(j-1)`, `B(j) = B(0) - MA A(j)` from the isolated
/// guess until `j = j_max` or both deltas drop below `tol`.
pub fn iterate(
    mats: &IterationMatrices,
    top: &ArrayCoeffs,
    bottom: &ArrayCoeffs,
    j_max: usize,
    tol: f64,
) -> Result<ScatteringState> {
    iterate_observed(mats, top, bottom, j_max, tol, |_, _, _| {})
}

/// [`iterate`] with `observe(j, A(j), B(j))` called for `j = 0` and after every step.
pub fn iterate_observed(
    mats: &IterationMatrices,
    top: &ArrayCoeffs,
    bottom: &ArrayCoeffs,
    j_max: usize,
    tol: f64,
    mut observe: impl FnMut(usize, &[Complex64], &[Complex64]),
) -> Result<ScatteringState> {
    let (a0, b0) = (&top.values, &bottom.values);
    if a0.len() != mats.m + 1 || b0.len() != mats.m {
        return Err(Error::Shape(format!(
            "initial guess of sizes {}/{} does not match M = {}",
            a0.len(),
            b0.len(),
            mats.m
        )));
    }
    let mut a = a0.clone();
    let mut b = b0.clone();
    let mut history = Vec::new();
    observe(0, &a, &b);
    for j in 1..=j_max {
        let next_a = affine(a0, &mats.mb, &b)?;
        let next_b = affine(b0, &mats.ma, &next_a)?;
        history.push(StepRecord {
            iteration: j,
            err_a: max_abs_diff(&next_a, &a),
            err_b: max_abs_diff(&next_b, &b),
        });
        a = next_a;
        b = next_b;
        observe(j, &a, &b);
        if diverging(&history) {
            return Err(Error::Divergence { history });
        }
        let last = &history[history.len() - 1];
        if last.err_a < tol && last.err_b < tol {
            break;
        }
    }
    Ok(ScatteringState {
        a,
        b,
        iteration: history.len(),
        history,
    })
}

impl ScatteringState {
    /// Infinity-norm residuals of `A = A(0) - MB B` and `B = B(0) - MA A`.
    pub fn fixed_point_residual(
        &self,
        mats: &IterationMatrices,
        top: &ArrayCoeffs,
        bottom: &ArrayCoeffs,
    ) -> Result<(f64, f64)> {
        let a = affine(&top.values, &mats.mb, &self.b)?;
        let b = affine(&bottom.values, &mats.ma, &self.a)?;
        Ok((max_abs_diff(&a, &self.a), max_abs_diff(&b, &self.b)))
    }
}

/// Spectral radii of the two products of the coupling matrices.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SchemeRadius {
    pub rho_ab: f64,
    pub rho_ba: f64,
    pub difference: f64,
}

pub fn scheme_spectral_radius(mats: &IterationMatrices) -> Result<SchemeRadius> {
    let rho_ab = spectral_radius(&mats.ma.matmul(&mats.mb)?)?;
    let rho_ba = spectral_radius(&mats.mb.matmul(&mats.ma)?)?;
    Ok(SchemeRadius {
        rho_ab,
        rho_ba,
        difference: (rho_ab - rho_ba).abs(),
    })
}

/// Residual of the coupled top-face system, rows `m = 0..rows`:
/// `A_m H0(ka) + Σ_{n≠m} A_n H0(ks|m-n|) + Σ_n B_{-n} H0(ks Λ(m,n)) + e^{-iβm}`.
pub fn top_residual(cfg: &ProblemConfig, a: &[Complex64], b: &[Complex64], rows: usize) -> Result<Vec<f64>> {
    coupled_residual(cfg, a, b, rows, cfg.ks() * (cfg.theta_inc - cfg.alpha).cos(), 0)
}

/// Residual of the coupled bottom-face system, rows `B_{-1}..B_{-rows}`.
pub fn bottom_residual(cfg: &ProblemConfig, a: &[Complex64], b: &[Complex64], rows: usize) -> Result<Vec<f64>> {
    coupled_residual(cfg, b, a, rows, cfg.ks() * (cfg.theta_inc + cfg.alpha).cos(), 1)
}

/// `own[i]` sits at distance `i + offset` from the edge, `other[j]` at
/// `j + 1 - offset` on the opposite face.
fn coupled_residual(
    cfg: &ProblemConfig,
    own: &[Complex64],
    other: &[Complex64],
    rows: usize,
    beta: f64,
    offset: usize,
) -> Result<Vec<f64>> {
    if rows + 1 - offset > own.len() || rows < offset {
        return Err(Error::Shape(format!("{rows} residual rows exceed {} coefficients", own.len())));
    }
    let h = hankel_row(cfg.ks(), own.len() + 1)?;
    let self_term = hankel0(cfg.ka())?;
    let ks = cfg.ks();
    (offset..=rows)
        .map(|m| {
            let i = m - offset;
            let mut sum = own[i] * self_term + Complex64::from_polar(1.0, -beta * m as f64);
            for (j, &c) in own.iter().enumerate() {
                if j != i {
                    sum += c * h[i.abs_diff(j)];
                }
            }
            for (j, &c) in other.iter().enumerate() {
                let n = j + 1 - offset;
                if m == 0 && n == 0 {
                    continue;
                }
                sum += c * hankel0(ks * lambda_alpha(m, n, cfg.alpha))?;
            }
            Ok(sum.norm())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceHit {
    pub angle: f64,
    pub face: Face,
    pub sign: Sign,
    pub integer_value: i64,
}

/// Hits of the resonance conditions and the smallest distance to an integer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceReport {
    pub hits: Vec<ResonanceHit>,
    pub margin: f64,
}

impl ResonanceReport {
    pub fn is_resonant(&self) -> bool {
        !self.hits.is_empty()
    }
}

impl fmt::Display for ResonanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} condition(s) hit, margin {:e}", self.hits.len(), self.margin)?;
        for hit in &self.hits {
            write!(
                f,
                "; {:?} face, sign {:?}, value {} at angle {}",
                hit.face, hit.sign, hit.integer_value, hit.angle
            )?;
        }
        Ok(())
    }
}

/// Test `(ks/2π)(1 ∓ cos(ψ - α))` (top) and `(ks/2π)(1 ∓ cos(ψ + α))` (bottom)
/// for integrality at every angle `ψ`.
pub fn resonance_check(cfg: &ProblemConfig, angles: &[f64]) -> ResonanceReport {
    let scale = cfg.ks() / TAU;
    let mut hits = Vec::new();
    let mut margin: f64 = 0.5;
    for &psi in angles {
        for (face, c) in [(Face::Top, (psi - cfg.alpha).cos()), (Face::Bottom, (psi + cfg.alpha).cos())] {
            for (sign, value) in [(Sign::Minus, scale * (1.0 - c)), (Sign::Plus, scale * (1.0 + c))] {
                let nearest = value.round();
                let distance = (value - nearest).abs();
                margin = margin.min(distance);
                if distance <= RESONANCE_TOLERANCE {
                    hits.push(ResonanceHit {
                        angle: psi,
                        face,
                        sign,
                        integer_value: nearest as i64,
                    });
                }
            }
        }
    }
    ResonanceReport { hits, margin }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::OnceLock;

    use super::*;
    use crate::arrays::{isolated_guess, semi_coeffs, semi_residual, ArrayKind};
    use crate::factorization::{aaa_fit, factor_rational, lambda_from_rational, AaaOptions, LambdaSource, RationalFactors};

    fn cfg_alpha(alpha: f64) -> ProblemConfig {
        ProblemConfig::new(5.0 * PI, 0.1, 0.01, alpha, 0.0).unwrap()
    }

    struct Setup {
        cfg: ProblemConfig,
        lam: LambdaCoeffs,
        factors: RationalFactors,
    }

    fn setup() -> &'static Setup {
        static CELL: OnceLock<Setup> = OnceLock::new();
        CELL.get_or_init(|| {
            let cfg = cfg_alpha(5.0 * PI / 6.0);
            let rk = aaa_fit(&cfg, &AaaOptions::default()).unwrap();
            let lam = lambda_from_rational(&rk, 400).unwrap();
            let factors = factor_rational(&rk, rk.anchor);
            Setup { cfg, lam, factors }
        })
    }

    #[test]
    fn lambda_alpha_values() {
        assert_eq!(lambda_alpha(7, 0, 0.3), 7.0);
        assert_eq!(lambda_alpha(3, 4, PI / 2.0), 7.0);
        assert!((lambda_alpha(1, 1, PI / 4.0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn one_hot_lambda_collapses_sums() {
        let c = cfg_alpha(5.0 * PI / 6.0);
        let mut values = vec![Complex64::default(); 11];
        values[0] = Complex64::new(1.0, 0.0);
        let lam = LambdaCoeffs::new(values, LambdaSource::Integral).unwrap();
        let mats = build_matrices(&c, &lam, 10).unwrap();
        assert_eq!(mats.p, 0);
        assert_eq!((mats.ma.rows(), mats.ma.cols()), (10, 11));
        assert_eq!((mats.mb.rows(), mats.mb.cols()), (11, 10));
        let want = hankel0(c.ks() * lambda_alpha(1, 1, c.alpha)).unwrap();
        assert!((mats.ma[(0, 1)] - want).norm() < 1e-15);
        assert!((mats.mb[(0, 0)] - want).norm() < 1e-15);
    }

    #[test]
    fn matrices_match_direct_double_sums() {
        let s = setup();
        let m = 12;
        let mats = build_matrices(&s.cfg, &s.lam.truncated(m).unwrap(), m).unwrap();
        let h = |q: usize, r: usize| hankel0(s.cfg.ks() * lambda_alpha(q, r, s.cfg.alpha)).unwrap();
        for mm in 0..=m {
            for q in 0..=m {
                let entry = |lo: usize| -> Complex64 {
                    let mut sum = Complex64::default();
                    for p in 0..=mats.p {
                        for n in lo..=mm {
                            sum += s.lam.get(mm - n) * s.lam.get(p) * h(q, p + n);
                        }
                    }
                    sum
                };
                if mm >= 1 {
                    let want = entry(1);
                    assert!((mats.ma[(mm - 1, q)] - want).norm() < 1e-13 * (1.0 + want.norm()));
                }
                if q >= 1 {
                    let want = entry(0);
                    assert!((mats.mb[(mm, q - 1)] - want).norm() < 1e-13 * (1.0 + want.norm()));
                }
            }
        }
    }

    #[test]
    fn matrices_symmetric_in_alpha() {
        let s = setup();
        let lam = s.lam.truncated(20).unwrap();
        let a = build_matrices(&cfg_alpha(PI / 3.0), &lam, 20).unwrap();
        let b = build_matrices(&cfg_alpha(2.0 * PI / 3.0), &lam, 20).unwrap();
        for i in 0..20 {
            for j in 0..21 {
                assert!((a.ma[(i, j)] - b.ma[(i, j)]).norm() <= 1e-12 * a.ma[(i, j)].norm().max(1.0));
            }
        }
    }

    #[test]
    fn zero_coupling_is_a_fixed_point() {
        let s = setup();
        let m = 50;
        let mats = IterationMatrices {
            ma: CMatrix::zeros(m, m + 1),
            mb: CMatrix::zeros(m + 1, m),
            m,
            p: 0,
        };
        let (top, bottom) = isolated_guess(&s.cfg, &s.lam, &s.factors, m).unwrap();
        let state = iterate(&mats, &top, &bottom, 5, 0.0).unwrap();
        assert_eq!(state.a, top.values);
        assert_eq!(state.b, bottom.values);
        assert!(state.history.iter().all(|h| h.err_a == 0.0 && h.err_b == 0.0));
    }

    #[test]
    fn converges_to_fixed_point_and_obeys_error_law() {
        let s = setup();
        let m = 400;
        let mats = build_matrices(&s.cfg, &s.lam, m).unwrap();
        let (top, bottom) = isolated_guess(&s.cfg, &s.lam, &s.factors, m).unwrap();
        let tol = 1e-13;
        let state = iterate(&mats, &top, &bottom, 60, tol).unwrap();
        assert!(state.iteration < 60);
        let (ra, rb) = state.fixed_point_residual(&mats, &top, &bottom).unwrap();
        assert!(ra <= 10.0 * tol && rb <= 10.0 * tol, "{ra} {rb}");

        let step = |a_prev: &[Complex64]| {
            let b = affine(&bottom.values, &mats.ma, a_prev).unwrap();
            affine(&top.values, &mats.mb, &b).unwrap()
        };
        let kick: Vec<Complex64> = (0..=m).map(|i| Complex64::new(1e-3 / (1.0 + i as f64), 1e-4)).collect();
        let perturbed: Vec<Complex64> = state.a.iter().zip(&kick).map(|(a, e)| a + e).collect();
        let next = step(&perturbed);
        let error: Vec<Complex64> = next.iter().zip(&state.a).map(|(x, y)| x - y).collect();
        let law = mats.mb.matvec(&mats.ma.matvec(&kick).unwrap()).unwrap();
        assert!(max_abs_diff(&error, &law) <= 1e-10 * max_abs_diff(&law, &vec![Complex64::default(); m + 1]).max(1e-3));
    }

    #[test]
    fn coupled_residual_reduces_to_semi_infinite_when_isolated() {
        let s = setup();
        let m = 400;
        let semi = semi_coeffs(&s.cfg, &s.lam, &s.factors, m, Face::Top).unwrap();
        assert_eq!(semi.kind, ArrayKind::SemiInfinite);
        let zeros = vec![Complex64::default(); m];
        let coupled = top_residual(&s.cfg, &semi.values, &zeros, 50).unwrap();
        let alone = semi_residual(&s.cfg, &semi, 50).unwrap();
        for (x, y) in coupled.iter().zip(&alone) {
            assert!((x - y).abs() <= 1e-12 * y.max(1e-12));
        }
    }

    #[test]
    fn spectral_radius_facts() {
        let s = setup();
        let lam = s.lam.truncated(100).unwrap();
        let r = scheme_spectral_radius(&build_matrices(&s.cfg, &lam, 100).unwrap()).unwrap();
        assert!(r.rho_ab < 1.0);
        assert!(r.difference <= 1e-6 * r.rho_ab);
        let lo = scheme_spectral_radius(&build_matrices(&cfg_alpha(PI / 3.0), &lam, 100).unwrap()).unwrap();
        let hi = scheme_spectral_radius(&build_matrices(&cfg_alpha(2.0 * PI / 3.0), &lam, 100).unwrap()).unwrap();
        assert!((lo.rho_ab - hi.rho_ab).abs() < 1e-8);
    }

    #[test]
    fn divergence_is_detected() {
        let s = setup();
        let m = 10;
        let grow = Complex64::new(4.0, 0.0);
        let mats = IterationMatrices {
            ma: CMatrix::from_fn(m, m + 1, |i, j| if i == j { grow } else { Complex64::default() }),
            mb: CMatrix::from_fn(m + 1, m, |i, j| if i == j { -grow } else { Complex64::default() }),
            m,
            p: 0,
        };
        let (top, bottom) = isolated_guess(&s.cfg, &s.lam, &s.factors, m).unwrap();
        match iterate(&mats, &top, &bottom, 50, 0.0) {
            Err(Error::Divergence { history }) => assert!(history.len() <= 10),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn resonance_conditions() {
        let hit = ProblemConfig::new(2.0 * PI, 1.0, 0.01, PI / 2.0, PI / 2.0).unwrap();
        let report = resonance_check(&hit, &[hit.theta_inc]);
        assert!(report.is_resonant());
        assert!(report.hits.iter().any(|h| h.face == Face::Top && h.sign == Sign::Minus && h.integer_value == 0));
        assert_eq!(report.margin, 0.0);
        let test_case = cfg_alpha(5.0 * PI / 6.0);
        let report = resonance_check(&test_case, &[0.0]);
        assert!(!report.is_resonant());
        assert!(report.margin > 0.0 && report.margin <= 0.5);
        let broadside = resonance_check(&hit, &[0.0]);
        assert_eq!(broadside.hits.len(), 4);
        assert!(broadside.hits.iter().all(|h| h.integer_value == 1));
        let nudged = ProblemConfig { k: hit.k + 1e-6, ..hit };
        let moved = resonance_check(&nudged, &[0.0]);
        assert!(!moved.is_resonant() && moved.margin > broadside.margin);
    }
}
