//! Scattering coefficients of the infinite array, of the semi-infinite array,
//! and of the two isolated wedge faces used to start the iterative scheme.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{LambdaCoeffs, PlusFactor};
use crate::kernel::{kernel_fast, ProblemConfig};
use crate::specfun::hankel0;
use crate::wedge::resonance_check;

/// Radius at which `K⁺(e^{-iβ})` is evaluated, just inside the unit circle.
pub const FORCING_RADIUS: f64 = 1.0 - 1e-9;
/// `|λ_0|` below this is treated as a degenerate kernel.
pub const LAMBDA0_FLOOR: f64 = 1e-14;

const INFINITE_L: usize = 500;

/// One face of the wedge: the top ray at angle `α` or the bottom ray at `-α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    Top,
    Bottom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrayKind {
    Infinite,
    SemiInfinite,
    IsolatedTop,
    IsolatedBottom,
}

/// `A_0..A_M` for top-face kinds, `B_{-1}..B_{-M}` for [`ArrayKind::IsolatedBottom`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArrayCoeffs {
    pub values: Vec<Complex64>,
    pub kind: ArrayKind,
    pub beta: f64,
}

impl ArrayCoeffs {
    /// Coefficient at the signed array index `m`; zero outside the stored range.
    pub fn at(&self, m: i64) -> Complex64 {
        let index = match self.kind {
            ArrayKind::IsolatedBottom => {
                if m >= 0 {
                    return Complex64::default();
                }
                (-m - 1) as usize
            }
            _ => {
                if m < 0 {
                    return Complex64::default();
                }
                m as usize
            }
        };
        self.values.get(index).copied().unwrap_or_default()
    }
}

/// Effective phase `ks cos(θ_I - α)` (top) or `ks cos(θ_I + α)` (bottom).
pub fn beta(cfg: &ProblemConfig, face: Face) -> f64 {
    match face {
        Face::Top => cfg.ks() * (cfg.theta_inc - cfg.alpha).cos(),
        Face::Bottom => cfg.ks() * (cfg.theta_inc + cfg.alpha).cos(),
    }
}

/// The infinite array lies along the top ray only, so only its two
/// conditions apply.
fn require_non_resonant(cfg: &ProblemConfig) -> Result<()> {
    let mut report = resonance_check(cfg, &[cfg.theta_inc]);
    report.hits.retain(|h| h.face == Face::Top);
    if report.is_resonant() {
        return Err(Error::Resonance(report));
    }
    Ok(())
}

/// `A_0` of the infinite array along the top ray, `-1/K(e^{-iβ})`.
pub fn infinite_coeff(cfg: &ProblemConfig) -> Result<Complex64> {
    cfg.validate()?;
    require_non_resonant(cfg)?;
    let t = Complex64::new(-beta(cfg, Face::Top), 0.0);
    Ok(-1.0 / kernel_fast(cfg, t, 2, INFINITE_L)?)
}

/// `A_0..A_M` of the infinite array, `A_m = e^{-iβm} A_0`.
pub fn infinite_coeffs(cfg: &ProblemConfig, m: usize) -> Result<ArrayCoeffs> {
    let a0 = infinite_coeff(cfg)?;
    let b = beta(cfg, Face::Top);
    let values = (0..=m).map(|n| a0 * Complex64::from_polar(1.0, -b * n as f64)).collect();
    Ok(ArrayCoeffs {
        values,
        kind: ArrayKind::Infinite,
        beta: b,
    })
}

/// `-λ_0 / K⁺(e^{-iβ})` with the factor evaluated at [`FORCING_RADIUS`].
fn leading(lam: &LambdaCoeffs, factor: &impl PlusFactor, b: f64) -> Result<Complex64> {
    let l0 = lam.get(0);
    if l0.norm() < LAMBDA0_FLOOR {
        return Err(Error::DegenerateKernel(l0.norm()));
    }
    Ok(-l0 / factor.plus(Complex64::from_polar(FORCING_RADIUS, -b))?)
}

/// Semi-infinite array coefficients by recurrence.
///
/// `Top` gives `A_0..A_M` with `A_m = e^{-iβ}A_{m-1} + (λ_m/λ_0)A_0`. `Bottom`
/// gives `B_{-1}..B_{-M}` from the partial sums to `n-1`, i.e.
/// `B_{-n} = e^{-iβ}(B_{-(n-1)} + (λ_{n-1}/λ_0)A_0)` with `B_0 = 0`.
pub fn semi_coeffs(
    cfg: &ProblemConfig,
    lam: &LambdaCoeffs,
    factor: &impl PlusFactor,
    m: usize,
    face: Face,
) -> Result<ArrayCoeffs> {
    let needed = match face {
        Face::Top => m + 1,
        Face::Bottom => m,
    };
    if lam.values.len() < needed {
        return Err(Error::Shape(format!(
            "{needed} lambda coefficients needed, got {}",
            lam.values.len()
        )));
    }
    let b = beta(cfg, face);
    let a0 = leading(lam, factor, b)?;
    let ratio = a0 / lam.get(0);
    let phase = Complex64::from_polar(1.0, -b);
    let (values, kind) = match face {
        Face::Top => {
            let mut values = Vec::with_capacity(m + 1);
            values.push(a0);
            for n in 1..=m {
                values.push(phase * values[n - 1] + lam.get(n) * ratio);
            }
            (values, ArrayKind::SemiInfinite)
        }
        Face::Bottom => {
            let mut values: Vec<Complex64> = Vec::with_capacity(m);
            let mut previous = Complex64::default();
            for n in 1..=m {
                previous = phase * (previous + lam.get(n - 1) * ratio);
                values.push(previous);
            }
            (values, ArrayKind::IsolatedBottom)
        }
    };
    Ok(ArrayCoeffs { values, kind, beta: b })
}

/// Initial guess of the wedge scheme: `M+1` top and `M` bottom coefficients of
/// the two faces treated as isolated semi-infinite arrays.
pub fn isolated_guess(
    cfg: &ProblemConfig,
    lam: &LambdaCoeffs,
    factor: &impl PlusFactor,
    m: usize,
) -> Result<(ArrayCoeffs, ArrayCoeffs)> {
    cfg.validate()?;
    let mut top = semi_coeffs(cfg, lam, factor, m, Face::Top)?;
    top.kind = ArrayKind::IsolatedTop;
    let bottom = semi_coeffs(cfg, lam, factor, m, Face::Bottom)?;
    Ok((top, bottom))
}

/// `H0(ks d)` for `d = 1..=n`, indexed by `d` (entry 0 unused).
pub(crate) fn hankel_row(ks: f64, n: usize) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::default(); n + 1];
    for (d, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = hankel0(ks * d as f64)?;
    }
    Ok(out)
}

/// `|A_m H0(ka) + Σ_{n≠m} A_n H0(ks|m-n|) + e^{-iβm}|` of the truncated
/// semi-infinite system for `m = 0..rows`, relative to the unit forcing.
pub fn semi_residual(cfg: &ProblemConfig, coeffs: &ArrayCoeffs, rows: usize) -> Result<Vec<f64>> {
    let a = &coeffs.values;
    if a.is_empty() || rows >= a.len() {
        return Err(Error::Shape(format!(
            "{} residual rows requested from {} coefficients",
            rows + 1,
            a.len()
        )));
    }
    let h = hankel_row(cfg.ks(), a.len())?;
    let self_term = hankel0(cfg.ka())?;
    (0..=rows)
        .map(|m| {
            let mut sum = a[m] * self_term + Complex64::from_polar(1.0, -coeffs.beta * m as f64);
            for (n, &an) in a.iter().enumerate() {
                if n != m {
                    sum += an * h[m.abs_diff(n)];
                }
            }
            Ok(sum.norm())
        })
        .collect()
}
