//! Wiener–Hopf factorisation `K = K⁺K⁻` with `K⁺(z) = K⁻(1/z)`.
//!
//! Two routes are provided. The Cauchy route splits a continuous logarithm of
//! `K(e^{it})`: writing `I_m = (1/π) ∫_0^π cos(mt) ln K(e^{it}) dt`,
//!
//! `ln K⁺(z) = I_0/2 + Σ_{m≥1} I_m z^m`,
//!
//! and the Taylor coefficients `λ_n` of `1/K⁺` follow from
//! `n λ_n = -Σ_{m=1}^n m I_m λ_{n-m}`. The rational route fits `K` on the unit
//! circle with AAA and splits the zeros and poles by modulus (see [`rational`]).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{fast_unchecked, ProblemConfig};
use crate::quadrature::{Mesh, Refinement, PANEL_ORDER};

pub mod rational;

pub use rational::{aaa, aaa_fit, factor_rational, lambda_from_rational, AaaOptions, RationalFactors, RationalKernel};

/// Kernel truncation used for every factorisation sample.
pub const FACTOR_KERNEL_L: usize = 500;
/// Default number of base quadrature nodes on `[0, π]`.
pub const DEFAULT_QUADRATURE_NODES: usize = 8192;
/// Smallest panel next to a branch point, in `t`.
const BRANCH_GRADING_WIDTH: f64 = 1e-12;
/// Beyond this modulus `K⁺` is evaluated by direct quadrature instead of the
/// moment series.
const SERIES_RADIUS: f64 = 0.95;
/// Closest approach to the unit circle for `K⁺`.
pub const BOUNDARY_GAP: f64 = 1e-11;

/// Point of the unit circle where `K̃⁺(z) = K̃⁻(1/z)` is imposed and where the
/// continuous logarithm of `K` takes its principal value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// `z = +1`
    Plus,
    /// `z = -1`
    Minus,
}

impl Anchor {
    /// `-1` when `ks` lies within 0.1 of a multiple of `2π`, else `+1`.
    pub fn for_config(cfg: &ProblemConfig) -> Self {
        let ks = cfg.ks();
        if (ks - TAU * (ks / TAU).round()).abs() < 0.1 {
            Anchor::Minus
        } else {
            Anchor::Plus
        }
    }

    pub fn z(self) -> f64 {
        match self {
            Anchor::Plus => 1.0,
            Anchor::Minus => -1.0,
        }
    }

    pub fn t(self) -> f64 {
        match self {
            Anchor::Plus => 0.0,
            Anchor::Minus => PI,
        }
    }
}

/// The branch point `e^{iks}` folded into `t ∈ [0, π]`.
pub fn folded_branch_point(ks: f64) -> f64 {
    let r = ks.rem_euclid(TAU);
    r.min(TAU - r)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaSource {
    #[default]
    Rational,
    Integral,
}

/// Taylor coefficients `λ_0..λ_M` of `1/K⁺(z)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaCoeffs {
    pub values: Vec<Complex64>,
    pub source: LambdaSource,
}

impl LambdaCoeffs {
    pub fn new(values: Vec<Complex64>, source: LambdaSource) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Shape("at least lambda_0 is required".into()));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain("lambda coefficients must be finite".into()));
        }
        let m = values.len() - 1;
        if m >= 100 && values[m].norm() >= values[0].norm() {
            return Err(Error::DegenerateKernel(values[m].norm() / values[0].norm()));
        }
        Ok(Self { values, source })
    }

    /// Highest index `M`.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    /// `λ_n`, zero beyond the stored range.
    pub fn get(&self, n: usize) -> Complex64 {
        self.values.get(n).copied().unwrap_or_default()
    }

    /// `Σ_{n≤M} λ_n z^n`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.values.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &l| acc * z + l)
    }

    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m >= self.values.len() {
            return Err(Error::Shape(format!(
                "requested {} coefficients, only {} available",
                m + 1,
                self.values.len()
            )));
        }
        Ok(Self {
            values: self.values[..=m].to_vec(),
            source: self.source,
        })
    }
}

/// Continuous logarithm of `K(e^{it})` on increasing `nodes`, with the principal
/// value at `start` (which must lie within `[nodes[0], nodes[last]]` or next to
/// them) and unwrapping outward from there.
fn continuous_log(cfg: &ProblemConfig, nodes: &[f64], start: f64, start_log: Complex64) -> Result<Vec<Complex64>> {
    let values: Vec<Complex64> = nodes
        .iter()
        .map(|&t| principal_log_at(cfg, t))
        .collect::<Result<_>>()?;
    let split = nodes.partition_point(|&t| t < start);
    let mut out = values.clone();
    let mut previous = start_log;
    for i in split..nodes.len() {
        out[i] = unwrap_next(previous, values[i]);
        previous = out[i];
    }
    previous = start_log;
    for i in (0..split).rev() {
        out[i] = unwrap_next(previous, values[i]);
        previous = out[i];
    }
    Ok(out)
}

/// `raw + 2πik` with the integer `k` chosen closest to `previous`.
fn unwrap_next(previous: Complex64, raw: Complex64) -> Complex64 {
    let turns = ((previous.im - raw.im) / TAU).round();
    Complex64::new(raw.re, raw.im + TAU * turns)
}

fn principal_log_at(cfg: &ProblemConfig, t: f64) -> Result<Complex64> {
    let wrapped = t - TAU * (t / TAU).round();
    Ok(fast_unchecked(cfg, Complex64::new(wrapped, 0.0), 2, FACTOR_KERNEL_L)?.ln())
}

/// Cauchy-integral factorisation built on a graded Gauss–Legendre rule for
/// `t ∈ [0, π]`.
#[derive(Clone, Debug)]
pub struct CauchyFactorization {
    cfg: ProblemConfig,
    anchor: Anchor,
    mesh: Mesh,
    panels: usize,
    log_k: Vec<Complex64>,
    moments: Vec<Complex64>,
}

/// Moments kept for the series evaluation of `K⁺`.
const SERIES_MOMENTS: usize = 1000;

impl CauchyFactorization {
    /// `n_quad` base nodes (a power of two, at least 512) plus grading toward
    /// the branch point.
    pub fn new(cfg: &ProblemConfig, n_quad: usize) -> Result<Self> {
        Self::with_anchor(cfg, n_quad, Anchor::for_config(cfg))
    }

    pub fn with_anchor(cfg: &ProblemConfig, n_quad: usize, anchor: Anchor) -> Result<Self> {
        cfg.validate()?;
        if n_quad < 512 || !n_quad.is_power_of_two() {
            return Err(Error::Config(format!(
                "quadrature size must be a power of two >= 512, got {n_quad}"
            )));
        }
        let ks = cfg.ks();
        let tb = folded_branch_point(ks);
        if (tb - anchor.t()).abs() < 1e-6 {
            return Err(Error::BranchPointProximity {
                t: anchor.t(),
                distance: (tb - anchor.t()).abs(),
            });
        }
        let panels = (n_quad / PANEL_ORDER).max(1);
        let mesh = Mesh::graded(
            0.0,
            PI,
            panels,
            &[Refinement {
                point: tb,
                min_width: BRANCH_GRADING_WIDTH,
            }],
        )?;
        let start_log = principal_log_at(cfg, anchor.t())?;
        let log_k = continuous_log(cfg, &mesh.nodes, anchor.t(), start_log)?;
        let mut this = Self {
            cfg: *cfg,
            anchor,
            mesh,
            panels,
            log_k,
            moments: Vec::new(),
        };
        this.moments = this.cosine_moments(SERIES_MOMENTS);
        Ok(this)
    }

    pub fn anchor(&self) -> Anchor {
        self.anchor
    }

    pub fn quadrature_nodes(&self) -> usize {
        self.mesh.len()
    }

    /// `I_0..I_M`.
    pub fn cosine_moments(&self, m_max: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); m_max + 1];
        for ((&t, &w), &lk) in self.mesh.nodes.iter().zip(&self.mesh.weights).zip(&self.log_k) {
            let wl = lk * (w / PI);
            for (m, slot) in out.iter_mut().enumerate() {
                *slot += wl * (m as f64 * t).cos();
            }
        }
        out
    }

    /// `ln K⁺(0) = I_0 / 2`.
    pub fn log_k0(&self) -> Complex64 {
        0.5 * self.moments[0]
    }

    /// `K⁺(0)`, the geometric mean of `K` over the circle square-rooted.
    pub fn k0(&self) -> Complex64 {
        self.log_k0().exp()
    }

    /// `K⁺(z)` for `|z| < 1 - BOUNDARY_GAP`.
    pub fn k_plus(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_k_plus(z)?.exp())
    }

    /// `K⁻(z) = K⁺(1/z)` for `|z| > 1/(1 - BOUNDARY_GAP)`.
    pub fn k_minus(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("K- is not defined at the origin".into()));
        }
        self.k_plus(1.0 / z)
    }

    pub fn log_k_plus(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite argument {z}")));
        }
        let r = z.norm();
        if r >= 1.0 - BOUNDARY_GAP {
            return Err(Error::Domain(format!(
                "K+ by quadrature needs |z| < 1 - {BOUNDARY_GAP:e}, got |z| = {r}"
            )));
        }
        if r <= SERIES_RADIUS {
            let series = self.moments[1..]
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &im| (acc + im) * z);
            return Ok(self.log_k0() + series);
        }
        self.log_k_plus_direct(z)
    }

    /// Direct quadrature of `-(1/2π) ∫_0^{2π} zξ/(zξ - 1) [ln K(ξ) - ln K(ξ*)] dt`
    /// with `ξ* = e^{-i arg z}`; the subtracted term integrates to zero. The base
    /// rule is replaced by a graded rule on an arc around `ξ*`.
    fn log_k_plus_direct(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        let star = (-z.arg()).rem_euclid(TAU);
        let breaks = &self.mesh.breaks;
        let base_width = PI / self.panels as f64;
        let mut full: Vec<f64> = breaks.iter().copied().chain(breaks.iter().map(|b| TAU - b)).collect();
        full.sort_by(|x, y| x.partial_cmp(y).unwrap());
        full.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        let snap = |v: f64, up: bool| {
            let turns = (v / TAU).floor();
            let rv = v - TAU * turns;
            let idx = full.partition_point(|&b| b <= rv);
            let b = if up {
                full.get(idx).copied().unwrap_or(TAU)
            } else {
                full[idx.saturating_sub(1)]
            };
            b + TAU * turns
        };
        let reach = 4.0 * base_width;
        let a = snap(star - reach, false);
        let b = snap(star + reach, true);
        let in_arc = |t: f64| {
            let shifted = t - TAU * ((t - a) / TAU).floor();
            shifted <= b
        };

        let tb = folded_branch_point(self.cfg.ks());
        let mut refinements = vec![Refinement {
            point: star,
            min_width: 0.1 * (1.0 - r),
        }];
        for k in -1..=1 {
            for p in [tb, TAU - tb] {
                let q = p + TAU * k as f64;
                if q > a && q < b {
                    refinements.push(Refinement {
                        point: q,
                        min_width: BRANCH_GRADING_WIDTH,
                    });
                }
            }
        }
        let local_panels = (((b - a) / base_width).round() as usize).max(1);
        let local = Mesh::graded(a, b, local_panels, &refinements)?;
        let mut path = local.nodes.clone();
        let star_is_branch = crate::kernel::branch_distance(self.cfg.ks(), Complex64::new(star, 0.0)) < 1e-6;
        if !star_is_branch {
            path.push(star);
            path.sort_by(|x, y| x.partial_cmp(y).unwrap());
        }
        let fold = |t: f64| {
            let v = t.rem_euclid(TAU);
            v.min(TAU - v)
        };
        let seed_index = self
            .mesh
            .nodes
            .partition_point(|&t| t < fold(a))
            .min(self.mesh.len() - 1);
        let path_log = continuous_log(&self.cfg, &path, a, self.log_k[seed_index])?;
        let log_star = if star_is_branch {
            Complex64::new(0.0, 0.0)
        } else {
            path_log[path.partition_point(|&t| t < star)]
        };

        let kernel = |t: f64| {
            let zx = z * Complex64::from_polar(1.0, t);
            zx / (zx - 1.0)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&u, &w), &lk) in self.mesh.nodes.iter().zip(&self.mesh.weights).zip(&self.log_k) {
            for t in [u, TAU - u] {
                if !in_arc(t) {
                    acc += kernel(t) * (lk - log_star) * w;
                }
            }
        }
        for (&t, &w) in local.nodes.iter().zip(&local.weights) {
            let lk = path_log[path.partition_point(|&p| p < t).min(path.len() - 1)];
            acc += kernel(t) * (lk - log_star) * w;
        }
        Ok(self.log_k0() - acc / TAU)
    }
}

/// Anything that evaluates the plus factor `K⁺(z)` for `|z| < 1`.
pub trait PlusFactor {
    fn plus(&self, z: Complex64) -> Result<Complex64>;
}

impl PlusFactor for CauchyFactorization {
    fn plus(&self, z: Complex64) -> Result<Complex64> {
        self.k_plus(z)
    }
}

impl PlusFactor for RationalFactors {
    fn plus(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.k_plus(z))
    }
}

/// `K⁺(z)` by the Cauchy integral with `n_quad` base nodes.
pub fn factor_cauchy(cfg: &ProblemConfig, z: Complex64, n_quad: usize) -> Result<Complex64> {
    CauchyFactorization::new(cfg, n_quad)?.k_plus(z)
}

/// `λ_0..λ_M` from the cosine moments of `ln K`.
pub fn lambda_from_integral(cfg: &ProblemConfig, m: usize, n_quad: usize) -> Result<LambdaCoeffs> {
    if n_quad < 2048 {
        return Err(Error::Config(format!(
            "lambda integrals need at least 2048 quadrature nodes, got {n_quad}"
        )));
    }
    let cauchy = CauchyFactorization::new(cfg, n_quad)?;
    lambda_from_moments(&cauchy, m)
}

/// The recursion `n λ_n = -Σ m I_m λ_{n-m}` on a prepared factorisation.
pub fn lambda_from_moments(cauchy: &CauchyFactorization, m: usize) -> Result<LambdaCoeffs> {
    let moments = if m <= SERIES_MOMENTS {
        cauchy.moments[..=m].to_vec()
    } else {
        cauchy.cosine_moments(m)
    };
    let weighted: Vec<Complex64> = moments.iter().enumerate().map(|(k, &v)| v * k as f64).collect();
    let mut lambda = Vec::with_capacity(m + 1);
    lambda.push(1.0 / cauchy.k0());
    for n in 1..=m {
        let s: Complex64 = (1..=n).map(|k| weighted[k] * lambda[n - k]).sum();
        lambda.push(-s / n as f64);
    }
    LambdaCoeffs::new(lambda, LambdaSource::Integral)
}
