//! JSON run configuration: the physical parameters (always required) plus
//! numerical knobs with defaults.

use std::f64::consts::PI;
use std::path::Path;

use pswedge::factorization::{AaaOptions, LambdaSource, DEFAULT_QUADRATURE_NODES};
use pswedge::field_oracle::{FieldKind, GridSpec};
use pswedge::kernel::{KernelMethod, ProblemConfig};
use pswedge::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Wavenumber, 1/length.
    pub k: f64,
    /// Scatterer spacing, length.
    pub s: f64,
    /// Cylinder radius, length.
    pub a: f64,
    /// Wedge half-angle, radians.
    pub alpha: f64,
    /// Incidence angle, radians.
    pub theta_inc: f64,
    #[serde(default)]
    pub kernel: KernelMethod,
    #[serde(default = "default_kernel_samples")]
    pub kernel_samples: usize,
    #[serde(default)]
    pub aaa: AaaOptions,
    #[serde(default)]
    pub lambda_source: LambdaSource,
    #[serde(default = "default_quadrature")]
    pub n_quad: usize,
    /// Truncation of the coefficient vectors and matrices.
    #[serde(default = "default_m", rename = "M")]
    pub m: usize,
    #[serde(default = "default_j_max")]
    pub j_max: usize,
    #[serde(default)]
    pub tol_iter: f64,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default = "default_field")]
    pub field: FieldKind,
    /// Mask radius around each scatterer, length; `2a` when absent.
    #[serde(default)]
    pub mask_radius: Option<f64>,
    #[serde(default = "default_oracle")]
    pub oracle_n: usize,
    /// Truncation used for spectral-radius sweeps.
    #[serde(default = "default_rho_m")]
    pub rho_m: usize,
    /// Wedge half-angles of the sweep, radians; an even grid when absent.
    #[serde(default)]
    pub rho_alphas: Option<Vec<f64>>,
    /// Angles tested for resonance besides `theta_inc`, radians.
    #[serde(default)]
    pub extra_angles: Vec<f64>,
}

fn default_kernel_samples() -> usize {
    1024
}

fn default_quadrature() -> usize {
    DEFAULT_QUADRATURE_NODES
}

fn default_m() -> usize {
    1000
}

fn default_j_max() -> usize {
    50
}

fn default_grid() -> GridSpec {
    GridSpec {
        x0: -1.0,
        x1: 1.0,
        y0: -1.0,
        y1: 1.0,
        nx: 201,
        ny: 201,
    }
}

fn default_field() -> FieldKind {
    FieldKind::Scattered
}

fn default_oracle() -> usize {
    30
}

fn default_rho_m() -> usize {
    200
}

impl RunConfig {
    /// Configuration with the given physics and every knob at its default.
    pub fn with_physics(cfg: ProblemConfig) -> Self {
        Self {
            k: cfg.k,
            s: cfg.s,
            a: cfg.a,
            alpha: cfg.alpha,
            theta_inc: cfg.theta_inc,
            kernel: KernelMethod::default(),
            kernel_samples: default_kernel_samples(),
            aaa: AaaOptions::default(),
            lambda_source: LambdaSource::default(),
            n_quad: default_quadrature(),
            m: default_m(),
            j_max: default_j_max(),
            tol_iter: 0.0,
            grid: default_grid(),
            field: default_field(),
            mask_radius: None,
            oracle_n: default_oracle(),
            rho_m: default_rho_m(),
            rho_alphas: None,
            extra_angles: Vec::new(),
        }
    }

    /// Read a configuration file or the `config` member of a run's JSON sidecar.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let bad = |e: serde_json::Error| Error::Config(format!("{}: {e}", path.display()));
        let mut value: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        let cfg: RunConfig = serde_json::from_value(value).map_err(bad)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn problem(&self) -> Result<ProblemConfig> {
        ProblemConfig::new(self.k, self.s, self.a, self.alpha, self.theta_inc)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem()?;
        self.kernel.validate()?;
        self.aaa.validate()?;
        self.grid.validate()?;
        if self.m == 0 || self.rho_m == 0 {
            return Err(Error::Config("truncations M and rho_m must be positive".into()));
        }
        if self.kernel_samples == 0 {
            return Err(Error::Config("kernel_samples must be positive".into()));
        }
        if !(self.tol_iter >= 0.0) {
            return Err(Error::Config(format!("tol_iter must be non-negative, got {}", self.tol_iter)));
        }
        if let Some(r) = self.mask_radius {
            if !(r >= 0.0) {
                return Err(Error::Config(format!("mask_radius must be non-negative, got {r}")));
            }
        }
        Ok(())
    }

    pub fn mask(&self) -> f64 {
        self.mask_radius.unwrap_or(2.0 * self.a)
    }

    pub fn resonance_angles(&self) -> Vec<f64> {
        std::iter::once(self.theta_inc).chain(self.extra_angles.iter().copied()).collect()
    }

    /// Sweep angles: the given list, or 61 points strictly inside `sin α > a/s`.
    pub fn sweep_alphas(&self) -> Vec<f64> {
        match &self.rho_alphas {
            Some(list) => list.clone(),
            None => {
                let lo = (self.a / self.s).asin();
                let hi = PI - lo;
                (1..=61).map(|i| lo + (hi - lo) * i as f64 / 62.0).collect()
            }
        }
    }
}
