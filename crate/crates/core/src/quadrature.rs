//! Composite Gauss–Legendre rules with geometric grading toward interior
//! points where the integrand is (weakly) singular or sharply peaked.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes per Gauss–Legendre panel.
pub const PANEL_ORDER: usize = 16;
/// Ratio between successive panel widths in a graded cluster.
pub const GRADING_RATIO: f64 = 0.15;
/// Graded refinement never exceeds this many levels per side.
const MAX_LEVELS: usize = 40;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    if n == 0 {
        return (x, w);
    }
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// A point of the interval toward which panels are graded geometrically until
/// their width drops below `min_width`.
#[derive(Clone, Copy, Debug)]
pub struct Refinement {
    pub point: f64,
    pub min_width: f64,
}

/// Composite rule on `[lo, hi]`; nodes are sorted increasingly.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub breaks: Vec<f64>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Mesh {
    /// `panels` uniform panels, with every panel touching a refinement point
    /// replaced by a geometric cluster on each side of that point.
    pub fn graded(lo: f64, hi: f64, panels: usize, refinements: &[Refinement]) -> Result<Self> {
        if !(lo < hi) || panels == 0 {
            return Err(Error::QuadratureFailure(format!(
                "invalid mesh [{lo}, {hi}] with {panels} panels"
            )));
        }
        let mut breaks: Vec<f64> = (0..=panels)
            .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
            .collect();
        let width = (hi - lo) / panels as f64;
        for r in refinements {
            if !(r.point >= lo && r.point <= hi) {
                continue;
            }
            if !(r.min_width > 0.0) {
                return Err(Error::QuadratureFailure("refinement width must be positive".into()));
            }
            breaks.push(r.point);
            let mut h = width;
            let mut levels = 0;
            while h > r.min_width {
                h *= GRADING_RATIO;
                levels += 1;
                if levels > MAX_LEVELS {
                    return Err(Error::QuadratureFailure(format!(
                        "grading toward {} needs more than {MAX_LEVELS} levels",
                        r.point
                    )));
                }
                for p in [r.point - h, r.point + h] {
                    if p > lo && p < hi {
                        breaks.push(p);
                    }
                }
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + b.abs()));

        let (x, w) = gauss_legendre(PANEL_ORDER);
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * PANEL_ORDER);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Ok(Self {
            breaks,
            nodes,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}
