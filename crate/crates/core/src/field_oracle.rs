//! Incident, scattered and total fields on rectangular grids, and the dense
//! Foldy solve of a finite wedge used as a reference for the iterative scheme.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::ProblemConfig;
use crate::linalg::{lu_solve, CMatrix};
use crate::specfun::hankel0;

/// Points closer than this multiple of `s` to a centre are singular.
pub const SINGULAR_PROXIMITY: f64 = 1e-12;
/// Largest number of scatterers the dense oracle accepts.
pub const ORACLE_LIMIT: usize = 4000;

pub type Point = [f64; 2];

/// `e^{-ikr cos(θ - θ_I)}` at the point `(r cos θ, r sin θ)`.
pub fn incident(cfg: &ProblemConfig, point: Point) -> Complex64 {
    let projection = point[0] * cfg.theta_inc.cos() + point[1] * cfg.theta_inc.sin();
    Complex64::from_polar(1.0, -cfg.k * projection)
}

/// Scatterer centres and their monopole coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScattererSet {
    pub centers: Vec<Point>,
    pub coeffs: Vec<Complex64>,
}

fn distance(p: Point, q: Point) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

impl ScattererSet {
    pub fn new(centers: Vec<Point>, coeffs: Vec<Complex64>) -> Result<Self> {
        if centers.len() != coeffs.len() {
            return Err(Error::Shape(format!(
                "{} centres but {} coefficients",
                centers.len(),
                coeffs.len()
            )));
        }
        Ok(Self { centers, coeffs })
    }

    /// Every pair of centres is more than `2a` apart.
    pub fn check_separation(&self, a: f64) -> Result<()> {
        for (i, &p) in self.centers.iter().enumerate() {
            for &q in &self.centers[i + 1..] {
                if distance(p, q) <= 2.0 * a {
                    return Err(Error::Config(format!("scatterers at {p:?} and {q:?} overlap")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Concatenation of two sets.
    pub fn union(&self, other: &ScattererSet) -> ScattererSet {
        let mut out = self.clone();
        out.centers.extend_from_slice(&other.centers);
        out.coeffs.extend_from_slice(&other.coeffs);
        out
    }
}

/// `Σ_n c_n H0(k |point - R_n|)`.
pub fn scattered(cfg: &ProblemConfig, set: &ScattererSet, point: Point) -> Result<Complex64> {
    let floor = SINGULAR_PROXIMITY * cfg.s;
    let mut sum = Complex64::default();
    for (&c, &coeff) in set.centers.iter().zip(&set.coeffs) {
        let d = distance(point, c);
        if d <= floor {
            return Err(Error::Domain(format!("point {point:?} coincides with scatterer {c:?}")));
        }
        sum += coeff * hankel0(cfg.k * d)?;
    }
    Ok(sum)
}

/// Centre of scatterer `n` of the wedge: `n s (cos α, sin α)` for `n ≥ 0` and
/// `|n| s (cos α, -sin α)` for `n < 0`.
pub fn wedge_center(cfg: &ProblemConfig, n: i64) -> Point {
    let r = n.unsigned_abs() as f64 * cfg.s;
    let y = if n >= 0 { cfg.alpha.sin() } else { -cfg.alpha.sin() };
    [r * cfg.alpha.cos(), r * y]
}

/// Wedge with `N` scatterers per face: the edge first, then `1..N` on the top
/// ray, then `-1..-N` on the bottom ray. Coefficients are zero.
pub fn wedge_positions(cfg: &ProblemConfig, n_per_face: usize) -> Result<ScattererSet> {
    cfg.validate()?;
    let n = n_per_face as i64;
    let centers: Vec<Point> = std::iter::once(0)
        .chain(1..=n)
        .chain((1..=n).map(|i| -i))
        .map(|i| wedge_center(cfg, i))
        .collect();
    let coeffs = vec![Complex64::default(); centers.len()];
    ScattererSet::new(centers, coeffs)
}

/// Wedge scatterers carrying `A_0..A_M` on the top face (edge included) and
/// `B_{-1}..B_{-M}` on the bottom face.
pub fn wedge_scatterers(cfg: &ProblemConfig, a: &[Complex64], b: &[Complex64]) -> ScattererSet {
    let centers = (0..a.len() as i64)
        .chain((1..=b.len() as i64).map(|i| -i))
        .map(|i| wedge_center(cfg, i))
        .collect();
    let coeffs = a.iter().chain(b).copied().collect();
    ScattererSet { centers, coeffs }
}

fn foldy_matrix(cfg: &ProblemConfig, centers: &[Point]) -> Result<CMatrix> {
    let n = centers.len();
    let diag = hankel0(cfg.ka())?;
    let mut mat = CMatrix::zeros(n, n);
    for i in 0..n {
        mat[(i, i)] = diag;
        for j in i + 1..n {
            let h = hankel0(cfg.k * distance(centers[i], centers[j]))?;
            mat[(i, j)] = h;
            mat[(j, i)] = h;
        }
    }
    Ok(mat)
}

/// Solve the truncated Foldy system of `2N+1` wedge scatterers densely.
pub fn direct_oracle(cfg: &ProblemConfig, n_per_face: usize) -> Result<ScattererSet> {
    let total = 2 * n_per_face + 1;
    if total > ORACLE_LIMIT {
        return Err(Error::Config(format!(
            "{total} scatterers exceed the dense solve budget of {ORACLE_LIMIT}"
        )));
    }
    let mut set = wedge_positions(cfg, n_per_face)?;
    set.check_separation(cfg.a)?;
    let mat = foldy_matrix(cfg, &set.centers)?;
    let rhs: Vec<Complex64> = set.centers.iter().map(|&p| -incident(cfg, p)).collect();
    set.coeffs = lu_solve(&mat, &rhs)?;
    Ok(set)
}

/// `|A_m H0(ka) + Σ_{n≠m} A_n H0(k|R_m - R_n|) + Φ_I(R_m)| / |Φ_I(R_m)|` per row.
pub fn foldy_residuals(cfg: &ProblemConfig, set: &ScattererSet) -> Result<Vec<f64>> {
    let mat = foldy_matrix(cfg, &set.centers)?;
    let applied = mat.matvec(&set.coeffs)?;
    Ok(set
        .centers
        .iter()
        .zip(applied)
        .map(|(&p, row)| {
            let forcing = incident(cfg, p);
            (row + forcing).norm() / forcing.norm()
        })
        .collect())
}

/// Rectangle `[x0, x1] x [y0, y1]` sampled with `nx x ny` points, edges included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Config(format!("grid needs at least 2x2 points, got {}x{}", self.nx, self.ny)));
        }
        let bounds = [self.x0, self.x1, self.y0, self.y1];
        if bounds.iter().any(|v| !v.is_finite()) || !(self.x0 < self.x1) || !(self.y0 < self.y1) {
            return Err(Error::Config("grid bounds must be finite and increasing".into()));
        }
        Ok(())
    }

    /// Point `(ix, iy)`; rows run along `x`.
    pub fn point(&self, ix: usize, iy: usize) -> Point {
        let x = self.x0 + (self.x1 - self.x0) * ix as f64 / (self.nx - 1) as f64;
        let y = self.y0 + (self.y1 - self.y0) * iy as f64 / (self.ny - 1) as f64;
        [x, y]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Incident,
    Scattered,
    Total,
}

/// Field samples in row-major order (`iy` outer, `ix` inner). Masked points
/// lie within the mask radius of a scatterer and hold zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldGrid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<Complex64>,
    pub mask: Vec<bool>,
}

impl FieldGrid {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x0: self.x0,
            x1: self.x1,
            y0: self.y0,
            y1: self.y1,
            nx: self.nx,
            ny: self.ny,
        }
    }

    pub fn point(&self, index: usize) -> Point {
        self.spec().point(index % self.nx, index / self.nx)
    }

    /// Also mask every point masked in `mask`, zeroing its value.
    pub fn merge_mask(&mut self, mask: &[bool]) -> Result<()> {
        if mask.len() != self.mask.len() {
            return Err(Error::Shape(format!("mask of {} points for a grid of {}", mask.len(), self.mask.len())));
        }
        for ((m, v), &extra) in self.mask.iter_mut().zip(self.values.iter_mut()).zip(mask) {
            if extra {
                *m = true;
                *v = Complex64::default();
            }
        }
        Ok(())
    }
}

/// Evaluate a field on a grid, masking points within `mask_radius` of any centre.
pub fn evaluate_grid(
    cfg: &ProblemConfig,
    set: &ScattererSet,
    spec: &GridSpec,
    kind: FieldKind,
    mask_radius: f64,
) -> Result<FieldGrid> {
    spec.validate()?;
    let floor = mask_radius.max(SINGULAR_PROXIMITY * cfg.s);
    let mut values = Vec::with_capacity(spec.nx * spec.ny);
    let mut mask = Vec::with_capacity(values.capacity());
    for iy in 0..spec.ny {
        for ix in 0..spec.nx {
            let p = spec.point(ix, iy);
            let masked = set.centers.iter().any(|&c| distance(p, c) <= floor);
            let value = if masked {
                Complex64::default()
            } else {
                match kind {
                    FieldKind::Incident => incident(cfg, p),
                    FieldKind::Scattered => scattered(cfg, set, p)?,
                    FieldKind::Total => incident(cfg, p) + scattered(cfg, set, p)?,
                }
            };
            values.push(value);
            mask.push(masked);
        }
    }
    Ok(FieldGrid {
        x0: spec.x0,
        x1: spec.x1,
        y0: spec.y0,
        y1: spec.y1,
        nx: spec.nx,
        ny: spec.ny,
        values,
        mask,
    })
}

/// Masked relative L2 difference `‖b - a‖/‖a‖` and maximum absolute difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub rel_l2: f64,
    pub max_abs: f64,
}

pub fn compare(a: &FieldGrid, b: &FieldGrid) -> Result<Comparison> {
    if a.spec() != b.spec() || a.values.len() != b.values.len() {
        return Err(Error::Shape("grids differ in geometry".into()));
    }
    if a.mask != b.mask {
        return Err(Error::Shape("grids differ in their masks".into()));
    }
    let mut diff = 0.0;
    let mut norm = 0.0;
    let mut max_abs: f64 = 0.0;
    for ((x, y), &masked) in a.values.iter().zip(&b.values).zip(&a.mask) {
        if masked {
            continue;
        }
        let d = (y - x).norm();
        diff += d * d;
        norm += x.norm_sqr();
        max_abs = max_abs.max(d);
    }
    let rel_l2 = if norm > 0.0 {
        (diff / norm).sqrt()
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(Comparison { rel_l2, max_abs })
}

/// Point of largest `|value|` among unmasked samples.
pub fn argmax(grid: &FieldGrid) -> Option<(Point, f64)> {
    grid.values
        .iter()
        .zip(&grid.mask)
        .enumerate()
        .filter(|(_, (_, &masked))| !masked)
        .map(|(i, (v, _))| (i, v.norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, size)| (grid.point(i), size))
}
