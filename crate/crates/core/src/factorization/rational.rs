//! Rational approximation `K̃(z) = K̃₁ Π (z - z_ℓ)/(z - p_ℓ)` and its exact split.
//!
//! Samples of `K(e^{it})` on reciprocal pairs `e^{±it}` are fitted by AAA in the
//! variable `x = (z + 1/z)/2 = cos t`, in which the kernel is single valued.
//! Each zero or pole `ξ` of the fit in `x` gives the pair `a, 1/a` with
//! `a + 1/a = 2ξ`, so the inside and outside lists have equal length and are
//! reciprocal to rounding.

use std::f64::consts::{FRAC_1_PI, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{folded_branch_point, Anchor, LambdaCoeffs, LambdaSource, FACTOR_KERNEL_L};
use crate::error::{Error, FitDefect, Result};
use crate::kernel::{fast_unchecked, ProblemConfig};
use crate::linalg::{eigenvalues, smallest_right_singular_vector, svd_least_squares, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Half-width of the sample gap left around each branch point.
pub const SAMPLE_EXCLUSION: f64 = 1e-3;
/// Held-out points closer than this to a branch point are not scored.
pub const HELD_OUT_EXCLUSION: f64 = 3e-2;
/// Number of held-out circle points.
pub const HELD_OUT_POINTS: usize = 4096;
/// Zeros or poles this close to `|z| = 1` force a retry.
const CIRCLE_GAP: f64 = 1e-10;
/// Froissart doublets: residue below this multiple of `|K̃₁|`.
const SPURIOUS_RESIDUE: f64 = 1e-13;
/// Acceptance bound on the reciprocal-pair defect.
const MAX_RECIPROCAL_DEFECT: f64 = 1e-6;
/// Gauss–Newton passes over the product form.
const REFINE_STEPS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AaaOptions {
    /// Circle samples, counted with both members of each reciprocal pair.
    pub n_samples: usize,
    /// Relative AAA stopping tolerance on the samples.
    pub tol: f64,
    pub max_degree: usize,
    pub retries: usize,
    pub seed: u64,
    /// Extra samples per side of each branch point, spaced geometrically
    /// (ratio 1/2) inside the exclusion gap.
    pub branch_levels: usize,
    /// A fit whose held-out error exceeds this is retried.
    pub max_fit_error: f64,
}

impl Default for AaaOptions {
    fn default() -> Self {
        Self {
            n_samples: 2048,
            tol: 1e-13,
            max_degree: 150,
            retries: 5,
            seed: 0x00aa_a5ee_d000,
            branch_levels: 0,
            max_fit_error: 1e-8,
        }
    }
}

impl AaaOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_degree == 0 {
            return Err(Error::Config("max_degree must be positive".into()));
        }
        if self.n_samples < 4 * self.max_degree {
            return Err(Error::Config(format!(
                "n_samples = {} must be at least 4 * max_degree = {}",
                self.n_samples,
                4 * self.max_degree
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        Ok(())
    }
}

/// Barycentric rational `r(x) = Σ w_j f_j/(x - x_j) / Σ w_j/(x - x_j)`.
#[derive(Clone, Debug)]
pub struct Barycentric {
    pub support: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

impl Barycentric {
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut num = ZERO;
        let mut den = ZERO;
        for ((&xj, &fj), &wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            let d = x - xj;
            if d == ZERO {
                return fj;
            }
            let c = wj / d;
            num += c * fj;
            den += c;
        }
        num / den
    }

    /// Limit at infinity, `Σ w_j f_j / Σ w_j`.
    pub fn at_infinity(&self) -> Complex64 {
        let s: Complex64 = self.weights.iter().sum();
        let sf: Complex64 = self.weights.iter().zip(&self.values).map(|(w, f)| w * f).sum();
        sf / s
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let roots = arrowhead_roots(&self.support, &self.weights)?;
        Ok(roots.into_iter().map(|r| polish(&self.support, &self.weights, r)).collect())
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        let wf: Vec<Complex64> = self.weights.iter().zip(&self.values).map(|(w, f)| w * f).collect();
        let roots = arrowhead_roots(&self.support, &wf)?;
        Ok(roots.into_iter().map(|r| polish(&self.support, &wf, r)).collect())
    }

    /// Residue at a simple pole `p`.
    pub fn residue(&self, p: Complex64) -> Complex64 {
        let mut num = ZERO;
        let mut dder = ZERO;
        for ((&xj, &fj), &wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            let d = p - xj;
            num += wj * fj / d;
            dder -= wj / (d * d);
        }
        num / dder
    }
}

/// Newton steps on `Σ c_j/(x - x_j)` from `x`, kept only while they shrink.
fn polish(support: &[Complex64], coeffs: &[Complex64], mut x: Complex64) -> Complex64 {
    let mut last_step = f64::INFINITY;
    for _ in 0..8 {
        let mut f = ZERO;
        let mut df = ZERO;
        for (&xj, &c) in support.iter().zip(coeffs) {
            let d = x - xj;
            if d == ZERO {
                return x;
            }
            let q = c / d;
            f += q;
            df -= q / d;
        }
        let step = f / df;
        if !(step.norm() < 0.5 * last_step) {
            break;
        }
        x -= step;
        last_step = step.norm();
        if last_step <= 4.0 * f64::EPSILON * x.norm() {
            break;
        }
    }
    x
}

/// Roots of `Σ c_j/(x - x_j)`: eigenvalues of `diag(x_j) + e u^T` with
/// `u_j = -c_j (x_j - σ)/Σc`, which are the roots together with `σ`.
fn arrowhead_roots(support: &[Complex64], coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = support.len();
    if m < 2 {
        return Ok(Vec::new());
    }
    let total: Complex64 = coeffs.iter().sum();
    let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
    if total.norm() <= 1e-14 * scale {
        return Err(Error::DegeneratePartialFraction {
            separation: total.norm() / scale,
        });
    }
    let center: Complex64 = support.iter().sum::<Complex64>() / m as f64;
    let radius = support.iter().map(|x| (x - center).norm()).fold(0.0, f64::max);
    for side in [1.0, -1.0] {
        let sigma = center + Complex64::new(0.0, side * (2.0 * radius + 1.0));
        let u: Vec<Complex64> = support
            .iter()
            .zip(coeffs)
            .map(|(&x, &c)| -c * (x - sigma) / total)
            .collect();
        let t = CMatrix::from_fn(m, m, |i, j| if i == j { support[i] + u[j] } else { u[j] });
        let mut eig = eigenvalues(&t)?;
        eig.sort_by(|a, b| (a - sigma).norm().partial_cmp(&(b - sigma).norm()).unwrap());
        let gap = (eig[1] - sigma).norm();
        if (eig[0] - sigma).norm() < 1e-6 * gap {
            eig.remove(0);
            return Ok(eig);
        }
    }
    Err(Error::DegeneratePartialFraction { separation: 0.0 })
}

/// Greedy AAA on `(points, values)` until the sample residual drops below
/// `tol · max|f|` or the degree reaches `max_degree`.
pub fn aaa(points: &[Complex64], values: &[Complex64], tol: f64, max_degree: usize) -> Result<Barycentric> {
    let n = points.len();
    if n != values.len() || n < 2 {
        return Err(Error::Shape(format!("{} points for {} values", n, values.len())));
    }
    let fmax = values.iter().map(|f| f.norm()).fold(0.0, f64::max);
    let mean = values.iter().sum::<Complex64>() / n as f64;
    let mut approx = vec![mean; n];
    let mut in_support = vec![false; n];
    let mut support: Vec<usize> = Vec::new();
    let mut weights: Vec<Complex64> = Vec::new();
    while support.len() <= max_degree {
        let next = (0..n)
            .filter(|&i| !in_support[i])
            .max_by(|&a, &b| {
                (values[a] - approx[a])
                    .norm()
                    .partial_cmp(&(values[b] - approx[b]).norm())
                    .unwrap()
            })
            .ok_or_else(|| Error::Shape("AAA ran out of sample points".into()))?;
        in_support[next] = true;
        support.push(next);
        let rows: Vec<usize> = (0..n).filter(|&i| !in_support[i]).collect();
        let m = support.len();
        if rows.len() < m {
            break;
        }
        let cauchy = CMatrix::from_fn(rows.len(), m, |i, k| 1.0 / (points[rows[i]] - points[support[k]]));
        let loewner = CMatrix::from_fn(rows.len(), m, |i, k| {
            (values[rows[i]] - values[support[k]]) * cauchy[(i, k)]
        });
        weights = smallest_right_singular_vector(&loewner)?.1;
        let mut worst: f64 = 0.0;
        for (i, &row) in rows.iter().enumerate() {
            let mut num = ZERO;
            let mut den = ZERO;
            for k in 0..m {
                let c = weights[k] * cauchy[(i, k)];
                num += c * values[support[k]];
                den += c;
            }
            approx[row] = num / den;
            worst = worst.max((values[row] - approx[row]).norm());
        }
        for &k in &support {
            approx[k] = values[k];
        }
        if worst <= tol * fmax {
            break;
        }
    }
    Ok(Barycentric {
        support: support.iter().map(|&i| points[i]).collect(),
        values: support.iter().map(|&i| values[i]).collect(),
        weights,
    })
}

/// Rational kernel with zeros and poles split by modulus. Inside lists are the
/// reciprocals of the outside lists, entry by entry, and outside lists are
/// sorted by increasing modulus.
#[derive(Clone, Debug, Serialize)]
#[allow(non_snake_case)]
pub struct RationalKernel {
    pub K1: Complex64,
    pub zeros_in: Vec<Complex64>,
    pub poles_in: Vec<Complex64>,
    pub zeros_out: Vec<Complex64>,
    pub poles_out: Vec<Complex64>,
    pub K1_plus: Complex64,
    pub K1_minus: Complex64,
    pub fit_error: f64,
    pub reciprocal_defect: f64,
    pub anchor: Anchor,
    pub attempts: usize,
}

impl RationalKernel {
    /// Total number of zeros (equal to the number of poles).
    pub fn degree(&self) -> usize {
        self.zeros_in.len() + self.zeros_out.len()
    }

    /// `K̃(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.K1 * shape(z, &self.zeros_in, &self.poles_in) * shape(z, &self.zeros_out, &self.poles_out)
    }

    /// `max |z⁺z⁻ - 1|` and `max |p⁺p⁻ - 1|` over the pairs.
    pub fn pair_defect(&self) -> f64 {
        pair_defect(&self.zeros_out, &self.zeros_in).max(pair_defect(&self.poles_out, &self.poles_in))
    }
}

fn pair_defect(outside: &[Complex64], inside: &[Complex64]) -> f64 {
    outside
        .iter()
        .zip(inside)
        .map(|(a, b)| (a * b - 1.0).norm())
        .fold(0.0, f64::max)
}

/// `Π (z - zeros)/(z - poles)`, multiplied pairwise.
fn shape(z: Complex64, zeros: &[Complex64], poles: &[Complex64]) -> Complex64 {
    zeros
        .iter()
        .zip(poles)
        .fold(ONE, |acc, (&zl, &pl)| acc * (z - zl) / (z - pl))
}

/// `K̃₁⁺` making `K̃⁺(±1) = K̃⁻(±1)`.
fn k1_plus(rk_eval: Complex64, zeros_out: &[Complex64], poles_out: &[Complex64], anchor: Anchor) -> Complex64 {
    let a = Complex64::new(anchor.z(), 0.0);
    let prod = zeros_out
        .iter()
        .zip(poles_out)
        .fold(ONE, |acc, (&zl, &pl)| acc * (a - pl) / (a - zl));
    rk_eval.sqrt() * prod
}

/// Sample abscissae `t ∈ (0, π)`.
fn sample_grid(tb: f64, n_t: usize, jitter: f64, branch_levels: usize) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..n_t)
        .map(|j| PI * (j as f64 + 0.5 + jitter) / n_t as f64)
        .filter(|&t| (t - tb).abs() >= SAMPLE_EXCLUSION && t > 0.0 && t < PI)
        .collect();
    let mut h = SAMPLE_EXCLUSION;
    for _ in 0..branch_levels {
        h *= 0.5;
        for t in [tb - h, tb + h] {
            if t > 0.0 && t < PI {
                ts.push(t);
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts
}

fn kernel_on_circle(cfg: &ProblemConfig, t: f64) -> Result<Complex64> {
    fast_unchecked(cfg, Complex64::new(t, 0.0), 2, FACTOR_KERNEL_L)
}

/// Held-out circle points at least [`HELD_OUT_EXCLUSION`] from a branch point.
pub fn held_out_points(ks: f64) -> Vec<f64> {
    (0..HELD_OUT_POINTS)
        .map(|j| -PI + TAU * (j as f64 + FRAC_1_PI) / HELD_OUT_POINTS as f64)
        .filter(|&t| crate::kernel::branch_distance(ks, Complex64::new(t, 0.0)) >= HELD_OUT_EXCLUSION)
        .collect()
}

/// `a` with `a + 1/a = 2ξ` and `|a| >= 1`.
fn lift(xi: Complex64) -> Complex64 {
    let s = (xi - 1.0).sqrt() * (xi + 1.0).sqrt();
    let (a, b) = (xi + s, xi - s);
    if a.norm() >= b.norm() {
        a
    } else {
        b
    }
}

/// AAA fit of `K` on the unit circle, with resampling on failure.
pub fn aaa_fit(cfg: &ProblemConfig, opts: &AaaOptions) -> Result<RationalKernel> {
    cfg.validate()?;
    opts.validate()?;
    let ks = cfg.ks();
    let tb = folded_branch_point(ks);
    let anchor = Anchor::for_config(cfg);
    let held_out = held_out_points(ks);
    let held_values: Vec<Complex64> = held_out
        .iter()
        .map(|&t| kernel_on_circle(cfg, t))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut defect = FitDefect::default();
    for attempt in 0..=opts.retries {
        let jitter = if attempt == 0 { 0.0 } else { rng.gen_range(-0.4..0.4) };
        let ts = sample_grid(tb, opts.n_samples / 2, jitter, opts.branch_levels);
        let xs: Vec<Complex64> = ts.iter().map(|t| Complex64::new(t.cos(), 0.0)).collect();
        let fs: Vec<Complex64> = ts.iter().map(|&t| kernel_on_circle(cfg, t)).collect::<Result<_>>()?;
        let candidate = match fit_once(&ts, &xs, &fs, opts, anchor, &held_out, &held_values) {
            Ok(c) => c,
            Err(Error::DegeneratePartialFraction { .. }) | Err(Error::IterationFailure(_)) => continue,
            Err(e) => return Err(e),
        };
        match candidate {
            Ok(mut rk) => {
                rk.attempts = attempt + 1;
                return Ok(rk);
            }
            Err(d) => defect = d,
        }
    }
    Err(Error::ApproximationFailure {
        attempts: opts.retries + 1,
        defect,
    })
}

type Attempt = std::result::Result<RationalKernel, FitDefect>;

fn fit_once(
    ts: &[f64],
    xs: &[Complex64],
    fs: &[Complex64],
    opts: &AaaOptions,
    anchor: Anchor,
    held_out: &[f64],
    held_values: &[Complex64],
) -> Result<Attempt> {
    let bary = aaa(xs, fs, opts.tol, opts.max_degree)?;
    let mut poles = bary.poles()?;
    let mut zeros = bary.zeros()?;
    let scale = bary.at_infinity().norm().max(f64::MIN_POSITIVE);
    // Froissart doublets: drop the pole and the zero nearest to it
    let mut kept = Vec::with_capacity(poles.len());
    for p in poles.drain(..) {
        if bary.residue(p).norm() < SPURIOUS_RESIDUE * scale && !zeros.is_empty() {
            let nearest = (0..zeros.len())
                .min_by(|&a, &b| (zeros[a] - p).norm().partial_cmp(&(zeros[b] - p).norm()).unwrap())
                .unwrap();
            zeros.remove(nearest);
        } else {
            kept.push(p);
        }
    }
    let poles = kept;
    let (zeros, poles) = refine_product(xs, fs, scale, zeros, poles)?;

    let mut zeros_out: Vec<Complex64> = zeros.iter().map(|&x| lift(x)).collect();
    let mut poles_out: Vec<Complex64> = poles.iter().map(|&x| lift(x)).collect();
    let near_circle = zeros_out
        .iter()
        .chain(&poles_out)
        .filter(|a| (a.norm() - 1.0).abs() < CIRCLE_GAP)
        .count();
    let by_modulus = |a: &Complex64, b: &Complex64| a.norm().partial_cmp(&b.norm()).unwrap();
    zeros_out.sort_by(by_modulus);
    poles_out.sort_by(by_modulus);
    let zeros_in: Vec<Complex64> = zeros_out.iter().map(|a| 1.0 / a).collect();
    let poles_in: Vec<Complex64> = poles_out.iter().map(|a| 1.0 / a).collect();

    let mut defect = FitDefect {
        fit_error: f64::INFINITY,
        reciprocal_defect: pair_defect(&zeros_out, &zeros_in).max(pair_defect(&poles_out, &poles_in)),
        zeros_inside: zeros_in.len(),
        zeros_outside: zeros_out.len(),
        poles_inside: poles_in.len(),
        poles_outside: poles_out.len(),
        near_circle,
    };
    if near_circle > 0 || zeros_out.len() != poles_out.len() {
        return Ok(Err(defect));
    }

    // K̃₁ by least squares over the samples on the product form
    let mut num = ZERO;
    let mut den = 0.0;
    for (&t, &f) in ts.iter().zip(fs) {
        let z = Complex64::from_polar(1.0, t);
        let p = shape(z, &zeros_in, &poles_in) * shape(z, &zeros_out, &poles_out);
        num += p.conj() * f;
        den += p.norm_sqr();
    }
    let k1 = num / den;
    let mut rk = RationalKernel {
        K1: k1,
        zeros_in,
        poles_in,
        zeros_out,
        poles_out,
        K1_plus: ZERO,
        K1_minus: ZERO,
        fit_error: 0.0,
        reciprocal_defect: defect.reciprocal_defect,
        anchor,
        attempts: 0,
    };
    rk.fit_error = held_out
        .iter()
        .zip(held_values)
        .map(|(&t, &k)| (rk.eval(Complex64::from_polar(1.0, t)) - k).norm())
        .fold(0.0, f64::max);
    defect.fit_error = rk.fit_error;
    if !(rk.fit_error <= opts.max_fit_error) || rk.reciprocal_defect > MAX_RECIPROCAL_DEFECT {
        return Ok(Err(defect));
    }
    rk.K1_plus = k1_plus(rk.eval(Complex64::new(anchor.z(), 0.0)), &rk.zeros_out, &rk.poles_out, anchor);
    rk.K1_minus = rk.K1 / rk.K1_plus;
    Ok(Ok(rk))
}

/// Damped Gauss–Newton on `c Π (x - ζ)/(x - π)` against the samples, starting
/// from the barycentric roots; steps are accepted only while the residual drops.
fn refine_product(
    xs: &[Complex64],
    fs: &[Complex64],
    scale: f64,
    mut zeros: Vec<Complex64>,
    mut poles: Vec<Complex64>,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if zeros.len() != poles.len() {
        return Ok((zeros, poles));
    }
    let n = zeros.len();
    let product = |zs: &[Complex64], ps: &[Complex64]| -> Vec<Complex64> {
        xs.iter().map(|&x| shape(x, zs, ps)).collect()
    };
    let best_constant = |p: &[Complex64]| -> Complex64 {
        let num: Complex64 = p.iter().zip(fs).map(|(p, f)| p.conj() * f).sum();
        let den: f64 = p.iter().map(|p| p.norm_sqr()).sum();
        num / den
    };
    let residual_norm = |p: &[Complex64], c: Complex64| -> f64 {
        p.iter().zip(fs).map(|(p, f)| (f - c * p).norm_sqr()).sum::<f64>().sqrt()
    };
    let mut p = product(&zeros, &poles);
    let mut c = best_constant(&p);
    let mut current = residual_norm(&p, c);
    for _ in 0..REFINE_STEPS {
        let jac = CMatrix::from_fn(xs.len(), 2 * n + 1, |j, i| {
            let r = c * p[j];
            if i == 2 * n {
                r
            } else if i < n {
                -r / (xs[j] - zeros[i])
            } else {
                r / (xs[j] - poles[i - n])
            }
        });
        let rhs: Vec<Complex64> = fs.iter().zip(&p).map(|(f, p)| f - c * p).collect();
        let frob = jac.as_slice().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let cols = 2 * n + 1;
        let mut best: Option<(f64, Vec<Complex64>, Vec<Complex64>, Vec<Complex64>, Complex64)> = None;
        for damping in [1e-6, 1e-8] {
            let mu = damping * frob / (cols as f64).sqrt();
            let augmented = CMatrix::from_fn(xs.len() + cols, cols, |j, i| {
                if j < xs.len() {
                    jac[(j, i)]
                } else if j - xs.len() == i {
                    Complex64::new(mu, 0.0)
                } else {
                    ZERO
                }
            });
            let mut padded = rhs.clone();
            padded.resize(xs.len() + cols, ZERO);
            let step = svd_least_squares(&augmented, &padded)?.solution;
            let trial_zeros: Vec<Complex64> = zeros.iter().zip(&step).map(|(z, d)| z + d).collect();
            let trial_poles: Vec<Complex64> = poles.iter().zip(&step[n..]).map(|(z, d)| z + d).collect();
            let trial_p = product(&trial_zeros, &trial_poles);
            let trial_c = best_constant(&trial_p);
            let trial = residual_norm(&trial_p, trial_c);
            if best.as_ref().is_none_or(|b| trial < b.0) {
                best = Some((trial, trial_zeros, trial_poles, trial_p, trial_c));
            }
        }
        let Some((trial, trial_zeros, trial_poles, trial_p, trial_c)) = best else {
            break;
        };
        if !(trial < current) {
            break;
        }
        let gain = current - trial;
        zeros = trial_zeros;
        poles = trial_poles;
        p = trial_p;
        c = trial_c;
        current = trial;
        if gain <= 1e-3 * current || current <= f64::EPSILON * scale {
            break;
        }
    }
    Ok((zeros, poles))
}

/// Analytic factors `K̃⁺` (outside zeros and poles) and `K̃⁻` (inside ones).
#[derive(Clone, Debug, Serialize)]
pub struct RationalFactors {
    pub k1_plus: Complex64,
    pub k1_minus: Complex64,
    pub zeros_plus: Vec<Complex64>,
    pub poles_plus: Vec<Complex64>,
    pub zeros_minus: Vec<Complex64>,
    pub poles_minus: Vec<Complex64>,
    pub anchor: Anchor,
}

impl RationalFactors {
    pub fn k_plus(&self, z: Complex64) -> Complex64 {
        self.k1_plus * shape(z, &self.zeros_plus, &self.poles_plus)
    }

    pub fn k_minus(&self, z: Complex64) -> Complex64 {
        self.k1_minus * shape(z, &self.zeros_minus, &self.poles_minus)
    }

    /// `K̃⁺(z) K̃⁻(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.k_plus(z) * self.k_minus(z)
    }
}

/// Split of `rk` normalised at `anchor`.
pub fn factor_rational(rk: &RationalKernel, anchor: Anchor) -> RationalFactors {
    let k1p = k1_plus(rk.eval(Complex64::new(anchor.z(), 0.0)), &rk.zeros_out, &rk.poles_out, anchor);
    RationalFactors {
        k1_plus: k1p,
        k1_minus: rk.K1 / k1p,
        zeros_plus: rk.zeros_out.clone(),
        poles_plus: rk.poles_out.clone(),
        zeros_minus: rk.zeros_in.clone(),
        poles_minus: rk.poles_in.clone(),
        anchor,
    }
}

/// `λ_0..λ_M` from the partial fractions of `1/K̃⁺`.
pub fn lambda_from_rational(rk: &RationalKernel, m: usize) -> Result<LambdaCoeffs> {
    let zp = &rk.zeros_out;
    let pp = &rk.poles_out;
    let mut separation = f64::INFINITY;
    for i in 0..zp.len() {
        for j in i + 1..zp.len() {
            separation = separation.min((zp[i] - zp[j]).norm());
        }
    }
    if separation < 1e-10 {
        return Err(Error::DegeneratePartialFraction { separation });
    }
    let inv_k1 = 1.0 / rk.K1_plus;
    let residues: Vec<Complex64> = (0..zp.len())
        .map(|mi| {
            (0..zp.len()).filter(|&l| l != mi).fold(zp[mi] - pp[mi], |acc, l| {
                acc * (zp[mi] - pp[l]) / (zp[mi] - zp[l])
            })
        })
        .collect();
    let mut values = Vec::with_capacity(m + 1);
    values.push(inv_k1 * pp.iter().zip(zp).fold(ONE, |acc, (p, z)| acc * p / z));
    let inverses: Vec<Complex64> = zp.iter().map(|z| 1.0 / z).collect();
    let mut powers: Vec<Complex64> = inverses.clone();
    for _ in 1..=m {
        for (p, inv) in powers.iter_mut().zip(&inverses) {
            *p *= inv;
        }
        let s: Complex64 = residues.iter().zip(&powers).map(|(r, p)| r * p).sum();
        values.push(-inv_k1 * s);
    }
    LambdaCoeffs::new(values, LambdaSource::Rational)
}

#[cfg(test)]
mod tests {
    use std::sync::OnceLock;

    use super::*;

    fn cfg() -> ProblemConfig {
        ProblemConfig::new(1.0, 1.0, 0.01, 5.0 * PI / 6.0, 0.0).unwrap()
    }

    fn fitted() -> &'static RationalKernel {
        static FIT: OnceLock<RationalKernel> = OnceLock::new();
        FIT.get_or_init(|| aaa_fit(&cfg(), &AaaOptions::default()).unwrap())
    }

    fn circle_points(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Complex64::from_polar(1.0, rng.gen_range(-PI..PI))).collect()
    }

    #[test]
    fn aaa_recovers_a_rational_function() {
        let f = |z: Complex64| (z - Complex64::new(0.0, 0.5)) / (z - 2.0);
        let zs: Vec<Complex64> = (0..200).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / 200.0)).collect();
        let fs: Vec<Complex64> = zs.iter().map(|&z| f(z)).collect();
        let bary = aaa(&zs, &fs, 1e-13, 20).unwrap();
        assert_eq!(bary.support.len(), 2);
        let poles = bary.poles().unwrap();
        let zeros = bary.zeros().unwrap();
        assert!((poles[0] - 2.0).norm() < 1e-12, "{poles:?}");
        assert!((zeros[0] - Complex64::new(0.0, 0.5)).norm() < 1e-12, "{zeros:?}");
        assert!((bary.residue(poles[0]) - (2.0 - Complex64::new(0.0, 0.5))).norm() < 1e-11);
        let probe = Complex64::new(0.3, -0.7);
        assert!((bary.eval(probe) - f(probe)).norm() < 1e-13);
    }

    #[test]
    fn exact_recovery_of_a_symmetric_rational() {
        let k = |z: Complex64| (z - 2.0) * (z - 0.5) / ((z - 3.0) * (z - 1.0 / 3.0));
        let ts: Vec<f64> = (0..400).map(|j| PI * (j as f64 + 0.5) / 400.0).collect();
        let xs: Vec<Complex64> = ts.iter().map(|t| Complex64::new(t.cos(), 0.0)).collect();
        let fs: Vec<Complex64> = ts.iter().map(|&t| k(Complex64::from_polar(1.0, t))).collect();
        let held: Vec<f64> = (0..300).map(|j| -PI + TAU * (j as f64 + 0.3) / 300.0).collect();
        let held_values: Vec<Complex64> = held.iter().map(|&t| k(Complex64::from_polar(1.0, t))).collect();
        let rk = fit_once(&ts, &xs, &fs, &AaaOptions::default(), Anchor::Plus, &held, &held_values)
            .unwrap()
            .unwrap();
        assert_eq!(rk.zeros_out.len(), 1);
        assert_eq!(rk.poles_out.len(), 1);
        assert!((rk.zeros_out[0] - 2.0).norm() < 1e-10);
        assert!((rk.zeros_in[0] - 0.5).norm() < 1e-10);
        assert!((rk.poles_out[0] - 3.0).norm() < 1e-10);
        assert!((rk.poles_in[0] - 1.0 / 3.0).norm() < 1e-10);
        assert!((rk.K1 - 1.0).norm() < 1e-10);
        assert!(rk.fit_error < 1e-12);
    }

    #[test]
    fn kernel_fit_invariants() {
        let rk = fitted();
        assert!(rk.fit_error <= 1e-10, "{:e}", rk.fit_error);
        assert!(rk.reciprocal_defect <= 1e-6);
        assert!(rk.pair_defect() <= 1e-14);
        assert!(rk.degree() <= 2 * AaaOptions::default().max_degree);
        assert_eq!(rk.zeros_in.len(), rk.zeros_out.len());
        assert_eq!(rk.poles_in.len(), rk.poles_out.len());
        assert!(rk.zeros_in.iter().chain(&rk.poles_in).all(|z| z.norm() < 1.0));
        assert!(rk.zeros_out.iter().chain(&rk.poles_out).all(|z| z.norm() > 1.0));
        for list in [&rk.zeros_out, &rk.poles_out] {
            assert!(list.windows(2).all(|w| w[0].norm() <= w[1].norm()));
        }
        for list in [&rk.zeros_in, &rk.poles_in] {
            assert!(list.windows(2).all(|w| w[0].norm() >= w[1].norm()));
        }
        assert!((rk.K1_plus * rk.K1_minus - rk.K1).norm() <= 1e-12 * rk.K1.norm());
    }

    #[test]
    fn zeros_and_poles_imitate_the_branch_cuts() {
        let rk = fitted();
        let ks = cfg().ks();
        let near = |z: &Complex64, target: f64| (z.arg() - target).abs() < 0.2;
        // the outer pairs of the cluster drift away from the branch points
        let inner = |list: &Vec<Complex64>| list.iter().filter(|z| (z.norm() - 1.0).abs() < 0.1).count();
        assert!(inner(&rk.zeros_out) >= 5);
        for z in rk.zeros_out.iter().chain(&rk.poles_out).filter(|z| z.norm() < 1.1) {
            assert!(near(z, -ks), "{z}");
        }
        for z in rk.zeros_in.iter().chain(&rk.poles_in).filter(|z| z.norm() > 1.0 / 1.1) {
            assert!(near(z, ks), "{z}");
        }
    }

    #[test]
    fn held_out_fit_matches_the_kernel() {
        let rk = fitted();
        let c = cfg();
        for t in held_out_points(c.ks()).into_iter().step_by(37) {
            let k = kernel_on_circle(&c, t).unwrap();
            let z = Complex64::from_polar(1.0, t);
            assert!((rk.eval(z) - k).norm() <= 1e-10, "t = {t}");
        }
    }

    #[test]
    fn product_identity() {
        let rk = fitted();
        let f = factor_rational(rk, rk.anchor);
        for z in circle_points(64, 1) {
            let direct = rk.eval(z);
            assert!((f.eval(z) - direct).norm() <= 1e-13 * direct.norm());
        }
    }

    #[test]
    fn swap_identity() {
        let rk = fitted();
        let f = factor_rational(rk, rk.anchor);
        for z in circle_points(64, 2) {
            let plus = f.k_plus(z);
            assert!((plus - f.k_minus(1.0 / z)).norm() <= 1e-6 * plus.norm());
        }
        for anchor in [Anchor::Plus, Anchor::Minus] {
            let f = factor_rational(rk, anchor);
            let a = Complex64::new(anchor.z(), 0.0);
            assert!((f.k_plus(a) - f.k_minus(1.0 / a)).norm() <= 1e-14 * f.k_plus(a).norm());
        }
    }

    #[test]
    fn factors_are_analytic_on_their_sides() {
        let f = factor_rational(fitted(), Anchor::Plus);
        assert!(f.zeros_plus.iter().chain(&f.poles_plus).all(|z| z.norm() > 1.0));
        assert!(f.zeros_minus.iter().chain(&f.poles_minus).all(|z| z.norm() < 1.0));
    }

    #[test]
    fn lambda_generating_function() {
        let rk = fitted();
        let f = factor_rational(rk, rk.anchor);
        let lam = lambda_from_rational(rk, 200).unwrap();
        assert_eq!(lam.source, LambdaSource::Rational);
        for z in circle_points(8, 3) {
            let z = 0.5 * z;
            assert!((lam.eval(z) * f.k_plus(z) - 1.0).norm() <= 1e-9);
        }
        assert!((lam.get(0) - 1.0 / f.k_plus(ZERO)).norm() <= 1e-13 * lam.get(0).norm());
    }

    #[test]
    fn lambda_decays() {
        let lam = lambda_from_rational(fitted(), 1000).unwrap();
        assert!(lam.get(1000).norm() < 1e-3 * lam.get(0).norm());
    }

    #[test]
    fn coincident_zeros_are_rejected() {
        let mut rk = fitted().clone();
        rk.zeros_out[1] = rk.zeros_out[0] + 1e-12;
        assert!(matches!(
            lambda_from_rational(&rk, 10),
            Err(Error::DegeneratePartialFraction { .. })
        ));
    }

    #[test]
    fn options_are_validated() {
        let opts = AaaOptions {
            n_samples: 100,
            ..AaaOptions::default()
        };
        assert!(matches!(aaa_fit(&cfg(), &opts), Err(Error::Config(_))));
    }

    #[test]
    fn exhausted_retries_report_the_defect() {
        let opts = AaaOptions {
            max_fit_error: 1e-30,
            retries: 1,
            ..AaaOptions::default()
        };
        match aaa_fit(&cfg(), &opts) {
            Err(Error::ApproximationFailure { attempts, defect }) => {
                assert_eq!(attempts, 2);
                assert!(defect.fit_error > 1e-30 && defect.fit_error < 1e-8);
                assert_eq!(defect.zeros_inside, defect.zeros_outside);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn agrees_with_the_cauchy_route_inside() {
        let rk = fitted();
        let f = factor_rational(rk, rk.anchor);
        let cauchy = super::super::CauchyFactorization::new(&cfg(), super::super::DEFAULT_QUADRATURE_NODES).unwrap();
        for j in 0..32 {
            let z = Complex64::from_polar(0.9, TAU * j as f64 / 32.0);
            let a = f.k_plus(z);
            assert!((a - cauchy.k_plus(z).unwrap()).norm() <= 1e-6 * a.norm());
        }
    }
}
