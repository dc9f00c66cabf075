//! The discrete Wiener–Hopf kernel
//!
//! `K(z) = H0(ka) + sum_{l>=1} (z^l + z^-l) H0(ks l)`
//!
//! evaluated three ways: the truncated Hankel sum, the same sum with an
//! asymptotic tail-end estimate, and the fast lattice-sum formula in the
//! variable `t` (`z = e^{it}`) with optional zeta-function acceleration.

use std::f64::consts::{FRAC_1_PI, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{hankel0, zeta_odd, EULER_GAMMA};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Minimum distance (in `t`) kept from the branch points `t = ±ks + 2πl`.
pub const BRANCH_EXCLUSION: f64 = 1e-8;
/// Allowed deviation of `|z|` from 1 for the circle-only methods.
pub const CIRCLE_TOLERANCE: f64 = 1e-10;

/// Physical parameters of a run: wavenumber `k`, spacing `s`, cylinder radius
/// `a`, wedge half-angle `alpha` and incidence angle `theta_inc` (radians).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub k: f64,
    pub s: f64,
    pub a: f64,
    pub alpha: f64,
    pub theta_inc: f64,
}

impl ProblemConfig {
    pub fn new(k: f64, s: f64, a: f64, alpha: f64, theta_inc: f64) -> Result<Self> {
        let cfg = Self {
            k,
            s,
            a,
            alpha,
            theta_inc,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.k, self.s, self.a, self.alpha, self.theta_inc];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("all physical parameters must be finite".into()));
        }
        if self.k <= 0.0 {
            return Err(Error::Config(format!("wavenumber must be positive, got {}", self.k)));
        }
        if self.s <= 0.0 {
            return Err(Error::Config(format!("spacing must be positive, got {}", self.s)));
        }
        if self.a <= 0.0 || self.a >= 0.5 * self.s {
            return Err(Error::Config(format!(
                "radius must satisfy 0 < a < s/2, got a = {} with s = {}",
                self.a, self.s
            )));
        }
        if self.alpha.sin() <= self.a / self.s {
            return Err(Error::Config(format!(
                "wedge half-angle {} violates sin(alpha) > a/s = {}",
                self.alpha,
                self.a / self.s
            )));
        }
        Ok(())
    }

    pub fn ks(&self) -> f64 {
        self.k * self.s
    }

    pub fn ka(&self) -> f64 {
        self.k * self.a
    }

    /// Soft violations of the small-scatterer regime.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.ka() > 0.5 {
            out.push(format!("ka = {} exceeds 0.5; the point-scatterer model is crude", self.ka()));
        }
        if self.a > 0.25 * self.s {
            out.push(format!("a = {} exceeds s/4 = {}", self.a, 0.25 * self.s));
        }
        out
    }
}

/// Which formula to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "order", rename_all = "snake_case")]
pub enum KernelVariant {
    Direct,
    /// Tail-end corrections: 1 (leading term) or 2 (with the `1/(2L)` bracket).
    TailCorrected(u32),
    /// Fast formula with 0, 1 or 2 zeta corrections.
    Fast(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelMethod {
    #[serde(flatten)]
    pub variant: KernelVariant,
    #[serde(rename = "L")]
    pub truncation: usize,
}

impl Default for KernelMethod {
    fn default() -> Self {
        Self {
            variant: KernelVariant::Fast(2),
            truncation: 500,
        }
    }
}

impl KernelMethod {
    pub fn new(variant: KernelVariant, truncation: usize) -> Result<Self> {
        let method = Self { variant, truncation };
        method.validate()?;
        Ok(method)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 2 {
            return Err(Error::Config(format!(
                "kernel truncation L must be at least 2, got {}",
                self.truncation
            )));
        }
        match self.variant {
            KernelVariant::TailCorrected(n) if !(1..=2).contains(&n) => Err(Error::UnsupportedOrder(n)),
            KernelVariant::Fast(n) if n > 2 => Err(Error::UnsupportedOrder(n)),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self.variant {
            KernelVariant::Direct => "direct".into(),
            KernelVariant::TailCorrected(n) => format!("tail{n}"),
            KernelVariant::Fast(n) => format!("fast{n}"),
        }
    }
}

/// Evaluate `K(z)` with the selected method.
pub fn kernel(cfg: &ProblemConfig, z: Complex64, method: KernelMethod) -> Result<Complex64> {
    method.validate()?;
    match method.variant {
        KernelVariant::Direct => kernel_direct(cfg, z, method.truncation),
        KernelVariant::TailCorrected(n) => kernel_tail(cfg, z, method.truncation, n),
        KernelVariant::Fast(n) => {
            let t = t_from_z(cfg, z)?;
            kernel_fast(cfg, t, n, method.truncation)
        }
    }
}

/// `t = -i log z` for `z` inside the annulus `e^{-ks/10} < |z| < e^{ks/10}`.
pub fn t_from_z(cfg: &ProblemConfig, z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    let r = z.norm();
    let bound = 0.1 * cfg.ks();
    if r == 0.0 || r.ln().abs() >= bound {
        return Err(Error::Domain(format!(
            "|z| = {r} lies outside the annulus of convergence (|ln|z|| < {bound})"
        )));
    }
    Ok(Complex64::new(z.arg(), -r.ln()))
}

/// Truncated Hankel sum `H0(ka) + sum_{l=1}^{L-1} (z^l + z^-l) H0(ks l)`.
pub fn kernel_direct(cfg: &ProblemConfig, z: Complex64, truncation: usize) -> Result<Complex64> {
    let t = circle_angle(cfg, z)?;
    partial_sum(cfg, t, truncation)
}

/// Truncated sum plus the asymptotic tail-end estimate with `corrections`
/// orders (1 or 2).
pub fn kernel_tail(
    cfg: &ProblemConfig,
    z: Complex64,
    truncation: usize,
    corrections: u32,
) -> Result<Complex64> {
    if !(1..=2).contains(&corrections) {
        return Err(Error::UnsupportedOrder(corrections));
    }
    if truncation < 2 {
        return Err(Error::Config("kernel truncation L must be at least 2".into()));
    }
    let t = circle_angle(cfg, z)?;
    Ok(partial_sum(cfg, t, truncation)? + tail(cfg, t, truncation, corrections))
}

/// Asymptotic estimate of `sum_{l>=L} (z^l + z^-l) H0(ks l)` for `z = e^{it}`.
pub fn tail(cfg: &ProblemConfig, t: Complex64, truncation: usize, corrections: u32) -> Complex64 {
    let ks = cfg.ks();
    let l = truncation as f64;
    let prefactor = Complex64::new(1.0, -1.0) / (PI * ks * l).sqrt();
    let piece = |phase: Complex64| {
        // w = e^{i phase}, w^L computed from the phase directly
        let w = (I * phase).exp();
        let wl = (I * phase * l).exp();
        let lead = wl / (1.0 - w);
        if corrections >= 2 {
            lead * (1.0 - (w / (1.0 - w) + I / (4.0 * ks)) / (2.0 * l))
        } else {
            lead
        }
    };
    prefactor * (piece(t + ks) + piece(ks - t))
}

fn partial_sum(cfg: &ProblemConfig, t: Complex64, truncation: usize) -> Result<Complex64> {
    let ks = cfg.ks();
    let mut sum = Complex64::new(0.0, 0.0);
    for l in (1..truncation).rev() {
        let lf = l as f64;
        let zl = (I * t * lf).exp();
        let zinv = (-I * t * lf).exp();
        sum += (zl + zinv) * hankel0(ks * lf)?;
    }
    Ok(hankel0(cfg.ka())? + sum)
}

fn circle_angle(cfg: &ProblemConfig, z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    let r = z.norm();
    if (r - 1.0).abs() > CIRCLE_TOLERANCE {
        return Err(Error::Domain(format!(
            "the Hankel-sum kernel converges only on |z| = 1, got |z| = {r}"
        )));
    }
    let t = Complex64::new(z.arg(), -r.ln());
    check_branch_distance(cfg, t)?;
    Ok(t)
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite argument {z}")))
    }
}

/// Distance from `t` to the nearest branch point `±ks + 2πl`.
pub fn branch_distance(ks: f64, t: Complex64) -> f64 {
    [ks, -ks]
        .iter()
        .map(|&b| {
            let d = t - b;
            let shift = (d.re / TAU).round() * TAU;
            (d - shift).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

fn check_branch_distance(cfg: &ProblemConfig, t: Complex64) -> Result<()> {
    let distance = branch_distance(cfg.ks(), t);
    if distance <= BRANCH_EXCLUSION {
        return Err(Error::BranchPointProximity { t: t.re, distance });
    }
    Ok(())
}

/// Square root with argument in `(-π/4, 3π/4]`, i.e. cut along the negative
/// imaginary axis of `w`.
fn sqrt_cut_down(w: Complex64) -> Complex64 {
    let mut phi = w.arg();
    if phi <= -0.5 * PI {
        phi += TAU;
    }
    Complex64::from_polar(w.norm().sqrt(), 0.5 * phi)
}

/// `sqrt((ks)^2 - u^2)` on the branch with `Im >= 0` for real `u` and value
/// `ks` at `u = 0`; cuts leave `u = ±ks` vertically.
fn lattice_root(ks: f64, u: Complex64) -> Complex64 {
    sqrt_cut_down(ks + u) * sqrt_cut_down(ks - u)
}

/// Fast formula for `K(e^{it})` with the `l`-sum truncated at `L` and
/// `corrections` zeta-accelerated terms (0, 1 or 2). Converges like
/// `L^{-(2N+2)}` and is valid for complex `t` off the branch cuts.
pub fn kernel_fast(cfg: &ProblemConfig, t: Complex64, corrections: u32, truncation: usize) -> Result<Complex64> {
    if corrections > 2 {
        return Err(Error::UnsupportedOrder(corrections));
    }
    if truncation < 1 {
        return Err(Error::Config("kernel truncation L must be positive".into()));
    }
    check_finite(t)?;
    check_branch_distance(cfg, t)?;
    fast_unchecked(cfg, t, corrections, truncation)
}

/// Fast formula without the branch-point proximity check; quadrature rules
/// graded toward the branch points sample closer than [`BRANCH_EXCLUSION`].
pub(crate) fn fast_unchecked(
    cfg: &ProblemConfig,
    t: Complex64,
    corrections: u32,
    truncation: usize,
) -> Result<Complex64> {
    let ks = cfg.ks();
    let ks2 = ks * ks;
    let t2 = t * t;
    let c3 = (2.0 * t2 + ks2) / (4.0 * I * PI.powi(3));
    let c5 = (8.0 * t2 * t2 + 24.0 * ks2 * t2 + 3.0 * ks2 * ks2) / (64.0 * I * PI.powi(5));

    let mut sum = Complex64::new(0.0, 0.0);
    for l in (1..=truncation).rev() {
        let shift = TAU * l as f64;
        let lf = l as f64;
        let mut term = 2.0 / lattice_root(ks, shift - t)
            + 2.0 / lattice_root(ks, shift + t)
            + I * (2.0 * FRAC_1_PI / lf);
        if corrections >= 1 {
            term -= c3 / lf.powi(3);
        }
        if corrections >= 2 {
            term -= c5 / lf.powi(5);
        }
        sum += term;
    }

    let mut value = hankel0(cfg.ka())? - 1.0
        - I * (2.0 * FRAC_1_PI) * (EULER_GAMMA + (ks / (4.0 * PI)).ln())
        + 2.0 / lattice_root(ks, t);
    if corrections >= 1 {
        value += c3 * zeta_odd(3)?;
    }
    if corrections >= 2 {
        value += c5 * zeta_odd(5)?;
    }
    let value = value + sum;
    check_finite(value)?;
    Ok(value)
}

/// Truncation errors of one method against a reference value at `z = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct RateSeries {
    pub method: String,
    pub truncations: Vec<usize>,
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub expected_slope: f64,
}

/// Truncation used for the reference value of [`rate_ladder`].
pub const REFERENCE_TRUNCATION: usize = 100_000;

/// Convergence study of all six methods at `z = 1`.
///
/// Each method is sampled on a window of `L` where its error is cleanly above
/// double-precision roundoff; the fitted log-log slopes should approach the
/// asymptotic orders `-1/2, -3/2, -5/2, -2, -4, -6`.
pub fn rate_ladder(cfg: &ProblemConfig) -> Result<Vec<RateSeries>> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let reference = kernel_fast(cfg, zero, 2, REFERENCE_TRUNCATION)?;
    let hankel_window = vec![100, 316, 1000, 3162, 10000];
    let plan: Vec<(KernelVariant, Vec<usize>, f64)> = vec![
        (KernelVariant::Direct, hankel_window.clone(), -0.5),
        (KernelVariant::TailCorrected(1), hankel_window.clone(), -1.5),
        (KernelVariant::TailCorrected(2), hankel_window, -2.5),
        (KernelVariant::Fast(0), vec![20, 40, 80, 160, 320], -2.0),
        (KernelVariant::Fast(1), vec![20, 40, 80, 160], -4.0),
        (KernelVariant::Fast(2), vec![12, 14, 16, 18, 20], -6.0),
    ];
    let mut out = Vec::with_capacity(plan.len());
    for (variant, truncations, expected_slope) in plan {
        let mut values = Vec::with_capacity(truncations.len());
        for &l in &truncations {
            let method = KernelMethod::new(variant, l)?;
            values.push(kernel(cfg, one, method)?);
        }
        let errors: Vec<f64> = values.iter().map(|v| (v - reference).norm()).collect();
        let xs: Vec<f64> = truncations.iter().map(|&l| l as f64).collect();
        let slope = crate::fit::loglog_slope(&xs, &errors)
            .ok_or_else(|| Error::IterationFailure("degenerate convergence data".into()))?;
        out.push(RateSeries {
            method: KernelMethod::new(variant, 2)?.label(),
            truncations,
            values,
            errors,
            slope,
            expected_slope,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> ProblemConfig {
        ProblemConfig::new(1.0, 1.0, 0.01, 5.0 * PI / 6.0, 0.0).unwrap()
    }

    fn reference() -> Complex64 {
        kernel_fast(&cfg(), Complex64::new(0.0, 0.0), 2, 100_000).unwrap()
    }

    fn slope(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let (lx, ly): (Vec<f64>, Vec<f64>) = (xs.iter().map(|x| x.ln()).collect(), ys.iter().map(|y| y.ln()).collect());
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    }

    fn circle_points(n: usize, seed: u64) -> Vec<Complex64> {
        let ks = cfg().ks();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < n {
            let t: f64 = rng.gen_range(-PI..PI);
            if branch_distance(ks, Complex64::new(t, 0.0)) > 1e-3 {
                out.push(Complex64::from_polar(1.0, t));
            }
        }
        out
    }

    #[test]
    fn direct_two_terms() {
        let c = cfg();
        let z = Complex64::from_polar(1.0, 0.3);
        let want = hankel0(c.ka()).unwrap() + (z + 1.0 / z) * hankel0(c.ks()).unwrap();
        let got = kernel_direct(&c, z, 2).unwrap();
        assert!((got - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn direct_reciprocal_symmetry() {
        let c = cfg();
        for z in circle_points(16, 1) {
            let a = kernel_direct(&c, z, 300).unwrap();
            let b = kernel_direct(&c, 1.0 / z, 300).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm());
        }
    }

    #[test]
    fn direct_rejects_off_circle_and_branch_points() {
        let c = cfg();
        assert!(matches!(kernel_direct(&c, Complex64::new(1.1, 0.0), 10), Err(Error::Domain(_))));
        let branch = Complex64::from_polar(1.0, c.ks());
        assert!(matches!(
            kernel_direct(&c, branch, 10),
            Err(Error::BranchPointProximity { .. })
        ));
        assert!(matches!(
            kernel_fast(&c, Complex64::new(-c.ks() + TAU, 0.0), 2, 10),
            Err(Error::BranchPointProximity { .. })
        ));
    }

    #[test]
    fn direct_converges_like_inverse_root() {
        let k_ref = reference();
        let ls = [100.0, 1000.0, 10000.0];
        let errs: Vec<f64> = ls
            .iter()
            .map(|&l| (kernel_direct(&cfg(), Complex64::new(1.0, 0.0), l as usize).unwrap() - k_ref).norm())
            .collect();
        let p = slope(&ls, &errs);
        assert!((p + 0.5).abs() < 0.2, "slope {p}");
    }

    #[test]
    fn tail_agrees_with_fast_reference() {
        let got = kernel_tail(&cfg(), Complex64::new(1.0, 0.0), 10_000, 2).unwrap();
        assert!((got - reference()).norm() <= 1e-8);
    }

    #[test]
    fn tail_convergence_rates() {
        let k_ref = reference();
        let ls = [100.0, 1000.0, 10000.0];
        for n in 1..=2u32 {
            let errs: Vec<f64> = ls
                .iter()
                .map(|&l| (kernel_tail(&cfg(), Complex64::new(1.0, 0.0), l as usize, n).unwrap() - k_ref).norm())
                .collect();
            let p = slope(&ls, &errs);
            assert!((p + 0.5 + n as f64).abs() < 0.15, "N = {n}: slope {p}");
        }
    }

    #[test]
    fn tail_vanishes_like_inverse_root() {
        let t = Complex64::new(2.0, 0.0);
        let small = tail(&cfg(), t, 1_000_000, 2).norm();
        let large = tail(&cfg(), t, 100, 2).norm();
        // two oscillating pieces under a common L^{-1/2} envelope
        assert!(small < 2e-2 * large, "{}", small / large);
        assert!(tail(&cfg(), t, 100_000_000, 2).norm() < 1e-3 * large);
    }

    #[test]
    fn fast_is_even_in_t() {
        let c = cfg();
        for &t in &[0.3, 1.7, 2.9, -0.4] {
            let a = kernel_fast(&c, Complex64::new(t, 0.0), 2, 200).unwrap();
            let b = kernel_fast(&c, Complex64::new(-t, 0.0), 2, 200).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn fast_matches_tail_at_large_truncation() {
        let c = cfg();
        let fast = kernel_fast(&c, Complex64::new(0.0, 0.0), 2, 200).unwrap();
        let tail = kernel_tail(&c, Complex64::new(1.0, 0.0), 1_000_000, 2).unwrap();
        assert!((fast - tail).norm() <= 1e-7, "{}", (fast - tail).norm());
    }

    #[test]
    fn convergence_rate_ladder() {
        for series in rate_ladder(&cfg()).unwrap() {
            assert!(
                (series.slope - series.expected_slope).abs() < 0.2,
                "{}: slope {} errors {:?}",
                series.method,
                series.slope,
                series.errors
            );
        }
    }

    #[test]
    fn dispatch_agrees_across_methods() {
        let c = cfg();
        let z = Complex64::from_polar(1.0, 2.2);
        let direct = kernel(&c, z, KernelMethod::new(KernelVariant::Direct, 1000).unwrap()).unwrap();
        let fast = kernel(&c, z, KernelMethod::default()).unwrap();
        // direct truncation error is of order (pi ks L)^{-1/2}
        assert!((direct - fast).norm() < 0.05);
        let tail = kernel(&c, z, KernelMethod::new(KernelVariant::TailCorrected(2), 1000).unwrap()).unwrap();
        assert!((tail - fast).norm() < 1e-7);
    }

    #[test]
    fn default_method_plateau() {
        let c = cfg();
        let one = Complex64::new(0.0, 0.0);
        let v: Vec<Complex64> = [100, 200, 500]
            .iter()
            .map(|&l| kernel_fast(&c, one, 2, l).unwrap())
            .collect();
        assert!((v[1] - v[0]).norm() < 1e-12);
        assert!((v[2] - v[1]).norm() < 1e-12);
    }

    #[test]
    fn fast_reciprocal_symmetry() {
        let c = cfg();
        for z in circle_points(32, 2) {
            let a = kernel(&c, z, KernelMethod::default()).unwrap();
            let b = kernel(&c, 1.0 / z, KernelMethod::default()).unwrap();
            assert!((a - b).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn fast_accepts_annulus_only() {
        let c = cfg();
        assert!(kernel(&c, Complex64::new(0.95, 0.0), KernelMethod::default()).is_ok());
        assert!(matches!(
            kernel(&c, Complex64::new(0.5, 0.0), KernelMethod::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cauchy_riemann() {
        let c = cfg();
        let h = 1e-4;
        for &(re, im) in &[(0.4, 0.02), (2.0, -0.03), (-2.5, 0.05)] {
            let t = Complex64::new(re, im);
            let f = |t: Complex64| kernel_fast(&c, t, 2, 500).unwrap();
            let dx = (f(t + h) - f(t - h)) / (2.0 * h);
            let dy = (f(t + I * h) - f(t - I * h)) / (2.0 * h);
            assert!((dy - I * dx).norm() < 1e-6 * dx.norm().max(1.0), "{t}");
        }
    }

    #[test]
    fn branch_convention_on_real_axis() {
        let ks = 1.0;
        assert!((lattice_root(ks, Complex64::new(0.0, 0.0)) - 1.0).norm() < 1e-15);
        for &u in &[-7.0, -1.5, 1.5, 7.0] {
            let r = lattice_root(ks, Complex64::new(u, 0.0));
            assert!(r.im > 0.0 && r.re.abs() < 1e-15, "{u}: {r}");
        }
        let r = lattice_root(ks, Complex64::new(0.5, 0.0));
        assert!((r.re - 0.75f64.sqrt()).abs() < 1e-15 && r.im == 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(ProblemConfig::new(1.0, 1.0, 0.6, 1.0, 0.0).is_err());
        assert!(ProblemConfig::new(1.0, 0.1, 0.01, 0.05, 0.0).is_err());
        assert!(ProblemConfig::new(-1.0, 1.0, 0.01, 1.0, 0.0).is_err());
        let c = ProblemConfig::new(100.0, 1.0, 0.3, 1.0, 0.0).unwrap();
        assert_eq!(c.warnings().len(), 2);
        assert!(cfg().warnings().is_empty());
        assert!(KernelMethod::new(KernelVariant::TailCorrected(4), 100).is_err());
        assert!(KernelMethod::new(KernelVariant::Fast(3), 100).is_err());
        assert!(KernelMethod::new(KernelVariant::Direct, 1).is_err());
    }
}
