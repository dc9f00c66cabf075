//! Hankel functions of the first kind, orders 0 and 1, for positive real
//! arguments, together with the handful of constants the kernel formulas need.
//!
//! Three evaluation regimes are used:
//!
//! * `x <= 2`: ascending power series for `J` and `Y`;
//! * `2 < x < 25`: Miller backward recurrence normalised by
//!   `J0 + 2 sum J_2k = 1`, with `Y0`, `Y1` from the Neumann-type series in
//!   even/odd order Bessel functions;
//! * `x >= 25`: Hankel's asymptotic expansion, summed until the terms drop
//!   below the working precision.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const ZETA3: f64 = 1.202_056_903_159_594_3;
const ZETA5: f64 = 1.036_927_755_143_37;

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `H0(1)(x) = J0(x) + i Y0(x)`.
pub fn hankel0(x: f64) -> Result<Complex64> {
    check_argument(x)?;
    let (j, y) = if x <= SERIES_LIMIT {
        series_order0(x)
    } else if x < ASYMPTOTIC_LIMIT {
        let m = miller(x);
        (m.j0, m.y0)
    } else {
        return Ok(asymptotic(0.0, x));
    };
    Ok(Complex64::new(j, y))
}

/// `H1(1)(x) = J1(x) + i Y1(x)`.
pub fn hankel1(x: f64) -> Result<Complex64> {
    check_argument(x)?;
    let (j, y) = if x <= SERIES_LIMIT {
        series_order1(x)
    } else if x < ASYMPTOTIC_LIMIT {
        let m = miller(x);
        (m.j1, m.y1)
    } else {
        return Ok(asymptotic(1.0, x));
    };
    Ok(Complex64::new(j, y))
}

/// Stored values of the Riemann zeta function at 3 and 5.
pub fn zeta_odd(n: u32) -> Result<f64> {
    match n {
        3 => Ok(ZETA3),
        5 => Ok(ZETA5),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

fn check_argument(x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!(
            "Hankel functions need a finite positive argument, got {x}"
        )));
    }
    Ok(())
}

fn series_order0(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut j = 1.0;
    let mut harmonic = 0.0;
    let mut ysum = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j += term;
        ysum -= harmonic * term;
        if term.abs() < 1e-18 * j.abs() {
            break;
        }
    }
    let y = FRAC_2_PI * (((0.5 * x).ln() + EULER_GAMMA) * j + ysum);
    (j, y)
}

fn series_order1(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let half = 0.5 * x;
    // term_k = (-q)^k / (k! (k+1)!)
    let mut term = 1.0;
    let mut jsum = 1.0;
    let mut hk = 0.0;
    let mut hk1 = 1.0;
    let mut psum = (hk + hk1 - 2.0 * EULER_GAMMA) * term;
    for k in 1..60 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        hk += 1.0 / kf;
        hk1 += 1.0 / (kf + 1.0);
        jsum += term;
        psum += (hk + hk1 - 2.0 * EULER_GAMMA) * term;
        if term.abs() < 1e-18 * jsum.abs() {
            break;
        }
    }
    let j = half * jsum;
    let y = -FRAC_2_PI / x + FRAC_2_PI * half.ln() * j - half * psum / PI;
    (j, y)
}

struct Miller {
    j0: f64,
    y0: f64,
    j1: f64,
    y1: f64,
}

fn miller(x: f64) -> Miller {
    const CAP: usize = 96;
    let start = {
        let n = (2.0 * x + 24.0).ceil() as usize;
        (n + (n & 1)).min(CAP - 2)
    };
    let mut f = [0.0f64; CAP];
    f[start] = 1.0;
    let two_over_x = 2.0 / x;
    for n in (1..=start).rev() {
        f[n - 1] = n as f64 * two_over_x * f[n] - f[n + 1];
    }

    let mut norm = f[0];
    let mut even_alt = 0.0;
    let mut odd_alt = 0.0;
    let mut sign = -1.0;
    for k in 1..=start / 2 {
        let kf = k as f64;
        norm += 2.0 * f[2 * k];
        even_alt += sign * f[2 * k] / kf;
        odd_alt += sign * (f[2 * k - 1] - f[2 * k + 1]) / kf;
        sign = -sign;
    }
    let scale = 1.0 / norm;
    let j0 = f[0] * scale;
    let j1 = f[1] * scale;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (log_term * j0 - 2.0 * even_alt * scale);
    let y1 = FRAC_2_PI * (-j0 / x + log_term * j1 + odd_alt * scale);
    Miller { j0, y0, j1, y1 }
}

/// Hankel's expansion `sqrt(2/(pi x)) e^{i(x - nu pi/2 - pi/4)} sum_k i^k a_k(nu) / x^k`.
fn asymptotic(nu: f64, x: f64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut previous = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= Complex64::new(0.0, (mu - odd * odd) / (8.0 * k as f64 * x));
        let size = term.norm();
        if size > previous {
            break;
        }
        sum += term;
        if size < 1e-18 {
            break;
        }
        previous = size;
    }
    let (s, c) = x.sin_cos();
    let phase = Complex64::new(c, s) * Complex64::from_polar(1.0, -(nu * 0.5 * PI + FRAC_PI_4));
    (FRAC_2_PI / x).sqrt() * phase * sum
}
