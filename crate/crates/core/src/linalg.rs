//! Dense complex linear algebra: LU solves, Hessenberg–QR eigenvalues,
//! spectral radii and a Jacobi SVD for small least-squares problems.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let target = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (t, &b) in target.iter_mut().zip(other.row(k)) {
                    *t += a * b;
                }
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    factors: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

const PIVOT_FLOOR: f64 = 1e-300;

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot < PIVOT_FLOOR {
                return Err(Error::SingularMatrix { column: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let inv = ONE / lu[(k, k)];
            let (upper, lower) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n..(k + 1) * n];
            for row in lower.chunks_exact_mut(n) {
                let l = row[k] * inv;
                row[k] = l;
                if l == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    row[j] -= l * pivot_row[j];
                }
            }
        }
        Ok(Self {
            factors: lu,
            perm,
            swaps,
        })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.factors.rows;
        if b.len() != n {
            return Err(Error::Shape(format!(
                "right-hand side of length {} for a {n}x{n} system",
                b.len()
            )));
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.factors.row(i);
            let mut acc = x[i];
            for j in 0..i {
                acc -= row[j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = self.factors.row(i);
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= row[j] * x[j];
            }
            x[i] = acc / row[i];
        }
        Ok(x)
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.factors.rows;
        let prod: Complex64 = (0..n).map(|i| self.factors[(i, i)]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }
}

/// Solve `A x = b` by LU with partial pivoting.
pub fn lu_solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    Lu::factor(a)?.solve(b)
}

/// All eigenvalues of a square matrix (Householder reduction to Hessenberg
/// form followed by single-shift complex QR with Wilkinson shifts).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    hessenberg_qr(h)
}

fn hessenberg(a: &mut CMatrix) {
    let n = a.rows;
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm2 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // left: A <- (I - beta v v^H) A on rows k+1..n
        for j in k..n {
            let mut dot = ZERO;
            for i in k + 1..n {
                dot += v[i].conj() * a[(i, j)];
            }
            let dot = dot * beta;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * dot;
            }
        }
        // right: A <- A (I - beta v v^H) on columns k+1..n
        for i in 0..n {
            let row = a.row_mut(i);
            let mut dot = ZERO;
            for j in k + 1..n {
                dot += row[j] * v[j];
            }
            let dot = dot * beta;
            for j in k + 1..n {
                row[j] -= dot * v[j].conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
        a[(k + 1, k)] = alpha;
    }
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with `G (a, b)^T = (r, 0)^T`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    if b == ZERO {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let r = an.hypot(b.norm());
    (an / r, (a / an) * b.conj() / r)
}

fn hessenberg_qr(mut h: CMatrix) -> Result<Vec<Complex64>> {
    let n = h.rows;
    let mut eig = vec![ZERO; n];
    if n == 0 {
        return Ok(eig);
    }
    let eps = f64::EPSILON;
    let scale = h.norm_inf().max(f64::MIN_POSITIVE);
    let budget = 30 * n.max(1);
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let reference = if diag == 0.0 { scale } else { diag };
            if sub <= eps * reference {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > budget {
            return Err(Error::IterationFailure(format!(
                "QR iteration exceeded {budget} sweeps with {} eigenvalues unresolved",
                hi + 1
            )));
        }
        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((c, s));
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
        }
        for (offset, &(c, s)) in rot.iter().enumerate() {
            let k = lo + offset;
            let last = (k + 2).min(hi);
            for i in lo..=last {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(eig)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Matrices above this order use power iteration for the spectral radius.
pub const DENSE_SPECTRAL_LIMIT: usize = 400;
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 5000;

/// Largest eigenvalue modulus.
///
/// Orders up to [`DENSE_SPECTRAL_LIMIT`] go through the full QR spectrum.
/// Larger matrices use power iteration from a seeded random complex start and
/// fall back to the full spectrum when the iterates stagnate (for instance
/// when two eigenvalues of nearly equal modulus compete).
pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "spectral radius needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if a.rows <= DENSE_SPECTRAL_LIMIT {
        return dense_spectral_radius(a);
    }
    match power_iteration(a, POWER_TOL, POWER_MAX_ITER)? {
        Some(rho) => Ok(rho),
        None => dense_spectral_radius(a),
    }
}

fn dense_spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Power iteration estimate of the spectral radius; `None` on stagnation.
pub fn power_iteration(a: &CMatrix, tol: f64, max_iter: usize) -> Result<Option<f64>> {
    let n = a.rows;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f70);
    let mut x: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut x);
    let mut previous = f64::NAN;
    let mut settled = 0;
    for _ in 0..max_iter {
        let mut y = a.matvec(&x)?;
        let growth = vector_norm(&y);
        if growth == 0.0 {
            return Ok(Some(0.0));
        }
        if !growth.is_finite() {
            return Err(Error::IterationFailure("power iteration overflowed".into()));
        }
        let change = (growth - previous).abs();
        if change <= tol * growth {
            settled += 1;
            if settled >= 3 {
                return Ok(Some(growth));
            }
        } else {
            settled = 0;
        }
        previous = growth;
        for v in y.iter_mut() {
            *v /= growth;
        }
        x = y;
    }
    Ok(None)
}

fn vector_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [Complex64]) {
    let n = vector_norm(x);
    if n > 0.0 {
        for v in x.iter_mut() {
            *v /= n;
        }
    }
}

/// Singular value decomposition `A = U diag(s) V^H` of a matrix with at least as
/// many rows as columns; `u` is `rows x cols`, `v` is `cols x cols`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// Index of the smallest singular value.
    pub fn smallest(&self) -> usize {
        self.singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, &s)| if s < best.1 { (i, s) } else { best })
            .0
    }

    pub fn right_vector(&self, j: usize) -> Vec<Complex64> {
        (0..self.v.rows).map(|i| self.v[(i, j)]).collect()
    }
}

/// Least-squares solution together with the factorisation that produced it.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub solution: Vec<Complex64>,
    pub singular_values: Vec<f64>,
    pub smallest_right_singular_vector: Vec<Complex64>,
}

/// SVD by Householder QR followed by one-sided Jacobi on the triangular factor.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    let (reflectors, r) = householder_r(a)?;
    let q = form_q(a.rows, &reflectors);
    let (u_r, s, v) = jacobi_svd(r);
    let u = q.matmul(&u_r)?;
    Ok(Svd {
        u,
        singular_values: s,
        v,
    })
}

/// Minimum-norm least-squares solution of `A x ~ b` (rows >= cols).
pub fn svd_least_squares(a: &CMatrix, b: &[Complex64]) -> Result<LeastSquares> {
    if b.len() != a.rows {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows
        )));
    }
    if b.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Domain("right-hand side must be finite".into()));
    }
    let decomposition = svd(a)?;
    let n = a.cols;
    let smax = decomposition.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = smax * f64::EPSILON * a.rows.max(n) as f64;
    let mut solution = vec![ZERO; n];
    for j in 0..n {
        let s = decomposition.singular_values[j];
        if s <= cutoff {
            continue;
        }
        let coeff = (0..a.rows)
            .map(|i| decomposition.u[(i, j)].conj() * b[i])
            .sum::<Complex64>()
            / s;
        for (i, x) in solution.iter_mut().enumerate() {
            *x += decomposition.v[(i, j)] * coeff;
        }
    }
    let smallest = decomposition.smallest();
    Ok(LeastSquares {
        solution,
        smallest_right_singular_vector: decomposition.right_vector(smallest),
        singular_values: decomposition.singular_values,
    })
}

/// Smallest singular value and its right singular vector, without forming `U`.
pub fn smallest_right_singular_vector(a: &CMatrix) -> Result<(f64, Vec<Complex64>)> {
    let (_, r) = householder_r(a)?;
    let (_, s, v) = jacobi_svd(r);
    let j = s
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &x)| if x < best.1 { (i, x) } else { best })
        .0;
    Ok((s[j], (0..v.rows).map(|i| v[(i, j)]).collect()))
}

type Reflector = (Vec<Complex64>, f64);

/// Householder triangularisation, returning the reflectors and `R` (`cols x cols`).
fn householder_r(a: &CMatrix) -> Result<(Vec<Reflector>, CMatrix)> {
    let (m, n) = (a.rows, a.cols);
    if m < n {
        return Err(Error::Shape(format!(
            "least squares needs rows >= cols, got {m}x{n}"
        )));
    }
    if a.data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Domain("matrix entries must be finite".into()));
    }
    // Work on the transpose so that each column is contiguous.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut reflectors: Vec<Reflector> = Vec::with_capacity(n);
    for k in 0..n {
        let norm = cols[k][k..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut v: Vec<Complex64> = cols[k][k..].to_vec();
        let x0 = v[0];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = if vnorm2 == 0.0 { 0.0 } else { 2.0 / vnorm2 };
        for col in cols.iter_mut().skip(k) {
            let dot: Complex64 = v.iter().zip(&col[k..]).map(|(vi, ci)| vi.conj() * ci).sum();
            let dot = dot * beta;
            for (ci, vi) in col[k..].iter_mut().zip(&v) {
                *ci -= vi * dot;
            }
        }
        reflectors.push((v, beta));
    }
    let r = CMatrix::from_fn(n, n, |i, j| if i <= j { cols[j][i] } else { ZERO });
    Ok((reflectors, r))
}

/// Thin `Q` (`rows x cols`) from the reflectors.
fn form_q(m: usize, reflectors: &[Reflector]) -> CMatrix {
    let n = reflectors.len();
    // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of the identity.
    let mut q_cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; m];
            e[j] = ONE;
            e
        })
        .collect();
    for (k, (v, beta)) in reflectors.iter().enumerate().rev() {
        for col in q_cols.iter_mut() {
            let dot: Complex64 = v.iter().zip(&col[k..]).map(|(vi, ci)| vi.conj() * ci).sum();
            let dot = dot * *beta;
            for (ci, vi) in col[k..].iter_mut().zip(v) {
                *ci -= vi * dot;
            }
        }
    }
    CMatrix::from_fn(m, n, |i, j| q_cols[j][i])
}

/// One-sided (Hestenes) Jacobi SVD of a square or tall matrix.
fn jacobi_svd(a: CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();
    let tol = f64::EPSILON * (m as f64).sqrt();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let u = CMatrix::from_fn(m, n, |i, j| if sigma[j] > 0.0 { cols[j][i] / sigma[j] } else { ZERO });
    let vm = CMatrix::from_fn(n, n, |i, j| v[j][i]);
    (u, sigma, vm)
}

/// `[x_p, x_q] <- [x_p, x_q] [[c, s e^{i phi}], [-s e^{-i phi}, c]]`.
fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let xp = &mut left[p];
    let xq = &mut right[0];
    let sp = phase * s;
    let sm = phase.conj() * s;
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = x * c - y * sm;
        *b = x * sp + y * c;
    }
}
