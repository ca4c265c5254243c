//! Shared numerical kernels: dense symmetric eigensolver, PSD pseudoinverse,
//! complex digamma, numerical differentiation, fixed-step Schrödinger
//! propagation, and power-law fitting.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! concurrent sweep workers.

use crate::{Error, Result};
use num_complex::Complex64;

/// Default relative rank cutoff for [`pseudoinverse_psd`]. Chosen so that an
/// analytically rank-deficient matrix assembled in f64 still drops its null
/// space, while genuinely small eigenvalues survive.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Dense real symmetric matrix, row-major.
///
/// Invariant: `entries[i*dim + j] == entries[j*dim + i]` within 1e-12
/// relative to the largest entry. Construction does not enforce it; the
/// consuming operations do.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    pub dim: usize,
    pub entries: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn new(dim: usize, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entries must be dim x dim");
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    /// Builds entry (i, j) from `f`; the caller is responsible for `f`
    /// being symmetric in its arguments.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    fn check_symmetric(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Validation("matrix dimension must be at least 1".into()));
        }
        let tol = 1e-12 * self.max_abs();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if (self.at(i, j) - self.at(j, i)).abs() > tol {
                    return Err(Error::Validation(format!(
                        "matrix is not symmetric at ({i}, {j}): {} vs {}",
                        self.at(i, j),
                        self.at(j, i)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Dense complex matrix, row-major. Used for Hermitian operators (SLDs,
/// density matrices, Hamiltonians); Hermiticity is a contract on the data,
/// checked where an operation depends on it.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entries must be dim x dim");
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    /// Maximum absolute row sum; an upper bound on the spectral norm.
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.at(i, j).norm()).sum())
            .fold(0.0, f64::max)
    }

    /// y = A x into a caller-provided buffer.
    pub fn mul_vec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.dim;
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }
}

/// Full spectrum of a symmetric matrix.
///
/// `values` ascends; `vectors[k]` is the unit eigenvector for `values[k]`
/// (column k of the orthogonal diagonalizing matrix), with its
/// largest-magnitude component made positive.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Householder reduction of a real symmetric matrix to tridiagonal form,
/// accumulating the transformation in `v`. EISPACK tred2 lineage.
fn tred2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k][i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on the tridiagonal (d, e), rotations applied
/// to `v`. Returns Err(()) if any eigenvalue needs more than the iteration
/// cap. EISPACK tql2 lineage; sorts ascending.
fn tql2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) -> std::result::Result<(), ()> {
    const MAX_ITER: usize = 50;
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0_f64;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_ITER {
                    return Err(());
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in (i + 1)..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in v.iter_mut() {
                row.swap(i, k);
            }
        }
    }
    Ok(())
}

/// Full eigendecomposition of a real symmetric matrix by Householder
/// tridiagonalization followed by implicit-shift QL iteration.
///
/// Eigenvalues ascend. Each eigenvector is normalized with a deterministic
/// sign: its largest-magnitude component is positive.
pub fn eigh_symmetric(a: &SymmetricMatrix) -> Result<EigenSystem> {
    a.check_symmetric()?;
    let n = a.dim;
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| a.entries[i * n..(i + 1) * n].to_vec())
        .collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e).map_err(|_| {
        Error::Numerical(format!("eigensolver did not converge for {n}x{n} matrix"))
    })?;

    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let mut col: Vec<f64> = (0..n).map(|i| v[i][k]).collect();
        let mut imax = 0;
        let mut amax = 0.0;
        for (i, &c) in col.iter().enumerate() {
            if c.abs() > amax {
                amax = c.abs();
                imax = i;
            }
        }
        if col[imax] < 0.0 {
            for c in &mut col {
                *c = -*c;
            }
        }
        vectors.push(col);
    }
    Ok(EigenSystem { values: d, vectors })
}

/// Moore-Penrose pseudoinverse of a symmetric positive-semidefinite matrix.
///
/// Eigenvalues at or below `rank_tol * lambda_max` are treated as exact
/// zeros and excluded from inversion. An eigenvalue below
/// `-rank_tol * lambda_max` means the input was not PSD.
pub fn pseudoinverse_psd(a: &SymmetricMatrix, rank_tol: f64) -> Result<SymmetricMatrix> {
    if rank_tol <= 0.0 {
        return Err(Error::Validation("rank_tol must be positive".into()));
    }
    let eig = eigh_symmetric(a)?;
    let lam_max = *eig.values.last().expect("dim >= 1");
    let thr = rank_tol * lam_max;
    for &v in &eig.values {
        if v < -thr {
            return Err(Error::Validation(format!(
                "matrix is not PSD: eigenvalue {v} below -rank_tol*lambda_max = {}",
                -thr
            )));
        }
    }
    let n = a.dim;
    let mut out = SymmetricMatrix::zeros(n);
    for (k, &v) in eig.values.iter().enumerate() {
        if v <= thr {
            continue;
        }
        let w = 1.0 / v;
        let vecs = &eig.vectors[k];
        for i in 0..n {
            let wi = w * vecs[i];
            for j in 0..n {
                out.entries[i * n + j] += wi * vecs[j];
            }
        }
    }
    Ok(out)
}

/// Asymptotic digamma coefficients B_{2k}/(2k) for k = 1..7
/// (B2 = 1/6, B4 = -1/30, B6 = 1/42, B8 = -1/30, B10 = 5/66,
/// B12 = -691/2730, B14 = 7/6).
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Digamma function on the complex plane.
///
/// Shifts the argument with the recurrence psi(z+1) = psi(z) + 1/z until
/// Re z >= 8, then evaluates the Bernoulli asymptotic series
/// psi(w) = ln w - 1/(2w) - sum_k B_{2k}/(2k w^{2k}).
/// Relative error <= 1e-12 for |z| >= 1e-6 away from the poles.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    let nearest = z.re.round();
    if nearest <= 0.0 && (z.re - nearest).abs() <= 1e-14 && z.im.abs() <= 1e-14 {
        return Err(Error::Domain(format!(
            "digamma pole at z = {nearest}; argument must not be a non-positive integer"
        )));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 8.0 {
        shift += w.finv();
        w += 1.0;
    }
    let inv = w.finv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2;
    for &c in &DIGAMMA_ASYMP {
        series += p * c;
        p *= inv2;
    }
    Ok(w.ln() - inv * 0.5 - series - shift)
}

/// Symmetric difference quotient (f(x+h) - f(x-h)) / (2h).
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Validation(format!("step h = {h} must be positive")));
    }
    let fp = f(x + h);
    let fm = f(x - h);
    if !fp.is_finite() || !fm.is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite sample in central difference at x = {x}, h = {h}"
        )));
    }
    Ok((fp - fm) / (2.0 * h))
}

/// Power-law fit y = prefactor * x^exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Least-squares line through (ln x, ln y); the slope is the power-law
/// exponent, exp(intercept) the prefactor.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::Validation(format!(
            "xs and ys lengths differ: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::Validation(format!(
            "power-law fit needs at least 3 points, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys.iter()).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(
            "power-law fit requires strictly positive finite data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Validation("x values must not all coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = (syy - slope * sxy).max(0.0);
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(FitResult { exponent: slope, prefactor: intercept.exp(), r_squared })
}

/// Fixed-step fourth-order integration of i d/dt psi = H psi for
/// time-independent H.
///
/// The step guard dt * ||H|| <= 0.1 (infinity norm) keeps the scheme deep in
/// its stability region; the state is renormalized once at the end, after
/// verifying the accumulated norm drift stayed below 1e-8.
pub fn propagate_schrodinger(
    h: &HermitianMatrix,
    psi0: &[Complex64],
    t: f64,
    dt: f64,
) -> Result<Vec<Complex64>> {
    let n = h.dim;
    if psi0.len() != n {
        return Err(Error::Validation(format!(
            "state length {} does not match Hamiltonian dimension {n}",
            psi0.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::Validation(format!("step dt = {dt} must be positive")));
    }
    if t < 0.0 {
        return Err(Error::Validation(format!("time t = {t} must be nonnegative")));
    }
    let hnorm = h.inf_norm();
    if dt * hnorm > 0.1 {
        return Err(Error::Validation(format!(
            "dt * ||H|| = {:.3e} exceeds the step guard 0.1; reduce dt below {:.3e}",
            dt * hnorm,
            0.1 / hnorm
        )));
    }

    let steps = (t / dt).ceil() as usize;
    let mut psi = psi0.to_vec();
    if steps == 0 {
        normalize(&mut psi);
        return Ok(psi);
    }
    let dt_eff = t / steps as f64;
    let norm0 = norm(&psi);

    let zero = Complex64::new(0.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let minus_i = Complex64::new(0.0, -1.0);

    for _ in 0..steps {
        h.mul_vec_into(&psi, &mut tmp);
        for i in 0..n {
            k1[i] = minus_i * tmp[i];
        }
        for i in 0..n {
            tmp[i] = psi[i] + k1[i] * (dt_eff / 2.0);
        }
        let stage = tmp.clone();
        h.mul_vec_into(&stage, &mut tmp);
        for i in 0..n {
            k2[i] = minus_i * tmp[i];
        }
        for i in 0..n {
            tmp[i] = psi[i] + k2[i] * (dt_eff / 2.0);
        }
        let stage = tmp.clone();
        h.mul_vec_into(&stage, &mut tmp);
        for i in 0..n {
            k3[i] = minus_i * tmp[i];
        }
        for i in 0..n {
            tmp[i] = psi[i] + k3[i] * dt_eff;
        }
        let stage = tmp.clone();
        h.mul_vec_into(&stage, &mut tmp);
        for i in 0..n {
            k4[i] = minus_i * tmp[i];
        }
        for i in 0..n {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt_eff / 6.0);
        }
    }

    let drift = (norm(&psi) / norm0 - 1.0).abs();
    if drift > 1e-8 {
        return Err(Error::Numerical(format!(
            "norm drift {drift:.3e} exceeds 1e-8 after {steps} steps; reduce dt"
        )));
    }
    normalize(&mut psi);
    Ok(psi)
}

pub fn norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(psi: &mut [Complex64]) {
    let n = norm(psi);
    if n > 0.0 {
        for c in psi.iter_mut() {
            *c /= n;
        }
    }
}
