//! Single-mode Gaussian states: purity, the exact Gaussian QFI, and the
//! Fisher information of homodyne detection with angle optimization.
//!
//! Conventions. Quadratures x = (a + a^dag)/sqrt(2), p = -i(a - a^dag)/
//! sqrt(2); the covariance matrix carries an explicit factor 2,
//! Sigma_ij = <{delta r_i, delta r_j}>, so the vacuum has Sigma = I and a
//! physical state has det Sigma >= 1. Every module that converts a state
//! into this representation must adopt the same convention.

use crate::{Error, Result};

/// First moments (<x>, <p>) and factor-2 covariance of a single mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub v: [f64; 2],
    pub sigma: [[f64; 2]; 2],
}

impl GaussianState {
    /// Validates symmetry of the covariance and physicality
    /// det Sigma >= 1 - 1e-9.
    pub fn new(v: [f64; 2], sigma: [[f64; 2]; 2]) -> Result<Self> {
        let scale = sigma.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
        if (sigma[0][1] - sigma[1][0]).abs() > 1e-9 * scale.max(1.0) {
            return Err(Error::Validation(format!(
                "covariance is not symmetric: {} vs {}",
                sigma[0][1], sigma[1][0]
            )));
        }
        let det = det2(&sigma);
        if det < 1.0 - 1e-9 || sigma[0][0] <= 0.0 {
            return Err(Error::Validation(format!(
                "unphysical covariance: det Sigma = {det} < 1"
            )));
        }
        Ok(Self { v, sigma })
    }

    pub fn vacuum() -> Self {
        Self { v: [0.0, 0.0], sigma: [[1.0, 0.0], [0.0, 1.0]] }
    }
}

/// Parameter derivative of a Gaussian state: d<r>/d theta and
/// d Sigma/d theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDerivative {
    pub dv: [f64; 2],
    pub dsigma: [[f64; 2]; 2],
}

fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn inv2(m: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let d = det2(m);
    if d <= 0.0 {
        return Err(Error::Domain(format!("covariance determinant {d} is not positive")));
    }
    Ok([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

fn mul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Purity mu = 1/sqrt(det Sigma); 1 for pure states, 1/(2 nbar + 1) for a
/// thermal state with nbar quanta.
pub fn purity(state: &GaussianState) -> Result<f64> {
    let det = det2(&state.sigma);
    if det <= 0.0 {
        return Err(Error::Domain(format!(
            "covariance determinant {det} is not positive"
        )));
    }
    Ok(1.0 / det.sqrt())
}

/// QFI of a single-mode Gaussian manifold:
///
/// I = (1/2) Tr[(Sigma^-1 dSigma)^2] / (1 + mu^2)
///   + 2 (dmu)^2 / (1 - mu^4)
///   + 2 dv^T Sigma^-1 dv,
///
/// with dmu = -(mu/2) Tr(Sigma^-1 dSigma). On a pure manifold
/// (mu >= 1 - 1e-9) the purity cannot change, so the middle term is 0; a
/// derivative that nevertheless reports |dmu| > 1e-6 is inconsistent.
pub fn qfi_gaussian(state: &GaussianState, deriv: &GaussianDerivative) -> Result<f64> {
    let mu = purity(state)?;
    let sinv = inv2(&state.sigma)?;
    let a = mul2(&sinv, &deriv.dsigma);
    let tr_a = a[0][0] + a[1][1];
    let a2 = mul2(&a, &a);
    let tr_a2 = a2[0][0] + a2[1][1];
    let dmu = -(mu / 2.0) * tr_a;

    let term1 = 0.5 * tr_a2 / (1.0 + mu * mu);
    let term2 = if mu >= 1.0 - 1e-9 {
        if dmu.abs() > 1e-6 {
            return Err(Error::Validation(format!(
                "inconsistent manifold: state is pure but the derivative changes purity \
                 (dmu = {dmu:.3e})"
            )));
        }
        0.0
    } else {
        2.0 * dmu * dmu / (1.0 - mu.powi(4))
    };
    let sdv = [
        sinv[0][0] * deriv.dv[0] + sinv[0][1] * deriv.dv[1],
        sinv[1][0] * deriv.dv[0] + sinv[1][1] * deriv.dv[1],
    ];
    let term3 = 2.0 * (deriv.dv[0] * sdv[0] + deriv.dv[1] * sdv[1]);
    Ok(term1 + term2 + term3)
}

/// Variance combination S(phi) = cos^2 Sigma_xx + sin^2 Sigma_pp
/// + sin(2 phi) Sigma_xp of the rotated quadrature x(phi).
fn quadrature_variance(sigma: &[[f64; 2]; 2], phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    c * c * sigma[0][0] + s * s * sigma[1][1] + 2.0 * s * c * sigma[0][1]
}

/// Fisher information of homodyne detection at quadrature angle phi:
/// F(phi) = [4 S (d<x(phi)>)^2 + (dS)^2] / (2 S^2).
pub fn homodyne_fi(state: &GaussianState, deriv: &GaussianDerivative, phi: f64) -> Result<f64> {
    let s = quadrature_variance(&state.sigma, phi);
    if s <= 0.0 {
        return Err(Error::Domain(format!(
            "unphysical variance S({phi}) = {s}; homodyne statistics undefined"
        )));
    }
    let (sn, cs) = phi.sin_cos();
    let dmean = cs * deriv.dv[0] + sn * deriv.dv[1];
    let ds = quadrature_variance(&deriv.dsigma, phi);
    Ok((4.0 * s * dmean * dmean + ds * ds) / (2.0 * s * s))
}

/// Best homodyne angle on [0, pi): coarse grid, then golden-section
/// refinement of the bracket around the best grid point down to 1e-10 in
/// phi. Exact ties keep the smallest angle.
pub fn homodyne_fi_optimal(
    state: &GaussianState,
    deriv: &GaussianDerivative,
    grid_points: usize,
) -> Result<(f64, f64)> {
    if grid_points < 8 {
        return Err(Error::Validation(format!(
            "need at least 8 grid points, got {grid_points}"
        )));
    }
    let n = grid_points;
    let step = std::f64::consts::PI / n as f64;
    let mut best_phi = 0.0;
    let mut best_fi = homodyne_fi(state, deriv, 0.0)?;
    // a candidate must beat the incumbent by more than roundoff, so exact
    // ties (isotropic models) resolve to the smallest angle
    for j in 1..n {
        let phi = j as f64 * step;
        let fi = homodyne_fi(state, deriv, phi)?;
        if fi > best_fi + 1e-12 * best_fi.abs() {
            best_fi = fi;
            best_phi = phi;
        }
    }

    // golden-section maximization on the bracket around the best grid point;
    // S and its derivative are pi-periodic so angles may leave [0, pi) here
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut a = best_phi - step;
    let mut b = best_phi + step;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = homodyne_fi(state, deriv, c)?;
    let mut fd = homodyne_fi(state, deriv, d)?;
    while (b - a).abs() > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = homodyne_fi(state, deriv, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = homodyne_fi(state, deriv, d)?;
        }
    }
    let mut phi_refined = 0.5 * (a + b);
    let fi_refined = homodyne_fi(state, deriv, phi_refined)?;
    if fi_refined > best_fi + 1e-12 * best_fi.abs() {
        phi_refined = phi_refined.rem_euclid(std::f64::consts::PI);
        Ok((phi_refined, homodyne_fi(state, deriv, phi_refined)?))
    } else {
        Ok((best_phi, best_fi))
    }
}
