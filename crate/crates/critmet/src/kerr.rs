//! Driven Kerr resonator below its parametric threshold: steady state,
//! transient Gaussian dynamics, frequency QFI, homodyne readout, and the
//! photon-constrained optimal protocol.
//!
//! In the frame rotating at half the pump frequency, a parametrically pumped
//! cavity with a weak Kerr nonlinearity is governed, in the limit of
//! vanishing nonlinearity, by the quadratic Hamiltonian
//!
//! ```text
//! H = omega a'a + (epsilon/2) (a^2 + a'^2)
//! ```
//!
//! with single-photon loss described by the dissipator
//! `Gamma (2 a rho a' - {a'a, rho})`. `omega` is the pump-cavity detuning
//! whose value is estimated around the prior `omega0`, `epsilon` the pump
//! amplitude. Quadratures are `x = (a+a')/sqrt(2)`, `p = -i(a-a')/sqrt(2)`
//! with covariance convention `Sigma_ij = 2 Cov(r_i, r_j)` (vacuum
//! `Sigma = I`), matching [`crate::gaussian`].
//!
//! Linear stability is set by `lambda_pm = Gamma +- u`, `u = sqrt(epsilon^2
//! - omega^2)`; both decay rates stay positive below the parametric
//! threshold `epsilon_c = sqrt(omega^2 + Gamma^2)`, where all steady-state
//! quantities diverge. From vacuum the first moments stay zero and the
//! covariance is assembled from two scalar kernels,
//!
//! ```text
//! P(t) = S^2 + 2 Gamma int_0^t S^2 ds,   Q(t) = C S + 2 Gamma int_0^t C S ds,
//! C(t) = e^{-Gamma t} cosh(u t),         S(t) = e^{-Gamma t} sinh(u t)/u,
//! ```
//!
//! as `Sigma11 = 1 + 2 eps (eps - omega) P`, `Sigma22 = 1 + 2 eps (eps +
//! omega) P`, `Sigma12 = -2 eps Q`, and photon number `N(t) = eps^2 P`. The
//! off-diagonal sign is fixed by the quadrature flow `dSigma/dt = M Sigma +
//! Sigma M^T + 2 Gamma I` with drift `M = [[-Gamma, omega-eps],
//! [-(omega+eps), -Gamma]]`: at t = 0, `dSigma12/dt = -2 eps`.
//!
//! All exponential integrals reduce to `phi0(z) = (1 - e^{-z})/z` evaluated
//! at `2 lambda_pm t`; complex `u` (the oscillatory regime `epsilon <
//! omega`) is handled uniformly in complex arithmetic, and every kernel is
//! an even function of `u`, hence real. Near the exceptional point
//! `epsilon = omega` the difference quotients degrade, so for
//! `|epsilon^2 - omega^2| t^2 <= 1e-4` the kernels switch to series in
//! `w = epsilon^2 - omega^2` (third order, truncation below 1e-16); this
//! contains the degenerate guard `|epsilon - omega| <= 1e-8 omega` for all
//! practically reachable times. Parameter derivatives d/d omega are
//! differentiated analytically through the kernels (`d/d omega = -2 omega
//! d/dw`) because finite differences become stiff near `epsilon_c`.
//!
//! Estimation workflow: [`qfi_steady`] and [`qfi_dynamic`] give the
//! frequency QFI of the steady and transient states, [`homodyne_check`]
//! compares against the best homodyne quadrature, and [`optimal_protocol`]
//! evaluates the photon-capped strategy (pump to `N_ss = n_max`, measure at
//! steady state, optimal operating point `omega0 = Gamma`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianDerivative, GaussianState};

pub type KerrResult<T> = Result<T>;

/// Rotating-frame resonator parameters. `omega0` is the prior detuning
/// (any sign), `epsilon >= 0` the pump amplitude, `gamma >= 0` the loss
/// rate, and `n_max` an optional photon cap used by [`optimal_protocol`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrParams {
    pub omega0: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub n_max: Option<f64>,
}

impl KerrParams {
    pub fn new(omega0: f64, epsilon: f64, gamma: f64) -> Result<Self> {
        if !omega0.is_finite() || !epsilon.is_finite() || !gamma.is_finite() {
            return Err(Error::Validation(format!(
                "parameters must be finite, got omega0 = {omega0}, epsilon = {epsilon}, gamma = {gamma}"
            )));
        }
        if epsilon < 0.0 {
            return Err(Error::Validation(format!(
                "pump amplitude must be nonnegative, got {epsilon}"
            )));
        }
        if gamma < 0.0 {
            return Err(Error::Validation(format!(
                "loss rate must be nonnegative, got {gamma}"
            )));
        }
        Ok(Self { omega0, epsilon, gamma, n_max: None })
    }

    /// Same validation as [`KerrParams::new`] plus a finite positive photon
    /// cap for the protocol optimizer.
    pub fn with_photon_cap(omega0: f64, epsilon: f64, gamma: f64, n_max: f64) -> Result<Self> {
        let mut p = Self::new(omega0, epsilon, gamma)?;
        if !n_max.is_finite() || n_max <= 0.0 {
            return Err(Error::Validation(format!(
                "photon cap must be finite and positive, got {n_max}"
            )));
        }
        p.n_max = Some(n_max);
        Ok(p)
    }
}

/// Parametric threshold `epsilon_c = sqrt(omega0^2 + Gamma^2)`. The steady
/// state exists only for `epsilon < epsilon_c`.
pub fn critical_pump(p: &KerrParams) -> f64 {
    p.omega0.hypot(p.gamma)
}

/// Slowest decay rate `Re lambda_- = Gamma - Re sqrt(epsilon^2 - omega0^2)`;
/// sets the steady-state relaxation time. Zero in the lossless case.
pub fn relaxation_rate(p: &KerrParams) -> Result<f64> {
    require_below_threshold(p)?;
    let w = p.epsilon * p.epsilon - p.omega0 * p.omega0;
    Ok(if w > 0.0 { p.gamma - w.sqrt() } else { p.gamma })
}

fn require_below_threshold(p: &KerrParams) -> Result<()> {
    let eps_c = critical_pump(p);
    if p.epsilon >= eps_c {
        return Err(Error::Domain(format!(
            "pump epsilon = {} at or above the parametric threshold epsilon_c = {eps_c}; \
             the Gaussian steady state does not exist there",
            p.epsilon
        )));
    }
    Ok(())
}

// qfi_dynamic and homodyne_check differentiate the state; keep a small
// safety margin from the threshold where the formulas turn stiff.
fn require_estimable(p: &KerrParams) -> Result<()> {
    let eps_c = critical_pump(p);
    if p.epsilon > eps_c * (1.0 - 1e-9) {
        return Err(Error::Domain(format!(
            "pump epsilon = {} above epsilon_c (1 - 1e-9) = {}; too close to \
             threshold for a well-conditioned parameter derivative",
            p.epsilon,
            eps_c * (1.0 - 1e-9)
        )));
    }
    Ok(())
}

fn require_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Validation(format!("time must be finite and nonnegative, got {t}")));
    }
    Ok(())
}

/// `phi0(z) = (1 - e^{-z})/z`, entire, `phi0(0) = 1`. Series below
/// `|z| = 1/2` avoids the cancellation of the direct form.
fn phi0(z: Complex64) -> Complex64 {
    if z.norm() <= 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 0..22 {
            term = term * (-z) / (k as f64 + 2.0);
            sum += term;
        }
        sum
    } else {
        (1.0 - (-z).exp()) / z
    }
}

/// d phi0/dz; closed form `(e^{-z}(1+z) - 1)/z^2` away from the origin.
fn phi0_prime(z: Complex64) -> Complex64 {
    if z.norm() <= 0.5 {
        // term_k = -(-z)^k / (k! (k+2))
        let mut term = Complex64::new(-0.5, 0.0);
        let mut sum = term;
        for k in 0..22 {
            let kf = k as f64;
            term = term * (-z) * (kf + 2.0) / ((kf + 1.0) * (kf + 3.0));
            sum += term;
        }
        sum
    } else {
        ((-z).exp() * (1.0 + z) - 1.0) / (z * z)
    }
}

/// `M_k = int_0^t s^k e^{-a s} ds`, `a >= 0`. Series for small `a t`
/// (the closed form cancels there), truncated exponential otherwise.
fn exp_moment(k: usize, a: f64, t: f64) -> f64 {
    let x = a * t;
    if x <= 0.5 {
        let mut p = 1.0;
        let mut sum = 1.0 / (k as f64 + 1.0);
        for j in 1..30 {
            p *= -x / j as f64;
            sum += p / (k as f64 + j as f64 + 1.0);
        }
        t.powi(k as i32 + 1) * sum
    } else {
        let mut partial = 1.0;
        let mut xj = 1.0;
        for j in 1..=k {
            xj *= x / j as f64;
            partial += xj;
        }
        let mut kfact = 1.0;
        for j in 2..=k {
            kfact *= j as f64;
        }
        kfact * (1.0 - (-x).exp() * partial) / a.powi(k as i32 + 1)
    }
}

/// Covariance kernels P, Q and their derivatives with respect to
/// `w = epsilon^2 - omega^2` at fixed `Gamma`, `t`.
struct Kernels {
    p: f64,
    q: f64,
    /// dP/dw
    dp: f64,
    /// dQ/dw
    dq: f64,
}

fn kernels(omega0: f64, epsilon: f64, gamma: f64, t: f64) -> Kernels {
    let w = epsilon * epsilon - omega0 * omega0;
    let y = w * t * t;
    if y.abs() <= 1e-4 {
        // degenerate expansion around the exceptional point u = 0:
        // sinh(ut)/u and cosh(ut) as series in y = w t^2, integrated
        // termwise against e^{-2 Gamma s}
        let e2 = (-2.0 * gamma * t).exp();
        let t2 = t * t;
        let s2 = e2 * t2 * (1.0 + y / 3.0 + 2.0 * y * y / 45.0 + y * y * y / 315.0);
        let cs = e2 * t * (1.0 + 2.0 * y / 3.0 + 2.0 * y * y / 15.0 + 4.0 * y * y * y / 315.0);
        let ds2 = e2 * t2 * t2 * (1.0 / 3.0 + 4.0 * y / 45.0 + y * y / 105.0);
        let dcs = e2 * t2 * t * (2.0 / 3.0 + 4.0 * y / 15.0 + 4.0 * y * y / 105.0);
        let a = 2.0 * gamma;
        let m: Vec<f64> = (0..9).map(|k| exp_moment(k, a, t)).collect();
        let is2 = m[2] + w * m[4] / 3.0 + 2.0 * w * w * m[6] / 45.0 + w * w * w * m[8] / 315.0;
        let ics =
            m[1] + 2.0 * w * m[3] / 3.0 + 2.0 * w * w * m[5] / 15.0 + 4.0 * w * w * w * m[7] / 315.0;
        let dis2 = m[4] / 3.0 + 4.0 * w * m[6] / 45.0 + w * w * m[8] / 105.0;
        let dics = 2.0 * m[3] / 3.0 + 4.0 * w * m[5] / 15.0 + 4.0 * w * w * m[7] / 105.0;
        return Kernels {
            p: s2 + 2.0 * gamma * is2,
            q: cs + 2.0 * gamma * ics,
            dp: ds2 + 2.0 * gamma * dis2,
            dq: dcs + 2.0 * gamma * dics,
        };
    }

    // uniform complex path; below threshold Re(2 lambda_pm t) >= 0, so no
    // exponential can overflow
    let u = Complex64::new(w, 0.0).sqrt();
    let g = Complex64::new(gamma, 0.0);
    let em = ((u - g) * t).exp();
    let ep = ((-u - g) * t).exp();
    let ct = (em + ep) * 0.5;
    let st = (em - ep) / (u * 2.0);
    let zm = (g - u) * (2.0 * t);
    let zp = (g + u) * (2.0 * t);
    let f_m = phi0(zm);
    let f_p = phi0(zp);
    let f_0 = phi0(Complex64::new(2.0 * gamma * t, 0.0));
    let is2 = ((f_m + f_p) * 0.5 - f_0) * (t / (2.0 * w));
    let ics = (f_m - f_p) * t / (u * 4.0);
    let fp_m = phi0_prime(zm);
    let fp_p = phi0_prime(zp);
    let dst = (ct * t - st) / (2.0 * w);
    let dct = st * (t / 2.0);
    let dis2 = (fp_p - fp_m) * (t * t) / (u * (4.0 * w)) - is2 / w;
    let dics = -(fp_m + fp_p) * (t * t / (4.0 * w)) - ics / (2.0 * w);
    let p = st * st + is2 * (2.0 * gamma);
    let q = ct * st + ics * (2.0 * gamma);
    let dp = st * dst * 2.0 + dis2 * (2.0 * gamma);
    let dq = ct * dst + st * dct + dics * (2.0 * gamma);
    debug_assert!(p.im.abs() <= 1e-9 * p.re.abs().max(1.0));
    debug_assert!(q.im.abs() <= 1e-9 * q.re.abs().max(1.0));
    Kernels { p: p.re, q: q.re, dp: dp.re, dq: dq.re }
}

/// Sigma(t) and d Sigma/d omega at the prior, from the kernels.
fn sigma_and_derivative(p: &KerrParams, t: f64) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
    let k = kernels(p.omega0, p.epsilon, p.gamma, t);
    let (om, eps) = (p.omega0, p.epsilon);
    let sigma = [
        [1.0 + 2.0 * eps * (eps - om) * k.p, -2.0 * eps * k.q],
        [-2.0 * eps * k.q, 1.0 + 2.0 * eps * (eps + om) * k.p],
    ];
    let dp = -2.0 * om * k.dp;
    let dq = -2.0 * om * k.dq;
    let dsigma = [
        [-2.0 * eps * k.p + 2.0 * eps * (eps - om) * dp, -2.0 * eps * dq],
        [-2.0 * eps * dq, 2.0 * eps * k.p + 2.0 * eps * (eps + om) * dp],
    ];
    (sigma, dsigma)
}

fn steady_sigma_and_derivative(p: &KerrParams) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
    let (om, eps, gam) = (p.omega0, p.epsilon, p.gamma);
    let c2 = om * om + gam * gam;
    let d = c2 - eps * eps;
    let sigma = [
        [(c2 - om * eps) / d, -gam * eps / d],
        [-gam * eps / d, (c2 + om * eps) / d],
    ];
    let d11 = ((2.0 * om - eps) * d - (c2 - om * eps) * 2.0 * om) / (d * d);
    let d22 = ((2.0 * om + eps) * d - (c2 + om * eps) * 2.0 * om) / (d * d);
    let d12 = 2.0 * om * gam * eps / (d * d);
    (sigma, [[d11, d12], [d12, d22]])
}

/// Gaussian steady state: zero mean and covariance
///
/// ```text
/// Sigma_ss = [[eps_c^2 - omega eps, -Gamma eps],
///             [-Gamma eps, eps_c^2 + omega eps]] / (eps_c^2 - eps^2).
/// ```
///
/// Unique fixed point of the covariance flow for `epsilon < epsilon_c`;
/// vacuum at zero pump.
pub fn steady_state(p: &KerrParams) -> Result<GaussianState> {
    require_below_threshold(p)?;
    let (sigma, _) = steady_sigma_and_derivative(p);
    GaussianState::new([0.0, 0.0], sigma)
}

/// Steady photon number `N_ss = (Tr Sigma_ss - 2)/4 =
/// eps^2 / (2 (eps_c^2 - eps^2))`; diverges at threshold.
pub fn steady_photons(p: &KerrParams) -> Result<f64> {
    require_below_threshold(p)?;
    let eps_c = critical_pump(p);
    let d = eps_c * eps_c - p.epsilon * p.epsilon;
    Ok(p.epsilon * p.epsilon / (2.0 * d))
}

/// Steady-state frequency QFI
///
/// ```text
/// I_ss = [2 N_ss + 8 omega0^2 N_ss^2 / eps^2] / (2 eps_c^2 - eps^2),
/// ```
///
/// evaluated at the prior `omega = omega0`; near threshold it grows as
/// `8 omega0^2 N_ss^2 / eps^4`, quadratic in the photon number.
pub fn qfi_steady(p: &KerrParams) -> Result<f64> {
    require_below_threshold(p)?;
    let eps_c = critical_pump(p);
    let (om, eps) = (p.omega0, p.epsilon);
    let d = eps_c * eps_c - eps * eps;
    let n = eps * eps / (2.0 * d);
    // N^2/eps^2 written as eps^2/(4 d^2): finite at zero pump
    let curvature = 8.0 * om * om * eps * eps / (4.0 * d * d);
    Ok((2.0 * n + curvature) / (2.0 * eps_c * eps_c - eps * eps))
}

/// Transient covariance from vacuum at time `t`.
pub fn dynamics_covariance(p: &KerrParams, t: f64) -> Result<GaussianState> {
    require_below_threshold(p)?;
    require_time(t)?;
    let (sigma, _) = sigma_and_derivative(p, t);
    GaussianState::new([0.0, 0.0], sigma)
}

/// Photon number `N(t)` from vacuum. Explicit branch forms:
///
/// ```text
/// eps < omega:  N_ss [1 - e^{-2 Gamma t} (cos 2vt + (Gamma/v) sin 2vt)],
///               v = sqrt(omega^2 - eps^2);
/// eps > omega:  N_ss [1 + (Gamma/u - 1)/2 e^{-2 lambda_+ t}
///                       - (Gamma/u + 1)/2 e^{-2 lambda_- t}],
///               u = sqrt(eps^2 - omega^2),
/// ```
///
/// which vanish at t = 0 and settle to `N_ss`; the growth-branch transient
/// coefficients carry the factor 1/2 required by N(0) = 0 (they are the
/// analytic continuation of the oscillatory branch). Inside the degenerate
/// guard `|eps - omega| <= 1e-8 omega` the series kernels take over.
pub fn photon_number_t(p: &KerrParams, t: f64) -> Result<f64> {
    require_below_threshold(p)?;
    require_time(t)?;
    let (om, eps, gam) = (p.omega0, p.epsilon, p.gamma);
    if (eps - om.abs()).abs() <= 1e-8 * om.abs() {
        return Ok(eps * eps * kernels(om, eps, gam, t).p);
    }
    let eps_c = critical_pump(p);
    let d = eps_c * eps_c - eps * eps;
    let n_ss = eps * eps / (2.0 * d);
    let w = eps * eps - om * om;
    if w < 0.0 {
        let v = (-w).sqrt();
        let phase = 2.0 * v * t;
        Ok(n_ss
            * (1.0 - (-2.0 * gam * t).exp() * (phase.cos() + gam / v * phase.sin())))
    } else {
        let u = w.sqrt();
        let lam_m = gam - u;
        let lam_p = gam + u;
        Ok(n_ss
            * (1.0 + 0.5 * (gam / u - 1.0) * (-2.0 * lam_p * t).exp()
                - 0.5 * (gam / u + 1.0) * (-2.0 * lam_m * t).exp()))
    }
}

/// Frequency QFI of the transient state: [`gaussian::qfi_gaussian`] applied
/// to `Sigma(t)` and the analytic `d Sigma/d omega`. Zero at t = 0. In the
/// lossless near-threshold regime it follows `[2N + (8/9)N^2] t^2` while
/// `t sqrt(omega^2 - eps^2)` stays small, and with loss it saturates to
/// [`qfi_steady`] on the timescale `1/Re lambda_-`.
pub fn qfi_dynamic(p: &KerrParams, t: f64) -> Result<f64> {
    require_estimable(p)?;
    require_time(t)?;
    let (sigma, dsigma) = sigma_and_derivative(p, t);
    let state = GaussianState::new([0.0, 0.0], sigma)?;
    let deriv = GaussianDerivative { dv: [0.0, 0.0], dsigma };
    gaussian::qfi_gaussian(&state, &deriv)
}

/// Best-quadrature homodyne Fisher information against the QFI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneCheck {
    pub fi_optimal: f64,
    pub qfi: f64,
    /// `fi_optimal / qfi`; 1 by convention on the zero-derivative manifold
    /// (both vanish, the bound is saturated trivially).
    pub ratio: f64,
}

/// Optimal homodyne angle scan for the steady state (`time = None`) or the
/// transient state at `time = Some(t)`. `grid_points` is the coarse angle
/// grid handed to [`gaussian::homodyne_fi_optimal`].
pub fn homodyne_check(
    p: &KerrParams,
    time: Option<f64>,
    grid_points: usize,
) -> Result<HomodyneCheck> {
    let (state, deriv) = match time {
        None => {
            require_below_threshold(p)?;
            let (sigma, dsigma) = steady_sigma_and_derivative(p);
            (GaussianState::new([0.0, 0.0], sigma)?, GaussianDerivative { dv: [0.0, 0.0], dsigma })
        }
        Some(t) => {
            require_estimable(p)?;
            require_time(t)?;
            let (sigma, dsigma) = sigma_and_derivative(p, t);
            (GaussianState::new([0.0, 0.0], sigma)?, GaussianDerivative { dv: [0.0, 0.0], dsigma })
        }
    };
    let qfi = gaussian::qfi_gaussian(&state, &deriv)?;
    let (_, fi_optimal) = gaussian::homodyne_fi_optimal(&state, &deriv, grid_points)?;
    let ratio = if qfi > 0.0 { fi_optimal / qfi } else { 1.0 };
    Ok(HomodyneCheck { fi_optimal, qfi, ratio })
}

/// Photon-capped estimation strategy at the optimal operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalProtocol {
    /// Pump reaching `N_ss = n_max`: `sqrt(2 n / (1 + 2n)) eps_c`.
    pub epsilon_opt: f64,
    /// Saturation time `[1 + 2n + sqrt(2n (1 + 2n))] / (2 Gamma)`,
    /// asymptotically `2 n / Gamma`.
    pub t_opt: f64,
    /// Steady-state QFI at the optimal pump; scales as `2 n^2 / Gamma^2`.
    pub qfi_single: f64,
    /// `qfi_single / t_opt`, the figure of merit when time is a resource;
    /// asymptotically `n Gamma / Gamma^2 = n / Gamma` per unit time.
    pub qfi_total_rate: f64,
}

/// Evaluates the capped protocol. Requires a photon cap `n_max >= 1`,
/// `Gamma > 0`, and the optimal operating point `omega0 = Gamma` (the QFI
/// rate is maximized there; other priors are rejected rather than silently
/// re-tuned).
pub fn optimal_protocol(p: &KerrParams) -> Result<OptimalProtocol> {
    let n = p.n_max.ok_or_else(|| {
        Error::Validation("optimal_protocol needs a photon cap; build with with_photon_cap".into())
    })?;
    if n < 1.0 {
        return Err(Error::Validation(format!("photon cap must be at least 1, got {n}")));
    }
    if p.gamma <= 0.0 {
        return Err(Error::Validation(format!(
            "optimal protocol is dissipative; need gamma > 0, got {}",
            p.gamma
        )));
    }
    if (p.omega0 - p.gamma).abs() > 1e-12 * p.gamma.max(1.0) {
        return Err(Error::Validation(format!(
            "optimal operating point requires omega0 = gamma, got omega0 = {}, gamma = {}",
            p.omega0, p.gamma
        )));
    }
    let eps_c = critical_pump(p);
    let epsilon_opt = (2.0 * n / (1.0 + 2.0 * n)).sqrt() * eps_c;
    let t_opt = (1.0 + 2.0 * n + (2.0 * n * (1.0 + 2.0 * n)).sqrt()) / (2.0 * p.gamma);
    let tuned = KerrParams { epsilon: epsilon_opt, ..*p };
    let qfi_single = qfi_steady(&tuned)?;
    Ok(OptimalProtocol { epsilon_opt, t_opt, qfi_single, qfi_total_rate: qfi_single / t_opt })
}
