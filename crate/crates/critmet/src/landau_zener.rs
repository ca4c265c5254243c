//! Two-level avoided crossing as a critical-point analogue: estimation of
//! the splitting omega (and the transverse field g) from the ground state or
//! a thermal state.
//!
//! The Hamiltonian in the (|down>, |up>) basis is
//! H = (omega/2) sigma_z - (g/2) sigma_x with gap Delta = sqrt(omega^2+g^2);
//! the ground state is cos(phi/2)|down> + sin(phi/2)|up> with
//! phi = atan2(g, omega).  All closed forms below follow from that one
//! mixing angle:
//!
//! * ground-state QFI for omega: g^2 / Delta^4, saturated by a sigma_z
//!   readout;
//! * thermal QFI: population term omega^2 sech^2(Delta/2T)/(4 T^2 Delta^2)
//!   plus the ground-state term damped by tanh^2(Delta/2T);
//! * the two-parameter QFIM is rank one at T = 0 (only the gap direction is
//!   measurable) and becomes invertible at T > 0, with SLDs that stop
//!   commuting yet still satisfy the weak-commutativity trace condition;
//! * the effective ratio Omega = g/omega carries QFI omega^4 / Delta^4, the
//!   inverse of the variance propagated through the singular QFIM.
//!
//! Temperatures are in energy units (k_B = 1).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::estimation::{FisherMatrix, PureState};
use crate::numerics::{HermitianMatrix, SymmetricMatrix};

/// Model parameters; temperature is in energy units and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzParams {
    pub omega: f64,
    pub g: f64,
    pub temperature: f64,
}

impl LzParams {
    pub fn new(omega: f64, g: f64, temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) {
            return Err(Error::Validation(format!(
                "temperature {temperature} must be nonnegative"
            )));
        }
        Ok(Self { omega, g, temperature })
    }

    /// Gap Delta = sqrt(omega^2 + g^2).
    pub fn gap(&self) -> f64 {
        self.omega.hypot(self.g)
    }
}

/// Thermal QFI for omega split into its two contributions:
/// total = population_term + weight * ground_qfi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzThermalQfi {
    pub population_term: f64,
    pub weight: f64,
    pub ground_qfi: f64,
    pub total: f64,
}

/// SLD pair for (omega, g) on the thermal state, with the commutator scale
/// and the weak-commutativity trace.
#[derive(Debug, Clone)]
pub struct SldPairThermal {
    pub l_omega: HermitianMatrix,
    pub l_g: HermitianMatrix,
    /// [L_omega, L_g] has spectral norm tanh(Delta/2T)/(T Delta).
    pub commutator_coeff: f64,
    /// Tr(rho [L_omega, L_g]) / i, computed from the matrices.
    pub weak_trace: f64,
}

fn require_gap(p: &LzParams) -> Result<f64> {
    let delta = p.gap();
    if delta == 0.0 {
        return Err(Error::Degenerate(
            "omega = g = 0 is an exact level crossing; no unique ground state".into(),
        ));
    }
    Ok(delta)
}

fn require_thermal(p: &LzParams) -> Result<f64> {
    if p.temperature == 0.0 {
        return Err(Error::Precondition(
            "temperature is zero; use the ground-state forms (qfi_ground, snr_sigmaz)".into(),
        ));
    }
    if p.temperature < 0.0 {
        return Err(Error::Validation(format!(
            "temperature {} must be nonnegative",
            p.temperature
        )));
    }
    Ok(p.temperature)
}

/// Ground state and its mixing angle phi = atan2(g, omega).
///
/// The state is the direct eigenvector (cos(phi/2), sin(phi/2)) of the 2x2
/// Hamiltonian with energy -Delta/2; the angle is derived output, so no
/// branch convention is imposed on top of atan2.
pub fn ground_state(p: &LzParams) -> Result<(f64, PureState)> {
    let _ = require_gap(p)?;
    let phi = f64::atan2(p.g, p.omega);
    let amplitudes = vec![
        Complex64::new((phi / 2.0).cos(), 0.0),
        Complex64::new((phi / 2.0).sin(), 0.0),
    ];
    Ok((phi, PureState::new(amplitudes)?))
}

/// Hamiltonian matrix in the (|down>, |up>) basis.
pub fn hamiltonian(p: &LzParams) -> HermitianMatrix {
    let mut h = HermitianMatrix::zeros(2);
    h.set(0, 0, Complex64::new(-p.omega / 2.0, 0.0));
    h.set(1, 1, Complex64::new(p.omega / 2.0, 0.0));
    h.set(0, 1, Complex64::new(-p.g / 2.0, 0.0));
    h.set(1, 0, Complex64::new(-p.g / 2.0, 0.0));
    h
}

/// Ground-state QFI for omega: g^2 / (g^2 + omega^2)^2.
pub fn qfi_ground(p: &LzParams) -> Result<f64> {
    let delta = require_gap(p)?;
    Ok(p.g * p.g / delta.powi(4))
}

/// Thermal QFI for omega at T > 0.
///
/// population_term = omega^2 sech^2(x) / (4 T^2 Delta^2) with x = Delta/2T,
/// weight = tanh^2(x), and total = population_term + weight * qfi_ground.
pub fn qfi_thermal(p: &LzParams) -> Result<LzThermalQfi> {
    let delta = require_gap(p)?;
    let t = require_thermal(p)?;
    let x = delta / (2.0 * t);
    let sech = 1.0 / x.cosh();
    let population_term = p.omega * p.omega * sech * sech / (4.0 * t * t * delta * delta);
    let weight = x.tanh().powi(2);
    let ground_qfi = qfi_ground(p)?;
    Ok(LzThermalQfi { population_term, weight, ground_qfi, total: population_term + weight * ground_qfi })
}

/// Zero-temperature SNR of a sigma_z readout on the ground state.
///
/// <sigma_z> = -omega/Delta, slope g^2/Delta^3, variance g^2/Delta^2; the
/// ratio collapses to g^2/Delta^4, exactly the QFI: sigma_z is optimal at
/// T = 0.
pub fn snr_sigmaz(p: &LzParams) -> Result<f64> {
    let delta = require_gap(p)?;
    if p.g == 0.0 {
        return Ok(0.0);
    }
    let slope = p.g * p.g / delta.powi(3);
    let variance = p.g * p.g / (delta * delta);
    Ok(slope * slope / variance)
}

/// Thermal SNR of a sigma_z readout:
/// sech^2(Delta/2T) [omega^2 Delta + g^2 T sinh(Delta/T)]^2 /
/// (2 T^2 Delta^4 [g^2 + 2 omega^2 + g^2 cosh(Delta/T)]).
///
/// Evaluated through e^(-Delta/T) so the hyperbolic growth cancels before
/// anything overflows; the T -> 0 limit recovers snr_sigmaz exactly.
pub fn snr_sigmaz_thermal(p: &LzParams) -> Result<f64> {
    let delta = require_gap(p)?;
    let t = require_thermal(p)?;
    let e2 = (-delta / t).exp();
    let a = p.omega * p.omega * delta;
    let b = p.g * p.g * t;
    let numer_root = a * e2 + 0.5 * b * (1.0 - e2 * e2);
    let denom_bracket =
        (p.g * p.g + 2.0 * p.omega * p.omega) * e2 + 0.5 * p.g * p.g * (1.0 + e2 * e2);
    if denom_bracket == 0.0 {
        // g = 0 with the Boltzmann factor fully underflowed: the SNR itself
        // decays like that factor.
        return Ok(0.0);
    }
    let one_plus = 1.0 + e2;
    Ok(4.0 * numer_root * numer_root
        / (one_plus * one_plus * 2.0 * t * t * delta.powi(4) * denom_bracket))
}

/// Ramsey-style SNR after interrogation time t with laser detuning
/// delta_l = omega_l - Delta: t^2 omega^2 cos^2(delta_l t) / Delta^2.
pub fn snr_ramsey(p: &LzParams, omega_l: f64, t: f64) -> Result<f64> {
    let delta = require_gap(p)?;
    if t < 0.0 {
        return Err(Error::Validation(format!("interrogation time t = {t} must be nonnegative")));
    }
    let detuning = omega_l - delta;
    Ok(t * t * p.omega * p.omega * (detuning * t).cos().powi(2) / (delta * delta))
}

/// Ground-state QFIM over (omega, g):
/// (1/Delta^4) [[g^2, -g omega], [-g omega, omega^2]].
///
/// Rank one: only the gap direction is resolvable from the pure ground
/// state, so the determinant vanishes identically.
pub fn qfim_ground(p: &LzParams) -> Result<FisherMatrix> {
    let delta = require_gap(p)?;
    let d4 = delta.powi(4);
    let entries = SymmetricMatrix::new(
        2,
        vec![
            p.g * p.g / d4,
            -p.g * p.omega / d4,
            -p.g * p.omega / d4,
            p.omega * p.omega / d4,
        ],
    );
    Ok(FisherMatrix { labels: vec!["omega".into(), "g".into()], entries })
}

/// Thermal QFIM over (omega, g) and its determinant.
///
/// With x = Delta/2T, A = sech^2(x)/(4 T^2 Delta^2), B = tanh^2(x)/Delta^4:
/// I_oo = A omega^2 + B g^2, I_gg = A g^2 + B omega^2,
/// I_og = (A - B) omega g.  The determinant collapses to
/// A * B * Delta^4 = sech^2(x) tanh^2(x) / (4 T^2 Delta^2), reported from
/// that closed form.
pub fn qfim_thermal(p: &LzParams) -> Result<(FisherMatrix, f64)> {
    let delta = require_gap(p)?;
    let t = require_thermal(p)?;
    let x = delta / (2.0 * t);
    let sech2 = (1.0 / x.cosh()).powi(2);
    let tanh2 = x.tanh().powi(2);
    let a = sech2 / (4.0 * t * t * delta * delta);
    let b = tanh2 / delta.powi(4);
    let (omega2, g2, og) = (p.omega * p.omega, p.g * p.g, p.omega * p.g);
    let entries = SymmetricMatrix::new(
        2,
        vec![a * omega2 + b * g2, (a - b) * og, (a - b) * og, a * g2 + b * omega2],
    );
    let det = sech2 * tanh2 / (4.0 * t * t * delta * delta);
    Ok((FisherMatrix { labels: vec!["omega".into(), "g".into()], entries }, det))
}

/// SLD pair for (omega, g) on the thermal state.
///
/// The Bloch solution L = -tanh(x) dx I + [dx sin(phi) + tanh(x) dphi
/// cos(phi)] sigma_x + [-dx cos(phi) + tanh(x) dphi sin(phi)] sigma_z per
/// parameter, with x = Delta/2T and phi the mixing angle.  The commutator
/// is [L_omega, L_g] = -i tanh(x)/(T Delta) sigma_y, nonzero at every
/// finite temperature, while Tr(rho [L_omega, L_g]) = 0: the pair is weakly
/// compatible.
pub fn sld_pair_thermal(p: &LzParams) -> Result<SldPairThermal> {
    let delta = require_gap(p)?;
    let t = require_thermal(p)?;
    let x = delta / (2.0 * t);
    let th = x.tanh();
    let (sin_phi, cos_phi) = (p.g / delta, p.omega / delta);
    // dx/dtheta and dphi/dtheta for theta in (omega, g).
    let dx = [p.omega / (2.0 * t * delta), p.g / (2.0 * t * delta)];
    let dphi = [-p.g / (delta * delta), p.omega / (delta * delta)];

    let build = |i: usize| -> HermitianMatrix {
        let d = -th * dx[i];
        let a = dx[i] * sin_phi + th * dphi[i] * cos_phi;
        let c = -dx[i] * cos_phi + th * dphi[i] * sin_phi;
        // (|down>, |up>) basis: sigma_z = diag(-1, +1), sigma_x off-diagonal.
        let mut l = HermitianMatrix::zeros(2);
        l.set(0, 0, Complex64::new(d - c, 0.0));
        l.set(1, 1, Complex64::new(d + c, 0.0));
        l.set(0, 1, Complex64::new(a, 0.0));
        l.set(1, 0, Complex64::new(a, 0.0));
        l
    };
    let l_omega = build(0);
    let l_g = build(1);
    let commutator_coeff = th / (t * delta);

    let rho = thermal_matrix(p);
    let mut trace = Complex64::new(0.0, 0.0);
    for r in 0..2 {
        for k in 0..2 {
            for c in 0..2 {
                trace += rho.at(r, k)
                    * (l_omega.at(k, c) * l_g.at(c, r) - l_g.at(k, c) * l_omega.at(c, r));
            }
        }
    }
    // The commutator is anti-Hermitian, so the trace is purely imaginary;
    // dividing by i leaves its imaginary part.
    let weak_trace = trace.im;
    Ok(SldPairThermal { l_omega, l_g, commutator_coeff, weak_trace })
}

/// Gibbs state exp(-H/T)/Z as a matrix in the (|down>, |up>) basis.
pub fn thermal_matrix(p: &LzParams) -> HermitianMatrix {
    let delta = p.gap();
    let th = if p.temperature > 0.0 { (delta / (2.0 * p.temperature)).tanh() } else { 1.0 };
    let (sin_phi, cos_phi) =
        if delta > 0.0 { (p.g / delta, p.omega / delta) } else { (0.0, 1.0) };
    // rho = (I + r . sigma)/2 with r = tanh(x) (sin phi, 0, -cos phi).
    let mut rho = HermitianMatrix::zeros(2);
    rho.set(0, 0, Complex64::new((1.0 + th * cos_phi) / 2.0, 0.0));
    rho.set(1, 1, Complex64::new((1.0 - th * cos_phi) / 2.0, 0.0));
    rho.set(0, 1, Complex64::new(th * sin_phi / 2.0, 0.0));
    rho.set(1, 0, Complex64::new(th * sin_phi / 2.0, 0.0));
    rho
}

/// Effective single-parameter QFI for the ratio Omega = g/omega:
/// omega^4 / (omega^2 + g^2)^2 = 1/(1 + Omega^2)^2.
pub fn effective_qfi(p: &LzParams) -> Result<f64> {
    if p.omega == 0.0 {
        return Err(Error::Domain("ratio Omega = g/omega is undefined at omega = 0".into()));
    }
    let delta = require_gap(p)?;
    Ok(p.omega.powi(4) / delta.powi(4))
}

/// The nonzero eigenpair of the singular ground-state QFIM: eigenvalue
/// 1/Delta^2 with unit eigenvector along (g, -omega)/Delta.
///
/// The sign makes the largest-magnitude component positive (first index
/// wins ties), matching the dense eigensolver's convention.  The vector is
/// orthogonal to the flat direction (omega, g)/Delta, which scales both
/// couplings without moving Omega = g/omega.
pub fn effective_direction(p: &LzParams) -> Result<(f64, [f64; 2])> {
    let delta = require_gap(p)?;
    let mut v = [p.g / delta, -p.omega / delta];
    let flip = if v[1].abs() > v[0].abs() { v[1] < 0.0 } else { v[0] < 0.0 };
    if flip {
        v[0] = -v[0];
        v[1] = -v[1];
    }
    Ok((1.0 / (delta * delta), v))
}

/// Adiabatic preparation time for a ramp of g up to ~omega at adiabaticity
/// gamma: T = (2 - sqrt(2)) / (2 gamma omega).
///
/// As the crossing is approached the gap closes and the affordable ramp
/// speed collapses; at the optimum the reachable QFI obeys
/// I ~ 2.8 T^2 gamma^2.
pub fn adiabatic_time(p: &LzParams, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Validation(format!(
            "adiabaticity gamma = {gamma} must lie in (0, 1); larger values violate the adiabatic bound"
        )));
    }
    if !(p.omega > 0.0) {
        return Err(Error::Validation(format!(
            "splitting omega = {} must be positive for a ramp duration",
            p.omega
        )));
    }
    Ok((2.0 - 2.0_f64.sqrt()) / (2.0 * gamma * p.omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::{self, SpectralState, StateDerivative};
    use crate::numerics::{self, DEFAULT_RANK_TOL};

    fn splitmix64(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    fn params(omega: f64, g: f64, t: f64) -> LzParams {
        LzParams::new(omega, g, t).unwrap()
    }

    /// Gibbs spectral data and its derivative with respect to parameter
    /// index 0 (omega) or 1 (g), built from the eigen decomposition only.
    fn gibbs_spectral(p: &LzParams) -> (SpectralState, [StateDerivative; 2]) {
        let delta = p.gap();
        let t = p.temperature;
        let x = delta / (2.0 * t);
        let phi = f64::atan2(p.g, p.omega);
        let ground = vec![
            Complex64::new((phi / 2.0).cos(), 0.0),
            Complex64::new((phi / 2.0).sin(), 0.0),
        ];
        let excited = vec![
            Complex64::new(-(phi / 2.0).sin(), 0.0),
            Complex64::new((phi / 2.0).cos(), 0.0),
        ];
        let pg = (1.0 + x.tanh()) / 2.0;
        let state = SpectralState::new(vec![pg, 1.0 - pg], vec![ground, excited]).unwrap();

        let sech2 = (1.0 / x.cosh()).powi(2);
        let dx = [p.omega / (2.0 * t * delta), p.g / (2.0 * t * delta)];
        let dphi = [-p.g / (delta * delta), p.omega / (delta * delta)];
        let derivs = [0, 1].map(|i| {
            let dpg = sech2 * dx[i] / 2.0;
            // d|ground> = (dphi/2)|excited>, d|excited> = -(dphi/2)|ground>.
            let o = dphi[i] / 2.0;
            StateDerivative {
                dpopulations: vec![dpg, -dpg],
                overlaps: vec![
                    vec![Complex64::new(0.0, 0.0), Complex64::new(-o, 0.0)],
                    vec![Complex64::new(o, 0.0), Complex64::new(0.0, 0.0)],
                ],
            }
        });
        (state, derivs)
    }

    #[test]
    fn ground_state_limits_and_energy() {
        let (phi, psi) = ground_state(&params(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(phi, 0.0);
        assert!((psi.amplitudes[0].re - 1.0).abs() < 1e-15);
        assert!(psi.amplitudes[1].norm() < 1e-15);

        // Rayleigh quotient at omega = g = 1 is -Delta/2 = -sqrt(2)/2.
        let p = params(1.0, 1.0, 0.0);
        let (_, psi) = ground_state(&p).unwrap();
        let h = hamiltonian(&p);
        let hpsi = h.mul_vec(&psi.amplitudes);
        let energy: f64 =
            psi.amplitudes.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum();
        assert!((energy + 2.0_f64.sqrt() / 2.0).abs() <= 1e-12);

        // Deep transverse field: sigma_x eigenstate.
        let (_, psi) = ground_state(&params(1.0, 1e9, 0.0)).unwrap();
        for a in &psi.amplitudes {
            assert!((a.re - 1.0 / 2.0_f64.sqrt()).abs() < 1e-9);
        }

        assert!(matches!(ground_state(&params(0.0, 0.0, 0.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn ground_state_eigen_residual() {
        let mut seed = 11u64;
        for _ in 0..50 {
            let omega = 4.0 * splitmix64(&mut seed) - 2.0;
            let g = 4.0 * splitmix64(&mut seed) - 2.0;
            if omega.hypot(g) < 1e-3 {
                continue;
            }
            let p = params(omega, g, 0.0);
            let (_, psi) = ground_state(&p).unwrap();
            let h = hamiltonian(&p);
            let hpsi = h.mul_vec(&psi.amplitudes);
            let e = -p.gap() / 2.0;
            let residual: f64 = psi
                .amplitudes
                .iter()
                .zip(&hpsi)
                .map(|(a, b)| (b - a * e).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(residual <= 1e-12, "residual {residual:.3e}");
        }
    }

    #[test]
    fn qfi_ground_values() {
        assert!((qfi_ground(&params(1.0, 1.0, 0.0)).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(qfi_ground(&params(1.0, 0.0, 0.0)).unwrap(), 0.0);
        assert!((qfi_ground(&params(2.0, 1.0, 0.0)).unwrap() - 0.04).abs() < 1e-15);
    }

    #[test]
    fn qfi_thermal_limits() {
        let p = params(1.0, 1.0, 1e-6);
        let cold = qfi_thermal(&p).unwrap();
        assert!((cold.total - qfi_ground(&p).unwrap()).abs() <= 1e-9);

        let hot = qfi_thermal(&params(1.0, 1.0, 1e6)).unwrap();
        assert!(hot.total <= 1e-9);

        assert!(matches!(
            qfi_thermal(&params(1.0, 1.0, 0.0)),
            Err(Error::Precondition(msg)) if msg.contains("qfi_ground")
        ));

        // Decomposition invariants.
        let mid = qfi_thermal(&params(0.7, 1.3, 0.4)).unwrap();
        assert!((mid.total - mid.population_term - mid.weight * mid.ground_qfi).abs() < 1e-12);
        assert!(mid.weight >= 0.0 && mid.weight <= 1.0);
        assert!(mid.total >= mid.weight * mid.ground_qfi);
    }

    #[test]
    fn qfi_thermal_matches_spectral_oracle() {
        let p = params(1.0, 1.0, 1.0);
        let (state, derivs) = gibbs_spectral(&p);
        let oracle = estimation::qfi_spectral(&state, &derivs[0]).unwrap();
        let closed = qfi_thermal(&p).unwrap();
        assert!((closed.total - oracle.total).abs() <= 1e-10);
        assert!((closed.population_term - oracle.population_term).abs() <= 1e-10);
    }

    #[test]
    fn snr_sigmaz_equals_ground_qfi() {
        assert!((snr_sigmaz(&params(1.0, 1.0, 0.0)).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(snr_sigmaz(&params(1.0, 0.0, 0.0)).unwrap(), 0.0);
        let mut seed = 3u64;
        for _ in 0..40 {
            let omega = 3.0 * splitmix64(&mut seed) + 0.1;
            let g = 3.0 * splitmix64(&mut seed) + 0.1;
            let p = params(omega, g, 0.0);
            let snr = snr_sigmaz(&p).unwrap();
            let qfi = qfi_ground(&p).unwrap();
            assert!((snr - qfi).abs() <= 1e-12 * qfi.max(1.0));
        }
    }

    #[test]
    fn snr_sigmaz_thermal_against_error_propagation() {
        let mut seed = 17u64;
        for _ in 0..40 {
            let omega = 2.0 * splitmix64(&mut seed) + 0.2;
            let g = 2.0 * splitmix64(&mut seed) + 0.2;
            let t = 2.0 * splitmix64(&mut seed) + 0.2;
            let p = params(omega, g, t);
            // Direct route: m = -(omega/Delta) tanh(x), slope via the exact
            // derivative, variance 1 - m^2.
            let delta = p.gap();
            let x = delta / (2.0 * t);
            let m = -(omega / delta) * x.tanh();
            let slope = -x.tanh() * g * g / delta.powi(3)
                - omega * omega / (2.0 * t * delta * delta) * (1.0 / x.cosh()).powi(2);
            let direct = slope * slope / (1.0 - m * m);
            let closed = snr_sigmaz_thermal(&p).unwrap();
            assert!(
                (closed - direct).abs() <= 1e-12 * direct.max(1.0),
                "closed {closed} direct {direct}"
            );
        }
    }

    #[test]
    fn snr_sigmaz_thermal_limits_and_hierarchy() {
        // T -> 0 recovers the ground-state SNR through the overflow-safe path.
        let p = params(1.0, 1.0, 1e-6);
        assert!((snr_sigmaz_thermal(&p).unwrap() - snr_sigmaz(&p).unwrap()).abs() <= 1e-6);

        // Strict suboptimality at omega = g = T = 1.
        let p1 = params(1.0, 1.0, 1.0);
        let snr = snr_sigmaz_thermal(&p1).unwrap();
        let qfi = qfi_thermal(&p1).unwrap().total;
        assert!(snr < qfi, "snr {snr} should be strictly below qfi {qfi}");

        assert!(snr_sigmaz_thermal(&params(1.0, 1.0, 1e6)).unwrap() <= 1e-9);

        // g = 0 with a fully underflowed Boltzmann factor.
        assert_eq!(snr_sigmaz_thermal(&params(1.0, 0.0, 1e-9)).unwrap(), 0.0);

        let mut seed = 23u64;
        for _ in 0..60 {
            let omega = 3.0 * splitmix64(&mut seed) + 0.1;
            let g = 3.0 * splitmix64(&mut seed) + 0.1;
            let t = 3.0 * splitmix64(&mut seed) + 0.05;
            let p = params(omega, g, t);
            let snr = snr_sigmaz_thermal(&p).unwrap();
            let qfi = qfi_thermal(&p).unwrap().total;
            assert!(snr <= qfi + 1e-9, "snr {snr} above qfi {qfi}");
        }
    }

    #[test]
    fn snr_ramsey_fringe() {
        // g = 0 on resonance: t^2 regardless of omega.
        let p = params(2.0, 0.0, 0.0);
        let snr = snr_ramsey(&p, p.gap(), 0.7).unwrap();
        assert!((snr - 0.49).abs() < 1e-12);

        // Quarter-period detuning kills the fringe.
        let p = params(1.0, 1.0, 0.0);
        let t = 0.9;
        let omega_l = p.gap() + std::f64::consts::FRAC_PI_2 / t;
        assert!(snr_ramsey(&p, omega_l, t).unwrap() < 1e-30);

        // Envelope bound t^2 omega^2 / Delta^2 <= t^2.
        let mut seed = 29u64;
        for _ in 0..40 {
            let omega = 2.0 * splitmix64(&mut seed) + 0.1;
            let g = 2.0 * splitmix64(&mut seed);
            let om_l = 3.0 * splitmix64(&mut seed);
            let t = 2.0 * splitmix64(&mut seed);
            let snr = snr_ramsey(&params(omega, g, 0.0), om_l, t).unwrap();
            assert!(snr <= t * t * (1.0 + 1e-12));
        }

        assert!(matches!(snr_ramsey(&p, 1.0, -0.1), Err(Error::Validation(_))));
    }

    #[test]
    fn qfim_ground_structure() {
        let info = qfim_ground(&params(1.0, 1.0, 0.0)).unwrap();
        let want = [0.25, -0.25, -0.25, 0.25];
        for (got, want) in info.entries.entries.iter().zip(&want) {
            assert!((got - want).abs() < 1e-15);
        }

        let mut seed = 31u64;
        for _ in 0..40 {
            let omega = 4.0 * splitmix64(&mut seed) - 2.0;
            let g = 4.0 * splitmix64(&mut seed) - 2.0;
            if omega.hypot(g) < 0.1 {
                continue;
            }
            let p = params(omega, g, 0.0);
            let m = &qfim_ground(&p).unwrap().entries;
            let det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
            assert!(det.abs() <= 1e-14);
            let delta2 = omega * omega + g * g;
            assert!((m.trace() - 1.0 / delta2).abs() <= 1e-12 / delta2);

            // PSD and rank one: eigenvalues {0, 1/Delta^2}.
            let eig = numerics::eigh_symmetric(m).unwrap();
            assert!(eig.values[0].abs() <= 1e-14);
            assert!((eig.values[1] - 1.0 / delta2).abs() <= 1e-12);
        }
    }

    #[test]
    fn qfim_ground_pseudoinverse_at_symmetric_point() {
        let info = qfim_ground(&params(1.0, 1.0, 0.0)).unwrap();
        let pinv = numerics::pseudoinverse_psd(&info.entries, DEFAULT_RANK_TOL).unwrap();
        let want = [1.0, -1.0, -1.0, 1.0];
        for (got, want) in pinv.entries.iter().zip(&want) {
            assert!((got - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn qfim_thermal_det_closed_form_on_grid() {
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    let p = params(
                        0.2 + 0.2 * i as f64,
                        0.1 + 0.2 * j as f64,
                        0.1 + 0.2 * k as f64,
                    );
                    let (info, det) = qfim_thermal(&p).unwrap();
                    let m = &info.entries;
                    let direct = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
                    assert!((det - direct).abs() <= 1e-9, "det {det} vs entries {direct}");
                }
            }
        }
    }

    #[test]
    fn qfim_thermal_values_and_limits() {
        // Two independent routes (entry formulas and a brute-force SLD
        // assembly) agree on 0.0291605... at omega = g = T = 1.
        let (_, det) = qfim_thermal(&params(1.0, 1.0, 1.0)).unwrap();
        assert!((det - 0.029160503141).abs() <= 1e-9);

        let (_, det_cold) = qfim_thermal(&params(1.0, 1.0, 1e-3)).unwrap();
        assert!(det_cold <= 1e-9);

        let (info_hot, det_hot) = qfim_thermal(&params(1.0, 1.0, 1e6)).unwrap();
        assert!(info_hot.entries.entries.iter().all(|e| e.abs() <= 1e-9));
        assert!(det_hot <= 1e-9);
    }

    #[test]
    fn qfim_thermal_matches_estimation_assembly() {
        for (omega, g, t) in [(1.0, 1.0, 1.0), (0.6, 1.7, 0.4), (2.0, 0.3, 2.5)] {
            let p = params(omega, g, t);
            let (state, derivs) = gibbs_spectral(&p);
            let assembled =
                estimation::qfim(&state, &["omega", "g"], &derivs).unwrap();
            let (closed, _) = qfim_thermal(&p).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    assert!(
                        (assembled.entries.at(r, c) - closed.entries.at(r, c)).abs() <= 1e-10,
                        "entry ({r},{c})"
                    );
                }
            }
        }
    }

    #[test]
    fn sld_pair_solves_lyapunov_and_matches_spectral_oracle() {
        let mut seed = 41u64;
        for _ in 0..25 {
            let omega = 2.0 * splitmix64(&mut seed) + 0.2;
            let g = 2.0 * splitmix64(&mut seed) + 0.2;
            let t = 2.0 * splitmix64(&mut seed) + 0.2;
            let p = params(omega, g, t);
            let pair = sld_pair_thermal(&p).unwrap();
            let rho = thermal_matrix(&p);

            // d rho by exact coefficient differentiation.
            let delta = p.gap();
            let x = delta / (2.0 * t);
            let (s2, th) = ((1.0 / x.cosh()).powi(2), x.tanh());
            let (sin_phi, cos_phi) = (g / delta, omega / delta);
            let dx = [omega / (2.0 * t * delta), g / (2.0 * t * delta)];
            let dphi = [-g / (delta * delta), omega / (delta * delta)];
            for (i, l) in [&pair.l_omega, &pair.l_g].into_iter().enumerate() {
                let d_rc = s2 * dx[i] * cos_phi - th * sin_phi * dphi[i];
                let d_rx = s2 * dx[i] * sin_phi + th * cos_phi * dphi[i];
                let mut drho = HermitianMatrix::zeros(2);
                drho.set(0, 0, Complex64::new(d_rc / 2.0, 0.0));
                drho.set(1, 1, Complex64::new(-d_rc / 2.0, 0.0));
                drho.set(0, 1, Complex64::new(d_rx / 2.0, 0.0));
                drho.set(1, 0, Complex64::new(d_rx / 2.0, 0.0));

                // Lyapunov residual of the closed-form SLD.
                for r in 0..2 {
                    for c in 0..2 {
                        let mut anti = Complex64::new(0.0, 0.0);
                        for k in 0..2 {
                            anti += l.at(r, k) * rho.at(k, c) + rho.at(r, k) * l.at(k, c);
                        }
                        assert!((anti / 2.0 - drho.at(r, c)).norm() <= 1e-12);
                    }
                }

                // Spectral-construction oracle.
                let (state, _) = gibbs_spectral(&p);
                let oracle = estimation::sld(&state, &drho).unwrap();
                for r in 0..2 {
                    for c in 0..2 {
                        assert!((oracle.at(r, c) - l.at(r, c)).norm() <= 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn sld_commutator_and_weak_trace() {
        let mut seed = 43u64;
        for _ in 0..30 {
            let omega = 2.0 * splitmix64(&mut seed) + 0.2;
            let g = 2.0 * splitmix64(&mut seed) + 0.2;
            let t = 2.0 * splitmix64(&mut seed) + 0.2;
            let pair = sld_pair_thermal(&params(omega, g, t)).unwrap();
            assert!(pair.commutator_coeff > 0.0);
            assert!(pair.weak_trace.abs() <= 1e-10);

            // [L_omega, L_g] = coeff [[0, 1], [-1, 0]] in this basis.
            let (lo, lg) = (&pair.l_omega, &pair.l_g);
            for r in 0..2 {
                for c in 0..2 {
                    let mut comm = Complex64::new(0.0, 0.0);
                    for k in 0..2 {
                        comm += lo.at(r, k) * lg.at(k, c) - lg.at(r, k) * lo.at(k, c);
                    }
                    let want = match (r, c) {
                        (0, 1) => pair.commutator_coeff,
                        (1, 0) => -pair.commutator_coeff,
                        _ => 0.0,
                    };
                    assert!((comm - Complex64::new(want, 0.0)).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn effective_qfi_and_propagated_variance() {
        assert!((effective_qfi(&params(1.0, 1.0, 0.0)).unwrap() - 0.25).abs() < 1e-15);
        assert!((effective_qfi(&params(2.0, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(effective_qfi(&params(0.0, 1.0, 0.0)), Err(Error::Domain(_))));

        let mut seed = 47u64;
        for _ in 0..30 {
            let omega = 2.0 * splitmix64(&mut seed) + 0.2;
            let g = 2.0 * splitmix64(&mut seed) + 0.1;
            let p = params(omega, g, 0.0);
            let info = qfim_ground(&p).unwrap();
            let pinv = numerics::pseudoinverse_psd(&info.entries, DEFAULT_RANK_TOL).unwrap();
            // Gradient of Omega = g/omega in (omega, g) order.
            let jac = [-g / (omega * omega), 1.0 / omega];
            let var = estimation::effective_variance(&pinv, &jac).unwrap();
            let eff = effective_qfi(&p).unwrap();
            assert!((1.0 / var - eff).abs() <= 1e-10 * eff.max(1.0));
        }
    }

    #[test]
    fn effective_direction_eigenpair() {
        let (val, vec) = effective_direction(&params(1.0, 1.0, 0.0)).unwrap();
        assert!((val - 0.5).abs() < 1e-15);
        // Orthogonality to the flat mode (omega, g) fixes the relative sign;
        // largest component positive fixes the overall one.
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((vec[0] - inv_sqrt2).abs() < 1e-15);
        assert!((vec[1] + inv_sqrt2).abs() < 1e-15);

        let (val, vec) = effective_direction(&params(3.0, 4.0, 0.0)).unwrap();
        assert!((val - 0.04).abs() < 1e-15);
        assert!((vec[0] - 0.8).abs() < 1e-15 && (vec[1] + 0.6).abs() < 1e-15);

        let mut seed = 53u64;
        for _ in 0..30 {
            let omega = 3.0 * splitmix64(&mut seed) + 0.1;
            let g = 3.0 * splitmix64(&mut seed) + 0.1;
            let p = params(omega, g, 0.0);
            let info = qfim_ground(&p).unwrap();
            let (val, vec) = effective_direction(&p).unwrap();

            // Eigen-residual against the assembled QFIM.
            for r in 0..2 {
                let mv = info.entries.at(r, 0) * vec[0] + info.entries.at(r, 1) * vec[1];
                assert!((mv - val * vec[r]).abs() <= 1e-14);
            }

            // Orthogonal to the zero mode reported by the spectral splitter.
            let modes = estimation::qfim_zero_modes(&info, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(modes.len(), 1);
            let dot = modes[0].1[0] * vec[0] + modes[0].1[1] * vec[1];
            assert!(dot.abs() <= 1e-12);

            // The normalized gradient of Omega = g/omega is the same
            // direction (up to overall sign).
            let grad = [-g / (omega * omega), 1.0 / omega];
            let norm = grad[0].hypot(grad[1]);
            let align = (grad[0] * vec[0] + grad[1] * vec[1]).abs() / norm;
            assert!((align - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn adiabatic_time_and_reachable_qfi() {
        let p = params(1.0, 1.0, 0.0);
        let time = adiabatic_time(&p, 0.01).unwrap();
        assert!((time - 29.289321881345245).abs() <= 1e-10);

        // T gamma omega is scale invariant.
        let mut seed = 59u64;
        for _ in 0..20 {
            let omega = 5.0 * splitmix64(&mut seed) + 0.1;
            let gamma = 0.9 * splitmix64(&mut seed) + 0.01;
            let t = adiabatic_time(&params(omega, 0.0, 0.0), gamma).unwrap();
            assert!((t * gamma * omega - (2.0 - 2.0_f64.sqrt()) / 2.0).abs() <= 1e-12);
        }

        // Reachable QFI at the optimum g = omega: 2.8 T^2 gamma^2 ~ I_omega.
        let gamma = 0.02;
        let omega = 1.3;
        let t = adiabatic_time(&params(omega, omega, 0.0), gamma).unwrap();
        let ratio = 2.8 * t * t * gamma * gamma / qfi_ground(&params(omega, omega, 0.0)).unwrap();
        assert!((0.95..=1.05).contains(&ratio), "ratio {ratio}");

        assert!(matches!(adiabatic_time(&p, 1.0), Err(Error::Validation(_))));
        assert!(matches!(adiabatic_time(&p, 0.0), Err(Error::Validation(_))));
    }

    #[test]
    fn effective_qfi_matches_rescaled_hamiltonian_route() {
        // Ground state of (sigma_z - Omega sigma_x)/2 differentiated against
        // Omega by central differences, fed to the pure-state QFI.
        for (omega, g) in [(1.0, 1.0), (2.0, 0.5), (0.7, 1.9)] {
            let cap_omega = g / omega;
            let state_at = |w: f64| {
                let (_, psi) = ground_state(&params(1.0, w, 0.0)).unwrap();
                psi
            };
            let h = 1e-6;
            let plus = state_at(cap_omega + h);
            let minus = state_at(cap_omega - h);
            let dpsi: Vec<Complex64> = plus
                .amplitudes
                .iter()
                .zip(&minus.amplitudes)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect();
            let qfi = estimation::qfi_pure(&state_at(cap_omega), &dpsi).unwrap();
            let eff = effective_qfi(&params(omega, g, 0.0)).unwrap();
            assert!((qfi - eff).abs() <= 1e-10 * eff.max(1.0), "qfi {qfi} vs {eff}");
        }
    }
}
