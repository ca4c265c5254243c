//! Critical squeezed oscillator and the driven dispersive Rabi probe.
//!
//! Two bosonic settings where criticality renormalizes a mode frequency and
//! the renormalization carries the parameter:
//!
//! * a parametric oscillator whose ground state is squeezed vacuum with
//!   xi = (1/4) ln(1 - g/omega); the QFI for omega is 2 (d xi/d omega)^2 and
//!   diverges at g -> omega, where number or quadrature-squared readouts
//!   both saturate it exactly;
//! * an ultrastrongly coupled cavity-qubit system in the normal phase,
//!   response frequency omega sqrt(1 - g^2/g_c^2) with g_c = sqrt(omega
//!   Omega).  Driving the normal mode and reading the steady coherent state
//!   inherits a (1 - g^2/g_c^2)^(-1) sensitivity enhancement from the
//!   virtual-photon squeezing even though the probe state itself is
//!   classical.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Parametric oscillator in the normal phase.  Ground-state formulas below
/// require g < omega and report a superradiant-breakdown error otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub omega: f64,
    pub g: f64,
}

impl OscillatorParams {
    pub fn new(omega: f64, g: f64) -> Result<Self> {
        if !(omega > 0.0) || !(g >= 0.0) {
            return Err(Error::Validation(format!(
                "need omega > 0 and g >= 0, got ({omega}, {g})"
            )));
        }
        Ok(Self { omega, g })
    }

    fn require_normal(&self) -> Result<()> {
        if self.g >= self.omega {
            return Err(Error::Domain(format!(
                "g = {} >= omega = {}: the ground-state description breaks down in the \
                 superradiant phase",
                self.g, self.omega
            )));
        }
        Ok(())
    }
}

/// Squeezing parameter xi = (1/4) ln(1 - g/omega), negative for g > 0.
pub fn xi(p: &OscillatorParams) -> Result<f64> {
    p.require_normal()?;
    Ok(0.25 * (1.0 - p.g / p.omega).ln())
}

fn dxi_domega(p: &OscillatorParams) -> f64 {
    // Exact derivative of the logarithm: (1/4)(1/(omega-g) - 1/omega).
    0.25 * (1.0 / (p.omega - p.g) - 1.0 / p.omega)
}

/// Excitation-mode frequency omega sqrt(1 - g/omega) = omega e^{2 xi}.
pub fn renormalized_frequency(p: &OscillatorParams) -> Result<f64> {
    p.require_normal()?;
    Ok(p.omega * (1.0 - p.g / p.omega).sqrt())
}

/// Ground-state QFI for omega: g^2/(8 omega^2 (g - omega)^2) = 2 (d xi)^2,
/// divergent at the critical point.
pub fn qfi_ho(p: &OscillatorParams) -> Result<f64> {
    p.require_normal()?;
    let d = p.g - p.omega;
    Ok(p.g * p.g / (8.0 * p.omega * p.omega * d * d))
}

/// Ground-state excitation number sinh^2 xi, diverging like
/// (1/4)(1 - g/omega)^(-1/2) at criticality.
pub fn vacuum_excitations(p: &OscillatorParams) -> Result<f64> {
    let s = xi(p)?.sinh();
    Ok(s * s)
}

/// SNR of a number readout, (d<n>)^2 / Var(n); equals the QFI.
pub fn snr_number(p: &OscillatorParams) -> Result<f64> {
    p.require_normal()?;
    if p.g == 0.0 {
        return Err(Error::Degenerate(
            "vacuum probe: zero excitations leave the number readout with no signal".into(),
        ));
    }
    let two_xi = 2.0 * xi(p)?;
    let slope = two_xi.sinh() * dxi_domega(p);
    let variance = two_xi.sinh().powi(2) / 2.0;
    Ok(slope * slope / variance)
}

/// SNR of a quadrature-squared readout, (d<x^2>)^2 / Var(x^2) with Gaussian
/// moment factorization Var(x^2) = 2 <x^2>^2; equals the QFI.
pub fn snr_quadrature(p: &OscillatorParams) -> Result<f64> {
    p.require_normal()?;
    let xsq = (2.0 * xi(p)?).exp() / 2.0;
    let slope = 2.0 * dxi_domega(p) * xsq;
    let variance = 2.0 * xsq * xsq;
    Ok(slope * slope / variance)
}

/// Adiabatic preparation cost near criticality.
///
/// `time` is the ramp duration T = (8/(gamma omega)) <n>, `qfi_rewritten`
/// the reachable precision 8 gamma^2 T^2 <n>^2 expressed through that
/// budget, and `sql_crossover_n` the excitation number 1/(8 gamma^2) beyond
/// which the critical protocol beats time-bounded standard scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticBudget {
    pub time: f64,
    pub qfi_rewritten: f64,
    pub sql_crossover_n: f64,
}

pub fn adiabatic_budget(p: &OscillatorParams, gamma: f64) -> Result<AdiabaticBudget> {
    p.require_normal()?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Validation(format!(
            "adiabaticity gamma = {gamma} must lie in (0, 1)"
        )));
    }
    let n = vacuum_excitations(p)?;
    let time = 8.0 * n / (gamma * p.omega);
    let qfi_rewritten = 8.0 * gamma * gamma * time * time * n * n;
    Ok(AdiabaticBudget { time, qfi_rewritten, sql_crossover_n: 1.0 / (8.0 * gamma * gamma) })
}

/// Driven-dissipative dispersive Rabi probe in the normal phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UscParams {
    /// Cavity frequency (the estimation target).
    pub omega: f64,
    /// Qubit splitting.
    pub omega_qubit: f64,
    /// Light-matter coupling.
    pub g: f64,
    /// Drive amplitude in input-output units.
    pub eta: f64,
    /// Dissipation rate of the normal mode.
    pub kappa: f64,
    /// Drive frequency.
    pub omega_drive: f64,
}

impl UscParams {
    pub fn new(
        omega: f64,
        omega_qubit: f64,
        g: f64,
        eta: f64,
        kappa: f64,
        omega_drive: f64,
    ) -> Result<Self> {
        if !(omega > 0.0) || !(omega_qubit > 0.0) {
            return Err(Error::Validation(format!(
                "need positive mode frequencies, got ({omega}, {omega_qubit})"
            )));
        }
        if !(g >= 0.0) || !(eta >= 0.0) || !(kappa >= 0.0) || !omega_drive.is_finite() {
            return Err(Error::Validation(
                "coupling, drive, and dissipation must be nonnegative and finite".into(),
            ));
        }
        Ok(Self { omega, omega_qubit, g, eta, kappa, omega_drive })
    }

    fn require_normal(&self) -> Result<f64> {
        let gc2 = self.omega * self.omega_qubit;
        if self.g * self.g >= gc2 {
            return Err(Error::Domain(format!(
                "g = {} at or beyond g_c = {}: superradiant regime, dispersive normal-phase \
                 description invalid",
                self.g,
                gc2.sqrt()
            )));
        }
        Ok(gc2)
    }

    fn require_dissipative(&self) -> Result<()> {
        if self.kappa <= 0.0 {
            return Err(Error::Validation("steady state needs kappa > 0".into()));
        }
        Ok(())
    }
}

/// Critical coupling g_c = sqrt(omega Omega).
pub fn usc_g_critical(p: &UscParams) -> f64 {
    (p.omega * p.omega_qubit).sqrt()
}

/// Response frequency omega sqrt(1 - g^2/g_c^2) = omega e^{-2 xi} with the
/// positive-xi convention of the coupled system.
pub fn usc_renormalized_frequency(p: &UscParams) -> Result<f64> {
    let gc2 = p.require_normal()?;
    Ok(p.omega * (1.0 - p.g * p.g / gc2).sqrt())
}

/// Detuning between the renormalized response and the drive.
pub fn usc_detuning(p: &UscParams) -> Result<f64> {
    Ok(usc_renormalized_frequency(p)? - p.omega_drive)
}

/// Steady coherent amplitude of the damped, driven normal mode:
/// alpha = -i sqrt(kappa) eta / (kappa/2 - i delta), which carries the
/// printed magnitude 2 sqrt(kappa eta^2/(kappa^2 + 4 delta^2)) and phase
/// -arctan(kappa/(2 delta)) continued through delta = 0 as -pi/2.
pub fn usc_steady_alpha(p: &UscParams) -> Result<Complex64> {
    p.require_dissipative()?;
    let delta = usc_detuning(p)?;
    let drive = Complex64::new(0.0, -p.kappa.sqrt() * p.eta);
    Ok(drive / Complex64::new(p.kappa / 2.0, -delta))
}

/// Output photon rate 4 kappa eta^2/(kappa^2 + 4 delta^2).  Numerically
/// equal to |alpha|^2 under the amplitude convention above; exposed
/// separately because rate and steady occupation are distinct quantities.
pub fn usc_photon_rate(p: &UscParams) -> Result<f64> {
    p.require_dissipative()?;
    let delta = usc_detuning(p)?;
    Ok(4.0 * p.kappa * p.eta * p.eta / (p.kappa * p.kappa + 4.0 * delta * delta))
}

/// Coherent-probe QFI for omega, split into amplitude and phase channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UscQfi {
    pub amplitude_part: f64,
    pub phase_part: f64,
    pub total: f64,
    /// Squeezing enhancement e^{4 xi} = (1 - g^2/g_c^2)^(-1).
    pub enhancement_e4xi: f64,
}

/// Exact chain-rule QFI of the steady coherent state,
/// 4 (d_omega A)^2 + 4 A^2 (d_omega phi)^2, with every omega-dependence
/// routed through delta(omega): d_omega delta = (omega - g^2/(2 Omega)) /
/// omega_eff, which near criticality grows as e^{2 xi}/2 and produces the
/// e^{4 xi} enhancement.
pub fn usc_qfi_omega(p: &UscParams) -> Result<UscQfi> {
    p.require_dissipative()?;
    let gc2 = p.require_normal()?;
    let weff = usc_renormalized_frequency(p)?;
    let delta = weff - p.omega_drive;
    let ddelta = (p.omega - p.g * p.g / (2.0 * p.omega_qubit)) / weff;
    let y = p.kappa * p.kappa + 4.0 * delta * delta;

    let amp = 2.0 * p.eta * (p.kappa / y).sqrt();
    let damp = -8.0 * p.eta * p.kappa.sqrt() * delta * y.powf(-1.5) * ddelta;
    let dphase = 2.0 * p.kappa / y * ddelta;

    let amplitude_part = 4.0 * damp * damp;
    let phase_part = 4.0 * amp * amp * dphase * dphase;
    Ok(UscQfi {
        amplitude_part,
        phase_part,
        total: amplitude_part + phase_part,
        enhancement_e4xi: 1.0 / (1.0 - p.g * p.g / gc2),
    })
}

/// The near-critical comparison form, kept verbatim:
///
/// I = 4|alpha|^2 4 delta^2 Omega (4 delta^2 + kappa^2) e^{4 xi} /
///     (omega^2 X^3) + 4|alpha|^2 4 kappa^2 e^{4 xi} / (omega^2 X^2),
/// X = Omega (4 delta^2 + kappa^2) - 4 g^2 omega.
///
/// This is a comparison target, not the primary output: X changes sign with
/// kappa and delta, and away from its pole the expression does not track the
/// exact chain-rule QFI (see tests).
pub fn usc_qfi_near_critical(p: &UscParams) -> Result<f64> {
    p.require_dissipative()?;
    let gc2 = p.require_normal()?;
    let delta = usc_detuning(p)?;
    let y = p.kappa * p.kappa + 4.0 * delta * delta;
    let x = p.omega_qubit * y - 4.0 * p.g * p.g * p.omega;
    if x == 0.0 {
        return Err(Error::Domain("comparison form is at its pole".into()));
    }
    let e4 = 1.0 / (1.0 - p.g * p.g / gc2);
    let alpha_sq = 4.0 * p.kappa * p.eta * p.eta / y;
    let w2 = p.omega * p.omega;
    let amplitude = 4.0 * alpha_sq * 4.0 * delta * delta * p.omega_qubit * y / (w2 * x * x * x) * e4;
    let phase = 4.0 * alpha_sq * 4.0 * p.kappa * p.kappa / (w2 * x * x) * e4;
    Ok(amplitude + phase)
}
