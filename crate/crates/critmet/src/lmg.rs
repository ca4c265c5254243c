//! Collective spin with isotropic all-to-all coupling: finite-size spectra,
//! excited-state enhancement, and thermodynamic-limit quench formulas.
//!
//! N spins with H = omega S_z - (g/N) S_x^2 conserve total spin, so the
//! maximal sector S = N/2 reduces to an (N+1)-dimensional tridiagonal-in-steps
//! problem in the |S, m> basis.  The estimation target is omega, with
//! d_omega H = S_z; eigenstate QFI and readout SNR follow from first-order
//! perturbation sums over the exact spectrum.
//!
//! In the thermodynamic limit the low-energy sector maps onto a squeezed
//! oscillator (squeezing xi = (1/4) log(omega/(omega - g)) below g = omega),
//! giving closed forms for the excited squeezed-Fock QFI, 2 (n^2 + n + 1)
//! (d_omega xi)^2, and for sudden-quench dynamics: an oscillatory QFI below
//! the critical coupling, omega^4 t^6 / 18 exactly at it, and exponential
//! growth from inverted-oscillator squeezing beyond it.

use crate::error::{Error, Result};
use crate::numerics::{self, EigenSystem, SymmetricMatrix};

/// Collective-spin problem: n spins, splitting omega, coupling g >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgParams {
    pub n: usize,
    pub omega: f64,
    pub g: f64,
}

impl LmgParams {
    pub fn new(n: usize, omega: f64, g: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Validation(format!("need at least 2 spins, got {n}")));
        }
        if !(omega > 0.0) || !(g >= 0.0) || !omega.is_finite() || !g.is_finite() {
            return Err(Error::Validation(format!(
                "need omega > 0 and g >= 0, got ({omega}, {g})"
            )));
        }
        Ok(Self { n, omega, g })
    }

    /// S_z eigenvalue at basis index i, m = i - N/2.
    fn m_at(&self, i: usize) -> f64 {
        i as f64 - self.n as f64 / 2.0
    }
}

/// H in the maximal-spin basis: diagonal omega m - (g/N)(S(S+1) - m^2)/2,
/// step-two off-diagonals -(g/N) c(m) c(m+1) / 4 from S_+^2 + S_-^2, with
/// c(m) = sqrt(S(S+1) - m(m+1)).
pub fn hamiltonian(p: &LmgParams) -> SymmetricMatrix {
    let n = p.n;
    let s = n as f64 / 2.0;
    let ss1 = s * (s + 1.0);
    let raise = |m: f64| (ss1 - m * (m + 1.0)).sqrt();
    let mut h = SymmetricMatrix::zeros(n + 1);
    for i in 0..=n {
        let m = p.m_at(i);
        h.set(i, i, p.omega * m - (p.g / n as f64) * (ss1 - m * m) / 2.0);
    }
    for i in 0..=(n - 2) {
        let m = p.m_at(i);
        let v = -(p.g / n as f64) * raise(m) * raise(m + 1.0) / 4.0;
        h.set(i, i + 2, v);
        h.set(i + 2, i, v);
    }
    h
}

/// Full spectrum of the maximal-spin block, ascending.
pub fn eigensystem(p: &LmgParams) -> Result<EigenSystem> {
    numerics::eigh_symmetric(&hamiltonian(p))
}

/// Eigenstate QFI together with the degeneracy bookkeeping of its
/// perturbation sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenstateQfi {
    pub value: f64,
    /// Pairs dropped because |E_n - E_m| fell below 1e-10 * ||H||.
    pub excluded_pairs: usize,
    /// Largest |<psi_m|S_z|psi_n>| among dropped pairs.  Parity doublets
    /// have vanishing cross elements, so a small value certifies that the
    /// exclusion lost no information.
    pub max_excluded_element: f64,
}

fn sz_element(es: &EigenSystem, p: &LmgParams, a: usize, b: usize) -> f64 {
    (0..=p.n).map(|i| es.vectors[a][i] * p.m_at(i) * es.vectors[b][i]).sum()
}

fn degeneracy_tol(es: &EigenSystem) -> f64 {
    let scale = es.values.iter().fold(0.0_f64, |acc, e| acc.max(e.abs()));
    1e-10 * scale.max(1.0)
}

/// QFI of the level-th eigenstate for estimating omega:
/// 4 sum_{m != n} |<psi_m|S_z|psi_n>|^2 / (E_n - E_m)^2.
pub fn qfi_eigenstate(p: &LmgParams, level: usize) -> Result<EigenstateQfi> {
    let es = eigensystem(p)?;
    if level > p.n {
        return Err(Error::Validation(format!(
            "level {level} beyond spectrum of dimension {}",
            p.n + 1
        )));
    }
    let tol = degeneracy_tol(&es);
    let mut value = 0.0;
    let mut excluded_pairs = 0;
    let mut max_excluded_element = 0.0_f64;
    for m in 0..=p.n {
        if m == level {
            continue;
        }
        let de = es.values[level] - es.values[m];
        let elem = sz_element(&es, p, m, level);
        if de.abs() <= tol {
            excluded_pairs += 1;
            max_excluded_element = max_excluded_element.max(elem.abs());
        } else {
            value += elem * elem / (de * de);
        }
    }
    Ok(EigenstateQfi { value: 4.0 * value, excluded_pairs, max_excluded_element })
}

/// SNR of an <S_z> readout on the level-th eigenstate:
/// (d_omega <S_z>)^2 / Var(S_z), slope from the first-order perturbation sum
/// 2 sum_{m != n} <psi_n|S_z|psi_m><psi_m|S_z|psi_n> / (E_n - E_m).
pub fn snr_sz_eigenstate(p: &LmgParams, level: usize) -> Result<f64> {
    let es = eigensystem(p)?;
    if level > p.n {
        return Err(Error::Validation(format!(
            "level {level} beyond spectrum of dimension {}",
            p.n + 1
        )));
    }
    let tol = degeneracy_tol(&es);
    let mut slope = 0.0;
    for m in 0..=p.n {
        if m == level {
            continue;
        }
        let de = es.values[level] - es.values[m];
        if de.abs() > tol {
            let elem = sz_element(&es, p, m, level);
            slope += elem * elem / de;
        }
    }
    slope *= 2.0;
    let v = &es.vectors[level];
    let mean: f64 = (0..=p.n).map(|i| v[i] * v[i] * p.m_at(i)).sum();
    let msq: f64 = (0..=p.n).map(|i| v[i] * v[i] * p.m_at(i) * p.m_at(i)).sum();
    let var = msq - mean * mean;
    if var <= 1e-14 {
        return Err(Error::Degenerate(format!(
            "S_z readout variance {var:.3e} vanishes at level {level}; no signal to resolve"
        )));
    }
    Ok(slope * slope / var)
}

/// Thermodynamic-limit QFI of the n-th squeezed-Fock excited state,
/// 2 (n^2 + n + 1) (d_omega xi)^2 with xi = (1/4) log(omega/(omega - g)):
/// an (n^2 + n + 1)-fold enhancement over the squeezed vacuum.
pub fn squeezed_fock_qfi(n_level: usize, omega: f64, g: f64) -> Result<f64> {
    if !(omega > 0.0) || !(g >= 0.0) {
        return Err(Error::Validation(format!(
            "need omega > 0 and g >= 0, got ({omega}, {g})"
        )));
    }
    if g >= omega {
        return Err(Error::Domain(format!(
            "g = {g} >= omega = {omega}: squeezed-oscillator description invalid past \
             criticality"
        )));
    }
    let nf = n_level as f64;
    let dxi = 0.25 * (1.0 / omega - 1.0 / (omega - g));
    Ok(2.0 * (nf * nf + nf + 1.0) * dxi * dxi)
}

/// (sin x - x)/x^3 evaluated without cancellation near 0.
fn sin_defect_over_cube(x: f64) -> f64 {
    if x < 0.5 {
        let x2 = x * x;
        -1.0 / 6.0
            + x2 * (1.0 / 120.0
                + x2 * (-1.0 / 5040.0 + x2 * (1.0 / 362_880.0 - x2 / 39_916_800.0)))
    } else {
        (x.sin() - x) / (x * x * x)
    }
}

/// sinh(sqrt(z) t)/(sqrt(z) t) as a function of z = (u t)^2; negative z is
/// the oscillatory branch sin/x, small |z| the shared series.
fn stretched_sinc(z: f64) -> f64 {
    if z.abs() <= 1e-6 {
        1.0 + z / 6.0 + z * z / 120.0
    } else if z > 0.0 {
        let y = z.sqrt();
        y.sinh() / y
    } else {
        let y = (-z).sqrt();
        y.sin() / y
    }
}

fn validate_quench(omega: f64, g: f64, t: f64) -> Result<()> {
    if !(omega > 0.0) || !(g >= 0.0) || !(t >= 0.0) || !t.is_finite() || !g.is_finite() {
        return Err(Error::Validation(format!(
            "need omega > 0, g >= 0, t >= 0, got ({omega}, {g}, {t})"
        )));
    }
    Ok(())
}

/// QFI after a sudden quench of the coupling from 0 to g, acting on the
/// thermodynamic-limit ground state, with delta = 4(1 - g/omega):
///
/// * g < omega: (2/omega^2) [(sin(sqrt(delta) omega t) - sqrt(delta) omega t)
///   / (sqrt(delta) delta)]^2, oscillating at twice the quenched frequency;
/// * |delta| <= 1e-8: the critical limit omega^4 t^6 / 18, perpetual
///   squeezing of a freely spreading wavefunction;
/// * g > omega: (2 g^3/omega^5) sinh^2(sqrt(|delta|) omega t)/|delta|^3,
///   exponential squeezing by the inverted oscillator (a large-t form: it
///   omits the subtracted secular term, so it does not reduce to the
///   critical limit as delta -> 0^-).
pub fn quench_qfi(omega: f64, g: f64, t: f64) -> Result<f64> {
    validate_quench(omega, g, t)?;
    let delta = 4.0 * (1.0 - g / omega);
    if delta.abs() <= 1e-8 {
        return Ok(omega.powi(4) * t.powi(6) / 18.0);
    }
    if delta > 0.0 {
        let x = delta.sqrt() * omega * t;
        let s = sin_defect_over_cube(x);
        Ok(2.0 * omega.powi(4) * t.powi(6) * s * s)
    } else {
        let d = -delta;
        let y = d.sqrt() * omega * t;
        Ok(2.0 * g.powi(3) / omega.powi(5) * y.sinh().powi(2) / d.powi(3))
    }
}

/// Excitations created by the same quench, exact for the quadratic model:
/// <n>(t) = (g^2/4) S^2 with S = sinh(u t)/u and u^2 = omega (g - omega).
/// At g = omega this is omega^2 t^2 / 4; at g = 2 omega, sinh^2(omega t).
pub fn quench_excitations(omega: f64, g: f64, t: f64) -> Result<f64> {
    validate_quench(omega, g, t)?;
    let z = omega * (g - omega) * t * t;
    let s_over_t = stretched_sinc(z);
    Ok(g * g * t * t * s_over_t * s_over_t / 4.0)
}

/// Large-N asymptotics of ground-state criticality metrology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermodynamicScalings {
    /// Optimal static ground-state QFI, N^{4/3}/omega^2.
    pub static_qfi: f64,
    /// Adiabatic ramp duration to the near-critical optimum,
    /// T = N^{1/3}/(gamma omega); the gap closes only as N^{-1/3}.
    pub ramp_time: f64,
    /// Time-inclusive figure gamma^2 N^{2/3} T^2 at that T.
    pub adiabatic_qfi: f64,
    /// Same budget spent on the optimal excited state:
    /// (gamma^2/6) N^{4/3} T^2, an N^{2/3}/6 enhancement.
    pub excited_optimal_qfi: f64,
}

pub fn thermodynamic_qfi_scalings(
    n: usize,
    omega: f64,
    gamma: f64,
) -> Result<ThermodynamicScalings> {
    if n < 2 {
        return Err(Error::Validation(format!("need at least 2 spins, got {n}")));
    }
    if !(omega > 0.0) {
        return Err(Error::Validation(format!("need omega > 0, got {omega}")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Validation(format!("adiabaticity gamma = {gamma} must lie in (0, 1)")));
    }
    let nf = n as f64;
    let static_qfi = nf.powf(4.0 / 3.0) / (omega * omega);
    let ramp_time = nf.powf(1.0 / 3.0) / (gamma * omega);
    let t2 = ramp_time * ramp_time;
    Ok(ThermodynamicScalings {
        static_qfi,
        ramp_time,
        adiabatic_qfi: gamma * gamma * nf.powf(2.0 / 3.0) * t2,
        excited_optimal_qfi: gamma * gamma / 6.0 * nf.powf(4.0 / 3.0) * t2,
    })
}
