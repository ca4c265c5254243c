//! Majorana resonant-level model of an impurity at a boundary critical
//! point: dot occupation, on-site-potential QFI, and crossover diagnostics.
//!
//! A localized fermion of energy `eps_d` hybridizes with a conduction band
//! through a single Majorana component, with hybridization width
//! `Gamma = pi rho_0 V^2`. At `eps_d = 0` half the impurity decouples,
//! leaving a two-fold degenerate ground state; a finite `eps_d` recouples
//! it and generates the emergent scale `T* ~ eps_d^2 / Gamma` that cuts off
//! the critical regime. The impurity reduced state is diagonal and fully
//! characterized by the occupation, which has the closed form
//!
//! ```text
//! <n_d> = 1/2 - Im{ (eps_d / (pi Delta))
//!                   [psi(1/2 + (Gamma + i Delta)/(4 pi T))
//!                    - psi(1/2 + (Gamma - i Delta)/(4 pi T))] },
//! Delta = sqrt(4 eps_d^2 - Gamma^2),
//! ```
//!
//! with `psi` the digamma function. `Delta` is kept complex consistently in
//! the prefactor and the arguments: for `2|eps_d| < Gamma` it is purely
//! imaginary, both digamma arguments become real, and the expression stays
//! real and analytic in `Delta^2` across the branch point `2|eps_d| =
//! Gamma`. The bracket is conjugate-odd, so the bracketed combination is
//! purely imaginary in exact arithmetic; the real residue is asserted tiny
//! and rejected if it is not.
//!
//! Since the probe is a two-level system with populations `(<n_d>, 1 -
//! <n_d>)`, the QFI for estimating `eps_d` is the binomial Fisher
//! information `I = (d<n_d>/d eps_d)^2 / (<n_d>(1 - <n_d>))`. It diverges
//! logarithmically at the critical point as `T -> 0` and decays once
//! `eps_d` pushes the system out of the critical window `T >~ T*`, tracing
//! out a quantum critical fan in the `(eps_d, T)` plane; [`critical_fan_scan`]
//! samples that fan on a grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::digamma;

use std::f64::consts::PI;

pub type MrlmResult<T> = Result<T>;

/// Impurity parameters. `eps_d` is the on-site potential (the estimation
/// target, any sign), `gamma_hyb > 0` the hybridization width, and
/// `temperature > 0` the bath temperature, all in the same energy units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MrlmParams {
    pub eps_d: f64,
    pub gamma_hyb: f64,
    pub temperature: f64,
}

impl MrlmParams {
    pub fn new(eps_d: f64, gamma_hyb: f64, temperature: f64) -> Result<Self> {
        if !eps_d.is_finite() || !gamma_hyb.is_finite() || !temperature.is_finite() {
            return Err(Error::Validation(format!(
                "parameters must be finite, got eps_d = {eps_d}, gamma_hyb = {gamma_hyb}, \
                 temperature = {temperature}"
            )));
        }
        if gamma_hyb <= 0.0 {
            return Err(Error::Validation(format!(
                "hybridization width must be positive, got {gamma_hyb}"
            )));
        }
        if temperature <= 0.0 {
            return Err(Error::Validation(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        Ok(Self { eps_d, gamma_hyb, temperature })
    }
}

/// Thermal dot occupation `<n_d>` in (0, 1); exactly 1/2 at `eps_d = 0`.
///
/// `Delta` is evaluated as the principal complex root, so both sides of the
/// branch point are covered by one expression. Within `|Delta|/(4 pi T) <
/// 1e-6` the digamma difference quotient loses accuracy and the analytic
/// limit `1/2 - eps_d psi'(x)/(2 pi^2 T)`, `x = 1/2 + Gamma/(4 pi T)`, takes
/// over, with `psi'` obtained by a complex-step derivative of the digamma
/// (no cancellation).
pub fn dot_occupation(p: &MrlmParams) -> Result<f64> {
    let (e, g, t) = (p.eps_d, p.gamma_hyb, p.temperature);
    let four_pi_t = 4.0 * PI * t;
    let x = 0.5 + g / four_pi_t;
    let s = 4.0 * e * e - g * g;
    let delta = Complex64::new(s, 0.0).sqrt();
    if delta.norm() / four_pi_t < 1e-6 {
        let step = 1e-6 * x.max(1.0);
        let dpsi = digamma(Complex64::new(x, step))?.im / step;
        return Ok(0.5 - e * dpsi / (2.0 * PI * PI * t));
    }
    let shift = Complex64::i() * delta / four_pi_t;
    let a = digamma(Complex64::new(x, 0.0) + shift)?;
    let b = digamma(Complex64::new(x, 0.0) - shift)?;
    let z = Complex64::new(e, 0.0) / (PI * delta) * (a - b);
    // conjugate symmetry makes z purely imaginary; a real residue signals a
    // broken digamma evaluation
    debug_assert!(z.re.abs() <= 1e-12, "real residue {}", z.re);
    if z.re.abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "occupation developed a real residue {} at eps_d = {e}, gamma = {g}, T = {t}",
            z.re
        )));
    }
    Ok(0.5 - z.im)
}

/// QFI for estimating `eps_d` from the impurity reduced state,
/// `I = (d<n_d>/d eps_d)^2 / (<n_d>(1 - <n_d>))`.
///
/// The derivative uses Richardson-extrapolated central differences with
/// `h = max(1e-6 Gamma, 1e-8)`, cross-checked at half the step; the two
/// extrapolations must agree to 1e-6 relative beyond the roundoff floor of
/// the quotient. Near the branch point `2|eps_d| = Gamma` the occupation
/// evaluation loses absolute accuracy like `|eps_d| |psi(x)| / (pi |Delta|)`
/// (a digamma cancellation amplified by the `1/Delta` prefactor), so the
/// floor is scaled by that conditioning; there the returned QFI carries a
/// matching relative noise, bounded by ~1e-4 in the worst sliver.
pub fn qfi_epsd(p: &MrlmParams) -> Result<f64> {
    let n = dot_occupation(p)?;
    if n <= 1e-14 || n >= 1.0 - 1e-14 {
        return Err(Error::Degenerate(format!(
            "occupation pinned at {n}; the binomial Fisher information is singular"
        )));
    }
    let occ = |e: f64| dot_occupation(&MrlmParams { eps_d: e, ..*p });
    let quotient = |h: f64| -> Result<f64> {
        Ok((occ(p.eps_d + h)? - occ(p.eps_d - h)?) / (2.0 * h))
    };
    let richardson = |h: f64| -> Result<f64> {
        Ok((4.0 * quotient(h / 2.0)? - quotient(h)?) / 3.0)
    };
    let h = (1e-6 * p.gamma_hyb).max(1e-8);
    let r1 = richardson(h)?;
    let r2 = richardson(h / 2.0)?;

    let (e, g, t) = (p.eps_d, p.gamma_hyb, p.temperature);
    let four_pi_t = 4.0 * PI * t;
    let x = 0.5 + g / four_pi_t;
    let delta_c = (4.0 * e * e - g * g).abs().sqrt().max(1e-6 * four_pi_t);
    let conditioning = 1.0 + e.abs() * x.ln().abs().max(2.0) / (PI * delta_c);
    let noise_floor = 32.0 * f64::EPSILON * conditioning / (h / 4.0);
    if (r1 - r2).abs() > noise_floor + 1e-6 * r1.abs().max(r2.abs()) {
        return Err(Error::Numerical(format!(
            "derivative extrapolations disagree: {r1} vs {r2} at eps_d = {e}"
        )));
    }
    Ok(r2 * r2 / (n * (1.0 - n)))
}

/// Emergent Fermi-liquid crossover scale `T* = eps_d^2 / Gamma`; the
/// critical fan lives at `T >~ T*`.
pub fn crossover_scale(p: &MrlmParams) -> f64 {
    p.eps_d * p.eps_d / p.gamma_hyb
}

/// One grid point of a critical-fan scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanRow {
    pub eps_d: f64,
    pub temperature: f64,
    pub occupation: f64,
    pub qfi: f64,
}

/// Temperature maximum of the QFI at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanPeak {
    pub eps_d: f64,
    pub temp_at_max: f64,
    pub qfi_max: f64,
}

/// Full fan scan: all grid rows plus the per-detuning temperature maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct FanScan {
    /// Row-major over (eps_grid outer, temp_grid inner).
    pub rows: Vec<FanRow>,
    pub per_eps: Vec<FanPeak>,
}

/// Evaluates occupation and QFI over the `(eps_d, T)` grid and locates the
/// QFI maximum over temperature for each detuning. Rows are ordered with
/// the detuning as the slow index, matching a column-stable CSV export.
pub fn critical_fan_scan(
    gamma_hyb: f64,
    eps_grid: &[f64],
    temp_grid: &[f64],
) -> Result<FanScan> {
    if eps_grid.is_empty() || temp_grid.is_empty() {
        return Err(Error::Validation("fan scan needs non-empty grids".into()));
    }
    let mut rows = Vec::with_capacity(eps_grid.len() * temp_grid.len());
    let mut per_eps = Vec::with_capacity(eps_grid.len());
    for &e in eps_grid {
        let mut peak: Option<FanPeak> = None;
        for &t in temp_grid {
            let p = MrlmParams::new(e, gamma_hyb, t)?;
            let occupation = dot_occupation(&p)?;
            let qfi = qfi_epsd(&p)?;
            rows.push(FanRow { eps_d: e, temperature: t, occupation, qfi });
            if peak.map_or(true, |b| qfi > b.qfi_max) {
                peak = Some(FanPeak { eps_d: e, temp_at_max: t, qfi_max: qfi });
            }
        }
        per_eps.push(peak.expect("temp grid is non-empty"));
    }
    Ok(FanScan { rows, per_eps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(eps_d: f64, gamma: f64, t: f64) -> MrlmParams {
        MrlmParams::new(eps_d, gamma, t).unwrap()
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn params_validation() {
        assert!(MrlmParams::new(0.1, 0.0, 0.01).is_err());
        assert!(MrlmParams::new(0.1, -1.0, 0.01).is_err());
        assert!(MrlmParams::new(0.1, 1.0, 0.0).is_err());
        assert!(MrlmParams::new(0.1, 1.0, -0.2).is_err());
        assert!(MrlmParams::new(f64::INFINITY, 1.0, 0.1).is_err());
        assert!(MrlmParams::new(0.1, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn half_filling_exact_at_zero_detuning() {
        // the prefactor eps_d kills the digamma term identically
        assert_eq!(dot_occupation(&mp(0.0, 1.0, 0.01)).unwrap(), 0.5);
        assert_eq!(dot_occupation(&mp(0.0, 0.3, 0.05)).unwrap(), 0.5);
        assert_eq!(dot_occupation(&mp(0.0, 2.0, 1e-4)).unwrap(), 0.5);
    }

    #[test]
    fn particle_hole_antisymmetry() {
        // <n_d>(-eps) = 1 - <n_d>(eps): the deviation from 1/2 is odd
        for g in [0.5, 1.0, 2.0] {
            for t in [1e-4, 1e-2, 0.1] {
                for e in [0.05, 0.1, 0.3, 0.45, 0.7, 1.0] {
                    let plus = dot_occupation(&mp(e, g, t)).unwrap();
                    let minus = dot_occupation(&mp(-e, g, t)).unwrap();
                    assert!(
                        (minus - (1.0 - plus)).abs() < 1e-12,
                        "eps={e} gamma={g} T={t}: {minus} vs {}",
                        1.0 - plus
                    );
                }
            }
        }
    }

    #[test]
    fn occupation_reference_values() {
        // frozen high-precision evaluations of the closed form
        let refs = [
            (0.1, 1.0, 0.01, 0.36700615602525963),
            (0.8, 1.0, 0.05, 0.13736278497953875),
            (0.5, 1.0, 0.01, 0.18210670598076581), // exact branch point
            (0.25, 1.0, 0.001, 0.25800781115805606),
            (0.05, 1.0, 0.0001, 0.40428421003301635),
        ];
        for (e, g, t, want) in refs {
            let got = dot_occupation(&mp(e, g, t)).unwrap();
            assert!((got - want).abs() < 1e-12, "({e},{g},{t}): {got} vs {want}");
        }
        // sub-half occupation on the positive-detuning side
        let v = dot_occupation(&mp(0.1, 1.0, 0.01)).unwrap();
        assert!(v > 0.0 && v < 0.5);
    }

    #[test]
    fn occupation_monotone_and_in_range() {
        // strictly decreasing through both branch points eps_d = +-1/2
        for t in [1e-4, 1e-2] {
            let mut prev = f64::INFINITY;
            for k in 0..=200 {
                let e = -1.0 + k as f64 / 100.0;
                let n = dot_occupation(&mp(e, 1.0, t)).unwrap();
                assert!(n > 0.0 && n < 1.0, "out of range at eps={e}, T={t}");
                assert!(n < prev, "not decreasing at eps={e}, T={t}");
                prev = n;
            }
        }
    }

    #[test]
    fn branch_continuity_at_crossing() {
        // the occupation is analytic in Delta^2; the symmetric average of
        // the two branch evaluations reproduces the branch-point value to
        // O(h^2), so any inter-branch jump would show up here
        for (g, t) in [(1.0, 0.01), (2.0, 0.05)] {
            let e0 = g / 2.0;
            let center = dot_occupation(&mp(e0, g, t)).unwrap();
            let plus = dot_occupation(&mp(e0 + 1e-6, g, t)).unwrap();
            let minus = dot_occupation(&mp(e0 - 1e-6, g, t)).unwrap();
            assert!(
                (0.5 * (plus + minus) - center).abs() < 1e-8,
                "gamma={g} T={t}: {} vs {center}",
                0.5 * (plus + minus)
            );
            // each side stays within a slope-bound neighborhood
            assert!((plus - center).abs() < 1e-5);
            assert!((minus - center).abs() < 1e-5);
        }
    }

    #[test]
    fn qfi_reference_values() {
        let refs = [
            (0.1, 1.0, 0.001, 3.5704137969361678),
            (0.03, 1.0, 0.001, 12.727657446053307),
            (0.01, 1.0, 0.001, 18.84241912555048),
            (0.1, 1.0, 0.01, 4.7515338030307348),
            (0.0, 1.0, 0.001, 20.048857580592804),
        ];
        for (e, g, t, want) in refs {
            let got = qfi_epsd(&mp(e, g, t)).unwrap();
            assert!(
                (got - want).abs() < 1e-8 * want.max(1.0),
                "({e},{g},{t}): {got} vs {want}"
            );
        }
        // at the branch point the quotient noise is amplified by the
        // occupation's 1/Delta conditioning; accuracy degrades to ~1e-5
        let got = qfi_epsd(&mp(0.5, 1.0, 0.01)).unwrap();
        let want = 0.30942632625703309;
        assert!((got - want).abs() < 1e-5 * want, "{got} vs {want}");
    }

    #[test]
    fn qfi_symmetric_in_detuning() {
        // follows from occupation antisymmetry
        for e in [0.1, 0.45] {
            let plus = qfi_epsd(&mp(e, 1.0, 1e-3)).unwrap();
            let minus = qfi_epsd(&mp(-e, 1.0, 1e-3)).unwrap();
            assert!((plus - minus).abs() < 1e-8 * plus, "{plus} vs {minus}");
        }
    }

    #[test]
    fn qfi_grows_toward_criticality() {
        // fixed small T: sensitivity rises as the detuning shrinks
        let i_10 = qfi_epsd(&mp(0.1, 1.0, 1e-3)).unwrap();
        let i_03 = qfi_epsd(&mp(0.03, 1.0, 1e-3)).unwrap();
        let i_01 = qfi_epsd(&mp(0.01, 1.0, 1e-3)).unwrap();
        assert!(i_01 > i_03 && i_03 > i_10, "{i_01}, {i_03}, {i_10}");

        // temperature-window maximum at the critical point dwarfs the
        // detuned one (frozen ratio ~130)
        let grid = log_grid(1e-6, 1e-1, 26);
        let max_at = |e: f64| -> f64 {
            grid.iter()
                .map(|&t| qfi_epsd(&mp(e, 1.0, t)).unwrap())
                .fold(0.0, f64::max)
        };
        let critical = max_at(0.0);
        let detuned = max_at(0.5);
        assert!(critical >= 10.0 * detuned, "{critical} vs {detuned}");
    }

    #[test]
    fn crossover_scale_quadratic() {
        assert_eq!(crossover_scale(&mp(0.0, 1.0, 0.01)), 0.0);
        assert!((crossover_scale(&mp(0.1, 1.0, 0.01)) - 0.01).abs() < 1e-15);
        let base = crossover_scale(&mp(0.2, 1.7, 0.01));
        let quad = crossover_scale(&mp(0.8, 1.7, 0.01));
        assert!((quad / base - 16.0).abs() < 1e-12);
    }

    #[test]
    fn fan_scan_grid_and_peaks() {
        let eps_grid = [0.02, 0.05, 0.1, 0.2, 0.4];
        let temp_grid = log_grid(1e-5, 1e-1, 21);
        let scan = critical_fan_scan(1.0, &eps_grid, &temp_grid).unwrap();
        assert_eq!(scan.rows.len(), eps_grid.len() * temp_grid.len());
        assert_eq!(scan.per_eps.len(), eps_grid.len());

        // row-major order: detuning slow, temperature fast
        assert_eq!(scan.rows[0].eps_d, 0.02);
        assert_eq!(scan.rows[0].temperature, temp_grid[0]);
        assert_eq!(scan.rows[20].temperature, temp_grid[20]);
        assert_eq!(scan.rows[21].eps_d, 0.05);

        for row in &scan.rows {
            assert!(row.occupation > 0.0 && row.occupation < 1.0);
            assert!(row.qfi >= 0.0);
        }

        // the critical fan: per-detuning maxima decrease away from eps = 0
        for pair in scan.per_eps.windows(2) {
            assert!(
                pair[0].qfi_max > pair[1].qfi_max,
                "{} vs {}",
                pair[0].qfi_max,
                pair[1].qfi_max
            );
        }
        // the recorded argmax matches a direct evaluation
        for peak in &scan.per_eps {
            let direct = qfi_epsd(&mp(peak.eps_d, 1.0, peak.temp_at_max)).unwrap();
            assert!((direct - peak.qfi_max).abs() <= 1e-12 * peak.qfi_max);
        }

        assert!(critical_fan_scan(1.0, &[], &temp_grid).is_err());
        assert!(critical_fan_scan(1.0, &eps_grid, &[]).is_err());
    }
}
