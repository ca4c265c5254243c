//! Dispatch table from (model, operation) to library calls.
//!
//! Every operation declares its parameters (with optional defaults), its
//! output column names, and optionally post-run fits.  Evaluation functions
//! are thin adapters over `critmet`; they return the library's own errors,
//! which the runner either records per row or, in strict mode, promotes to
//! an abort.  Integer-valued parameters (sizes, levels, counts) accept any
//! float within 1e-6 of a nonnegative integer, so log-spaced size grids
//! whose samples land on integers up to rounding work unchanged.

use std::collections::BTreeMap;

use critmet::{bosonic, kerr, landau_zener as lz, lmg, mrlm, ramsey, tfim};

/// Parameter slot: `default: None` marks a required parameter.
#[derive(Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: Option<f64>,
    pub doc: &'static str,
}

/// Post-run power-law fit `y ~ x^a`; the summary lands in table metadata
/// and, when `append_column` is set, as a constant column of the exponent.
#[derive(Debug)]
pub struct FitPlan {
    pub x: &'static str,
    pub y: &'static str,
    pub append_column: Option<&'static str>,
}

/// One dispatchable operation.
#[derive(Debug)]
pub struct OpSpec {
    pub model: &'static str,
    pub operation: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub outputs: &'static [&'static str],
    pub fits: &'static [FitPlan],
    pub eval: fn(&ParamValues) -> critmet::Result<Vec<f64>>,
}

/// Resolved parameter values for one sweep point.
pub struct ParamValues<'a> {
    map: &'a BTreeMap<String, f64>,
}

impl<'a> ParamValues<'a> {
    pub fn new(map: &'a BTreeMap<String, f64>) -> Self {
        ParamValues { map }
    }

    /// Present by construction: the runner validates names and injects
    /// defaults before evaluation.
    pub fn f(&self, name: &str) -> f64 {
        self.map[name]
    }

    /// Nonnegative integer within 1e-6, for sizes and levels.
    pub fn count(&self, name: &str) -> critmet::Result<usize> {
        let v = self.f(name);
        let r = v.round();
        if !v.is_finite() || (v - r).abs() > 1e-6 || r < 0.0 {
            return Err(critmet::Error::Validation(format!(
                "{name} = {v} must be a nonnegative integer"
            )));
        }
        Ok(r as usize)
    }
}

const fn p(name: &'static str, doc: &'static str) -> ParamSpec {
    ParamSpec { name, default: None, doc }
}

const fn d(name: &'static str, default: f64, doc: &'static str) -> ParamSpec {
    ParamSpec { name, default: Some(default), doc }
}

fn ramsey_limits(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    use std::f64::consts::FRAC_PI_2;
    let n = pv.count("n")?;
    let (omega, t) = (pv.f("omega"), pv.f("t"));
    let css = ramsey::css(n, FRAC_PI_2, 0.0)?;
    let ghz = ramsey::ghz(n)?;
    Ok(vec![
        ramsey::css_snr(n, omega, t)?,
        ramsey::ghz_snr(n, omega, t)?,
        ramsey::qfi_rotation(&css, t)?,
        ramsey::qfi_rotation(&ghz, t)?,
    ])
}

fn ramsey_tradeoff(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let n = pv.count("n")?;
    let rows = ramsey::snr_tradeoff_curve(n, pv.f("chi"), &[pv.f("t")])?;
    let r = &rows[0];
    Ok(vec![r.signal_sq, r.noise, r.snr])
}

fn lz_params(pv: &ParamValues, temperature: f64) -> critmet::Result<lz::LzParams> {
    lz::LzParams::new(pv.f("omega"), pv.f("g"), temperature)
}

fn lz_qfi(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    Ok(vec![lz::qfi_ground(&lz_params(pv, 0.0)?)?])
}

fn lz_qfim(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let info = lz::qfim_ground(&lz_params(pv, 0.0)?)?;
    let m = &info.entries;
    let det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    Ok(vec![m.at(0, 0), m.at(0, 1), m.at(1, 1), det])
}

fn lz_effective(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    Ok(vec![lz::effective_qfi(&lz_params(pv, 0.0)?)?])
}

fn lz_thermal(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = lz_params(pv, pv.f("temperature"))?;
    let q = lz::qfi_thermal(&p)?;
    let (_, det) = lz::qfim_thermal(&p)?;
    let pair = lz::sld_pair_thermal(&p)?;
    Ok(vec![q.total, q.population_term, det, lz::snr_sigmaz_thermal(&p)?, pair.weak_trace])
}

fn lz_crb_check(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = lz_params(pv, pv.f("temperature"))?;
    let qfi = lz::qfi_thermal(&p)?.total;
    let snr = lz::snr_sigmaz_thermal(&p)?;
    let (info, det) = lz::qfim_thermal(&p)?;
    let m = &info.entries;
    let tr = m.at(0, 0) + m.at(1, 1);
    // 2x2 spectrum in closed form; the discriminant is clipped at zero to
    // absorb roundoff on near-degenerate matrices.
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    Ok(vec![qfi, snr, qfi - snr, 0.5 * (tr - disc)])
}

fn tfim_params(pv: &ParamValues) -> critmet::Result<tfim::TfimParams> {
    tfim::TfimParams::new(pv.f("omega"), pv.f("g"), pv.count("n")?)
}

fn tfim_qfi(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = tfim_params(pv)?;
    Ok(vec![tfim::qfi(&p)?, tfim::fidelity_susceptibility(&p)?, tfim::gap(&p)?])
}

fn tfim_fidelity(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = tfim_params(pv)?;
    Ok(vec![tfim::fidelity(&p, pv.f("omega_prime"))?])
}

fn tfim_observables(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = tfim_params(pv)?;
    let r = pv.count("r")?;
    Ok(vec![
        tfim::magnetization_z(&p)?,
        tfim::susceptibility_z(&p)?,
        tfim::two_point_zz(&p, r)?,
        tfim::local_snr(&p)?,
    ])
}

fn tfim_scaling(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = tfim_params(pv)?;
    Ok(vec![tfim::qfi(&p)?, tfim::collective_snr(&p)?, tfim::local_snr(&p)?])
}

fn lmg_params(pv: &ParamValues) -> critmet::Result<lmg::LmgParams> {
    lmg::LmgParams::new(pv.count("n")?, pv.f("omega"), pv.f("g"))
}

fn lmg_eigenstate(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = lmg_params(pv)?;
    let level = pv.count("level")?;
    Ok(vec![lmg::qfi_eigenstate(&p, level)?.value, lmg::snr_sz_eigenstate(&p, level)?])
}

fn lmg_quench(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let (omega, g, t) = (pv.f("omega"), pv.f("g"), pv.f("t"));
    Ok(vec![lmg::quench_qfi(omega, g, t)?, lmg::quench_excitations(omega, g, t)?])
}

fn lmg_squeezed_fock(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    Ok(vec![lmg::squeezed_fock_qfi(pv.count("n_level")?, pv.f("omega"), pv.f("g"))?])
}

fn lmg_scalings(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let s = lmg::thermodynamic_qfi_scalings(pv.count("n")?, pv.f("omega"), pv.f("gamma"))?;
    Ok(vec![s.static_qfi, s.ramp_time, s.adiabatic_qfi, s.excited_optimal_qfi])
}

fn oscillator_params(pv: &ParamValues) -> critmet::Result<bosonic::OscillatorParams> {
    bosonic::OscillatorParams::new(pv.f("omega"), pv.f("g"))
}

fn oscillator_qfi(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = oscillator_params(pv)?;
    Ok(vec![
        bosonic::qfi_ho(&p)?,
        bosonic::xi(&p)?,
        bosonic::renormalized_frequency(&p)?,
        bosonic::vacuum_excitations(&p)?,
    ])
}

fn oscillator_snr(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = oscillator_params(pv)?;
    let budget = bosonic::adiabatic_budget(&p, pv.f("gamma"))?;
    Ok(vec![
        bosonic::qfi_ho(&p)?,
        bosonic::snr_number(&p)?,
        bosonic::snr_quadrature(&p)?,
        budget.sql_crossover_n,
    ])
}

fn oscillator_budget(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let b = bosonic::adiabatic_budget(&oscillator_params(pv)?, pv.f("gamma"))?;
    Ok(vec![b.time, b.qfi_rewritten, b.sql_crossover_n])
}

fn usc_params(pv: &ParamValues, omega_drive: f64) -> critmet::Result<bosonic::UscParams> {
    bosonic::UscParams::new(
        pv.f("omega"),
        pv.f("omega_qubit"),
        pv.f("g"),
        pv.f("eta"),
        pv.f("kappa"),
        omega_drive,
    )
}

fn usc_qfi(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = usc_params(pv, pv.f("omega_drive"))?;
    let q = bosonic::usc_qfi_omega(&p)?;
    Ok(vec![
        q.total,
        q.amplitude_part,
        q.phase_part,
        q.enhancement_e4xi,
        bosonic::usc_g_critical(&p),
    ])
}

/// Near-critical comparison at fixed detuning-to-linewidth ratio: the drive
/// is re-pinned per row to delta = `delta_over_kappa` * kappa below the
/// renormalized frequency.
fn usc_enhancement(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let probe = usc_params(pv, 0.0)?;
    let weff = bosonic::usc_renormalized_frequency(&probe)?;
    let pinned = usc_params(pv, weff - pv.f("delta_over_kappa") * pv.f("kappa"))?;
    let exact = bosonic::usc_qfi_omega(&pinned)?;
    let printed = bosonic::usc_qfi_near_critical(&pinned)?;
    Ok(vec![exact.total, printed, printed / exact.total, exact.enhancement_e4xi])
}

fn kerr_params(pv: &ParamValues) -> critmet::Result<kerr::KerrParams> {
    kerr::KerrParams::new(pv.f("omega0"), pv.f("epsilon"), pv.f("gamma"))
}

fn kerr_steady(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = kerr_params(pv)?;
    Ok(vec![
        kerr::steady_photons(&p)?,
        kerr::qfi_steady(&p)?,
        kerr::critical_pump(&p),
        kerr::relaxation_rate(&p)?,
    ])
}

fn kerr_dynamic(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = kerr_params(pv)?;
    let t = pv.f("t");
    Ok(vec![kerr::photon_number_t(&p, t)?, kerr::qfi_dynamic(&p, t)?])
}

fn kerr_homodyne(pv: &ParamValues, time: Option<f64>) -> critmet::Result<Vec<f64>> {
    let p = kerr_params(pv)?;
    let check = kerr::homodyne_check(&p, time, pv.count("grid_points")?)?;
    Ok(vec![check.fi_optimal, check.qfi, check.ratio])
}

fn kerr_homodyne_steady(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    kerr_homodyne(pv, None)
}

fn kerr_homodyne_dynamic(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    kerr_homodyne(pv, Some(pv.f("t")))
}

fn kerr_protocol(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let gamma = pv.f("gamma");
    let p = kerr::KerrParams::with_photon_cap(gamma, 0.0, gamma, pv.f("n_max"))?;
    let proto = kerr::optimal_protocol(&p)?;
    Ok(vec![proto.epsilon_opt, proto.t_opt, proto.qfi_single, proto.qfi_total_rate])
}

/// Unitary-regime scaling diagnostic: QFI over the quadratic-in-time
/// Heisenberg-like envelope (2N + (8/9) N^2) t^2 built from the live photon
/// number.
fn kerr_unitary_window(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = kerr::KerrParams::new(pv.f("omega0"), pv.f("epsilon"), 0.0)?;
    let t = pv.f("t");
    if !(t > 0.0) {
        return Err(critmet::Error::Validation(format!(
            "t = {t} must be positive: the scaling ratio is 0/0 at t = 0"
        )));
    }
    let n = kerr::photon_number_t(&p, t)?;
    let qfi = kerr::qfi_dynamic(&p, t)?;
    let envelope = (2.0 * n + 8.0 * n * n / 9.0) * t * t;
    Ok(vec![n, qfi, qfi / envelope])
}

fn mrlm_params(pv: &ParamValues) -> critmet::Result<mrlm::MrlmParams> {
    mrlm::MrlmParams::new(pv.f("eps_d"), pv.f("gamma_hyb"), pv.f("temperature"))
}

fn mrlm_occupation(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    Ok(vec![mrlm::dot_occupation(&mrlm_params(pv)?)?])
}

fn mrlm_qfi(pv: &ParamValues) -> critmet::Result<Vec<f64>> {
    let p = mrlm_params(pv)?;
    Ok(vec![mrlm::dot_occupation(&p)?, mrlm::qfi_epsd(&p)?, mrlm::crossover_scale(&p)])
}

/// The full dispatch table, grouped by model.
pub static OPS: &[OpSpec] = &[
    OpSpec {
        model: "ramsey",
        operation: "limits",
        summary: "coherent and GHZ probe SNR and rotation QFI",
        params: &[
            p("n", "number of spins"),
            d("omega", 1.0, "transition frequency"),
            d("t", 1.0, "interrogation time"),
        ],
        outputs: &["snr_css", "snr_ghz", "qfi_css", "qfi_ghz"],
        fits: &[],
        eval: ramsey_limits,
    },
    OpSpec {
        model: "ramsey",
        operation: "tradeoff",
        summary: "two-axis-twisted probe: signal, squeezed variance, SNR",
        params: &[
            p("n", "number of spins"),
            d("chi", 1.0, "twist rate"),
            p("t", "twist duration"),
        ],
        outputs: &["signal_sq", "noise", "snr"],
        fits: &[],
        eval: ramsey_tradeoff,
    },
    OpSpec {
        model: "lz",
        operation: "qfi",
        summary: "ground-state QFI for omega",
        params: &[p("omega", "level splitting"), p("g", "coupling")],
        outputs: &["qfi"],
        fits: &[],
        eval: lz_qfi,
    },
    OpSpec {
        model: "lz",
        operation: "qfim",
        summary: "ground-state QFI matrix over (omega, g)",
        params: &[p("omega", "level splitting"), p("g", "coupling")],
        outputs: &["i_omega_omega", "i_omega_g", "i_g_g", "det"],
        fits: &[],
        eval: lz_qfim,
    },
    OpSpec {
        model: "lz",
        operation: "effective",
        summary: "effective single-parameter QFI for the ratio g/omega",
        params: &[p("omega", "level splitting"), p("g", "coupling")],
        outputs: &["qfi_effective"],
        fits: &[],
        eval: lz_effective,
    },
    OpSpec {
        model: "lz",
        operation: "thermal",
        summary: "Gibbs-state QFI, QFIM determinant, sigma_z SNR, weak-commutativity trace",
        params: &[
            p("omega", "level splitting"),
            p("g", "coupling"),
            p("temperature", "bath temperature"),
        ],
        outputs: &["qfi", "population_term", "det", "snr_sigmaz", "weak_trace"],
        fits: &[],
        eval: lz_thermal,
    },
    OpSpec {
        model: "lz",
        operation: "crb_check",
        summary: "CRB margin and QFIM minimum eigenvalue on the thermal state",
        params: &[
            p("omega", "level splitting"),
            p("g", "coupling"),
            p("temperature", "bath temperature"),
        ],
        outputs: &["qfi", "snr_sigmaz", "crb_margin", "qfim_min_eig"],
        fits: &[],
        eval: lz_crb_check,
    },
    OpSpec {
        model: "tfim",
        operation: "qfi",
        summary: "momentum-sum field QFI, fidelity susceptibility, gap",
        params: &[
            d("omega", 1.0, "transverse field (estimation target)"),
            p("g", "Ising coupling"),
            p("n", "even chain length"),
        ],
        outputs: &["qfi", "fidelity_susceptibility", "gap"],
        fits: &[],
        eval: tfim_qfi,
    },
    OpSpec {
        model: "tfim",
        operation: "fidelity",
        summary: "ground-state overlap between fields omega and omega_prime",
        params: &[
            p("omega", "transverse field"),
            p("g", "Ising coupling"),
            p("n", "even chain length"),
            p("omega_prime", "comparison field"),
        ],
        outputs: &["fidelity"],
        fits: &[],
        eval: tfim_fidelity,
    },
    OpSpec {
        model: "tfim",
        operation: "observables",
        summary: "magnetization, susceptibility, two-point zz, local SNR",
        params: &[
            p("omega", "transverse field"),
            p("g", "Ising coupling"),
            p("n", "even chain length"),
            d("r", 1.0, "two-point separation"),
        ],
        outputs: &["magnetization_z", "susceptibility_z", "two_point_zz", "snr_local"],
        fits: &[],
        eval: tfim_observables,
    },
    OpSpec {
        model: "tfim",
        operation: "scaling",
        summary: "QFI and readout SNRs versus size, with a QFI power-law fit",
        params: &[
            d("omega", 1.0, "transverse field"),
            d("g", 1.0, "Ising coupling"),
            p("n", "even chain length"),
        ],
        outputs: &["qfi", "snr_collective", "snr_local"],
        fits: &[
            FitPlan { x: "n", y: "qfi", append_column: Some("exponent") },
            FitPlan { x: "n", y: "snr_collective", append_column: None },
        ],
        eval: tfim_scaling,
    },
    OpSpec {
        model: "lmg",
        operation: "eigenstate",
        summary: "eigenstate QFI for omega and the S_z readout SNR",
        params: &[
            p("n", "number of spins"),
            d("omega", 1.0, "field"),
            p("g", "collective coupling"),
            d("level", 0.0, "eigenstate index (0 = ground)"),
        ],
        outputs: &["qfi", "snr_sz"],
        fits: &[],
        eval: lmg_eigenstate,
    },
    OpSpec {
        model: "lmg",
        operation: "quench",
        summary: "post-quench QFI and excitation number",
        params: &[
            d("omega", 1.0, "field"),
            p("g", "quenched coupling"),
            p("t", "evolution time"),
        ],
        outputs: &["qfi", "excitations"],
        fits: &[],
        eval: lmg_quench,
    },
    OpSpec {
        model: "lmg",
        operation: "squeezed_fock",
        summary: "QFI of a squeezed Fock probe",
        params: &[
            p("n_level", "Fock index"),
            d("omega", 1.0, "field"),
            p("g", "collective coupling"),
        ],
        outputs: &["qfi"],
        fits: &[],
        eval: lmg_squeezed_fock,
    },
    OpSpec {
        model: "lmg",
        operation: "scalings",
        summary: "thermodynamic-limit QFI budgets",
        params: &[
            p("n", "number of spins"),
            d("omega", 1.0, "field"),
            p("gamma", "adiabatic margin"),
        ],
        outputs: &["static_qfi", "ramp_time", "adiabatic_qfi", "excited_optimal_qfi"],
        fits: &[],
        eval: lmg_scalings,
    },
    OpSpec {
        model: "oscillator",
        operation: "qfi",
        summary: "squeezing parameter and ground-state QFI",
        params: &[p("omega", "mode frequency (estimation target)"), p("g", "coupling")],
        outputs: &["qfi", "xi", "renormalized_frequency", "excitations"],
        fits: &[],
        eval: oscillator_qfi,
    },
    OpSpec {
        model: "oscillator",
        operation: "snr",
        summary: "number and quadrature readout SNRs against the QFI",
        params: &[
            p("omega", "mode frequency"),
            p("g", "coupling"),
            d("gamma", 0.01, "adiabatic margin"),
        ],
        outputs: &["qfi", "snr_number", "snr_quadrature", "sql_crossover_n"],
        fits: &[],
        eval: oscillator_snr,
    },
    OpSpec {
        model: "oscillator",
        operation: "budget",
        summary: "adiabatic preparation cost near criticality",
        params: &[
            p("omega", "mode frequency"),
            p("g", "coupling"),
            p("gamma", "adiabatic margin"),
        ],
        outputs: &["time", "qfi_rewritten", "sql_crossover_n"],
        fits: &[],
        eval: oscillator_budget,
    },
    OpSpec {
        model: "usc",
        operation: "qfi",
        summary: "driven-cavity QFI for omega with squeezing enhancement",
        params: &[
            p("omega", "cavity frequency (estimation target)"),
            p("omega_qubit", "qubit splitting"),
            p("g", "light-matter coupling"),
            p("eta", "drive amplitude"),
            p("kappa", "cavity linewidth"),
            d("omega_drive", 0.0, "drive frequency"),
        ],
        outputs: &["qfi", "amplitude_part", "phase_part", "enhancement", "g_critical"],
        fits: &[],
        eval: usc_qfi,
    },
    OpSpec {
        model: "usc",
        operation: "enhancement",
        summary: "exact versus printed near-critical QFI at fixed delta/kappa",
        params: &[
            p("omega", "cavity frequency"),
            p("omega_qubit", "qubit splitting"),
            p("g", "light-matter coupling"),
            p("eta", "drive amplitude"),
            p("kappa", "cavity linewidth"),
            d("delta_over_kappa", 1.0, "detuning in linewidths"),
        ],
        outputs: &["qfi_exact", "qfi_printed", "ratio", "enhancement"],
        fits: &[],
        eval: usc_enhancement,
    },
    OpSpec {
        model: "kerr",
        operation: "steady",
        summary: "steady-state photon number and QFI below threshold",
        params: &[
            p("omega0", "detuning"),
            p("epsilon", "pump amplitude"),
            p("gamma", "loss rate"),
        ],
        outputs: &["photons", "qfi", "critical_pump", "relaxation_rate"],
        fits: &[],
        eval: kerr_steady,
    },
    OpSpec {
        model: "kerr",
        operation: "dynamic",
        summary: "finite-time photon number and QFI from vacuum",
        params: &[
            p("omega0", "detuning"),
            p("epsilon", "pump amplitude"),
            p("gamma", "loss rate"),
            p("t", "evolution time"),
        ],
        outputs: &["photons", "qfi"],
        fits: &[],
        eval: kerr_dynamic,
    },
    OpSpec {
        model: "kerr",
        operation: "homodyne_steady",
        summary: "optimized steady-state homodyne FI against the QFI",
        params: &[
            p("omega0", "detuning"),
            p("epsilon", "pump amplitude"),
            p("gamma", "loss rate"),
            d("grid_points", 360.0, "homodyne angle grid"),
        ],
        outputs: &["fi_optimal", "qfi", "ratio"],
        fits: &[],
        eval: kerr_homodyne_steady,
    },
    OpSpec {
        model: "kerr",
        operation: "homodyne_dynamic",
        summary: "optimized finite-time homodyne FI against the QFI",
        params: &[
            p("omega0", "detuning"),
            p("epsilon", "pump amplitude"),
            p("gamma", "loss rate"),
            p("t", "evolution time"),
            d("grid_points", 360.0, "homodyne angle grid"),
        ],
        outputs: &["fi_optimal", "qfi", "ratio"],
        fits: &[],
        eval: kerr_homodyne_dynamic,
    },
    OpSpec {
        model: "kerr",
        operation: "protocol",
        summary: "photon-capped optimal pump, time, and precision rate",
        params: &[p("gamma", "loss rate (also the detuning)"), p("n_max", "photon budget")],
        outputs: &["epsilon_opt", "t_opt", "qfi_single", "qfi_total_rate"],
        fits: &[],
        eval: kerr_protocol,
    },
    OpSpec {
        model: "kerr",
        operation: "unitary_window",
        summary: "lossless QFI over the (2N + 8N^2/9) t^2 envelope",
        params: &[
            p("omega0", "detuning"),
            p("epsilon", "pump amplitude"),
            p("t", "evolution time"),
        ],
        outputs: &["photons", "qfi", "ratio"],
        fits: &[],
        eval: kerr_unitary_window,
    },
    OpSpec {
        model: "mrlm",
        operation: "occupation",
        summary: "dot occupation from the digamma closed form",
        params: &[
            p("eps_d", "dot level (estimation target)"),
            d("gamma_hyb", 1.0, "hybridization"),
            p("temperature", "temperature"),
        ],
        outputs: &["occupation"],
        fits: &[],
        eval: mrlm_occupation,
    },
    OpSpec {
        model: "mrlm",
        operation: "qfi",
        summary: "occupation-readout QFI and the crossover scale",
        params: &[
            p("eps_d", "dot level (estimation target)"),
            d("gamma_hyb", 1.0, "hybridization"),
            p("temperature", "temperature"),
        ],
        outputs: &["occupation", "qfi", "crossover"],
        fits: &[],
        eval: mrlm_qfi,
    },
];

pub fn find(model: &str, operation: &str) -> Option<&'static OpSpec> {
    OPS.iter().find(|op| op.model == model && op.operation == operation)
}

pub fn models() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    for op in OPS {
        if !out.contains(&op.model) {
            out.push(op.model);
        }
    }
    out
}

pub fn operations(model: &str) -> Vec<&'static str> {
    OPS.iter().filter(|op| op.model == model).map(|op| op.operation).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_well_formed() {
        assert_eq!(models(), ["ramsey", "lz", "tfim", "lmg", "oscillator", "usc", "kerr", "mrlm"]);
        for op in OPS {
            assert!(!op.outputs.is_empty(), "{}/{}", op.model, op.operation);
            // Parameter and output names are unique and cannot collide once
            // grid axes become columns.
            let mut names: Vec<&str> = op.params.iter().map(|p| p.name).collect();
            names.extend(op.outputs);
            let mut sorted = names.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), names.len(), "{}/{}", op.model, op.operation);
            for fit in op.fits {
                assert!(names.contains(&fit.x), "{}/{} fit x", op.model, op.operation);
                assert!(op.outputs.contains(&fit.y), "{}/{} fit y", op.model, op.operation);
            }
        }
        assert!(find("lz", "qfi").is_some());
        assert!(find("lz", "bogus").is_none());
        assert!(find("bogus", "qfi").is_none());
        assert!(operations("kerr").contains(&"unitary_window"));
    }

    #[test]
    fn count_parameter_rounds_near_integers_only() {
        let mut map = BTreeMap::new();
        map.insert("n".to_string(), 15.999999999999998);
        map.insert("bad".to_string(), 15.5);
        map.insert("neg".to_string(), -2.0);
        let pv = ParamValues::new(&map);
        assert_eq!(pv.count("n").unwrap(), 16);
        assert!(pv.count("bad").is_err());
        assert!(pv.count("neg").is_err());
    }

    #[test]
    fn eval_adapters_produce_declared_arity() {
        // One smoke evaluation per operation at benign parameters.
        let cases: &[(&str, &str, &[(&str, f64)])] = &[
            ("ramsey", "limits", &[("n", 4.0)]),
            ("ramsey", "tradeoff", &[("n", 10.0), ("t", 0.02)]),
            ("lz", "qfi", &[("omega", 1.0), ("g", 1.0)]),
            ("lz", "qfim", &[("omega", 1.0), ("g", 1.0)]),
            ("lz", "effective", &[("omega", 1.0), ("g", 1.0)]),
            ("lz", "thermal", &[("omega", 1.0), ("g", 1.0), ("temperature", 1.0)]),
            ("lz", "crb_check", &[("omega", 1.0), ("g", 1.0), ("temperature", 1.0)]),
            ("tfim", "qfi", &[("g", 1.0), ("n", 8.0)]),
            ("tfim", "fidelity", &[("omega", 1.0), ("g", 1.0), ("n", 8.0), ("omega_prime", 1.01)]),
            ("tfim", "observables", &[("omega", 1.0), ("g", 1.0), ("n", 8.0)]),
            ("tfim", "scaling", &[("n", 32.0)]),
            ("lmg", "eigenstate", &[("n", 10.0), ("g", 1.7)]),
            ("lmg", "quench", &[("g", 1.0), ("t", 1.0)]),
            ("lmg", "squeezed_fock", &[("n_level", 2.0), ("g", 0.5)]),
            ("lmg", "scalings", &[("n", 100.0), ("gamma", 0.1)]),
            ("oscillator", "qfi", &[("omega", 1.0), ("g", 0.5)]),
            ("oscillator", "snr", &[("omega", 1.0), ("g", 0.5)]),
            ("oscillator", "budget", &[("omega", 1.0), ("g", 0.5), ("gamma", 0.01)]),
            (
                "usc",
                "qfi",
                &[("omega", 1.0), ("omega_qubit", 50.0), ("g", 3.0), ("eta", 0.8), ("kappa", 0.5)],
            ),
            (
                "usc",
                "enhancement",
                &[("omega", 1.0), ("omega_qubit", 50.0), ("g", 6.8), ("eta", 0.8), ("kappa", 1.0)],
            ),
            ("kerr", "steady", &[("omega0", 1.0), ("epsilon", 1.0), ("gamma", 1.0)]),
            ("kerr", "dynamic", &[("omega0", 1.0), ("epsilon", 0.6), ("gamma", 0.4), ("t", 2.0)]),
            (
                "kerr",
                "homodyne_steady",
                &[("omega0", 1.0), ("epsilon", 1.0), ("gamma", 1.0), ("grid_points", 32.0)],
            ),
            (
                "kerr",
                "homodyne_dynamic",
                &[
                    ("omega0", 1.0),
                    ("epsilon", 0.999),
                    ("gamma", 0.0),
                    ("t", 2.0),
                    ("grid_points", 32.0),
                ],
            ),
            ("kerr", "protocol", &[("gamma", 1.0), ("n_max", 100.0)]),
            ("kerr", "unitary_window", &[("omega0", 1.0), ("epsilon", 0.999), ("t", 5.0)]),
            ("mrlm", "occupation", &[("eps_d", 0.1), ("temperature", 0.01)]),
            ("mrlm", "qfi", &[("eps_d", 0.1), ("temperature", 0.01)]),
        ];
        for (model, operation, bound) in cases {
            let op = find(model, operation).unwrap();
            let mut map = BTreeMap::new();
            for p in op.params {
                if let Some(d) = p.default {
                    map.insert(p.name.to_string(), d);
                }
            }
            for (name, v) in *bound {
                map.insert(name.to_string(), *v);
            }
            for p in op.params {
                assert!(map.contains_key(p.name), "{model}/{operation} missing {}", p.name);
            }
            let out = (op.eval)(&ParamValues::new(&map))
                .unwrap_or_else(|e| panic!("{model}/{operation}: {e}"));
            assert_eq!(out.len(), op.outputs.len(), "{model}/{operation} arity");
            assert!(out.iter().all(|v| v.is_finite()), "{model}/{operation}: {out:?}");
        }
        assert_eq!(cases.len(), OPS.len(), "every operation needs a smoke case");
    }
}
