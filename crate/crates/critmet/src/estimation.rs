//! Estimation-theory core: classical Fisher information, quantum Fisher
//! information in pure and spectral forms, symmetric logarithmic
//! derivatives, the QFI matrix, compatibility diagnostics, and handling of
//! singular information matrices.
//!
//! Conventions. A mixed probe is given by its spectral decomposition
//! rho = sum_i p_i |psi_i><psi_i|; parameter dependence enters through the
//! populations p_i(theta) and the basis |psi_i(theta)>. A derivative is the
//! pair (dp_i, <psi_m|d psi_n>). The QFI of a pure state |psi> is
//! 4[<dpsi|dpsi> - |<psi|dpsi>|^2], and the SLD of a mixed probe satisfies
//! d rho = (L rho + rho L)/2.

use crate::numerics::{eigh_symmetric, HermitianMatrix, SymmetricMatrix};
use crate::{Error, Result};
use num_complex::Complex64;

/// Floor below which a population (or population pair) counts as zero.
pub const POPULATION_FLOOR: f64 = 1e-14;

/// Normalized state vector over a finite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    pub amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates unit norm within 1e-10.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "state norm {} is not 1 within 1e-10",
                norm_sq.sqrt()
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// Density operator in its eigenbasis: populations p_i and orthonormal
/// eigenvectors (column i is |psi_i>, expressed in the computational basis).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub populations: Vec<f64>,
    pub basis: Vec<Vec<Complex64>>,
}

impl SpectralState {
    /// Validates p_i >= -1e-12, sum p_i = 1 within 1e-10, and basis
    /// orthonormality within 1e-10.
    pub fn new(populations: Vec<f64>, basis: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = populations.len();
        if basis.len() != n || basis.iter().any(|c| c.len() != n) {
            return Err(Error::Validation(
                "basis must be square with one column per population".into(),
            ));
        }
        if populations.iter().any(|&p| p < -1e-12) {
            return Err(Error::Validation("negative population".into()));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "populations sum to {total}, not 1 within 1e-10"
            )));
        }
        for i in 0..n {
            for j in i..n {
                let dot: Complex64 = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).norm() > 1e-10 {
                    return Err(Error::Validation(format!(
                        "basis columns {i}, {j} are not orthonormal"
                    )));
                }
            }
        }
        Ok(Self { populations, basis })
    }

    pub fn dim(&self) -> usize {
        self.populations.len()
    }
}

/// Derivative of a spectral decomposition with respect to one parameter:
/// population derivatives dp_i and basis overlaps
/// `overlaps[m][n] = <psi_m | d psi_n>` for m != n (diagonal entries are
/// gauge and ignored). Overlaps are antihermitian:
/// `overlaps[m][n] = -conj(overlaps[n][m])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub dpopulations: Vec<f64>,
    pub overlaps: Vec<Vec<Complex64>>,
}

impl StateDerivative {
    fn validate(&self, dim: usize) -> Result<()> {
        if self.dpopulations.len() != dim
            || self.overlaps.len() != dim
            || self.overlaps.iter().any(|r| r.len() != dim)
        {
            return Err(Error::Validation(
                "derivative dimensions do not match the state".into(),
            ));
        }
        let dsum: f64 = self.dpopulations.iter().sum();
        if dsum.abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "population derivatives sum to {dsum}; trace preservation requires 0"
            )));
        }
        for m in 0..dim {
            for n in (m + 1)..dim {
                if (self.overlaps[m][n] + self.overlaps[n][m].conj()).norm() > 1e-10 {
                    return Err(Error::Validation(format!(
                        "overlaps are not antihermitian at ({m}, {n})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Real symmetric information matrix with parameter labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    pub labels: Vec<String>,
    pub entries: SymmetricMatrix,
}

/// Classical Fisher information together with a divergence indicator for
/// outcomes whose probability vanishes while its derivative does not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalFisher {
    pub value: f64,
    pub divergent: bool,
}

/// F = sum_i (dp_i)^2 / p_i over outcomes with p_i above the floor.
///
/// An outcome with p_i <= floor but |dp_i| > 1e-8 contributes formally
/// infinite information; it is excluded from the sum and flagged.
pub fn classical_fisher(probs: &[f64], dprobs: &[f64]) -> Result<ClassicalFisher> {
    if probs.len() != dprobs.len() {
        return Err(Error::Validation(format!(
            "probs and dprobs lengths differ: {} vs {}",
            probs.len(),
            dprobs.len()
        )));
    }
    if probs.iter().any(|&p| p < 0.0) {
        return Err(Error::Domain("negative probability".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Validation(format!(
            "probabilities sum to {total}, not 1 within 1e-8"
        )));
    }
    let mut value = 0.0;
    let mut divergent = false;
    for (&p, &dp) in probs.iter().zip(dprobs) {
        if p > POPULATION_FLOOR {
            value += dp * dp / p;
        } else if dp.abs() > 1e-8 {
            divergent = true;
        }
    }
    Ok(ClassicalFisher { value, divergent })
}

/// Pure-state QFI: 4[<dpsi|dpsi> - |<psi|dpsi>|^2].
///
/// Gauge-invariant: dpsi -> dpsi + i lambda psi leaves the value unchanged.
pub fn qfi_pure(psi: &PureState, dpsi: &[Complex64]) -> Result<f64> {
    if dpsi.len() != psi.dim() {
        return Err(Error::Validation(format!(
            "dpsi length {} does not match state dimension {}",
            dpsi.len(),
            psi.dim()
        )));
    }
    let dd: f64 = dpsi.iter().map(|a| a.norm_sqr()).sum();
    let pd: Complex64 = psi
        .amplitudes
        .iter()
        .zip(dpsi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(4.0 * (dd - pd.norm_sqr()))
}

/// Spectral QFI split into its population and basis contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiDecomposition {
    pub population_term: f64,
    pub basis_term: f64,
    pub total: f64,
}

/// QFI of a mixed probe from its spectral data:
/// population term sum_i (dp_i)^2/p_i plus basis term
/// 2 sum_{m != n} sigma_{nm} |<psi_m|d psi_n>|^2 with
/// sigma_{nm} = (p_n - p_m)^2 / (p_n + p_m).
/// Pairs with p_n + p_m at or below the floor are skipped.
pub fn qfi_spectral(state: &SpectralState, deriv: &StateDerivative) -> Result<QfiDecomposition> {
    deriv.validate(state.dim())?;
    let n = state.dim();
    let p = &state.populations;

    let mut population_term = 0.0;
    for (&pi, &dpi) in p.iter().zip(&deriv.dpopulations) {
        if pi > POPULATION_FLOOR {
            population_term += dpi * dpi / pi;
        }
    }

    let mut basis_term = 0.0;
    for m in 0..n {
        for nn in 0..n {
            if m == nn {
                continue;
            }
            let psum = p[nn] + p[m];
            if psum <= POPULATION_FLOOR {
                continue;
            }
            let sigma = (p[nn] - p[m]) * (p[nn] - p[m]) / psum;
            basis_term += 2.0 * sigma * deriv.overlaps[m][nn].norm_sqr();
        }
    }
    Ok(QfiDecomposition { population_term, basis_term, total: population_term + basis_term })
}

fn matvec(op: &HermitianMatrix, x: &[Complex64]) -> Vec<Complex64> {
    op.mul_vec(x)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Symmetric logarithmic derivative from the spectral form
/// `<psi_j|L|psi_i> = 2 <psi_j|d rho|psi_i> / (p_i + p_j)`, assembled back
/// in the computational basis.
///
/// `drho` must be Hermitian and traceless. A matrix element connecting a
/// pair with p_i + p_j at the floor must itself vanish; otherwise d rho
/// leaves the support of rho and no SLD exists there.
pub fn sld(state: &SpectralState, drho: &HermitianMatrix) -> Result<HermitianMatrix> {
    let n = state.dim();
    if drho.dim != n {
        return Err(Error::Validation(format!(
            "drho dimension {} does not match state dimension {n}",
            drho.dim
        )));
    }
    let scale = drho.entries.iter().fold(0.0, |m, v| v.norm().max(m));
    for i in 0..n {
        for j in i..n {
            if (drho.at(i, j) - drho.at(j, i).conj()).norm() > 1e-10 * scale.max(1.0) {
                return Err(Error::Validation("drho is not Hermitian".into()));
            }
        }
    }
    let trace: Complex64 = (0..n).map(|i| drho.at(i, i)).sum();
    if trace.norm() > 1e-10 * scale.max(1.0) {
        return Err(Error::Validation(format!(
            "drho has trace {trace}; a state derivative must be traceless"
        )));
    }

    // m[j][i] = <psi_j | drho | psi_i>
    let cols: Vec<Vec<Complex64>> = state.basis.iter().map(|c| matvec(drho, c)).collect();
    let mut lambda = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for i in 0..n {
            let mji = inner(&state.basis[j], &cols[i]);
            let psum = state.populations[i] + state.populations[j];
            if psum <= POPULATION_FLOOR {
                if mji.norm() > 1e-8 {
                    return Err(Error::Domain(format!(
                        "drho has weight {:.3e} on the unsupported subspace pair ({j}, {i}); \
                         the SLD is undefined there",
                        mji.norm()
                    )));
                }
                continue;
            }
            lambda[j][i] = 2.0 * mji / psum;
        }
    }

    // L = B Lambda B^dagger
    let mut l = HermitianMatrix::zeros(n);
    for j in 0..n {
        for i in 0..n {
            if lambda[j][i].norm() == 0.0 {
                continue;
            }
            let w = lambda[j][i];
            for r in 0..n {
                let br = state.basis[j][r] * w;
                for c in 0..n {
                    let add = br * state.basis[i][c].conj();
                    let cur = l.at(r, c);
                    l.set(r, c, cur + add);
                }
            }
        }
    }
    Ok(l)
}

/// QFI matrix over several parameters of the same spectral probe.
///
/// Entry (a, b) combines the population part sum_k dp^a_k dp^b_k / p_k with
/// the basis part -2 sum_{k != l} (p_l - p_k)^2 Re[O^a_{kl} O^b_{lk}] /
/// (p_k + p_l). Diagonal entries reduce to the single-parameter QFIs.
pub fn qfim(
    state: &SpectralState,
    labels: &[&str],
    derivs: &[StateDerivative],
) -> Result<FisherMatrix> {
    if derivs.is_empty() {
        return Err(Error::Validation("need at least one parameter derivative".into()));
    }
    if labels.len() != derivs.len() {
        return Err(Error::Validation(format!(
            "{} labels for {} derivatives",
            labels.len(),
            derivs.len()
        )));
    }
    let n = state.dim();
    for d in derivs {
        d.validate(n)?;
    }
    let p = &state.populations;
    let d = derivs.len();
    let mut entries = SymmetricMatrix::zeros(d);
    for a in 0..d {
        for b in a..d {
            let mut val = 0.0;
            for k in 0..n {
                if p[k] > POPULATION_FLOOR {
                    val += derivs[a].dpopulations[k] * derivs[b].dpopulations[k] / p[k];
                }
            }
            for k in 0..n {
                for l in 0..n {
                    if k == l {
                        continue;
                    }
                    let psum = p[k] + p[l];
                    if psum <= POPULATION_FLOOR {
                        continue;
                    }
                    let w = (p[l] - p[k]) * (p[l] - p[k]) / psum;
                    let re = (derivs[a].overlaps[k][l] * derivs[b].overlaps[l][k]).re;
                    val -= 2.0 * w * re;
                }
            }
            entries.set(a, b, val);
            entries.set(b, a, val);
        }
    }
    Ok(FisherMatrix { labels: labels.iter().map(|s| s.to_string()).collect(), entries })
}

/// Tr(rho [L1, L2]) / i, reported as a real number.
///
/// The trace of a state times a commutator of Hermitian operators is purely
/// imaginary, so the full content is this single real scalar; it vanishes
/// exactly when the pair of SLDs is compatible on the probe.
pub fn compatibility_trace(
    state: &SpectralState,
    l1: &HermitianMatrix,
    l2: &HermitianMatrix,
) -> Result<f64> {
    let n = state.dim();
    if l1.dim != n || l2.dim != n {
        return Err(Error::Validation("operator dimensions do not match the state".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, col) in state.basis.iter().enumerate() {
        let pk = state.populations[k];
        if pk == 0.0 {
            continue;
        }
        let l2c = matvec(l2, col);
        let l1l2 = inner(col, &matvec(l1, &l2c));
        let l1c = matvec(l1, col);
        let l2l1 = inner(col, &matvec(l2, &l1c));
        acc += (l1l2 - l2l1) * pk;
    }
    Ok(acc.im)
}

/// Quantumness of a multiparameter model: R = || I^{-1} D ||_inf with
/// D_ij = Tr(rho [L_i, L_j]) / (2i), reported as the largest singular value
/// of the whitened curvature I^{-1/2} D I^{-1/2}. R lies in [0, 1]; R = 0
/// means the SLDs are compatible in the weak sense.
pub fn quantumness_r(
    state: &SpectralState,
    slds: &[HermitianMatrix],
    info: &FisherMatrix,
) -> Result<f64> {
    let d = slds.len();
    if info.entries.dim != d {
        return Err(Error::Validation(format!(
            "{} SLDs for a {}x{} information matrix",
            d, info.entries.dim, info.entries.dim
        )));
    }
    if d < 2 {
        return Ok(0.0);
    }
    let eig = eigh_symmetric(&info.entries)?;
    let lam_max = *eig.values.last().expect("nonempty");
    let lam_min = eig.values[0];
    if lam_min <= 1e-10 * lam_max {
        return Err(Error::Precondition(
            "information matrix is singular; analyze its null space with qfim_zero_modes \
             and estimate along the remaining directions"
                .into(),
        ));
    }

    let mut dmat = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in (i + 1)..d {
            let t = compatibility_trace(state, &slds[i], &slds[j])? / 2.0;
            dmat[i][j] = t;
            dmat[j][i] = -t;
        }
    }

    // whitened curvature M = I^{-1/2} D I^{-1/2}; spectrum modulus of
    // I^{-1} D equals the singular spectrum of M
    let mut isqrt = vec![vec![0.0; d]; d];
    for k in 0..d {
        let w = 1.0 / eig.values[k].sqrt();
        for i in 0..d {
            for j in 0..d {
                isqrt[i][j] += w * eig.vectors[k][i] * eig.vectors[k][j];
            }
        }
    }
    let mul = |x: &Vec<Vec<f64>>, y: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                out[i][j] = (0..d).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        out
    };
    let m = mul(&mul(&isqrt, &dmat), &isqrt);
    // M is antisymmetric, so -M^2 is symmetric PSD with eigenvalues R_k^2
    let m2 = SymmetricMatrix::from_fn(d, |i, j| -(0..d).map(|k| m[i][k] * m[k][j]).sum::<f64>());
    let eig2 = eigh_symmetric(&m2)?;
    Ok(eig2.values.last().expect("nonempty").max(0.0).sqrt())
}

/// Error-propagation signal-to-noise ratio M (d<O>/d theta)^2 / Var(O).
pub fn snr(dsignal: f64, variance: f64, repetitions: u64) -> Result<f64> {
    if !(variance > 0.0) {
        return Err(Error::Domain(format!(
            "variance {variance} must be positive for error propagation"
        )));
    }
    Ok(repetitions as f64 * dsignal * dsignal / variance)
}

/// Eigenpairs of an information matrix with eigenvalue at or below
/// `tol * lambda_max`: the directions along which the model carries no
/// information. Eigenvectors are unit norm with deterministic sign.
pub fn qfim_zero_modes(info: &FisherMatrix, tol: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    let eig = eigh_symmetric(&info.entries)?;
    let lam_max = *eig.values.last().expect("nonempty");
    Ok(eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(&v, _)| v <= tol * lam_max)
        .map(|(&v, vec)| (v, vec.clone()))
        .collect())
}

/// Linearized error propagation through a reparametrization: J C J^T where
/// C is the (pseudo)inverse information matrix and J the Jacobian row of the
/// derived parameter.
pub fn effective_variance(pinv_info: &SymmetricMatrix, jacobian: &[f64]) -> Result<f64> {
    let n = pinv_info.dim;
    if jacobian.len() != n {
        return Err(Error::Validation(format!(
            "jacobian length {} does not match matrix dimension {n}",
            jacobian.len()
        )));
    }
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += jacobian[i] * pinv_info.at(i, j) * jacobian[j];
        }
    }
    Ok(acc)
}
