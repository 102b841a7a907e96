//! Joint optimization of the codebook covariance and the radar waveform.

use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix};
use crate::scenario::{Design, DesignOutcome, InterferenceModel, Scenario, SolverTag};

use super::gamma::{gbar_candidates, GammaObjective, NoiseMode};

/// Optimal `gamma_N` and the matching objective.
pub fn optimal_gamma(sc: &Scenario, mode: NoiseMode) -> Result<(GammaObjective, f64)> {
    let obj = GammaObjective::new(sc, mode)?;
    let gamma = gbar_candidates(&obj)?.argmax(&obj);
    Ok((obj, gamma))
}

/// Eigenvalues `((N P_c - g)/(N-1), ..., g)` of the optimal codebook.
pub(crate) fn optimal_spectrum(obj: &GammaObjective, gamma: f64) -> Vec<f64> {
    let mut d = vec![obj.free_eigenvalue(gamma); obj.n];
    d[obj.n - 1] = gamma;
    d
}

/// Jointly optimal design.
///
/// With white radar noise the codebook is diagonal and the waveform sits on
/// the last coordinate, which is optimal for both coherent and incoherent
/// interference. Colored noise is delegated to [`solve_colored_joint`].
pub fn solve_joint(sc: &Scenario) -> Result<DesignOutcome> {
    if let InterferenceModel::General(_) = sc.interference {
        return Err(Error::Unsupported(
            "joint optimization has no closed form for a general interference covariance".into(),
        ));
    }
    if !sc.is_white_noise() {
        return solve_colored_joint(sc);
    }
    let (obj, gamma) = optimal_gamma(sc, NoiseMode::JointWhite)?;
    let rx = HermitianMatrix::from_diag(&optimal_spectrum(&obj, gamma));
    let mut s = vec![linalg::C64::new(0.0, 0.0); sc.n];
    s[sc.n - 1] = linalg::C64::new(obj.epsilon(gamma).sqrt(), 0.0);
    DesignOutcome::evaluate(sc, Design::new(rx, s), gamma, SolverTag::Joint)
}

/// Jointly optimal design for coherent interference and arbitrary radar noise `M`.
///
/// The waveform is aligned with the weakest eigenvector `v_N` of `M`, and
/// the codebook shares that eigenvector as its weakest direction.
pub fn solve_colored_joint(sc: &Scenario) -> Result<DesignOutcome> {
    match sc.interference {
        InterferenceModel::Coherent => {}
        InterferenceModel::Incoherent => {
            return Err(Error::Unsupported(
                "colored radar noise with incoherent interference has no closed form; use a numerical search".into(),
            ))
        }
        InterferenceModel::General(_) => {
            return Err(Error::Unsupported("general interference covariance is not supported".into()))
        }
    }
    let (phi_n, v_n) = linalg::min_eigpair(&sc.noise)?;
    let (obj, gamma) = optimal_gamma(sc, NoiseMode::JointColored { phi_n })?;
    let u = linalg::unitary_with_last_column(&v_n);
    let rx = HermitianMatrix::from_eigen(&u, &optimal_spectrum(&obj, gamma));
    let s = linalg::scale_vec(&v_n, obj.epsilon(gamma).sqrt());
    DesignOutcome::evaluate(sc, Design::new(rx, s), gamma, SolverTag::Colored)
}
