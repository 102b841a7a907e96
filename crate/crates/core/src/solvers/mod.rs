//! Optimizers for the codebook covariance `R_x` and the radar waveform `s`.

pub mod baselines;
pub mod coherent;
pub mod gamma;
pub mod joint;
pub mod papr;

use serde::{Deserialize, Serialize};

pub use baselines::{baseline_disjoint, baseline_orthogonal};
pub use coherent::{solve_coherent_fixed_codebook, solve_coherent_fixed_waveform};
pub use gamma::{gbar_candidates, CandidateSet, GammaObjective, NoiseMode};
pub use joint::{solve_colored_joint, solve_joint};
pub use papr::{solve_papr_exact, solve_papr_naif};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scenario::{DesignOutcome, Scenario, SolverTag};

/// Whether the joint problem admits a solution, and the largest `rho_min` it could meet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub rho_max: f64,
}

/// Feasibility of the joint problem; colored noise enters through `lambda_min(M)`.
pub fn feasibility_joint(sc: &Scenario) -> Result<Feasibility> {
    let phi = if sc.is_white_noise() { sc.var_w() } else { linalg::min_eigpair(&sc.noise)?.0 };
    let rho_max = gamma::rho_max_joint(sc, phi);
    let feasible = sc.rho_min <= rho_max && sc.var_a > sc.var_c * sc.rho_min;
    Ok(Feasibility { feasible, rho_max })
}

/// Runs the solver named by `tag`. Fixed-codebook and fixed-waveform designs
/// start from the white codebook `P_c I` and the flat pulse train at full
/// energy respectively.
pub fn solve(sc: &Scenario, tag: SolverTag) -> Result<DesignOutcome> {
    match tag {
        SolverTag::Joint => solve_joint(sc),
        SolverTag::Colored => solve_colored_joint(sc),
        SolverTag::FixedCodebook => {
            solve_coherent_fixed_codebook(sc, &linalg::HermitianMatrix::scaled_identity(sc.n, sc.p_c))
        }
        SolverTag::FixedWaveform => {
            let amp = (sc.p_r).sqrt();
            solve_coherent_fixed_waveform(sc, &vec![linalg::C64::new(amp, 0.0); sc.n])
        }
        SolverTag::PaprNaif => solve_papr_naif(sc),
        SolverTag::PaprExact => solve_papr_exact(sc),
        SolverTag::Disjoint => baseline_disjoint(sc),
        SolverTag::Orthogonal => baseline_orthogonal(sc),
    }
}

pub(crate) fn require_white(sc: &Scenario, what: &str) -> Result<()> {
    if sc.is_white_noise() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} requires white radar noise")))
    }
}

/// `sigma_a^2 - sigma_c^2 rho_min`, which must be positive for any finite radar energy to work.
pub(crate) fn sinr_margin(sc: &Scenario, rho_max: f64) -> Result<f64> {
    let m = sc.var_a - sc.var_c * sc.rho_min;
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::Infeasible { rho_max, reason: "clutter alone caps the SINR below the floor".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{linear_to_db, DbSpec};
    use approx::assert_relative_eq;

    #[test]
    fn reference_feasibility_bound() {
        let sc = Scenario::from_db(&DbSpec::reference(8, 0.5)).unwrap();
        let f = feasibility_joint(&sc).unwrap();
        let e = sc.radar_energy();
        assert_relative_eq!(f.rho_max, e / (0.01 * e + 1.0), max_relative = 1e-12);
        assert!(f.feasible);
        assert!((linear_to_db(f.rho_max) - 16.66).abs() < 0.01);
    }

    #[test]
    fn clutter_free_bound() {
        let mut sc = Scenario::from_db(&DbSpec::reference(8, 0.5)).unwrap();
        sc.var_c = 0.0;
        assert_relative_eq!(feasibility_joint(&sc).unwrap().rho_max, sc.radar_energy(), max_relative = 1e-12);
    }

    #[test]
    fn colored_bound_is_larger() {
        let white = Scenario::from_db(&DbSpec::reference(8, 0.5)).unwrap();
        let colored = white.clone().with_exp_corr_noise(2.0 / 3.0).unwrap();
        assert!(feasibility_joint(&colored).unwrap().rho_max > feasibility_joint(&white).unwrap().rho_max);
    }
}
