//! Reference designs the joint optimum is compared against.

use crate::error::Result;
use crate::linalg::{self, CMatrix, HermitianMatrix, C64};
use crate::scenario::{Design, DesignOutcome, Scenario, SolverTag};

use super::require_white;

/// Normalized flat pulse train `(1, ..., 1) / sqrt(N)`.
fn flat(n: usize) -> Vec<C64> {
    vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n]
}

/// Minimum radar energy that meets the SINR floor when the waveform sees
/// comm interference `sigma_g^2 gamma` along its own direction, capped at
/// `N P_r`. The cap leaves the design infeasible, which the outcome reports.
fn min_energy(sc: &Scenario, gamma: f64) -> f64 {
    let margin = sc.var_a - sc.var_c * sc.rho_min;
    let e = sc.radar_energy();
    if margin <= 0.0 {
        return e;
    }
    (sc.rho_min * (sc.var_g * gamma + sc.var_w()) / margin).min(e)
}

/// Each system ignores the other: white codebook `P_c I`, and an unmodulated
/// pulse train with the least energy meeting the SINR floor.
pub fn baseline_disjoint(sc: &Scenario) -> Result<DesignOutcome> {
    require_white(sc, "disjoint baseline")?;
    let eps = min_energy(sc, sc.p_c);
    let s = linalg::scale_vec(&flat(sc.n), eps.sqrt());
    let rx = HermitianMatrix::scaled_identity(sc.n, sc.p_c);
    DesignOutcome::evaluate(sc, Design::new(rx, s), sc.p_c, SolverTag::Disjoint)
}

/// The two systems use orthogonal subspaces: the radar an unmodulated pulse
/// train, the codebook the `N - 1` dimensions orthogonal to it with the full
/// power budget spread evenly.
pub fn baseline_orthogonal(sc: &Scenario) -> Result<DesignOutcome> {
    require_white(sc, "orthogonal baseline")?;
    let n = sc.n;
    let u = flat(n);
    let eps = min_energy(sc, 0.0);
    let s = linalg::scale_vec(&u, eps.sqrt());
    let proj = CMatrix::identity(n).sub(&CMatrix::outer(&u, &u));
    let rx = HermitianMatrix::new(proj.scale(sc.comm_energy() / (n - 1) as f64));
    DesignOutcome::evaluate(sc, Design::new(rx, s), 0.0, SolverTag::Orthogonal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{DbSpec, InterferenceModel};
    use crate::solvers::solve_joint;
    use approx::assert_relative_eq;

    fn fig5(rho_db: f64) -> Scenario {
        let mut spec = DbSpec::reference(8, 0.1);
        spec.rho_min_db = rho_db;
        Scenario::from_db(&spec).unwrap()
    }

    #[test]
    fn disjoint_energy_without_clutter() {
        let mut sc = fig5(5.0);
        sc.var_c = 0.0;
        let out = baseline_disjoint(&sc).unwrap();
        assert_relative_eq!(out.epsilon_star, sc.rho_min * (sc.p_c + 1.0), max_relative = 1e-12);
        assert!(out.feasible);
        assert_relative_eq!(out.sinr, sc.rho_min, max_relative = 1e-9);
    }

    #[test]
    fn disjoint_threshold_matches_codebook_bound() {
        // feasible iff rho <= sigma_a^2 E / (sigma_g^2 P_c + sigma_c^2 E + sigma_w^2)
        let sc = fig5(0.0);
        let e = sc.radar_energy();
        let bound = e / (sc.p_c + sc.var_c * e + 1.0);
        assert!(baseline_disjoint(&sc.clone().with_rho_min(bound * 0.999)).unwrap().feasible);
        assert!(!baseline_disjoint(&sc.with_rho_min(bound * 1.001)).unwrap().feasible);
    }

    #[test]
    fn orthogonal_coherent_is_interference_free() {
        let sc = fig5(10.0);
        let out = baseline_orthogonal(&sc).unwrap();
        assert!(out.feasible);
        assert!((out.r1 - out.r0).abs() < 1e-12);
        assert_relative_eq!(out.sinr, sc.rho_min, max_relative = 1e-9);
        let inc = baseline_orthogonal(&sc.with_model(InterferenceModel::Incoherent)).unwrap();
        assert!(inc.r1 < inc.r0 - 1e-6);
    }

    #[test]
    fn sandwich() {
        for rho_db in [0.0, 5.0, 10.0, 15.0] {
            for model in [InterferenceModel::Coherent, InterferenceModel::Incoherent] {
                let sc = fig5(rho_db).with_model(model);
                let joint = solve_joint(&sc).unwrap().cr;
                for out in [baseline_disjoint(&sc).unwrap(), baseline_orthogonal(&sc).unwrap()] {
                    if out.feasible {
                        assert!(out.cr <= joint + 1e-9, "{} {} > {}", out.solver, out.cr, joint);
                    }
                }
            }
        }
    }
}
