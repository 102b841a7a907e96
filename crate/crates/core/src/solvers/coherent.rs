//! Single-variable designs under coherent interference: optimal radar
//! waveform for a given codebook, and optimal codebook for a given waveform.

use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix, C64};
use crate::scenario::{Design, DesignOutcome, Scenario, SolverTag, CONSTRAINT_SLACK};

use super::{require_white, sinr_margin};

/// Minimum-energy waveform along the weakest eigenvector of a fixed `R_x`.
pub fn solve_coherent_fixed_codebook(sc: &Scenario, rx: &HermitianMatrix) -> Result<DesignOutcome> {
    require_white(sc, "fixed-codebook design")?;
    if rx.dim() != sc.n {
        return Err(Error::Domain(format!("R_x has dimension {}, expected {}", rx.dim(), sc.n)));
    }
    linalg::check_psd(rx)?;
    if rx.trace() / sc.n as f64 > sc.p_c * (1.0 + CONSTRAINT_SLACK) {
        return Err(Error::Domain(format!("trace(R_x)/N = {} exceeds P_c = {}", rx.trace() / sc.n as f64, sc.p_c)));
    }
    let (gamma_n, u_n) = linalg::min_eigpair(rx)?;
    let gamma_n = gamma_n.max(0.0);
    let e = sc.radar_energy();
    let rho_max = sc.var_a * e / (sc.var_g * gamma_n + sc.var_c * e + sc.var_w());
    let margin = sinr_margin(sc, rho_max)?;
    let eps = sc.rho_min * (sc.var_g * gamma_n + sc.var_w()) / margin;
    if eps > e * (1.0 + CONSTRAINT_SLACK) {
        return Err(Error::Infeasible { rho_max, reason: "radar energy budget too small for this codebook".into() });
    }
    let s = linalg::scale_vec(&u_n, eps.sqrt());
    DesignOutcome::evaluate(sc, Design::new(rx.clone(), s), gamma_n, SolverTag::FixedCodebook)
}

/// Coefficients `(A, B, C)` of the quadratic whose sign is that of `dG'/dgamma`
/// for a waveform of energy `eps`.
pub fn fixed_waveform_quadratic(sc: &Scenario, eps: f64) -> (f64, f64, f64) {
    let n = sc.n as f64;
    let (h2, vv, vf, b) = (sc.h2, sc.var_v, sc.var_f, sc.beta);
    let a = -n * h2 * h2;
    let bq = h2 * (n * h2 * sc.p_c - n * vv - (n - b) * vf * eps);
    let c = h2 * n * sc.p_c * (vv + (1.0 - b) * vf * eps) - b * (n - 1.0) * vv * vf * eps;
    (a, bq, c)
}

/// `G'(gamma)` in nats for a waveform of energy `eps`.
pub fn fixed_waveform_objective(sc: &Scenario, eps: f64, gamma: f64) -> f64 {
    let nm1 = (sc.n - 1) as f64;
    let c = sc.h2 / sc.var_v;
    let f = sc.var_f / sc.var_v;
    let free = (sc.comm_energy() - gamma) / nm1;
    nm1 * (c * free).ln_1p() + (1.0 - sc.beta) * (c * gamma).ln_1p() + sc.beta * (c * gamma + f * eps).ln_1p()
}

/// Upper limit `gamma'` on the comm power along `s` imposed by the SINR floor.
pub fn fixed_waveform_gamma_limit(sc: &Scenario, eps: f64) -> f64 {
    if sc.var_g == 0.0 {
        return sc.p_c;
    }
    let num = sc.var_a * eps - (sc.var_w() + sc.var_c * eps) * sc.rho_min;
    sc.p_c.min(num / (sc.var_g * sc.rho_min))
}

/// Optimal power in the radar direction for a fixed waveform, following the
/// case analysis on the discriminant of [`fixed_waveform_quadratic`].
pub fn fixed_waveform_gamma(sc: &Scenario, eps: f64) -> f64 {
    let gp = fixed_waveform_gamma_limit(sc, eps);
    let (a, b, c) = fixed_waveform_quadratic(sc, eps);
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let roots = super::gamma::quadratic_roots(a, b, c);
    let (l1, l2) = match roots.as_slice() {
        [x, y] => (*x, *y),
        [x] => (*x, *x),
        _ => return 0.0,
    };
    if l2 <= 0.0 || l1 >= gp {
        0.0
    } else if l2 < gp {
        l2
    } else if fixed_waveform_objective(sc, eps, gp) > fixed_waveform_objective(sc, eps, 0.0) {
        gp
    } else {
        0.0
    }
}

/// Best codebook for a given radar waveform `s`.
pub fn solve_coherent_fixed_waveform(sc: &Scenario, s: &[C64]) -> Result<DesignOutcome> {
    require_white(sc, "fixed-waveform design")?;
    if s.len() != sc.n {
        return Err(Error::Domain(format!("waveform has length {}, expected {}", s.len(), sc.n)));
    }
    let eps = linalg::norm_sqr(s);
    if eps == 0.0 {
        return Err(Error::Domain("waveform must be non-zero".into()));
    }
    if eps > sc.radar_energy() * (1.0 + CONSTRAINT_SLACK) {
        return Err(Error::Domain(format!("||s||^2 = {eps} exceeds N P_r = {}", sc.radar_energy())));
    }
    let rho_max = sc.var_a * eps / (sc.var_c * eps + sc.var_w());
    if sc.rho_min > rho_max {
        return Err(Error::Infeasible { rho_max, reason: "waveform energy too small for the SINR floor".into() });
    }
    let gp = fixed_waveform_gamma_limit(sc, eps);
    if gp < 0.0 {
        return Err(Error::Infeasible { rho_max, reason: "no admissible comm power along the waveform".into() });
    }
    let gamma = fixed_waveform_gamma(sc, eps);
    let free = (sc.comm_energy() - gamma) / (sc.n - 1) as f64;
    let mut d = vec![free; sc.n];
    d[sc.n - 1] = gamma;
    let u = linalg::unitary_with_last_column(&linalg::scale_vec(s, 1.0 / eps.sqrt()));
    let rx = HermitianMatrix::from_eigen(&u, &d);
    DesignOutcome::evaluate(sc, Design::new(rx, s.to_vec()), gamma, SolverTag::FixedWaveform)
}
