//! The set of achievable rate pairs `(R0, R1)` under the radar constraints,
//! its upper boundary traced by weighted-sum maximization, and the check that
//! white radar noise is the least favorable noise covariance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix};
use crate::metrics::{self, RatePoint};
use crate::random;
use crate::scenario::{Design, InterferenceModel, Scenario, CONSTRAINT_SLACK};
use crate::solvers::{feasibility_joint, solve_joint};

/// Draws attempted per requested sample before the region is declared degenerate.
pub const OVERSAMPLING: usize = 100;

/// `beta` grid `0, 1/(k-1), ..., 1`.
pub fn beta_grid(k: usize) -> Vec<f64> {
    match k {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..k).map(|i| i as f64 / (k - 1) as f64).collect(),
    }
}

/// Rate pairs of the optimal designs for each `beta` (ascending).
///
/// Along the curve `R0` cannot increase and `R1` cannot decrease; a violation
/// beyond `1e-9` is reported as an internal inconsistency.
pub fn psi_curve(sc: &Scenario, betas: &[f64]) -> Result<Vec<(f64, RatePoint)>> {
    if betas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("beta grid must be strictly increasing".into()));
    }
    if let Some(b) = betas.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(Error::Domain(format!("beta must lie in [0, 1], got {b}")));
    }
    let feas = feasibility_joint(sc)?;
    if !feas.feasible {
        return Err(Error::Infeasible { rho_max: feas.rho_max, reason: "no feasible design for the region".into() });
    }
    let mut out = Vec::with_capacity(betas.len());
    for &b in betas {
        let opt = solve_joint(&sc.clone().with_beta(b))?;
        out.push((b, opt.rate_point()));
    }
    for w in out.windows(2) {
        let ((b0, p0), (b1, p1)) = (w[0], w[1]);
        if p1.r0 > p0.r0 + 1e-9 || p1.r1 < p0.r1 - 1e-9 {
            return Err(Error::InternalConsistency(format!(
                "boundary is not monotone between beta = {b0} {p0:?} and beta = {b1} {p1:?}"
            )));
        }
    }
    Ok(out)
}

/// A randomly drawn design that meets every constraint, with its rate pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionSample {
    pub point: RatePoint,
    pub design: Design,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionEstimate {
    pub boundary: Vec<(f64, RatePoint)>,
    pub interior: Vec<RegionSample>,
    pub scenario: Scenario,
    pub seed: u64,
    /// Number of random designs drawn, accepted or not.
    pub attempts: usize,
    /// No feasible sample was found within the oversampling budget.
    pub degenerate: bool,
}

impl RegionEstimate {
    pub fn interior_points(&self) -> Vec<RatePoint> {
        self.interior.iter().map(|s| s.point).collect()
    }
}

/// One random design: eigenvalues uniform on the simplex scaled to a total
/// power `N P_c U(0,1]`, a random eigenbasis, and a random waveform direction
/// with energy `N P_r U(0,1]`.
pub fn random_design<R: Rng + ?Sized>(rng: &mut R, sc: &Scenario) -> Design {
    let n = sc.n;
    let total = sc.comm_energy() * (1.0 - rng.random::<f64>());
    let d: Vec<f64> = random::simplex(rng, n).into_iter().map(|x| x * total).collect();
    let u = random::unitary(rng, n);
    let rx = HermitianMatrix::from_eigen(&u, &d);
    let dir = random::complex_gaussian_vec(rng, n, 1.0);
    let energy = sc.radar_energy() * (1.0 - rng.random::<f64>());
    let s = linalg::scale_vec(&dir, (energy / linalg::norm_sqr(&dir)).sqrt());
    Design::new(rx, s)
}

fn draw(sc: &Scenario, seed: u64, index: usize) -> Result<Option<RegionSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let design = random_design(&mut rng, sc);
    if metrics::sinr(sc, &design)? < sc.rho_min * (1.0 - CONSTRAINT_SLACK) || design.check_budgets(sc).is_err() {
        return Ok(None);
    }
    let point = metrics::rate_point(sc, &design)?;
    Ok(Some(RegionSample { point, design }))
}

#[cfg(feature = "parallel")]
fn draw_batch(sc: &Scenario, seed: u64, range: std::ops::Range<usize>) -> Result<Vec<Option<RegionSample>>> {
    use rayon::prelude::*;
    range.into_par_iter().map(|i| draw(sc, seed, i)).collect()
}

#[cfg(not(feature = "parallel"))]
fn draw_batch(sc: &Scenario, seed: u64, range: std::ops::Range<usize>) -> Result<Vec<Option<RegionSample>>> {
    range.map(|i| draw(sc, seed, i)).collect()
}

/// Feasible random designs (each attempt uses its own RNG stream, so the
/// result does not depend on the thread count) plus the boundary over `betas`.
pub fn sample_region_with(sc: &Scenario, n_samples: usize, seed: u64, betas: &[f64]) -> Result<RegionEstimate> {
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be at least 1".into()));
    }
    let boundary = psi_curve(sc, betas)?;
    let budget = n_samples * OVERSAMPLING;
    let mut interior = Vec::with_capacity(n_samples);
    let mut attempts = 0;
    let batch = 256.max(n_samples);
    while interior.len() < n_samples && attempts < budget {
        let end = (attempts + batch).min(budget);
        for s in draw_batch(sc, seed, attempts..end)? {
            attempts += 1;
            if let Some(s) = s {
                interior.push(s);
                if interior.len() == n_samples {
                    break;
                }
            }
        }
    }
    let degenerate = interior.is_empty();
    Ok(RegionEstimate { boundary, interior, scenario: sc.clone(), seed, attempts, degenerate })
}

/// [`sample_region_with`] on a 101-point `beta` grid.
pub fn sample_region(sc: &Scenario, n_samples: usize, seed: u64) -> Result<RegionEstimate> {
    sample_region_with(sc, n_samples, seed, &beta_grid(101))
}

/// Maps a design to one with the waveform on the last coordinate and the same
/// coherent-model rates and SINR (white noise): `R -> U^H R U`, `s -> U^H s`
/// with `U` a unitary whose last column is `s / ||s||`.
pub fn align_to_last_coordinate(d: &Design) -> Design {
    let n = d.s.len();
    let e = linalg::norm(&d.s);
    if e == 0.0 {
        return d.clone();
    }
    let u = linalg::unitary_with_last_column(&linalg::scale_vec(&d.s, 1.0 / e));
    let uh = u.adjoint();
    let mut s = vec![linalg::C64::new(0.0, 0.0); n];
    s[n - 1] = linalg::C64::new(e, 0.0);
    Design::new(d.rx.congruence(&uh), s)
}

/// Shows every coherent-model sample is achievable under incoherent
/// interference: the aligned design is feasible and, since `S R_f S^H` then
/// coincides for both models, has the same rate pair. Returns the largest
/// rate deviation found.
pub fn coherent_in_incoherent(sc: &Scenario, samples: &[RegionSample]) -> Result<f64> {
    if !sc.is_white_noise() {
        return Err(Error::Unsupported("containment certificate assumes white radar noise".into()));
    }
    let inc = sc.clone().with_model(InterferenceModel::Incoherent);
    let coh = sc.clone().with_model(InterferenceModel::Coherent);
    let mut worst: f64 = 0.0;
    for s in samples {
        let coh_point = metrics::rate_point(&coh, &s.design)?;
        let aligned = align_to_last_coordinate(&s.design);
        if metrics::sinr(&inc, &aligned)? < inc.rho_min * (1.0 - CONSTRAINT_SLACK) {
            return Err(Error::InternalConsistency("aligned design lost SINR feasibility".into()));
        }
        let p = metrics::rate_point(&inc, &aligned)?;
        worst = worst.max((p.r0 - coh_point.r0).abs()).max((p.r1 - coh_point.r1).abs());
    }
    Ok(worst)
}

/// One probe of the white-versus-colored comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma1Probe {
    pub r0: f64,
    /// `R1` of the sampled white-noise design.
    pub r1_white: f64,
    /// `R1` after aligning the waveform with the weakest codebook direction.
    pub r1_aligned: f64,
    /// `R1` of the design rebuilt around the weakest eigenvector of `M`.
    pub r1_colored: f64,
    pub sinr_colored: f64,
    pub design: Design,
}

impl Lemma1Probe {
    pub fn margin(&self) -> f64 {
        self.r1_colored - self.r1_white
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub probes: Vec<Lemma1Probe>,
    pub min_margin: f64,
    pub mean_margin: f64,
    /// Largest `|R1'' - R1_hat|`, zero up to rounding.
    pub max_chain_gap: f64,
    /// Probes with `R1'' < R1' - 1e-9` or an infeasible rebuilt design.
    pub violations: Vec<Lemma1Probe>,
}

/// For random white-noise designs `(R', s')`, builds the colored-noise design
/// `s'' = sqrt(eps) v_N`, `R'' = U Gamma U^H` (`U` has last column `v_N`,
/// `Gamma` the spectrum of `R'`) and checks `R1'' >= R1'` at equal `R0`.
pub fn lemma1_check(sc_white: &Scenario, sc_colored: &Scenario, n_probes: usize, seed: u64) -> Result<Lemma1Report> {
    for sc in [sc_white, sc_colored] {
        if sc.interference != InterferenceModel::Coherent {
            return Err(Error::Unsupported("the white-noise comparison is stated for coherent interference".into()));
        }
    }
    if !sc_white.is_white_noise() {
        return Err(Error::Domain("first scenario must have white radar noise".into()));
    }
    if (sc_white.var_w() - sc_colored.var_w()).abs() > 1e-12 * sc_white.var_w() {
        return Err(Error::Domain("both scenarios must share the noise power on the diagonal".into()));
    }
    let (_phi, v_n) = linalg::min_eigpair(&sc_colored.noise)?;
    let u_star = linalg::unitary_with_last_column(&v_n);
    let region = sample_region_with(sc_white, n_probes, seed, &[])?;
    let mut probes = Vec::with_capacity(region.interior.len());
    for sample in &region.interior {
        let d = &sample.design;
        let eps = d.radar_energy();
        let ed = linalg::eigh(&d.rx)?;
        let u_n = ed.vector(sc_white.n - 1);
        let aligned = Design::new(d.rx.clone(), linalg::scale_vec(&u_n, eps.sqrt()));
        let spectrum: Vec<f64> = ed.values.iter().map(|x| x.max(0.0)).collect();
        let rebuilt = Design::new(HermitianMatrix::from_eigen(&u_star, &spectrum), linalg::scale_vec(&v_n, eps.sqrt()));
        probes.push(Lemma1Probe {
            r0: sample.point.r0,
            r1_white: sample.point.r1,
            r1_aligned: metrics::rate1(sc_white, &aligned)?,
            r1_colored: metrics::rate1(sc_colored, &rebuilt)?,
            sinr_colored: metrics::sinr(sc_colored, &rebuilt)?,
            design: d.clone(),
        });
    }
    let rho = sc_colored.rho_min;
    let violations: Vec<Lemma1Probe> = probes
        .iter()
        .filter(|p| p.margin() < -1e-9 || p.sinr_colored < rho * (1.0 - CONSTRAINT_SLACK))
        .cloned()
        .collect();
    let margins: Vec<f64> = probes.iter().map(|p| p.margin()).collect();
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_margin = if margins.is_empty() { 0.0 } else { margins.iter().sum::<f64>() / margins.len() as f64 };
    let max_chain_gap = probes.iter().map(|p| (p.r1_colored - p.r1_aligned).abs()).fold(0.0, f64::max);
    Ok(Lemma1Report { probes, min_margin, mean_margin, max_chain_gap, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{db_to_linear, DbSpec};

    fn fig11(model: InterferenceModel) -> Scenario {
        let mut spec = DbSpec::reference(2, 0.5);
        spec.rho_min_db = 5.0;
        spec.model = model;
        Scenario::from_db(&spec).unwrap()
    }

    #[test]
    fn psi_endpoints_and_models_agree() {
        let betas = beta_grid(21);
        let coh = psi_curve(&fig11(InterferenceModel::Coherent), &betas).unwrap();
        let inc = psi_curve(&fig11(InterferenceModel::Incoherent), &betas).unwrap();
        for ((_, a), (_, b)) in coh.iter().zip(&inc) {
            assert!((a.r0 - b.r0).abs() <= 1e-9 && (a.r1 - b.r1).abs() <= 1e-9);
        }
        let sc = fig11(InterferenceModel::Coherent);
        let zero = solve_joint(&sc.clone().with_beta(0.0)).unwrap();
        assert_eq!(coh[0].1, zero.rate_point());
        let one = solve_joint(&sc.with_beta(1.0)).unwrap();
        assert_eq!(coh[20].1, one.rate_point());
    }

    #[test]
    fn psi_rejects_bad_grid() {
        assert!(psi_curve(&fig11(InterferenceModel::Coherent), &[0.5, 0.2]).is_err());
        assert!(psi_curve(&fig11(InterferenceModel::Coherent).with_rho_min(1e3), &[0.5]).is_err());
    }

    #[test]
    fn samples_are_feasible_and_dominated() {
        let sc = fig11(InterferenceModel::Coherent);
        let est = sample_region_with(&sc, 300, 7, &beta_grid(26)).unwrap();
        assert_eq!(est.interior.len(), 300);
        assert!(!est.degenerate);
        for s in &est.interior {
            assert!(metrics::sinr(&sc, &s.design).unwrap() >= sc.rho_min * (1.0 - 1e-9));
            s.design.check_budgets(&sc).unwrap();
        }
        for (b, p) in &est.boundary {
            for s in &est.interior {
                assert!(p.weighted(*b) >= s.point.weighted(*b) - 1e-9);
                assert!(!(s.point.r0 > p.r0 + 1e-9 && s.point.r1 > p.r1 + 1e-9));
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let sc = fig11(InterferenceModel::Incoherent);
        let a = sample_region_with(&sc, 50, 3, &[]).unwrap();
        let b = sample_region_with(&sc, 50, 3, &[]).unwrap();
        assert_eq!(a.interior_points(), b.interior_points());
        let c = sample_region_with(&sc, 50, 4, &[]).unwrap();
        assert_ne!(a.interior_points(), c.interior_points());
    }

    #[test]
    fn coherent_region_inside_incoherent() {
        let sc = fig11(InterferenceModel::Coherent);
        let est = sample_region_with(&sc, 200, 11, &[]).unwrap();
        assert!(coherent_in_incoherent(&sc, &est.interior).unwrap() <= 1e-9);
    }

    #[test]
    fn degenerate_region_is_flagged() {
        // Feasible for the optimum, but random designs almost never reach the floor.
        let mut sc = fig11(InterferenceModel::Coherent);
        let rho_max = feasibility_joint(&sc).unwrap().rho_max;
        sc.rho_min = rho_max * (1.0 - 1e-12);
        let est = sample_region_with(&sc, 2, 1, &[]).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.attempts, 2 * OVERSAMPLING);
    }

    #[test]
    fn lemma1_holds_for_correlated_noise() {
        let mut spec = DbSpec::reference(4, 0.5);
        spec.inr_db = -10.0;
        let white = Scenario::from_db(&spec).unwrap();
        let colored = white.clone().with_exp_corr_noise(0.5).unwrap();
        let rep = lemma1_check(&white, &colored, 50, 2).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep.min_margin >= -1e-9);
        assert!(rep.max_chain_gap <= 1e-9);
        assert!(rep.mean_margin > 0.0);
    }

    #[test]
    fn lemma1_with_white_input_has_zero_chain_gap() {
        let white = fig11(InterferenceModel::Coherent);
        let rep = lemma1_check(&white, &white.clone(), 30, 5).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep.max_chain_gap <= 1e-9);
    }

    #[test]
    fn lemma1_scalar_chain_for_white_codebook() {
        // R' = P_c I: every direction is weakest, so R1'' = R0 - (1/N) log2((1 + f e)/(1 + f e/(1 + c P_c))).
        let mut sc = fig11(InterferenceModel::Coherent);
        sc.rho_min = db_to_linear(0.0);
        let colored = sc.clone().with_exp_corr_noise(0.5).unwrap();
        let (_, v) = linalg::min_eigpair(&colored.noise).unwrap();
        let e: f64 = 20.0;
        let rebuilt = Design::new(HermitianMatrix::scaled_identity(2, sc.p_c), linalg::scale_vec(&v, e.sqrt()));
        let r0 = 11f64.log2();
        let f = sc.var_f;
        let expected = r0 - 0.5 * ((1.0 + f * e) / (1.0 + f * e / 11.0)).log2();
        assert!((metrics::rate1(&colored, &rebuilt).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn region_scale_invariance() {
        // Scaling the comm noise, codebook power and interference together
        // (radar-side interference held fixed) leaves the boundary unchanged.
        let sc = fig11(InterferenceModel::Coherent);
        let mut scaled = sc.clone();
        scaled.var_v *= 2.0;
        scaled.p_c *= 2.0;
        scaled.var_f *= 2.0;
        scaled.var_g /= 2.0;
        let a = psi_curve(&sc, &beta_grid(11)).unwrap();
        let b = psi_curve(&scaled, &beta_grid(11)).unwrap();
        for ((_, p), (_, q)) in a.iter().zip(&b) {
            assert!((p.r0 - q.r0).abs() <= 1e-9 && (p.r1 - q.r1).abs() <= 1e-9);
        }
    }
}
