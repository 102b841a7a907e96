//! Physical parameters of the coexistence scenario and the design variables.
//!
//! The library works in linear units throughout. [`Scenario::from_db`] is the
//! single place where dB-domain inputs are converted, using the normalization
//! `sigma_v^2 = sigma_w^2 = sigma_a^2 = |h|^2 = sigma_g^2 = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix, C64};
use crate::metrics;

/// Relative slack allowed on the power and SINR constraints.
pub const CONSTRAINT_SLACK: f64 = 1e-9;

/// Detection probability and false-alarm rate used to calibrate the radar.
pub const REFERENCE_PD: f64 = 0.9;
pub const REFERENCE_PFA: f64 = 1e-4;

/// Covariance structure of the radar echoes seen by the communication receiver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum InterferenceModel {
    /// Fixed-phase reflectors: `R_f = sigma_f^2 * 1 1^T` (rank one).
    Coherent,
    /// Scintillating reflectors: `R_f = sigma_f^2 * I`.
    Incoherent,
    /// Arbitrary PSD `R_f` with constant diagonal `sigma_f^2`.
    General(HermitianMatrix),
}

impl InterferenceModel {
    pub fn covariance(&self, n: usize, var_f: f64) -> HermitianMatrix {
        match self {
            InterferenceModel::Coherent => HermitianMatrix::all_ones(n, var_f),
            InterferenceModel::Incoherent => HermitianMatrix::scaled_identity(n, var_f),
            InterferenceModel::General(rf) => rf.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InterferenceModel::Coherent => "coherent",
            InterferenceModel::Incoherent => "incoherent",
            InterferenceModel::General(_) => "general",
        }
    }
}

/// All physical parameters, in linear power units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Number of pulses (and codeword length).
    pub n: usize,
    /// Target echo variance `sigma_a^2`.
    pub var_a: f64,
    /// Clutter variance `sigma_c^2`.
    pub var_c: f64,
    /// Comm-to-radar coupling variance `sigma_g^2`.
    pub var_g: f64,
    /// Scattered radar power at the comm receiver `sigma_f^2`.
    pub var_f: f64,
    /// Comm receiver noise `sigma_v^2`.
    pub var_v: f64,
    /// Comm channel power gain `|h|^2`.
    pub h2: f64,
    /// Radar average power per pulse.
    pub p_r: f64,
    /// Comm average power per symbol.
    pub p_c: f64,
    pub rho_min: f64,
    /// Interference weight used by the compound rate.
    pub beta: f64,
    /// Probability that a channel is interfered.
    pub alpha: f64,
    /// Radar noise covariance `M`, constant diagonal `sigma_w^2`.
    pub noise: HermitianMatrix,
    pub interference: InterferenceModel,
    pub papr_delta: Option<f64>,
}

/// dB-domain description of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbSpec {
    /// `|h|^2 P_c / sigma_v^2`.
    pub snr_comm_db: f64,
    /// `sigma_f^2 / sigma_v^2`.
    pub inr_db: f64,
    /// `sigma_a^2 / sigma_c^2`.
    pub scr_db: f64,
    pub rho_min_db: f64,
    /// `N P_r sigma_a^2 / sigma_w^2`.
    pub cum_radar_snr_db: f64,
    pub n: usize,
    pub beta: f64,
    pub alpha: f64,
    pub model: InterferenceModel,
}

impl DbSpec {
    /// The reference scenario: 10 dB comm SNR, 10 dB INR, 20 dB SCR,
    /// 10 dB minimum SINR, radar calibrated for (Pd, Pfa) = (0.9, 1e-4).
    pub fn reference(n: usize, beta: f64) -> Self {
        DbSpec {
            snr_comm_db: 10.0,
            inr_db: 10.0,
            scr_db: 20.0,
            rho_min_db: 10.0,
            cum_radar_snr_db: default_cum_radar_snr_db(),
            n,
            beta,
            alpha: beta,
            model: InterferenceModel::Coherent,
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Cumulated SNR `N P_r sigma_a^2 / sigma_w^2` at which a Swerling-I target is
/// detected with probability `pd` at false-alarm rate `pfa`, from
/// `pd = pfa^(1 / (1 + snr))`.
pub fn swerling1_required_snr(pd: f64, pfa: f64) -> Result<f64> {
    if !(pfa > 0.0 && pfa < 1.0 && pd > 0.0 && pd < 1.0) {
        return Err(Error::Domain(format!("probabilities must lie in (0, 1): pd={pd}, pfa={pfa}")));
    }
    if pd <= pfa {
        return Err(Error::Domain(format!("pd ({pd}) must exceed pfa ({pfa})")));
    }
    Ok(pfa.ln() / pd.ln() - 1.0)
}

/// Default cumulated radar SNR in dB (about 19.37 dB).
pub fn default_cum_radar_snr_db() -> f64 {
    linear_to_db(swerling1_required_snr(REFERENCE_PD, REFERENCE_PFA).expect("valid reference"))
}

impl Scenario {
    pub fn from_db(spec: &DbSpec) -> Result<Self> {
        let finite = [
            spec.snr_comm_db,
            spec.inr_db,
            spec.scr_db,
            spec.rho_min_db,
            spec.cum_radar_snr_db,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("dB inputs must be finite".into()));
        }
        if spec.n < 2 {
            return Err(Error::Domain(format!("N must be at least 2, got {}", spec.n)));
        }
        let (var_v, var_w, var_a, h2, var_g) = (1.0, 1.0, 1.0, 1.0, 1.0);
        let n = spec.n;
        let sc = Scenario {
            n,
            var_a,
            var_c: var_a / db_to_linear(spec.scr_db),
            var_g,
            var_f: var_v * db_to_linear(spec.inr_db),
            var_v,
            h2,
            p_r: var_w * db_to_linear(spec.cum_radar_snr_db) / (var_a * n as f64),
            p_c: var_v * db_to_linear(spec.snr_comm_db) / h2,
            rho_min: db_to_linear(spec.rho_min_db),
            beta: spec.beta,
            alpha: spec.alpha,
            noise: HermitianMatrix::scaled_identity(n, var_w),
            interference: spec.model.clone(),
            papr_delta: None,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Recovers the dB-domain ratios.
    pub fn to_db(&self) -> DbSpec {
        DbSpec {
            snr_comm_db: linear_to_db(self.h2 * self.p_c / self.var_v),
            inr_db: linear_to_db(self.var_f / self.var_v),
            scr_db: linear_to_db(self.var_a / self.var_c),
            rho_min_db: linear_to_db(self.rho_min),
            cum_radar_snr_db: linear_to_db(
                self.n as f64 * self.p_r * self.var_a / self.var_w(),
            ),
            n: self.n,
            beta: self.beta,
            alpha: self.alpha,
            model: self.interference.clone(),
        }
    }

    /// Replaces the radar noise covariance, keeping everything else.
    pub fn with_noise(mut self, noise: HermitianMatrix) -> Result<Self> {
        self.noise = noise;
        self.validate()?;
        Ok(self)
    }

    /// Exponentially correlated radar noise `sigma_w^2 r^|i-j|`.
    pub fn with_exp_corr_noise(self, r: f64) -> Result<Self> {
        let noise = HermitianMatrix::exp_corr(self.n, self.var_w(), r);
        self.with_noise(noise)
    }

    pub fn with_model(mut self, model: InterferenceModel) -> Self {
        self.interference = model;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_rho_min(mut self, rho_min: f64) -> Self {
        self.rho_min = rho_min;
        self
    }

    pub fn with_papr(mut self, delta: f64) -> Self {
        self.papr_delta = Some(delta);
        self
    }

    /// Radar noise power `sigma_w^2`, the common diagonal of `M`.
    pub fn var_w(&self) -> f64 {
        self.noise.matrix()[(0, 0)].re
    }

    /// Total radar energy budget `N P_r`.
    pub fn radar_energy(&self) -> f64 {
        self.n as f64 * self.p_r
    }

    /// Total comm energy budget `N P_c`.
    pub fn comm_energy(&self) -> f64 {
        self.n as f64 * self.p_c
    }

    pub fn is_white_noise(&self) -> bool {
        self.noise.is_scaled_identity(1e-12)
    }

    pub fn interference_covariance(&self) -> HermitianMatrix {
        self.interference.covariance(self.n, self.var_f)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::validation("n", format!("must be at least 2, got {n}")));
        }
        let nonneg = [
            ("var_a", self.var_a),
            ("var_c", self.var_c),
            ("var_g", self.var_g),
            ("var_f", self.var_f),
        ];
        for (field, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::validation(field, format!("must be finite and >= 0, got {v}")));
            }
        }
        let positive = [
            ("var_v", self.var_v),
            ("h2", self.h2),
            ("p_r", self.p_r),
            ("p_c", self.p_c),
            ("rho_min", self.rho_min),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(field, format!("must be finite and > 0, got {v}")));
            }
        }
        for (field, v) in [("beta", self.beta), ("alpha", self.alpha)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(field, format!("must lie in [0, 1], got {v}")));
            }
        }

        if self.noise.dim() != n {
            return Err(Error::validation(
                "noise",
                format!("dimension {} does not match N = {n}", self.noise.dim()),
            ));
        }
        let diag = self.noise.diag_real();
        let w = diag[0];
        if !(w > 0.0) || diag.iter().any(|d| (d - w).abs() > 1e-9 * w.abs()) {
            return Err(Error::validation("noise", "diagonal must be a constant sigma_w^2 > 0"));
        }
        let (phi, _) = linalg::min_eigpair(&self.noise)
            .map_err(|e| Error::validation("noise", e.to_string()))?;
        if !(phi > 1e-12 * w) {
            return Err(Error::validation("noise", format!("must be positive definite (min eigenvalue {phi:.3e})")));
        }

        if let InterferenceModel::General(rf) = &self.interference {
            if rf.dim() != n {
                return Err(Error::validation(
                    "interference",
                    format!("R_f dimension {} does not match N = {n}", rf.dim()),
                ));
            }
            if rf.diag_real().iter().any(|d| (d - self.var_f).abs() > 1e-9 * self.var_f.max(1e-300)) {
                return Err(Error::validation("interference", "R_f diagonal must equal var_f"));
            }
            linalg::check_psd(rf).map_err(|e| Error::validation("interference", e.to_string()))?;
        }

        if let Some(delta) = self.papr_delta {
            if !(delta >= 1.0 && delta <= n as f64) {
                return Err(Error::validation("papr_delta", format!("must lie in [1, {n}], got {delta}")));
            }
        }
        Ok(())
    }
}

/// Design variables: codeword covariance `R_x` and radar amplitudes `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub rx: HermitianMatrix,
    pub s: Vec<C64>,
}

impl Design {
    pub fn new(rx: HermitianMatrix, s: Vec<C64>) -> Self {
        Design { rx, s }
    }

    pub fn radar_energy(&self) -> f64 {
        linalg::norm_sqr(&self.s)
    }

    /// Checks the power budgets and PSD-ness of `R_x`.
    pub fn check_budgets(&self, sc: &Scenario) -> Result<()> {
        let n = sc.n as f64;
        if self.rx.dim() != sc.n || self.s.len() != sc.n {
            return Err(Error::Domain("design dimension does not match scenario".into()));
        }
        if self.rx.trace() / n > sc.p_c * (1.0 + CONSTRAINT_SLACK) {
            return Err(Error::Domain(format!(
                "comm power {:.6} exceeds P_c = {:.6}",
                self.rx.trace() / n,
                sc.p_c
            )));
        }
        if self.radar_energy() / n > sc.p_r * (1.0 + CONSTRAINT_SLACK) {
            return Err(Error::Domain(format!(
                "radar power {:.6} exceeds P_r = {:.6}",
                self.radar_energy() / n,
                sc.p_r
            )));
        }
        linalg::check_psd(&self.rx)
    }
}

/// Which solver produced a design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverTag {
    FixedCodebook,
    FixedWaveform,
    Joint,
    Colored,
    PaprNaif,
    PaprExact,
    Disjoint,
    Orthogonal,
}

impl SolverTag {
    pub const ALL: [SolverTag; 8] = [
        SolverTag::FixedCodebook,
        SolverTag::FixedWaveform,
        SolverTag::Joint,
        SolverTag::Colored,
        SolverTag::PaprNaif,
        SolverTag::PaprExact,
        SolverTag::Disjoint,
        SolverTag::Orthogonal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::FixedCodebook => "fixed_codebook",
            SolverTag::FixedWaveform => "fixed_waveform",
            SolverTag::Joint => "joint",
            SolverTag::Colored => "colored",
            SolverTag::PaprNaif => "papr_naif",
            SolverTag::PaprExact => "papr_exact",
            SolverTag::Disjoint => "disjoint",
            SolverTag::Orthogonal => "orthogonal",
        }
    }
}

impl std::str::FromStr for SolverTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SolverTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown solver `{s}`")))
    }
}

impl std::fmt::Display for SolverTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A design together with every figure of merit evaluated on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignOutcome {
    pub design: Design,
    /// Smallest eigenvalue of `R_x`: comm power conceded to the radar direction.
    pub gamma_n_star: f64,
    /// Radar energy `||s||^2`.
    pub epsilon_star: f64,
    pub r0: f64,
    pub r1: f64,
    /// Compound rate weighted by `beta`, the objective the solvers maximize.
    pub cr: f64,
    /// Compound rate at the actual interference probability `alpha`.
    pub cr_alpha: f64,
    pub sinr: f64,
    pub feasible: bool,
    pub solver: SolverTag,
}

impl DesignOutcome {
    /// Evaluates `design` on `sc`. Feasibility covers the SINR and power constraints.
    pub fn evaluate(sc: &Scenario, design: Design, gamma_n_star: f64, solver: SolverTag) -> Result<Self> {
        let r0 = metrics::rate0(sc, &design.rx)?;
        let r1 = metrics::rate1(sc, &design)?;
        let sinr = metrics::sinr(sc, &design)?;
        let feasible = sinr >= sc.rho_min * (1.0 - CONSTRAINT_SLACK) && design.check_budgets(sc).is_ok();
        Ok(DesignOutcome {
            epsilon_star: design.radar_energy(),
            design,
            gamma_n_star,
            r0,
            r1,
            cr: sc.beta * r1 + (1.0 - sc.beta) * r0,
            cr_alpha: sc.alpha * r1 + (1.0 - sc.alpha) * r0,
            sinr,
            feasible,
            solver,
        })
    }

    pub fn rate_point(&self) -> metrics::RatePoint {
        metrics::RatePoint { r0: self.r0, r1: self.r1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_calibration() {
        let sc = Scenario::from_db(&DbSpec::reference(8, 0.5)).unwrap();
        assert_relative_eq!(sc.p_c, 10.0, epsilon = 1e-12);
        assert_relative_eq!(sc.var_f, 10.0, epsilon = 1e-12);
        assert_relative_eq!(sc.var_c, 0.01, epsilon = 1e-15);
        assert_relative_eq!(sc.rho_min, 10.0, epsilon = 1e-12);
        let expected = (1e-4f64).ln() / 0.9f64.ln() - 1.0;
        assert_relative_eq!(sc.radar_energy(), expected, max_relative = 1e-12);
        assert!(sc.is_white_noise());
    }

    #[test]
    fn cumulated_snr_conversion() {
        let mut spec = DbSpec::reference(8, 0.5);
        spec.cum_radar_snr_db = 19.416;
        let sc = Scenario::from_db(&spec).unwrap();
        assert!((sc.radar_energy() - 87.42).abs() < 0.01);
    }

    #[test]
    fn swerling_examples() {
        assert_relative_eq!(swerling1_required_snr(0.5, 0.25).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(swerling1_required_snr(0.5, 0.5f64.powi(10)).unwrap(), 9.0, epsilon = 1e-12);
        let snr = swerling1_required_snr(0.9, 1e-4).unwrap();
        assert!((snr - 86.418).abs() < 1e-3);
        assert!(swerling1_required_snr(0.1, 0.2).is_err());
    }

    #[test]
    fn db_round_trip() {
        let mut spec = DbSpec::reference(4, 0.3);
        spec.inr_db = -7.5;
        spec.scr_db = 13.0;
        spec.alpha = 0.2;
        let back = Scenario::from_db(&spec).unwrap().to_db();
        for (a, b) in [
            (back.snr_comm_db, spec.snr_comm_db),
            (back.inr_db, spec.inr_db),
            (back.scr_db, spec.scr_db),
            (back.rho_min_db, spec.rho_min_db),
            (back.cum_radar_snr_db, spec.cum_radar_snr_db),
        ] {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_small_n() {
        let spec = DbSpec::reference(1, 0.5);
        assert!(matches!(Scenario::from_db(&spec), Err(Error::Domain(_))));
    }

    #[test]
    fn validate_names_bad_fields() {
        let sc = Scenario::from_db(&DbSpec::reference(3, 0.5)).unwrap();
        assert!(sc.validate().is_ok());

        let bad_noise = HermitianMatrix::from_diag(&[1.0, 2.0, 1.0]);
        match sc.clone().with_noise(bad_noise) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "noise"),
            other => panic!("unexpected {other:?}"),
        }
        match sc.clone().with_papr(0.5).validate() {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "papr_delta"),
            other => panic!("unexpected {other:?}"),
        }
        match sc.clone().with_beta(1.5).validate() {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "beta"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solver_tags_parse() {
        for tag in SolverTag::ALL {
            assert_eq!(tag.as_str().parse::<SolverTag>().unwrap(), tag);
        }
        assert!("nope".parse::<SolverTag>().is_err());
    }
}
