//! TOML configuration: a dB-domain scenario with optional noise and
//! interference overrides, plus per-command sections.
//!
//! ```toml
//! [scenario]
//! n = 8
//! beta = 0.5
//! inr_db = 10
//! model = "coherent"
//!
//! [noise]
//! exp_corr = 0.5
//!
//! [sweep]
//! axis = "rho_min_db"
//! values = [0, 5, 10, 15]
//! solvers = ["joint", "disjoint"]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianMatrix, C64};
use crate::scenario::{default_cum_radar_snr_db, DbSpec, InterferenceModel, Scenario, SolverTag};

fn default_snr() -> f64 {
    10.0
}
fn default_inr() -> f64 {
    10.0
}
fn default_scr() -> f64 {
    20.0
}
fn default_rho() -> f64 {
    10.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Coherent,
    Incoherent,
}

impl ModelName {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Coherent => "coherent",
            ModelName::Incoherent => "incoherent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub n: usize,
    pub beta: f64,
    /// Defaults to `beta`.
    pub alpha: Option<f64>,
    #[serde(default = "default_snr")]
    pub snr_comm_db: f64,
    #[serde(default = "default_inr")]
    pub inr_db: f64,
    #[serde(default = "default_scr")]
    pub scr_db: f64,
    #[serde(default = "default_rho")]
    pub rho_min_db: f64,
    /// Defaults to the Swerling-I requirement for `Pd = 0.9`, `Pfa = 1e-4`.
    pub cum_radar_snr_db: Option<f64>,
    #[serde(default = "coherent")]
    pub model: ModelName,
    pub papr_delta: Option<f64>,
}

fn coherent() -> ModelName {
    ModelName::Coherent
}

/// Unit-diagonal Hermitian matrix from real and (optional) imaginary row lists.
fn correlation_matrix(real: &[Vec<f64>], imag: Option<&Vec<Vec<f64>>>, n: usize, what: &str) -> Result<HermitianMatrix> {
    let shape_ok = |m: &[Vec<f64>]| m.len() == n && m.iter().all(|r| r.len() == n);
    if !shape_ok(real) || imag.is_some_and(|m| !shape_ok(m)) {
        return Err(Error::Config(format!("{what} must be {n}x{n}")));
    }
    let m = CMatrix::from_fn(n, |i, j| C64::new(real[i][j], imag.map_or(0.0, |m| m[i][j])));
    if m.hermitian_defect() > 1e-9 * m.frobenius_norm().max(1.0) {
        return Err(Error::Config(format!("{what} is not Hermitian")));
    }
    if (0..n).any(|i| (m[(i, i)].re - 1.0).abs() > 1e-9) {
        return Err(Error::Config(format!("{what} must have a unit diagonal (it is scaled by the noise power)")));
    }
    Ok(HermitianMatrix::new(m))
}

/// Radar noise correlation, either `exp_corr` or dense `real`/`imag` rows;
/// the noise power stays normalized to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    /// `M_ij = r^|i-j|`.
    pub exp_corr: Option<f64>,
    pub real: Option<Vec<Vec<f64>>>,
    pub imag: Option<Vec<Vec<f64>>>,
}

/// Interference correlation `R_f / sigma_f^2`, replacing the named model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferenceSection {
    pub real: Vec<Vec<f64>>,
    pub imag: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    #[serde(default = "joint")]
    pub solver: SolverTag,
}

fn joint() -> SolverTag {
    SolverTag::Joint
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "rho_min_db")]
    RhoMinDb,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "inr_db")]
    InrDb,
    #[serde(rename = "N", alias = "n")]
    N,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "alpha")]
    Alpha,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::RhoMinDb => "rho_min_db",
            SweepAxis::Beta => "beta",
            SweepAxis::InrDb => "inr_db",
            SweepAxis::N => "N",
            SweepAxis::Delta => "delta",
            SweepAxis::Alpha => "alpha",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    #[serde(default = "joint_only")]
    pub solvers: Vec<SolverTag>,
    pub out: Option<String>,
    pub svg: Option<String>,
}

fn joint_only() -> Vec<SolverTag> {
    vec![SolverTag::Joint]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_betas")]
    pub betas: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "both_models")]
    pub models: Vec<ModelName>,
}

fn default_samples() -> usize {
    2000
}
fn default_betas() -> usize {
    101
}
fn default_seed() -> u64 {
    42
}
fn both_models() -> Vec<ModelName> {
    vec![ModelName::Coherent, ModelName::Incoherent]
}

impl Default for RegionSection {
    fn default() -> Self {
        RegionSection { samples: default_samples(), betas: default_betas(), seed: default_seed(), models: both_models() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "joint")]
    pub solver: SolverTag,
}

fn default_trials() -> usize {
    100_000
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection { trials: default_trials(), seed: default_seed(), solver: SolverTag::Joint }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scenario: ScenarioSection,
    pub noise: Option<NoiseSection>,
    pub interference: Option<InterferenceSection>,
    pub solve: Option<SolveSection>,
    pub sweep: Option<SweepSection>,
    pub region: Option<RegionSection>,
    pub verify: Option<VerifySection>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.scenario()?;
        if let Some(sw) = &cfg.sweep {
            cfg.check_sweep(sw)?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn db_spec(&self) -> DbSpec {
        let s = &self.scenario;
        DbSpec {
            snr_comm_db: s.snr_comm_db,
            inr_db: s.inr_db,
            scr_db: s.scr_db,
            rho_min_db: s.rho_min_db,
            cum_radar_snr_db: s.cum_radar_snr_db.unwrap_or_else(default_cum_radar_snr_db),
            n: s.n,
            beta: s.beta,
            alpha: s.alpha.unwrap_or(s.beta),
            model: match s.model {
                ModelName::Coherent => InterferenceModel::Coherent,
                ModelName::Incoherent => InterferenceModel::Incoherent,
            },
        }
    }

    /// The configured scenario in linear units, overrides applied.
    pub fn scenario(&self) -> Result<Scenario> {
        let spec = self.db_spec();
        let n = spec.n;
        let mut sc = Scenario::from_db(&spec)?;
        if let Some(noise) = &self.noise {
            if noise.imag.is_some() && noise.real.is_none() {
                return Err(Error::Config("noise.imag needs noise.real".into()));
            }
            sc = match (noise.exp_corr, &noise.real) {
                (Some(r), None) => {
                    if !(r.abs() < 1.0) {
                        return Err(Error::Config(format!("noise.exp_corr must lie in (-1, 1), got {r}")));
                    }
                    sc.with_exp_corr_noise(r)?
                }
                (None, Some(re)) => {
                    let m = correlation_matrix(re, noise.imag.as_ref(), n, "noise")?;
                    let w = sc.var_w();
                    sc.with_noise(m.scale(w))?
                }
                _ => return Err(Error::Config("[noise] needs exactly one of exp_corr or real/imag entries".into())),
            };
        }
        if let Some(inter) = &self.interference {
            let rf = correlation_matrix(&inter.real, inter.imag.as_ref(), n, "interference")?.scale(sc.var_f);
            sc = sc.with_model(InterferenceModel::General(rf));
        }
        if let Some(delta) = self.scenario.papr_delta {
            sc = sc.with_papr(delta);
        }
        sc.validate()?;
        Ok(sc)
    }

    /// This configuration with the sweep axis set to `value`.
    pub fn with_axis(&self, axis: SweepAxis, value: f64) -> Result<Config> {
        let mut cfg = self.clone();
        let s = &mut cfg.scenario;
        match axis {
            SweepAxis::RhoMinDb => s.rho_min_db = value,
            SweepAxis::InrDb => s.inr_db = value,
            SweepAxis::Beta => {
                // An unset alpha tracks beta.
                s.beta = value;
            }
            SweepAxis::Alpha => s.alpha = Some(value),
            SweepAxis::Delta => s.papr_delta = Some(value),
            SweepAxis::N => {
                if !(value.fract() == 0.0 && value >= 2.0) {
                    return Err(Error::Config(format!("N values must be integers >= 2, got {value}")));
                }
                s.n = value as usize;
            }
        }
        Ok(cfg)
    }

    fn check_sweep(&self, sw: &SweepSection) -> Result<()> {
        if sw.values.is_empty() {
            return Err(Error::Config("sweep.values is empty".into()));
        }
        if sw.solvers.is_empty() {
            return Err(Error::Config("sweep.solvers is empty".into()));
        }
        let up = sw.values.windows(2).all(|w| w[1] > w[0]);
        let down = sw.values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::Config("sweep.values must be strictly monotone".into()));
        }
        if sw.axis == SweepAxis::N && self.noise.as_ref().is_some_and(|n| n.real.is_some()) {
            return Err(Error::Config("an N sweep cannot use a dense noise matrix".into()));
        }
        if sw.axis == SweepAxis::N && self.interference.is_some() {
            return Err(Error::Config("an N sweep cannot use a dense interference matrix".into()));
        }
        for &v in &sw.values {
            self.with_axis(sw.axis, v)?.scenario()?;
        }
        Ok(())
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let sw = self.sweep.as_ref().ok_or_else(|| Error::Config("missing [sweep] section".into()))?;
        self.check_sweep(sw)?;
        Ok(SweepSpec {
            axis: sw.axis,
            values: sw.values.clone(),
            solvers: sw.solvers.clone(),
            base: self.clone(),
            out: sw.out.clone(),
            svg: sw.svg.clone(),
        })
    }

    pub fn solver(&self) -> SolverTag {
        self.solve.as_ref().map_or(SolverTag::Joint, |s| s.solver)
    }
}

/// A validated parameter sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub solvers: Vec<SolverTag>,
    pub base: Config,
    pub out: Option<String>,
    pub svg: Option<String>,
}

impl SweepSpec {
    pub fn scenario_at(&self, index: usize) -> Result<Scenario> {
        self.base.with_axis(self.axis, self.values[index])?.scenario()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::db_to_linear;

    const BASIC: &str = "[scenario]\nn = 8\nbeta = 0.5\n";

    #[test]
    fn defaults_give_reference_scenario() {
        let cfg = Config::parse(BASIC).unwrap();
        assert_eq!(cfg.scenario().unwrap(), Scenario::from_db(&DbSpec::reference(8, 0.5)).unwrap());
        assert_eq!(cfg.solver(), SolverTag::Joint);
    }

    #[test]
    fn noise_overrides() {
        let cfg = Config::parse(&format!("{BASIC}[noise]\nexp_corr = 0.5\n")).unwrap();
        let sc = cfg.scenario().unwrap();
        assert!((sc.noise.matrix()[(0, 2)].re - 0.25).abs() < 1e-15);
        let dense = "[scenario]\nn = 2\nbeta = 0.1\n[noise]\nreal = [[1, 0.3], [0.3, 1]]\nimag = [[0, 0.1], [-0.1, 0]]\n";
        let sc = Config::parse(dense).unwrap().scenario().unwrap();
        assert_eq!(sc.noise.matrix()[(0, 1)], C64::new(0.3, 0.1));
        let both = format!("{BASIC}[noise]\nexp_corr = 0.5\nreal = [[1]]\n");
        assert!(matches!(Config::parse(&both), Err(Error::Config(_))));
        let not_herm = "[scenario]\nn = 2\nbeta = 0.1\n[noise]\nreal = [[1, 0.3], [0.2, 1]]\n";
        assert!(Config::parse(not_herm).is_err());
    }

    #[test]
    fn interference_override_is_scaled() {
        let text = "[scenario]\nn = 2\nbeta = 0.1\ninr_db = 0\n[interference]\nreal = [[1, 0.5], [0.5, 1]]\n";
        let sc = Config::parse(text).unwrap().scenario().unwrap();
        match sc.interference {
            InterferenceModel::General(rf) => assert!((rf.matrix()[(0, 1)].re - 0.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_spec_and_axis() {
        let text = format!("{BASIC}[sweep]\naxis = \"rho_min_db\"\nvalues = [0, 5, 10]\nsolvers = [\"joint\", \"disjoint\"]\n");
        let spec = Config::parse(&text).unwrap().sweep_spec().unwrap();
        assert_eq!(spec.solvers, vec![SolverTag::Joint, SolverTag::Disjoint]);
        assert!((spec.scenario_at(1).unwrap().rho_min - db_to_linear(5.0)).abs() < 1e-12);

        let n_sweep = format!("{BASIC}[sweep]\naxis = \"N\"\nvalues = [2, 4, 8]\n");
        let spec = Config::parse(&n_sweep).unwrap().sweep_spec().unwrap();
        assert_eq!(spec.scenario_at(2).unwrap().n, 8);
        assert_eq!(spec.solvers, vec![SolverTag::Joint]);

        let beta = format!("{BASIC}[sweep]\naxis = \"beta\"\nvalues = [0.1, 0.9]\n");
        let sc = Config::parse(&beta).unwrap().sweep_spec().unwrap().scenario_at(1).unwrap();
        assert_eq!((sc.beta, sc.alpha), (0.9, 0.9));
    }

    #[test]
    fn config_errors() {
        let bad = [
            "",
            "[scenario]\nn = 8\n",
            "[scenario]\nn = 1\nbeta = 0.5\n",
            "[scenario]\nn = 8\nbeta = 0.5\ncolour = 1\n",
            "[scenario]\nn = 8\nbeta = 1.5\n",
            "[scenario]\nn = 8\nbeta = 0.5\nmodel = \"fuzzy\"\n",
            "[scenario]\nn = 8\nbeta = 0.5\n[sweep]\naxis = \"beta\"\nvalues = [0.1, 0.5, 0.3]\n",
            "[scenario]\nn = 8\nbeta = 0.5\n[sweep]\naxis = \"N\"\nvalues = [2.5, 4]\n",
            "[scenario]\nn = 8\nbeta = 0.5\n[sweep]\naxis = \"gain\"\nvalues = [1]\n",
            "[scenario]\nn = 8\nbeta = 0.5\n[sweep]\naxis = \"beta\"\nvalues = []\n",
            "[scenario]\nn = 8\nbeta = 0.5\n[noise]\nexp_corr = 1.0\n",
            "[scenario]\nn = 8\nbeta = 0.5\npapr_delta = 9\n",
        ];
        for text in bad {
            assert!(Config::parse(text).is_err(), "accepted: {text}");
        }
    }

    #[test]
    fn section_defaults() {
        let text = format!("{BASIC}[region]\n[verify]\ntrials = 5000\n");
        let cfg = Config::parse(&text).unwrap();
        assert_eq!(cfg.region.unwrap(), RegionSection::default());
        let v = cfg.verify.unwrap();
        assert_eq!((v.trials, v.seed), (5000, 42));
    }
}
