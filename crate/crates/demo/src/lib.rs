//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export has a plain Rust counterpart so it can be tested natively.
//! Curves cross the boundary as flat `Float64Array`s.

use coexist::scenario::{db_to_linear, linear_to_db, DbSpec, InterferenceModel, Scenario};
use coexist::{region, solvers, Error};
use wasm_bindgen::prelude::*;

/// Slider settings shared by every operation.
#[wasm_bindgen]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub n: usize,
    pub beta: f64,
    pub inr_db: f64,
    pub scr_db: f64,
    pub rho_min_db: f64,
    pub incoherent: bool,
    /// Radar noise correlation `r` in `r^|i-j|`; zero means white.
    pub noise_corr: f64,
}

#[wasm_bindgen]
impl Params {
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, beta: f64, inr_db: f64, scr_db: f64, rho_min_db: f64, incoherent: bool, noise_corr: f64) -> Params {
        Params { n, beta, inr_db, scr_db, rho_min_db, incoherent, noise_corr }
    }
}

impl Params {
    pub fn scenario(&self) -> Result<Scenario, Error> {
        let mut spec = DbSpec::reference(self.n, self.beta);
        spec.inr_db = self.inr_db;
        spec.scr_db = self.scr_db;
        spec.rho_min_db = self.rho_min_db;
        spec.model = if self.incoherent { InterferenceModel::Incoherent } else { InterferenceModel::Coherent };
        let sc = Scenario::from_db(&spec)?;
        if self.noise_corr == 0.0 {
            Ok(sc)
        } else {
            sc.with_exp_corr_noise(self.noise_corr)
        }
    }
}

/// Optimal joint design at the current settings.
#[wasm_bindgen]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solution {
    pub feasible: bool,
    pub rho_max_db: f64,
    pub r0: f64,
    pub r1: f64,
    pub cr: f64,
    pub sinr_db: f64,
    pub gamma_n: f64,
    pub epsilon: f64,
}

/// Picks the colored-noise solver when needed; infeasibility is a normal result.
pub fn solve_params(p: &Params) -> Result<Solution, Error> {
    let sc = p.scenario()?;
    let rho_max_db = linear_to_db(solvers::feasibility_joint(&sc)?.rho_max);
    let solver = if sc.is_white_noise() { solvers::solve_joint } else { solvers::solve_colored_joint };
    match solver(&sc) {
        Ok(o) if o.feasible => Ok(Solution {
            feasible: true,
            rho_max_db,
            r0: o.r0,
            r1: o.r1,
            cr: o.cr,
            sinr_db: linear_to_db(o.sinr),
            gamma_n: o.gamma_n_star,
            epsilon: o.epsilon_star,
        }),
        Ok(_) | Err(Error::Infeasible { .. }) => Ok(Solution {
            feasible: false,
            rho_max_db,
            r0: f64::NAN,
            r1: f64::NAN,
            cr: f64::NAN,
            sinr_db: f64::NAN,
            gamma_n: f64::NAN,
            epsilon: f64::NAN,
        }),
        Err(e) => Err(e),
    }
}

/// `[rho_0, cr_0, rho_1, cr_1, ...]` over `points` values of `rho_min` in dB;
/// infeasible points carry `NaN`.
pub fn sweep_rho_params(p: &Params, from_db: f64, to_db: f64, points: usize) -> Result<Vec<f64>, Error> {
    if points < 2 || from_db.is_nan() || to_db.is_nan() || to_db <= from_db {
        return Err(Error::Domain("need at least two points on an increasing range".into()));
    }
    let mut out = Vec::with_capacity(2 * points);
    for k in 0..points {
        let rho = from_db + (to_db - from_db) * k as f64 / (points - 1) as f64;
        let s = solve_params(&Params { rho_min_db: rho, ..*p })?;
        out.extend([rho, s.cr]);
    }
    Ok(out)
}

/// Boundary of the rate region as `[r0_0, r1_0, r0_1, r1_1, ...]` over a
/// uniform grid of `betas` weights.
pub fn boundary_params(p: &Params, betas: usize) -> Result<Vec<f64>, Error> {
    if betas < 2 {
        return Err(Error::Domain("need at least two weights".into()));
    }
    let curve = region::psi_curve(&p.scenario()?, &region::beta_grid(betas))?;
    Ok(curve.iter().flat_map(|(_, pt)| [pt.r0, pt.r1]).collect())
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn solve(p: &Params) -> Result<Solution, JsError> {
    solve_params(p).map_err(js)
}

#[wasm_bindgen(js_name = sweepRho)]
pub fn sweep_rho(p: &Params, from_db: f64, to_db: f64, points: usize) -> Result<Vec<f64>, JsError> {
    sweep_rho_params(p, from_db, to_db, points).map_err(js)
}

#[wasm_bindgen]
pub fn boundary(p: &Params, betas: usize) -> Result<Vec<f64>, JsError> {
    boundary_params(p, betas).map_err(js)
}

/// Linear value of a dB figure, for the page's readouts.
#[wasm_bindgen(js_name = dbToLinear)]
pub fn db_to_linear_js(db: f64) -> f64 {
    db_to_linear(db)
}
