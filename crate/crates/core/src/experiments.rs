//! Batch experiments: parameter sweeps, the optimized-CR table and rate
//! regions, with their CSV row formats.

use serde::{Deserialize, Serialize};

use crate::config::{ModelName, SweepSpec};
use crate::error::{Error, Result};
use crate::format::sig;
use crate::linalg::HermitianMatrix;
use crate::metrics::RatePoint;
use crate::region::{self, RegionEstimate};
use crate::scenario::{DbSpec, DesignOutcome, InterferenceModel, Scenario, SolverTag};
use crate::solvers::{self, solve_joint};

/// Sweep CSV columns. `CR` is the compound rate at the actual interference
/// probability `alpha` (equal to the design weight `beta` unless overridden).
pub const SWEEP_CSV_HEADER: [&str; 9] = ["axis", "solver", "feasible", "R0", "R1", "CR", "SINR", "gamma_N", "epsilon"];

/// One `(axis value, solver)` cell of a sweep; `outcome` is `None` when infeasible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: f64,
    pub solver: SolverTag,
    pub outcome: Option<DesignOutcome>,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let mut r = vec![sig(self.axis), self.solver.to_string()];
        match &self.outcome {
            Some(o) => {
                r.push("true".into());
                r.extend([o.r0, o.r1, o.cr_alpha, o.sinr, o.gamma_n_star, o.epsilon_star].map(sig));
            }
            None => {
                r.push("false".into());
                r.extend(std::iter::repeat_n(String::new(), 6));
            }
        }
        r
    }

    pub fn csv(&self) -> String {
        self.record().join(",")
    }
}

/// Sweep record for a single solve, whose axis field is left empty.
pub fn outcome_record(outcome: Option<&DesignOutcome>, solver: SolverTag) -> Vec<String> {
    let mut r = SweepRow { axis: 0.0, solver, outcome: outcome.cloned() }.record();
    r[0].clear();
    r
}

/// Solves `tag` on `sc`; infeasibility becomes `None`, any other failure is an error.
pub fn solve_point(sc: &Scenario, tag: SolverTag) -> Result<Option<DesignOutcome>> {
    match solvers::solve(sc, tag) {
        Ok(o) if o.feasible => Ok(Some(o)),
        Ok(_) | Err(Error::Infeasible { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs every `(value, solver)` pair. Rows come back ordered by axis index,
/// then by solver order, whatever the completion order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let scenarios = (0..spec.values.len()).map(|i| spec.scenario_at(i)).collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, SolverTag)> =
        (0..spec.values.len()).flat_map(|i| spec.solvers.iter().map(move |&t| (i, t))).collect();
    let run = |&(i, tag): &(usize, SolverTag)| -> Result<SweepRow> {
        Ok(SweepRow { axis: spec.values[i], solver: tag, outcome: solve_point(&scenarios[i], tag)? })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().map(run).collect()
    }
}

/// Pulse counts, weights and INR values of the optimized-CR table.
pub const TABLE1_N: [usize; 5] = [2, 4, 8, 16, 32];
/// Column order: `(INR dB, beta)`.
pub const TABLE1_COLUMNS: [(f64, f64); 4] = [(-10.0, 0.1), (-10.0, 0.5), (10.0, 0.1), (10.0, 0.5)];
/// Published values, two decimals, rows by `TABLE1_N`.
pub const TABLE1_REFERENCE: [[f64; 4]; 5] = [
    [3.29, 2.85, 3.25, 2.66],
    [3.38, 3.16, 3.36, 3.07],
    [3.42, 3.31, 3.41, 3.27],
    [3.44, 3.39, 3.44, 3.36],
    [3.45, 3.42, 3.45, 3.41],
];
pub const TABLE1_CSV_HEADER: [&str; 5] = ["N", "beta", "inr_db", "CR", "reference"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Cell {
    pub n: usize,
    pub beta: f64,
    pub inr_db: f64,
    pub cr: f64,
    pub reference: f64,
}

impl Table1Cell {
    pub fn record(&self) -> Vec<String> {
        vec![self.n.to_string(), sig(self.beta), sig(self.inr_db), sig(self.cr), sig(self.reference)]
    }
}

/// Jointly optimized CR at `rho_min = 10 dB`, `SCR = 20 dB`, `alpha = beta`,
/// white noise, over the table grid (row-major).
pub fn table1() -> Result<Vec<Table1Cell>> {
    let mut out = Vec::with_capacity(20);
    for (i, &n) in TABLE1_N.iter().enumerate() {
        for (j, &(inr_db, beta)) in TABLE1_COLUMNS.iter().enumerate() {
            let mut spec = DbSpec::reference(n, beta);
            spec.inr_db = inr_db;
            let cr = solve_joint(&Scenario::from_db(&spec)?)?.cr;
            out.push(Table1Cell { n, beta, inr_db, cr, reference: TABLE1_REFERENCE[i][j] });
        }
    }
    Ok(out)
}

/// Plain-text rendering of [`table1`] output.
pub fn format_table1(cells: &[Table1Cell]) -> String {
    let mut s = String::from("Optimized CR [bits/channel use], rho_min = 10 dB, SCR = 20 dB, alpha = beta\n");
    s.push_str("   N | INR=-10 b=0.1 | INR=-10 b=0.5 | INR=10 b=0.1 | INR=10 b=0.5\n");
    for row in cells.chunks(TABLE1_COLUMNS.len()) {
        s.push_str(&format!("{:>4}", row[0].n));
        for c in row {
            s.push_str(&format!(" | {:>6.3} ({:.2})", c.cr, c.reference));
        }
        s.push('\n');
    }
    s
}

pub const REGION_CSV_HEADER: [&str; 5] = ["model", "kind", "beta", "R0", "R1"];

/// Region estimate per interference model.
#[derive(Clone, Debug)]
pub struct RegionRun {
    pub model: ModelName,
    pub estimate: RegionEstimate,
    /// Boundary under white noise of the same power; empty when the noise is white.
    pub white_boundary: Vec<(f64, RatePoint)>,
}

pub fn run_region(base: &Scenario, models: &[ModelName], samples: usize, betas: usize, seed: u64) -> Result<Vec<RegionRun>> {
    models
        .iter()
        .map(|&m| {
            let model = match m {
                ModelName::Coherent => InterferenceModel::Coherent,
                ModelName::Incoherent => InterferenceModel::Incoherent,
            };
            let sc = base.clone().with_model(model);
            let grid = region::beta_grid(betas);
            let estimate = region::sample_region_with(&sc, samples, seed, &grid)?;
            let white_boundary = if sc.is_white_noise() {
                vec![]
            } else {
                let white = sc.clone().with_noise(HermitianMatrix::scaled_identity(sc.n, sc.var_w()))?;
                region::psi_curve(&white, &grid)?
            };
            Ok(RegionRun { model: m, estimate, white_boundary })
        })
        .collect()
}

fn point_row(model: &str, kind: &str, beta: Option<f64>, p: &RatePoint) -> Vec<String> {
    vec![model.into(), kind.into(), beta.map(sig).unwrap_or_default(), sig(p.r0), sig(p.r1)]
}

/// Boundary rows first, then raw samples, per model. With colored radar
/// noise the white-noise boundary follows as kind `boundary_white`.
pub fn region_records(runs: &[RegionRun]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for run in runs {
        let m = run.model.as_str();
        for (b, p) in &run.estimate.boundary {
            rows.push(point_row(m, "boundary", Some(*b), p));
        }
        for s in &run.estimate.interior {
            rows.push(point_row(m, "sample", None, &s.point));
        }
        for (b, p) in &run.white_boundary {
            rows.push(point_row(m, "boundary_white", Some(*b), p));
        }
    }
    rows
}
