//! Monte Carlo check of the analytic model.
//!
//! Trials are split into fixed-size chunks, each with its own ChaCha8 stream,
//! and per-chunk moments are reduced in chunk order, so a report depends only
//! on `(scenario, design, n_trials, seed)` and not on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig;
use crate::linalg::{self, CMatrix, HermitianMatrix, HpdFactor, C64};
use crate::metrics;
use crate::random::complex_normal;
use crate::scenario::{Design, Scenario};

pub const MIN_TRIALS: usize = 1000;
pub const MIN_KL_TRIALS: usize = 10_000;
/// Agreement band, in standard errors.
pub const SIGMA_LEVEL: f64 = 4.0;
const CHUNK: usize = 4096;

const SALT_RADAR_H0: u64 = 1;
const SALT_RADAR_H1: u64 = 2;
const SALT_COMM: u64 = 3;
const SALT_KL: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Clutter, comm interference and noise only.
    H0,
    /// Target present.
    H1,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// One empirical-versus-analytic comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub empirical: f64,
    pub analytic: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, empirical: f64, analytic: f64, tolerance: f64) -> Self {
        // Absolute floor so exact-zero cases are not failed by rounding.
        let slack = tolerance + 1e-12 * (1.0 + analytic.abs());
        Check {
            name: name.into(),
            empirical,
            analytic,
            tolerance,
            passed: (empirical - analytic).abs() <= slack,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub n_trials: usize,
    pub seed: u64,
    pub analytic_sinr: f64,
    pub empirical_sinr: Option<Estimate>,
    /// Relative Frobenius error of the interfered-channel disturbance covariance.
    pub empirical_interf_cov_error: Option<f64>,
    /// `(D(f1||f0), D(f0||f1))` in nats.
    pub empirical_kl: Option<(Estimate, Estimate)>,
    pub bernoulli_hit_rate: Option<f64>,
    pub checks: Vec<Check>,
}

pub const CSV_HEADER: [&str; 5] = ["check", "empirical", "analytic", "tolerance", "passed"];

impl MonteCarloReport {
    fn empty(sc: &Scenario, d: &Design, n_trials: usize, seed: u64) -> Result<Self> {
        Ok(MonteCarloReport {
            n_trials,
            seed,
            analytic_sinr: metrics::sinr(sc, d)?,
            empirical_sinr: None,
            empirical_interf_cov_error: None,
            empirical_kl: None,
            bernoulli_hit_rate: None,
            checks: vec![],
        })
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Combines reports of the same design; fields set in `other` win.
    pub fn merge(mut self, other: MonteCarloReport) -> Self {
        self.empirical_sinr = other.empirical_sinr.or(self.empirical_sinr);
        self.empirical_interf_cov_error = other.empirical_interf_cov_error.or(self.empirical_interf_cov_error);
        self.empirical_kl = other.empirical_kl.or(self.empirical_kl);
        self.bernoulli_hit_rate = other.bernoulli_hit_rate.or(self.bernoulli_hit_rate);
        self.checks.extend(other.checks);
        self
    }

    /// TOML rendering of the whole report.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }

    /// One record per check, matching [`CSV_HEADER`].
    pub fn records(&self) -> Vec<Vec<String>> {
        self.checks
            .iter()
            .map(|c| vec![c.name.clone(), sig(c.empirical), sig(c.analytic), sig(c.tolerance), c.passed.to_string()])
            .collect()
    }
}

/// Factor `L` with `L L^H = h` for a PSD `h` (rank-deficient allowed).
fn psd_factor(h: &HermitianMatrix) -> Result<CMatrix> {
    let ed = linalg::eigh(h)?;
    let n = h.dim();
    Ok(CMatrix::from_fn(n, |i, j| ed.vectors[(i, j)] * ed.values[j].max(0.0).sqrt()))
}

/// Draws `CN(0, L L^H)` into `out` (overwrites).
fn draw_into<R: Rng + ?Sized>(rng: &mut R, l: &CMatrix, z: &mut [C64], out: &mut [C64]) {
    for zi in z.iter_mut() {
        *zi = complex_normal(rng);
    }
    let n = z.len();
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            acc += l[(i, j)] * z[j];
        }
        *o = acc;
    }
}

/// Running `sum r r^H` (row-major) with a trial count.
#[derive(Clone, Debug)]
struct Scatter {
    n: usize,
    count: usize,
    sum: Vec<C64>,
}

impl Scatter {
    fn new(n: usize) -> Self {
        Scatter { n, count: 0, sum: vec![C64::new(0.0, 0.0); n * n] }
    }

    fn add(&mut self, r: &[C64]) {
        self.count += 1;
        for i in 0..self.n {
            let ri = r[i];
            for j in i..self.n {
                self.sum[i * self.n + j] += ri * r[j].conj();
            }
        }
    }

    fn absorb(&mut self, other: &Scatter) {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
    }

    fn covariance(&self) -> HermitianMatrix {
        let n = self.n;
        let k = 1.0 / self.count.max(1) as f64;
        let m = CMatrix::from_fn(n, |i, j| {
            if i <= j {
                self.sum[i * n + j] * k
            } else {
                self.sum[j * n + i].conj() * k
            }
        });
        HermitianMatrix::new(m)
    }
}

/// Count, mean and centered second moment, merged with Chan's update.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn absorb(&mut self, o: &Moments) {
        if o.count == 0.0 {
            return;
        }
        let total = self.count + o.count;
        let d = o.mean - self.mean;
        self.mean += d * o.count / total;
        self.m2 += o.m2 + d * d * self.count * o.count / total;
        self.count = total;
    }

    fn estimate(&self) -> Estimate {
        let var = if self.count > 1.0 { self.m2 / (self.count - 1.0) } else { 0.0 };
        Estimate { value: self.mean, stderr: (var / self.count.max(1.0)).sqrt() }
    }
}

fn chunk_rng(seed: u64, salt: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((salt << 48) | chunk as u64);
    rng
}

/// Runs `f(rng, trials)` per chunk and returns the results in chunk order.
fn run_chunks<T, F>(n_trials: usize, seed: u64, salt: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let chunks = n_trials.div_ceil(CHUNK);
    let job = |c: usize| {
        let len = CHUNK.min(n_trials - c * CHUNK);
        f(&mut chunk_rng(seed, salt, c), len)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(job).collect()
    }
}

fn check_inputs(sc: &Scenario, d: &Design, n_trials: usize, min: usize) -> Result<()> {
    if n_trials < min {
        return Err(Error::Domain(format!("need at least {min} trials, got {n_trials}")));
    }
    if d.s.len() != sc.n || d.rx.dim() != sc.n {
        return Err(Error::Domain("design dimension does not match scenario".into()));
    }
    linalg::check_psd(&d.rx)
}

/// Generator of radar returns `r = (a) s + sigma_g x + c s + w` for one range cell.
struct RadarSource {
    l_x: CMatrix,
    l_w: CMatrix,
    s: Vec<C64>,
    sd_a: f64,
    sd_c: f64,
}

impl RadarSource {
    fn new(sc: &Scenario, d: &Design) -> Result<Self> {
        Ok(RadarSource {
            l_x: psd_factor(&d.rx.scale(sc.var_g))?,
            l_w: psd_factor(&sc.noise)?,
            s: d.s.clone(),
            sd_a: sc.var_a.sqrt(),
            sd_c: sc.var_c.sqrt(),
        })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, h: Hypothesis, z: &mut [C64], tmp: &mut [C64], r: &mut [C64]) {
        draw_into(rng, &self.l_x, z, r);
        draw_into(rng, &self.l_w, z, tmp);
        let mut amp = complex_normal(rng) * self.sd_c;
        if h == Hypothesis::H1 {
            amp += complex_normal(rng) * self.sd_a;
        }
        for i in 0..r.len() {
            r[i] += tmp[i] + amp * self.s[i];
        }
    }
}

/// Sample covariance of simulated radar returns and the resulting SINR.
///
/// Under H0 the sample covariance estimates the disturbance covariance and
/// `sigma_a^2 s^H Sigma^-1 s` is the SINR directly; under H1 it estimates
/// the SINR over one plus the SINR, which is inverted. The complex Wishart
/// law gives the exact bias `n / (n - N)` (removed) and relative standard
/// error `1 / sqrt(n - N - 1)`.
pub fn simulate_radar_cell(sc: &Scenario, d: &Design, hypothesis: Hypothesis, n_trials: usize, seed: u64) -> Result<MonteCarloReport> {
    check_inputs(sc, d, n_trials, MIN_TRIALS)?;
    let n = sc.n;
    let src = RadarSource::new(sc, d)?;
    let salt = match hypothesis {
        Hypothesis::H0 => SALT_RADAR_H0,
        Hypothesis::H1 => SALT_RADAR_H1,
    };
    let parts = run_chunks(n_trials, seed, salt, |rng, len| {
        let (mut z, mut tmp, mut r) = (vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n]);
        let mut acc = Scatter::new(n);
        for _ in 0..len {
            src.draw(rng, hypothesis, &mut z, &mut tmp, &mut r);
            acc.add(&r);
        }
        acc
    });
    let mut total = Scatter::new(n);
    for p in &parts {
        total.absorb(p);
    }
    let cov = total.covariance();
    let reg = 1e-10 * cov.trace() / n as f64;
    let cov = cov.add(&HermitianMatrix::scaled_identity(n, reg));
    let raw = sc.var_a * HpdFactor::new(&cov)?.inv_quad_form(&d.s);
    let (nt, nn) = (n_trials as f64, n as f64);
    let q = raw * (nt - nn) / nt;
    let rel = 1.0 / (nt - nn - 1.0).sqrt();
    let mut rep = MonteCarloReport::empty(sc, d, n_trials, seed)?;
    let (name, est, tolerance) = match hypothesis {
        Hypothesis::H0 => ("sinr_h0", Estimate { value: q, stderr: q * rel }, SIGMA_LEVEL * q * rel),
        Hypothesis::H1 => {
            // q / (1 - q) is too curved near q = 1 for a delta-method band, so
            // the band is built on the q scale and mapped through; the
            // tolerance is its half-width on the side of the analytic value.
            let to_sinr = |x: f64| if x < 1.0 { x / (1.0 - x) } else { f64::INFINITY };
            let value = to_sinr(q);
            let half = if rep.analytic_sinr >= value {
                to_sinr(q * (1.0 + SIGMA_LEVEL * rel)) - value
            } else {
                value - to_sinr(q * (1.0 - SIGMA_LEVEL * rel))
            };
            let g = 1.0 - q;
            ("sinr_h1", Estimate { value, stderr: q * rel / (g * g) }, half)
        }
    };
    rep.checks.push(Check::new(name, est.value, rep.analytic_sinr, tolerance));
    rep.empirical_sinr = Some(est);
    Ok(rep)
}

/// Relative Frobenius tolerance for a sample covariance from `k` draws:
/// `5 / sqrt(k)`, widened to twice the expected relative error when that is
/// larger (many equal eigenvalues).
fn covariance_tolerance(target: &HermitianMatrix, k: usize) -> f64 {
    let expected = target.trace() / target.matrix().frobenius_norm();
    5.0f64.max(2.0 * expected) / (k as f64).sqrt()
}

/// Communication receiver `z = h x + zeta S f + v` with `zeta ~ Bernoulli(alpha)`.
///
/// The codeword term `h x` is independent of the disturbance and enters no
/// check, so it is not drawn.
///
/// Checks the hit rate and, separately for interfered and clean channel
/// uses, the covariance of the disturbance `zeta S f + v` against
/// `sigma_v^2 I + S R_f S^H` and `sigma_v^2 I`.
pub fn simulate_comm_cell(sc: &Scenario, d: &Design, n_trials: usize, seed: u64) -> Result<MonteCarloReport> {
    check_inputs(sc, d, n_trials, MIN_TRIALS)?;
    let n = sc.n;
    let l_f = psd_factor(&sc.interference_covariance())?;
    let sd_v = sc.var_v.sqrt();
    let parts = run_chunks(n_trials, seed, SALT_COMM, |rng, len| {
        let (mut z, mut f) = (vec![C64::default(); n], vec![C64::default(); n]);
        let mut dist = vec![C64::default(); n];
        let (mut hit, mut miss) = (Scatter::new(n), Scatter::new(n));
        for _ in 0..len {
            let interfered = rng.random::<f64>() < sc.alpha;
            for v in dist.iter_mut() {
                *v = complex_normal(rng) * sd_v;
            }
            if interfered {
                draw_into(rng, &l_f, &mut z, &mut f);
                for i in 0..n {
                    dist[i] += d.s[i] * f[i];
                }
            }
            if interfered {
                hit.add(&dist);
            } else {
                miss.add(&dist);
            }
        }
        (hit, miss)
    });
    let (mut hit, mut miss) = (Scatter::new(n), Scatter::new(n));
    for (a, b) in &parts {
        hit.absorb(a);
        miss.absorb(b);
    }
    let mut rep = MonteCarloReport::empty(sc, d, n_trials, seed)?;
    let nt = n_trials as f64;
    let rate = hit.count as f64 / nt;
    let sd = (sc.alpha * (1.0 - sc.alpha) / nt).sqrt();
    rep.checks.push(Check::new("hit_rate", rate, sc.alpha, SIGMA_LEVEL * sd));
    rep.bernoulli_hit_rate = Some(rate);

    let clean = HermitianMatrix::scaled_identity(n, sc.var_v);
    let s_diag = CMatrix::from_fn(n, |i, j| if i == j { d.s[i] } else { C64::default() });
    let interfered = clean.add(&sc.interference_covariance().congruence(&s_diag));
    for (name, acc, target) in [("interf_cov", &hit, &interfered), ("clean_cov", &miss, &clean)] {
        if acc.count < 2 {
            continue;
        }
        let err = acc.covariance().matrix().sub(target.matrix()).frobenius_norm() / target.matrix().frobenius_norm();
        rep.checks.push(Check::new(name, err, 0.0, covariance_tolerance(target, acc.count)));
        if name == "interf_cov" {
            rep.empirical_interf_cov_error = Some(err);
        }
    }
    Ok(rep)
}

/// Averages the log-likelihood ratio
/// `ln f1/f0 = -ln(1 + SINR) + sigma_a^2 |s^H Sigma0^-1 r|^2 / (1 + SINR)`
/// over returns drawn under H1 (giving `D(f1||f0)`) and, negated, under H0
/// (giving `D(f0||f1)`), where `Sigma0` is the full disturbance covariance.
pub fn estimate_kl(sc: &Scenario, d: &Design, n_trials: usize, seed: u64) -> Result<MonteCarloReport> {
    check_inputs(sc, d, n_trials, MIN_KL_TRIALS)?;
    let n = sc.n;
    let src = RadarSource::new(sc, d)?;
    let q0 = metrics::radar_disturbance(sc, d);
    let w = HpdFactor::new(&q0)?.solve(&d.s);
    let snr = sc.var_a * linalg::dot(&d.s, &w).re.max(0.0);
    let offset = snr.ln_1p();
    let gain = sc.var_a / (1.0 + snr);
    let parts = run_chunks(n_trials, seed, SALT_KL, |rng, len| {
        let (mut z, mut tmp, mut r) = (vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n]);
        let (mut m10, mut m01) = (Moments::default(), Moments::default());
        for _ in 0..len {
            src.draw(rng, Hypothesis::H1, &mut z, &mut tmp, &mut r);
            m10.push(gain * linalg::dot(&w, &r).norm_sqr() - offset);
            src.draw(rng, Hypothesis::H0, &mut z, &mut tmp, &mut r);
            m01.push(offset - gain * linalg::dot(&w, &r).norm_sqr());
        }
        (m10, m01)
    });
    let (mut m10, mut m01) = (Moments::default(), Moments::default());
    for (a, b) in &parts {
        m10.absorb(a);
        m01.absorb(b);
    }
    let (e10, e01) = (m10.estimate(), m01.estimate());
    let mut rep = MonteCarloReport::empty(sc, d, n_trials, seed)?;
    let (d10, d01) = metrics::kl_divergences(rep.analytic_sinr)?;
    rep.checks.push(Check::new("kl_10", e10.value, d10, SIGMA_LEVEL * e10.stderr));
    rep.checks.push(Check::new("kl_01", e01.value, d01, SIGMA_LEVEL * e01.stderr));
    rep.empirical_kl = Some((e10, e01));
    Ok(rep)
}

/// All simulators on one design: radar SINR under both hypotheses, the
/// communication channel and the divergences.
pub fn verify_design(sc: &Scenario, d: &Design, n_trials: usize, seed: u64) -> Result<MonteCarloReport> {
    check_inputs(sc, d, n_trials, MIN_KL_TRIALS)?;
    let h0 = simulate_radar_cell(sc, d, Hypothesis::H0, n_trials, seed)?;
    let h1 = simulate_radar_cell(sc, d, Hypothesis::H1, n_trials, seed)?;
    let comm = simulate_comm_cell(sc, d, n_trials, seed)?;
    let kl = estimate_kl(sc, d, n_trials, seed)?;
    // Keep the H0 SINR estimate as the headline one.
    let mut rep = h1.merge(comm).merge(kl);
    rep.empirical_sinr = h0.empirical_sinr;
    rep.checks.splice(0..0, h0.checks);
    Ok(rep)
}
