//! Incoherent-interference designs under a peak-to-average power constraint
//! `max |s_n|^2 <= delta ||s||^2 / N`.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianMatrix, C64};
use crate::random;
use crate::scenario::{Design, DesignOutcome, InterferenceModel, Scenario, SolverTag};

use super::gamma::NoiseMode;
use super::joint::{optimal_gamma, optimal_spectrum};
use super::require_white;

/// Largest `N` accepted by [`solve_papr_exact`].
pub const EXACT_MAX_N: usize = 4;
/// Random restarts of the exact search (the closed-form approximation is always an extra start).
pub const EXACT_RESTARTS: usize = 16;
/// Outer alternation stops once a sweep improves the compound rate by less than this.
pub const EXACT_TOL: f64 = 1e-9;

fn papr_inputs(sc: &Scenario) -> Result<f64> {
    if sc.interference != InterferenceModel::Incoherent {
        return Err(Error::Unsupported(
            "the PAPR constraint only shapes the design under incoherent interference".into(),
        ));
    }
    require_white(sc, "PAPR-constrained design")?;
    sc.papr_delta
        .ok_or_else(|| Error::validation("papr_delta", "a PAPR limit is required for this solver"))
}

/// Unit vector with peak-to-average ratio exactly `delta`, peaking on the last coordinate.
pub fn naif_direction(n: usize, delta: f64) -> Vec<C64> {
    let nf = n as f64;
    let low = ((nf - delta) / (nf * (nf - 1.0))).max(0.0).sqrt();
    let mut u = vec![C64::new(low, 0.0); n];
    u[n - 1] = C64::new((delta / nf).sqrt(), 0.0);
    u
}

/// Closed-form approximation: the unconstrained optimal spectrum and energy,
/// with the waveform direction replaced by [`naif_direction`] and the codebook
/// rotated so that direction stays its weakest eigenvector.
pub fn solve_papr_naif(sc: &Scenario) -> Result<DesignOutcome> {
    let delta = papr_inputs(sc)?;
    let (obj, gamma) = optimal_gamma(sc, NoiseMode::JointWhite)?;
    let u = naif_direction(sc.n, delta);
    let rx = HermitianMatrix::from_eigen(&linalg::unitary_with_last_column(&u), &optimal_spectrum(&obj, gamma));
    let s = linalg::scale_vec(&u, obj.epsilon(gamma).sqrt());
    DesignOutcome::evaluate(sc, Design::new(rx, s), gamma, SolverTag::PaprNaif)
}

/// Numerical optimum under the PAPR constraint, for `N <= 4`.
///
/// The codebook is parameterized as `T L L^H / tr(L L^H)` with a free complex
/// `L` and total power `T <= N P_c`; the waveform by a real amplitude profile
/// on the capped simplex, with the energy set to the least value meeting the
/// SINR floor. Both blocks are refined alternately by Nelder-Mead until the
/// gain stalls, from the closed-form approximation and from seeded random
/// starts; the best design wins.
pub fn solve_papr_exact(sc: &Scenario) -> Result<DesignOutcome> {
    let delta = papr_inputs(sc)?;
    if sc.n > EXACT_MAX_N {
        return Err(Error::Unsupported(format!(
            "exact PAPR search is limited to N <= {EXACT_MAX_N}; use the closed-form approximation for N = {}",
            sc.n
        )));
    }
    let naif = solve_papr_naif(sc)?;
    let prob = Problem::new(sc, delta);
    let seed = scenario_hash(sc);

    let mut starts = vec![Params::from_design(&naif.design, sc)];
    for k in 0..EXACT_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64 + 1);
        starts.push(Params::random(&mut rng, sc.n));
    }
    let results = run_starts(&prob, starts);
    let mut best: Option<(f64, Params)> = None;
    for (v, p) in results {
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, p));
        }
    }
    let (best_val, params) = best.expect("at least one start");
    if best_val <= naif.cr {
        return Ok(DesignOutcome { solver: SolverTag::PaprExact, ..naif });
    }
    let design = prob.design(&params).expect("best point is feasible");
    let gamma = linalg::min_eigpair(&design.rx)?.0.max(0.0);
    let out = DesignOutcome::evaluate(sc, design, gamma, SolverTag::PaprExact)?;
    if out.feasible && out.cr >= naif.cr {
        Ok(out)
    } else {
        Ok(DesignOutcome { solver: SolverTag::PaprExact, ..naif })
    }
}

#[cfg(feature = "parallel")]
fn run_starts(prob: &Problem, starts: Vec<Params>) -> Vec<(f64, Params)> {
    use rayon::prelude::*;
    starts.into_par_iter().map(|p| prob.alternate(p)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_starts(prob: &Problem, starts: Vec<Params>) -> Vec<(f64, Params)> {
    starts.into_iter().map(|p| prob.alternate(p)).collect()
}

/// FNV-1a over the scenario's scalar parameters; stable across platforms and releases.
fn scenario_hash(sc: &Scenario) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(sc.n as u64);
    for x in [
        sc.var_a, sc.var_c, sc.var_g, sc.var_f, sc.var_v, sc.h2, sc.p_r, sc.p_c, sc.rho_min, sc.beta,
        sc.papr_delta.unwrap_or(0.0),
    ] {
        eat(x.to_bits());
    }
    for z in sc.noise.matrix().as_slice() {
        eat(z.re.to_bits());
        eat(z.im.to_bits());
    }
    h
}

const NMAX: usize = EXACT_MAX_N;
type Small = [[C64; NMAX]; NMAX];

/// Optimization variables: `[tau, Re L, Im L]` and the amplitude weights `z`.
#[derive(Clone, Debug)]
struct Params {
    a: Vec<f64>,
    z: Vec<f64>,
}

impl Params {
    fn from_design(d: &Design, sc: &Scenario) -> Self {
        let n = sc.n;
        let ed = linalg::eigh(&d.rx).expect("Hermitian");
        let mut a = Vec::with_capacity(1 + 2 * n * n);
        a.push((d.rx.trace() / sc.comm_energy()).min(1.0));
        // L = U diag(sqrt(gamma)) reproduces R_x up to the trace normalization.
        let mut l = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                l[i * n + j] = ed.vectors[(i, j)] * ed.values[j].max(0.0).sqrt();
            }
        }
        a.extend(l.iter().map(|z| z.re));
        a.extend(l.iter().map(|z| z.im));
        let z = d.s.iter().map(|v| v.norm_sqr()).collect();
        Params { a, z }
    }

    fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let mut a = vec![rng.random_range(0.5..1.0)];
        let l = random::complex_gaussian_vec(rng, n * n, 1.0);
        a.extend(l.iter().map(|z| z.re));
        a.extend(l.iter().map(|z| z.im));
        let z = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        Params { a, z }
    }
}

struct Problem {
    n: usize,
    c: f64,
    f: f64,
    beta: f64,
    var_g: f64,
    var_w: f64,
    comm_energy: f64,
    radar_energy: f64,
    /// `rho_min / (sigma_a^2 - sigma_c^2 rho_min)`.
    eps_scale: f64,
    cap: f64,
}

impl Problem {
    fn new(sc: &Scenario, delta: f64) -> Self {
        Problem {
            n: sc.n,
            c: sc.h2 / sc.var_v,
            f: sc.var_f / sc.var_v,
            beta: sc.beta,
            var_g: sc.var_g,
            var_w: sc.var_w(),
            comm_energy: sc.comm_energy(),
            radar_energy: sc.radar_energy(),
            eps_scale: sc.rho_min / (sc.var_a - sc.var_c * sc.rho_min),
            cap: delta / sc.n as f64,
        }
    }

    fn codebook(&self, a: &[f64]) -> Option<Small> {
        let n = self.n;
        let t = self.comm_energy * a[0].clamp(0.0, 1.0);
        let mut l = [[C64::new(0.0, 0.0); NMAX]; NMAX];
        for i in 0..n {
            for j in 0..n {
                l[i][j] = C64::new(a[1 + i * n + j], a[1 + n * n + i * n + j]);
            }
        }
        let mut g = [[C64::new(0.0, 0.0); NMAX]; NMAX];
        let mut tr = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += l[i][k] * l[j][k].conj();
                }
                g[i][j] = acc;
            }
            tr += g[i][i].re;
        }
        if !(tr > 1e-300) {
            return None;
        }
        let k = t / tr;
        for row in g.iter_mut().take(n) {
            for v in row.iter_mut().take(n) {
                *v *= k;
            }
        }
        Some(g)
    }

    fn profile(&self, z: &[f64]) -> Option<Vec<f64>> {
        let w: Vec<f64> = z.iter().map(|x| x.abs()).collect();
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            return None;
        }
        Some(project_capped_simplex(&w.iter().map(|x| x / total).collect::<Vec<_>>(), self.cap))
    }

    /// Compound rate of the decoded point, or a negative penalty when the
    /// SINR floor would need more than the radar budget.
    fn value(&self, a: &[f64], z: &[f64]) -> f64 {
        let (Some(r), Some(p)) = (self.codebook(a), self.profile(z)) else {
            return -1e6;
        };
        let n = self.n;
        let amp: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
        // a = s_hat^H (sigma_g^2 R + sigma_w^2 I)^{-1} s_hat
        let mut m = r;
        for i in 0..n {
            for j in 0..n {
                m[i][j] *= self.var_g;
            }
            m[i][i] += self.var_w;
        }
        let Some(lm) = small_cholesky(&m, n) else { return -1e6 };
        let y = forward_sub(&lm, &amp, n);
        let quad: f64 = y.iter().take(n).map(|v| v.norm_sqr()).sum();
        let eps = self.eps_scale / quad;
        if eps > self.radar_energy {
            return -1.0 - (eps / self.radar_energy - 1.0);
        }
        let mut b0 = r;
        let mut b1 = r;
        let d: Vec<f64> = p.iter().map(|pi| 1.0 / (1.0 + self.f * eps * pi).sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                b0[i][j] *= self.c;
                b1[i][j] *= self.c * d[i] * d[j];
            }
            b0[i][i] += 1.0;
            b1[i][i] += 1.0;
        }
        let (Some(l0), Some(l1)) = (small_cholesky(&b0, n), small_cholesky(&b1, n)) else {
            return -1e6;
        };
        let ld = |l: &Small| (0..n).map(|i| l[i][i].re.ln()).sum::<f64>() * 2.0 / (n as f64 * LN_2);
        let (r0, r1) = (ld(&l0), ld(&l1));
        self.beta * r1 + (1.0 - self.beta) * r0
    }

    fn design(&self, p: &Params) -> Option<Design> {
        let n = self.n;
        let r = self.codebook(&p.a)?;
        let prof = self.profile(&p.z)?;
        let rx = HermitianMatrix::new(CMatrix::from_fn(n, |i, j| r[i][j]));
        let s_hat = linalg::real_vec(&prof.iter().map(|x| x.sqrt()).collect::<Vec<_>>());
        let m = rx.scale(self.var_g).add(&HermitianMatrix::scaled_identity(n, self.var_w));
        let quad = linalg::HpdFactor::new_unchecked(&m).ok()?.inv_quad_form(&s_hat);
        let eps = (self.eps_scale / quad).min(self.radar_energy);
        Some(Design::new(rx, linalg::scale_vec(&s_hat, eps.sqrt())))
    }

    /// Alternates between the codebook block and the waveform block.
    fn alternate(&self, mut p: Params) -> (f64, Params) {
        let mut val = self.value(&p.a, &p.z);
        for _ in 0..200 {
            let before = val;
            let z = p.z.clone();
            let (a, va) = nelder_mead(|a| -self.value(a, &z), &p.a, 0.2, 250 * p.a.len());
            if -va >= val {
                p.a = a;
                val = -va;
            }
            let a = p.a.clone();
            let (z, vz) = nelder_mead(|z| -self.value(&a, z), &p.z, 0.1, 250 * p.z.len());
            if -vz >= val {
                p.z = z;
                val = -vz;
            }
            if val - before < EXACT_TOL {
                break;
            }
        }
        (val, p)
    }
}

fn small_cholesky(a: &Small, n: usize) -> Option<Small> {
    let mut l = [[C64::new(0.0, 0.0); NMAX]; NMAX];
    for j in 0..n {
        let mut d = a[j][j].re;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let ljj = d.sqrt();
        l[j][j] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / ljj;
        }
    }
    Some(l)
}

fn forward_sub(l: &Small, b: &[f64], n: usize) -> [C64; NMAX] {
    let mut y = [C64::new(0.0, 0.0); NMAX];
    for i in 0..n {
        let mut s = C64::new(b[i], 0.0);
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i].re;
    }
    y
}

/// Euclidean projection onto `{p : sum p = 1, 0 <= p_i <= cap}` (requires `cap * len >= 1`).
pub fn project_capped_simplex(w: &[f64], cap: f64) -> Vec<f64> {
    let clip = |theta: f64| -> f64 { w.iter().map(|x| (x - theta).clamp(0.0, cap)).sum() };
    let lo_init = w.iter().fold(f64::INFINITY, |m, &x| m.min(x)) - cap;
    let hi_init = w.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let (mut lo, mut hi) = (lo_init, hi_init);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if clip(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * (1.0 + hi.abs()) {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    let mut p: Vec<f64> = w.iter().map(|x| (x - theta).clamp(0.0, cap)).collect();
    let total: f64 = p.iter().sum();
    for x in &mut p {
        *x /= total;
    }
    p
}

/// Nelder-Mead minimization with the standard coefficients.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: f64, max_evals: usize) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += if x[i].abs() > 1e-8 { step * x[i].abs().max(0.1) } else { step };
        let v = f(&x);
        simplex.push((x, v));
    }
    let mut evals = dim + 1;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[dim].1);
        if (worst - best).abs() <= 1e-13 * (1.0 + best.abs()) {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[dim].0).map(|(c, w)| c + t * (w - c)).collect()
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[dim].1 {
                let x = along(-0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < simplex[dim].1.min(fr) {
                simplex[dim] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&x0) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *v = f(x);
                }
                evals += dim;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}
