//! The one-dimensional reduction of the joint problem.
//!
//! Once the radar energy is pinned to the value that makes the SINR
//! constraint active and the comm power is split evenly over the `N - 1`
//! interference-free directions, the compound rate depends only on the power
//! `gamma` left in the radar direction. [`GammaObjective`] is that function
//! (in nats, before the `1 / (N ln 2)` scaling) and [`gbar_candidates`]
//! enumerates the points where its maximum can sit.

use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Grid size of the numeric cross-check on the stationary points.
pub const CROSS_CHECK_GRID: usize = 10_000;

/// Agreement required between the polynomial and numeric roots, relative to `max(1, gamma_bar)`.
pub const ROOT_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseMode {
    /// `M = sigma_w^2 I`.
    JointWhite,
    /// Colored `M`, entering only through its smallest eigenvalue.
    JointColored { phi_n: f64 },
}

/// `Gbar(gamma)` together with the affine radar energy `eps(gamma) = k1 gamma + k0`.
#[derive(Clone, Debug)]
pub struct GammaObjective {
    pub n: usize,
    /// `|h|^2 / sigma_v^2`.
    pub c: f64,
    /// `sigma_f^2 / sigma_v^2`.
    pub f: f64,
    pub beta: f64,
    pub p_c: f64,
    pub k0: f64,
    pub k1: f64,
    pub gamma_bar: f64,
    pub mode: NoiseMode,
}

impl GammaObjective {
    /// Builds the objective for `sc` with noise floor `phi` (`sigma_w^2` or `lambda_min(M)`).
    ///
    /// Fails with [`Error::Infeasible`] when the SINR floor cannot be met.
    pub fn new(sc: &Scenario, mode: NoiseMode) -> Result<Self> {
        let phi = match mode {
            NoiseMode::JointWhite => sc.var_w(),
            NoiseMode::JointColored { phi_n } => phi_n,
        };
        let rho = sc.rho_min;
        let e = sc.radar_energy();
        let rho_max = rho_max_joint(sc, phi);
        let margin = sc.var_a - sc.var_c * rho;
        if !(margin > 0.0) {
            return Err(Error::Infeasible {
                rho_max,
                reason: "clutter alone caps the SINR below the floor".into(),
            });
        }
        if rho > rho_max {
            return Err(Error::Infeasible { rho_max, reason: "radar energy budget too small".into() });
        }
        let gamma_bar = if sc.var_g > 0.0 {
            sc.p_c.min((sc.var_a * e - (phi + sc.var_c * e) * rho) / (sc.var_g * rho))
        } else {
            sc.p_c
        };
        if gamma_bar < 0.0 {
            return Err(Error::Infeasible { rho_max, reason: "no admissible comm power in the radar direction".into() });
        }
        Ok(GammaObjective {
            n: sc.n,
            c: sc.h2 / sc.var_v,
            f: sc.var_f / sc.var_v,
            beta: sc.beta,
            p_c: sc.p_c,
            k0: rho * phi / margin,
            k1: rho * sc.var_g / margin,
            gamma_bar: gamma_bar.max(0.0),
            mode,
        })
    }

    /// Radar energy that makes the SINR constraint active.
    pub fn epsilon(&self, gamma: f64) -> f64 {
        self.k1 * gamma + self.k0
    }

    /// Eigenvalue shared by the `N - 1` interference-free directions.
    pub fn free_eigenvalue(&self, gamma: f64) -> f64 {
        (self.n as f64 * self.p_c - gamma) / (self.n - 1) as f64
    }

    /// `Gbar(gamma)` in nats.
    pub fn eval(&self, gamma: f64) -> f64 {
        let nm1 = (self.n - 1) as f64;
        let (c, f, b) = (self.c, self.f, self.beta);
        let fe = f * self.epsilon(gamma);
        nm1 * (c * self.free_eigenvalue(gamma)).ln_1p() + (1.0 - b) * (c * gamma).ln_1p()
            - b * fe.ln_1p()
            + b * (c * gamma + fe).ln_1p()
    }

    /// Compound rate in bits per channel use at `gamma`.
    pub fn compound_rate(&self, gamma: f64) -> f64 {
        crate::metrics::nats_to_rate(self.eval(gamma), self.n)
    }

    /// Closed-form derivative of [`eval`](Self::eval).
    pub fn derivative(&self, gamma: f64) -> f64 {
        let nm1 = (self.n - 1) as f64;
        let (c, f, b, k1) = (self.c, self.f, self.beta, self.k1);
        let fe = f * self.epsilon(gamma);
        -c * nm1 / (nm1 + c * (self.n as f64 * self.p_c - gamma)) + (1.0 - b) * c / (1.0 + c * gamma)
            - b * f * k1 / (1.0 + fe)
            + b * (c + f * k1) / (1.0 + c * gamma + fe)
    }

    /// Coefficients (ascending powers of `gamma`) of the cubic whose sign
    /// equals the sign of the derivative on the admissible interval.
    ///
    /// Clearing the four positive denominators
    /// `p = (N-1) + c(N P_c - gamma)`, `q = 1 + c gamma`,
    /// `r = 1 + f eps(gamma)`, `t = 1 + c gamma + f eps(gamma)` gives
    /// `-c(N-1) q r t + (1-beta) c p r t - beta f k1 p q t + beta (c + f k1) p q r`.
    pub fn stationarity_cubic(&self) -> [f64; 4] {
        let nm1 = (self.n - 1) as f64;
        let (c, f, b, k0, k1) = (self.c, self.f, self.beta, self.k0, self.k1);
        let p = [nm1 + c * self.n as f64 * self.p_c, -c];
        let q = [1.0, c];
        let r = [1.0 + f * k0, f * k1];
        let t = [1.0 + f * k0, c + f * k1];
        let qrt = mul3(&q, &r, &t);
        let prt = mul3(&p, &r, &t);
        let pqt = mul3(&p, &q, &t);
        let pqr = mul3(&p, &q, &r);
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = -c * nm1 * qrt[i] + (1.0 - b) * c * prt[i] - b * f * k1 * pqt[i]
                + b * (c + f * k1) * pqr[i];
        }
        out
    }
}

fn mul3(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2]) -> [f64; 4] {
    let ab = [a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]];
    [
        ab[0] * c[0],
        ab[0] * c[1] + ab[1] * c[0],
        ab[1] * c[1] + ab[2] * c[0],
        ab[2] * c[1],
    ]
}

/// Largest `rho_min` the joint problem can meet with noise floor `phi`.
pub fn rho_max_joint(sc: &Scenario, phi: f64) -> f64 {
    let e = sc.radar_energy();
    sc.var_a * e / (sc.var_c * e + phi)
}

/// Points of `[0, gamma_bar]` where the maximum of `Gbar` can lie.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    /// Ascending, deduplicated; always contains `0` and `gamma_bar`.
    pub points: Vec<f64>,
    /// Interior stationary points found from the cubic.
    pub roots: Vec<f64>,
}

impl CandidateSet {
    /// Maximizer of `obj` over the candidates; ties go to the smallest `gamma`.
    pub fn argmax(&self, obj: &GammaObjective) -> f64 {
        let mut best = self.points[0];
        let mut best_val = obj.eval(best);
        for &g in &self.points[1..] {
            let v = obj.eval(g);
            if v > best_val {
                best = g;
                best_val = v;
            }
        }
        best
    }
}

/// Enumerates `{0, gamma_bar}` plus the stationary points of `Gbar` in
/// `[0, gamma_bar]`, and checks the polynomial roots against a bisection on a
/// finite-difference derivative.
pub fn gbar_candidates(obj: &GammaObjective) -> Result<CandidateSet> {
    let gb = obj.gamma_bar;
    let mut points = vec![0.0];
    if gb <= 0.0 {
        return Ok(CandidateSet { points, roots: vec![] });
    }
    let coeffs = obj.stationarity_cubic();
    // Work on x = gamma / gamma_bar in [0, 1] so the coefficients are comparable.
    let mut scaled = [0.0; 4];
    for (i, c) in coeffs.iter().enumerate() {
        scaled[i] = c * gb.powi(i as i32);
    }
    let roots: Vec<f64> = poly_roots_unit(&scaled).into_iter().map(|x| x * gb).collect();
    cross_check(obj, &scaled, &roots)?;
    points.extend(roots.iter().copied().filter(|&r| r > 0.0 && r < gb));
    points.push(gb);
    points.sort_by(f64::total_cmp);
    points.dedup();
    Ok(CandidateSet { points, roots })
}

fn horner(c: &[f64; 4], x: f64) -> f64 {
    ((c[3] * x + c[2]) * x + c[1]) * x + c[0]
}

fn horner_d(c: &[f64; 4], x: f64) -> f64 {
    (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1]
}

/// Real roots in `[0, 1]` of a polynomial of degree at most three.
///
/// The critical points of the cubic split `[0, 1]` into monotone pieces; each
/// piece with a sign change holds exactly one root, found by bisection and
/// polished with Newton steps. Touching roots are picked up at the critical
/// points themselves.
pub(crate) fn poly_roots_unit(c: &[f64; 4]) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return vec![];
    }
    let c = c.map(|x| x / scale);
    let zero_tol = 1e-13;
    let mut breaks = vec![0.0];
    breaks.extend(quadratic_roots(3.0 * c[3], 2.0 * c[2], c[1]).into_iter().filter(|&x| x > 0.0 && x < 1.0));
    breaks.push(1.0);
    breaks.sort_by(f64::total_cmp);

    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (horner(&c, lo), horner(&c, hi));
        if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if horner(&c, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..3 {
            let d = horner_d(&c, x);
            if d == 0.0 {
                break;
            }
            let nx = x - horner(&c, x) / d;
            if nx >= w[0] && nx <= w[1] {
                x = nx;
            }
        }
        roots.push(x);
    }
    for &b in &breaks {
        if horner(&c, b).abs() <= zero_tol {
            roots.push(b);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    roots
}

/// Real roots of `a x^2 + b x + c`, ascending, computed without cancellation.
pub(crate) fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return vec![];
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    if a.abs() < 1e-14 {
        return if b.abs() < 1e-300 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut r = if q == 0.0 { vec![0.0] } else { vec![q / a, c / q] };
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

/// Five-point central difference of `Gbar`.
fn numeric_derivative(obj: &GammaObjective, x: f64, h: f64) -> f64 {
    let g = |y: f64| obj.eval(y);
    (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h)
}

fn cross_check(obj: &GammaObjective, scaled: &[f64; 4], roots: &[f64]) -> Result<()> {
    let gb = obj.gamma_bar;
    let tol = ROOT_TOL * gb.max(1.0);
    let step = gb / CROSS_CHECK_GRID as f64;
    let h = (gb * 1e-4).max(1e-6);
    let d = |x: f64| numeric_derivative(obj, x, h);

    let mut numeric = Vec::new();
    let mut prev_x = 0.0;
    let mut prev_d = d(0.0);
    for i in 1..=CROSS_CHECK_GRID {
        let x = step * i as f64;
        let dx = d(x);
        if prev_d != 0.0 && dx != 0.0 && prev_d.signum() != dx.signum() {
            let (mut lo, mut hi, flo) = (prev_x, x, prev_d);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if d(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            numeric.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_d = dx;
    }

    let near_edge = |r: f64| r <= tol || r >= gb - tol;
    for &r in &numeric {
        if near_edge(r) {
            continue;
        }
        if !roots.iter().any(|&s| (s - r).abs() <= tol) {
            return Err(Error::InternalConsistency(format!(
                "numeric stationary point {r:.12e} has no polynomial counterpart (polynomial roots {roots:?})"
            )));
        }
    }
    for &s in roots {
        if near_edge(s) {
            continue;
        }
        // A root where the cubic only touches zero, or two roots inside one
        // grid cell, produce no sign change for the grid to see.
        let x = s / gb;
        let slope = horner_d(scaled, x).abs();
        let mag = scaled.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let touching = slope <= 1e-6 * mag;
        let paired = roots.iter().any(|&o| o != s && (o - s).abs() <= 2.0 * step);
        if touching || paired {
            continue;
        }
        if !numeric.iter().any(|&r| (s - r).abs() <= tol) {
            return Err(Error::InternalConsistency(format!(
                "polynomial stationary point {s:.12e} not confirmed numerically (numeric roots {numeric:?})"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::DbSpec;
    use approx::assert_relative_eq;

    fn objective(n: usize, beta: f64, inr_db: f64) -> GammaObjective {
        let mut spec = DbSpec::reference(n, beta);
        spec.inr_db = inr_db;
        GammaObjective::new(&Scenario::from_db(&spec).unwrap(), NoiseMode::JointWhite).unwrap()
    }

    #[test]
    fn quadratic_roots_are_stable() {
        let r = quadratic_roots(1.0, -3.0, 2.0);
        assert!((r[0] - 1.0).abs() < 1e-15 && (r[1] - 2.0).abs() < 1e-15);
        let r = quadratic_roots(1.0, 1e8, 1.0);
        assert_relative_eq!(r[1], -1e-8, max_relative = 1e-12);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
        assert_eq!(quadratic_roots(0.0, 2.0, -1.0), vec![0.5]);
    }

    #[test]
    fn unit_interval_roots() {
        // (x - 0.2)(x - 0.5)(x - 0.9)
        let c = [-0.09, 0.73, -1.6, 1.0];
        let r = poly_roots_unit(&c);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([0.2, 0.5, 0.9]) {
            assert!((got - want).abs() < 1e-14);
        }
        // double root at 0.5 and a simple root outside [0, 1]
        let c = [-0.5, 2.25, -3.0, 1.0];
        let r = poly_roots_unit(&c);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-7);
    }

    #[test]
    fn cubic_sign_matches_derivative() {
        for &(n, b, inr) in &[(2, 0.1, -10.0), (8, 0.5, 10.0), (32, 0.9, 0.0)] {
            let obj = objective(n, b, inr);
            let c = obj.stationarity_cubic();
            for i in 0..=50 {
                let g = obj.gamma_bar * i as f64 / 50.0;
                let d = obj.derivative(g);
                let p = horner(&c, g);
                if d.abs() > 1e-12 {
                    assert_eq!(d.signum(), p.signum(), "n={n} gamma={g}");
                }
            }
        }
    }

    #[test]
    fn analytic_derivative_matches_differences() {
        let obj = objective(8, 0.5, 10.0);
        for &g in &[0.5, 3.0, 7.5] {
            assert_relative_eq!(obj.derivative(g), numeric_derivative(&obj, g, 1e-3), max_relative = 1e-7);
        }
    }

    #[test]
    fn candidates_contain_endpoints() {
        let obj = objective(4, 0.5, 10.0);
        let cs = gbar_candidates(&obj).unwrap();
        assert_eq!(cs.points[0], 0.0);
        assert_eq!(*cs.points.last().unwrap(), obj.gamma_bar);
    }

    #[test]
    fn no_interference_reduces_to_fixed_waveform_quadratic() {
        // sigma_f^2 = 0: Gbar = (N-1) ln(1 + c (N Pc - g)/(N-1)) + ln(1 + c g), stationary at g = Pc.
        let mut spec = DbSpec::reference(4, 0.5);
        spec.inr_db = -300.0;
        let mut sc = Scenario::from_db(&spec).unwrap();
        sc.var_f = 0.0;
        sc.p_c = 2.0;
        sc.rho_min = 1.0;
        let obj = GammaObjective::new(&sc, NoiseMode::JointWhite).unwrap();
        assert_eq!(obj.gamma_bar, 2.0);
        // endpoint root: the quadratic oracle gives A g^2 + B g + C with roots {Pc, -(N-1+ ...)}.
        let (a, b, c) = crate::solvers::coherent::fixed_waveform_quadratic(&sc, 0.0);
        let q = quadratic_roots(a, b, c);
        assert!(q.iter().any(|&r| (r - 2.0).abs() < 1e-12));
        let cs = gbar_candidates(&obj).unwrap();
        assert_relative_eq!(cs.argmax(&obj), 2.0, epsilon = 1e-12);
    }
}
