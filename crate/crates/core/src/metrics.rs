//! Figures of merit: radar SINR, interference-free and interfered comm rates,
//! compound rate, the Kullback-Leibler pair and PAPR.
//!
//! Rates are in bits per channel use; divergences are in nats.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianMatrix, HpdFactor, C64};
use crate::scenario::{Design, InterferenceModel, Scenario};

/// A pair of communication rates (bits/channel use) without and with interference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r0: f64,
    pub r1: f64,
}

impl RatePoint {
    /// `beta R1 + (1 - beta) R0`.
    pub fn weighted(&self, beta: f64) -> f64 {
        beta * self.r1 + (1.0 - beta) * self.r0
    }
}

/// Interference-plus-noise covariance at the radar, `sigma_g^2 R_x + sigma_c^2 s s^H + M`.
pub fn radar_disturbance(sc: &Scenario, d: &Design) -> HermitianMatrix {
    d.rx
        .scale(sc.var_g)
        .add(&sc.noise)
        .add_rank_one(sc.var_c, &d.s)
}

/// `sigma_a^2 s^H (sigma_g^2 R_x + sigma_c^2 s s^H + M)^{-1} s`.
pub fn sinr(sc: &Scenario, d: &Design) -> Result<f64> {
    let q = radar_disturbance(sc, d);
    let factor = HpdFactor::new(&q).map_err(|e| match e {
        Error::Domain(msg) => Error::NumericalFailure(format!("radar disturbance is singular: {msg}")),
        other => other,
    })?;
    Ok((sc.var_a * factor.inv_quad_form(&d.s)).max(0.0))
}

/// `(1/N) log2 det(I + |h|^2/sigma_v^2 R_x)`.
pub fn rate0(sc: &Scenario, rx: &HermitianMatrix) -> Result<f64> {
    check_dim(sc, rx.dim())?;
    Ok(linalg::logdet2_psd_plus(&rx.scale(sc.h2 / sc.var_v))? / sc.n as f64)
}

/// Interfered rate, dispatched on the scenario's interference model.
pub fn rate1(sc: &Scenario, d: &Design) -> Result<f64> {
    match &sc.interference {
        InterferenceModel::Coherent => rate1_coherent(sc, d),
        InterferenceModel::Incoherent => rate1_incoherent(sc, d),
        InterferenceModel::General(rf) => rate1_general(sc, d, rf),
    }
}

/// `(1/N) log2 det(I + c R_x (I + S R_f S^H / sigma_v^2)^{-1})` for any PSD `R_f`,
/// evaluated as `log2 det(B + c R_x) - log2 det(B)` with `B = I + S R_f S^H / sigma_v^2`.
pub fn rate1_general(sc: &Scenario, d: &Design, rf: &HermitianMatrix) -> Result<f64> {
    check_dim(sc, d.rx.dim())?;
    linalg::check_psd(&d.rx)?;
    let n = sc.n;
    let srs = CMatrix::from_fn(n, |i, j| d.s[i] * rf.matrix()[(i, j)] * d.s[j].conj());
    let b = HermitianMatrix::new(CMatrix::identity(n).add(&srs.scale(1.0 / sc.var_v)));
    let with_signal = b.add(&d.rx.scale(sc.h2 / sc.var_v));
    let num = linalg::log2det_hpd(&with_signal)?;
    let den = linalg::log2det_hpd(&b)?;
    Ok(((num - den) / n as f64).max(0.0))
}

/// Rank-one specialization for `R_f = sigma_f^2 1 1^T`:
/// `R0 - (1/N) log2[(1 + f ||s||^2) / (1 + f s^H (I + c R_x)^{-1} s)]`.
pub fn rate1_coherent(sc: &Scenario, d: &Design) -> Result<f64> {
    let r0 = rate0(sc, &d.rx)?;
    let f = sc.var_f / sc.var_v;
    let eps = linalg::norm_sqr(&d.s);
    if f * eps == 0.0 {
        return Ok(r0);
    }
    let a = HermitianMatrix::identity(sc.n).add(&d.rx.scale(sc.h2 / sc.var_v));
    let q = HpdFactor::new(&a)?.inv_quad_form(&d.s);
    let loss = ((1.0 + f * eps) / (1.0 + f * q)).log2();
    Ok((r0 - loss / sc.n as f64).max(0.0))
}

/// Diagonal specialization for `R_f = sigma_f^2 I`:
/// `(1/N) log2 det(I + c D^{1/2} R_x D^{1/2})` with `D = diag(1 / (1 + f |s_i|^2))`.
pub fn rate1_incoherent(sc: &Scenario, d: &Design) -> Result<f64> {
    check_dim(sc, d.rx.dim())?;
    let f = sc.var_f / sc.var_v;
    let w: Vec<f64> = d.s.iter().map(|z| 1.0 / (1.0 + f * z.norm_sqr()).sqrt()).collect();
    let scaled = CMatrix::from_fn(sc.n, |i, j| d.rx.matrix()[(i, j)] * (w[i] * w[j]));
    let a = HermitianMatrix::new(scaled).scale(sc.h2 / sc.var_v);
    Ok(linalg::logdet2_psd_plus(&a)? / sc.n as f64)
}

/// `beta R1 + (1 - beta) R0`.
pub fn compound_rate(sc: &Scenario, d: &Design) -> Result<f64> {
    let r0 = rate0(sc, &d.rx)?;
    let r1 = rate1(sc, d)?;
    Ok(sc.beta * r1 + (1.0 - sc.beta) * r0)
}

pub fn rate_point(sc: &Scenario, d: &Design) -> Result<RatePoint> {
    Ok(RatePoint { r0: rate0(sc, &d.rx)?, r1: rate1(sc, d)? })
}

/// `(D(f1||f0), D(f0||f1))` in nats for the radar hypotheses at the given SINR.
pub fn kl_divergences(sinr: f64) -> Result<(f64, f64)> {
    if !(sinr >= 0.0) {
        return Err(Error::Domain(format!("SINR must be non-negative, got {sinr}")));
    }
    let l = sinr.ln_1p();
    Ok((sinr - l, l - sinr / (1.0 + sinr)))
}

/// `N max |s_n|^2 / ||s||^2`.
pub fn papr(s: &[C64]) -> Result<f64> {
    let e = linalg::norm_sqr(s);
    if e == 0.0 {
        return Err(Error::Domain("PAPR of the zero vector is undefined".into()));
    }
    let peak = s.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
    Ok(s.len() as f64 * peak / e)
}

/// Converts a natural-log objective value to bits per channel use.
pub fn nats_to_rate(nats: f64, n: usize) -> f64 {
    nats / (n as f64 * LN_2)
}

fn check_dim(sc: &Scenario, dim: usize) -> Result<()> {
    if dim != sc.n {
        return Err(Error::Domain(format!("matrix dimension {dim} does not match N = {}", sc.n)));
    }
    Ok(())
}
