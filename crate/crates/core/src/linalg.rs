//! Dense complex linear algebra for the small Hermitian matrices used by the
//! solvers: eigendecomposition, HPD solves and log-determinants.
//!
//! Eigenvalues are always sorted in descending order, so "smallest" means the
//! last entry. Degenerate eigenspaces are given a canonical basis (see
//! [`eigh`]), which makes every downstream closed form reproducible.

use std::f64::consts::LN_2;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;
/// Eigenvalues closer than this (relative to the spectral radius) share a
/// canonicalized eigenspace.
const CLUSTER_TOL: f64 = 1e-11;
/// Eigenvalues above `-PSD_CLAMP` are treated as zero when a PSD input is expected.
pub const PSD_CLAMP: f64 = 1e-10;
/// Eigenvalues below `-PSD_REJECT` mean the input is not PSD.
pub const PSD_REJECT: f64 = 1e-6;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    /// Builds a matrix from row-major entries. Fails if `data.len() != n*n`.
    pub fn from_row_major(n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Domain(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(CMatrix { n, data })
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let n = cols.len();
        Self::from_fn(n, |i, j| cols[j][i])
    }

    /// Outer product `u v^H`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.n, v.len(), "dimension mismatch");
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn scale(&self, k: f64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.add(&other.scale(-1.0))
    }

    /// Largest absolute deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// A matrix known to be Hermitian. Construction symmetrizes `(H + H^H)/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "CMatrix", try_from = "CMatrix")]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Self {
        let adj = m.adjoint();
        HermitianMatrix(m.add(&adj).scale(0.5))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(CMatrix::identity(n))
    }

    pub fn scaled_identity(n: usize, k: f64) -> Self {
        HermitianMatrix(CMatrix::identity(n).scale(k))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(n))
    }

    pub fn from_diag(d: &[f64]) -> Self {
        HermitianMatrix(CMatrix::from_diag(d))
    }

    /// `k` times the all-ones matrix.
    pub fn all_ones(n: usize, k: f64) -> Self {
        HermitianMatrix(CMatrix::from_fn(n, |_, _| C64::new(k, 0.0)))
    }

    /// Exponentially correlated covariance `var * r^|i-j|`.
    pub fn exp_corr(n: usize, var: f64, r: f64) -> Self {
        HermitianMatrix(CMatrix::from_fn(n, |i, j| {
            C64::new(var * r.powi((i as i32 - j as i32).abs()), 0.0)
        }))
    }

    /// `u u^H`.
    pub fn rank_one(u: &[C64]) -> Self {
        HermitianMatrix::new(CMatrix::outer(u, u))
    }

    /// `U diag(d) U^H`.
    pub fn from_eigen(u: &CMatrix, d: &[f64]) -> Self {
        let scaled = CMatrix::from_fn(u.dim(), |i, j| u[(i, j)] * d[j]);
        HermitianMatrix::new(scaled.matmul(&u.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn diag_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(self.0.add(&other.0))
    }

    pub fn scale(&self, k: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(k))
    }

    /// `self + k * u u^H`.
    pub fn add_rank_one(&self, k: f64, u: &[C64]) -> HermitianMatrix {
        self.add(&HermitianMatrix::rank_one(u).scale(k))
    }

    /// `A H A^H` for an arbitrary square `A`.
    pub fn congruence(&self, a: &CMatrix) -> HermitianMatrix {
        HermitianMatrix::new(a.matmul(&self.0).matmul(&a.adjoint()))
    }

    /// `x^H H x`.
    pub fn quad_form(&self, x: &[C64]) -> f64 {
        dot(x, &self.0.mul_vec(x)).re
    }

    /// True when all off-diagonal entries vanish and the diagonal is constant
    /// (relative tolerance `tol`).
    pub fn is_scaled_identity(&self, tol: f64) -> bool {
        let d = self.0[(0, 0)].re;
        let scale = d.abs().max(f64::MIN_POSITIVE);
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let target = if i == j { d } else { 0.0 };
                (self.0[(i, j)] - target).norm() <= tol * scale
            })
        })
    }
}

impl From<HermitianMatrix> for CMatrix {
    fn from(h: HermitianMatrix) -> CMatrix {
        h.0
    }
}

impl TryFrom<CMatrix> for HermitianMatrix {
    type Error = Error;
    fn try_from(m: CMatrix) -> Result<Self> {
        let defect = m.hermitian_defect();
        if defect > 1e-9 * m.frobenius_norm().max(1.0) {
            return Err(Error::Domain(format!("matrix is not Hermitian (defect {defect:.3e})")));
        }
        Ok(HermitianMatrix::new(m))
    }
}

/// Eigenvalues sorted descending with their eigenvectors as matching columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        HermitianMatrix::from_eigen(&self.vectors, &self.values)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come out descending. Each cluster of (numerically) equal
/// eigenvalues gets a canonical orthonormal basis obtained by Gram-Schmidt on
/// the cluster projector's columns in index order, and every eigenvector is
/// phase-rotated so its first non-negligible component is real positive.
/// Consequently `eigh(I)` returns `U = I`.
pub fn eigh(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * scale {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged {
            return Err(Error::NumericalFailure(format!(
                "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut columns: Vec<Vec<C64>> = order.iter().map(|&i| v.column(i)).collect();

    let radius = values.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[start] - values[end] <= CLUSTER_TOL * radius {
            end += 1;
        }
        if end - start > 1 {
            let basis = canonical_basis(&columns[start..end]);
            columns.splice(start..end, basis);
        }
        start = end;
    }
    for col in &mut columns {
        normalize_phase(col);
    }

    Ok(EigenDecomposition { values, vectors: CMatrix::from_columns(&columns) })
}

fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change the diagonal in floating point.
    if mag < 1e-300 || (app.abs() + aqq.abs()) * 1e-18 > mag {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // W = D R with D = diag(1, conj(phase)) on (p, q).
    let w_pp = C64::new(c, 0.0);
    let w_pq = C64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;

    let n = a.dim();
    // A <- A W (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    // A <- W^H A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
}

/// Orthonormal basis of span(cols) built from projector columns in index order.
fn canonical_basis(cols: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = cols[0].len();
    let k = cols.len();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k);
    for j in 0..n {
        if basis.len() == k {
            break;
        }
        // P e_j = sum_c c * conj(c_j)
        let mut w = vec![ZERO; n];
        for c in cols {
            let cj = c[j].conj();
            for (wi, ci) in w.iter_mut().zip(c) {
                *wi += ci * cj;
            }
        }
        for _ in 0..2 {
            for b in &basis {
                let proj = dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= bi * proj;
                }
            }
        }
        let nrm = norm(&w);
        if nrm > 1e-3 {
            basis.push(w.into_iter().map(|z| z / nrm).collect());
        }
    }
    debug_assert_eq!(basis.len(), k);
    basis
}

fn normalize_phase(v: &mut [C64]) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-8) {
        let rot = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

/// Lower-triangular Cholesky factor of an HPD matrix.
pub fn cholesky(h: &HermitianMatrix) -> Result<CMatrix> {
    let n = h.dim();
    let a = h.matrix();
    let floor = 1e-14 * (h.trace().abs() / n as f64).max(f64::MIN_POSITIVE);
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > floor) {
            return Err(Error::Domain(format!(
                "matrix is not positive definite (pivot {d:.3e} at index {j})"
            )));
        }
        let ljj = d.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

fn cholesky_solve(l: &CMatrix, b: &[C64]) -> Vec<C64> {
    let n = l.dim();
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)].re;
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)].conj() * y[k];
        }
        y[i] = s / l[(i, i)].re;
    }
    y
}

/// A Cholesky factorization kept around for repeated solves.
#[derive(Clone, Debug)]
pub struct HpdFactor {
    h: HermitianMatrix,
    l: CMatrix,
}

impl HpdFactor {
    pub fn new(h: &HermitianMatrix) -> Result<Self> {
        let n = h.dim();
        let ed = eigh(h)?;
        let floor = 1e-12 * h.trace() / n as f64;
        if !(ed.min_value() > floor) {
            return Err(Error::Domain(format!(
                "matrix is not positive definite (min eigenvalue {:.3e})",
                ed.min_value()
            )));
        }
        Ok(HpdFactor { h: h.clone(), l: cholesky(h)? })
    }

    /// Factorizes without the eigenvalue margin check; only the Cholesky
    /// pivots guard against indefiniteness. Meant for inner optimization loops.
    pub fn new_unchecked(h: &HermitianMatrix) -> Result<Self> {
        Ok(HpdFactor { h: h.clone(), l: cholesky(h)? })
    }

    /// Solves `H x = b` with one step of iterative refinement.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x = cholesky_solve(&self.l, b);
        let hx = self.h.matrix().mul_vec(&x);
        let r: Vec<C64> = b.iter().zip(&hx).map(|(bi, hi)| bi - hi).collect();
        let dx = cholesky_solve(&self.l, &r);
        for (xi, di) in x.iter_mut().zip(dx) {
            *xi += di;
        }
        x
    }

    /// `b^H H^{-1} b`.
    pub fn inv_quad_form(&self, b: &[C64]) -> f64 {
        dot(b, &self.solve(b)).re
    }

    /// `log2 det H`.
    pub fn log2_det(&self) -> f64 {
        (0..self.l.dim()).map(|i| self.l[(i, i)].re.ln()).sum::<f64>() * 2.0 / LN_2
    }

    pub fn lower(&self) -> &CMatrix {
        &self.l
    }
}

/// Solves `H x = b` for Hermitian positive definite `H`.
pub fn solve_hpd(h: &HermitianMatrix, b: &[C64]) -> Result<Vec<C64>> {
    Ok(HpdFactor::new(h)?.solve(b))
}

/// `log2 det H` for HPD `H` via Cholesky.
pub fn log2det_hpd(h: &HermitianMatrix) -> Result<f64> {
    Ok(HpdFactor { h: h.clone(), l: cholesky(h)? }.log2_det())
}

/// `log2 det(I + A) = sum_i log2(1 + lambda_i(A))` for PSD `A`.
pub fn logdet2_psd_plus(a: &HermitianMatrix) -> Result<f64> {
    let ed = eigh(a)?;
    let mut acc = 0.0;
    for &l in &ed.values {
        if l < -PSD_REJECT {
            return Err(Error::Domain(format!("matrix is not PSD (eigenvalue {l:.3e})")));
        }
        acc += l.max(0.0).ln_1p();
    }
    Ok(acc / LN_2)
}

/// Smallest eigenvalue and its eigenvector, consistent with [`eigh`] ordering.
pub fn min_eigpair(h: &HermitianMatrix) -> Result<(f64, Vec<C64>)> {
    let ed = eigh(h)?;
    let n = h.dim();
    Ok((ed.values[n - 1], ed.vector(n - 1)))
}

/// Checks that `h` is PSD within the clamping threshold.
pub fn check_psd(h: &HermitianMatrix) -> Result<()> {
    let ed = eigh(h)?;
    let m = ed.min_value();
    if m < -PSD_REJECT {
        return Err(Error::Domain(format!("matrix is not PSD (min eigenvalue {m:.3e})")));
    }
    Ok(())
}

/// Unitary matrix whose last column is the unit vector `u`.
///
/// Built from a Householder reflector, so `u = e_N` gives the identity.
pub fn unitary_with_last_column(u: &[C64]) -> CMatrix {
    let n = u.len();
    let un = u[n - 1];
    let phase = if un.norm() > 0.0 { un / un.norm() } else { ONE };
    // Reflector H maps e_N onto conj(phase) u, whose last entry is real.
    let target: Vec<C64> = u.iter().map(|z| z * phase.conj()).collect();
    let mut w = target.clone();
    w[n - 1] -= ONE;
    let wn = norm_sqr(&w);
    let mut h = CMatrix::identity(n);
    if wn > 1e-30 {
        let outer = CMatrix::outer(&w, &w).scale(2.0 / wn);
        h = h.sub(&outer);
    }
    // Restore the phase of the last column.
    for i in 0..n {
        h[(i, n - 1)] *= phase;
    }
    h
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    norm_sqr(v).sqrt()
}

pub fn scale_vec(v: &[C64], k: f64) -> Vec<C64> {
    v.iter().map(|z| z * k).collect()
}

/// Standard basis vector `e_i` of length `n`.
pub fn basis_vector(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

pub fn real_vec(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}
