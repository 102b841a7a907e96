//! Seeded random draws: circular complex Gaussians, Haar-like unitaries and
//! random PSD matrices.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, CMatrix, HermitianMatrix, C64};

/// One draw from `CN(0, 1)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Vector of i.i.d. `CN(0, var)` entries.
pub fn complex_gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize, var: f64) -> Vec<C64> {
    let sd = var.sqrt();
    (0..n).map(|_| complex_normal(rng) * sd).collect()
}

/// Unitary matrix from Gram-Schmidt orthonormalization of a complex Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = complex_gaussian_vec(rng, n, 1.0);
        for _ in 0..2 {
            for c in &cols {
                let p = linalg::dot(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= ci * p;
                }
            }
        }
        let nrm = linalg::norm(&v);
        if nrm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    CMatrix::from_columns(&cols)
}

/// Random unitary whose last column is the unit vector `u`.
pub fn unitary_with_last_column<R: Rng + ?Sized>(rng: &mut R, u: &[C64]) -> CMatrix {
    let n = u.len();
    let base = linalg::unitary_with_last_column(u);
    // Mix the first N-1 columns with a random (N-1)x(N-1) unitary.
    let inner = unitary(rng, n - 1);
    let block = CMatrix::from_fn(n, |i, j| match (i < n - 1, j < n - 1) {
        (true, true) => inner[(i, j)],
        (false, false) => C64::new(1.0, 0.0),
        _ => C64::new(0.0, 0.0),
    });
    base.matmul(&block)
}

/// Random PSD matrix `U diag(d) U^H` with eigenvalues uniform in `[0, scale)`.
pub fn psd_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> HermitianMatrix {
    let u = unitary(rng, n);
    let d: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * scale).collect();
    HermitianMatrix::from_eigen(&u, &d)
}

/// Random HPD matrix with eigenvalues in `[floor, floor + 4]`.
pub fn hpd_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, floor: f64) -> HermitianMatrix {
    let u = unitary(rng, n);
    let d: Vec<f64> = (0..n).map(|_| floor + 4.0 * rng.random::<f64>()).collect();
    HermitianMatrix::from_eigen(&u, &d)
}

/// Point on the probability simplex with a uniform (flat Dirichlet) law.
pub fn simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Gauss-Jordan inverse with partial pivoting; used as an independent oracle.
pub fn dense_inverse(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let mut m = a.clone();
    let mut inv = CMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))
            .expect("non-empty");
        for k in 0..n {
            let (x, y) = (m[(col, k)], m[(pivot, k)]);
            m[(col, k)] = y;
            m[(pivot, k)] = x;
            let (x, y) = (inv[(col, k)], inv[(pivot, k)]);
            inv[(col, k)] = y;
            inv[(pivot, k)] = x;
        }
        let p = m[(col, col)];
        for k in 0..n {
            m[(col, k)] /= p;
            inv[(col, k)] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[(r, col)];
                for k in 0..n {
                    let mv = m[(col, k)];
                    let iv = inv[(col, k)];
                    m[(r, k)] -= f * mv;
                    inv[(r, k)] -= f * iv;
                }
            }
        }
    }
    inv
}
