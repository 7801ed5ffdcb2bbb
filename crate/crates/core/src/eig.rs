//! Hermitian eigendecomposition (cyclic Jacobi) and the PSD calculus built on
//! it: pseudoinverse, square root, range projector.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default relative threshold separating numerical rank from noise.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Spectral decomposition of a Hermitian matrix: M = V diag(λ) V*.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Real eigenvalues, sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvector columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// V diag(f(λ)) V* for a real spectral function f.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * fk;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

const MAX_SWEEPS: usize = 100;

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations with complex
/// phase handling. The input is symmetrized as (M + M*)/2 before iterating; a
/// Hermitian deviation beyond 1e-10·(1+‖M‖_F) is rejected. Convergence is
/// declared when the off-diagonal Frobenius mass drops below 1e-14·‖M‖_F.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    m.require_square()?;
    let n = m.rows();
    let dev = m.hermitian_deviation();
    if dev > 1e-10 * (1.0 + m.frob_norm()) {
        return Err(Error::Precondition(format!(
            "matrix is not Hermitian (deviation {dev:.3e})"
        )));
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frob_norm();
    let target = 1e-14 * scale;

    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::EPSILON * scale {
                    continue;
                }
                // Phase u = a_pq/|a_pq| makes the pivot real; a real Jacobi
                // angle then annihilates it. The combined rotation G acts on
                // the (p,q) plane with G[p][p]=c, G[p][q]=s·u, G[q][p]=-s·ū,
                // G[q][q]=c.
                let u = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- A·G (columns p, q).
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * (s * u.conj());
                    a[(i, q)] = aip * (s * u) + aiq * c;
                }
                // A <- G*·A (rows p, q).
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * (s * u);
                    a[(q, j)] = apj * (s * u.conj()) + aqj * c;
                }
                // The pivot is annihilated by construction; pin it to zero
                // and keep the diagonal exactly real.
                a[(p, q)] = num_complex::Complex64::new(0.0, 0.0);
                a[(q, p)] = num_complex::Complex64::new(0.0, 0.0);
                a[(p, p)] = num_complex::Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = num_complex::Complex64::new(a[(q, q)].re, 0.0);

                // V <- V·G.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * (s * u.conj());
                    v[(i, q)] = vip * (s * u) + viq * c;
                }
            }
        }
    }

    // Sort eigenpairs descending.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (newcol, &oldcol) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, newcol)] = v[(i, oldcol)];
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Eigendecomposition plus a PSD admissibility check: any eigenvalue below
/// -rank_tol·λ_max is rejected.
fn psd_eig(m: &ComplexMatrix, rank_tol: f64) -> Result<HermitianEig> {
    let eig = hermitian_eig(m)?;
    let lam_max = eig.max_eigenvalue().max(0.0);
    let floor = rank_tol * lam_max + f64::EPSILON * m.frob_norm();
    let lam_min = eig.min_eigenvalue();
    if lam_min < -floor {
        return Err(Error::NotPsd { min_eig: lam_min });
    }
    Ok(eig)
}

/// Moore–Penrose pseudoinverse of a Hermitian PSD matrix: eigenvalues above
/// rank_tol·λ_max are inverted, the rest dropped.
pub fn moore_penrose_pinv(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(Error::Precondition(format!(
            "rank_tol must lie in (0,1), got {rank_tol}"
        )));
    }
    let eig = psd_eig(m, rank_tol)?;
    let cut = rank_tol * eig.max_eigenvalue().max(0.0);
    Ok(eig.apply_spectral(|l| if l > cut { 1.0 / l } else { 0.0 }))
}

/// Hermitian PSD square root; eigenvalues negative within tolerance are
/// clamped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = psd_eig(m, DEFAULT_RANK_TOL)?;
    Ok(eig.apply_spectral(|l| l.max(0.0).sqrt()))
}

/// Orthogonal projector onto the range of a Hermitian PSD matrix.
pub fn range_projector(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(Error::Precondition(format!(
            "rank_tol must lie in (0,1), got {rank_tol}"
        )));
    }
    let eig = psd_eig(m, rank_tol)?;
    let cut = rank_tol * eig.max_eigenvalue().max(0.0);
    Ok(eig.apply_spectral(|l| if l > cut { 1.0 } else { 0.0 }))
}

/// Numerical rank of a Hermitian PSD matrix at the given relative threshold.
pub fn numerical_rank(m: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    let eig = psd_eig(m, rank_tol)?;
    let cut = rank_tol * eig.max_eigenvalue().max(0.0);
    Ok(eig.eigenvalues.iter().filter(|&&l| l > cut).count())
}
