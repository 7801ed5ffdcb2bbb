//! Classical norms and radii: operator norm, numerical radius by angle sweep
//! with golden-section refinement, and spectral radius by scaled repeated
//! squaring.

use num_complex::Complex64;

use crate::eig::hermitian_eig;
use crate::error::Result;
use crate::matrix::ComplexMatrix;

/// Default number of sweep angles for the numerical radius.
pub const DEFAULT_ANGLE_COUNT: usize = 720;

/// Spectral norm √λ_max(M*M).
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    let gram = m.adjoint().matmul(m);
    let eig = hermitian_eig(&gram)?;
    Ok(eig.max_eigenvalue().max(0.0).sqrt())
}

fn rotated_hermitian_max(m: &ComplexMatrix, madj: &ComplexMatrix, theta: f64) -> f64 {
    let phase = Complex64::from_polar(1.0, theta);
    let h = (&m.scaled_c(phase) + &madj.scaled_c(phase.conj())).scaled(0.5);
    // h is Hermitian by construction
    hermitian_eig(&h).map(|e| e.max_eigenvalue()).unwrap_or(f64::NEG_INFINITY)
}

/// Numerical radius: max over θ of λ_max((e^{iθ}M + e^{-iθ}M*)/2), swept on a
/// uniform grid and refined by golden-section search on the bracketing
/// interval down to angle width 1e-12.
pub fn numerical_radius(m: &ComplexMatrix) -> Result<f64> {
    numerical_radius_with(m, DEFAULT_ANGLE_COUNT)
}

pub fn numerical_radius_with(m: &ComplexMatrix, angles: usize) -> Result<f64> {
    m.require_square()?;
    let madj = m.adjoint();
    let f = |theta: f64| rotated_hermitian_max(m, &madj, theta);

    let step = 2.0 * std::f64::consts::PI / angles as f64;
    let mut best_idx = 0usize;
    let mut best = f64::NEG_INFINITY;
    for k in 0..angles {
        let v = f(k as f64 * step);
        if v > best {
            best = v;
            best_idx = k;
        }
    }
    // Refine inside the bracket around the best grid point.
    let lo = (best_idx as f64 - 1.0) * step;
    let hi = (best_idx as f64 + 1.0) * step;
    let refined = golden_section_max(&f, lo, hi, 1e-12);
    Ok(best.max(refined))
}

/// Golden-section maximization of a unimodal-on-bracket function.
fn golden_section_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, width_tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > width_tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

const GELFAND_MAX_DOUBLINGS: usize = 40;
const GELFAND_UNDERFLOW: f64 = 1e-150;

/// Spectral radius by Gelfand's formula with scaled repeated squaring:
/// M_{k+1} = (M_k/‖M_k‖)², accumulating Σ log‖M_k‖/2^k. Returns 0 when the
/// iterate norm underflows (nilpotent directions).
pub fn spectral_radius_gelfand(m: &ComplexMatrix) -> Result<f64> {
    m.require_square()?;
    let mut mk = m.clone();
    let mut log_acc = 0.0f64;
    let mut prev = f64::NAN;
    for k in 0..=GELFAND_MAX_DOUBLINGS {
        let nk = operator_norm(&mk)?;
        if nk < GELFAND_UNDERFLOW {
            return Ok(0.0);
        }
        log_acc += nk.ln() / (1u64 << k) as f64;
        let est = log_acc.exp();
        if k > 0 {
            let denom = 1.0f64.max(est.abs());
            if (est - prev).abs() < 1e-10 * denom {
                return Ok(est);
            }
        }
        prev = est;
        if k < GELFAND_MAX_DOUBLINGS {
            let scaled = mk.scaled(1.0 / nk);
            mk = scaled.matmul(&scaled);
        }
    }
    Ok(prev)
}

/// Spectral radius of the real symmetric 2x2 matrix [[a,b],[b,c]] with
/// a, c ≥ 0: (a + c + √((a-c)² + 4b²))/2.
pub fn sym2x2_spectral_radius(a: f64, b: f64, c: f64) -> f64 {
    0.5 * (a + c + ((a - c).powi(2) + 4.0 * b * b).sqrt())
}
