//! Seeded, deterministic random instance generation for the operator
//! populations the verification suite quantifies over.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::semihilbert::SemiHilbertContext;

/// Identifies one trial's private random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    /// Per-trial stream, seeded by a splitmix-style mix of master seed and
    /// trial index. Identical SeedSpec values give bit-identical streams.
    pub fn stream(&self) -> RandomStream {
        let mut s = RandomStream(self.master_seed ^ 0x517c_c1b7_2722_0a95);
        let mixed = s.next_u64() ^ self.trial_index.wrapping_mul(0x2545_f491_4f6c_dd1d);
        RandomStream(mixed)
    }
}

/// splitmix64 state; cheap, full-period, and reproducible across platforms.
#[derive(Debug, Clone)]
pub struct RandomStream(u64);

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in (0, 1].
    pub fn next_unit(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) / (1u64 << 53) as f64
    }

    /// Standard real normal pair via Box–Muller.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Complex standard normal: independent N(0,1) real and imaginary parts.
    pub fn next_complex_normal(&mut self) -> Complex64 {
        let (re, im) = self.next_gaussian_pair();
        Complex64::new(re, im)
    }

    pub fn next_complex_vector(&mut self, len: usize) -> Vec<Complex64> {
        (0..len).map(|_| self.next_complex_normal()).collect()
    }
}

/// Square Ginibre draw: i.i.d. complex standard normal entries.
pub fn rand_ginibre(dim: usize, stream: &mut RandomStream) -> ComplexMatrix {
    rand_ginibre_rect(dim, dim, stream)
}

pub fn rand_ginibre_rect(rows: usize, cols: usize, stream: &mut RandomStream) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = stream.next_complex_normal();
        }
    }
    m
}

const PSD_RESAMPLE_LIMIT: usize = 40;
/// Minimum relative eigen-gap for a generated weight's kept spectrum. Keeps
/// the weight's condition number at or below 1e3 so membership residuals of
/// derived operators stay well under the rank_tol contract; amplification
/// through the pseudoinverse scales with the condition number.
const PSD_GAP: f64 = 1e-3;

/// Hermitian PSD weight of prescribed numerical rank: G·G* for a dim×rank
/// Ginibre draw, resampled until the kept eigenvalues sit comfortably above
/// the rank threshold.
pub fn rand_psd(
    dim: usize,
    rank: usize,
    rank_tol: f64,
    stream: &mut RandomStream,
) -> Result<ComplexMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::Precondition(format!(
            "rank must lie in 1..={dim}, got {rank}"
        )));
    }
    for _ in 0..PSD_RESAMPLE_LIMIT {
        let g = rand_ginibre_rect(dim, rank, stream);
        let a = g.matmul(&g.adjoint());
        let eig = crate::eig::hermitian_eig(&a)?;
        let lam_max = eig.max_eigenvalue().max(0.0);
        if lam_max == 0.0 {
            continue;
        }
        let kept = eig
            .eigenvalues
            .iter()
            .filter(|&&l| l > rank_tol * lam_max)
            .count();
        let gap_ok = eig.eigenvalues[rank - 1] >= PSD_GAP * lam_max;
        if kept == rank && gap_ok {
            return Ok(a);
        }
    }
    Err(Error::Generation(format!(
        "could not draw a rank-{rank} PSD weight of dimension {dim} in {PSD_RESAMPLE_LIMIT} attempts"
    )))
}

/// Rescale so the A-seminorm lands in a numerically comfortable range. The
/// N(A)-side rows do not contribute to the seminorm, so dividing by a small
/// seminorm can blow them up; they are capped separately (which changes
/// neither the seminorm nor any membership) to keep powers and products of
/// the draw free of catastrophic cancellation.
fn normalize_seminorm(ctx: &SemiHilbertContext, t: ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = ctx.a_op_seminorm(&t)?;
    let t = if norm > 1e-12 {
        t.scaled(1.0 / norm)
    } else {
        t
    };
    let complement = &ComplexMatrix::identity(ctx.dim()) - ctx.projector();
    let off = complement.matmul(&t);
    let off_norm = off.frob_norm();
    if off_norm > 1.0 {
        Ok(&(&t - &off) + &off.scaled(1.0 / off_norm))
    } else {
        Ok(t)
    }
}

/// A-adjointable draw: Ginibre with the N(A) → R(A) block removed, so that
/// T maps N(A) into N(A) and the range condition holds by construction.
pub fn rand_in_b_a(ctx: &SemiHilbertContext, stream: &mut RandomStream) -> Result<ComplexMatrix> {
    let n = ctx.dim();
    let g = rand_ginibre(n, stream);
    let p = ctx.projector();
    let complement = &ComplexMatrix::identity(n) - p;
    let t = &g - &p.matmul(&g).matmul(&complement);
    normalize_seminorm(ctx, t)
}

/// A-selfadjoint draw: (X + X^♯A)/2 for an A-adjointable X.
pub fn rand_a_selfadjoint(
    ctx: &SemiHilbertContext,
    stream: &mut RandomStream,
) -> Result<ComplexMatrix> {
    let x = rand_in_b_a(ctx, stream)?;
    let adj = ctx.a_adjoint(&x)?;
    normalize_seminorm(ctx, (&x + &adj).scaled(0.5))
}

/// A-positive draw: X^♯A·X for an A-adjointable X.
pub fn rand_a_positive(
    ctx: &SemiHilbertContext,
    stream: &mut RandomStream,
) -> Result<ComplexMatrix> {
    let x = rand_in_b_a(ctx, stream)?;
    let adj = ctx.a_adjoint(&x)?;
    normalize_seminorm(ctx, adj.matmul(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::DEFAULT_RANK_TOL;

    #[test]
    fn same_seed_same_matrix() {
        let a = rand_ginibre(4, &mut SeedSpec::new(42, 7).stream());
        let b = rand_ginibre(4, &mut SeedSpec::new(42, 7).stream());
        assert_eq!(a, b);
        let c = rand_ginibre(4, &mut SeedSpec::new(42, 8).stream());
        assert_ne!(a, c);
    }

    #[test]
    fn ginibre_scalar_case() {
        let m = rand_ginibre(1, &mut SeedSpec::new(1, 0).stream());
        assert_eq!((m.rows(), m.cols()), (1, 1));
    }

    #[test]
    fn ginibre_second_moment() {
        let mut stream = SeedSpec::new(9, 0).stream();
        let mut acc = 0.0;
        let mut count = 0usize;
        for _ in 0..1000 {
            let m = rand_ginibre(4, &mut stream);
            acc += m.data().iter().map(|z| z.norm_sqr()).sum::<f64>();
            count += 16;
        }
        let mean = acc / count as f64;
        assert!((mean - 2.0).abs() < 0.2, "mean |z|^2 = {mean}");
    }

    #[test]
    fn psd_rank_control() {
        let mut stream = SeedSpec::new(5, 0).stream();
        let a = rand_psd(4, 2, DEFAULT_RANK_TOL, &mut stream).unwrap();
        assert_eq!(
            crate::eig::numerical_rank(&a, DEFAULT_RANK_TOL).unwrap(),
            2
        );
        let eig = crate::eig::hermitian_eig(&a).unwrap();
        let lam_max = eig.max_eigenvalue();
        assert!(eig.min_eigenvalue() >= -1e-12 * lam_max);
    }

    #[test]
    fn psd_rejects_bad_rank() {
        let mut stream = SeedSpec::new(5, 0).stream();
        assert!(rand_psd(3, 0, DEFAULT_RANK_TOL, &mut stream).is_err());
        assert!(rand_psd(3, 4, DEFAULT_RANK_TOL, &mut stream).is_err());
    }

    #[test]
    fn population_membership() {
        for trial in 0..50u64 {
            let seed = SeedSpec::new(1234, trial);
            let mut stream = seed.stream();
            let a = rand_psd(3, 2, DEFAULT_RANK_TOL, &mut stream).unwrap();
            let ctx = SemiHilbertContext::with_defaults(a).unwrap();
            let t = rand_in_b_a(&ctx, &mut stream).unwrap();
            let m = ctx.in_b_a(&t).unwrap();
            assert!(m.holds, "trial {trial}: residual {}", m.residual);
            assert!(m.residual <= 1e-10 * (1.0 + t.frob_norm()));

            let h = rand_a_selfadjoint(&ctx, &mut stream).unwrap();
            assert!(ctx.a_selfadjoint_residual(&h).unwrap() <= 1e-10);

            let p = rand_a_positive(&ctx, &mut stream).unwrap();
            assert!(ctx.is_a_positive(&p).unwrap(), "trial {trial}");
        }
    }

    #[test]
    fn full_rank_weight_leaves_ginibre_unchanged() {
        let seed = SeedSpec::new(77, 3);
        let ctx = SemiHilbertContext::with_defaults(ComplexMatrix::identity(3)).unwrap();
        let mut s1 = seed.stream();
        let t = rand_in_b_a(&ctx, &mut s1).unwrap();
        let mut s2 = seed.stream();
        let g = rand_ginibre(3, &mut s2);
        // same draw up to the seminorm rescale
        let scale = t[(0, 0)] / g[(0, 0)];
        assert!(t.frob_dist(&g.scaled_c(scale)) < 1e-12 * g.frob_norm());
    }

    #[test]
    fn singular_weight_kills_corner_block() {
        let seed = SeedSpec::new(3, 1);
        let a = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let ctx = SemiHilbertContext::with_defaults(a).unwrap();
        let t = rand_in_b_a(&ctx, &mut seed.stream()).unwrap();
        assert!(t[(0, 1)].norm() < 1e-14);
    }
}
