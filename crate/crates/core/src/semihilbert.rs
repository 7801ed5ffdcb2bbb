//! The semi-Hilbert layer: a validated PSD weight A with its derived objects,
//! and every A-relative operator quantity (adjoint, seminorm, numerical
//! radius, spectral radius) computed through the compression
//! T̃ = A^{1/2}·T·(A^{1/2})^†.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::eig::{hermitian_eig, HermitianEig, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::{numerical_radius, operator_norm, spectral_radius_gelfand};

/// Default inequality comparison slack.
pub const DEFAULT_CMP_TOL: f64 = 1e-8;

/// Outcome of a membership test, carrying the Frobenius residual.
#[derive(Debug, Clone, Copy)]
pub struct Membership {
    pub holds: bool,
    pub residual: f64,
}

/// A weight A together with its spectral machinery: A^{1/2}, (A^{1/2})^†,
/// A^†, the range projector P, numerical rank, and tolerances.
#[derive(Debug)]
pub struct SemiHilbertContext {
    weight: ComplexMatrix,
    sqrt_weight: ComplexMatrix,
    pinv_sqrt_weight: ComplexMatrix,
    pinv_weight: ComplexMatrix,
    projector: ComplexMatrix,
    rank: usize,
    rank_tol: f64,
    cmp_tol: f64,
}

impl SemiHilbertContext {
    /// Validates A (square, Hermitian PSD, nonzero) and precomputes the
    /// derived objects from a single eigendecomposition.
    pub fn new(a: ComplexMatrix, rank_tol: f64, cmp_tol: f64) -> Result<Self> {
        a.require_square()?;
        if !(rank_tol > 0.0 && rank_tol < 1.0) {
            return Err(Error::Precondition(format!(
                "rank_tol must lie in (0,1), got {rank_tol}"
            )));
        }
        let eig = hermitian_eig(&a)?;
        let lam_max = eig.max_eigenvalue().max(0.0);
        if lam_max <= 0.0 || a.frob_norm() == 0.0 {
            return Err(Error::ZeroWeight);
        }
        let floor = rank_tol * lam_max + f64::EPSILON * a.frob_norm();
        if eig.min_eigenvalue() < -floor {
            return Err(Error::NotPsd {
                min_eig: eig.min_eigenvalue(),
            });
        }
        let cut = rank_tol * lam_max;
        let keep = |l: f64| l > cut;
        let rank = eig.eigenvalues.iter().filter(|&&l| keep(l)).count();
        if rank == 0 {
            return Err(Error::ZeroWeight);
        }
        let spectral = |f: &dyn Fn(f64) -> f64| -> ComplexMatrix {
            eig.apply_spectral(|l| if keep(l) { f(l) } else { 0.0 })
        };
        Ok(Self {
            sqrt_weight: spectral(&|l| l.sqrt()),
            pinv_sqrt_weight: spectral(&|l| 1.0 / l.sqrt()),
            pinv_weight: spectral(&|l| 1.0 / l),
            projector: spectral(&|_| 1.0),
            rank,
            rank_tol,
            cmp_tol,
            weight: a,
        })
    }

    pub fn with_defaults(a: ComplexMatrix) -> Result<Self> {
        Self::new(a, DEFAULT_RANK_TOL, DEFAULT_CMP_TOL)
    }

    pub fn dim(&self) -> usize {
        self.weight.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn cmp_tol(&self) -> f64 {
        self.cmp_tol
    }

    pub fn weight(&self) -> &ComplexMatrix {
        &self.weight
    }

    pub fn sqrt_weight(&self) -> &ComplexMatrix {
        &self.sqrt_weight
    }

    pub fn pinv_sqrt_weight(&self) -> &ComplexMatrix {
        &self.pinv_sqrt_weight
    }

    pub fn pinv_weight(&self) -> &ComplexMatrix {
        &self.pinv_weight
    }

    pub fn projector(&self) -> &ComplexMatrix {
        &self.projector
    }

    fn require_dim(&self, t: &ComplexMatrix) -> Result<()> {
        if t.rows() != self.dim() || t.cols() != self.dim() {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, weight is {}x{}",
                t.rows(),
                t.cols(),
                self.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Semi-inner product ⟨x,y⟩_A = ⟨Ax,y⟩, linear in the first argument.
    pub fn a_inner(&self, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::Dimension("vector length mismatch".into()));
        }
        let ax = self.weight.matvec(x)?;
        Ok(ax.iter().zip(y).map(|(a, b)| a * b.conj()).sum())
    }

    /// Seminorm ‖x‖_A = √⟨Ax,x⟩; vanishes exactly on N(A).
    pub fn a_norm_vec(&self, x: &[Complex64]) -> Result<f64> {
        let v = self.a_inner(x, x)?;
        Ok(v.re.max(0.0).sqrt())
    }

    /// Membership in the A-adjointable class: R(T*A) ⊆ R(A), tested as
    /// ‖(I-P)·T*·A‖_F against the relative rank tolerance. Normalized by the
    /// operand scale ‖A‖_F·‖T‖_F (backward error), not by ‖T*A‖_F: products
    /// like A^♯-derived powers can have tiny ‖T*A‖ next to a huge ‖T‖, and
    /// roundoff in the forming of T scales with the latter.
    pub fn in_b_a(&self, t: &ComplexMatrix) -> Result<Membership> {
        self.require_dim(t)?;
        let tsa = t.adjoint().matmul(&self.weight);
        let complement = &ComplexMatrix::identity(self.dim()) - &self.projector;
        let residual = complement.matmul(&tsa).frob_norm();
        let scale = self.weight.frob_norm() * t.frob_norm();
        Ok(Membership {
            holds: residual <= self.rank_tol * (1.0 + scale),
            residual,
        })
    }

    /// Membership in the A-bounded class: T maps N(A) into N(A^{1/2}),
    /// tested as ‖A^{1/2}·T·(I-P)‖_F with the same backward-error
    /// normalization.
    pub fn in_b_a_half(&self, t: &ComplexMatrix) -> Result<Membership> {
        self.require_dim(t)?;
        let st = self.sqrt_weight.matmul(t);
        let complement = &ComplexMatrix::identity(self.dim()) - &self.projector;
        let residual = st.matmul(&complement).frob_norm();
        let scale = self.sqrt_weight.frob_norm() * t.frob_norm();
        Ok(Membership {
            holds: residual <= self.rank_tol * (1.0 + scale),
            residual,
        })
    }

    /// The reduced solution of AX = T*A, namely T^♯A = A^†·T*·A.
    pub fn a_adjoint(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        let membership = self.in_b_a(t)?;
        if !membership.holds {
            return Err(Error::NotAAdjointable {
                residual: membership.residual,
            });
        }
        Ok(self.pinv_weight.matmul(&t.adjoint()).matmul(&self.weight))
    }

    /// Re_A(T) = (T + T^♯A)/2.
    pub fn re_a(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        let adj = self.a_adjoint(t)?;
        Ok((t + &adj).scaled(0.5))
    }

    /// Im_A(T) = (T - T^♯A)/(2i), computed as -i·(T - Re_A(T)) so that
    /// Re_A(T) + i·Im_A(T) = T exactly.
    pub fn im_a(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        let re = self.re_a(t)?;
        Ok((t - &re).scaled_c(Complex64::new(0.0, -1.0)))
    }

    /// True iff AT is selfadjoint (AT = T*A within the rank tolerance).
    pub fn is_a_selfadjoint(&self, t: &ComplexMatrix) -> Result<bool> {
        Ok(self.a_selfadjoint_residual(t)? <= self.rank_tol)
    }

    /// Normalized residual ‖AT - T*A‖_F / (1 + ‖AT‖_F).
    pub fn a_selfadjoint_residual(&self, t: &ComplexMatrix) -> Result<f64> {
        self.require_dim(t)?;
        let at = self.weight.matmul(t);
        let tsa = t.adjoint().matmul(&self.weight);
        Ok(at.frob_dist(&tsa) / (1.0 + at.frob_norm()))
    }

    /// True iff AT ≥ 0: selfadjoint plus λ_min(Herm(AT)) above the noise floor.
    pub fn is_a_positive(&self, t: &ComplexMatrix) -> Result<bool> {
        if !self.is_a_selfadjoint(t)? {
            return Ok(false);
        }
        let at = self.weight.matmul(t);
        let herm = at.hermitian_part();
        let eig = hermitian_eig(&herm)?;
        let scale = operator_norm(&at)?;
        Ok(eig.min_eigenvalue() >= -self.rank_tol * (1.0 + scale))
    }

    /// Compression T̃ = A^{1/2}·T·(A^{1/2})^†, the computational carrier of
    /// the A-weighted norm, numerical radius and spectral radius.
    pub fn compress(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        let membership = self.in_b_a_half(t)?;
        if !membership.holds {
            return Err(Error::NotABounded {
                residual: membership.residual,
            });
        }
        Ok(self.sqrt_weight.matmul(t).matmul(&self.pinv_sqrt_weight))
    }

    /// A-seminorm ‖T‖_A = ‖T̃‖.
    pub fn a_op_seminorm(&self, t: &ComplexMatrix) -> Result<f64> {
        operator_norm(&self.compress(t)?)
    }

    /// A-numerical radius ω_A(T) = ω(T̃).
    pub fn a_numerical_radius(&self, t: &ComplexMatrix) -> Result<f64> {
        numerical_radius(&self.compress(t)?)
    }

    /// A-spectral radius r_A(T) = r(T̃); valid because compression is
    /// multiplicative on the A-bounded class, so ‖Tⁿ‖_A = ‖T̃ⁿ‖.
    pub fn a_spectral_radius(&self, t: &ComplexMatrix) -> Result<f64> {
        spectral_radius_gelfand(&self.compress(t)?)
    }

    /// Context for the doubled weight diag(A, A), assembled blockwise from
    /// the already-computed derived objects.
    pub fn block_diag_context(&self) -> Result<SemiHilbertContext> {
        let n = self.dim();
        let z = ComplexMatrix::zeros(n, n);
        let dbl = |m: &ComplexMatrix| ComplexMatrix::block2x2(m, &z, &z, m).unwrap();
        Ok(SemiHilbertContext {
            weight: dbl(&self.weight),
            sqrt_weight: dbl(&self.sqrt_weight),
            pinv_sqrt_weight: dbl(&self.pinv_sqrt_weight),
            pinv_weight: dbl(&self.pinv_weight),
            projector: dbl(&self.projector),
            rank: 2 * self.rank,
            rank_tol: self.rank_tol,
            cmp_tol: self.cmp_tol,
        })
    }

    /// Eigendecomposition of the weight (fresh; contexts keep only the
    /// derived matrices).
    pub fn weight_eig(&self) -> Result<HermitianEig> {
        hermitian_eig(&self.weight)
    }
}

/// An operator bound to a context, with write-once caches for the quantities
/// chain evaluation reuses: adjoint, real/imaginary parts, compression, and
/// the derived scalars.
#[derive(Debug)]
pub struct AOperator<'c> {
    ctx: &'c SemiHilbertContext,
    t: ComplexMatrix,
    in_b_a: Membership,
    in_b_a_half: Membership,
    adjoint: OnceLock<ComplexMatrix>,
    re: OnceLock<ComplexMatrix>,
    im: OnceLock<ComplexMatrix>,
    compression: OnceLock<ComplexMatrix>,
    seminorm: OnceLock<f64>,
    omega: OnceLock<f64>,
}

impl<'c> AOperator<'c> {
    pub fn bind(ctx: &'c SemiHilbertContext, t: ComplexMatrix) -> Result<Self> {
        let in_b_a = ctx.in_b_a(&t)?;
        let in_b_a_half = ctx.in_b_a_half(&t)?;
        Ok(Self {
            ctx,
            t,
            in_b_a,
            in_b_a_half,
            adjoint: OnceLock::new(),
            re: OnceLock::new(),
            im: OnceLock::new(),
            compression: OnceLock::new(),
            seminorm: OnceLock::new(),
            omega: OnceLock::new(),
        })
    }

    pub fn ctx(&self) -> &'c SemiHilbertContext {
        self.ctx
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn membership(&self) -> Membership {
        self.in_b_a
    }

    pub fn membership_half(&self) -> Membership {
        self.in_b_a_half
    }

    pub fn adjoint(&self) -> Result<&ComplexMatrix> {
        if !self.in_b_a.holds {
            return Err(Error::NotAAdjointable {
                residual: self.in_b_a.residual,
            });
        }
        Ok(self.adjoint.get_or_init(|| {
            self.ctx
                .pinv_weight()
                .matmul(&self.t.adjoint())
                .matmul(self.ctx.weight())
        }))
    }

    pub fn re_a(&self) -> Result<&ComplexMatrix> {
        let adj = self.adjoint()?;
        Ok(self.re.get_or_init(|| (&self.t + adj).scaled(0.5)))
    }

    pub fn im_a(&self) -> Result<&ComplexMatrix> {
        let re = self.re_a()?;
        Ok(self
            .im
            .get_or_init(|| (&self.t - re).scaled_c(Complex64::new(0.0, -1.0))))
    }

    pub fn compression(&self) -> Result<&ComplexMatrix> {
        if !self.in_b_a_half.holds {
            return Err(Error::NotABounded {
                residual: self.in_b_a_half.residual,
            });
        }
        Ok(self.compression.get_or_init(|| {
            self.ctx
                .sqrt_weight()
                .matmul(&self.t)
                .matmul(self.ctx.pinv_sqrt_weight())
        }))
    }

    pub fn seminorm(&self) -> Result<f64> {
        if let Some(&v) = self.seminorm.get() {
            return Ok(v);
        }
        let v = operator_norm(self.compression()?)?;
        Ok(*self.seminorm.get_or_init(|| v))
    }

    pub fn numerical_radius(&self) -> Result<f64> {
        if let Some(&v) = self.omega.get() {
            return Ok(v);
        }
        let v = numerical_radius(self.compression()?)?;
        Ok(*self.omega.get_or_init(|| v))
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius_gelfand(self.compression()?)
    }
}

pub fn block2x2(
    t11: &ComplexMatrix,
    t12: &ComplexMatrix,
    t21: &ComplexMatrix,
    t22: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    ComplexMatrix::block2x2(t11, t12, t21, t22)
}
