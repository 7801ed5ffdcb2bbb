//! Every inequality chain and identity of the weighted-radius theory,
//! evaluated as ordered scalar tuples with pass/fail margins.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::semihilbert::{AOperator, SemiHilbertContext};
use crate::spectral::{operator_norm, sym2x2_spectral_radius};

/// Sign choice for the two-operator triangle-type chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn combine(&self, t: &ComplexMatrix, s: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Sign::Plus => t + s,
            Sign::Minus => t - s,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("unknown sign {other:?}"))),
        }
    }
}

/// The evaluable inequality chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainId {
    Refine1,
    Kit,
    Thm1,
    LemSq,
    Thn,
    Int,
    Thm3,
    Refan,
    Corf,
    Drog0,
    Thm2,
    Moradi,
}

impl ChainId {
    pub const ALL: [ChainId; 12] = [
        ChainId::Refine1,
        ChainId::Kit,
        ChainId::Thm1,
        ChainId::LemSq,
        ChainId::Thn,
        ChainId::Int,
        ChainId::Thm3,
        ChainId::Refan,
        ChainId::Corf,
        ChainId::Drog0,
        ChainId::Thm2,
        ChainId::Moradi,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChainId::Refine1 => "C_REFINE1",
            ChainId::Kit => "C_KIT",
            ChainId::Thm1 => "C_THM1",
            ChainId::LemSq => "C_LEM_SQ",
            ChainId::Thn => "C_THN",
            ChainId::Int => "C_INT",
            ChainId::Thm3 => "C_THM3",
            ChainId::Refan => "C_REFAN",
            ChainId::Corf => "C_CORF",
            ChainId::Drog0 => "C_DROG0",
            ChainId::Thm2 => "C_THM2",
            ChainId::Moradi => "C_MORADI",
        }
    }

    /// Chains quantifying over an operator pair.
    pub fn needs_pair(&self) -> bool {
        matches!(
            self,
            ChainId::LemSq | ChainId::Int | ChainId::Refan | ChainId::Drog0 | ChainId::Moradi
        )
    }

    /// Chains whose hypothesis is an A-selfadjoint pair.
    pub fn needs_selfadjoint_pair(&self) -> bool {
        matches!(self, ChainId::LemSq)
    }

    /// Chains carrying a ± sign.
    pub fn supports_sign(&self) -> bool {
        matches!(self, ChainId::Refan | ChainId::Drog0)
    }
}

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChainId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ChainId::ALL
            .iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown chain id {s:?}")))
    }
}

/// The evaluable identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    Diez,
    Commut,
    S1,
    Sharpp,
    Block,
    Submult,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [
        IdentityId::Diez,
        IdentityId::Commut,
        IdentityId::S1,
        IdentityId::Sharpp,
        IdentityId::Block,
        IdentityId::Submult,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Diez => "E_DIEZ",
            IdentityId::Commut => "E_COMMUT",
            IdentityId::S1 => "E_S1",
            IdentityId::Sharpp => "E_SHARPP",
            IdentityId::Block => "E_BLOCK",
            IdentityId::Submult => "E_SUBMULT",
        }
    }

    pub fn needs_pair(&self) -> bool {
        matches!(self, IdentityId::Commut | IdentityId::Block | IdentityId::Submult)
    }

    pub fn needs_selfadjoint(&self) -> bool {
        matches!(self, IdentityId::S1 | IdentityId::Block)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown identity id {s:?}")))
    }
}

/// One named scalar of a chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainTerm {
    pub name: String,
    pub value: f64,
}

/// An evaluated chain: ordered terms, consecutive margins, and the verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityChainReport {
    pub chain_id: String,
    pub terms: Vec<ChainTerm>,
    pub margins: Vec<f64>,
    pub passed: bool,
    pub slack_used: f64,
    /// Set when a quadrature hit its panel cap before meeting tolerance.
    pub quadrature_warning: bool,
}

impl InequalityChainReport {
    fn build(chain_id: ChainId, named: Vec<(&str, f64)>, cmp_tol: f64, warn: bool) -> Self {
        let terms: Vec<ChainTerm> = named
            .into_iter()
            .map(|(name, value)| ChainTerm {
                name: name.to_string(),
                value,
            })
            .collect();
        let margins: Vec<f64> = terms
            .windows(2)
            .map(|w| w[1].value - w[0].value)
            .collect();
        let mut passed = true;
        let mut slack_used = 0.0f64;
        for (i, &m) in margins.iter().enumerate() {
            let allowance = cmp_tol + cmp_tol * terms[i + 1].value.abs().max(1.0);
            if m < -allowance {
                passed = false;
            }
            slack_used = slack_used.max(-m);
        }
        Self {
            chain_id: chain_id.as_str().to_string(),
            terms,
            margins,
            passed,
            slack_used: slack_used.max(0.0),
            quadrature_warning: warn,
        }
    }

    /// Smallest consecutive margin; negative when some step inverted.
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

///// An evaluated identity: representative scalars and the deviation verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityReport {
    fn build(id: IdentityId, lhs: f64, rhs: f64, deviation: f64, tolerance: f64) -> Self {
        Self {
            identity_id: id.as_str().to_string(),
            lhs,
            rhs,
            relative_deviation: deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }

    /// Slack remaining before failure; negative means failed.
    pub fn margin(&self) -> f64 {
        self.tolerance - self.relative_deviation
    }
}

/// γ(T) = √((‖Re_A(T)‖²_A − ‖Im_A(T)‖²_A)² + 4‖Re_A(T)·Im_A(T)‖²_A).
pub fn gamma(ctx: &SemiHilbertContext, t: &ComplexMatrix) -> Result<f64> {
    let op = AOperator::bind(ctx, t.clone())?;
    gamma_op(&op)
}

fn gamma_op(op: &AOperator<'_>) -> Result<f64> {
    let ctx = op.ctx();
    let re = op.re_a()?;
    let im = op.im_a()?;
    let nr = ctx.a_op_seminorm(re)?;
    let ni = ctx.a_op_seminorm(im)?;
    let nri = ctx.a_op_seminorm(&re.matmul(im))?;
    Ok(((nr * nr - ni * ni).powi(2) + 4.0 * nri * nri).sqrt())
}

const QUAD_START_PANELS: usize = 8;
const QUAD_MAX_PANELS: usize = 1 << 14;
const QUAD_REL_TOL: f64 = 1e-9;

/// ∫₀¹ ‖λX + (1−λ)M‖_A dλ by composite Simpson with panel doubling. The
/// boolean is a warning flag set when the panel cap was hit before the
/// doubling estimates agreed.
pub fn integral_mean_norm(
    ctx: &SemiHilbertContext,
    x: &ComplexMatrix,
    m: &ComplexMatrix,
) -> Result<(f64, bool)> {
    let xc = ctx.compress(x)?;
    let mc = ctx.compress(m)?;
    let f = |lambda: f64| -> Result<f64> {
        let blend = &xc.scaled(lambda) + &mc.scaled(1.0 - lambda);
        operator_norm(&blend)
    };

    let mut panels = QUAD_START_PANELS;
    let mut prev = simpson(&f, panels)?;
    loop {
        panels *= 2;
        let next = simpson(&f, panels)?;
        if (next - prev).abs() <= QUAD_REL_TOL * (1.0 + next.abs()) {
            return Ok((next, false));
        }
        if panels >= QUAD_MAX_PANELS {
            return Ok((next, true));
        }
        prev = next;
    }
}

fn simpson(f: &dyn Fn(f64) -> Result<f64>, panels: usize) -> Result<f64> {
    let h = 1.0 / panels as f64;
    let mut acc = f(0.0)? + f(1.0)?;
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(k as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

fn require_selfadjoint(ctx: &SemiHilbertContext, t: &ComplexMatrix, role: &str) -> Result<()> {
    if !ctx.is_a_selfadjoint(t)? {
        return Err(Error::Precondition(format!(
            "{role} must be A-selfadjoint (residual {:.3e})",
            ctx.a_selfadjoint_residual(t)?
        )));
    }
    Ok(())
}

fn require_operand(s: Option<&ComplexMatrix>, id: &str) -> Result<ComplexMatrix> {
    s.cloned()
        .ok_or_else(|| Error::Precondition(format!("{id} requires a second operator")))
}

/// ‖T^♯A·T + T·T^♯A‖_A, the quantity K the refinement chains sandwich.
fn kittaneh_term(op: &AOperator<'_>) -> Result<f64> {
    let adj = op.adjoint()?;
    let sum = &adj.matmul(op.matrix()) + &op.matrix().matmul(adj);
    op.ctx().a_op_seminorm(&sum)
}

/// Evaluates one chain instance. `s` is required for pair chains, `sign`
/// only matters for the ± variants.
pub fn evaluate_chain(
    chain_id: ChainId,
    ctx: &SemiHilbertContext,
    t: &ComplexMatrix,
    s: Option<&ComplexMatrix>,
    sign: Sign,
) -> Result<InequalityChainReport> {
    let cmp_tol = ctx.cmp_tol();
    let op = AOperator::bind(ctx, t.clone())?;
    if !op.membership().holds {
        return Err(Error::Precondition(format!(
            "operator T is not A-adjointable (residual {:.3e})",
            op.membership().residual
        )));
    }

    let report = match chain_id {
        ChainId::Refine1 => {
            let norm = op.seminorm()?;
            let omega = op.numerical_radius()?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("half_seminorm", 0.5 * norm),
                    ("a_numerical_radius", omega),
                    ("a_seminorm", norm),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::Kit => {
            let k = kittaneh_term(&op)?;
            let omega = op.numerical_radius()?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("half_sqrt_k", 0.5 * k.sqrt()),
                    ("a_numerical_radius", omega),
                    ("sqrt2_over_2_sqrt_k", std::f64::consts::FRAC_1_SQRT_2 * k.sqrt()),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::Thm1 => {
            let k = kittaneh_term(&op)?;
            let nr = ctx.a_op_seminorm(op.re_a()?)?;
            let ni = ctx.a_op_seminorm(op.im_a()?)?;
            let mid = std::f64::consts::FRAC_1_SQRT_2 * (nr * nr + ni * ni).sqrt();
            let omega = op.numerical_radius()?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("half_sqrt_k", 0.5 * k.sqrt()),
                    ("cartesian_mean", mid),
                    ("a_numerical_radius", omega),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::LemSq => {
            let s_mat = require_operand(s, chain_id.as_str())?;
            require_selfadjoint(ctx, t, "T")?;
            require_selfadjoint(ctx, &s_mat, "S")?;
            let t2 = t.matmul(t);
            let s2 = s_mat.matmul(&s_mat);
            let lhs = ctx.a_op_seminorm(&(&t2 + &s2))?;
            let nt2 = ctx.a_op_seminorm(&t2)?;
            let ns2 = ctx.a_op_seminorm(&s2)?;
            let nts = ctx.a_op_seminorm(&t.matmul(&s_mat))?;
            let rhs = 0.5 * (nt2 + ns2 + ((nt2 - ns2).powi(2) + 4.0 * nts * nts).sqrt());
            InequalityChainReport::build(
                chain_id,
                vec![("sum_of_squares_seminorm", lhs), ("symmetric_radius_bound", rhs)],
                cmp_tol,
                false,
            )
        }
        ChainId::Thn => {
            let k = kittaneh_term(&op)?;
            let omega = op.numerical_radius()?;
            let g = gamma_op(&op)?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("quarter_k", 0.25 * k),
                    ("refined_mean", 0.25 * (2.0 * omega * omega + g)),
                    ("omega_squared", omega * omega),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::Int => {
            let s_mat = require_operand(s, chain_id.as_str())?;
            let mid_mat = (&(t + &s_mat)).scaled(0.5);
            let (i1, w1) = integral_mean_norm(ctx, t, &mid_mat)?;
            let (i2, w2) = integral_mean_norm(ctx, &s_mat, &mid_mat)?;
            let lhs = ctx.a_op_seminorm(&(t + &s_mat))?;
            let rhs = ctx.a_op_seminorm(t)? + ctx.a_op_seminorm(&s_mat)?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("sum_seminorm", lhs),
                    ("integral_mean_sum", i1 + i2),
                    ("triangle_bound", rhs),
                ],
                cmp_tol,
                w1 || w2,
            )
        }
        ChainId::Thm3 => {
            let k = kittaneh_term(&op)?;
            let re = op.re_a()?;
            let im = op.im_a()?;
            let re2 = re.matmul(re);
            let im2 = im.matmul(im);
            let mid_mat = (&(&re2 + &im2)).scaled(0.5);
            let (j1, w1) = integral_mean_norm(ctx, &re2, &mid_mat)?;
            let (j2, w2) = integral_mean_norm(ctx, &im2, &mid_mat)?;
            let omega = op.numerical_radius()?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("quarter_k", 0.25 * k),
                    ("integral_mean", 0.5 * j1 + 0.5 * j2),
                    ("omega_squared", omega * omega),
                ],
                cmp_tol,
                w1 || w2,
            )
        }
        ChainId::Refan => {
            let s_mat = require_operand(s, chain_id.as_str())?;
            let sop = AOperator::bind(ctx, s_mat.clone())?;
            let tadj = op.adjoint()?;
            let sadj = sop.adjoint()?;
            let lhs = ctx.a_op_seminorm(&sign.combine(t, &s_mat))?;
            let gram = &tadj.matmul(t) + &sadj.matmul(&s_mat);
            let cross = &tadj.matmul(&s_mat) + &sadj.matmul(t);
            let mid = (ctx.a_op_seminorm(&gram)? + ctx.a_op_seminorm(&cross)?).sqrt();
            let rhs = op.seminorm()? + sop.seminorm()?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("combined_seminorm", lhs),
                    ("gram_cross_bound", mid),
                    ("triangle_bound", rhs),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::Corf => {
            let k = kittaneh_term(&op)?;
            let omega = op.numerical_radius()?;
            let re = op.re_a()?;
            let im = op.im_a()?;
            let prod = im.matmul(im).matmul(&re.matmul(re));
            let nprod = ctx.a_op_seminorm(&prod)?;
            let mid = std::f64::consts::FRAC_1_SQRT_2 * (omega.powi(4) + nprod).sqrt();
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("quarter_k", 0.25 * k),
                    ("cartesian_product_bound", mid),
                    ("omega_squared", omega * omega),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::Drog0 => {
            let s_mat = require_operand(s, chain_id.as_str())?;
            let sop = AOperator::bind(ctx, s_mat.clone())?;
            let tadj = op.adjoint()?;
            let sadj = sop.adjoint()?;
            let lhs = ctx.a_op_seminorm(&sign.combine(t, &s_mat))?;
            let gram = &t.matmul(tadj) + &s_mat.matmul(sadj);
            let omega_cross = ctx.a_numerical_radius(&t.matmul(sadj))?;
            let mid = (ctx.a_op_seminorm(&gram)? + 2.0 * omega_cross).sqrt();
            let rhs = op.seminorm()? + sop.seminorm()?;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("combined_seminorm", lhs),
                    ("gram_omega_bound", mid),
                    ("triangle_bound", rhs),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::Thm2 => {
            let k = kittaneh_term(&op)?;
            let omega = op.numerical_radius()?;
            let re = op.re_a()?;
            let im = op.im_a()?;
            let prod = im.matmul(im).matmul(&re.matmul(re));
            let omega_prod = ctx.a_numerical_radius(&prod)?;
            let mid = std::f64::consts::FRAC_1_SQRT_2 * (omega.powi(4) + omega_prod).sqrt();
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("quarter_k", 0.25 * k),
                    ("cartesian_omega_bound", mid),
                    ("omega_squared", omega * omega),
                ],
                cmp_tol,
                false,
            )
        }
        ChainId::Moradi => {
            let s_mat = require_operand(s, chain_id.as_str())?;
            let sop = AOperator::bind(ctx, s_mat.clone())?;
            let sadj = sop.adjoint()?;
            let lhs = ctx.a_op_seminorm(&(t + &s_mat))?;
            let nt = op.seminorm()?;
            let ns = sop.seminorm()?;
            let ncross = ctx.a_op_seminorm(&t.matmul(sadj))?;
            let omega_cross = ctx.a_numerical_radius(&sadj.matmul(t))?;
            let inner = 0.5
                * (nt * nt
                    + ns * ns
                    + ((nt * nt - ns * ns).powi(2) + 4.0 * ncross * ncross).sqrt())
                + 2.0 * omega_cross;
            InequalityChainReport::build(
                chain_id,
                vec![
                    ("sum_seminorm", lhs),
                    ("radius_refined_bound", inner.sqrt()),
                    ("triangle_bound", nt + ns),
                ],
                cmp_tol,
                false,
            )
        }
    };
    Ok(report)
}

/// Per-clause tolerances for the A-selfadjoint lemma check.
const S1_ADJOINT_TOL: f64 = 1e-9;
const S1_OMEGA_TOL: f64 = 1e-8;
const S1_RADIUS_TOL: f64 = 1e-6;
const S1_POWER_TOL: f64 = 1e-7;
const S1_POSITIVITY_TOL: f64 = 1e-9;

/// Evaluates one identity instance. For E_S1, `n` caps the power clause
/// (default 5). The report's deviation for multi-clause identities is the
/// worst clause deviation normalized by its own tolerance (so the identity
/// tolerance is 1).
pub fn check_identity(
    identity_id: IdentityId,
    ctx: &SemiHilbertContext,
    t: &ComplexMatrix,
    s: Option<&ComplexMatrix>,
    n: Option<u32>,
) -> Result<IdentityReport> {
    match identity_id {
        IdentityId::Diez => {
            let op = AOperator::bind(ctx, t.clone())?;
            let adj = op.adjoint()?;
            let vals = [
                ctx.a_op_seminorm(&adj.matmul(t))?,
                ctx.a_op_seminorm(&t.matmul(adj))?,
                op.seminorm()?.powi(2),
                ctx.a_op_seminorm(adj)?.powi(2),
            ];
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let dev = (hi - lo) / (1.0 + hi.abs());
            Ok(IdentityReport::build(identity_id, vals[0], vals[2], dev, 1e-8))
        }
        IdentityId::Commut => {
            let s_mat = require_operand(s, identity_id.as_str())?;
            let lhs = ctx.a_spectral_radius(&t.matmul(&s_mat))?;
            let rhs = ctx.a_spectral_radius(&s_mat.matmul(t))?;
            let dev = (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()));
            Ok(IdentityReport::build(identity_id, lhs, rhs, dev, 1e-6))
        }
        IdentityId::S1 => {
            require_selfadjoint(ctx, t, "T")?;
            let op = AOperator::bind(ctx, t.clone())?;
            let adj = op.adjoint()?;
            let max_power = n.unwrap_or(5).clamp(2, 12);
            let mut worst = 0.0f64;
            let mut track = |dev: f64, tol: f64| worst = worst.max(dev / tol);

            // (i) T^♯A is A-selfadjoint and (T^♯A)^♯A = T^♯A.
            track(ctx.a_selfadjoint_residual(adj)?, S1_ADJOINT_TOL);
            let adj2 = ctx.a_adjoint(adj)?;
            track(
                adj2.frob_dist(adj) / (1.0 + adj.frob_norm()),
                S1_ADJOINT_TOL,
            );

            // (ii) ‖T‖_A = ω_A(T) = r_A(T).
            let norm = op.seminorm()?;
            let omega = op.numerical_radius()?;
            let radius = op.spectral_radius()?;
            track((norm - omega).abs(), S1_OMEGA_TOL);
            track((norm - radius).abs(), S1_RADIUS_TOL);

            // (iii) ‖Tⁿ‖_A = ‖T‖_Aⁿ.
            for p in 2..=max_power {
                let np = ctx.a_op_seminorm(&t.pow(p))?;
                let expect = norm.powi(p as i32);
                track((np - expect).abs() / (1.0 + expect), S1_POWER_TOL);
            }

            // (vi) T^{2n} is A-positive.
            for p in [2u32, 4] {
                let tp = t.pow(p);
                let at = ctx.weight().matmul(&tp);
                let herm = at.hermitian_part();
                let lam_min = hermitian_eig(&herm)?.min_eigenvalue();
                let scale = operator_norm(&at)?;
                let dev = (-lam_min).max(0.0) / (1.0 + scale);
                track(dev, S1_POSITIVITY_TOL);
            }

            Ok(IdentityReport::build(identity_id, norm, omega, worst, 1.0))
        }
        IdentityId::Sharpp => {
            let op = AOperator::bind(ctx, t.clone())?;
            let adj = op.adjoint()?;
            let sum = &t.matmul(adj) + &adj.matmul(t);
            let lhs = ctx.a_adjoint(&sum)?.scaled(0.5);
            let re_adj = ctx.a_adjoint(op.re_a()?)?;
            let im_adj = ctx.a_adjoint(op.im_a()?)?;
            let rhs = &re_adj.matmul(&re_adj) + &im_adj.matmul(&im_adj);
            let dev = lhs.frob_dist(&rhs) / (1.0 + lhs.frob_norm());
            Ok(IdentityReport::build(
                identity_id,
                lhs.frob_norm(),
                rhs.frob_norm(),
                dev,
                1e-8,
            ))
        }
        IdentityId::Block => {
            let s_mat = require_operand(s, identity_id.as_str())?;
            require_selfadjoint(ctx, t, "T")?;
            require_selfadjoint(ctx, &s_mat, "S")?;
            let t2 = t.matmul(t);
            let s2 = s_mat.matmul(&s_mat);
            let ts = t.matmul(&s_mat);
            let st = s_mat.matmul(t);
            let block = ComplexMatrix::block2x2(&t2, &ts, &st, &s2)?;
            let big = ctx.block_diag_context()?;
            let lhs = big.a_spectral_radius(&block)?;
            let rhs = sym2x2_spectral_radius(
                ctx.a_op_seminorm(&t2)?,
                ctx.a_op_seminorm(&ts)?,
                ctx.a_op_seminorm(&s2)?,
            );
            let dev = (lhs - rhs).max(0.0) / (1.0 + rhs.abs());
            Ok(IdentityReport::build(identity_id, lhs, rhs, dev, 1e-6))
        }
        IdentityId::Submult => {
            let s_mat = require_operand(s, identity_id.as_str())?;
            let lhs = ctx.a_op_seminorm(&t.matmul(&s_mat))?;
            let rhs = ctx.a_op_seminorm(t)? * ctx.a_op_seminorm(&s_mat)?;
            let dev = (lhs - rhs).max(0.0) / (1.0 + rhs.abs());
            Ok(IdentityReport::build(identity_id, lhs, rhs, dev, ctx.cmp_tol()))
        }
    }
}
