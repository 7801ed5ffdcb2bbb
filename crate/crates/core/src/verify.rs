//! Batch verification over generated populations, witness replay, and
//! sharpness search.

use rayon::prelude::*;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::generators::{
    rand_a_selfadjoint, rand_in_b_a, rand_psd, RandomStream, SeedSpec,
};
use crate::inequalities::{check_identity, evaluate_chain, ChainId, IdentityId, Sign};
use crate::matrix::ComplexMatrix;
use crate::report::{BatchReport, IdSummary, MatrixFile, RankPolicy, TrialConfig, Witness};
use crate::semihilbert::SemiHilbertContext;

/// A chain or identity, as requested by id string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckId {
    Chain(ChainId),
    Identity(IdentityId),
}

impl CheckId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Chain(c) => c.as_str(),
            CheckId::Identity(i) => i.as_str(),
        }
    }

    fn needs_pair(&self) -> bool {
        match self {
            CheckId::Chain(c) => c.needs_pair(),
            CheckId::Identity(i) => i.needs_pair(),
        }
    }

    fn selfadjoint_population(&self) -> bool {
        match self {
            CheckId::Chain(c) => c.needs_selfadjoint_pair(),
            CheckId::Identity(i) => i.needs_selfadjoint(),
        }
    }

    fn supports_sign(&self) -> bool {
        match self {
            CheckId::Chain(c) => c.supports_sign(),
            CheckId::Identity(_) => false,
        }
    }
}

impl std::str::FromStr for CheckId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(c) = s.parse::<ChainId>() {
            return Ok(CheckId::Chain(c));
        }
        if let Ok(i) = s.parse::<IdentityId>() {
            return Ok(CheckId::Identity(i));
        }
        Err(Error::Parse(format!("unknown chain or identity id {s:?}")))
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// One evaluated trial.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub margin: f64,
    pub passed: bool,
    pub witness: Witness,
}

fn pick_rank(policy: RankPolicy, dim: usize, trial_index: u64, stream: &mut RandomStream) -> usize {
    let deficient = |stream: &mut RandomStream| 1 + (stream.next_u64() % (dim as u64 - 1)) as usize;
    match policy {
        RankPolicy::Full => dim,
        RankPolicy::Deficient => deficient(stream),
        RankPolicy::Mixed => {
            if trial_index % 2 == 0 {
                deficient(stream)
            } else {
                dim
            }
        }
    }
}

/// Generates one instance and evaluates the requested check on it.
pub fn run_trial(check: CheckId, config: &TrialConfig, trial_index: u64) -> Result<TrialOutcome> {
    let id_seed = config.master_seed ^ fnv1a(check.as_str());
    let seed = SeedSpec::new(id_seed, trial_index);
    let mut stream = seed.stream();

    let dim = config.dims[trial_index as usize % config.dims.len()];
    let rank = pick_rank(config.rank_policy, dim, trial_index, &mut stream);
    let a = rand_psd(dim, rank, config.rank_tol, &mut stream)?;
    let ctx = SemiHilbertContext::new(a.clone(), config.rank_tol, config.cmp_tol)?;

    let draw = |stream: &mut RandomStream, ctx: &SemiHilbertContext| -> Result<ComplexMatrix> {
        if check.selfadjoint_population() {
            rand_a_selfadjoint(ctx, stream)
        } else {
            rand_in_b_a(ctx, stream)
        }
    };
    let t = draw(&mut stream, &ctx)?;
    let s = if check.needs_pair() {
        Some(draw(&mut stream, &ctx)?)
    } else {
        None
    };
    let sign = if check.supports_sign() && trial_index % 2 == 1 {
        Sign::Minus
    } else {
        Sign::Plus
    };

    let (margin, passed) = match check {
        CheckId::Chain(chain) => {
            let report = evaluate_chain(chain, &ctx, &t, s.as_ref(), sign)?;
            (report.min_margin(), report.passed)
        }
        CheckId::Identity(identity) => {
            let report = check_identity(identity, &ctx, &t, s.as_ref(), None)?;
            (report.margin(), report.passed)
        }
    };

    Ok(TrialOutcome {
        margin,
        passed,
        witness: Witness {
            id: check.as_str().to_string(),
            trial_index,
            master_seed: config.master_seed,
            dim,
            rank,
            sign: check.supports_sign().then(|| sign.as_str().to_string()),
            weight: MatrixFile::from_matrix(&a),
            operator: MatrixFile::from_matrix(&t),
            operator2: s.as_ref().map(MatrixFile::from_matrix),
            margin,
        },
    })
}

/// Runs the whole batch. Trials execute in parallel; aggregation is by trial
/// index, so output is order-independent and deterministic.
pub fn run_verify(config: &TrialConfig) -> Result<BatchReport> {
    config.validate()?;
    let checks: Vec<CheckId> = config
        .ids
        .iter()
        .map(|s| s.parse::<CheckId>())
        .collect::<Result<_>>()?;

    let mut results = Vec::with_capacity(checks.len());
    for check in checks {
        let start = Instant::now();
        let outcomes: Vec<TrialOutcome> = (0..config.trials as u64)
            .into_par_iter()
            .map(|i| run_trial(check, config, i))
            .collect::<Result<_>>()?;
        let passes = outcomes.iter().filter(|o| o.passed).count();
        let worst = outcomes
            .iter()
            .min_by(|a, b| a.margin.partial_cmp(&b.margin).unwrap())
            .expect("at least one trial");
        results.push(IdSummary {
            id: check.as_str().to_string(),
            trials: outcomes.len(),
            passes,
            min_margin: worst.margin,
            worst_witness: worst.witness.clone(),
            wall_time_secs: start.elapsed().as_secs_f64(),
        });
    }

    let all_passed = results.iter().all(|r| r.passes == r.trials);
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_default();
    Ok(BatchReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp,
        config: config.clone(),
        results,
        all_passed,
    })
}

/// Re-evaluates a persisted witness with the given tolerances, returning its
/// margin and pass status.
pub fn replay_witness(witness: &Witness, rank_tol: f64, cmp_tol: f64) -> Result<(f64, bool)> {
    let check: CheckId = witness.id.parse()?;
    let a = witness.weight.to_matrix()?;
    let ctx = SemiHilbertContext::new(a, rank_tol, cmp_tol)?;
    let t = witness.operator.to_matrix()?;
    let s = witness
        .operator2
        .as_ref()
        .map(|f| f.to_matrix())
        .transpose()?;
    let sign = match witness.sign.as_deref() {
        Some(text) => text.parse()?,
        None => Sign::Plus,
    };
    match check {
        CheckId::Chain(chain) => {
            let report = evaluate_chain(chain, &ctx, &t, s.as_ref(), sign)?;
            Ok((report.min_margin(), report.passed))
        }
        CheckId::Identity(identity) => {
            let report = check_identity(identity, &ctx, &t, s.as_ref(), None)?;
            Ok((report.margin(), report.passed))
        }
    }
}

/// Outcome of a sharpness search.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SharpnessReport {
    pub chain: String,
    pub dim: usize,
    pub restarts: usize,
    pub master_seed: u64,
    pub best_margin: f64,
    pub witness: Witness,
}

const SHARPNESS_ITERS: usize = 400;

/// Random-restart hill climbing that minimizes a chain's smallest margin by
/// coordinate-wise complex perturbations with adaptive step decay. The weight
/// stays a fixed full-rank draw; `restarts = 0` just scores the seed instance.
pub fn sharpness(
    chain: ChainId,
    dim: usize,
    restarts: usize,
    master_seed: u64,
) -> Result<SharpnessReport> {
    let mut base_stream = SeedSpec::new(master_seed, 0).stream();
    let a = rand_psd(dim, dim, crate::eig::DEFAULT_RANK_TOL, &mut base_stream)?;
    let ctx = SemiHilbertContext::with_defaults(a.clone())?;

    let project = |ctx: &SemiHilbertContext, m: &ComplexMatrix| -> Result<ComplexMatrix> {
        if chain.needs_selfadjoint_pair() {
            let adj = ctx.a_adjoint(m)?;
            Ok((m + &adj).scaled(0.5))
        } else {
            Ok(m.clone())
        }
    };
    let score = |t: &ComplexMatrix, s: Option<&ComplexMatrix>| -> Result<f64> {
        Ok(evaluate_chain(chain, &ctx, t, s, Sign::Plus)?.min_margin())
    };
    let draw = |stream: &mut RandomStream| -> Result<ComplexMatrix> {
        let g = rand_in_b_a(&ctx, stream)?;
        project(&ctx, &g)
    };

    let mut best_t = draw(&mut base_stream)?;
    let mut best_s = if chain.needs_pair() {
        Some(draw(&mut base_stream)?)
    } else {
        None
    };
    let mut best_margin = score(&best_t, best_s.as_ref())?;

    for restart in 0..restarts {
        let mut stream = SeedSpec::new(master_seed, restart as u64 + 1).stream();
        let mut t = draw(&mut stream)?;
        let mut s = if chain.needs_pair() {
            Some(draw(&mut stream)?)
        } else {
            None
        };
        let mut margin = score(&t, s.as_ref())?;
        let mut step = 0.5f64;
        for _ in 0..SHARPNESS_ITERS {
            if margin < 1e-9 {
                break;
            }
            let perturb_second = s.is_some() && stream.next_u64() % 2 == 1;
            let target = if perturb_second {
                s.as_ref().unwrap()
            } else {
                &t
            };
            let i = (stream.next_u64() % dim as u64) as usize;
            let j = (stream.next_u64() % dim as u64) as usize;
            let mut candidate = target.clone();
            candidate[(i, j)] += stream.next_complex_normal() * step;
            let candidate = match project(&ctx, &candidate) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let trial_margin = if perturb_second {
                score(&t, Some(&candidate))
            } else {
                score(&candidate, s.as_ref())
            };
            match trial_margin {
                Ok(m) if m < margin => {
                    margin = m;
                    if perturb_second {
                        s = Some(candidate);
                    } else {
                        t = candidate;
                    }
                    step = (step * 1.3).min(1.0);
                }
                _ => {
                    step = (step * 0.8).max(1e-10);
                }
            }
        }
        if margin < best_margin {
            best_margin = margin;
            best_t = t;
            best_s = s;
        }
    }

    Ok(SharpnessReport {
        chain: chain.as_str().to_string(),
        dim,
        restarts,
        master_seed,
        best_margin,
        witness: Witness {
            id: chain.as_str().to_string(),
            trial_index: 0,
            master_seed,
            dim,
            rank: dim,
            sign: None,
            weight: MatrixFile::from_matrix(&a),
            operator: MatrixFile::from_matrix(&best_t),
            operator2: best_s.as_ref().map(MatrixFile::from_matrix),
            margin: best_margin,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(ids: &[&str], trials: usize) -> TrialConfig {
        TrialConfig {
            ids: ids.iter().map(|s| s.to_string()).collect(),
            dims: vec![2, 3],
            rank_policy: RankPolicy::Mixed,
            trials,
            master_seed: 42,
            rank_tol: crate::eig::DEFAULT_RANK_TOL,
            cmp_tol: crate::semihilbert::DEFAULT_CMP_TOL,
        }
    }

    #[test]
    fn verify_small_batch_passes() {
        let cfg = small_config(&["C_REFINE1", "E_DIEZ"], 20);
        let report = run_verify(&cfg).unwrap();
        assert!(report.all_passed);
        assert_eq!(report.results.len(), 2);
        for r in &report.results {
            assert_eq!(r.passes, r.trials);
        }
    }

    #[test]
    fn witness_replays_to_same_margin() {
        let cfg = small_config(&["C_KIT"], 10);
        let report = run_verify(&cfg).unwrap();
        let summary = &report.results[0];
        let (margin, passed) =
            replay_witness(&summary.worst_witness, cfg.rank_tol, cfg.cmp_tol).unwrap();
        assert!((margin - summary.min_margin).abs() <= 1e-12);
        assert!(passed);
    }

    #[test]
    fn verify_is_deterministic() {
        let cfg = small_config(&["C_THN"], 8);
        let a = run_verify(&cfg).unwrap();
        let b = run_verify(&cfg).unwrap();
        let mut ja = serde_json::to_value(&a).unwrap();
        let mut jb = serde_json::to_value(&b).unwrap();
        for j in [&mut ja, &mut jb] {
            j.as_object_mut().unwrap().remove("timestamp");
        }
        assert_eq!(ja, jb);
    }

    #[test]
    fn unknown_id_rejected() {
        let cfg = small_config(&["C_NOPE"], 2);
        assert!(matches!(run_verify(&cfg), Err(Error::Parse(_))));
    }

    #[test]
    fn sharpness_zero_restarts_scores_seed_instance() {
        let report = sharpness(ChainId::Refine1, 2, 0, 7).unwrap();
        assert!(report.best_margin.is_finite());
        let (margin, _) = replay_witness(
            &report.witness,
            crate::eig::DEFAULT_RANK_TOL,
            crate::semihilbert::DEFAULT_CMP_TOL,
        )
        .unwrap();
        assert!((margin - report.best_margin).abs() < 1e-12);
    }
}
