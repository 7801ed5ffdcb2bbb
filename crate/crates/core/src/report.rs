//! File formats: matrix fixtures, trial configuration, batch reports and
//! witnesses. Everything round-trips through JSON.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// On-disk matrix: row-major [re, im] pairs, hand-editable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let data = self
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("matrix file serializes");
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// How generated weights are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankPolicy {
    /// Always full rank.
    Full,
    /// Always rank-deficient (rank < dim).
    Deficient,
    /// Alternate, deficient on even trial indices.
    Mixed,
}

impl std::str::FromStr for RankPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(RankPolicy::Full),
            "deficient" => Ok(RankPolicy::Deficient),
            "mixed" => Ok(RankPolicy::Mixed),
            other => Err(Error::Parse(format!("unknown rank policy {other:?}"))),
        }
    }
}

/// One batch verification run's knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Chain and identity ids to exercise.
    pub ids: Vec<String>,
    pub dims: Vec<usize>,
    pub rank_policy: RankPolicy,
    pub trials: usize,
    pub master_seed: u64,
    pub rank_tol: f64,
    pub cmp_tol: f64,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Precondition("trials must be >= 1".into()));
        }
        if self.ids.is_empty() {
            return Err(Error::Precondition("no chain or identity ids requested".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(Error::Precondition("dims must all be >= 2".into()));
        }
        Ok(())
    }
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            ids: crate::inequalities::ChainId::ALL
                .iter()
                .map(|c| c.as_str().to_string())
                .collect(),
            dims: vec![2, 3, 4, 5, 6],
            rank_policy: RankPolicy::Mixed,
            trials: 1000,
            master_seed: 42,
            rank_tol: crate::eig::DEFAULT_RANK_TOL,
            cmp_tol: crate::semihilbert::DEFAULT_CMP_TOL,
        }
    }
}

/// A reproducible instance: everything needed to replay one trial's margin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub id: String,
    pub trial_index: u64,
    pub master_seed: u64,
    pub dim: usize,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    pub weight: MatrixFile,
    pub operator: MatrixFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator2: Option<MatrixFile>,
    pub margin: f64,
}

/// Aggregate over the trials of one chain/identity id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdSummary {
    pub id: String,
    pub trials: usize,
    pub passes: usize,
    pub min_margin: f64,
    pub worst_witness: Witness,
    /// Measured, not derived; kept out of the serialized report so equal
    /// seeds produce byte-identical files.
    #[serde(skip)]
    pub wall_time_secs: f64,
}

/// The batch report emitted by `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchReport {
    pub version: String,
    pub timestamp: String,
    pub config: TrialConfig,
    pub results: Vec<IdSummary>,
    pub all_passed: bool,
}

impl BatchReport {
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_file_round_trip() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.5, -0.25), Complex64::new(0.0, 2.0)],
            vec![Complex64::new(-3.0, 0.0), Complex64::new(0.125, 0.5)],
        ])
        .unwrap();
        let f = MatrixFile::from_matrix(&m);
        let back = f.to_matrix().unwrap();
        assert_eq!(m, back);
        let json = serde_json::to_string(&f).unwrap();
        let f2: MatrixFile = serde_json::from_str(&json).unwrap();
        assert_eq!(f, f2);
    }

    #[test]
    fn matrix_file_rejects_bad_shapes() {
        let f = MatrixFile {
            rows: 2,
            cols: 2,
            data: vec![[1.0, 0.0]; 3],
        };
        assert!(f.to_matrix().is_err());
        let f = MatrixFile {
            rows: 1,
            cols: 1,
            data: vec![[f64::INFINITY, 0.0]],
        };
        assert!(f.to_matrix().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = TrialConfig::default();
        cfg.validate().unwrap();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.dims = vec![1];
        assert!(cfg.validate().is_err());
    }
}
