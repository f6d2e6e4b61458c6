use std::path::Path;

use super::{permissible_m, SignalModel};
use crate::matrices::Family;
use crate::{Error, Result};

/// How the sparsity levels of a sweep are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KGrid {
    /// Every `k` from 1 when `m <= 200`; otherwise 16 geometric points
    /// followed by up to 24 points between the last rate >= 0.95 and the
    /// first rate <= 0.05.
    Auto,
    /// 12 geometric points and up to 8 refinement points for every `m`.
    Coarse,
}

impl std::str::FromStr for KGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(KGrid::Auto),
            "coarse" => Ok(KGrid::Coarse),
            other => Err(Error::InvalidParameter(format!("unknown k grid '{other}'"))),
        }
    }
}

impl std::fmt::Display for KGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KGrid::Auto => "auto",
            KGrid::Coarse => "coarse",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseConfig {
    pub family: Family,
    pub n: usize,
    /// Measurement counts to sweep; empty means every permissible value.
    pub m_values: Vec<usize>,
    pub k_grid: KGrid,
    pub trials: usize,
    pub base_seed: u64,
    /// Seed of the Gaussian matrix; ignored by binary families.
    pub matrix_seed: u64,
    pub signal_model: SignalModel,
    pub success_threshold: f64,
}

impl PhaseConfig {
    pub fn new(family: Family, n: usize) -> Self {
        PhaseConfig {
            family,
            n,
            m_values: Vec::new(),
            k_grid: KGrid::Auto,
            trials: 100,
            base_seed: 1,
            matrix_seed: 1,
            signal_model: SignalModel::Signed,
            success_threshold: 1e-4,
        }
    }

    /// Checks the config and returns the measurement counts to sweep.
    pub fn resolved_m_values(&self) -> Result<Vec<usize>> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.success_threshold > 0.0) {
            return Err(Error::InvalidParameter("success threshold must be positive".into()));
        }
        let allowed = permissible_m(self.family, self.n)?;
        if self.m_values.is_empty() {
            return Ok(allowed);
        }
        for &m in &self.m_values {
            if !allowed.contains(&m) {
                return Err(Error::InvalidParameter(format!(
                    "m = {m} is not permissible for {} at n = {}",
                    self.family, self.n
                )));
            }
        }
        Ok(self.m_values.clone())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    ///
    /// Keys: `family`, `n`, `m` (comma list or `all`), `k_grid`, `trials`,
    /// `seed`, `matrix_seed`, `signal`, `threshold`.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse { path: origin.to_path_buf(), line, msg };
        let mut family = None;
        let mut n = None;
        let mut rest = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected key = value, got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "family" => family = Some(value.parse::<Family>().map_err(|e| err(line, e.to_string()))?),
                "n" => n = Some(value.parse::<usize>().map_err(|e| err(line, e.to_string()))?),
                _ => rest.push((line, key.to_string(), value.to_string())),
            }
        }
        let family = family.ok_or_else(|| err(0, "missing key 'family'".into()))?;
        let n = n.ok_or_else(|| err(0, "missing key 'n'".into()))?;
        let mut config = PhaseConfig::new(family, n);
        for (line, key, value) in rest {
            let bad = |e: &dyn std::fmt::Display| err(line, format!("{key}: {e}"));
            match key.as_str() {
                "m" => {
                    config.m_values = if value.eq_ignore_ascii_case("all") {
                        Vec::new()
                    } else {
                        value
                            .split(',')
                            .map(|s| s.trim().parse::<usize>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|e| bad(&e))?
                    }
                }
                "k_grid" => config.k_grid = value.parse().map_err(|e: Error| bad(&e))?,
                "trials" => config.trials = value.parse().map_err(|e| bad(&e))?,
                "seed" => config.base_seed = value.parse().map_err(|e| bad(&e))?,
                "matrix_seed" => config.matrix_seed = value.parse().map_err(|e| bad(&e))?,
                "signal" => config.signal_model = value.parse().map_err(|e: Error| bad(&e))?,
                "threshold" => config.success_threshold = value.parse().map_err(|e| bad(&e))?,
                _ => return Err(err(line, format!("unknown key '{key}'"))),
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// The config as text accepted by [`PhaseConfig::parse`].
    pub fn to_text(&self) -> String {
        let m = if self.m_values.is_empty() {
            "all".to_string()
        } else {
            self.m_values.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
        };
        format!(
            "family = {}\nn = {}\nm = {}\nk_grid = {}\ntrials = {}\nseed = {}\nmatrix_seed = {}\nsignal = {}\nthreshold = {:e}\n",
            self.family,
            self.n,
            m,
            self.k_grid,
            self.trials,
            self.base_seed,
            self.matrix_seed,
            self.signal_model,
            self.success_threshold
        )
    }
}
