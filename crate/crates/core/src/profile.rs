//! Partitioned early-exit model profiles and exit distributions.
//!
//! A model is a chain of `L` partitions. Each partition ends in a classifier
//! where requests may exit; the last one ends in the final classifier.
//! Runtimes are profiled per batch of `batch_size` requests on each platform
//! config, and exit behaviour is captured as unconditional exit fractions
//! `f[pid]` that sum to one.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

/// Tolerance on `Σ f = 1`.
pub const FRACTION_SUM_TOL: f64 = 1e-9;

fn default_batch_size() -> u32 {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionProfile {
    pub pid: usize,
    #[serde(default = "default_true")]
    pub ends_in_classifier: bool,
    /// Seconds per batch of `batch_size` requests, keyed by platform config id.
    pub runtimes: BTreeMap<String, f64>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagedModelProfile {
    pub name: String,
    #[serde(rename = "slo_seconds")]
    pub slo: f64,
    /// Number of requests in one profiled batch.
    #[serde(default = "default_batch_size")]
    pub batch_size: u32,
    pub partitions: Vec<PartitionProfile>,
}

impl StagedModelProfile {
    pub fn new(
        name: impl Into<String>,
        slo: f64,
        batch_size: u32,
        partitions: Vec<PartitionProfile>,
    ) -> Result<Self> {
        let profile = StagedModelProfile {
            name: name.into(),
            slo,
            batch_size,
            partitions,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let profile: StagedModelProfile = io::read_json(path.as_ref())?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        if self.partitions.is_empty() {
            return Err(Error::shape("profile has no partitions"));
        }
        if !(self.slo.is_finite() && self.slo >= 0.0) {
            return Err(Error::shape(format!("slo must be finite and >= 0, got {}", self.slo)));
        }
        if self.batch_size == 0 {
            return Err(Error::shape("batch_size must be > 0"));
        }
        for (idx, part) in self.partitions.iter().enumerate() {
            if part.pid != idx + 1 {
                return Err(Error::shape(format!(
                    "partition ids must be contiguous 1..L, found pid {} at position {}",
                    part.pid,
                    idx + 1
                )));
            }
            for (cfg, &t) in &part.runtimes {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::shape(format!(
                        "runtime of partition {} on `{cfg}` must be finite and > 0, got {t}",
                        part.pid
                    )));
                }
            }
        }
        if !self.partitions.last().is_some_and(|p| p.ends_in_classifier) {
            return Err(Error::shape("last partition must end in the final classifier"));
        }
        Ok(())
    }

    /// Number of partitions `L`.
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Profiled batch runtime of partition `pid` (1-based) on `config`.
    pub fn batch_runtime(&self, pid: usize, config: &str) -> Result<f64> {
        let part = pid
            .checked_sub(1)
            .and_then(|i| self.partitions.get(i))
            .ok_or_else(|| Error::shape(format!("partition {pid} out of range 1..={}", self.len())))?;
        part.runtimes
            .get(config)
            .copied()
            .ok_or_else(|| Error::MissingRuntime {
                pid,
                config: config.to_string(),
            })
    }

    /// Batch runtime divided by batch size.
    pub fn request_runtime(&self, pid: usize, config: &str) -> Result<f64> {
        Ok(self.batch_runtime(pid, config)? / f64::from(self.batch_size))
    }

    /// Fails unless every partition has a runtime for each of `configs`.
    pub fn require_configs<'a>(&self, configs: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for cfg in configs {
            for part in &self.partitions {
                if !part.runtimes.contains_key(cfg) {
                    return Err(Error::MissingRuntime {
                        pid: part.pid,
                        config: cfg.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Sum of batch runtimes along the first `depth` partitions under `assignment`.
    pub fn path_batch_time(&self, assignment: &Assignment, depth: usize) -> Result<f64> {
        self.check_assignment(assignment)?;
        let mut total = 0.0;
        for pid in 1..=depth.min(self.len()) {
            total += self.batch_runtime(pid, assignment.config(pid))?;
        }
        Ok(total)
    }

    fn check_assignment(&self, assignment: &Assignment) -> Result<()> {
        if assignment.len() != self.len() {
            return Err(Error::shape(format!(
                "assignment covers {} partitions, profile has {}",
                assignment.len(),
                self.len()
            )));
        }
        Ok(())
    }
}

/// Platform config chosen for each partition, indexed by `pid - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(Vec<String>);

impl Assignment {
    pub fn new(configs: Vec<String>) -> Self {
        Assignment(configs)
    }

    pub fn uniform(config: &str, partitions: usize) -> Self {
        Assignment(vec![config.to_string(); partitions])
    }

    /// Partitions `1..=cut` on `head`, the rest on `tail`.
    pub fn split(head: &str, tail: &str, cut: usize, partitions: usize) -> Self {
        Assignment(
            (1..=partitions)
                .map(|pid| if pid <= cut { head } else { tail }.to_string())
                .collect(),
        )
    }

    pub fn config(&self, pid: usize) -> &str {
        &self.0[pid - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Unconditional exit fractions at one confidence threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitDistribution {
    pub conf_thres: f64,
    pub fractions: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
}

impl ExitDistribution {
    pub fn new(conf_thres: f64, fractions: Vec<f64>, accuracy: Option<f64>) -> Result<Self> {
        let dist = ExitDistribution {
            conf_thres,
            fractions,
            accuracy,
        };
        dist.validate()?;
        Ok(dist)
    }

    /// Every request runs to the final classifier.
    pub fn all_final(partitions: usize) -> Self {
        let mut fractions = vec![0.0; partitions];
        fractions[partitions - 1] = 1.0;
        ExitDistribution {
            conf_thres: 1.0,
            fractions,
            accuracy: None,
        }
    }

    /// Converts per-partition exit probabilities, each conditional on reaching
    /// that partition, into unconditional fractions. The last probability is
    /// taken as 1 whatever its input value.
    pub fn from_conditional(conf_thres: f64, betas: &[f64], partitions: usize) -> Result<Self> {
        if betas.len() != partitions {
            return Err(Error::shape(format!(
                "{} exit probabilities for {partitions} partitions",
                betas.len()
            )));
        }
        if partitions == 0 {
            return Err(Error::shape("profile has no partitions"));
        }
        let mut fractions = Vec::with_capacity(partitions);
        let mut surviving = 1.0;
        for (idx, &beta) in betas.iter().enumerate() {
            if idx + 1 == partitions {
                fractions.push(surviving);
                break;
            }
            if !(0.0..=1.0).contains(&beta) {
                return Err(Error::invalid(format!(
                    "exit probability {beta} at partition {} outside [0, 1]",
                    idx + 1
                )));
            }
            let exiting = beta * surviving;
            fractions.push(exiting);
            surviving -= exiting;
        }
        ExitDistribution::new(conf_thres, fractions, None)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let dist: ExitDistribution = io::read_json(path.as_ref())?;
        dist.validate()?;
        Ok(dist)
    }

    /// Reads either one distribution object or an array of them.
    pub fn load_family(path: impl AsRef<Path>) -> Result<Vec<Self>> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum OneOrMany {
            One(ExitDistribution),
            Many(Vec<ExitDistribution>),
        }
        let dists = match io::read_json::<OneOrMany>(path.as_ref())? {
            OneOrMany::One(d) => vec![d],
            OneOrMany::Many(ds) => ds,
        };
        for d in &dists {
            d.validate()?;
        }
        Ok(dists)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.conf_thres) {
            return Err(Error::invalid(format!("conf_thres {} outside [0, 1]", self.conf_thres)));
        }
        if let Some(acc) = self.accuracy {
            if !(0.0..=1.0).contains(&acc) {
                return Err(Error::invalid(format!("accuracy {acc} outside [0, 1]")));
            }
        }
        if self.fractions.is_empty() {
            return Err(Error::shape("exit distribution has no partitions"));
        }
        for (idx, &f) in self.fractions.iter().enumerate() {
            if !(f.is_finite() && f >= 0.0) {
                return Err(Error::invalid(format!(
                    "exit fraction {f} at partition {} must be finite and >= 0",
                    idx + 1
                )));
            }
        }
        let sum: f64 = self.fractions.iter().sum();
        if (sum - 1.0).abs() > FRACTION_SUM_TOL {
            return Err(Error::invalid(format!("exit fractions sum to {sum}, expected 1")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn check_matches(&self, profile: &StagedModelProfile) -> Result<()> {
        if self.len() != profile.len() {
            return Err(Error::shape(format!(
                "exit distribution has {} partitions, profile `{}` has {}",
                self.len(),
                profile.name,
                profile.len()
            )));
        }
        Ok(())
    }

    /// Share of requests that enter each partition. The first entry is exactly 1.
    pub fn survival(&self) -> Vec<f64> {
        let l = self.fractions.len();
        let mut tail = vec![0.0; l];
        let mut acc = 0.0;
        for k in (0..l).rev() {
            acc += self.fractions[k];
            tail[k] = acc;
        }
        let mut out = Vec::with_capacity(l);
        let mut prev = 1.0_f64;
        for (k, &t) in tail.iter().enumerate() {
            let s = if k == 0 { 1.0 } else { t.min(prev) };
            out.push(s);
            prev = s;
        }
        out
    }

    /// Conditional exit probability at each partition, `None` where no request arrives.
    pub fn conditional(&self) -> Vec<Option<f64>> {
        let survival = self.survival();
        self.fractions
            .iter()
            .zip(&survival)
            .enumerate()
            .map(|(k, (&f, &s))| {
                if k + 1 == self.fractions.len() {
                    Some(1.0)
                } else if s > 0.0 {
                    Some((f / s).min(1.0))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Expected number of exits at each partition out of `n` arrivals.
    pub fn exits(&self, n: f64) -> Vec<f64> {
        self.fractions.iter().map(|f| f * n).collect()
    }
}

/// Arrivals at each partition when `n` requests enter the model per epoch.
pub fn propagate_rates(dist: &ExitDistribution, n: f64) -> Vec<f64> {
    dist.survival().into_iter().map(|s| s * n).collect()
}

/// Mean per-request latency, weighting each exit depth by its fraction.
pub fn expected_runtime(
    profile: &StagedModelProfile,
    dist: &ExitDistribution,
    assignment: &Assignment,
) -> Result<f64> {
    dist.check_matches(profile)?;
    profile.check_assignment(assignment)?;
    let mut prefix = 0.0;
    let mut total = 0.0;
    for (idx, &f) in dist.fractions.iter().enumerate() {
        let pid = idx + 1;
        prefix += profile.request_runtime(pid, assignment.config(pid))?;
        total += f * prefix;
    }
    Ok(total)
}
