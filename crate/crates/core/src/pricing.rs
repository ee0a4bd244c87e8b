//! Candidate platform configurations and their unit prices.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

/// Memory step at which the modeled serverless provider grants one whole vCPU.
pub const FULL_VCPU_MEMORY_MB: u32 = 1769;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlatformKind {
    #[serde(alias = "VM", alias = "iaas")]
    Vm,
    #[serde(alias = "Serverless", alias = "faas")]
    Serverless,
}

impl PlatformKind {
    fn label(self) -> &'static str {
        match self {
            PlatformKind::Vm => "VM",
            PlatformKind::Serverless => "serverless",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformConfig {
    pub id: String,
    pub kind: PlatformKind,
    /// Per instance-second for VMs, per execution-second for serverless.
    #[serde(rename = "unit_price_per_s")]
    pub unit_price: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_mb: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vcpus: Option<f64>,
    /// Requests per epoch one instance serves within the SLO.
    pub r_max: f64,
    /// Serverless billing step in seconds; `None` bills continuously.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub billing_granularity_s: Option<f64>,
}

impl PlatformConfig {
    pub fn vm(id: &str, price_per_hour: f64, vcpus: f64, r_max: f64) -> Self {
        PlatformConfig {
            id: id.to_string(),
            kind: PlatformKind::Vm,
            unit_price: price_per_hour / 3600.0,
            memory_mb: None,
            vcpus: Some(vcpus),
            r_max,
            billing_granularity_s: None,
        }
    }

    /// Serverless config priced from a per-GB-second rate.
    pub fn serverless(id: &str, memory_mb: u32, price_per_gb_s: f64, r_max: f64) -> Self {
        PlatformConfig {
            id: id.to_string(),
            kind: PlatformKind::Serverless,
            unit_price: f64::from(memory_mb) / 1024.0 * price_per_gb_s,
            memory_mb: Some(memory_mb),
            vcpus: Some(f64::from(memory_mb) / f64::from(FULL_VCPU_MEMORY_MB)),
            r_max,
            billing_granularity_s: None,
        }
    }

    pub fn is_vm(&self) -> bool {
        self.kind == PlatformKind::Vm
    }

    pub fn is_serverless(&self) -> bool {
        self.kind == PlatformKind::Serverless
    }

    pub(crate) fn expect_kind(&self, kind: PlatformKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                id: self.id.clone(),
                expected: kind.label(),
            })
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.unit_price.is_finite() && self.unit_price > 0.0) {
            return Err(Error::invalid(format!(
                "config `{}`: unit price must be > 0, got {}",
                self.id, self.unit_price
            )));
        }
        if !(self.r_max.is_finite() && self.r_max > 0.0) {
            return Err(Error::invalid(format!(
                "config `{}`: r_max must be > 0, got {}",
                self.id, self.r_max
            )));
        }
        if let Some(g) = self.billing_granularity_s {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::invalid(format!(
                    "config `{}`: billing granularity must be > 0",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingCatalog {
    pub currency: String,
    pub configs: Vec<PlatformConfig>,
    /// Extra seconds per offloaded batch when a VM hands a request's hidden
    /// state to serverless. Counts toward latency and billed duration.
    #[serde(default)]
    pub transmission_seconds: f64,
}

impl PricingCatalog {
    pub fn new(currency: &str, configs: Vec<PlatformConfig>) -> Result<Self> {
        let catalog = PricingCatalog {
            currency: currency.to_string(),
            configs,
            transmission_seconds: 0.0,
        };
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let catalog: PricingCatalog = io::read_json(path.as_ref())?;
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for cfg in &self.configs {
            if !seen.insert(cfg.id.as_str()) {
                return Err(Error::DuplicateConfig(cfg.id.clone()));
            }
            cfg.validate()?;
        }
        if !(self.transmission_seconds.is_finite() && self.transmission_seconds >= 0.0) {
            return Err(Error::invalid("transmission_seconds must be >= 0"));
        }
        Ok(())
    }

    /// Non-fatal findings, e.g. serverless memory that does not map to whole vCPUs.
    pub fn warnings(&self) -> Vec<String> {
        self.configs
            .iter()
            .filter(|c| c.is_serverless())
            .filter_map(|c| match c.memory_mb {
                Some(mb) if mb % FULL_VCPU_MEMORY_MB != 0 => Some(format!(
                    "serverless config `{}`: {mb} MB is not a multiple of {FULL_VCPU_MEMORY_MB} MB, vCPUs may be shared",
                    c.id
                )),
                _ => None,
            })
            .collect()
    }

    pub fn get(&self, id: &str) -> Result<&PlatformConfig> {
        self.configs
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownConfig(id.to_string()))
    }

    pub fn vm(&self, id: &str) -> Result<&PlatformConfig> {
        let cfg = self.get(id)?;
        cfg.expect_kind(PlatformKind::Vm)?;
        Ok(cfg)
    }

    pub fn serverless(&self, id: &str) -> Result<&PlatformConfig> {
        let cfg = self.get(id)?;
        cfg.expect_kind(PlatformKind::Serverless)?;
        Ok(cfg)
    }

    pub fn vms(&self) -> impl Iterator<Item = &PlatformConfig> {
        self.configs.iter().filter(|c| c.is_vm())
    }

    pub fn serverless_configs(&self) -> impl Iterator<Item = &PlatformConfig> {
        self.configs.iter().filter(|c| c.is_serverless())
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }
}

/// Cost of one serverless execution lasting `duration` seconds.
pub fn serverless_exec_cost(config: &PlatformConfig, duration: f64) -> Result<f64> {
    config.expect_kind(PlatformKind::Serverless)?;
    if !(duration >= 0.0) {
        return Err(Error::invalid(format!("duration must be >= 0, got {duration}")));
    }
    let billed = match config.billing_granularity_s {
        Some(step) => (duration / step).ceil() * step,
        None => duration,
    };
    Ok(billed * config.unit_price)
}

/// Cost of keeping one VM up for an epoch of `slo` seconds.
pub fn vm_epoch_cost(config: &PlatformConfig, slo: f64) -> Result<f64> {
    config.expect_kind(PlatformKind::Vm)?;
    Ok(config.unit_price * slo)
}
