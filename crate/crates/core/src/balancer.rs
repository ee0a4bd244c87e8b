//! Per-epoch routing: fill healthy long-lived instances first, spill the rest.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRouting {
    pub epoch: u64,
    pub arrivals: u64,
    /// Batch sizes sent to long-lived instances, in instance-id order.
    pub vm_batches: Vec<u64>,
    pub faas_batches: Vec<u64>,
    /// `mu + phi * sigma` at routing time. Recorded, not used for routing.
    pub threshold: f64,
}

impl EpochRouting {
    pub fn vm_requests(&self) -> u64 {
        self.vm_batches.iter().sum()
    }

    pub fn faas_requests(&self) -> u64 {
        self.faas_batches.iter().sum()
    }
}

/// Cuts `arrivals` into batches of `r_max` (the last one possibly partial) and
/// hands the first `healthy` of them to instances, the rest to serverless.
pub fn route_epoch(epoch: u64, arrivals: u64, healthy: usize, r_max: u64, threshold: f64) -> EpochRouting {
    assert!(r_max > 0, "r_max must be positive");
    let mut vm_batches = Vec::new();
    let mut faas_batches = Vec::new();
    let mut left = arrivals;
    while left > 0 {
        let batch = left.min(r_max);
        if vm_batches.len() < healthy {
            vm_batches.push(batch);
        } else {
            faas_batches.push(batch);
        }
        left -= batch;
    }
    EpochRouting {
        epoch,
        arrivals,
        vm_batches,
        faas_batches,
        threshold,
    }
}
