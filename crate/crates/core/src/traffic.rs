//! EWMA traffic monitor and the instance target derived from it.

use serde::{Deserialize, Serialize};

use crate::costmodel::split_load;
use crate::error::{Error, Result};

pub const DEFAULT_W_MU: f64 = 0.5;
pub const DEFAULT_W_SIGMA: f64 = 0.5;
pub const DEFAULT_PHI: f64 = 1.0;

/// Smoothed arrival rate `mu` and absolute deviation `sigma`, both in
/// requests per epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorState {
    pub mu: f64,
    pub sigma: f64,
    pub w_mu: f64,
    pub w_sigma: f64,
    pub phi: f64,
}

impl Default for MonitorState {
    fn default() -> Self {
        MonitorState {
            mu: 0.0,
            sigma: 0.0,
            w_mu: DEFAULT_W_MU,
            w_sigma: DEFAULT_W_SIGMA,
            phi: DEFAULT_PHI,
        }
    }
}

impl MonitorState {
    pub fn new(w_mu: f64, w_sigma: f64, phi: f64) -> Result<Self> {
        for (name, w) in [("w_mu", w_mu), ("w_sigma", w_sigma)] {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::invalid(format!("{name} must be in (0, 1], got {w}")));
            }
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi must be finite"));
        }
        Ok(MonitorState {
            mu: 0.0,
            sigma: 0.0,
            w_mu,
            w_sigma,
            phi,
        })
    }

    pub fn with_estimate(mut self, mu: f64, sigma: f64) -> Self {
        self.mu = mu.max(0.0);
        self.sigma = sigma.max(0.0);
        self
    }

    /// Folds in the arrivals of one epoch. The deviation is measured against
    /// the already-updated mean.
    ///
    /// Written as `x + w * (sample - x)`, which is algebraically the usual
    /// `(1 - w) * x + w * sample` but leaves a steady state bit-for-bit fixed.
    pub fn update(&self, lambda: f64) -> MonitorState {
        let mu = self.mu + self.w_mu * (lambda - self.mu);
        let deviation = (lambda - mu).abs();
        let sigma = self.sigma + self.w_sigma * (deviation - self.sigma);
        MonitorState {
            mu: mu.max(0.0),
            sigma: sigma.max(0.0),
            ..*self
        }
    }

    /// Load-balancer threshold `mu + phi * sigma`.
    pub fn threshold(&self) -> f64 {
        self.mu + self.phi * self.sigma
    }

    /// Load the scaling manager provisions for.
    pub fn scaling_load(&self) -> f64 {
        self.mu + self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleDecision {
    pub k: u64,
    pub residual: f64,
    pub target: u64,
}

/// Instances for the smoothed load: `floor((mu + sigma) / r_max)`, plus one
/// when the residual exceeds `t_cip`.
pub fn scale_target(state: &MonitorState, r_max: f64, t_cip: f64) -> ScaleDecision {
    debug_assert!(r_max > 0.0);
    let (k, residual) = split_load(state.scaling_load(), r_max);
    let target = if residual > t_cip { k + 1 } else { k };
    ScaleDecision { k, residual, target }
}
