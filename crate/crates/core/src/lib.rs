//! Cost modeling, configuration and trace replay for serving early-exit
//! models across long-lived VM instances and serverless functions.

pub mod balancer;
pub mod cli;
pub mod configurator;
pub mod costmodel;
pub mod error;
pub mod io;
pub mod pricing;
pub mod profile;
pub mod simengine;
pub mod traffic;

pub use configurator::{DeploymentPlan, Pool};
pub use costmodel::{CostBreakdown, CostContext, Setup, SpillBilling};
pub use error::{Error, Result};
pub use pricing::{PlatformConfig, PlatformKind, PricingCatalog};
pub use profile::{Assignment, ExitDistribution, PartitionProfile, StagedModelProfile};
