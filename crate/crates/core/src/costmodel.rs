//! Closed-form per-epoch costs of the FaaS-only, IaaS-only and hybrid setups.
//!
//! Every quantity is per epoch, where an epoch lasts `slo` seconds: `n` is
//! requests per epoch, `r_max` is requests per instance per epoch, and a VM
//! is billed `unit_price * slo` for each epoch it is up.
//!
//! When the residual `n mod r_max` does not exceed the T-CIP, no extra
//! instance is added and the residual is spilled to serverless, where it runs
//! the whole model. [`SpillBilling::Included`] charges that spill inside the
//! breakdown; [`SpillBilling::Strict`] leaves it out, which reproduces the
//! bare instance-count formula.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pricing::{serverless_exec_cost, vm_epoch_cost, PricingCatalog};
use crate::profile::{ExitDistribution, StagedModelProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Setup {
    IaaSOnly,
    FaaSOnly,
    Hybrid,
}

impl Setup {
    pub fn short(self) -> &'static str {
        match self {
            Setup::IaaSOnly => "I",
            Setup::FaaSOnly => "F",
            Setup::Hybrid => "H",
        }
    }
}

impl std::fmt::Display for Setup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Setup::IaaSOnly => "IaaS-only",
            Setup::FaaSOnly => "FaaS-only",
            Setup::Hybrid => "Hybrid",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpillBilling {
    /// Residual traffic below the T-CIP is charged at full-model serverless cost.
    #[default]
    Included,
    /// Only the instance-count term is charged for the residual.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub setup: Setup,
    pub vm_cost: f64,
    pub faas_cost: f64,
    pub total: f64,
    pub vm_count: u64,
    pub cut_id: Option<usize>,
    /// Requests per epoch spilled to serverless instead of an extra instance.
    pub spill: f64,
}

impl CostBreakdown {
    fn new(
        setup: Setup,
        vm_cost: f64,
        faas_cost: f64,
        vm_count: u64,
        cut_id: Option<usize>,
        spill: f64,
    ) -> Self {
        CostBreakdown {
            setup,
            vm_cost,
            faas_cost,
            total: vm_cost + faas_cost,
            vm_count,
            cut_id,
            spill,
        }
    }
}

/// Immutable inputs shared by every cost evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CostContext<'a> {
    pub profile: &'a StagedModelProfile,
    pub dist: &'a ExitDistribution,
    pub catalog: &'a PricingCatalog,
    pub r_max: f64,
    pub slo: f64,
    pub billing: SpillBilling,
}

impl<'a> CostContext<'a> {
    pub fn new(
        profile: &'a StagedModelProfile,
        dist: &'a ExitDistribution,
        catalog: &'a PricingCatalog,
        r_max: f64,
        slo: f64,
    ) -> Result<Self> {
        dist.check_matches(profile)?;
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::invalid(format!("r_max must be > 0, got {r_max}")));
        }
        if !(slo.is_finite() && slo >= 0.0) {
            return Err(Error::invalid(format!("slo must be >= 0, got {slo}")));
        }
        Ok(CostContext {
            profile,
            dist,
            catalog,
            r_max,
            slo,
            billing: SpillBilling::Included,
        })
    }

    pub fn with_billing(mut self, billing: SpillBilling) -> Self {
        self.billing = billing;
        self
    }

    pub fn with_dist(self, dist: &'a ExitDistribution) -> Result<Self> {
        dist.check_matches(self.profile)?;
        Ok(CostContext { dist, ..self })
    }

    pub fn partitions(&self) -> usize {
        self.profile.len()
    }

    /// Expected serverless seconds billed per request entering the model, for
    /// partitions `after + 1 ..= L`. A non-zero `after` is an offload point and
    /// also bills the transmission time for requests that cross it.
    pub fn faas_seconds_per_request(&self, theta_f: &str, after: usize) -> Result<f64> {
        self.catalog.serverless(theta_f)?;
        let survival = self.dist.survival();
        let mut secs = 0.0;
        for pid in after + 1..=self.partitions() {
            secs += survival[pid - 1] * self.profile.request_runtime(pid, theta_f)?;
        }
        if after > 0 && after < self.partitions() {
            secs += survival[after] * self.catalog.transmission_seconds
                / f64::from(self.profile.batch_size);
        }
        Ok(secs)
    }

    /// Expected serverless cost per request for partitions after `after`.
    pub fn faas_cost_per_request(&self, theta_f: &str, after: usize) -> Result<f64> {
        let cfg = self.catalog.serverless(theta_f)?;
        Ok(self.faas_seconds_per_request(theta_f, after)? * cfg.unit_price)
    }

    pub fn vm_epoch_cost(&self, theta_i: &str) -> Result<f64> {
        vm_epoch_cost(self.catalog.vm(theta_i)?, self.slo)
    }

    /// Serverless cost of `n` requests running partitions after `after`.
    fn faas_cost(&self, theta_f: &str, after: usize, n: f64) -> Result<f64> {
        let cfg = self.catalog.serverless(theta_f)?;
        let rates = crate::profile::propagate_rates(self.dist, n);
        let bs = f64::from(self.profile.batch_size);
        let mut secs = 0.0;
        for pid in after + 1..=self.partitions() {
            secs += rates[pid - 1] * self.profile.batch_runtime(pid, theta_f)? / bs;
        }
        if after > 0 && after < self.partitions() {
            secs += rates[after] * self.catalog.transmission_seconds / bs;
        }
        serverless_exec_cost(cfg, secs)
    }

    fn check_load(&self, n: f64, t_cip: f64) -> Result<()> {
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::invalid(format!("request count must be >= 0, got {n}")));
        }
        if !(t_cip.is_finite() && (0.0..=self.r_max).contains(&t_cip)) {
            return Err(Error::invalid(format!(
                "t_cip {t_cip} outside [0, r_max = {}]",
                self.r_max
            )));
        }
        Ok(())
    }
}

/// Splits `n` into whole instances' worth of load and the residual in `[0, r_max)`.
pub fn split_load(n: f64, r_max: f64) -> (u64, f64) {
    let mut whole = (n / r_max).floor();
    let mut residual = n - whole * r_max;
    if residual < 0.0 {
        whole -= 1.0;
        residual += r_max;
    } else if residual >= r_max {
        whole += 1.0;
        residual -= r_max;
    }
    (whole.max(0.0) as u64, residual.max(0.0))
}

/// Instance count for a load of `n`: one per full `r_max`, plus one when the
/// residual exceeds `t_cip`. Returns the count and the spilled residual.
pub fn instances_for(n: f64, r_max: f64, t_cip: f64) -> (u64, f64) {
    let (whole, residual) = split_load(n, r_max);
    if residual > t_cip {
        (whole + 1, 0.0)
    } else {
        (whole, residual)
    }
}

/// Every partition on serverless.
pub fn cost_faas_only(ctx: &CostContext, n: f64, theta_f: &str) -> Result<CostBreakdown> {
    ctx.check_load(n, 0.0)?;
    let faas = ctx.faas_cost(theta_f, 0, n)?;
    Ok(CostBreakdown::new(Setup::FaaSOnly, 0.0, faas, 0, None, 0.0))
}

/// Every partition on `theta_i` VMs; a residual at or below `t_cip` spills to `theta_f`.
pub fn cost_iaas_only(
    ctx: &CostContext,
    n: f64,
    theta_i: &str,
    theta_f: &str,
    t_cip: f64,
) -> Result<CostBreakdown> {
    ctx.check_load(n, t_cip)?;
    let per_vm = ctx.vm_epoch_cost(theta_i)?;
    let (count, spill) = instances_for(n, ctx.r_max, t_cip);
    let faas = match ctx.billing {
        SpillBilling::Included => ctx.faas_cost(theta_f, 0, spill)?,
        SpillBilling::Strict => {
            ctx.catalog.serverless(theta_f)?;
            0.0
        }
    };
    Ok(CostBreakdown::new(
        Setup::IaaSOnly,
        count as f64 * per_vm,
        faas,
        count,
        None,
        spill,
    ))
}

/// Partitions `1..=cut` on `theta_i` VMs, the rest on `theta_f`.
pub fn cost_hybrid(
    ctx: &CostContext,
    n: f64,
    theta_i: &str,
    theta_f: &str,
    cut: usize,
    t_cip: f64,
) -> Result<CostBreakdown> {
    let l = ctx.partitions();
    if cut == 0 || cut > l {
        return Err(Error::CutOutOfRange { cut, partitions: l });
    }
    ctx.check_load(n, t_cip)?;
    let per_vm = ctx.vm_epoch_cost(theta_i)?;
    let (count, spill) = instances_for(n, ctx.r_max, t_cip);
    let faas = match ctx.billing {
        SpillBilling::Included => {
            ctx.faas_cost(theta_f, cut, n - spill)? + ctx.faas_cost(theta_f, 0, spill)?
        }
        SpillBilling::Strict => ctx.faas_cost(theta_f, cut, n)?,
    };
    Ok(CostBreakdown::new(
        Setup::Hybrid,
        count as f64 * per_vm,
        faas,
        count,
        Some(cut),
        spill,
    ))
}



#[cfg(test)]
mod props {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn dist_strategy(l: usize) -> impl Strategy<Value = ExitDistribution> {
        prop::collection::vec(0.0..1.0f64, l).prop_map(move |w| {
            let total: f64 = w.iter().sum::<f64>() + 1e-3;
            let mut f: Vec<f64> = w.iter().map(|x| x / total).collect();
            let rest = 1.0 - f[..l - 1].iter().sum::<f64>();
            f[l - 1] = rest;
            ExitDistribution::new(0.5, f, None).unwrap()
        })
    }

    fn times(l: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01..3.0f64, l)
    }

    /// Moves mass from `from` to a deeper partition.
    fn shift_deeper(d: &ExitDistribution, from: usize, to: usize, share: f64) -> ExitDistribution {
        let mut f = d.fractions.clone();
        let moved = f[from] * share;
        f[from] -= moved;
        f[to] += moved;
        ExitDistribution::new(d.conf_thres, f, None).unwrap()
    }

    proptest! {
        #[test]
        fn monotone_in_load_strict(
            (vm, faas, d) in (1usize..6).prop_flat_map(|l| (times(l), times(l), dist_strategy(l))),
            r_max in 1u32..50,
            t_frac in 0.0..1.0f64,
            n in 0u32..500,
            cut_seed in 0usize..10,
        ) {
            let p = per_request_profile(&vm, &faas);
            let c = catalog(0.001, 0.0003);
            let r = f64::from(r_max);
            let ctx = CostContext::new(&p, &d, &c, r, 6.0).unwrap().with_billing(SpillBilling::Strict);
            let t = t_frac * r * 0.999;
            let cut = cut_seed % p.len() + 1;
            let (a, b) = (f64::from(n), f64::from(n + 1));
            prop_assert!(cost_faas_only(&ctx, b, "faas").unwrap().total >= cost_faas_only(&ctx, a, "faas").unwrap().total);
            prop_assert!(cost_iaas_only(&ctx, b, "vm", "faas", t).unwrap().total >= cost_iaas_only(&ctx, a, "vm", "faas", t).unwrap().total);
            prop_assert!(cost_hybrid(&ctx, b, "vm", "faas", cut, t).unwrap().total >= cost_hybrid(&ctx, a, "vm", "faas", cut, t).unwrap().total - 1e-15);
        }

        #[test]
        fn monotone_in_load_with_spill_below_indifference(
            (vm, faas, d) in (1usize..6).prop_flat_map(|l| (times(l), times(l), dist_strategy(l))),
            n in 0u32..500,
            scale in 0.0..=1.0f64,
        ) {
            let p = per_request_profile(&vm, &faas);
            let c = catalog(0.001, 0.0003);
            let ctx = CostContext::new(&p, &d, &c, 20.0, 6.0).unwrap();
            let per_vm = ctx.vm_epoch_cost("vm").unwrap();
            let m = ctx.faas_cost_per_request("faas", 0).unwrap();
            let t = (scale * per_vm / m).min(20.0);
            let (a, b) = (f64::from(n), f64::from(n + 1));
            let ia = cost_iaas_only(&ctx, a, "vm", "faas", t).unwrap().total;
            let ib = cost_iaas_only(&ctx, b, "vm", "faas", t).unwrap().total;
            prop_assert!(ib >= ia - 1e-12 * ia.max(1e-9));
        }

        #[test]
        fn last_cut_is_iaas(
            (vm, faas, d) in (1usize..6).prop_flat_map(|l| (times(l), times(l), dist_strategy(l))),
            n in 0.0..1000.0f64,
            t_frac in 0.0..1.0f64,
            strict in any::<bool>(),
        ) {
            let p = per_request_profile(&vm, &faas);
            let c = catalog(0.001, 0.0003);
            let mut ctx = CostContext::new(&p, &d, &c, 37.0, 6.0).unwrap();
            if strict { ctx = ctx.with_billing(SpillBilling::Strict); }
            let t = t_frac * 37.0;
            let h = cost_hybrid(&ctx, n, "vm", "faas", p.len(), t).unwrap();
            let i = cost_iaas_only(&ctx, n, "vm", "faas", t).unwrap();
            prop_assert_eq!(h.vm_cost, i.vm_cost);
            prop_assert_eq!(h.faas_cost, i.faas_cost);
            prop_assert_eq!(h.vm_count, i.vm_count);
        }

        #[test]
        fn tail_shrinks_with_cut(
            (vm, faas, d) in (2usize..8).prop_flat_map(|l| (times(l), times(l), dist_strategy(l))),
            n in 0.0..1000.0f64,
            tx in 0.0..2.0f64,
        ) {
            let p = per_request_profile(&vm, &faas);
            let mut c = catalog(0.001, 0.0003);
            c.transmission_seconds = tx;
            let ctx = CostContext::new(&p, &d, &c, 37.0, 6.0).unwrap();
            let tails: Vec<f64> = (1..=p.len())
                .map(|cut| cost_hybrid(&ctx, n, "vm", "faas", cut, 0.0).unwrap().faas_cost)
                .collect();
            for w in tails.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-12 * w[0].max(1e-12));
            }
        }

        #[test]
        fn deeper_exits_never_cheaper(
            (vm, faas, d) in (2usize..7).prop_flat_map(|l| (times(l), times(l), dist_strategy(l))),
            n in 0.0..500.0f64,
            share in 0.0..=1.0f64,
            from_seed in 0usize..10,
            gap in 1usize..6,
            cut_seed in 0usize..10,
        ) {
            let l = d.len();
            let from = from_seed % (l - 1);
            let to = (from + gap).min(l - 1);
            let deeper = shift_deeper(&d, from, to, share);
            let p = per_request_profile(&vm, &faas);
            let c = catalog(0.001, 0.0003);
            let base = CostContext::new(&p, &d, &c, 50.0, 6.0).unwrap();
            let shifted = base.with_dist(&deeper).unwrap();
            let cut = cut_seed % l + 1;
            let tol = |x: f64| 1e-12 * x.max(1e-12);
            let f0 = cost_faas_only(&base, n, "faas").unwrap().total;
            let f1 = cost_faas_only(&shifted, n, "faas").unwrap().total;
            prop_assert!(f1 >= f0 - tol(f0));
            let h0 = cost_hybrid(&base, n, "vm", "faas", cut, 10.0).unwrap().faas_cost;
            let h1 = cost_hybrid(&shifted, n, "vm", "faas", cut, 10.0).unwrap().faas_cost;
            prop_assert!(h1 >= h0 - tol(h0));
        }
    }
}
