//! Offline configuration: SLO feasibility, lowest-cost setup selection,
//! T-CIP search and cost sweeps with crossing detection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::costmodel::{
    cost_faas_only, cost_hybrid, cost_iaas_only, instances_for, CostBreakdown, CostContext, Setup,
};
use crate::error::{Error, Result};
use crate::pricing::PricingCatalog;
use crate::profile::{ExitDistribution, StagedModelProfile};

/// Relative tolerance on a cost difference below which two setups tie.
pub const CROSSING_TOL: f64 = 1e-6;

/// Instance pool the online system manages for a setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pool {
    #[serde(rename = "{IaaS,FaaS}")]
    IaasFaas,
    #[serde(rename = "{Hybrid,FaaS}")]
    HybridFaas,
    #[serde(rename = "{FaaS}")]
    Faas,
}

impl Pool {
    pub fn for_setup(setup: Setup) -> Self {
        match setup {
            Setup::IaaSOnly => Pool::IaasFaas,
            Setup::Hybrid => Pool::HybridFaas,
            Setup::FaaSOnly => Pool::Faas,
        }
    }
}

impl fmt::Display for Pool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pool::IaasFaas => "{IaaS,FaaS}",
            Pool::HybridFaas => "{Hybrid,FaaS}",
            Pool::Faas => "{FaaS}",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeploymentPlan {
    pub setup: Setup,
    pub theta_i: Option<String>,
    /// Serverless config. For IaaS-only this is where residual traffic spills.
    pub theta_f: Option<String>,
    pub cut_id: Option<usize>,
    /// Residual load (requests per epoch) above which one more instance is added.
    pub t_cip: f64,
    pub r_max: f64,
    pub pool: Pool,
}

impl DeploymentPlan {
    pub fn faas_only(theta_f: &str, r_max: f64) -> Self {
        DeploymentPlan {
            setup: Setup::FaaSOnly,
            theta_i: None,
            theta_f: Some(theta_f.to_string()),
            cut_id: None,
            t_cip: r_max,
            r_max,
            pool: Pool::Faas,
        }
    }

    pub fn iaas(theta_i: &str, spill_to: Option<&str>, t_cip: f64, r_max: f64) -> Self {
        DeploymentPlan {
            setup: Setup::IaaSOnly,
            theta_i: Some(theta_i.to_string()),
            theta_f: spill_to.map(str::to_string),
            cut_id: None,
            t_cip,
            r_max,
            pool: Pool::IaasFaas,
        }
    }

    pub fn hybrid(theta_i: &str, theta_f: &str, cut: usize, t_cip: f64, r_max: f64) -> Self {
        DeploymentPlan {
            setup: Setup::Hybrid,
            theta_i: Some(theta_i.to_string()),
            theta_f: Some(theta_f.to_string()),
            cut_id: Some(cut),
            t_cip,
            r_max,
            pool: Pool::HybridFaas,
        }
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let plan: DeploymentPlan = crate::io::read_json(path.as_ref())?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::PlanMismatch(msg.to_string()));
        if self.pool != Pool::for_setup(self.setup) {
            return bad("pool does not match setup");
        }
        match self.setup {
            Setup::Hybrid => {
                if self.theta_i.is_none() || self.theta_f.is_none() || self.cut_id.is_none() {
                    return bad("hybrid plan needs theta_i, theta_f and cut_id");
                }
            }
            Setup::FaaSOnly => {
                if self.theta_i.is_some() || self.cut_id.is_some() || self.theta_f.is_none() {
                    return bad("FaaS-only plan takes theta_f only");
                }
            }
            Setup::IaaSOnly => {
                if self.theta_i.is_none() || self.cut_id.is_some() {
                    return bad("IaaS-only plan needs theta_i and no cut_id");
                }
            }
        }
        if !(self.r_max.is_finite() && self.r_max > 0.0) {
            return bad("r_max must be > 0");
        }
        if !(self.t_cip.is_finite() && (0.0..=self.r_max).contains(&self.t_cip)) {
            return bad("t_cip must lie in [0, r_max]");
        }
        Ok(())
    }

    /// Checks the plan's configs against a catalog and profile.
    pub fn check_against(&self, catalog: &PricingCatalog, profile: &StagedModelProfile) -> Result<()> {
        self.validate()?;
        if let Some(i) = &self.theta_i {
            catalog.vm(i)?;
        }
        if let Some(f) = &self.theta_f {
            catalog.serverless(f)?;
        }
        if let Some(cut) = self.cut_id {
            if cut == 0 || cut > profile.len() {
                return Err(Error::CutOutOfRange {
                    cut,
                    partitions: profile.len(),
                });
            }
        }
        let mut needed: Vec<&str> = Vec::new();
        match self.setup {
            Setup::IaaSOnly => needed.extend(self.theta_i.as_deref()),
            Setup::FaaSOnly => {}
            Setup::Hybrid => needed.extend(self.theta_i.as_deref()),
        }
        needed.extend(self.theta_f.as_deref());
        profile.require_configs(needed)
    }

    pub fn label(&self) -> String {
        match self.setup {
            Setup::FaaSOnly => format!("{} {}", self.pool, self.theta_f.as_deref().unwrap_or("")),
            Setup::IaaSOnly => format!("{} {}", self.pool, self.theta_i.as_deref().unwrap_or("")),
            Setup::Hybrid => format!(
                "{} {}+{}@{}",
                self.pool,
                self.theta_i.as_deref().unwrap_or(""),
                self.theta_f.as_deref().unwrap_or(""),
                self.cut_id.unwrap_or(0)
            ),
        }
    }
}

/// One row of the SLO feasibility table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub setup: Setup,
    pub theta_i: Option<String>,
    pub theta_f: Option<String>,
    pub cut_id: Option<usize>,
    /// Worst-case seconds for one batch of `r_max` requests through every partition.
    pub path_seconds: f64,
    pub feasible: bool,
}

fn has_runtimes(profile: &StagedModelProfile, config: &str) -> bool {
    profile.partitions.iter().all(|p| p.runtimes.contains_key(config))
}

/// Worst-case batch latency of every candidate setup, with every request
/// running to the final classifier. Batch runtimes scale linearly from the
/// profiled batch size to `r_max`.
pub fn evaluate_feasibility(
    profile: &StagedModelProfile,
    catalog: &PricingCatalog,
    r_max: f64,
    slo: f64,
    cuts: &[usize],
) -> Result<Vec<Candidate>> {
    if catalog.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    let l = profile.len();
    for &cut in cuts {
        if cut == 0 || cut > l {
            return Err(Error::CutOutOfRange { cut, partitions: l });
        }
    }
    let scale = r_max / f64::from(profile.batch_size);
    let stage = |pid: usize, cfg: &str| profile.batch_runtime(pid, cfg).map(|t| t * scale);
    let span = |cfg: &str, pids: std::ops::RangeInclusive<usize>| -> Result<f64> {
        pids.map(|pid| stage(pid, cfg)).sum()
    };
    let feasible = |t: f64| t <= slo * (1.0 + 1e-12);

    let vms: Vec<&str> = catalog
        .vms()
        .map(|c| c.id.as_str())
        .filter(|id| has_runtimes(profile, id))
        .collect();
    let fns: Vec<&str> = catalog
        .serverless_configs()
        .map(|c| c.id.as_str())
        .filter(|id| has_runtimes(profile, id))
        .collect();

    let mut out = Vec::new();
    for &vm in &vms {
        let t = span(vm, 1..=l)?;
        out.push(Candidate {
            setup: Setup::IaaSOnly,
            theta_i: Some(vm.to_string()),
            theta_f: None,
            cut_id: None,
            path_seconds: t,
            feasible: feasible(t),
        });
    }
    for &f in &fns {
        let t = span(f, 1..=l)?;
        out.push(Candidate {
            setup: Setup::FaaSOnly,
            theta_i: None,
            theta_f: Some(f.to_string()),
            cut_id: None,
            path_seconds: t,
            feasible: feasible(t),
        });
    }
    for &vm in &vms {
        for &f in &fns {
            for &cut in cuts {
                let mut t = span(vm, 1..=cut)?;
                if cut < l {
                    t += catalog.transmission_seconds * scale + span(f, cut + 1..=l)?;
                }
                out.push(Candidate {
                    setup: Setup::Hybrid,
                    theta_i: Some(vm.to_string()),
                    theta_f: Some(f.to_string()),
                    cut_id: Some(cut),
                    path_seconds: t,
                    feasible: feasible(t),
                });
            }
        }
    }
    Ok(out)
}

/// Candidates whose worst-case batch latency meets the SLO.
pub fn slo_feasible(
    profile: &StagedModelProfile,
    catalog: &PricingCatalog,
    r_max: f64,
    slo: f64,
    cuts: &[usize],
) -> Result<Vec<Candidate>> {
    let feasible: Vec<Candidate> = evaluate_feasibility(profile, catalog, r_max, slo, cuts)?
        .into_iter()
        .filter(|c| c.feasible)
        .collect();
    if feasible.is_empty() {
        return Err(Error::NoFeasibleConfig);
    }
    Ok(feasible)
}

/// Default offload cuts: every partition boundary short of the last.
pub fn default_cuts(profile: &StagedModelProfile) -> Vec<usize> {
    (1..profile.len()).collect()
}

/// Long-lived instance type whose residual-load threshold is being searched.
#[derive(Debug, Clone, Copy)]
pub enum InstanceSetup<'a> {
    Iaas { theta_i: &'a str, theta_f: &'a str },
    Hybrid { theta_i: &'a str, theta_f: &'a str, cut: usize },
}

/// Residual load at which one more instance costs the same as sending that
/// load to serverless. `None` when serverless stays cheaper over `[0, r_max)`.
pub fn find_t_cip(ctx: &CostContext, setup: InstanceSetup) -> Result<Option<f64>> {
    let (theta_i, theta_f, cut) = match setup {
        InstanceSetup::Iaas { theta_i, theta_f } => (theta_i, theta_f, None),
        InstanceSetup::Hybrid { theta_i, theta_f, cut } => (theta_i, theta_f, Some(cut)),
    };
    let instance = ctx.vm_epoch_cost(theta_i)?;
    let spill_per_request = ctx.faas_cost_per_request(theta_f, 0)?;
    let tail_per_request = match cut {
        Some(cut) => {
            if cut == 0 || cut > ctx.partitions() {
                return Err(Error::CutOutOfRange {
                    cut,
                    partitions: ctx.partitions(),
                });
            }
            ctx.faas_cost_per_request(theta_f, cut)?
        }
        None => 0.0,
    };
    Ok(indifference_point(instance, spill_per_request - tail_per_request, ctx.r_max))
}

/// Solves `instance_cost = marginal * rho` on `[0, r_max)`.
pub fn indifference_point(instance_cost: f64, marginal: f64, r_max: f64) -> Option<f64> {
    if !(marginal > 0.0) {
        return None;
    }
    let rho = instance_cost / marginal;
    (rho < r_max).then_some(rho.max(0.0))
}

/// [`find_t_cip`] with the no-crossing case mapped to `r_max` (never add the
/// extra instance).
pub fn resolve_t_cip(ctx: &CostContext, setup: InstanceSetup) -> Result<f64> {
    Ok(find_t_cip(ctx, setup)?.unwrap_or(ctx.r_max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanOption {
    pub plan: DeploymentPlan,
    pub cost: CostBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSelection {
    pub plan: DeploymentPlan,
    pub faas: Option<PlanOption>,
    pub iaas: Option<PlanOption>,
    pub hybrid: Option<PlanOption>,
}

impl PlanSelection {
    pub fn chosen_cost(&self) -> &CostBreakdown {
        let opt = match self.plan.setup {
            Setup::FaaSOnly => &self.faas,
            Setup::IaaSOnly => &self.iaas,
            Setup::Hybrid => &self.hybrid,
        };
        &opt.as_ref().expect("chosen setup has a cost").cost
    }

    pub fn options(&self) -> impl Iterator<Item = &PlanOption> {
        [&self.iaas, &self.faas, &self.hybrid].into_iter().flatten()
    }
}

fn cheaper(best: &Option<PlanOption>, cost: f64) -> bool {
    best.as_ref().is_none_or(|b| cost < b.cost.total)
}

/// Picks the cheapest feasible setup for a long-term load of `n` requests per
/// epoch. Ties go to IaaS-only first, then FaaS-only, then hybrid.
pub fn select_plan(ctx: &CostContext, feasible: &[Candidate], n: f64) -> Result<PlanSelection> {
    if !feasible.iter().any(|c| c.feasible) {
        return Err(Error::NoFeasibleConfig);
    }
    let r_max = ctx.r_max;

    let mut faas: Option<PlanOption> = None;
    for c in feasible.iter().filter(|c| c.feasible && c.setup == Setup::FaaSOnly) {
        let f = c.theta_f.as_deref().expect("FaaS candidate has theta_f");
        let cost = cost_faas_only(ctx, n, f)?;
        if cheaper(&faas, cost.total) {
            faas = Some(PlanOption {
                plan: DeploymentPlan::faas_only(f, r_max),
                cost,
            });
        }
    }
    let base_f = faas.as_ref().and_then(|o| o.plan.theta_f.clone());

    // Spilled residual needs somewhere to run even when no FaaS-only setup is feasible.
    let spill_to = base_f.clone().or_else(|| {
        ctx.catalog
            .serverless_configs()
            .find(|c| has_runtimes(ctx.profile, &c.id))
            .map(|c| c.id.clone())
    });

    let mut iaas: Option<PlanOption> = None;
    for c in feasible.iter().filter(|c| c.feasible && c.setup == Setup::IaaSOnly) {
        let i = c.theta_i.as_deref().expect("IaaS candidate has theta_i");
        let (cost, t_cip) = match spill_to.as_deref() {
            Some(f) => {
                let t = resolve_t_cip(ctx, InstanceSetup::Iaas { theta_i: i, theta_f: f })?;
                (cost_iaas_only(ctx, n, i, f, t)?, t)
            }
            // nowhere to spill: every residual request gets an instance
            None => {
                let per_vm = ctx.vm_epoch_cost(i)?;
                let (count, _) = instances_for(n, r_max, 0.0);
                let vm_cost = count as f64 * per_vm;
                let cost = CostBreakdown {
                    setup: Setup::IaaSOnly,
                    vm_cost,
                    faas_cost: 0.0,
                    total: vm_cost,
                    vm_count: count,
                    cut_id: None,
                    spill: 0.0,
                };
                (cost, 0.0)
            }
        };
        if cheaper(&iaas, cost.total) {
            iaas = Some(PlanOption {
                plan: DeploymentPlan::iaas(i, spill_to.as_deref(), t_cip, r_max),
                cost,
            });
        }
    }

    let mut hybrid: Option<PlanOption> = None;
    for c in feasible.iter().filter(|c| c.feasible && c.setup == Setup::Hybrid) {
        let f = c.theta_f.as_deref().expect("hybrid candidate has theta_f");
        if base_f.as_deref().is_some_and(|b| b != f) {
            continue;
        }
        let i = c.theta_i.as_deref().expect("hybrid candidate has theta_i");
        let cut = c.cut_id.expect("hybrid candidate has cut_id");
        let t = resolve_t_cip(ctx, InstanceSetup::Hybrid { theta_i: i, theta_f: f, cut })?;
        let cost = cost_hybrid(ctx, n, i, f, cut, t)?;
        if cheaper(&hybrid, cost.total) {
            hybrid = Some(PlanOption {
                plan: DeploymentPlan::hybrid(i, f, cut, t, r_max),
                cost,
            });
        }
    }

    // An instance setup that provisions no instance at this load spills
    // everything to serverless and is the FaaS-only deployment under another
    // name, so it only wins when serverless itself is unavailable.
    let total = |o: &Option<PlanOption>, instanced: bool| {
        o.as_ref().map_or(f64::INFINITY, |o| {
            if instanced && o.cost.vm_count == 0 && faas.is_some() {
                f64::INFINITY
            } else {
                o.cost.total
            }
        })
    };
    let (ci, cf, ch) = (total(&iaas, true), total(&faas, false), total(&hybrid, true));
    let chosen = if ci.is_finite() && ci <= cf.min(ch) {
        &iaas
    } else if cf.is_finite() && cf <= ci.min(ch) {
        &faas
    } else if ch.is_finite() {
        &hybrid
    } else if iaas.is_some() {
        &iaas
    } else {
        &hybrid
    };
    let plan = chosen
        .as_ref()
        .map(|o| o.plan.clone())
        .ok_or(Error::NoFeasibleConfig)?;
    Ok(PlanSelection {
        plan,
        faas,
        iaas,
        hybrid,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    ConfThres,
    CutId,
    Ingestion,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conf_thres" | "conf-thres" => Ok(SweepAxis::ConfThres),
            "cut_id" | "cut-id" | "cut" => Ok(SweepAxis::CutId),
            "ingestion" | "n" => Ok(SweepAxis::Ingestion),
            other => Err(Error::UnknownAxis(other.to_string())),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::ConfThres => "conf_thres",
            SweepAxis::CutId => "cut_id",
            SweepAxis::Ingestion => "ingestion",
        })
    }
}

/// Configs compared by a sweep.
#[derive(Debug, Clone)]
pub struct SweepSetups<'a> {
    pub iaas_vm: &'a str,
    pub faas: &'a str,
    pub hybrid_vm: &'a str,
    pub cut: usize,
    /// Requests per epoch for the conf_thres and cut_id axes.
    pub n: f64,
    /// Distributions keyed by `conf_thres`, used by the conf_thres axis.
    pub family: &'a [ExitDistribution],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x: f64,
    pub iaas: CostBreakdown,
    pub faas: CostBreakdown,
    pub hybrid: CostBreakdown,
}

impl SweepPoint {
    pub fn cost(&self, setup: Setup) -> f64 {
        match setup {
            Setup::IaaSOnly => self.iaas.total,
            Setup::FaaSOnly => self.faas.total,
            Setup::Hybrid => self.hybrid.total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// `first - second` changes sign at `x`.
    pub first: Setup,
    pub second: Setup,
    pub x: f64,
    /// Sign of `first - second` just above the crossing.
    pub rising: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub crossings: Vec<Crossing>,
}

impl SweepAxis {
    /// Setup pairs whose crossings the axis reports: hybrid against each
    /// homogeneous setup for the sparsity axes, serverless against each
    /// instance type for the ingestion axis.
    pub fn pairs(self) -> [(Setup, Setup); 2] {
        match self {
            SweepAxis::ConfThres | SweepAxis::CutId => {
                [(Setup::Hybrid, Setup::IaaSOnly), (Setup::Hybrid, Setup::FaaSOnly)]
            }
            SweepAxis::Ingestion => {
                [(Setup::FaaSOnly, Setup::Hybrid), (Setup::FaaSOnly, Setup::IaaSOnly)]
            }
        }
    }
}

/// Evaluates the three setups at each grid point and locates where their
/// costs cross. On the ingestion axis every residual gets its own instance so
/// the serverless/instance crossing is the T-CIP.
pub fn sweep(ctx: &CostContext, axis: SweepAxis, grid: &[f64], setups: &SweepSetups) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::invalid("sweep grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("sweep grid must be strictly increasing"));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        let point = match axis {
            SweepAxis::ConfThres => {
                let dist = setups
                    .family
                    .iter()
                    .find(|d| (d.conf_thres - x).abs() < 1e-9)
                    .ok_or_else(|| Error::invalid(format!("no exit distribution for conf_thres {x}")))?;
                let at = ctx.with_dist(dist)?;
                evaluate_point(&at, x, setups.n, setups.cut, setups, None)?
            }
            SweepAxis::CutId => {
                if x.fract() != 0.0 || x < 1.0 {
                    return Err(Error::invalid(format!("cut_id grid value {x} is not a positive integer")));
                }
                evaluate_point(ctx, x, setups.n, x as usize, setups, None)?
            }
            SweepAxis::Ingestion => evaluate_point(ctx, x, x, setups.cut, setups, Some(0.0))?,
        };
        points.push(point);
    }
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let mut crossings = Vec::new();
    for (a, b) in axis.pairs() {
        let diffs: Vec<(f64, f64)> = points
            .iter()
            .map(|p| (p.cost(a) - p.cost(b), p.cost(a).abs().max(p.cost(b).abs())))
            .collect();
        for (x, rising) in find_crossings(&xs, &diffs) {
            crossings.push(Crossing {
                first: a,
                second: b,
                x,
                rising,
            });
        }
    }
    Ok(SweepResult {
        axis,
        points,
        crossings,
    })
}

fn evaluate_point(
    ctx: &CostContext,
    x: f64,
    n: f64,
    cut: usize,
    s: &SweepSetups,
    t_cip: Option<f64>,
) -> Result<SweepPoint> {
    let iaas_t = match t_cip {
        Some(t) => t,
        None => resolve_t_cip(ctx, InstanceSetup::Iaas { theta_i: s.iaas_vm, theta_f: s.faas })?,
    };
    let hybrid_t = match t_cip {
        Some(t) => t,
        None => resolve_t_cip(
            ctx,
            InstanceSetup::Hybrid {
                theta_i: s.hybrid_vm,
                theta_f: s.faas,
                cut,
            },
        )?,
    };
    Ok(SweepPoint {
        x,
        iaas: cost_iaas_only(ctx, n, s.iaas_vm, s.faas, iaas_t)?,
        faas: cost_faas_only(ctx, n, s.faas)?,
        hybrid: cost_hybrid(ctx, n, s.hybrid_vm, s.faas, cut, hybrid_t)?,
    })
}

/// Sign changes of a sampled difference. `diffs` holds `(difference, scale)`;
/// a difference within `CROSSING_TOL * scale` of zero counts as a tie. Roots
/// are placed by linear interpolation between the bracketing samples, or at
/// the middle tied sample when ties separate them. Ties at either end of the
/// grid are not crossings.
pub fn find_crossings(xs: &[f64], diffs: &[(f64, f64)]) -> Vec<(f64, bool)> {
    let sign = |(d, scale): (f64, f64)| -> i8 {
        if d.abs() <= CROSSING_TOL * scale {
            0
        } else if d > 0.0 {
            1
        } else {
            -1
        }
    };
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for i in 0..xs.len() {
        let s = sign(diffs[i]);
        if s == 0 {
            continue;
        }
        if let Some(j) = last {
            if sign(diffs[j]) != s {
                let x = if i == j + 1 {
                    let (dj, di) = (diffs[j].0, diffs[i].0);
                    xs[j] + (xs[i] - xs[j]) * dj / (dj - di)
                } else {
                    xs[(j + 1 + i - 1) / 2]
                };
                out.push((x, s > 0));
            }
        }
        last = Some(i);
    }
    out
}
