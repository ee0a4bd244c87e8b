//! Epoch-by-epoch trace replay of a deployment plan: traffic monitoring,
//! periodic scaling with cold starts, routing, and cost accrual.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::balancer::route_epoch;
use crate::configurator::DeploymentPlan;
use crate::costmodel::{CostContext, Setup};
use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::pricing::{serverless_exec_cost, PlatformConfig};
use crate::traffic::{scale_target, MonitorState};

pub const DEFAULT_SCALE_INTERVAL: u64 = 25;
pub const DEFAULT_COLD_START: u64 = 19;

/// Requests arriving in each epoch, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrafficTrace {
    pub arrivals: Vec<u64>,
}

impl TrafficTrace {
    pub fn new(arrivals: Vec<u64>) -> Result<Self> {
        if arrivals.is_empty() {
            return Err(Error::EmptyTrace);
        }
        Ok(TrafficTrace { arrivals })
    }

    pub fn constant(rate: u64, epochs: usize) -> Result<Self> {
        TrafficTrace::new(vec![rate; epochs])
    }

    /// Reads a CSV trace. With a header, the `arrivals`, `lambda` or
    /// `requests` column is used; otherwise the last column.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let csv_err = |source| Error::Csv {
            path: path.display().to_string(),
            source,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_path(path)
            .map_err(csv_err)?;
        let records = reader.records();
        let mut column: Option<usize> = None;
        let mut arrivals = Vec::new();
        let mut line = 0usize;
        for record in records {
            let record = record.map_err(csv_err)?;
            line += 1;
            if record.iter().all(str::is_empty) {
                continue;
            }
            if line == 1 && record.iter().any(|f| f.parse::<f64>().is_err()) {
                let named = record
                    .iter()
                    .position(|h| matches!(h.to_ascii_lowercase().as_str(), "arrivals" | "lambda" | "requests"));
                column = Some(named.unwrap_or(record.len() - 1));
                continue;
            }
            let idx = column.unwrap_or(record.len() - 1);
            let field = record.get(idx).unwrap_or("");
            let value: f64 = field.parse().map_err(|_| {
                Error::invalid(format!("{}: line {line}: `{field}` is not a count", path.display()))
            })?;
            if !(value.is_finite() && value >= 0.0 && value.fract() == 0.0) {
                return Err(Error::invalid(format!(
                    "{}: line {line}: arrivals must be a non-negative integer, got {field}",
                    path.display()
                )));
            }
            arrivals.push(value as u64);
        }
        TrafficTrace::new(arrivals)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,arrivals\n");
        for (i, a) in self.arrivals.iter().enumerate() {
            out.push_str(&format!("{},{a}\n", i + 1));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.arrivals.iter().sum()
    }

    pub fn truncated(&self, epochs: usize) -> Result<Self> {
        TrafficTrace::new(self.arrivals.iter().copied().take(epochs).collect())
    }

    /// SHA-256 over the arrivals as little-endian u64s.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for a in &self.arrivals {
            h.update(a.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Shape of a synthetic bursty trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstyShape {
    pub epochs: usize,
    /// Mean arrivals per epoch outside bursts.
    pub base: f64,
    /// Mean arrivals per epoch during a burst.
    pub burst: f64,
    /// Chance that a burst starts in any given quiet epoch.
    pub burst_prob: f64,
    pub min_burst_len: usize,
    pub max_burst_len: usize,
}

impl Default for BurstyShape {
    fn default() -> Self {
        BurstyShape {
            epochs: 400,
            base: 150.0,
            burst: 420.0,
            burst_prob: 0.02,
            min_burst_len: 4,
            max_burst_len: 12,
        }
    }
}

/// Poisson arrivals around a base rate with randomly placed bursts.
pub fn synthetic_bursty(shape: &BurstyShape, seed: u64) -> Result<TrafficTrace> {
    if shape.epochs == 0 {
        return Err(Error::EmptyTrace);
    }
    if !(shape.base > 0.0 && shape.burst > 0.0) || !(0.0..=1.0).contains(&shape.burst_prob) {
        return Err(Error::invalid("bursty trace needs positive rates and a probability in [0, 1]"));
    }
    if shape.min_burst_len == 0 || shape.min_burst_len > shape.max_burst_len {
        return Err(Error::invalid("burst length range is empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quiet = Poisson::new(shape.base).map_err(|e| Error::invalid(e.to_string()))?;
    let loud = Poisson::new(shape.burst).map_err(|e| Error::invalid(e.to_string()))?;
    let mut remaining = 0usize;
    let mut arrivals = Vec::with_capacity(shape.epochs);
    for _ in 0..shape.epochs {
        if remaining == 0 && rng.random::<f64>() < shape.burst_prob {
            remaining = rng.random_range(shape.min_burst_len..=shape.max_burst_len);
        }
        let sample = if remaining > 0 {
            remaining -= 1;
            loud.sample(&mut rng)
        } else {
            quiet.sample(&mut rng)
        };
        arrivals.push(sample as u64);
    }
    TrafficTrace::new(arrivals)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceState {
    ColdStarting,
    Healthy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VmInstance {
    pub id: u64,
    pub state: InstanceState,
    pub launched_epoch: u64,
    pub ready_epoch: u64,
}

/// How a batch's requests are split across exit points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitMode {
    /// Fractional counts equal to the expected exits.
    #[default]
    Expected,
    /// Whole counts by largest remainder.
    Proportional,
    /// Whole counts drawn with the seeded generator.
    Multinomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub scale_interval: u64,
    pub cold_start: u64,
    /// Extra cold-start epochs drawn uniformly from `0..=cold_start_jitter`.
    pub cold_start_jitter: u64,
    pub w_mu: f64,
    pub w_sigma: f64,
    pub phi: f64,
    pub exit_mode: ExitMode,
    pub seed: u64,
    /// Seed the monitor with the first epoch's load and start with its
    /// instance target already healthy.
    pub warm_start: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            scale_interval: DEFAULT_SCALE_INTERVAL,
            cold_start: DEFAULT_COLD_START,
            cold_start_jitter: 0,
            w_mu: crate::traffic::DEFAULT_W_MU,
            w_sigma: crate::traffic::DEFAULT_W_SIGMA,
            phi: crate::traffic::DEFAULT_PHI,
            exit_mode: ExitMode::Expected,
            seed: 0,
            warm_start: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRow {
    pub epoch: u64,
    pub lambda: u64,
    pub mu: f64,
    pub sigma: f64,
    pub threshold: f64,
    pub healthy: usize,
    pub cold_starting: usize,
    /// Latest instance target, carried between scaling checks.
    pub target: u64,
    pub vm_batches: usize,
    pub faas_batches: usize,
    pub vm_requests: u64,
    pub faas_requests: u64,
    pub vm_cost: f64,
    pub faas_cost: f64,
    pub faas_seconds: f64,
    /// Requests in batches that finished after the SLO.
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleEvent {
    pub epoch: u64,
    pub from: usize,
    pub to: usize,
    /// Epoch from which new instances serve traffic; `None` for scale-downs.
    pub ready_epoch: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimTotals {
    pub epochs: usize,
    pub requests: u64,
    pub vm_requests: u64,
    pub faas_requests: u64,
    pub vm_cost: f64,
    pub faas_cost: f64,
    pub total_cost: f64,
    pub faas_seconds: f64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetadata {
    pub trace_sha256: String,
    pub trace_epochs: usize,
    pub seed: u64,
    pub slo: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub plan: DeploymentPlan,
    pub params: SimParams,
    pub metadata: SimMetadata,
    pub totals: SimTotals,
    pub events: Vec<ScaleEvent>,
    pub rows: Vec<EpochRow>,
}

impl SimReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|source| Error::Json {
            path: "<report>".into(),
            source,
        })
    }

    /// Per-epoch rows as CSV.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |source| Error::Csv {
            path: "<report>".into(),
            source,
        };
        w.write_record([
            "epoch",
            "lambda",
            "mu",
            "sigma",
            "healthy",
            "target",
            "vm_batches",
            "faas_batches",
            "vm_cost",
            "faas_cost",
            "violations",
        ])
        .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.epoch.to_string(),
                r.lambda.to_string(),
                r.mu.to_string(),
                r.sigma.to_string(),
                r.healthy.to_string(),
                r.target.to_string(),
                r.vm_batches.to_string(),
                r.faas_batches.to_string(),
                r.vm_cost.to_string(),
                r.faas_cost.to_string(),
                r.violations.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
    }

    /// Long-format `epoch,series,value` rows for plotting.
    pub fn to_plot_csv(&self) -> String {
        let mut out = String::from("epoch,series,value\n");
        for r in &self.rows {
            let series: [(&str, f64); 7] = [
                ("lambda", r.lambda as f64),
                ("mu", r.mu),
                ("threshold", r.threshold),
                ("healthy", r.healthy as f64),
                ("target", r.target as f64),
                ("vm_cost", r.vm_cost),
                ("faas_cost", r.faas_cost),
            ];
            for (name, v) in series {
                out.push_str(&format!("{},{name},{v}\n", r.epoch));
            }
        }
        out
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv()?.as_bytes())
    }
}

/// Survivors entering each partition for a batch of `b` requests.
fn survivors(b: u64, fractions: &[f64], survival: &[f64], mode: ExitMode, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let bf = b as f64;
    let exits: Vec<u64> = match mode {
        ExitMode::Expected => return Ok(survival.iter().map(|s| s * bf).collect()),
        ExitMode::Proportional => largest_remainder(b, fractions),
        ExitMode::Multinomial => {
            let mut left = b;
            let mut out = Vec::with_capacity(fractions.len());
            for (k, &f) in fractions.iter().enumerate() {
                if k + 1 == fractions.len() {
                    out.push(left);
                    break;
                }
                let p = if survival[k] > 0.0 { (f / survival[k]).clamp(0.0, 1.0) } else { 1.0 };
                let draw = Binomial::new(left, p)
                    .map_err(|e| Error::invalid(e.to_string()))?
                    .sample(rng);
                out.push(draw);
                left -= draw;
            }
            out
        }
    };
    let mut left = b;
    Ok(exits
        .iter()
        .map(|&e| {
            let here = left as f64;
            left -= e;
            here
        })
        .collect())
}

/// Splits `b` into whole counts proportional to `fractions`; ties in the
/// remainder go to the earlier partition.
pub fn largest_remainder(b: u64, fractions: &[f64]) -> Vec<u64> {
    let exact: Vec<f64> = fractions.iter().map(|f| f * b as f64).collect();
    let mut counts: Vec<u64> = exact.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&a, &c| {
        let ra = exact[a] - exact[a].floor();
        let rc = exact[c] - exact[c].floor();
        rc.total_cmp(&ra).then(a.cmp(&c))
    });
    for &k in order.iter().take(b.saturating_sub(assigned) as usize) {
        counts[k] += 1;
    }
    counts
}

struct BatchOutcome {
    faas_seconds: f64,
    latency: f64,
}

struct Runner<'a> {
    ctx: &'a CostContext<'a>,
    plan: &'a DeploymentPlan,
    faas: Option<&'a PlatformConfig>,
    fractions: Vec<f64>,
    survival: Vec<f64>,
    bs: f64,
}

impl Runner<'_> {
    fn stage(&self, pid: usize, cfg: &str, count: f64) -> Result<f64> {
        Ok(self.ctx.profile.batch_runtime(pid, cfg)? * count / self.bs)
    }

    /// Whole model on serverless.
    fn serverless_batch(&self, b: u64, rng: &mut ChaCha8Rng, mode: ExitMode) -> Result<BatchOutcome> {
        let f = self.faas.expect("serverless config checked").id.as_str();
        let surv = survivors(b, &self.fractions, &self.survival, mode, rng)?;
        let mut secs = 0.0;
        for (k, &s) in surv.iter().enumerate() {
            secs += self.stage(k + 1, f, s)?;
        }
        Ok(BatchOutcome {
            faas_seconds: secs,
            latency: secs,
        })
    }

    /// Batch on a long-lived instance, offloading after the cut for hybrids.
    fn instance_batch(&self, b: u64, rng: &mut ChaCha8Rng, mode: ExitMode) -> Result<BatchOutcome> {
        let vm = self.plan.theta_i.as_deref().expect("instance plan has theta_i");
        let l = self.ctx.partitions();
        let cut = match self.plan.setup {
            Setup::Hybrid => self.plan.cut_id.expect("hybrid plan has cut"),
            _ => l,
        };
        let surv = survivors(b, &self.fractions, &self.survival, mode, rng)?;
        let mut on_vm = 0.0;
        for (k, &s) in surv.iter().enumerate().take(cut) {
            on_vm += self.stage(k + 1, vm, s)?;
        }
        let mut secs = 0.0;
        if cut < l {
            let f = self.faas.expect("serverless config checked").id.as_str();
            secs += surv[cut] * self.ctx.catalog.transmission_seconds / self.bs;
            for (k, &s) in surv.iter().enumerate().skip(cut) {
                secs += self.stage(k + 1, f, s)?;
            }
        }
        Ok(BatchOutcome {
            faas_seconds: secs,
            latency: on_vm + secs,
        })
    }
}

/// Replays `trace` against `plan`. Epochs are numbered from 1 and each one
/// runs: promote ready instances, update the monitor, route, accrue cost,
/// then rescale on every `scale_interval`-th epoch.
pub fn replay(
    ctx: &CostContext,
    plan: &DeploymentPlan,
    trace: &TrafficTrace,
    params: &SimParams,
) -> Result<SimReport> {
    plan.check_against(ctx.catalog, ctx.profile)?;
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if params.scale_interval == 0 {
        return Err(Error::invalid("scale interval must be at least one epoch"));
    }
    if plan.r_max.fract() != 0.0 || plan.r_max < 1.0 {
        return Err(Error::PlanMismatch(format!(
            "replay needs a whole-number r_max, got {}",
            plan.r_max
        )));
    }
    let r_max = plan.r_max as u64;
    let faas = plan.theta_f.as_deref().map(|f| ctx.catalog.serverless(f)).transpose()?;
    let vm_epoch = plan.theta_i.as_deref().map(|i| ctx.vm_epoch_cost(i)).transpose()?.unwrap_or(0.0);
    let runner = Runner {
        ctx,
        plan,
        faas,
        fractions: ctx.dist.fractions.clone(),
        survival: ctx.dist.survival(),
        bs: f64::from(ctx.profile.batch_size),
    };
    let instanced = plan.setup != Setup::FaaSOnly;
    let target_for = |state: &MonitorState| -> u64 {
        if instanced {
            scale_target(state, plan.r_max, plan.t_cip).target
        } else {
            0
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut monitor = MonitorState::new(params.w_mu, params.w_sigma, params.phi)?;
    let mut instances: Vec<VmInstance> = Vec::new();
    let mut next_id = 0u64;
    let mut target = 0u64;
    if params.warm_start {
        monitor = monitor.with_estimate(trace.arrivals[0] as f64, 0.0);
        target = target_for(&monitor);
        for _ in 0..target {
            instances.push(VmInstance {
                id: next_id,
                state: InstanceState::Healthy,
                launched_epoch: 0,
                ready_epoch: 0,
            });
            next_id += 1;
        }
    }

    let slo_limit = ctx.slo * (1.0 + 1e-12);
    let mut rows = Vec::with_capacity(trace.len());
    let mut events = Vec::new();
    let mut totals = SimTotals::default();
    for (idx, &lambda) in trace.arrivals.iter().enumerate() {
        let t = idx as u64 + 1;
        for inst in instances.iter_mut() {
            if inst.state == InstanceState::ColdStarting && inst.ready_epoch <= t {
                inst.state = InstanceState::Healthy;
            }
        }
        monitor = monitor.update(lambda as f64);
        let healthy = instances.iter().filter(|i| i.state == InstanceState::Healthy).count();
        let routing = route_epoch(t, lambda, healthy, r_max, monitor.threshold());
        if !routing.faas_batches.is_empty() && faas.is_none() {
            return Err(Error::PlanMismatch(
                "traffic overflowed the instances but the plan has no serverless config".into(),
            ));
        }

        let mut faas_cost = 0.0;
        let mut faas_seconds = 0.0;
        let mut violations = 0u64;
        let mut account = |b: u64, out: BatchOutcome| -> Result<()> {
            if out.faas_seconds > 0.0 {
                faas_cost += serverless_exec_cost(faas.expect("serverless config checked"), out.faas_seconds)?;
                faas_seconds += out.faas_seconds;
            }
            if out.latency > slo_limit {
                violations += b;
            }
            Ok(())
        };
        for &b in &routing.vm_batches {
            let out = runner.instance_batch(b, &mut rng, params.exit_mode)?;
            account(b, out)?;
        }
        for &b in &routing.faas_batches {
            let out = runner.serverless_batch(b, &mut rng, params.exit_mode)?;
            account(b, out)?;
        }
        let vm_cost = instances.len() as f64 * vm_epoch;

        if t.is_multiple_of(params.scale_interval) {
            target = target_for(&monitor);
            let current = instances.len();
            let wanted = target as usize;
            if wanted > current {
                let jitter = if params.cold_start_jitter > 0 {
                    rng.random_range(0..=params.cold_start_jitter)
                } else {
                    0
                };
                let ready = t + params.cold_start + jitter;
                for _ in current..wanted {
                    instances.push(VmInstance {
                        id: next_id,
                        state: if ready <= t {
                            InstanceState::Healthy
                        } else {
                            InstanceState::ColdStarting
                        },
                        launched_epoch: t,
                        ready_epoch: ready,
                    });
                    next_id += 1;
                }
                events.push(ScaleEvent {
                    epoch: t,
                    from: current,
                    to: wanted,
                    ready_epoch: Some(ready),
                });
            } else if wanted < current {
                instances.sort_by_key(|i| i.id);
                instances.truncate(wanted);
                events.push(ScaleEvent {
                    epoch: t,
                    from: current,
                    to: wanted,
                    ready_epoch: None,
                });
            }
        }

        let row = EpochRow {
            epoch: t,
            lambda,
            mu: monitor.mu,
            sigma: monitor.sigma,
            threshold: monitor.threshold(),
            healthy,
            cold_starting: instances
                .iter()
                .filter(|i| i.state == InstanceState::ColdStarting)
                .count(),
            target,
            vm_batches: routing.vm_batches.len(),
            faas_batches: routing.faas_batches.len(),
            vm_requests: routing.vm_requests(),
            faas_requests: routing.faas_requests(),
            vm_cost,
            faas_cost,
            faas_seconds,
            violations,
        };
        totals.epochs += 1;
        totals.requests += lambda;
        totals.vm_requests += row.vm_requests;
        totals.faas_requests += row.faas_requests;
        totals.vm_cost += vm_cost;
        totals.faas_cost += faas_cost;
        totals.faas_seconds += faas_seconds;
        totals.violations += violations;
        rows.push(row);
    }
    totals.total_cost = totals.vm_cost + totals.faas_cost;

    Ok(SimReport {
        plan: plan.clone(),
        params: params.clone(),
        metadata: SimMetadata {
            trace_sha256: trace.hash(),
            trace_epochs: trace.len(),
            seed: params.seed,
            slo: ctx.slo,
        },
        totals,
        events,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolSummary {
    pub label: String,
    pub setup: Setup,
    pub vm_cost: f64,
    pub faas_cost: f64,
    pub total_cost: f64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseDiff {
    pub cheaper: String,
    pub dearer: String,
    /// How much more the dearer pool costs, as a percentage of the cheaper one.
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolComparison {
    /// Cheapest first.
    pub ranked: Vec<PoolSummary>,
    pub pairwise: Vec<PairwiseDiff>,
}

impl PoolComparison {
    pub fn percent_over_cheapest(&self, setup: Setup) -> Option<f64> {
        let best = self.ranked.first()?.total_cost;
        let pool = self.ranked.iter().find(|p| p.setup == setup)?;
        Some(percent_more(pool.total_cost, best))
    }
}

fn percent_more(cost: f64, base: f64) -> f64 {
    if base > 0.0 {
        (cost - base) / base * 100.0
    } else if cost > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Replays each plan over the same trace and ranks them by total cost.
pub fn compare_pools(
    ctx: &CostContext,
    plans: &[DeploymentPlan],
    trace: &TrafficTrace,
    params: &SimParams,
) -> Result<(PoolComparison, Vec<SimReport>)> {
    let reports = plans
        .iter()
        .map(|p| replay(ctx, p, trace, params))
        .collect::<Result<Vec<_>>>()?;
    let mut ranked: Vec<PoolSummary> = reports
        .iter()
        .map(|r| PoolSummary {
            label: r.plan.label(),
            setup: r.plan.setup,
            vm_cost: r.totals.vm_cost,
            faas_cost: r.totals.faas_cost,
            total_cost: r.totals.total_cost,
            violations: r.totals.violations,
        })
        .collect();
    ranked.sort_by(|a, b| a.total_cost.total_cmp(&b.total_cost));
    let mut pairwise = Vec::new();
    for i in 0..ranked.len() {
        for j in i + 1..ranked.len() {
            pairwise.push(PairwiseDiff {
                cheaper: ranked[i].label.clone(),
                dearer: ranked[j].label.clone(),
                percent: percent_more(ranked[j].total_cost, ranked[i].total_cost),
            });
        }
    }
    Ok((PoolComparison { ranked, pairwise }, reports))
}
