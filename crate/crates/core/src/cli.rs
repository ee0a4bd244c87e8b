//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::configurator::{
    default_cuts, evaluate_feasibility, select_plan, sweep, DeploymentPlan, PlanSelection, SweepAxis,
    SweepSetups,
};
use crate::costmodel::{CostContext, Setup, SpillBilling};
use crate::error::Error;
use crate::io::write_atomic;
use crate::pricing::PricingCatalog;
use crate::profile::{ExitDistribution, StagedModelProfile};
use crate::simengine::{
    compare_pools, synthetic_bursty, BurstyShape, ExitMode, PoolComparison, SimParams,
    SimReport, TrafficTrace,
};

#[derive(Debug, Parser)]
#[command(name = "hybrid-offload", version, about = "Plan and replay early-exit inference across VM and serverless pools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List candidate setups and whether they meet the SLO.
    Feasible(FeasibleArgs),
    /// Pick the cheapest feasible setup for a long-term load.
    Plan(PlanArgs),
    /// Evaluate setup costs along one axis and report crossings.
    Sweep(SweepArgs),
    /// Replay a traffic trace against one plan, or compare the best pool of each setup.
    Replay(ReplayArgs),
    /// Write a seeded synthetic bursty trace.
    TraceGen(TraceGenArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long)]
    pub pricing: PathBuf,
    /// Requests per instance per epoch.
    #[arg(long, default_value_t = 100.0)]
    pub r_max: f64,
    /// SLO in seconds; also the epoch length. Defaults to the profile's SLO.
    #[arg(long)]
    pub slo: Option<f64>,
    /// Offload cuts to consider, e.g. `1,2,3`. Defaults to every boundary before the last partition.
    #[arg(long, value_delimiter = ',')]
    pub cuts: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct FeasibleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also list setups that miss the SLO.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub dist: PathBuf,
    /// Long-term load in requests per epoch.
    #[arg(long)]
    pub n: Option<f64>,
    /// Take the long-term load as this trace's mean instead.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Leave residual spill out of the instance setups' cost.
    #[arg(long)]
    pub strict_spill: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    ConfThres,
    CutId,
    Ingestion,
}

impl From<AxisArg> for SweepAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::ConfThres => SweepAxis::ConfThres,
            AxisArg::CutId => SweepAxis::CutId,
            AxisArg::Ingestion => SweepAxis::Ingestion,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// One distribution, or an array keyed by `conf_thres` for the conf-thres axis.
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// `start:stop:step` or a comma-separated list. Defaults to the family's
    /// thresholds, every cut, or 0..=4*r_max in steps of 1.
    #[arg(long)]
    pub grid: Option<String>,
    /// Requests per epoch for the conf-thres and cut-id axes.
    #[arg(long, default_value_t = 250.0)]
    pub n: f64,
    #[arg(long)]
    pub iaas: Option<String>,
    #[arg(long)]
    pub faas: Option<String>,
    #[arg(long)]
    pub hybrid_vm: Option<String>,
    #[arg(long)]
    pub cut: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExitModeArg {
    Expected,
    Proportional,
    Multinomial,
}

impl From<ExitModeArg> for ExitMode {
    fn from(m: ExitModeArg) -> Self {
        match m {
            ExitModeArg::Expected => ExitMode::Expected,
            ExitModeArg::Proportional => ExitMode::Proportional,
            ExitModeArg::Multinomial => ExitMode::Multinomial,
        }
    }
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long)]
    pub trace: PathBuf,
    /// Plan to replay. Without it, the best plan of each setup is replayed and ranked.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Override the plan's T-CIP.
    #[arg(long)]
    pub t_cip: Option<f64>,
    /// Long-term load used to pick plans; defaults to the trace mean.
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long, default_value_t = crate::simengine::DEFAULT_SCALE_INTERVAL)]
    pub scale_interval: u64,
    #[arg(long, default_value_t = crate::simengine::DEFAULT_COLD_START)]
    pub cold_start: u64,
    #[arg(long, default_value_t = 0)]
    pub cold_start_jitter: u64,
    #[arg(long, default_value_t = crate::traffic::DEFAULT_W_MU)]
    pub w_mu: f64,
    #[arg(long, default_value_t = crate::traffic::DEFAULT_W_SIGMA)]
    pub w_sigma: f64,
    #[arg(long, default_value_t = crate::traffic::DEFAULT_PHI)]
    pub phi: f64,
    #[arg(long, value_enum, default_value = "expected")]
    pub exit_mode: ExitModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replay only the first N epochs.
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub warm_start: bool,
    /// JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-epoch CSV. With several pools, one file per pool with the setup appended to the stem.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Long-format plotting CSV, laid out like `--csv`.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceGenArgs {
    #[arg(long, default_value_t = 400)]
    pub epochs: usize,
    #[arg(long, default_value_t = 150.0)]
    pub base: f64,
    #[arg(long, default_value_t = 420.0)]
    pub burst: f64,
    #[arg(long, default_value_t = 0.02)]
    pub burst_prob: f64,
    #[arg(long, default_value_t = 4)]
    pub min_burst: usize,
    #[arg(long, default_value_t = 12)]
    pub max_burst: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Process exit code for an error: 2 when nothing meets the SLO, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::NoFeasibleConfig) => 2,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Feasible(a) => cmd_feasible(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Replay(a) => cmd_replay(a),
        Command::TraceGen(a) => cmd_trace_gen(a),
    }
}

struct Model {
    profile: StagedModelProfile,
    catalog: PricingCatalog,
    r_max: f64,
    slo: f64,
    cuts: Vec<usize>,
}

fn load_model(a: &ModelArgs) -> anyhow::Result<Model> {
    let profile = StagedModelProfile::load(&a.profile)?;
    let catalog = PricingCatalog::load(&a.pricing)?;
    for w in catalog.warnings() {
        eprintln!("warning: {w}");
    }
    let slo = a.slo.unwrap_or(profile.slo);
    let cuts = a.cuts.clone().unwrap_or_else(|| default_cuts(&profile));
    Ok(Model {
        profile,
        catalog,
        r_max: a.r_max,
        slo,
        cuts,
    })
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn opt(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("-")
}

fn cmd_feasible(a: FeasibleArgs) -> anyhow::Result<()> {
    let m = load_model(&a.model)?;
    let rows = evaluate_feasibility(&m.profile, &m.catalog, m.r_max, m.slo, &m.cuts)?;
    let shown: Vec<_> = rows.iter().filter(|r| a.all || r.feasible).collect();
    if let Some(out) = &a.out {
        write_atomic(out, serde_json::to_string_pretty(&shown)?.as_bytes())?;
    } else {
        println!("{:<10} {:<14} {:<14} {:>4} {:>10} {:>9}", "setup", "theta_i", "theta_f", "cut", "path_s", "feasible");
        for r in &shown {
            println!(
                "{:<10} {:<14} {:<14} {:>4} {:>10.3} {:>9}",
                r.setup.to_string(),
                opt(&r.theta_i),
                opt(&r.theta_f),
                r.cut_id.map_or("-".to_string(), |c| c.to_string()),
                r.path_seconds,
                r.feasible
            );
        }
    }
    if !rows.iter().any(|r| r.feasible) {
        return Err(Error::NoFeasibleConfig.into());
    }
    Ok(())
}

fn long_term_load(n: Option<f64>, trace: Option<&Path>) -> anyhow::Result<f64> {
    match (n, trace) {
        (Some(n), _) => Ok(n),
        (None, Some(path)) => {
            let t = TrafficTrace::load(path)?;
            Ok(t.total() as f64 / t.len() as f64)
        }
        (None, None) => bail!("give the long-term load with --n or --trace"),
    }
}

fn choose(m: &Model, dist: &ExitDistribution, n: f64, billing: SpillBilling) -> anyhow::Result<PlanSelection> {
    let ctx = CostContext::new(&m.profile, dist, &m.catalog, m.r_max, m.slo)?.with_billing(billing);
    let rows = evaluate_feasibility(&m.profile, &m.catalog, m.r_max, m.slo, &m.cuts)?;
    Ok(select_plan(&ctx, &rows, n)?)
}

fn print_selection(sel: &PlanSelection, currency: &str, n: f64) {
    println!("long-term load: {n} requests/epoch");
    for o in sel.options() {
        println!(
            "  {:<44} {:>12.6} {currency}/epoch  vms={} t_cip={:.3}",
            o.plan.label(),
            o.cost.total,
            o.cost.vm_count,
            o.plan.t_cip
        );
    }
    println!("selected: {} (t_cip {:.3})", sel.plan.label(), sel.plan.t_cip);
}

fn cmd_plan(a: PlanArgs) -> anyhow::Result<()> {
    let m = load_model(&a.model)?;
    let dist = ExitDistribution::load(&a.dist)?;
    dist.check_matches(&m.profile)?;
    let n = long_term_load(a.n, a.trace.as_deref())?;
    let billing = if a.strict_spill { SpillBilling::Strict } else { SpillBilling::Included };
    let sel = choose(&m, &dist, n, billing)?;
    print_selection(&sel, &m.catalog.currency, n);
    if let Some(out) = &a.out {
        write_atomic(out, serde_json::to_string_pretty(&sel.plan)?.as_bytes())?;
    }
    Ok(())
}

/// Parses `start:stop:step` (inclusive) or `a,b,c`.
pub fn parse_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let [start, stop, step] = [parts[0], parts[1], parts[2]].map(|s| s.trim().parse::<f64>());
        let (start, stop, step) = (start?, stop?, step?);
        if !(step > 0.0) || stop < start {
            bail!("grid `{text}` needs step > 0 and stop >= start");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| start + step * i as f64).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad grid value `{s}`")))
        .collect()
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<()> {
    let m = load_model(&a.model)?;
    let family = ExitDistribution::load_family(&a.dist)?;
    for d in &family {
        d.check_matches(&m.profile)?;
    }
    let axis = SweepAxis::from(a.axis);
    let base = &family[0];
    let sel = choose(&m, base, a.n, SpillBilling::Included)?;
    let pick = |explicit: &Option<String>, fallback: Option<String>, what: &str| -> anyhow::Result<String> {
        explicit
            .clone()
            .or(fallback)
            .with_context(|| format!("no feasible {what} config; pass one explicitly"))
    };
    let hybrid = sel.hybrid.as_ref().map(|o| &o.plan);
    let faas = pick(
        &a.faas,
        sel.faas
            .as_ref()
            .and_then(|o| o.plan.theta_f.clone())
            .or_else(|| hybrid.and_then(|p| p.theta_f.clone())),
        "serverless",
    )?;
    let iaas = pick(&a.iaas, sel.iaas.as_ref().and_then(|o| o.plan.theta_i.clone()), "IaaS")?;
    let hybrid_vm = pick(&a.hybrid_vm, hybrid.and_then(|p| p.theta_i.clone()), "hybrid VM")?;
    let cut = a.cut.or(hybrid.and_then(|p| p.cut_id)).unwrap_or(1);

    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => match axis {
            SweepAxis::ConfThres => family.iter().map(|d| d.conf_thres).collect(),
            SweepAxis::CutId => (1..=m.profile.len()).map(|c| c as f64).collect(),
            SweepAxis::Ingestion => (0..=(4.0 * m.r_max) as usize).map(|i| i as f64).collect(),
        },
    };
    let ctx = CostContext::new(&m.profile, base, &m.catalog, m.r_max, m.slo)?;
    let setups = SweepSetups {
        iaas_vm: &iaas,
        faas: &faas,
        hybrid_vm: &hybrid_vm,
        cut,
        n: a.n,
        family: &family,
    };
    let result = sweep(&ctx, axis, &grid, &setups)?;

    let mut text = String::from("x,C_I,C_F,C_H\n");
    for p in &result.points {
        text.push_str(&format!("{},{},{},{}\n", p.x, p.iaas.total, p.faas.total, p.hybrid.total));
    }
    for c in &result.crossings {
        text.push_str(&format!(
            "# crossing {}-{} x={} {}\n",
            c.first.short(),
            c.second.short(),
            c.x,
            if c.rising { "rising" } else { "falling" }
        ));
    }
    emit(a.out.as_deref(), &text)
}

/// Inputs and settings of a replay run, recorded next to its results.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub inputs: Vec<InputDigest>,
    pub r_max: f64,
    pub slo: f64,
    pub long_term_load: f64,
    pub params: SimParams,
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub role: &'static str,
    pub path: String,
    pub sha256: String,
}

fn digest(role: &'static str, path: &Path) -> anyhow::Result<InputDigest> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(InputDigest {
        role,
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

#[derive(Debug, Serialize)]
struct ReplayOutput<'a> {
    manifest: RunManifest,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<&'a PoolComparison>,
    reports: &'a [SimReport],
}

fn suffixed(path: &Path, setup: Setup) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    let tag = match setup {
        Setup::IaaSOnly => "iaas",
        Setup::FaaSOnly => "faas",
        Setup::Hybrid => "hybrid",
    };
    path.with_file_name(format!("{stem}-{tag}{ext}"))
}

fn cmd_replay(a: ReplayArgs) -> anyhow::Result<()> {
    let m = load_model(&a.model)?;
    let dist = ExitDistribution::load(&a.dist)?;
    dist.check_matches(&m.profile)?;
    let mut trace = TrafficTrace::load(&a.trace)?;
    if let Some(e) = a.epochs {
        trace = trace.truncated(e)?;
    }
    let plan_file = a.plan.as_deref().map(DeploymentPlan::load).transpose()?;
    let n = match a.n {
        Some(n) => n,
        None => trace.total() as f64 / trace.len() as f64,
    };
    let params = SimParams {
        scale_interval: a.scale_interval,
        cold_start: a.cold_start,
        cold_start_jitter: a.cold_start_jitter,
        w_mu: a.w_mu,
        w_sigma: a.w_sigma,
        phi: a.phi,
        exit_mode: a.exit_mode.into(),
        seed: a.seed,
        warm_start: a.warm_start,
    };

    let mut plans = match plan_file {
        Some(p) => vec![p],
        None => choose(&m, &dist, n, SpillBilling::Included)?
            .options()
            .map(|o| o.plan.clone())
            .collect(),
    };
    if let Some(t) = a.t_cip {
        for p in plans.iter_mut() {
            if p.setup != Setup::FaaSOnly {
                p.t_cip = t;
            }
        }
    }
    for p in &plans {
        p.check_against(&m.catalog, &m.profile)?;
    }
    let ctx = CostContext::new(&m.profile, &dist, &m.catalog, m.r_max, m.slo)?;
    let (comparison, reports) = compare_pools(&ctx, &plans, &trace, &params)?;

    let currency = &m.catalog.currency;
    for (i, s) in comparison.ranked.iter().enumerate() {
        let over = comparison.percent_over_cheapest(s.setup).unwrap_or(0.0);
        println!(
            "{}. {:<44} total {:>12.6} {currency} (vm {:.6}, faas {:.6}) {:>+8.2}% violations {}",
            i + 1,
            s.label,
            s.total_cost,
            s.vm_cost,
            s.faas_cost,
            over,
            s.violations
        );
    }

    let mut inputs = vec![
        digest("profile", &a.model.profile)?,
        digest("pricing", &a.model.pricing)?,
        digest("dist", &a.dist)?,
        digest("trace", &a.trace)?,
    ];
    if let Some(p) = &a.plan {
        inputs.push(digest("plan", p)?);
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        inputs,
        r_max: m.r_max,
        slo: m.slo,
        long_term_load: n,
        params,
    };
    let several = reports.len() > 1;
    if let Some(out) = &a.out {
        let doc = ReplayOutput {
            manifest,
            comparison: several.then_some(&comparison),
            reports: &reports,
        };
        write_atomic(out, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    }
    for r in &reports {
        if let Some(path) = &a.csv {
            let path = if several { suffixed(path, r.plan.setup) } else { path.clone() };
            r.write_csv(&path)?;
        }
        if let Some(path) = &a.plot_data {
            let path = if several { suffixed(path, r.plan.setup) } else { path.clone() };
            write_atomic(&path, r.to_plot_csv().as_bytes())?;
        }
    }
    Ok(())
}

fn cmd_trace_gen(a: TraceGenArgs) -> anyhow::Result<()> {
    let shape = BurstyShape {
        epochs: a.epochs,
        base: a.base,
        burst: a.burst,
        burst_prob: a.burst_prob,
        min_burst_len: a.min_burst,
        max_burst_len: a.max_burst,
    };
    let trace = synthetic_bursty(&shape, a.seed)?;
    write_atomic(&a.out, trace.to_csv().as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("1, 2,5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NoFeasibleConfig.into()), 2);
        assert_eq!(exit_code(&Error::EmptyCatalog.into()), 1);
        assert_eq!(exit_code(&anyhow::anyhow!("x")), 1);
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from([
            "hybrid-offload", "replay", "--profile", "p", "--pricing", "c", "--dist", "d", "--trace", "t",
            "--cold-start", "0", "--exit-mode", "multinomial",
        ])
        .unwrap();
        match cli.command {
            Command::Replay(r) => {
                assert_eq!(r.cold_start, 0);
                assert_eq!(r.scale_interval, 25);
                assert_eq!(r.model.r_max, 100.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["hybrid-offload", "sweep", "--axis", "latency"]).is_err());
    }
}
