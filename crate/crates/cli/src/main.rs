use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use truncstable_cli::config::{DomainConfig, ProcessConfig, RunConfig, SchemeConfig, SCHEMA_VERSION};
use truncstable_cli::outputs::{emit_plotdata, summary_table, write_json_atomic, write_samples_csv};
use truncstable_cli::run_config;

#[derive(Parser)]
#[command(
    name = "truncstable",
    about = "Simulation and verification toolkit for truncated stable processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute verification suites and write per-suite JSON reports.
    Run(RunArgs),
    /// Convert stored reports into long-format CSV for plotting tools.
    EmitPlotdata(EmitArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite name (repeatable) or "all".
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Domain preset: ball | dumbbell-gap05 | dumbbell-gap2 | box | shell.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    /// Paths per estimate.
    #[arg(long)]
    n: Option<usize>,
    /// Mandatory (here or in the config): all runs are seed-deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump a CSV of raw exit samples for the configured setup.
    #[arg(long)]
    emit_samples: bool,
    /// Euler time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Small-jump cutoff.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct EmitArgs {
    /// Directory holding per-suite report JSON files.
    #[arg(long)]
    reports: PathBuf,
    /// Output directory for the CSV files (defaults to the report dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn merge_config(args: &RunArgs) -> anyhow::Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig {
            schema_version: SCHEMA_VERSION,
            seed: args
                .seed
                .ok_or_else(|| anyhow!("--seed is required when no config file is given"))?,
            n: 10_000,
            process: ProcessConfig::default(),
            domain: DomainConfig::default(),
            scheme: SchemeConfig::default(),
            suites: vec![],
            out_dir: "out".into(),
            emit_samples: false,
        },
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if !args.suites.is_empty() {
        cfg.suites = args.suites.clone();
    }
    if let Some(d) = &args.domain {
        cfg.domain = DomainConfig::Preset { preset: d.clone() };
    }
    if let Some(a) = args.alpha {
        cfg.process.alpha = a;
    }
    if let Some(d) = args.d {
        cfg.process.d = d;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if args.emit_samples {
        cfg.emit_samples = true;
    }
    if let Some(dt) = args.dt {
        cfg.scheme.dt = dt;
    }
    if let Some(eps) = args.eps {
        cfg.scheme.eps = eps;
    }
    Ok(cfg)
}

fn cmd_run(args: RunArgs) -> anyhow::Result<i32> {
    let cfg = merge_config(&args)?;
    let outcome = run_config(&cfg)?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    for report in &outcome.reports {
        let path = cfg.out_dir.join(format!("{}.json", report.theorem));
        write_json_atomic(&path, report)?;
    }
    if cfg.emit_samples {
        let (spec, domain) = cfg.validate()?;
        let (bc, _) = domain.bounding_ball();
        let results = truncstable::simulate::batch_exits(
            &spec,
            &domain,
            &bc,
            cfg.n.min(100_000),
            cfg.seed,
            Some(
                &truncstable::simulate::SchemeParams::new(&spec, cfg.scheme.dt, cfg.scheme.eps)
                    .map_err(|e| anyhow!("{e}"))?,
            ),
        )
        .map_err(|e| anyhow!("{e}"))?;
        let samples = truncstable::simulate::collect_batch(results).map_err(|e| anyhow!("{e}"))?;
        write_samples_csv(&cfg.out_dir.join("samples.csv"), &samples)?;
    }
    print!("{}", summary_table(&outcome.reports));
    Ok(if outcome.all_required_pass { 0 } else { 1 })
}

fn cmd_emit(args: EmitArgs) -> anyhow::Result<i32> {
    let mut reports = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(&args.reports)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    if entries.is_empty() {
        bail!("no report JSON files found in {}", args.reports.display());
    }
    for path in entries {
        let text = std::fs::read_to_string(&path)?;
        let report: truncstable::verify::VerificationReport = serde_json::from_str(&text)
            .map_err(|e| anyhow!("parsing report {}: {e}", path.display()))?;
        reports.push(report);
    }
    let out = args.out.unwrap_or_else(|| args.reports.clone());
    let written = emit_plotdata(&reports, &out)?;
    for w in written {
        println!("{}", w.display());
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::EmitPlotdata(args) => cmd_emit(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
