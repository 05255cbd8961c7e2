use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ltesim_cli::{parse_config, run_sweep, write_outputs, HarnessError, SweepPlan};
use ltesim_core::{KpiReport, KpiScope, SchedulerKind, SimConfig};

#[derive(Parser)]
#[command(name = "ltesim", version, about = "LTE downlink scheduler simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and print its KPIs.
    Simulate(Common),
    /// Sweep schedulers x UE counts x seeds and write results.csv and plot data.
    Sweep(Common),
    /// Parse and validate a scenario file.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// PF, EXP, LOG or FLS. Repeatable or comma-separated for sweeps.
    #[arg(long, value_delimiter = ',')]
    scheduler: Vec<SchedulerKind>,
    /// Number of UEs. Repeatable or comma-separated for sweeps.
    #[arg(long = "ues", value_delimiter = ',')]
    ues: Vec<usize>,
    /// Seed of a single run, or the first seed of a sweep.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of seeds per sweep point.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    /// Simulated duration in seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// Output directory for results.csv and fig_*.dat.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn base_config(&self) -> Result<SimConfig, HarnessError> {
        let mut config = match &self.config {
            Some(path) => parse_config(&read(path)?)?,
            None => SimConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(duration) = self.duration {
            config.duration_s = duration;
        }
        config.validate()?;
        Ok(config)
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn print_report(report: &KpiReport) {
    println!(
        "{} | {} UEs | {} seed(s) | {:.1} s",
        report.scheduler, report.n_ues, report.seed_count, report.duration_s
    );
    println!(
        "  {:<12} {:>14} {:>12} {:>10} {:>9} {:>10}",
        "class", "throughput", "delay_ms", "plr", "jain", "bit/s/Hz"
    );
    for scope in KpiScope::ROWS {
        let k = report.scope(scope);
        println!(
            "  {:<12} {:>12.3}M {:>12.3} {:>10.5} {:>9.4} {:>10.4}",
            scope.name(),
            k.throughput_bps / 1e6,
            k.avg_delay_s * 1e3,
            k.plr,
            k.fairness,
            k.spectral_efficiency
        );
    }
    if report.diagnostics.invariant_violations > 0 {
        println!("  invariant violations: {}", report.diagnostics.invariant_violations);
    }
}

fn simulate(args: &Common) -> Result<(), HarnessError> {
    let mut config = args.base_config()?;
    if let Some(&s) = args.scheduler.first() {
        config.scheduler = s;
    }
    if let Some(&n) = args.ues.first() {
        config.n_ues = n;
    }
    let report = ltesim_core::run(&config)?;
    let report = ltesim_core::aggregate(&[report])?;
    print_report(&report);
    if let Some(out) = &args.out {
        for path in write_outputs(std::slice::from_ref(&report), out)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn sweep(args: &Common) -> Result<(), HarnessError> {
    let base = args.base_config()?;
    let defaults = SweepPlan::default();
    let first_seed = args.seed.unwrap_or(1);
    let plan = SweepPlan {
        schedulers: if args.scheduler.is_empty() {
            defaults.schedulers
        } else {
            args.scheduler.clone()
        },
        ue_counts: if args.ues.is_empty() {
            defaults.ue_counts
        } else {
            args.ues.clone()
        },
        seeds: (first_seed..first_seed + args.seeds).collect(),
        base,
    };
    let started = Instant::now();
    let reports = run_sweep(&plan)?;
    for report in &reports {
        print_report(report);
    }
    eprintln!("sweep finished in {:.1} s", started.elapsed().as_secs_f64());
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("results"));
    for path in write_outputs(&reports, &out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::ValidateConfig { config } => read(config).and_then(|text| parse_config(&text)).map(|c| {
            println!("ok: {} with {} UEs for {} s", c.scheduler, c.n_ues, c.duration_s);
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
