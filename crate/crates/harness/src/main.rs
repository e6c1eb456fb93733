use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cbal_harness::experiment::{compare_baselines, relative_drop, run, slope_check, sweep_cost};
use cbal_harness::output::{ensure_dir, write_compare, write_run, write_sweep, write_text};
use cbal_harness::sim::Collect;
use cbal_harness::verify::{concentration, elimination};
use cbal_harness::RunConfig;

#[derive(Parser)]
#[command(
    name = "cbal",
    version,
    about = "Cost-aware contextual bandit simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat TOML run configuration; omitted keys take built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of replications.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    horizon: Option<u64>,
    /// Output directory (default: `out` from the config, else `results`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep the per-slot trace and write trace.csv.
    #[arg(long)]
    trace: bool,
}

impl Common {
    fn load(&self) -> Result<(RunConfig, PathBuf)> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default_env(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.reps {
            cfg.replications = r;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        cfg.record_trace |= self.trace;
        cfg.validate()?;
        let out = self
            .out
            .clone()
            .or_else(|| cfg.out.clone())
            .unwrap_or_else(|| PathBuf::from("results"));
        ensure_dir(&out)?;
        Ok((cfg, out))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Concentration,
    Elimination,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the configured policy.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Run all three learners on one environment and tabulate payoffs.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Rerun the configured policy for several cost scales.
    SweepCost {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.25, 0.5, 1.0])]
        costs: Vec<f64>,
    },
    /// Fit the log-log growth rate of the mean regret checkpoints.
    SlopeCheck {
        #[command(flatten)]
        common: Common,
        /// Number of trailing checkpoints to fit.
        #[arg(long, default_value_t = 6)]
        window: usize,
        /// Fit every checkpoint from this epoch on instead of a trailing window.
        #[arg(long)]
        from_epoch: Option<u32>,
    },
    /// Concentration and elimination checks.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 6)]
        min_epoch: u32,
        #[arg(long, default_value_t = 9)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { common } => {
            let (cfg, out) = common.load()?;
            let outcome = run(&cfg, collect(&cfg))?;
            print!("{}", outcome.summary.to_text());
            for p in write_run(&out, &outcome)? {
                eprintln!("wrote {}", p.display());
            }
        }
        Command::Compare { common } => {
            let (cfg, out) = common.load()?;
            let rows = compare_baselines(&cfg)?;
            for r in &rows {
                println!(
                    "{:<14} payoff {:.3} (se {:.3})",
                    r.policy.as_str(),
                    r.summary.payoff.mean,
                    r.summary.payoff.stderr
                );
            }
            let path = out.join("compare.csv");
            write_compare(&path, &rows)?;
            eprintln!("wrote {}", path.display());
        }
        Command::SweepCost { common, costs } => {
            let (cfg, out) = common.load()?;
            let rows = sweep_cost(&cfg, &costs)?;
            for r in &rows {
                println!(
                    "c = {} payoff {:.3} (se {:.3})",
                    r.c, r.mean_payoff, r.stderr_payoff
                );
            }
            println!("relative_drop = {}", relative_drop(&rows));
            let path = out.join("sweep.csv");
            write_sweep(&path, &rows)?;
            eprintln!("wrote {}", path.display());
        }
        Command::SlopeCheck {
            common,
            window,
            from_epoch,
        } => {
            let (cfg, out) = common.load()?;
            let outcome = run(&cfg, collect(&cfg))?;
            let report = slope_check(
                &outcome.summary,
                cfg.params.regret_exponent(),
                from_epoch,
                window,
            )?;
            let mut text = outcome.summary.to_text();
            text.push_str(&format!(
                "slope = {}\ntheoretical_exponent = {}\nrate_decreasing_last4 = {}\n",
                report.slope,
                report.theory,
                report.rate_decreasing(4)
            ));
            for (c, rate) in report.fitted.iter().zip(&report.regret_rate) {
                text.push_str(&format!("rate_at_T{} = {}\n", c.t, rate));
            }
            print!("{text}");
            write_run(&out, &outcome)?;
            write_text(&out.join("summary.txt"), &text)?;
        }
        Command::Verify {
            common,
            suite,
            trials,
            min_epoch,
            grid,
        } => {
            let (cfg, out) = common.load()?;
            let mut text = String::new();
            if matches!(suite, Suite::Concentration | Suite::All) {
                let r = concentration(0.5, 64, 256, 0.5, trials, cfg.seed);
                text.push_str(&format!(
                    "concentration_trials = {}\nconcentration_threshold = {}\nconcentration_exceed = {}\n\
                     concentration_rate = {}\nconcentration_bound = {}\n",
                    r.trials,
                    r.threshold,
                    r.exceed,
                    r.rate(),
                    r.bound
                ));
            }
            if matches!(suite, Suite::Elimination | Suite::All) {
                let r = elimination(&cfg, min_epoch, grid).context("elimination check failed")?;
                text.push_str(&format!(
                    "elimination_cases = {}\nelimination_survival_rate = {}\nelimination_stop_events = {}\n\
                     elimination_survivors_at_stop = {}\nelimination_stop_purity = {}\n",
                    r.cases,
                    r.survival_rate(),
                    r.stop_events,
                    r.survivors_at_stop,
                    r.stop_purity()
                ));
            }
            print!("{text}");
            write_text(&out.join("verify.txt"), &text)?;
        }
    }
    Ok(())
}

fn collect(cfg: &RunConfig) -> Collect {
    Collect {
        trace: cfg.record_trace,
        epochs: false,
    }
}
