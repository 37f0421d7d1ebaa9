//! Thin command-line front end over the library. The library's examples
//! directory is the richer tour; this binary exists for scripted runs.

use aircombat::combat_env::ScenarioConfig;
use aircombat::harness::{
    check_overwrite, duel, evaluate, export_trajectory_from_checkpoints, plot_metrics,
    train_with_resume, RunConfig,
};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "aircombat", about = "Air-combat self-play training and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario preset: advantageous | disadvantageous | head_on | neutral.
    /// Defaults to the scenario stored in the checkpoint's configuration.
    #[arg(long)]
    scenario: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run (or resume) a training run from a TOML configuration.
    Train {
        /// Run configuration file; omit for the desk-scale default task.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Start from a named preset instead of a file:
        /// desk_attack | desk_self_play | paper_attack.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue from a checkpoint.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Print the effective configuration and exit.
        #[arg(long)]
        dump_config: bool,
    },
    /// Evaluate a checkpoint with the deterministic policy, sparse reward only.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pit two checkpoints against each other.
    Duel {
        #[arg(long)]
        blue: PathBuf,
        #[arg(long)]
        red: PathBuf,
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export one seeded rollout as CSV plus an SVG picture.
    ExportTrajectory {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Optional opponent checkpoint (red flies it instead of the scenario
        /// controller).
        #[arg(long)]
        red_checkpoint: Option<PathBuf>,
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path; the SVG lands next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a metrics JSONL log into charts.
    PlotMetrics {
        #[arg(long)]
        metrics: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn resolve_scenario(arg: &ScenarioArg) -> Result<Option<ScenarioConfig>, aircombat::Error> {
    match &arg.scenario {
        None => Ok(None),
        Some(name) => ScenarioConfig::preset(name).map(Some).ok_or_else(|| {
            aircombat::Error::Config(format!(
                "unknown scenario preset {name:?} (try advantageous, disadvantageous, head_on, neutral)"
            ))
        }),
    }
}

fn run() -> Result<(), aircombat::Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Train {
            config,
            preset,
            seed,
            out,
            resume,
            dump_config,
        } => {
            let mut cfg = match (config, preset.as_deref()) {
                (Some(path), _) => RunConfig::load(&path)?,
                (None, Some("desk_attack") | None) => RunConfig::desk_attack(),
                (None, Some("desk_self_play")) => RunConfig::desk_self_play(),
                (None, Some("paper_attack")) => RunConfig::paper_scale_attack(),
                (None, Some(other)) => {
                    return Err(aircombat::Error::Config(format!(
                        "unknown preset {other:?}"
                    )))
                }
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            if dump_config {
                println!("{}", cfg.to_toml()?);
                return Ok(());
            }
            let output = train_with_resume(&cfg, resume.as_deref())?;
            println!(
                "{}",
                serde_json::json!({
                    "episodes_run": output.episodes_run,
                    "env_steps": output.env_steps,
                    "final_q": output.final_q,
                    "checkpoint": output.final_checkpoint,
                    "metrics": output.metrics_path,
                })
            );
        }
        Command::Evaluate {
            checkpoint,
            scenario,
            episodes,
            seed,
        } => {
            let report = evaluate(&checkpoint, resolve_scenario(&scenario)?, episodes, seed)?;
            println!("{}", serde_json::to_string(&report).unwrap());
        }
        Command::Duel {
            blue,
            red,
            scenario,
            episodes,
            seed,
        } => {
            let (b, r) = duel(&blue, &red, resolve_scenario(&scenario)?, episodes, seed)?;
            println!(
                "{}",
                serde_json::json!({ "blue": b, "red": r })
            );
        }
        Command::ExportTrajectory {
            checkpoint,
            red_checkpoint,
            scenario,
            seed,
            out,
        } => {
            check_overwrite(&out)?;
            let (rows, svg) = export_trajectory_from_checkpoints(
                &checkpoint,
                red_checkpoint.as_deref(),
                resolve_scenario(&scenario)?,
                seed,
                &out,
            )?;
            println!(
                "{}",
                serde_json::json!({ "rows": rows, "csv": out, "svg": svg })
            );
        }
        Command::PlotMetrics { metrics, out } => {
            plot_metrics(&metrics, &out)?;
            println!("{}", serde_json::json!({ "svg": out }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": format!("{err}") })
            );
            ExitCode::FAILURE
        }
    }
}
