//! Trains briefly, then evaluates the checkpoint on the four canned initial
//! situations (trailing, trailed, head-on, diverging).
//!
//!     cargo run --release --example evaluate_policy

use aircombat::combat_env::ScenarioConfig;
use aircombat::harness::{evaluate, train, RunConfig};

fn main() -> Result<(), aircombat::Error> {
    let mut cfg = RunConfig::desk_attack();
    cfg.episodes = 150;
    cfg.seed = 5;
    cfg.out_dir = std::env::temp_dir().join("aircombat_eval_demo");
    println!("training {} episodes for the demo checkpoint...", cfg.episodes);
    let out = train(&cfg)?;

    for name in ["advantageous", "disadvantageous", "head_on", "neutral"] {
        let mut scenario = ScenarioConfig::preset(name).unwrap();
        scenario.episode_cap = 500;
        let report = evaluate(&out.final_checkpoint, Some(scenario), 50, 9)?;
        println!(
            "{name:>16}: win {:>5.1}%  loss {:>5.1}%  draws {:>3}  time {:>6.1} s  return {:>7.2}",
            100.0 * report.win_rate,
            100.0 * report.loss_rate,
            report.draws,
            report.avg_time_cost_s,
            report.mean_sparse_return
        );
    }
    Ok(())
}
