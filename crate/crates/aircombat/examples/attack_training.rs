//! A short attack-horizontal-flight training run: blue learns against the
//! open-loop red target, with periodic sparse-only evaluations printed as
//! they land in the metrics log.
//!
//!     cargo run --release --example attack_training
//!
//! The full desk-scale run is `RunConfig::desk_attack()` (2000 episodes);
//! this demo trims it to 150 episodes, about half a minute on one core.

use aircombat::harness::{read_metrics, train, MetricsRecord, RunConfig};

fn main() -> Result<(), aircombat::Error> {
    let dir = std::env::temp_dir().join("aircombat_attack_demo");
    let mut cfg = RunConfig::desk_attack();
    cfg.episodes = 150;
    cfg.seed = 1;
    cfg.out_dir = dir.clone();

    println!("training {} episodes ({})...", cfg.episodes, cfg.method.as_str());
    let out = train(&cfg)?;
    println!(
        "done: {} env steps, final q = {:.2}",
        out.env_steps, out.final_q
    );

    println!("\nperiodic evaluations (deterministic policy, sparse reward only):");
    for rec in read_metrics(&out.metrics_path)? {
        if let MetricsRecord::Eval {
            episode,
            win_rate,
            mean_sparse_return,
            avg_time_cost_s,
            ..
        } = rec
        {
            println!(
                "  after ep {episode:>4}: win rate {:>5.1}%  mean return {:>7.2}  time {:>5.1} s",
                100.0 * win_rate,
                mean_sparse_return,
                avg_time_cost_s
            );
        }
    }
    println!("\ncheckpoint: {}", out.final_checkpoint.display());
    println!("metrics:    {}", out.metrics_path.display());
    Ok(())
}
