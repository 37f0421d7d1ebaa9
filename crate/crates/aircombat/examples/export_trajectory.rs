//! Rolls one seeded engagement and exports it: CSV (one row per step, full
//! states + actions + rewards + outcomes) and an SVG of the flight paths.
//!
//!     cargo run --release --example export_trajectory

use aircombat::combat_env::ScenarioConfig;
use aircombat::harness::{export_trajectory, train, Checkpoint, RunConfig};

fn main() -> Result<(), aircombat::Error> {
    let dir = std::env::temp_dir().join("aircombat_export_demo");
    let mut cfg = RunConfig::desk_attack();
    cfg.episodes = 80;
    cfg.seed = 2;
    cfg.out_dir = dir.clone();
    println!("training a quick checkpoint...");
    let out = train(&cfg)?;
    let ckpt = Checkpoint::load(&out.final_checkpoint)?;

    let mut scenario = ScenarioConfig::advantageous();
    scenario.episode_cap = 500;
    let csv = dir.join("trajectory.csv");
    let (rows, svg) = export_trajectory(
        &ckpt.learner.actor,
        None,
        &ckpt.config.aircraft,
        &ckpt.config.reward,
        &scenario,
        0,
        &csv,
    )?;
    println!("wrote {rows} steps");
    println!("  csv: {}", csv.display());
    println!("  svg: {}", svg.display());

    let text = std::fs::read_to_string(&csv)?;
    for line in text.lines().take(3) {
        let short: String = line.split(',').take(9).collect::<Vec<_>>().join(",");
        println!("  {short},...");
    }
    Ok(())
}
