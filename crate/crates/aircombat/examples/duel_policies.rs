//! Trains two small policies under different reward regimes (sparse-only vs
//! homotopy-scheduled) and pits them against each other.
//!
//!     cargo run --release --example duel_policies

use aircombat::harness::{duel, train, MethodVariant, RunConfig};

fn main() -> Result<(), aircombat::Error> {
    let base = std::env::temp_dir().join("aircombat_duel_demo");
    let mut paths = Vec::new();
    for (name, method) in [
        ("sparse", MethodVariant::SacSparse),
        ("hsac", MethodVariant::Hsac),
    ] {
        let mut cfg = RunConfig::desk_attack();
        cfg.method = method;
        cfg.episodes = 120;
        cfg.seed = 11;
        cfg.out_dir = base.join(name);
        println!("training the {name} policy ({} episodes)...", cfg.episodes);
        let out = train(&cfg)?;
        paths.push(out.final_checkpoint);
    }

    let mut scenario = aircombat::combat_env::ScenarioConfig::default();
    scenario.episode_cap = 500;
    scenario.red_controller = aircombat::combat_env::RedController::Policy;
    let (blue, red) = duel(&paths[1], &paths[0], Some(scenario), 100, 17)?;
    println!("\nhsac (blue) vs sparse (red), 100 episodes:");
    println!(
        "  blue: win {:>5.1}%  loss {:>5.1}%  draws {}",
        100.0 * blue.win_rate,
        100.0 * blue.loss_rate,
        blue.draws
    );
    println!(
        "  red:  win {:>5.1}%  loss {:>5.1}%  draws {}",
        100.0 * red.win_rate,
        100.0 * red.loss_rate,
        red.draws
    );
    Ok(())
}
