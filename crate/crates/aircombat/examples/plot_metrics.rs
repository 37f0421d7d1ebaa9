//! Renders a metrics log into charts: episode returns, blend weight,
//! evaluation curve and losses.
//!
//!     cargo run --release --example plot_metrics

use aircombat::harness::{plot_metrics, train, RunConfig};

fn main() -> Result<(), aircombat::Error> {
    let dir = std::env::temp_dir().join("aircombat_plot_demo");
    let mut cfg = RunConfig::desk_attack();
    cfg.episodes = 100;
    cfg.seed = 4;
    cfg.update_log_every = 10;
    cfg.out_dir = dir.clone();
    println!("training {} episodes to produce a log...", cfg.episodes);
    let out = train(&cfg)?;

    let svg = dir.join("metrics.svg");
    plot_metrics(&out.metrics_path, &svg)?;
    println!("charts: {}", svg.display());
    Ok(())
}
