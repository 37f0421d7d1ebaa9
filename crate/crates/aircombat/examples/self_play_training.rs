//! A short self-play confrontation run: both seats fly the same actor and
//! both sides' transitions feed one shared replay. Prints the per-side
//! sparse returns so the symmetry of the shared policy is visible.
//!
//!     cargo run --release --example self_play_training

use aircombat::harness::{read_metrics, train, MetricsRecord, RunConfig};

fn main() -> Result<(), aircombat::Error> {
    let dir = std::env::temp_dir().join("aircombat_selfplay_demo");
    let mut cfg = RunConfig::desk_self_play();
    cfg.episodes = 120;
    cfg.seed = 3;
    cfg.out_dir = dir;

    println!("self-play, {} episodes...", cfg.episodes);
    let out = train(&cfg)?;
    println!("done: {} env steps, final q = {:.2}\n", out.env_steps, out.final_q);

    let records = read_metrics(&out.metrics_path)?;
    println!("{:>8} {:>10} {:>10} {:>8}", "episode", "blue", "red", "|diff|");
    for rec in &records {
        if let MetricsRecord::Episode {
            episode,
            sparse_return_blue,
            sparse_return_red,
            ..
        } = rec
        {
            if episode % 20 == 0 {
                println!(
                    "{episode:>8} {sparse_return_blue:>10.2} {sparse_return_red:>10.2} {:>8.2}",
                    (sparse_return_blue - sparse_return_red).abs()
                );
            }
        }
    }
    Ok(())
}
