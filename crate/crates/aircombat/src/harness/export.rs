//! Trajectory export: one seeded deterministic rollout to CSV plus an SVG
//! picture of the flight paths.
//!
//! CSV schema, one row per step, in column order:
//! `t` (step index, 1-based), `q`, `done`, then for each side prefixed `b_`
//! and `r_`: `x, y, z, v, gamma, chi, alpha, mu, eta` (the post-step state),
//! `alpha_dot, mu_dot` (the applied, clamp-input control rates),
//! `sparse_reward, extra_reward, homotopy_reward, outcome`.

use super::checkpoint::Checkpoint;
use super::eval::rollout_episode;
use super::svg::{write_chart, Panel, Series};
use crate::combat_env::{CombatEnv, RewardConfig, ScenarioConfig};
use crate::flight_dynamics::AircraftParams;
use crate::nn::Mlp;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub fn trajectory_columns() -> Vec<String> {
    let mut cols = vec!["t".to_string(), "q".to_string(), "done".to_string()];
    for side in ["b", "r"] {
        for field in [
            "x", "y", "z", "v", "gamma", "chi", "alpha", "mu", "eta", "alpha_dot", "mu_dot",
            "sparse_reward", "extra_reward", "homotopy_reward", "outcome",
        ] {
            cols.push(format!("{side}_{field}"));
        }
    }
    cols
}

/// Rolls out one episode and writes the CSV and the companion SVG (same stem,
/// `.svg` extension). Returns (rows written, svg path).
pub fn export_trajectory(
    blue: &Mlp,
    red: Option<&Mlp>,
    aircraft: &AircraftParams,
    reward: &RewardConfig,
    scenario: &ScenarioConfig,
    seed: u64,
    csv_path: &Path,
) -> Result<(usize, PathBuf)> {
    let mut env = CombatEnv::new(aircraft.clone(), reward.clone(), scenario.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = rollout_episode(&mut env, blue, red, true, true, &mut rng)?;

    let mut text = String::new();
    text.push_str(&trajectory_columns().join(","));
    text.push('\n');
    for (rec, (sb, sr)) in result.records.iter().zip(&result.states) {
        let _ = write!(text, "{},{},{}", rec.step_index, rec.q, rec.done);
        for (state, side) in [(sb, &rec.blue), (sr, &rec.red)] {
            let _ = write!(
                text,
                ",{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                state.x,
                state.y,
                state.z,
                state.v,
                state.gamma,
                state.chi,
                state.alpha,
                state.mu,
                state.eta,
                side.action.alpha_dot,
                side.action.mu_dot,
                side.sparse_reward,
                side.extra_reward,
                side.homotopy_reward,
                side.outcome.as_str()
            );
        }
        text.push('\n');
    }
    if let Some(dir) = csv_path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(csv_path, &text)?;

    let svg_path = csv_path.with_extension("svg");
    let dt = aircraft.dt;
    let track = |pick: fn(&crate::flight_dynamics::UcavState) -> (f64, f64)| {
        (
            result.states.iter().map(|(b, _)| pick(b)).collect::<Vec<_>>(),
            result.states.iter().map(|(_, r)| pick(r)).collect::<Vec<_>>(),
        )
    };
    let (ground_b, ground_r) = track(|s| (s.x, s.y));
    let alt_b: Vec<(f64, f64)> = result
        .states
        .iter()
        .enumerate()
        .map(|(i, (b, _))| ((i + 1) as f64 * dt, b.altitude()))
        .collect();
    let alt_r: Vec<(f64, f64)> = result
        .states
        .iter()
        .enumerate()
        .map(|(i, (_, r))| ((i + 1) as f64 * dt, r.altitude()))
        .collect();
    write_chart(
        &svg_path,
        &[
            Panel {
                title: "ground track",
                x_label: "x [m]",
                y_label: "y [m]",
                series: vec![
                    Series { name: "blue", points: ground_b },
                    Series { name: "red", points: ground_r },
                ],
            },
            Panel {
                title: "altitude",
                x_label: "time [s]",
                y_label: "h [m]",
                series: vec![
                    Series { name: "blue", points: alt_b },
                    Series { name: "red", points: alt_r },
                ],
            },
        ],
    )?;
    Ok((result.records.len(), svg_path))
}

/// Checkpoint-level wrapper: blue (and optionally red) actors come from
/// checkpoint files.
pub fn export_trajectory_from_checkpoints(
    blue_checkpoint: &Path,
    red_checkpoint: Option<&Path>,
    scenario: Option<ScenarioConfig>,
    seed: u64,
    csv_path: &Path,
) -> Result<(usize, PathBuf)> {
    let blue = Checkpoint::load(blue_checkpoint)?;
    let red = red_checkpoint.map(Checkpoint::load).transpose()?;
    let mut scenario = scenario.unwrap_or_else(|| blue.config.scenario.clone());
    if red.is_some() {
        scenario.red_controller = crate::combat_env::RedController::Policy;
    }
    export_trajectory(
        &blue.learner.actor,
        red.as_ref().map(|c| &c.learner.actor),
        &blue.config.aircraft,
        &blue.config.reward,
        &scenario,
        seed,
        csv_path,
    )
}

/// Guard used by the CLI: refuses to overwrite unless the target looks like a
/// product of this exporter.
pub fn check_overwrite(path: &Path) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let head = std::fs::read_to_string(path).unwrap_or_default();
    if head.starts_with("t,q,done,") {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{} exists and is not a trajectory export; refusing to overwrite",
            path.display()
        )))
    }
}
