//! Deterministic-policy rollouts, evaluation reports and dueling.
//!
//! Evaluation accumulates the sparse outcome reward only, whatever blend
//! weight or shaping configuration trained the policy: rollouts run the
//! environment at q = 0, where the blended reward coincides with the sparse
//! one, and report wins, losses, draws, time cost and mean return.

use super::checkpoint::Checkpoint;
use crate::combat_env::{CombatEnv, CombatOutcome, RedController, ScenarioConfig, StepRecord};
use crate::flight_dynamics::{AircraftParams, ControlRates, UcavState};
use crate::nn::{policy_noise, split_policy_output, squash_with_noise, Mlp};
use crate::{Error, Result};
use ndarray::Array1;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Aggregated evaluation metrics from one side's perspective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub episodes: usize,
    pub wins: usize,
    pub losses: usize,
    pub draws: usize,
    pub win_rate: f64,
    pub loss_rate: f64,
    /// Mean wall-clock combat duration per episode, seconds.
    pub avg_time_cost_s: f64,
    /// Mean sparse-only episode return.
    pub mean_sparse_return: f64,
}

/// Per-episode summary used for report aggregation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeTally {
    pub outcome_blue: CombatOutcome,
    pub outcome_red: CombatOutcome,
    pub timeout: bool,
    pub steps: usize,
    pub sparse_return_blue: f64,
    pub sparse_return_red: f64,
}

fn side_is_win(own: CombatOutcome, opp: CombatOutcome) -> bool {
    use CombatOutcome::*;
    own == Win || (own == Survival && opp == Overloaded) || (own == Killed && opp == Killed)
}

fn side_is_draw(own: CombatOutcome, opp: CombatOutcome, timeout: bool) -> bool {
    timeout && own == CombatOutcome::Survival && opp == CombatOutcome::Survival
}

/// Folds per-episode tallies into a report. `blue_side` selects whose
/// perspective is reported.
pub fn tally_report(tallies: &[EpisodeTally], dt: f64, blue_side: bool) -> Result<EvalReport> {
    if tallies.is_empty() {
        return Err(Error::Domain("evaluation needs at least one episode".into()));
    }
    let mut wins = 0;
    let mut losses = 0;
    let mut draws = 0;
    let mut steps_sum = 0usize;
    let mut return_sum = 0.0;
    for t in tallies {
        let (own, opp, ret) = if blue_side {
            (t.outcome_blue, t.outcome_red, t.sparse_return_blue)
        } else {
            (t.outcome_red, t.outcome_blue, t.sparse_return_red)
        };
        if side_is_draw(own, opp, t.timeout) {
            draws += 1;
        } else if side_is_win(own, opp) {
            wins += 1;
        } else {
            losses += 1;
        }
        steps_sum += t.steps;
        return_sum += ret;
    }
    let n = tallies.len();
    Ok(EvalReport {
        episodes: n,
        wins,
        losses,
        draws,
        win_rate: wins as f64 / n as f64,
        loss_rate: losses as f64 / n as f64,
        avg_time_cost_s: steps_sum as f64 * dt / n as f64,
        mean_sparse_return: return_sum / n as f64,
    })
}

/// Squashed policy action for one observation: deterministic mean path or a
/// reparameterized sample. Returns the normalized action in (-1, 1)^2.
pub fn policy_action<R: Rng>(
    actor: &Mlp,
    obs: &[f64],
    deterministic: bool,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let raw = actor.forward(&Array1::from_vec(obs.to_vec()).view())?;
    let out = split_policy_output(&raw.view());
    if deterministic {
        Ok(out.mean.iter().map(|m| m.tanh()).collect())
    } else {
        let noise = policy_noise(out.mean.len(), rng);
        Ok(squash_with_noise(&out, &noise.view()).action.to_vec())
    }
}

/// Scales a normalized action onto the physical rate bands.
pub fn scale_action(normalized: &[f64], params: &AircraftParams) -> ControlRates {
    ControlRates::new(
        normalized[0] * params.d_alpha,
        normalized[1] * params.d_mu,
    )
}

/// Full result of one evaluation rollout.
#[derive(Debug, Clone)]
pub struct RolloutResult {
    pub tally: EpisodeTally,
    /// Post-step records, only kept when `collect` was requested.
    pub records: Vec<StepRecord>,
    /// Post-step states (blue, red), aligned with `records`.
    pub states: Vec<(UcavState, UcavState)>,
}

/// Runs one episode. Red is driven by `red_actor` when given, otherwise by
/// the scenario controller (zero rates). Evaluation runs at q = 0.
pub fn rollout_episode<R: Rng>(
    env: &mut CombatEnv,
    blue_actor: &Mlp,
    red_actor: Option<&Mlp>,
    deterministic: bool,
    collect: bool,
    rng: &mut R,
) -> Result<RolloutResult> {
    let (mut obs_b, mut obs_r) = env.reset(rng)?;
    let params = env.params().clone();
    let mut sparse_b = 0.0;
    let mut sparse_r = 0.0;
    let mut records = Vec::new();
    let mut states = Vec::new();
    loop {
        let a_b = policy_action(blue_actor, obs_b.as_slice(), deterministic, rng)?;
        let a_r = match red_actor {
            Some(actor) => policy_action(actor, obs_r.as_slice(), deterministic, rng)?,
            None => vec![0.0, 0.0],
        };
        let rec = env.env_step(scale_action(&a_b, &params), scale_action(&a_r, &params), 0.0)?;
        sparse_b += rec.blue.sparse_reward;
        sparse_r += rec.red.sparse_reward;
        obs_b = rec.blue.observation;
        obs_r = rec.red.observation;
        let done = rec.done;
        let outcome_b = rec.blue.outcome;
        let outcome_r = rec.red.outcome;
        if collect {
            states.push((*env.blue_state(), *env.red_state()));
            records.push(rec);
        }
        if done {
            let timeout = env.step_index() >= env.scenario().episode_cap;
            return Ok(RolloutResult {
                tally: EpisodeTally {
                    outcome_blue: outcome_b,
                    outcome_red: outcome_r,
                    timeout,
                    steps: env.step_index(),
                    sparse_return_blue: sparse_b,
                    sparse_return_red: sparse_r,
                },
                records,
                states,
            });
        }
    }
}

/// Evaluates an actor over seeded episodes with the deterministic mean
/// policy. When the scenario's red controller is `Policy`, red flies
/// `red_actor` (or the same actor when none is given: self-play evaluation).
pub fn evaluate_policy(
    blue_actor: &Mlp,
    red_actor: Option<&Mlp>,
    aircraft: &AircraftParams,
    reward: &crate::combat_env::RewardConfig,
    scenario: &ScenarioConfig,
    episodes: usize,
    seed: u64,
) -> Result<EvalReport> {
    if episodes == 0 {
        return Err(Error::Domain("episodes must be >= 1".into()));
    }
    let mut env = CombatEnv::new(aircraft.clone(), reward.clone(), scenario.clone())?;
    let red = match scenario.red_controller {
        RedController::Policy => Some(red_actor.unwrap_or(blue_actor)),
        RedController::HorizontalFlight => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = Vec::with_capacity(episodes);
    for _ in 0..episodes {
        let r = rollout_episode(&mut env, blue_actor, red, true, false, &mut rng)?;
        tallies.push(r.tally);
    }
    tally_report(&tallies, aircraft.dt, true)
}

/// Loads a checkpoint and evaluates it on the given (or its own) scenario.
pub fn evaluate(
    checkpoint_path: &Path,
    scenario: Option<ScenarioConfig>,
    episodes: usize,
    seed: u64,
) -> Result<EvalReport> {
    let ckpt = Checkpoint::load(checkpoint_path)?;
    let scenario = scenario.unwrap_or_else(|| ckpt.config.scenario.clone());
    evaluate_policy(
        &ckpt.learner.actor,
        None,
        &ckpt.config.aircraft,
        &ckpt.config.reward,
        &scenario,
        episodes,
        seed,
    )
}

/// Pits two actors against each other with deterministic policies and
/// returns (blue report, red report) over the same episodes.
pub fn duel_policies(
    blue_actor: &Mlp,
    red_actor: &Mlp,
    aircraft: &AircraftParams,
    reward: &crate::combat_env::RewardConfig,
    scenario: &ScenarioConfig,
    episodes: usize,
    seed: u64,
) -> Result<(EvalReport, EvalReport)> {
    if episodes == 0 {
        return Err(Error::Domain("episodes must be >= 1".into()));
    }
    let mut scenario = scenario.clone();
    scenario.red_controller = RedController::Policy;
    let mut env = CombatEnv::new(aircraft.clone(), reward.clone(), scenario)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = Vec::with_capacity(episodes);
    for _ in 0..episodes {
        let r = rollout_episode(&mut env, blue_actor, Some(red_actor), true, false, &mut rng)?;
        tallies.push(r.tally);
    }
    Ok((
        tally_report(&tallies, aircraft.dt, true)?,
        tally_report(&tallies, aircraft.dt, false)?,
    ))
}

/// Checkpoint-level duel.
pub fn duel(
    blue_checkpoint: &Path,
    red_checkpoint: &Path,
    scenario: Option<ScenarioConfig>,
    episodes: usize,
    seed: u64,
) -> Result<(EvalReport, EvalReport)> {
    let blue = Checkpoint::load(blue_checkpoint)?;
    let red = Checkpoint::load(red_checkpoint)?;
    let scenario = scenario.unwrap_or_else(|| blue.config.scenario.clone());
    duel_policies(
        &blue.learner.actor,
        &red.learner.actor,
        &blue.config.aircraft,
        &blue.config.reward,
        &scenario,
        episodes,
        seed,
    )
}
