//! The episode/update training loop for both tasks.
//!
//! Attack-horizontal-flight: blue learns while red holds zero control rates;
//! only blue's transitions enter replay. Self-play: both seats fly the same
//! current actor and both sides' transitions (each from its own perspective,
//! with its own blended reward) feed one shared replay. After every gradient
//! update the actor-gradient norm is recorded by the blend scheduler (HSAC
//! only); the weight steps down whenever the slope test fires.

use super::checkpoint::{Checkpoint, CHECKPOINT_VERSION};
use super::config::{derive_seed, MethodVariant, RunConfig, TaskKind};
use super::eval::{evaluate_policy, scale_action, EvalReport};
use super::metrics::{MetricsRecord, MetricsWriter};
use crate::combat_env::CombatEnv;
use crate::homotopy::HomotopySchedule;
use crate::sac::{update_step, LearnerState, Transition};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub final_checkpoint: PathBuf,
    pub metrics_path: PathBuf,
    pub episodes_run: u64,
    pub env_steps: u64,
    pub final_q: f64,
    pub final_eval: Option<EvalReport>,
}

pub fn train(cfg: &RunConfig) -> Result<TrainOutput> {
    train_with_resume(cfg, None)
}

/// Runs (or continues) a training run. `cfg.episodes` is the total episode
/// budget; resuming from a checkpoint completes the remainder.
pub fn train_with_resume(cfg: &RunConfig, resume: Option<&Path>) -> Result<TrainOutput> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let (mut learner, mut schedule, episode_start, mut env_steps) = match resume {
        Some(path) => {
            let ck = Checkpoint::load(path)?;
            if ck.episode as usize >= cfg.episodes {
                return Err(Error::Config(format!(
                    "checkpoint already at episode {} of {}",
                    ck.episode, cfg.episodes
                )));
            }
            (ck.learner, ck.schedule, ck.episode, ck.env_steps)
        }
        None => (
            LearnerState::new(
                crate::combat_geometry::Observation::DIM,
                2,
                cfg.sac.clone(),
                &mut rng,
            )?,
            HomotopySchedule::new(&cfg.schedule),
            0,
            0,
        ),
    };

    let mut env = CombatEnv::new(
        cfg.aircraft.clone(),
        cfg.reward.clone(),
        cfg.scenario.clone(),
    )?;
    let mut metrics = MetricsWriter::create(&cfg.out_dir.join("metrics.jsonl"))?;
    let self_play = cfg.task == TaskKind::SelfPlay;
    let mut final_eval: Option<EvalReport> = None;

    for episode in (episode_start + 1)..=(cfg.episodes as u64) {
        let (mut obs_b, mut obs_r) = env.reset(&mut rng)?;
        let mut steps = 0usize;
        let mut sparse = [0.0f64; 2];
        let mut shaped = [0.0f64; 2];
        let mut blended = [0.0f64; 2];
        let mut loss_sums = [0.0f64; 2]; // critic, actor
        let mut updates_this_episode = 0u64;
        let mut q = cfg.method.fixed_q().unwrap_or_else(|| schedule.q());

        loop {
            env_steps += 1;
            steps += 1;
            let warmed = learner.replay.len() >= learner.warmup_len();
            let a_b = if warmed {
                let (_, sampled, _) = learner.policy(obs_b.as_slice(), &mut rng)?;
                sampled
            } else {
                vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
            };
            let a_r = if self_play {
                if warmed {
                    let (_, sampled, _) = learner.policy(obs_r.as_slice(), &mut rng)?;
                    sampled
                } else {
                    vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
                }
            } else {
                vec![0.0, 0.0]
            };

            let rec = env.env_step(
                scale_action(&a_b, &cfg.aircraft),
                scale_action(&a_r, &cfg.aircraft),
                q,
            )?;

            learner.replay.push(Transition {
                obs: obs_b.as_slice().to_vec(),
                action: a_b,
                reward: rec.blue.homotopy_reward,
                next_obs: rec.blue.observation.as_slice().to_vec(),
                done: rec.done,
                q,
            });
            if self_play {
                learner.replay.push(Transition {
                    obs: obs_r.as_slice().to_vec(),
                    action: a_r,
                    reward: rec.red.homotopy_reward,
                    next_obs: rec.red.observation.as_slice().to_vec(),
                    done: rec.done,
                    q,
                });
            }

            sparse[0] += rec.blue.sparse_reward;
            sparse[1] += rec.red.sparse_reward;
            shaped[0] += rec.blue.sparse_reward + rec.blue.extra_reward;
            shaped[1] += rec.red.sparse_reward + rec.red.extra_reward;
            blended[0] += rec.blue.homotopy_reward;
            blended[1] += rec.red.homotopy_reward;
            obs_b = rec.blue.observation;
            obs_r = rec.red.observation;

            if learner.replay.len() >= learner.warmup_len()
                && env_steps % cfg.sac.update_every as u64 == 0
            {
                let stats = update_step(&mut learner, &mut rng)?;
                updates_this_episode += 1;
                loss_sums[0] += stats.critic_loss;
                loss_sums[1] += stats.actor_loss;
                if cfg.method == MethodVariant::Hsac {
                    schedule.record(stats.grad_norm)?;
                    if schedule.maybe_advance() {
                        q = schedule.q();
                    }
                }
                if learner.updates % cfg.update_log_every as u64 == 0 {
                    metrics.write(&MetricsRecord::Update {
                        update: learner.updates,
                        critic_loss: stats.critic_loss,
                        actor_loss: stats.actor_loss,
                        temperature_loss: stats.temperature_loss,
                        alpha: stats.alpha,
                        grad_norm: stats.grad_norm,
                        q,
                    })?;
                }
            }

            if rec.done {
                break;
            }
        }

        let denom = updates_this_episode.max(1) as f64;
        metrics.write(&MetricsRecord::Episode {
            episode,
            steps,
            q,
            sparse_return_blue: sparse[0],
            sparse_return_red: sparse[1],
            shaped_return_blue: shaped[0],
            shaped_return_red: shaped[1],
            homotopy_return_blue: blended[0],
            homotopy_return_red: blended[1],
            mean_critic_loss: loss_sums[0] / denom,
            mean_actor_loss: loss_sums[1] / denom,
            alpha: learner.alpha(),
            updates: learner.updates,
        })?;

        if episode % cfg.eval_interval as u64 == 0 {
            let report = evaluate_policy(
                &learner.actor,
                None,
                &cfg.aircraft,
                &cfg.reward,
                &cfg.scenario,
                cfg.eval_episodes,
                derive_seed(cfg.seed, 0xE7A1_0000 + episode),
            )?;
            metrics.write(&MetricsRecord::Eval {
                episode,
                episodes: report.episodes,
                win_rate: report.win_rate,
                loss_rate: report.loss_rate,
                draws: report.draws,
                avg_time_cost_s: report.avg_time_cost_s,
                mean_sparse_return: report.mean_sparse_return,
            })?;
            final_eval = Some(report);
        }

        if cfg.checkpoint_interval > 0 && episode % cfg.checkpoint_interval as u64 == 0 {
            let ck = make_checkpoint(cfg, &learner, &schedule, episode, env_steps);
            ck.save(&cfg.out_dir.join(format!("checkpoint_ep{episode}.json")))?;
        }
    }

    let final_q = cfg.method.fixed_q().unwrap_or_else(|| schedule.q());
    let final_checkpoint = cfg.out_dir.join("checkpoint_final.json");
    let ck = make_checkpoint(cfg, &learner, &schedule, cfg.episodes as u64, env_steps);
    ck.save(&final_checkpoint)?;
    metrics.flush()?;

    Ok(TrainOutput {
        final_checkpoint,
        metrics_path: cfg.out_dir.join("metrics.jsonl"),
        episodes_run: cfg.episodes as u64 - episode_start,
        env_steps,
        final_q,
        final_eval,
    })
}

fn make_checkpoint(
    cfg: &RunConfig,
    learner: &LearnerState,
    schedule: &HomotopySchedule,
    episode: u64,
    env_steps: u64,
) -> Checkpoint {
    Checkpoint {
        version: CHECKPOINT_VERSION,
        seed: cfg.seed,
        episode,
        env_steps,
        q: cfg.method.fixed_q().unwrap_or_else(|| schedule.q()),
        schedule: schedule.clone(),
        learner: learner.clone(),
        config: cfg.clone(),
    }
}
