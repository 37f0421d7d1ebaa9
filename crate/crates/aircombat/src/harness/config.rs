//! Run configuration: one TOML file covers the method variant, task,
//! scenario, airframe, rewards, learner and schedule.

use crate::combat_env::{RedController, RewardConfig, ScenarioConfig};
use crate::flight_dynamics::AircraftParams;
use crate::homotopy::ScheduleConfig;
use crate::sac::SacConfig;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Which reward regime drives training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodVariant {
    /// Sparse reward only (blend weight frozen at 0).
    SacSparse,
    /// Shaped reward throughout (blend weight frozen at 1).
    SacShaped,
    /// Scheduled blend from 1 down to 0.
    Hsac,
}

impl MethodVariant {
    pub fn fixed_q(&self) -> Option<f64> {
        match self {
            MethodVariant::SacSparse => Some(0.0),
            MethodVariant::SacShaped => Some(1.0),
            MethodVariant::Hsac => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            MethodVariant::SacSparse => "sac_sparse",
            MethodVariant::SacShaped => "sac_shaped",
            MethodVariant::Hsac => "hsac",
        }
    }
}

/// Training task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    /// Blue learns, red holds its reset attitude with zero control rates.
    AttackHorizontal,
    /// Both sides fly the same current policy; both sides' transitions feed
    /// one shared replay.
    SelfPlay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub method: MethodVariant,
    pub task: TaskKind,
    /// Training episodes.
    pub episodes: usize,
    /// Evaluate every this many training episodes.
    pub eval_interval: usize,
    /// Episodes per periodic evaluation.
    pub eval_episodes: usize,
    /// Write a checkpoint every this many episodes (0 = only at the end).
    pub checkpoint_interval: usize,
    /// Thin the per-update metrics stream (1 = every update).
    pub update_log_every: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub aircraft: AircraftParams,
    pub scenario: ScenarioConfig,
    pub reward: RewardConfig,
    pub sac: SacConfig,
    pub schedule: ScheduleConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::desk_attack()
    }
}

impl RunConfig {
    /// Desk-scale attack-horizontal-flight run: full-size task geometry with
    /// a small network and short episode cap so a CPU finishes in minutes.
    pub fn desk_attack() -> Self {
        let mut scenario = ScenarioConfig::default();
        scenario.episode_cap = 500;
        Self {
            method: MethodVariant::Hsac,
            task: TaskKind::AttackHorizontal,
            episodes: 2000,
            eval_interval: 10,
            eval_episodes: 5,
            checkpoint_interval: 0,
            update_log_every: 50,
            seed: 0,
            out_dir: PathBuf::from("runs/attack"),
            aircraft: AircraftParams::default(),
            scenario,
            reward: RewardConfig::default(),
            sac: SacConfig {
                batch_size: 64,
                replay_capacity: 100_000,
                hidden_sizes: vec![64, 64],
                update_every: 2,
                ..SacConfig::default()
            },
            schedule: ScheduleConfig {
                big_n: 100,
                big_m: 300,
                epsilon: 3e-4,
            },
        }
    }

    /// Desk-scale self-play confrontation run. Both sides learn, so updates
    /// run every step and the blend schedule advances on a shorter buffer
    /// than the attack preset (self-play episodes shorten as play gets
    /// decisive, yielding far fewer updates per episode).
    pub fn desk_self_play() -> Self {
        let mut cfg = Self::desk_attack();
        cfg.task = TaskKind::SelfPlay;
        cfg.episodes = 500;
        cfg.scenario.red_controller = RedController::Policy;
        cfg.sac.update_every = 1;
        cfg.schedule.big_m = 150;
        cfg.out_dir = PathBuf::from("runs/self_play");
        cfg
    }

    /// The full-scale hyperparameter set (3x256 networks, batch 256, replay
    /// 1e6, slope buffer 1e4, 2000-step cap, tens of thousands of episodes).
    /// Expect GPU-scale run times on a CPU.
    pub fn paper_scale_attack() -> Self {
        let mut cfg = Self::desk_attack();
        cfg.episodes = 50_000;
        cfg.scenario.episode_cap = 2000;
        cfg.sac = SacConfig::default();
        cfg.schedule = ScheduleConfig::default();
        cfg.update_log_every = 1000;
        cfg.out_dir = PathBuf::from("runs/attack_full");
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::Config("episodes must be >= 1".into()));
        }
        if self.eval_interval == 0 || self.eval_episodes == 0 {
            return Err(Error::Config("evaluation cadence must be positive".into()));
        }
        if self.update_log_every == 0 {
            return Err(Error::Config("update_log_every must be >= 1".into()));
        }
        if self.task == TaskKind::SelfPlay && self.scenario.red_controller != RedController::Policy
        {
            return Err(Error::Config(
                "self-play requires scenario.red_controller = \"policy\"".into(),
            ));
        }
        self.aircraft.validate()?;
        self.scenario.validate()?;
        self.reward.validate()?;
        self.sac.validate()?;
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }
}

/// SplitMix-style seed derivation for independent deterministic substreams.
pub fn derive_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
