//! Orchestration: run configuration, the training loop, evaluation and
//! dueling, checkpoints, metrics, trajectory export and plotting.

mod checkpoint;
mod config;
mod eval;
mod export;
mod metrics;
mod plot;
mod svg;
mod train;

pub use checkpoint::{Checkpoint, CHECKPOINT_VERSION};
pub use config::{derive_seed, MethodVariant, RunConfig, TaskKind};
pub use eval::{
    duel, duel_policies, evaluate, evaluate_policy, policy_action, rollout_episode, scale_action,
    tally_report, EpisodeTally, EvalReport, RolloutResult,
};
pub use export::{
    check_overwrite, export_trajectory, export_trajectory_from_checkpoints, trajectory_columns,
};
pub use metrics::{read_metrics, MetricsRecord, MetricsWriter};
pub use plot::plot_metrics;
pub use svg::{write_chart, Panel, Series};
pub use train::{train, train_with_resume, TrainOutput};
