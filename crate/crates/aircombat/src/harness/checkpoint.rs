//! Versioned single-file checkpoints: layer shapes and flattened 64-bit
//! parameters (via the network serialization), optimizer moments, the blend
//! schedule, and run metadata. Replay contents are deliberately excluded; a
//! resumed run recollects experience.

use super::config::RunConfig;
use crate::homotopy::HomotopySchedule;
use crate::sac::LearnerState;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub seed: u64,
    /// Episodes completed when the checkpoint was written.
    pub episode: u64,
    pub env_steps: u64,
    /// Blend weight at write time (redundant with the schedule, kept for
    /// quick inspection).
    pub q: f64,
    pub schedule: HomotopySchedule,
    pub learner: LearnerState,
    pub config: RunConfig,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let data =
            serde_json::to_vec(self).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        std::fs::write(path, data)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let data = std::fs::read(path)
            .map_err(|e| Error::CheckpointCorrupt(format!("{}: {e}", path.display())))?;
        let mut ckpt: Checkpoint = serde_json::from_slice(&data)
            .map_err(|e| Error::CheckpointCorrupt(format!("{}: {e}", path.display())))?;
        if ckpt.version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointCorrupt(format!(
                "version {} unsupported (expected {CHECKPOINT_VERSION})",
                ckpt.version
            )));
        }
        ckpt.learner.after_load();
        Ok(ckpt)
    }
}
