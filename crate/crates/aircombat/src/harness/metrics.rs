//! JSONL metrics log. One record per line, tagged by type, no timestamps, so
//! identical (config, seed) runs produce byte-identical files.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MetricsRecord {
    Update {
        update: u64,
        critic_loss: f64,
        actor_loss: f64,
        temperature_loss: f64,
        alpha: f64,
        grad_norm: f64,
        q: f64,
    },
    Episode {
        episode: u64,
        steps: usize,
        q: f64,
        sparse_return_blue: f64,
        sparse_return_red: f64,
        shaped_return_blue: f64,
        shaped_return_red: f64,
        homotopy_return_blue: f64,
        homotopy_return_red: f64,
        mean_critic_loss: f64,
        mean_actor_loss: f64,
        alpha: f64,
        updates: u64,
    },
    Eval {
        episode: u64,
        episodes: usize,
        win_rate: f64,
        loss_rate: f64,
        draws: usize,
        avg_time_cost_s: f64,
        mean_sparse_return: f64,
    },
}

pub struct MetricsWriter {
    out: BufWriter<File>,
    path: PathBuf,
}

impl MetricsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        Ok(Self {
            out: BufWriter::new(File::create(path)?),
            path: path.to_path_buf(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn write(&mut self, record: &MetricsRecord) -> Result<()> {
        let line = serde_json::to_string(record)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        self.out.write_all(line.as_bytes())?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Reads a whole metrics log back.
pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: MetricsRecord = serde_json::from_str(&line).map_err(|e| {
            Error::Io(std::io::Error::other(format!(
                "metrics line {}: {e}",
                lineno + 1
            )))
        })?;
        out.push(rec);
    }
    Ok(out)
}
