//! Blend-weight scheduling by convergence detection.
//!
//! The schedule holds a bounded buffer of recent policy-gradient magnitudes.
//! Once the buffer is full and the least-squares slope of the sequence falls
//! below a threshold, the sub-task is considered converged and the blend
//! weight steps down by `1/N` (the elevator predictor: parameters carry over
//! verbatim, only the weight moves). After `N` advances the weight is exactly
//! zero and the schedule is terminal.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopySchedule {
    /// Current blend weight; always equals `max(0, 1 - n/N)`.
    q: f64,
    /// Completed advances.
    n: usize,
    /// Total number of blend steps from 1 to 0.
    big_n: usize,
    /// Buffer sample size for the slope fit.
    big_m: usize,
    /// Slope threshold.
    epsilon: f64,
    buffer: VecDeque<f64>,
}

/// Schedule hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScheduleConfig {
    pub big_n: usize,
    pub big_m: usize,
    pub epsilon: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            big_n: 100,
            big_m: 10_000,
            epsilon: 1e-5,
        }
    }
}

impl HomotopySchedule {
    pub fn new(cfg: &ScheduleConfig) -> Self {
        Self {
            q: 1.0,
            n: 0,
            big_n: cfg.big_n,
            big_m: cfg.big_m,
            epsilon: cfg.epsilon,
            buffer: VecDeque::with_capacity(cfg.big_m),
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn buffer_len(&self) -> usize {
        self.buffer.len()
    }

    fn q_at(n: usize, big_n: usize) -> f64 {
        (1.0 - n as f64 / big_n as f64).max(0.0)
    }

    /// Appends one gradient magnitude, evicting the oldest past the buffer
    /// bound. Non-finite inputs are rejected.
    pub fn record(&mut self, grad_magnitude: f64) -> Result<()> {
        if !grad_magnitude.is_finite() {
            return Err(Error::NonFinite(format!(
                "gradient magnitude {grad_magnitude}"
            )));
        }
        if self.buffer.len() == self.big_m {
            self.buffer.pop_front();
        }
        self.buffer.push_back(grad_magnitude);
        Ok(())
    }

    /// If the buffer is full, the fitted slope is inside the threshold and
    /// the weight has not hit zero, steps the weight down and clears the
    /// buffer. Returns whether an advance happened.
    pub fn maybe_advance(&mut self) -> bool {
        if self.buffer.len() < self.big_m || self.q <= 0.0 {
            return false;
        }
        let (front, back) = self.buffer.as_slices();
        let slope = if back.is_empty() {
            fit_slope(front)
        } else {
            let joined: Vec<f64> = self.buffer.iter().copied().collect();
            fit_slope(&joined)
        };
        match slope {
            Ok(k) if k.abs() < self.epsilon => {
                self.n += 1;
                self.q = Self::q_at(self.n, self.big_n);
                self.buffer.clear();
                true
            }
            _ => false,
        }
    }
}

/// Ordinary least squares of `values` against their 1-based index, with an
/// intercept; returns the index coefficient. Solved through the 2x2 normal
/// equations of the `[index, ones]` design.
pub fn fit_slope(values: &[f64]) -> Result<f64> {
    let m = values.len();
    if m < 2 {
        return Err(Error::InsufficientData(format!(
            "slope fit needs >= 2 samples, got {m}"
        )));
    }
    // Normal equations: [sxx sx; sx m] [k; b] = [sxy; sy]
    let mut sx = 0.0;
    let mut sxx = 0.0;
    let mut sy = 0.0;
    let mut sxy = 0.0;
    for (i, y) in values.iter().enumerate() {
        let x = (i + 1) as f64;
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
    }
    let det = sxx * (m as f64) - sx * sx;
    Ok((sxy * (m as f64) - sx * sy) / det)
}
