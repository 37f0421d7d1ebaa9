//! Tanh-squashed diagonal Gaussian policy head.
//!
//! The actor network emits `2 * dim` values: means followed by raw
//! log-standard-deviations. Sampling reparameterizes `u = mean + sigma * xi`
//! with `xi ~ N(0, 1)` and squashes `a = tanh(u)`, so actions live strictly
//! inside (-1, 1) and gradients flow through mean and log-std.

use ndarray::{Array1, ArrayView1};
use rand::Rng;
use rand_distr::StandardNormal;

pub const LOG_STD_MIN: f64 = -20.0;
pub const LOG_STD_MAX: f64 = 2.0;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

/// Mean and (clamped) log-standard-deviation of the action distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyOutput {
    pub mean: Array1<f64>,
    pub log_std: Array1<f64>,
}

/// A squashed sample with everything the losses need.
#[derive(Debug, Clone, PartialEq)]
pub struct SquashedSample {
    /// Pre-squash Gaussian draw.
    pub pretanh: Array1<f64>,
    /// tanh(pretanh), strictly inside (-1, 1).
    pub action: Array1<f64>,
    /// Log density of `action` including the tanh change of variables.
    pub log_prob: f64,
    /// The standard normal noise used (kept for gradient computations).
    pub noise: Array1<f64>,
}

/// Splits a raw actor output into mean and clamped log-std halves.
pub fn split_policy_output(raw: &ArrayView1<f64>) -> PolicyOutput {
    let dim = raw.len() / 2;
    debug_assert_eq!(raw.len(), 2 * dim);
    let mean = raw.slice(ndarray::s![..dim]).to_owned();
    let log_std = raw
        .slice(ndarray::s![dim..])
        .mapv(|v| v.clamp(LOG_STD_MIN, LOG_STD_MAX));
    PolicyOutput { mean, log_std }
}

/// Numerically stable `ln(1 - tanh(u)^2)`.
fn ln_one_minus_tanh_sq(u: f64) -> f64 {
    // sech^2(u) = 4 e^{-2u} / (1 + e^{-2u})^2
    2.0 * (std::f64::consts::LN_2 - u - softplus(-2.0 * u))
}

fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else if x < -30.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

/// Deterministic squash given the noise vector; the core of the sampler.
pub fn squash_with_noise(out: &PolicyOutput, noise: &ArrayView1<f64>) -> SquashedSample {
    let dim = out.mean.len();
    assert_eq!(noise.len(), dim);
    let mut pretanh = Array1::zeros(dim);
    let mut action = Array1::zeros(dim);
    let mut log_prob = 0.0;
    for i in 0..dim {
        let sigma = out.log_std[i].exp();
        let u = out.mean[i] + sigma * noise[i];
        pretanh[i] = u;
        action[i] = u.tanh();
        log_prob += -0.5 * noise[i] * noise[i] - out.log_std[i] - LN_SQRT_2PI;
        log_prob -= ln_one_minus_tanh_sq(u);
    }
    SquashedSample {
        pretanh,
        action,
        log_prob,
        noise: noise.to_owned(),
    }
}

/// Draws one action and its log probability.
pub fn sample_squashed_gaussian<R: Rng>(out: &PolicyOutput, rng: &mut R) -> (Array1<f64>, f64) {
    let noise = draw_noise(out.mean.len(), rng);
    let s = squash_with_noise(out, &noise.view());
    (s.action, s.log_prob)
}

pub fn draw_noise<R: Rng>(dim: usize, rng: &mut R) -> Array1<f64> {
    Array1::from_iter((0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

/// Gradient of `c1 * log_prob + g . action` with respect to (mean, log_std),
/// at fixed noise. `g` is the upstream gradient flowing into the action.
/// Returns (d_mean, d_log_std).
pub fn backprop_through_squash(
    out: &PolicyOutput,
    sample: &SquashedSample,
    c1: f64,
    g: &ArrayView1<f64>,
) -> (Array1<f64>, Array1<f64>) {
    let dim = out.mean.len();
    let mut d_mean = Array1::zeros(dim);
    let mut d_log_std = Array1::zeros(dim);
    for i in 0..dim {
        let u = sample.pretanh[i];
        let t = u.tanh();
        let sech2 = 1.0 - t * t;
        let sigma = out.log_std[i].exp();
        // d log_prob / d u = 2 tanh(u); d action / d u = sech^2(u)
        let d_u = c1 * 2.0 * t + g[i] * sech2;
        d_mean[i] = d_u; // du/dmean = 1
        // du/dlogstd = sigma * noise; log_prob also has the -log_std term.
        d_log_std[i] = d_u * sigma * sample.noise[i] - c1;
    }
    (d_mean, d_log_std)
}
