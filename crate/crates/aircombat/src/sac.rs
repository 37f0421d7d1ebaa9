//! Soft actor-critic with twin critics, target networks and automatic
//! temperature adjustment.
//!
//! The learner owns every mutable piece of training state. One update step
//! runs, in order: both critic updates against targets built from the target
//! networks, the actor update against the element-wise minimum of the twin
//! critics, the temperature update toward the entropy target, and the Polyak
//! target blend. The Euclidean norm of the actor gradient is returned for the
//! blend-weight scheduler.

use crate::nn::{
    optimizer_step, Mlp, MlpGrads, OptimizerState, ScalarAdam, LOG_STD_MAX, LOG_STD_MIN,
};
use crate::{Error, Result};
use ndarray::{s, Array1, Array2};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// SAC hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SacConfig {
    /// Discount factor.
    pub gamma: f64,
    /// Target smoothing coefficient.
    pub tau: f64,
    pub batch_size: usize,
    pub replay_capacity: usize,
    /// Desired minimum expected entropy; -dim(A) unless overridden.
    pub entropy_target: f64,
    pub lr_critic: f64,
    pub lr_actor: f64,
    pub lr_alpha: f64,
    /// Hidden layer widths shared by the actor and both critics.
    pub hidden_sizes: Vec<usize>,
    /// Updates begin once the replay holds `warmup_factor * batch_size`
    /// transitions; before that the harness acts uniformly at random.
    pub warmup_factor: usize,
    /// One gradient update every this many environment steps.
    pub update_every: usize,
    /// Initial temperature.
    pub initial_alpha: f64,
}

impl Default for SacConfig {
    fn default() -> Self {
        Self {
            gamma: 0.996,
            tau: 0.005,
            batch_size: 256,
            replay_capacity: 1_000_000,
            entropy_target: -2.0,
            lr_critic: 3e-4,
            lr_actor: 3e-4,
            lr_alpha: 3e-4,
            hidden_sizes: vec![256, 256, 256],
            warmup_factor: 10,
            update_every: 1,
            initial_alpha: 0.2,
        }
    }
}

impl SacConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Config("gamma must lie in (0, 1)".into()));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::Config("tau must lie in (0, 1]".into()));
        }
        if self.replay_capacity < self.batch_size {
            return Err(Error::Config("replay capacity below batch size".into()));
        }
        if self.batch_size == 0 || self.update_every == 0 {
            return Err(Error::Config("batch size and update cadence must be positive".into()));
        }
        Ok(())
    }
}

/// One replay record. Observations are the normalized vectors; the action is
/// the squashed policy output in (-1, 1) before scaling to physical rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub obs: Vec<f64>,
    pub action: Vec<f64>,
    pub reward: f64,
    pub next_obs: Vec<f64>,
    pub done: bool,
    /// Blend weight at collection time.
    pub q: f64,
}

/// Bounded FIFO replay with uniform sampling.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReplayBuffer {
    data: Vec<Transition>,
    capacity: usize,
    next: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            data: Vec::new(),
            capacity,
            next: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn push(&mut self, t: Transition) {
        if self.data.len() < self.capacity {
            self.data.push(t);
        } else {
            self.data[self.next] = t;
            self.next = (self.next + 1) % self.capacity;
        }
    }

    pub fn get(&self, idx: usize) -> &Transition {
        &self.data[idx]
    }

    pub fn sample_indices<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<usize> {
        (0..n).map(|_| rng.random_range(0..self.data.len())).collect()
    }
}

/// A batch assembled from replay transitions.
pub struct Batch {
    pub obs: Array2<f64>,
    pub action: Array2<f64>,
    pub reward: Array1<f64>,
    pub next_obs: Array2<f64>,
    pub not_done: Array1<f64>,
}

impl Batch {
    pub fn from_transitions(transitions: &[&Transition]) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let obs_dim = transitions[0].obs.len();
        let act_dim = transitions[0].action.len();
        let b = transitions.len();
        let mut obs = Array2::zeros((b, obs_dim));
        let mut action = Array2::zeros((b, act_dim));
        let mut reward = Array1::zeros(b);
        let mut next_obs = Array2::zeros((b, obs_dim));
        let mut not_done = Array1::zeros(b);
        for (i, t) in transitions.iter().enumerate() {
            if t.obs.len() != obs_dim || t.next_obs.len() != obs_dim || t.action.len() != act_dim {
                return Err(Error::ShapeMismatch("ragged transition batch".into()));
            }
            obs.row_mut(i).assign(&Array1::from_vec(t.obs.clone()));
            action.row_mut(i).assign(&Array1::from_vec(t.action.clone()));
            reward[i] = t.reward;
            next_obs
                .row_mut(i)
                .assign(&Array1::from_vec(t.next_obs.clone()));
            not_done[i] = if t.done { 0.0 } else { 1.0 };
        }
        Ok(Self {
            obs,
            action,
            reward,
            next_obs,
            not_done,
        })
    }

    pub fn len(&self) -> usize {
        self.obs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.nrows() == 0
    }
}

// ---------------------------------------------------------------------------
// Batched squashed-Gaussian machinery. The single-vector reference lives in
// nn::policy; these are the same formulas over whole batches.
// ---------------------------------------------------------------------------

/// Batch policy head: per-row means, clamped log-stds, and a pass-through
/// mask that zeroes log-std gradients where the clamp was active.
pub struct BatchPolicy {
    pub mean: Array2<f64>,
    pub log_std: Array2<f64>,
    clamp_pass: Array2<f64>,
}

pub fn split_batch_policy(raw: &Array2<f64>) -> BatchPolicy {
    let dim = raw.ncols() / 2;
    let mean = raw.slice(s![.., ..dim]).to_owned();
    let raw_log_std = raw.slice(s![.., dim..]).to_owned();
    let clamp_pass = raw_log_std.mapv(|v| {
        if (LOG_STD_MIN..=LOG_STD_MAX).contains(&v) {
            1.0
        } else {
            0.0
        }
    });
    let log_std = raw_log_std.mapv(|v| v.clamp(LOG_STD_MIN, LOG_STD_MAX));
    BatchPolicy {
        mean,
        log_std,
        clamp_pass,
    }
}

/// Reparameterized batch sample at explicit noise.
pub struct BatchSample {
    pub pretanh: Array2<f64>,
    pub action: Array2<f64>,
    pub log_prob: Array1<f64>,
    pub noise: Array2<f64>,
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

fn ln_one_minus_tanh_sq(u: f64) -> f64 {
    let softplus = |x: f64| {
        if x > 30.0 {
            x
        } else if x < -30.0 {
            x.exp()
        } else {
            x.exp().ln_1p()
        }
    };
    2.0 * (std::f64::consts::LN_2 - u - softplus(-2.0 * u))
}

pub fn squash_batch(bp: &BatchPolicy, noise: &Array2<f64>) -> BatchSample {
    let sigma = bp.log_std.mapv(f64::exp);
    let pretanh = &bp.mean + &(&sigma * noise);
    let action = pretanh.mapv(f64::tanh);
    let mut log_prob = Array1::zeros(bp.mean.nrows());
    for i in 0..bp.mean.nrows() {
        let mut acc = 0.0;
        for j in 0..bp.mean.ncols() {
            let xi = noise[[i, j]];
            acc += -0.5 * xi * xi - bp.log_std[[i, j]] - LN_SQRT_2PI;
            acc -= ln_one_minus_tanh_sq(pretanh[[i, j]]);
        }
        log_prob[i] = acc;
    }
    BatchSample {
        pretanh,
        action,
        log_prob,
        noise: noise.clone(),
    }
}

pub fn draw_noise_batch<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.sample::<f64, _>(StandardNormal))
}

/// Upstream into the raw actor output for a loss
/// `sum_i (c1_i * log_prob_i + g_i . action_i)`, at fixed noise.
pub fn squash_backprop_batch(
    bp: &BatchPolicy,
    sample: &BatchSample,
    c1: &Array1<f64>,
    g: &Array2<f64>,
) -> Array2<f64> {
    let (b, d) = (bp.mean.nrows(), bp.mean.ncols());
    let mut upstream = Array2::zeros((b, 2 * d));
    for i in 0..b {
        for j in 0..d {
            let t = sample.pretanh[[i, j]].tanh();
            let sech2 = 1.0 - t * t;
            let sigma = bp.log_std[[i, j]].exp();
            let d_u = c1[i] * 2.0 * t + g[[i, j]] * sech2;
            upstream[[i, j]] = d_u;
            upstream[[i, d + j]] =
                (d_u * sigma * sample.noise[[i, j]] - c1[i]) * bp.clamp_pass[[i, j]];
        }
    }
    upstream
}

fn concat_state_action(obs: &Array2<f64>, action: &Array2<f64>) -> Array2<f64> {
    let b = obs.nrows();
    let mut x = Array2::zeros((b, obs.ncols() + action.ncols()));
    x.slice_mut(s![.., ..obs.ncols()]).assign(obs);
    x.slice_mut(s![.., obs.ncols()..]).assign(action);
    x
}

// ---------------------------------------------------------------------------
// Learner
// ---------------------------------------------------------------------------

/// Everything the updater owns: actor, twin critics, their targets, the
/// temperature's logarithm, optimizer states and the replay buffer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LearnerState {
    pub actor: Mlp,
    pub critic1: Mlp,
    pub critic2: Mlp,
    pub target1: Mlp,
    pub target2: Mlp,
    pub log_alpha: f64,
    pub opt_actor: OptimizerState,
    pub opt_critic1: OptimizerState,
    pub opt_critic2: OptimizerState,
    pub opt_alpha: ScalarAdam,
    /// Not persisted in checkpoints; a resumed run restarts collection.
    #[serde(skip)]
    pub replay: ReplayBuffer,
    pub updates: u64,
    pub cfg: SacConfig,
    pub obs_dim: usize,
    pub act_dim: usize,
}

/// Losses and diagnostics from one update step.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UpdateStats {
    pub critic_loss: f64,
    pub actor_loss: f64,
    pub temperature_loss: f64,
    pub alpha: f64,
    /// Euclidean norm of the actor gradient, fed to the scheduler.
    pub grad_norm: f64,
}

impl LearnerState {
    pub fn new<R: Rng>(obs_dim: usize, act_dim: usize, cfg: SacConfig, rng: &mut R) -> Result<Self> {
        cfg.validate()?;
        let mut actor_sizes = vec![obs_dim];
        actor_sizes.extend(&cfg.hidden_sizes);
        actor_sizes.push(2 * act_dim);
        let mut critic_sizes = vec![obs_dim + act_dim];
        critic_sizes.extend(&cfg.hidden_sizes);
        critic_sizes.push(1);

        let actor = Mlp::new(&actor_sizes, rng);
        let critic1 = Mlp::new(&critic_sizes, rng);
        let critic2 = Mlp::new(&critic_sizes, rng);
        let target1 = critic1.clone();
        let target2 = critic2.clone();
        let opt_actor = OptimizerState::new(&actor, cfg.lr_actor);
        let opt_critic1 = OptimizerState::new(&critic1, cfg.lr_critic);
        let opt_critic2 = OptimizerState::new(&critic2, cfg.lr_critic);
        let opt_alpha = ScalarAdam::new(cfg.lr_alpha);
        let replay = ReplayBuffer::new(cfg.replay_capacity);
        Ok(Self {
            actor,
            critic1,
            critic2,
            target1,
            target2,
            log_alpha: cfg.initial_alpha.ln(),
            opt_actor,
            opt_critic1,
            opt_critic2,
            opt_alpha,
            replay,
            updates: 0,
            cfg,
            obs_dim,
            act_dim,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.log_alpha.exp()
    }

    /// Restores the replay buffer after deserialization (checkpoints do not
    /// carry replay contents).
    pub fn after_load(&mut self) {
        self.replay = ReplayBuffer::new(self.cfg.replay_capacity);
    }

    /// Number of transitions required before updates start.
    pub fn warmup_len(&self) -> usize {
        self.cfg.warmup_factor * self.cfg.batch_size
    }

    fn gather<'a>(&'a self, indices: &[usize]) -> Vec<&'a Transition> {
        indices.iter().map(|i| self.replay.get(*i)).collect()
    }

    /// Policy forward for a single observation; returns (mean-action,
    /// sampled-action, log_prob). Deterministic control uses the mean path.
    pub fn policy<R: Rng>(&self, obs: &[f64], rng: &mut R) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let raw = self.actor.forward(&Array1::from_vec(obs.to_vec()).view())?;
        let out = crate::nn::split_policy_output(&raw.view());
        let mean_action: Vec<f64> = out.mean.iter().map(|m| m.tanh()).collect();
        let noise = crate::nn::policy_noise(self.act_dim, rng);
        let sample = crate::nn::squash_with_noise(&out, &noise.view());
        Ok((mean_action, sample.action.to_vec(), sample.log_prob))
    }
}

/// Single-sample soft state value `V(s) = min_i Q_i(s, a) - alpha log pi(a|s)`
/// with `a` drawn from the actor.
pub fn soft_value<R: Rng>(
    obs: &[f64],
    actor: &Mlp,
    critics: (&Mlp, &Mlp),
    log_alpha: f64,
    rng: &mut R,
) -> Result<f64> {
    let raw = actor.forward(&Array1::from_vec(obs.to_vec()).view())?;
    let out = crate::nn::split_policy_output(&raw.view());
    let noise = crate::nn::policy_noise(out.mean.len(), rng);
    let sample = crate::nn::squash_with_noise(&out, &noise.view());
    let mut x = obs.to_vec();
    x.extend(sample.action.iter());
    let x = Array1::from_vec(x);
    let q1 = critics.0.forward(&x.view())?[0];
    let q2 = critics.1.forward(&x.view())?[0];
    Ok(q1.min(q2) - log_alpha.exp() * sample.log_prob)
}

/// Twin-critic TD loss and gradients. Targets are built from the target
/// networks with one fresh action sample per transition and treated as
/// constants. Returns the summed per-critic loss.
pub fn critic_loss<R: Rng>(
    batch: &Batch,
    learner: &LearnerState,
    gamma: f64,
    rng: &mut R,
) -> Result<(f64, MlpGrads, MlpGrads)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let b = batch.len();
    // Fresh next-state actions from the current policy.
    let (raw_next, _) = learner.actor.forward_batch(&batch.next_obs)?;
    let bp = split_batch_policy(&raw_next);
    let noise = draw_noise_batch(b, learner.act_dim, rng);
    let sample = squash_batch(&bp, &noise);

    let x_next = concat_state_action(&batch.next_obs, &sample.action);
    let (q1t, _) = learner.target1.forward_batch(&x_next)?;
    let (q2t, _) = learner.target2.forward_batch(&x_next)?;
    let alpha = learner.alpha();
    let mut y = Array1::zeros(b);
    for i in 0..b {
        let v_next = q1t[[i, 0]].min(q2t[[i, 0]]) - alpha * sample.log_prob[i];
        y[i] = batch.reward[i] + gamma * batch.not_done[i] * v_next;
    }

    let x = concat_state_action(&batch.obs, &batch.action);
    let mut total_loss = 0.0;
    let mut grads = Vec::with_capacity(2);
    for critic in [&learner.critic1, &learner.critic2] {
        let (q, cache) = critic.forward_batch(&x)?;
        let mut upstream = Array2::zeros((b, 1));
        let mut loss = 0.0;
        for i in 0..b {
            let err = q[[i, 0]] - y[i];
            loss += 0.5 * err * err;
            upstream[[i, 0]] = err / b as f64;
        }
        total_loss += loss / b as f64;
        let (g, _) = critic.backward_batch(&cache, &upstream)?;
        grads.push(g);
    }
    let g2 = grads.pop().unwrap();
    let g1 = grads.pop().unwrap();
    Ok((total_loss, g1, g2))
}

/// Actor loss `mean(alpha log pi - min_i Q_i)` with reparameterized actions,
/// and its gradient with respect to the actor parameters.
pub fn actor_loss<R: Rng>(
    batch: &Batch,
    learner: &LearnerState,
    rng: &mut R,
) -> Result<(f64, MlpGrads)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let b = batch.len();
    let (raw, actor_cache) = learner.actor.forward_batch(&batch.obs)?;
    let bp = split_batch_policy(&raw);
    let noise = draw_noise_batch(b, learner.act_dim, rng);
    let sample = squash_batch(&bp, &noise);
    let alpha = learner.alpha();

    let x = concat_state_action(&batch.obs, &sample.action);
    let (q1, c1_cache) = learner.critic1.forward_batch(&x)?;
    let (q2, c2_cache) = learner.critic2.forward_batch(&x)?;

    let mut loss = 0.0;
    let mut up1 = Array2::zeros((b, 1));
    let mut up2 = Array2::zeros((b, 1));
    for i in 0..b {
        let (qmin, first) = if q1[[i, 0]] <= q2[[i, 0]] {
            (q1[[i, 0]], true)
        } else {
            (q2[[i, 0]], false)
        };
        loss += alpha * sample.log_prob[i] - qmin;
        // d(-qmin)/dq routes to the minimizing critic.
        if first {
            up1[[i, 0]] = -1.0 / b as f64;
        } else {
            up2[[i, 0]] = -1.0 / b as f64;
        }
    }
    loss /= b as f64;

    let (_, dx1) = learner.critic1.backward_batch(&c1_cache, &up1)?;
    let (_, dx2) = learner.critic2.backward_batch(&c2_cache, &up2)?;
    let g_action =
        dx1.slice(s![.., learner.obs_dim..]).to_owned() + dx2.slice(s![.., learner.obs_dim..]);

    let c1 = Array1::from_elem(b, alpha / b as f64);
    let upstream = squash_backprop_batch(&bp, &sample, &c1, &g_action);
    let (grads, _) = learner.actor.backward_batch(&actor_cache, &upstream)?;
    Ok((loss, grads))
}

/// Temperature loss `mean(-alpha log pi - alpha H_bar)`; the gradient with
/// respect to log alpha equals the loss itself.
pub fn temperature_loss<R: Rng>(
    batch: &Batch,
    learner: &LearnerState,
    h_bar: f64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let b = batch.len();
    let (raw, _) = learner.actor.forward_batch(&batch.obs)?;
    let bp = split_batch_policy(&raw);
    let noise = draw_noise_batch(b, learner.act_dim, rng);
    let sample = squash_batch(&bp, &noise);
    let mean_neg = sample
        .log_prob
        .iter()
        .map(|lp| -lp - h_bar)
        .sum::<f64>()
        / b as f64;
    let alpha = learner.alpha();
    let loss = alpha * mean_neg;
    Ok((loss, loss))
}

/// Polyak blend of the target networks toward the critics. Written as
/// `target += tau * (critic - target)` so a no-change critic leaves the
/// target bit-identical.
pub fn target_update(learner: &mut LearnerState, tau: f64) {
    for (target, critic) in [
        (&mut learner.target1, &learner.critic1),
        (&mut learner.target2, &learner.critic2),
    ] {
        for (tl, cl) in target.layers.iter_mut().zip(&critic.layers) {
            tl.weight.zip_mut_with(&cl.weight, |t, c| *t += tau * (*c - *t));
            tl.bias.zip_mut_with(&cl.bias, |t, c| *t += tau * (*c - *t));
        }
    }
}

/// One full update step on a uniformly sampled batch. Requires the replay to
/// hold at least one batch. Returns the update diagnostics including the
/// actor gradient norm.
pub fn update_step<R: Rng>(learner: &mut LearnerState, rng: &mut R) -> Result<UpdateStats> {
    if learner.replay.len() < learner.cfg.batch_size {
        return Err(Error::InsufficientData(format!(
            "replay has {} transitions, batch needs {}",
            learner.replay.len(),
            learner.cfg.batch_size
        )));
    }
    let indices = learner.replay.sample_indices(rng, learner.cfg.batch_size);
    let transitions = learner.gather(&indices);
    let batch = Batch::from_transitions(&transitions)?;
    update_step_on_batch(learner, &batch, rng)
}

/// The update body, exposed for constructed-batch tests.
pub fn update_step_on_batch<R: Rng>(
    learner: &mut LearnerState,
    batch: &Batch,
    rng: &mut R,
) -> Result<UpdateStats> {
    let gamma = learner.cfg.gamma;
    let (c_loss, g1, g2) = critic_loss(batch, learner, gamma, rng)?;
    optimizer_step(&mut learner.opt_critic1, &mut learner.critic1, &g1)?;
    optimizer_step(&mut learner.opt_critic2, &mut learner.critic2, &g2)?;

    let (a_loss, g_actor) = actor_loss(batch, learner, rng)?;
    let grad_norm = g_actor.norm();
    optimizer_step(&mut learner.opt_actor, &mut learner.actor, &g_actor)?;

    let (t_loss, g_alpha) = temperature_loss(batch, learner, learner.cfg.entropy_target, rng)?;
    let mut log_alpha = learner.log_alpha;
    learner.opt_alpha.update(&mut log_alpha, g_alpha);
    learner.log_alpha = log_alpha;

    target_update(learner, learner.cfg.tau);
    learner.updates += 1;

    Ok(UpdateStats {
        critic_loss: c_loss,
        actor_loss: a_loss,
        temperature_loss: t_loss,
        alpha: learner.alpha(),
        grad_norm,
    })
}
