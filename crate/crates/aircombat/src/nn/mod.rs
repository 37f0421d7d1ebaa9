//! Fixed-topology MLP function approximators with exact reverse-mode
//! gradients, a tanh-squashed Gaussian policy head, and an adaptive-moment
//! optimizer. Everything is 64-bit and deterministic under a fixed seed.

mod adam;
mod mlp;
mod policy;

pub use adam::{optimizer_step, OptimizerState, ScalarAdam};
pub use mlp::{ForwardCache, Layer, Mlp, MlpGrads};
pub use policy::{
    backprop_through_squash, draw_noise as policy_noise, sample_squashed_gaussian,
    split_policy_output, squash_with_noise, PolicyOutput, SquashedSample, LOG_STD_MAX,
    LOG_STD_MIN,
};
