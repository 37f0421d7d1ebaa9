//! Adaptive-moment gradient descent with bias correction.

use super::mlp::{Mlp, MlpGrads};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerState {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub step: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl OptimizerState {
    pub fn new(params: &Mlp, lr: f64) -> Self {
        let shapes: Vec<usize> = params
            .layers
            .iter()
            .map(|l| l.weight.len() + l.bias.len())
            .collect();
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: shapes.iter().map(|n| vec![0.0; *n]).collect(),
            v: shapes.iter().map(|n| vec![0.0; *n]).collect(),
        }
    }
}


/// One adaptive-moment update of the network parameters in place.
pub fn optimizer_step(state: &mut OptimizerState, params: &mut Mlp, grads: &MlpGrads) -> Result<()> {
    if params.layers.len() != grads.layers.len() {
        return Err(Error::ShapeMismatch("gradient layer count".into()));
    }
    state.step += 1;
    let bc1 = 1.0 - state.beta1.powi(state.step as i32);
    let bc2 = 1.0 - state.beta2.powi(state.step as i32);
    let (beta1, beta2, lr, eps) = (state.beta1, state.beta2, state.lr, state.eps);
    for (li, (layer, grad)) in params.layers.iter_mut().zip(&grads.layers).enumerate() {
        if layer.weight.dim() != grad.weight.dim() || layer.bias.dim() != grad.bias.dim() {
            return Err(Error::ShapeMismatch(format!("layer {li} gradient shape")));
        }
        let m = &mut state.m[li];
        let v = &mut state.v[li];
        let flat = layer
            .weight
            .iter_mut()
            .chain(layer.bias.iter_mut())
            .zip(grad.weight.iter().chain(grad.bias.iter()));
        for (k, (p, g)) in flat.enumerate() {
            m[k] = beta1 * m[k] + (1.0 - beta1) * g;
            v[k] = beta2 * v[k] + (1.0 - beta2) * g * g;
            let m_hat = m[k] / bc1;
            let v_hat = v[k] / bc2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}

/// Adaptive-moment update for a single scalar (the temperature's logarithm).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarAdam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub step: u64,
    m: f64,
    v: f64,
}

impl ScalarAdam {
    pub fn new(lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: 0.0,
            v: 0.0,
        }
    }

    pub fn update(&mut self, param: &mut f64, grad: f64) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step as i32);
        let bc2 = 1.0 - self.beta2.powi(self.step as i32);
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad;
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad;
        let m_hat = self.m / bc1;
        let v_hat = self.v / bc2;
        *param -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
    }
}
