//! Multilayer perceptron: rectified-linear hidden layers, identity output.
//! Weights are stored `[input, output]` so a batch forward is `X . W + b`.

use crate::{Error, Result};
use ndarray::{Array1, Array2, ArrayView1, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
}

impl Layer {
    fn zeros_like(&self) -> Layer {
        Layer {
            weight: Array2::zeros(self.weight.raw_dim()),
            bias: Array1::zeros(self.bias.raw_dim()),
        }
    }
}

/// Parameter gradients, shaped exactly like the network's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads {
    pub layers: Vec<Layer>,
}

impl MlpGrads {
    pub fn scaled(mut self, factor: f64) -> Self {
        for layer in &mut self.layers {
            layer.weight.mapv_inplace(|w| w * factor);
            layer.bias.mapv_inplace(|b| b * factor);
        }
        self
    }

    pub fn add(&mut self, other: &MlpGrads) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.weight += &b.weight;
            a.bias += &b.bias;
        }
    }

    /// Euclidean norm over every entry.
    pub fn norm(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| {
                l.weight.iter().map(|w| w * w).sum::<f64>()
                    + l.bias.iter().map(|b| b * b).sum::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Post-activation values kept from a forward pass for the backward pass.
/// `acts[0]` is the input batch; `acts[i]` the output of layer `i - 1`.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub acts: Vec<Array2<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &Array2<f64> {
        self.acts.last().expect("cache holds at least the input")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub layers: Vec<Layer>,
}

impl Mlp {
    /// Builds a network with the given layer sizes (`sizes[0]` inputs,
    /// `sizes.last()` outputs). Weights are drawn uniformly with fan-in
    /// scaling `U(-1/sqrt(in), 1/sqrt(in))`, biases start at zero.
    pub fn new<R: Rng>(sizes: &[usize], rng: &mut R) -> Self {
        assert!(sizes.len() >= 2, "need at least input and output sizes");
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (n_in, n_out) = (w[0], w[1]);
                let bound = 1.0 / (n_in as f64).sqrt();
                let weight =
                    Array2::from_shape_fn((n_in, n_out), |_| rng.random_range(-bound..bound));
                Layer {
                    weight,
                    bias: Array1::zeros(n_out),
                }
            })
            .collect();
        Self { layers }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].weight.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().weight.ncols()
    }

    pub fn zero_grads(&self) -> MlpGrads {
        MlpGrads {
            layers: self.layers.iter().map(Layer::zeros_like).collect(),
        }
    }

    /// Forward pass for a single input vector.
    pub fn forward(&self, input: &ArrayView1<f64>) -> Result<Array1<f64>> {
        if input.len() != self.input_dim() {
            return Err(Error::ShapeMismatch(format!(
                "input length {} != expected {}",
                input.len(),
                self.input_dim()
            )));
        }
        let batch = input.to_owned().insert_axis(Axis(0));
        let (out, _) = self.forward_batch(&batch)?;
        Ok(out.index_axis(Axis(0), 0).to_owned())
    }

    /// Forward pass for a batch (rows are samples), returning the output and
    /// the cache needed for `backward_batch`.
    pub fn forward_batch(&self, input: &Array2<f64>) -> Result<(Array2<f64>, ForwardCache)> {
        if input.ncols() != self.input_dim() {
            return Err(Error::ShapeMismatch(format!(
                "input width {} != expected {}",
                input.ncols(),
                self.input_dim()
            )));
        }
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(input.clone());
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = acts[i].dot(&layer.weight) + &layer.bias;
            if i != last {
                z.mapv_inplace(|v| v.max(0.0));
            }
            acts.push(z);
        }
        let out = acts.last().unwrap().clone();
        Ok((out, ForwardCache { acts }))
    }

    /// Reverse-mode gradients for a batch given `dLoss/dOutput`. Returns the
    /// parameter gradients and the gradient with respect to the input batch.
    pub fn backward_batch(
        &self,
        cache: &ForwardCache,
        upstream: &Array2<f64>,
    ) -> Result<(MlpGrads, Array2<f64>)> {
        if upstream.ncols() != self.output_dim() || upstream.nrows() != cache.acts[0].nrows() {
            return Err(Error::ShapeMismatch(format!(
                "upstream {:?} incompatible with output dim {} and batch {}",
                upstream.dim(),
                self.output_dim(),
                cache.acts[0].nrows()
            )));
        }
        let mut grads = self.zero_grads();
        let mut delta = upstream.clone();
        for i in (0..self.layers.len()).rev() {
            let input = &cache.acts[i];
            grads.layers[i].weight = input.t().dot(&delta);
            grads.layers[i].bias = delta.sum_axis(Axis(0));
            let mut d_input = delta.dot(&self.layers[i].weight.t());
            if i > 0 {
                // Mask through the rectifier of the previous layer.
                d_input.zip_mut_with(&cache.acts[i], |d, a| {
                    if *a <= 0.0 {
                        *d = 0.0;
                    }
                });
            }
            delta = d_input;
        }
        Ok((grads, delta))
    }

    /// Single-vector backward convenience wrapper.
    pub fn backward(
        &self,
        input: &ArrayView1<f64>,
        upstream: &ArrayView1<f64>,
    ) -> Result<(MlpGrads, Array1<f64>)> {
        let batch = input.to_owned().insert_axis(Axis(0));
        let (_, cache) = self.forward_batch(&batch)?;
        let up = upstream.to_owned().insert_axis(Axis(0));
        let (grads, d_input) = self.backward_batch(&cache, &up)?;
        Ok((grads, d_input.index_axis(Axis(0), 0).to_owned()))
    }

    /// Flattened view of all parameters, for norms and checkpoint digests.
    pub fn flat_params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in &self.layers {
            out.extend(layer.weight.iter());
            out.extend(layer.bias.iter());
        }
        out
    }

    /// Applies `f` to every parameter in flattening order.
    pub fn map_params_mut(&mut self, mut f: impl FnMut(&mut f64)) {
        for layer in &mut self.layers {
            for w in layer.weight.iter_mut() {
                f(w);
            }
            for b in layer.bias.iter_mut() {
                f(b);
            }
        }
    }
}
