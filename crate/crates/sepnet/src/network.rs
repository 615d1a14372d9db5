//! Numerically stable sigmoid kernel and forward evaluation of layered
//! networks.
//!
//! Construction elsewhere scales pre-activations by factors in the
//! tens, so stress inputs reach magnitudes around 10³; the kernel
//! branches on sign so the exponential never overflows. Everything is
//! pure: the same input always produces bit-identical output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::LabelEncoding;

/// Logistic function 1/(1+e^{−t}) without overflow for any finite `t`.
///
/// For t < 0 the algebraically equal form e^t/(1+e^t) is used so the
/// exponential argument is never positive. NaN propagates; the result
/// for finite input is always in [0, 1] (the open-interval bound is
/// unattainable in 64-bit floats once e^t underflows).
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Per-layer activation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Sigmoid,
    Identity,
}

/// One fully connected layer: `activation(weights · x + biases)`.
///
/// `weights` is row-major — `weights[r]` holds the fan-in row of output
/// unit `r` — matching the on-disk model schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    /// Number of output units.
    pub fn rows(&self) -> usize {
        self.weights.len()
    }

    /// Number of input units (0 when the layer is empty).
    pub fn cols(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    fn validate(&self, position: usize) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidNetwork {
                reason: format!("layer {position} has no output units"),
            });
        }
        let cols = self.cols();
        if cols == 0 {
            return Err(Error::InvalidNetwork {
                reason: format!("layer {position} has no input units"),
            });
        }
        if let Some(bad) = self.weights.iter().position(|row| row.len() != cols) {
            return Err(Error::InvalidNetwork {
                reason: format!("layer {position} weight row {bad} has ragged width"),
            });
        }
        if self.biases.len() != self.weights.len() {
            return Err(Error::InvalidNetwork {
                reason: format!(
                    "layer {position} has {} biases for {} units",
                    self.biases.len(),
                    self.weights.len()
                ),
            });
        }
        Ok(())
    }

    /// `activation(weights · x + biases)` into a fresh vector.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(row, &b)| {
                let z = b + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
                match self.activation {
                    Activation::Sigmoid => sigmoid(z),
                    Activation::Identity => z,
                }
            })
            .collect()
    }
}

/// An ordered stack of dense layers whose final layer is linear.
///
/// Serializes to the model interchange schema
/// `{"layers":[{"weights":[[...]],"biases":[...],"activation":...}]}`;
/// values parsed from untrusted files must be re-checked with
/// [`SigmoidNetwork::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmoidNetwork {
    layers: Vec<DenseLayer>,
}

impl SigmoidNetwork {
    /// Builds a network after checking layer shapes, the dimension
    /// chain, and the linear-output requirement.
    pub fn new(layers: Vec<DenseLayer>) -> Result<Self> {
        let net = SigmoidNetwork { layers };
        net.validate()?;
        Ok(net)
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    /// Expected input length.
    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(0, DenseLayer::cols)
    }

    /// Output vector length.
    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, DenseLayer::rows)
    }

    /// Number of layers.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Structural checks: non-empty, rectangular layers, adjacent
    /// dimensions chaining, and an identity-activated final layer.
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::InvalidNetwork { reason: "no layers".into() });
        }
        for (t, layer) in self.layers.iter().enumerate() {
            layer.validate(t)?;
            if t > 0 {
                let feeding = self.layers[t - 1].rows();
                if layer.cols() != feeding {
                    return Err(Error::InvalidNetwork {
                        reason: format!(
                            "layer {t} expects {} inputs but layer {} emits {feeding}",
                            layer.cols(),
                            t - 1
                        ),
                    });
                }
            }
        }
        if self.layers.last().unwrap().activation != Activation::Identity {
            return Err(Error::InvalidNetwork {
                reason: "final layer must use the identity activation".into(),
            });
        }
        Ok(())
    }

    /// Full forward pass.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.forward_prefix(x, self.layers.len())
    }

    /// Forward pass through the first `depth` layers only; used to read
    /// hidden activations and intermediate stage outputs.
    pub fn forward_prefix(&self, x: &[f64], depth: usize) -> Result<Vec<f64>> {
        if depth == 0 || depth > self.layers.len() {
            return Err(Error::InvalidNetwork {
                reason: format!("prefix depth {depth} outside 1..={}", self.layers.len()),
            });
        }
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: x.len() });
        }
        let mut value = self.layers[0].apply(x);
        for layer in &self.layers[1..depth] {
            value = layer.apply(&value);
        }
        Ok(value)
    }

    /// Predicted label under a one-hot encoding: the 1-based index of
    /// the largest output component, ties broken toward the smallest
    /// index.
    pub fn classify(&self, enc: &LabelEncoding, x: &[f64]) -> Result<usize> {
        if !enc.is_one_hot() {
            return Err(Error::NonOneHotEncoding);
        }
        if enc.num_classes() != self.output_dim() {
            return Err(Error::DimensionMismatch {
                expected: enc.num_classes(),
                actual: self.output_dim(),
            });
        }
        let out = self.forward(x)?;
        let mut best = 0;
        for (j, &v) in out.iter().enumerate() {
            if v > out[best] {
                best = j;
            }
        }
        Ok(best + 1)
    }

    /// Total stored weights and biases, counting every dense matrix
    /// entry (shared structure is not deduplicated here).
    pub fn dense_param_count(&self) -> usize {
        self.layers.iter().map(|l| l.rows() * l.cols() + l.biases.len()).sum()
    }
}

// ---------------------------------------------------------------------------
