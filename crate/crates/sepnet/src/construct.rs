//! Closed-form network builders. No training happens anywhere in this
//! crate: given a margin-separability specification, the classifier is
//! written down directly.
//!
//! For a single projection axis the recipe is a 2-layer network — one
//! steep sigmoid per interior boundary plus a linear read-out whose
//! rows telescope the desired codes. For several axes, one scalar
//! subnetwork per axis maps its interval index to a region-rank digit;
//! their sum is again margin-separable on a line, so a second 2-layer
//! stage finishes the job, four layers in total.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Activation, DenseLayer, SigmoidNetwork};
use crate::spec::{LabelEncoding, SeparabilitySpec1D, SeparabilitySpecND};

/// How to pick the sigmoid steepness factor c_s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingPolicy {
    /// Smallest factor that provably caps the worst-case output
    /// deviation at the given tolerance (clamped below at 0 when any
    /// positive factor already suffices).
    SufficientForEpsilon(f64),
    /// Use the given factor as-is; deviations are then whatever they
    /// are (useful for sweeping the accuracy/steepness trade-off).
    Explicit(f64),
}

/// Bookkeeping emitted alongside every built network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildMetadata {
    /// Parameter count by the sharing-aware closed formula:
    /// d + (m+1)·k for 2-layer builds, n(d+1) + 2·Σk_s + (m+1)·∏k_s
    /// for 4-layer builds.
    pub formula_param_count: usize,
    /// Parameter count by brute enumeration of stored matrix entries.
    pub dense_param_count: usize,
    /// Steepness factor of the final (read-out feeding) sigmoid layer.
    pub c_s_used: f64,
    /// Tolerance the scaling was derived from; absent for explicit
    /// scaling.
    pub epsilon: Option<f64>,
    /// Euclidean norms of the read-out weight columns, one per output
    /// component; their max drives the sufficient scaling.
    pub per_column_weight_norms: Vec<f64>,
    /// Which [`ScalingPolicy`] produced `c_s_used`.
    pub scaling_mode: String,
    /// Steepness factors of the per-axis scalar subnetworks (empty for
    /// 2-layer builds).
    pub subnetwork_scalings: Vec<f64>,
}

/// A built network together with its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub network: SigmoidNetwork,
    pub metadata: BuildMetadata,
}

/// Read-out weight matrix W (k×m): row 1 is the code of interval 1's
/// label; row i is the code difference f(y_i) − f(y_{i−1}).
///
/// Equivalently the unique solution of H·W = Y where H is the
/// lower-triangular all-ones matrix and Y stacks the interval codes:
/// prefix sums of W telescope back to the codes exactly (integer
/// arithmetic for one-hot codes, so equality is exact, not
/// approximate).
pub fn output_weight_matrix(
    spec: &SeparabilitySpec1D,
    enc: &LabelEncoding,
) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    for &label in &spec.interval_labels {
        if label > enc.num_classes() {
            return Err(Error::LabelOutOfRange { label, num_classes: enc.num_classes() });
        }
    }
    let m = enc.out_dim();
    let mut w = Vec::with_capacity(spec.num_intervals());
    let mut prev = vec![0.0; m];
    for &label in &spec.interval_labels {
        let code = enc.code(label)?;
        w.push(code.iter().zip(&prev).map(|(c, p)| c - p).collect());
        prev = code;
    }
    Ok(w)
}

/// Euclidean norm of each column of a row-major matrix.
fn column_norms(w: &[Vec<f64>]) -> Vec<f64> {
    let m = w.first().map_or(0, Vec::len);
    let mut sums = vec![0.0; m];
    for row in w {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v * v;
        }
    }
    sums.into_iter().map(f64::sqrt).collect()
}

/// Smallest steepness factor guaranteeing every output component stays
/// within `epsilon` of its target code on margin-respecting inputs:
/// (1/δ)·ln(√k · max_j ‖w_j‖₂ / ε), natural log, clamped below at 0.
///
/// `w_j` is the j-th COLUMN of W. When the log argument is below 1 the
/// tolerance is already met with no steepness at all, hence the clamp.
pub fn sufficient_scaling(spec: &SeparabilitySpec1D, w: &[Vec<f64>], epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::NonPositiveEpsilon { epsilon });
    }
    if !(spec.margin > 0.0) || !spec.margin.is_finite() {
        return Err(Error::NonPositiveMargin { margin: spec.margin });
    }
    if w.len() != spec.num_intervals() {
        return Err(Error::DimensionMismatch { expected: spec.num_intervals(), actual: w.len() });
    }
    let k = w.len() as f64;
    let max_norm = column_norms(w).into_iter().fold(0.0, f64::max);
    // ln of a zero argument is -inf (all-zero W): the clamp maps
    // "already satisfied" to a steepness of 0.
    Ok(((k.sqrt() * max_norm / epsilon).ln() / spec.margin).max(0.0))
}

/// Builds the 2-layer classifier for a single-projection specification.
///
/// Hidden layer: one sigmoid unit per interior boundary (the first k of
/// the k+1), unit l computing ρ(c_s·aᵀx − c_s·b_l). Read-out: Wᵀ with
/// zero bias and identity activation. The formula parameter count is
/// d + (m+1)·k — the projection is shared across hidden rows.
pub fn build_two_layer(
    spec: &SeparabilitySpec1D,
    enc: &LabelEncoding,
    policy: ScalingPolicy,
) -> Result<Construction> {
    spec.validate()?;
    let w = output_weight_matrix(spec, enc)?;
    let per_column_weight_norms = column_norms(&w);
    let (c_s, epsilon, scaling_mode) = match policy {
        ScalingPolicy::SufficientForEpsilon(eps) => {
            (sufficient_scaling(spec, &w, eps)?, Some(eps), "sufficient_for_epsilon")
        }
        ScalingPolicy::Explicit(c_s) => {
            if !(c_s > 0.0) || !c_s.is_finite() {
                return Err(Error::NonPositiveScaling { c_s });
            }
            (c_s, None, "explicit")
        }
    };

    let k = spec.num_intervals();
    let m = enc.out_dim();
    let hidden = DenseLayer {
        weights: (0..k)
            .map(|_| spec.projection.iter().map(|a| c_s * a).collect())
            .collect(),
        biases: spec.boundaries[..k].iter().map(|b| -c_s * b).collect(),
        activation: Activation::Sigmoid,
    };
    let read_out = DenseLayer {
        weights: (0..m).map(|j| w.iter().map(|row| row[j]).collect()).collect(),
        biases: vec![0.0; m],
        activation: Activation::Identity,
    };
    let network = SigmoidNetwork::new(vec![hidden, read_out])?;
    let metadata = BuildMetadata {
        formula_param_count: spec.dim + (m + 1) * k,
        dense_param_count: network.dense_param_count(),
        c_s_used: c_s,
        epsilon,
        per_column_weight_norms,
        scaling_mode: scaling_mode.to_string(),
        subnetwork_scalings: Vec::new(),
    };
    Ok(Construction { network, metadata })
}

fn check_axis_sizes(axis_sizes: &[usize]) -> Result<()> {
    if let Some(p) = axis_sizes.iter().position(|&k| k == 0) {
        return Err(Error::EmptyAxis { axis: p + 1 });
    }
    Ok(())
}

/// Scalar target for each interval of axis `s` (1-based): interval i
/// contributes digit (i−1) · ∏_{p<s} k_p to the region rank.
pub fn subnetwork_targets(axis_sizes: &[usize], s: usize) -> Result<Vec<u64>> {
    if s == 0 || s > axis_sizes.len() {
        return Err(Error::AxisOutOfRange { axis: s, num_axes: axis_sizes.len() });
    }
    check_axis_sizes(axis_sizes)?;
    let stride: u64 = axis_sizes[..s - 1].iter().map(|&k| k as u64).product();
    Ok((0..axis_sizes[s - 1] as u64).map(|i| i * stride).collect())
}

/// Mixed-radix rank of a multi-index: the sum of its per-axis digits,
/// axis 1 least significant. Bijective from the multi-index lattice
/// onto 0..∏k_s.
pub fn region_rank(axis_sizes: &[usize], index: &[usize]) -> Result<u64> {
    if index.len() != axis_sizes.len() {
        return Err(Error::DimensionMismatch { expected: axis_sizes.len(), actual: index.len() });
    }
    check_axis_sizes(axis_sizes)?;
    let mut rank = 0u64;
    let mut stride = 1u64;
    for (s, (&i, &k)) in index.iter().zip(axis_sizes).enumerate() {
        if i == 0 || i > k {
            return Err(Error::IndexOutOfRange { axis: s + 1, index: i, size: k });
        }
        rank += (i as u64 - 1) * stride;
        stride *= k as u64;
    }
    Ok(rank)
}

/// Constructive inverse of [`region_rank`]: mixed-radix decoding.
pub fn region_unrank(axis_sizes: &[usize], rank: u64) -> Result<Vec<usize>> {
    check_axis_sizes(axis_sizes)?;
    let num_regions: u64 = axis_sizes.iter().map(|&k| k as u64).product();
    if rank >= num_regions {
        return Err(Error::RankOutOfRange { rank, num_regions });
    }
    let mut index = Vec::with_capacity(axis_sizes.len());
    let mut rest = rank;
    for &k in axis_sizes {
        index.push((rest % k as u64) as usize + 1);
        rest /= k as u64;
    }
    Ok(index)
}

/// The single-projection specification satisfied by the stacked
/// subnetwork outputs p(x) = (p¹(x),…,pⁿ(x)).
///
/// Each subnetwork lands within 1/(4n) of its integer digit, so the
/// mean-direction projection (1/√n)·Σ p^s(x) lands within 1/(4√n) of
/// (region rank)/√n — margin-separated intervals of width 1/√n centred
/// on the scaled ranks, with boundaries (i−1.5)/√n. The interval at
/// rank r inherits that region's label.
pub fn rank_spec_1d(spec: &SeparabilitySpecND) -> Result<SeparabilitySpec1D> {
    spec.validate()?;
    let n = spec.num_axes();
    let sizes = spec.axis_sizes();
    let num_regions = spec.num_regions();
    let sqrt_n = (n as f64).sqrt();

    let mut interval_labels = Vec::with_capacity(num_regions);
    for rank in 0..num_regions as u64 {
        let index = region_unrank(&sizes, rank)?;
        let label = spec
            .region_labels
            .get(&index)
            .ok_or(Error::RegionLabelMissing { index })?;
        interval_labels.push(label);
    }
    Ok(SeparabilitySpec1D {
        dim: n,
        projection: vec![1.0 / sqrt_n; n],
        boundaries: (1..=num_regions + 1).map(|i| (i as f64 - 1.5) / sqrt_n).collect(),
        margin: 0.25 / sqrt_n,
        interval_labels,
        num_classes: spec.num_classes,
    })
}

/// Builds the 4-layer classifier for a multi-projection specification.
///
/// Layers 1–2 hold n parallel scalar subnetworks (stored
/// block-diagonally; blocks not owned by an axis are zero), subnetwork
/// s built on axis s to emit its rank digit within 1/(4n). Layers 3–4
/// are the 2-layer build for [`rank_spec_1d`] at the caller's
/// tolerance. Formula parameter count: n(d+1) + 2·Σk_s + (m+1)·∏k_s.
pub fn build_four_layer(
    spec: &SeparabilitySpecND,
    enc: &LabelEncoding,
    epsilon: f64,
) -> Result<Construction> {
    spec.validate()?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::NonPositiveEpsilon { epsilon });
    }
    let n = spec.num_axes();
    let sizes = spec.axis_sizes();
    // Fixed inner tolerance: the rank-spec margin 1/(4√n) is exactly n
    // per-axis errors of 1/(4n) projected onto the mean direction.
    let inner_epsilon = 1.0 / (4.0 * n as f64);

    let mut subnetworks = Vec::with_capacity(n);
    let mut subnetwork_scalings = Vec::with_capacity(n);
    for (s, axis) in spec.axes.iter().enumerate() {
        let pseudo = SeparabilitySpec1D {
            dim: spec.dim,
            projection: axis.projection.clone(),
            boundaries: axis.boundaries.clone(),
            margin: spec.margin,
            interval_labels: (1..=sizes[s]).collect(),
            num_classes: sizes[s],
        };
        let targets = subnetwork_targets(&sizes, s + 1)?;
        let scalar_enc =
            LabelEncoding::from_codes(targets.iter().map(|&t| vec![t as f64]).collect())?;
        let sub = build_two_layer(
            &pseudo,
            &scalar_enc,
            ScalingPolicy::SufficientForEpsilon(inner_epsilon),
        )
        .map_err(|source| Error::InvalidAxis { axis: s + 1, source: Box::new(source) })?;
        subnetwork_scalings.push(sub.metadata.c_s_used);
        subnetworks.push(sub.network);
    }

    // Stack the subnetworks: hidden rows concatenate (each already sees
    // the full input), read-outs go block-diagonal.
    let total_hidden: usize = sizes.iter().sum();
    let mut hidden_weights = Vec::with_capacity(total_hidden);
    let mut hidden_biases = Vec::with_capacity(total_hidden);
    let mut stack_weights = vec![vec![0.0; total_hidden]; n];
    let mut offset = 0;
    for (s, sub) in subnetworks.iter().enumerate() {
        let [hidden, read_out] = sub.layers() else {
            unreachable!("2-layer builder emitted a different depth");
        };
        hidden_weights.extend(hidden.weights.iter().cloned());
        hidden_biases.extend(hidden.biases.iter().copied());
        for (j, &v) in read_out.weights[0].iter().enumerate() {
            stack_weights[s][offset + j] = v;
        }
        offset += sizes[s];
    }

    let outer = build_two_layer(
        &rank_spec_1d(spec)?,
        enc,
        ScalingPolicy::SufficientForEpsilon(epsilon),
    )?;
    let [rank_hidden, rank_read_out] = outer.network.layers() else {
        unreachable!("2-layer builder emitted a different depth");
    };

    let network = SigmoidNetwork::new(vec![
        DenseLayer {
            weights: hidden_weights,
            biases: hidden_biases,
            activation: Activation::Sigmoid,
        },
        DenseLayer {
            weights: stack_weights,
            biases: vec![0.0; n],
            activation: Activation::Identity,
        },
        rank_hidden.clone(),
        rank_read_out.clone(),
    ])?;

    let m = enc.out_dim();
    let metadata = BuildMetadata {
        formula_param_count: n * (spec.dim + 1) + 2 * total_hidden + (m + 1) * spec.num_regions(),
        dense_param_count: network.dense_param_count(),
        c_s_used: outer.metadata.c_s_used,
        epsilon: Some(epsilon),
        per_column_weight_norms: outer.metadata.per_column_weight_norms.clone(),
        scaling_mode: "sufficient_for_epsilon".to_string(),
        subnetwork_scalings,
    };
    Ok(Construction { network, metadata })
}

// ---------------------------------------------------------------------------
