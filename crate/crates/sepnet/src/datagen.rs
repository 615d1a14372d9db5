//! Seeded samplers for distributions that satisfy the margin-separability
//! definitions, plus random specification generators.
//!
//! The definitions constrain only the projection of each point; this
//! module picks one representative family: the projected coordinate is
//! uniform on the open margined interval and the orthogonal component
//! is uniform in a ball of configurable radius, which keeps datasets
//! bounded for plotting. Identical (spec, config) inputs always yield
//! identical datasets — every draw comes from one seeded stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::construct::region_unrank;
use crate::error::{Error, Result};
use crate::spec::{
    dot, norm2, LabeledDataset, LabeledPoint, Provenance, SeparabilitySpec1D, SeparabilitySpecND,
};

/// Random-boundary gap range, in units of the margin: gaps are drawn
/// uniformly from [2δ + GAP_MIN_FACTOR·δ, 2δ + GAP_MAX_FACTOR·δ], which
/// keeps every interval comfortably above the 2δ degeneracy threshold.
pub const GAP_MIN_FACTOR: f64 = 1.0;
pub const GAP_MAX_FACTOR: f64 = 10.0;

/// Knobs for one sampling run.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    /// Seed of the (single) RNG stream.
    pub seed: u64,
    /// Number of points to emit.
    pub n_samples: usize,
    /// Radius bound R ≥ 0 on the component of each point orthogonal to
    /// the projection subspace. 0 keeps points exactly on the subspace.
    pub orth_radius: f64,
    /// Optional probability over cells — intervals in rank order for
    /// one axis, regions in rank order for several. Uniform if absent.
    pub interval_weights: Option<Vec<f64>>,
}

impl SamplerConfig {
    fn validate(&self, n_cells: usize) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidSamplerConfig { reason: "n_samples must be positive".into() });
        }
        if !self.orth_radius.is_finite() || self.orth_radius < 0.0 {
            return Err(Error::InvalidSamplerConfig {
                reason: format!("orth_radius must be finite and non-negative, got {}", self.orth_radius),
            });
        }
        if let Some(weights) = &self.interval_weights {
            if weights.len() != n_cells {
                return Err(Error::InvalidWeights {
                    reason: format!("expected {n_cells} weights, got {}", weights.len()),
                });
            }
            if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                return Err(Error::InvalidWeights {
                    reason: "weights must be finite and non-negative".into(),
                });
            }
            let sum: f64 = weights.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidWeights {
                    reason: format!("weights sum to {sum}, expected 1"),
                });
            }
        }
        Ok(())
    }
}

fn gaussian_vec<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniformly random unit vector (normalized Gaussian; degenerate draws
/// are measure-zero and redrawn).
fn unit_gaussian<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let g = gaussian_vec(rng, dim);
        let norm = norm2(&g);
        if norm > 1e-8 {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// b₁ = 0, then k gaps drawn uniformly from the factor range above.
fn random_boundaries<R: Rng>(rng: &mut R, k: usize, margin: f64) -> Vec<f64> {
    let lo = (2.0 + GAP_MIN_FACTOR) * margin;
    let hi = (2.0 + GAP_MAX_FACTOR) * margin;
    let mut boundaries = Vec::with_capacity(k + 1);
    boundaries.push(0.0);
    for _ in 0..k {
        let gap = rng.gen_range(lo..=hi);
        boundaries.push(boundaries.last().unwrap() + gap);
    }
    boundaries
}

/// Index of the cell to sample from, honoring optional weights (cells
/// of weight 0 are never chosen).
fn pick_cell<R: Rng>(rng: &mut R, n_cells: usize, weights: Option<&[f64]>) -> usize {
    match weights {
        None => rng.gen_range(0..n_cells),
        Some(weights) => {
            let target: f64 = rng.gen();
            let mut acc = 0.0;
            let mut fallback = 0;
            for (i, &w) in weights.iter().enumerate() {
                if w > 0.0 {
                    fallback = i;
                    acc += w;
                    if target < acc {
                        return i;
                    }
                }
            }
            // Rounding pushed the cumulative sum fractionally below 1;
            // land in the last positive-weight cell.
            fallback
        }
    }
}

/// Uniform draw from the open interval (lo, hi): the generator already
/// excludes hi; an exact hit on lo (probability ~0) is redrawn.
fn open_interval<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let t = rng.gen_range(lo..hi);
        if t > lo {
            return t;
        }
    }
}

/// Uniform draw from the ball of the given radius inside the orthogonal
/// complement of the (orthonormal) spanned axes. Zero when the
/// complement is trivial or the radius is 0; in that case no randomness
/// is consumed.
fn orthogonal_ball_noise<R: Rng>(
    rng: &mut R,
    axes: &[&[f64]],
    dim: usize,
    radius: f64,
) -> Vec<f64> {
    let free_dims = dim - axes.len();
    if radius <= 0.0 || free_dims == 0 {
        return vec![0.0; dim];
    }
    let direction = loop {
        let mut g = gaussian_vec(rng, dim);
        // Two projection passes: the second clears the rounding residue
        // of the first, so the noise cannot leak into the projected
        // coordinates and erode the sampled margins.
        for _ in 0..2 {
            for axis in axes {
                let overlap = dot(&g, axis);
                for (gi, ai) in g.iter_mut().zip(*axis) {
                    *gi -= overlap * ai;
                }
            }
        }
        let norm = norm2(&g);
        if norm > 1e-12 {
            break g.into_iter().map(|v| v / norm).collect::<Vec<f64>>();
        }
    };
    // Inverse-CDF radius for a uniform density in a free_dims-ball.
    let r = radius * rng.gen::<f64>().powf(1.0 / free_dims as f64);
    direction.into_iter().map(|v| v * r).collect()
}

// ---------------------------------------------------------------------------
// Random specifications
// ---------------------------------------------------------------------------

/// Random single-projection specification: Gaussian unit projection,
/// boundaries from 0 with margin-safe random gaps, uniform labels.
pub fn random_spec_1d(
    dim: usize,
    k: usize,
    num_classes: usize,
    margin: f64,
    seed: u64,
) -> Result<SeparabilitySpec1D> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    if k == 0 {
        return Err(Error::TooFewBoundaries { count: 1 });
    }
    if num_classes == 0 {
        return Err(Error::InvalidClassCount);
    }
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(Error::NonPositiveMargin { margin });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = SeparabilitySpec1D {
        dim,
        projection: unit_gaussian(&mut rng, dim),
        boundaries: random_boundaries(&mut rng, k, margin),
        margin,
        interval_labels: (0..k).map(|_| rng.gen_range(1..=num_classes)).collect(),
        num_classes,
    };
    debug_assert!(spec.validate().is_ok());
    Ok(spec)
}

/// Orthonormal basis of a random n-dimensional subspace: Gram–Schmidt
/// (with a reorthogonalization pass) over Gaussian draws.
fn orthonormal_axes<R: Rng>(rng: &mut R, dim: usize, n: usize) -> Vec<Vec<f64>> {
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(n);
    while axes.len() < n {
        let mut v = gaussian_vec(rng, dim);
        for _ in 0..2 {
            for axis in &axes {
                let overlap = dot(&v, axis);
                for (vi, ai) in v.iter_mut().zip(axis) {
                    *vi -= overlap * ai;
                }
            }
        }
        let norm = norm2(&v);
        // A collapsed draw (inside the spanned subspace) has measure
        // zero; redraw rather than emit a junk axis.
        if norm > 1e-8 {
            axes.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    axes
}

/// Random multi-projection specification with orthonormal axes.
///
/// Orthonormality is stricter than the validity rules demand, but
/// without it some regions can be empty and unsampleable; the samplers
/// here require it.
pub fn random_spec_nd(
    dim: usize,
    axis_sizes: &[usize],
    num_classes: usize,
    margin: f64,
    seed: u64,
) -> Result<SeparabilitySpecND> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    if axis_sizes.is_empty() {
        return Err(Error::EmptyAxis { axis: 1 });
    }
    if let Some(p) = axis_sizes.iter().position(|&k| k == 0) {
        return Err(Error::EmptyAxis { axis: p + 1 });
    }
    if axis_sizes.len() > dim {
        return Err(Error::AxesExceedDimension { axes: axis_sizes.len(), dim });
    }
    if num_classes == 0 {
        return Err(Error::InvalidClassCount);
    }
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(Error::NonPositiveMargin { margin });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directions = orthonormal_axes(&mut rng, dim, axis_sizes.len());
    let axes = directions
        .into_iter()
        .zip(axis_sizes)
        .map(|(projection, &k)| crate::spec::AxisSpec {
            projection,
            boundaries: random_boundaries(&mut rng, k, margin),
        })
        .collect();

    let num_regions: usize = axis_sizes.iter().product();
    let mut region_labels = crate::spec::RegionLabelMap::new();
    for rank in 0..num_regions as u64 {
        let index = region_unrank(axis_sizes, rank)?;
        region_labels.insert(index, rng.gen_range(1..=num_classes));
    }

    let spec = SeparabilitySpecND { dim, axes, margin, region_labels, num_classes };
    debug_assert!(spec.validate().is_ok());
    Ok(spec)
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Draws `cfg.n_samples` labeled points from a distribution satisfying
/// the 1D specification: pick an interval, place the projected
/// coordinate uniformly inside its open margined range, add orthogonal
/// ball noise. Every emitted point respects the margin by construction.
pub fn sample_1d(spec: &SeparabilitySpec1D, cfg: &SamplerConfig) -> Result<LabeledDataset> {
    spec.validate()?;
    let k = spec.num_intervals();
    cfg.validate(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let axes: [&[f64]; 1] = [&spec.projection];
    let mut points = Vec::with_capacity(cfg.n_samples);
    for _ in 0..cfg.n_samples {
        let cell = pick_cell(&mut rng, k, cfg.interval_weights.as_deref());
        let lo = spec.boundaries[cell] + spec.margin;
        let hi = spec.boundaries[cell + 1] - spec.margin;
        let t = open_interval(&mut rng, lo, hi);
        let mut x: Vec<f64> = spec.projection.iter().map(|a| t * a).collect();
        let noise = orthogonal_ball_noise(&mut rng, &axes, spec.dim, cfg.orth_radius);
        for (xi, zi) in x.iter_mut().zip(&noise) {
            *xi += zi;
        }
        points.push(LabeledPoint { x, y: spec.interval_labels[cell] });
    }
    Ok(LabeledDataset {
        dim: spec.dim,
        points,
        provenance: Some(Provenance {
            seed: cfg.seed,
            spec_summary: format!("1d dim={} k={} classes={}", spec.dim, k, spec.num_classes),
        }),
    })
}

/// Multi-axis analogue of [`sample_1d`]: pick a region (by rank), place
/// each axis coordinate uniformly inside its open margined interval,
/// add noise orthogonal to all axes. Requires orthonormal axes — the
/// per-axis placement only realizes every region in that case.
pub fn sample_nd(spec: &SeparabilitySpecND, cfg: &SamplerConfig) -> Result<LabeledDataset> {
    spec.validate()?;
    let n = spec.num_axes();
    for i in 0..n {
        for j in i..n {
            let overlap = dot(&spec.axes[i].projection, &spec.axes[j].projection);
            let target = if i == j { 1.0 } else { 0.0 };
            if (overlap - target).abs() > 1e-10 {
                return Err(Error::AxesNotOrthonormal { first: i + 1, second: j + 1 });
            }
        }
    }
    let num_regions = spec.num_regions();
    cfg.validate(num_regions)?;
    let sizes = spec.axis_sizes();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let axis_refs: Vec<&[f64]> = spec.axes.iter().map(|a| a.projection.as_slice()).collect();
    let mut points = Vec::with_capacity(cfg.n_samples);
    for _ in 0..cfg.n_samples {
        let rank = pick_cell(&mut rng, num_regions, cfg.interval_weights.as_deref()) as u64;
        let index = region_unrank(&sizes, rank)?;
        let mut x = vec![0.0; spec.dim];
        for (axis, &i) in spec.axes.iter().zip(&index) {
            let lo = axis.boundaries[i - 1] + spec.margin;
            let hi = axis.boundaries[i] - spec.margin;
            let t = open_interval(&mut rng, lo, hi);
            for (xi, ai) in x.iter_mut().zip(&axis.projection) {
                *xi += t * ai;
            }
        }
        let noise = orthogonal_ball_noise(&mut rng, &axis_refs, spec.dim, cfg.orth_radius);
        for (xi, zi) in x.iter_mut().zip(&noise) {
            *xi += zi;
        }
        let y = region_label(spec, &index);
        points.push(LabeledPoint { x, y });
    }
    Ok(LabeledDataset {
        dim: spec.dim,
        points,
        provenance: Some(Provenance {
            seed: cfg.seed,
            spec_summary: format!(
                "nd dim={} sizes={:?} classes={}",
                spec.dim, sizes, spec.num_classes
            ),
        }),
    })
}

fn region_label(spec: &SeparabilitySpecND, index: &[usize]) -> usize {
    spec.region_labels.get(index).expect("label map validated total before sampling")
}

// ---------------------------------------------------------------------------
// Dataset CSV interchange
// ---------------------------------------------------------------------------

/// Renders `x1,...,xd,y` rows with 17-significant-digit floats — enough
/// to reproduce every 64-bit value exactly on re-parse.
pub fn dataset_to_csv(dataset: &LabeledDataset) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    for i in 1..=dataset.dim {
        let _ = write!(out, "x{i},");
    }
    out.push_str("y\n");
    for point in &dataset.points {
        for v in &point.x {
            let _ = write!(out, "{v:.16e},");
        }
        let _ = writeln!(out, "{}", point.y);
    }
    out
}

/// Parses the CSV produced by [`dataset_to_csv`]. The provenance of a
/// parsed dataset is unknown and left empty.
pub fn dataset_from_csv(text: &str) -> Result<LabeledDataset> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::DatasetFormat { line: 1, reason: "missing header".into() })?;
    let fields: Vec<&str> = header.split(',').collect();
    if fields.len() < 2 || fields[fields.len() - 1] != "y" {
        return Err(Error::DatasetFormat {
            line: 1,
            reason: "header must be x1,...,xd,y".into(),
        });
    }
    let dim = fields.len() - 1;
    for (i, field) in fields[..dim].iter().enumerate() {
        if *field != format!("x{}", i + 1) {
            return Err(Error::DatasetFormat {
                line: 1,
                reason: format!("column {} named {field:?}, expected \"x{}\"", i + 1, i + 1),
            });
        }
    }

    let mut points = Vec::new();
    for (offset, row) in lines.enumerate() {
        let line = offset + 2;
        if row.is_empty() {
            continue;
        }
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != dim + 1 {
            return Err(Error::DatasetFormat {
                line,
                reason: format!("expected {} columns, got {}", dim + 1, cells.len()),
            });
        }
        let mut x = Vec::with_capacity(dim);
        for cell in &cells[..dim] {
            let v: f64 = cell.parse().map_err(|_| Error::DatasetFormat {
                line,
                reason: format!("bad coordinate {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::DatasetFormat {
                    line,
                    reason: format!("non-finite coordinate {cell:?}"),
                });
            }
            x.push(v);
        }
        let y: usize = cells[dim].parse().map_err(|_| Error::DatasetFormat {
            line,
            reason: format!("bad label {:?}", cells[dim]),
        })?;
        if y == 0 {
            return Err(Error::DatasetFormat { line, reason: "labels are 1-based".into() });
        }
        points.push(LabeledPoint { x, y });
    }
    Ok(LabeledDataset { dim, points, provenance: None })
}

// ---------------------------------------------------------------------------
