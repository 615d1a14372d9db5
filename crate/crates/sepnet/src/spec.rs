//! Domain types carried between builders, samplers, and verifiers:
//! margin-separability specifications, label encodings, and labeled
//! datasets.
//!
//! Everything here is immutable after construction, so values can be
//! shared freely across threads.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// How far a projection vector's Euclidean norm may stray from 1.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Euclidean norm of a vector.
pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Dot product; callers guarantee equal lengths.
pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Shared geometry checks for one projection axis: unit norm, strictly
/// increasing boundaries, and intervals that stay non-empty after the
/// margin is carved away on both sides.
fn validate_axis_geometry(
    projection: &[f64],
    boundaries: &[f64],
    dim: usize,
    margin: f64,
) -> Result<()> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    if projection.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: projection.len() });
    }
    if projection.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { what: "projection vector".into() });
    }
    let norm = norm2(projection);
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NonUnitProjection { norm });
    }
    if boundaries.len() < 2 {
        return Err(Error::TooFewBoundaries { count: boundaries.len() });
    }
    if boundaries.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { what: "boundaries".into() });
    }
    for i in 0..boundaries.len() - 1 {
        if !(boundaries[i] < boundaries[i + 1]) {
            return Err(Error::NonIncreasingBoundaries { index: i });
        }
        // Width must strictly exceed 2*margin or the open margined
        // interval (b_i + margin, b_{i+1} - margin) is empty.
        if !(boundaries[i + 1] - boundaries[i] > 2.0 * margin) {
            return Err(Error::DegenerateInterval { index: i });
        }
    }
    Ok(())
}

fn validate_margin(margin: f64) -> Result<()> {
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(Error::NonPositiveMargin { margin });
    }
    Ok(())
}

fn validate_labels(labels: &[usize], expected: usize, num_classes: usize) -> Result<()> {
    if num_classes == 0 {
        return Err(Error::InvalidClassCount);
    }
    if labels.len() != expected {
        return Err(Error::LabelCountMismatch { expected, actual: labels.len() });
    }
    for &label in labels {
        if label == 0 || label > num_classes {
            return Err(Error::LabelOutOfRange { label, num_classes });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Single-projection specification
// ---------------------------------------------------------------------------

/// Data separable along a single projection direction.
///
/// The projection `a` maps each point to a line carved into `k`
/// intervals by `k+1` strictly increasing `boundaries`; every point of
/// the distribution projects strictly inside one interval, at least
/// `margin` away from both ends, and carries that interval's label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilitySpec1D {
    /// Ambient dimension d.
    pub dim: usize,
    /// Unit-norm projection vector, length `dim`.
    #[serde(rename = "a")]
    pub projection: Vec<f64>,
    /// k+1 strictly increasing boundary values.
    pub boundaries: Vec<f64>,
    /// Separation margin δ > 0.
    pub margin: f64,
    /// Label of each interval, length k, entries in `1..=num_classes`.
    pub interval_labels: Vec<usize>,
    /// Number of classes c. May be smaller than k (labels can repeat).
    pub num_classes: usize,
}

impl SeparabilitySpec1D {
    /// Number of intervals k.
    pub fn num_intervals(&self) -> usize {
        self.boundaries.len().saturating_sub(1)
    }

    /// Checks every structural invariant; `Ok(())` iff the value is a
    /// well-formed specification.
    pub fn validate(&self) -> Result<()> {
        validate_margin(self.margin)?;
        validate_axis_geometry(&self.projection, &self.boundaries, self.dim, self.margin)?;
        validate_labels(&self.interval_labels, self.num_intervals(), self.num_classes)?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Multi-projection specification
// ---------------------------------------------------------------------------

/// One projection axis of a multi-axis specification: a direction and
/// its boundary values (labels live in the region map, not per axis).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    /// Unit-norm projection vector.
    #[serde(rename = "a")]
    pub projection: Vec<f64>,
    /// k_s+1 strictly increasing boundary values.
    pub boundaries: Vec<f64>,
}

impl AxisSpec {
    /// Number of intervals k_s on this axis.
    pub fn num_intervals(&self) -> usize {
        self.boundaries.len().saturating_sub(1)
    }
}

/// Total assignment of labels to multi-axis regions, keyed by 1-based
/// per-axis interval indices.
///
/// Serializes as a JSON map whose keys are the comma-joined indices
/// (`"2,1"` for axis-1 interval 2, axis-2 interval 1). Entries are kept
/// sorted, so serialization is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionLabelMap {
    entries: BTreeMap<Vec<usize>, usize>,
}

impl RegionLabelMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (Vec<usize>, usize)>>(entries: I) -> Self {
        RegionLabelMap { entries: entries.into_iter().collect() }
    }

    /// Inserts or replaces the label of one region.
    pub fn insert(&mut self, index: Vec<usize>, label: usize) {
        self.entries.insert(index, label);
    }

    /// Label of the region at `index`, if assigned.
    pub fn get(&self, index: &[usize]) -> Option<usize> {
        self.entries.get(index).copied()
    }

    pub fn contains(&self, index: &[usize]) -> bool {
        self.entries.contains_key(index)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates regions in sorted index order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, usize)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }
}

impl Serialize for RegionLabelMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (index, label) in &self.entries {
            let key =
                index.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            map.serialize_entry(&key, label)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for RegionLabelMap {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        struct MapVisitor;

        impl<'de> Visitor<'de> for MapVisitor {
            type Value = RegionLabelMap;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from comma-joined 1-based region indices to labels")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut entries = BTreeMap::new();
                while let Some((key, label)) = access.next_entry::<String, usize>()? {
                    let index: std::result::Result<Vec<usize>, _> =
                        key.split(',').map(|part| part.trim().parse::<usize>()).collect();
                    let index = index.map_err(|_| {
                        serde::de::Error::custom(format!("malformed region key {key:?}"))
                    })?;
                    entries.insert(index, label);
                }
                Ok(RegionLabelMap { entries })
            }
        }

        deserializer.deserialize_map(MapVisitor)
    }
}

/// Data separable along `n` projection directions simultaneously.
///
/// Each axis carves the line into intervals as in
/// [`SeparabilitySpec1D`]; a region is one interval choice per axis,
/// and `region_labels` assigns a class to every such combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilitySpecND {
    /// Ambient dimension d.
    pub dim: usize,
    /// The n projection axes.
    pub axes: Vec<AxisSpec>,
    /// Separation margin δ > 0, shared by all axes.
    pub margin: f64,
    /// Label for every multi-index (i₁,…,i_n), i_s ∈ 1..=k_s.
    pub region_labels: RegionLabelMap,
    /// Number of classes c.
    pub num_classes: usize,
}

impl SeparabilitySpecND {
    /// Number of projection axes n.
    pub fn num_axes(&self) -> usize {
        self.axes.len()
    }

    /// Interval count per axis, (k₁,…,k_n).
    pub fn axis_sizes(&self) -> Vec<usize> {
        self.axes.iter().map(AxisSpec::num_intervals).collect()
    }

    /// Total region count ∏ k_s.
    pub fn num_regions(&self) -> usize {
        self.axes.iter().map(AxisSpec::num_intervals).product()
    }

    /// Checks every structural invariant, including totality of the
    /// region label map over all ∏ k_s multi-indices.
    pub fn validate(&self) -> Result<()> {
        validate_margin(self.margin)?;
        if self.axes.is_empty() {
            return Err(Error::EmptyAxis { axis: 1 });
        }
        for (s, axis) in self.axes.iter().enumerate() {
            validate_axis_geometry(&axis.projection, &axis.boundaries, self.dim, self.margin)
                .map_err(|source| Error::InvalidAxis {
                    axis: s + 1,
                    source: Box::new(source),
                })?;
        }
        if self.num_classes == 0 {
            return Err(Error::InvalidClassCount);
        }

        let sizes = self.axis_sizes();
        for (index, label) in self.region_labels.iter() {
            let in_range = index.len() == sizes.len()
                && index.iter().zip(&sizes).all(|(&i, &k)| i >= 1 && i <= k);
            if !in_range {
                return Err(Error::RegionLabelUnknown { index: index.clone() });
            }
            if label == 0 || label > self.num_classes {
                return Err(Error::LabelOutOfRange { label, num_classes: self.num_classes });
            }
        }
        // Keys are unique and each was just checked to be in range, so a
        // full map has exactly ∏ k_s entries; anything smaller is
        // missing at least one region. Walk the multi-indices
        // odometer-style to name the first absent one.
        if self.region_labels.len() != self.num_regions() {
            let mut index = vec![1usize; sizes.len()];
            loop {
                if !self.region_labels.contains(&index) {
                    return Err(Error::RegionLabelMissing { index });
                }
                let mut s = 0;
                loop {
                    if s == sizes.len() {
                        // Every index present after all; defensive.
                        return Ok(());
                    }
                    index[s] += 1;
                    if index[s] <= sizes[s] {
                        break;
                    }
                    index[s] = 1;
                    s += 1;
                }
            }
        }
        Ok(())
    }
}

/// Either flavor of specification, tagged for file interchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SeparabilitySpec {
    #[serde(rename = "1d")]
    OneD(SeparabilitySpec1D),
    #[serde(rename = "nd")]
    Nd(SeparabilitySpecND),
}

impl SeparabilitySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SeparabilitySpec::OneD(s) => s.validate(),
            SeparabilitySpec::Nd(s) => s.validate(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SeparabilitySpec::OneD(s) => s.dim,
            SeparabilitySpec::Nd(s) => s.dim,
        }
    }

    pub fn num_classes(&self) -> usize {
        match self {
            SeparabilitySpec::OneD(s) => s.num_classes,
            SeparabilitySpec::Nd(s) => s.num_classes,
        }
    }
}

// ---------------------------------------------------------------------------
// Label encodings
// ---------------------------------------------------------------------------

/// Injective assignment of a real code vector to each label in
/// `1..=num_classes`.
///
/// One-hot is the common case and is stored symbolically, so large
/// class counts cost no memory; arbitrary injective codes (used for
/// scalar-valued intermediate targets) are stored explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelEncoding {
    num_classes: usize,
    out_dim: usize,
    codes: Codes,
}

#[derive(Debug, Clone, PartialEq)]
enum Codes {
    OneHot,
    Explicit(Vec<Vec<f64>>),
}

impl LabelEncoding {
    /// One-hot encoding: label j maps to the j-th standard basis vector
    /// of length `num_classes`.
    pub fn one_hot(num_classes: usize) -> Result<Self> {
        if num_classes == 0 {
            return Err(Error::InvalidClassCount);
        }
        Ok(LabelEncoding { num_classes, out_dim: num_classes, codes: Codes::OneHot })
    }

    /// Explicit encoding from one code vector per label (row i encodes
    /// label i+1). Rejects empty, ragged, non-finite, or non-injective
    /// code sets; injectivity is exact comparison, no tolerance.
    pub fn from_codes(codes: Vec<Vec<f64>>) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::InvalidClassCount);
        }
        let out_dim = codes[0].len();
        if out_dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        for row in &codes {
            if row.len() != out_dim {
                return Err(Error::DimensionMismatch { expected: out_dim, actual: row.len() });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteValue { what: "code vector".into() });
            }
        }
        for i in 0..codes.len() {
            for j in i + 1..codes.len() {
                if codes[i] == codes[j] {
                    return Err(Error::EncodingNotInjective { first: i + 1, second: j + 1 });
                }
            }
        }
        Ok(LabelEncoding { num_classes: codes.len(), out_dim, codes: Codes::Explicit(codes) })
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Length m of each code vector.
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// True iff built by [`LabelEncoding::one_hot`].
    pub fn is_one_hot(&self) -> bool {
        matches!(self.codes, Codes::OneHot)
    }

    /// Code vector of `label` (1-based).
    pub fn code(&self, label: usize) -> Result<Vec<f64>> {
        if label == 0 || label > self.num_classes {
            return Err(Error::LabelOutOfRange { label, num_classes: self.num_classes });
        }
        Ok(match &self.codes {
            Codes::OneHot => {
                let mut v = vec![0.0; self.out_dim];
                v[label - 1] = 1.0;
                v
            }
            Codes::Explicit(codes) => codes[label - 1].clone(),
        })
    }

    /// Component `j` (0-based) of the code of `label` (1-based),
    /// without allocating.
    ///
    /// # Panics
    /// If `label` or `j` is out of range; validate labels first.
    pub fn entry(&self, label: usize, j: usize) -> f64 {
        assert!(label >= 1 && label <= self.num_classes, "label {label} out of range");
        assert!(j < self.out_dim, "component {j} out of range");
        match &self.codes {
            Codes::OneHot => {
                if j == label - 1 {
                    1.0
                } else {
                    0.0
                }
            }
            Codes::Explicit(codes) => codes[label - 1][j],
        }
    }
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

/// One sample: a point and its class label (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub x: Vec<f64>,
    pub y: usize,
}

/// Where a dataset came from, for reproducibility bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// RNG seed the sampler was run with.
    pub seed: u64,
    /// Short free-form description of the generating specification.
    pub spec_summary: String,
}

/// A list of labeled points sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub dim: usize,
    pub points: Vec<LabeledPoint>,
    pub provenance: Option<Provenance>,
}

impl LabeledDataset {
    /// Checks that every point has dimension `dim` and a 1-based label.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        for p in &self.points {
            if p.x.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, actual: p.x.len() });
            }
            if p.y == 0 {
                return Err(Error::LabelOutOfRange { label: 0, num_classes: usize::MAX });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn well_formed_1d() -> SeparabilitySpec1D {
        SeparabilitySpec1D {
            dim: 2,
            projection: vec![1.0, 0.0],
            boundaries: vec![0.0, 1.0, 2.0],
            margin: 0.1,
            interval_labels: vec![1, 2],
            num_classes: 2,
        }
    }

    #[test]
    fn canonical_spec_validates() {
        well_formed_1d().validate().unwrap();
    }

    #[test]
    fn narrow_interval_rejected() {
        // Width 0.15 does not exceed 2 * 0.1.
        let spec = SeparabilitySpec1D {
            boundaries: vec![0.0, 0.15, 2.0],
            ..well_formed_1d()
        };
        assert_eq!(spec.validate(), Err(Error::DegenerateInterval { index: 0 }));
    }

    #[test]
    fn non_unit_projection_rejected() {
        let spec = SeparabilitySpec1D {
            projection: vec![2.0, 0.0],
            ..well_formed_1d()
        };
        assert_eq!(spec.validate(), Err(Error::NonUnitProjection { norm: 2.0 }));
    }

    #[test]
    fn unordered_boundaries_rejected() {
        let spec = SeparabilitySpec1D {
            boundaries: vec![0.0, 2.0, 1.0],
            ..well_formed_1d()
        };
        assert_eq!(spec.validate(), Err(Error::NonIncreasingBoundaries { index: 1 }));
    }

    #[test]
    fn margin_must_be_positive_and_finite() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let spec = SeparabilitySpec1D { margin: bad, ..well_formed_1d() };
            assert!(matches!(spec.validate(), Err(Error::NonPositiveMargin { .. })), "{bad}");
        }
    }

    #[test]
    fn label_range_and_count_checked() {
        let spec = SeparabilitySpec1D { interval_labels: vec![1, 3], ..well_formed_1d() };
        assert_eq!(spec.validate(), Err(Error::LabelOutOfRange { label: 3, num_classes: 2 }));

        let spec = SeparabilitySpec1D { interval_labels: vec![0, 1], ..well_formed_1d() };
        assert_eq!(spec.validate(), Err(Error::LabelOutOfRange { label: 0, num_classes: 2 }));

        let spec = SeparabilitySpec1D { interval_labels: vec![1], ..well_formed_1d() };
        assert_eq!(spec.validate(), Err(Error::LabelCountMismatch { expected: 2, actual: 1 }));
    }

    #[test]
    fn too_few_boundaries_rejected() {
        let spec = SeparabilitySpec1D {
            boundaries: vec![0.0],
            interval_labels: vec![],
            ..well_formed_1d()
        };
        assert_eq!(spec.validate(), Err(Error::TooFewBoundaries { count: 1 }));
    }

    #[test]
    fn non_finite_geometry_rejected() {
        let spec = SeparabilitySpec1D {
            boundaries: vec![0.0, f64::INFINITY, f64::NAN],
            ..well_formed_1d()
        };
        assert!(matches!(spec.validate(), Err(Error::NonFiniteValue { .. })));
    }

    #[test]
    fn spec_json_round_trips_with_expected_field_names() {
        let spec = well_formed_1d();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"a\":[1.0,0.0]"), "{json}");
        assert!(json.contains("\"interval_labels\""));
        let back: SeparabilitySpec1D = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn tagged_spec_enum_round_trips() {
        let spec = SeparabilitySpec::OneD(well_formed_1d());
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\":\"1d\""), "{json}");
        let back: SeparabilitySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    // ── Multi-axis specs ──

    fn well_formed_nd() -> SeparabilitySpecND {
        let mut labels = RegionLabelMap::new();
        for i in 1..=2usize {
            for j in 1..=2usize {
                labels.insert(vec![i, j], i + j - 1);
            }
        }
        SeparabilitySpecND {
            dim: 2,
            axes: vec![
                AxisSpec { projection: vec![1.0, 0.0], boundaries: vec![0.0, 1.0, 2.0] },
                AxisSpec { projection: vec![0.0, 1.0], boundaries: vec![0.0, 1.0, 2.0] },
            ],
            margin: 0.1,
            region_labels: labels,
            num_classes: 3,
        }
    }

    #[test]
    fn canonical_nd_spec_validates() {
        well_formed_nd().validate().unwrap();
    }

    #[test]
    fn axis_errors_are_attributed() {
        let mut spec = well_formed_nd();
        spec.axes[1].projection = vec![0.0, 2.0];
        match spec.validate() {
            Err(Error::InvalidAxis { axis: 2, source }) => {
                assert_eq!(*source, Error::NonUnitProjection { norm: 2.0 });
            }
            other => panic!("expected axis-2 failure, got {other:?}"),
        }
    }

    #[test]
    fn missing_region_label_detected() {
        let mut spec = well_formed_nd();
        spec.region_labels = RegionLabelMap::from_entries([
            (vec![1, 1], 1),
            (vec![1, 2], 2),
            (vec![2, 1], 2),
        ]);
        assert_eq!(spec.validate(), Err(Error::RegionLabelMissing { index: vec![2, 2] }));
    }

    #[test]
    fn unknown_region_label_detected() {
        let mut spec = well_formed_nd();
        spec.region_labels.insert(vec![3, 1], 1);
        assert_eq!(spec.validate(), Err(Error::RegionLabelUnknown { index: vec![3, 1] }));
    }

    #[test]
    fn region_map_serializes_to_comma_keys() {
        let spec = well_formed_nd();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"1,1\":1"), "{json}");
        assert!(json.contains("\"2,2\":3"), "{json}");
        let back: SeparabilitySpecND = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    // ── Label encodings ──

    #[test]
    fn one_hot_codes_are_basis_vectors() {
        let enc = LabelEncoding::one_hot(2).unwrap();
        assert_eq!(enc.code(1).unwrap(), vec![1.0, 0.0]);
        assert_eq!(enc.code(2).unwrap(), vec![0.0, 1.0]);
        assert_eq!(enc.entry(2, 0), 0.0);
        assert_eq!(enc.entry(2, 1), 1.0);

        let single = LabelEncoding::one_hot(1).unwrap();
        assert_eq!(single.code(1).unwrap(), vec![1.0]);
    }

    #[test]
    fn one_hot_stays_injective_at_large_class_counts() {
        // Symbolic storage: distinctness holds structurally; spot-check
        // entries rather than materializing 10^4 basis vectors.
        let enc = LabelEncoding::one_hot(10_000).unwrap();
        assert_eq!(enc.out_dim(), 10_000);
        for label in [1usize, 17, 9_999, 10_000] {
            for j in [0usize, 16, 9_999] {
                let expected = if j == label - 1 { 1.0 } else { 0.0 };
                assert_eq!(enc.entry(label, j), expected);
            }
        }
        assert!(enc.code(0).is_err());
        assert!(enc.code(10_001).is_err());
    }

    #[test]
    fn duplicate_codes_rejected() {
        let err = LabelEncoding::from_codes(vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(err, Err(Error::EncodingNotInjective { first: 1, second: 2 }));
    }

    #[test]
    fn scalar_codes_accepted() {
        let enc = LabelEncoding::from_codes(vec![vec![0.0], vec![3.0], vec![6.0]]).unwrap();
        assert_eq!(enc.num_classes(), 3);
        assert_eq!(enc.out_dim(), 1);
        assert!(!enc.is_one_hot());
        assert_eq!(enc.entry(2, 0), 3.0);
    }

    #[test]
    fn dataset_validation_checks_dimensions() {
        let ds = LabeledDataset {
            dim: 2,
            points: vec![LabeledPoint { x: vec![0.0, 1.0], y: 1 }, LabeledPoint { x: vec![0.0], y: 1 }],
            provenance: None,
        };
        assert_eq!(ds.validate(), Err(Error::DimensionMismatch { expected: 2, actual: 1 }));
    }

    // ── Properties ──

    proptest! {
        // Validation must accept exactly the boundary vectors whose
        // margined open intervals are all non-empty, no matter how the
        // gaps are perturbed.
        #[test]
        fn validation_matches_interval_emptiness(
            gaps in proptest::collection::vec(0.0f64..0.5, 1..8),
            margin in 0.01f64..0.2,
        ) {
            let mut boundaries = vec![0.0f64];
            for g in &gaps {
                boundaries.push(boundaries.last().unwrap() + g);
            }
            let k = boundaries.len() - 1;
            let spec = SeparabilitySpec1D {
                dim: 1,
                projection: vec![1.0],
                boundaries: boundaries.clone(),
                margin,
                interval_labels: vec![1; k],
                num_classes: 1,
            };
            let all_nonempty = gaps.iter().all(|&g| g > 2.0 * margin);
            prop_assert_eq!(spec.validate().is_ok(), all_nonempty);
        }

        // Explicit encodings built from distinct rows always validate
        // and reproduce their rows.
        #[test]
        fn explicit_encoding_round_trips(base in 0.0f64..10.0, n in 1usize..20) {
            let codes: Vec<Vec<f64>> = (0..n).map(|i| vec![base + i as f64]).collect();
            let enc = LabelEncoding::from_codes(codes.clone()).unwrap();
            for (i, code) in codes.iter().enumerate() {
                prop_assert_eq!(&enc.code(i + 1).unwrap(), code);
            }
        }
    }
}
