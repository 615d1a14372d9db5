//! Error type shared across the crate.
//!
//! Every fallible operation returns [`Result`]. Variants carry enough
//! context (offending index, expected vs. actual size, ...) that callers
//! can report a problem without re-deriving it from the inputs.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating specifications,
/// building networks, sampling data, or evaluating models.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A projection vector is not unit-norm (within tolerance).
    NonUnitProjection { norm: f64 },
    /// Boundary values must be strictly increasing; the pair starting at
    /// `index` (0-based) is not.
    NonIncreasingBoundaries { index: usize },
    /// An interval is too narrow to hold a point at the stated margin:
    /// its width does not exceed `2 * margin`.
    DegenerateInterval { index: usize },
    /// Fewer than two boundary values, so there is no interval at all.
    TooFewBoundaries { count: usize },
    /// The separation margin must be strictly positive and finite.
    NonPositiveMargin { margin: f64 },
    /// A numeric field that must be finite is NaN or infinite.
    NonFiniteValue { what: String },
    /// A class label lies outside `1..=num_classes`.
    LabelOutOfRange { label: usize, num_classes: usize },
    /// The number of labels does not match the number of cells they
    /// are meant to cover.
    LabelCountMismatch { expected: usize, actual: usize },
    /// A class count of zero makes no sense.
    InvalidClassCount,
    /// Two distinct labels were assigned identical code vectors.
    EncodingNotInjective { first: usize, second: usize },
    /// A vector or matrix has the wrong size for the operation.
    DimensionMismatch { expected: usize, actual: usize },
    /// The operation needs a one-hot encoding but was given something else.
    NonOneHotEncoding,
    /// The approximation tolerance must be strictly positive.
    NonPositiveEpsilon { epsilon: f64 },
    /// An explicitly supplied scaling factor must be strictly positive
    /// and finite.
    NonPositiveScaling { c_s: f64 },
    /// An axis index (1-based) is outside the available axes.
    AxisOutOfRange { axis: usize, num_axes: usize },
    /// A per-axis cell index (1-based) is outside `1..=size`.
    IndexOutOfRange { axis: usize, index: usize, size: usize },
    /// An axis has no cells (an empty boundary list collapses to this).
    EmptyAxis { axis: usize },
    /// A region rank is outside `0..num_regions`.
    RankOutOfRange { rank: u64, num_regions: u64 },
    /// More projection axes were requested than the ambient dimension
    /// can hold orthonormally.
    AxesExceedDimension { axes: usize, dim: usize },
    /// The supplied axes are not pairwise orthonormal (within tolerance).
    AxesNotOrthonormal { first: usize, second: usize },
    /// A multi-axis region has no label assigned.
    RegionLabelMissing { index: Vec<usize> },
    /// A region label was supplied for a cell index that does not exist.
    RegionLabelUnknown { index: Vec<usize> },
    /// Validation of one axis of a multi-axis specification failed.
    InvalidAxis { axis: usize, source: Box<Error> },
    /// Sampler cell weights are unusable (wrong length, negative, or
    /// not summing to 1).
    InvalidWeights { reason: String },
    /// Sampler configuration is unusable (zero samples, negative or
    /// non-finite radius).
    InvalidSamplerConfig { reason: String },
    /// A network is structurally malformed (empty, ragged, mismatched
    /// layer chain, wrong output activation, ...).
    InvalidNetwork { reason: String },
    /// A sweep grid is unusable (empty, non-increasing, or non-positive).
    InvalidGrid { reason: String },
    /// A dataset file could not be parsed. `line` is 1-based.
    DatasetFormat { line: usize, reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonUnitProjection { norm } => {
                write!(f, "projection vector has norm {norm}, expected 1")
            }
            Error::NonIncreasingBoundaries { index } => {
                write!(f, "boundaries must be strictly increasing (violation at index {index})")
            }
            Error::DegenerateInterval { index } => {
                write!(f, "interval {index} is no wider than twice the margin")
            }
            Error::TooFewBoundaries { count } => {
                write!(f, "need at least 2 boundaries to form an interval, got {count}")
            }
            Error::NonPositiveMargin { margin } => {
                write!(f, "margin must be positive and finite, got {margin}")
            }
            Error::NonFiniteValue { what } => {
                write!(f, "{what} must contain only finite values")
            }
            Error::LabelOutOfRange { label, num_classes } => {
                write!(f, "label {label} outside 1..={num_classes}")
            }
            Error::LabelCountMismatch { expected, actual } => {
                write!(f, "expected {expected} labels, got {actual}")
            }
            Error::InvalidClassCount => write!(f, "number of classes must be at least 1"),
            Error::EncodingNotInjective { first, second } => {
                write!(f, "labels {first} and {second} share the same code vector")
            }
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::NonOneHotEncoding => {
                write!(f, "operation requires a one-hot label encoding")
            }
            Error::NonPositiveEpsilon { epsilon } => {
                write!(f, "tolerance must be positive, got {epsilon}")
            }
            Error::NonPositiveScaling { c_s } => {
                write!(f, "scaling factor must be positive and finite, got {c_s}")
            }
            Error::AxisOutOfRange { axis, num_axes } => {
                write!(f, "axis {axis} outside 1..={num_axes}")
            }
            Error::IndexOutOfRange { axis, index, size } => {
                write!(f, "cell index {index} on axis {axis} outside 1..={size}")
            }
            Error::EmptyAxis { axis } => write!(f, "axis {axis} has no cells"),
            Error::RankOutOfRange { rank, num_regions } => {
                write!(f, "region rank {rank} outside 0..{num_regions}")
            }
            Error::AxesExceedDimension { axes, dim } => {
                write!(f, "{axes} orthonormal axes cannot fit in dimension {dim}")
            }
            Error::AxesNotOrthonormal { first, second } => {
                write!(f, "axes {first} and {second} are not orthonormal")
            }
            Error::RegionLabelMissing { index } => {
                write!(f, "no label assigned to region {index:?}")
            }
            Error::RegionLabelUnknown { index } => {
                write!(f, "label assigned to nonexistent region {index:?}")
            }
            Error::InvalidAxis { axis, source } => {
                write!(f, "axis {axis}: {source}")
            }
            Error::InvalidWeights { reason } => write!(f, "invalid cell weights: {reason}"),
            Error::InvalidSamplerConfig { reason } => {
                write!(f, "invalid sampler configuration: {reason}")
            }
            Error::InvalidNetwork { reason } => write!(f, "invalid network: {reason}"),
            Error::InvalidGrid { reason } => write!(f, "invalid sweep grid: {reason}"),
            Error::DatasetFormat { line, reason } => {
                write!(f, "dataset line {line}: {reason}")
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::InvalidAxis { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
