//! Constructive shallow classifiers for margin-separable data.
//!
//! If a distribution is separable — every point projects onto one or
//! more known directions strictly inside a labeled interval, with a
//! positive margin to spare — then a classifier with zero error on that
//! distribution can be *written down*, no training involved. This crate
//! implements the recipe end to end:
//!
//! - [`spec`]: the separability specifications, label encodings, and
//!   dataset types everything else exchanges;
//! - [`network`]: a numerically stable sigmoid kernel and forward
//!   evaluation of the built networks;
//! - [`construct`]: the closed-form builders — a 2-layer network per
//!   projection axis and a 4-layer composition for several axes — plus
//!   the sufficient-steepness formula that turns a target tolerance
//!   into a scaling factor;
//! - [`datagen`]: seeded samplers for distributions satisfying the
//!   specifications, and random specification generators;
//! - [`verify`]: membership oracles, analytic bound checks, evaluation
//!   reports, and the steepness sweep experiment.
//!
//! The guarantees are exact, not statistical: on any dataset drawn
//! within the margins, a sufficiently scaled construction classifies
//! every point correctly, and the evaluator checks the analytic
//! saturation/deviation bounds point by point.

pub mod construct;
pub mod datagen;
pub mod error;
pub mod network;
pub mod spec;
pub mod verify;

pub use construct::{
    build_four_layer, build_two_layer, output_weight_matrix, rank_spec_1d, region_rank,
    region_unrank, subnetwork_targets, sufficient_scaling, BuildMetadata, Construction,
    ScalingPolicy,
};
pub use datagen::{
    dataset_from_csv, dataset_to_csv, random_spec_1d, random_spec_nd, sample_1d, sample_nd,
    SamplerConfig,
};
pub use error::{Error, Result};
pub use network::{sigmoid, Activation, DenseLayer, SigmoidNetwork};
pub use spec::{
    AxisSpec, LabelEncoding, LabeledDataset, LabeledPoint, Provenance, RegionLabelMap,
    SeparabilitySpec, SeparabilitySpec1D, SeparabilitySpecND,
};
pub use verify::{
    evaluate, interval_lookup, oracle_agreement, region_lookup, sweep_scaling, sweep_to_csv,
    AgreementReport, BoundViolations, EvalReport, Placement, RegionPlacement, SpecView,
    SweepPoint, SweepResult,
};

/// Version of the library, embedded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
