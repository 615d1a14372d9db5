//! Membership oracles, analytic bound checkers, evaluation reports, and
//! the steepness sweep experiment.
//!
//! The oracles answer "which margined cell does this point occupy?"
//! straight from a specification, independently of any network; the
//! evaluator compares a network against them and against the analytic
//! saturation and deviation bounds of the 2-layer construction.

use serde::{Deserialize, Serialize};

use crate::construct::{build_two_layer, output_weight_matrix, sufficient_scaling, ScalingPolicy};
use crate::error::{Error, Result};
use crate::network::SigmoidNetwork;
use crate::spec::{dot, norm2, LabelEncoding, LabeledDataset, SeparabilitySpec1D, SeparabilitySpecND};

/// Absolute slack added to every analytic bound check: the bounds are
/// strict in exact arithmetic, floating point needs room to round.
pub const BOUND_SLACK: f64 = 1e-12;

/// Where a point's projection lands relative to one axis's margined
/// intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Placement {
    /// Strictly inside margined interval i (1-based).
    Interval(usize),
    /// Inside the support range but within the margin of a boundary.
    MarginBand,
    /// Outside [b₁, b_{k+1}] entirely.
    OutOfSupport,
}

/// Multi-axis analogue of [`Placement`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionPlacement {
    /// Strictly inside the margined region with this multi-index.
    Region(Vec<usize>),
    /// Inside the support box but within some axis's margin band.
    MarginBand,
    /// Outside the support box on at least one axis.
    OutOfSupport,
}

/// Places a projected coordinate among margined intervals by binary
/// search over the boundaries.
pub(crate) fn place_on_axis(boundaries: &[f64], margin: f64, proj: f64) -> Placement {
    let last = boundaries.len() - 1;
    if proj < boundaries[0] || proj > boundaries[last] {
        return Placement::OutOfSupport;
    }
    // Number of boundaries ≤ proj is ≥ 1 here; the candidate interval
    // is the one whose left boundary is the last of those.
    let idx = boundaries.partition_point(|&b| b <= proj);
    let cell = idx.saturating_sub(1).min(last - 1);
    if proj > boundaries[cell] + margin && proj < boundaries[cell + 1] - margin {
        Placement::Interval(cell + 1)
    } else {
        Placement::MarginBand
    }
}

/// Which margined interval contains `x`'s projection, if any.
pub fn interval_lookup(spec: &SeparabilitySpec1D, x: &[f64]) -> Result<Placement> {
    if x.len() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, actual: x.len() });
    }
    Ok(place_on_axis(&spec.boundaries, spec.margin, dot(&spec.projection, x)))
}

/// Which margined region contains `x`, if any. A point outside the
/// support box on any axis is OutOfSupport; otherwise a margin-band hit
/// on any axis makes the whole point MarginBand.
pub fn region_lookup(spec: &SeparabilitySpecND, x: &[f64]) -> Result<RegionPlacement> {
    if x.len() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, actual: x.len() });
    }
    let mut index = Vec::with_capacity(spec.num_axes());
    let mut in_band = false;
    for axis in &spec.axes {
        match place_on_axis(&axis.boundaries, spec.margin, dot(&axis.projection, x)) {
            Placement::OutOfSupport => return Ok(RegionPlacement::OutOfSupport),
            Placement::MarginBand => in_band = true,
            Placement::Interval(i) => index.push(i),
        }
    }
    if in_band {
        Ok(RegionPlacement::MarginBand)
    } else {
        Ok(RegionPlacement::Region(index))
    }
}

/// Counters for the three analytic bound checks run per in-support
/// point of a 2-layer evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundViolations {
    /// Hidden units left of (or at) the point's interval must saturate
    /// high: ρ > 1 − e^{−c_s·δ}.
    pub active_saturation: usize,
    /// Hidden units right of the interval must saturate low:
    /// ρ < e^{−c_s·δ}.
    pub inactive_saturation: usize,
    /// Worst output deviation must stay within
    /// max‖w_j‖₂·√k·e^{−c_s·δ} of the interval's code.
    pub output_error_bound: usize,
}

impl BoundViolations {
    pub fn total(&self) -> usize {
        self.active_saturation + self.inactive_saturation + self.output_error_bound
    }
}

/// Everything measured by one evaluation pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_points: usize,
    /// In-support points whose argmax prediction differs from their
    /// dataset label.
    pub n_misclassified: usize,
    /// Max over in-support points and output components of
    /// |g_j(x) − f_j(y)|.
    pub max_output_deviation: f64,
    pub bound_violations: BoundViolations,
    /// Tolerance the evaluation was asked to judge against (recorded,
    /// not enforced).
    pub epsilon_used: f64,
    /// Steepness recovered from the network's first layer; present only
    /// when a 1D specification enabled the bound checks.
    pub c_s_used: Option<f64>,
    /// Points skipped because they sit inside a margin band.
    pub n_margin_band: usize,
    /// Points skipped because they fall outside the support entirely.
    pub n_out_of_support: usize,
}

impl EvalReport {
    fn empty(n_points: usize, epsilon: f64, c_s: Option<f64>) -> Self {
        EvalReport {
            n_points,
            n_misclassified: 0,
            max_output_deviation: 0.0,
            bound_violations: BoundViolations::default(),
            epsilon_used: epsilon,
            c_s_used: c_s,
            n_margin_band: 0,
            n_out_of_support: 0,
        }
    }
}

/// Borrowed view of either specification flavor, for evaluation against
/// an oracle.
#[derive(Debug, Clone, Copy)]
pub enum SpecView<'a> {
    OneD(&'a SeparabilitySpec1D),
    Nd(&'a SeparabilitySpecND),
}

/// Bound-checking context recovered from a 2-layer network paired with
/// its 1D specification.
struct BoundContext<'a> {
    spec: &'a SeparabilitySpec1D,
    /// e^{−c_s·δ}: the saturation gap both hidden-unit checks use.
    saturation_gap: f64,
    /// max‖w_j‖₂·√k·e^{−c_s·δ}: cap on any output component's error.
    deviation_bound: f64,
    c_s: f64,
}

fn bound_context<'a>(
    net: &SigmoidNetwork,
    spec: &'a SeparabilitySpec1D,
) -> Result<BoundContext<'a>> {
    spec.validate()?;
    if spec.dim != net.input_dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim, actual: net.input_dim() });
    }
    if net.depth() != 2 {
        return Err(Error::InvalidNetwork {
            reason: format!(
                "saturation checks need the 2-layer construction, got {} layers",
                net.depth()
            ),
        });
    }
    let hidden = &net.layers()[0];
    let read_out = &net.layers()[1];
    let k = spec.num_intervals();
    if hidden.rows() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: hidden.rows() });
    }
    // The construction stores c_s·a in every hidden row and ‖a‖ = 1, so
    // the first row's norm recovers the steepness factor.
    let c_s = norm2(&hidden.weights[0]);
    let saturation_gap = (-c_s * spec.margin).exp();
    let max_norm = read_out.weights.iter().map(|row| norm2(row)).fold(0.0, f64::max);
    let deviation_bound = max_norm * (k as f64).sqrt() * saturation_gap;
    Ok(BoundContext { spec, saturation_gap, deviation_bound, c_s })
}

fn argmax_label(out: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in out.iter().enumerate() {
        if v > out[best] {
            best = j;
        }
    }
    best + 1
}

/// Evaluates a network over a dataset under a one-hot encoding.
///
/// Per point: forward output, worst-component deviation from the
/// label's code, and argmax classification. With a specification
/// supplied, each point is first placed by the membership oracle;
/// margin-band and out-of-support points are tallied separately and
/// excluded from every other statistic (the separability guarantees say
/// nothing about them). A 1D specification additionally switches on the
/// per-point saturation and deviation bound checks against the 2-layer
/// construction.
pub fn evaluate(
    net: &SigmoidNetwork,
    enc: &LabelEncoding,
    spec: Option<SpecView<'_>>,
    dataset: &LabeledDataset,
    epsilon: f64,
) -> Result<EvalReport> {
    net.validate()?;
    dataset.validate()?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::NonPositiveEpsilon { epsilon });
    }
    if !enc.is_one_hot() {
        return Err(Error::NonOneHotEncoding);
    }
    if net.output_dim() != enc.num_classes() {
        return Err(Error::DimensionMismatch {
            expected: enc.num_classes(),
            actual: net.output_dim(),
        });
    }
    if dataset.dim != net.input_dim() {
        return Err(Error::DimensionMismatch { expected: net.input_dim(), actual: dataset.dim });
    }

    let context = match spec {
        Some(SpecView::OneD(s)) => Some(bound_context(net, s)?),
        Some(SpecView::Nd(s)) => {
            s.validate()?;
            if s.dim != net.input_dim() {
                return Err(Error::DimensionMismatch { expected: s.dim, actual: net.input_dim() });
            }
            None
        }
        None => None,
    };

    let mut report =
        EvalReport::empty(dataset.len(), epsilon, context.as_ref().map(|c| c.c_s));
    for point in &dataset.points {
        // Placement first: flagged points contribute to their counters
        // and to nothing else.
        let mut interval = None;
        match spec {
            Some(SpecView::OneD(s)) => match interval_lookup(s, &point.x)? {
                Placement::Interval(i) => interval = Some(i),
                Placement::MarginBand => {
                    report.n_margin_band += 1;
                    continue;
                }
                Placement::OutOfSupport => {
                    report.n_out_of_support += 1;
                    continue;
                }
            },
            Some(SpecView::Nd(s)) => match region_lookup(s, &point.x)? {
                RegionPlacement::Region(_) => {}
                RegionPlacement::MarginBand => {
                    report.n_margin_band += 1;
                    continue;
                }
                RegionPlacement::OutOfSupport => {
                    report.n_out_of_support += 1;
                    continue;
                }
            },
            None => {}
        }

        if point.y > enc.num_classes() {
            return Err(Error::LabelOutOfRange {
                label: point.y,
                num_classes: enc.num_classes(),
            });
        }
        let out = net.forward(&point.x)?;
        let deviation = out
            .iter()
            .enumerate()
            .map(|(j, &g)| (g - enc.entry(point.y, j)).abs())
            .fold(0.0, f64::max);
        report.max_output_deviation = report.max_output_deviation.max(deviation);
        if argmax_label(&out) != point.y {
            report.n_misclassified += 1;
        }

        if let (Some(ctx), Some(i)) = (&context, interval) {
            let hidden = net.forward_prefix(&point.x, 1)?;
            for (l, &h) in hidden.iter().enumerate() {
                if l + 1 <= i {
                    if !(h > 1.0 - ctx.saturation_gap - BOUND_SLACK) {
                        report.bound_violations.active_saturation += 1;
                    }
                } else if !(h < ctx.saturation_gap + BOUND_SLACK) {
                    report.bound_violations.inactive_saturation += 1;
                }
            }
            // The deviation bound is stated against the interval's own
            // code — identical to the dataset label for sampler output,
            // but kept separate so mislabeled external data cannot fake
            // a violation.
            let interval_label = ctx.spec.interval_labels[i - 1];
            let bound_deviation = out
                .iter()
                .enumerate()
                .map(|(j, &g)| (g - enc.entry(interval_label, j)).abs())
                .fold(0.0, f64::max);
            if bound_deviation > ctx.deviation_bound + BOUND_SLACK {
                report.bound_violations.output_error_bound += 1;
            }
        }
    }
    Ok(report)
}

/// One row of a steepness sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub c_s: f64,
    pub n_misclassified: usize,
    pub max_deviation: f64,
    /// Analytic deviation cap max‖w_j‖₂·√k·e^{−c_s·δ} at this row's
    /// steepness.
    pub bound_max: f64,
}

/// A full sweep curve plus the sufficient steepness (at tolerance 1/2)
/// it should be compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub sufficient_c_s: f64,
}

/// Builds one 2-layer network per grid steepness (explicit policy),
/// evaluates each against the dataset and oracle, and reports the
/// misclassification curve with the analytic bound alongside.
pub fn sweep_scaling(
    spec: &SeparabilitySpec1D,
    enc: &LabelEncoding,
    dataset: &LabeledDataset,
    grid: &[f64],
) -> Result<SweepResult> {
    spec.validate()?;
    if grid.is_empty() {
        return Err(Error::InvalidGrid { reason: "no grid points".into() });
    }
    for (i, &c) in grid.iter().enumerate() {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidGrid {
                reason: format!("grid value {c} at position {i} is not a positive real"),
            });
        }
        if i > 0 && !(grid[i - 1] < c) {
            return Err(Error::InvalidGrid {
                reason: format!("grid must be strictly increasing at position {i}"),
            });
        }
    }

    let w = output_weight_matrix(spec, enc)?;
    let sufficient_c_s = sufficient_scaling(spec, &w, 0.5)?;
    let k = spec.num_intervals() as f64;

    let mut points = Vec::with_capacity(grid.len());
    for &c_s in grid {
        let built = build_two_layer(spec, enc, ScalingPolicy::Explicit(c_s))?;
        let max_norm = built
            .metadata
            .per_column_weight_norms
            .iter()
            .copied()
            .fold(0.0, f64::max);
        let report =
            evaluate(&built.network, enc, Some(SpecView::OneD(spec)), dataset, 0.5)?;
        points.push(SweepPoint {
            c_s,
            n_misclassified: report.n_misclassified,
            max_deviation: report.max_output_deviation,
            bound_max: max_norm * k.sqrt() * (-c_s * spec.margin).exp(),
        });
    }
    Ok(SweepResult { points, sufficient_c_s })
}

/// Renders a sweep as CSV: an annotation line carrying the sufficient
/// steepness, a header, then one row per grid point.
pub fn sweep_to_csv(result: &SweepResult) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "# sufficient_c_s,{:.16e}", result.sufficient_c_s);
    out.push_str("c_s,n_misclassified,max_deviation,bound_max\n");
    for p in &result.points {
        let _ = writeln!(
            out,
            "{:.16e},{},{:.16e},{:.16e}",
            p.c_s, p.n_misclassified, p.max_deviation, p.bound_max
        );
    }
    out
}

/// Agreement between a network's predictions and the membership
/// oracle's labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    /// Fraction of in-support points classified to the oracle's label;
    /// 1.0 when no point is in support (vacuous agreement).
    pub agreement: f64,
    pub n_in_support: usize,
    pub n_margin_band: usize,
    pub n_out_of_support: usize,
}

/// Compares argmax classification against the specification's own label
/// assignment (not the dataset's), point by point. Flagged points are
/// counted but excluded from the fraction.
pub fn oracle_agreement(
    net: &SigmoidNetwork,
    enc: &LabelEncoding,
    spec: SpecView<'_>,
    dataset: &LabeledDataset,
) -> Result<AgreementReport> {
    net.validate()?;
    dataset.validate()?;
    if !enc.is_one_hot() {
        return Err(Error::NonOneHotEncoding);
    }
    if net.output_dim() != enc.num_classes() {
        return Err(Error::DimensionMismatch {
            expected: enc.num_classes(),
            actual: net.output_dim(),
        });
    }
    if dataset.dim != net.input_dim() {
        return Err(Error::DimensionMismatch { expected: net.input_dim(), actual: dataset.dim });
    }
    match spec {
        SpecView::OneD(s) => s.validate()?,
        SpecView::Nd(s) => s.validate()?,
    }

    let mut report = AgreementReport {
        agreement: 1.0,
        n_in_support: 0,
        n_margin_band: 0,
        n_out_of_support: 0,
    };
    let mut agreeing = 0usize;
    for point in &dataset.points {
        let oracle_label = match spec {
            SpecView::OneD(s) => match interval_lookup(s, &point.x)? {
                Placement::Interval(i) => s.interval_labels[i - 1],
                Placement::MarginBand => {
                    report.n_margin_band += 1;
                    continue;
                }
                Placement::OutOfSupport => {
                    report.n_out_of_support += 1;
                    continue;
                }
            },
            SpecView::Nd(s) => match region_lookup(s, &point.x)? {
                RegionPlacement::Region(index) => s
                    .region_labels
                    .get(&index)
                    .ok_or(Error::RegionLabelMissing { index })?,
                RegionPlacement::MarginBand => {
                    report.n_margin_band += 1;
                    continue;
                }
                RegionPlacement::OutOfSupport => {
                    report.n_out_of_support += 1;
                    continue;
                }
            },
        };
        report.n_in_support += 1;
        let out = net.forward(&point.x)?;
        if argmax_label(&out) == oracle_label {
            agreeing += 1;
        }
    }
    if report.n_in_support > 0 {
        report.agreement = agreeing as f64 / report.n_in_support as f64;
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
