//! End-to-end pipeline tests: generate → construct → evaluate, plus the
//! cross-module consistency checks that only make sense above any single
//! module (rank oracles vs. geometric lookups, serialized round-trips,
//! large-sample margin soundness).

use sepnet::{
    build_four_layer, build_two_layer, dataset_from_csv, dataset_to_csv, evaluate,
    interval_lookup, oracle_agreement, random_spec_1d, random_spec_nd, rank_spec_1d,
    region_lookup, region_rank, sample_1d, sample_nd, sweep_scaling, sufficient_scaling,
    EvalReport, LabelEncoding, Placement, RegionPlacement, SamplerConfig, ScalingPolicy,
    SeparabilitySpec, SigmoidNetwork, SpecView,
};

fn sampler(seed: u64, n_samples: usize) -> SamplerConfig {
    SamplerConfig { seed, n_samples, orth_radius: 1.0, interval_weights: None }
}

/// Asserts the strongest form of the construction guarantee: nothing is
/// misclassified, nothing is flagged, every analytic bound holds, and
/// deviations stay within the requested tolerance.
fn assert_clean(report: &EvalReport, epsilon: f64) {
    assert_eq!(report.n_misclassified, 0, "{report:?}");
    assert_eq!(report.bound_violations.total(), 0, "{report:?}");
    assert_eq!(report.n_margin_band, 0, "{report:?}");
    assert_eq!(report.n_out_of_support, 0, "{report:?}");
    assert!(report.max_output_deviation <= epsilon, "{report:?}");
}

// ── Zero-error guarantees end to end ──

#[test]
fn two_layer_pipeline_is_exact_end_to_end() {
    let spec = random_spec_1d(3, 7, 4, 0.05, 11).unwrap();
    let data = sample_1d(&spec, &sampler(12, 2000)).unwrap();
    let enc = LabelEncoding::one_hot(spec.num_classes).unwrap();
    let built = build_two_layer(&spec, &enc, ScalingPolicy::SufficientForEpsilon(0.5)).unwrap();

    let report =
        evaluate(&built.network, &enc, Some(SpecView::OneD(&spec)), &data, 0.5).unwrap();
    assert_eq!(report.n_points, 2000);
    assert_clean(&report, 0.5);
    assert_eq!(report.c_s_used.map(|c| c.round()), Some(built.metadata.c_s_used.round()));

    let agreement = oracle_agreement(&built.network, &enc, SpecView::OneD(&spec), &data).unwrap();
    assert_eq!(agreement.agreement, 1.0);
}

#[test]
fn four_layer_pipeline_is_exact_end_to_end() {
    let spec = random_spec_nd(4, &[3, 2, 4], 6, 0.05, 13).unwrap();
    let data = sample_nd(&spec, &sampler(14, 1500)).unwrap();
    let enc = LabelEncoding::one_hot(spec.num_classes).unwrap();
    let built = build_four_layer(&spec, &enc, 0.5).unwrap();

    let report = evaluate(&built.network, &enc, Some(SpecView::Nd(&spec)), &data, 0.5).unwrap();
    assert_eq!(report.n_points, 1500);
    assert_eq!(report.n_misclassified, 0, "{report:?}");
    assert_eq!(report.n_margin_band, 0);
    assert_eq!(report.n_out_of_support, 0);
    assert!(report.max_output_deviation <= 0.5, "{report:?}");
    // Saturation bound checks are defined for the 2-layer shape only.
    assert_eq!(report.c_s_used, None);

    let agreement = oracle_agreement(&built.network, &enc, SpecView::Nd(&spec), &data).unwrap();
    assert_eq!(agreement.agreement, 1.0);
    assert_eq!(agreement.n_in_support, 1500);
}

// ── Cross-oracle consistency ──

/// The geometric region lookup and the network's inner stage must tell
/// the same story: ranking the looked-up region index lands the scalar
/// projection of the inner outputs in exactly that interval of the
/// derived rank specification.
#[test]
fn rank_oracles_stay_consistent_on_sampled_data() {
    let spec = random_spec_nd(3, &[3, 4], 12, 0.1, 21).unwrap();
    let data = sample_nd(&spec, &sampler(22, 800)).unwrap();
    let enc = LabelEncoding::one_hot(spec.num_classes).unwrap();
    let built = build_four_layer(&spec, &enc, 0.5).unwrap();
    let rank_spec = rank_spec_1d(&spec).unwrap();
    let sizes = spec.axis_sizes();

    for point in &data.points {
        let index = match region_lookup(&spec, &point.x).unwrap() {
            RegionPlacement::Region(index) => index,
            other => panic!("sampled point not in a region: {other:?}"),
        };
        let rank = region_rank(&sizes, &index).unwrap();
        // Inner outputs: forward through the two layers of the stacked
        // scalar subnetworks.
        let inner = built.network.forward_prefix(&point.x, 2).unwrap();
        match interval_lookup(&rank_spec, &inner).unwrap() {
            Placement::Interval(i) => assert_eq!(i as u64, rank + 1),
            other => panic!("inner projection escaped its rank interval: {other:?}"),
        }
    }
}

// ── Margin soundness at scale ──

/// Every point emitted by the samplers must land strictly inside one
/// margined interval/region according to the independent geometric
/// lookups — one million points across assorted shapes.
#[test]
fn sampling_respects_margins_over_a_million_points() {
    let one_d = [
        (2usize, 20usize, 10usize, 0.1, 300_000usize),
        (5, 5, 2, 0.01, 200_000),
        (1, 2, 2, 1.0, 100_000),
    ];
    for (round, (dim, k, classes, margin, n)) in one_d.into_iter().enumerate() {
        let seed = 100 + round as u64;
        let spec = random_spec_1d(dim, k, classes, margin, seed).unwrap();
        let data = sample_1d(&spec, &sampler(seed + 50, n)).unwrap();
        for point in &data.points {
            match interval_lookup(&spec, &point.x).unwrap() {
                Placement::Interval(i) => {
                    assert_eq!(spec.interval_labels[i - 1], point.y);
                }
                other => panic!("margin violation ({dim},{k},{margin}): {other:?}"),
            }
        }
    }

    let n_d: [(usize, Vec<usize>, usize, f64, usize); 2] = [
        (3, vec![3, 2], 6, 0.05, 200_000),
        (2, vec![4, 5], 3, 0.1, 200_000),
    ];
    for (round, (dim, sizes, classes, margin, n)) in n_d.into_iter().enumerate() {
        let seed = 200 + round as u64;
        let spec = random_spec_nd(dim, &sizes, classes, margin, seed).unwrap();
        let data = sample_nd(&spec, &sampler(seed + 50, n)).unwrap();
        for point in &data.points {
            match region_lookup(&spec, &point.x).unwrap() {
                RegionPlacement::Region(index) => {
                    assert_eq!(spec.region_labels.get(&index), Some(point.y));
                }
                other => panic!("margin violation ({dim},{sizes:?},{margin}): {other:?}"),
            }
        }
    }
}

// ── Serialized artifact round-trips ──

#[test]
fn file_formats_round_trip_bit_exactly() {
    let spec_1d = random_spec_1d(2, 20, 10, 0.1, 7).unwrap();
    let spec_nd = random_spec_nd(2, &[3, 4], 12, 0.1, 8).unwrap();
    let data = sample_1d(&spec_1d, &sampler(9, 500)).unwrap();
    let enc = LabelEncoding::one_hot(spec_1d.num_classes).unwrap();
    let built = build_two_layer(&spec_1d, &enc, ScalingPolicy::SufficientForEpsilon(0.5)).unwrap();
    let report =
        evaluate(&built.network, &enc, Some(SpecView::OneD(&spec_1d)), &data, 0.5).unwrap();

    // Tagged spec JSON, both variants.
    for spec in [SeparabilitySpec::OneD(spec_1d.clone()), SeparabilitySpec::Nd(spec_nd)] {
        let text = serde_json::to_string_pretty(&spec).unwrap();
        let back: SeparabilitySpec = serde_json::from_str(&text).unwrap();
        back.validate().unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    // Dataset CSV.
    let csv = dataset_to_csv(&data);
    let back = dataset_from_csv(&csv).unwrap();
    assert_eq!(dataset_to_csv(&back), csv);
    assert_eq!(back.points, data.points);

    // Model JSON.
    let model_text = serde_json::to_string_pretty(&built.network).unwrap();
    let model_back: SigmoidNetwork = serde_json::from_str(&model_text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&model_back).unwrap(), model_text);
    assert_eq!(model_back.forward(&data.points[0].x).unwrap(), built
        .network
        .forward(&data.points[0].x)
        .unwrap());

    // Report JSON.
    let report_text = serde_json::to_string_pretty(&report).unwrap();
    let report_back: EvalReport = serde_json::from_str(&report_text).unwrap();
    assert_eq!(report_back, report);
}

// ── Steepness below sufficient: failures appear and then vanish ──

#[test]
fn insufficient_steepness_shows_up_in_the_sweep() {
    let spec = random_spec_1d(2, 20, 10, 0.1, 7).unwrap();
    let data = sample_1d(&spec, &sampler(70, 6000)).unwrap();
    let enc = LabelEncoding::one_hot(spec.num_classes).unwrap();

    // A deliberately shallow slope misclassifies.
    let shallow = build_two_layer(&spec, &enc, ScalingPolicy::Explicit(0.5)).unwrap();
    let report =
        evaluate(&shallow.network, &enc, Some(SpecView::OneD(&spec)), &data, 0.5).unwrap();
    assert!(report.n_misclassified > 0, "{report:?}");

    // Sweeping the slope: errors vanish at some threshold at or below
    // the analytically sufficient value and stay at zero from there on.
    let grid: Vec<f64> = (1..=24).map(|i| 0.5 * i as f64).collect();
    let sweep = sweep_scaling(&spec, &enc, &data, &grid).unwrap();
    assert_eq!(sweep.points.len(), grid.len());
    assert!(sweep.points[0].n_misclassified > 0);

    let threshold = sweep
        .points
        .iter()
        .find(|p| p.n_misclassified == 0)
        .map(|p| p.c_s)
        .expect("sweep never reached zero errors");
    assert!(threshold <= sweep.sufficient_c_s, "{threshold} vs {}", sweep.sufficient_c_s);
    for point in sweep.points.iter().filter(|p| p.c_s >= threshold) {
        assert_eq!(point.n_misclassified, 0, "regression above threshold: {point:?}");
    }

    // The annotation value matches an independent recomputation from the
    // spec's own output weights.
    let w = sepnet::output_weight_matrix(&spec, &enc).unwrap();
    let sufficient = sufficient_scaling(&spec, &w, 0.5).unwrap();
    assert!((sweep.sufficient_c_s - sufficient).abs() < 1e-12);
}
