//! `sepnet` command line: generate margin-separated datasets, construct
//! sigmoid classifiers for them in closed form, and check the
//! guarantees.
//!
//! Subcommands mirror the library's stages: `gen` writes a random
//! specification plus a dataset drawn from it, `build` turns a
//! specification into a network, `eval` scores a network against a
//! dataset (and, with the specification, against the analytic bounds),
//! and `sweep` traces the misclassification curve over a steepness
//! grid.
//!
//! Every artifact is written atomically (temp file + rename) and is
//! accompanied by a `<name>.manifest.json` recording the exact
//! invocation, inputs, outputs, library version, and wall-clock
//! duration, so each file is reproducible from its manifest alone.
//!
//! Exit codes: 0 on success; 2 for flag or input validation failures
//! (the message names the offending flag); 3 for inconsistencies
//! between otherwise-valid artifacts, such as a model/dataset dimension
//! mismatch. Seeds come exclusively from `--seed`; environment
//! variables are never consulted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sepnet::{
    build_four_layer, build_two_layer, dataset_from_csv, dataset_to_csv, evaluate, sample_1d,
    sample_nd, random_spec_1d, random_spec_nd, sweep_scaling, sweep_to_csv, Error,
    LabelEncoding, LabeledDataset, SamplerConfig, ScalingPolicy, SeparabilitySpec,
    SigmoidNetwork, SpecView,
};

#[derive(Parser)]
#[command(
    name = "sepnet",
    version,
    about = "Closed-form sigmoid classifiers for margin-separated data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random specification and a dataset drawn from it.
    Gen(GenArgs),
    /// Construct a classifier network from a specification file.
    Build(BuildArgs),
    /// Evaluate a model on a dataset and write the report.
    Eval(EvalArgs),
    /// Trace misclassifications over a grid of steepness factors.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Specification family: one projection axis (1d) or several (nd).
    #[arg(long, value_parser = ["1d", "nd"])]
    mode: String,
    /// Ambient dimension of the generated points.
    #[arg(long)]
    dim: usize,
    /// Number of intervals along the axis (1d mode only).
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated interval counts per axis (nd mode only).
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    /// Number of classes labels are drawn from.
    #[arg(long)]
    classes: usize,
    /// Margin carved out of both ends of every interval.
    #[arg(long)]
    delta: f64,
    /// Number of points to sample.
    #[arg(long)]
    n: usize,
    /// RNG seed; the sole source of randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radius of the noise ball orthogonal to the projection axes.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Where to write the specification JSON.
    #[arg(long)]
    out_spec: PathBuf,
    /// Where to write the dataset CSV.
    #[arg(long)]
    out_data: PathBuf,
}

/// Exactly one way of choosing the hidden-layer steepness.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Steepness {
    /// Output tolerance; the build derives the sufficient steepness.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Explicit steepness factor (single-axis constructions only).
    #[arg(long)]
    cs: Option<f64>,
}

#[derive(Args)]
struct BuildArgs {
    /// Specification JSON to construct from.
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    steepness: Steepness,
    /// Where to write the model JSON (metadata lands next to it).
    #[arg(long)]
    out_model: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Model JSON to evaluate.
    #[arg(long)]
    model: PathBuf,
    /// Dataset CSV to evaluate on.
    #[arg(long)]
    data: PathBuf,
    /// Specification JSON; enables membership placement and, for
    /// single-axis models, the saturation/deviation bound checks.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Tolerance recorded in the report (1/2 suffices for one-hot
    /// classification).
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Where to write the report JSON.
    #[arg(long)]
    out_report: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Single-axis specification JSON the sweep rebuilds from.
    #[arg(long)]
    spec: PathBuf,
    /// Dataset CSV each grid point is evaluated on.
    #[arg(long)]
    data: PathBuf,
    /// Steepness grid as lo:hi:step, inclusive of hi when it lies on
    /// the grid (within 1e-9).
    #[arg(long)]
    grid: String,
    /// Where to write the curve CSV.
    #[arg(long)]
    out_csv: PathBuf,
}

// ---------------------------------------------------------------------------
// Failure plumbing
// ---------------------------------------------------------------------------

/// A command failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

/// Flag or input validation failure (exit 2).
fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Cross-artifact inconsistency (exit 3).
fn inconsistency(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

/// Library errors raised while combining already-loaded artifacts:
/// shape and label-range clashes are inconsistencies, the rest are
/// validation failures.
fn artifact_error(context: &str, err: Error) -> Failure {
    match err {
        Error::DimensionMismatch { .. }
        | Error::LabelOutOfRange { .. }
        | Error::InvalidNetwork { .. } => inconsistency(format!("{context}: {err}")),
        other => usage(format!("{context}: {other}")),
    }
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

/// Writes via a temp file in the target directory plus an atomic
/// rename, so readers never observe a partial artifact.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    use std::io::Write as _;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |err: &dyn std::fmt::Display| usage(format!("cannot write {}: {err}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| fail(&e))?;
    // Temp files are born 0600; artifacts should be as readable as any
    // ordinarily created file.
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt as _;
        let perms = std::fs::Permissions::from_mode(0o644);
        tmp.as_file().set_permissions(perms).map_err(|e| fail(&e))?;
    }
    tmp.persist(path).map_err(|e| fail(&e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn read_file(path: &Path, flag: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("{flag} {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, flag: &str) -> Result<T, Failure> {
    serde_json::from_str(&read_file(path, flag)?)
        .map_err(|e| usage(format!("{flag} {}: {e}", path.display())))
}

fn pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable artifact");
    text.push('\n');
    text
}

/// `<path><suffix>`, e.g. `model.json` → `model.json.manifest.json`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

// ---------------------------------------------------------------------------
// Run manifests
// ---------------------------------------------------------------------------

/// Reproducibility record written alongside every artifact.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    argv: Vec<String>,
    seed: Option<u64>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    library_version: String,
    duration_ms: u64,
}

/// Writes one manifest next to each primary artifact. `outputs` lists
/// everything the run produced (secondary files included); only the
/// primary artifacts get manifests of their own.
fn write_manifests(
    command: &str,
    seed: Option<u64>,
    inputs: &[&Path],
    artifacts: &[&Path],
    all_outputs: &[&Path],
    started: Instant,
) -> Result<(), Failure> {
    let manifest = RunManifest {
        command: command.to_string(),
        argv: std::env::args().skip(1).collect(),
        seed,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: all_outputs.iter().map(|p| p.display().to_string()).collect(),
        library_version: sepnet::VERSION.to_string(),
        duration_ms: started.elapsed().as_millis() as u64,
    };
    let text = pretty_json(&manifest);
    for artifact in artifacts {
        write_atomic(&sibling(artifact, ".manifest.json"), &text)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Flag-facing rewording of generation errors.
fn gen_error(err: Error) -> Failure {
    let message = match &err {
        Error::AxesExceedDimension { axes, dim } => {
            format!("--ks lists {axes} axes but --dim is {dim}: axes may not outnumber dimensions")
        }
        Error::NonPositiveMargin { margin } => {
            format!("--delta must be positive and finite, got {margin}")
        }
        Error::InvalidClassCount => "--classes must be at least 1".to_string(),
        Error::TooFewBoundaries { .. } => "--k must be at least 1".to_string(),
        Error::EmptyAxis { axis } => format!("--ks entry {axis} must be at least 1"),
        Error::InvalidSamplerConfig { reason } => format!("--n/--radius: {reason}"),
        other => other.to_string(),
    };
    usage(message)
}

fn cmd_gen(args: &GenArgs, started: Instant) -> Result<(), Failure> {
    let spec = match args.mode.as_str() {
        "1d" => {
            if args.ks.is_some() {
                return Err(usage("--ks applies to --mode nd only; use --k"));
            }
            let k = args.k.ok_or_else(|| usage("--k is required in --mode 1d"))?;
            SeparabilitySpec::OneD(
                random_spec_1d(args.dim, k, args.classes, args.delta, args.seed)
                    .map_err(gen_error)?,
            )
        }
        _ => {
            if args.k.is_some() {
                return Err(usage("--k applies to --mode 1d only; use --ks"));
            }
            let ks = args.ks.as_deref().ok_or_else(|| usage("--ks is required in --mode nd"))?;
            SeparabilitySpec::Nd(
                random_spec_nd(args.dim, ks, args.classes, args.delta, args.seed)
                    .map_err(gen_error)?,
            )
        }
    };

    // Decorrelate the sampling stream from the specification stream
    // while keeping both a pure function of --seed.
    let cfg = SamplerConfig {
        seed: args.seed ^ 0x9E37_79B9_7F4A_7C15,
        n_samples: args.n,
        orth_radius: args.radius,
        interval_weights: None,
    };
    let data = match &spec {
        SeparabilitySpec::OneD(s) => sample_1d(s, &cfg),
        SeparabilitySpec::Nd(s) => sample_nd(s, &cfg),
    }
    .map_err(gen_error)?;

    write_atomic(&args.out_spec, &pretty_json(&spec))?;
    write_atomic(&args.out_data, &dataset_to_csv(&data))?;
    write_manifests(
        "gen",
        Some(args.seed),
        &[],
        &[&args.out_spec, &args.out_data],
        &[&args.out_spec, &args.out_data],
        started,
    )
}

fn cmd_build(args: &BuildArgs, started: Instant) -> Result<(), Failure> {
    let spec: SeparabilitySpec = read_json(&args.spec, "--spec")?;
    spec.validate()
        .map_err(|e| usage(format!("--spec {}: {e}", args.spec.display())))?;
    let enc = LabelEncoding::one_hot(spec.num_classes())
        .map_err(|e| usage(format!("--spec {}: {e}", args.spec.display())))?;

    let built = match (&spec, args.steepness.epsilon, args.steepness.cs) {
        (SeparabilitySpec::OneD(s), Some(eps), None) => {
            build_two_layer(s, &enc, ScalingPolicy::SufficientForEpsilon(eps))
        }
        (SeparabilitySpec::OneD(s), None, Some(cs)) => {
            build_two_layer(s, &enc, ScalingPolicy::Explicit(cs))
        }
        (SeparabilitySpec::Nd(s), Some(eps), None) => build_four_layer(s, &enc, eps),
        (SeparabilitySpec::Nd(_), None, Some(_)) => {
            return Err(usage(
                "--cs applies only to single-axis specifications; \
                 multi-axis constructions derive their stage scalings from --epsilon",
            ));
        }
        // The Steepness group guarantees exactly one flag.
        _ => unreachable!("clap enforces exactly one steepness flag"),
    }
    .map_err(|e| usage(format!("--spec {}: {e}", args.spec.display())))?;

    let metadata_path = sibling(&args.out_model, ".metadata.json");
    write_atomic(&args.out_model, &pretty_json(&built.network))?;
    write_atomic(&metadata_path, &pretty_json(&built.metadata))?;
    write_manifests(
        "build",
        None,
        &[&args.spec],
        &[&args.out_model],
        &[&args.out_model, &metadata_path],
        started,
    )
}

fn cmd_eval(args: &EvalArgs, started: Instant) -> Result<(), Failure> {
    let net: SigmoidNetwork = read_json(&args.model, "--model")?;
    net.validate()
        .map_err(|e| usage(format!("--model {}: {e}", args.model.display())))?;
    let data: LabeledDataset = dataset_from_csv(&read_file(&args.data, "--data")?)
        .map_err(|e| usage(format!("--data {}: {e}", args.data.display())))?;

    if net.input_dim() != data.dim {
        return Err(inconsistency(format!(
            "--model expects {}-dimensional inputs but --data holds {}-dimensional points",
            net.input_dim(),
            data.dim
        )));
    }

    let spec: Option<SeparabilitySpec> = match &args.spec {
        Some(path) => {
            let spec: SeparabilitySpec = read_json(path, "--spec")?;
            spec.validate().map_err(|e| usage(format!("--spec {}: {e}", path.display())))?;
            if spec.dim() != data.dim {
                return Err(inconsistency(format!(
                    "--spec is {}-dimensional but --data holds {}-dimensional points",
                    spec.dim(),
                    data.dim
                )));
            }
            if spec.num_classes() != net.output_dim() {
                return Err(inconsistency(format!(
                    "--spec declares {} classes but --model emits {} outputs",
                    spec.num_classes(),
                    net.output_dim()
                )));
            }
            Some(spec)
        }
        None => None,
    };

    let enc = LabelEncoding::one_hot(net.output_dim())
        .map_err(|e| usage(format!("--model {}: {e}", args.model.display())))?;
    let view = spec.as_ref().map(|s| match s {
        SeparabilitySpec::OneD(s) => SpecView::OneD(s),
        SeparabilitySpec::Nd(s) => SpecView::Nd(s),
    });
    let report = evaluate(&net, &enc, view, &data, args.epsilon)
        .map_err(|e| artifact_error("--model/--data/--spec", e))?;

    write_atomic(&args.out_report, &pretty_json(&report))?;
    let mut inputs: Vec<&Path> = vec![&args.model, &args.data];
    if let Some(path) = &args.spec {
        inputs.push(path);
    }
    write_manifests("eval", None, &inputs, &[&args.out_report], &[&args.out_report], started)
}

/// Parses `lo:hi:step` into an inclusive grid. `hi` joins the grid when
/// `(hi - lo)` is an integer multiple of `step` within 1e-9.
fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| usage(format!("--grid {text:?}: {why}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(bad("expected lo:hi:step"));
    };
    let parse = |s: &str, what: &str| {
        s.parse::<f64>().map_err(|_| bad(&format!("{what} {s:?} is not a number")))
    };
    let (lo, hi, step) = (parse(lo, "lo")?, parse(hi, "hi")?, parse(step, "step")?);
    if !lo.is_finite() || !hi.is_finite() || !step.is_finite() {
        return Err(bad("values must be finite"));
    }
    if lo <= 0.0 {
        return Err(bad("lo must be positive (steepness factors are positive)"));
    }
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    if hi < lo {
        return Err(bad("hi must be at least lo"));
    }
    let span = hi - lo;
    let ratio = span / step;
    let count = if (span - ratio.round() * step).abs() <= 1e-9 {
        ratio.round() as usize
    } else {
        ratio.floor() as usize
    };
    Ok((0..=count).map(|i| lo + step * i as f64).collect())
}

fn cmd_sweep(args: &SweepArgs, started: Instant) -> Result<(), Failure> {
    let spec: SeparabilitySpec = read_json(&args.spec, "--spec")?;
    spec.validate()
        .map_err(|e| usage(format!("--spec {}: {e}", args.spec.display())))?;
    let SeparabilitySpec::OneD(spec) = spec else {
        return Err(usage(format!(
            "--spec {}: steepness sweeps require a single-axis specification",
            args.spec.display()
        )));
    };
    let data: LabeledDataset = dataset_from_csv(&read_file(&args.data, "--data")?)
        .map_err(|e| usage(format!("--data {}: {e}", args.data.display())))?;
    if spec.dim != data.dim {
        return Err(inconsistency(format!(
            "--spec is {}-dimensional but --data holds {}-dimensional points",
            spec.dim, data.dim
        )));
    }
    let grid = parse_grid(&args.grid)?;
    let enc = LabelEncoding::one_hot(spec.num_classes)
        .map_err(|e| usage(format!("--spec {}: {e}", args.spec.display())))?;
    let result = sweep_scaling(&spec, &enc, &data, &grid)
        .map_err(|e| artifact_error("--spec/--data", e))?;

    write_atomic(&args.out_csv, &sweep_to_csv(&result))?;
    write_manifests(
        "sweep",
        None,
        &[&args.spec, &args.data],
        &[&args.out_csv],
        &[&args.out_csv],
        started,
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Gen(args) => cmd_gen(args, started),
        Command::Build(args) => cmd_build(args, started),
        Command::Eval(args) => cmd_eval(args, started),
        Command::Sweep(args) => cmd_sweep(args, started),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
