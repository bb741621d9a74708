//! Command-line front end: signature, classification, frame extraction,
//! curvature reports, and the randomized selftest suites.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 degenerate or
//! wrong-signature input, 3 unsupported request, 4 invalid arguments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use milnor::curvature::{classify_curvature, CurvatureOptions};
use milnor::forms::SignatureMatrix;
use milnor::frames::{milnor_frame, rahmani_form, rahmani_residual, verify_frame};
use milnor::lie::Family;
use milnor::reduce::{reduce_metric, synthesize_metric};
use milnor::report::{
    matrix_rows, AlgebraSpec, CurvatureSection, FrameSection, ProblemSpec, RahmaniSection, Report,
};
use milnor::{Error, MetricTensor};

#[derive(Parser)]
#[command(name = "milnor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON problem description (algebra + metric + options).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Residual tolerance (overrides the input file's options.tol).
    #[arg(long)]
    tol: Option<f64>,
    /// RNG seed for sampling classifiers.
    #[arg(long)]
    seed: Option<u64>,
    /// Sample count for sampling classifiers.
    #[arg(long)]
    samples: Option<usize>,
    /// Emit compact JSON (the default).
    #[arg(long)]
    json: bool,
    /// Emit pretty-printed JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct SynthesizeArgs {
    /// Build the test metric for this orbit label instead of reading one.
    #[arg(long, value_name = "LAMBDA")]
    synthesize: Option<u8>,
    /// Builtin algebra for --synthesize: "rhn" or "heisenberg3".
    #[arg(long)]
    algebra: Option<String>,
    /// Positive part of the signature for --synthesize (rhn only).
    #[arg(long)]
    p: Option<usize>,
    /// Negative part of the signature for --synthesize (rhn only).
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Signature (p,q) of the input metric.
    Signature(CommonArgs),
    /// Orbit label lambda, scaling k, and canonical representative.
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        synth: SynthesizeArgs,
    },
    /// Milnor frame with verified bracket relations.
    Frame(CommonArgs),
    /// Full curvature report with classification flags.
    Curvature(CommonArgs),
    /// Run every randomized invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Override every suite threshold (for failure-path testing).
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateMetric(_)
        | Error::UnsupportedSignature(_, _)
        | Error::ZeroPair
        | Error::DegeneratePlane => 2,
        Error::UnsupportedAlgebra => 3,
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::NotSymmetric(_, _) => 4,
        Error::SingularMatrix | Error::Inconsistency(_) => 1,
    }
}

fn load_spec(common: &CommonArgs) -> Result<ProblemSpec, (u8, String)> {
    let path = common
        .input
        .as_ref()
        .ok_or((4u8, "missing --input".to_string()))?;
    let text = std::fs::read_to_string(path).map_err(|e| (4, format!("cannot read input: {e}")))?;
    let mut spec: ProblemSpec =
        serde_json::from_str(&text).map_err(|e| (4, format!("invalid input JSON: {e}")))?;
    if let Some(tol) = common.tol {
        spec.options.tol = Some(tol);
    }
    if let Some(seed) = common.seed {
        spec.options.seed = Some(seed);
    }
    if let Some(samples) = common.samples {
        spec.options.samples = Some(samples);
    }
    Ok(spec)
}

fn emit(report: &Report, pretty: bool) {
    let out = if pretty {
        serde_json::to_string_pretty(report)
    } else {
        serde_json::to_string(report)
    };
    println!("{}", out.expect("report serialization"));
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run_signature(common: &CommonArgs) -> Result<(), (u8, String)> {
    let spec = load_spec(common)?;
    let tol = spec.tol();
    let metric = spec.metric().map_err(|e| (exit_code(&e), e.to_string()))?;
    let sig = metric
        .signature(tol)
        .map_err(|e| (exit_code(&e), format!("degenerate metric: {e}")))?;
    let mut report = Report::new(spec, 0, 0);
    report.signature = Some((sig.p, sig.q));
    emit(&report, common.pretty);
    Ok(())
}

fn classify_pipeline(spec: ProblemSpec, pretty: bool) -> Result<(), (u8, String)> {
    let tol = spec.tol();
    let err = |e: Error| (exit_code(&e), e.to_string());
    let algebra = spec.algebra().map_err(err)?;
    let metric = spec.metric().map_err(err)?;
    let reduction = reduce_metric(&algebra, &metric, tol).map_err(err)?;
    let frame = milnor_frame(&algebra, &metric, tol).map_err(err)?;
    let frame_report = verify_frame(&frame).map_err(err)?;

    let mut report = Report::new(spec, 0, 0);
    report.signature = Some((reduction.signature.p, reduction.signature.q));
    report.lambda = Some(frame.lambda);
    report.k = Some(frame.k);
    report.g0 = Some(matrix_rows(&reduction.g0));
    report.factorization_residual = Some(frame_report.bracket_residual);
    report.frame = Some(FrameSection {
        vectors: matrix_rows(&frame.vectors.transpose()),
        orthonormality_residual: frame_report.orthonormality_residual,
        bracket_residual: frame_report.bracket_residual,
        boundary_classified: frame.boundary,
    });
    if algebra.family == Some(Family::Heisenberg3) {
        let form = rahmani_form(&frame).map_err(err)?;
        let residual = rahmani_residual(&frame, &form).map_err(err)?;
        report.rahmani = Some(RahmaniSection {
            case: form.case,
            parameter: form.parameter,
            basis: matrix_rows(&form.basis.transpose()),
            residual,
        });
    }
    emit(&report, pretty);
    Ok(())
}

fn run_classify(common: &CommonArgs, synth: &SynthesizeArgs) -> Result<(), (u8, String)> {
    let spec = if let Some(lambda) = synth.synthesize {
        let name = synth
            .algebra
            .as_deref()
            .ok_or((4u8, "--synthesize requires --algebra".to_string()))?;
        let (algebra_spec, algebra, sig) = match name {
            "rhn" => {
                let p = synth.p.ok_or((4u8, "rhn synthesis requires --p".to_string()))?;
                let q = synth.q.ok_or((4u8, "rhn synthesis requires --q".to_string()))?;
                let l = milnor::lie::rhn(p + q).map_err(|e| (exit_code(&e), e.to_string()))?;
                (AlgebraSpec::Rhn { n: p + q }, l, SignatureMatrix::new(p, q))
            }
            "heisenberg3" => (
                AlgebraSpec::Heisenberg3,
                milnor::lie::heisenberg3(),
                SignatureMatrix::new(2, 1),
            ),
            other => {
                return Err((4, format!("unknown builtin algebra '{other}'")));
            }
        };
        let metric = synthesize_metric(&algebra, sig, lambda)
            .map_err(|e| (exit_code(&e), e.to_string()))?;
        ProblemSpec {
            algebra: algebra_spec,
            metric: matrix_rows(metric.entries()),
            options: Default::default(),
        }
    } else {
        load_spec(common)?
    };
    classify_pipeline(spec, common.pretty)
}

fn run_frame(common: &CommonArgs) -> Result<(), (u8, String)> {
    // frame output is part of the classification report
    let spec = load_spec(common)?;
    classify_pipeline(spec, common.pretty)
}

fn run_curvature(common: &CommonArgs) -> Result<(), (u8, String)> {
    let spec = load_spec(common)?;
    let tol = spec.tol();
    let err = |e: Error| (exit_code(&e), e.to_string());
    let algebra = spec.algebra().map_err(err)?;
    let metric: MetricTensor = spec.metric().map_err(err)?;
    let seed = spec.options.seed.unwrap_or(0);
    let samples = spec.options.samples.unwrap_or(200);
    let opts = CurvatureOptions { tol, seed, samples };
    let rep = classify_curvature(&algebra, &metric, &opts).map_err(err)?;

    // predicted constant for the real hyperbolic family, p,q >= 1
    let mut predicted = None;
    let mut lambda = None;
    let mut k = None;
    if algebra.family == Some(Family::RealHyperbolic) {
        if let Ok(frame) = milnor_frame(&algebra, &metric, tol) {
            let sig = frame.signature;
            let k0 = -(f64::from(frame.lambda).powi(2) * sig.epsilon(sig.dim() - 1)
                + sig.epsilon(0));
            predicted = Some(frame.k * k0);
            lambda = Some(frame.lambda);
            k = Some(frame.k);
        }
    }

    let sig = metric.signature(tol).map_err(err)?;
    let mut report = Report::new(spec, seed, samples);
    report.signature = Some((sig.p, sig.q));
    report.lambda = lambda;
    report.k = k;
    report.curvature = Some(CurvatureSection {
        flat: rep.flags.flat,
        constant_k: rep.flags.constant_k,
        predicted_constant_k: predicted,
        sampled_k: rep.sampled_k,
        einstein: rep.flags.einstein,
        einstein_residual: rep.flags.einstein_residual,
        algebraic_soliton: rep.flags.algebraic_soliton,
        soliton_residual: rep.flags.soliton_residual,
        scalar: rep.scalar,
        ricci: matrix_rows(&rep.ricci),
    });
    emit(&report, common.pretty);
    Ok(())
}

fn run_selftest(seed: u64, samples: usize, tol: Option<f64>) -> ExitCode {
    match milnor::selftest::run_all(seed, samples, tol) {
        Ok(results) => {
            let mut all_passed = true;
            for r in &results {
                let status = if r.passed { "pass" } else { "FAIL" };
                println!(
                    "{status}  {:<32} cases={} max_residual={:.3e} threshold={:.1e}",
                    r.name, r.cases, r.max_residual, r.threshold
                );
                if !r.passed {
                    all_passed = false;
                    if let Some(case) = &r.failing_case {
                        eprintln!("  failing case: {case}");
                    }
                }
            }
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(4, &e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Signature(common) => run_signature(common),
        Command::Classify { common, synth } => run_classify(common, synth),
        Command::Frame(common) => run_frame(common),
        Command::Curvature(common) => run_curvature(common),
        Command::Selftest { seed, samples, tol } => return run_selftest(*seed, *samples, *tol),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => fail(code, &msg),
    }
}
