//! Command-line front end: scenario selection, config handling, and report
//! emission. Exit code 0 means every assertion passed, 1 means an assertion
//! failed, and 2 means the configuration or input was invalid.

mod emit;
mod settings;

use std::path::PathBuf;

use anyhow::{bail, Result};
use c0semi_core::{
    eig, harmonic_generator, recover_frequencies, report, run_example_scenario,
    run_hilbert_scenario, run_isometric_scenario, run_l1_diagonal_scenario, run_shift_scenario,
    spurious_zero_analysis, trajectory_pairing, DualityWitness, ScenarioResult, SemigroupEvaluator,
    SpaceTag, TimeGrid, TruncVector,
};
use clap::{Args, Parser, Subcommand};

use emit::{ConfigEcho, Emitter, GridEcho};
use settings::{apply_tol_flags, parse_formats, parse_grid_spec, parse_list, Format, Settings};

#[derive(Parser)]
#[command(
    name = "c0semi",
    version,
    about = "Verification lab for contraction and isometric C0-semigroups on sequence-space truncations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification scenario and emit its report
    Verify {
        #[command(subcommand)]
        scenario: VerifyCommand,
    },
    /// Truncation spectra and spurious-zero certification across dimensions
    Spectrum(SpectrumArgs),
    /// Emit one diagonal pairing trajectory <T_t e_k, e*_k>
    Trajectory(TrajectoryArgs),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Closed-form harmonic-coupling contraction semigroup on c0
    Example(ExampleArgs),
    /// Diagonal structure of an isometric semigroup (phase recovery)
    Isometric(IsometricArgs),
    /// Averaging shift isometry: disjointness violation, non-embeddability
    Shift(ShiftArgs),
    /// Diagonal phase semigroup under the l1 tag
    L1(L1Args),
    /// Hilbert-space positive control with damped negative controls
    Hilbert(HilbertArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Time grid start:stop:step
    #[arg(long)]
    grid: Option<String>,
    /// Seed for randomized sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (falls back to $C0SEMI_OUT, config `out`, then ./out)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma list of report formats: json,csv
    #[arg(long)]
    format: Option<String>,
    /// Tolerance override key=value (keys eq, argmax, spectral); repeatable
    #[arg(long = "tol")]
    tol: Vec<String>,
    /// Flat key = value config file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    /// Truncation dimension N
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct IsometricArgs {
    /// Comma list of frequencies w_k for the diagonal evaluator
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Evaluator under test: diagonal (default) or closed-form
    #[arg(long)]
    evaluator: Option<String>,
    /// Dimension for the closed-form evaluator
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ShiftArgs {
    /// Truncation dimension N
    #[arg(long)]
    dim: Option<usize>,
    /// Number of sampled unit vectors
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct L1Args {
    /// Comma list of frequencies w_k
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct HilbertArgs {
    /// Comma list of phase rates lambda_k
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Comma list of damping rates mu_k (mu_1 must be 0)
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Comma list of truncation dimensions
    #[arg(long)]
    dims: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct TrajectoryArgs {
    /// Evaluator: closed-form (default) or diagonal
    #[arg(long)]
    evaluator: Option<String>,
    /// Truncation dimension N (closed-form evaluator)
    #[arg(long)]
    dim: Option<usize>,
    /// Comma list of frequencies w_k (diagonal evaluator)
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Mode index k (1-based)
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { scenario } => match scenario {
            VerifyCommand::Example(args) => run_example(args),
            VerifyCommand::Isometric(args) => run_isometric(args),
            VerifyCommand::Shift(args) => run_shift(args),
            VerifyCommand::L1(args) => run_l1(args),
            VerifyCommand::Hilbert(args) => run_hilbert(args),
        },
        Command::Spectrum(args) => run_spectrum(args),
        Command::Trajectory(args) => run_trajectory(args),
    }
}

/// Overlay config-file settings with flag-level settings (flags win).
fn merge(common: &CommonArgs, mut flags: Settings) -> Result<Settings> {
    let base = match &common.config {
        Some(path) => Settings::from_config_file(path)?,
        None => Settings::default(),
    };
    if let Some(grid) = &common.grid {
        flags.grid = Some(parse_grid_spec(grid)?);
    }
    if let Some(seed) = common.seed {
        flags.seed = Some(seed);
    }
    if let Some(fmt) = &common.format {
        flags.formats = Some(parse_formats(fmt)?);
    }
    apply_tol_flags(&mut flags, &common.tol)?;
    Ok(base.overlay(flags))
}

fn grid_echo(spec: (f64, f64, f64), grid: &TimeGrid) -> GridEcho {
    GridEcho {
        start: spec.0,
        stop: spec.1,
        step: spec.2,
        points: grid.len(),
    }
}

fn print_result(result: &ScenarioResult) {
    println!(
        "scenario `{}`: {}",
        result.name,
        if result.overall { "PASS" } else { "FAIL" }
    );
    for a in &result.assertions {
        println!(
            "  {:<48} {}  metric {:.3e}",
            a.label,
            if a.pass { "PASS" } else { "FAIL" },
            a.metric
        );
    }
}

fn exit_code(result: &ScenarioResult) -> i32 {
    if result.overall {
        0
    } else {
        1
    }
}

fn run_example(args: ExampleArgs) -> Result<i32> {
    let settings = merge(
        &args.common,
        Settings {
            dim: args.dim,
            ..Default::default()
        },
    )?;
    let tol = settings.tolerances()?;
    let dim = settings.dim.unwrap_or(64);
    let (spec, grid) = settings.grid_or((0.0, 10.0, 0.1))?;

    let result = run_example_scenario(dim, &grid, &tol)?;

    let formats = settings.formats_or_default();
    let emitter = Emitter::new(settings.out_dir(args.common.out.clone()), formats.clone())?;
    let mut config = ConfigEcho::new("example", &tol, &formats);
    config.dim = Some(dim);
    config.grid = Some(grid_echo(spec, &grid));
    emitter.write_json("example", &config, &result)?;

    if emitter.wants(Format::Csv) {
        let evaluator = SemigroupEvaluator::harmonic_closed_form(dim)?;
        let x = TruncVector::basis(0, dim, SpaceTag::C0)?;
        let f = DualityWitness::basis(0, dim, SpaceTag::C0)?;
        let values = trajectory_pairing(&evaluator, &x, &f, &grid)?;
        emitter.write_csv(
            "trajectories.csv",
            &report::trajectory_csv(grid.points(), &values)?,
        )?;
    }

    print_result(&result);
    Ok(exit_code(&result))
}

fn run_isometric(args: IsometricArgs) -> Result<i32> {
    let mut flags = Settings {
        dim: args.dim,
        evaluator: args.evaluator.clone(),
        ..Default::default()
    };
    if let Some(text) = &args.omega {
        flags.omega = Some(parse_list(text)?);
    }
    let settings = merge(&args.common, flags)?;
    let tol = settings.tolerances()?;
    let (spec, grid) = settings.grid_or((0.0, 5.0, 0.1))?;

    let kind = settings
        .evaluator
        .clone()
        .unwrap_or_else(|| "diagonal".into());
    let (evaluator, expected) = match kind.as_str() {
        "diagonal" => {
            let Some(omega) = settings.omega.clone() else {
                bail!("the diagonal evaluator needs --omega");
            };
            (
                SemigroupEvaluator::diagonal_phase(omega.clone())?,
                Some(omega),
            )
        }
        "closed-form" => {
            let dim = settings.dim.unwrap_or(8);
            (SemigroupEvaluator::harmonic_closed_form(dim)?, None)
        }
        other => bail!("unknown evaluator `{other}` (expected diagonal or closed-form)"),
    };

    let result = run_isometric_scenario(&evaluator, expected.as_deref(), &grid, &tol)?;

    let formats = settings.formats_or_default();
    let emitter = Emitter::new(settings.out_dir(args.common.out.clone()), formats.clone())?;
    let mut config = ConfigEcho::new("isometric", &tol, &formats);
    config.evaluator = Some(kind);
    config.omega = expected.clone();
    config.dim = Some(evaluator.dim());
    config.grid = Some(grid_echo(spec, &grid));
    emitter.write_json("isometric", &config, &result)?;

    if emitter.wants(Format::Csv) {
        let fits = recover_frequencies(&evaluator, &grid)?;
        emitter.write_csv("frequencies.csv", &report::frequencies_csv(&fits))?;
    }

    print_result(&result);
    Ok(exit_code(&result))
}

fn run_shift(args: ShiftArgs) -> Result<i32> {
    let settings = merge(
        &args.common,
        Settings {
            dim: args.dim,
            trials: args.trials,
            ..Default::default()
        },
    )?;
    let tol = settings.tolerances()?;
    let dim = settings.dim.unwrap_or(16);
    let trials = settings.trials.unwrap_or(1000);
    let seed = settings.seed.unwrap_or(0);

    let result = run_shift_scenario(dim, trials, seed, &tol)?;

    let formats = settings.formats_or_default();
    let emitter = Emitter::new(settings.out_dir(args.common.out.clone()), formats.clone())?;
    let mut config = ConfigEcho::new("shift", &tol, &formats);
    config.dim = Some(dim);
    config.trials = Some(trials);
    config.seed = Some(seed);
    emitter.write_json("shift", &config, &result)?;

    print_result(&result);
    Ok(exit_code(&result))
}

fn run_l1(args: L1Args) -> Result<i32> {
    let mut flags = Settings::default();
    if let Some(text) = &args.omega {
        flags.omega = Some(parse_list(text)?);
    }
    let settings = merge(&args.common, flags)?;
    let tol = settings.tolerances()?;
    let Some(omega) = settings.omega.clone() else {
        bail!("the l1 scenario needs --omega");
    };
    let (spec, grid) = settings.grid_or((0.0, 5.0, 0.1))?;

    let result = run_l1_diagonal_scenario(&omega, &grid, &tol)?;

    let formats = settings.formats_or_default();
    let emitter = Emitter::new(settings.out_dir(args.common.out.clone()), formats.clone())?;
    let mut config = ConfigEcho::new("l1", &tol, &formats);
    config.omega = Some(omega.clone());
    config.grid = Some(grid_echo(spec, &grid));
    emitter.write_json("l1", &config, &result)?;

    if emitter.wants(Format::Csv) {
        let evaluator = SemigroupEvaluator::diagonal_phase(omega)?;
        let fits = recover_frequencies(&evaluator, &grid)?;
        emitter.write_csv("frequencies.csv", &report::frequencies_csv(&fits))?;
    }

    print_result(&result);
    Ok(exit_code(&result))
}

fn run_hilbert(args: HilbertArgs) -> Result<i32> {
    let mut flags = Settings::default();
    if let Some(text) = &args.lambda {
        flags.lambda = Some(parse_list(text)?);
    }
    if let Some(text) = &args.mu {
        flags.mu = Some(parse_list(text)?);
    }
    let settings = merge(&args.common, flags)?;
    let tol = settings.tolerances()?;
    let Some(lambda) = settings.lambda.clone() else {
        bail!("the hilbert scenario needs --lambda");
    };
    let Some(mu) = settings.mu.clone() else {
        bail!("the hilbert scenario needs --mu");
    };
    let (spec, grid) = settings.grid_or((0.0, 10.0, 0.1))?;

    let result = run_hilbert_scenario(&lambda, &mu, &grid, &tol)?;

    let formats = settings.formats_or_default();
    let emitter = Emitter::new(settings.out_dir(args.common.out.clone()), formats.clone())?;
    let mut config = ConfigEcho::new("hilbert", &tol, &formats);
    config.lambda = Some(lambda);
    config.mu = Some(mu);
    config.grid = Some(grid_echo(spec, &grid));
    emitter.write_json("hilbert", &config, &result)?;

    print_result(&result);
    Ok(exit_code(&result))
}

fn run_spectrum(args: SpectrumArgs) -> Result<i32> {
    let mut flags = Settings::default();
    if let Some(text) = &args.dims {
        flags.dims = Some(parse_list(text)?);
    }
    let settings = merge(&args.common, flags)?;
    let tol = settings.tolerances()?;
    let dims = settings.dims.clone().unwrap_or_else(|| vec![8, 32, 128]);

    let analysis = spurious_zero_analysis(&dims, &tol)?;

    let formats = settings.formats_or_default();
    let emitter = Emitter::new(settings.out_dir(args.common.out.clone()), formats.clone())?;
    let mut config = ConfigEcho::new("spectrum", &tol, &formats);
    config.dims = Some(dims.clone());
    emitter.write_json("spectrum", &config, &analysis)?;

    if emitter.wants(Format::Csv) {
        emitter.write_csv("spurious_zero.csv", &report::spurious_zero_csv(&analysis))?;
        for &dim in &dims {
            let generator = harmonic_generator(dim)?;
            let spectrum = eig(generator.matrix(), &tol)?;
            emitter.write_csv(
                &format!("spectrum_N{dim}.csv"),
                &report::spectrum_csv(&spectrum),
            )?;
        }
    }

    println!(
        "spectrum: {} ({})",
        if analysis.overall { "PASS" } else { "FAIL" },
        analysis.conclusion
    );
    for row in &analysis.rows {
        println!(
            "  N={:<4} zero defect {:.6}  purely imaginary {}  artifact {}",
            row.dim, row.zero_defect, row.purely_imaginary_count, row.artifact_flagged
        );
    }
    Ok(if analysis.overall { 0 } else { 1 })
}

fn run_trajectory(args: TrajectoryArgs) -> Result<i32> {
    let mut flags = Settings {
        dim: args.dim,
        evaluator: args.evaluator.clone(),
        mode_index: args.k,
        ..Default::default()
    };
    if let Some(text) = &args.omega {
        flags.omega = Some(parse_list(text)?);
    }
    let settings = merge(&args.common, flags)?;
    let tol = settings.tolerances()?;
    let (spec, grid) = settings.grid_or((0.0, 10.0, 0.1))?;

    let kind = settings
        .evaluator
        .clone()
        .unwrap_or_else(|| "closed-form".into());
    let evaluator = match kind.as_str() {
        "closed-form" => SemigroupEvaluator::harmonic_closed_form(settings.dim.unwrap_or(64))?,
        "diagonal" => {
            let Some(omega) = settings.omega.clone() else {
                bail!("the diagonal evaluator needs --omega");
            };
            SemigroupEvaluator::diagonal_phase(omega)?
        }
        other => bail!("unknown evaluator `{other}` (expected closed-form or diagonal)"),
    };
    let dim = evaluator.dim();
    let k = settings.mode_index.unwrap_or(1);
    if k == 0 || k > dim {
        bail!("mode index k must satisfy 1 <= k <= {dim}, got {k}");
    }

    let x = TruncVector::basis(k - 1, dim, SpaceTag::C0)?;
    let f = DualityWitness::basis(k - 1, dim, SpaceTag::C0)?;
    let values = trajectory_pairing(&evaluator, &x, &f, &grid)?;

    let formats = settings.formats_or_default();
    let emitter = Emitter::new(settings.out_dir(args.common.out.clone()), formats.clone())?;
    let mut config = ConfigEcho::new("trajectory", &tol, &formats);
    config.evaluator = Some(kind);
    config.dim = Some(dim);
    config.k = Some(k);
    config.omega = settings.omega.clone();
    config.grid = Some(grid_echo(spec, &grid));
    let result = serde_json::json!({
        "columns": ["t", "re", "im", "modulus"],
        "samples": emit::trajectory_samples(grid.points(), &values),
    });
    emitter.write_json("trajectory", &config, &result)?;
    emitter.write_csv(
        "trajectory.csv",
        &report::trajectory_csv(grid.points(), &values)?,
    )?;

    println!("trajectory: mode {k} over {} grid points", grid.len());
    Ok(0)
}
