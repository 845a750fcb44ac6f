use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use convexity_core::io::write_function;
use convexity_core::{ExactScalar, InstanceDescriptor};
use convexity_harness::commands::{check_convex, distance, gen_instance, verify_lb};
use convexity_harness::experiment::{run_experiment, DistributionSource, ExperimentSpec, InputSource, TesterKind};
use convexity_harness::scaling::{query_scaling_report, ScalingTester};

#[derive(Parser)]
#[command(name = "convexity", version, about = "Convexity testers for functions on discrete grids")]
struct Cli {
    /// Master seed; every trial derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write CSV or instance output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Constant C in the default round count.
    #[arg(long = "const-c", global = true, default_value_t = 40.0)]
    const_c: f64,
    /// Exit with status 2 if any trial rejects (or the input is not convex).
    #[arg(long = "expect-accept", global = true)]
    expect_accept: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the line tester.
    TestLine(TestArgs),
    /// Run the distribution-free line tester.
    TestLineDf(DfTestArgs),
    /// Run the stripe tester on [3] x [n].
    TestStripe(DfTestArgs),
    /// Decide convexity of a function file exactly.
    CheckConvex { file: PathBuf },
    /// Exact distance to convexity of a one-dimensional function file.
    Distance { file: PathBuf },
    /// Materialize an instance descriptor as a function file.
    GenInstance { descriptor: String },
    /// Check the farness or convexity claim attached to an instance family.
    VerifyLb { descriptor: String },
    /// Median query counts against their predicted growth.
    Scaling(ScalingArgs),
}

#[derive(Args)]
struct TestArgs {
    /// Side length, added to the descriptor when it does not set `n`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "1/10", value_parser = parse_scalar)]
    eps: ExactScalar,
    /// Fixed round count instead of the default.
    #[arg(long)]
    rounds: Option<u64>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, conflicts_with = "instance", required_unless_present = "instance")]
    input: Option<PathBuf>,
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Args)]
struct DfTestArgs {
    #[command(flatten)]
    common: TestArgs,
    /// `uniform` or a distribution file.
    #[arg(long, default_value = "uniform")]
    dist: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingChoice {
    Line,
    Stripe,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long, value_enum)]
    tester: ScalingChoice,
    /// Comma-separated side lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    /// Comma-separated values of eps.
    #[arg(long, value_delimiter = ',', default_value = "1/9", value_parser = parse_scalar)]
    eps: Vec<ExactScalar>,
    #[arg(long, default_value_t = 20)]
    trials: u64,
}

fn parse_scalar(s: &str) -> Result<ExactScalar, String> {
    s.parse::<ExactScalar>().map_err(|e| e.to_string())
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn input_source(args: &TestArgs) -> Result<InputSource> {
    if let Some(path) = &args.input {
        return Ok(InputSource::File(path.clone()));
    }
    let text = args.instance.as_deref().expect("clap enforces input or instance");
    let mut desc: InstanceDescriptor = text.parse()?;
    if let Some(n) = args.n {
        match desc.get("n") {
            None => desc = desc.with("n", n.to_string()),
            Some(v) if v != n.to_string() => bail!("--n {n} disagrees with n={v} in the descriptor"),
            Some(_) => {}
        }
    }
    Ok(InputSource::Descriptor(desc))
}

fn run_tester(cli: &Cli, tester: TesterKind, args: &TestArgs, dist: Option<&str>) -> Result<bool> {
    let distribution = match dist {
        None | Some("uniform") => DistributionSource::Uniform,
        Some(path) => DistributionSource::File(PathBuf::from(path)),
    };
    let spec = ExperimentSpec {
        tester,
        input: input_source(args)?,
        distribution,
        eps: args.eps.clone(),
        rounds: args.rounds,
        const_c: cli.const_c,
        trials: args.trials,
        seed: cli.seed,
    };
    let result = run_experiment(&spec)?;
    let mut out = output(&cli.out)?;
    result.write_csv(&mut out)?;
    out.flush()?;
    eprintln!(
        "{}: {} of {} trials rejected (95% interval {:.4}..{:.4}), median queries {}, {:.2?}",
        tester.name(),
        result.rejections,
        result.trials.len(),
        result.interval.0,
        result.interval.1,
        result.query_total.median,
        result.wall_time
    );
    Ok(!result.any_rejection())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::TestLine(args) => run_tester(cli, TesterKind::Line, args, None),
        Command::TestLineDf(args) => run_tester(cli, TesterKind::LineDf, &args.common, Some(&args.dist)),
        Command::TestStripe(args) => run_tester(cli, TesterKind::Stripe, &args.common, Some(&args.dist)),
        Command::CheckConvex { file } => {
            let f = convexity_harness::experiment::read_function_file(file)?;
            let outcome = check_convex(&f)?;
            let mut out = output(&cli.out)?;
            match &outcome.detail {
                None => writeln!(out, "convex")?,
                Some(d) => writeln!(out, "not convex: {d}")?,
            }
            out.flush()?;
            Ok(outcome.convex)
        }
        Command::Distance { file } => {
            let f = convexity_harness::experiment::read_function_file(file)?;
            let d = distance(&f)?;
            let mut out = output(&cli.out)?;
            writeln!(out, "{d}")?;
            out.flush()?;
            Ok(d.is_zero())
        }
        Command::GenInstance { descriptor } => {
            let desc: InstanceDescriptor = descriptor.parse()?;
            let f = gen_instance(&desc)?;
            let mut out = output(&cli.out)?;
            write_function(&f, &mut out)?;
            out.flush()?;
            eprintln!("{desc}: {} points", f.domain().len());
            Ok(true)
        }
        Command::VerifyLb { descriptor } => {
            let desc: InstanceDescriptor = descriptor.parse()?;
            let report = verify_lb(&desc)?;
            let mut out = output(&cli.out)?;
            writeln!(out, "claim: {}", report.claim)?;
            writeln!(out, "measured: {}", report.measured)?;
            writeln!(out, "holds: {}", report.holds)?;
            out.flush()?;
            Ok(true)
        }
        Command::Scaling(args) => {
            let tester = match args.tester {
                ScalingChoice::Line => ScalingTester::Line,
                ScalingChoice::Stripe => ScalingTester::Stripe,
            };
            let report = query_scaling_report(tester, &args.ns, &args.eps, args.trials, cli.seed, cli.const_c)?;
            let mut out = output(&cli.out)?;
            report.write_csv(&mut out)?;
            out.flush()?;
            eprintln!("max relative residual {:.4}", report.max_relative_residual);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1 like any other error; 2 is reserved for rejections.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(accepted) if cli.expect_accept && !accepted => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
