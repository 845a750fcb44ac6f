//! Repeated seeded tester runs and their CSV record.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use convexity_core::io::{read_distribution, read_function};
use convexity_core::line_tester::{convexity_test_1d, convexity_test_1d_distribution_free, TesterConfig};
use convexity_core::stripe_tester::convexity_test_stripe;
use convexity_core::{
    make_oracle, DiscreteDistribution, ExactScalar, FunctionSource, Instance, InstanceDescriptor, Rng, TestReport,
    Verdict,
};
use rayon::prelude::*;

use crate::stats::{wilson_interval, Spread};

pub const CSV_HEADER: &str = "trial,verdict,rounds_used,query_total,query_distinct,samples,witness";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TesterKind {
    /// Uniform tester on `[n]`.
    Line,
    /// Distribution-free tester on `[n]`.
    LineDf,
    /// Tester on `[3] x [n]`.
    Stripe,
}

impl TesterKind {
    pub fn name(self) -> &'static str {
        match self {
            TesterKind::Line => "test-line",
            TesterKind::LineDf => "test-line-df",
            TesterKind::Stripe => "test-stripe",
        }
    }

    pub fn needs_distribution(self) -> bool {
        !matches!(self, TesterKind::Line)
    }
}

#[derive(Clone, Debug)]
pub enum InputSource {
    Descriptor(InstanceDescriptor),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub enum DistributionSource {
    Uniform,
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub tester: TesterKind,
    pub input: InputSource,
    pub distribution: DistributionSource,
    pub eps: ExactScalar,
    pub rounds: Option<u64>,
    pub const_c: f64,
    pub trials: u64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("need at least one trial");
        }
        if !self.eps.is_positive() || self.eps >= ExactScalar::one() {
            bail!("eps must lie in (0, 1), got {}", self.eps);
        }
        if !(self.const_c > 0.0 && self.const_c.is_finite()) {
            bail!("the round constant must be positive, got {}", self.const_c);
        }
        Ok(())
    }

    pub fn settings(&self) -> TrialSettings {
        TrialSettings {
            tester: self.tester,
            eps: self.eps.clone(),
            config: TesterConfig { rounds: self.rounds, const_c: self.const_c },
            trials: self.trials,
            seed: self.seed,
        }
    }
}

/// Everything about a run except the function and distribution.
#[derive(Clone, Debug)]
pub struct TrialSettings {
    pub tester: TesterKind,
    pub eps: ExactScalar,
    pub config: TesterConfig,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub trial: u64,
    pub report: TestReport,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub trials: Vec<TrialRecord>,
    pub rejections: u64,
    /// 95% Wilson interval for the rejection probability.
    pub interval: (f64, f64),
    pub query_total: Spread,
    pub query_distinct: Spread,
    pub samples: u64,
    pub wall_time: Duration,
}

impl ExperimentResult {
    pub fn rejection_frequency(&self) -> ExactScalar {
        ExactScalar::ratio(self.rejections as i64, self.trials.len() as i64).expect("at least one trial")
    }

    pub fn any_rejection(&self) -> bool {
        self.rejections > 0
    }

    /// One row per trial in trial order, then a `#summary` row. Wall time is
    /// left out so that equal seeds give byte-identical files.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for t in &self.trials {
            let r = &t.report;
            let witness = r.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                t.trial, r.verdict, r.rounds_used, r.query_total, r.query_distinct, r.samples_used, witness
            )?;
        }
        writeln!(
            out,
            "#summary,trials={},rejections={},frequency={},ci95_low={:.6},ci95_high={:.6},query_total_min={},query_total_median={},query_total_max={},query_distinct_median={},samples={}",
            self.trials.len(),
            self.rejections,
            self.rejection_frequency(),
            self.interval.0,
            self.interval.1,
            self.query_total.min,
            self.query_total.median,
            self.query_total.max,
            self.query_distinct.median,
            self.samples
        )
    }
}

/// Loads the function named by `input`.
pub fn load_source(input: &InputSource) -> Result<Box<dyn FunctionSource>> {
    Ok(match input {
        InputSource::Descriptor(d) => {
            let instance: Instance = d.build().with_context(|| format!("building `{d}`"))?;
            Box::new(instance)
        }
        InputSource::File(path) => Box::new(read_function_file(path)?),
    })
}

pub fn read_function_file(path: &PathBuf) -> Result<convexity_core::GridFunction> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_function(std::io::BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

pub fn load_distribution(source: &DistributionSource, f: &dyn FunctionSource) -> Result<DiscreteDistribution> {
    Ok(match source {
        DistributionSource::Uniform => DiscreteDistribution::uniform(f.domain())?,
        DistributionSource::File(path) => {
            let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            read_distribution(std::io::BufReader::new(file), Some(f.domain()))
                .with_context(|| format!("reading {}", path.display()))?
        }
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let source = load_source(&spec.input)?;
    let dist = if spec.tester.needs_distribution() {
        Some(load_distribution(&spec.distribution, source.as_ref())?)
    } else {
        None
    };
    run_trials(source.as_ref(), dist.as_ref(), &spec.settings())
}

fn one_trial(
    source: &dyn FunctionSource,
    dist: Option<&DiscreteDistribution>,
    settings: &TrialSettings,
    trial: u64,
) -> Result<TestReport> {
    let mut rng = Rng::new(settings.seed).split(&format!("trial-{trial}"));
    let mut oracle = make_oracle(source);
    if let Some(d) = dist {
        oracle = oracle.with_distribution(d);
    }
    let report = match settings.tester {
        TesterKind::Line => convexity_test_1d(&mut oracle, &settings.eps, &mut rng, settings.config)?,
        TesterKind::LineDf => {
            convexity_test_1d_distribution_free(&mut oracle, &settings.eps, &mut rng, settings.config)?
        }
        TesterKind::Stripe => convexity_test_stripe(&mut oracle, &settings.eps, &mut rng, settings.config)?,
    };
    Ok(report)
}

/// Runs the trials in parallel, each with its own oracle and an rng split
/// from the seed by trial number, and aggregates them in trial order.
pub fn run_trials(
    source: &dyn FunctionSource,
    dist: Option<&DiscreteDistribution>,
    settings: &TrialSettings,
) -> Result<ExperimentResult> {
    if settings.trials == 0 {
        bail!("need at least one trial");
    }
    if settings.tester.needs_distribution() && dist.is_none() {
        bail!("{} needs a distribution", settings.tester.name());
    }
    let start = Instant::now();
    let reports: Vec<TestReport> = (0..settings.trials)
        .into_par_iter()
        .map(|t| one_trial(source, dist, settings, t))
        .collect::<Result<_>>()?;
    let wall_time = start.elapsed();
    let rejections = reports.iter().filter(|r| r.verdict == Verdict::Reject).count() as u64;
    let totals: Vec<u64> = reports.iter().map(|r| r.query_total).collect();
    let distinct: Vec<u64> = reports.iter().map(|r| r.query_distinct).collect();
    Ok(ExperimentResult {
        rejections,
        interval: wilson_interval(rejections, settings.trials),
        query_total: Spread::of(&totals),
        query_distinct: Spread::of(&distinct),
        samples: reports.iter().map(|r| r.samples_used).sum(),
        trials: reports.into_iter().enumerate().map(|(t, report)| TrialRecord { trial: t as u64, report }).collect(),
        wall_time,
    })
}
