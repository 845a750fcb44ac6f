//! Query counts against their predicted growth.
//!
//! The line tester is fitted to `c1 log2(eps n) / eps + c2 / eps` and the
//! stripe tester to `c1 (log2 n)^2 / eps + c2`, each by least squares over
//! the medians of accepting runs on random convex inputs.

use std::io::Write;

use anyhow::{bail, Result};
use convexity_core::hard_instances::{random_convex_line, random_convex_stripe};
use convexity_core::line_tester::TesterConfig;
use convexity_core::stripe_tester::stripe_round;
use convexity_core::{make_oracle, DiscreteDistribution, ExactScalar, FunctionSource, Rng};

use crate::experiment::{run_trials, TesterKind, TrialSettings};
use crate::stats::median;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingTester {
    Line,
    Stripe,
}

impl ScalingTester {
    fn kind(self) -> TesterKind {
        match self {
            ScalingTester::Line => TesterKind::Line,
            ScalingTester::Stripe => TesterKind::Stripe,
        }
    }

    fn name(self) -> &'static str {
        self.kind().name()
    }

    /// The two regression features at `(n, eps)`.
    pub fn features(self, n: usize, eps: f64) -> [f64; 2] {
        match self {
            ScalingTester::Line => [(eps * n as f64).log2() / eps, 1.0 / eps],
            ScalingTester::Stripe => [(n as f64).log2().powi(2) / eps, 1.0],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScalingRow {
    pub n: usize,
    pub eps: ExactScalar,
    pub median_queries: f64,
    pub fitted: f64,
    pub relative_residual: f64,
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub tester: ScalingTester,
    pub trials: u64,
    pub rows: Vec<ScalingRow>,
    pub coefficients: [f64; 2],
    pub max_relative_residual: f64,
}

impl ScalingReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "tester,n,eps,trials,median_query_total,fitted,relative_residual")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{:.1},{:.6}",
                self.tester.name(),
                r.n,
                r.eps,
                self.trials,
                r.median_queries,
                r.fitted,
                r.relative_residual
            )?;
        }
        writeln!(
            out,
            "#fit,c1={:.6},c2={:.6},max_relative_residual={:.6}",
            self.coefficients[0], self.coefficients[1], self.max_relative_residual
        )
    }
}

/// Least squares for `y ~ c1 x1 + c2 x2` by the normal equations.
pub fn fit_two(features: &[[f64; 2]], y: &[f64]) -> Result<[f64; 2]> {
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (x, &v) in features.iter().zip(y) {
        s11 += x[0] * x[0];
        s12 += x[0] * x[1];
        s22 += x[1] * x[1];
        t1 += x[0] * v;
        t2 += x[1] * v;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() <= 1e-12 * (s11 * s22).abs().max(1.0) {
        bail!("regression features are collinear; vary n or eps more");
    }
    Ok([(t1 * s22 - t2 * s12) / det, (s11 * t2 - s12 * t1) / det])
}

fn convex_input(tester: ScalingTester, n: usize, rng: &mut Rng) -> Result<Box<dyn FunctionSource>> {
    Ok(match tester {
        ScalingTester::Line => Box::new(random_convex_line(n, rng)?),
        ScalingTester::Stripe => Box::new(random_convex_stripe(n, rng)?),
    })
}

/// Median `query_total` over `trials` accepting runs, one fresh convex input
/// per trial.
pub fn median_queries(
    tester: ScalingTester,
    n: usize,
    eps: &ExactScalar,
    trials: u64,
    seed: u64,
    const_c: f64,
) -> Result<f64> {
    let base = Rng::new(seed).split(&format!("{}-{n}-{eps}", tester.name()));
    let mut totals = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let mut rng = base.split(&format!("input-{t}"));
        let f = convex_input(tester, n, &mut rng)?;
        let dist = match tester {
            ScalingTester::Line => None,
            ScalingTester::Stripe => Some(DiscreteDistribution::uniform(f.domain())?),
        };
        let settings = TrialSettings {
            tester: tester.kind(),
            eps: eps.clone(),
            config: TesterConfig { rounds: None, const_c },
            trials: 1,
            seed: rng.seed() ^ t,
        };
        let result = run_trials(f.as_ref(), dist.as_ref(), &settings)?;
        if result.any_rejection() {
            bail!("a convex input was rejected at n = {n}");
        }
        totals.push(result.trials[0].report.query_total);
    }
    Ok(median(&totals))
}

pub fn query_scaling_report(
    tester: ScalingTester,
    ns: &[usize],
    eps_list: &[ExactScalar],
    trials: u64,
    seed: u64,
    const_c: f64,
) -> Result<ScalingReport> {
    if ns.is_empty() || eps_list.is_empty() || trials == 0 {
        bail!("need at least one n, one eps and one trial");
    }
    let mut points = Vec::new();
    for eps in eps_list {
        for &n in ns {
            points.push((n, eps.clone(), median_queries(tester, n, eps, trials, seed, const_c)?));
        }
    }
    let features: Vec<[f64; 2]> = points.iter().map(|(n, e, _)| tester.features(*n, e.to_f64())).collect();
    let y: Vec<f64> = points.iter().map(|p| p.2).collect();
    let c = fit_two(&features, &y)?;
    let rows: Vec<ScalingRow> = points
        .into_iter()
        .zip(&features)
        .map(|((n, eps, median_queries), x)| {
            let fitted = c[0] * x[0] + c[1] * x[1];
            ScalingRow { n, eps, median_queries, fitted, relative_residual: (median_queries - fitted).abs() / median_queries }
        })
        .collect();
    let max_relative_residual = rows.iter().map(|r| r.relative_residual).fold(0.0, f64::max);
    Ok(ScalingReport { tester, trials, rows, coefficients: c, max_relative_residual })
}

/// Largest single-round query count of the stripe tester over uniformly
/// sampled points of the given inputs, divided by `(log2 n)^2`.
pub fn stripe_round_constant(inputs: &[&dyn FunctionSource], rounds_per_input: u64, seed: u64) -> Result<f64> {
    let mut worst = 0u64;
    let mut n = 0usize;
    for (i, f) in inputs.iter().enumerate() {
        let dom = f.domain();
        if dom.dimension() != 2 || dom.dims()[0] != 3 {
            bail!("stripe inputs must live on [3] x [n]");
        }
        if n != 0 && n != dom.dims()[1] {
            bail!("all inputs must share n");
        }
        n = dom.dims()[1];
        let mut rng = Rng::new(seed).split(&format!("input-{i}"));
        for _ in 0..rounds_per_input {
            let p = dom.point_at(rng.uniform(dom.len() as u64) as usize);
            let mut oracle = make_oracle(*f);
            let trace = stripe_round(&mut oracle, &p)?;
            worst = worst.max(trace.query_total);
        }
    }
    if n < 2 {
        bail!("need n >= 2");
    }
    Ok(worst as f64 / (n as f64).log2().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fit_recovers_coefficients() {
        let xs = [[1.0, 2.0], [2.0, 1.0], [3.0, 5.0], [4.0, 4.0]];
        let y: Vec<f64> = xs.iter().map(|x| 3.0 * x[0] - 0.5 * x[1]).collect();
        let c = fit_two(&xs, &y).unwrap();
        assert!((c[0] - 3.0).abs() < 1e-9 && (c[1] + 0.5).abs() < 1e-9);
        assert!(fit_two(&[[1.0, 2.0], [2.0, 4.0]], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn line_medians_grow_with_n() {
        let eps = ExactScalar::ratio(1, 9).unwrap();
        let small = median_queries(ScalingTester::Line, 256, &eps, 3, 1, 40.0).unwrap();
        let large = median_queries(ScalingTester::Line, 4096, &eps, 3, 1, 40.0).unwrap();
        assert!(small < large && large < 2.0 * small);
    }

    #[test]
    fn small_report() {
        let eps = [ExactScalar::ratio(1, 9).unwrap(), ExactScalar::ratio(1, 27).unwrap()];
        let r = query_scaling_report(ScalingTester::Line, &[256, 1024, 4096], &eps, 3, 2, 40.0).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!(r.max_relative_residual < 0.1, "{r:?}");
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 8);
    }
}
