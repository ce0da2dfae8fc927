//! Degradation and disturbance experiments and the regression used to
//! summarise their curves.

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{BaseRelation, RelationSet};
use crate::closure::IntervalGraph;
use crate::error::{Error, Result};
use crate::metrics::{fmt6, EvalReport, Evaluator, Mode};

pub const RECALL_METRICS: [&str; 4] = ["TR", "strict_R", "relaxed_R", "core_recall"];
pub const PRECISION_METRICS: [&str; 3] = ["TP", "strict_P", "relaxed_P"];
pub const MAX_DISTURBANCE: f64 = 0.4;

fn count_for(fraction: f64, m: usize) -> usize {
    // tolerate float noise such as 0.3 * 10 = 3.0000000000000004
    ((fraction * m as f64) - 1e-9).ceil().max(0.0) as usize
}

fn check_fraction(f: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Config(format!("fraction {f} outside [0, 1]")));
    }
    Ok(())
}

fn annotated(g: &IntervalGraph) -> Vec<(usize, usize, RelationSet)> {
    g.annotated_edges().collect()
}

/// Keeps a random `ceil(keep * m)` of the `m` annotated edges.
pub fn degrade(g: &IntervalGraph, keep_fraction: f64, seed: u64) -> Result<IntervalGraph> {
    check_fraction(keep_fraction)?;
    let edges = annotated(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = sample(&mut rng, edges.len(), count_for(keep_fraction, edges.len())).into_vec();
    keep.sort_unstable();
    let mut out = IntervalGraph::with_nodes(g.names());
    for i in keep {
        let (a, b, r) = edges[i];
        out.set_relation(a, b, r)?;
    }
    Ok(out)
}

/// Result of [`disturb`].
#[derive(Debug, Clone)]
pub struct Disturbed {
    pub graph: IntervalGraph,
    pub changed: usize,
    pub skipped: usize,
}

/// Replaces `ceil(fraction * m)` distinct annotated edges by a different
/// base relation, keeping the graph consistent. Each edge gets up to
/// `max_retries` draws before it is skipped.
pub fn disturb(g: &IntervalGraph, change_fraction: f64, seed: u64, max_retries: usize) -> Result<Disturbed> {
    check_fraction(change_fraction)?;
    let mut out = g.annotation();
    let edges = annotated(&out);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, edges.len(), count_for(change_fraction, edges.len()));
    let (mut changed, mut skipped) = (0, 0);
    for i in picks {
        let (a, b, old) = edges[i];
        let choices: Vec<BaseRelation> = BaseRelation::ALL
            .into_iter()
            .filter(|r| !old.contains(*r))
            .collect();
        let mut done = false;
        for _ in 0..max_retries {
            let r = choices[rng.gen_range(0..choices.len())];
            out.set_relation(a, b, r.into())?;
            if out.is_consistent() {
                done = true;
                break;
            }
        }
        if done {
            changed += 1;
        } else {
            out.set_relation(a, b, old)?;
            skipped += 1;
        }
    }
    Ok(Disturbed { graph: out, changed, skipped })
}

/// Mean and spread of one metric at one nominal fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub fraction: f64,
    pub metric: String,
    pub mean: f64,
    pub stddev: f64,
    pub trials: usize,
}

pub const CURVE_CSV_HEADER: &str = "fraction,metric,mean,stddev,trials";

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = format!("{CURVE_CSV_HEADER}\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt6(p.fraction),
            p.metric,
            fmt6(p.mean),
            fmt6(p.stddev),
            p.trials
        ));
    }
    out
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub fractions: Vec<f64>,
    pub trials: usize,
    pub metrics: Vec<String>,
    pub seed: u64,
    pub mode: Mode,
}

impl ExperimentConfig {
    pub fn degradation_default(seed: u64) -> Self {
        ExperimentConfig {
            fractions: (0..=10).map(|i| i as f64 / 10.0).collect(),
            trials: 20,
            metrics: RECALL_METRICS.iter().map(|s| s.to_string()).collect(),
            seed,
            mode: Mode::Relaxed,
        }
    }

    pub fn disturbance_default(seed: u64) -> Self {
        ExperimentConfig {
            fractions: (0..=4).map(|i| i as f64 / 10.0).collect(),
            trials: 20,
            metrics: PRECISION_METRICS.iter().map(|s| s.to_string()).collect(),
            seed,
            mode: Mode::Relaxed,
        }
    }

    fn validate(&self, max_fraction: f64) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.fractions.is_empty() {
            return Err(Error::Config("no fractions given".into()));
        }
        for &f in &self.fractions {
            if !(0.0..=max_fraction).contains(&f) {
                return Err(Error::Config(format!("fraction {f} outside [0, {max_fraction}]")));
            }
        }
        for m in &self.metrics {
            if metric_value(&EMPTY_REPORT, m).is_none() {
                return Err(Error::Config(format!("unknown metric {m:?}")));
            }
        }
        Ok(())
    }
}

const EMPTY_REPORT: EvalReport = EvalReport {
    v_K_maj: 0.0,
    v_G_maj: 0.0,
    splits: 0.0,
    conflations: 0.0,
    misses: 0.0,
    errors: 0.0,
    R_t: 0.0,
    r_t: 0.0,
    TR: 0.0,
    TP: 0.0,
    strict_P: 0.0,
    strict_R: 0.0,
    relaxed_P: 0.0,
    relaxed_R: 0.0,
    core_recall: 0.0,
    vagueness_reference: 0.0,
    vagueness_candidate: 0.0,
    reference_consistent: true,
    candidate_consistent: true,
    degenerate_reference: false,
    degenerate_candidate: false,
    mode: Mode::Relaxed,
};

pub fn metric_value(r: &EvalReport, name: &str) -> Option<f64> {
    r.metrics().into_iter().find(|(n, _)| *n == name).map(|(_, v)| v)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial, derived from the run seed and its grid position.
pub fn trial_seed(seed: u64, fraction_index: usize, trial: usize) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ fraction_index as u64) ^ trial as u64)
}

fn aggregate(cfg: &ExperimentConfig, reports: &[Vec<EvalReport>]) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    for (fi, &f) in cfg.fractions.iter().enumerate() {
        for m in &cfg.metrics {
            let vals: Vec<f64> = reports[fi]
                .iter()
                .map(|r| metric_value(r, m).unwrap_or(0.0))
                .collect();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = if vals.len() > 1 {
                vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            out.push(CurvePoint {
                fraction: f,
                metric: m.clone(),
                mean,
                stddev: var.sqrt(),
                trials: vals.len(),
            });
        }
    }
    out
}

fn run_trials<F>(cfg: &ExperimentConfig, trial: F) -> Result<Vec<Vec<EvalReport>>>
where
    F: Fn(f64, u64) -> Result<EvalReport> + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..cfg.fractions.len())
        .flat_map(|fi| (0..cfg.trials).map(move |t| (fi, t)))
        .collect();
    let results: Vec<EvalReport> = jobs
        .par_iter()
        .map(|&(fi, t)| trial(cfg.fractions[fi], trial_seed(cfg.seed, fi, t)))
        .collect::<Result<_>>()?;
    Ok(results.chunks(cfg.trials).map(|c| c.to_vec()).collect())
}

/// Degrades the reference at every fraction and scores what is left
/// against the full reference.
pub fn degradation_curve(reference: &IntervalGraph, cfg: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    cfg.validate(1.0)?;
    let eval = Evaluator::new(reference, cfg.mode)?;
    let reports = run_trials(cfg, |f, seed| eval.evaluate(&degrade(reference, f, seed)?))?;
    Ok(aggregate(cfg, &reports))
}

/// Disturbs the reference at every fraction (at most 0.4) and scores the
/// result against the original.
pub fn disturbance_curve(
    reference: &IntervalGraph,
    cfg: &ExperimentConfig,
    max_retries: usize,
) -> Result<Vec<CurvePoint>> {
    cfg.validate(MAX_DISTURBANCE)?;
    let eval = Evaluator::new(reference, cfg.mode)?;
    let reports = run_trials(cfg, |f, seed| {
        eval.evaluate(&disturb(reference, f, seed, max_retries)?.graph)
    })?;
    Ok(aggregate(cfg, &reports))
}

/// `y = a x^2 + b x + c` with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r2: f64,
}

/// Least-squares polynomial fit of degree 1 or 2; for degree 1, `a` is 0.
pub fn fit_polynomial(points: &[(f64, f64)], degree: usize) -> Result<FitResult> {
    if !(1..=2).contains(&degree) {
        return Err(Error::Config("degree must be 1 or 2".into()));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < degree + 1 {
        return Err(Error::Config(format!(
            "need at least {} distinct x values",
            degree + 1
        )));
    }
    let cols = degree + 1;
    let x = DMatrix::from_fn(points.len(), cols, |i, j| points[i].0.powi((degree - j) as i32));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let coef = x
        .clone()
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::Config(e.to_string()))?;
    let fitted = &x * &coef;
    let mean = y.mean();
    let ss_res: f64 = (&y - &fitted).iter().map(|r| r * r).sum();
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res < 1e-18 {
        1.0
    } else {
        0.0
    };
    let (a, b, c) = if degree == 2 {
        (coef[0], coef[1], coef[2])
    } else {
        (0.0, coef[0], coef[1])
    };
    Ok(FitResult { a, b, c, r2 })
}

pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<FitResult> {
    fit_polynomial(points, 2)
}

/// Points `(fraction, mean)` of one metric from a curve.
pub fn curve_series(points: &[CurvePoint], metric: &str) -> Vec<(f64, f64)> {
    points
        .iter()
        .filter(|p| p.metric == metric)
        .map(|p| (p.fraction, p.mean))
        .collect()
}
