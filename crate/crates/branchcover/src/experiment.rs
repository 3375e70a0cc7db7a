//! Seeded Monte Carlo over random permutation tuples.
//!
//! Sample `i` at degree `n` draws its tuple from
//! [`sample_stream`](branchcover_core::sample_stream)`(seed, n, i)`. Records
//! are computed in parallel, collected in index order and folded
//! sequentially with integer sums, so the report does not depend on the
//! number of workers.

use std::time::Instant;

use branchcover_core::{
    sample_stream, word_map, CollapseRule, CoverModel, ModelError, Presentation, Rational, SigmaTuple,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{fmt_rational, rule_name};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("presentation is not acceptable")]
    NotAcceptable,
    #[error(transparent)]
    Model(ModelError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("statistic {0} was not collected")]
    StatisticNotCollected(String),
    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<ModelError> for ExperimentError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NotAcceptable => ExperimentError::NotAcceptable,
            e => ExperimentError::Model(e),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub presentation: Presentation,
    pub lambda: Rational,
    pub degrees: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Largest cycle length tracked; defaults to `ceil(I)`.
    pub k_max: Option<usize>,
    pub rule: CollapseRule,
    /// Run the cover/collapse pipeline per sample, not just cycle counts.
    pub outcomes: bool,
}

impl ExperimentConfig {
    pub fn new(presentation: Presentation, lambda: Rational, degrees: Vec<usize>, samples: usize, seed: u64) -> Self {
        ExperimentConfig {
            presentation,
            lambda,
            degrees,
            samples,
            seed,
            k_max: None,
            rule: CollapseRule::Worrisome,
            outcomes: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub presentation: String,
    pub lambda: String,
    pub critical_index: String,
    pub degrees: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub k_max: usize,
    pub collapse_rule: String,
    pub outcomes: bool,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub k: usize,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
}

impl Moment {
    fn from_sums(k: usize, sum: u64, sum_sq: u64, samples: usize) -> Self {
        let n = samples as f64;
        let mean = sum as f64 / n;
        let variance = if samples > 1 { (sum_sq as f64 - n * mean * mean).max(0.0) / (n - 1.0) } else { 0.0 };
        Moment { k, mean, variance, stderr: (variance / n).sqrt() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LnStats {
    pub k: usize,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    /// `(value, count)` pairs, ascending by value.
    pub histogram: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub count: usize,
    pub samples: usize,
    pub rate: f64,
    pub stderr: f64,
}

impl Rate {
    pub fn new(count: usize, samples: usize) -> Self {
        let p = count as f64 / samples as f64;
        Rate { count, samples, rate: p, stderr: (p * (1.0 - p) / samples as f64).sqrt() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub n: usize,
    pub samples: usize,
    /// `cycle_counts[i][k-1]`: number of `k`-cycles of `r_i(σ)`.
    pub cycle_counts: Vec<Vec<Moment>>,
    /// `L_n(k)`: cycles of length at most `k` over all relators.
    pub l_n: Vec<LnStats>,
    pub transitive: Rate,
    pub embedded: Option<Rate>,
    pub disjoint: Option<Rate>,
    pub collapse_valid: Option<Rate>,
    /// Collapse valid and `Y` satisfies `C'(λ)`.
    pub y_c_prime: Option<Rate>,
    pub success: Option<Rate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeMeta {
    pub wall_clock_seconds: f64,
    pub jobs: usize,
    pub started_unix: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub config: ConfigEcho,
    pub degrees: Vec<DegreeStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime: Option<RuntimeMeta>,
}

#[derive(Clone, Copy, Default)]
struct Flags {
    embedded: bool,
    disjoint: bool,
    collapse_valid: bool,
    y_c_prime: bool,
    success: bool,
}

struct Record {
    /// Flattened `[relator][k-1]`.
    cycle_counts: Vec<u32>,
    transitive: bool,
    flags: Option<Flags>,
}

pub fn version_string() -> String {
    format!("branchcover {}", env!("CARGO_PKG_VERSION"))
}

pub(crate) fn default_k_max(model: &CoverModel) -> usize {
    model.constants().critical_index.ceil().to_integer().max(1) as usize
}

fn sample_record(model: &CoverModel, sigma: &SigmaTuple, k_max: usize, outcomes: bool) -> Record {
    let rels = model.presentation().relators();
    let mut cycle_counts = vec![0u32; rels.len() * k_max];
    for (i, r) in rels.iter().enumerate() {
        let w = word_map(r, sigma).expect("tuple matches presentation");
        for len in w.cycle_lengths() {
            if len <= k_max {
                cycle_counts[i * k_max + len - 1] += 1;
            }
        }
    }
    let transitive = sigma.is_transitive();
    let flags = outcomes.then(|| {
        let o = model.outcome(sigma).expect("tuple matches presentation");
        Flags {
            embedded: o.all_embedded,
            disjoint: o.pairwise_disjoint,
            collapse_valid: o.collapse_valid,
            y_c_prime: o.y_satisfies_c_prime == Some(true),
            success: o.success,
        }
    });
    Record { cycle_counts, transitive, flags }
}

fn fold(n: usize, records: &[Record], relators: usize, k_max: usize) -> DegreeStats {
    let samples = records.len();
    let mut cycle_counts = Vec::with_capacity(relators);
    for i in 0..relators {
        let mut row = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let (mut s, mut sq) = (0u64, 0u64);
            for r in records {
                let c = r.cycle_counts[i * k_max + k - 1] as u64;
                s += c;
                sq += c * c;
            }
            row.push(Moment::from_sums(k, s, sq, samples));
        }
        cycle_counts.push(row);
    }
    let mut l_n = Vec::with_capacity(k_max);
    let mut running: Vec<u64> = vec![0; samples];
    for k in 1..=k_max {
        for (acc, r) in running.iter_mut().zip(records) {
            *acc += (0..relators).map(|i| r.cycle_counts[i * k_max + k - 1] as u64).sum::<u64>();
        }
        let s: u64 = running.iter().sum();
        let sq: u64 = running.iter().map(|x| x * x).sum();
        let m = Moment::from_sums(k, s, sq, samples);
        let mut hist = std::collections::BTreeMap::new();
        for &x in &running {
            *hist.entry(x as usize).or_insert(0usize) += 1;
        }
        l_n.push(LnStats { k, mean: m.mean, variance: m.variance, stderr: m.stderr, histogram: hist.into_iter().collect() });
    }
    let count = |f: &dyn Fn(&Record) -> bool| records.iter().filter(|r| f(r)).count();
    let transitive = Rate::new(count(&|r| r.transitive), samples);
    let has_flags = records.first().is_some_and(|r| r.flags.is_some());
    let rate = |f: fn(&Flags) -> bool| {
        has_flags.then(|| Rate::new(count(&|r| r.flags.as_ref().is_some_and(f)), samples))
    };
    DegreeStats {
        n,
        samples,
        cycle_counts,
        l_n,
        transitive,
        embedded: rate(|f| f.embedded),
        disjoint: rate(|f| f.disjoint),
        collapse_valid: rate(|f| f.collapse_valid),
        y_c_prime: rate(|f| f.y_c_prime),
        success: rate(|f| f.success),
    }
}

/// Runs every degree of `cfg` on `jobs` workers (`None` = all cores).
pub fn run_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<StatReport, ExperimentError> {
    if cfg.samples == 0 {
        return Err(ExperimentError::Config("samples must be at least 1".into()));
    }
    if cfg.degrees.is_empty() || cfg.degrees.contains(&0) {
        return Err(ExperimentError::Config("degrees must be a nonempty list of positive integers".into()));
    }
    let model = CoverModel::new(&cfg.presentation, cfg.lambda, cfg.rule, false)?;
    let k_max = cfg.k_max.unwrap_or_else(|| default_k_max(&model));
    if k_max == 0 {
        return Err(ExperimentError::Config("k_max must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    let started = Instant::now();
    let started_unix =
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let t = model.presentation().generator_count();
    let relators = model.presentation().relator_count();
    let degrees = pool.install(|| {
        cfg.degrees
            .iter()
            .map(|&n| {
                let records: Vec<Record> = (0..cfg.samples as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sample_stream(cfg.seed, n as u64, i);
                        let sigma = SigmaTuple::sample_uniform(t, n, &mut rng).expect("n > 0");
                        sample_record(&model, &sigma, k_max, cfg.outcomes)
                    })
                    .collect();
                fold(n, &records, relators, k_max)
            })
            .collect()
    });
    Ok(StatReport {
        config: ConfigEcho {
            presentation: cfg.presentation.to_string(),
            lambda: fmt_rational(&cfg.lambda),
            critical_index: fmt_rational(&model.constants().critical_index),
            degrees: cfg.degrees.clone(),
            samples: cfg.samples,
            seed: cfg.seed,
            k_max,
            collapse_rule: rule_name(cfg.rule).into(),
            outcomes: cfg.outcomes,
            version: version_string(),
        },
        degrees,
        runtime: Some(RuntimeMeta {
            wall_clock_seconds: started.elapsed().as_secs_f64(),
            jobs: pool.current_num_threads(),
            started_unix,
        }),
    })
}

/// Empirical `P(L_n(k) ≤ m)` with a 95% Wilson interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailEstimate {
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    pub samples: usize,
}

pub fn tail_distribution(report: &StatReport, n: usize, k: usize, m: i64) -> Result<TailEstimate, ExperimentError> {
    let missing = || ExperimentError::StatisticNotCollected(format!("L_n(k) for n={n}, k={k}"));
    let d = report.degrees.iter().find(|d| d.n == n).ok_or_else(missing)?;
    let ln = d.l_n.iter().find(|l| l.k == k).ok_or_else(missing)?;
    let hits: usize = ln.histogram.iter().filter(|&&(v, _)| (v as i64) <= m).map(|&(_, c)| c).sum();
    let total = d.samples as f64;
    let p = hits as f64 / total;
    let z = 1.959_963_984_540_054_f64;
    let denom = 1.0 + z * z / total;
    let centre = (p + z * z / (2.0 * total)) / denom;
    let half = z * (p * (1.0 - p) / total + z * z / (4.0 * total * total)).sqrt() / denom;
    // the interval touches 0 or 1 exactly at the extremes
    let lower = if hits == 0 { 0.0 } else { (centre - half).max(0.0) };
    let upper = if hits == d.samples { 1.0 } else { (centre + half).min(1.0) };
    Ok(TailEstimate { p, lower, upper, samples: d.samples })
}

/// One `(statistic, value, stderr)` triple per CSV row.
pub fn statistic_rows(d: &DegreeStats) -> Vec<(String, f64, f64)> {
    let mut rows = Vec::new();
    for (i, row) in d.cycle_counts.iter().enumerate() {
        for m in row {
            rows.push((format!("cycles_r{}_k{}", i + 1, m.k), m.mean, m.stderr));
        }
    }
    for l in &d.l_n {
        rows.push((format!("L_k{}", l.k), l.mean, l.stderr));
    }
    rows.push(("transitive".into(), d.transitive.rate, d.transitive.stderr));
    for (name, r) in [
        ("embedded", &d.embedded),
        ("disjoint", &d.disjoint),
        ("collapse_valid", &d.collapse_valid),
        ("y_c_prime", &d.y_c_prime),
        ("success", &d.success),
    ] {
        if let Some(r) = r {
            rows.push((name.into(), r.rate, r.stderr));
        }
    }
    rows
}

/// `json`: the full report; `csv`: columns `n,statistic,value,stderr,samples`.
pub fn export_report(report: &StatReport, format: &str) -> Result<String, ExperimentError> {
    match format {
        "json" => Ok(serde_json::to_string_pretty(report)? + "\n"),
        "csv" => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "statistic", "value", "stderr", "samples"])?;
            for d in &report.degrees {
                for (name, value, stderr) in statistic_rows(d) {
                    w.write_record([d.n.to_string(), name, value.to_string(), stderr.to_string(), d.samples.to_string()])?;
                }
            }
            let bytes = w.into_inner().map_err(|e| ExperimentError::Config(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        other => Err(ExperimentError::UnsupportedFormat(other.into())),
    }
}
