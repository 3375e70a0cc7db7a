//! Command-line front end. Machine-readable output goes to `--out` or
//! stdout, a short summary to stderr. Exit codes: 0 success, 1 domain
//! error, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use branchcover_core::overlap::{small_overlap_census, SmallCancellationReport};
use branchcover_core::{
    base_overlaps, build_cover, collapse_worrisome, lifted_overlaps, pi1_presentation, pieces_direct, tietze_simplify,
    validate_acceptable, BranchedCover, CollapseRule, ComplexError, Constants, CoverModel, PolygonalComplex,
    Presentation, Rational, SigmaTuple,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::experiment::{export_report, run_experiment, ExperimentConfig};
use crate::format::{
    fmt_rational, parse_rational, AcceptabilityJson, CensusJson, ClassificationJson, ConstantsJson, CoverJson,
    OutcomeJson, OverlapJson, OverlapTableJson, PresentationJson,
};
use crate::oracle::{exhaustive_oracle, ExactStatsJson, DEFAULT_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "branchcover", version, about = "Random branched covers of presentation 2-complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a presentation is acceptable.
    Validate(Common),
    /// Build the cover for a permutation tuple.
    Cover(CoverArgs),
    /// Overlaps, constants and C'(λ) for the base and optionally a cover.
    Analyze(AnalyzeArgs),
    /// Collapse the worrisome disks of a cover and test C'(λ) on the result.
    Quotient(QuotientArgs),
    /// Presentation of the fundamental group of a cover or its quotient.
    Pi1(Pi1Args),
    /// Seeded Monte Carlo over random tuples.
    Experiment(ExperimentArgs),
    /// Exact statistics by enumerating all tuples.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Presentation file.
    #[arg(short = 'p', long = "presentation")]
    pub presentation: PathBuf,
    /// Write machine-readable output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SigmaArgs {
    /// One permutation per generator, separated by ';', e.g. "(123);(12)".
    #[arg(long)]
    pub sigma: String,
    /// Degree; inferred from the largest point when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Allow presentations that are not acceptable.
    #[arg(long = "unsafe")]
    pub allow_unsafe: bool,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    /// Spanning tree edges, e.g. "a_1,a_2".
    #[arg(long)]
    pub tree: Option<String>,
    /// Include a presentation of the fundamental group.
    #[arg(long)]
    pub pi1: bool,
    /// Apply Tietze eliminations to that presentation.
    #[arg(long)]
    pub simplify: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_lambda)]
    pub lambda: Rational,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Collapse disks with index at most I instead of below I.
    #[arg(long)]
    pub small_inclusive: bool,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    #[arg(long, value_parser = parse_lambda)]
    pub lambda: Rational,
    #[arg(long)]
    pub small_inclusive: bool,
}

#[derive(Args, Debug)]
pub struct Pi1Args {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    /// Spanning tree edges; BFS from vertex 1 when omitted.
    #[arg(long)]
    pub tree: Option<String>,
    /// Apply Tietze eliminations.
    #[arg(long)]
    pub simplify: bool,
    /// Use the quotient by the worrisome disks at this λ.
    #[arg(long, value_parser = parse_lambda)]
    pub lambda: Option<Rational>,
    #[arg(long, value_enum, default_value_t = TextFormat::Json)]
    pub format: TextFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TextFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_lambda)]
    pub lambda: Rational,
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',', required = true)]
    pub degrees: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Omit wall-clock metadata.
    #[arg(long)]
    pub deterministic: bool,
    /// Largest cycle length tracked (default ceil(I)).
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Only collect cycle statistics and transitivity.
    #[arg(long)]
    pub no_outcomes: bool,
    #[arg(long)]
    pub small_inclusive: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_lambda)]
    pub lambda: Rational,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long)]
    pub k_max: Option<usize>,
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s)?;
    if r <= Rational::from_integer(0) || r >= Rational::from_integer(1) {
        return Err("lambda must lie strictly between 0 and 1".into());
    }
    Ok(r)
}

/// Largest point mentioned in a `;`-separated tuple.
pub fn infer_degree(sigma: &str) -> usize {
    let mut max = 0;
    for part in sigma.split(';') {
        let part = part.trim();
        if let Some(inner) = part.strip_prefix('[') {
            max = max.max(inner.trim_end_matches(']').split(',').filter(|t| !t.trim().is_empty()).count());
            continue;
        }
        for cycle in part.split(['(', ')']).filter(|c| !c.trim().is_empty()) {
            if cycle.contains(|c: char| c == ',' || c.is_whitespace()) {
                for tok in cycle.split(|c: char| c == ',' || c.is_whitespace()) {
                    max = max.max(tok.parse().unwrap_or(0));
                }
            } else {
                for c in cycle.chars() {
                    max = max.max(c.to_digit(10).unwrap_or(0) as usize);
                }
            }
        }
    }
    max.max(1)
}

enum Failure {
    Usage(String),
    Domain(String),
}

type CmdResult = Result<(), Failure>;

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_presentation(path: &PathBuf) -> Result<Presentation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("--presentation {}: {e}", path.display())))?;
    Presentation::parse(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn read_sigma(text: &str, n: Option<usize>) -> Result<SigmaTuple, Failure> {
    let n = n.unwrap_or_else(|| infer_degree(text));
    SigmaTuple::parse(text, n).map_err(|e| Failure::Usage(format!("--sigma: {e}")))
}

fn emit(out: &Option<PathBuf>, body: &str) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Domain(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(domain)
        }
    }
}

fn emit_json(out: &Option<PathBuf>, value: &impl Serialize) -> CmdResult {
    emit(out, &(serde_json::to_string_pretty(value).map_err(domain)? + "\n"))
}

fn parse_tree(c: &PolygonalComplex, text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|name| c.edge_index(name).ok_or_else(|| Failure::Usage(format!("--tree: unknown edge `{name}`"))))
        .collect()
}

fn tree_error(e: ComplexError) -> Failure {
    match e {
        ComplexError::InvalidTree { .. } => Failure::Usage(format!("--tree: {e}")),
        e => domain(e),
    }
}

fn build(p: &Presentation, s: &SigmaArgs) -> Result<BranchedCover, Failure> {
    let sigma = read_sigma(&s.sigma, s.n)?;
    build_cover(p, &sigma, s.allow_unsafe).map_err(domain)
}

fn rule(small_inclusive: bool) -> CollapseRule {
    if small_inclusive {
        CollapseRule::SmallInclusive
    } else {
        CollapseRule::Worrisome
    }
}

fn cmd_validate(a: &Common) -> CmdResult {
    let p = read_presentation(&a.presentation)?;
    let report = validate_acceptable(&p).map_err(domain)?;
    emit_json(&a.out, &AcceptabilityJson::new(&p, &report))?;
    for (i, j) in &report.inverse_pairs {
        eprintln!("warning: relators {} and {} are inverse up to conjugacy", i + 1, j + 1);
    }
    if report.acceptable {
        eprintln!("acceptable");
        Ok(())
    } else {
        Err(Failure::Domain("presentation is not acceptable".into()))
    }
}

fn pi1_json(c: &PolygonalComplex, tree: Option<&str>, simplify: bool) -> Result<serde_json::Value, Failure> {
    let tree = tree.map(|t| parse_tree(c, t)).transpose()?;
    let out = pi1_presentation(c, tree.as_deref()).map_err(tree_error)?;
    let mut v = json!({ "presentation": PresentationJson::from(&out) });
    if simplify {
        v["simplified"] = serde_json::to_value(PresentationJson::from(&tietze_simplify(&out))).map_err(domain)?;
    }
    Ok(v)
}

fn cmd_cover(a: &CoverArgs) -> CmdResult {
    let p = read_presentation(&a.common.presentation)?;
    let cover = build(&p, &a.sigma)?;
    let mut v = serde_json::to_value(CoverJson::new(&cover)).map_err(domain)?;
    if a.pi1 || a.simplify {
        v["pi1"] = pi1_json(cover.complex(), a.tree.as_deref(), a.simplify)?;
    }
    emit_json(&a.common.out, &v)?;
    eprintln!(
        "degree {}, {} disks, euler characteristic {}",
        cover.degree(),
        cover.disks().len(),
        cover.euler_characteristic()
    );
    Ok(())
}

fn cmd_analyze(a: &AnalyzeArgs) -> CmdResult {
    let p = read_presentation(&a.common.presentation)?;
    let reduced = p.cyclically_reduced().map_err(domain)?;
    let table = base_overlaps(&reduced).map_err(domain)?;
    let constants = Constants::for_presentation(&reduced, a.lambda).map_err(domain)?;
    let base_sc = SmallCancellationReport::from_table(&table, a.lambda);
    let mut v = json!({
        "constants": ConstantsJson::from(&constants),
        "base": {
            "overlaps": OverlapTableJson::new(&table, |s| OverlapJson::for_presentation(&reduced, s)),
            "c_prime": sc_json(&base_sc),
        },
    });
    if let Some(sigma) = &a.sigma {
        let sigma = read_sigma(sigma, a.n)?;
        let model = CoverModel::new(&p, a.lambda, rule(a.small_inclusive), false).map_err(domain)?;
        let cover = model.build(&sigma).map_err(domain)?;
        let cls = model.classify(&cover);
        let lifted = lifted_overlaps(&cover, &table);
        let pieces = pieces_direct(cover.complex());
        let census = small_overlap_census(&cover, &cls);
        v["cover"] = json!({
            "classification": ClassificationJson::from(&cls),
            "lifted_overlaps": OverlapTableJson::new(&lifted, |s| OverlapJson::for_complex(cover.complex(), s)),
            "pieces_match_lifts": lifted == pieces,
            "c_prime": sc_json(&SmallCancellationReport::from_table(&pieces, a.lambda)),
            "census": CensusJson::from(&census),
        });
    }
    emit_json(&a.common.out, &v)?;
    eprintln!(
        "o(X) = {}, I = {}, C'({}) {}",
        fmt_rational(&table.global_ratio()),
        fmt_rational(&constants.critical_index),
        fmt_rational(&a.lambda),
        if base_sc.satisfies { "holds" } else { "fails" }
    );
    Ok(())
}

fn sc_json(r: &SmallCancellationReport) -> serde_json::Value {
    json!({ "satisfies": r.satisfies, "worst_ratio": fmt_rational(&r.worst_ratio), "witness": r.witness.map(|w| (w.disk, w.other, w.start, w.length)) })
}

fn cmd_quotient(a: &QuotientArgs) -> CmdResult {
    let p = read_presentation(&a.common.presentation)?;
    let model = CoverModel::new(&p, a.lambda, rule(a.small_inclusive), a.sigma.allow_unsafe).map_err(domain)?;
    let sigma = read_sigma(&a.sigma.sigma, a.sigma.n)?;
    let cover = model.build(&sigma).map_err(domain)?;
    let outcome = model.outcome_for(&cover);
    let mut v = json!({ "outcome": OutcomeJson::new(&cover, &outcome) });
    if let Ok(q) = collapse_worrisome(&cover, &model.classify(&cover)) {
        let y = &q.complex;
        v["quotient"] = json!({
            "vertices": y.vertex_count(),
            "edges": y.edges().len(),
            "disks": (0..y.disks().len()).map(|d| y.format_boundary(d)).collect::<Vec<_>>(),
            "disk_origin": q.disk_origin,
            "collapsed": q.collapsed,
            "witness_piece": outcome.witness.map(|w| OverlapJson::for_complex(y, &w)),
        });
    }
    emit_json(&a.common.out, &v)?;
    eprintln!(
        "worrisome {}, collapse {}, success {}",
        outcome.worrisome_count,
        if outcome.collapse_valid { "valid" } else { "invalid" },
        outcome.success
    );
    Ok(())
}

fn cmd_pi1(a: &Pi1Args) -> CmdResult {
    let p = read_presentation(&a.common.presentation)?;
    let cover = build(&p, &a.sigma)?;
    let quotient;
    let complex = match a.lambda {
        Some(lambda) => {
            let model = CoverModel::new(&p, lambda, CollapseRule::Worrisome, a.sigma.allow_unsafe).map_err(domain)?;
            quotient = collapse_worrisome(&cover, &model.classify(&cover)).map_err(domain)?;
            &quotient.complex
        }
        None => cover.complex(),
    };
    let tree = a.tree.as_deref().map(|t| parse_tree(complex, t)).transpose()?;
    let mut out = pi1_presentation(complex, tree.as_deref()).map_err(tree_error)?;
    if a.simplify {
        out = tietze_simplify(&out);
    }
    match a.format {
        TextFormat::Json => emit_json(&a.common.out, &PresentationJson::from(&out))?,
        TextFormat::Text => emit(&a.common.out, &out.presentation.to_string())?,
    }
    eprintln!("{} generators, {} relators", out.presentation.generator_count(), out.presentation.relator_count());
    Ok(())
}

fn cmd_experiment(a: &ExperimentArgs) -> CmdResult {
    let p = read_presentation(&a.common.presentation)?;
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    if a.degrees.contains(&0) {
        return Err(Failure::Usage("--degrees must be positive".into()));
    }
    if a.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let mut cfg = ExperimentConfig::new(p, a.lambda, a.degrees.clone(), a.samples, a.seed);
    cfg.k_max = a.k_max;
    cfg.outcomes = !a.no_outcomes;
    cfg.rule = rule(a.small_inclusive);
    let mut report = run_experiment(&cfg, a.jobs).map_err(domain)?;
    let runtime = report.runtime.clone();
    if a.deterministic {
        report.runtime = None;
    }
    let format = match a.format {
        ReportFormat::Json => "json",
        ReportFormat::Csv => "csv",
    };
    emit(&a.common.out, &export_report(&report, format).map_err(domain)?)?;
    for d in &report.degrees {
        let succ = d.success.as_ref().map(|r| format!(", success {:.4}", r.rate)).unwrap_or_default();
        eprintln!("n={}: transitive {:.4}{}", d.n, d.transitive.rate, succ);
    }
    if let (Some(r), false) = (runtime, a.deterministic) {
        eprintln!("{:.2}s on {} workers", r.wall_clock_seconds, r.jobs);
    }
    Ok(())
}

fn cmd_oracle(a: &OracleArgs) -> CmdResult {
    let p = read_presentation(&a.common.presentation)?;
    let stats = exhaustive_oracle(&p, a.n, a.lambda, a.k_max, a.budget).map_err(domain)?;
    emit_json(&a.common.out, &ExactStatsJson::from(&stats))?;
    eprintln!("{} tuples, transitive {}", stats.tuples, fmt_rational(&stats.transitive));
    Ok(())
}

/// Parses `args` and runs the subcommand; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Cover(a) => cmd_cover(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Quotient(a) => cmd_quotient(a),
        Command::Pi1(a) => cmd_pi1(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_inference() {
        assert_eq!(infer_degree("(123);(12)"), 3);
        assert_eq!(infer_degree("(1 10);(2,3)"), 10);
        assert_eq!(infer_degree("[2,1,3,4]"), 4);
        assert_eq!(infer_degree(""), 1);
    }
}
