//! JSON shapes for covers, overlap tables, outcomes and presentations, plus
//! the `p/q` rational syntax.

use branchcover_core::complex::PolygonalComplex;
use branchcover_core::group::TietzeMove;
use branchcover_core::overlap::{overlap_steps, OverlapCensus, SizeClass};
use branchcover_core::presentation::AcceptabilityReport;
use branchcover_core::{
    AbelianInvariants, BranchedCover, CollapseInvalid, Constants, DiskClassification, Orientation, OutPresentation,
    OverlapSpec, OverlapTable, Presentation, Rational, SampleOutcome,
};
use serde::{Deserialize, Serialize};

/// Parses `p/q` or an integer.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: i128 = p.parse().map_err(|_| format!("bad numerator in {text:?}"))?;
    let q: i128 = q.parse().map_err(|_| format!("bad denominator in {text:?}"))?;
    if q == 0 {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(p, q))
}

pub fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Serialize)]
pub struct AcceptabilityJson {
    pub rank_ok: bool,
    /// `(relator, root, exponent)` for relators that are proper powers.
    pub proper_powers: Vec<(usize, String, usize)>,
    pub duplicate_pairs: Vec<(usize, usize)>,
    pub inverse_pair_warnings: Vec<(usize, usize)>,
    pub acceptable: bool,
}

impl AcceptabilityJson {
    pub fn new(p: &Presentation, r: &AcceptabilityReport) -> Self {
        AcceptabilityJson {
            rank_ok: r.rank_ok,
            proper_powers: r
                .proper_power_relators()
                .map(|v| (v.relator, p.format_word(&v.root), v.exponent))
                .collect(),
            duplicate_pairs: r.duplicate_pairs.clone(),
            inverse_pair_warnings: r.inverse_pairs.clone(),
            acceptable: r.acceptable,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EdgeJson {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Serialize)]
pub struct DiskJson {
    pub relator: usize,
    pub index: usize,
    pub base_point: usize,
    pub boundary: String,
}

#[derive(Debug, Serialize)]
pub struct ValidityJson {
    pub connected: bool,
    pub euler_characteristic: i64,
    pub is_branched_cover: bool,
    pub edge_occurrences: Vec<usize>,
    pub base_occurrences: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct CoverJson {
    pub degree: usize,
    pub sigma: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub disks: Vec<DiskJson>,
    pub duplicate_loops_dropped: usize,
    pub validity: ValidityJson,
}

impl CoverJson {
    pub fn new(c: &BranchedCover) -> Self {
        let cx = c.complex();
        let v = c.validity();
        CoverJson {
            degree: c.degree(),
            sigma: c.sigma().perms().iter().map(|p| p.to_string()).collect(),
            edges: cx
                .edges()
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeJson { name: cx.edge_name(id).to_string(), source: e.source + 1, target: e.target + 1 })
                .collect(),
            disks: c
                .disks()
                .iter()
                .enumerate()
                .map(|(d, disk)| DiskJson {
                    relator: disk.relator,
                    index: disk.index,
                    base_point: disk.base_vertex + 1,
                    boundary: c.format_boundary(d),
                })
                .collect(),
            duplicate_loops_dropped: c.duplicate_loops(),
            validity: ValidityJson {
                connected: v.connected,
                euler_characteristic: v.euler_characteristic,
                is_branched_cover: v.is_branched_cover,
                edge_occurrences: v.edge_occurrences,
                base_occurrences: v.base_occurrences,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OverlapJson {
    pub disk: usize,
    pub other: usize,
    pub orientation: &'static str,
    pub start: usize,
    pub other_start: usize,
    pub length: usize,
    pub saturated: bool,
    pub word: String,
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Same => "same",
        Orientation::Opposite => "opposite",
    }
}

impl OverlapJson {
    /// `name` renders a letter index of `boundaries`.
    pub fn new(s: &OverlapSpec, word: String) -> Self {
        OverlapJson {
            disk: s.disk,
            other: s.other,
            orientation: orientation_name(s.orientation),
            start: s.start,
            other_start: s.other_start,
            length: s.length,
            saturated: s.saturated,
            word,
        }
    }

    pub fn for_complex(c: &PolygonalComplex, s: &OverlapSpec) -> Self {
        let w = overlap_steps(&c.disks()[s.disk], s.start, s.length);
        OverlapJson::new(s, c.format_steps(&w))
    }

    pub fn for_presentation(p: &Presentation, s: &OverlapSpec) -> Self {
        let w = overlap_steps(&p.relators()[s.disk], s.start, s.length);
        OverlapJson::new(s, p.format_word(&w))
    }
}

#[derive(Debug, Serialize)]
pub struct OverlapTableJson {
    pub ratios: Vec<String>,
    pub global_ratio: String,
    pub max_length: usize,
    pub overlaps: Vec<OverlapJson>,
}

impl OverlapTableJson {
    pub fn new(t: &OverlapTable, render: impl Fn(&OverlapSpec) -> OverlapJson) -> Self {
        OverlapTableJson {
            ratios: t.ratios().iter().map(fmt_rational).collect(),
            global_ratio: fmt_rational(&t.global_ratio()),
            max_length: t.max_length(),
            overlaps: t.specs().iter().map(render).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConstantsJson {
    pub r_l: usize,
    pub r_s: usize,
    pub lambda: String,
    pub overlap_bound: String,
    pub critical_index: String,
}

impl From<&Constants> for ConstantsJson {
    fn from(c: &Constants) -> Self {
        ConstantsJson {
            r_l: c.r_l,
            r_s: c.r_s,
            lambda: fmt_rational(&c.lambda),
            overlap_bound: fmt_rational(&c.overlap_bound),
            critical_index: fmt_rational(&c.critical_index),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationJson {
    pub rule: &'static str,
    pub worrisome_count: usize,
    pub large_threshold: String,
    pub good: Vec<bool>,
    pub size: Vec<&'static str>,
    pub collapse_set: Vec<usize>,
}

pub fn rule_name(rule: branchcover_core::CollapseRule) -> &'static str {
    match rule {
        branchcover_core::CollapseRule::Worrisome => "index < I",
        branchcover_core::CollapseRule::SmallInclusive => "index <= I",
    }
}

impl From<&DiskClassification> for ClassificationJson {
    fn from(c: &DiskClassification) -> Self {
        ClassificationJson {
            rule: rule_name(c.rule),
            worrisome_count: c.worrisome_count,
            large_threshold: fmt_rational(&c.large_threshold),
            good: c.good.clone(),
            size: c
                .size
                .iter()
                .map(|s| match s {
                    SizeClass::Small => "small",
                    SizeClass::Medium => "medium",
                    SizeClass::Large => "large",
                })
                .collect(),
            collapse_set: c.collapse_set.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CensusJson {
    pub counts: Vec<usize>,
    pub bound: String,
    pub exceeding: Vec<usize>,
}

impl From<&OverlapCensus> for CensusJson {
    fn from(c: &OverlapCensus) -> Self {
        CensusJson { counts: c.counts.clone(), bound: fmt_rational(&c.bound), exceeding: c.exceeding.clone() }
    }
}

#[derive(Debug, Serialize)]
pub struct CollapseFailureJson {
    pub kind: &'static str,
    pub disks: Vec<usize>,
    pub vertex: Option<usize>,
    /// Boundaries of the offending disks.
    pub witness: Vec<String>,
}

impl CollapseFailureJson {
    pub fn new(c: &PolygonalComplex, e: &CollapseInvalid) -> Self {
        let (kind, disks, vertex) = match *e {
            CollapseInvalid::NotEmbedded { disk, vertex } => ("not_embedded", vec![disk], Some(vertex + 1)),
            CollapseInvalid::Intersecting { disk, other, vertex } => ("intersecting", vec![disk, other], Some(vertex + 1)),
            CollapseInvalid::EmptyBoundary { disk } => ("empty_boundary", vec![disk], None),
        };
        let witness = disks.iter().map(|&d| c.format_boundary(d)).collect();
        CollapseFailureJson { kind, disks, vertex, witness }
    }
}

#[derive(Debug, Serialize)]
pub struct OutcomeJson {
    pub degree: usize,
    pub connected: bool,
    pub disk_count: usize,
    pub worrisome_count: usize,
    pub collapsed_count: usize,
    pub all_embedded: bool,
    pub pairwise_disjoint: bool,
    pub collapse_valid: bool,
    pub collapse_failure: Option<CollapseFailureJson>,
    pub y_satisfies_c_prime: Option<bool>,
    pub worst_ratio_in_y: Option<String>,
    pub euler_characteristic: i64,
    pub euler_characteristic_y: Option<i64>,
    pub success: bool,
}

impl OutcomeJson {
    pub fn new(cover: &BranchedCover, o: &SampleOutcome) -> Self {
        OutcomeJson {
            degree: o.degree,
            connected: o.connected,
            disk_count: o.disk_count,
            worrisome_count: o.worrisome_count,
            collapsed_count: o.collapsed_count,
            all_embedded: o.all_embedded,
            pairwise_disjoint: o.pairwise_disjoint,
            collapse_valid: o.collapse_valid,
            collapse_failure: o.collapse_failure.as_ref().map(|e| CollapseFailureJson::new(cover.complex(), e)),
            y_satisfies_c_prime: o.y_satisfies_c_prime,
            worst_ratio_in_y: o.worst_ratio_in_y.as_ref().map(fmt_rational),
            euler_characteristic: o.euler_characteristic,
            euler_characteristic_y: o.euler_characteristic_y,
            success: o.success,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MoveJson {
    DropEmptyRelator { relator: usize },
    Eliminate { generator: String, relator: usize, replacement: String },
}

impl From<&TietzeMove> for MoveJson {
    fn from(m: &TietzeMove) -> Self {
        match m {
            TietzeMove::DropEmptyRelator { relator } => MoveJson::DropEmptyRelator { relator: *relator },
            TietzeMove::Eliminate { generator, relator, replacement } => MoveJson::Eliminate {
                generator: generator.clone(),
                relator: *relator,
                replacement: replacement.clone(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AbelianJson {
    pub free_rank: usize,
    pub torsion: Vec<u128>,
}

impl From<&AbelianInvariants> for AbelianJson {
    fn from(a: &AbelianInvariants) -> Self {
        AbelianJson { free_rank: a.free_rank, torsion: a.torsion.clone() }
    }
}

#[derive(Debug, Serialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    /// Same content in the input text format.
    pub text: String,
    pub moves: Vec<MoveJson>,
    pub abelian: AbelianJson,
}

impl From<&OutPresentation> for PresentationJson {
    fn from(o: &OutPresentation) -> Self {
        let p = &o.presentation;
        PresentationJson {
            generators: p.generator_names().to_vec(),
            relators: p.relators().iter().map(|r| p.format_word(r)).collect(),
            text: p.to_string(),
            moves: o.moves.iter().map(MoveJson::from).collect(),
            abelian: AbelianJson::from(&o.abelian_invariants()),
        }
    }
}

#[derive(Debug, Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}
