//! Overlaps, pieces, overlap ratios, the critical index and disk
//! classification.
//!
//! One engine serves three callers. Boundaries are cyclic sequences of
//! letters; for base overlaps the letters are generators, for pieces they
//! are edge ids. A match between `D` at `p` and `D'` at `q` reads `D`
//! forwards and `D'` forwards (same orientation) or backwards with each step
//! inverted (opposite orientation). Matches are reported from their
//! left-maximal start.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::complex::PolygonalComplex;
use crate::cover::BranchedCover;
use crate::presentation::{Presentation, PresentationError};
use crate::word::{Letter, Word};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OverlapError {
    #[error("overlap between disks {disk} and {other} reached the cap {cap}")]
    OverlapCapExceeded { disk: usize, other: usize, cap: usize },
    #[error("lambda must satisfy 0 < lambda < 1")]
    InvalidLambda,
    #[error("presentation has no relators")]
    NoRelators,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Same,
    Opposite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OverlapSpec {
    pub disk: usize,
    pub other: usize,
    pub orientation: Orientation,
    /// Start in `disk`'s boundary.
    pub start: usize,
    /// Position in `other`'s boundary matched with `start`. For opposite
    /// orientation `other` is read backwards from here.
    pub other_start: usize,
    pub length: usize,
    /// The match never ends; `length` is the cap.
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapTable {
    specs: Vec<OverlapSpec>,
    boundary_lengths: Vec<usize>,
}

#[derive(Clone, Copy)]
enum Cap {
    /// Error at `M² + M` with `M` the longer boundary.
    Bounded,
    /// Saturate at `L + L'`; by Fine and Wilf a longer match is periodic.
    Saturating,
}

struct Engine<'a> {
    cycles: &'a [&'a [Letter]],
}

impl Engine<'_> {
    #[inline]
    fn at(&self, d: usize, i: i64) -> Letter {
        let c = self.cycles[d];
        c[i.rem_euclid(c.len() as i64) as usize]
    }

    #[inline]
    fn matches(&self, d: usize, p: usize, e: usize, q: usize, o: Orientation, x: i64) -> bool {
        match o {
            Orientation::Same => self.at(d, p as i64 + x) == self.at(e, q as i64 + x),
            Orientation::Opposite => self.at(d, p as i64 + x) == self.at(e, q as i64 - x).inverse(),
        }
    }

    fn run(
        &self,
        symbols: usize,
        cap_rule: Cap,
        filter: &dyn Fn(usize, usize) -> bool,
    ) -> Result<Vec<OverlapSpec>, OverlapError> {
        // occurrences grouped by symbol, counting-sort layout
        let mut starts = alloc::vec![0usize; symbols + 1];
        for c in self.cycles {
            for l in c.iter() {
                starts[l.index() + 1] += 1;
            }
        }
        for i in 0..symbols {
            starts[i + 1] += starts[i];
        }
        let mut fill = starts.clone();
        let mut occ = alloc::vec![(0u32, 0u32); starts[symbols]];
        for (d, c) in self.cycles.iter().enumerate() {
            for (p, l) in c.iter().enumerate() {
                occ[fill[l.index()]] = (d as u32, p as u32);
                fill[l.index()] += 1;
            }
        }
        let mut out = Vec::new();
        let mut saturated = BTreeSet::new();
        for list in starts.windows(2).map(|w| &occ[w[0]..w[1]]) {
            for &(d, p) in list {
                let (d, p) = (d as usize, p as usize);
                for &(e, q) in list {
                    let (e, q) = (e as usize, q as usize);
                    if (d == e && p == q) || !filter(d, e) {
                        continue;
                    }
                    let o = if self.cycles[d][p].is_inverse() == self.cycles[e][q].is_inverse() {
                        Orientation::Same
                    } else {
                        Orientation::Opposite
                    };
                    let (l, l2) = (self.cycles[d].len(), self.cycles[e].len());
                    let cap = match cap_rule {
                        Cap::Bounded => {
                            let m = l.max(l2);
                            m * m + m
                        }
                        Cap::Saturating => l + l2,
                    };
                    let spec = |start, other_start, length, saturated| OverlapSpec {
                        disk: d,
                        other: e,
                        orientation: o,
                        start,
                        other_start,
                        length,
                        saturated,
                    };
                    let on_cap = |saturated: &mut BTreeSet<OverlapSpec>| -> Result<(), OverlapError> {
                        if let Cap::Bounded = cap_rule {
                            return Err(OverlapError::OverlapCapExceeded { disk: d, other: e, cap });
                        }
                        let g = l.gcd(&l2);
                        let shift = match o {
                            Orientation::Same => (q + l2 * l - p) % g,
                            Orientation::Opposite => (q + p) % g,
                        };
                        saturated.insert(spec(0, shift, cap, true));
                        Ok(())
                    };
                    if self.matches(d, p, e, q, o, -1) {
                        let mut y = 1;
                        while y < cap && self.matches(d, p, e, q, o, -(y as i64) - 1) {
                            y += 1;
                        }
                        if y >= cap {
                            on_cap(&mut saturated)?;
                        }
                        continue;
                    }
                    let mut m = 1;
                    while m < cap && self.matches(d, p, e, q, o, m as i64) {
                        m += 1;
                    }
                    if m >= cap {
                        on_cap(&mut saturated)?;
                    } else {
                        out.push(spec(p, q, m, false));
                    }
                }
            }
        }
        out.extend(saturated);
        out.sort_unstable();
        Ok(out)
    }
}

fn symbol_bound(cycles: &[&[Letter]]) -> usize {
    cycles.iter().flat_map(|c| c.iter()).map(|l| l.index() + 1).max().unwrap_or(0)
}

/// Every maximal overlap between the periodic relator words, both
/// orientations, all ordered pairs including self-pairs. Relators are
/// cyclically reduced first. Reaching the `M² + M` cap is an error.
pub fn base_overlaps(p: &Presentation) -> Result<OverlapTable, OverlapError> {
    let reduced = p.cyclically_reduced()?;
    let cycles: Vec<&[Letter]> = reduced.relators().iter().map(|r| r.letters()).collect();
    let specs = Engine { cycles: &cycles }.run(p.generator_count(), Cap::Bounded, &|_, _| true)?;
    Ok(OverlapTable { specs, boundary_lengths: cycles.iter().map(|c| c.len()).collect() })
}

/// Every piece of a complex: maximal common subpaths by edge identity and
/// direction.
pub fn pieces_direct(c: &PolygonalComplex) -> OverlapTable {
    pieces_filtered(c, &|_, _| true)
}

/// Pieces between disk pairs accepted by `filter`.
pub fn pieces_filtered(c: &PolygonalComplex, filter: &dyn Fn(usize, usize) -> bool) -> OverlapTable {
    let cycles: Vec<&[Letter]> = c.disks().iter().map(|w| w.letters()).collect();
    let specs = Engine { cycles: &cycles }
        .run(c.edges().len().max(symbol_bound(&cycles)), Cap::Saturating, filter)
        .expect("saturating mode never fails");
    OverlapTable { specs, boundary_lengths: cycles.iter().map(|c| c.len()).collect() }
}

/// Lifts every class of `base` (a table for `cover.presentation()`) to the
/// cover. A base overlap of length `m` starting at relator positions `b, b'`
/// lifts once per vertex `v`, to the disks whose boundaries read those
/// positions from `v`.
pub fn lifted_overlaps(cover: &BranchedCover, base: &OverlapTable) -> OverlapTable {
    let n = cover.degree();
    let rel_lens: Vec<usize> = cover.presentation().relators().iter().map(|r| r.len()).collect();
    let mut offsets = Vec::with_capacity(rel_lens.len());
    let mut total = 0;
    for &len in &rel_lens {
        offsets.push(total);
        total += len;
    }
    const NONE: (u32, u32) = (u32::MAX, u32::MAX);
    let mut lookup = alloc::vec![NONE; total * n];
    let complex = cover.complex();
    for (d, disk) in cover.disks().iter().enumerate() {
        let len = rel_lens[disk.relator];
        for (j, &s) in disk.boundary.iter().enumerate() {
            let v = complex.step_start(s);
            lookup[(offsets[disk.relator] + j % len) * n + v] = (d as u32, j as u32);
        }
    }
    let find = |r: usize, pos: usize, v: usize| {
        let (d, j) = lookup[(offsets[r] + pos) * n + v];
        (d != u32::MAX).then_some((d as usize, j as usize))
    };
    let lengths: Vec<usize> = cover.disks().iter().map(|d| d.boundary.len()).collect();
    let mut specs = Vec::with_capacity(base.specs.len() * n);
    for b in &base.specs {
        for v in 0..n {
            let Some((d, p)) = find(b.disk, b.start, v) else { continue };
            let other = match b.orientation {
                Orientation::Same => find(b.other, b.other_start, v),
                Orientation::Opposite => find(b.other, (b.other_start + 1) % rel_lens[b.other], v)
                    .map(|(e, s)| (e, (s + lengths[e] - 1) % lengths[e])),
            };
            let Some((e, q)) = other else { continue };
            specs.push(OverlapSpec { disk: d, other: e, start: p, other_start: q, ..*b });
        }
    }
    specs.sort_unstable();
    OverlapTable { specs, boundary_lengths: lengths }
}

impl OverlapTable {
    pub fn specs(&self) -> &[OverlapSpec] {
        &self.specs
    }

    pub fn boundary_lengths(&self) -> &[usize] {
        &self.boundary_lengths
    }

    /// Longest overlap of each disk (0 when it has none).
    pub fn max_lengths(&self) -> Vec<usize> {
        let mut out = alloc::vec![0; self.boundary_lengths.len()];
        for s in &self.specs {
            out[s.disk] = out[s.disk].max(s.length);
        }
        out
    }

    /// `o(D)`: longest overlap of `disk` over its boundary length.
    pub fn ratio(&self, disk: usize) -> Rational {
        let m = self.specs.iter().filter(|s| s.disk == disk).map(|s| s.length).max().unwrap_or(0);
        Rational::new(m as i128, self.boundary_lengths[disk] as i128)
    }

    pub fn ratios(&self) -> Vec<Rational> {
        self.max_lengths()
            .iter()
            .zip(&self.boundary_lengths)
            .map(|(&m, &l)| Rational::new(m as i128, l as i128))
            .collect()
    }

    /// `o(D, D')`.
    pub fn pair_ratio(&self, disk: usize, other: usize) -> Rational {
        let m = self
            .specs
            .iter()
            .filter(|s| s.disk == disk && s.other == other)
            .map(|s| s.length)
            .max()
            .unwrap_or(0);
        Rational::new(m as i128, self.boundary_lengths[disk] as i128)
    }

    /// `o(X)`, the largest ratio over all disks.
    pub fn global_ratio(&self) -> Rational {
        self.worst().map(|(r, _)| r).unwrap_or_else(|| Rational::from_integer(0))
    }

    /// An overlap of maximal ratio, ties broken by table order.
    pub fn worst(&self) -> Option<(Rational, OverlapSpec)> {
        let mut best: Option<(Rational, OverlapSpec)> = None;
        for s in &self.specs {
            let r = Rational::new(s.length as i128, self.boundary_lengths[s.disk] as i128);
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, *s));
            }
        }
        best
    }

    pub fn max_length(&self) -> usize {
        self.specs.iter().map(|s| s.length).max().unwrap_or(0)
    }
}

/// The steps of `boundary` covered by an overlap starting at `start`.
pub fn overlap_steps(boundary: &Word, start: usize, length: usize) -> Word {
    let l = boundary.len();
    (0..length.min(l)).map(|x| boundary[(start + x) % l]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallCancellationReport {
    pub satisfies: bool,
    pub worst_ratio: Rational,
    pub witness: Option<OverlapSpec>,
}

impl SmallCancellationReport {
    pub fn from_table(table: &OverlapTable, lambda: Rational) -> Self {
        match table.worst() {
            Some((r, s)) => SmallCancellationReport { satisfies: r < lambda, worst_ratio: r, witness: Some(s) },
            None => SmallCancellationReport { satisfies: true, worst_ratio: Rational::from_integer(0), witness: None },
        }
    }
}

/// Geometric `C'(λ)`: every piece is shorter than `λ` times its disk's
/// boundary.
pub fn check_small_cancellation(c: &PolygonalComplex, lambda: Rational) -> SmallCancellationReport {
    SmallCancellationReport::from_table(&pieces_direct(c), lambda)
}

/// `R_L`, `R_S`, `𝒪 = R_L² + R_L` and the critical index `I = 𝒪/(λ R_S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constants {
    pub r_l: usize,
    pub r_s: usize,
    pub lambda: Rational,
    pub overlap_bound: Rational,
    pub critical_index: Rational,
}

impl Constants {
    pub fn new(r_l: usize, r_s: usize, lambda: Rational) -> Result<Self, OverlapError> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        if lambda <= zero || lambda >= one {
            return Err(OverlapError::InvalidLambda);
        }
        let rl = r_l as i128;
        let overlap_bound = Rational::from_integer(rl * rl + rl);
        let critical_index = overlap_bound / (lambda * Rational::from_integer(r_s as i128));
        Ok(Constants { r_l, r_s, lambda, overlap_bound, critical_index })
    }

    /// Constants from the cyclically reduced relator lengths.
    pub fn for_presentation(p: &Presentation, lambda: Rational) -> Result<Self, OverlapError> {
        let (r_l, r_s) = p.cyclically_reduced()?.relator_length_bounds().ok_or(OverlapError::NoRelators)?;
        Constants::new(r_l, r_s, lambda)
    }

    /// `K = R_S⁻¹(1+λ⁻¹)𝒪·M²I(R_L𝒪)² + R_S⁻¹λ⁻¹𝒪` for worrisome count `M`.
    pub fn large_threshold(&self, m: usize) -> Rational {
        let one = Rational::from_integer(1);
        let rs_inv = one / Rational::from_integer(self.r_s as i128);
        let lam_inv = one / self.lambda;
        let o = self.overlap_bound;
        rs_inv * (one + lam_inv) * o * self.census_bound(m) + rs_inv * lam_inv * o
    }

    /// `M²I(R_L𝒪)²`, the bound on overlaps between one disk and the
    /// worrisome set.
    pub fn census_bound(&self, m: usize) -> Rational {
        let m = Rational::from_integer(m as i128);
        let rlo = Rational::from_integer(self.r_l as i128) * self.overlap_bound;
        m * m * self.critical_index * rlo * rlo
    }
}

/// Which disks are collapsed to form the quotient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CollapseRule {
    /// Index `< I`.
    #[default]
    Worrisome,
    /// Index `≤ I`.
    SmallInclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskClassification {
    pub constants: Constants,
    pub rule: CollapseRule,
    /// `index ≥ I` per disk.
    pub good: Vec<bool>,
    pub size: Vec<SizeClass>,
    pub worrisome_count: usize,
    pub large_threshold: Rational,
    /// Disks removed by the collapse under `rule`, ascending.
    pub collapse_set: Vec<usize>,
}

impl DiskClassification {
    pub fn from_indices(indices: &[usize], constants: Constants, rule: CollapseRule) -> Self {
        let i = constants.critical_index;
        let idx = |k: usize| Rational::from_integer(k as i128);
        let good: Vec<bool> = indices.iter().map(|&k| idx(k) >= i).collect();
        let worrisome_count = good.iter().filter(|g| !**g).count();
        let large_threshold = constants.large_threshold(worrisome_count);
        let size = indices
            .iter()
            .map(|&k| {
                if idx(k) <= i {
                    SizeClass::Small
                } else if idx(k) > large_threshold {
                    SizeClass::Large
                } else {
                    SizeClass::Medium
                }
            })
            .collect();
        let collapse_set = indices
            .iter()
            .enumerate()
            .filter(|&(_, &k)| match rule {
                CollapseRule::Worrisome => idx(k) < i,
                CollapseRule::SmallInclusive => idx(k) <= i,
            })
            .map(|(d, _)| d)
            .collect();
        DiskClassification { constants, rule, good, size, worrisome_count, large_threshold, collapse_set }
    }

    pub fn is_collapsed(&self, d: usize) -> bool {
        self.collapse_set.binary_search(&d).is_ok()
    }
}

pub fn classify_disks(c: &BranchedCover, lambda: Rational, rule: CollapseRule) -> Result<DiskClassification, OverlapError> {
    let constants = Constants::for_presentation(c.presentation(), lambda)?;
    let indices: Vec<usize> = c.disks().iter().map(|d| d.index).collect();
    Ok(DiskClassification::from_indices(&indices, constants, rule))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapCensus {
    /// Overlaps between each surviving disk and the collapse set; 0 for
    /// collapsed disks.
    pub counts: Vec<usize>,
    pub bound: Rational,
    /// Disks whose count exceeds `bound`.
    pub exceeding: Vec<usize>,
}

/// Counts pieces of `c` between each surviving disk and the collapse set.
pub fn small_overlap_census(c: &BranchedCover, cls: &DiskClassification) -> OverlapCensus {
    let table = pieces_filtered(c.complex(), &|d, e| !cls.is_collapsed(d) && cls.is_collapsed(e));
    let mut counts = alloc::vec![0; c.disks().len()];
    for s in table.specs() {
        counts[s.disk] += 1;
    }
    let bound = cls.constants.census_bound(cls.worrisome_count);
    let exceeding = counts
        .iter()
        .enumerate()
        .filter(|&(_, &k)| Rational::from_integer(k as i128) > bound)
        .map(|(d, _)| d)
        .collect();
    OverlapCensus { counts, bound, exceeding }
}
