//! Embeddedness and disjointness of the worrisome disks, the collapse of
//! those disks to points, and the per-sample pipeline.

use alloc::string::String;
use alloc::vec::Vec;

use crate::complex::{Edge, PolygonalComplex};
use crate::cover::{build_cover, BranchedCover, CoverError};
use crate::dsu::DisjointSets;
use crate::overlap::{
    base_overlaps, pieces_direct, CollapseRule, Constants, DiskClassification, OverlapError, OverlapSpec,
    OverlapTable, SmallCancellationReport,
};
use crate::perm::SigmaTuple;
use crate::presentation::{validate_acceptable, AcceptabilityReport, Presentation};
use crate::word::Word;
use crate::Rational;

/// Why a collapse was refused. Disk ids refer to the input complex.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CollapseInvalid {
    #[error("disk {disk} revisits vertex {vertex}")]
    NotEmbedded { disk: usize, vertex: usize },
    #[error("disks {disk} and {other} share vertex {vertex}")]
    Intersecting { disk: usize, other: usize, vertex: usize },
    #[error("disk {disk} would be left with an empty boundary")]
    EmptyBoundary { disk: usize },
}

/// True when no vertex is the start of two steps of disk `d`'s boundary.
pub fn is_embedded(c: &PolygonalComplex, d: usize) -> bool {
    first_repeat(c, d, &mut alloc::vec![false; c.vertex_count()]).is_none()
}

fn first_repeat(c: &PolygonalComplex, d: usize, mark: &mut [bool]) -> Option<usize> {
    let verts = c.boundary_vertices(d);
    let mut hit = None;
    for &v in &verts {
        if mark[v] {
            hit = Some(v);
            break;
        }
        mark[v] = true;
    }
    for &v in &verts {
        mark[v] = false;
    }
    hit
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WorrisomeGeometry {
    /// `(disk, embedded)` for each disk of the set.
    pub embedded: Vec<(usize, bool)>,
    /// Disk pairs sharing a boundary vertex, with the least shared vertex.
    pub intersecting: Vec<(usize, usize, usize)>,
}

impl WorrisomeGeometry {
    pub fn all_embedded(&self) -> bool {
        self.embedded.iter().all(|&(_, e)| e)
    }

    pub fn pairwise_disjoint(&self) -> bool {
        self.intersecting.is_empty()
    }
}

/// Embeddedness of each disk in `set` and every pair of them that meets.
pub fn worrisome_geometry(c: &PolygonalComplex, set: &[usize]) -> WorrisomeGeometry {
    let mut mark = alloc::vec![false; c.vertex_count()];
    let embedded = set.iter().map(|&d| (d, first_repeat(c, d, &mut mark).is_none())).collect();
    let mut touching: Vec<Vec<usize>> = alloc::vec![Vec::new(); c.vertex_count()];
    for &d in set {
        for v in c.boundary_vertices(d) {
            if touching[v].last() != Some(&d) {
                touching[v].push(d);
            }
        }
    }
    let mut intersecting: Vec<(usize, usize, usize)> = Vec::new();
    for (v, ds) in touching.iter_mut().enumerate() {
        ds.sort_unstable();
        ds.dedup();
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                intersecting.push((ds[i], ds[j], v));
            }
        }
    }
    // keep the least vertex per pair
    intersecting.sort_unstable();
    intersecting.dedup_by(|b, a| a.0 == b.0 && a.1 == b.1);
    WorrisomeGeometry { embedded, intersecting }
}

/// `Y`: the input with a set of disks collapsed to points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientComplex {
    pub complex: PolygonalComplex,
    /// Input vertex -> quotient vertex.
    pub vertex_class: Vec<usize>,
    /// Input edge -> quotient edge, `None` when deleted.
    pub edge_map: Vec<Option<usize>>,
    /// Quotient disk -> input disk.
    pub disk_origin: Vec<usize>,
    /// Quotient disk step -> step index in the input disk.
    pub step_origin: Vec<Vec<usize>>,
    pub collapsed: Vec<usize>,
}

/// Collapses each disk of `set` to a point: its boundary vertices merge, its
/// boundary edges and the disk are deleted, and surviving boundaries lose the
/// deleted steps. Requires embedded, pairwise vertex-disjoint disks.
pub fn collapse_disks(c: &PolygonalComplex, set: &[usize]) -> Result<QuotientComplex, CollapseInvalid> {
    let mut mark = alloc::vec![false; c.vertex_count()];
    for &d in set {
        if let Some(vertex) = first_repeat(c, d, &mut mark) {
            return Err(CollapseInvalid::NotEmbedded { disk: d, vertex });
        }
    }
    let geo = worrisome_geometry(c, set);
    if let Some(&(disk, other, vertex)) = geo.intersecting.iter().min_by_key(|t| (t.0, t.1)) {
        return Err(CollapseInvalid::Intersecting { disk, other, vertex });
    }

    let mut collapsed = set.to_vec();
    collapsed.sort_unstable();
    collapsed.dedup();
    let mut dsu = DisjointSets::new(c.vertex_count());
    let mut deleted = alloc::vec![false; c.edges().len()];
    let mut removed_disk = alloc::vec![false; c.disks().len()];
    for &d in &collapsed {
        removed_disk[d] = true;
        for &s in c.disks()[d].iter() {
            deleted[s.index()] = true;
            dsu.union(c.step_start(s), c.step_end(s));
        }
    }
    let classes = dsu.classes();
    let mut vertex_class = alloc::vec![0; c.vertex_count()];
    for (k, class) in classes.iter().enumerate() {
        for &v in class {
            vertex_class[v] = k;
        }
    }
    let mut edge_map = alloc::vec![None; c.edges().len()];
    let mut edges = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (id, e) in c.edges().iter().enumerate() {
        if !deleted[id] {
            edge_map[id] = Some(edges.len());
            edges.push(Edge { source: vertex_class[e.source], target: vertex_class[e.target] });
            names.push(c.edge_name(id).into());
        }
    }
    let mut disks = Vec::new();
    let mut disk_origin = Vec::new();
    let mut step_origin = Vec::new();
    for (d, boundary) in c.disks().iter().enumerate() {
        if removed_disk[d] {
            continue;
        }
        let mut steps = Vec::new();
        let mut origin = Vec::new();
        for (j, s) in boundary.iter().enumerate() {
            if let Some(e) = edge_map[s.index()] {
                steps.push(crate::word::Letter::new(e as u32, s.is_inverse()));
                origin.push(j);
            }
        }
        if steps.is_empty() {
            return Err(CollapseInvalid::EmptyBoundary { disk: d });
        }
        disks.push(Word::from_letters(steps));
        disk_origin.push(d);
        step_origin.push(origin);
    }
    let complex = PolygonalComplex::from_parts(classes.len(), edges, names, disks);
    Ok(QuotientComplex { complex, vertex_class, edge_map, disk_origin, step_origin, collapsed })
}

/// Collapses the disks selected by `cls.collapse_set`.
pub fn collapse_worrisome(c: &BranchedCover, cls: &DiskClassification) -> Result<QuotientComplex, CollapseInvalid> {
    collapse_disks(c.complex(), &cls.collapse_set)
}

/// Everything about a presentation that does not depend on the sample.
#[derive(Clone, Debug)]
pub struct CoverModel {
    presentation: Presentation,
    acceptability: AcceptabilityReport,
    constants: Constants,
    rule: CollapseRule,
    allow_unsafe: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("presentation is not acceptable")]
    NotAcceptable,
    #[error(transparent)]
    Overlap(#[from] OverlapError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

impl CoverModel {
    pub fn new(p: &Presentation, lambda: Rational, rule: CollapseRule, allow_unsafe: bool) -> Result<Self, ModelError> {
        let acceptability = validate_acceptable(p).map_err(OverlapError::from)?;
        if !acceptability.acceptable && !allow_unsafe {
            return Err(ModelError::NotAcceptable);
        }
        let presentation = p.cyclically_reduced().map_err(OverlapError::from)?;
        let constants = Constants::for_presentation(&presentation, lambda)?;
        Ok(CoverModel { presentation, acceptability, constants, rule, allow_unsafe })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn acceptability(&self) -> &AcceptabilityReport {
        &self.acceptability
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn rule(&self) -> CollapseRule {
        self.rule
    }

    /// Overlap table of the base presentation.
    pub fn base_overlaps(&self) -> Result<OverlapTable, OverlapError> {
        base_overlaps(&self.presentation)
    }

    pub fn build(&self, sigma: &SigmaTuple) -> Result<BranchedCover, CoverError> {
        build_cover(&self.presentation, sigma, self.allow_unsafe)
    }

    pub fn classify(&self, cover: &BranchedCover) -> DiskClassification {
        let indices: Vec<usize> = cover.disks().iter().map(|d| d.index).collect();
        DiskClassification::from_indices(&indices, self.constants, self.rule)
    }

    pub fn outcome(&self, sigma: &SigmaTuple) -> Result<SampleOutcome, CoverError> {
        let cover = self.build(sigma)?;
        Ok(self.outcome_for(&cover))
    }

    /// Runs classification, collapse and the `C'(λ)` check on `cover`.
    pub fn outcome_for(&self, cover: &BranchedCover) -> SampleOutcome {
        let cls = self.classify(cover);
        let geo = worrisome_geometry(cover.complex(), &cls.collapse_set);
        let connected = cover.sigma().is_transitive();
        let collapse = collapse_worrisome(cover, &cls);
        let (collapse_failure, y) = match collapse {
            Ok(q) => {
                let rep = SmallCancellationReport::from_table(&pieces_direct(&q.complex), self.constants.lambda);
                (None, Some((q, rep)))
            }
            Err(e) => (Some(e), None),
        };
        let y_satisfies_c_prime = y.as_ref().map(|(_, r)| r.satisfies);
        let success = connected && y_satisfies_c_prime == Some(true);
        SampleOutcome {
            degree: cover.degree(),
            connected,
            disk_count: cover.disks().len(),
            worrisome_count: cls.worrisome_count,
            collapsed_count: cls.collapse_set.len(),
            all_embedded: geo.all_embedded(),
            pairwise_disjoint: geo.pairwise_disjoint(),
            collapse_valid: collapse_failure.is_none(),
            collapse_failure,
            y_satisfies_c_prime,
            worst_ratio_in_y: y.as_ref().map(|(_, r)| r.worst_ratio),
            witness: y.as_ref().and_then(|(_, r)| r.witness),
            euler_characteristic: cover.euler_characteristic(),
            euler_characteristic_y: y.as_ref().map(|(q, _)| q.complex.euler_characteristic()),
            success,
        }
    }
}

/// Record of one run of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub degree: usize,
    pub connected: bool,
    pub disk_count: usize,
    /// Disks with index `< I`.
    pub worrisome_count: usize,
    /// Disks removed under the collapse rule in force.
    pub collapsed_count: usize,
    pub all_embedded: bool,
    pub pairwise_disjoint: bool,
    pub collapse_valid: bool,
    pub collapse_failure: Option<CollapseInvalid>,
    /// `None` when the collapse was refused.
    pub y_satisfies_c_prime: Option<bool>,
    pub worst_ratio_in_y: Option<Rational>,
    /// A worst piece of `Y`; disk ids refer to `Y`.
    pub witness: Option<OverlapSpec>,
    pub euler_characteristic: i64,
    pub euler_characteristic_y: Option<i64>,
    /// Connected, collapse valid and `Y` satisfies `C'(λ)`.
    pub success: bool,
}

/// One-shot pipeline with the default collapse rule.
pub fn sample_outcome(p: &Presentation, sigma: &SigmaTuple, lambda: Rational) -> Result<SampleOutcome, ModelError> {
    let model = CoverModel::new(p, lambda, CollapseRule::Worrisome, false)?;
    Ok(model.outcome(sigma)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Presentation {
        Presentation::parse("gens: a b\nrel: a^-1 b^2 a b^-1").unwrap()
    }

    #[test]
    fn example_cover_geometry() {
        let s = SigmaTuple::parse("(123);(12)", 3).unwrap();
        let c = build_cover(&example(), &s, false).unwrap();
        assert!(!is_embedded(c.complex(), 1));
        let geo = worrisome_geometry(c.complex(), &[0, 1]);
        assert_eq!(geo.intersecting.len(), 1);
        let model = CoverModel::new(&example(), Rational::new(1, 6), CollapseRule::Worrisome, false).unwrap();
        let cls = model.classify(&c);
        assert_eq!(cls.collapse_set, [0, 1]);
        let err = collapse_worrisome(&c, &cls).unwrap_err();
        assert!(matches!(err, CollapseInvalid::NotEmbedded { disk: 0, .. }));
        let out = model.outcome(&s).unwrap();
        assert!(!out.success && !out.collapse_valid);
    }

    #[test]
    fn identity_sample_fails() {
        let s = SigmaTuple::identity(2, 3).unwrap();
        let out = sample_outcome(&example(), &s, Rational::new(1, 6)).unwrap();
        assert!(!out.connected && !out.collapse_valid && !out.success);
    }

    #[test]
    fn collapse_of_embedded_disk_preserves_chi() {
        // two triangles sharing no vertex, joined by an edge
        let edges = alloc::vec![
            Edge { source: 0, target: 1 },
            Edge { source: 1, target: 2 },
            Edge { source: 2, target: 0 },
            Edge { source: 0, target: 3 },
            Edge { source: 3, target: 3 },
        ];
        let names = ["x", "y", "z", "w", "u"].iter().map(|s| String::from(*s)).collect();
        use crate::word::Letter;
        let tri = Word::from_letters(alloc::vec![Letter::pos(0), Letter::pos(1), Letter::pos(2)]);
        let other = Word::from_letters(alloc::vec![Letter::pos(3), Letter::pos(4), Letter::neg(3), Letter::pos(0), Letter::neg(0)]);
        let c = PolygonalComplex::new(4, edges, names, alloc::vec![tri, other]).unwrap();
        let q = collapse_disks(&c, &[0]).unwrap();
        assert_eq!(q.complex.euler_characteristic(), c.euler_characteristic());
        assert_eq!(q.complex.vertex_count(), 2);
        assert_eq!(q.complex.disks()[0].len(), 3);
        assert_eq!(q.step_origin[0], [0, 1, 2]);
    }
}
