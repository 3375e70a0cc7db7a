//! The branched cover `X(σ)` determined by a permutation tuple.
//!
//! Vertices are `v_1..v_n` (0-based internally). Edge `x_{i,j}` runs from
//! `v_j` to `v_{σ_i(j)}` and has id `i·n + j`. Each cycle of the word map
//! `r(σ)` contributes one disk whose boundary is traced from the cycle's
//! least vertex.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complex::{Edge, PolygonalComplex};
use crate::perm::{word_map, PermError, SigmaTuple};
use crate::presentation::{validate_acceptable, Presentation, PresentationError};
use crate::word::{least_rotation, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("presentation is not acceptable")]
    NotAcceptable,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Permutation(#[from] PermError),
}

/// The 1-skeleton of the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSkeleton {
    degree: usize,
    generators: usize,
    edges: Vec<Edge>,
}

impl CoverSkeleton {
    pub fn build(sigma: &SigmaTuple) -> Self {
        let n = sigma.degree();
        let mut edges = Vec::with_capacity(n * sigma.len());
        for p in sigma.perms() {
            for j in 0..n {
                edges.push(Edge { source: j, target: p.apply0(j) });
            }
        }
        CoverSkeleton { degree: n, generators: sigma.len(), edges }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Id of `x_{i,j}` for generator `i` and 0-based source `j`.
    #[inline]
    pub fn edge_id(&self, generator: usize, source: usize) -> usize {
        generator * self.degree + source
    }

    /// `(generator, 0-based source)` of an edge id.
    #[inline]
    pub fn edge_label(&self, id: usize) -> (usize, usize) {
        (id / self.degree, id % self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedDisk {
    pub relator: usize,
    /// Branching index: the length of the corresponding cycle of `r(σ)`.
    pub index: usize,
    /// 0-based least vertex of the cycle; the boundary starts here.
    pub base_vertex: usize,
    /// Steps over cover edge ids.
    pub boundary: Word,
}

#[derive(Clone, Debug)]
pub struct BranchedCover {
    presentation: Presentation,
    sigma: SigmaTuple,
    skeleton: CoverSkeleton,
    disks: Vec<LiftedDisk>,
    complex: PolygonalComplex,
    /// Disks dropped because their boundary repeated another's up to rotation.
    duplicate_loops: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverValidityReport {
    pub connected: bool,
    pub euler_characteristic: i64,
    /// Occurrences of each cover edge in disk boundaries.
    pub edge_occurrences: Vec<usize>,
    /// Occurrences of each base generator in the relators.
    pub base_occurrences: Vec<usize>,
    pub is_branched_cover: bool,
    pub indices: Vec<usize>,
}

/// Traces the lift of `r` starting at 0-based vertex `v`, `times` times
/// around, pushing cover edge ids onto `out`. Returns the end vertex.
pub(crate) fn trace_lift(r: &[Letter], sigma: &SigmaTuple, v: usize, times: usize, out: &mut Vec<Letter>) -> usize {
    let n = sigma.degree();
    let mut cur = v;
    for _ in 0..times {
        for &l in r {
            let g = l.index();
            if l.is_inverse() {
                cur = sigma.inverse_of(g).apply0(cur);
                out.push(Letter::neg((g * n + cur) as u32));
            } else {
                out.push(Letter::pos((g * n + cur) as u32));
                cur = sigma.get(g).apply0(cur);
            }
        }
    }
    cur
}

/// Builds `X(σ)`. Relators are cyclically reduced first. Without
/// `allow_unsafe` the presentation must be acceptable; with it, disks whose
/// boundaries coincide up to rotation are attached once.
pub fn build_cover(p: &Presentation, sigma: &SigmaTuple, allow_unsafe: bool) -> Result<BranchedCover, CoverError> {
    if sigma.len() != p.generator_count() {
        return Err(PermError::TupleLength { expected: p.generator_count(), got: sigma.len() }.into());
    }
    let report = validate_acceptable(p)?;
    if !report.acceptable && !allow_unsafe {
        return Err(CoverError::NotAcceptable);
    }
    let presentation = p.cyclically_reduced()?;
    let n = sigma.degree();
    let skeleton = CoverSkeleton::build(sigma);
    let mut disks = Vec::new();
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut duplicate_loops = 0;
    for (i, r) in presentation.relators().iter().enumerate() {
        let w = word_map(r, sigma)?;
        for cycle in w.cycles0() {
            let v = cycle[0] as usize;
            let k = cycle.len();
            let mut steps = Vec::with_capacity(k * r.len());
            let end = trace_lift(r, sigma, v, k, &mut steps);
            debug_assert_eq!(end, v);
            let rot = least_rotation(&steps);
            let mut canon = steps[rot..].to_vec();
            canon.extend_from_slice(&steps[..rot]);
            if !seen.insert(canon) {
                duplicate_loops += 1;
                if allow_unsafe {
                    continue;
                }
            }
            disks.push(LiftedDisk { relator: i, index: k, base_vertex: v, boundary: Word::from_letters(steps) });
        }
    }
    let names = (0..skeleton.edges.len())
        .map(|id| {
            let (g, j) = skeleton.edge_label(id);
            alloc::format!("{}_{}", presentation.generator_name(g), j + 1)
        })
        .collect::<Vec<String>>();
    let complex = PolygonalComplex::from_parts(
        n,
        skeleton.edges.clone(),
        names,
        disks.iter().map(|d| d.boundary.clone()).collect(),
    );
    Ok(BranchedCover { presentation, sigma: sigma.clone(), skeleton, disks, complex, duplicate_loops })
}

impl BranchedCover {
    /// The cyclically reduced presentation the cover was built from.
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn sigma(&self) -> &SigmaTuple {
        &self.sigma
    }

    pub fn skeleton(&self) -> &CoverSkeleton {
        &self.skeleton
    }

    pub fn degree(&self) -> usize {
        self.skeleton.degree
    }

    pub fn disks(&self) -> &[LiftedDisk] {
        &self.disks
    }

    pub fn complex(&self) -> &PolygonalComplex {
        &self.complex
    }

    pub fn duplicate_loops(&self) -> usize {
        self.duplicate_loops
    }

    /// Decorated boundary of disk `d`, e.g. `a_2^-1 b_2 b_1 a_2 b_3^-1`.
    pub fn format_boundary(&self, d: usize) -> String {
        self.complex.format_boundary(d)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    pub fn validity(&self) -> CoverValidityReport {
        let t = self.skeleton.generators;
        let mut base_occurrences = alloc::vec![0usize; t];
        for r in self.presentation.relators() {
            for l in r.iter() {
                base_occurrences[l.index()] += 1;
            }
        }
        let mut edge_occurrences = alloc::vec![0usize; self.skeleton.edges.len()];
        for d in &self.disks {
            for s in d.boundary.iter() {
                edge_occurrences[s.index()] += 1;
            }
        }
        let is_branched_cover = edge_occurrences
            .iter()
            .enumerate()
            .all(|(id, &c)| c == base_occurrences[self.skeleton.edge_label(id).0]);
        CoverValidityReport {
            connected: self.sigma.is_transitive(),
            euler_characteristic: self.euler_characteristic(),
            edge_occurrences,
            base_occurrences,
            is_branched_cover,
            indices: self.disks.iter().map(|d| d.index).collect(),
        }
    }
}
