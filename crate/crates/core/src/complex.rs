//! Polygonal 2-complexes: directed edges plus disks attached along closed
//! edge paths.
//!
//! A disk boundary is stored as a [`Word`] over edge ids; an inverse letter
//! traverses its edge from target to source.

use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dsu::DisjointSets;
use crate::presentation::Presentation;
use crate::word::{DisplayWord, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("edge {edge} has an endpoint outside the vertex range")]
    VertexOutOfRange { edge: usize },
    #[error("disk {disk} uses unknown edge {edge}")]
    EdgeOutOfRange { disk: usize, edge: usize },
    #[error("disk {disk} boundary is not closed at step {step}")]
    OpenBoundary { disk: usize, step: usize },
    #[error("disk {disk} has an empty boundary")]
    EmptyBoundary { disk: usize },
    #[error("expected {expected} edge names, got {got}")]
    NameCountMismatch { expected: usize, got: usize },
    #[error("complex is disconnected")]
    Disconnected,
    #[error("invalid spanning tree: {reason}")]
    InvalidTree { reason: String },
    #[error("complex has no vertices")]
    NoVertices,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonalComplex {
    vertex_count: usize,
    edges: Vec<Edge>,
    edge_names: Vec<String>,
    disks: Vec<Word>,
}

/// Which edges became generators when a spanning tree was collapsed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseRecord {
    pub tree: Vec<usize>,
    /// Generator index -> edge id.
    pub generator_edges: Vec<usize>,
    /// Edge id -> generator index, `None` for tree edges.
    pub edge_generators: Vec<Option<usize>>,
}

impl PolygonalComplex {
    pub fn new(
        vertex_count: usize,
        edges: Vec<Edge>,
        edge_names: Vec<String>,
        disks: Vec<Word>,
    ) -> Result<Self, ComplexError> {
        if vertex_count == 0 {
            return Err(ComplexError::NoVertices);
        }
        if edge_names.len() != edges.len() {
            return Err(ComplexError::NameCountMismatch { expected: edges.len(), got: edge_names.len() });
        }
        if let Some(edge) = edges.iter().position(|e| e.source >= vertex_count || e.target >= vertex_count) {
            return Err(ComplexError::VertexOutOfRange { edge });
        }
        let c = PolygonalComplex { vertex_count, edges, edge_names, disks };
        for (d, boundary) in c.disks.iter().enumerate() {
            c.check_boundary(d, boundary)?;
        }
        Ok(c)
    }

    /// Unchecked constructor for callers that build closed boundaries by
    /// construction.
    pub(crate) fn from_parts(vertex_count: usize, edges: Vec<Edge>, edge_names: Vec<String>, disks: Vec<Word>) -> Self {
        debug_assert!(Self::new(vertex_count, edges.clone(), edge_names.clone(), disks.clone()).is_ok());
        PolygonalComplex { vertex_count, edges, edge_names, disks }
    }

    fn check_boundary(&self, d: usize, boundary: &Word) -> Result<(), ComplexError> {
        if boundary.is_empty() {
            return Err(ComplexError::EmptyBoundary { disk: d });
        }
        if let Some(l) = boundary.iter().find(|l| l.index() >= self.edges.len()) {
            return Err(ComplexError::EdgeOutOfRange { disk: d, edge: l.index() });
        }
        let len = boundary.len();
        for i in 0..len {
            let next = boundary[(i + 1) % len];
            if self.step_end(boundary[i]) != self.step_start(next) {
                return Err(ComplexError::OpenBoundary { disk: d, step: i });
            }
        }
        Ok(())
    }

    /// The one-vertex complex of a presentation: a loop per generator and a
    /// disk per relator.
    pub fn presentation_complex(p: &Presentation) -> Self {
        let edges = (0..p.generator_count()).map(|_| Edge { source: 0, target: 0 }).collect();
        PolygonalComplex {
            vertex_count: 1,
            edges,
            edge_names: p.generator_names().to_vec(),
            disks: p.relators().to_vec(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn disks(&self) -> &[Word] {
        &self.disks
    }

    #[inline]
    pub fn step_start(&self, step: Letter) -> usize {
        let e = self.edges[step.index()];
        if step.is_inverse() {
            e.target
        } else {
            e.source
        }
    }

    #[inline]
    pub fn step_end(&self, step: Letter) -> usize {
        let e = self.edges[step.index()];
        if step.is_inverse() {
            e.source
        } else {
            e.target
        }
    }

    /// Start vertex of every step of disk `d`'s boundary.
    pub fn boundary_vertices(&self, d: usize) -> Vec<usize> {
        self.disks[d].iter().map(|&s| self.step_start(s)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.disks.len() as i64
    }

    pub fn component_count(&self) -> usize {
        let mut dsu = DisjointSets::new(self.vertex_count);
        for e in &self.edges {
            dsu.union(e.source, e.target);
        }
        dsu.class_count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Decorated boundary word, e.g. `a_3^-1 b_3 b_3 a_3`.
    pub fn format_boundary(&self, d: usize) -> String {
        self.format_steps(&self.disks[d])
    }

    pub fn format_steps(&self, steps: &[Letter]) -> String {
        DisplayWord::plain(steps, |e| self.edge_name(e)).to_string()
    }

    /// Breadth-first spanning tree from vertex 0. Each vertex explores its
    /// outgoing edges by ascending id, then its incoming edges by ascending id.
    pub fn spanning_tree(&self) -> Result<Vec<usize>, ComplexError> {
        let mut outgoing: Vec<Vec<usize>> = alloc::vec![Vec::new(); self.vertex_count];
        let mut incoming: Vec<Vec<usize>> = alloc::vec![Vec::new(); self.vertex_count];
        for (id, e) in self.edges.iter().enumerate() {
            outgoing[e.source].push(id);
            incoming[e.target].push(id);
        }
        let mut seen = alloc::vec![false; self.vertex_count];
        let mut tree = Vec::with_capacity(self.vertex_count.saturating_sub(1));
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        while let Some(v) = queue.pop_front() {
            for &id in &outgoing[v] {
                let w = self.edges[id].target;
                if !seen[w] {
                    seen[w] = true;
                    tree.push(id);
                    queue.push_back(w);
                }
            }
            for &id in &incoming[v] {
                let w = self.edges[id].source;
                if !seen[w] {
                    seen[w] = true;
                    tree.push(id);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(ComplexError::Disconnected);
        }
        tree.sort_unstable();
        Ok(tree)
    }

    /// Checks that `tree` is an acyclic spanning set of edges.
    pub fn check_tree(&self, tree: &[usize]) -> Result<(), ComplexError> {
        let invalid = |reason: &str| ComplexError::InvalidTree { reason: reason.to_string() };
        if tree.len() + 1 != self.vertex_count {
            return Err(ComplexError::InvalidTree {
                reason: alloc::format!("expected {} edges, got {}", self.vertex_count - 1, tree.len()),
            });
        }
        let mut dsu = DisjointSets::new(self.vertex_count);
        for &id in tree {
            let e = self.edges.get(id).ok_or_else(|| invalid("unknown edge"))?;
            if !dsu.union(e.source, e.target) {
                return Err(ComplexError::InvalidTree {
                    reason: alloc::format!("edge {} closes a cycle", self.edge_name(id)),
                });
            }
        }
        Ok(())
    }

    /// Collapses a spanning tree to a point. The default tree is
    /// [`spanning_tree`](Self::spanning_tree). Boundary words keep every
    /// non-tree step; nothing is reduced.
    pub fn collapse_spanning_tree(&self, tree: Option<&[usize]>) -> Result<(Presentation, CollapseRecord), ComplexError> {
        if !self.is_connected() {
            return Err(ComplexError::Disconnected);
        }
        let tree = match tree {
            Some(t) => {
                self.check_tree(t)?;
                let mut t = t.to_vec();
                t.sort_unstable();
                t
            }
            None => self.spanning_tree()?,
        };
        let mut edge_generators = alloc::vec![None; self.edges.len()];
        let mut generator_edges = Vec::new();
        let mut in_tree = alloc::vec![false; self.edges.len()];
        for &e in &tree {
            in_tree[e] = true;
        }
        for e in 0..self.edges.len() {
            if !in_tree[e] {
                edge_generators[e] = Some(generator_edges.len());
                generator_edges.push(e);
            }
        }
        let relators = self
            .disks
            .iter()
            .map(|b| {
                b.iter()
                    .filter_map(|s| edge_generators[s.index()].map(|g| Letter::new(g as u32, s.is_inverse())))
                    .collect::<Word>()
            })
            .collect();
        let names = generator_edges.iter().map(|&e| self.edge_names[e].clone()).collect();
        let presentation = Presentation::new(names, relators).map_err(|_| ComplexError::InvalidTree {
            reason: "collapse leaves no generators".into(),
        })?;
        Ok((presentation, CollapseRecord { tree, generator_edges, edge_generators }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_open_boundaries() {
        let edges = vec![Edge { source: 0, target: 1 }];
        let err = PolygonalComplex::new(2, edges, names(&["e"]), vec![Word::from_letters(vec![Letter::pos(0)])]);
        assert_eq!(err.unwrap_err(), ComplexError::OpenBoundary { disk: 0, step: 0 });
    }

    #[test]
    fn one_vertex_collapse_is_identity() {
        let p = Presentation::parse("gens: a b\nrel: a b a^-1 b^-1").unwrap();
        let c = PolygonalComplex::presentation_complex(&p);
        let (q, rec) = c.collapse_spanning_tree(None).unwrap();
        assert_eq!(q, p);
        assert!(rec.tree.is_empty());
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn two_vertex_bigon() {
        // e, f : v1 -> v2 ; disk e f^-1 ; tree {e}
        let edges = vec![Edge { source: 0, target: 1 }, Edge { source: 0, target: 1 }];
        let disk = Word::from_letters(vec![Letter::pos(0), Letter::neg(1)]);
        let c = PolygonalComplex::new(2, edges, names(&["e", "f"]), vec![disk]).unwrap();
        let (p, rec) = c.collapse_spanning_tree(Some(&[0])).unwrap();
        assert_eq!(p.generator_names(), &["f".to_string()]);
        assert_eq!(p.relators()[0].letters(), &[Letter::neg(0)]);
        assert_eq!(rec.generator_edges, vec![1]);
        assert_eq!(rec.edge_generators, vec![None, Some(0)]);
        let chi_in = c.euler_characteristic();
        let chi_out = 1 - p.generator_count() as i64 + p.relator_count() as i64;
        assert_eq!(chi_in, chi_out);
    }

    #[test]
    fn disconnected_and_bad_trees() {
        let edges = vec![Edge { source: 0, target: 0 }, Edge { source: 1, target: 1 }];
        let c = PolygonalComplex::new(2, edges, names(&["a", "b"]), vec![]).unwrap();
        assert_eq!(c.collapse_spanning_tree(None).unwrap_err(), ComplexError::Disconnected);

        let edges = vec![Edge { source: 0, target: 1 }, Edge { source: 1, target: 0 }, Edge { source: 1, target: 2 }];
        let c = PolygonalComplex::new(3, edges, names(&["a", "b", "c"]), vec![]).unwrap();
        assert!(matches!(c.check_tree(&[0, 1]), Err(ComplexError::InvalidTree { .. })));
        assert!(matches!(c.check_tree(&[0]), Err(ComplexError::InvalidTree { .. })));
        assert!(c.check_tree(&[1, 2]).is_ok());
        assert_eq!(c.spanning_tree().unwrap(), vec![0, 2]);
    }
}
