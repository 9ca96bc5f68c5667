//! Immutable interned citation digraph and the subgraph views built on it.

mod subgraph;
mod union_find;

use std::fmt;
use std::io::Write;

use thiserror::Error;

use crate::corpus::Corpus;

pub use subgraph::{base_graph, connected_component_count, BaseGraph, SubgraphView};
pub use union_find::DisjointSets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("cannot build a graph from an empty corpus")]
    EmptyCorpus,
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("paper {0:?} is not in the graph")]
    UnknownId(String),
    #[error("citation series horizon must be at least 1")]
    ZeroHorizon,
}

/// Dense node handle. Assigned in ascending order of paper id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Compressed adjacency: `targets[offsets[v]..offsets[v + 1]]`, each run sorted.
#[derive(Debug, Clone, Default)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Adjacency {
    #[inline]
    fn row(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }
}

/// Citation digraph: an edge `v -> u` means paper `v` cites paper `u`.
#[derive(Debug, Clone)]
pub struct CitationGraph {
    ids: Vec<String>,
    years: Vec<Option<i32>>,
    out_adj: Adjacency,
    in_adj: Adjacency,
    skipped_references: usize,
}

/// Per-year citation counts for one paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationSeries {
    pub counts: Vec<u32>,
    /// Citing papers with no publication year; never bucketed.
    pub undated_citers: usize,
    /// Dated citing papers that fall outside the requested window.
    pub outside_window: usize,
}

impl CitationSeries {
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }
}

impl CitationGraph {
    /// Interns every record (ids are already sorted in a [`Corpus`]) and adds
    /// one edge per resolvable reference. Dangling references are counted.
    pub fn build(corpus: &Corpus) -> Result<Self, GraphError> {
        if corpus.is_empty() {
            return Err(GraphError::EmptyCorpus);
        }
        let records = corpus.records();
        let n = records.len();
        let mut out_offsets = Vec::with_capacity(n + 1);
        let mut out_targets = Vec::new();
        let mut in_degree = vec![0usize; n];
        let mut skipped = 0usize;
        out_offsets.push(0);
        for rec in records {
            for r in &rec.references {
                match corpus.position(r) {
                    Some(u) => {
                        out_targets.push(NodeId(u as u32));
                        in_degree[u] += 1;
                    }
                    None => skipped += 1,
                }
            }
            out_offsets.push(out_targets.len());
        }

        let mut in_offsets = Vec::with_capacity(n + 1);
        in_offsets.push(0);
        for d in &in_degree {
            in_offsets.push(in_offsets.last().unwrap() + d);
        }
        let mut cursor = in_offsets[..n].to_vec();
        let mut in_sources = vec![NodeId(0); out_targets.len()];
        // Citers are visited in ascending order, so each in-row comes out sorted.
        for v in 0..n {
            for &u in &out_targets[out_offsets[v]..out_offsets[v + 1]] {
                in_sources[cursor[u.index()]] = NodeId(v as u32);
                cursor[u.index()] += 1;
            }
        }

        Ok(CitationGraph {
            ids: records.iter().map(|r| r.id.clone()).collect(),
            years: records.iter().map(|r| r.year).collect(),
            out_adj: Adjacency {
                offsets: out_offsets,
                targets: out_targets,
            },
            in_adj: Adjacency {
                offsets: in_offsets,
                targets: in_sources,
            },
            skipped_references: skipped,
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.targets.len()
    }

    /// References that named a paper outside the corpus.
    pub fn skipped_references(&self) -> usize {
        self.skipped_references
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.ids.len() as u32).map(NodeId)
    }

    pub fn node(&self, id: &str) -> Option<NodeId> {
        self.ids
            .binary_search_by(|x| x.as_str().cmp(id))
            .ok()
            .map(|i| NodeId(i as u32))
    }

    pub fn require_node(&self, id: &str) -> Result<NodeId, GraphError> {
        self.node(id).ok_or_else(|| GraphError::UnknownId(id.to_string()))
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.ids.len()
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v))
        }
    }

    pub fn id(&self, v: NodeId) -> &str {
        &self.ids[v.index()]
    }

    pub fn year(&self, v: NodeId) -> Option<i32> {
        self.years[v.index()]
    }

    /// Papers cited by `v`, ascending. Panics on an unknown node.
    #[inline]
    pub fn references(&self, v: NodeId) -> &[NodeId] {
        self.out_adj.row(v)
    }

    /// Papers citing `v`, ascending. Panics on an unknown node.
    #[inline]
    pub fn citers(&self, v: NodeId) -> &[NodeId] {
        self.in_adj.row(v)
    }

    #[inline]
    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.references(from).binary_search(&to).is_ok()
    }

    /// The reference set of `v`.
    pub fn reference_set(&self, v: NodeId) -> Result<&[NodeId], GraphError> {
        self.check(v)?;
        Ok(self.references(v))
    }

    /// Subgraph on `nodes` keeping every edge with both endpoints inside.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<SubgraphView, GraphError> {
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|v| !self.contains(**v)) {
            return Err(GraphError::UnknownNode(bad));
        }
        let mut edges = Vec::new();
        for &u in &sorted {
            for &w in self.references(u) {
                if sorted.binary_search(&w).is_ok() {
                    edges.push((u, w));
                }
            }
        }
        Ok(SubgraphView::from_parts(sorted, edges))
    }

    /// Weakly connected component label per node: the smallest member id.
    pub fn weak_components(&self) -> Vec<NodeId> {
        let n = self.node_count();
        let mut sets = DisjointSets::new(n);
        for v in self.nodes() {
            for &u in self.references(v) {
                sets.union(v.index(), u.index());
            }
        }
        let mut label_of_root = vec![u32::MAX; n];
        (0..n)
            .map(|v| {
                let root = sets.find(v);
                if label_of_root[root] == u32::MAX {
                    label_of_root[root] = v as u32;
                }
                NodeId(label_of_root[root])
            })
            .collect()
    }

    /// Citations received by `v` in each calendar year
    /// `start_year .. start_year + horizon`, bucketed by the citing paper's year.
    pub fn citation_series(
        &self,
        v: NodeId,
        start_year: i32,
        horizon: usize,
    ) -> Result<CitationSeries, GraphError> {
        self.check(v)?;
        if horizon == 0 {
            return Err(GraphError::ZeroHorizon);
        }
        let mut series = CitationSeries {
            counts: vec![0; horizon],
            undated_citers: 0,
            outside_window: 0,
        };
        for &c in self.citers(v) {
            match self.year(c) {
                None => series.undated_citers += 1,
                Some(y) => {
                    let offset = i64::from(y) - i64::from(start_year);
                    if (0..horizon as i64).contains(&offset) {
                        series.counts[offset as usize] += 1;
                    } else {
                        series.outside_window += 1;
                    }
                }
            }
        }
        Ok(series)
    }

    /// Writes `citing_id<TAB>cited_id` lines sorted by (citing, cited).
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for v in self.nodes() {
            for &u in self.references(v) {
                writeln!(out, "{}\t{}", self.id(v), self.id(u))?;
            }
        }
        out.flush()
    }
}
