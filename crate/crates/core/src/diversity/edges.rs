use std::collections::BTreeSet;

use crate::graph::{CitationGraph, GraphError, NodeId};
use crate::scalar::Real;
use crate::semantic::{cosine_stored, EmbeddingTable, SimilarityMatrix};

use super::DiversityError;

/// Unordered node pair stored as `(low, high)`.
pub type NodePair = (NodeId, NodeId);

fn pair(a: NodeId, b: NodeId) -> NodePair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A target paper together with its (sorted) reference set.
#[derive(Debug, Clone)]
pub struct ReferenceScope<'g> {
    graph: &'g CitationGraph,
    target: NodeId,
    refs: &'g [NodeId],
}

impl<'g> ReferenceScope<'g> {
    pub fn new(graph: &'g CitationGraph, target: NodeId) -> Result<Self, GraphError> {
        let refs = graph.reference_set(target)?;
        Ok(ReferenceScope {
            graph,
            target,
            refs,
        })
    }

    pub fn graph(&self) -> &'g CitationGraph {
        self.graph
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn refs(&self) -> &'g [NodeId] {
        self.refs
    }

    /// Position of `n` within the reference set.
    #[inline]
    pub fn local(&self, n: NodeId) -> Option<usize> {
        self.refs.binary_search(&n).ok()
    }

    /// Whether a citation links `a` and `b` in either direction.
    #[inline]
    pub fn linked(&self, a: NodeId, b: NodeId) -> bool {
        self.graph.has_edge(a, b) || self.graph.has_edge(b, a)
    }

    fn all_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.refs.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }
}

/// Similarities aligned with a [`ReferenceScope`]: one value per reference
/// against the target, and the reference-by-reference matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSimilarities<F> {
    target: Vec<F>,
    pairwise: SimilarityMatrix<F>,
}

impl<F: Real> ReferenceSimilarities<F> {
    pub fn new(target: Vec<F>, pairwise: SimilarityMatrix<F>) -> Result<Self, DiversityError> {
        if target.len() != pairwise.len() {
            return Err(DiversityError::SimilarityShape {
                expected: pairwise.len(),
                found: target.len(),
            });
        }
        Ok(ReferenceSimilarities { target, pairwise })
    }

    /// Computes every similarity from stored vectors. The target and every
    /// reference must have a vector.
    pub fn from_table(table: &EmbeddingTable, scope: &ReferenceScope<'_>) -> Result<Self, DiversityError> {
        let graph = scope.graph();
        let vector = |n: NodeId| {
            table
                .vector(graph.id(n))
                .ok_or_else(|| DiversityError::MissingEmbedding(graph.id(n).to_string()))
        };
        let tv = vector(scope.target())?;
        let rvs = scope.refs().iter().map(|&r| vector(r)).collect::<Result<Vec<_>, _>>()?;
        let target = rvs
            .iter()
            .map(|rv| cosine_stored(tv, rv).expect("table rows share one dimension"))
            .collect();
        let ids = scope.refs().iter().map(|&r| graph.id(r).to_string()).collect();
        let pairwise = SimilarityMatrix::from_fn(ids, |i, j| {
            cosine_stored(rvs[i], rvs[j]).expect("table rows share one dimension")
        });
        Ok(ReferenceSimilarities { target, pairwise })
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    /// Target-to-reference similarities in reference order.
    pub fn target(&self) -> &[F] {
        &self.target
    }

    pub fn pairwise(&self) -> &SimilarityMatrix<F> {
        &self.pairwise
    }

    #[inline]
    pub fn between(&self, i: usize, j: usize) -> F {
        self.pairwise.get(i, j)
    }

    fn check(&self, scope: &ReferenceScope<'_>) -> Result<(), DiversityError> {
        if self.len() != scope.refs().len() {
            return Err(DiversityError::SimilarityShape {
                expected: scope.refs().len(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Undirected pairs of the reference subgraph's direct citations.
pub fn citation_pairs(scope: &ReferenceScope<'_>) -> BTreeSet<NodePair> {
    let mut out = BTreeSet::new();
    for &u in scope.refs() {
        for &w in scope.graph().references(u) {
            if scope.local(w).is_some() {
                out.insert(pair(u, w));
            }
        }
    }
    out
}

/// Co-citation: reference pairs that some paper other than the target also
/// cites together.
pub fn co_citation_edges(scope: &ReferenceScope<'_>) -> BTreeSet<NodePair> {
    let g = scope.graph();
    let mut out = BTreeSet::new();
    for &u in scope.refs() {
        for &x in g.citers(u) {
            if x == scope.target() {
                continue;
            }
            for &w in g.references(x) {
                if w > u && scope.local(w).is_some() {
                    out.insert((u, w));
                }
            }
        }
    }
    out
}

/// Bibliographic coupling: reference pairs that cite a common paper.
pub fn coupling_edges(scope: &ReferenceScope<'_>) -> BTreeSet<NodePair> {
    let g = scope.graph();
    let mut out = BTreeSet::new();
    for &u in scope.refs() {
        for &y in g.references(u) {
            for &w in g.citers(y) {
                if w > u && scope.local(w).is_some() {
                    out.insert((u, w));
                }
            }
        }
    }
    out
}

/// Reference pairs with no citation between them and similarity `>= theta1`.
pub fn semantic_edges<F: Real>(
    scope: &ReferenceScope<'_>,
    sims: &ReferenceSimilarities<F>,
    theta1: F,
) -> Result<BTreeSet<NodePair>, DiversityError> {
    sims.check(scope)?;
    let refs = scope.refs();
    Ok(scope
        .all_pairs()
        .filter(|&(i, j)| sims.between(i, j) >= theta1 && !scope.linked(refs[i], refs[j]))
        .map(|(i, j)| (refs[i], refs[j]))
        .collect())
}

fn similarity_filter<F: Real>(
    scope: &ReferenceScope<'_>,
    sims: &ReferenceSimilarities<F>,
    theta2: F,
    candidates: BTreeSet<NodePair>,
) -> Result<BTreeSet<NodePair>, DiversityError> {
    sims.check(scope)?;
    Ok(candidates
        .into_iter()
        .filter(|&(a, b)| {
            let (i, j) = (scope.local(a).unwrap(), scope.local(b).unwrap());
            sims.between(i, j) >= theta2 && !scope.linked(a, b)
        })
        .collect())
}

/// Co-citation pairs not already linked by a citation, with similarity `>= theta2`.
pub fn filtered_co_citation_edges<F: Real>(
    scope: &ReferenceScope<'_>,
    sims: &ReferenceSimilarities<F>,
    theta2: F,
) -> Result<BTreeSet<NodePair>, DiversityError> {
    similarity_filter(scope, sims, theta2, co_citation_edges(scope))
}

/// Coupling pairs not already linked by a citation, with similarity `>= theta2`.
pub fn filtered_coupling_edges<F: Real>(
    scope: &ReferenceScope<'_>,
    sims: &ReferenceSimilarities<F>,
    theta2: F,
) -> Result<BTreeSet<NodePair>, DiversityError> {
    similarity_filter(scope, sims, theta2, coupling_edges(scope))
}
