use super::{DisjointSets, NodeId};

/// A node set with the directed edges restricted to it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubgraphView {
    nodes: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId)>,
}

impl SubgraphView {
    /// Edges with an endpoint outside `nodes` are discarded.
    pub fn new(nodes: Vec<NodeId>, edges: Vec<(NodeId, NodeId)>) -> Self {
        let mut nodes = nodes;
        nodes.sort_unstable();
        nodes.dedup();
        let mut edges: Vec<_> = edges
            .into_iter()
            .filter(|(a, b)| {
                a != b && nodes.binary_search(a).is_ok() && nodes.binary_search(b).is_ok()
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        SubgraphView { nodes, edges }
    }

    pub(crate) fn from_parts(nodes: Vec<NodeId>, edges: Vec<(NodeId, NodeId)>) -> Self {
        SubgraphView { nodes, edges }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }
}

/// Undirected graph: each pair is stored once as `(low, high)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaseGraph {
    nodes: Vec<NodeId>,
    pairs: Vec<(NodeId, NodeId)>,
}

impl BaseGraph {
    /// Pairs are normalized; self-pairs and pairs leaving `nodes` are dropped.
    pub fn new(nodes: Vec<NodeId>, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut nodes = nodes;
        nodes.sort_unstable();
        nodes.dedup();
        let mut pairs: Vec<_> = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .filter(|(a, b)| nodes.binary_search(a).is_ok() && nodes.binary_search(b).is_ok())
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        BaseGraph { nodes, pairs }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }
}

/// Drops edge direction; antiparallel edges collapse to one pair.
pub fn base_graph(sub: &SubgraphView) -> BaseGraph {
    BaseGraph::new(sub.nodes().to_vec(), sub.edges().iter().copied())
}

/// Number of connected components; 0 for a graph without nodes.
pub fn connected_component_count(bg: &BaseGraph) -> usize {
    let nodes = bg.nodes();
    let mut sets = DisjointSets::new(nodes.len());
    let local = |v: &NodeId| nodes.binary_search(v).expect("pair endpoint is a node");
    for (a, b) in bg.pairs() {
        sets.union(local(a), local(b));
    }
    sets.components()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&x| NodeId(x)).collect()
    }

    /// Iterative DFS over an adjacency matrix.
    fn dfs_components(n: usize, pairs: &[(usize, usize)]) -> usize {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in pairs {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for w in 0..n {
                    if adj[v][w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn five_reference_subgraph_has_four_components() {
        let sub = SubgraphView::new(ids(&[2, 3, 4, 5, 6]), vec![(NodeId(4), NodeId(5))]);
        let bg = base_graph(&sub);
        assert_eq!(bg.pairs(), &[(NodeId(4), NodeId(5))]);
        assert_eq!(connected_component_count(&bg), 4);
    }

    #[test]
    fn antiparallel_edges_collapse() {
        let sub = SubgraphView::new(
            ids(&[1, 2]),
            vec![(NodeId(1), NodeId(2)), (NodeId(2), NodeId(1))],
        );
        assert_eq!(base_graph(&sub).pairs().len(), 1);
    }

    #[test]
    fn isolated_nodes_and_empty_graph() {
        let bg = BaseGraph::new(ids(&[0, 1, 2, 3, 4, 5, 6]), []);
        assert_eq!(connected_component_count(&bg), 7);
        assert_eq!(connected_component_count(&BaseGraph::default()), 0);
    }

    #[test]
    fn random_graph_twelve_nodes_eight_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut pairs = Vec::new();
        while pairs.len() < 8 {
            let a = rng.gen_range(0..12usize);
            let b = rng.gen_range(0..12usize);
            if a != b && !pairs.contains(&(a.min(b), a.max(b))) {
                pairs.push((a.min(b), a.max(b)));
            }
        }
        let bg = BaseGraph::new(
            (0..12).map(NodeId).collect(),
            pairs.iter().map(|&(a, b)| (NodeId(a as u32), NodeId(b as u32))),
        );
        assert_eq!(connected_component_count(&bg), dfs_components(12, &pairs));
    }

    proptest! {
        #[test]
        fn union_find_matches_dfs(
            n in 1usize..30,
            raw in prop::collection::vec((0usize..30, 0usize..30), 0..60),
        ) {
            let pairs: Vec<(usize, usize)> = raw.into_iter().filter(|(a, b)| *a < n && *b < n).collect();
            let bg = BaseGraph::new(
                (0..n as u32).map(NodeId).collect(),
                pairs.iter().map(|&(a, b)| (NodeId(a as u32), NodeId(b as u32))),
            );
            let count = connected_component_count(&bg);
            prop_assert_eq!(count, dfs_components(n, &pairs));
            prop_assert!(count >= 1 && count <= n);
        }

        #[test]
        fn adding_an_edge_never_increases_components(
            n in 2usize..20,
            raw in prop::collection::vec((0usize..20, 0usize..20), 0..30),
            extra in (0usize..20, 0usize..20),
        ) {
            let nodes: Vec<NodeId> = (0..n as u32).map(NodeId).collect();
            let pairs: Vec<(NodeId, NodeId)> = raw
                .into_iter()
                .filter(|(a, b)| *a < n && *b < n)
                .map(|(a, b)| (NodeId(a as u32), NodeId(b as u32)))
                .collect();
            let before = connected_component_count(&BaseGraph::new(nodes.clone(), pairs.clone()));
            let mut more = pairs;
            more.push((NodeId((extra.0 % n) as u32), NodeId((extra.1 % n) as u32)));
            let after = connected_component_count(&BaseGraph::new(nodes, more));
            prop_assert!(after <= before);
        }
    }
}
