use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, PaperRecord, VenueRank};
use crate::graph::CitationGraph;

/// Conjunctive filter over year, venue and rank. At least one field is set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub year: Option<i32>,
    pub venue: Option<String>,
    pub rank: Option<VenueRank>,
}

impl GroupSpec {
    pub fn new(
        year: Option<i32>,
        venue: Option<String>,
        rank: Option<VenueRank>,
    ) -> Result<Self, CorpusError> {
        let spec = GroupSpec { year, venue, rank };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.year.is_none() && self.venue.is_none() && self.rank.is_none() {
            Err(CorpusError::EmptyGroupSpec)
        } else {
            Ok(())
        }
    }

    pub fn matches(&self, r: &PaperRecord) -> bool {
        self.year.is_none_or(|y| r.year == Some(y))
            && self.venue.as_ref().is_none_or(|v| &r.venue == v)
            && self.rank.is_none_or(|k| r.rank == Some(k))
    }
}

/// Ids of the records matching every set field of `spec`, ascending.
pub fn select_group(corpus: &Corpus, spec: &GroupSpec) -> Vec<String> {
    corpus
        .records()
        .iter()
        .filter(|r| spec.matches(r))
        .map(|r| r.id.clone())
        .collect()
}

/// Sub-corpus spanned by the largest weakly connected component of the
/// citation digraph. Ties go to the component holding the smallest id.
pub fn largest_weak_component(corpus: &Corpus) -> Result<Corpus, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::Empty);
    }
    let graph = CitationGraph::build(corpus).map_err(|_| CorpusError::Empty)?;
    let labels = graph.weak_components();
    let mut sizes = vec![0usize; labels.len()];
    for l in &labels {
        sizes[l.index()] += 1;
    }
    // Labels are smallest member ids, so the first maximum wins ties.
    let best = sizes
        .iter()
        .enumerate()
        .fold((0usize, 0usize), |acc, (label, &size)| {
            if size > acc.1 {
                (label, size)
            } else {
                acc
            }
        })
        .0;
    let records: Vec<PaperRecord> = corpus
        .records()
        .iter()
        .zip(&labels)
        .filter(|(_, l)| l.index() == best)
        .map(|(r, _)| r.clone())
        .collect();
    Ok(Corpus::from_sorted(records, corpus.provenance().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::f1_corpus;
    use proptest::prelude::*;

    fn with_year(id: &str, year: i32, venue: &str) -> PaperRecord {
        PaperRecord {
            id: id.into(),
            year: Some(year),
            venue: venue.into(),
            ..Default::default()
        }
    }

    #[test]
    fn empty_spec_rejected() {
        assert!(matches!(
            GroupSpec::new(None, None, None),
            Err(CorpusError::EmptyGroupSpec)
        ));
    }

    #[test]
    fn select_by_year() {
        let c = Corpus::from_records(vec![
            with_year("a", 2000, "X"),
            with_year("b", 2000, "Y"),
            with_year("c", 2006, "X"),
        ])
        .unwrap();
        let spec = GroupSpec::new(Some(2000), None, None).unwrap();
        assert_eq!(select_group(&c, &spec), vec!["a", "b"]);
    }

    #[test]
    fn select_is_a_conjunction() {
        let c = Corpus::from_records(vec![
            with_year("a", 2012, "CHI"),
            with_year("b", 2012, "ICDCS"),
            with_year("c", 2006, "CHI"),
        ])
        .unwrap();
        let spec = GroupSpec::new(Some(2012), Some("CHI".into()), None).unwrap();
        assert_eq!(select_group(&c, &spec), vec!["a"]);
    }

    #[test]
    fn select_by_rank_recovers_planted_ids() {
        let mut planted = Vec::new();
        let records: Vec<PaperRecord> = (0..100)
            .map(|i| {
                let mut r = PaperRecord::new(format!("p{i:03}"));
                // two in every five: 40 of 100
                r.rank = Some(if i % 5 < 2 {
                    planted.push(r.id.clone());
                    VenueRank::Q1
                } else {
                    [VenueRank::Q2, VenueRank::A, VenueRank::Unranked][i % 3]
                });
                r
            })
            .collect();
        let c = Corpus::from_records(records).unwrap();
        let spec = GroupSpec::new(None, None, Some(VenueRank::Q1)).unwrap();
        assert_eq!(planted.len(), 40);
        assert_eq!(select_group(&c, &spec), planted);
    }

    #[test]
    fn f1_is_one_component() {
        let c = f1_corpus();
        assert_eq!(largest_weak_component(&c).unwrap().len(), 8);
    }

    #[test]
    fn isolated_record_is_dropped() {
        let mut records = f1_corpus().into_records();
        records.push(PaperRecord::new("9"));
        let c = Corpus::from_records(records).unwrap();
        let lcc = largest_weak_component(&c).unwrap();
        assert_eq!(lcc.len(), 8);
        assert!(!lcc.contains("9"));
    }

    #[test]
    fn chain_beats_triangles() {
        let c = Corpus::from_records(vec![
            PaperRecord::new("a1").with_references(["a2"]),
            PaperRecord::new("a2").with_references(["a3"]),
            PaperRecord::new("a3").with_references(["a1"]),
            PaperRecord::new("b1").with_references(["b2"]),
            PaperRecord::new("b2").with_references(["b3"]),
            PaperRecord::new("b3").with_references(["b1"]),
            PaperRecord::new("c1").with_references(["c2"]),
            PaperRecord::new("c2").with_references(["c3"]),
            PaperRecord::new("c3").with_references(["c4"]),
            PaperRecord::new("c4"),
        ])
        .unwrap();
        let lcc = largest_weak_component(&c).unwrap();
        let ids: Vec<&str> = lcc.records().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["c1", "c2", "c3", "c4"]);
    }

    #[test]
    fn ties_go_to_smallest_id() {
        let c = Corpus::from_records(vec![
            PaperRecord::new("x").with_references(["y"]),
            PaperRecord::new("y"),
            PaperRecord::new("a").with_references(["b"]),
            PaperRecord::new("b"),
        ])
        .unwrap();
        let lcc = largest_weak_component(&c).unwrap();
        assert!(lcc.contains("a") && lcc.contains("b"));
    }

    /// Component sizes by DFS over an undirected adjacency matrix.
    fn dfs_component_sizes(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in 0..n {
                    if adj[v][w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps
    }

    proptest! {
        #[test]
        fn lcc_matches_dfs_oracle(
            n in 1usize..30,
            raw in prop::collection::vec((0usize..30, 0usize..30), 0..40),
        ) {
            let edges: Vec<(usize, usize)> = raw.into_iter().filter(|(a, b)| *a < n && *b < n && a != b).collect();
            let records: Vec<PaperRecord> = (0..n)
                .map(|i| {
                    PaperRecord::new(format!("{i:02}")).with_references(
                        edges.iter().filter(|e| e.0 == i).map(|e| format!("{:02}", e.1)),
                    )
                })
                .collect();
            let c = Corpus::from_records(records).unwrap();
            let lcc = largest_weak_component(&c).unwrap();
            let comps = dfs_component_sizes(n, &edges);
            let max = comps.iter().map(Vec::len).max().unwrap();
            prop_assert_eq!(lcc.len(), max);
            // weakly connected itself
            let g = CitationGraph::build(&lcc).unwrap();
            let labels = g.weak_components();
            prop_assert!(labels.iter().all(|l| *l == labels[0]));
            // smallest-id tie break: component containing the smallest id among maxima
            let expected = comps.iter().filter(|c| c.len() == max).min_by_key(|c| c[0]).unwrap();
            let got: Vec<usize> = lcc.records().iter().map(|r| r.id.parse().unwrap()).collect();
            prop_assert_eq!(&got, expected);
        }
    }
}
