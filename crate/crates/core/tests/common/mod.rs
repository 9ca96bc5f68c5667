#![allow(dead_code)]

use std::fmt::Write as _;

use csd_core::diversity::{evaluate, ReferenceScope, ReferenceSimilarities, ThresholdPolicy};
use csd_core::semantic::SimilarityMatrix;
use csd_core::{CitationGraph, Corpus, DiversityVariant, NodeId, PaperRecord};
use rand::Rng;

pub fn node_name(i: usize) -> String {
    format!("n{i:03}")
}

/// Dense random digraph without self-loops; `adj[a][b]` means a cites b.
pub fn random_adjacency<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<Vec<bool>> {
    (0..n)
        .map(|a| (0..n).map(|b| a != b && rng.gen_bool(p)).collect())
        .collect()
}

/// Zero-padded names keep NodeId order equal to row order.
pub fn corpus_from_adjacency(adj: &[Vec<bool>]) -> Corpus {
    let records = adj
        .iter()
        .enumerate()
        .map(|(a, row)| {
            PaperRecord::new(node_name(a)).with_references(
                row.iter()
                    .enumerate()
                    .filter(|(_, &e)| e)
                    .map(|(b, _)| node_name(b)),
            )
        })
        .collect();
    Corpus::from_records(records).unwrap()
}

pub fn graph_from_adjacency(adj: &[Vec<bool>]) -> CitationGraph {
    CitationGraph::build(&corpus_from_adjacency(adj)).unwrap()
}

/// Symmetric similarities on a 0.05 grid, so that threshold ties occur.
pub fn grid_similarities<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut s = vec![vec![1.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let v = rng.gen_range(0..=20) as f64 / 20.0;
            s[a][b] = v;
            s[b][a] = v;
        }
    }
    s
}

/// Reference-scoped view of a dense similarity matrix.
pub fn scoped_similarities(
    graph: &CitationGraph,
    target: NodeId,
    sims: &[Vec<f64>],
) -> ReferenceSimilarities<f64> {
    let refs = graph.reference_set(target).unwrap();
    let t = target.index();
    let target_row = refs.iter().map(|r| sims[t][r.index()]).collect();
    let ids = refs.iter().map(|&r| graph.id(r).to_string()).collect();
    let m = SimilarityMatrix::from_fn(ids, |i, j| sims[refs[i].index()][refs[j].index()]);
    ReferenceSimilarities::new(target_row, m).unwrap()
}

/// Pipeline value of every variant for `target` with fixed thresholds.
pub fn pipeline_counts(
    graph: &CitationGraph,
    sims: &[Vec<f64>],
    target: NodeId,
    theta1: f64,
    theta2: f64,
) -> [usize; 6] {
    let scope = ReferenceScope::new(graph, target).unwrap();
    let s = scoped_similarities(graph, target, sims);
    let res = evaluate(
        &scope,
        Some(&s),
        &DiversityVariant::ALL,
        &ThresholdPolicy::<f64>::fixed(theta1, theta2),
    )
    .unwrap();
    DiversityVariant::ALL.map(|v| res.get(v).unwrap())
}

/// Components of an undirected graph by iterative depth-first search.
pub fn dfs_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut nbr = vec![Vec::new(); n];
    for &(a, b) in edges {
        nbr[a].push(b);
        nbr[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &nbr[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Materializes each variant's full edge union straight from the dense
/// adjacency matrix and counts components with [`dfs_components`].
pub fn brute_force_counts(
    adj: &[Vec<bool>],
    sims: &[Vec<f64>],
    v: usize,
    theta1: f64,
    theta2: f64,
) -> [usize; 6] {
    let n = adj.len();
    let refs: Vec<usize> = (0..n).filter(|&r| adj[v][r]).collect();
    let k = refs.len();
    let mut direct = Vec::new();
    let mut co = Vec::new();
    let mut coupling = Vec::new();
    let mut semantic = Vec::new();
    let mut filtered = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (refs[i], refs[j]);
            let linked = adj[a][b] || adj[b][a];
            let cocited = (0..n).any(|x| x != v && adj[x][a] && adj[x][b]);
            let coupled = (0..n).any(|y| adj[a][y] && adj[b][y]);
            let s = sims[a][b];
            if linked {
                direct.push((i, j));
            }
            if cocited {
                co.push((i, j));
            }
            if coupled {
                coupling.push((i, j));
            }
            if !linked && s >= theta1 {
                semantic.push((i, j));
            }
            if !linked && s >= theta2 && (cocited || coupled) {
                filtered.push((i, j));
            }
        }
    }
    let union = |parts: &[&Vec<(usize, usize)>]| {
        let all: Vec<(usize, usize)> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        dfs_components(k, &all)
    };
    [
        union(&[&direct]),
        union(&[&direct, &co, &coupling]),
        union(&[&direct, &semantic]),
        union(&[&direct, &filtered]),
        union(&[&direct, &semantic, &filtered]),
        union(&[&direct, &co, &coupling, &semantic]),
    ]
}

/// Canonical JSON Lines for `n` papers over 1980..2019. Each cites up to
/// eight earlier papers; every `dangling_every`-th paper also cites one id
/// outside the corpus. Returns the text and the number of dangling
/// references planted.
pub fn synthetic_canonical<R: Rng>(rng: &mut R, n: usize, dangling_every: usize) -> (String, usize) {
    let mut out = String::with_capacity(n * 160);
    let mut dangling = 0;
    for i in 0..n {
        let year = 1980 + (i * 40 / n.max(1)) as i32;
        let mut refs: Vec<String> = Vec::new();
        if i > 0 {
            for _ in 0..rng.gen_range(0..=8) {
                refs.push(format!("\"p{:07}\"", rng.gen_range(0..i)));
            }
        }
        if dangling_every > 0 && i % dangling_every == 0 {
            refs.push(format!("\"ext{i:07}\""));
            dangling += 1;
        }
        refs.sort();
        refs.dedup();
        let _ = writeln!(
            out,
            "{{\"id\":\"p{i:07}\",\"title\":\"Paper {i}\",\"abstract\":\"{}\",\"year\":{year},\"venue\":\"V{}\",\"references\":[{}]}}",
            if i % 11 == 0 { "" } else { "Some abstract text." },
            i % 17,
            refs.join(",")
        );
    }
    (out, dangling)
}

/// Group medians of three-year citations for diversity 1..=7. Their Pearson
/// r against the diversity values is 0.6999 (found by offline search).
pub const PLANTED_MEDIANS: [u32; 7] = [5, 7, 4, 7, 5, 11, 10];
pub const PAPERS_PER_GROUP: usize = 10;
pub const PLANTED_CORPUS_SIZE: usize = 1000;

/// 1,000-paper corpus where the 70 venue-"TGT" papers of 2000 have planted
/// diversity and three-year citation counts.
///
/// A target with diversity k cites k fresh papers that cite nothing and are
/// never cited together elsewhere. Its citation counts are the group median
/// plus offsets -4..=4 (median preserved), from citers dated 2000..=2002.
/// Late citers (2003..) and undated padding papers must not count.
pub fn planted_correlation_corpus() -> String {
    const OFFSETS: [i32; PAPERS_PER_GROUP] = [-4, -3, -2, -1, 0, 0, 1, 2, 3, 4];
    let mut lines: Vec<String> = Vec::new();
    let mut fresh = 0usize;
    let mut next = |prefix: &str| {
        fresh += 1;
        format!("{prefix}{fresh:05}")
    };
    for (g, &median) in PLANTED_MEDIANS.iter().enumerate() {
        let k = g + 1;
        for (t, off) in OFFSETS.iter().enumerate() {
            let target = format!("t{k}_{t:02}");
            let refs: Vec<String> = (0..k).map(|_| next("r")).collect();
            for r in &refs {
                lines.push(format!(r#"{{"id":"{r}","year":1995,"venue":"REF"}}"#));
            }
            let quoted: Vec<String> = refs.iter().map(|r| format!("\"{r}\"")).collect();
            lines.push(format!(
                r#"{{"id":"{target}","year":2000,"venue":"TGT","references":[{}]}}"#,
                quoted.join(",")
            ));
            let cites = (median as i32 + off) as usize;
            for c in 0..cites {
                let id = next("c");
                lines.push(format!(
                    r#"{{"id":"{id}","year":{},"venue":"CIT","references":["{target}"]}}"#,
                    2000 + c % 3
                ));
            }
            if t % 2 == 0 {
                let id = next("late");
                lines.push(format!(
                    r#"{{"id":"{id}","year":{},"venue":"CIT","references":["{target}"]}}"#,
                    2003 + t % 5
                ));
            }
        }
    }
    let mut pad = 0;
    while lines.len() < PLANTED_CORPUS_SIZE {
        pad += 1;
        lines.push(format!(r#"{{"id":"z{pad:05}","venue":"PAD"}}"#));
    }
    assert_eq!(lines.len(), PLANTED_CORPUS_SIZE, "planted corpus overflows");
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

pub fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
