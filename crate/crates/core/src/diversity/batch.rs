use std::collections::BTreeSet;

use log::debug;
use rayon::prelude::*;

use crate::graph::{CitationGraph, DisjointSets, NodeId};
use crate::scalar::Real;
use crate::semantic::EmbeddingTable;

use super::edges::{
    citation_pairs, co_citation_edges, coupling_edges, semantic_edges, NodePair, ReferenceScope,
    ReferenceSimilarities,
};
use super::thresholds::{resolve_theta1, resolve_theta2};
use super::{DiversityError, DiversityVariant, ThresholdPolicy, VariantCounts};

/// Diversity values for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityResult<F> {
    pub target: NodeId,
    pub target_id: String,
    pub n_refs: usize,
    /// Component count per requested variant.
    pub counts: VariantCounts,
    /// Distinct undirected pairs in each requested variant's edge union.
    pub edge_counts: VariantCounts,
    pub theta1: Option<F>,
    pub theta2: Option<F>,
}

impl<F> DiversityResult<F> {
    pub fn get(&self, v: DiversityVariant) -> Option<usize> {
        self.counts.get(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetFailure {
    pub target: NodeId,
    pub target_id: String,
    pub error: DiversityError,
}

/// Per-target results and failures, both in target order.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutcome<F> {
    pub results: Vec<DiversityResult<F>>,
    pub failures: Vec<TargetFailure>,
}

fn components(scope: &ReferenceScope<'_>, sets: &[&BTreeSet<NodePair>]) -> (usize, usize) {
    let mut forest = DisjointSets::new(scope.refs().len());
    let mut distinct: BTreeSet<NodePair> = BTreeSet::new();
    for set in sets {
        for &(a, b) in set.iter() {
            if distinct.insert((a, b)) {
                let i = scope.local(a).expect("edge endpoint in reference set");
                let j = scope.local(b).expect("edge endpoint in reference set");
                forest.union(i, j);
            }
        }
    }
    (forest.components(), distinct.len())
}

/// Evaluates the requested variants for one target, sharing edge sets
/// between variants.
pub fn evaluate<F: Real>(
    scope: &ReferenceScope<'_>,
    sims: Option<&ReferenceSimilarities<F>>,
    variants: &[DiversityVariant],
    policy: &ThresholdPolicy<F>,
) -> Result<DiversityResult<F>, DiversityError> {
    let graph = scope.graph();
    let n_refs = scope.refs().len();
    let mut result = DiversityResult {
        target: scope.target(),
        target_id: graph.id(scope.target()).to_string(),
        n_refs,
        counts: VariantCounts::default(),
        edge_counts: VariantCounts::default(),
        theta1: None,
        theta2: None,
    };

    // With at most one reference there are no pairs to link, whatever the
    // thresholds would be.
    if n_refs <= 1 {
        for &v in variants {
            result.counts.set(v, n_refs);
            result.edge_counts.set(v, 0);
        }
        if variants.iter().any(|v| v.uses_theta1()) {
            result.theta1 = policy.theta1_override;
        }
        if variants.iter().any(|v| v.uses_theta2()) {
            result.theta2 = policy.theta2_override;
        }
        return Ok(result);
    }

    if let Some(&v) = variants.iter().find(|v| v.needs_similarity()) {
        if sims.is_none() {
            return Err(DiversityError::MissingSimilarities(v));
        }
    }
    if variants.iter().any(|v| v.uses_theta1()) {
        result.theta1 = Some(resolve_theta1(sims, policy)?);
    }
    if variants.iter().any(|v| v.uses_theta2()) {
        result.theta2 = Some(resolve_theta2(sims, policy)?);
    }

    let direct = citation_pairs(scope);
    let needs_combinatorial = variants.iter().any(|v| {
        matches!(
            v,
            DiversityVariant::Combined
                | DiversityVariant::CombinedEnhanced
                | DiversityVariant::SemanticCombinedEnhanced
                | DiversityVariant::CombinedSemanticEnhanced
        )
    });
    let (co_citation, coupling) = if needs_combinatorial {
        (co_citation_edges(scope), coupling_edges(scope))
    } else {
        Default::default()
    };
    let semantic = match (result.theta1, sims) {
        (Some(t1), Some(s)) => semantic_edges(scope, s, t1)?,
        _ => BTreeSet::new(),
    };
    let filtered = match (result.theta2, sims) {
        (Some(t2), Some(s)) => {
            let keep = |set: &BTreeSet<NodePair>| -> BTreeSet<NodePair> {
                set.iter()
                    .copied()
                    .filter(|&(a, b)| {
                        let (i, j) = (scope.local(a).unwrap(), scope.local(b).unwrap());
                        s.between(i, j) >= t2 && !scope.linked(a, b)
                    })
                    .collect()
            };
            let mut f = keep(&co_citation);
            f.extend(keep(&coupling));
            f
        }
        _ => BTreeSet::new(),
    };

    for &v in variants {
        let sets: Vec<&BTreeSet<NodePair>> = match v {
            DiversityVariant::Plain => vec![&direct],
            DiversityVariant::Combined => vec![&direct, &co_citation, &coupling],
            DiversityVariant::SemanticEnhanced => vec![&direct, &semantic],
            DiversityVariant::CombinedEnhanced => vec![&direct, &filtered],
            DiversityVariant::SemanticCombinedEnhanced => vec![&direct, &semantic, &filtered],
            DiversityVariant::CombinedSemanticEnhanced => {
                vec![&direct, &co_citation, &coupling, &semantic]
            }
        };
        let (count, edges) = components(scope, &sets);
        result.counts.set(v, count);
        result.edge_counts.set(v, edges);
    }
    Ok(result)
}

/// Diversity of one target under one variant; 0 for an empty reference set.
pub fn structural_diversity<F: Real>(
    graph: &CitationGraph,
    sims: Option<&ReferenceSimilarities<F>>,
    target: NodeId,
    variant: DiversityVariant,
    policy: &ThresholdPolicy<F>,
) -> Result<usize, DiversityError> {
    let scope = ReferenceScope::new(graph, target)?;
    let r = evaluate(&scope, sims, &[variant], policy)?;
    Ok(r.get(variant).expect("requested variant is evaluated"))
}

fn evaluate_target<F: Real>(
    graph: &CitationGraph,
    table: Option<&EmbeddingTable>,
    target: NodeId,
    variants: &[DiversityVariant],
    policy: &ThresholdPolicy<F>,
) -> Result<DiversityResult<F>, DiversityError> {
    let scope = ReferenceScope::new(graph, target)?;
    let want_sims = scope.refs().len() > 1 && variants.iter().any(|v| v.needs_similarity());
    let sims = match (want_sims, table) {
        (true, Some(t)) => Some(ReferenceSimilarities::from_table(t, &scope)?),
        _ => None,
    };
    evaluate(&scope, sims.as_ref(), variants, policy)
}

/// Evaluates every target in parallel. Individual failures (for instance a
/// missing embedding) are collected rather than aborting the batch; output
/// order follows `targets`.
pub fn compute_all<F: Real>(
    graph: &CitationGraph,
    table: Option<&EmbeddingTable>,
    targets: &[NodeId],
    variants: &[DiversityVariant],
    policy: &ThresholdPolicy<F>,
) -> Result<BatchOutcome<F>, DiversityError> {
    if targets.is_empty() {
        return Err(DiversityError::NoTargets);
    }
    let evaluated: Vec<Result<DiversityResult<F>, DiversityError>> = targets
        .par_iter()
        .map(|&t| evaluate_target(graph, table, t, variants, policy))
        .collect();
    let mut outcome = BatchOutcome {
        results: Vec::with_capacity(targets.len()),
        failures: Vec::new(),
    };
    for (&target, r) in targets.iter().zip(evaluated) {
        match r {
            Ok(r) => outcome.results.push(r),
            Err(error) => outcome.failures.push(TargetFailure {
                target,
                target_id: if graph.contains(target) {
                    graph.id(target).to_string()
                } else {
                    String::new()
                },
                error,
            }),
        }
    }
    debug!(
        "evaluated {} targets, {} failed",
        outcome.results.len(),
        outcome.failures.len()
    );
    Ok(outcome)
}
