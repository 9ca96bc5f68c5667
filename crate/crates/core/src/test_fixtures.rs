//! Shared unit-test fixtures: the eight-paper worked example graph and
//! its planted embeddings.

use crate::corpus::{parse_reader, Corpus, CorpusFormat};
use crate::graph::{CitationGraph, NodeId};
use crate::semantic::{read_embeddings, EmbeddingTable};

pub const F1_JSONL: &str = include_str!("../tests/fixtures/f1.jsonl");
pub const F1_VECTORS_JSONL: &str = include_str!("../tests/fixtures/f1-vecs.jsonl");

pub fn f1_corpus() -> Corpus {
    parse_reader(F1_JSONL.as_bytes(), CorpusFormat::Canonical, "f1").unwrap()
}

pub fn f1_graph() -> CitationGraph {
    CitationGraph::build(&f1_corpus()).unwrap()
}

pub fn f1_embeddings() -> EmbeddingTable {
    read_embeddings(F1_VECTORS_JSONL.as_bytes()).unwrap()
}

pub fn n(g: &CitationGraph, id: &str) -> NodeId {
    g.node(id).unwrap()
}
