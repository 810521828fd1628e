//! Expert collaboration graph.
//!
//! A directed bipartite graph with one edge per authorship pair, pointing
//! from the document to its author. All `|V|`-length vectors and the
//! `|V| × |V|` adjacency matrix share one frozen node ordering.
//!
//! The count vectors are padded with 1 at off-role positions:
//! `c_x` holds each expert's document count at expert positions and 1 at
//! document positions; `c_d` holds each document's author count at document
//! positions and 1 at expert positions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeOrdering {
    /// Documents in ingestion order, each followed by its authors not yet
    /// placed.
    #[default]
    Interleaved,
    /// All documents, then all experts.
    DocsFirst,
}

impl NodeOrdering {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeOrdering::Interleaved => "interleaved",
            NodeOrdering::DocsFirst => "docs_first",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Node {
    Document(usize),
    Expert(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ecg {
    ordering: NodeOrdering,
    nodes: Vec<Node>,
    doc_position: Vec<usize>,
    expert_position: Vec<usize>,
    /// (document index, expert index)
    edges: Vec<(usize, usize)>,
    adjacency: CsrMatrix,
    transpose: CsrMatrix,
    expert_count: Vec<f64>,
    document_count: Vec<f64>,
}

impl Ecg {
    pub fn build(corpus: &Corpus, ordering: NodeOrdering) -> Ecg {
        let mut nodes = Vec::with_capacity(corpus.num_documents() + corpus.num_experts());
        match ordering {
            NodeOrdering::Interleaved => {
                let mut placed = vec![false; corpus.num_experts()];
                for d in 0..corpus.num_documents() {
                    nodes.push(Node::Document(d));
                    for x in corpus.authors_of(d) {
                        if !placed[x] {
                            placed[x] = true;
                            nodes.push(Node::Expert(x));
                        }
                    }
                }
            }
            NodeOrdering::DocsFirst => {
                nodes.extend((0..corpus.num_documents()).map(Node::Document));
                nodes.extend((0..corpus.num_experts()).map(Node::Expert));
            }
        }
        let edges = corpus.authorship().iter().map(|&(x, d)| (d, x)).collect();
        Self::from_parts(
            ordering,
            nodes,
            corpus.num_documents(),
            corpus.num_experts(),
            edges,
        )
        .expect("a validated corpus yields a valid graph")
    }

    /// Assemble a graph from a stored node order and edge list.
    pub fn from_parts(
        ordering: NodeOrdering,
        nodes: Vec<Node>,
        num_documents: usize,
        num_experts: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Ecg> {
        const UNSET: usize = usize::MAX;
        let mut doc_position = vec![UNSET; num_documents];
        let mut expert_position = vec![UNSET; num_experts];
        for (i, node) in nodes.iter().enumerate() {
            let slot = match *node {
                Node::Document(d) => doc_position.get_mut(d),
                Node::Expert(x) => expert_position.get_mut(x),
            }
            .ok_or_else(|| Error::Dimension(format!("node {node:?} out of range")))?;
            if *slot != UNSET {
                return Err(Error::Dimension(format!("node {node:?} listed twice")));
            }
            *slot = i;
        }
        if nodes.len() != num_documents + num_experts {
            return Err(Error::Dimension(format!(
                "node order has {} entries, expected {}",
                nodes.len(),
                num_documents + num_experts
            )));
        }

        let n = nodes.len();
        let mut triplets = Vec::with_capacity(edges.len());
        for &(d, x) in &edges {
            if d >= num_documents || x >= num_experts {
                return Err(Error::Dimension(format!("edge ({d}, {x}) out of range")));
            }
            triplets.push((doc_position[d], expert_position[x], 1.0));
        }
        let adjacency = CsrMatrix::from_triplets(n, n, triplets)?;
        if adjacency.iter().any(|(_, _, v)| v != 1.0) {
            return Err(Error::Dimension("duplicate edge".into()));
        }
        let transpose = adjacency.transpose();

        let mut expert_count = vec![1.0; n];
        let mut document_count = vec![1.0; n];
        for (x, &pos) in expert_position.iter().enumerate() {
            let degree = transpose.row(pos).count();
            if degree == 0 {
                return Err(Error::Dimension(format!("expert {x} has no documents")));
            }
            expert_count[pos] = degree as f64;
        }
        for (d, &pos) in doc_position.iter().enumerate() {
            let degree = adjacency.row(pos).count();
            if degree == 0 {
                return Err(Error::Dimension(format!("document {d} has no authors")));
            }
            document_count[pos] = degree as f64;
        }

        Ok(Ecg {
            ordering,
            nodes,
            doc_position,
            expert_position,
            edges,
            adjacency,
            transpose,
            expert_count,
            document_count,
        })
    }

    pub fn ordering(&self) -> NodeOrdering {
        self.ordering
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_documents(&self) -> usize {
        self.doc_position.len()
    }

    pub fn num_experts(&self) -> usize {
        self.expert_position.len()
    }

    /// Position of document `d` in the node order.
    pub fn doc_position(&self, d: usize) -> usize {
        self.doc_position[d]
    }

    pub fn expert_position(&self, x: usize) -> usize {
        self.expert_position[x]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `M`: rows are sources (documents), columns targets (experts).
    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    pub fn adjacency_transpose(&self) -> &CsrMatrix {
        &self.transpose
    }

    /// `(c_x, c_d)`.
    pub fn count_vectors(&self) -> (&[f64], &[f64]) {
        (&self.expert_count, &self.document_count)
    }

    /// Place per-expert values at their node positions, zeros elsewhere.
    pub fn embed_experts(&self, values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_nodes()];
        for (x, &v) in values.iter().enumerate() {
            out[self.expert_position[x]] = v;
        }
        out
    }

    pub fn embed_documents(&self, values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_nodes()];
        for (d, &v) in values.iter().enumerate() {
            out[self.doc_position[d]] = v;
        }
        out
    }

    /// Read back per-expert values from a node-indexed vector.
    pub fn project_experts(&self, v: &[f64]) -> Vec<f64> {
        self.expert_position.iter().map(|&p| v[p]).collect()
    }

    pub fn project_documents(&self, v: &[f64]) -> Vec<f64> {
        self.doc_position.iter().map(|&p| v[p]).collect()
    }

    /// Node labels in order, given expert and document label tables.
    pub fn node_labels<'a>(&self, experts: &'a [String], documents: &'a [String]) -> Vec<&'a str> {
        self.nodes
            .iter()
            .map(|n| match *n {
                Node::Document(d) => documents[d].as_str(),
                Node::Expert(x) => experts[x].as_str(),
            })
            .collect()
    }

    /// `doc_id -> expert_id`, one edge per line.
    pub fn edge_list_text(&self, experts: &[String], documents: &[String]) -> String {
        let mut out = String::new();
        for &(d, x) in &self.edges {
            writeln!(out, "{} -> {}", documents[d], experts[x]).expect("write to string");
        }
        out
    }

    /// One node label per line.
    pub fn ordering_text(&self, experts: &[String], documents: &[String]) -> String {
        let mut out = String::new();
        for label in self.node_labels(experts, documents) {
            out.push_str(label);
            out.push('\n');
        }
        out
    }
}
