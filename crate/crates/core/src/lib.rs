//! Expert finding over a document corpus.
//!
//! Documents are reduced to noun-phrase topics, weighted with a normalized
//! TF-IDF that accounts for multi-word phrases, and propagated to their
//! authors. A damped co-HITS iteration over the bipartite expert-document
//! graph then reinforces each expert's topic weights using the weights of
//! their collaborators.
//!
//! The usual flow is [`Corpus::ingest`], [`Index::from_corpus`],
//! [`Index::reinforce`], then [`find_experts`] or [`profile_expert`].
//! [`save_index`] and [`load_index`] persist an index between steps.

pub mod cohits;
pub mod corpus;
pub mod ecg;
pub mod error;
pub mod extractor;
pub mod index;
pub mod matrices;
pub mod persistence;
pub mod ranking;
pub mod sparse;
pub mod vocab;

pub use cohits::{AuthorityInit, CoHitsParams, HubInit, Reinforcement, TopicDiagnostics};
pub use corpus::{Corpus, CorpusFormat};
pub use ecg::{Ecg, Node, NodeOrdering};
pub use error::{Error, Result};
pub use extractor::{ExtractionConfig, Stopwords, TaggerMode, TopicPhrase};
pub use index::Index;
pub use matrices::{NvsmMatrices, Role, WeightMatrix};
pub use persistence::{load_index, save_index};
pub use ranking::{find_experts, profile_expert, QueryOptions, QueryOutcome, RankedList};
pub use sparse::CsrMatrix;
pub use vocab::Vocabulary;
