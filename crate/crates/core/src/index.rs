//! Everything a built corpus produces, in one place.

use crate::cohits::{reinforce_with_threads, CoHitsParams, Reinforcement};
use crate::corpus::Corpus;
use crate::ecg::{Ecg, NodeOrdering};
use crate::error::{Error, Result};
use crate::extractor::{extract_corpus, Extraction, ExtractionConfig, ExtractionSnapshot};
use crate::matrices::{NvsmMatrices, Role, WeightMatrix};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq)]
pub struct Index {
    pub corpus_fingerprint: String,
    pub extraction: ExtractionSnapshot,
    pub experts: Vec<String>,
    pub documents: Vec<String>,
    pub tokens: Vocabulary,
    pub topics: Vocabulary,
    pub matrices: NvsmMatrices,
    pub ecg: Ecg,
    /// Set once the index has been reinforced.
    pub cohits: Option<CoHitsParams>,
    pub retopm: Option<WeightMatrix>,
}

impl Index {
    /// Build matrices and graph from an existing extraction.
    pub fn build(
        corpus: &Corpus,
        extraction: &Extraction,
        snapshot: ExtractionSnapshot,
        ordering: NodeOrdering,
    ) -> Result<Index> {
        let matrices = NvsmMatrices::build(corpus, extraction)?;
        Ok(Index {
            corpus_fingerprint: corpus.fingerprint(),
            extraction: snapshot,
            experts: corpus.experts().iter().map(|x| x.label.clone()).collect(),
            documents: corpus
                .documents()
                .iter()
                .map(|d| d.id.label.clone())
                .collect(),
            tokens: extraction.tokens.clone(),
            topics: extraction.topics.clone(),
            matrices,
            ecg: Ecg::build(corpus, ordering),
            cohits: None,
            retopm: None,
        })
    }

    /// Extract and build in one go.
    pub fn from_corpus(
        corpus: &Corpus,
        config: &ExtractionConfig,
        ordering: NodeOrdering,
    ) -> Result<Index> {
        let extraction = extract_corpus(corpus, config)?;
        Self::build(corpus, &extraction, config.snapshot(), ordering)
    }

    /// Run the reinforcement and store its result in the index.
    pub fn reinforce(&mut self, params: &CoHitsParams, threads: usize) -> Result<Reinforcement> {
        let result = reinforce_with_threads(
            &self.matrices.etopm,
            &self.matrices.dtopm,
            &self.ecg,
            &self.topics,
            params,
            threads,
        )?;
        self.cohits = Some(*params);
        self.retopm = Some(result.retopm.clone());
        Ok(result)
    }

    pub fn matrix(&self, role: Role) -> Option<&WeightMatrix> {
        match role {
            Role::Dtm => Some(&self.matrices.dtm),
            Role::Dpm => Some(&self.matrices.dpm),
            Role::Edm => Some(&self.matrices.edm),
            Role::ETopM => Some(&self.matrices.etopm),
            Role::DTopM => Some(&self.matrices.dtopm),
            Role::RETopM => self.retopm.as_ref(),
            Role::Adjacency => None,
        }
    }

    pub fn retopm(&self) -> Result<&WeightMatrix> {
        self.retopm.as_ref().ok_or(Error::NotReinforced)
    }

    /// Row and column labels for a matrix role.
    pub fn axis_labels(&self, role: Role) -> (Vec<String>, Vec<String>) {
        let node_labels = || -> Vec<String> {
            self.ecg
                .node_labels(&self.experts, &self.documents)
                .into_iter()
                .map(str::to_string)
                .collect()
        };
        match role {
            Role::Dtm => (self.documents.clone(), self.tokens.keys().to_vec()),
            Role::Dpm | Role::DTopM => (self.documents.clone(), self.topics.keys().to_vec()),
            Role::Edm => (self.experts.clone(), self.documents.clone()),
            Role::ETopM | Role::RETopM => (self.experts.clone(), self.topics.keys().to_vec()),
            Role::Adjacency => (node_labels(), node_labels()),
        }
    }
}
