//! Document, topic and expert weight matrices.
//!
//! Topic weights use N-gram TF-IDF:
//!
//! ```text
//! nTF(t, d)  = (Σ_i DTM[d, w_i]) / |t|
//! nIDF(t)    = ln((|D|·df(t) + 1) / (df(w_1 ∧ … ∧ w_n)² + 1)) + 1
//! DPM[d, t]  = nTF(t, d) · nIDF(t)      (only where t was extracted from d)
//! ETopM      = EDM · DPM
//! DTopM      = DPM
//! ```
//!
//! nIDF is not clamped. When the constituent tokens co-occur in many more
//! documents than the phrase itself the weight goes negative, and that
//! negative value is stored as-is.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::extractor::{DocumentTerms, Extraction, TopicPhrase};
use crate::sparse::{format_sig9, CsrMatrix};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "DTM")]
    Dtm,
    #[serde(rename = "DPM")]
    Dpm,
    #[serde(rename = "EDM")]
    Edm,
    #[serde(rename = "ETopM")]
    ETopM,
    #[serde(rename = "DTopM")]
    DTopM,
    #[serde(rename = "RETopM")]
    RETopM,
    /// Graph adjacency, rows are sources.
    #[serde(rename = "M")]
    Adjacency,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::Dtm,
        Role::Dpm,
        Role::Edm,
        Role::ETopM,
        Role::DTopM,
        Role::RETopM,
        Role::Adjacency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Dtm => "DTM",
            Role::Dpm => "DPM",
            Role::Edm => "EDM",
            Role::ETopM => "ETopM",
            Role::DTopM => "DTopM",
            Role::RETopM => "RETopM",
            Role::Adjacency => "M",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown matrix `{s}`")))
    }
}

/// A sparse matrix tagged with what its axes mean.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    role: Role,
    matrix: CsrMatrix,
}

impl WeightMatrix {
    pub fn new(role: Role, matrix: CsrMatrix) -> Self {
        WeightMatrix { role, matrix }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix.get(row, col)
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.matrix.column(col)
    }

    pub fn with_role(&self, role: Role) -> WeightMatrix {
        WeightMatrix {
            role,
            matrix: self.matrix.clone(),
        }
    }

    /// Text export: `role rows cols nnz` then one `row col value` line per
    /// stored entry, values with 9 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.role,
            self.rows(),
            self.cols(),
            self.matrix.nnz()
        );
        for (r, c, v) in self.matrix.iter() {
            writeln!(out, "{r} {c} {}", format_sig9(v)).expect("write to string");
        }
        out
    }

    /// Parse the text export. `source` names the input in error messages.
    pub fn from_text(text: &str, source: &str) -> Result<Self> {
        let bad = |line: usize, message: String| Error::Parse {
            record: format!("{source} line {line}"),
            message,
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| bad(1, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad(1, "expected `role rows cols nnz`".into()));
        }
        let role: Role = fields[0]
            .parse()
            .map_err(|e: Error| bad(1, e.to_string()))?;
        let parse_usize = |s: &str, line: usize| {
            s.parse::<usize>()
                .map_err(|e| bad(line, format!("`{s}`: {e}")))
        };
        let rows = parse_usize(fields[1], 1)?;
        let cols = parse_usize(fields[2], 1)?;
        let nnz = parse_usize(fields[3], 1)?;
        let mut triplets = Vec::with_capacity(nnz);
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(i + 1, "expected `row col value`".into()));
            }
            let r = parse_usize(parts[0], i + 1)?;
            let c = parse_usize(parts[1], i + 1)?;
            let v: f64 = parts[2]
                .parse()
                .map_err(|e| bad(i + 1, format!("`{}`: {e}", parts[2])))?;
            triplets.push((r, c, v));
        }
        if triplets.len() != nnz {
            return Err(bad(
                1,
                format!("header declares {nnz} entries, found {}", triplets.len()),
            ));
        }
        let matrix =
            CsrMatrix::from_triplets(rows, cols, triplets).map_err(|e| bad(1, e.to_string()))?;
        Ok(WeightMatrix { role, matrix })
    }
}

/// Document frequencies for tokens and topics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfIndex {
    /// Documents containing each token.
    pub token_df: Vec<usize>,
    /// Documents each topic was extracted from.
    pub topic_df: Vec<usize>,
    /// Documents containing every constituent token of each topic.
    pub topic_conj_df: Vec<usize>,
}

fn token_indices(topic: &TopicPhrase, tokens: &Vocabulary) -> Result<Vec<usize>> {
    topic
        .lemmas()
        .iter()
        .map(|l| {
            tokens
                .index(l)
                .ok_or_else(|| Error::UnindexedToken(l.clone()))
        })
        .collect()
}

impl DfIndex {
    pub fn build(extraction: &Extraction, dtm: &WeightMatrix) -> Result<Self> {
        let num_docs = dtm.rows();
        // token-major presence vectors
        let presence = dtm.matrix().transpose();
        let token_df = (0..presence.rows())
            .map(|w| presence.row(w).count())
            .collect();

        let mut topic_df = vec![0; extraction.topics.len()];
        for doc in &extraction.documents {
            let distinct: BTreeSet<String> = doc.topics.iter().map(TopicPhrase::key).collect();
            for key in distinct {
                let t = extraction
                    .topics
                    .index(&key)
                    .ok_or_else(|| Error::UnknownTopic(key.clone()))?;
                topic_df[t] += 1;
            }
        }

        let mut topic_conj_df = Vec::with_capacity(extraction.topics.len());
        for (_, key) in extraction.topics.iter() {
            let constituents = token_indices(&TopicPhrase::from_key(key), &extraction.tokens)?;
            let mut all = vec![true; num_docs];
            for w in constituents {
                let mut present = vec![false; num_docs];
                for (d, _) in presence.row(w) {
                    present[d] = true;
                }
                for (a, p) in all.iter_mut().zip(present) {
                    *a &= p;
                }
            }
            topic_conj_df.push(all.into_iter().filter(|&b| b).count());
        }

        Ok(DfIndex {
            token_df,
            topic_df,
            topic_conj_df,
        })
    }
}

/// Raw token counts, `|D| × |W|`.
pub fn build_dtm(documents: &[DocumentTerms], tokens: &Vocabulary) -> Result<WeightMatrix> {
    let mut triplets = Vec::new();
    for (d, doc) in documents.iter().enumerate() {
        for lemma in &doc.tokens {
            let w = tokens
                .index(lemma)
                .ok_or_else(|| Error::UnindexedToken(lemma.clone()))?;
            triplets.push((d, w, 1.0));
        }
    }
    let matrix = CsrMatrix::from_triplets(documents.len(), tokens.len(), triplets)?;
    Ok(WeightMatrix::new(Role::Dtm, matrix))
}

/// Mean of the constituent token counts of `topic` in document `doc`.
/// A lemma repeated inside the phrase counts once per slot.
pub fn ntf(
    topic: &TopicPhrase,
    doc: usize,
    dtm: &WeightMatrix,
    tokens: &Vocabulary,
) -> Result<f64> {
    let indices = token_indices(topic, tokens)?;
    let total: f64 = indices.iter().map(|&w| dtm.get(doc, w)).sum();
    Ok(total / indices.len() as f64)
}

/// N-gram inverse document frequency, natural log.
pub fn nidf(df: usize, conj_df: usize, num_docs: usize) -> f64 {
    let numerator = (num_docs * df) as f64 + 1.0;
    let denominator = (conj_df * conj_df) as f64 + 1.0;
    (numerator / denominator).ln() + 1.0
}

/// nTF·nIDF for every (document, topic) pair where the topic was extracted.
pub fn build_dpm(
    extraction: &Extraction,
    dtm: &WeightMatrix,
    df: &DfIndex,
) -> Result<WeightMatrix> {
    let num_docs = dtm.rows();
    let weights: Vec<f64> = df
        .topic_df
        .iter()
        .zip(&df.topic_conj_df)
        .map(|(&d, &c)| nidf(d, c, num_docs))
        .collect();
    let mut triplets = Vec::new();
    for (d, doc) in extraction.documents.iter().enumerate() {
        let distinct: BTreeSet<&TopicPhrase> = doc.topics.iter().collect();
        for topic in distinct {
            let t = extraction
                .topics
                .index(&topic.key())
                .ok_or_else(|| Error::UnknownTopic(topic.key()))?;
            let tf = ntf(topic, d, dtm, &extraction.tokens)?;
            triplets.push((d, t, tf * weights[t]));
        }
    }
    let matrix = CsrMatrix::from_triplets(num_docs, extraction.topics.len(), triplets)?;
    Ok(WeightMatrix::new(Role::Dpm, matrix))
}

/// Binary authorship, `|X| × |D|`.
pub fn build_edm(corpus: &Corpus) -> WeightMatrix {
    let matrix = CsrMatrix::from_triplets(
        corpus.num_experts(),
        corpus.num_documents(),
        corpus.authorship().iter().map(|&(x, d)| (x, d, 1.0)),
    )
    .expect("authorship indices are in range");
    WeightMatrix::new(Role::Edm, matrix)
}

pub fn build_etopm(edm: &WeightMatrix, dpm: &WeightMatrix) -> Result<WeightMatrix> {
    if edm.cols() != dpm.rows() {
        return Err(Error::Dimension(format!(
            "EDM has {} documents but DPM has {}",
            edm.cols(),
            dpm.rows()
        )));
    }
    Ok(WeightMatrix::new(
        Role::ETopM,
        edm.matrix().matmul(dpm.matrix())?,
    ))
}

/// Every matrix of the vector space model for one corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct NvsmMatrices {
    pub dtm: WeightMatrix,
    pub dpm: WeightMatrix,
    pub edm: WeightMatrix,
    pub etopm: WeightMatrix,
    pub dtopm: WeightMatrix,
}

impl NvsmMatrices {
    pub fn build(corpus: &Corpus, extraction: &Extraction) -> Result<Self> {
        if extraction.documents.len() != corpus.num_documents() {
            return Err(Error::Dimension(format!(
                "extraction covers {} documents, corpus has {}",
                extraction.documents.len(),
                corpus.num_documents()
            )));
        }
        let dtm = build_dtm(&extraction.documents, &extraction.tokens)?;
        let df = DfIndex::build(extraction, &dtm)?;
        let dpm = build_dpm(extraction, &dtm, &df)?;
        let edm = build_edm(corpus);
        let etopm = build_etopm(&edm, &dpm)?;
        let dtopm = dpm.with_role(Role::DTopM);
        Ok(NvsmMatrices {
            dtm,
            dpm,
            edm,
            etopm,
            dtopm,
        })
    }
}
