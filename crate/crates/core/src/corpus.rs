//! Expert/document universe.
//!
//! A [`Corpus`] is loaded once and never mutated. Experts and documents get
//! dense 0-based indices in first-seen order: documents in the order of the
//! document records, experts in the order they first appear in the
//! authorship records. Every matrix dimension downstream is derived from
//! these indices, so the same input file always produces the same layout.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const DOCUMENTS_FILE: &str = "documents.csv";
pub const AUTHORSHIP_FILE: &str = "authorship.csv";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpertId {
    pub label: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DocId {
    pub label: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: DocId,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// A directory holding `documents.csv` and `authorship.csv`.
    Csv,
    /// A single JSON object with `documents` and `authorship` arrays.
    Json,
}

impl CorpusFormat {
    /// Directories are CSV, everything else is JSON.
    pub fn detect(path: &Path) -> Self {
        if path.is_dir() {
            CorpusFormat::Csv
        } else {
            CorpusFormat::Json
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonCorpus {
    documents: Vec<JsonDocument>,
    authorship: Vec<JsonAuthorship>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonDocument {
    id: String,
    text: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonAuthorship {
    expert: String,
    doc: String,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    experts: Vec<ExpertId>,
    documents: Vec<Document>,
    /// (expert index, document index), deduplicated, in record order.
    authorship: Vec<(usize, usize)>,
    expert_lookup: HashMap<String, usize>,
    doc_lookup: HashMap<String, usize>,
}

fn check_label(label: &str, record: &str) -> Result<()> {
    if label.is_empty() {
        return Err(Error::Parse {
            record: record.to_string(),
            message: "empty identifier".into(),
        });
    }
    if label.contains(['\t', '\n', '\r']) {
        return Err(Error::Parse {
            record: record.to_string(),
            message: format!(
                "identifier `{}` contains a tab or line break",
                label.escape_debug()
            ),
        });
    }
    Ok(())
}

impl Corpus {
    /// Validate raw `(doc_id, text)` and `(expert_id, doc_id)` records and
    /// assign dense indices.
    pub fn from_records<D, A>(documents: D, authorship: A) -> Result<Self>
    where
        D: IntoIterator<Item = (String, String)>,
        A: IntoIterator<Item = (String, String)>,
    {
        let mut docs = Vec::new();
        let mut doc_lookup = HashMap::new();
        for (label, text) in documents {
            check_label(&label, &format!("document `{label}`"))?;
            if doc_lookup.contains_key(&label) {
                return Err(Error::DuplicateDocument(label));
            }
            let index = docs.len();
            doc_lookup.insert(label.clone(), index);
            docs.push(Document {
                id: DocId { label, index },
                text,
            });
        }
        if docs.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        let mut experts = Vec::new();
        let mut expert_lookup: HashMap<String, usize> = HashMap::new();
        let mut pairs = Vec::new();
        let mut seen = HashSet::new();
        for (expert, doc) in authorship {
            check_label(&expert, &format!("authorship `{expert},{doc}`"))?;
            let &d = doc_lookup
                .get(&doc)
                .ok_or_else(|| Error::DanglingDocument(doc.clone()))?;
            let x = match expert_lookup.get(&expert) {
                Some(&x) => x,
                None => {
                    let index = experts.len();
                    expert_lookup.insert(expert.clone(), index);
                    experts.push(ExpertId {
                        label: expert,
                        index,
                    });
                    index
                }
            };
            if seen.insert((x, d)) {
                pairs.push((x, d));
            }
        }

        let mut authored = vec![false; docs.len()];
        for &(_, d) in &pairs {
            authored[d] = true;
        }
        if let Some(orphan) = authored.iter().position(|a| !a) {
            return Err(Error::OrphanDocument(docs[orphan].id.label.clone()));
        }

        Ok(Corpus {
            experts,
            documents: docs,
            authorship: pairs,
            expert_lookup,
            doc_lookup,
        })
    }

    pub fn ingest(path: &Path, format: CorpusFormat) -> Result<Self> {
        match format {
            CorpusFormat::Csv => Self::read_csv_dir(path),
            CorpusFormat::Json => {
                let mut text = String::new();
                File::open(path)
                    .and_then(|mut f| f.read_to_string(&mut text))
                    .map_err(|e| Error::io(path, e))?;
                Self::from_json_str(&text)
            }
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: JsonCorpus = serde_json::from_str(text).map_err(|e| Error::Parse {
            record: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::from_records(
            raw.documents.into_iter().map(|d| (d.id, d.text)),
            raw.authorship.into_iter().map(|a| (a.expert, a.doc)),
        )
    }

    fn read_csv_dir(dir: &Path) -> Result<Self> {
        let documents = read_pairs(&dir.join(DOCUMENTS_FILE), ["doc_id", "text"])?;
        let authorship = read_pairs(&dir.join(AUTHORSHIP_FILE), ["expert_id", "doc_id"])?;
        Self::from_records(documents, authorship)
    }

    pub fn experts(&self) -> &[ExpertId] {
        &self.experts
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn authorship(&self) -> &[(usize, usize)] {
        &self.authorship
    }

    pub fn num_experts(&self) -> usize {
        self.experts.len()
    }

    pub fn num_documents(&self) -> usize {
        self.documents.len()
    }

    pub fn expert_index(&self, label: &str) -> Option<usize> {
        self.expert_lookup.get(label).copied()
    }

    pub fn doc_index(&self, label: &str) -> Option<usize> {
        self.doc_lookup.get(label).copied()
    }

    /// Authors of document `doc`, in authorship record order.
    pub fn authors_of(&self, doc: usize) -> impl Iterator<Item = usize> + '_ {
        self.authorship
            .iter()
            .filter(move |&&(_, d)| d == doc)
            .map(|&(x, _)| x)
    }

    pub fn to_json_string(&self) -> String {
        let raw = JsonCorpus {
            documents: self
                .documents
                .iter()
                .map(|d| JsonDocument {
                    id: d.id.label.clone(),
                    text: d.text.clone(),
                })
                .collect(),
            authorship: self
                .authorship
                .iter()
                .map(|&(x, d)| JsonAuthorship {
                    expert: self.experts[x].label.clone(),
                    doc: self.documents[d].id.label.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("corpus serializes")
    }

    pub fn write_csv_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let docs = self
            .documents
            .iter()
            .map(|d| [d.id.label.as_str(), d.text.as_str()]);
        write_pairs(&dir.join(DOCUMENTS_FILE), ["doc_id", "text"], docs)?;
        let auth = self.authorship.iter().map(|&(x, d)| {
            [
                self.experts[x].label.as_str(),
                self.documents[d].id.label.as_str(),
            ]
        });
        write_pairs(&dir.join(AUTHORSHIP_FILE), ["expert_id", "doc_id"], auth)
    }

    /// SHA-256 over the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_json_string().as_bytes()))
    }
}

fn read_pairs(path: &Path, header: [&str; 2]) -> Result<Vec<(String, String)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let found = reader.headers().map_err(|e| Error::Parse {
        record: format!("{name} header"),
        message: e.to_string(),
    })?;
    if found.len() != 2 || found.get(0) != Some(header[0]) || found.get(1) != Some(header[1]) {
        return Err(Error::Parse {
            record: format!("{name} header"),
            message: format!("expected `{},{}`", header[0], header[1]),
        });
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        // header is line 1
        let record = format!("{name} record {}", i + 2);
        let row = row.map_err(|e| Error::Parse {
            record: record.clone(),
            message: e.to_string(),
        })?;
        if row.len() != 2 {
            return Err(Error::Parse {
                record,
                message: format!("expected 2 fields, found {}", row.len()),
            });
        }
        out.push((row[0].to_string(), row[1].to_string()));
    }
    Ok(out)
}

fn write_pairs<'a>(
    path: &Path,
    header: [&str; 2],
    rows: impl Iterator<Item = [&'a str; 2]>,
) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| Error::io(path, e.into()))?;
    writer
        .write_record(header)
        .map_err(|e| Error::io(path, e.into()))?;
    for row in rows {
        writer
            .write_record(row)
            .map_err(|e| Error::io(path, e.into()))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
