//! On-disk index layout.
//!
//! ```text
//! manifest.json
//! matrices/{dtm,dpm,edm,etopm,dtopm,retopm}.txt   matrix text format
//! vocab/{tokens,topics}.tsv                       index<TAB>key
//! labels/{experts,documents}.tsv                  index<TAB>label
//! graph/edges.txt                                 doc_id -> expert_id
//! graph/ordering.txt                              one node label per line
//! graph/adjacency.txt                             matrix text format
//! ```
//!
//! The manifest lists every file with its SHA-256. Saving writes into a
//! sibling temporary directory and renames it into place. Real values
//! survive a round trip to 9 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cohits::CoHitsParams;
use crate::ecg::{Ecg, Node, NodeOrdering};
use crate::error::{Error, Result};
use crate::extractor::ExtractionSnapshot;
use crate::index::Index;
use crate::matrices::{NvsmMatrices, Role, WeightMatrix};
use crate::vocab::Vocabulary;

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

const TOKENS: &str = "vocab/tokens.tsv";
const TOPICS: &str = "vocab/topics.tsv";
const EXPERTS: &str = "labels/experts.tsv";
const DOCUMENTS: &str = "labels/documents.tsv";
const EDGES: &str = "graph/edges.txt";
const ORDERING: &str = "graph/ordering.txt";
const ADJACENCY: &str = "graph/adjacency.txt";

fn matrix_path(role: Role) -> &'static str {
    match role {
        Role::Dtm => "matrices/dtm.txt",
        Role::Dpm => "matrices/dpm.txt",
        Role::Edm => "matrices/edm.txt",
        Role::ETopM => "matrices/etopm.txt",
        Role::DTopM => "matrices/dtopm.txt",
        Role::RETopM => "matrices/retopm.txt",
        Role::Adjacency => ADJACENCY,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    Matrix,
    Vocab,
    Labels,
    Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub kind: FileKind,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub kind: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexManifest {
    pub format_version: u32,
    pub corpus_fingerprint: String,
    pub extraction: ExtractionSnapshot,
    pub ordering: NodeOrdering,
    pub node_order: Vec<NodeEntry>,
    pub cohits: Option<CoHitsParams>,
    pub files: Vec<FileEntry>,
}

impl IndexManifest {
    pub fn file(&self, path: &str) -> Option<&FileEntry> {
        self.files.iter().find(|f| f.path == path)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn indexed_lines<'a>(keys: impl Iterator<Item = &'a str>) -> String {
    keys.enumerate()
        .map(|(i, k)| format!("{i}\t{k}\n"))
        .collect()
}

fn parse_indexed_lines(text: &str, source: &str) -> Result<Vec<String>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let bad = |message: &str| Error::Parse {
                record: format!("{source} line {}", i + 1),
                message: message.to_string(),
            };
            let (idx, key) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected `index<TAB>key`"))?;
            if idx.parse::<usize>().ok() != Some(i) {
                return Err(bad("index out of sequence"));
            }
            Ok(key.to_string())
        })
        .collect()
}

/// Serialized files of an index, in manifest order.
fn render(index: &Index) -> Vec<(String, FileKind, String)> {
    let mut files = Vec::new();
    for role in [
        Role::Dtm,
        Role::Dpm,
        Role::Edm,
        Role::ETopM,
        Role::DTopM,
        Role::RETopM,
    ] {
        if let Some(m) = index.matrix(role) {
            files.push((matrix_path(role).to_string(), FileKind::Matrix, m.to_text()));
        }
    }
    files.push((
        TOKENS.into(),
        FileKind::Vocab,
        indexed_lines(index.tokens.keys().iter().map(String::as_str)),
    ));
    files.push((
        TOPICS.into(),
        FileKind::Vocab,
        indexed_lines(index.topics.keys().iter().map(String::as_str)),
    ));
    files.push((
        EXPERTS.into(),
        FileKind::Labels,
        indexed_lines(index.experts.iter().map(String::as_str)),
    ));
    files.push((
        DOCUMENTS.into(),
        FileKind::Labels,
        indexed_lines(index.documents.iter().map(String::as_str)),
    ));
    files.push((
        EDGES.into(),
        FileKind::Graph,
        index.ecg.edge_list_text(&index.experts, &index.documents),
    ));
    files.push((
        ORDERING.into(),
        FileKind::Graph,
        index.ecg.ordering_text(&index.experts, &index.documents),
    ));
    files.push((
        ADJACENCY.into(),
        FileKind::Graph,
        WeightMatrix::new(Role::Adjacency, index.ecg.adjacency().clone()).to_text(),
    ));
    files
}

fn manifest_for(index: &Index, files: &[(String, FileKind, String)]) -> IndexManifest {
    let node_order = index
        .ecg
        .nodes()
        .iter()
        .map(|n| match *n {
            Node::Document(d) => NodeEntry {
                kind: "document".into(),
                label: index.documents[d].clone(),
            },
            Node::Expert(x) => NodeEntry {
                kind: "expert".into(),
                label: index.experts[x].clone(),
            },
        })
        .collect();
    IndexManifest {
        format_version: FORMAT_VERSION,
        corpus_fingerprint: index.corpus_fingerprint.clone(),
        extraction: index.extraction.clone(),
        ordering: index.ecg.ordering(),
        node_order,
        cohits: index.cohits,
        files: files
            .iter()
            .map(|(path, kind, body)| FileEntry {
                path: path.clone(),
                kind: kind.clone(),
                sha256: sha256_hex(body.as_bytes()),
            })
            .collect(),
    }
}

fn write_all(
    dir: &Path,
    files: &[(String, FileKind, String)],
    manifest: &IndexManifest,
) -> Result<()> {
    for (path, _, body) in files {
        let full = dir.join(path);
        if let Some(parent) = full.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&full, body).map_err(|e| Error::io(&full, e))?;
    }
    let mut json = serde_json::to_string_pretty(manifest)?;
    json.push('\n');
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, json).map_err(|e| Error::io(&path, e))
}

fn sibling(dir: &Path, tag: &str) -> PathBuf {
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "index".into());
    dir.with_file_name(format!(".{name}.{tag}-{}", std::process::id()))
}

/// Write `index` to `dir`, replacing whatever is there.
pub fn save_index(dir: &Path, index: &Index) -> Result<IndexManifest> {
    let files = render(index);
    let manifest = manifest_for(index, &files);

    if let Some(parent) = dir.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let tmp = sibling(dir, "tmp");
    if tmp.exists() {
        fs::remove_dir_all(&tmp).map_err(|e| Error::io(&tmp, e))?;
    }
    fs::create_dir_all(&tmp).map_err(|e| Error::io(&tmp, e))?;
    if let Err(e) = write_all(&tmp, &files, &manifest) {
        let _ = fs::remove_dir_all(&tmp);
        return Err(e);
    }

    let old = sibling(dir, "old");
    let had_previous = dir.exists();
    if had_previous {
        fs::rename(dir, &old).map_err(|e| {
            let _ = fs::remove_dir_all(&tmp);
            Error::io(dir, e)
        })?;
    }
    if let Err(e) = fs::rename(&tmp, dir) {
        let _ = fs::remove_dir_all(&tmp);
        if had_previous {
            let _ = fs::rename(&old, dir);
        }
        return Err(Error::io(dir, e));
    }
    if had_previous {
        fs::remove_dir_all(&old).map_err(|e| Error::io(&old, e))?;
    }
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<IndexManifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingFile(MANIFEST_FILE.into()))
        }
        Err(e) => return Err(Error::io(&path, e)),
    };
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    let found = raw
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Parse {
            record: MANIFEST_FILE.into(),
            message: "missing `format_version`".into(),
        })?;
    if found != u64::from(FORMAT_VERSION) {
        return Err(Error::Version {
            found: u32::try_from(found).unwrap_or(u32::MAX),
            expected: FORMAT_VERSION,
        });
    }
    Ok(serde_json::from_value(raw)?)
}

struct Reader<'a> {
    dir: &'a Path,
    manifest: &'a IndexManifest,
}

impl Reader<'_> {
    fn read(&self, path: &str) -> Result<String> {
        let entry = self
            .manifest
            .file(path)
            .ok_or_else(|| Error::MissingFile(path.to_string()))?;
        self.read_entry(entry)
    }

    fn read_entry(&self, entry: &FileEntry) -> Result<String> {
        let full = self.dir.join(&entry.path);
        let bytes = match fs::read(&full) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::MissingFile(entry.path.clone()))
            }
            Err(e) => return Err(Error::io(&full, e)),
        };
        if sha256_hex(&bytes) != entry.sha256 {
            return Err(Error::Checksum(entry.path.clone()));
        }
        String::from_utf8(bytes).map_err(|_| Error::Parse {
            record: entry.path.clone(),
            message: "not UTF-8".into(),
        })
    }

    fn matrix(&self, role: Role, rows: usize, cols: usize) -> Result<WeightMatrix> {
        let path = matrix_path(role);
        let m = WeightMatrix::from_text(&self.read(path)?, path)?;
        if m.role() != role || m.rows() != rows || m.cols() != cols {
            return Err(Error::Parse {
                record: path.to_string(),
                message: format!(
                    "expected {role} {rows}x{cols}, found {} {}x{}",
                    m.role(),
                    m.rows(),
                    m.cols()
                ),
            });
        }
        Ok(m)
    }
}

/// Load and verify an index written by [`save_index`].
pub fn load_index(dir: &Path) -> Result<Index> {
    let manifest = read_manifest(dir)?;
    let reader = Reader {
        dir,
        manifest: &manifest,
    };
    // verify every listed file up front so corruption is reported even in
    // files this loader would not otherwise touch
    for entry in &manifest.files {
        reader.read_entry(entry)?;
    }

    let tokens = Vocabulary::new(parse_indexed_lines(&reader.read(TOKENS)?, TOKENS)?);
    let topics = Vocabulary::new(parse_indexed_lines(&reader.read(TOPICS)?, TOPICS)?);
    let experts = parse_indexed_lines(&reader.read(EXPERTS)?, EXPERTS)?;
    let documents = parse_indexed_lines(&reader.read(DOCUMENTS)?, DOCUMENTS)?;
    let (nx, nd, nw, nt) = (experts.len(), documents.len(), tokens.len(), topics.len());

    let lookup = |labels: &[String], label: &str, what: &str| {
        labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse {
                record: EDGES.into(),
                message: format!("unknown {what} `{label}`"),
            })
    };
    let mut edges = Vec::new();
    for (i, line) in reader.read(EDGES)?.lines().enumerate() {
        let (d, x) = line.split_once(" -> ").ok_or_else(|| Error::Parse {
            record: format!("{EDGES} line {}", i + 1),
            message: "expected `doc_id -> expert_id`".into(),
        })?;
        edges.push((
            lookup(&documents, d, "document")?,
            lookup(&experts, x, "expert")?,
        ));
    }
    let nodes = manifest
        .node_order
        .iter()
        .map(|n| match n.kind.as_str() {
            "document" => lookup(&documents, &n.label, "document").map(Node::Document),
            "expert" => lookup(&experts, &n.label, "expert").map(Node::Expert),
            other => Err(Error::Parse {
                record: MANIFEST_FILE.into(),
                message: format!("unknown node kind `{other}`"),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    let ecg = Ecg::from_parts(manifest.ordering, nodes, nd, nx, edges)?;
    let adjacency = WeightMatrix::from_text(&reader.read(ADJACENCY)?, ADJACENCY)?;
    if !adjacency.matrix().is_identical(ecg.adjacency()) {
        return Err(Error::Parse {
            record: ADJACENCY.into(),
            message: "adjacency disagrees with edge list and node order".into(),
        });
    }

    let matrices = NvsmMatrices {
        dtm: reader.matrix(Role::Dtm, nd, nw)?,
        dpm: reader.matrix(Role::Dpm, nd, nt)?,
        edm: reader.matrix(Role::Edm, nx, nd)?,
        etopm: reader.matrix(Role::ETopM, nx, nt)?,
        dtopm: reader.matrix(Role::DTopM, nd, nt)?,
    };
    let retopm = match manifest.file(matrix_path(Role::RETopM)) {
        Some(_) => Some(reader.matrix(Role::RETopM, nx, nt)?),
        None => None,
    };

    Ok(Index {
        corpus_fingerprint: manifest.corpus_fingerprint.clone(),
        extraction: manifest.extraction.clone(),
        experts,
        documents,
        tokens,
        topics,
        matrices,
        ecg,
        cohits: manifest.cohits,
        retopm,
    })
}
