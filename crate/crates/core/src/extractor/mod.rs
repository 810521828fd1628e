//! Token and topic extraction.
//!
//! Each document is split into sentences, stopwords are dropped, every
//! remaining word is tagged and lemmatized, and topic phrases are chunked
//! from runs of tags matching a [`PosPattern`] (default `(JJ)*(NN|NNS|NNP)+`).
//!
//! Stopwords and punctuation break chunks: a phrase never spans a removed
//! word, so `data within learning` cannot become one topic.
//!
//! A chunk longer than `max_len` is not emitted whole. Instead every window
//! of exactly `max_len` tokens inside it that matches the pattern on its own
//! is emitted. Shorter sub-spans are not.

mod lexicon;
mod pattern;
mod pretagged;

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use lexicon::{lemmatize, singularize, tag_word};
pub use pattern::{PosPattern, DEFAULT_PATTERN};
pub use pretagged::{PretaggedCorpus, RawToken};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::vocab::Vocabulary;

pub const DEFAULT_MAX_LEN: usize = 3;

const BUILTIN_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Reduced Penn tagset. Finer tags collapse onto these on input
/// (`NNPS`→`NNP`, `JJR`/`JJS`→`JJ`, `VBP`→`VB`, `RBR`/`RBS`→`RB`).
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pos {
    NN,
    NNS,
    NNP,
    JJ,
    VB,
    VBD,
    VBG,
    VBN,
    VBZ,
    RB,
    CD,
    Other,
}

impl Pos {
    pub fn from_tag_name(name: &str) -> Option<Pos> {
        Some(match name {
            "NN" => Pos::NN,
            "NNS" => Pos::NNS,
            "NNP" | "NNPS" => Pos::NNP,
            "JJ" | "JJR" | "JJS" => Pos::JJ,
            "VB" | "VBP" => Pos::VB,
            "VBD" => Pos::VBD,
            "VBG" => Pos::VBG,
            "VBN" => Pos::VBN,
            "VBZ" => Pos::VBZ,
            "RB" | "RBR" | "RBS" => Pos::RB,
            "CD" => Pos::CD,
            "OTHER" => Pos::Other,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::NN => "NN",
            Pos::NNS => "NNS",
            Pos::NNP => "NNP",
            Pos::JJ => "JJ",
            Pos::VB => "VB",
            Pos::VBD => "VBD",
            Pos::VBG => "VBG",
            Pos::VBN => "VBN",
            Pos::VBZ => "VBZ",
            Pos::RB => "RB",
            Pos::CD => "CD",
            Pos::Other => "OTHER",
        }
    }

    pub fn is_noun(self) -> bool {
        matches!(self, Pos::NN | Pos::NNS | Pos::NNP)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub surface: String,
    /// Non-empty and lowercase.
    pub lemma: String,
    pub pos: Pos,
    /// A stopword or punctuation was removed right before this token.
    pub gap_before: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TopicPhrase {
    lemmas: Vec<String>,
}

impl TopicPhrase {
    pub fn new(lemmas: Vec<String>) -> Self {
        debug_assert!(!lemmas.is_empty());
        TopicPhrase { lemmas }
    }

    /// Split a canonical key back into its lemmas.
    pub fn from_key(key: &str) -> Self {
        TopicPhrase::new(key.split(' ').map(str::to_string).collect())
    }

    pub fn lemmas(&self) -> &[String] {
        &self.lemmas
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    pub fn key(&self) -> String {
        self.lemmas.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords {
    words: HashSet<String>,
}

impl Stopwords {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_STOPWORDS)
    }

    /// One word per line; blank lines are ignored and words are lowercased.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(|l| l.trim().to_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        Stopwords { words }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)
            .map(|t| Self::parse(&t))
            .map_err(|e| Error::io(path, e))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// SHA-256 of the sorted word list, one per line.
    pub fn fingerprint(&self) -> String {
        let mut words: Vec<&str> = self.words.iter().map(String::as_str).collect();
        words.sort_unstable();
        let mut hasher = Sha256::new();
        for w in words {
            hasher.update(w.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum TaggerMode {
    #[default]
    Builtin,
    Pretagged(PretaggedCorpus),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionConfig {
    pub max_len: usize,
    pub stopwords: Stopwords,
    pub pattern: PosPattern,
    pub tagger: TaggerMode,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            max_len: DEFAULT_MAX_LEN,
            stopwords: Stopwords::builtin(),
            pattern: PosPattern::default(),
            tagger: TaggerMode::Builtin,
        }
    }
}

/// What an index records about the extraction settings it was built with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionSnapshot {
    pub max_len: usize,
    pub pattern: String,
    pub tagger: String,
    pub stopwords_sha256: String,
    pub stopword_count: usize,
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_len == 0 {
            return Err(Error::Config("max_len must be at least 1".into()));
        }
        Ok(())
    }

    pub fn snapshot(&self) -> ExtractionSnapshot {
        ExtractionSnapshot {
            max_len: self.max_len,
            pattern: self.pattern.to_string(),
            tagger: match self.tagger {
                TaggerMode::Builtin => "builtin".into(),
                TaggerMode::Pretagged(_) => "pretagged".into(),
            },
            stopwords_sha256: self.stopwords.fingerprint(),
            stopword_count: self.stopwords.len(),
        }
    }
}

/// Split text into sentences on `.`, `!` or `?` followed by whitespace or
/// the end of the text. Delimiters stay with their sentence.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let mut end = i + c.len_utf8();
        // swallow runs like `?!` or `."`
        while let Some(&(j, next)) = iter.peek() {
            if matches!(next, '.' | '!' | '?' | '"' | '\'' | ')' | '\u{201d}') {
                end = j + next.len_utf8();
                iter.next();
            } else {
                break;
            }
        }
        let at_boundary = iter.peek().is_none_or(|&(_, next)| next.is_whitespace());
        if at_boundary {
            let s = text[start..end].trim();
            if !s.is_empty() {
                sentences.push(s.to_string());
            }
            start = end;
        }
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    sentences
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '\u{2019}')
}

/// Words of a sentence paired with whether punctuation preceded them.
/// Hyphens and apostrophes between alphanumerics stay inside the word.
fn words(sentence: &str) -> Vec<(String, bool)> {
    let chars: Vec<char> = sentence.chars().collect();
    let mut out = Vec::new();
    let mut word = String::new();
    let mut gap = false;
    for (i, &c) in chars.iter().enumerate() {
        let joins = is_joiner(c)
            && !word.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if c.is_alphanumeric() || joins {
            word.push(c);
            continue;
        }
        if !word.is_empty() {
            out.push((std::mem::take(&mut word), gap));
            gap = false;
        }
        if !c.is_whitespace() {
            gap = true;
        }
    }
    if !word.is_empty() {
        out.push((word, gap));
    }
    for (w, _) in &mut out {
        for suffix in ["'s", "\u{2019}s"] {
            if w.len() > suffix.len() && w.to_lowercase().ends_with(suffix) {
                w.truncate(w.len() - suffix.len());
            }
        }
    }
    out
}

fn tag_builtin(sentence: &str, stopwords: &Stopwords) -> Vec<TaggedToken> {
    let mut out = Vec::new();
    let mut pending_gap = false;
    for (surface, gap) in words(sentence) {
        let lower = surface.to_lowercase();
        if stopwords.contains(&lower) {
            pending_gap = true;
            continue;
        }
        let pos = tag_word(&surface);
        let lemma = lemmatize(&surface, pos);
        out.push(TaggedToken {
            surface,
            lemma,
            pos,
            gap_before: gap || pending_gap,
        });
        pending_gap = false;
    }
    out
}

fn tag_raw(tokens: &[RawToken], stopwords: &Stopwords) -> Vec<TaggedToken> {
    let mut out = Vec::new();
    let mut pending_gap = false;
    for raw in tokens {
        let lemma = raw.lemma.to_lowercase();
        let punctuation = !raw.surface.chars().any(char::is_alphanumeric);
        if punctuation
            || stopwords.contains(&raw.surface.to_lowercase())
            || stopwords.contains(&lemma)
        {
            pending_gap = true;
            continue;
        }
        out.push(TaggedToken {
            surface: raw.surface.clone(),
            lemma,
            pos: Pos::from_tag_name(&raw.pos).unwrap_or(Pos::Other),
            gap_before: pending_gap,
        });
        pending_gap = false;
    }
    out
}

/// Tag one sentence. In pretagged mode `sentence` holds token lines.
pub fn tag(sentence: &str, config: &ExtractionConfig) -> Result<Vec<TaggedToken>> {
    match config.tagger {
        TaggerMode::Builtin => Ok(tag_builtin(sentence, &config.stopwords)),
        TaggerMode::Pretagged(_) => {
            let sentences = pretagged::parse_lines(sentence, 1)?;
            Ok(sentences
                .iter()
                .flat_map(|s| tag_raw(s, &config.stopwords))
                .collect())
        }
    }
}

fn push_chunk(chunk: &[TaggedToken], config: &ExtractionConfig, topics: &mut Vec<TopicPhrase>) {
    let phrase =
        |span: &[TaggedToken]| TopicPhrase::new(span.iter().map(|t| t.lemma.clone()).collect());
    if chunk.len() <= config.max_len {
        topics.push(phrase(chunk));
        return;
    }
    for window in chunk.windows(config.max_len) {
        let tags: Vec<Pos> = window.iter().map(|t| t.pos).collect();
        if config.pattern.matches(&tags) {
            topics.push(phrase(window));
        }
    }
}

/// Lemmas of every token plus the topic phrases chunked from `tagged`.
pub fn extract_topics(
    tagged: &[TaggedToken],
    config: &ExtractionConfig,
) -> (Vec<String>, Vec<TopicPhrase>) {
    let tokens = tagged.iter().map(|t| t.lemma.clone()).collect();
    let mut topics = Vec::new();
    let mut start = 0;
    while start < tagged.len() {
        let mut end = start + 1;
        while end < tagged.len() && !tagged[end].gap_before {
            end += 1;
        }
        let segment = &tagged[start..end];
        let tags: Vec<Pos> = segment.iter().map(|t| t.pos).collect();
        let mut i = 0;
        while i < segment.len() {
            match config.pattern.longest_prefix(&tags[i..]) {
                Some(n) => {
                    push_chunk(&segment[i..i + n], config, &mut topics);
                    i += n;
                }
                None => i += 1,
            }
        }
        start = end;
    }
    (tokens, topics)
}

/// Token and topic occurrences of one document, multiplicity preserved.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentTerms {
    pub tokens: Vec<String>,
    pub topics: Vec<TopicPhrase>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub tokens: Vocabulary,
    pub topics: Vocabulary,
    /// Indexed like the corpus documents.
    pub documents: Vec<DocumentTerms>,
}

impl Extraction {
    pub fn from_documents(documents: Vec<DocumentTerms>) -> Self {
        let tokens = Vocabulary::new(documents.iter().flat_map(|d| d.tokens.iter().cloned()));
        let topics = Vocabulary::new(
            documents
                .iter()
                .flat_map(|d| d.topics.iter().map(|t| t.key())),
        );
        Extraction {
            tokens,
            topics,
            documents,
        }
    }
}

fn extract_sentences(sentences: &[Vec<TaggedToken>], config: &ExtractionConfig) -> DocumentTerms {
    let mut terms = DocumentTerms::default();
    for tagged in sentences {
        let (tokens, topics) = extract_topics(tagged, config);
        terms.tokens.extend(tokens);
        terms.topics.extend(topics);
    }
    terms
}

/// Extract every document of the corpus. Documents are processed in
/// parallel; vocabularies are sorted so the result does not depend on
/// scheduling.
pub fn extract_corpus(corpus: &Corpus, config: &ExtractionConfig) -> Result<Extraction> {
    config.validate()?;
    let documents = corpus
        .documents()
        .par_iter()
        .map(|doc| {
            let tagged: Vec<Vec<TaggedToken>> = match &config.tagger {
                TaggerMode::Builtin => split_sentences(&doc.text)
                    .iter()
                    .map(|s| tag_builtin(s, &config.stopwords))
                    .collect(),
                TaggerMode::Pretagged(pre) => pre
                    .sentences(&doc.id.label)
                    .ok_or_else(|| Error::MissingPretagged(doc.id.label.clone()))?
                    .iter()
                    .map(|s| tag_raw(s, &config.stopwords))
                    .collect(),
            };
            Ok(extract_sentences(&tagged, config))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Extraction::from_documents(documents))
}

/// Lemmas of a free-text query, through the builtin tagger. The query is
/// lowercased first so capitalization never changes the tags.
pub fn normalize_query(text: &str, stopwords: &Stopwords) -> Vec<String> {
    split_sentences(&text.to_lowercase())
        .iter()
        .flat_map(|s| tag_builtin(s, stopwords))
        .map(|t| t.lemma)
        .collect()
}
