//! Expert finding and expert profiling over the reinforced expert-topic
//! matrix.
//!
//! Scores are reported exactly as stored, ties are broken by ascending
//! label, and zero scores are left out.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extractor::{normalize_query, Stopwords};
use crate::matrices::WeightMatrix;
use crate::sparse::format_sig9;
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    pub label: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankedList {
    pub entries: Vec<RankedEntry>,
    /// Scores come from the lemma-overlap fallback, not an exact topic.
    pub fallback: bool,
    /// Topic keys that contributed.
    pub topics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryOutcome {
    Ranked(RankedList),
    NoMatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOptions {
    pub top_k: usize,
    pub exact_only: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            top_k: 10,
            exact_only: false,
        }
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    rank: usize,
    label: &'a str,
    score: f64,
    fallback: bool,
}

impl RankedList {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if self.fallback {
            writeln!(
                out,
                "# fallback: lemma overlap over {} topic(s)",
                self.topics.len()
            )
            .expect("write to string");
        }
        for (i, e) in self.entries.iter().enumerate() {
            writeln!(out, "{}\t{}\t{}", i + 1, e.label, format_sig9(e.score))
                .expect("write to string");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<JsonRow> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| JsonRow {
                rank: i + 1,
                label: &e.label,
                score: e.score,
                fallback: self.fallback,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("ranking serializes")
    }
}

/// Sort descending by score, ties by label; drop zeros; keep `top_k`.
pub fn rank_scores<I>(scores: I, top_k: usize) -> Vec<RankedEntry>
where
    I: IntoIterator<Item = (String, f64)>,
{
    let mut entries: Vec<RankedEntry> = scores
        .into_iter()
        .filter(|(_, s)| *s != 0.0)
        .map(|(label, score)| RankedEntry { label, score })
        .collect();
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.label.cmp(&b.label))
    });
    entries.truncate(top_k);
    entries
}

/// Rank experts for a free-text query.
///
/// The query goes through the same tokenizer and lemmatizer as documents.
/// If its lemmas form a known topic key, that column is ranked. Otherwise,
/// unless `exact_only`, each expert scores the mean over every topic that
/// shares at least one lemma with the query.
pub fn find_experts(
    query: &str,
    retopm: &WeightMatrix,
    topics: &Vocabulary,
    experts: &[String],
    stopwords: &Stopwords,
    options: QueryOptions,
) -> Result<QueryOutcome> {
    let lemmas = normalize_query(query, stopwords);
    if lemmas.is_empty() {
        return Err(Error::EmptyQuery(query.to_string()));
    }
    let key = lemmas.join(" ");
    if let Some(t) = topics.index(&key) {
        let column = retopm.column(t);
        let entries = rank_scores(experts.iter().cloned().zip(column), options.top_k);
        return Ok(QueryOutcome::Ranked(RankedList {
            entries,
            fallback: false,
            topics: vec![key],
        }));
    }
    if options.exact_only {
        return Ok(QueryOutcome::NoMatch);
    }

    let wanted: HashSet<&str> = lemmas.iter().map(String::as_str).collect();
    let matched: Vec<usize> = topics
        .iter()
        .filter(|(_, k)| k.split(' ').any(|l| wanted.contains(l)))
        .map(|(t, _)| t)
        .collect();
    if matched.is_empty() {
        return Ok(QueryOutcome::NoMatch);
    }
    let mut sums = vec![0.0; experts.len()];
    for &t in &matched {
        for (x, v) in retopm.column(t).into_iter().enumerate() {
            sums[x] += v;
        }
    }
    let n = matched.len() as f64;
    let entries = rank_scores(
        experts.iter().cloned().zip(sums.into_iter().map(|s| s / n)),
        options.top_k,
    );
    Ok(QueryOutcome::Ranked(RankedList {
        entries,
        fallback: true,
        topics: matched.iter().map(|&t| topics.key(t).to_string()).collect(),
    }))
}

/// Top topics for one expert by reinforced weight.
pub fn profile_expert(
    expert: &str,
    retopm: &WeightMatrix,
    topics: &Vocabulary,
    experts: &[String],
    top_k: usize,
) -> Result<RankedList> {
    let x = experts
        .iter()
        .position(|e| e == expert)
        .ok_or_else(|| Error::UnknownExpert(expert.to_string()))?;
    let scores = retopm
        .matrix()
        .row(x)
        .map(|(t, v)| (topics.key(t).to_string(), v));
    Ok(RankedList {
        entries: rank_scores(scores, top_k),
        fallback: false,
        topics: Vec::new(),
    })
}
