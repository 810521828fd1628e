//! Builtin closed-lexicon tagger and rule-based noun lemmatizer.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::Pos;

const LEXICON: &str = include_str!("../../data/lexicon.tsv");

fn lexicon() -> &'static HashMap<&'static str, Pos> {
    static TABLE: OnceLock<HashMap<&'static str, Pos>> = OnceLock::new();
    TABLE.get_or_init(|| {
        LEXICON
            .lines()
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .filter_map(|l| {
                let (word, tag) = l.split_once('\t')?;
                Some((word, Pos::from_tag_name(tag)?))
            })
            .collect()
    })
}

const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("alumni", "alumnus"),
    ("analyses", "analysis"),
    ("appendices", "appendix"),
    ("cacti", "cactus"),
    ("children", "child"),
    ("corpora", "corpus"),
    ("crises", "crisis"),
    ("criteria", "criterion"),
    ("diagnoses", "diagnosis"),
    ("feet", "foot"),
    ("fungi", "fungus"),
    ("geese", "goose"),
    ("halves", "half"),
    ("hypotheses", "hypothesis"),
    ("indices", "index"),
    ("knives", "knife"),
    ("leaves", "leaf"),
    ("lives", "life"),
    ("matrices", "matrix"),
    ("men", "man"),
    ("mice", "mouse"),
    ("news", "news"),
    ("nuclei", "nucleus"),
    ("people", "person"),
    ("phenomena", "phenomenon"),
    ("radii", "radius"),
    ("selves", "self"),
    ("series", "series"),
    ("shelves", "shelf"),
    ("species", "species"),
    ("stimuli", "stimulus"),
    ("teeth", "tooth"),
    ("theses", "thesis"),
    ("vertices", "vertex"),
    ("wives", "wife"),
    ("wolves", "wolf"),
    ("women", "woman"),
];

const ADJECTIVE_SUFFIXES: &[&str] = &["al", "ic", "ive", "ous", "ful", "able", "ible", "less"];

fn is_acronym(surface: &str) -> bool {
    let letters = surface.chars().filter(|c| c.is_alphabetic()).count();
    letters >= 2
        && surface
            .chars()
            .all(|c| !c.is_alphabetic() || c.is_uppercase())
}

/// Tag a single word by lexicon lookup, then acronym and suffix rules.
pub fn tag_word(surface: &str) -> Pos {
    let lower = surface.to_lowercase();
    if let Some(&tag) = lexicon().get(lower.as_str()) {
        return tag;
    }
    if !lower.chars().any(char::is_alphabetic) {
        return Pos::CD;
    }
    if is_acronym(surface) {
        return Pos::NNP;
    }
    let len = lower.chars().count();
    if len > 4 && lower.ends_with("ing") {
        Pos::VBG
    } else if len > 3 && lower.ends_with("ly") {
        Pos::RB
    } else if len > 3 && lower.ends_with("ed") {
        Pos::VBN
    } else if len > 2
        && lower.ends_with('s')
        && !["ss", "us", "is"].iter().any(|s| lower.ends_with(s))
    {
        Pos::NNS
    } else if len > 4 && ADJECTIVE_SUFFIXES.iter().any(|s| lower.ends_with(s)) {
        Pos::JJ
    } else {
        Pos::NN
    }
}

/// Singularize a lowercase plural noun.
pub fn singularize(lower: &str) -> String {
    if let Some(&(_, singular)) = IRREGULAR_PLURALS.iter().find(|(p, _)| *p == lower) {
        return singular.to_string();
    }
    let len = lower.chars().count();
    if len <= 3 {
        return lower.to_string();
    }
    if len > 4 && lower.ends_with("ies") {
        return format!("{}y", &lower[..lower.len() - 3]);
    }
    if ["sses", "ches", "shes", "xes", "zzes"]
        .iter()
        .any(|s| lower.ends_with(s))
    {
        return lower[..lower.len() - 2].to_string();
    }
    if ["ss", "us", "is", "ics"].iter().any(|s| lower.ends_with(s)) {
        return lower.to_string();
    }
    match lower.strip_suffix('s') {
        Some(stem) => stem.to_string(),
        None => lower.to_string(),
    }
}

/// Lemma for a tagged word: plural nouns are singularized, everything else
/// is only lowercased.
pub fn lemmatize(surface: &str, pos: Pos) -> String {
    let lower = surface.to_lowercase();
    match pos {
        Pos::NNS => singularize(&lower),
        _ => lower,
    }
}
