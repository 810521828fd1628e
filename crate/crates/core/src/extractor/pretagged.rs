//! Reader for externally tagged corpora.
//!
//! One token per line as `surface<TAB>pos<TAB>lemma`; a blank line ends a
//! sentence and `#DOC <doc_id>` starts a new document.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub pos: String,
    pub lemma: String,
}

pub type Sentence = Vec<RawToken>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PretaggedCorpus {
    docs: HashMap<String, Vec<Sentence>>,
}

/// Parse token lines with no `#DOC` headers (a single sentence stream).
pub fn parse_lines(text: &str, first_line: usize) -> Result<Vec<Sentence>> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        current.push(parse_token(line, first_line + i)?);
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

fn parse_token(line: &str, line_no: usize) -> Result<RawToken> {
    let fields: Vec<&str> = line.split('\t').collect();
    let err = |message: String| Error::Pretagged {
        line: line_no,
        message,
    };
    if fields.len() != 3 {
        return Err(err(format!(
            "expected `surface<TAB>pos<TAB>lemma`, found {} field(s)",
            fields.len()
        )));
    }
    if fields.iter().any(|f| f.is_empty()) {
        return Err(err("empty field".into()));
    }
    Ok(RawToken {
        surface: fields[0].to_string(),
        pos: fields[1].to_string(),
        lemma: fields[2].to_string(),
    })
}

impl PretaggedCorpus {
    pub fn parse(text: &str) -> Result<Self> {
        let mut docs: HashMap<String, Vec<Sentence>> = HashMap::new();
        let mut current: Option<(String, usize, String)> = None;
        let flush = |docs: &mut HashMap<String, Vec<Sentence>>,
                     cur: Option<(String, usize, String)>|
         -> Result<()> {
            if let Some((id, start, body)) = cur {
                let sentences = parse_lines(&body, start)?;
                docs.entry(id).or_default().extend(sentences);
            }
            Ok(())
        };
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if let Some(rest) = line.strip_prefix("#DOC") {
                let id = rest.trim();
                if id.is_empty() {
                    return Err(Error::Pretagged {
                        line: line_no,
                        message: "`#DOC` header without a document id".into(),
                    });
                }
                flush(&mut docs, current.take())?;
                current = Some((id.to_string(), line_no + 1, String::new()));
                continue;
            }
            match current.as_mut() {
                Some((_, _, body)) => {
                    body.push_str(line);
                    body.push('\n');
                }
                None if line.trim().is_empty() => {}
                None => {
                    return Err(Error::Pretagged {
                        line: line_no,
                        message: "token before the first `#DOC` header".into(),
                    })
                }
            }
        }
        flush(&mut docs, current)?;
        Ok(PretaggedCorpus { docs })
    }

    pub fn sentences(&self, doc: &str) -> Option<&[Sentence]> {
        self.docs.get(doc).map(Vec::as_slice)
    }
}
