//! Corpus records, JSONL ingestion and label-frequency filtering.

mod normalize;
mod stats;

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use normalize::{normalize_keyword, normalize_keyword_with, NormalizeOptions};
pub use stats::{compute_vocab_stats, keyword_document_frequency, VocabStats};

/// A keyword as authored, paired with the form used for all matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordForm {
    pub surface: String,
    pub normalized: String,
}

impl KeywordForm {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let normalized = normalize_keyword(&surface);
        Self {
            surface,
            normalized,
        }
    }
}

/// One corpus record. Keywords are deduplicated on their normalized form,
/// keeping the first surface seen; keywords that normalize to nothing are
/// dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub title: String,
    pub abstract_text: String,
    pub keywords: Vec<KeywordForm>,
    pub domains: Option<Vec<String>>,
    /// Pre-lemmatized text, used instead of title + abstract when requested.
    pub lemma_text: Option<String>,
}

impl Document {
    pub fn new<I, S>(id: impl Into<String>, title: impl Into<String>, abstract_text: impl Into<String>, keywords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut doc = Document {
            id: id.into(),
            title: title.into(),
            abstract_text: abstract_text.into(),
            keywords: Vec::new(),
            domains: None,
            lemma_text: None,
        };
        doc.set_keywords(keywords);
        doc
    }

    pub fn set_keywords<I, S>(&mut self, keywords: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        self.keywords = keywords
            .into_iter()
            .map(KeywordForm::new)
            .filter(|k| !k.normalized.is_empty() && seen.insert(k.normalized.clone()))
            .collect();
    }

    /// Title and abstract joined with `". "`, or a single space when the
    /// title already ends in punctuation.
    pub fn full_text(&self) -> String {
        let title = self.title.trim_end();
        if title.is_empty() {
            return self.abstract_text.clone();
        }
        if self.abstract_text.is_empty() {
            return title.to_string();
        }
        let sep = if title.ends_with(|c: char| c.is_ascii_punctuation()) {
            " "
        } else {
            ". "
        };
        format!("{title}{sep}{}", self.abstract_text)
    }

    pub fn text(&self, use_lemmas: bool) -> String {
        match (&self.lemma_text, use_lemmas) {
            (Some(lemmas), true) => lemmas.clone(),
            _ => self.full_text(),
        }
    }

    pub fn gold(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(|k| k.normalized.as_str())
    }

    pub fn has_keywords(&self) -> bool {
        !self.keywords.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawDocument {
    id: String,
    #[serde(default)]
    title: String,
    #[serde(default, rename = "abstract")]
    abstract_text: String,
    #[serde(default)]
    keywords: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domains: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lemma_text: Option<String>,
}

impl RawDocument {
    fn into_document(self) -> std::result::Result<Document, String> {
        if self.id.is_empty() {
            return Err("empty \"id\"".into());
        }
        if self.title.trim().is_empty() && self.abstract_text.trim().is_empty() {
            return Err(format!("document {:?} has neither title nor abstract", self.id));
        }
        let mut doc = Document::new(self.id, self.title, self.abstract_text, self.keywords);
        doc.domains = self.domains;
        doc.lemma_text = self.lemma_text;
        Ok(doc)
    }
}

impl Serialize for Document {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawDocument {
            id: self.id.clone(),
            title: self.title.clone(),
            abstract_text: self.abstract_text.clone(),
            keywords: self.keywords.iter().map(|k| k.surface.clone()).collect(),
            domains: self.domains.clone(),
            lemma_text: self.lemma_text.clone(),
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    SkipInvalid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ParsedCorpus {
    pub documents: Vec<Document>,
    pub skipped: Vec<SkippedLine>,
}

impl ParsedCorpus {
    pub fn summary(&self) -> String {
        format!(
            "{} documents, {} skipped",
            self.documents.len(),
            self.skipped.len()
        )
    }
}

pub fn parse_corpus(path: impl AsRef<Path>, strictness: Strictness) -> Result<ParsedCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus_reader(BufReader::new(file), strictness).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Parses line-delimited corpus records. Blank lines are ignored; line
/// numbers in errors are 1-based.
pub fn parse_corpus_reader<R: Read>(reader: R, strictness: Strictness) -> Result<ParsedCorpus> {
    let mut out = ParsedCorpus::default();
    let mut ids: HashMap<String, usize> = HashMap::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io("<corpus>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<RawDocument>(&line)
            .map_err(|e| e.to_string())
            .and_then(RawDocument::into_document);
        let doc = match parsed {
            Ok(doc) => doc,
            Err(reason) => match strictness {
                Strictness::Strict => {
                    return Err(Error::MalformedRecord {
                        line: line_no,
                        reason,
                    })
                }
                Strictness::SkipInvalid => {
                    log::warn!("skipping corpus line {line_no}: {reason}");
                    out.skipped.push(SkippedLine {
                        line: line_no,
                        reason,
                    });
                    continue;
                }
            },
        };
        if ids.insert(doc.id.clone(), line_no).is_some() {
            return Err(Error::DuplicateId {
                id: doc.id,
                line: line_no,
            });
        }
        out.documents.push(doc);
    }
    Ok(out)
}

pub fn write_corpus<W: std::io::Write>(mut w: W, docs: &[Document]) -> std::io::Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut w, doc)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Restricts every document's keywords to labels assigned to at least
/// `min_docs` documents of the input. Documents are never removed.
pub fn filter_by_min_label_freq(docs: &[Document], min_docs: usize) -> Vec<Document> {
    let df = keyword_document_frequency(docs);
    docs.iter()
        .map(|doc| {
            let mut doc = doc.clone();
            doc.keywords
                .retain(|k| df.get(&k.normalized).copied().unwrap_or(0) >= min_docs);
            doc
        })
        .collect()
}
