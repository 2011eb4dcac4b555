//! Tokenization and candidate phrase generation.
//!
//! Text is split into sentences on `. ! ? ;` and newlines, and into clauses
//! on any other punctuation except the word-internal `-`, `'` and `/`.
//! N-gram candidates may not cross a sentence; noun-phrase chunks may not
//! cross a clause. Neither may contain a stopword.

mod stopwords;

use std::collections::HashMap;
use std::ops::Range;

use crate::corpus::{normalize_keyword, Document};

pub use stopwords::StopwordList;

pub const DEFAULT_MAX_LEN: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub position: usize,
    pub is_stopword: bool,
    pub sentence: usize,
    pub clause: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub tokens: Vec<String>,
    pub normalized_form: String,
    pub first_position: usize,
    pub frequency: usize,
}

impl Candidate {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Stopwords plus the choice of document text shared by all extractors.
#[derive(Debug, Clone)]
pub struct TextAnalyzer {
    pub stopwords: StopwordList,
    /// Read `lemma_text` instead of title + abstract when a record has it.
    pub use_lemmas: bool,
}

/// Bundled Polish and English stopwords.
impl Default for TextAnalyzer {
    fn default() -> Self {
        Self::new(StopwordList::bundled())
    }
}

impl TextAnalyzer {
    pub fn new(stopwords: StopwordList) -> Self {
        Self {
            stopwords,
            use_lemmas: false,
        }
    }

    pub fn with_lemmas(mut self, use_lemmas: bool) -> Self {
        self.use_lemmas = use_lemmas;
        self
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        tokenize(text, &self.stopwords)
    }

    pub fn tokens(&self, doc: &Document) -> Vec<Token> {
        tokenize(&doc.text(self.use_lemmas), &self.stopwords)
    }
}

fn is_sentence_break(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | ';' | '\n')
}

fn is_word_internal(c: char) -> bool {
    matches!(c, '-' | '\'' | '/' | '\u{2019}' | '\u{2010}' | '\u{2011}')
}

#[derive(Default)]
struct TokenSink {
    tokens: Vec<Token>,
    sentence: usize,
    clause: usize,
}

impl TokenSink {
    fn flush(&mut self, word: &mut String, stopwords: &StopwordList) {
        if word.is_empty() {
            return;
        }
        let normalized = normalize_keyword(word);
        word.clear();
        // decomposition can leave separators behind (e.g. fractions)
        for piece in normalized.split(|c: char| !c.is_ascii_alphanumeric()) {
            if piece.is_empty() {
                continue;
            }
            self.tokens.push(Token {
                text: piece.to_string(),
                position: self.tokens.len(),
                is_stopword: stopwords.contains(piece),
                sentence: self.sentence,
                clause: self.clause,
            });
        }
    }
}

pub fn tokenize(text: &str, stopwords: &StopwordList) -> Vec<Token> {
    let mut sink = TokenSink::default();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            word.push(c);
            continue;
        }
        sink.flush(&mut word, stopwords);
        if is_sentence_break(c) {
            sink.sentence += 1;
            sink.clause += 1;
        } else if !c.is_whitespace() && !is_word_internal(c) {
            sink.clause += 1;
        }
    }
    sink.flush(&mut word, stopwords);
    sink.tokens
}

/// Spans of `n_min..=n_max` stopword-free tokens inside one sentence, in
/// order of start position then length.
///
/// # Panics
///
/// If `n_min == 0` or `n_min > n_max`.
pub fn ngram_spans(tokens: &[Token], n_min: usize, n_max: usize) -> Vec<Range<usize>> {
    assert!(n_min >= 1 && n_min <= n_max, "invalid n-gram range ({n_min}, {n_max})");
    let mut spans = Vec::new();
    for start in 0..tokens.len() {
        for n in n_min..=n_max {
            let end = start + n;
            if end > tokens.len() {
                break;
            }
            let span = &tokens[start..end];
            if span.iter().any(|t| t.is_stopword) {
                break;
            }
            if span[n - 1].sentence != span[0].sentence {
                break;
            }
            spans.push(start..end);
        }
    }
    spans
}

/// Maximal stopword-free runs inside one clause.
pub fn noun_phrase_runs(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut runs = Vec::new();
    let mut start: Option<usize> = None;
    for (i, tok) in tokens.iter().enumerate() {
        let continues = match start {
            Some(s) => !tok.is_stopword && tok.clause == tokens[s].clause,
            None => false,
        };
        if !continues {
            if let Some(s) = start.take() {
                runs.push(s..i);
            }
            if !tok.is_stopword {
                start = Some(i);
            }
        }
    }
    if let Some(s) = start {
        runs.push(s..tokens.len());
    }
    runs
}

/// Every sub-span of at most `max_len` tokens of every noun-phrase run,
/// ordered by start position then length.
pub fn noun_phrase_spans(tokens: &[Token], max_len: usize) -> Vec<Range<usize>> {
    assert!(max_len >= 1, "max_len must be at least 1");
    let mut spans = Vec::new();
    for run in noun_phrase_runs(tokens) {
        for start in run.clone() {
            for end in start + 1..=(start + max_len).min(run.end) {
                spans.push(start..end);
            }
        }
    }
    spans
}

pub fn span_text(tokens: &[Token], span: Range<usize>) -> String {
    tokens[span]
        .iter()
        .map(|t| t.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Groups spans by their text, counting occurrences and keeping the
/// earliest position. Output follows first occurrence.
pub fn aggregate_spans(tokens: &[Token], spans: &[Range<usize>]) -> Vec<Candidate> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut out: Vec<Candidate> = Vec::new();
    for span in spans {
        let form = span_text(tokens, span.clone());
        match index.get(&form) {
            Some(&i) => {
                let c = &mut out[i];
                c.frequency += 1;
                c.first_position = c.first_position.min(tokens[span.start].position);
            }
            None => {
                index.insert(form.clone(), out.len());
                out.push(Candidate {
                    tokens: tokens[span.clone()].iter().map(|t| t.text.clone()).collect(),
                    normalized_form: form,
                    first_position: tokens[span.start].position,
                    frequency: 1,
                });
            }
        }
    }
    out
}

pub fn generate_ngram_candidates(tokens: &[Token], n_min: usize, n_max: usize) -> Vec<Candidate> {
    aggregate_spans(tokens, &ngram_spans(tokens, n_min, n_max))
}

pub fn chunk_noun_phrases(tokens: &[Token], max_len: usize) -> Vec<Candidate> {
    aggregate_spans(tokens, &noun_phrase_spans(tokens, max_len))
}
