//! C-value and NC-value termhood over a corpus-wide candidate table.
//!
//! C-value uses a `log2(|a| + 1)` length factor so single words score
//! non-zero:
//!
//! ```text
//! C(a) = log2(|a|+1) * f(a)                              a not nested
//! C(a) = log2(|a|+1) * (f(a) - (1/|T_a|) * sum_{b in T_a} f(b))   otherwise
//! NC(a) = alpha * C(a) + beta * sum_{w in ctx(a)} f_a(w) * weight(w)
//! ```
//!
//! where `T_a` are longer candidates containing `a`, `f_a(w)` counts how
//! often context word `w` occurs within the context window of `a`, and
//! `weight(w)` is the share of all candidates `w` appears next to.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use rayon::prelude::*;

use crate::candidates::{chunk_noun_phrases, noun_phrase_spans, span_text, TextAnalyzer, Token, DEFAULT_MAX_LEN};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::prediction::{RankedPrediction, Rank};
use crate::scalar::Score;

pub const CVALUE_METHOD: &str = "cvalue";
pub const NCVALUE_METHOD: &str = "ncvalue";
pub const DEFAULT_ALPHA: f64 = 0.8;
pub const DEFAULT_BETA: f64 = 0.2;
pub const DEFAULT_CONTEXT_WINDOW: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermTableParams {
    pub max_len: usize,
    /// Tokens on each side of an occurrence counted as its context.
    pub context_window: usize,
}

impl Default for TermTableParams {
    fn default() -> Self {
        Self {
            max_len: DEFAULT_MAX_LEN,
            context_window: DEFAULT_CONTEXT_WINDOW,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Partial {
    freq: HashMap<String, usize>,
    context: HashMap<String, HashMap<String, usize>>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (k, v) in other.freq {
            *self.freq.entry(k).or_default() += v;
        }
        for (k, ctx) in other.context {
            let mine = self.context.entry(k).or_default();
            for (w, n) in ctx {
                *mine.entry(w).or_default() += n;
            }
        }
        self
    }
}

/// Context words of one occurrence: non-stopword tokens in the same
/// sentence within `window` positions on either side of `span`.
pub fn context_words(tokens: &[Token], span: Range<usize>, window: usize) -> impl Iterator<Item = &str> {
    let sentence = tokens[span.start].sentence;
    let left = span.start.saturating_sub(window)..span.start;
    let right = span.end..(span.end + window).min(tokens.len());
    left.chain(right)
        .map(move |i| &tokens[i])
        .filter(move |t| !t.is_stopword && t.sentence == sentence)
        .map(|t| t.text.as_str())
}

fn scan_document(tokens: &[Token], params: TermTableParams) -> Partial {
    let mut part = Partial::default();
    for span in noun_phrase_spans(tokens, params.max_len) {
        let form = span_text(tokens, span.clone());
        *part.freq.entry(form.clone()).or_default() += 1;
        let ctx = part.context.entry(form).or_default();
        for w in context_words(tokens, span, params.context_window) {
            *ctx.entry(w.to_string()).or_default() += 1;
        }
    }
    part
}

/// Corpus-wide candidate statistics. Immutable once built.
#[derive(Debug, Clone)]
pub struct TermTable {
    pub params: TermTableParams,
    forms: Vec<String>,
    index: HashMap<String, usize>,
    freq: Vec<usize>,
    /// `nested_in[a]` = indices of candidates properly containing `a`.
    nested_in: Vec<Vec<usize>>,
    context: Vec<BTreeMap<String, usize>>,
    /// Number of distinct candidates each context word occurs with.
    context_spread: HashMap<String, usize>,
}

impl TermTable {
    pub fn build(docs: &[Document], analyzer: &TextAnalyzer, params: TermTableParams) -> Self {
        let merged = docs
            .par_iter()
            .map(|doc| scan_document(&analyzer.tokens(doc), params))
            .reduce(Partial::default, Partial::merge);
        Self::from_partial(merged, params)
    }

    /// Builds from already tokenized documents.
    pub fn from_token_docs(docs: &[Vec<Token>], params: TermTableParams) -> Self {
        let merged = docs
            .iter()
            .map(|t| scan_document(t, params))
            .fold(Partial::default(), Partial::merge);
        Self::from_partial(merged, params)
    }

    fn from_partial(part: Partial, params: TermTableParams) -> Self {
        let mut forms: Vec<String> = part.freq.keys().cloned().collect();
        forms.sort();
        let index: HashMap<String, usize> =
            forms.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let freq = forms.iter().map(|f| part.freq[f]).collect();

        let mut nested_in: Vec<Vec<usize>> = vec![Vec::new(); forms.len()];
        for (b, form) in forms.iter().enumerate() {
            let words: Vec<&str> = form.split(' ').collect();
            for start in 0..words.len() {
                for end in start + 1..=words.len() {
                    if end - start == words.len() {
                        continue;
                    }
                    if let Some(&a) = index.get(&words[start..end].join(" ")) {
                        nested_in[a].push(b);
                    }
                }
            }
        }
        for list in &mut nested_in {
            list.sort_unstable();
            list.dedup();
        }

        let mut context_spread: HashMap<String, usize> = HashMap::new();
        let context: Vec<BTreeMap<String, usize>> = forms
            .iter()
            .map(|f| {
                let ctx: BTreeMap<String, usize> = part
                    .context
                    .get(f)
                    .map(|m| m.iter().map(|(k, v)| (k.clone(), *v)).collect())
                    .unwrap_or_default();
                for w in ctx.keys() {
                    *context_spread.entry(w.clone()).or_default() += 1;
                }
                ctx
            })
            .collect();

        Self {
            params,
            forms,
            index,
            freq,
            nested_in,
            context,
            context_spread,
        }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[String] {
        &self.forms
    }

    pub fn frequency(&self, form: &str) -> Option<usize> {
        self.index.get(form).map(|&i| self.freq[i])
    }

    /// Candidates properly containing `form`.
    pub fn nested_in(&self, form: &str) -> Vec<&str> {
        self.index
            .get(form)
            .map(|&i| self.nested_in[i].iter().map(|&b| self.forms[b].as_str()).collect())
            .unwrap_or_default()
    }

    pub fn context(&self, form: &str) -> Option<&BTreeMap<String, usize>> {
        self.index.get(form).map(|&i| &self.context[i])
    }

    /// Share of all candidates that `word` occurs next to.
    pub fn context_weight<F: Score>(&self, word: &str) -> F {
        if self.forms.is_empty() {
            return F::zero();
        }
        F::from_usize_lossy(self.context_spread.get(word).copied().unwrap_or(0))
            / F::from_usize_lossy(self.forms.len())
    }

    /// C-value. Candidates missing from the table count as unnested with
    /// frequency one.
    pub fn cvalue<F: Score>(&self, form: &str) -> F {
        let words = form.split(' ').count();
        let length_factor = F::from_usize_lossy(words + 1).log2();
        let Some(&a) = self.index.get(form) else {
            return length_factor;
        };
        let f = F::from_usize_lossy(self.freq[a]);
        let containers = &self.nested_in[a];
        if containers.is_empty() {
            return length_factor * f;
        }
        let nested_total: F = containers.iter().map(|&b| F::from_usize_lossy(self.freq[b])).sum();
        length_factor * (f - nested_total / F::from_usize_lossy(containers.len()))
    }

    pub fn context_score<F: Score>(&self, form: &str) -> F {
        self.context(form)
            .map(|ctx| {
                ctx.iter()
                    .map(|(w, &n)| F::from_usize_lossy(n) * self.context_weight::<F>(w))
                    .sum()
            })
            .unwrap_or_else(F::zero)
    }

    pub fn ncvalue<F: Score>(&self, form: &str, alpha: F, beta: F) -> F {
        alpha * self.cvalue::<F>(form) + beta * self.context_score::<F>(form)
    }
}

fn doc_candidates(doc: &Document, analyzer: &TextAnalyzer, table: &TermTable) -> Vec<String> {
    let tokens = analyzer.tokens(doc);
    chunk_noun_phrases(&tokens, table.params.max_len)
        .into_iter()
        .map(|c| c.normalized_form)
        .collect()
}

/// Ranks the document's own noun-phrase candidates by corpus C-value.
/// With `Rank::All` every candidate is returned.
pub fn cvalue_rank<F: Score>(
    doc: &Document,
    analyzer: &TextAnalyzer,
    table: &TermTable,
    rank: Rank,
) -> RankedPrediction<F> {
    let scored = doc_candidates(doc, analyzer, table)
        .into_iter()
        .map(|c| {
            let s = table.cvalue::<F>(&c);
            (c, s)
        })
        .collect();
    RankedPrediction::from_scores(&doc.id, CVALUE_METHOD, scored, rank)
}

pub fn ncvalue_rank<F: Score>(
    doc: &Document,
    analyzer: &TextAnalyzer,
    table: &TermTable,
    rank: Rank,
    alpha: F,
    beta: F,
) -> Result<RankedPrediction<F>> {
    if (alpha + beta - F::one()).abs() > F::lit(1e-9) || alpha < F::zero() || beta < F::zero() {
        return Err(Error::InvalidParameter(format!(
            "alpha and beta must be non-negative and sum to 1, got {alpha} and {beta}"
        )));
    }
    let scored = doc_candidates(doc, analyzer, table)
        .into_iter()
        .map(|c| {
            let s = table.ncvalue(&c, alpha, beta);
            (c, s)
        })
        .collect();
    Ok(RankedPrediction::from_scores(&doc.id, NCVALUE_METHOD, scored, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn docs(texts: &[&str]) -> Vec<Document> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(i.to_string(), "", *t, Vec::<String>::new()))
            .collect()
    }

    fn table(texts: &[&str]) -> TermTable {
        TermTable::build(&docs(texts), &TextAnalyzer::default(), TermTableParams::default())
    }

    #[test]
    fn unnested_three_word_term() {
        let t = table(&["soft contact lens.", "soft contact lens."]);
        assert_eq!(t.frequency("soft contact lens"), Some(2));
        assert!(t.nested_in("soft contact lens").is_empty());
        assert_relative_eq!(t.cvalue::<f64>("soft contact lens"), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn nested_correction() {
        // "contact lens" 4 times, twice inside "soft contact lens"
        let t = table(&["soft contact lens.", "soft contact lens.", "contact lens.", "contact lens."]);
        assert_eq!(t.frequency("contact lens"), Some(4));
        assert_eq!(t.nested_in("contact lens"), ["soft contact lens"]);
        assert_relative_eq!(t.cvalue::<f64>("contact lens"), 3f64.log2() * (4.0 - 2.0), epsilon = 1e-12);
        assert_relative_eq!(t.cvalue::<f64>("contact lens"), 3.1699250014423126, epsilon = 1e-9);
    }

    #[test]
    fn unnested_unigram() {
        let t = table(&["atom.", "atom.", "atom.", "atom.", "atom."]);
        assert_relative_eq!(t.cvalue::<f64>("atom"), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn disjoint_candidates_have_no_nesting() {
        let t = table(&["alfa. beta"]);
        assert!(t.nested_in("alfa").is_empty());
        assert!(t.nested_in("beta").is_empty());
    }

    #[test]
    fn absent_candidate_is_unit_frequency() {
        let t = table(&["alfa"]);
        assert_relative_eq!(t.cvalue::<f64>("gamma delta"), 3f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn ncvalue_without_context_is_scaled_cvalue() {
        let t = table(&["alfa.", "alfa."]);
        assert!(t.context("alfa").unwrap().is_empty());
        assert_relative_eq!(t.ncvalue::<f64>("alfa", 0.8, 0.2), 0.8 * t.cvalue::<f64>("alfa"), epsilon = 1e-12);
    }

    #[test]
    fn ncvalue_beta_zero_matches_cvalue_order() {
        let texts = ["green energy policy for the city", "energy policy of green cities", "city energy"];
        let an = TextAnalyzer::new(crate::candidates::StopwordList::english());
        let corpus = docs(&texts);
        let t = TermTable::build(&corpus, &an, TermTableParams::default());
        for d in &corpus {
            let c = cvalue_rank::<f64>(d, &an, &t, Rank::All);
            let nc = ncvalue_rank::<f64>(d, &an, &t, Rank::All, 1.0, 0.0).unwrap();
            assert_eq!(c.keywords().collect::<Vec<_>>(), nc.keywords().collect::<Vec<_>>());
        }
        assert!(ncvalue_rank::<f64>(&corpus[0], &an, &t, Rank::All, 0.5, 0.6).is_err());
    }

    #[test]
    fn unlimited_mode_returns_every_chunk() {
        let an = TextAnalyzer::new(crate::candidates::StopwordList::english());
        let corpus = docs(&["the quick brown fox, and the lazy dog"]);
        let t = TermTable::build(&corpus, &an, TermTableParams::default());
        let p = cvalue_rank::<f64>(&corpus[0], &an, &t, Rank::All);
        let chunks = chunk_noun_phrases(&an.tokens(&corpus[0]), DEFAULT_MAX_LEN);
        let mut a: Vec<_> = p.keywords().map(String::from).collect();
        let mut b: Vec<_> = chunks.into_iter().map(|c| c.normalized_form).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_and_sequential_builds_agree() {
        let texts = ["alfa beta gamma. beta gamma", "gamma alfa, beta", "beta gamma delta"];
        let an = TextAnalyzer::default();
        let corpus = docs(&texts);
        let par = TermTable::build(&corpus, &an, TermTableParams::default());
        let toks: Vec<_> = corpus.iter().map(|d| an.tokens(d)).collect();
        let seq = TermTable::from_token_docs(&toks, TermTableParams::default());
        assert_eq!(par.forms(), seq.forms());
        for f in par.forms() {
            assert_eq!(par.cvalue::<f64>(f), seq.cvalue::<f64>(f));
            assert_eq!(par.context(f), seq.context(f));
        }
    }
}
