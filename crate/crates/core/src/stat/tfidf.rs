use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::candidates::{generate_ngram_candidates, TextAnalyzer};
use crate::corpus::Document;
use crate::prediction::{RankedPrediction, Rank};
use crate::scalar::Score;

pub const METHOD: &str = "tfidf";

/// Document frequencies of n-gram candidates over a set of training
/// documents.
#[derive(Debug, Clone, Default)]
pub struct IdfTable {
    pub n_docs: usize,
    pub n_range: (usize, usize),
    df: HashMap<String, usize>,
}

impl IdfTable {
    pub fn build(docs: &[Document], analyzer: &TextAnalyzer, n_range: (usize, usize)) -> Self {
        let df = docs
            .par_iter()
            .map(|doc| {
                let tokens = analyzer.tokens(doc);
                generate_ngram_candidates(&tokens, n_range.0, n_range.1)
                    .into_iter()
                    .map(|c| c.normalized_form)
                    .collect::<HashSet<_>>()
            })
            .fold(HashMap::new, |mut acc: HashMap<String, usize>, forms| {
                for f in forms {
                    *acc.entry(f).or_default() += 1;
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
        Self {
            n_docs: docs.len(),
            n_range,
            df,
        }
    }

    pub fn document_frequency(&self, form: &str) -> usize {
        self.df.get(form).copied().unwrap_or(0)
    }

    /// `ln((N + 1) / (df + 1)) + 1`
    pub fn idf<F: Score>(&self, form: &str) -> F {
        let n = F::from_usize_lossy(self.n_docs + 1);
        let df = F::from_usize_lossy(self.document_frequency(form) + 1);
        (n / df).ln() + F::one()
    }
}

pub fn tfidf_rank<F: Score>(
    doc: &Document,
    analyzer: &TextAnalyzer,
    idf: &IdfTable,
    rank: Rank,
) -> RankedPrediction<F> {
    let tokens = analyzer.tokens(doc);
    let scored = generate_ngram_candidates(&tokens, idf.n_range.0, idf.n_range.1)
        .into_iter()
        .map(|c| {
            let score = F::from_usize_lossy(c.frequency) * idf.idf::<F>(&c.normalized_form);
            (c.normalized_form, score)
        })
        .collect();
    RankedPrediction::from_scores(&doc.id, METHOD, scored, rank)
}
