use crate::candidates::{chunk_noun_phrases, TextAnalyzer};
use crate::corpus::Document;
use crate::prediction::{RankedPrediction, Rank};
use crate::scalar::Score;

pub const METHOD: &str = "firstphrases";

/// Ranks noun-phrase candidates by where they first occur; the score is the
/// negated token position.
pub fn first_phrases_rank<F: Score>(
    doc: &Document,
    analyzer: &TextAnalyzer,
    max_len: usize,
    rank: Rank,
) -> RankedPrediction<F> {
    let tokens = analyzer.tokens(doc);
    let scored = chunk_noun_phrases(&tokens, max_len)
        .into_iter()
        .map(|c| (c.normalized_form, -F::from_usize_lossy(c.first_position)))
        .collect();
    RankedPrediction::from_scores(&doc.id, METHOD, scored, rank)
}
