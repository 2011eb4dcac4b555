use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::candidates::{generate_ngram_candidates, TextAnalyzer};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::prediction::{RankedPrediction, Rank};
use crate::scalar::Score;

use super::provider::Embedder;
use super::select::{mmr_select, mss_select, SimilarityMatrix};

pub const METHOD: &str = "keybert";
pub const DEFAULT_DIVERSITY: f64 = 0.7;
pub const DEFAULT_POOL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    #[default]
    Mmr,
    Mss,
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::Mmr => "mmr",
            SelectionMode::Mss => "mss",
        })
    }
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mmr" => Ok(SelectionMode::Mmr),
            "mss" => Ok(SelectionMode::Mss),
            other => Err(Error::InvalidParameter(format!("unknown selection mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyBertParams {
    pub n_range: (usize, usize),
    pub mode: SelectionMode,
    pub diversity: f64,
    pub pool: usize,
}

impl Default for KeyBertParams {
    fn default() -> Self {
        Self {
            n_range: (1, 2),
            mode: SelectionMode::Mmr,
            diversity: DEFAULT_DIVERSITY,
            pool: DEFAULT_POOL,
        }
    }
}

impl KeyBertParams {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_range;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidParameter(format!("invalid n-gram range ({lo}, {hi})")));
        }
        if !(0.0..=1.0).contains(&self.diversity) {
            return Err(Error::InvalidParameter(format!("diversity must be in [0, 1], got {}", self.diversity)));
        }
        if self.pool == 0 {
            return Err(Error::InvalidParameter("pool must be >= 1".into()));
        }
        Ok(())
    }
}

/// Embeds the document and its n-gram candidates, then selects keywords by
/// MMR or MSS. Items keep selection order and carry their document
/// similarity as score.
pub fn keybert_rank<F: Score, E: Embedder<F> + ?Sized>(
    doc: &Document,
    analyzer: &TextAnalyzer,
    embedder: &E,
    params: &KeyBertParams,
    rank: Rank,
) -> Result<RankedPrediction<F>> {
    params.validate()?;
    let Some(doc_vec) = embedder.embed_document(doc, analyzer) else {
        log::warn!("no embedding for document {}; empty prediction", doc.id);
        return Ok(RankedPrediction::empty(&doc.id, METHOD));
    };
    let tokens = analyzer.tokens(doc);
    let candidates: Vec<(String, Vec<F>)> = generate_ngram_candidates(&tokens, params.n_range.0, params.n_range.1)
        .into_iter()
        .filter_map(|c| embedder.embed_phrase(&c.tokens).map(|v| (c.normalized_form, v)))
        .collect();
    let sims = SimilarityMatrix::from_vectors(&doc_vec, candidates);
    let k = rank.take(sims.len());
    let picks = match params.mode {
        SelectionMode::Mmr => mmr_select(&sims, k, F::lit(params.diversity)),
        SelectionMode::Mss => mss_select(&sims, k, params.pool),
    };
    let items = picks
        .into_iter()
        .map(|i| (sims.candidates[i].clone(), sims.doc_sims[i]))
        .collect();
    Ok(RankedPrediction::from_ordered(&doc.id, METHOD, items))
}
