use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{keyword_document_frequency, Document};
use crate::error::{Error, Result};
use crate::prediction::{RankedPrediction, Rank};
use crate::scalar::{MetricValue, Score};
use crate::split::{SplitAssignment, TEST, TRAIN};

use super::{macro_metrics_with_universe, match_at_k, micro_metrics, MacroMode, MatchCounts, MetricTriple};

pub const DEFAULT_MIN_FREQ: usize = 10;

/// Which gold labels and predictions take part in matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    FullVocab,
    /// Gold labels assigned to fewer than `n` corpus documents are dropped.
    MinFreq(usize),
    /// Predicted keywords absent from the training fold's gold vocabulary
    /// are dropped before matching.
    TrainVocabRestricted,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::FullVocab => f.write_str("full_vocab"),
            Scenario::MinFreq(n) => write!(f, "min_freq_{n}"),
            Scenario::TrainVocabRestricted => f.write_str("train_vocab_restricted"),
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_vocab" => Ok(Scenario::FullVocab),
            "train_vocab_restricted" => Ok(Scenario::TrainVocabRestricted),
            "min_freq" => Ok(Scenario::MinFreq(DEFAULT_MIN_FREQ)),
            other => other
                .strip_prefix("min_freq_")
                .and_then(|n| n.parse().ok())
                .filter(|&n: &usize| n >= 1)
                .map(Scenario::MinFreq)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario {other:?}"))),
        }
    }
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    pub macro_mode: MacroMode,
    /// In the min-frequency scenario, also drop predictions of labels below
    /// the threshold (as if the model were trained on the filtered set).
    pub filter_predictions: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub test_docs: usize,
    pub docs_evaluated: usize,
    /// Test documents left without gold labels (after filtering); they are
    /// not scored.
    pub excluded_empty_gold: usize,
    pub missing_predictions: usize,
    pub empty_predictions: usize,
    pub gold_labels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry<T> {
    pub rank: Rank,
    pub totals: MatchCounts,
    pub micro: MetricTriple<T>,
    #[serde(rename = "macro")]
    pub macro_: MetricTriple<T>,
    /// Labels (or documents) the macro average ran over.
    pub macro_universe: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<T> {
    pub method: String,
    pub scenario: Scenario,
    pub macro_mode: MacroMode,
    pub entries: Vec<RankEntry<T>>,
    pub counts: EvalCounts,
}

impl<T: MetricValue> EvalReport<T> {
    pub fn to_f64(&self) -> EvalReport<f64> {
        EvalReport {
            method: self.method.clone(),
            scenario: self.scenario,
            macro_mode: self.macro_mode,
            entries: self
                .entries
                .iter()
                .map(|e| RankEntry {
                    rank: e.rank,
                    totals: e.totals,
                    micro: e.micro.to_f64(),
                    macro_: e.macro_.to_f64(),
                    macro_universe: e.macro_universe,
                })
                .collect(),
            counts: self.counts.clone(),
        }
    }

    pub fn entry(&self, rank: Rank) -> Option<&RankEntry<T>> {
        self.entries.iter().find(|e| e.rank == rank)
    }
}

/// Scores predictions on the test fold of `split`.
///
/// Predictions for documents outside the test fold are ignored; test
/// documents without a prediction count as empty predictions. Any id not in
/// the corpus is an error.
pub fn evaluate_run<T: MetricValue, F: Score>(
    corpus: &[Document],
    split: &SplitAssignment,
    predictions: &[RankedPrediction<F>],
    scenario: Scenario,
    ranks: &[Rank],
    opts: EvalOptions,
) -> Result<EvalReport<T>> {
    let by_id: HashMap<&str, &Document> = corpus.iter().map(|d| (d.id.as_str(), d)).collect();
    let test = split.fold(TEST)?;

    let mut unknown: BTreeSet<String> = predictions
        .iter()
        .filter(|p| !by_id.contains_key(p.doc_id.as_str()))
        .map(|p| p.doc_id.clone())
        .collect();
    unknown.extend(test.iter().filter(|id| !by_id.contains_key(id.as_str())).cloned());
    if !unknown.is_empty() {
        return Err(Error::UnknownDocIds(unknown.into_iter().collect()));
    }

    let pred_by_id: HashMap<&str, &RankedPrediction<F>> =
        predictions.iter().map(|p| (p.doc_id.as_str(), p)).collect();
    let df = match scenario {
        Scenario::MinFreq(_) => keyword_document_frequency(corpus),
        _ => HashMap::new(),
    };
    let train_vocab: HashSet<&str> = match scenario {
        Scenario::TrainVocabRestricted => split
            .fold(TRAIN)?
            .iter()
            .flat_map(|id| by_id[id.as_str()].gold())
            .collect(),
        _ => HashSet::new(),
    };
    let keep_gold = |label: &str| match scenario {
        Scenario::MinFreq(n) => df.get(label).copied().unwrap_or(0) >= n,
        _ => true,
    };
    let keep_pred = |label: &str| match scenario {
        Scenario::MinFreq(n) if opts.filter_predictions => df.get(label).copied().unwrap_or(0) >= n,
        Scenario::TrainVocabRestricted => train_vocab.contains(label),
        _ => true,
    };

    let mut counts = EvalCounts {
        test_docs: test.len(),
        ..Default::default()
    };
    let mut gold_by_doc: Vec<BTreeSet<String>> = Vec::new();
    let mut pred_by_doc: Vec<Vec<&str>> = Vec::new();
    for id in test {
        let gold: BTreeSet<String> = by_id[id.as_str()]
            .gold()
            .filter(|g| keep_gold(g))
            .map(String::from)
            .collect();
        if gold.is_empty() {
            counts.excluded_empty_gold += 1;
            continue;
        }
        let predicted: Vec<&str> = match pred_by_id.get(id.as_str()) {
            Some(p) => p.keywords().filter(|k| keep_pred(k)).collect(),
            None => {
                counts.missing_predictions += 1;
                Vec::new()
            }
        };
        if predicted.is_empty() {
            counts.empty_predictions += 1;
        }
        gold_by_doc.push(gold);
        pred_by_doc.push(predicted);
    }
    counts.docs_evaluated = gold_by_doc.len();
    counts.gold_labels = gold_by_doc.iter().flatten().collect::<HashSet<_>>().len();

    let entries = ranks
        .iter()
        .map(|&rank| {
            let per_doc: Vec<MatchCounts> = gold_by_doc
                .iter()
                .zip(&pred_by_doc)
                .map(|(g, p)| match_at_k(g, p, rank))
                .collect();
            let (macro_, macro_universe) =
                macro_metrics_with_universe(&gold_by_doc, &pred_by_doc, rank, opts.macro_mode);
            RankEntry {
                rank,
                totals: per_doc.iter().copied().sum(),
                micro: micro_metrics(&per_doc),
                macro_,
                macro_universe,
            }
        })
        .collect();

    Ok(EvalReport {
        method: predictions.first().map(|p| p.method.clone()).unwrap_or_default(),
        scenario,
        macro_mode: opts.macro_mode,
        entries,
        counts,
    })
}
