//! Ranked-prediction evaluation: precision, recall and F1 at rank k.

mod report;
mod run;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prediction::Rank;
use crate::scalar::MetricValue;

pub use report::{read_reports_json, render_tsv, round_half_up, write_reports_json, TSV_HEADER};
pub use run::{evaluate_run, EvalCounts, EvalOptions, EvalReport, RankEntry, Scenario, DEFAULT_MIN_FREQ};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl std::ops::Add for MatchCounts {
    type Output = MatchCounts;

    fn add(self, o: MatchCounts) -> MatchCounts {
        MatchCounts {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            fn_: self.fn_ + o.fn_,
        }
    }
}

impl std::iter::Sum for MatchCounts {
    fn sum<I: Iterator<Item = MatchCounts>>(iter: I) -> Self {
        iter.fold(MatchCounts::default(), |a, b| a + b)
    }
}

/// Compares the first `rank` predictions with the gold set by exact string
/// equality. `predicted` must already be free of repeats.
pub fn match_at_k<S: AsRef<str>>(gold: &BTreeSet<String>, predicted: &[S], rank: Rank) -> MatchCounts {
    let top = &predicted[..rank.take(predicted.len())];
    let tp = top.iter().filter(|p| gold.contains(p.as_ref())).count();
    MatchCounts {
        tp,
        fp: top.len() - tp,
        fn_: gold.len() - tp,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTriple<T> {
    pub precision: T,
    pub recall: T,
    pub f1: T,
}

impl<T: MetricValue> MetricTriple<T> {
    /// F1 is always the harmonic mean of the given precision and recall.
    pub fn from_pr(precision: T, recall: T) -> Self {
        let f1 = T::harmonic(&precision, &recall);
        Self {
            precision,
            recall,
            f1,
        }
    }

    pub fn zero() -> Self {
        Self::from_pr(T::zero(), T::zero())
    }

    pub fn from_counts(c: MatchCounts) -> Self {
        Self::from_pr(T::ratio(c.tp, c.tp + c.fp), T::ratio(c.tp, c.tp + c.fn_))
    }

    pub fn to_f64(&self) -> MetricTriple<f64> {
        MetricTriple {
            precision: self.precision.to_f64_lossy(),
            recall: self.recall.to_f64_lossy(),
            f1: self.f1.to_f64_lossy(),
        }
    }
}

/// Pools counts over all documents.
pub fn micro_metrics<T: MetricValue>(per_doc: &[MatchCounts]) -> MetricTriple<T> {
    MetricTriple::from_counts(per_doc.iter().copied().sum())
}

/// How macro averages are taken.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MacroMode {
    /// Per label, over labels that occur in the gold sets.
    #[default]
    LabelGoldOnly,
    /// Per label, over gold labels and every label predicted at the rank.
    LabelGoldUnionPredicted,
    /// Per document.
    Documents,
}

impl MacroMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MacroMode::LabelGoldOnly => "label_gold_only",
            MacroMode::LabelGoldUnionPredicted => "label_gold_union_predicted",
            MacroMode::Documents => "documents",
        }
    }
}

impl fmt::Display for MacroMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MacroMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "label_gold_only" | "gold_only" => Ok(MacroMode::LabelGoldOnly),
            "label_gold_union_predicted" | "gold_union_predicted" => Ok(MacroMode::LabelGoldUnionPredicted),
            "documents" | "samples" => Ok(MacroMode::Documents),
            other => Err(Error::InvalidParameter(format!("unknown macro mode {other:?}"))),
        }
    }
}

/// Macro precision and recall are unweighted means of the per-label (or
/// per-document) values; F1 is their harmonic mean. An empty universe gives
/// zeros.
pub fn macro_metrics<T: MetricValue, S: AsRef<str>>(
    gold_by_doc: &[BTreeSet<String>],
    predicted_by_doc: &[Vec<S>],
    rank: Rank,
    mode: MacroMode,
) -> MetricTriple<T> {
    macro_metrics_with_universe(gold_by_doc, predicted_by_doc, rank, mode).0
}

pub(crate) fn macro_metrics_with_universe<T: MetricValue, S: AsRef<str>>(
    gold_by_doc: &[BTreeSet<String>],
    predicted_by_doc: &[Vec<S>],
    rank: Rank,
    mode: MacroMode,
) -> (MetricTriple<T>, usize) {
    assert_eq!(gold_by_doc.len(), predicted_by_doc.len());
    if mode == MacroMode::Documents {
        if gold_by_doc.is_empty() {
            log::warn!("macro average over an empty document set");
            return (MetricTriple::zero(), 0);
        }
        let (ps, rs): (Vec<T>, Vec<T>) = gold_by_doc
            .iter()
            .zip(predicted_by_doc)
            .map(|(g, p)| {
                let c = match_at_k(g, p, rank);
                (T::ratio(c.tp, c.tp + c.fp), T::ratio(c.tp, c.tp + c.fn_))
            })
            .unzip();
        return (MetricTriple::from_pr(T::mean(&ps), T::mean(&rs)), gold_by_doc.len());
    }

    let mut per_label: BTreeMap<&str, MatchCounts> = BTreeMap::new();
    for (gold, pred) in gold_by_doc.iter().zip(predicted_by_doc) {
        let top: HashSet<&str> = pred[..rank.take(pred.len())].iter().map(AsRef::as_ref).collect();
        for g in gold {
            let c = per_label.entry(g.as_str()).or_default();
            if top.contains(g.as_str()) {
                c.tp += 1;
            } else {
                c.fn_ += 1;
            }
        }
        for p in &top {
            if !gold.contains(*p) {
                per_label.entry(p).or_default().fp += 1;
            }
        }
    }
    if mode == MacroMode::LabelGoldOnly {
        per_label.retain(|_, c| c.tp + c.fn_ > 0);
    }
    if per_label.is_empty() {
        log::warn!("macro average over an empty label universe");
        return (MetricTriple::zero(), 0);
    }
    let (ps, rs): (Vec<T>, Vec<T>) = per_label
        .values()
        .map(|c| (T::ratio(c.tp, c.tp + c.fp), T::ratio(c.tp, c.tp + c.fn_)))
        .unzip();
    (MetricTriple::from_pr(T::mean(&ps), T::mean(&rs)), per_label.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn match_examples() {
        let gold = set(&["a", "b", "c"]);
        assert_eq!(match_at_k(&gold, &["a", "d", "b"], Rank::At(3)), MatchCounts { tp: 2, fp: 1, fn_: 1 });
        assert_eq!(match_at_k(&set(&["a"]), &[] as &[&str], Rank::At(5)), MatchCounts { tp: 0, fp: 0, fn_: 1 });
        assert_eq!(match_at_k(&gold, &["x", "c", "b", "a", "y"], Rank::All).fn_, 0);
        assert_eq!(match_at_k(&gold, &["a", "d", "b"], Rank::At(1)), MatchCounts { tp: 1, fp: 0, fn_: 2 });
    }

    #[test]
    fn micro_single_doc() {
        let m: MetricTriple<Ratio<i64>> = micro_metrics(&[MatchCounts { tp: 2, fp: 1, fn_: 1 }]);
        assert_eq!(m.precision, Ratio::new(2, 3));
        assert_eq!(m.recall, Ratio::new(2, 3));
        assert_eq!(m.f1, Ratio::new(2, 3));
        let z: MetricTriple<f64> = micro_metrics(&[]);
        assert_eq!(z, MetricTriple::zero());
    }

    #[test]
    fn published_triples_agree_with_harmonic_mean() {
        let m = MetricTriple::from_pr(0.318, 0.237);
        assert!((m.f1 - 0.271f64).abs() <= 0.0015);
        let m = MetricTriple::from_pr(0.175, 0.038);
        assert!((m.f1 - 0.063f64).abs() <= 0.0015);
    }

    #[test]
    fn macro_two_labels_half() {
        let gold = vec![set(&["a"]), set(&["b"])];
        let pred = vec![vec!["a"], vec![]];
        let m: MetricTriple<Ratio<i64>> = macro_metrics(&gold, &pred, Rank::At(1), MacroMode::LabelGoldOnly);
        assert_eq!(m.precision, Ratio::new(1, 2));
        assert_eq!(m.recall, Ratio::new(1, 2));
        assert_eq!(m.f1, Ratio::new(1, 2));
    }

    #[test]
    fn spurious_label_ignored_in_gold_only() {
        let gold = vec![set(&["a"]), set(&["b"])];
        let base = vec![vec!["a"], vec![]];
        let spurious = vec![vec!["a", "zzz"], vec!["zzz"]];
        let m1: MetricTriple<f64> = macro_metrics(&gold, &base, Rank::At(2), MacroMode::LabelGoldOnly);
        let m2: MetricTriple<f64> = macro_metrics(&gold, &spurious, Rank::At(2), MacroMode::LabelGoldOnly);
        assert_eq!(m1, m2);
        let m3: MetricTriple<f64> = macro_metrics(&gold, &spurious, Rank::At(2), MacroMode::LabelGoldUnionPredicted);
        assert!(m3.precision < m1.precision);
    }

    #[test]
    fn macro_documents_mode() {
        let gold = vec![set(&["a", "b"]), set(&["c"])];
        let pred = vec![vec!["a", "x"], vec!["c"]];
        let m: MetricTriple<Ratio<i64>> = macro_metrics(&gold, &pred, Rank::At(2), MacroMode::Documents);
        assert_eq!(m.precision, Ratio::new(3, 4));
        assert_eq!(m.recall, Ratio::new(3, 4));
    }

    #[test]
    fn empty_universe_is_zero() {
        let m: MetricTriple<f64> = macro_metrics::<f64, &str>(&[], &[], Rank::At(1), MacroMode::LabelGoldOnly);
        assert_eq!(m, MetricTriple::zero());
    }

    #[test]
    fn macro_mode_names_round_trip() {
        for m in [MacroMode::LabelGoldOnly, MacroMode::LabelGoldUnionPredicted, MacroMode::Documents] {
            assert_eq!(m.as_str().parse::<MacroMode>().unwrap(), m);
        }
    }

    proptest! {
        #[test]
        fn f1_is_harmonic_mean(p in 0.0f64..=1.0, r in 0.0f64..=1.0) {
            let m = MetricTriple::from_pr(p, r);
            if p + r > 0.0 {
                prop_assert!((m.f1 - 2.0 * p * r / (p + r)).abs() <= 1e-12);
            } else {
                prop_assert_eq!(m.f1, 0.0);
            }
            prop_assert!(m.f1 <= p.max(r) + 1e-12);
            prop_assert!(m.f1 <= 2.0 * p.min(r) + 1e-12);
        }

        #[test]
        fn micro_permutation_invariant(counts in prop::collection::vec((0usize..5, 0usize..5, 0usize..5), 0..20)) {
            let c: Vec<MatchCounts> = counts.iter().map(|&(tp, fp, fn_)| MatchCounts { tp, fp, fn_ }).collect();
            let mut rev = c.clone();
            rev.reverse();
            prop_assert_eq!(micro_metrics::<Ratio<i64>>(&c), micro_metrics::<Ratio<i64>>(&rev));
        }

        #[test]
        fn recall_non_decreasing_in_k(gold in prop::collection::btree_set(0u8..10, 0..5), pred in prop::collection::vec(0u8..10, 0..10), k in 1usize..8) {
            let gold: BTreeSet<String> = gold.iter().map(|g| g.to_string()).collect();
            let mut seen = HashSet::new();
            let pred: Vec<String> = pred.iter().map(|p| p.to_string()).filter(|p| seen.insert(p.clone())).collect();
            let a = match_at_k(&gold, &pred, Rank::At(k));
            let b = match_at_k(&gold, &pred, Rank::At(k + 1));
            prop_assert!(b.tp >= a.tp);
            prop_assert!(b.fn_ <= a.fn_);
        }
    }
}
