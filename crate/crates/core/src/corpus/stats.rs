use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Document;

/// Vocabulary statistics over normalized keyword forms.
///
/// Keyword length is measured over the distinct vocabulary. Per-document
/// figures cover only documents that carry at least one keyword. Means are
/// `None` when there is nothing to average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabStats {
    pub documents: usize,
    pub documents_with_keywords: usize,
    pub distinct_count: usize,
    pub count_used_more_than_once: usize,
    pub count_with_min_docs: BTreeMap<usize, usize>,
    pub mean_keyword_length_words: Option<f64>,
    pub sd_keyword_length_words: Option<f64>,
    pub mean_keywords_per_doc: Option<f64>,
    pub median_keywords_per_doc: Option<f64>,
}

/// Number of distinct documents each normalized keyword is assigned to.
pub fn keyword_document_frequency(docs: &[Document]) -> HashMap<String, usize> {
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in docs {
        // keywords are already unique per document
        for k in doc.gold() {
            *df.entry(k.to_string()).or_default() += 1;
        }
    }
    df
}

pub fn compute_vocab_stats(docs: &[Document], min_docs: &[usize]) -> VocabStats {
    let df = keyword_document_frequency(docs);

    let count_with_min_docs = min_docs
        .iter()
        .map(|&n| (n, df.values().filter(|&&c| c >= n).count()))
        .collect();

    // sorted so the float sums do not depend on hash order
    let mut lengths: Vec<f64> = df
        .keys()
        .map(|k| k.split(' ').count() as f64)
        .collect();
    lengths.sort_by(f64::total_cmp);
    let (mean_len, sd_len) = mean_sd(&lengths);

    let mut per_doc: Vec<usize> = docs
        .iter()
        .filter(|d| d.has_keywords())
        .map(|d| d.keywords.len())
        .collect();
    per_doc.sort_unstable();
    let per_doc_f: Vec<f64> = per_doc.iter().map(|&n| n as f64).collect();

    VocabStats {
        documents: docs.len(),
        documents_with_keywords: per_doc.len(),
        distinct_count: df.len(),
        count_used_more_than_once: df.values().filter(|&&c| c > 1).count(),
        count_with_min_docs,
        mean_keyword_length_words: mean_len,
        sd_keyword_length_words: sd_len,
        mean_keywords_per_doc: mean_sd(&per_doc_f).0,
        median_keywords_per_doc: median_sorted(&per_doc),
    }
}

/// Mean and sample standard deviation.
fn mean_sd(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.len() > 1).then(|| {
        let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    });
    (Some(mean), sd)
}

fn median_sorted(xs: &[usize]) -> Option<f64> {
    match xs.len() {
        0 => None,
        n if n % 2 == 1 => Some(xs[n / 2] as f64),
        n => Some((xs[n / 2 - 1] + xs[n / 2]) as f64 / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_counted_example() {
        let docs = vec![
            Document::new("1", "t", "a", ["a", "b"]),
            Document::new("2", "t", "a", ["a"]),
        ];
        let s = compute_vocab_stats(&docs, &[2]);
        assert_eq!(s.distinct_count, 2);
        assert_eq!(s.count_used_more_than_once, 1);
        assert_eq!(s.count_with_min_docs[&2], 1);
        assert_eq!(s.mean_keywords_per_doc, Some(1.5));
        assert_eq!(s.median_keywords_per_doc, Some(1.5));
        assert_eq!(s.mean_keyword_length_words, Some(1.0));
    }

    #[test]
    fn empty_corpus_has_absent_means() {
        let s = compute_vocab_stats(&[], &[10]);
        assert_eq!(s.distinct_count, 0);
        assert_eq!(s.count_with_min_docs[&10], 0);
        assert_eq!(s.mean_keywords_per_doc, None);
        assert_eq!(s.median_keywords_per_doc, None);
        assert_eq!(s.sd_keyword_length_words, None);
    }

    #[test]
    fn keyword_lengths_in_words() {
        let docs = vec![Document::new("1", "t", "a", ["unia europejska", "gaz", "nord stream 2"])];
        let s = compute_vocab_stats(&docs, &[]);
        assert_eq!(s.mean_keyword_length_words, Some(2.0));
        assert_eq!(s.sd_keyword_length_words, Some(1.0));
        assert_eq!(s.median_keywords_per_doc, Some(3.0));
    }

    #[test]
    fn frequency_counts_documents_not_mentions() {
        let docs = vec![
            Document::new("1", "t", "a", ["Gaz", "gaz", "GAZ"]),
            Document::new("2", "t", "a", ["gaz"]),
        ];
        assert_eq!(keyword_document_frequency(&docs)["gaz"], 2);
    }

    proptest! {
        #[test]
        fn order_invariant(labels in prop::collection::vec(prop::collection::vec(0u8..8, 0..5), 1..20), seed in any::<u64>()) {
            let docs: Vec<_> = labels.iter().enumerate()
                .map(|(i, ls)| Document::new(i.to_string(), "t", "a", ls.iter().map(|l| format!("k {l}"))))
                .collect();
            let mut shuffled = docs.clone();
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = compute_vocab_stats(&docs, &[1, 2, 3]);
            let b = compute_vocab_stats(&shuffled, &[1, 2, 3]);
            prop_assert_eq!(a.distinct_count, b.distinct_count);
            prop_assert_eq!(a.count_used_more_than_once, b.count_used_more_than_once);
            prop_assert_eq!(&a.count_with_min_docs, &b.count_with_min_docs);
            prop_assert_eq!(a.median_keywords_per_doc, b.median_keywords_per_doc);
            let close = |x: Option<f64>, y: Option<f64>| match (x, y) {
                (Some(x), Some(y)) => (x - y).abs() < 1e-9,
                (None, None) => true,
                _ => false,
            };
            prop_assert!(close(a.mean_keywords_per_doc, b.mean_keywords_per_doc));
            prop_assert!(close(a.sd_keyword_length_words, b.sd_keyword_length_words));
            prop_assert!(a.distinct_count >= a.count_used_more_than_once);
            prop_assert!(a.count_used_more_than_once >= a.count_with_min_docs[&3]);
        }
    }
}
