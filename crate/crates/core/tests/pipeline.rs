//! End-to-end runs through the library: split, extract, serialize, evaluate.

use std::collections::BTreeSet;

use kwbench::candidates::{chunk_noun_phrases, StopwordList, TextAnalyzer};
use kwbench::corpus::{Document, NormalizeOptions};
use kwbench::embed::{keybert_rank, KeyBertParams, SelectionMode, WordVectors};
use kwbench::eval::{evaluate_run, EvalOptions, EvalReport};
use kwbench::prediction::{read_predictions_from, write_predictions, RankedPrediction};
use kwbench::split::{iterative_stratified_split, default_ratios, TEST};
use kwbench::stat::{
    cvalue_rank, first_phrases_rank, ncvalue_rank, textrank_rank, tfidf_rank, IdfTable, TermTable, TermTableParams,
    TextRankParams,
};
use kwbench::{Prediction, Rank, Scenario};
use num_rational::Ratio;

const TOPICS: [&[&str]; 4] = [
    &["gaz ziemny", "cena gazu", "rynek energii"],
    &["sad najwyzszy", "reforma sadownictwa", "konstytucja"],
    &["szczepionka", "pandemia", "ochrona zdrowia"],
    &["kanclerz niemiec", "wybory parlamentarne", "koalicja rzadowa"],
];

fn corpus() -> Vec<Document> {
    (0..60)
        .map(|i| {
            let topic = TOPICS[i % TOPICS.len()];
            let a = topic[i % 3];
            let b = topic[(i + 1) % 3];
            Document::new(
                format!("d{i:02}"),
                format!("Raport o {a}"),
                format!("Omawiamy {a} oraz {b}. Autorzy analizuja {b} w kontekscie {}.", topic[(i + 2) % 3]),
                [a, b, "abstrakcyjne haslo"],
            )
        })
        .collect()
}

fn check_prediction(p: &Prediction, sorted: bool) {
    let set: BTreeSet<&str> = p.keywords().collect();
    assert_eq!(set.len(), p.len(), "duplicates in {}", p.doc_id);
    assert!(p.items.iter().all(|i| i.score.is_finite()));
    if sorted {
        for w in p.items.windows(2) {
            assert!(
                w[0].score > w[1].score || (w[0].score == w[1].score && w[0].keyword < w[1].keyword),
                "order broken in {}: {:?}",
                p.doc_id,
                w
            );
        }
    }
}

#[test]
fn every_native_extractor_yields_valid_predictions() {
    let docs = corpus();
    let an = TextAnalyzer::default();
    let split = iterative_stratified_split(&docs, &default_ratios(), 42).unwrap();
    let train: Vec<Document> = docs.iter().filter(|d| split.folds["train"].contains(&d.id)).cloned().collect();
    let idf = IdfTable::build(&train, &an, (1, 3));
    let table = TermTable::build(&docs, &an, TermTableParams::default());
    let k = Rank::At(5);
    for d in &docs {
        let runs: Vec<Prediction> = vec![
            tfidf_rank(d, &an, &idf, k),
            textrank_rank(d, &an, &TextRankParams::default(), k).unwrap(),
            first_phrases_rank(d, &an, 5, k),
            cvalue_rank(d, &an, &table, k),
            ncvalue_rank(d, &an, &table, k, 0.8, 0.2).unwrap(),
        ];
        for p in &runs {
            assert!(!p.is_empty(), "{} empty for {}", p.method, d.id);
            assert!(p.len() <= 5);
            check_prediction(p, true);
        }
    }
}

#[test]
fn predictions_survive_the_file_format() {
    let docs = corpus();
    let an = TextAnalyzer::default();
    let table = TermTable::build(&docs, &an, TermTableParams::default());
    let preds: Vec<Prediction> = docs.iter().map(|d| cvalue_rank(d, &an, &table, Rank::At(7))).collect();
    let mut buf = Vec::new();
    write_predictions(&mut buf, &preds).unwrap();
    let back = read_predictions_from(buf.as_slice(), NormalizeOptions::default()).unwrap();
    assert_eq!(back, preds);
}

#[test]
fn beta_zero_reproduces_cvalue_order() {
    let docs = corpus();
    let an = TextAnalyzer::default();
    let table = TermTable::build(&docs, &an, TermTableParams::default());
    for d in &docs {
        let c = cvalue_rank::<f64>(d, &an, &table, Rank::All);
        let nc = ncvalue_rank::<f64>(d, &an, &table, Rank::All, 1.0, 0.0).unwrap();
        assert_eq!(c.keywords().collect::<Vec<_>>(), nc.keywords().collect::<Vec<_>>());
    }
}

#[test]
fn unlimited_cvalue_returns_the_whole_candidate_pool() {
    let docs = corpus();
    let an = TextAnalyzer::default();
    let table = TermTable::build(&docs, &an, TermTableParams::default());
    for d in docs.iter().take(10) {
        let pool: BTreeSet<String> =
            chunk_noun_phrases(&an.tokens(d), 5).into_iter().map(|c| c.normalized_form).collect();
        let got: BTreeSet<String> =
            cvalue_rank::<f64>(d, &an, &table, Rank::All).keywords().map(String::from).collect();
        assert_eq!(got, pool);
    }
}

#[test]
fn one_verbatim_keyword_in_three_caps_recall_at_a_third() {
    let docs = corpus();
    let an = TextAnalyzer::default();
    // rebuild gold: one phrase from the text plus two that never occur in it
    let docs: Vec<Document> = docs
        .into_iter()
        .enumerate()
        .map(|(i, mut d)| {
            let topic = TOPICS[i % TOPICS.len()];
            d.set_keywords([topic[i % 3], "xylofon", "zeppelin"]);
            d
        })
        .collect();
    let split = iterative_stratified_split(&docs, &default_ratios(), 1).unwrap();
    let table = TermTable::build(&docs, &an, TermTableParams::default());
    let preds: Vec<Prediction> = docs.iter().map(|d| cvalue_rank(d, &an, &table, Rank::All)).collect();
    let report: EvalReport<Ratio<i64>> =
        evaluate_run(&docs, &split, &preds, Scenario::FullVocab, &[Rank::All], EvalOptions::default()).unwrap();
    assert_eq!(report.entries[0].micro.recall, Ratio::new(1, 3));
    assert_eq!(report.counts.docs_evaluated, split.folds[TEST].len());
}

#[test]
fn keybert_with_word_vectors() {
    let text = "4 3\ngaz 1 0 0\nziemny 0.9 0.1 0\ncena 0 1 0\nrynek 0 0.8 0.2\n";
    let vectors = WordVectors::<f64>::parse(text.as_bytes()).unwrap();
    let an = TextAnalyzer::new(StopwordList::polish());
    let doc = Document::new("d", "Gaz ziemny", "Cena gazu na rynku. Gaz ziemny i rynek.", Vec::<String>::new());
    for mode in [SelectionMode::Mmr, SelectionMode::Mss] {
        let params = KeyBertParams { mode, ..Default::default() };
        let p: RankedPrediction<f64> = keybert_rank(&doc, &an, &vectors, &params, Rank::At(3)).unwrap();
        assert_eq!(p.len(), 3, "{mode}");
        check_prediction(&p, false);
        assert!(p.items.iter().all(|i| (-1.0..=1.0).contains(&i.score)));
    }
}

#[test]
fn extraction_is_deterministic() {
    let docs = corpus();
    let an = TextAnalyzer::default();
    let run = || {
        let table = TermTable::build(&docs, &an, TermTableParams::default());
        let preds: Vec<Prediction> = docs
            .iter()
            .map(|d| ncvalue_rank(d, &an, &table, Rank::At(5), 0.8, 0.2).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_predictions(&mut buf, &preds).unwrap();
        buf
    };
    assert_eq!(run(), run());
}
