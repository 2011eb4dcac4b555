use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use kwbench::candidates::{StopwordList, TextAnalyzer};
use kwbench::corpus::{compute_vocab_stats, parse_corpus, Document, NormalizeOptions, Strictness};
use kwbench::embed::{keybert_rank, Embedder, KeyBertParams, PrecomputedVectors, WordVectors};
use kwbench::eval::{evaluate_run, render_tsv, read_reports_json, write_reports_json, EvalOptions};
use kwbench::prediction::{read_predictions, write_predictions, RankedPrediction};
use kwbench::split::{iterative_stratified_split, random_split, stratified_split, FoldRatios, SplitAssignment, TRAIN};
use kwbench::stat::{
    cvalue_rank, first_phrases_rank, ncvalue_rank, textrank_rank, tfidf_rank, IdfTable, TermTable, TermTableParams,
    TextRankParams,
};
use kwbench::{Prediction, Report};

use crate::args::*;
use crate::manifest::write_manifest;
use crate::UsageError;

fn load_corpus(args: &CorpusArgs) -> Result<Vec<Document>> {
    let strictness = if args.skip_invalid { Strictness::SkipInvalid } else { Strictness::Strict };
    let parsed = parse_corpus(&args.corpus, strictness)?;
    for s in &parsed.skipped {
        log::warn!("{}: line {} skipped: {}", args.corpus.display(), s.line, s.reason);
    }
    log::info!("{}: {}", args.corpus.display(), parsed.summary());
    Ok(parsed.documents)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_text(value: &impl Serialize) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn stats(cli: &Cli, args: &StatsArgs) -> Result<()> {
    let docs = load_corpus(&args.corpus)?;
    if docs.is_empty() {
        return Err(kwbench::Error::EmptyCorpus.into());
    }
    let corpus_stats = compute_vocab_stats(&docs, &args.min_docs);
    let text = match &args.split {
        None => json_text(&corpus_stats)?,
        Some(split_path) => {
            let split = SplitAssignment::read_json(split_path, Some(&docs))?;
            let by_id: BTreeMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
            let pick = |ids: &mut dyn Iterator<Item = &String>| -> Vec<Document> {
                ids.map(|id| by_id[id.as_str()].clone()).collect()
            };
            let in_split = pick(&mut split.folds.values().flatten());
            let folds: BTreeMap<&str, _> = split
                .folds
                .iter()
                .map(|(name, ids)| (name.as_str(), compute_vocab_stats(&pick(&mut ids.iter()), &args.min_docs)))
                .collect();
            json_text(&json!({
                "corpus": corpus_stats,
                "split": compute_vocab_stats(&in_split, &args.min_docs),
                "folds": folds,
            }))?
        }
    };
    write_text(args.output.as_deref(), &text)?;
    if let Some(out) = &args.output {
        write_manifest(out, cli, json!({ "documents": docs.len() }))?;
    }
    Ok(())
}

pub fn parse_ratios(text: &str) -> Result<FoldRatios> {
    let mut ratios = FoldRatios::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| UsageError(format!("--ratios: expected name=value, got {part:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("--ratios: {value:?} is not a number")))?;
        if ratios.insert(name.trim().to_string(), value).is_some() {
            return Err(UsageError(format!("--ratios: fold {name:?} given twice")).into());
        }
    }
    Ok(ratios)
}

pub fn split(cli: &Cli, args: &SplitArgs) -> Result<()> {
    let ratios = parse_ratios(&args.ratios)?;
    let docs = load_corpus(&args.corpus)?;
    let split = match args.method {
        SplitMethod::Stratified => stratified_split(&docs, &ratios, cli.seed)?,
        SplitMethod::Iterative => iterative_stratified_split(&docs, &ratios, cli.seed)?,
        SplitMethod::Random => random_split(&docs, &ratios, cli.seed)?,
    };
    if let Some(parent) = args.output.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    split.write_json(&args.output)?;
    let sizes: BTreeMap<&str, usize> = split.folds.iter().map(|(k, v)| (k.as_str(), v.len())).collect();
    write_manifest(
        &args.output,
        cli,
        json!({ "fold_sizes": sizes, "mean_max_deviation_df10": split.mean_max_deviation(10) }),
    )?;
    Ok(())
}

fn analyzer(args: &TextArgs) -> Result<TextAnalyzer> {
    let stopwords = match &args.stopwords {
        Some(path) => StopwordList::from_file(path)?,
        None => match args.stopword_lang {
            StopwordLang::Pl => StopwordList::polish(),
            StopwordLang::En => StopwordList::english(),
            StopwordLang::Both => StopwordList::bundled(),
            StopwordLang::None => StopwordList::empty(),
        },
    };
    Ok(TextAnalyzer::new(stopwords).with_lemmas(args.use_lemmas))
}

fn load_embedder(args: &MethodArgs) -> Result<Box<dyn Embedder<f64>>> {
    let path = args
        .vectors
        .as_ref()
        .ok_or_else(|| UsageError("method keybert requires --vectors <FILE>".into()))?;
    let jsonl = match args.vector_format {
        VectorFormat::Jsonl => true,
        VectorFormat::Text => false,
        VectorFormat::Auto => path.extension().is_some_and(|e| e == "jsonl"),
    };
    Ok(if jsonl {
        Box::new(PrecomputedVectors::<f64>::from_file(path)?)
    } else {
        let mut v = WordVectors::<f64>::from_file(path)?;
        v.zero_fallback = args.zero_fallback;
        Box::new(v)
    })
}

/// Ranks `targets`. `idf_docs` feed tfidf document frequencies and
/// `table_docs` the C-value term table.
fn run_method(
    args: &MethodArgs,
    targets: &[Document],
    idf_docs: &[Document],
    table_docs: &[Document],
) -> Result<Vec<Prediction>> {
    let an = analyzer(&args.text)?;
    let k = args.k;
    let preds: Vec<Prediction> = match args.method {
        Method::Tfidf => {
            if args.ngram_min == 0 || args.ngram_min > args.ngram_max {
                return Err(UsageError("--ngram-min must be between 1 and --ngram-max".into()).into());
            }
            let idf = IdfTable::build(idf_docs, &an, (args.ngram_min, args.ngram_max));
            targets.par_iter().map(|d| tfidf_rank(d, &an, &idf, k)).collect()
        }
        Method::Textrank => {
            let params = TextRankParams {
                window: args.window,
                damping: args.damping,
                tol: args.tol,
                max_iter: args.max_iter,
                max_len: args.max_len,
            };
            targets
                .par_iter()
                .map(|d| textrank_rank(d, &an, &params, k))
                .collect::<kwbench::Result<_>>()?
        }
        Method::Firstphrases => targets.par_iter().map(|d| first_phrases_rank(d, &an, args.max_len, k)).collect(),
        Method::Cvalue | Method::Ncvalue => {
            let params = TermTableParams { max_len: args.max_len, context_window: args.context_window };
            let table = TermTable::build(table_docs, &an, params);
            if args.method == Method::Cvalue {
                targets.par_iter().map(|d| cvalue_rank(d, &an, &table, k)).collect()
            } else {
                targets
                    .par_iter()
                    .map(|d| ncvalue_rank(d, &an, &table, k, args.alpha, args.beta))
                    .collect::<kwbench::Result<_>>()?
            }
        }
        Method::Keybert => {
            let embedder = load_embedder(args)?;
            let params = KeyBertParams {
                n_range: (args.ngram_min, args.keybert_ngram_max),
                mode: args.selection,
                diversity: args.diversity,
                pool: args.pool,
            };
            params.validate()?;
            targets
                .par_iter()
                .map(|d| keybert_rank(d, &an, embedder.as_ref(), &params, k))
                .collect::<kwbench::Result<_>>()?
        }
    };
    Ok(preds)
}

fn write_prediction_file(path: &Path, preds: &[Prediction]) -> Result<()> {
    let mut w = create(path)?;
    write_predictions(&mut w, preds)?;
    w.flush()?;
    Ok(())
}

fn prediction_summary(preds: &[Prediction]) -> serde_json::Value {
    json!({
        "documents": preds.len(),
        "empty_predictions": preds.iter().filter(|p| p.is_empty()).count(),
    })
}

pub fn extract(cli: &Cli, args: &ExtractArgs) -> Result<()> {
    if args.method.method == Method::Keybert && args.method.vectors.is_none() {
        return Err(UsageError("method keybert requires --vectors <FILE>".into()).into());
    }
    let docs = load_corpus(&args.corpus)?;
    let split = args.split.as_ref().map(|p| SplitAssignment::read_json(p, Some(&docs))).transpose()?;
    let select = |ids: &[String]| -> Vec<Document> {
        let wanted: std::collections::HashSet<&str> = ids.iter().map(String::as_str).collect();
        docs.iter().filter(|d| wanted.contains(d.id.as_str())).cloned().collect()
    };
    let idf_docs = match &split {
        Some(s) => select(s.fold(TRAIN)?),
        None => {
            if args.method.method == Method::Tfidf {
                log::warn!("no --split given; tfidf document frequencies come from the whole corpus");
            }
            docs.clone()
        }
    };
    let targets = match (&args.fold, &split) {
        (Some(fold), Some(s)) => select(s.fold(fold)?),
        _ => docs.clone(),
    };
    let preds = run_method(&args.method, &targets, &idf_docs, &docs)?;
    write_prediction_file(&args.output, &preds)?;
    write_manifest(&args.output, cli, prediction_summary(&preds))
}

fn collect_text_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(input)
                .with_context(|| format!("reading {}", input.display()))?
                .map(|e| e.map(|e| e.path()))
                .collect::<io::Result<_>>()?;
            entries.retain(|p| p.is_file());
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

pub fn transfer(cli: &Cli, args: &TransferArgs) -> Result<()> {
    if args.method.method == Method::Keybert && args.method.vectors.is_none() {
        return Err(UsageError("method keybert requires --vectors <FILE>".into()).into());
    }
    let mut docs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for path in collect_text_files(&args.input)? {
        let id = path
            .file_name()
            .and_then(|n| n.to_str())
            .with_context(|| format!("{}: file name is not UTF-8", path.display()))?
            .to_string();
        if !seen.insert(id.clone()) {
            return Err(kwbench::Error::DuplicateId { id, line: 0 }.into());
        }
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        docs.push(Document::new(id, "", text, Vec::<String>::new()));
    }
    let idf_docs = match &args.idf_corpus {
        Some(p) => parse_corpus(p, Strictness::Strict)?.documents,
        None => docs.clone(),
    };
    let preds = run_method(&args.method, &docs, &idf_docs, &docs)?;
    write_prediction_file(&args.output, &preds)?;
    write_manifest(&args.output, cli, prediction_summary(&preds))
}

fn json_path(args: &EvaluateArgs) -> PathBuf {
    args.json.clone().unwrap_or_else(|| args.output.with_extension("json"))
}

pub fn evaluate(cli: &Cli, args: &EvaluateArgs) -> Result<()> {
    if args.ranks.is_empty() {
        return Err(UsageError("--ranks needs at least one rank".into()).into());
    }
    let docs = load_corpus(&args.corpus)?;
    let split = SplitAssignment::read_json(&args.split, Some(&docs))?;
    let opts = EvalOptions { macro_mode: args.macro_mode, filter_predictions: args.filter_predictions };
    let norm = NormalizeOptions { underscores_as_spaces: args.underscores_as_spaces };
    let mut reports: Vec<Report> = Vec::new();
    for path in &args.predictions {
        let preds = read_predictions(path, norm).with_context(|| format!("reading {}", path.display()))?;
        let method = method_name(path, &preds);
        for &scenario in &args.scenario {
            let mut report: Report = if args.exact {
                evaluate_run::<num_rational::BigRational, f64>(&docs, &split, &preds, scenario, &args.ranks, opts)
                    .map(|r| r.to_f64())
            } else {
                evaluate_run::<f64, f64>(&docs, &split, &preds, scenario, &args.ranks, opts)
            }
            .with_context(|| format!("evaluating {}", path.display()))?;
            report.method = method.clone();
            reports.push(report);
        }
    }
    write_text(Some(&args.output), &render_tsv(&reports))?;
    let json = json_path(args);
    write_reports_json(&json, &reports)?;
    write_manifest(&args.output, cli, json!({ "json_report": json, "reports": reports.len() }))
}

fn method_name(path: &Path, preds: &[RankedPrediction<f64>]) -> String {
    preds
        .iter()
        .map(|p| p.method.as_str())
        .find(|m| !m.is_empty())
        .map(String::from)
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_default()
}

pub fn report(args: &ReportArgs) -> Result<()> {
    let reports = read_reports_json(&args.input)?;
    write_text(args.output.as_deref(), &render_tsv(&reports))
}
