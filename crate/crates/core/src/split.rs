//! Multilabel iterative stratification into named folds.
//!
//! Labels are processed rarest first (by examples still unassigned). Each
//! example of the current label goes to the fold that most wants that label,
//! then the fold that most wants examples overall, then a seeded random pick
//! among whatever is still tied. Unlabeled documents are placed last by
//! overall demand. [`stratified_split`] adds a swap refinement on top.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};

pub const TRAIN: &str = "train";
pub const DEV: &str = "dev";
pub const TEST: &str = "test";

const TIE_EPS: f64 = 1e-9;

pub type FoldRatios = BTreeMap<String, f64>;

/// The 70/30 train/test ratio.
pub fn default_ratios() -> FoldRatios {
    FoldRatios::from([(TRAIN.to_string(), 0.7), (TEST.to_string(), 0.3)])
}

pub fn validate_ratios(ratios: &FoldRatios) -> Result<()> {
    if ratios.is_empty() {
        return Err(Error::InvalidRatios("no folds given".into()));
    }
    for (name, r) in ratios {
        if !r.is_finite() || *r <= 0.0 {
            return Err(Error::InvalidRatios(format!("fold {name:?} has ratio {r}")));
        }
    }
    let total: f64 = ratios.values().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidRatios(format!("ratios sum to {total}, expected 1")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelBalance {
    pub document_frequency: usize,
    /// Share of the label's documents that landed in each fold.
    pub proportions: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub ratios: FoldRatios,
    pub folds: BTreeMap<String, Vec<String>>,
    #[serde(skip)]
    pub balance_report: BTreeMap<String, LabelBalance>,
}

impl SplitAssignment {
    pub fn fold(&self, name: &str) -> Result<&[String]> {
        self.folds
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingFold(name.to_string()))
    }

    /// Mean over labels with at least `min_df` documents of the largest
    /// absolute gap between a fold's share and its target ratio.
    pub fn mean_max_deviation(&self, min_df: usize) -> f64 {
        let devs: Vec<f64> = self
            .balance_report
            .values()
            .filter(|b| b.document_frequency >= min_df)
            .map(|b| {
                self.ratios
                    .iter()
                    .map(|(f, r)| (b.proportions.get(f).copied().unwrap_or(0.0) - r).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        if devs.is_empty() {
            0.0
        } else {
            devs.iter().sum::<f64>() / devs.len() as f64
        }
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Reads a split file. The balance report is recomputed only if
    /// documents are supplied.
    pub fn read_json(path: impl AsRef<Path>, docs: Option<&[Document]>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut split: SplitAssignment = serde_json::from_reader(BufReader::new(file))?;
        if let Some(docs) = docs {
            split.balance_report = balance_report(docs, &split.folds);
        }
        Ok(split)
    }
}

pub fn balance_report(
    docs: &[Document],
    folds: &BTreeMap<String, Vec<String>>,
) -> BTreeMap<String, LabelBalance> {
    let fold_of: BTreeMap<&str, &str> = folds
        .iter()
        .flat_map(|(f, ids)| ids.iter().map(move |id| (id.as_str(), f.as_str())))
        .collect();
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for doc in docs {
        let Some(fold) = fold_of.get(doc.id.as_str()) else {
            continue;
        };
        for label in doc.gold() {
            *counts
                .entry(label.to_string())
                .or_default()
                .entry(fold.to_string())
                .or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|(label, per_fold)| {
            let df: usize = per_fold.values().sum();
            let proportions = folds
                .keys()
                .map(|f| {
                    let n = per_fold.get(f).copied().unwrap_or(0);
                    (f.clone(), n as f64 / df as f64)
                })
                .collect();
            (
                label,
                LabelBalance {
                    document_frequency: df,
                    proportions,
                },
            )
        })
        .collect()
}

fn pick_best(candidates: &[usize], key: impl Fn(usize) -> f64) -> Vec<usize> {
    let best = candidates
        .iter()
        .map(|&j| key(j))
        .fold(f64::NEG_INFINITY, f64::max);
    candidates
        .iter()
        .copied()
        .filter(|&j| key(j) >= best - TIE_EPS)
        .collect()
}

fn choose_fold(
    rng: &mut ChaCha8Rng,
    label_demand: Option<&[f64]>,
    fold_demand: &[f64],
) -> usize {
    let all: Vec<usize> = (0..fold_demand.len()).collect();
    let stage = match label_demand {
        Some(ld) => pick_best(&all, |j| ld[j]),
        None => all,
    };
    let stage = pick_best(&stage, |j| fold_demand[j]);
    // randomness is consumed only for ties that survive both stages
    if stage.len() == 1 {
        stage[0]
    } else {
        stage[rng.gen_range(0..stage.len())]
    }
}

/// Label indices per document, each list sorted and deduplicated.
fn index_labels(docs: &[Document]) -> (Vec<Vec<usize>>, usize) {
    let labels: BTreeSet<&str> = docs.iter().flat_map(Document::gold).collect();
    let label_index: BTreeMap<&str, usize> =
        labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let doc_labels = docs
        .iter()
        .map(|d| {
            let mut ls: Vec<usize> = d.gold().map(|l| label_index[l]).collect();
            ls.sort_unstable();
            ls.dedup();
            ls
        })
        .collect();
    (doc_labels, labels.len())
}

fn iterative_assign(
    doc_labels: &[Vec<usize>],
    n_labels: usize,
    fold_ratio: &[f64],
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let n_docs = doc_labels.len();
    let mut label_docs: Vec<Vec<usize>> = vec![Vec::new(); n_labels];
    for (d, ls) in doc_labels.iter().enumerate() {
        for &l in ls {
            label_docs[l].push(d);
        }
    }

    let mut remaining: Vec<usize> = label_docs.iter().map(Vec::len).collect();
    let mut fold_demand: Vec<f64> = fold_ratio.iter().map(|r| r * n_docs as f64).collect();
    let mut label_demand: Vec<Vec<f64>> = remaining
        .iter()
        .map(|&n| fold_ratio.iter().map(|r| r * n as f64).collect())
        .collect();
    let mut queue: BTreeSet<(usize, usize)> = remaining
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(l, &n)| (n, l))
        .collect();
    let mut assigned: Vec<Option<usize>> = vec![None; n_docs];

    let assign = |d: usize,
                      fold: usize,
                      assigned: &mut Vec<Option<usize>>,
                      remaining: &mut Vec<usize>,
                      queue: &mut BTreeSet<(usize, usize)>,
                      label_demand: &mut Vec<Vec<f64>>,
                      fold_demand: &mut Vec<f64>| {
        assigned[d] = Some(fold);
        fold_demand[fold] -= 1.0;
        for &m in &doc_labels[d] {
            label_demand[m][fold] -= 1.0;
            let queued = queue.remove(&(remaining[m], m));
            remaining[m] -= 1;
            if queued && remaining[m] > 0 {
                queue.insert((remaining[m], m));
            }
        }
    };

    while let Some((_, label)) = queue.pop_first() {
        for &d in &label_docs[label] {
            if assigned[d].is_some() {
                continue;
            }
            let fold = choose_fold(rng, Some(&label_demand[label]), &fold_demand);
            assign(
                d,
                fold,
                &mut assigned,
                &mut remaining,
                &mut queue,
                &mut label_demand,
                &mut fold_demand,
            );
        }
    }

    for d in 0..n_docs {
        if assigned[d].is_none() {
            let fold = choose_fold(rng, None, &fold_demand);
            assign(
                d,
                fold,
                &mut assigned,
                &mut remaining,
                &mut queue,
                &mut label_demand,
                &mut fold_demand,
            );
        }
    }

    assigned
        .into_iter()
        .map(|f| f.expect("every document assigned"))
        .collect()
}

fn assemble(docs: &[Document], ratios: &FoldRatios, seed: u64, assigned: &[usize]) -> SplitAssignment {
    let fold_names: Vec<&String> = ratios.keys().collect();
    let mut folds: BTreeMap<String, Vec<String>> =
        fold_names.iter().map(|f| ((*f).clone(), Vec::new())).collect();
    for (doc, &fold) in docs.iter().zip(assigned) {
        folds
            .get_mut(fold_names[fold].as_str())
            .expect("fold exists")
            .push(doc.id.clone());
    }
    let balance = balance_report(docs, &folds);
    SplitAssignment {
        seed,
        ratios: ratios.clone(),
        folds,
        balance_report: balance,
    }
}

/// Plain iterative stratification.
pub fn iterative_stratified_split(
    docs: &[Document],
    ratios: &FoldRatios,
    seed: u64,
) -> Result<SplitAssignment> {
    validate_ratios(ratios)?;
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fold_ratio: Vec<f64> = ratios.values().copied().collect();
    let (doc_labels, n_labels) = index_labels(docs);
    let assigned = iterative_assign(&doc_labels, n_labels, &fold_ratio, &mut rng);
    Ok(assemble(docs, ratios, seed, &assigned))
}

/// Partners tried per document and pass during refinement.
pub const REFINE_CANDIDATES: usize = 64;
/// Upper bound on refinement passes.
pub const REFINE_MAX_PASSES: usize = 50;

/// Iterative stratification followed by swap refinement.
///
/// Iterative stratification spends most of its choices on the long tail of
/// rare labels. A label seen once always goes to the fold with the largest
/// ratio, so corpora where most documents carry a unique label end up almost
/// entirely in that fold, and mid-frequency labels drift off target.
///
/// Refinement works on the sum of squared label demands (the squared gaps
/// between each label's per-fold count and its target share). First,
/// documents move out of over-full folds until fold sizes match the
/// largest-remainder rounding of the ratios, each move picking the cheapest
/// of a sample of candidates. Then pairs of documents trade folds whenever
/// the swap strictly lowers the objective. A split that already has exact
/// fold sizes and no improving swap is returned unchanged.
pub fn stratified_split(docs: &[Document], ratios: &FoldRatios, seed: u64) -> Result<SplitAssignment> {
    validate_ratios(ratios)?;
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fold_ratio: Vec<f64> = ratios.values().copied().collect();
    let (doc_labels, n_labels) = index_labels(docs);
    let mut assigned = iterative_assign(&doc_labels, n_labels, &fold_ratio, &mut rng);
    refine_swaps(&doc_labels, n_labels, &fold_ratio, &mut assigned, &mut rng, REFINE_MAX_PASSES);
    Ok(assemble(docs, ratios, seed, &assigned))
}

struct DemandResidual<'a> {
    counts: Vec<Vec<f64>>,
    targets: Vec<Vec<f64>>,
    doc_labels: &'a [Vec<usize>],
}

impl DemandResidual<'_> {
    fn term(&self, l: usize, f: usize, count: f64) -> f64 {
        let t = self.targets[l][f];
        (count - t) * (count - t)
    }

    /// Net change of label `l` in fold `a` when `d` (in `a`) and `e` (in `b`)
    /// trade places, merged over both sorted label lists.
    fn swap_delta(&self, d: usize, e: usize, a: usize, b: usize) -> f64 {
        let (ld, le) = (&self.doc_labels[d], &self.doc_labels[e]);
        let (mut i, mut j) = (0, 0);
        let mut delta = 0.0;
        let mut change = |l: usize, da: f64| {
            let (ca, cb) = (self.counts[l][a], self.counts[l][b]);
            delta += self.term(l, a, ca + da) - self.term(l, a, ca) + self.term(l, b, cb - da)
                - self.term(l, b, cb);
        };
        while i < ld.len() || j < le.len() {
            match (ld.get(i), le.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x < y => {
                    change(x, -1.0);
                    i += 1;
                }
                (Some(&x), None) => {
                    change(x, -1.0);
                    i += 1;
                }
                (_, Some(&y)) => {
                    change(y, 1.0);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        delta
    }

    fn move_delta(&self, d: usize, a: usize, b: usize) -> f64 {
        self.doc_labels[d]
            .iter()
            .map(|&l| {
                let (ca, cb) = (self.counts[l][a], self.counts[l][b]);
                self.term(l, a, ca - 1.0) - self.term(l, a, ca) + self.term(l, b, cb + 1.0) - self.term(l, b, cb)
            })
            .sum()
    }

    fn apply_move(&mut self, d: usize, a: usize, b: usize) {
        for &l in &self.doc_labels[d] {
            self.counts[l][a] -= 1.0;
            self.counts[l][b] += 1.0;
        }
    }

    fn apply(&mut self, d: usize, e: usize, a: usize, b: usize) {
        for &l in &self.doc_labels[d] {
            self.counts[l][a] -= 1.0;
            self.counts[l][b] += 1.0;
        }
        for &l in &self.doc_labels[e] {
            self.counts[l][b] -= 1.0;
            self.counts[l][a] += 1.0;
        }
    }
}

fn refine_swaps(
    doc_labels: &[Vec<usize>],
    n_labels: usize,
    fold_ratio: &[f64],
    assigned: &mut [usize],
    rng: &mut ChaCha8Rng,
    max_passes: usize,
) -> usize {
    let n_docs = assigned.len();
    let mut counts = vec![vec![0.0; fold_ratio.len()]; n_labels];
    let mut df = vec![0.0; n_labels];
    for (ls, &f) in doc_labels.iter().zip(assigned.iter()) {
        for &l in ls {
            counts[l][f] += 1.0;
            df[l] += 1.0;
        }
    }
    let targets = df
        .iter()
        .map(|n| fold_ratio.iter().map(|r| r * n).collect())
        .collect();
    let mut residual = DemandResidual { counts, targets, doc_labels };

    let target = fold_sizes(n_docs, fold_ratio.iter().copied());
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); fold_ratio.len()];
    for (d, &f) in assigned.iter().enumerate() {
        members[f].push(d);
    }
    let mut moves = 0;
    loop {
        let over = (0..members.len()).find(|&f| members[f].len() > target[f]);
        let under = (0..members.len()).max_by_key(|&f| (target[f] as isize - members[f].len() as isize, usize::MAX - f));
        let (Some(a), Some(b)) = (over, under) else { break };
        let mut best: Option<(f64, usize)> = None;
        for _ in 0..REFINE_CANDIDATES {
            let slot = rng.gen_range(0..members[a].len());
            let delta = residual.move_delta(members[a][slot], a, b);
            if best.map_or(true, |(x, _)| delta < x) {
                best = Some((delta, slot));
            }
        }
        let (_, slot) = best.expect("an over-full fold is non-empty");
        let d = members[a].swap_remove(slot);
        residual.apply_move(d, a, b);
        assigned[d] = b;
        members[b].push(d);
        moves += 1;
    }

    let mut labeled: Vec<usize> = (0..n_docs).filter(|&d| !doc_labels[d].is_empty()).collect();
    let mut swaps = 0;
    for _ in 0..max_passes {
        labeled.shuffle(rng);
        let mut improved = false;
        for &d in &labeled {
            let a = assigned[d];
            let mut best: Option<(f64, usize)> = None;
            for _ in 0..REFINE_CANDIDATES {
                let e = rng.gen_range(0..n_docs);
                if assigned[e] == a {
                    continue;
                }
                let delta = residual.swap_delta(d, e, a, assigned[e]);
                if delta < -TIE_EPS && best.map_or(true, |(b, _)| delta < b) {
                    best = Some((delta, e));
                }
            }
            if let Some((_, e)) = best {
                let b = assigned[e];
                residual.apply(d, e, a, b);
                assigned.swap(d, e);
                improved = true;
                swaps += 1;
            }
        }
        if !improved {
            break;
        }
    }
    moves + swaps
}

/// Largest-remainder rounding of `ratios` to fold sizes summing to `n`.
fn fold_sizes(n: usize, ratios: impl IntoIterator<Item = f64>) -> Vec<usize> {
    let exact: Vec<f64> = ratios.into_iter().map(|r| r * n as f64).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut by_remainder: Vec<usize> = (0..sizes.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let short = n - sizes.iter().sum::<usize>();
    for &j in by_remainder.iter().take(short) {
        sizes[j] += 1;
    }
    sizes
}

/// Seeded uniform-random split with fold sizes fixed by largest-remainder
/// rounding of the ratios. Used as the unstratified baseline.
pub fn random_split(docs: &[Document], ratios: &FoldRatios, seed: u64) -> Result<SplitAssignment> {
    validate_ratios(ratios)?;
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = docs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let sizes = fold_sizes(n, ratios.values().copied());

    let mut folds = BTreeMap::new();
    let mut start = 0;
    for (name, size) in ratios.keys().zip(sizes) {
        let mut ids: Vec<usize> = order[start..start + size].to_vec();
        ids.sort_unstable();
        folds.insert(name.clone(), ids.into_iter().map(|d| docs[d].id.clone()).collect());
        start += size;
    }
    let balance = balance_report(docs, &folds);
    Ok(SplitAssignment {
        seed,
        ratios: ratios.clone(),
        folds,
        balance_report: balance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn docs_with(labels: &[&[&str]]) -> Vec<Document> {
        labels
            .iter()
            .enumerate()
            .map(|(i, ls)| Document::new(format!("d{i}"), "t", "a", ls.iter().copied()))
            .collect()
    }

    fn ratios(pairs: &[(&str, f64)]) -> FoldRatios {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn assert_partition(split: &SplitAssignment, docs: &[Document]) {
        let mut seen = HashSet::new();
        for ids in split.folds.values() {
            for id in ids {
                assert!(seen.insert(id.clone()), "{id} assigned twice");
            }
        }
        assert_eq!(seen.len(), docs.len());
    }

    #[test]
    fn single_label_seventy_thirty() {
        let docs = docs_with(&[&["x"] as &[&str]; 10]);
        let split = iterative_stratified_split(&docs, &default_ratios(), 42).unwrap();
        assert_eq!(split.folds[TRAIN].len(), 7);
        assert_eq!(split.folds[TEST].len(), 3);
        assert_partition(&split, &docs);
    }

    #[test]
    fn small_case_is_among_balanced_splits() {
        let docs = docs_with(&[&["a"], &["a"], &["a"], &["a"], &["b"], &["b"]]);
        let r = ratios(&[(TRAIN, 0.5), (TEST, 0.5)]);
        // brute force: every assignment where each fold holds 2 "a" and 1 "b"
        let mut balanced = HashSet::new();
        for mask in 0u32..64 {
            let train: Vec<usize> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
            let a = train.iter().filter(|&&i| i < 4).count();
            let b = train.iter().filter(|&&i| i >= 4).count();
            if a == 2 && b == 1 {
                balanced.insert(train);
            }
        }
        assert_eq!(balanced.len(), 12);
        for seed in 0..20 {
            let split = iterative_stratified_split(&docs, &r, seed).unwrap();
            let refined = stratified_split(&docs, &r, seed).unwrap();
            assert_eq!(split, refined, "a balanced split has nothing to refine");
            let train: Vec<usize> = split.folds[TRAIN]
                .iter()
                .map(|id| id[1..].parse().unwrap())
                .collect();
            assert!(balanced.contains(&train), "seed {seed}: {train:?}");
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let docs = docs_with(&[&["a", "b"], &["a"], &["c"], &[], &["b", "c"], &["a"], &[]]);
        let a = iterative_stratified_split(&docs, &default_ratios(), 7).unwrap();
        let b = iterative_stratified_split(&docs, &default_ratios(), 7).unwrap();
        assert_eq!(a, b);
        assert_partition(&a, &docs);
        let c = stratified_split(&docs, &default_ratios(), 7).unwrap();
        assert_eq!(c, stratified_split(&docs, &default_ratios(), 7).unwrap());
        assert_partition(&c, &docs);
    }

    fn residual(split: &SplitAssignment) -> f64 {
        split
            .balance_report
            .values()
            .map(|b| {
                let df = b.document_frequency as f64;
                split
                    .ratios
                    .iter()
                    .map(|(f, r)| ((b.proportions[f] - r) * df).powi(2))
                    .sum::<f64>()
            })
            .sum()
    }

    #[test]
    fn refinement_restores_sizes_and_never_worsens() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let labels: Vec<Vec<String>> = (0..300)
            .map(|_| {
                let n = rng.gen_range(0..4);
                (0..n).map(|_| format!("l{}", rng.gen_range(0..15) * rng.gen_range(1..3))).collect()
            })
            .collect();
        let docs: Vec<Document> = labels
            .iter()
            .enumerate()
            .map(|(i, ls)| Document::new(format!("d{i}"), "t", "a", ls.iter().cloned()))
            .collect();
        let target = fold_sizes(docs.len(), default_ratios().values().copied());
        for seed in 0..5 {
            let plain = iterative_stratified_split(&docs, &default_ratios(), seed).unwrap();
            let refined = stratified_split(&docs, &default_ratios(), seed).unwrap();
            assert_partition(&refined, &docs);
            let sizes = |s: &SplitAssignment| s.folds.values().map(Vec::len).collect::<Vec<_>>();
            assert_eq!(sizes(&refined), target);
            if sizes(&plain) == target {
                assert!(residual(&refined) <= residual(&plain) + 1e-9);
            }
        }
    }

    #[test]
    fn unique_labels_no_longer_collapse_into_train() {
        let names: Vec<[String; 2]> = (0..40).map(|i| [format!("u{i}"), "common".to_string()]).collect();
        let docs: Vec<Document> = names
            .iter()
            .enumerate()
            .map(|(i, ls)| Document::new(format!("d{i}"), "t", "a", ls.iter().cloned()))
            .collect();
        let plain = iterative_stratified_split(&docs, &default_ratios(), 1).unwrap();
        // only the last document is placed through the shared label
        assert_eq!(plain.folds[TRAIN].len(), 39);
        let refined = stratified_split(&docs, &default_ratios(), 1).unwrap();
        assert_eq!(refined.folds[TRAIN].len(), 28);
        assert_eq!(refined.folds[TEST].len(), 12);
    }

    #[test]
    fn zero_label_documents_fill_by_demand() {
        let docs = docs_with(&[&[] as &[&str]; 10]);
        let split = iterative_stratified_split(&docs, &default_ratios(), 1).unwrap();
        assert_eq!(split.folds[TRAIN].len(), 7);
        assert_eq!(split.folds[TEST].len(), 3);
    }

    #[test]
    fn three_folds_with_dev() {
        let docs = docs_with(&[&["x"] as &[&str]; 20]);
        let r = ratios(&[(TRAIN, 0.7), (DEV, 0.1), (TEST, 0.2)]);
        let split = iterative_stratified_split(&docs, &r, 3).unwrap();
        assert_eq!(split.folds[TRAIN].len(), 14);
        assert_eq!(split.folds[DEV].len(), 2);
        assert_eq!(split.folds[TEST].len(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        let docs = docs_with(&[&["x"]]);
        assert!(matches!(
            iterative_stratified_split(&docs, &ratios(&[(TRAIN, 0.7), (TEST, 0.2)]), 0),
            Err(Error::InvalidRatios(_))
        ));
        assert!(matches!(
            iterative_stratified_split(&docs, &ratios(&[(TRAIN, 1.0), (TEST, 0.0)]), 0),
            Err(Error::InvalidRatios(_))
        ));
        assert!(matches!(
            iterative_stratified_split(&[], &default_ratios(), 0),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn random_split_sizes() {
        let docs = docs_with(&[&["x"] as &[&str]; 11]);
        let split = random_split(&docs, &default_ratios(), 5).unwrap();
        assert_eq!(split.folds[TRAIN].len(), 8);
        assert_eq!(split.folds[TEST].len(), 3);
        assert_partition(&split, &docs);
    }

    #[test]
    fn json_round_trip() {
        let docs = docs_with(&[&["a"], &["b"], &["a", "b"]]);
        let split = iterative_stratified_split(&docs, &default_ratios(), 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("split.json");
        split.write_json(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["seed"], 9);
        assert!(v["folds"]["train"].is_array());
        assert!(v.get("balance_report").is_none());
        let back = SplitAssignment::read_json(&path, Some(&docs)).unwrap();
        assert_eq!(back, split);
    }
}
