//! Candidate selection by document similarity with diversification.

use std::cmp::Ordering;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::scalar::Score;

/// Largest number of subsets MSS enumerates before falling back to greedy.
pub const MSS_ENUMERATION_LIMIT: u128 = 200_000;

/// Cosine similarity clamped to `[-1, 1]`; zero when either vector has zero
/// norm.
pub fn cosine<F: Score>(a: &[F], b: &[F]) -> F {
    let dot: F = a.iter().zip(b).map(|(x, y)| *x * *y).sum();
    let na: F = a.iter().map(|x| *x * *x).sum::<F>().sqrt();
    let nb: F = b.iter().map(|x| *x * *x).sum::<F>().sqrt();
    if na == F::zero() || nb == F::zero() {
        return F::zero();
    }
    (dot / (na * nb)).max(-F::one()).min(F::one())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix<F> {
    pub candidates: Vec<String>,
    pub doc_sims: Vec<F>,
    /// Symmetric with a unit diagonal.
    pub pairwise: Vec<Vec<F>>,
}

impl<F: Score> SimilarityMatrix<F> {
    pub fn new(candidates: Vec<String>, doc_sims: Vec<F>, pairwise: Vec<Vec<F>>) -> Result<Self> {
        let n = candidates.len();
        if doc_sims.len() != n || pairwise.len() != n || pairwise.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("similarity matrix shape mismatch".into()));
        }
        Ok(Self {
            candidates,
            doc_sims,
            pairwise,
        })
    }

    pub fn from_vectors(doc: &[F], candidates: Vec<(String, Vec<F>)>) -> Self {
        let zero_norm = |v: &[F]| v.iter().all(|x| *x == F::zero());
        if zero_norm(doc) || candidates.iter().any(|(_, v)| zero_norm(v)) {
            log::warn!("zero-norm vector present; its similarities are set to 0");
        }
        let n = candidates.len();
        let doc_sims = candidates.iter().map(|(_, v)| cosine(doc, v)).collect();
        let mut pairwise = vec![vec![F::zero(); n]; n];
        for i in 0..n {
            pairwise[i][i] = F::one();
            for j in i + 1..n {
                let s = cosine(&candidates[i].1, &candidates[j].1);
                pairwise[i][j] = s;
                pairwise[j][i] = s;
            }
        }
        Self {
            candidates: candidates.into_iter().map(|(c, _)| c).collect(),
            doc_sims,
            pairwise,
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Indices by doc similarity descending, ties by candidate text.
    pub fn by_doc_sim(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.doc_order(a, b));
        idx
    }

    fn doc_order(&self, a: usize, b: usize) -> Ordering {
        self.doc_sims[b]
            .partial_cmp(&self.doc_sims[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.candidates[a].cmp(&self.candidates[b]))
    }
}

/// Maximal marginal relevance. The first pick is the most document-similar
/// candidate; each later pick maximizes
/// `(1 - diversity) * doc_sim(c) - diversity * max_s pairwise(c, s)`.
pub fn mmr_select<F: Score>(sims: &SimilarityMatrix<F>, k: usize, diversity: F) -> Vec<usize> {
    let n = sims.len();
    if n == 0 || k == 0 {
        return Vec::new();
    }
    let mut selected = vec![sims.by_doc_sim()[0]];
    let mut taken = vec![false; n];
    taken[selected[0]] = true;
    // running max similarity of each candidate to the selected set
    let mut max_sim: Vec<F> = (0..n).map(|c| sims.pairwise[c][selected[0]]).collect();

    while selected.len() < k.min(n) {
        let mut best: Option<(usize, F)> = None;
        for c in (0..n).filter(|&c| !taken[c]) {
            let score = (F::one() - diversity) * sims.doc_sims[c] - diversity * max_sim[c];
            let better = match best {
                None => true,
                Some((b, bs)) => score > bs || (score == bs && sims.candidates[c] < sims.candidates[b]),
            };
            if better {
                best = Some((c, score));
            }
        }
        let (pick, _) = best.expect("an unselected candidate remains");
        taken[pick] = true;
        selected.push(pick);
        for (c, m) in max_sim.iter_mut().enumerate() {
            *m = m.max(sims.pairwise[c][pick]);
        }
    }
    selected
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Maximum sum similarity with the default enumeration limit.
pub fn mss_select<F: Score>(sims: &SimilarityMatrix<F>, k: usize, pool: usize) -> Vec<usize> {
    mss_select_with_limit(sims, k, pool, MSS_ENUMERATION_LIMIT)
}

/// Among the `pool` most document-similar candidates, picks the `k`-subset
/// with the smallest total pairwise similarity; ties go to the larger total
/// doc similarity, then the lexicographically smaller sorted candidate
/// list. Output is ordered by doc similarity.
pub fn mss_select_with_limit<F: Score>(sims: &SimilarityMatrix<F>, k: usize, pool: usize, limit: u128) -> Vec<usize> {
    let ranked = sims.by_doc_sim();
    let pool: Vec<usize> = ranked.into_iter().take(pool.max(k)).collect();
    if k == 0 {
        return Vec::new();
    }
    if pool.len() <= k {
        return pool;
    }

    let mut chosen = if binomial(pool.len(), k) <= limit {
        exhaustive_mss(sims, &pool, k)
    } else {
        log::warn!(
            "MSS over C({}, {k}) subsets exceeds {limit}; using greedy selection",
            pool.len()
        );
        greedy_mss(sims, &pool, k)
    };
    chosen.sort_by(|&a, &b| sims.doc_order(a, b));
    chosen
}

fn subset_key<F: Score>(sims: &SimilarityMatrix<F>, subset: &[usize]) -> (F, F) {
    let mut pair_sum = F::zero();
    for (i, &a) in subset.iter().enumerate() {
        for &b in &subset[i + 1..] {
            pair_sum = pair_sum + sims.pairwise[a][b];
        }
    }
    let doc_sum = subset.iter().map(|&c| sims.doc_sims[c]).sum();
    (pair_sum, doc_sum)
}

fn sorted_names<'a, F>(sims: &'a SimilarityMatrix<F>, subset: &[usize]) -> Vec<&'a str> {
    let mut names: Vec<&str> = subset.iter().map(|&c| sims.candidates[c].as_str()).collect();
    names.sort_unstable();
    names
}

fn exhaustive_mss<F: Score>(sims: &SimilarityMatrix<F>, pool: &[usize], k: usize) -> Vec<usize> {
    let mut best: Option<(Vec<usize>, (F, F))> = None;
    for mut subset in pool.iter().copied().combinations(k) {
        subset.sort_unstable();
        let key = subset_key(sims, &subset);
        let better = match &best {
            None => true,
            Some((b, bk)) => {
                key.0 < bk.0
                    || (key.0 == bk.0 && key.1 > bk.1)
                    || (key.0 == bk.0 && key.1 == bk.1 && sorted_names(sims, &subset) < sorted_names(sims, b))
            }
        };
        if better {
            best = Some((subset, key));
        }
    }
    best.map(|(s, _)| s).unwrap_or_default()
}

fn greedy_mss<F: Score>(sims: &SimilarityMatrix<F>, pool: &[usize], k: usize) -> Vec<usize> {
    let mut chosen = vec![pool[0]];
    while chosen.len() < k {
        let next = pool
            .iter()
            .copied()
            .filter(|c| !chosen.contains(c))
            .min_by(|&a, &b| {
                let sa: F = chosen.iter().map(|&s| sims.pairwise[a][s]).sum();
                let sb: F = chosen.iter().map(|&s| sims.pairwise[b][s]).sum();
                sa.partial_cmp(&sb)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| sims.doc_order(a, b))
            })
            .expect("pool larger than k");
        chosen.push(next);
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(names: &[&str], doc: &[f64], pair: &[&[f64]]) -> SimilarityMatrix<f64> {
        SimilarityMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            doc.to_vec(),
            pair.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    fn four() -> SimilarityMatrix<f64> {
        matrix(
            &["a", "b", "c", "d"],
            &[0.9, 0.85, 0.5, 0.3],
            &[
                &[1.0, 0.95, 0.1, 0.2],
                &[0.95, 1.0, 0.2, 0.1],
                &[0.1, 0.2, 1.0, 0.4],
                &[0.2, 0.1, 0.4, 1.0],
            ],
        )
    }

    #[test]
    fn cosine_basics() {
        assert!((cosine(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]) - 1.0f64).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]), 0.0);
        assert_eq!(cosine(&[0.0, 0.0], &[0.0, 1.0]), 0.0);
        assert_eq!(cosine(&[1.0f32, 0.0], &[-2.0, 0.0]), -1.0);
    }

    #[test]
    fn mmr_degenerate_cases() {
        let one = matrix(&["x"], &[0.2], &[&[1.0]]);
        assert_eq!(mmr_select(&one, 5, 0.7), vec![0]);
        let m = four();
        assert_eq!(mmr_select(&m, 4, 0.0), m.by_doc_sim());
        assert!(mmr_select(&matrix(&[], &[], &[]), 3, 0.5).is_empty());
    }

    #[test]
    fn mmr_hand_trace() {
        // after "a": b -> 0.3*0.85 - 0.7*0.95 = -0.41, c -> 0.3*0.5 - 0.7*0.1 = 0.08,
        // d -> 0.3*0.3 - 0.7*0.2 = -0.05, so c; then b -> -0.41, d -> 0.09 - 0.28 = -0.19
        assert_eq!(mmr_select(&four(), 3, 0.7), vec![0, 2, 3]);
    }

    #[test]
    fn mss_cases() {
        let m = four();
        assert_eq!(mss_select(&m, 2, 2), vec![0, 1]);
        assert_eq!(mss_select(&m, 1, 4), vec![0]);
        // pairs: ab .95, ac .1, ad .2, bc .2, bd .1, cd .4; ac and bd tie on
        // pairwise, ac has larger doc total
        assert_eq!(mss_select(&m, 2, 4), vec![0, 2]);
        assert_eq!(mss_select(&m, 9, 4), vec![0, 1, 2, 3]);
    }

    #[test]
    fn mss_greedy_fallback_returns_k() {
        let m = four();
        let picks = mss_select_with_limit(&m, 2, 4, 1);
        assert_eq!(picks.len(), 2);
        assert_eq!(picks[0], 0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(20, 5), 15504);
        assert_eq!(binomial(12, 0), 1);
    }

    #[test]
    fn from_vectors_is_symmetric_with_unit_diagonal() {
        let m = SimilarityMatrix::<f64>::from_vectors(
            &[1.0, 1.0],
            vec![("a".into(), vec![1.0, 0.0]), ("b".into(), vec![0.0, 0.0]), ("c".into(), vec![0.6, 0.8])],
        );
        for i in 0..3 {
            assert_eq!(m.pairwise[i][i], 1.0);
            for j in 0..3 {
                assert_eq!(m.pairwise[i][j], m.pairwise[j][i]);
                assert!(m.pairwise[i][j].abs() <= 1.0);
            }
        }
        assert_eq!(m.doc_sims[1], 0.0);
    }
}
