//! TextRank over a word co-occurrence graph.

use std::collections::HashMap;

use crate::candidates::{chunk_noun_phrases, TextAnalyzer, Token, DEFAULT_MAX_LEN};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::prediction::{RankedPrediction, Rank};
use crate::scalar::Score;

pub const METHOD: &str = "textrank";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextRankParams {
    pub window: usize,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub max_len: usize,
}

impl Default for TextRankParams {
    fn default() -> Self {
        Self {
            window: 4,
            damping: 0.85,
            tol: 1e-6,
            max_iter: 100,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl TextRankParams {
    pub fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(Error::InvalidParameter(format!("window must be >= 2, got {}", self.window)));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidParameter(format!("damping must be in (0, 1), got {}", self.damping)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_len == 0 {
            return Err(Error::InvalidParameter("max_len must be >= 1".into()));
        }
        Ok(())
    }
}

/// Undirected weighted graph; `adjacency[u]` lists `(v, w(u, v))` sorted by `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceGraph<F> {
    pub nodes: Vec<String>,
    pub adjacency: Vec<Vec<(usize, F)>>,
}

impl<F: Score> CooccurrenceGraph<F> {
    /// Links two distinct non-stopword tokens whenever their positions are
    /// less than `window` apart. Edge weight counts such co-occurrences.
    pub fn from_tokens(tokens: &[Token], window: usize) -> Self {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let ids: Vec<Option<usize>> = tokens
            .iter()
            .map(|t| {
                (!t.is_stopword).then(|| {
                    *index.entry(t.text.as_str()).or_insert_with(|| {
                        nodes.push(t.text.clone());
                        nodes.len() - 1
                    })
                })
            })
            .collect();

        let mut weights: HashMap<(usize, usize), usize> = HashMap::new();
        for i in 0..ids.len() {
            let Some(u) = ids[i] else { continue };
            for j in i + 1..(i + window).min(ids.len()) {
                let Some(v) = ids[j] else { continue };
                if u != v {
                    *weights.entry((u.min(v), u.max(v))).or_default() += 1;
                }
            }
        }
        let mut adjacency: Vec<Vec<(usize, F)>> = vec![Vec::new(); nodes.len()];
        for (&(u, v), &w) in &weights {
            let w = F::from_usize_lossy(w);
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|&(v, _)| v);
        }
        Self { nodes, adjacency }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weighted_degree(&self, u: usize) -> F {
        self.adjacency[u].iter().map(|&(_, w)| w).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRank<F> {
    pub scores: Vec<F>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration of `s(v) = (1 - d)/|V| + d * sum_u s(u) w(u,v)/deg(u)`
/// from a uniform start, stopping once no score moves by `tol` or more.
/// Isolated nodes keep only the teleport term.
pub fn pagerank<F: Score>(graph: &CooccurrenceGraph<F>, damping: F, tol: F, max_iter: usize) -> PageRank<F> {
    let n = graph.len();
    if n == 0 {
        return PageRank {
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let nf = F::from_usize_lossy(n);
    let teleport = (F::one() - damping) / nf;
    let degree: Vec<F> = (0..n).map(|u| graph.weighted_degree(u)).collect();
    let mut scores = vec![F::one() / nf; n];
    let mut next = vec![F::zero(); n];
    for iter in 1..=max_iter {
        for v in 0..n {
            let inflow: F = graph.adjacency[v]
                .iter()
                .map(|&(u, w)| scores[u] * w / degree[u])
                .sum();
            next[v] = teleport + damping * inflow;
        }
        let delta = scores
            .iter()
            .zip(&next)
            .map(|(a, b)| (*a - *b).abs())
            .fold(F::zero(), F::max);
        std::mem::swap(&mut scores, &mut next);
        if delta < tol {
            return PageRank {
                scores,
                iterations: iter,
                converged: true,
            };
        }
    }
    PageRank {
        scores,
        iterations: max_iter,
        converged: false,
    }
}

pub fn textrank_rank<F: Score>(
    doc: &Document,
    analyzer: &TextAnalyzer,
    params: &TextRankParams,
    rank: Rank,
) -> Result<RankedPrediction<F>> {
    params.validate()?;
    let tokens = analyzer.tokens(doc);
    let graph = CooccurrenceGraph::<F>::from_tokens(&tokens, params.window);
    if graph.is_empty() {
        return Ok(RankedPrediction::empty(&doc.id, METHOD));
    }
    let pr = pagerank(&graph, F::lit(params.damping), F::lit(params.tol), params.max_iter);
    if !pr.converged {
        log::warn!("textrank did not converge for document {}", doc.id);
    }
    let node_score: HashMap<&str, F> = graph
        .nodes
        .iter()
        .map(String::as_str)
        .zip(pr.scores.iter().copied())
        .collect();
    let scored = chunk_noun_phrases(&tokens, params.max_len)
        .into_iter()
        .map(|c| {
            let s = c.tokens.iter().map(|t| node_score[t.as_str()]).sum();
            (c.normalized_form, s)
        })
        .collect();
    Ok(RankedPrediction::from_scores(&doc.id, METHOD, scored, rank))
}
