//! Statistical keyword extractors.

mod cvalue;
mod first_phrases;
mod textrank;
mod tfidf;

pub use cvalue::{cvalue_rank, ncvalue_rank, TermTable, TermTableParams, DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_CONTEXT_WINDOW};
pub use first_phrases::first_phrases_rank;
pub use textrank::{pagerank, textrank_rank, CooccurrenceGraph, PageRank, TextRankParams};
pub use tfidf::{tfidf_rank, IdfTable};
