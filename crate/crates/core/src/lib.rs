//! Keyword extraction benchmarking.
//!
//! Corpus ingestion and keyword normalization, multilabel iterative
//! stratification, candidate generation, native extractors (TfIdf,
//! TextRank, FirstPhrases, C/NC-value, embedding similarity with MMR/MSS)
//! and ranked micro/macro evaluation.
//!
//! Scoring code is generic over [`Score`] floats and metrics over
//! [`MetricValue`], which also covers exact rationals. The aliases below fix
//! the common choices.

pub mod candidates;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod eval;
pub mod prediction;
pub mod scalar;
pub mod split;
pub mod stat;

pub use error::{Error, Result};
pub use scalar::{MetricValue, Score};

pub use candidates::{Candidate, StopwordList, TextAnalyzer, Token};
pub use corpus::{Document, KeywordForm, VocabStats};
pub use eval::{EvalOptions, MacroMode, MatchCounts, Scenario};
pub use prediction::Rank;
pub use split::SplitAssignment;

/// Predictions scored in `f64`.
pub type Prediction = prediction::RankedPrediction<f64>;
/// Predictions scored in `f32`.
pub type PredictionF32 = prediction::RankedPrediction<f32>;
pub type Metrics = eval::MetricTriple<f64>;
/// Metrics computed exactly.
pub type ExactMetrics = eval::MetricTriple<num_rational::Ratio<i64>>;
pub type Report = eval::EvalReport<f64>;
pub type ExactReport = eval::EvalReport<num_rational::Ratio<i64>>;
pub type Similarities = embed::SimilarityMatrix<f64>;
pub type Vectors = embed::WordVectors<f64>;
pub type Graph = stat::CooccurrenceGraph<f64>;
