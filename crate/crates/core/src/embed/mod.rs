//! Embedding-similarity keyword extraction with MMR or MSS diversification.

mod keybert;
mod provider;
mod select;

pub use keybert::{keybert_rank, KeyBertParams, SelectionMode, DEFAULT_DIVERSITY, DEFAULT_POOL};
pub use provider::{embed_text, mean_vector, Embedder, PrecomputedVectors, WordVectors};
pub use select::{cosine, mmr_select, mss_select, mss_select_with_limit, SimilarityMatrix, MSS_ENUMERATION_LIMIT};
