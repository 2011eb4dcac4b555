//! Ranked keyword predictions and their JSONL form.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{normalize_keyword_with, NormalizeOptions};
use crate::error::{Error, Result};
use crate::scalar::Score;

/// A rank cutoff: the top `k` items, or everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    At(usize),
    All,
}

impl Rank {
    pub fn take(self, len: usize) -> usize {
        match self {
            Rank::At(k) => k.min(len),
            Rank::All => len,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::At(k) => write!(f, "{k}"),
            Rank::All => f.write_str("all"),
        }
    }
}

impl FromStr for Rank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(Rank::All);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Rank::At(k)),
            _ => Err(Error::InvalidParameter(format!(
                "rank must be a positive integer or \"all\", got {s:?}"
            ))),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::At(k) => s.serialize_u64(*k as u64),
            Rank::All => s.serialize_str("all"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(usize),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(k) if k >= 1 => Ok(Rank::At(k)),
            Repr::Num(_) => Err(serde::de::Error::custom("rank must be positive")),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub fn parse_ranks(text: &str) -> Result<Vec<Rank>> {
    let mut ranks: Vec<Rank> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    ranks.sort();
    ranks.dedup();
    Ok(ranks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredKeyword<F> {
    pub keyword: String,
    pub score: F,
}

/// A per-document keyword list from one method. List order is rank order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPrediction<F> {
    pub doc_id: String,
    pub method: String,
    pub items: Vec<ScoredKeyword<F>>,
}

/// Descending score, ties broken by ascending keyword.
pub fn score_order<F: Score>(a: &(String, F), b: &(String, F)) -> Ordering {
    b.1.partial_cmp(&a.1)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.0.cmp(&b.0))
}

impl<F: Score> RankedPrediction<F> {
    pub fn empty(doc_id: impl Into<String>, method: impl Into<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            method: method.into(),
            items: Vec::new(),
        }
    }

    /// Sorts by score (ties lexicographic), drops repeats and non-finite
    /// scores, and truncates at `rank`.
    pub fn from_scores(
        doc_id: impl Into<String>,
        method: impl Into<String>,
        mut scored: Vec<(String, F)>,
        rank: Rank,
    ) -> Self {
        scored.retain(|(_, s)| s.is_finite());
        scored.sort_by(score_order);
        let mut seen = HashSet::new();
        scored.retain(|(k, _)| seen.insert(k.clone()));
        scored.truncate(rank.take(scored.len()));
        Self {
            doc_id: doc_id.into(),
            method: method.into(),
            items: scored
                .into_iter()
                .map(|(keyword, score)| ScoredKeyword { keyword, score })
                .collect(),
        }
    }

    /// Keeps the given order; only repeats are dropped.
    pub fn from_ordered(
        doc_id: impl Into<String>,
        method: impl Into<String>,
        ordered: Vec<(String, F)>,
    ) -> Self {
        let mut seen = HashSet::new();
        Self {
            doc_id: doc_id.into(),
            method: method.into(),
            items: ordered
                .into_iter()
                .filter(|(k, _)| seen.insert(k.clone()))
                .map(|(keyword, score)| ScoredKeyword { keyword, score })
                .collect(),
        }
    }

    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.keyword.as_str())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct KeywordRecord {
    text: String,
    score: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PredictionRecord {
    id: String,
    method: String,
    keywords: Vec<KeywordRecord>,
}

pub fn write_predictions<W: Write, F: Score>(
    mut w: W,
    predictions: &[RankedPrediction<F>],
) -> Result<()> {
    for p in predictions {
        let record = PredictionRecord {
            id: p.doc_id.clone(),
            method: p.method.clone(),
            keywords: p
                .items
                .iter()
                .map(|i| KeywordRecord {
                    text: i.keyword.clone(),
                    score: i.score.as_f64(),
                })
                .collect(),
        };
        serde_json::to_writer(&mut w, &record)?;
        w.write_all(b"\n").map_err(|e| Error::io("<predictions>", e))?;
    }
    Ok(())
}

/// Reads predictions, normalizing keyword text and dropping repeats while
/// keeping file order. A document id may appear once per file.
pub fn read_predictions_from<R: BufRead>(
    reader: R,
    opts: NormalizeOptions,
) -> Result<Vec<RankedPrediction<f64>>> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<predictions>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: idx + 1,
                reason: e.to_string(),
            })?;
        if !ids.insert(record.id.clone()) {
            return Err(Error::DuplicateId {
                id: record.id,
                line: idx + 1,
            });
        }
        let items = record
            .keywords
            .into_iter()
            .map(|k| (normalize_keyword_with(&k.text, opts), k.score))
            .filter(|(k, s)| !k.is_empty() && s.is_finite())
            .collect();
        out.push(RankedPrediction::from_ordered(record.id, record.method, items));
    }
    Ok(out)
}

pub fn read_predictions(
    path: impl AsRef<Path>,
    opts: NormalizeOptions,
) -> Result<Vec<RankedPrediction<f64>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_predictions_from(BufReader::new(file), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_parsing() {
        assert_eq!(parse_ranks("5,1,3,all,3").unwrap(), vec![Rank::At(1), Rank::At(3), Rank::At(5), Rank::All]);
        assert!(parse_ranks("0").is_err());
        assert!(parse_ranks("x").is_err());
        assert_eq!(Rank::At(3).take(2), 2);
        assert_eq!(Rank::All.take(7), 7);
    }

    #[test]
    fn from_scores_sorts_and_breaks_ties() {
        let p = RankedPrediction::from_scores(
            "d",
            "m",
            vec![("b".into(), 1.0), ("a".into(), 1.0), ("c".into(), 2.0), ("b".into(), 0.5), ("z".into(), f64::NAN)],
            Rank::All,
        );
        assert_eq!(p.keywords().collect::<Vec<_>>(), ["c", "a", "b"]);
        let p = RankedPrediction::from_scores("d", "m", vec![("b".into(), 1.0f32), ("a".into(), 3.0)], Rank::At(1));
        assert_eq!(p.keywords().collect::<Vec<_>>(), ["a"]);
    }

    #[test]
    fn jsonl_round_trip_with_label_ingestion() {
        let p = RankedPrediction::from_ordered("d1", "extremetext", vec![("unia_europejska".to_string(), 0.9), ("Polska".into(), 0.5)]);
        let mut buf = Vec::new();
        write_predictions(&mut buf, &[p]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "{\"id\":\"d1\",\"method\":\"extremetext\",\"keywords\":[{\"text\":\"unia_europejska\",\"score\":0.9},{\"text\":\"Polska\",\"score\":0.5}]}\n"
        );
        let opts = NormalizeOptions { underscores_as_spaces: true };
        let back = read_predictions_from(buf.as_slice(), opts).unwrap();
        assert_eq!(back[0].keywords().collect::<Vec<_>>(), ["unia europejska", "polska"]);
    }

    #[test]
    fn duplicate_prediction_ids_rejected() {
        let text = "{\"id\":\"a\",\"method\":\"m\",\"keywords\":[]}\n{\"id\":\"a\",\"method\":\"m\",\"keywords\":[]}\n";
        assert!(matches!(
            read_predictions_from(text.as_bytes(), NormalizeOptions::default()),
            Err(Error::DuplicateId { .. })
        ));
    }

    #[test]
    fn ingestion_dedupes_on_normalized_form() {
        let text = "{\"id\":\"a\",\"method\":\"m\",\"keywords\":[{\"text\":\"Gaz\",\"score\":1},{\"text\":\"gaz\",\"score\":0.5},{\"text\":\"  \",\"score\":0.2}]}\n";
        let back = read_predictions_from(text.as_bytes(), NormalizeOptions::default()).unwrap();
        assert_eq!(back[0].keywords().collect::<Vec<_>>(), ["gaz"]);
    }
}
