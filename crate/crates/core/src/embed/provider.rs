use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::candidates::{TextAnalyzer, Token};
use crate::corpus::{normalize_keyword, Document};
use crate::error::{Error, Result};
use crate::scalar::Score;

/// Source of document and phrase vectors.
pub trait Embedder<F: Score>: Sync {
    fn dimension(&self) -> usize;

    fn embed_document(&self, doc: &Document, analyzer: &TextAnalyzer) -> Option<Vec<F>>;

    /// `tokens` are the normalized words of a candidate phrase.
    fn embed_phrase(&self, tokens: &[String]) -> Option<Vec<F>>;
}

/// Element-wise mean, `None` for an empty input.
pub fn mean_vector<F: Score>(vectors: &[&[F]], dim: usize) -> Option<Vec<F>> {
    if vectors.is_empty() {
        return None;
    }
    let mut acc = vec![F::zero(); dim];
    for v in vectors {
        for (a, x) in acc.iter_mut().zip(v.iter()) {
            *a = *a + *x;
        }
    }
    let n = F::from_usize_lossy(vectors.len());
    Some(acc.into_iter().map(|a| a / n).collect())
}

/// Static word vectors keyed by normalized token.
#[derive(Debug, Clone)]
pub struct WordVectors<F> {
    dim: usize,
    vectors: HashMap<String, Vec<F>>,
    zero: Vec<F>,
    /// Treat unknown tokens as zero vectors instead of absent.
    pub zero_fallback: bool,
}

impl<F: Score> WordVectors<F> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: HashMap::new(),
            zero: vec![F::zero(); dim],
            zero_fallback: false,
        }
    }

    /// Adds a vector under the normalized token. The first vector for a key
    /// wins.
    pub fn insert(&mut self, token: &str, vector: Vec<F>) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "vector for {token:?} has {} values, expected {}",
                vector.len(),
                self.dim
            )));
        }
        let key = normalize_keyword(token);
        if !key.is_empty() {
            self.vectors.entry(key).or_insert(vector);
        }
        Ok(())
    }

    /// Text format: a `<count> <dim>` header, then `<token> <v1> ... <vdim>`.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((i, l)) => {
                    let l = l.map_err(|e| Error::io("<vectors>", e))?;
                    if !l.trim().is_empty() {
                        break (i + 1, l);
                    }
                }
                None => {
                    return Err(Error::VectorFormat {
                        line: 1,
                        reason: "missing header".into(),
                    })
                }
            }
        };
        let fields: Vec<&str> = header.1.split_whitespace().collect();
        let bad_header = || Error::VectorFormat {
            line: header.0,
            reason: format!("expected \"<count> <dim>\", got {:?}", header.1),
        };
        if fields.len() != 2 {
            return Err(bad_header());
        }
        let count: usize = fields[0].parse().map_err(|_| bad_header())?;
        let dim: usize = fields[1].parse().map_err(|_| bad_header())?;
        if dim == 0 {
            return Err(bad_header());
        }

        let mut out = Self::new(dim);
        let mut seen = 0;
        for (i, line) in lines {
            let line = line.map_err(|e| Error::io("<vectors>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let token = parts.next().unwrap_or_default();
            let values: Vec<F> = parts
                .map(|p| {
                    p.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .and_then(F::from_f64)
                        .ok_or_else(|| Error::VectorFormat {
                            line: i + 1,
                            reason: format!("bad number {p:?}"),
                        })
                })
                .collect::<Result<_>>()?;
            if values.len() != dim {
                return Err(Error::VectorFormat {
                    line: i + 1,
                    reason: format!("dimension mismatch: {} values, header says {dim}", values.len()),
                });
            }
            out.insert(token, values)?;
            seen += 1;
        }
        if seen != count {
            return Err(Error::VectorFormat {
                line: header.0,
                reason: format!("header announces {count} vectors, file has {seen}"),
            });
        }
        Ok(out)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(BufReader::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    pub fn lookup(&self, token: &str) -> Option<&[F]> {
        match self.vectors.get(token) {
            Some(v) => Some(v),
            None if self.zero_fallback => Some(&self.zero),
            None => None,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vectors.contains_key(token)
    }
}

/// Mean vector of the known non-stopword tokens of `text`.
pub fn embed_text<F: Score>(text: &str, provider: &WordVectors<F>, analyzer: &TextAnalyzer) -> Option<Vec<F>> {
    embed_tokens(&analyzer.tokenize(text), provider)
}

fn embed_tokens<F: Score>(tokens: &[Token], provider: &WordVectors<F>) -> Option<Vec<F>> {
    let known: Vec<&[F]> = tokens
        .iter()
        .filter(|t| !t.is_stopword)
        .filter_map(|t| provider.lookup(&t.text))
        .collect();
    mean_vector(&known, provider.dim)
}

impl<F: Score> Embedder<F> for WordVectors<F> {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn embed_document(&self, doc: &Document, analyzer: &TextAnalyzer) -> Option<Vec<F>> {
        embed_tokens(&analyzer.tokens(doc), self)
    }

    fn embed_phrase(&self, tokens: &[String]) -> Option<Vec<F>> {
        let known: Vec<&[F]> = tokens.iter().filter_map(|t| self.lookup(t)).collect();
        mean_vector(&known, self.dim)
    }
}

#[derive(Deserialize)]
struct VectorRecord {
    key: String,
    vector: Vec<f64>,
}

/// Vectors computed elsewhere, one JSON object per line. Keys of the form
/// `doc:<id>` are document vectors; any other key is a candidate phrase.
#[derive(Debug, Clone)]
pub struct PrecomputedVectors<F> {
    dim: usize,
    documents: HashMap<String, Vec<F>>,
    phrases: HashMap<String, Vec<F>>,
}

impl<F: Score> PrecomputedVectors<F> {
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut dim = None;
        let mut documents = HashMap::new();
        let mut phrases = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<vectors>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: VectorRecord = serde_json::from_str(&line).map_err(|e| Error::VectorFormat {
                line: i + 1,
                reason: e.to_string(),
            })?;
            let d = *dim.get_or_insert(rec.vector.len());
            if rec.vector.len() != d || d == 0 {
                return Err(Error::VectorFormat {
                    line: i + 1,
                    reason: format!("dimension mismatch: {} values, expected {d}", rec.vector.len()),
                });
            }
            let v: Vec<F> = rec.vector.iter().map(|&x| F::lit(x)).collect();
            match rec.key.strip_prefix("doc:") {
                Some(id) => {
                    documents.entry(id.to_string()).or_insert(v);
                }
                None => {
                    phrases.entry(normalize_keyword(&rec.key)).or_insert(v);
                }
            }
        }
        Ok(Self {
            dim: dim.unwrap_or(0),
            documents,
            phrases,
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(BufReader::new(file))
    }
}

impl<F: Score> Embedder<F> for PrecomputedVectors<F> {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn embed_document(&self, doc: &Document, _analyzer: &TextAnalyzer) -> Option<Vec<F>> {
        self.documents.get(&doc.id).cloned()
    }

    fn embed_phrase(&self, tokens: &[String]) -> Option<Vec<F>> {
        self.phrases.get(&tokens.join(" ")).cloned()
    }
}
