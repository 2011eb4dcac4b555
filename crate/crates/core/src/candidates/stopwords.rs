use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::corpus::normalize_keyword;
use crate::error::{Error, Result};

const POLISH: &str = include_str!("stopwords_pl.txt");
const ENGLISH: &str = include_str!("stopwords_en.txt");

/// A set of normalized stopwords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn polish() -> Self {
        Self::parse(POLISH)
    }

    pub fn english() -> Self {
        Self::parse(ENGLISH)
    }

    /// Polish and English lists combined.
    pub fn bundled() -> Self {
        let mut list = Self::polish();
        list.words.extend(Self::english().words);
        list
    }

    /// One token per line; `#` starts a comment; blank lines ignored.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .map(normalize_keyword)
            .filter(|w| !w.is_empty())
            .collect();
        Self { words }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words
                .into_iter()
                .map(|w| normalize_keyword(w.as_ref()))
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
