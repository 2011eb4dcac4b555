//! Keyword normalization: lowercasing, ASCII folding and whitespace cleanup.
//!
//! Polish letters are folded through a fixed table. Anything else that is
//! not ASCII goes through NFKD with combining marks stripped, and whatever
//! is still outside printable ASCII after that is dropped.

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Replace `_` with a space before anything else (classifier labels
    /// such as `unia_europejska`).
    pub underscores_as_spaces: bool,
}

fn fold_polish(c: char) -> Option<char> {
    Some(match c {
        'ą' | 'Ą' => 'a',
        'ć' | 'Ć' => 'c',
        'ę' | 'Ę' => 'e',
        'ł' | 'Ł' => 'l',
        'ń' | 'Ń' => 'n',
        'ó' | 'Ó' => 'o',
        'ś' | 'Ś' => 's',
        'ź' | 'Ź' => 'z',
        'ż' | 'Ż' => 'z',
        _ => return None,
    })
}

/// Normalizes a keyword with default options.
pub fn normalize_keyword(raw: &str) -> String {
    normalize_keyword_with(raw, NormalizeOptions::default())
}

pub fn normalize_keyword_with(raw: &str, opts: NormalizeOptions) -> String {
    let mut staged = String::with_capacity(raw.len());
    for c in raw.chars() {
        let c = if opts.underscores_as_spaces && c == '_' {
            ' '
        } else {
            c
        };
        if c.is_whitespace() {
            staged.push(' ');
        } else if let Some(f) = fold_polish(c) {
            staged.push(f);
        } else if c.is_ascii() {
            staged.push(c.to_ascii_lowercase());
        } else {
            staged.extend(c.to_lowercase());
        }
    }

    let mut out = String::with_capacity(staged.len());
    let mut pending_space = false;
    // NFKD can produce uppercase (e.g. U+210C) or whitespace, so both are
    // handled after decomposition.
    for c in staged.nfkd() {
        if is_combining_mark(c) {
            continue;
        }
        let c = fold_polish(c).unwrap_or(c);
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        let c = c.to_ascii_lowercase();
        if !(' '..='~').contains(&c) {
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(c);
    }
    out
}
