//! Title normalization and overlapping character n-gram extraction.
//!
//! N-grams are windows of unicode scalar values, not bytes, so multi-byte
//! letters count as one position. Windows slide by one character and cross
//! word boundaries; spaces are ordinary characters.

use alloc::string::String;
use alloc::vec::Vec;

use crate::Error;

/// Default n-gram window length. Five-character windows work well for
/// short, dense listing titles.
pub const DEFAULT_NGRAM: usize = 5;

/// Lower-cases a title and collapses runs of whitespace to single spaces,
/// trimming the ends. Punctuation and digits are preserved; they carry
/// signal in listing titles ("100% Authentic"). Idempotent.
pub fn normalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for word in raw.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

/// Extracts all overlapping n-character windows of `text`, in order.
///
/// Duplicates are retained; deduplication happens at bit-vector
/// construction. A non-empty string shorter than `n` yields a single
/// feature holding the whole string, so very short titles still hash to a
/// nonzero vector. Empty input yields no features. `n == 0` is an error.
pub fn ngrams(text: &str, n: usize) -> Result<Vec<&str>, Error> {
    if n == 0 {
        return Err(Error::ZeroNgramLen);
    }
    if text.is_empty() {
        return Ok(Vec::new());
    }
    // Byte offsets of every char boundary, including the end of the string.
    let mut bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
    bounds.push(text.len());
    let chars = bounds.len() - 1;
    if chars < n {
        return Ok(alloc::vec![text]);
    }
    Ok((0..=chars - n).map(|i| &text[bounds[i]..bounds[i + n]]).collect())
}
