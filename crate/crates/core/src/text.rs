use thiserror::Error;

/// A malformed line in one of the text formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> FormatError {
        FormatError { line, message: message.into() }
    }
}

/// Non-blank, non-comment lines with 1-based line numbers, trimmed.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Splits `token` at one occurrence of `sep` such that both halves satisfy
/// `accept`. Node tokens may themselves contain `sep`, so every split point
/// is tried; exactly one must work.
pub(crate) fn split_pair<'a, T>(
    token: &'a str,
    sep: char,
    accept: impl Fn(&'a str, &'a str) -> Option<T>,
) -> Result<T, String> {
    let mut found = None;
    for (i, _) in token.match_indices(sep) {
        let (a, b) = (&token[..i], &token[i + sep.len_utf8()..]);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        if let Some(hit) = accept(a, b) {
            if found.is_some() {
                return Err(format!("ambiguous edge token {token:?}"));
            }
            found = Some(hit);
        }
    }
    found.ok_or_else(|| format!("{token:?} does not name an edge"))
}
