//! Source positions and spans.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A contiguous region of source text.
///
/// Byte offsets are half-open (`start..end`); line and column are 1-based
/// and refer to the first and one-past-last byte of the region. Columns
/// count bytes, which equals characters for the ASCII sources this tool
/// accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn new(start: usize, end: usize, line: u32, col: u32, end_line: u32, end_col: u32) -> Self {
        Span { start, end, line, col, end_line, end_col }
    }

    /// Zero-length span at a point.
    pub fn point(offset: usize, line: u32, col: u32) -> Self {
        Span { start: offset, end: offset, line, col, end_line: line, end_col: col }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// Smallest span covering both `self` and `other`.
    pub fn cover(&self, other: Span) -> Span {
        let (start, line, col) = if self.start <= other.start {
            (self.start, self.line, self.col)
        } else {
            (other.start, other.line, other.col)
        };
        let (end, end_line, end_col) = if self.end >= other.end {
            (self.end, self.end_line, self.end_col)
        } else {
            (other.end, other.end_line, other.end_col)
        };
        Span { start, end, line, col, end_line, end_col }
    }

    pub fn byte_range(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

/// Builds a span for `start..end` of `text`, computing line and column
/// by scanning. Intended for edits synthesized outside the lexer.
pub fn span_of_range(text: &str, start: usize, end: usize) -> Span {
    let mut line = 1u32;
    let mut col = 1u32;
    let mut span = Span::new(start, end, 1, 1, 1, 1);
    for (offset, c) in text.char_indices() {
        if offset == start {
            span.line = line;
            span.col = col;
        }
        if offset == end {
            span.end_line = line;
            span.end_col = col;
            return span;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += c.len_utf8() as u32;
        }
    }
    if start >= text.len() {
        span.line = line;
        span.col = col;
    }
    span.end_line = line;
    span.end_col = col;
    span
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_takes_extremes() {
        let a = Span::new(0, 4, 1, 1, 1, 5);
        let b = Span::new(10, 12, 2, 3, 2, 5);
        let c = a.cover(b);
        assert_eq!(c.start, 0);
        assert_eq!(c.end, 12);
        assert_eq!(c.line, 1);
        assert_eq!(c.end_line, 2);
    }
}
