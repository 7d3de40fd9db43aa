//! Span-based text edits and their application.

use crate::policy::FacilityId;
use crate::source::Span;
use std::fmt;

/// Replacement of one source span by new text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub span: Span,
    pub replacement: String,
    pub facility: FacilityId,
    /// Human-readable description of what the edit does.
    pub note: String,
}

impl Edit {
    pub fn new(
        span: Span,
        replacement: impl Into<String>,
        facility: FacilityId,
        note: impl Into<String>,
    ) -> Self {
        Edit { span, replacement: replacement.into(), facility, note: note.into() }
    }
}

/// Two edits in one plan claimed overlapping spans. This is a planner
/// bug; the file must be left untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapError {
    pub first: Span,
    pub second: Span,
}

impl fmt::Display for OverlapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "overlapping edits: {}..{} and {}..{}",
            self.first.start, self.first.end, self.second.start, self.second.end
        )
    }
}

impl std::error::Error for OverlapError {}

/// Applies `edits` to `source`, producing the rewritten text.
///
/// The result is independent of the order edits appear in the plan:
/// they are applied in descending offset order so earlier spans stay
/// valid. Overlapping spans abort the whole application.
pub fn apply_edits(source: &str, edits: &[Edit]) -> Result<String, OverlapError> {
    if edits.is_empty() {
        return Ok(source.to_string());
    }
    let mut sorted: Vec<&Edit> = edits.iter().collect();
    sorted.sort_by_key(|e| (e.span.start, e.span.end));
    for pair in sorted.windows(2) {
        if pair[0].span.end > pair[1].span.start {
            return Err(OverlapError { first: pair[0].span, second: pair[1].span });
        }
    }
    let mut out = source.to_string();
    for edit in sorted.iter().rev() {
        out.replace_range(edit.span.byte_range(), &edit.replacement);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::Span;

    fn edit(start: usize, end: usize, text: &str) -> Edit {
        Edit::new(
            Span::new(start, end, 1, start as u32 + 1, 1, end as u32 + 1),
            text,
            FacilityId::SynonymSymbols,
            "test",
        )
    }

    #[test]
    fn empty_plan_is_identity() {
        assert_eq!(apply_edits("abc", &[]).unwrap(), "abc");
    }

    #[test]
    fn disjoint_edits_apply_in_any_order() {
        let a = edit(0, 1, "X");
        let b = edit(2, 3, "Y");
        let fwd = apply_edits("abc", &[a.clone(), b.clone()]).unwrap();
        let rev = apply_edits("abc", &[b, a]).unwrap();
        assert_eq!(fwd, "XbY");
        assert_eq!(fwd, rev);
    }

    #[test]
    fn overlap_is_rejected() {
        let a = edit(0, 2, "X");
        let b = edit(1, 3, "Y");
        assert!(apply_edits("abc", &[a, b]).is_err());
    }

    #[test]
    fn touching_edits_are_fine() {
        let a = edit(0, 1, "X");
        let b = edit(1, 2, "Y");
        assert_eq!(apply_edits("ab", &[a, b]).unwrap(), "XY");
    }
}
