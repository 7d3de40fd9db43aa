//! Directive form classification.
//!
//! Non-semantic directives are comment-delimited and must use an
//! opening `(*$` and closing `*)`. Legacy delimiter forms `(*%` and
//! `(*#` are recognized so they can be normalized. A `%`-prefixed line
//! outside comments marks a semantic directive candidate; its interior
//! is never parsed.

/// Classification of a comment-like or percent-prefixed region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectiveForm {
    /// `(*$...*)`
    Canonical,
    /// A known legacy delimiter form; carries the observed opener.
    NonCanonical(String),
    /// A `%`-prefixed line; may carry compilation semantics.
    SemanticCandidate,
}

/// Legacy openers recognized as directives rather than plain comments.
pub const NON_CANONICAL_OPENERS: [&str; 2] = ["(*%", "(*#"];

/// Classifies `trivia_text`, returning `None` for a plain comment.
pub fn scan_directive(trivia_text: &str) -> Option<DirectiveForm> {
    if trivia_text.starts_with('%') {
        return Some(DirectiveForm::SemanticCandidate);
    }
    if !trivia_text.ends_with("*)") {
        // Unterminated comment-like regions never classify as directives.
        return None;
    }
    if trivia_text.starts_with("(*$") {
        return Some(DirectiveForm::Canonical);
    }
    for opener in NON_CANONICAL_OPENERS {
        if trivia_text.starts_with(opener) {
            return Some(DirectiveForm::NonCanonical(opener.to_string()));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_clients_directive() {
        assert_eq!(
            scan_directive("(*$CLIENTS=FooLib, BarLib, BazLib*)"),
            Some(DirectiveForm::Canonical)
        );
    }

    #[test]
    fn plain_comment_is_not_a_directive() {
        assert_eq!(scan_directive("(* just a comment *)"), None);
    }

    #[test]
    fn legacy_forms_record_observed_delimiter() {
        assert_eq!(
            scan_directive("(*%F+*)"),
            Some(DirectiveForm::NonCanonical("(*%".to_string()))
        );
        assert_eq!(
            scan_directive("(*#page*)"),
            Some(DirectiveForm::NonCanonical("(*#".to_string()))
        );
    }

    #[test]
    fn percent_line_is_semantic_candidate() {
        assert_eq!(scan_directive("%IF unix"), Some(DirectiveForm::SemanticCandidate));
    }

    #[test]
    fn normalized_legacy_form_rescans_as_canonical() {
        // The rewrite replaces the opener with `(*$`; the result must
        // classify canonical.
        let original = "(*%F+*)";
        let rewritten = format!("(*${}", &original[3..]);
        assert_eq!(scan_directive(&rewritten), Some(DirectiveForm::Canonical));
    }
}
