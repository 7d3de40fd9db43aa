//! Token-level rewrites: octal literals, synonym symbols, and directive
//! delimiter normalization.

use crate::lexis::{IntegerBase, SynonymSymbol, Token, TokenKind, Trivia, TriviaKind};
use crate::policy::FacilityId;
use crate::rewrite::Edit;
use crate::source::Span;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OctalError {
    /// A digit 8 or 9 appeared before the B/C suffix.
    NonOctalDigit,
    /// Not an octal literal token at all.
    NotOctal,
    /// Value exceeds the widest supported word.
    Overflow,
}

impl fmt::Display for OctalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OctalError::NonOctalDigit => "digit 8 or 9 in octal literal",
            OctalError::NotOctal => "token is not an octal literal",
            OctalError::Overflow => "octal literal value out of range",
        })
    }
}

/// Rewrites an octal literal token: `NNNB` becomes the decimal literal
/// of the same value, `NNNC` becomes `CHR(d)` with d the decimal value.
pub fn convert_octal_literal(token: &Token) -> Result<Edit, OctalError> {
    let char_code = match token.kind {
        TokenKind::IntegerLiteral(IntegerBase::OctalB) => false,
        TokenKind::CharCodeLiteral => true,
        _ => return Err(OctalError::NotOctal),
    };
    let digits = &token.text[..token.text.len() - 1];
    let mut value: u128 = 0;
    for b in digits.bytes() {
        if !(b'0'..=b'7').contains(&b) {
            return Err(OctalError::NonOctalDigit);
        }
        value = value
            .checked_mul(8)
            .and_then(|v| v.checked_add(u128::from(b - b'0')))
            .ok_or(OctalError::Overflow)?;
    }
    let replacement = if char_code { format!("CHR({value})") } else { value.to_string() };
    let note = format!("replace octal literal '{}' with '{}'", token.text, replacement);
    Ok(Edit::new(token.span, replacement, FacilityId::OctalLiterals, note))
}

/// True when `c` would lexically fuse with a word written next to it.
fn fuses_with_word(c: char) -> bool {
    c.is_ascii_alphanumeric()
}

/// Character immediately before the token, if it is adjacent (no trivia
/// in between it would be the previous token's last char).
fn char_before(tokens: &[Token], index: usize) -> Option<char> {
    let token = &tokens[index];
    if let Some(trivia) = token.leading_trivia.last() {
        return trivia.text.chars().last();
    }
    if index == 0 {
        return None;
    }
    tokens[index - 1].text.chars().last()
}

fn char_after(tokens: &[Token], index: usize) -> Option<char> {
    let next = tokens.get(index + 1)?;
    if let Some(trivia) = next.leading_trivia.first() {
        return trivia.text.chars().next();
    }
    next.text.chars().next()
}

/// Builds the replacement edit for the synonym token at `index`.
///
/// Word replacements (`AND`, `NOT`) get a space inserted on any side
/// where they would fuse with an adjacent identifier, number, or
/// reserved word. A synonym immediately to the right also becomes a
/// word, so a space is added there too; a synonym to the left already
/// added that space itself.
pub fn synonym_edit(tokens: &[Token], index: usize) -> Option<Edit> {
    let token = &tokens[index];
    let TokenKind::Synonym(symbol) = token.kind else {
        return None;
    };
    let word = symbol.replacement();
    let mut replacement = String::from(word);
    if symbol != SynonymSymbol::NotEquals {
        if char_before(tokens, index).is_some_and(fuses_with_word) {
            replacement.insert(0, ' ');
        }
        if char_after(tokens, index).is_some_and(|c| fuses_with_word(c) || c == '&' || c == '~') {
            replacement.push(' ');
        }
    }
    let note = format!("replace synonym '{}' with '{}'", token.text, word);
    Some(Edit::new(token.span, replacement, FacilityId::SynonymSymbols, note))
}

/// Replacement edits for every synonym symbol in the stream:
/// `<>` to `#`, `&` to `AND`, `~` to `NOT`.
pub fn convert_synonyms(tokens: &[Token]) -> Vec<Edit> {
    (0..tokens.len()).filter_map(|i| synonym_edit(tokens, i)).collect()
}

/// Edit normalizing one non-canonical directive opener to `(*$`.
pub fn directive_edit(trivia: &Trivia) -> Option<Edit> {
    if trivia.kind != TriviaKind::NonCanonicalDirective {
        return None;
    }
    let opener_span = Span::new(
        trivia.span.start,
        trivia.span.start + 3,
        trivia.span.line,
        trivia.span.col,
        trivia.span.line,
        trivia.span.col + 3,
    );
    let note = format!("normalize directive opener '{}' to '(*$'", &trivia.text[..3]);
    Some(Edit::new(opener_span, "(*$", FacilityId::NonCanonicalDirectives, note))
}

/// Edits replacing each non-canonical directive's opening delimiter
/// with `(*$`; the payload and the closing `*)` stay untouched.
pub fn normalize_directives<'a>(trivia: impl IntoIterator<Item = &'a Trivia>) -> Vec<Edit> {
    trivia.into_iter().filter_map(directive_edit).collect()
}
