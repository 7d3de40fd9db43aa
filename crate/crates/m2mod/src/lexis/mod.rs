//! Trivia-preserving tokenizer for classic Modula-2: literal
//! classification, nested comments, directive scanning, and
//! foreign-identifier validation.

mod directive;
mod ident;
mod lexer;
mod token;

pub use directive::{scan_directive, DirectiveForm, NON_CANONICAL_OPENERS};
pub use ident::{
    classify_identifier, structural_violation, ClassifyError, ForeignViolation, IdentContext,
    IdentifierClass,
};
pub use lexer::tokenize;
pub use token::{
    Delimiter, IntegerBase, Operator, ReservedWord, SynonymSymbol, Token, TokenKind, Trivia,
    TriviaKind,
};

/// Reassembles the exact source text from a token stream.
pub fn reassemble(tokens: &[Token]) -> String {
    let mut out = String::new();
    for token in tokens {
        for trivia in &token.leading_trivia {
            out.push_str(&trivia.text);
        }
        out.push_str(&token.text);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::{default_config, DialectConfig, Severity};

    fn lex(src: &str) -> (Vec<Token>, Vec<crate::diagnostics::Diagnostic>) {
        tokenize(src, &default_config())
    }

    fn kinds(tokens: &[Token]) -> Vec<TokenKind> {
        tokens.iter().map(|t| t.kind).collect()
    }

    #[test]
    fn empty_input_is_just_eof() {
        let (tokens, diags) = lex("");
        assert_eq!(kinds(&tokens), vec![TokenKind::EndOfFile]);
        assert!(diags.is_empty());
    }

    #[test]
    fn array_declaration_tokens() {
        let (tokens, diags) = lex("ARRAY [0 .. Cols], [0 .. Rows] OF REAL");
        assert!(diags.is_empty());
        assert_eq!(
            kinds(&tokens),
            vec![
                TokenKind::Reserved(ReservedWord::Array),
                TokenKind::Delimiter(Delimiter::LBracket),
                TokenKind::IntegerLiteral(IntegerBase::Decimal),
                TokenKind::Operator(Operator::Range),
                TokenKind::Identifier,
                TokenKind::Delimiter(Delimiter::RBracket),
                TokenKind::Delimiter(Delimiter::Comma),
                TokenKind::Delimiter(Delimiter::LBracket),
                TokenKind::IntegerLiteral(IntegerBase::Decimal),
                TokenKind::Operator(Operator::Range),
                TokenKind::Identifier,
                TokenKind::Delimiter(Delimiter::RBracket),
                TokenKind::Reserved(ReservedWord::Of),
                TokenKind::Identifier,
                TokenKind::EndOfFile,
            ]
        );
        assert_eq!(tokens[2].text, "0");
        assert_eq!(tokens[4].text, "Cols");
    }

    #[test]
    fn synonyms_each_get_one_diagnostic_with_edit() {
        let (tokens, diags) = lex("x <> y & ~z");
        let syn: Vec<_> = diags.iter().filter(|d| d.code == "M2M-SYNONYM").collect();
        assert_eq!(syn.len(), 3);
        let replacements: Vec<_> = syn
            .iter()
            .map(|d| d.suggested_edit.as_ref().unwrap().replacement.trim().to_string())
            .collect();
        assert_eq!(replacements, vec!["#", "AND", "NOT"]);
        for d in &syn {
            assert_eq!(d.severity, Severity::Error);
        }
        let synonym_tokens: Vec<_> = tokens
            .iter()
            .filter(|t| matches!(t.kind, TokenKind::Synonym(_)))
            .collect();
        assert_eq!(synonym_tokens.len(), 3);
        assert!(synonym_tokens.iter().all(|t| t.policy_blocked));
    }

    #[test]
    fn synonyms_deprecation_severity_when_enabled() {
        let config = DialectConfig { synonym_symbols: true, ..default_config() };
        let (tokens, diags) = tokenize("x <> y", &config);
        let syn: Vec<_> = diags.iter().filter(|d| d.code == "M2M-SYNONYM").collect();
        assert_eq!(syn.len(), 1);
        assert_eq!(syn[0].severity, Severity::DeprecationWarning);
        assert!(tokens.iter().all(|t| !t.policy_blocked));
    }

    #[test]
    fn hash_and_angle_synonym_are_distinct_kinds() {
        let (tokens, _) = lex("a # b <> c");
        assert_eq!(tokens[1].kind, TokenKind::Operator(Operator::NotEqual));
        assert_eq!(tokens[3].kind, TokenKind::Synonym(SynonymSymbol::NotEquals));
    }

    #[test]
    fn octal_gating() {
        let (tokens, diags) = lex("377B");
        assert_eq!(tokens[0].kind, TokenKind::IntegerLiteral(IntegerBase::OctalB));
        assert!(tokens[0].policy_blocked);
        assert_eq!(tokens[0].text, "377B");
        let octal: Vec<_> = diags.iter().filter(|d| d.code == "M2M-OCTAL").collect();
        assert_eq!(octal.len(), 1);
        assert_eq!(octal[0].severity, Severity::Error);

        let enabled = DialectConfig { octal_literals: true, ..default_config() };
        let (tokens, diags) = tokenize("377B", &enabled);
        assert!(!tokens[0].policy_blocked);
        let octal: Vec<_> = diags.iter().filter(|d| d.code == "M2M-OCTAL").collect();
        assert_eq!(octal.len(), 1);
        assert_eq!(octal[0].severity, Severity::DeprecationWarning);
    }

    #[test]
    fn char_code_literal() {
        let (tokens, diags) = lex("15C");
        assert_eq!(tokens[0].kind, TokenKind::CharCodeLiteral);
        let octal: Vec<_> = diags.iter().filter(|d| d.code == "M2M-OCTAL").collect();
        assert_eq!(octal[0].suggested_edit.as_ref().unwrap().replacement, "CHR(13)");
    }

    #[test]
    fn hex_suffix_wins_over_octal_suffix_digits() {
        let (tokens, diags) = lex("0FFH 0BH 0CH");
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(tokens[0].kind, TokenKind::IntegerLiteral(IntegerBase::Hex));
        assert_eq!(tokens[1].kind, TokenKind::IntegerLiteral(IntegerBase::Hex));
        assert_eq!(tokens[2].kind, TokenKind::IntegerLiteral(IntegerBase::Hex));
    }

    #[test]
    fn malformed_literals_recover() {
        let (tokens, diags) = lex("18B 1AB 1E2");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-LIT-MALFORMED").count(), 3);
        assert!(!diags.iter().any(|d| d.code == "M2M-OCTAL"));
        assert_eq!(tokens.last().unwrap().kind, TokenKind::EndOfFile);
    }

    #[test]
    fn real_literals() {
        let (tokens, diags) = lex("3.14 2.0E3 1.5E-2 7. 1..2");
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(tokens[0].kind, TokenKind::RealLiteral);
        assert_eq!(tokens[1].kind, TokenKind::RealLiteral);
        assert_eq!(tokens[1].text, "2.0E3");
        assert_eq!(tokens[2].text, "1.5E-2");
        assert_eq!(tokens[3].kind, TokenKind::RealLiteral);
        assert_eq!(tokens[3].text, "7.");
        // 1..2 is integer, range, integer
        assert_eq!(tokens[4].kind, TokenKind::IntegerLiteral(IntegerBase::Decimal));
        assert_eq!(tokens[5].kind, TokenKind::Operator(Operator::Range));
    }

    #[test]
    fn nested_comment_is_one_trivia() {
        let (tokens, diags) = lex("(* a (* b *) c *)x");
        assert!(diags.is_empty());
        let trivia = &tokens[0].leading_trivia;
        assert_eq!(trivia.len(), 1);
        assert_eq!(trivia[0].kind, TriviaKind::Comment);
        assert_eq!(trivia[0].text, "(* a (* b *) c *)");
    }

    #[test]
    fn unterminated_comment_is_error() {
        let (tokens, diags) = lex("(* a (* b *)");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-COMMENT-UNTERMINATED").count(), 1);
        assert_eq!(reassemble(&tokens), "(* a (* b *)");
    }

    #[test]
    fn directive_trivia_kinds() {
        let (tokens, diags) = lex("(*$T-*) (*%F+*) (* c *)x");
        let trivia = &tokens[0].leading_trivia;
        let kinds: Vec<_> = trivia.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TriviaKind::NonSemanticDirective,
                TriviaKind::Whitespace,
                TriviaKind::NonCanonicalDirective,
                TriviaKind::Whitespace,
                TriviaKind::Comment,
            ]
        );
        let dir: Vec<_> = diags.iter().filter(|d| d.code == "M2M-DIRECTIVE").collect();
        assert_eq!(dir.len(), 1);
        assert_eq!(dir[0].severity, Severity::Warning);
        assert_eq!(dir[0].suggested_edit.as_ref().unwrap().replacement, "(*$");
    }

    #[test]
    fn semantic_directive_line_becomes_token() {
        let (tokens, diags) = lex("%IF unix\nMODULE");
        assert_eq!(tokens[0].kind, TokenKind::Directive);
        assert_eq!(tokens[0].text, "%IF unix");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-DIRECTIVE-SEMANTIC").count(), 1);
        // % not at column one is an illegal character
        let (_, diags) = lex("a % b");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-CHAR").count(), 1);
    }

    #[test]
    fn strings_keep_synonym_chars_as_data() {
        let (tokens, diags) = lex("\"x<>y\" '&~'");
        assert!(diags.is_empty());
        assert_eq!(tokens[0].kind, TokenKind::StringLiteral);
        assert_eq!(tokens[0].text, "\"x<>y\"");
        assert_eq!(tokens[1].text, "'&~'");
    }

    #[test]
    fn unterminated_string_recovers_at_newline() {
        let (tokens, diags) = lex("'abc\nx");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-STRING-UNTERMINATED").count(), 1);
        assert_eq!(tokens[0].kind, TokenKind::StringLiteral);
        assert_eq!(tokens[0].text, "'abc");
        assert_eq!(tokens[1].text, "x");
    }

    #[test]
    fn foreign_identifier_disabled_by_default() {
        let (tokens, diags) = lex("sys$open");
        assert_eq!(tokens[0].kind, TokenKind::ForeignIdentifier);
        assert!(tokens[0].policy_blocked);
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-FOREIGN-DISABLED").count(), 1);
    }

    #[test]
    fn foreign_identifier_clean_when_enabled() {
        let config = DialectConfig { foreign_identifiers: true, ..default_config() };
        let (tokens, diags) = tokenize("sys$open file_name", &config);
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(tokens[0].kind, TokenKind::ForeignIdentifier);
        assert!(!tokens[0].policy_blocked);
    }

    #[test]
    fn malformed_foreign_identifier_is_error_even_when_enabled() {
        let config = DialectConfig { foreign_identifiers: true, ..default_config() };
        let (_, diags) = tokenize("a$$b x_", &config);
        let malformed: Vec<_> =
            diags.iter().filter(|d| d.code == "M2M-FOREIGN-MALFORMED").collect();
        assert_eq!(malformed.len(), 2);
        assert!(malformed.iter().all(|d| d.severity == Severity::Error));
        assert!(malformed[0].message.contains("consecutive dollar signs"));
        assert!(malformed[1].message.contains("trailing lowline"));
    }

    #[test]
    fn lowercase_reserved_word_is_identifier() {
        let (tokens, _) = lex("begin BEGIN Begin");
        assert_eq!(tokens[0].kind, TokenKind::Identifier);
        assert_eq!(tokens[1].kind, TokenKind::Reserved(ReservedWord::Begin));
        assert_eq!(tokens[2].kind, TokenKind::Identifier);
    }

    #[test]
    fn illegal_characters_are_skipped_trivia() {
        let (tokens, diags) = lex("a ? b");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-CHAR").count(), 1);
        assert_eq!(reassemble(&tokens), "a ? b");
        let b = &tokens[1];
        assert!(b.leading_trivia.iter().any(|t| t.kind == TriviaKind::Skipped));
    }

    #[test]
    fn non_ascii_allowed_in_comments_and_strings_only() {
        let (_, diags) = lex("(* caf\u{e9} *) 'caf\u{e9}' x");
        assert!(diags.is_empty(), "{diags:?}");
        let (_, diags) = lex("caf\u{e9}");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-CHAR").count(), 1);
    }

    #[test]
    fn crlf_preserved_in_trivia() {
        let src = "MODULE M;\r\nBEGIN\r\nEND M.\r\n";
        let (tokens, diags) = lex(src);
        assert!(diags.is_empty());
        assert_eq!(reassemble(&tokens), src);
        // line counting sees through CRLF
        let end = tokens.iter().find(|t| t.is_reserved(ReservedWord::End)).unwrap();
        assert_eq!(end.span.line, 3);
    }

    #[test]
    fn round_trip_with_errors() {
        let srcs = [
            "MODULE M; (* ok *) BEGIN x := 377B; END M.",
            "bad ? input (* unterminated",
            "'open string\nnext line",
            "%IF thing\ny := 1AB;",
        ];
        for src in srcs {
            let (tokens, _) = lex(src);
            assert_eq!(reassemble(&tokens), src, "round trip failed for {src:?}");
        }
    }

    #[test]
    fn spans_tile_the_input() {
        let src = "MODULE M;\n  (* c *) VAR x : CARDINAL;\nBEGIN x := 0C END M.\n";
        let (tokens, _) = lex(src);
        let mut pos = 0usize;
        for token in &tokens {
            for trivia in &token.leading_trivia {
                assert_eq!(trivia.span.start, pos, "gap before trivia {trivia:?}");
                pos = trivia.span.end;
            }
            assert_eq!(token.span.start, pos, "gap before token {token:?}");
            pos = token.span.end;
        }
        assert_eq!(pos, src.len());
    }

    #[test]
    fn assign_and_ranges_lex_greedily() {
        let (tokens, _) = lex("a := b; c[1..2] ^ .");
        let ops: Vec<_> = tokens.iter().map(|t| t.text.as_str()).collect();
        assert!(ops.contains(&":="));
        assert!(ops.contains(&".."));
        assert!(ops.contains(&"^"));
        assert!(ops.contains(&"."));
    }
}
