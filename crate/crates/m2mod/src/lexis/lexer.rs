//! The tokenizer.
//!
//! Lexing never aborts: every malformed region produces a diagnostic
//! and a recovery token or skipped trivia, and the stream always ends
//! with `EndOfFile`. Tokens using a disabled facility keep their
//! natural kind and are flagged `policy_blocked`, so the parser and the
//! rewrite planner still see them.

use crate::diagnostics::Diagnostic;
use crate::lexis::directive::{scan_directive, DirectiveForm};
use crate::lexis::ident::{classify_identifier, ClassifyError, IdentContext, IdentifierClass};
use crate::lexis::token::{
    Delimiter, IntegerBase, Operator, ReservedWord, SynonymSymbol, Token, TokenKind, Trivia,
    TriviaKind,
};
use crate::policy::{severity_for, DialectConfig, FacilityId, Severity};
use crate::rewrite::{convert_octal_literal, directive_edit, synonym_edit, OctalError};
use crate::source::Span;

/// Tokenizes `source` under `config`.
///
/// Returns the token stream (ending in `EndOfFile`) and all lexical
/// diagnostics. Concatenating every token's leading trivia text and
/// token text reproduces `source` exactly.
pub fn tokenize(source: &str, config: &DialectConfig) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut lexer = Lexer::new(source, config);
    lexer.run();
    let mut tokens = lexer.tokens;
    let mut diagnostics = lexer.diagnostics;
    facility_pass(&mut tokens, config, &mut diagnostics);
    diagnostics.sort_by_key(|d| (d.span.start, d.code));
    (tokens, diagnostics)
}

struct Lexer<'src> {
    src: &'src str,
    config: &'src DialectConfig,
    pos: usize,
    line: u32,
    col: u32,
    pending_trivia: Vec<Trivia>,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Copy)]
struct Mark {
    pos: usize,
    line: u32,
    col: u32,
}

impl<'src> Lexer<'src> {
    fn new(src: &'src str, config: &'src DialectConfig) -> Self {
        Lexer {
            src,
            config,
            pos: 0,
            line: 1,
            col: 1,
            pending_trivia: Vec::new(),
            tokens: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut chars = self.src[self.pos..].chars();
        chars.next();
        chars.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += c.len_utf8() as u32;
        }
        Some(c)
    }

    fn mark(&self) -> Mark {
        Mark { pos: self.pos, line: self.line, col: self.col }
    }

    fn span_from(&self, m: Mark) -> Span {
        Span::new(m.pos, self.pos, m.line, m.col, self.line, self.col)
    }

    fn text_from(&self, m: Mark) -> &'src str {
        &self.src[m.pos..self.pos]
    }

    fn run(&mut self) {
        loop {
            self.skip_trivia();
            let m = self.mark();
            let Some(c) = self.peek() else {
                self.push_token(TokenKind::EndOfFile, m, false);
                break;
            };
            match c {
                '%' if self.col == 1 => self.lex_semantic_directive(m),
                c if c.is_ascii_digit() => self.lex_number(m),
                c if c.is_ascii_alphabetic() || c == '_' => self.lex_word(m),
                '\'' | '"' => self.lex_string(m),
                c if is_symbol_start(c) => self.lex_symbol(m),
                other => {
                    self.bump();
                    let span = self.span_from(m);
                    let shown = if other.is_ascii_graphic() {
                        format!("'{other}'")
                    } else {
                        format!("U+{:04X}", other as u32)
                    };
                    self.diagnostics.push(Diagnostic::new(
                        "M2M-CHAR",
                        Severity::Error,
                        span,
                        format!("illegal character {shown}"),
                    ));
                    self.pending_trivia.push(Trivia {
                        kind: TriviaKind::Skipped,
                        text: self.text_from(m).to_string(),
                        span,
                    });
                }
            }
        }
    }

    fn push_token(&mut self, kind: TokenKind, m: Mark, policy_blocked: bool) {
        let span = self.span_from(m);
        self.tokens.push(Token {
            kind,
            text: self.text_from(m).to_string(),
            span,
            leading_trivia: std::mem::take(&mut self.pending_trivia),
            policy_blocked,
        });
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c == ' ' || c == '\t' || c == '\r' || c == '\n' => {
                    let m = self.mark();
                    while matches!(self.peek(), Some(' ' | '\t' | '\r' | '\n')) {
                        self.bump();
                    }
                    self.pending_trivia.push(Trivia {
                        kind: TriviaKind::Whitespace,
                        text: self.text_from(m).to_string(),
                        span: self.span_from(m),
                    });
                }
                Some('(') if self.peek2() == Some('*') => self.lex_comment(),
                _ => break,
            }
        }
    }

    /// Scans a (possibly nested) comment and classifies it as plain
    /// comment or directive trivia.
    fn lex_comment(&mut self) {
        let m = self.mark();
        self.bump(); // (
        self.bump(); // *
        let mut depth = 1usize;
        loop {
            match self.peek() {
                None => {
                    let open_span =
                        Span::new(m.pos, m.pos + 2, m.line, m.col, m.line, m.col + 2);
                    self.diagnostics.push(Diagnostic::new(
                        "M2M-COMMENT-UNTERMINATED",
                        Severity::Error,
                        open_span,
                        format!("unterminated comment opened at {}:{}", m.line, m.col),
                    ));
                    break;
                }
                Some('(') if self.peek2() == Some('*') => {
                    self.bump();
                    self.bump();
                    depth += 1;
                }
                Some('*') if self.peek2() == Some(')') => {
                    self.bump();
                    self.bump();
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        let text = self.text_from(m).to_string();
        let span = self.span_from(m);
        let kind = match scan_directive(&text) {
            Some(DirectiveForm::Canonical) => TriviaKind::NonSemanticDirective,
            Some(DirectiveForm::NonCanonical(opener)) => {
                let trivia = Trivia { kind: TriviaKind::NonCanonicalDirective, text, span };
                let mut diag = Diagnostic::new(
                    "M2M-DIRECTIVE",
                    severity_for(FacilityId::NonCanonicalDirectives, self.config),
                    Span::new(span.start, span.start + 3, span.line, span.col, span.line, span.col + 3),
                    format!("non-canonical directive opener '{opener}' (write '(*$')"),
                );
                if let Some(edit) = directive_edit(&trivia) {
                    diag = diag.with_edit(edit);
                }
                self.diagnostics.push(diag);
                self.pending_trivia.push(trivia);
                return;
            }
            _ => TriviaKind::Comment,
        };
        self.pending_trivia.push(Trivia { kind, text, span });
    }

    /// A `%` in column one starts a semantic directive candidate; the
    /// whole line becomes a `Directive` token and is not evaluated.
    fn lex_semantic_directive(&mut self, m: Mark) {
        while self.peek().is_some_and(|c| c != '\n') {
            self.bump();
        }
        let span = self.span_from(m);
        self.diagnostics.push(Diagnostic::new(
            "M2M-DIRECTIVE-SEMANTIC",
            severity_for(FacilityId::SemanticDirectiveCandidate, self.config),
            span,
            format!(
                "semantic directive candidate '{}' is not evaluated",
                self.text_from(m).trim_end()
            ),
        ));
        self.push_token(TokenKind::Directive, m, false);
    }

    fn lex_word(&mut self, m: Mark) {
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
        {
            self.bump();
        }
        let text = self.text_from(m);
        if !text.contains(['$', '_']) {
            let kind = match ReservedWord::lookup(text) {
                Some(word) => TokenKind::Reserved(word),
                None => TokenKind::Identifier,
            };
            self.push_token(kind, m, false);
            return;
        }
        let span = self.span_from(m);
        let blocked = match classify_identifier(text, self.config, IdentContext::OrdinaryIdentifier)
        {
            Ok(IdentifierClass::Foreign) => false,
            Ok(IdentifierClass::Plain) => unreachable!("text contains foreign characters"),
            Err(ClassifyError::ForeignDisabled) => {
                self.diagnostics.push(Diagnostic::new(
                    "M2M-FOREIGN-DISABLED",
                    severity_for(FacilityId::ForeignIdentifiers, self.config),
                    span,
                    format!(
                        "foreign identifier '{text}' requires the foreign-identifiers switch"
                    ),
                ));
                true
            }
            Err(ClassifyError::Malformed(rule)) => {
                self.diagnostics.push(Diagnostic::new(
                    "M2M-FOREIGN-MALFORMED",
                    Severity::Error,
                    span,
                    format!("malformed foreign identifier '{text}': {}", rule.describe()),
                ));
                true
            }
            Err(ClassifyError::InModuleIdentifier) => {
                unreachable!("lexer classifies in ordinary context")
            }
        };
        self.push_token(TokenKind::ForeignIdentifier, m, blocked);
    }

    fn lex_string(&mut self, m: Mark) {
        let quote = self.bump().expect("string start");
        loop {
            match self.peek() {
                None | Some('\n') => {
                    self.diagnostics.push(Diagnostic::new(
                        "M2M-STRING-UNTERMINATED",
                        Severity::Error,
                        self.span_from(m),
                        "unterminated string literal",
                    ));
                    break;
                }
                Some(c) => {
                    self.bump();
                    if c == quote {
                        break;
                    }
                }
            }
        }
        self.push_token(TokenKind::StringLiteral, m, false);
    }

    /// Numbers: a run of digits and letters, classified by its suffix
    /// (longest match, suffix decides the class), or a real literal
    /// when a decimal-digit run is followed by `.` but not `..`.
    fn lex_number(&mut self, m: Mark) {
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.bump();
        }
        let run = self.text_from(m);
        let all_decimal = run.bytes().all(|b| b.is_ascii_digit());
        if all_decimal && self.peek() == Some('.') && self.peek2() != Some('.') {
            self.bump(); // .
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            // ScaleFactor: E with optional sign, then at least one digit;
            // otherwise the E is left for the next token.
            if self.peek() == Some('E') {
                let after_sign_digit = match self.peek2() {
                    Some('+') | Some('-') => {
                        let mut chars = self.src[self.pos..].chars();
                        chars.next();
                        chars.next();
                        chars.next().is_some_and(|c| c.is_ascii_digit())
                    }
                    Some(c) => c.is_ascii_digit(),
                    None => false,
                };
                if after_sign_digit {
                    self.bump(); // E
                    if matches!(self.peek(), Some('+') | Some('-')) {
                        self.bump();
                    }
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.bump();
                    }
                }
            }
            self.push_token(TokenKind::RealLiteral, m, false);
            return;
        }
        if all_decimal {
            self.push_token(TokenKind::IntegerLiteral(IntegerBase::Decimal), m, false);
            return;
        }
        let (kind, malformed) = classify_number_run(run);
        if malformed {
            let span = self.span_from(m);
            self.diagnostics.push(Diagnostic::new(
                "M2M-LIT-MALFORMED",
                Severity::Error,
                span,
                format!("malformed numeric literal '{run}'"),
            ));
        }
        let octal = matches!(
            kind,
            TokenKind::IntegerLiteral(IntegerBase::OctalB) | TokenKind::CharCodeLiteral
        );
        let blocked = octal && !malformed && !self.config.octal_literals;
        self.push_token(kind, m, blocked);
    }

    fn lex_symbol(&mut self, m: Mark) {
        let c = self.bump().expect("symbol start");
        let kind = match c {
            ':' if self.peek() == Some('=') => {
                self.bump();
                TokenKind::Operator(Operator::Assign)
            }
            ':' => TokenKind::Delimiter(Delimiter::Colon),
            '.' if self.peek() == Some('.') => {
                self.bump();
                TokenKind::Operator(Operator::Range)
            }
            '.' => TokenKind::Delimiter(Delimiter::Dot),
            '<' if self.peek() == Some('=') => {
                self.bump();
                TokenKind::Operator(Operator::LessEqual)
            }
            '<' if self.peek() == Some('>') => {
                self.bump();
                TokenKind::Synonym(SynonymSymbol::NotEquals)
            }
            '<' => TokenKind::Operator(Operator::Less),
            '>' if self.peek() == Some('=') => {
                self.bump();
                TokenKind::Operator(Operator::GreaterEqual)
            }
            '>' => TokenKind::Operator(Operator::Greater),
            '=' => TokenKind::Operator(Operator::Equal),
            '#' => TokenKind::Operator(Operator::NotEqual),
            '+' => TokenKind::Operator(Operator::Plus),
            '-' => TokenKind::Operator(Operator::Minus),
            '*' => TokenKind::Operator(Operator::Star),
            '/' => TokenKind::Operator(Operator::Slash),
            '^' => TokenKind::Operator(Operator::Deref),
            '&' => TokenKind::Synonym(SynonymSymbol::Ampersand),
            '~' => TokenKind::Synonym(SynonymSymbol::Tilde),
            '(' => TokenKind::Delimiter(Delimiter::LParen),
            ')' => TokenKind::Delimiter(Delimiter::RParen),
            '[' => TokenKind::Delimiter(Delimiter::LBracket),
            ']' => TokenKind::Delimiter(Delimiter::RBracket),
            '{' => TokenKind::Delimiter(Delimiter::LBrace),
            '}' => TokenKind::Delimiter(Delimiter::RBrace),
            ',' => TokenKind::Delimiter(Delimiter::Comma),
            ';' => TokenKind::Delimiter(Delimiter::Semicolon),
            '|' => TokenKind::Delimiter(Delimiter::Bar),
            other => unreachable!("not a symbol start: {other}"),
        };
        let blocked =
            matches!(kind, TokenKind::Synonym(_)) && !self.config.synonym_symbols;
        self.push_token(kind, m, blocked);
    }
}

fn is_symbol_start(c: char) -> bool {
    matches!(
        c,
        ':' | '.' | '<' | '>' | '=' | '#' | '+' | '-' | '*' | '/' | '^' | '&' | '~' | '(' | ')'
            | '[' | ']' | '{' | '}' | ',' | ';' | '|'
    )
}

/// Classifies a digit-initial alphanumeric run that is not plain
/// decimal. Returns the token kind and whether the run is malformed.
fn classify_number_run(run: &str) -> (TokenKind, bool) {
    let bytes = run.as_bytes();
    let last = *bytes.last().expect("non-empty run");
    let body = &bytes[..bytes.len() - 1];
    match last {
        b'H' => {
            let ok = !body.is_empty() && body.iter().all(u8::is_ascii_hexdigit);
            (TokenKind::IntegerLiteral(IntegerBase::Hex), !ok)
        }
        b'B' => {
            let ok = !body.is_empty() && body.iter().all(|b| (b'0'..=b'7').contains(b));
            (TokenKind::IntegerLiteral(IntegerBase::OctalB), !ok)
        }
        b'C' => {
            let ok = !body.is_empty() && body.iter().all(|b| (b'0'..=b'7').contains(b));
            (TokenKind::CharCodeLiteral, !ok)
        }
        _ => (TokenKind::IntegerLiteral(IntegerBase::Decimal), true),
    }
}

/// Emits the per-use facility diagnostics that need the whole stream:
/// octal literals (suggested rewrite) and synonym symbols (suggested
/// replacement with fusion-aware spacing).
fn facility_pass(tokens: &mut [Token], config: &DialectConfig, diagnostics: &mut Vec<Diagnostic>) {
    for i in 0..tokens.len() {
        match tokens[i].kind {
            TokenKind::IntegerLiteral(IntegerBase::OctalB) | TokenKind::CharCodeLiteral => {
                match convert_octal_literal(&tokens[i]) {
                    Ok(edit) => {
                        let message = format!(
                            "octal literal '{}' (replace with '{}')",
                            tokens[i].text, edit.replacement
                        );
                        diagnostics.push(
                            Diagnostic::new(
                                "M2M-OCTAL",
                                severity_for(FacilityId::OctalLiterals, config),
                                tokens[i].span,
                                message,
                            )
                            .with_edit(edit),
                        );
                    }
                    Err(OctalError::Overflow) => {
                        diagnostics.push(Diagnostic::new(
                            "M2M-OCTAL-RANGE",
                            Severity::Error,
                            tokens[i].span,
                            format!("octal literal '{}' is out of range", tokens[i].text),
                        ));
                    }
                    // Malformed literals were already reported by the scanner.
                    Err(_) => {}
                }
            }
            TokenKind::Synonym(symbol) => {
                let edit = synonym_edit(tokens, i).expect("synonym token has an edit");
                let message = format!(
                    "synonym symbol '{}' (write '{}')",
                    tokens[i].text,
                    symbol.replacement()
                );
                diagnostics.push(
                    Diagnostic::new(
                        "M2M-SYNONYM",
                        severity_for(FacilityId::SynonymSymbols, config),
                        tokens[i].span,
                        message,
                    )
                    .with_edit(edit),
                );
            }
            _ => {}
        }
    }
}
