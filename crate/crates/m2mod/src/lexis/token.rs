//! Token and trivia definitions.
//!
//! Tokens keep their exact source text and carry the whitespace and
//! comments that precede them, so concatenating `leading_trivia` texts
//! and token texts over a whole stream reproduces the input byte for
//! byte.

use crate::source::Span;
use std::fmt;

/// The smallest lexical unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source substring.
    pub text: String,
    pub span: Span,
    pub leading_trivia: Vec<Trivia>,
    /// The token uses a facility that is disabled under the active
    /// configuration. The token still carries its natural kind so
    /// parsing and rewriting can proceed.
    pub policy_blocked: bool,
}

impl Token {
    pub fn is_reserved(&self, word: ReservedWord) -> bool {
        self.kind == TokenKind::Reserved(word)
    }

    pub fn is_operator(&self, op: Operator) -> bool {
        self.kind == TokenKind::Operator(op)
    }

    pub fn is_delimiter(&self, delim: Delimiter) -> bool {
        self.kind == TokenKind::Delimiter(delim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Reserved(ReservedWord),
    Identifier,
    /// Identifier containing `$` or `_` (foreign-API interfacing).
    ForeignIdentifier,
    IntegerLiteral(IntegerBase),
    /// Octal character code literal (`15C`).
    CharCodeLiteral,
    RealLiteral,
    StringLiteral,
    Operator(Operator),
    Delimiter(Delimiter),
    Synonym(SynonymSymbol),
    /// A `%`-prefixed semantic directive candidate line.
    Directive,
    EndOfFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegerBase {
    Decimal,
    Hex,
    OctalB,
}

/// Synonym symbols are kept apart from operators so policy can act on
/// them; `#` lexes as `Operator(NotEqual)`, `<>` as `Synonym(NotEquals)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynonymSymbol {
    /// `<>` for `#`
    NotEquals,
    /// `&` for `AND`
    Ampersand,
    /// `~` for `NOT`
    Tilde,
}

impl SynonymSymbol {
    /// The sanctioned spelling this synonym stands for.
    pub fn replacement(&self) -> &'static str {
        match self {
            SynonymSymbol::NotEquals => "#",
            SynonymSymbol::Ampersand => "AND",
            SynonymSymbol::Tilde => "NOT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Plus,
    Minus,
    Star,
    Slash,
    Equal,
    NotEqual,
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    Assign,
    Range,
    Deref,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Delimiter {
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Colon,
    Dot,
    Bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReservedWord {
    And,
    Array,
    Begin,
    By,
    Case,
    Const,
    Definition,
    Div,
    Do,
    Else,
    Elsif,
    End,
    Exit,
    Export,
    For,
    From,
    If,
    Implementation,
    Import,
    In,
    Loop,
    Mod,
    Module,
    Not,
    Of,
    Or,
    Pointer,
    Procedure,
    Qualified,
    Record,
    Repeat,
    Return,
    Set,
    Then,
    To,
    Type,
    Until,
    Var,
    While,
    With,
}

impl ReservedWord {
    /// Reserved words are upper-case only; `begin` is an identifier.
    pub fn lookup(text: &str) -> Option<ReservedWord> {
        use ReservedWord::*;
        Some(match text {
            "AND" => And,
            "ARRAY" => Array,
            "BEGIN" => Begin,
            "BY" => By,
            "CASE" => Case,
            "CONST" => Const,
            "DEFINITION" => Definition,
            "DIV" => Div,
            "DO" => Do,
            "ELSE" => Else,
            "ELSIF" => Elsif,
            "END" => End,
            "EXIT" => Exit,
            "EXPORT" => Export,
            "FOR" => For,
            "FROM" => From,
            "IF" => If,
            "IMPLEMENTATION" => Implementation,
            "IMPORT" => Import,
            "IN" => In,
            "LOOP" => Loop,
            "MOD" => Mod,
            "MODULE" => Module,
            "NOT" => Not,
            "OF" => Of,
            "OR" => Or,
            "POINTER" => Pointer,
            "PROCEDURE" => Procedure,
            "QUALIFIED" => Qualified,
            "RECORD" => Record,
            "REPEAT" => Repeat,
            "RETURN" => Return,
            "SET" => Set,
            "THEN" => Then,
            "TO" => To,
            "TYPE" => Type,
            "UNTIL" => Until,
            "VAR" => Var,
            "WHILE" => While,
            "WITH" => With,
            _ => return None,
        })
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Reserved(w) => write!(f, "{w:?}"),
            TokenKind::Identifier => f.write_str("identifier"),
            TokenKind::ForeignIdentifier => f.write_str("foreign identifier"),
            TokenKind::IntegerLiteral(_) => f.write_str("integer literal"),
            TokenKind::CharCodeLiteral => f.write_str("character code literal"),
            TokenKind::RealLiteral => f.write_str("real literal"),
            TokenKind::StringLiteral => f.write_str("string literal"),
            TokenKind::Operator(_) => f.write_str("operator"),
            TokenKind::Delimiter(_) => f.write_str("delimiter"),
            TokenKind::Synonym(_) => f.write_str("synonym symbol"),
            TokenKind::Directive => f.write_str("directive"),
            TokenKind::EndOfFile => f.write_str("end of file"),
        }
    }
}

/// Whitespace, comments, and comment-delimited directives. Trivia is
/// never consumed by the parser; it exists so source can be reproduced
/// exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trivia {
    pub kind: TriviaKind,
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriviaKind {
    Whitespace,
    /// Balanced `(*`/`*)` comment, including nested ones.
    Comment,
    /// Canonical `(*$...*)` directive.
    NonSemanticDirective,
    /// Legacy delimiter form such as `(*%...*)`.
    NonCanonicalDirective,
    /// Bytes skipped during error recovery (illegal characters).
    Skipped,
}
