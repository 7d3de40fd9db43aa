//! Recursive-descent parser for the fourth-edition grammar, with the
//! unary-minus restriction and panic-mode error recovery.
//!
//! The parser never fails: it always produces a compilation unit,
//! inserting error nodes and resynchronizing at statement and
//! declaration boundaries.

use crate::diagnostics::Diagnostic;
use crate::lexis::{
    reassemble, Delimiter, Operator, ReservedWord as Rw, SynonymSymbol, Token, TokenKind,
    TriviaKind,
};
use crate::policy::{severity_for, DialectConfig, FacilityId, Severity};
use crate::source::Span;
use crate::syntax::ast::*;
use crate::syntax::pragma::{
    directive_kv, directive_payload, parse_clients_pragma, parse_ffi_pragma, split_key,
    KNOWN_FOREIGN_APIS,
};
use std::collections::HashSet;

/// Parses one compilation unit from a token stream ending in
/// `EndOfFile`. Always returns a unit; errors surface as diagnostics
/// and error-recovery nodes.
pub fn parse_compilation_unit(
    tokens: Vec<Token>,
    config: &DialectConfig,
) -> (CompilationUnit, Vec<Diagnostic>) {
    let mut parser = Parser::new(&tokens, config);
    let mut unit = parser.parse_unit();
    let diagnostics = parser.finish();
    unit.source = reassemble(&tokens);
    unit.tokens = tokens;
    (unit, diagnostics)
}

/// Parses a single expression (used by tests and tools working on
/// fragments). The stream must end in `EndOfFile`.
pub fn parse_expression(
    tokens: &[Token],
    config: &DialectConfig,
) -> (Expression, Vec<Diagnostic>) {
    let mut parser = Parser::new(tokens, config);
    let expr = parser.expression();
    (expr, parser.finish())
}

struct Parser<'t> {
    tokens: &'t [Token],
    src: String,
    pos: usize,
    config: &'t DialectConfig,
    diagnostics: Vec<Diagnostic>,
    /// Spans of directive trivia consumed as unit pragmas.
    consumed_directives: HashSet<usize>,
    last_error_pos: Option<usize>,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token], config: &'t DialectConfig) -> Self {
        let mut p = Parser {
            tokens,
            src: reassemble(tokens),
            pos: 0,
            config,
            diagnostics: Vec::new(),
            consumed_directives: HashSet::new(),
            last_error_pos: None,
        };
        p.skip_directive_tokens();
        p
    }

    fn finish(self) -> Vec<Diagnostic> {
        let mut diags = self.diagnostics;
        diags.sort_by_key(|d| (d.span.start, d.code));
        diags
    }

    // ----- cursor ---------------------------------------------------

    fn skip_directive_tokens(&mut self) {
        while self
            .tokens
            .get(self.pos)
            .is_some_and(|t| t.kind == TokenKind::Directive)
        {
            self.pos += 1;
        }
    }

    fn current(&self) -> &'t Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn at_eof(&self) -> bool {
        self.current().kind == TokenKind::EndOfFile
    }

    fn bump(&mut self) -> &'t Token {
        let token = self.current();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
            self.skip_directive_tokens();
        }
        token
    }

    fn at_kw(&self, word: Rw) -> bool {
        self.current().is_reserved(word)
    }

    fn at_delim(&self, delim: Delimiter) -> bool {
        self.current().is_delimiter(delim)
    }

    fn at_op(&self, op: Operator) -> bool {
        self.current().is_operator(op)
    }

    fn at_ident(&self) -> bool {
        matches!(self.current().kind, TokenKind::Identifier | TokenKind::ForeignIdentifier)
    }

    fn eat_kw(&mut self, word: Rw) -> Option<Span> {
        self.at_kw(word).then(|| self.bump().span)
    }

    fn eat_delim(&mut self, delim: Delimiter) -> Option<Span> {
        self.at_delim(delim).then(|| self.bump().span)
    }

    fn eat_op(&mut self, op: Operator) -> Option<Span> {
        self.at_op(op).then(|| self.bump().span)
    }

    // ----- diagnostics and recovery ----------------------------------

    fn found_text(&self) -> String {
        let t = self.current();
        if t.kind == TokenKind::EndOfFile {
            "end of file".to_string()
        } else {
            format!("'{}'", t.text)
        }
    }

    fn syntax_error(&mut self, expected: &str) {
        // One diagnostic per stuck position keeps cascades quiet.
        if self.last_error_pos == Some(self.pos) {
            return;
        }
        self.last_error_pos = Some(self.pos);
        self.diagnostics.push(Diagnostic::new(
            "M2M-SYNTAX",
            Severity::Error,
            self.current().span,
            format!("expected {expected}, found {}", self.found_text()),
        ));
    }

    fn expect_delim(&mut self, delim: Delimiter, expected: &str) -> Option<Span> {
        let span = self.eat_delim(delim);
        if span.is_none() {
            self.syntax_error(expected);
        }
        span
    }

    fn expect_kw(&mut self, word: Rw, expected: &str) -> Option<Span> {
        let span = self.eat_kw(word);
        if span.is_none() {
            self.syntax_error(expected);
        }
        span
    }

    /// Skips tokens until a declaration/statement boundary: `;`, END,
    /// BEGIN, a declaration keyword, or one of `extra`.
    fn recover(&mut self, extra: &[Rw]) {
        while !self.at_eof() {
            let t = self.current();
            if t.is_delimiter(Delimiter::Semicolon) {
                return;
            }
            if let TokenKind::Reserved(word) = t.kind {
                if matches!(word, Rw::End | Rw::Begin | Rw::Const | Rw::Type | Rw::Var | Rw::Procedure | Rw::Module)
                    || extra.contains(&word)
                {
                    return;
                }
            }
            self.bump();
        }
    }

    // ----- identifiers ------------------------------------------------

    fn ident(&mut self, expected: &str) -> Option<Ident> {
        if self.at_ident() {
            let t = self.bump();
            Some(Ident { name: t.text.clone(), span: t.span })
        } else {
            self.syntax_error(expected);
            None
        }
    }

    /// Identifier in module-identifier position: foreign characters are
    /// rejected here even when the switch allows them elsewhere.
    fn module_ident(&mut self, expected: &str) -> Option<Ident> {
        if !self.at_ident() {
            self.syntax_error(expected);
            return None;
        }
        let t = self.bump();
        if t.kind == TokenKind::ForeignIdentifier && !t.policy_blocked {
            self.diagnostics.push(Diagnostic::new(
                "M2M-FOREIGN-IN-MODULE-ID",
                Severity::Error,
                t.span,
                format!("foreign characters are not permitted in module identifier '{}'", t.text),
            ));
        }
        Some(Ident { name: t.text.clone(), span: t.span })
    }

    fn ident_list(&mut self, expected: &str) -> Vec<Ident> {
        let mut names = Vec::new();
        while let Some(id) = self.ident(expected) {
            names.push(id);
            if self.eat_delim(Delimiter::Comma).is_none() {
                break;
            }
        }
        names
    }

    fn qualident(&mut self) -> Option<QualIdent> {
        let first = self.ident("identifier")?;
        let mut span = first.span;
        let mut parts = vec![first];
        while self.at_delim(Delimiter::Dot)
            && matches!(
                self.tokens.get(self.pos + 1).map(|t| t.kind),
                Some(TokenKind::Identifier | TokenKind::ForeignIdentifier)
            )
        {
            self.bump();
            let part = self.ident("identifier").expect("checked lookahead");
            span = span.cover(part.span);
            parts.push(part);
        }
        Some(QualIdent { parts, span })
    }

    // ----- compilation unit -------------------------------------------

    fn parse_unit(&mut self) -> CompilationUnit {
        let start_span = self.current().span;
        let unit_kind = if self.eat_kw(Rw::Definition).is_some() {
            self.expect_kw(Rw::Module, "MODULE");
            UnitKind::Definition
        } else if self.eat_kw(Rw::Implementation).is_some() {
            self.expect_kw(Rw::Module, "MODULE");
            UnitKind::Implementation
        } else if self.eat_kw(Rw::Module).is_some() {
            UnitKind::Program
        } else {
            self.syntax_error("DEFINITION, IMPLEMENTATION or MODULE");
            // Look for a module header anywhere ahead.
            while !self.at_eof()
                && !matches!(
                    self.current().kind,
                    TokenKind::Reserved(Rw::Definition | Rw::Implementation | Rw::Module)
                )
            {
                self.bump();
            }
            if self.at_eof() {
                return self.empty_unit(UnitKind::Program, start_span);
            }
            return self.parse_unit();
        };

        let module_name = self
            .module_ident("module name")
            .unwrap_or(Ident { name: String::new(), span: start_span });

        let priority = if unit_kind != UnitKind::Definition && self.at_delim(Delimiter::LBracket) {
            self.bump();
            let expr = self.expression();
            self.expect_delim(Delimiter::RBracket, "']'");
            Some(expr)
        } else {
            None
        };

        self.expect_delim(Delimiter::Semicolon, "';' after module header");

        let (ffi_pragma, clients_pragma) = self.header_pragmas(unit_kind);

        let imports = self.imports(true);

        let mut export_list = None;
        if self.at_kw(Rw::Export) {
            let export = self.export_clause();
            if unit_kind == UnitKind::Definition {
                export_list = export;
            } else {
                self.diagnostics.push(Diagnostic::new(
                    "M2M-SYNTAX",
                    Severity::Error,
                    export.map(|e| e.span).unwrap_or(start_span),
                    "export lists are only valid in definition modules",
                ));
            }
        }

        let block = if unit_kind == UnitKind::Definition {
            self.definition_block()
        } else {
            self.block()
        };

        let end_name = self.end_name(&module_name, "module");
        self.expect_delim(Delimiter::Dot, "'.' after final END");

        self.audit_directives();

        CompilationUnit {
            unit_kind,
            module_name,
            priority,
            ffi_pragma,
            clients_pragma,
            export_list,
            imports,
            block,
            end_name,
            source_file: Default::default(),
            source: String::new(),
            tokens: Vec::new(),
        }
    }

    fn empty_unit(&mut self, unit_kind: UnitKind, span: Span) -> CompilationUnit {
        self.audit_directives();
        CompilationUnit {
            unit_kind,
            module_name: Ident { name: String::new(), span },
            priority: None,
            ffi_pragma: None,
            clients_pragma: None,
            export_list: None,
            imports: Vec::new(),
            block: Block { declarations: Vec::new(), body: None, span },
            end_name: None,
            source_file: Default::default(),
            source: String::new(),
            tokens: Vec::new(),
        }
    }

    fn end_name(&mut self, opened_as: &Ident, what: &str) -> Option<Ident> {
        if !self.at_ident() {
            self.syntax_error(&format!("{what} name after END"));
            return None;
        }
        let name = self.ident("name").expect("checked");
        if !opened_as.name.is_empty() && name.name != opened_as.name {
            self.diagnostics.push(Diagnostic::new(
                "M2M-END-MISMATCH",
                Severity::Error,
                name.span,
                format!(
                    "END names '{}' but the {what} header names '{}'",
                    name.name, opened_as.name
                ),
            ));
        }
        Some(name)
    }

    // ----- pragmas ------------------------------------------------------

    /// Inspects the trivia attached to the token right after the module
    /// header for FFI and CLIENTS directives.
    fn header_pragmas(&mut self, unit_kind: UnitKind) -> (Option<FfiPragma>, Option<ClientsPragma>) {
        let mut ffi = None;
        let mut clients = None;
        for trivia in &self.current().leading_trivia {
            if trivia.kind != TriviaKind::NonSemanticDirective {
                continue;
            }
            let Some(payload) = directive_payload(&trivia.text) else { continue };
            let (key, rest) = split_key(payload);
            let is_kv = directive_kv(payload).is_some();
            match key {
                "CLIENTS" if is_kv => {
                    self.consumed_directives.insert(trivia.span.start);
                    let value = directive_kv(payload).expect("checked kv").1;
                    if unit_kind != UnitKind::Definition {
                        self.diagnostics.push(Diagnostic::new(
                            "M2M-CLIENTS-IGNORED",
                            Severity::Info,
                            trivia.span,
                            "CLIENTS directive ignored: only definition modules declare clients",
                        ));
                    } else if clients.is_some() {
                        self.diagnostics.push(Diagnostic::new(
                            "M2M-CLIENTS-IGNORED",
                            Severity::Info,
                            trivia.span,
                            "CLIENTS directive ignored: duplicate",
                        ));
                    } else {
                        match parse_clients_pragma(value, trivia.span) {
                            Ok(pragma) => clients = Some(pragma),
                            Err(reason) => self.diagnostics.push(Diagnostic::new(
                                "M2M-CLIENTS-IGNORED",
                                Severity::Info,
                                trivia.span,
                                format!("CLIENTS directive ignored: {reason}"),
                            )),
                        }
                    }
                }
                "F" | "FFI" if is_kv || key == "FFI" => {
                    self.consumed_directives.insert(trivia.span.start);
                    if unit_kind != UnitKind::Definition {
                        self.diagnostics.push(Diagnostic::new(
                            "M2M-FFI-POSITION",
                            Severity::Error,
                            trivia.span,
                            "FFI directive is only valid after a definition module header",
                        ));
                    } else if ffi.is_some() {
                        self.diagnostics.push(Diagnostic::new(
                            "M2M-FFI-POSITION",
                            Severity::Error,
                            trivia.span,
                            "duplicate FFI directive",
                        ));
                    } else {
                        match parse_ffi_pragma(trivia) {
                            Ok(pragma) => {
                                if !KNOWN_FOREIGN_APIS.contains(&pragma.foreign_api.as_str()) {
                                    self.diagnostics.push(Diagnostic::new(
                                        "M2M-FFI-API",
                                        Severity::Info,
                                        trivia.span,
                                        format!(
                                            "foreign API '{}' is not a well-known name; recorded verbatim",
                                            pragma.foreign_api
                                        ),
                                    ));
                                }
                                ffi = Some(pragma);
                            }
                            Err(err) => self.diagnostics.push(Diagnostic::new(
                                "M2M-FFI-MALFORMED",
                                Severity::Error,
                                trivia.span,
                                format!("malformed FFI directive: {}", err.describe()),
                            )),
                        }
                    }
                }
                _ if is_kv => {
                    self.consumed_directives.insert(trivia.span.start);
                    self.diagnostics.push(Diagnostic::new(
                        "M2M-DIRECTIVE-UNKNOWN",
                        Severity::Info,
                        trivia.span,
                        format!("unrecognized directive key '{key}'; preserved and ignored"),
                    ));
                }
                _ => {
                    // Switch-style directive; safely ignorable.
                    let _ = rest;
                }
            }
        }
        (ffi, clients)
    }

    /// After parsing, every canonical key-value directive that was not
    /// consumed at the header is reported: FFI markers are positional
    /// errors, CLIENTS markers are ignored with a note, unknown keys
    /// get an info note.
    fn audit_directives(&mut self) {
        for token in self.tokens {
            for trivia in &token.leading_trivia {
                if trivia.kind != TriviaKind::NonSemanticDirective
                    || self.consumed_directives.contains(&trivia.span.start)
                {
                    continue;
                }
                let Some(payload) = directive_payload(&trivia.text) else { continue };
                let Some((key, _)) = directive_kv(payload) else { continue };
                let diag = match key {
                    "F" | "FFI" => Diagnostic::new(
                        "M2M-FFI-POSITION",
                        Severity::Error,
                        trivia.span,
                        "FFI directive is only recognized immediately after a definition module header",
                    ),
                    "CLIENTS" => Diagnostic::new(
                        "M2M-CLIENTS-IGNORED",
                        Severity::Info,
                        trivia.span,
                        "CLIENTS directive ignored: only recognized immediately after a definition module header",
                    ),
                    other => Diagnostic::new(
                        "M2M-DIRECTIVE-UNKNOWN",
                        Severity::Info,
                        trivia.span,
                        format!("unrecognized directive key '{other}'; preserved and ignored"),
                    ),
                };
                self.diagnostics.push(diag);
            }
        }
    }

    // ----- imports and exports ------------------------------------------

    fn imports(&mut self, unit_level: bool) -> Vec<ImportClause> {
        let mut clauses = Vec::new();
        loop {
            if self.at_kw(Rw::From) {
                let start = self.bump().span;
                let from_module = self.module_ident("module name after FROM");
                self.expect_kw(Rw::Import, "IMPORT");
                let names = self.ident_list("imported identifier");
                let end = self
                    .expect_delim(Delimiter::Semicolon, "';' after import list")
                    .unwrap_or(start);
                clauses.push(ImportClause { from_module, names, span: start.cover(end) });
            } else if self.at_kw(Rw::Import) {
                let start = self.bump().span;
                let names = if unit_level {
                    // Plain imports at unit level name modules.
                    let mut names = Vec::new();
                    while let Some(id) = self.module_ident("module name") {
                        names.push(id);
                        if self.eat_delim(Delimiter::Comma).is_none() {
                            break;
                        }
                    }
                    names
                } else {
                    self.ident_list("imported identifier")
                };
                let end = self
                    .expect_delim(Delimiter::Semicolon, "';' after import list")
                    .unwrap_or(start);
                clauses.push(ImportClause { from_module: None, names, span: start.cover(end) });
            } else {
                break;
            }
        }
        clauses
    }

    fn export_clause(&mut self) -> Option<ExportList> {
        let start = self.eat_kw(Rw::Export)?;
        let qualified = self.eat_kw(Rw::Qualified).is_some();
        let names = self.ident_list("exported identifier");
        let end = self
            .expect_delim(Delimiter::Semicolon, "';' after export list")
            .unwrap_or(start);
        Some(ExportList { qualified, names, span: start.cover(end) })
    }

    // ----- blocks and declarations ----------------------------------------

    /// `{declaration} [BEGIN StatementSequence] END` — consumes END.
    fn block(&mut self) -> Block {
        let start = self.current().span;
        let declarations = self.declarations(false);
        let body = if self.eat_kw(Rw::Begin).is_some() {
            Some(self.statement_seq(&[Rw::End]))
        } else {
            None
        };
        let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
        Block { declarations, body, span: start.cover(end) }
    }

    /// `{definition} END` — consumes END.
    fn definition_block(&mut self) -> Block {
        let start = self.current().span;
        let declarations = self.declarations(true);
        if self.at_kw(Rw::Begin) {
            self.syntax_error("no statement part in a definition module");
            self.bump();
            let _ = self.statement_seq(&[Rw::End]);
        }
        let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
        Block { declarations, body: None, span: start.cover(end) }
    }

    fn declarations(&mut self, in_definition: bool) -> Vec<Declaration> {
        let mut decls = Vec::new();
        loop {
            let before = self.pos;
            if self.at_kw(Rw::Const) {
                self.bump();
                decls.push(Declaration::Const(self.const_decls()));
            } else if self.at_kw(Rw::Type) {
                self.bump();
                decls.push(Declaration::Type(self.type_decls()));
            } else if self.at_kw(Rw::Var) {
                self.bump();
                decls.push(Declaration::Var(self.var_decls()));
            } else if self.at_kw(Rw::Procedure) {
                decls.push(Declaration::Procedure(self.procedure_decl(in_definition)));
                self.expect_delim(Delimiter::Semicolon, "';' after procedure");
            } else if !in_definition && self.at_kw(Rw::Module) {
                decls.push(Declaration::Module(self.local_module()));
                self.expect_delim(Delimiter::Semicolon, "';' after local module");
            } else if self.at_kw(Rw::Begin) || self.at_kw(Rw::End) || self.at_eof() {
                break;
            } else if in_definition && self.at_kw(Rw::Export) {
                // Handled by the caller for the unit level; a stray one
                // here is still consumed so parsing can continue.
                let span = self.current().span;
                let _ = self.export_clause();
                self.diagnostics.push(Diagnostic::new(
                    "M2M-SYNTAX",
                    Severity::Error,
                    span,
                    "export list must precede all definitions",
                ));
            } else {
                self.syntax_error("declaration");
                self.recover(&[]);
                if self.at_delim(Delimiter::Semicolon) {
                    self.bump();
                }
                if self.pos == before {
                    self.bump();
                }
            }
        }
        decls
    }

    fn const_decls(&mut self) -> Vec<ConstDecl> {
        let mut decls = Vec::new();
        while self.at_ident() {
            let name = self.ident("constant name").expect("checked");
            self.expect_op_equal();
            let value = self.expression();
            let end = self
                .expect_delim(Delimiter::Semicolon, "';' after constant declaration")
                .unwrap_or(value.span());
            let span = name.span.cover(end);
            decls.push(ConstDecl { name, value, span });
        }
        decls
    }

    fn expect_op_equal(&mut self) {
        if self.eat_op(Operator::Equal).is_none() {
            self.syntax_error("'='");
        }
    }

    fn type_decls(&mut self) -> Vec<TypeDecl> {
        let mut decls = Vec::new();
        while self.at_ident() {
            let name = self.ident("type name").expect("checked");
            let ty = if self.eat_op(Operator::Equal).is_some() {
                Some(self.parse_type())
            } else {
                // Opaque type (definition modules).
                None
            };
            let end = self
                .expect_delim(Delimiter::Semicolon, "';' after type declaration")
                .unwrap_or(name.span);
            let span = name.span.cover(end);
            decls.push(TypeDecl { name, ty, span });
        }
        decls
    }

    fn var_decls(&mut self) -> Vec<VarDecl> {
        let mut decls = Vec::new();
        while self.at_ident() {
            let names = self.ident_list("variable name");
            self.expect_delim(Delimiter::Colon, "':' in variable declaration");
            let ty = self.parse_type();
            let end = self
                .expect_delim(Delimiter::Semicolon, "';' after variable declaration")
                .unwrap_or(ty.span());
            let span = names.first().map(|n| n.span).unwrap_or(end).cover(end);
            decls.push(VarDecl { names, ty, span });
        }
        decls
    }

    fn procedure_decl(&mut self, in_definition: bool) -> ProcedureDecl {
        let start = self.expect_kw(Rw::Procedure, "PROCEDURE").unwrap_or(self.current().span);
        let name = self
            .ident("procedure name")
            .unwrap_or(Ident { name: String::new(), span: start });
        let params = if self.at_delim(Delimiter::LParen) {
            self.formal_params()
        } else {
            Vec::new()
        };
        let return_type = if self.eat_delim(Delimiter::Colon).is_some() {
            self.qualident()
        } else {
            None
        };
        let heading_span = start.cover(self.tokens[self.pos.saturating_sub(1)].span);
        let heading = ProcedureHeading { name: name.clone(), params, return_type, span: heading_span };
        if in_definition {
            return ProcedureDecl { heading, block: None, end_name: None, span: heading_span };
        }
        self.expect_delim(Delimiter::Semicolon, "';' after procedure heading");
        let block = self.block();
        let end_name = self.end_name(&name, "procedure");
        let span = start.cover(end_name.as_ref().map(|n| n.span).unwrap_or(block.span));
        ProcedureDecl { heading, block: Some(block), end_name, span }
    }

    fn formal_params(&mut self) -> Vec<FormalParam> {
        let mut params = Vec::new();
        self.expect_delim(Delimiter::LParen, "'('");
        if self.eat_delim(Delimiter::RParen).is_some() {
            return params;
        }
        loop {
            let is_var = self.eat_kw(Rw::Var).is_some();
            let names = self.ident_list("parameter name");
            self.expect_delim(Delimiter::Colon, "':' in parameter section");
            let ty = self.formal_type();
            let span = names
                .first()
                .map(|n| n.span)
                .unwrap_or(ty.span)
                .cover(ty.span);
            params.push(FormalParam { is_var, names, ty, span });
            if self.eat_delim(Delimiter::Semicolon).is_none() {
                break;
            }
        }
        self.expect_delim(Delimiter::RParen, "')' after parameters");
        params
    }

    fn formal_type(&mut self) -> FormalType {
        let start = self.current().span;
        let open_array = if self.eat_kw(Rw::Array).is_some() {
            self.expect_kw(Rw::Of, "OF");
            true
        } else {
            false
        };
        let ty = self.qualident().unwrap_or(QualIdent {
            parts: vec![Ident { name: String::new(), span: start }],
            span: start,
        });
        FormalType { open_array, span: start.cover(ty.span), ty }
    }

    fn local_module(&mut self) -> LocalModuleNode {
        let start = self.expect_kw(Rw::Module, "MODULE").unwrap_or(self.current().span);
        let name = self
            .module_ident("module name")
            .unwrap_or(Ident { name: String::new(), span: start });
        let priority = if self.at_delim(Delimiter::LBracket) {
            self.bump();
            let expr = self.expression();
            self.expect_delim(Delimiter::RBracket, "']'");
            Some(expr)
        } else {
            None
        };
        self.expect_delim(Delimiter::Semicolon, "';' after module header");
        let imports = self.imports(false);
        let export = if self.at_kw(Rw::Export) { self.export_clause() } else { None };
        let block = self.block();
        let end_name = self.end_name(&name, "module");
        let span = start.cover(end_name.as_ref().map(|n| n.span).unwrap_or(block.span));
        LocalModuleNode { name, priority, imports, export, block, end_name, span }
    }

    // ----- types -----------------------------------------------------------

    fn parse_type(&mut self) -> TypeNode {
        let start = self.current().span;
        if self.at_kw(Rw::Array) {
            return self.array_type();
        }
        if self.at_kw(Rw::Record) {
            return self.record_type();
        }
        if self.at_kw(Rw::Set) {
            self.bump();
            self.expect_kw(Rw::Of, "OF");
            let base = self.simple_type();
            let span = start.cover(base.span());
            return TypeNode::Set { base: Box::new(base), span };
        }
        if self.at_kw(Rw::Pointer) {
            self.bump();
            self.expect_kw(Rw::To, "TO");
            let target = self.parse_type();
            let span = start.cover(target.span());
            return TypeNode::Pointer { target: Box::new(target), span };
        }
        if self.at_kw(Rw::Procedure) {
            return self.procedure_type();
        }
        self.simple_type()
    }

    /// SimpleType: qualident, optional subrange, enumeration, or a bare
    /// subrange.
    fn simple_type(&mut self) -> TypeNode {
        let start = self.current().span;
        if self.at_delim(Delimiter::LParen) {
            self.bump();
            let values = self.ident_list("enumeration constant");
            let end = self.expect_delim(Delimiter::RParen, "')'").unwrap_or(start);
            return TypeNode::Enumeration { values, span: start.cover(end) };
        }
        if self.at_delim(Delimiter::LBracket) {
            return self.subrange(None, start);
        }
        if self.at_ident() {
            let q = self.qualident().expect("checked");
            if self.at_delim(Delimiter::LBracket) {
                let start = q.span;
                return self.subrange(Some(q), start);
            }
            return TypeNode::Named(q);
        }
        self.syntax_error("type");
        let span = self.current().span;
        if !self.at_eof() && !self.at_delim(Delimiter::Semicolon) {
            self.bump();
        }
        TypeNode::Error(span)
    }

    fn subrange(&mut self, base: Option<QualIdent>, start: Span) -> TypeNode {
        self.expect_delim(Delimiter::LBracket, "'['");
        let low = self.expression();
        if self.eat_op(Operator::Range).is_none() {
            self.syntax_error("'..'");
        }
        let high = self.expression();
        let end = self.expect_delim(Delimiter::RBracket, "']'").unwrap_or(high.span());
        TypeNode::Subrange { base, low, high, span: start.cover(end) }
    }

    fn array_type(&mut self) -> TypeNode {
        let start = self.expect_kw(Rw::Array, "ARRAY").unwrap_or(self.current().span);
        let mut index_ranges = vec![self.simple_type()];
        while self.eat_delim(Delimiter::Comma).is_some() {
            index_ranges.push(self.simple_type());
        }
        self.expect_kw(Rw::Of, "OF");
        let element = self.parse_type();
        let span = start.cover(element.span());
        TypeNode::Array(ArrayTypeNode { index_ranges, element_type: Box::new(element), span })
    }

    fn record_type(&mut self) -> TypeNode {
        let start = self.expect_kw(Rw::Record, "RECORD").unwrap_or(self.current().span);
        let items = self.field_list_sequence();
        let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
        TypeNode::Record(RecordTypeNode { items, span: start.cover(end) })
    }

    fn field_list_sequence(&mut self) -> Vec<FieldListItem> {
        let mut items = Vec::new();
        loop {
            if self.at_kw(Rw::End) || self.at_kw(Rw::Else) || self.at_delim(Delimiter::Bar) || self.at_eof() {
                break;
            }
            if self.eat_delim(Delimiter::Semicolon).is_some() {
                continue;
            }
            if self.at_kw(Rw::Case) {
                items.push(FieldListItem::Variant(self.variant_part()));
            } else if self.at_ident() {
                let names = self.ident_list("field name");
                self.expect_delim(Delimiter::Colon, "':' in field list");
                let ty = self.parse_type();
                let span = names.first().map(|n| n.span).unwrap_or(ty.span()).cover(ty.span());
                items.push(FieldListItem::Fixed(FixedFields { names, ty, span }));
            } else {
                self.syntax_error("field list");
                self.recover(&[Rw::Else, Rw::Case]);
                if !self.at_delim(Delimiter::Semicolon)
                    && !self.at_kw(Rw::End)
                    && !self.at_kw(Rw::Else)
                    && !self.at_kw(Rw::Case)
                {
                    if self.at_eof() {
                        break;
                    }
                    self.bump();
                }
            }
            if self.eat_delim(Delimiter::Semicolon).is_none()
                && !(self.at_kw(Rw::End) || self.at_kw(Rw::Else) || self.at_delim(Delimiter::Bar))
            {
                break;
            }
        }
        items
    }

    /// `CASE [ident ':'] qualident OF variant {'|' variant} [ELSE ...] END`
    fn variant_part(&mut self) -> VariantPart {
        let start = self.expect_kw(Rw::Case, "CASE").unwrap_or(self.current().span);
        let tag_field = if self.at_ident()
            && self.tokens.get(self.pos + 1).is_some_and(|t| t.is_delimiter(Delimiter::Colon))
        {
            let id = self.ident("tag field").expect("checked");
            self.bump(); // :
            Some(id)
        } else {
            None
        };
        let tag_type = self.qualident().unwrap_or(QualIdent {
            parts: vec![Ident { name: String::new(), span: start }],
            span: start,
        });
        self.expect_kw(Rw::Of, "OF");
        let mut cases = Vec::new();
        loop {
            if self.at_kw(Rw::End) || self.at_kw(Rw::Else) || self.at_eof() {
                break;
            }
            if self.eat_delim(Delimiter::Bar).is_some() {
                continue;
            }
            let case_start = self.current().span;
            let labels = self.case_labels();
            self.expect_delim(Delimiter::Colon, "':' after case labels");
            let items = self.field_list_sequence();
            let span = case_start.cover(self.current().span);
            cases.push(VariantCase { labels, items, span });
            if !self.at_delim(Delimiter::Bar) {
                break;
            }
        }
        let else_items = if self.eat_kw(Rw::Else).is_some() {
            self.field_list_sequence()
        } else {
            Vec::new()
        };
        let end = self.expect_kw(Rw::End, "END of variant part").unwrap_or(start);
        VariantPart { tag_field, tag_type, cases, else_items, span: start.cover(end) }
    }

    fn case_labels(&mut self) -> Vec<CaseLabel> {
        let mut labels = Vec::new();
        loop {
            let low = self.expression();
            let high = if self.eat_op(Operator::Range).is_some() {
                Some(self.expression())
            } else {
                None
            };
            let span = low.span().cover(high.as_ref().map(|h| h.span()).unwrap_or(low.span()));
            labels.push(CaseLabel { low, high, span });
            if self.eat_delim(Delimiter::Comma).is_none() {
                break;
            }
        }
        labels
    }

    fn procedure_type(&mut self) -> TypeNode {
        let start = self.expect_kw(Rw::Procedure, "PROCEDURE").unwrap_or(self.current().span);
        let mut params = Vec::new();
        let mut return_type = None;
        let mut end = start;
        if self.at_delim(Delimiter::LParen) {
            self.bump();
            if !self.at_delim(Delimiter::RParen) {
                loop {
                    let is_var = self.eat_kw(Rw::Var).is_some();
                    let open_array = if self.eat_kw(Rw::Array).is_some() {
                        self.expect_kw(Rw::Of, "OF");
                        true
                    } else {
                        false
                    };
                    let ty = self.qualident().unwrap_or(QualIdent {
                        parts: vec![Ident { name: String::new(), span: start }],
                        span: start,
                    });
                    params.push(ProcTypeParam { is_var, open_array, ty });
                    if self.eat_delim(Delimiter::Comma).is_none() {
                        break;
                    }
                }
            }
            end = self.expect_delim(Delimiter::RParen, "')'").unwrap_or(end);
            if self.eat_delim(Delimiter::Colon).is_some() {
                return_type = self.qualident();
                end = return_type.as_ref().map(|q| q.span).unwrap_or(end);
            }
        }
        TypeNode::ProcedureType { params, return_type, span: start.cover(end) }
    }

    // ----- statements ---------------------------------------------------

    fn statement_seq(&mut self, terminators: &[Rw]) -> StatementSeq {
        let start = self.current().span;
        let mut statements = Vec::new();
        let stop = |p: &Self| {
            p.at_eof()
                || p.at_delim(Delimiter::Bar)
                || matches!(p.current().kind, TokenKind::Reserved(w) if terminators.contains(&w) || matches!(w, Rw::End | Rw::Elsif | Rw::Else | Rw::Until))
        };
        loop {
            if stop(self) {
                break;
            }
            if self.eat_delim(Delimiter::Semicolon).is_some() {
                // Empty statement.
                continue;
            }
            let before = self.pos;
            statements.push(self.statement());
            if self.eat_delim(Delimiter::Semicolon).is_some() {
                continue;
            }
            if stop(self) {
                break;
            }
            self.syntax_error("';' between statements");
            self.recover(&[Rw::Else, Rw::Elsif, Rw::Until, Rw::Do, Rw::Then]);
            if self.pos == before {
                self.bump();
            }
        }
        let span = start.cover(self.current().span);
        StatementSeq { statements, span }
    }

    fn statement(&mut self) -> Statement {
        let start = self.current().span;
        match self.current().kind {
            TokenKind::Identifier | TokenKind::ForeignIdentifier => {
                let target = self.designator();
                if self.eat_op(Operator::Assign).is_some() {
                    let value = self.expression();
                    let span = start.cover(value.span());
                    Statement::Assignment { target, value, span }
                } else if self.at_delim(Delimiter::LParen) {
                    let args = self.call_args();
                    let span = start.cover(args.rparen_span);
                    Statement::ProcedureCall { callee: target, args: Some(args), span }
                } else {
                    let span = target.span;
                    Statement::ProcedureCall { callee: target, args: None, span }
                }
            }
            TokenKind::Reserved(Rw::If) => self.if_statement(),
            TokenKind::Reserved(Rw::Case) => self.case_statement(),
            TokenKind::Reserved(Rw::While) => {
                self.bump();
                let cond = self.expression();
                self.expect_kw(Rw::Do, "DO");
                let body = self.statement_seq(&[]);
                let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
                Statement::While { cond, body, span: start.cover(end) }
            }
            TokenKind::Reserved(Rw::Repeat) => {
                self.bump();
                let body = self.statement_seq(&[Rw::Until]);
                self.expect_kw(Rw::Until, "UNTIL");
                let cond = self.expression();
                let span = start.cover(cond.span());
                Statement::Repeat { body, cond, span }
            }
            TokenKind::Reserved(Rw::Loop) => {
                self.bump();
                let body = self.statement_seq(&[]);
                let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
                Statement::Loop { body, span: start.cover(end) }
            }
            TokenKind::Reserved(Rw::For) => {
                self.bump();
                let var = self
                    .ident("loop variable")
                    .unwrap_or(Ident { name: String::new(), span: start });
                if self.eat_op(Operator::Assign).is_none() {
                    self.syntax_error("':='");
                }
                let from = self.expression();
                self.expect_kw(Rw::To, "TO");
                let to = self.expression();
                let by = if self.eat_kw(Rw::By).is_some() {
                    Some(self.expression())
                } else {
                    None
                };
                self.expect_kw(Rw::Do, "DO");
                let body = self.statement_seq(&[]);
                let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
                Statement::For { var, from, to, by, body, span: start.cover(end) }
            }
            TokenKind::Reserved(Rw::With) => {
                self.bump();
                let target = self.designator();
                self.expect_kw(Rw::Do, "DO");
                let body = self.statement_seq(&[]);
                let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
                Statement::With { target, body, span: start.cover(end) }
            }
            TokenKind::Reserved(Rw::Exit) => {
                self.bump();
                Statement::Exit(start)
            }
            TokenKind::Reserved(Rw::Return) => {
                self.bump();
                let value = if self.starts_expression() {
                    Some(self.expression())
                } else {
                    None
                };
                let span = start.cover(value.as_ref().map(|v| v.span()).unwrap_or(start));
                Statement::Return { value, span }
            }
            _ => {
                self.syntax_error("statement");
                if !self.at_eof() {
                    self.bump();
                }
                Statement::Error(start)
            }
        }
    }

    fn if_statement(&mut self) -> Statement {
        let start = self.expect_kw(Rw::If, "IF").unwrap_or(self.current().span);
        let mut arms = Vec::new();
        let cond = self.expression();
        self.expect_kw(Rw::Then, "THEN");
        let body = self.statement_seq(&[]);
        arms.push((cond, body));
        while self.eat_kw(Rw::Elsif).is_some() {
            let cond = self.expression();
            self.expect_kw(Rw::Then, "THEN");
            let body = self.statement_seq(&[]);
            arms.push((cond, body));
        }
        let else_arm = if self.eat_kw(Rw::Else).is_some() {
            Some(self.statement_seq(&[]))
        } else {
            None
        };
        let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
        Statement::If { arms, else_arm, span: start.cover(end) }
    }

    fn case_statement(&mut self) -> Statement {
        let start = self.expect_kw(Rw::Case, "CASE").unwrap_or(self.current().span);
        let subject = self.expression();
        self.expect_kw(Rw::Of, "OF");
        let mut arms = Vec::new();
        loop {
            if self.at_kw(Rw::End) || self.at_kw(Rw::Else) || self.at_eof() {
                break;
            }
            if self.eat_delim(Delimiter::Bar).is_some() {
                continue;
            }
            let arm_start = self.current().span;
            let labels = self.case_labels();
            self.expect_delim(Delimiter::Colon, "':' after case labels");
            let body = self.statement_seq(&[]);
            let span = arm_start.cover(body.span);
            arms.push(CaseArm { labels, body, span });
            if !self.at_delim(Delimiter::Bar) {
                break;
            }
        }
        let else_arm = if self.eat_kw(Rw::Else).is_some() {
            Some(self.statement_seq(&[]))
        } else {
            None
        };
        let end = self.expect_kw(Rw::End, "END").unwrap_or(start);
        Statement::Case { subject, arms, else_arm, span: start.cover(end) }
    }

    fn call_args(&mut self) -> CallArgs {
        let lparen_span = self.expect_delim(Delimiter::LParen, "'('").unwrap_or(self.current().span);
        let mut args = Vec::new();
        if !self.at_delim(Delimiter::RParen) {
            loop {
                args.push(self.expression());
                if self.eat_delim(Delimiter::Comma).is_none() {
                    break;
                }
            }
        }
        let rparen_span = self
            .expect_delim(Delimiter::RParen, "')' after arguments")
            .unwrap_or(lparen_span);
        CallArgs { args, lparen_span, rparen_span }
    }

    fn designator(&mut self) -> Designator {
        let base = self.ident("identifier").unwrap_or(Ident {
            name: String::new(),
            span: self.current().span,
        });
        let mut span = base.span;
        let mut selectors = Vec::new();
        loop {
            if self.at_delim(Delimiter::Dot)
                && matches!(
                    self.tokens.get(self.pos + 1).map(|t| t.kind),
                    Some(TokenKind::Identifier | TokenKind::ForeignIdentifier)
                )
            {
                self.bump();
                let field = self.ident("field name").expect("checked lookahead");
                span = span.cover(field.span);
                selectors.push(Selector::Field(field));
            } else if self.at_delim(Delimiter::LBracket) {
                let start = self.bump().span;
                let mut exprs = vec![self.expression()];
                while self.eat_delim(Delimiter::Comma).is_some() {
                    exprs.push(self.expression());
                }
                let end = self.expect_delim(Delimiter::RBracket, "']'").unwrap_or(start);
                span = span.cover(end);
                selectors.push(Selector::Index { exprs, span: start.cover(end) });
            } else if self.at_op(Operator::Deref) {
                let deref = self.bump().span;
                span = span.cover(deref);
                selectors.push(Selector::Deref(deref));
            } else {
                break;
            }
        }
        Designator { base, selectors, span }
    }

    fn starts_expression(&self) -> bool {
        matches!(
            self.current().kind,
            TokenKind::Identifier
                | TokenKind::ForeignIdentifier
                | TokenKind::IntegerLiteral(_)
                | TokenKind::CharCodeLiteral
                | TokenKind::RealLiteral
                | TokenKind::StringLiteral
                | TokenKind::Delimiter(Delimiter::LParen)
                | TokenKind::Delimiter(Delimiter::LBrace)
                | TokenKind::Operator(Operator::Plus)
                | TokenKind::Operator(Operator::Minus)
                | TokenKind::Reserved(Rw::Not)
                | TokenKind::Synonym(SynonymSymbol::Tilde)
        )
    }

    // ----- expressions -----------------------------------------------------

    fn expression(&mut self) -> Expression {
        let lhs = self.simple_expression();
        let op = match self.current().kind {
            TokenKind::Operator(Operator::Equal) => Some(RelationOp::Equal),
            TokenKind::Operator(Operator::NotEqual) => Some(RelationOp::NotEqual),
            TokenKind::Synonym(SynonymSymbol::NotEquals) => Some(RelationOp::NotEqual),
            TokenKind::Operator(Operator::Less) => Some(RelationOp::Less),
            TokenKind::Operator(Operator::LessEqual) => Some(RelationOp::LessEqual),
            TokenKind::Operator(Operator::Greater) => Some(RelationOp::Greater),
            TokenKind::Operator(Operator::GreaterEqual) => Some(RelationOp::GreaterEqual),
            TokenKind::Reserved(Rw::In) => Some(RelationOp::In),
            _ => None,
        };
        let Some(op) = op else {
            return Expression::Simple(lhs);
        };
        self.bump();
        let rhs = self.simple_expression();
        let span = lhs.span.cover(rhs.span);
        Expression::Relation { lhs: Box::new(lhs), op, rhs: Box::new(rhs), span }
    }

    /// `( '+' )? term ( addOp term )* | '-' factor` — a leading minus
    /// followed by more than a single factor is the ambiguity the
    /// restricted grammar outlaws. The permissive tree is built either
    /// way so tooling can keep working.
    fn simple_expression(&mut self) -> SimpleExpr {
        let start = self.current().span;
        let (sign, sign_span) = if self.at_op(Operator::Plus) {
            (Some(Sign::Plus), Some(self.bump().span))
        } else if self.at_op(Operator::Minus) {
            (Some(Sign::Minus), Some(self.bump().span))
        } else {
            (None, None)
        };
        let first = self.term();
        let mut rest = Vec::new();
        loop {
            let op = match self.current().kind {
                TokenKind::Operator(Operator::Plus) => AddOp::Plus,
                TokenKind::Operator(Operator::Minus) => AddOp::Minus,
                TokenKind::Reserved(Rw::Or) => AddOp::Or,
                _ => break,
            };
            self.bump();
            let term = self.term();
            rest.push((op, term));
        }
        let end = rest.last().map(|(_, t)| t.span).unwrap_or(first.span);
        let span = start.cover(end);
        if sign == Some(Sign::Minus) && (!first.rest.is_empty() || !rest.is_empty()) {
            self.report_ambiguous_minus(&first, span);
        }
        SimpleExpr { sign, sign_span, first, rest, span }
    }

    fn report_ambiguous_minus(&mut self, first: &Term, expr_span: Span) {
        let factor_span = first.first.span();
        let operand_text = self.slice(factor_span.start, expr_span.end);
        let factor_text = self.slice(factor_span.start, factor_span.end);
        let tail_text = self.slice(factor_span.end, expr_span.end);
        let mathematical = format!("(-{factor_text}){tail_text}");
        let grammatical = format!("-({operand_text})");
        self.diagnostics.push(Diagnostic::new(
            "M2M-UMINUS",
            severity_for(FacilityId::AmbiguousUnaryMinus, self.config),
            expr_span,
            format!(
                "unary minus before more than one factor; write '{mathematical}' or '{grammatical}' to make the intent explicit"
            ),
        ));
    }

    /// Source slice with whitespace runs collapsed to single spaces,
    /// trailing whitespace trimmed, for messages.
    fn slice(&self, start: usize, end: usize) -> String {
        let raw = self.src.get(start..end).unwrap_or("");
        let mut out = String::with_capacity(raw.len());
        let mut in_ws = false;
        for c in raw.chars() {
            if c.is_ascii_whitespace() {
                if !in_ws {
                    out.push(' ');
                }
                in_ws = true;
            } else {
                in_ws = false;
                out.push(c);
            }
        }
        out.trim_end().to_string()
    }

    fn term(&mut self) -> Term {
        let first = self.factor();
        let mut span = first.span();
        let mut rest = Vec::new();
        loop {
            let op = match self.current().kind {
                TokenKind::Operator(Operator::Star) => MulOp::Star,
                TokenKind::Operator(Operator::Slash) => MulOp::Slash,
                TokenKind::Reserved(Rw::Div) => MulOp::Div,
                TokenKind::Reserved(Rw::Mod) => MulOp::Mod,
                TokenKind::Reserved(Rw::And) => MulOp::And,
                TokenKind::Synonym(SynonymSymbol::Ampersand) => MulOp::And,
                _ => break,
            };
            self.bump();
            let factor = self.factor();
            span = span.cover(factor.span());
            rest.push((op, factor));
        }
        Term { first, rest, span }
    }

    fn factor(&mut self) -> Factor {
        let start = self.current().span;
        match self.current().kind {
            TokenKind::IntegerLiteral(_) => {
                let t = self.bump();
                Factor::IntegerLiteral { text: t.text.clone(), span: t.span }
            }
            TokenKind::CharCodeLiteral => {
                let t = self.bump();
                Factor::CharCodeLiteral { text: t.text.clone(), span: t.span }
            }
            TokenKind::RealLiteral => {
                let t = self.bump();
                Factor::RealLiteral { text: t.text.clone(), span: t.span }
            }
            TokenKind::StringLiteral => {
                let t = self.bump();
                Factor::StringLiteral { text: t.text.clone(), span: t.span }
            }
            TokenKind::Delimiter(Delimiter::LBrace) => self.set_literal(None, start),
            TokenKind::Delimiter(Delimiter::LParen) => {
                self.bump();
                let inner = self.expression();
                let end = self.expect_delim(Delimiter::RParen, "')'").unwrap_or(start);
                Factor::Paren { inner: Box::new(inner), span: start.cover(end) }
            }
            TokenKind::Reserved(Rw::Not) | TokenKind::Synonym(SynonymSymbol::Tilde) => {
                self.bump();
                let operand = self.factor();
                let span = start.cover(operand.span());
                Factor::Not { operand: Box::new(operand), span }
            }
            TokenKind::Identifier | TokenKind::ForeignIdentifier => {
                let designator = self.designator();
                if self.at_delim(Delimiter::LBrace) && designator.selectors.iter().all(|s| matches!(s, Selector::Field(_))) {
                    let base_span = designator.span;
                    let mut parts = vec![designator.base.clone()];
                    for s in &designator.selectors {
                        if let Selector::Field(f) = s {
                            parts.push(f.clone());
                        }
                    }
                    let q = QualIdent { parts, span: base_span };
                    return self.set_literal(Some(q), base_span);
                }
                if self.at_delim(Delimiter::LParen) {
                    let args = self.call_args();
                    let span = start.cover(args.rparen_span);
                    return Factor::Call(CallExpr {
                        callee: designator,
                        args: args.args,
                        lparen_span: args.lparen_span,
                        rparen_span: args.rparen_span,
                        span,
                    });
                }
                Factor::Designator(designator)
            }
            _ => {
                self.syntax_error("expression");
                if !self.at_eof()
                    && !self.at_delim(Delimiter::Semicolon)
                    && !matches!(self.current().kind, TokenKind::Reserved(Rw::End | Rw::Then | Rw::Do | Rw::Of | Rw::Else | Rw::Elsif | Rw::Until | Rw::To | Rw::By))
                {
                    self.bump();
                }
                Factor::Error(start)
            }
        }
    }

    fn set_literal(&mut self, base: Option<QualIdent>, start: Span) -> Factor {
        self.expect_delim(Delimiter::LBrace, "'{'");
        let mut elements = Vec::new();
        if !self.at_delim(Delimiter::RBrace) && !self.at_eof() {
            loop {
                let low = self.expression();
                let high = if self.eat_op(Operator::Range).is_some() {
                    Some(self.expression())
                } else {
                    None
                };
                let span = low
                    .span()
                    .cover(high.as_ref().map(|h| h.span()).unwrap_or(low.span()));
                elements.push(SetElement { low, high, span });
                if self.eat_delim(Delimiter::Comma).is_none() {
                    break;
                }
            }
        }
        let end = self.expect_delim(Delimiter::RBrace, "'}'").unwrap_or(start);
        Factor::SetLiteral { base, elements, span: start.cover(end) }
    }
}
