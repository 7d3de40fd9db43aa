//! Full-fidelity AST for definition, implementation, and program
//! modules.
//!
//! Nodes store spans into the original source; the compilation unit
//! keeps the token stream (and with it all trivia), so emitting the
//! tokens reproduces the input exactly and every rewrite can slice
//! original text.

use crate::lexis::Token;
use crate::source::Span;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnitKind {
    Definition,
    Implementation,
    Program,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

/// A parsed `.def`/`.mod` compilation unit.
#[derive(Debug, Clone, PartialEq)]
pub struct CompilationUnit {
    pub unit_kind: UnitKind,
    pub module_name: Ident,
    pub priority: Option<Expression>,
    pub ffi_pragma: Option<FfiPragma>,
    pub clients_pragma: Option<ClientsPragma>,
    /// Pre-revision export list; always flagged by policy.
    pub export_list: Option<ExportList>,
    pub imports: Vec<ImportClause>,
    pub block: Block,
    pub end_name: Option<Ident>,
    pub source_file: PathBuf,
    /// Exact source text, reassembled from the token stream.
    pub source: String,
    /// The complete token stream, trivia included.
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfiKey {
    F,
    Ffi,
}

/// `(*$FFI="C"*)` after a definition module header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FfiPragma {
    pub key: FfiKey,
    /// Foreign API name, recorded verbatim.
    pub foreign_api: String,
    pub span: Span,
}

/// `(*$CLIENTS=FooLib, BarLib*)` after a definition module header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientsPragma {
    pub client_module_names: Vec<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportList {
    pub qualified: bool,
    pub names: Vec<Ident>,
    /// From the EXPORT keyword through the terminating semicolon.
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportClause {
    /// `FROM Foo IMPORT ...` when present.
    pub from_module: Option<Ident>,
    pub names: Vec<Ident>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub declarations: Vec<Declaration>,
    pub body: Option<StatementSeq>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    Const(Vec<ConstDecl>),
    Type(Vec<TypeDecl>),
    Var(Vec<VarDecl>),
    Procedure(ProcedureDecl),
    Module(LocalModuleNode),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstDecl {
    pub name: Ident,
    pub value: Expression,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeDecl {
    pub name: Ident,
    /// `None` for opaque types in definition modules.
    pub ty: Option<TypeNode>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub names: Vec<Ident>,
    pub ty: TypeNode,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcedureDecl {
    pub heading: ProcedureHeading,
    /// Absent in definition modules.
    pub block: Option<Block>,
    pub end_name: Option<Ident>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcedureHeading {
    pub name: Ident,
    pub params: Vec<FormalParam>,
    pub return_type: Option<QualIdent>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalParam {
    pub is_var: bool,
    pub names: Vec<Ident>,
    pub ty: FormalType,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalType {
    pub open_array: bool,
    pub ty: QualIdent,
    pub span: Span,
}

/// A module declared inside another module's block. Always marked as a
/// use of the local-module facility.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalModuleNode {
    pub name: Ident,
    pub priority: Option<Expression>,
    pub imports: Vec<ImportClause>,
    pub export: Option<ExportList>,
    pub block: Block,
    pub end_name: Option<Ident>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualIdent {
    pub parts: Vec<Ident>,
    pub span: Span,
}

impl QualIdent {
    pub fn last_name(&self) -> &str {
        &self.parts.last().expect("qualident has parts").name
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypeNode {
    Named(QualIdent),
    Enumeration { values: Vec<Ident>, span: Span },
    Subrange { base: Option<QualIdent>, low: Expression, high: Expression, span: Span },
    Array(ArrayTypeNode),
    Record(RecordTypeNode),
    Set { base: Box<TypeNode>, span: Span },
    Pointer { target: Box<TypeNode>, span: Span },
    ProcedureType { params: Vec<ProcTypeParam>, return_type: Option<QualIdent>, span: Span },
    Error(Span),
}

impl TypeNode {
    pub fn span(&self) -> Span {
        match self {
            TypeNode::Named(q) => q.span,
            TypeNode::Enumeration { span, .. }
            | TypeNode::Subrange { span, .. }
            | TypeNode::Set { span, .. }
            | TypeNode::Pointer { span, .. }
            | TypeNode::ProcedureType { span, .. } => *span,
            TypeNode::Array(a) => a.span,
            TypeNode::Record(r) => r.span,
            TypeNode::Error(span) => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcTypeParam {
    pub is_var: bool,
    pub open_array: bool,
    pub ty: QualIdent,
}

/// Abbreviated (`ARRAY [..],[..] OF T`) or long
/// (`ARRAY [..] OF ARRAY [..] OF T`) multi-dimensional form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayForm {
    Abbreviated,
    Long,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayTypeNode {
    pub index_ranges: Vec<TypeNode>,
    pub element_type: Box<TypeNode>,
    pub span: Span,
}

impl ArrayTypeNode {
    /// Multi-dimensional form of this node, if it is multi-dimensional
    /// at all: two or more ranges under one ARRAY keyword is the
    /// abbreviated form, a single range with an array element is the
    /// long form.
    pub fn form(&self) -> Option<ArrayForm> {
        if self.index_ranges.len() >= 2 {
            Some(ArrayForm::Abbreviated)
        } else if matches!(*self.element_type, TypeNode::Array(_)) {
            Some(ArrayForm::Long)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordTypeNode {
    pub items: Vec<FieldListItem>,
    pub span: Span,
}

impl RecordTypeNode {
    pub fn variant_parts(&self) -> impl Iterator<Item = &VariantPart> {
        self.items.iter().filter_map(|i| match i {
            FieldListItem::Variant(v) => Some(v),
            FieldListItem::Fixed(_) => None,
        })
    }

    /// The node uses the variant-record facility.
    pub fn has_variants(&self) -> bool {
        self.variant_parts().next().is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldListItem {
    Fixed(FixedFields),
    Variant(VariantPart),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedFields {
    pub names: Vec<Ident>,
    pub ty: TypeNode,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantPart {
    pub tag_field: Option<Ident>,
    pub tag_type: QualIdent,
    pub cases: Vec<VariantCase>,
    pub else_items: Vec<FieldListItem>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantCase {
    pub labels: Vec<CaseLabel>,
    pub items: Vec<FieldListItem>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseLabel {
    pub low: Expression,
    pub high: Option<Expression>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Simple(SimpleExpr),
    Relation { lhs: Box<SimpleExpr>, op: RelationOp, rhs: Box<SimpleExpr>, span: Span },
}

impl Expression {
    pub fn span(&self) -> Span {
        match self {
            Expression::Simple(s) => s.span,
            Expression::Relation { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationOp {
    Equal,
    NotEqual,
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimpleExpr {
    pub sign: Option<Sign>,
    pub sign_span: Option<Span>,
    pub first: Term,
    pub rest: Vec<(AddOp, Term)>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOp {
    Plus,
    Minus,
    Or,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub first: Factor,
    pub rest: Vec<(MulOp, Factor)>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulOp {
    Star,
    Slash,
    Div,
    Mod,
    And,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    IntegerLiteral { text: String, span: Span },
    RealLiteral { text: String, span: Span },
    CharCodeLiteral { text: String, span: Span },
    StringLiteral { text: String, span: Span },
    SetLiteral { base: Option<QualIdent>, elements: Vec<SetElement>, span: Span },
    /// `designator ( args )` — a function call or a type transfer.
    Call(CallExpr),
    Designator(Designator),
    Paren { inner: Box<Expression>, span: Span },
    Not { operand: Box<Factor>, span: Span },
    Error(Span),
}

impl Factor {
    pub fn span(&self) -> Span {
        match self {
            Factor::IntegerLiteral { span, .. }
            | Factor::RealLiteral { span, .. }
            | Factor::CharCodeLiteral { span, .. }
            | Factor::StringLiteral { span, .. }
            | Factor::SetLiteral { span, .. }
            | Factor::Paren { span, .. }
            | Factor::Not { span, .. }
            | Factor::Error(span) => *span,
            Factor::Call(c) => c.span,
            Factor::Designator(d) => d.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetElement {
    pub low: Expression,
    pub high: Option<Expression>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CallExpr {
    pub callee: Designator,
    pub args: Vec<Expression>,
    pub lparen_span: Span,
    pub rparen_span: Span,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Designator {
    pub base: Ident,
    pub selectors: Vec<Selector>,
    pub span: Span,
}

impl Designator {
    /// `Foo.bar` as a (module, name) pair when the designator is
    /// exactly two plain parts; used for qualified lookups.
    pub fn as_qualified_pair(&self) -> Option<(&str, &str)> {
        match self.selectors.as_slice() {
            [Selector::Field(field)] => Some((&self.base.name, &field.name)),
            _ => None,
        }
    }

    /// True when the designator is a bare identifier.
    pub fn is_plain(&self) -> bool {
        self.selectors.is_empty()
    }

    /// The access path contains a pointer dereference.
    pub fn has_deref(&self) -> bool {
        self.selectors.iter().any(|s| matches!(s, Selector::Deref(_)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Selector {
    Field(Ident),
    Index { exprs: Vec<Expression>, span: Span },
    Deref(Span),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatementSeq {
    pub statements: Vec<Statement>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CallArgs {
    pub args: Vec<Expression>,
    pub lparen_span: Span,
    pub rparen_span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Assignment { target: Designator, value: Expression, span: Span },
    ProcedureCall { callee: Designator, args: Option<CallArgs>, span: Span },
    If {
        arms: Vec<(Expression, StatementSeq)>,
        else_arm: Option<StatementSeq>,
        span: Span,
    },
    Case {
        subject: Expression,
        arms: Vec<CaseArm>,
        else_arm: Option<StatementSeq>,
        span: Span,
    },
    While { cond: Expression, body: StatementSeq, span: Span },
    Repeat { body: StatementSeq, cond: Expression, span: Span },
    Loop { body: StatementSeq, span: Span },
    For {
        var: Ident,
        from: Expression,
        to: Expression,
        by: Option<Expression>,
        body: StatementSeq,
        span: Span,
    },
    With { target: Designator, body: StatementSeq, span: Span },
    Exit(Span),
    Return { value: Option<Expression>, span: Span },
    Error(Span),
}

impl Statement {
    pub fn span(&self) -> Span {
        match self {
            Statement::Assignment { span, .. }
            | Statement::ProcedureCall { span, .. }
            | Statement::If { span, .. }
            | Statement::Case { span, .. }
            | Statement::While { span, .. }
            | Statement::Repeat { span, .. }
            | Statement::Loop { span, .. }
            | Statement::For { span, .. }
            | Statement::With { span, .. }
            | Statement::Return { span, .. } => *span,
            Statement::Exit(span) | Statement::Error(span) => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseArm {
    pub labels: Vec<CaseLabel>,
    pub body: StatementSeq,
    pub span: Span,
}
