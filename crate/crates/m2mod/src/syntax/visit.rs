//! Pre-order traversal over a compilation unit.
//!
//! One walk visits every call-shaped designator application, every
//! type node, and every local module, at any nesting depth. Checks
//! that need lexical scope tracking (the read-only-import and cast
//! checks) do their own descent instead.

use crate::source::Span;
use crate::syntax::ast::*;

/// A `designator [( args )]` occurrence, from either expression or
/// statement position.
pub struct CallSite<'a> {
    pub callee: &'a Designator,
    /// `None` for a parameterless procedure call.
    pub args: Option<&'a [Expression]>,
    pub lparen_span: Option<Span>,
    pub rparen_span: Option<Span>,
    pub span: Span,
}

#[allow(unused_variables)]
pub trait AstVisitor {
    fn call_site(&mut self, site: &CallSite<'_>) {}
    /// `is_array_element` is true when the node is the direct element
    /// type of an enclosing array node (the tail of a long form).
    fn type_node(&mut self, node: &TypeNode, is_array_element: bool) {}
    fn local_module(&mut self, node: &LocalModuleNode) {}
}

pub fn walk_unit(unit: &CompilationUnit, visitor: &mut impl AstVisitor) {
    walk_block(&unit.block, visitor);
}

pub fn walk_block(block: &Block, visitor: &mut impl AstVisitor) {
    for decl in &block.declarations {
        walk_declaration(decl, visitor);
    }
    if let Some(body) = &block.body {
        walk_statement_seq(body, visitor);
    }
}

fn walk_declaration(decl: &Declaration, visitor: &mut impl AstVisitor) {
    match decl {
        Declaration::Const(consts) => {
            for c in consts {
                walk_expression(&c.value, visitor);
            }
        }
        Declaration::Type(types) => {
            for t in types {
                if let Some(ty) = &t.ty {
                    walk_type(ty, false, visitor);
                }
            }
        }
        Declaration::Var(vars) => {
            for v in vars {
                walk_type(&v.ty, false, visitor);
            }
        }
        Declaration::Procedure(proc) => {
            if let Some(block) = &proc.block {
                walk_block(block, visitor);
            }
        }
        Declaration::Module(module) => {
            visitor.local_module(module);
            if let Some(priority) = &module.priority {
                walk_expression(priority, visitor);
            }
            walk_block(&module.block, visitor);
        }
    }
}

pub fn walk_type(ty: &TypeNode, is_array_element: bool, visitor: &mut impl AstVisitor) {
    visitor.type_node(ty, is_array_element);
    match ty {
        TypeNode::Named(_) | TypeNode::Enumeration { .. } | TypeNode::ProcedureType { .. } | TypeNode::Error(_) => {}
        TypeNode::Subrange { low, high, .. } => {
            walk_expression(low, visitor);
            walk_expression(high, visitor);
        }
        TypeNode::Array(array) => {
            for range in &array.index_ranges {
                walk_type(range, false, visitor);
            }
            walk_type(&array.element_type, true, visitor);
        }
        TypeNode::Record(record) => walk_field_items(&record.items, visitor),
        TypeNode::Set { base, .. } => walk_type(base, false, visitor),
        TypeNode::Pointer { target, .. } => walk_type(target, false, visitor),
    }
}

fn walk_field_items(items: &[FieldListItem], visitor: &mut impl AstVisitor) {
    for item in items {
        match item {
            FieldListItem::Fixed(fixed) => walk_type(&fixed.ty, false, visitor),
            FieldListItem::Variant(variant) => {
                for case in &variant.cases {
                    for label in &case.labels {
                        walk_case_label(label, visitor);
                    }
                    walk_field_items(&case.items, visitor);
                }
                walk_field_items(&variant.else_items, visitor);
            }
        }
    }
}

fn walk_case_label(label: &CaseLabel, visitor: &mut impl AstVisitor) {
    walk_expression(&label.low, visitor);
    if let Some(high) = &label.high {
        walk_expression(high, visitor);
    }
}

pub fn walk_statement_seq(seq: &StatementSeq, visitor: &mut impl AstVisitor) {
    for statement in &seq.statements {
        walk_statement(statement, visitor);
    }
}

pub fn walk_statement(statement: &Statement, visitor: &mut impl AstVisitor) {
    match statement {
        Statement::Assignment { target, value, .. } => {
            walk_designator(target, visitor);
            walk_expression(value, visitor);
        }
        Statement::ProcedureCall { callee, args, span } => {
            let site = CallSite {
                callee,
                args: args.as_ref().map(|a| a.args.as_slice()),
                lparen_span: args.as_ref().map(|a| a.lparen_span),
                rparen_span: args.as_ref().map(|a| a.rparen_span),
                span: *span,
            };
            visitor.call_site(&site);
            walk_designator(callee, visitor);
            if let Some(args) = args {
                for arg in &args.args {
                    walk_expression(arg, visitor);
                }
            }
        }
        Statement::If { arms, else_arm, .. } => {
            for (cond, body) in arms {
                walk_expression(cond, visitor);
                walk_statement_seq(body, visitor);
            }
            if let Some(body) = else_arm {
                walk_statement_seq(body, visitor);
            }
        }
        Statement::Case { subject, arms, else_arm, .. } => {
            walk_expression(subject, visitor);
            for arm in arms {
                for label in &arm.labels {
                    walk_case_label(label, visitor);
                }
                walk_statement_seq(&arm.body, visitor);
            }
            if let Some(body) = else_arm {
                walk_statement_seq(body, visitor);
            }
        }
        Statement::While { cond, body, .. } => {
            walk_expression(cond, visitor);
            walk_statement_seq(body, visitor);
        }
        Statement::Repeat { body, cond, .. } => {
            walk_statement_seq(body, visitor);
            walk_expression(cond, visitor);
        }
        Statement::Loop { body, .. } => walk_statement_seq(body, visitor),
        Statement::For { from, to, by, body, .. } => {
            walk_expression(from, visitor);
            walk_expression(to, visitor);
            if let Some(by) = by {
                walk_expression(by, visitor);
            }
            walk_statement_seq(body, visitor);
        }
        Statement::With { target, body, .. } => {
            walk_designator(target, visitor);
            walk_statement_seq(body, visitor);
        }
        Statement::Exit(_) | Statement::Return { value: None, .. } | Statement::Error(_) => {}
        Statement::Return { value: Some(value), .. } => walk_expression(value, visitor),
    }
}

pub fn walk_expression(expr: &Expression, visitor: &mut impl AstVisitor) {
    match expr {
        Expression::Simple(simple) => walk_simple(simple, visitor),
        Expression::Relation { lhs, rhs, .. } => {
            walk_simple(lhs, visitor);
            walk_simple(rhs, visitor);
        }
    }
}

fn walk_simple(simple: &SimpleExpr, visitor: &mut impl AstVisitor) {
    walk_term(&simple.first, visitor);
    for (_, term) in &simple.rest {
        walk_term(term, visitor);
    }
}

fn walk_term(term: &Term, visitor: &mut impl AstVisitor) {
    walk_factor(&term.first, visitor);
    for (_, factor) in &term.rest {
        walk_factor(factor, visitor);
    }
}

pub fn walk_factor(factor: &Factor, visitor: &mut impl AstVisitor) {
    match factor {
        Factor::IntegerLiteral { .. }
        | Factor::RealLiteral { .. }
        | Factor::CharCodeLiteral { .. }
        | Factor::StringLiteral { .. }
        | Factor::Error(_) => {}
        Factor::SetLiteral { elements, .. } => {
            for element in elements {
                walk_expression(&element.low, visitor);
                if let Some(high) = &element.high {
                    walk_expression(high, visitor);
                }
            }
        }
        Factor::Call(call) => {
            let site = CallSite {
                callee: &call.callee,
                args: Some(call.args.as_slice()),
                lparen_span: Some(call.lparen_span),
                rparen_span: Some(call.rparen_span),
                span: call.span,
            };
            visitor.call_site(&site);
            walk_designator(&call.callee, visitor);
            for arg in &call.args {
                walk_expression(arg, visitor);
            }
        }
        Factor::Designator(designator) => walk_designator(designator, visitor),
        Factor::Paren { inner, .. } => walk_expression(inner, visitor),
        Factor::Not { operand, .. } => walk_factor(operand, visitor),
    }
}

fn walk_designator(designator: &Designator, visitor: &mut impl AstVisitor) {
    for selector in &designator.selectors {
        if let Selector::Index { exprs, .. } = selector {
            for expr in exprs {
                walk_expression(expr, visitor);
            }
        }
    }
}
