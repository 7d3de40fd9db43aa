//! The multi-token checks: read-only imports, client lists, conversion
//! calls, mixed array forms, unsafe facilities, and the facility walk
//! over parsed nodes.

use crate::analysis::symbols::{
    block_symbols, QualifiedLookup, SymbolInfo, SymbolKind, SymbolTable, UnitScope,
};
use crate::diagnostics::Diagnostic;
use crate::policy::{severity_for, DialectConfig, FacilityId, Severity};
use crate::rewrite::{strip_export_list, Edit};
use crate::source::Span;
use crate::syntax::visit::{walk_unit, AstVisitor, CallSite};
use crate::syntax::*;
use std::collections::BTreeMap;

/// One syntactic occurrence of an offending facility. Never
/// deduplicated: a warning is due for each and every use.
#[derive(Debug, Clone, PartialEq)]
pub struct FacilityUse {
    pub facility: FacilityId,
    pub span: Span,
    pub detail: UseDetail,
}

#[derive(Debug, Clone, PartialEq)]
pub enum UseDetail {
    Conversion { name: String, removed: bool, edit: Option<Edit> },
    MixedArrayForm { form: ArrayForm },
    WriteImportedVar { var: String, owner: String, channel: WriteChannel },
    TypeTransfer { type_name: String },
    VariantRecord,
    LocalModule { name: String },
    LegacyExportList { edit: Option<Edit> },
    FfiExtension { api: String },
    NonClientImport { library: String, importer: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WriteChannel {
    Assignment,
    VarParameter { callee: String },
    Builtin { name: String },
}

impl FacilityUse {
    /// Renders the use as a diagnostic under `config`.
    pub fn to_diagnostic(&self, config: &DialectConfig) -> Diagnostic {
        let severity = severity_for(self.facility, config);
        match &self.detail {
            UseDetail::Conversion { name, removed, edit } => {
                let code = if *removed { "M2M-CONV-REMOVED" } else { "M2M-CONV-DEPRECATED" };
                let verb = if *removed { "removed" } else { "deprecated" };
                let target = conversion_target(name).expect("known conversion");
                let mut d = Diagnostic::new(
                    code,
                    severity,
                    self.span,
                    format!("{verb} conversion function {name}() (write VAL({target}, ...))"),
                );
                if let Some(edit) = edit {
                    d = d.with_edit(edit.clone());
                }
                d
            }
            UseDetail::MixedArrayForm { form } => {
                let (this, other) = match form {
                    ArrayForm::Abbreviated => ("abbreviated", "long"),
                    ArrayForm::Long => ("long", "abbreviated"),
                };
                Diagnostic::new(
                    "M2M-ARRAY-MIXED",
                    severity,
                    self.span,
                    format!(
                        "multi-dimensional array uses the {this} form while this unit mostly uses the {other} form"
                    ),
                )
            }
            UseDetail::WriteImportedVar { var, owner, channel } => {
                let how = match channel {
                    WriteChannel::Assignment => "assigned".to_string(),
                    WriteChannel::VarParameter { callee } => {
                        format!("passed to a VAR parameter of {callee}")
                    }
                    WriteChannel::Builtin { name } => format!("mutated by {name}"),
                };
                Diagnostic::new(
                    "M2M-READONLY",
                    severity,
                    self.span,
                    format!("imported variable '{var}' (from {owner}) is {how}; imported variables are read-only"),
                )
            }
            UseDetail::TypeTransfer { type_name } => Diagnostic::new(
                "M2M-CAST",
                severity,
                self.span,
                format!("unsafe type transfer {type_name}(...)"),
            ),
            UseDetail::VariantRecord => Diagnostic::new(
                "M2M-VARIANT",
                severity,
                self.span,
                "record with variant parts",
            ),
            UseDetail::LocalModule { name } => Diagnostic::new(
                "M2M-LOCAL-MODULE",
                severity,
                self.span,
                format!("local module '{name}'; extract it into a library module"),
            ),
            UseDetail::LegacyExportList { edit } => {
                let mut d = Diagnostic::new(
                    "M2M-EXPORT-LIST",
                    severity,
                    self.span,
                    "legacy export list; a definition module exports all its contents",
                );
                if let Some(edit) = edit {
                    d = d.with_edit(edit.clone());
                }
                d
            }
            UseDetail::FfiExtension { api } => Diagnostic::new(
                "M2M-EXTENSION",
                severity,
                self.span,
                format!("foreign-interface directive (API \"{api}\") is a language extension"),
            ),
            UseDetail::NonClientImport { library, importer } => Diagnostic::new(
                "M2M-CLIENTS",
                severity,
                self.span,
                format!(
                    "{importer} imports {library}, which designates other client modules; its interface may change without notice"
                ),
            ),
        }
    }
}

/// VAL target type for a conversion-function name.
pub fn conversion_target(name: &str) -> Option<&'static str> {
    match name {
        "FLOAT" => Some("REAL"),
        "TRUNC" => Some("CARDINAL"),
        "INT" => Some("INTEGER"),
        "CARD" => Some("CARDINAL"),
        "LFLOAT" => Some("LONGREAL"),
        _ => None,
    }
}

// ---------------------------------------------------------------------
// Conversion calls
// ---------------------------------------------------------------------

struct ConversionCheck {
    uses: Vec<FacilityUse>,
    diagnostics: Vec<Diagnostic>,
}

impl AstVisitor for ConversionCheck {
    fn call_site(&mut self, site: &CallSite<'_>) {
        if !site.callee.is_plain() {
            return;
        }
        let name = site.callee.base.name.as_str();
        let Some(target) = conversion_target(name) else { return };
        let Some(args) = site.args else { return };
        if args.len() != 1 {
            self.diagnostics.push(Diagnostic::new(
                "M2M-CONV-ARITY",
                Severity::Warning,
                site.span,
                format!(
                    "{name}() called with {} arguments; expected 1 (shadowing procedure suspected), not rewritten",
                    args.len()
                ),
            ));
            return;
        }
        let removed = matches!(name, "INT" | "CARD" | "LFLOAT");
        let edit = site.lparen_span.map(|lparen| {
            Edit::new(
                site.callee.span.cover(lparen),
                format!("VAL({target}, "),
                if removed {
                    FacilityId::RemovedConversion
                } else {
                    FacilityId::DeprecatedConversion
                },
                format!("rewrite {name}(..) to VAL({target}, ..)"),
            )
        });
        self.uses.push(FacilityUse {
            facility: if removed {
                FacilityId::RemovedConversion
            } else {
                FacilityId::DeprecatedConversion
            },
            span: site.span,
            detail: UseDetail::Conversion { name: name.to_string(), removed, edit },
        });
    }
}

/// Flags every call of FLOAT/TRUNC (deprecated) and INT/CARD/LFLOAT
/// (removed). VAL, CHR and ORD are sanctioned and produce nothing.
pub fn check_conversions(unit: &CompilationUnit) -> (Vec<FacilityUse>, Vec<Diagnostic>) {
    let mut check = ConversionCheck { uses: Vec::new(), diagnostics: Vec::new() };
    walk_unit(unit, &mut check);
    check.uses.sort_by_key(|u| u.span.start);
    (check.uses, check.diagnostics)
}

// ---------------------------------------------------------------------
// Mixed multi-dimensional array forms
// ---------------------------------------------------------------------

struct ArrayFormCollector {
    occurrences: Vec<(ArrayForm, Span)>,
}

impl AstVisitor for ArrayFormCollector {
    fn type_node(&mut self, node: &TypeNode, is_array_element: bool) {
        if is_array_element {
            // The tail of a long-form chain is part of the outer
            // declaration, not a separate occurrence.
            return;
        }
        if let TypeNode::Array(array) = node {
            if let Some(form) = array.form() {
                self.occurrences.push((form, array.span));
            }
        }
    }
}

/// Warns about mixed abbreviated/long multi-dimensional declarations
/// in one unit: one warning per declaration of the minority form, ties
/// broken toward flagging the long form. Single-dimensional arrays
/// never count.
pub fn check_mixed_array_forms(unit: &CompilationUnit) -> Vec<FacilityUse> {
    let mut collector = ArrayFormCollector { occurrences: Vec::new() };
    walk_unit(unit, &mut collector);
    let abbreviated =
        collector.occurrences.iter().filter(|(f, _)| *f == ArrayForm::Abbreviated).count();
    let long = collector.occurrences.len() - abbreviated;
    if abbreviated == 0 || long == 0 {
        return Vec::new();
    }
    let minority =
        if abbreviated < long { ArrayForm::Abbreviated } else { ArrayForm::Long };
    collector
        .occurrences
        .into_iter()
        .filter(|(form, _)| *form == minority)
        .map(|(form, span)| FacilityUse {
            facility: FacilityId::MixedArrayForms,
            span,
            detail: UseDetail::MixedArrayForm { form },
        })
        .collect()
}

// ---------------------------------------------------------------------
// Client lists
// ---------------------------------------------------------------------

/// Warns when this unit imports a library that designates client
/// modules and this unit is not among them.
pub fn check_clients(unit: &CompilationUnit, table: &SymbolTable) -> Vec<FacilityUse> {
    let importer = unit.module_name.name.as_str();
    let mut uses = Vec::new();
    for clause in &unit.imports {
        let targets: Vec<&Ident> = match &clause.from_module {
            Some(from) => vec![from],
            None => clause.names.iter().collect(),
        };
        for target in targets {
            let library = target.name.as_str();
            if library == importer {
                continue;
            }
            let Some(clients) = table.clients_of(library) else { continue };
            if !clients.iter().any(|c| c == importer) {
                uses.push(FacilityUse {
                    facility: FacilityId::NonClientImport,
                    span: target.span,
                    detail: UseDetail::NonClientImport {
                        library: library.to_string(),
                        importer: importer.to_string(),
                    },
                });
            }
        }
    }
    uses
}

// ---------------------------------------------------------------------
// Facility walk over parsed nodes
// ---------------------------------------------------------------------

struct NodeFacilities {
    uses: Vec<FacilityUse>,
}

impl AstVisitor for NodeFacilities {
    fn local_module(&mut self, node: &LocalModuleNode) {
        self.uses.push(FacilityUse {
            facility: FacilityId::LocalModules,
            span: node.name.span,
            detail: UseDetail::LocalModule { name: node.name.name.clone() },
        });
    }
}

/// Facility uses discoverable from the parse alone: local modules at
/// every nesting depth, the legacy export list, and the FFI extension
/// marker. Variant records are the unsafe check's business.
pub fn facility_walk(unit: &CompilationUnit) -> Vec<FacilityUse> {
    let mut walk = NodeFacilities { uses: Vec::new() };
    walk_unit(unit, &mut walk);
    let mut uses = walk.uses;
    if let Some(export) = &unit.export_list {
        uses.push(FacilityUse {
            facility: FacilityId::LegacyExportList,
            span: export.span,
            detail: UseDetail::LegacyExportList { edit: strip_export_list(unit) },
        });
    }
    if let Some(pragma) = &unit.ffi_pragma {
        uses.push(FacilityUse {
            facility: FacilityId::LanguageExtension,
            span: pragma.span,
            detail: UseDetail::FfiExtension { api: pragma.foreign_api.clone() },
        });
    }
    uses.sort_by_key(|u| u.span.start);
    uses
}

// ---------------------------------------------------------------------
// Scope-aware checks: read-only imports and unsafe facilities
// ---------------------------------------------------------------------

#[derive(Debug)]
enum ScopedEvent {
    ImportWrite { var: String, owner: String, span: Span, channel: WriteChannel },
    Cast { type_name: String, span: Span },
    CastUnknown { name: String, span: Span },
}

struct ScopedWalker<'a> {
    table: &'a SymbolTable,
    scope: &'a UnitScope,
    locals: Vec<BTreeMap<String, SymbolKind>>,
    events: Vec<ScopedEvent>,
}

enum Plain<'a> {
    Local(&'a SymbolKind),
    Unit(&'a SymbolInfo),
    None,
}

impl<'a> ScopedWalker<'a> {
    fn run(unit: &CompilationUnit, table: &'a SymbolTable, scope: &'a UnitScope) -> Vec<ScopedEvent> {
        let mut walker = ScopedWalker { table, scope, locals: Vec::new(), events: Vec::new() };
        walker.block(&unit.block);
        walker.events.sort_by_key(|e| match e {
            ScopedEvent::ImportWrite { span, .. }
            | ScopedEvent::Cast { span, .. }
            | ScopedEvent::CastUnknown { span, .. } => span.start,
        });
        walker.events
    }

    fn resolve_plain(&self, name: &str) -> Plain<'_> {
        for scope in self.locals.iter().rev() {
            if let Some(kind) = scope.get(name) {
                return Plain::Local(kind);
            }
        }
        match self.table.lookup(self.scope, name) {
            Some(info) => Plain::Unit(info),
            None => Plain::None,
        }
    }

    fn block(&mut self, block: &Block) {
        for decl in &block.declarations {
            match decl {
                Declaration::Const(consts) => {
                    for c in consts {
                        self.expression(&c.value);
                    }
                }
                Declaration::Type(types) => {
                    for t in types {
                        if let Some(ty) = &t.ty {
                            self.type_node(ty);
                        }
                    }
                }
                Declaration::Var(vars) => {
                    for v in vars {
                        self.type_node(&v.ty);
                    }
                }
                Declaration::Procedure(proc) => {
                    let Some(body) = &proc.block else { continue };
                    let mut scope = BTreeMap::new();
                    for param in &proc.heading.params {
                        for name in &param.names {
                            scope.insert(name.name.clone(), SymbolKind::Variable);
                        }
                    }
                    for (name, kind) in block_symbols(&body.declarations) {
                        scope.insert(name, kind);
                    }
                    self.locals.push(scope);
                    self.block(body);
                    self.locals.pop();
                }
                Declaration::Module(module) => {
                    let mut scope = BTreeMap::new();
                    for (name, kind) in block_symbols(&module.block.declarations) {
                        scope.insert(name, kind);
                    }
                    self.locals.push(scope);
                    self.block(&module.block);
                    self.locals.pop();
                }
            }
        }
        if let Some(body) = &block.body {
            self.statement_seq(body);
        }
    }

    fn type_node(&mut self, ty: &TypeNode) {
        match ty {
            TypeNode::Subrange { low, high, .. } => {
                self.expression(low);
                self.expression(high);
            }
            TypeNode::Array(a) => {
                for r in &a.index_ranges {
                    self.type_node(r);
                }
                self.type_node(&a.element_type);
            }
            TypeNode::Record(r) => self.field_items(&r.items),
            TypeNode::Set { base, .. } => self.type_node(base),
            TypeNode::Pointer { target, .. } => self.type_node(target),
            _ => {}
        }
    }

    fn field_items(&mut self, items: &[FieldListItem]) {
        for item in items {
            match item {
                FieldListItem::Fixed(f) => self.type_node(&f.ty),
                FieldListItem::Variant(v) => {
                    for case in &v.cases {
                        for label in &case.labels {
                            self.expression(&label.low);
                            if let Some(high) = &label.high {
                                self.expression(high);
                            }
                        }
                        self.field_items(&case.items);
                    }
                    self.field_items(&v.else_items);
                }
            }
        }
    }

    fn statement_seq(&mut self, seq: &StatementSeq) {
        for statement in &seq.statements {
            self.statement(statement);
        }
    }

    fn statement(&mut self, statement: &Statement) {
        match statement {
            Statement::Assignment { target, value, .. } => {
                self.classify_write(target, WriteChannel::Assignment);
                self.designator_exprs(target);
                self.expression(value);
            }
            Statement::ProcedureCall { callee, args, span } => {
                self.handle_call(callee, args.as_ref().map(|a| a.args.as_slice()), *span);
                self.designator_exprs(callee);
                if let Some(args) = args {
                    for arg in &args.args {
                        self.expression(arg);
                    }
                }
            }
            Statement::If { arms, else_arm, .. } => {
                for (cond, body) in arms {
                    self.expression(cond);
                    self.statement_seq(body);
                }
                if let Some(body) = else_arm {
                    self.statement_seq(body);
                }
            }
            Statement::Case { subject, arms, else_arm, .. } => {
                self.expression(subject);
                for arm in arms {
                    for label in &arm.labels {
                        self.expression(&label.low);
                        if let Some(high) = &label.high {
                            self.expression(high);
                        }
                    }
                    self.statement_seq(&arm.body);
                }
                if let Some(body) = else_arm {
                    self.statement_seq(body);
                }
            }
            Statement::While { cond, body, .. } => {
                self.expression(cond);
                self.statement_seq(body);
            }
            Statement::Repeat { body, cond, .. } => {
                self.statement_seq(body);
                self.expression(cond);
            }
            Statement::Loop { body, .. } => self.statement_seq(body),
            Statement::For { from, to, by, body, .. } => {
                self.expression(from);
                self.expression(to);
                if let Some(by) = by {
                    self.expression(by);
                }
                self.statement_seq(body);
            }
            Statement::With { target, body, .. } => {
                self.designator_exprs(target);
                self.statement_seq(body);
            }
            Statement::Exit(_) | Statement::Error(_) => {}
            Statement::Return { value, .. } => {
                if let Some(value) = value {
                    self.expression(value);
                }
            }
        }
    }

    fn expression(&mut self, expr: &Expression) {
        match expr {
            Expression::Simple(s) => self.simple(s),
            Expression::Relation { lhs, rhs, .. } => {
                self.simple(lhs);
                self.simple(rhs);
            }
        }
    }

    fn simple(&mut self, simple: &SimpleExpr) {
        self.term(&simple.first);
        for (_, term) in &simple.rest {
            self.term(term);
        }
    }

    fn term(&mut self, term: &Term) {
        self.factor(&term.first);
        for (_, factor) in &term.rest {
            self.factor(factor);
        }
    }

    fn factor(&mut self, factor: &Factor) {
        match factor {
            Factor::SetLiteral { elements, .. } => {
                for element in elements {
                    self.expression(&element.low);
                    if let Some(high) = &element.high {
                        self.expression(high);
                    }
                }
            }
            Factor::Call(call) => {
                self.handle_call(&call.callee, Some(call.args.as_slice()), call.span);
                self.designator_exprs(&call.callee);
                for arg in &call.args {
                    self.expression(arg);
                }
            }
            Factor::Designator(d) => self.designator_exprs(d),
            Factor::Paren { inner, .. } => self.expression(inner),
            Factor::Not { operand, .. } => self.factor(operand),
            _ => {}
        }
    }

    fn designator_exprs(&mut self, designator: &Designator) {
        for selector in &designator.selectors {
            if let Selector::Index { exprs, .. } = selector {
                for expr in exprs {
                    self.expression(expr);
                }
            }
        }
    }

    /// Signature (VAR flags) of the callee, when it resolves to a
    /// procedure; plus cast classification.
    fn handle_call(&mut self, callee: &Designator, args: Option<&[Expression]>, span: Span) {
        enum Callee<'k> {
            Proc(&'k [bool]),
            Type(String),
            Unknown { missing_def: bool },
            Other,
        }
        let resolved = if callee.is_plain() {
            match self.resolve_plain(&callee.base.name) {
                Plain::Local(SymbolKind::Procedure { var_params }) => Callee::Proc(var_params),
                Plain::Local(SymbolKind::Type) => Callee::Type(callee.base.name.clone()),
                Plain::Local(_) => Callee::Other,
                Plain::Unit(info) => match &info.kind {
                    SymbolKind::Procedure { var_params } => Callee::Proc(var_params),
                    SymbolKind::Type => Callee::Type(callee.base.name.clone()),
                    SymbolKind::Unknown { missing_def } => {
                        Callee::Unknown { missing_def: *missing_def }
                    }
                    _ => Callee::Other,
                },
                Plain::None => Callee::Other,
            }
        } else if let Some((module, name)) = callee.as_qualified_pair() {
            // Shadowing: a local or unit-level name wins over a module
            // qualifier.
            let shadowed = matches!(self.resolve_plain(module), Plain::Local(_))
                || self.scope.names.contains_key(module);
            if shadowed {
                Callee::Other
            } else {
                match self.table.lookup_qualified(self.scope, module, name) {
                    QualifiedLookup::Found(info) => match &info.kind {
                        SymbolKind::Procedure { var_params } => Callee::Proc(var_params),
                        SymbolKind::Type => Callee::Type(format!("{module}.{name}")),
                        SymbolKind::Unknown { missing_def } => {
                            Callee::Unknown { missing_def: *missing_def }
                        }
                        _ => Callee::Other,
                    },
                    QualifiedLookup::ModuleOpaque => Callee::Unknown { missing_def: true },
                    QualifiedLookup::NotExported | QualifiedLookup::NotAModule => Callee::Other,
                }
            }
        } else {
            Callee::Other
        };

        match resolved {
            Callee::Proc(var_params) => {
                let Some(args) = args else { return };
                let is_mutating_builtin = callee.is_plain()
                    && matches!(callee.base.name.as_str(), "INC" | "DEC" | "INCL" | "EXCL");
                let var_params = var_params.to_vec();
                for (i, arg) in args.iter().enumerate() {
                    if !var_params.get(i).copied().unwrap_or(false) {
                        continue;
                    }
                    let Some(target) = plain_designator(arg) else { continue };
                    let channel = if is_mutating_builtin {
                        WriteChannel::Builtin { name: callee.base.name.clone() }
                    } else {
                        WriteChannel::VarParameter { callee: designator_text(callee) }
                    };
                    self.classify_write(target, channel);
                }
            }
            Callee::Type(type_name) => {
                if args.is_some_and(|a| a.len() == 1) {
                    self.events.push(ScopedEvent::Cast { type_name, span });
                }
            }
            Callee::Unknown { missing_def: true } => {
                if args.is_some_and(|a| a.len() == 1) {
                    self.events.push(ScopedEvent::CastUnknown {
                        name: designator_text(callee),
                        span,
                    });
                }
            }
            Callee::Unknown { missing_def: false } | Callee::Other => {}
        }
    }

    /// Records a write access when the target is an imported variable.
    /// Paths through a dereference mutate the pointed-to object, not
    /// the variable.
    fn classify_write(&mut self, target: &Designator, channel: WriteChannel) {
        if target.has_deref() {
            return;
        }
        let base = target.base.name.as_str();
        match self.resolve_plain(base) {
            Plain::Local(_) => return,
            Plain::Unit(info) => {
                if info.read_only_import && info.kind == SymbolKind::Variable {
                    self.events.push(ScopedEvent::ImportWrite {
                        var: base.to_string(),
                        owner: info.defined_in.clone(),
                        span: target.span,
                        channel,
                    });
                }
                return;
            }
            Plain::None => {}
        }
        // Qualified access to an exported variable.
        if let Some((module, name)) = target.as_qualified_pair_prefix() {
            if module != self.scope.module_name {
                if let QualifiedLookup::Found(info) =
                    self.table.lookup_qualified(self.scope, module, name)
                {
                    if info.kind == SymbolKind::Variable {
                        self.events.push(ScopedEvent::ImportWrite {
                            var: format!("{module}.{name}"),
                            owner: module.to_string(),
                            span: target.span,
                            channel,
                        });
                    }
                }
            }
        }
    }
}

/// The argument expression when it is exactly a designator.
fn plain_designator(expr: &Expression) -> Option<&Designator> {
    let Expression::Simple(simple) = expr else { return None };
    if simple.sign.is_some() || !simple.rest.is_empty() || !simple.first.rest.is_empty() {
        return None;
    }
    match &simple.first.first {
        Factor::Designator(d) => Some(d),
        _ => None,
    }
}

fn designator_text(d: &Designator) -> String {
    let mut out = d.base.name.clone();
    for selector in &d.selectors {
        match selector {
            Selector::Field(f) => {
                out.push('.');
                out.push_str(&f.name);
            }
            Selector::Index { .. } => out.push_str("[]"),
            Selector::Deref(_) => out.push('^'),
        }
    }
    out
}

impl Designator {
    /// First two parts when the designator starts `module.name`, even
    /// with further selectors behind them.
    fn as_qualified_pair_prefix(&self) -> Option<(&str, &str)> {
        match self.selectors.first() {
            Some(Selector::Field(field)) => Some((&self.base.name, &field.name)),
            _ => None,
        }
    }
}

/// One use per write access to an imported variable: assignment
/// target, VAR-parameter actual, or operand of a mutating built-in.
/// Never fires on variables declared in the same unit (or its own
/// definition part).
pub fn check_readonly_imports(unit: &CompilationUnit, table: &SymbolTable) -> Vec<FacilityUse> {
    let Some(scope) = table.scope(unit) else { return Vec::new() };
    ScopedWalker::run(unit, table, scope)
        .into_iter()
        .filter_map(|event| match event {
            ScopedEvent::ImportWrite { var, owner, span, channel } => Some(FacilityUse {
                facility: FacilityId::WriteImportedVars,
                span,
                detail: UseDetail::WriteImportedVar { var, owner, channel },
            }),
            _ => None,
        })
        .collect()
}

/// Type transfers and variant records, plus SYSTEM-import notes and
/// unresolvable-callee notes.
pub fn check_unsafe(
    unit: &CompilationUnit,
    table: &SymbolTable,
) -> (Vec<FacilityUse>, Vec<Diagnostic>) {
    let mut uses = Vec::new();
    let mut diagnostics = Vec::new();

    if let Some(scope) = table.scope(unit) {
        for event in ScopedWalker::run(unit, table, scope) {
            match event {
                ScopedEvent::Cast { type_name, span } => uses.push(FacilityUse {
                    facility: FacilityId::TypeTransfer,
                    span,
                    detail: UseDetail::TypeTransfer { type_name },
                }),
                ScopedEvent::CastUnknown { name, span } => diagnostics.push(Diagnostic::new(
                    "M2M-CAST-UNKNOWN",
                    Severity::Info,
                    span,
                    format!(
                        "cannot tell whether {name}(...) is a type transfer; its definition module is missing"
                    ),
                )),
                ScopedEvent::ImportWrite { .. } => {}
            }
        }
    }

    struct Variants {
        uses: Vec<FacilityUse>,
    }
    impl AstVisitor for Variants {
        fn type_node(&mut self, node: &TypeNode, _is_array_element: bool) {
            if let TypeNode::Record(record) = node {
                if record.has_variants() {
                    self.uses.push(FacilityUse {
                        facility: FacilityId::VariantRecord,
                        span: record.span,
                        detail: UseDetail::VariantRecord,
                    });
                }
            }
        }
    }
    let mut variants = Variants { uses: Vec::new() };
    walk_unit(unit, &mut variants);
    uses.extend(variants.uses);

    for clause in all_imports(unit) {
        let system = clause
            .from_module
            .as_ref()
            .map(|m| m.name == "SYSTEM")
            .unwrap_or_else(|| clause.names.iter().any(|n| n.name == "SYSTEM"));
        if system {
            diagnostics.push(Diagnostic::new(
                "M2M-SYSTEM",
                Severity::Info,
                clause.span,
                "imports the unsafe facilities of SYSTEM",
            ));
        }
    }

    uses.sort_by_key(|u| u.span.start);
    diagnostics.sort_by_key(|d| d.span.start);
    (uses, diagnostics)
}

/// Import clauses of the unit and of every local module inside it.
fn all_imports(unit: &CompilationUnit) -> Vec<&ImportClause> {
    fn collect<'a>(block: &'a Block, out: &mut Vec<&'a ImportClause>) {
        for decl in &block.declarations {
            match decl {
                Declaration::Module(module) => {
                    out.extend(module.imports.iter());
                    collect(&module.block, out);
                }
                Declaration::Procedure(proc) => {
                    if let Some(body) = &proc.block {
                        collect(body, out);
                    }
                }
                _ => {}
            }
        }
    }
    let mut found: Vec<&ImportClause> = unit.imports.iter().collect();
    collect(&unit.block, &mut found);
    found
}
