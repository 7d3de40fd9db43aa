//! Cross-module binding: builds the symbol table for a set of
//! compilation units. Unresolved imports are diagnosed and binding
//! continues.

use crate::analysis::symbols::{
    declared_symbols, system_exports, unit_key, SymbolInfo, SymbolKind, SymbolTable, UnitScope,
};
use crate::diagnostics::Diagnostic;
use crate::policy::Severity;
use crate::syntax::{CompilationUnit, UnitKind};
use std::collections::BTreeMap;

/// Binds `units` into one symbol table.
///
/// Every import is resolved against the definition units present in
/// the set (or the SYSTEM pseudo-module). A missing definition module
/// degrades the checks that need it and is reported at info severity,
/// or as an error under `strict_imports`.
pub fn bind_program(
    units: &[CompilationUnit],
    strict_imports: bool,
) -> (SymbolTable, Vec<Diagnostic>) {
    let mut table = SymbolTable::default();
    let mut diagnostics = Vec::new();
    let missing_severity = if strict_imports { Severity::Error } else { Severity::Info };

    table.exports.insert("SYSTEM".to_string(), system_exports());

    // Pass 1: exported interfaces and client lists of definition units.
    for unit in units.iter().filter(|u| u.unit_kind == UnitKind::Definition) {
        let module = unit.module_name.name.clone();
        let mut interface = BTreeMap::new();
        for (name, kind) in declared_symbols(unit) {
            interface.insert(
                name,
                SymbolInfo {
                    kind,
                    defined_in: module.clone(),
                    exported: true,
                    read_only_import: false,
                },
            );
        }
        table.exports.insert(module.clone(), interface);
        if let Some(pragma) = &unit.clients_pragma {
            table.clients.insert(module.clone(), pragma.client_module_names.clone());
        }
    }

    // Pass 2: per-unit scopes.
    for unit in units {
        let module = unit.module_name.name.clone();
        let file = unit.source_file.display().to_string();
        let mut scope = UnitScope { module_name: module.clone(), ..Default::default() };

        // An implementation unit sees everything its definition declares.
        if unit.unit_kind == UnitKind::Implementation {
            if let Some(interface) = table.exports.get(&module) {
                for (name, info) in interface {
                    scope.names.insert(
                        name.clone(),
                        SymbolInfo { read_only_import: false, ..info.clone() },
                    );
                }
            } else {
                diagnostics.push(
                    Diagnostic::new(
                        "M2M-DEF-MISSING",
                        missing_severity,
                        unit.module_name.span,
                        format!("no definition module found for IMPLEMENTATION MODULE {module}"),
                    )
                    .with_file(&file),
                );
            }
        }

        for clause in &unit.imports {
            match &clause.from_module {
                Some(from) => {
                    let exporter = from.name.as_str();
                    let self_import = exporter == module;
                    let interface = table.exports.get(exporter).cloned();
                    match interface {
                        Some(interface) => {
                            for name in &clause.names {
                                match interface.get(&name.name) {
                                    Some(info) => {
                                        let read_only = !self_import
                                            && info.kind == SymbolKind::Variable;
                                        scope.names.insert(
                                            name.name.clone(),
                                            SymbolInfo {
                                                read_only_import: read_only,
                                                ..info.clone()
                                            },
                                        );
                                    }
                                    None => {
                                        diagnostics.push(
                                            Diagnostic::new(
                                                "M2M-UNRESOLVED-IMPORT",
                                                Severity::Error,
                                                name.span,
                                                format!(
                                                    "'{}' is not exported by {exporter}",
                                                    name.name
                                                ),
                                            )
                                            .with_file(&file),
                                        );
                                        scope.names.insert(
                                            name.name.clone(),
                                            SymbolInfo {
                                                kind: SymbolKind::Unknown { missing_def: false },
                                                defined_in: exporter.to_string(),
                                                exported: false,
                                                read_only_import: false,
                                            },
                                        );
                                    }
                                }
                            }
                        }
                        None => {
                            diagnostics.push(
                                Diagnostic::new(
                                    "M2M-DEF-MISSING",
                                    missing_severity,
                                    from.span,
                                    format!("no definition module found for {exporter}"),
                                )
                                .with_file(&file),
                            );
                            for name in &clause.names {
                                scope.names.insert(
                                    name.name.clone(),
                                    SymbolInfo {
                                        kind: SymbolKind::Unknown { missing_def: true },
                                        defined_in: exporter.to_string(),
                                        exported: false,
                                        read_only_import: false,
                                    },
                                );
                            }
                        }
                    }
                }
                None => {
                    for name in &clause.names {
                        let imported = name.name.as_str();
                        scope.modules.insert(imported.to_string());
                        if imported != "SYSTEM"
                            && imported != module
                            && !table.exports.contains_key(imported)
                        {
                            diagnostics.push(
                                Diagnostic::new(
                                    "M2M-DEF-MISSING",
                                    missing_severity,
                                    name.span,
                                    format!("no definition module found for {imported}"),
                                )
                                .with_file(&file),
                            );
                        }
                    }
                }
            }
        }

        // Own declarations shadow imports.
        for (name, kind) in declared_symbols(unit) {
            scope.names.insert(
                name,
                SymbolInfo {
                    kind,
                    defined_in: module.clone(),
                    exported: unit.unit_kind == UnitKind::Definition,
                    read_only_import: false,
                },
            );
        }

        table.units.insert(unit_key(unit), scope);
    }

    diagnostics.sort_by_key(|d| (d.file.clone(), d.span.start, d.code));
    (table, diagnostics)
}
