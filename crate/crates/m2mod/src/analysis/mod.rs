//! Cross-module symbol binding and the checks that need more than one
//! token or one unit: read-only imports, client lists, conversion
//! functions, mixed array forms, and the unsafe facilities.

mod binder;
mod checks;
mod symbols;

pub use binder::bind_program;
pub use checks::{
    check_clients, check_conversions, check_mixed_array_forms, check_readonly_imports,
    check_unsafe, conversion_target, facility_walk, FacilityUse, UseDetail, WriteChannel,
};
pub use symbols::{
    pervasive, system_exports, QualifiedLookup, SymbolInfo, SymbolKind, SymbolTable, UnitScope,
};

use crate::diagnostics::Diagnostic;
use crate::policy::DialectConfig;
use crate::syntax::CompilationUnit;

/// Binds a unit set and runs every per-unit check, returning the table
/// and all analysis diagnostics (stamped with each unit's file).
pub fn analyze_units(
    units: &[CompilationUnit],
    config: &DialectConfig,
    strict_imports: bool,
) -> (SymbolTable, Vec<Diagnostic>) {
    let (table, mut diagnostics) = bind_program(units, strict_imports);
    for unit in units {
        let file = unit.source_file.display().to_string();
        let mut unit_diags: Vec<Diagnostic> = Vec::new();
        for facility_use in facility_walk(unit) {
            unit_diags.push(facility_use.to_diagnostic(config));
        }
        for facility_use in check_readonly_imports(unit, &table) {
            unit_diags.push(facility_use.to_diagnostic(config));
        }
        for facility_use in check_clients(unit, &table) {
            unit_diags.push(facility_use.to_diagnostic(config));
        }
        let (uses, extra) = check_conversions(unit);
        unit_diags.extend(uses.iter().map(|u| u.to_diagnostic(config)));
        unit_diags.extend(extra);
        for facility_use in check_mixed_array_forms(unit) {
            unit_diags.push(facility_use.to_diagnostic(config));
        }
        let (uses, extra) = check_unsafe(unit, &table);
        unit_diags.extend(uses.iter().map(|u| u.to_diagnostic(config)));
        unit_diags.extend(extra);
        diagnostics.extend(unit_diags.into_iter().map(|d| d.with_file(&file)));
    }
    crate::diagnostics::sort_diagnostics(&mut diagnostics);
    (table, diagnostics)
}
