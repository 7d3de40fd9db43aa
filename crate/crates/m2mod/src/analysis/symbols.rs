//! Symbol table: per-unit scopes, exported interfaces, pervasive
//! identifiers, and the SYSTEM pseudo-module.

use crate::syntax::{CompilationUnit, Declaration, UnitKind};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolKind {
    Variable,
    /// Per-positional-parameter VAR flags, expanded per formal name.
    Procedure { var_params: Vec<bool> },
    Type,
    Constant,
    Module,
    /// Imported from a module whose definition is unavailable; the
    /// type/procedure distinction is unresolvable.
    Unknown { missing_def: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolInfo {
    pub kind: SymbolKind,
    /// Module that defines the symbol; empty for pervasives.
    pub defined_in: String,
    pub exported: bool,
    /// An imported variable: a read-only object in this unit.
    pub read_only_import: bool,
}

impl SymbolInfo {
    pub fn pervasive(kind: SymbolKind) -> Self {
        SymbolInfo { kind, defined_in: String::new(), exported: true, read_only_import: false }
    }
}

/// Key for one parsed unit: module name plus unit kind, so a
/// definition and its implementation coexist.
pub type UnitKey = (String, UnitKind);

pub fn unit_key(unit: &CompilationUnit) -> UnitKey {
    (unit.module_name.name.clone(), unit.unit_kind)
}

/// Names visible inside one compilation unit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnitScope {
    pub module_name: String,
    /// Unqualified unit-level names: own declarations, FROM-imports,
    /// and (for implementation units) the matching definition's names.
    pub names: BTreeMap<String, SymbolInfo>,
    /// Modules available as qualifiers (`IMPORT Foo`).
    pub modules: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolTable {
    /// Exported interface per definition module (plus SYSTEM).
    pub(crate) exports: BTreeMap<String, BTreeMap<String, SymbolInfo>>,
    /// Client lists declared via CLIENTS directives, per library.
    pub(crate) clients: BTreeMap<String, Vec<String>>,
    pub(crate) units: BTreeMap<UnitKey, UnitScope>,
}

impl SymbolTable {
    pub fn scope(&self, unit: &CompilationUnit) -> Option<&UnitScope> {
        self.units.get(&unit_key(unit))
    }

    pub fn exports_of(&self, module: &str) -> Option<&BTreeMap<String, SymbolInfo>> {
        self.exports.get(module)
    }

    pub fn clients_of(&self, module: &str) -> Option<&[String]> {
        self.clients.get(module).map(Vec::as_slice)
    }

    /// Unqualified lookup in a unit: unit names, then pervasives.
    pub fn lookup<'a>(&'a self, scope: &'a UnitScope, name: &str) -> Option<&'a SymbolInfo> {
        scope.names.get(name).or_else(|| pervasive(name))
    }

    /// Qualified lookup `module.name` as seen from `scope`.
    pub fn lookup_qualified<'a>(
        &'a self,
        scope: &'a UnitScope,
        module: &str,
        name: &str,
    ) -> QualifiedLookup<'a> {
        if !scope.modules.contains(module) {
            return QualifiedLookup::NotAModule;
        }
        match self.exports.get(module) {
            Some(interface) => match interface.get(name) {
                Some(info) => QualifiedLookup::Found(info),
                None => QualifiedLookup::NotExported,
            },
            None => QualifiedLookup::ModuleOpaque,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QualifiedLookup<'a> {
    Found(&'a SymbolInfo),
    /// Module is imported but its definition is unavailable.
    ModuleOpaque,
    NotExported,
    /// The qualifier is not an imported module.
    NotAModule,
}

fn func(name: &'static str, var_params: &[bool]) -> (&'static str, SymbolKind) {
    (name, SymbolKind::Procedure { var_params: var_params.to_vec() })
}

/// Pervasive identifiers: available without import.
pub fn pervasive(name: &str) -> Option<&'static SymbolInfo> {
    use std::collections::BTreeMap;
    use std::sync::OnceLock;
    static PERVASIVES: OnceLock<BTreeMap<&'static str, SymbolInfo>> = OnceLock::new();
    let map = PERVASIVES.get_or_init(|| {
        let mut map = BTreeMap::new();
        for ty in [
            "INTEGER", "CARDINAL", "LONGINT", "LONGCARD", "REAL", "LONGREAL", "BOOLEAN", "CHAR",
            "BITSET", "PROC",
        ] {
            map.insert(ty, SymbolInfo::pervasive(SymbolKind::Type));
        }
        for c in ["TRUE", "FALSE", "NIL"] {
            map.insert(c, SymbolInfo::pervasive(SymbolKind::Constant));
        }
        let procs = [
            func("ABS", &[false]),
            func("CAP", &[false]),
            func("CHR", &[false]),
            func("FLOAT", &[false]),
            func("HALT", &[]),
            func("HIGH", &[false]),
            func("MAX", &[false]),
            func("MIN", &[false]),
            func("ODD", &[false]),
            func("ORD", &[false]),
            func("SIZE", &[false]),
            func("TRUNC", &[false]),
            func("VAL", &[false, false]),
            // Non-standard conversions are known names so they never
            // look like unresolved casts; their removal is reported by
            // the conversion check.
            func("INT", &[false]),
            func("CARD", &[false]),
            func("LFLOAT", &[false]),
            // Mutating built-ins take their first argument by VAR.
            func("INC", &[true, false]),
            func("DEC", &[true, false]),
            func("INCL", &[true, false]),
            func("EXCL", &[true, false]),
            func("NEW", &[true]),
            func("DISPOSE", &[true]),
        ];
        for (name, kind) in procs {
            map.insert(name, SymbolInfo::pervasive(kind));
        }
        map
    });
    map.get(name)
}

/// The exported interface of the SYSTEM pseudo-module.
pub fn system_exports() -> BTreeMap<String, SymbolInfo> {
    let mut map = BTreeMap::new();
    for ty in ["WORD", "ADDRESS", "PROCESS"] {
        map.insert(
            ty.to_string(),
            SymbolInfo {
                kind: SymbolKind::Type,
                defined_in: "SYSTEM".to_string(),
                exported: true,
                read_only_import: false,
            },
        );
    }
    let procs: [(&str, &[bool]); 6] = [
        ("ADR", &[false]),
        ("TSIZE", &[false]),
        ("NEWPROCESS", &[false, false, false, true]),
        ("TRANSFER", &[true, true]),
        ("IOTRANSFER", &[true, true, false]),
        ("LISTEN", &[false]),
    ];
    for (name, var_params) in procs {
        map.insert(
            name.to_string(),
            SymbolInfo {
                kind: SymbolKind::Procedure { var_params: var_params.to_vec() },
                defined_in: "SYSTEM".to_string(),
                exported: true,
                read_only_import: false,
            },
        );
    }
    map
}

/// Symbols a unit declares at its top level, with procedure VAR-flag
/// signatures. Local modules contribute their exported names.
pub fn declared_symbols(unit: &CompilationUnit) -> Vec<(String, SymbolKind)> {
    block_symbols(&unit.block.declarations)
}

/// Symbols declared directly by a block's declaration list.
pub(crate) fn block_symbols(declarations: &[Declaration]) -> Vec<(String, SymbolKind)> {
    let mut symbols = Vec::new();
    collect_block(declarations, &mut symbols);
    symbols
}

fn collect_block(declarations: &[Declaration], out: &mut Vec<(String, SymbolKind)>) {
    for decl in declarations {
        match decl {
            Declaration::Const(consts) => {
                for c in consts {
                    out.push((c.name.name.clone(), SymbolKind::Constant));
                }
            }
            Declaration::Type(types) => {
                for t in types {
                    out.push((t.name.name.clone(), SymbolKind::Type));
                }
            }
            Declaration::Var(vars) => {
                for v in vars {
                    for name in &v.names {
                        out.push((name.name.clone(), SymbolKind::Variable));
                    }
                }
            }
            Declaration::Procedure(proc) => {
                let mut var_params = Vec::new();
                for param in &proc.heading.params {
                    for _ in &param.names {
                        var_params.push(param.is_var);
                    }
                }
                out.push((proc.heading.name.name.clone(), SymbolKind::Procedure { var_params }));
            }
            Declaration::Module(module) => {
                out.push((module.name.name.clone(), SymbolKind::Module));
                // A local module's exports become visible in the
                // enclosing block.
                if let Some(export) = &module.export {
                    let mut inner = Vec::new();
                    collect_block(&module.block.declarations, &mut inner);
                    for name in &export.names {
                        if let Some((n, kind)) =
                            inner.iter().find(|(n, _)| n == &name.name)
                        {
                            out.push((n.clone(), kind.clone()));
                        }
                    }
                }
            }
        }
    }
}
