//! The facility registry: every offending facility, its mitigation, its
//! default switch state, and the severity of using it under a given
//! configuration.
//!
//! All switches default to off. Facilities whose mitigation is removal
//! (non-standard conversion functions, non-standard filename suffixes)
//! have no switch at all; trying to enable one is a usage error.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Identifies one offending facility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FacilityId {
    OctalLiterals,
    SynonymSymbols,
    NonCanonicalDirectives,
    SemanticDirectiveCandidate,
    MixedArrayForms,
    LocalModules,
    AmbiguousUnaryMinus,
    DeprecatedConversion,
    RemovedConversion,
    WriteImportedVars,
    TypeTransfer,
    VariantRecord,
    ForeignIdentifiers,
    FfiPragmaViolation,
    LegacyExportList,
    FilenameSuffix,
    LanguageExtension,
    /// Import of a library by a module outside its declared client list.
    NonClientImport,
}

impl FacilityId {
    pub const ALL: [FacilityId; 18] = [
        FacilityId::OctalLiterals,
        FacilityId::SynonymSymbols,
        FacilityId::NonCanonicalDirectives,
        FacilityId::SemanticDirectiveCandidate,
        FacilityId::MixedArrayForms,
        FacilityId::LocalModules,
        FacilityId::AmbiguousUnaryMinus,
        FacilityId::DeprecatedConversion,
        FacilityId::RemovedConversion,
        FacilityId::WriteImportedVars,
        FacilityId::TypeTransfer,
        FacilityId::VariantRecord,
        FacilityId::ForeignIdentifiers,
        FacilityId::FfiPragmaViolation,
        FacilityId::LegacyExportList,
        FacilityId::FilenameSuffix,
        FacilityId::LanguageExtension,
        FacilityId::NonClientImport,
    ];

    /// Stable kebab-case name used in structured output.
    pub fn name(&self) -> &'static str {
        match self {
            FacilityId::OctalLiterals => "octal-literals",
            FacilityId::SynonymSymbols => "synonym-symbols",
            FacilityId::NonCanonicalDirectives => "non-canonical-directives",
            FacilityId::SemanticDirectiveCandidate => "semantic-directive-candidate",
            FacilityId::MixedArrayForms => "mixed-array-forms",
            FacilityId::LocalModules => "local-modules",
            FacilityId::AmbiguousUnaryMinus => "ambiguous-unary-minus",
            FacilityId::DeprecatedConversion => "deprecated-conversion",
            FacilityId::RemovedConversion => "removed-conversion",
            FacilityId::WriteImportedVars => "write-imported-vars",
            FacilityId::TypeTransfer => "type-transfer",
            FacilityId::VariantRecord => "variant-record",
            FacilityId::ForeignIdentifiers => "foreign-identifiers",
            FacilityId::FfiPragmaViolation => "ffi-pragma-violation",
            FacilityId::LegacyExportList => "legacy-export-list",
            FacilityId::FilenameSuffix => "filename-suffix",
            FacilityId::LanguageExtension => "language-extension",
            FacilityId::NonClientImport => "non-client-import",
        }
    }
}

impl fmt::Display for FacilityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a facility is dealt with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mitigation {
    pub kind: MitigationKind,
    /// A mechanical source rewrite exists for this facility.
    pub transformation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MitigationKind {
    /// Report each use; the facility stays available.
    Warning,
    /// The construct is replaced by a prescribed alternative.
    Change,
    /// Disabled by default behind a switch; each use warns when enabled.
    Deprecation,
    /// No switch; the facility is gone.
    Removal,
}

impl fmt::Display for MitigationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MitigationKind::Warning => "warning",
            MitigationKind::Change => "change",
            MitigationKind::Deprecation => "deprecation",
            MitigationKind::Removal => "removal",
        })
    }
}

/// Severity of a diagnostic. Ordering is by increasing weight, so
/// `Error` compares greatest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    #[serde(rename = "deprecation")]
    DeprecationWarning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::DeprecationWarning => "deprecation",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

/// The full set of facility switches for one run. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DialectConfig {
    pub octal_literals: bool,
    pub synonym_symbols: bool,
    pub local_modules: bool,
    pub permissive_unary_minus: bool,
    pub deprecated_conversions: bool,
    pub write_imported_vars: bool,
    pub type_transfers: bool,
    pub variant_records: bool,
    pub foreign_identifiers: bool,
    pub language_extensions: bool,
    pub legacy_export_lists: bool,
    /// Rewrite mode: plan and apply edits instead of only reporting.
    pub fix_mode: bool,
}

/// All switches off, fix mode off.
pub fn default_config() -> DialectConfig {
    DialectConfig::default()
}

impl DialectConfig {
    /// Foreign identifiers are a language extension: enabling the umbrella
    /// switch enables them, and enabling them implies the umbrella.
    pub fn foreign_identifiers_enabled(&self) -> bool {
        self.foreign_identifiers || self.language_extensions
    }

    /// FFI pragmas ride on the language-extension umbrella as well.
    pub fn language_extensions_enabled(&self) -> bool {
        self.language_extensions || self.foreign_identifiers
    }

    /// State of the switch gating `facility`, or `None` for facilities
    /// that have no switch.
    pub fn switch_state(&self, facility: FacilityId) -> Option<bool> {
        match facility {
            FacilityId::OctalLiterals => Some(self.octal_literals),
            FacilityId::SynonymSymbols => Some(self.synonym_symbols),
            FacilityId::LocalModules => Some(self.local_modules),
            FacilityId::AmbiguousUnaryMinus => Some(self.permissive_unary_minus),
            FacilityId::DeprecatedConversion => Some(self.deprecated_conversions),
            FacilityId::WriteImportedVars => Some(self.write_imported_vars),
            FacilityId::TypeTransfer => Some(self.type_transfers),
            FacilityId::VariantRecord => Some(self.variant_records),
            FacilityId::ForeignIdentifiers => Some(self.foreign_identifiers_enabled()),
            FacilityId::LanguageExtension => Some(self.language_extensions_enabled()),
            FacilityId::LegacyExportList => Some(self.legacy_export_lists),
            FacilityId::NonCanonicalDirectives
            | FacilityId::SemanticDirectiveCandidate
            | FacilityId::MixedArrayForms
            | FacilityId::RemovedConversion
            | FacilityId::FfiPragmaViolation
            | FacilityId::FilenameSuffix
            | FacilityId::NonClientImport => None,
        }
    }
}

/// Severity of one use of `facility` under `config`.
///
/// The table is total: every `(FacilityId, config)` pair has a row.
/// Switched facilities are errors while disabled; enabling a switch
/// never raises severity.
pub fn severity_for(facility: FacilityId, config: &DialectConfig) -> Severity {
    match facility {
        // Always-warn facilities: mixture and delimiter style are style
        // findings, never gated.
        FacilityId::NonCanonicalDirectives
        | FacilityId::SemanticDirectiveCandidate
        | FacilityId::MixedArrayForms
        | FacilityId::NonClientImport => Severity::Warning,

        // No switch exists; every use is an error.
        FacilityId::RemovedConversion
        | FacilityId::FfiPragmaViolation
        | FacilityId::FilenameSuffix => Severity::Error,

        // Deprecation-class: error while off, deprecation warning when on.
        FacilityId::OctalLiterals
        | FacilityId::SynonymSymbols
        | FacilityId::LocalModules
        | FacilityId::DeprecatedConversion
        | FacilityId::WriteImportedVars
        | FacilityId::LegacyExportList => {
            if config.switch_state(facility) == Some(true) {
                Severity::DeprecationWarning
            } else {
                Severity::Error
            }
        }

        // Permissive unary minus keeps reporting the ambiguity, but only
        // as an ordinary warning.
        FacilityId::AmbiguousUnaryMinus => {
            if config.permissive_unary_minus {
                Severity::Warning
            } else {
                Severity::Error
            }
        }

        // Unsafe facilities and extensions are gated, not nagged: once
        // enabled, uses are reported at info level only.
        FacilityId::TypeTransfer
        | FacilityId::VariantRecord
        | FacilityId::ForeignIdentifiers
        | FacilityId::LanguageExtension => {
            if config.switch_state(facility) == Some(true) {
                Severity::Info
            } else {
                Severity::Error
            }
        }
    }
}

/// Mitigation assigned to each facility.
pub fn mitigation_for(facility: FacilityId) -> Mitigation {
    let (kind, transformation) = match facility {
        FacilityId::OctalLiterals => (MitigationKind::Deprecation, true),
        FacilityId::SynonymSymbols => (MitigationKind::Deprecation, true),
        FacilityId::NonCanonicalDirectives => (MitigationKind::Change, true),
        FacilityId::SemanticDirectiveCandidate => (MitigationKind::Warning, false),
        FacilityId::MixedArrayForms => (MitigationKind::Warning, false),
        FacilityId::LocalModules => (MitigationKind::Deprecation, false),
        FacilityId::AmbiguousUnaryMinus => (MitigationKind::Change, false),
        FacilityId::DeprecatedConversion => (MitigationKind::Deprecation, true),
        FacilityId::RemovedConversion => (MitigationKind::Removal, true),
        FacilityId::WriteImportedVars => (MitigationKind::Deprecation, false),
        FacilityId::TypeTransfer => (MitigationKind::Deprecation, false),
        FacilityId::VariantRecord => (MitigationKind::Deprecation, false),
        FacilityId::ForeignIdentifiers => (MitigationKind::Deprecation, false),
        FacilityId::FfiPragmaViolation => (MitigationKind::Change, false),
        FacilityId::LegacyExportList => (MitigationKind::Deprecation, true),
        FacilityId::FilenameSuffix => (MitigationKind::Removal, false),
        FacilityId::LanguageExtension => (MitigationKind::Deprecation, false),
        FacilityId::NonClientImport => (MitigationKind::Warning, false),
    };
    Mitigation { kind, transformation }
}

/// Name of the switch gating `facility`, when one exists.
pub fn switch_name_for(facility: FacilityId) -> Option<&'static str> {
    match facility {
        FacilityId::OctalLiterals => Some("octal-literals"),
        FacilityId::SynonymSymbols => Some("synonym-symbols"),
        FacilityId::LocalModules => Some("local-modules"),
        FacilityId::AmbiguousUnaryMinus => Some("permissive-unary-minus"),
        FacilityId::DeprecatedConversion => Some("deprecated-conversions"),
        FacilityId::WriteImportedVars => Some("write-imported-vars"),
        FacilityId::TypeTransfer => Some("type-transfers"),
        FacilityId::VariantRecord => Some("variant-records"),
        FacilityId::ForeignIdentifiers => Some("foreign-identifiers"),
        FacilityId::LanguageExtension => Some("language-extensions"),
        FacilityId::LegacyExportList => Some("legacy-export-lists"),
        _ => None,
    }
}

/// Switch names accepted by `--enable`/`--disable` and the config file.
pub const SWITCH_NAMES: [&str; 11] = [
    "octal-literals",
    "synonym-symbols",
    "local-modules",
    "permissive-unary-minus",
    "deprecated-conversions",
    "write-imported-vars",
    "type-transfers",
    "variant-records",
    "foreign-identifiers",
    "language-extensions",
    "legacy-export-lists",
];

/// A rejected switch name or unreadable config file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

fn unknown_switch(name: &str) -> ConfigError {
    ConfigError {
        message: format!(
            "unknown facility switch '{}'; valid names: {}",
            name,
            SWITCH_NAMES.join(", ")
        ),
    }
}

fn set_switch(config: &mut DialectConfig, name: &str, value: bool) -> Result<(), ConfigError> {
    match name {
        "octal-literals" => config.octal_literals = value,
        "synonym-symbols" => config.synonym_symbols = value,
        "local-modules" => config.local_modules = value,
        "permissive-unary-minus" => config.permissive_unary_minus = value,
        "deprecated-conversions" => config.deprecated_conversions = value,
        "write-imported-vars" => config.write_imported_vars = value,
        "type-transfers" => config.type_transfers = value,
        "variant-records" => config.variant_records = value,
        "foreign-identifiers" => config.foreign_identifiers = value,
        "language-extensions" => config.language_extensions = value,
        "legacy-export-lists" => config.legacy_export_lists = value,
        _ => return Err(unknown_switch(name)),
    }
    Ok(())
}

/// Builds the effective configuration: defaults, then config file
/// entries, then CLI switches, later sources winning.
///
/// `cli_switches` holds `(name, enabled)` pairs in command-line order.
/// `config_file` holds the text of `m2mod.conf` when one was found.
pub fn resolve_config(
    cli_switches: &[(String, bool)],
    config_file: Option<&str>,
) -> Result<DialectConfig, ConfigError> {
    let mut config = default_config();
    if let Some(text) = config_file {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((name, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    message: format!(
                        "config line {}: expected 'name = on|off', got '{}'",
                        lineno + 1,
                        raw.trim()
                    ),
                });
            };
            let name = name.trim();
            let value = match value.trim() {
                "on" => true,
                "off" => false,
                other => {
                    return Err(ConfigError {
                        message: format!(
                            "config line {}: value for '{}' must be 'on' or 'off', got '{}'",
                            lineno + 1,
                            name,
                            other
                        ),
                    })
                }
            };
            set_switch(&mut config, name, value)?;
        }
    }
    for (name, value) in cli_switches {
        set_switch(&mut config, name, *value)?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_all_off() {
        let c = default_config();
        assert!(!c.octal_literals);
        assert!(!c.type_transfers);
        assert!(!c.fix_mode);
        for f in FacilityId::ALL {
            if let Some(state) = c.switch_state(f) {
                assert!(!state, "{f} must default off");
            }
        }
        assert_eq!(default_config(), default_config());
    }

    #[test]
    fn severity_table_rows() {
        let off = default_config();
        let mut on = default_config();
        on.local_modules = true;
        assert_eq!(severity_for(FacilityId::LocalModules, &off), Severity::Error);
        assert_eq!(
            severity_for(FacilityId::LocalModules, &on),
            Severity::DeprecationWarning
        );
        assert_eq!(severity_for(FacilityId::MixedArrayForms, &off), Severity::Warning);
        assert_eq!(severity_for(FacilityId::MixedArrayForms, &on), Severity::Warning);
        let mut casts = default_config();
        casts.type_transfers = true;
        assert_eq!(severity_for(FacilityId::TypeTransfer, &casts), Severity::Info);
    }

    #[test]
    fn umbrella_switch_implications() {
        let mut c = default_config();
        c.foreign_identifiers = true;
        assert!(c.language_extensions_enabled());
        let mut u = default_config();
        u.language_extensions = true;
        assert!(u.foreign_identifiers_enabled());
    }

    #[test]
    fn cli_overrides_config_file() {
        let file = "local-modules = on\n# comment\noctal-literals = on\n";
        let cli = vec![("local-modules".to_string(), false)];
        let c = resolve_config(&cli, Some(file)).unwrap();
        assert!(!c.local_modules);
        assert!(c.octal_literals);
    }

    #[test]
    fn unknown_switch_is_usage_error() {
        let cli = vec![("no-such-facility".to_string(), true)];
        let err = resolve_config(&cli, None).unwrap_err();
        assert!(err.message.contains("no-such-facility"));
        for name in SWITCH_NAMES {
            assert!(err.message.contains(name), "error must list {name}");
        }
    }

    #[test]
    fn removal_facilities_have_no_switch() {
        assert!(resolve_config(&[("removed-conversion".into(), true)], None).is_err());
        assert!(resolve_config(&[("filename-suffix".into(), true)], None).is_err());
        assert_eq!(default_config().switch_state(FacilityId::RemovedConversion), None);
        assert_eq!(default_config().switch_state(FacilityId::FilenameSuffix), None);
    }

    #[test]
    fn mitigation_invariants() {
        for f in FacilityId::ALL {
            let m = mitigation_for(f);
            let switch = default_config().switch_state(f);
            match m.kind {
                MitigationKind::Deprecation => {
                    assert!(switch.is_some(), "{f}: deprecation implies a switch")
                }
                MitigationKind::Removal => {
                    assert!(switch.is_none(), "{f}: removal implies no switch")
                }
                _ => {}
            }
        }
    }
}
