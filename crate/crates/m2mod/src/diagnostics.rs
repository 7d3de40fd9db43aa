//! Diagnostic data model, deterministic ordering, text and structured
//! rendering, and exit-code computation.

use crate::policy::{FacilityId, Severity};
use crate::rewrite::Edit;
use crate::source::Span;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

/// A single finding. `file` is stamped by the driver once the source
/// of the diagnostic is known; ops that work on in-memory text leave
/// it empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    /// Stable identifier, `M2M-...`.
    pub code: &'static str,
    pub severity: Severity,
    pub file: String,
    pub span: Span,
    pub message: String,
    pub facility: Option<FacilityId>,
    pub suggested_edit: Option<Edit>,
    /// Section tag of the recommendation this rule implements.
    pub explanation_ref: Option<&'static str>,
}

impl Diagnostic {
    pub fn new(code: &'static str, severity: Severity, span: Span, message: impl Into<String>) -> Self {
        let entry = registry_entry(code);
        Diagnostic {
            code,
            severity,
            file: String::new(),
            span,
            message: message.into(),
            facility: entry.and_then(|e| e.facility),
            suggested_edit: None,
            explanation_ref: entry.and_then(|e| e.section),
        }
    }

    pub fn with_edit(mut self, edit: Edit) -> Self {
        self.suggested_edit = Some(edit);
        self
    }

    pub fn with_file(mut self, file: &str) -> Self {
        self.file = file.to_string();
        self
    }
}

/// Registry entry describing one diagnostic code.
#[derive(Debug, Clone, Copy)]
pub struct CodeInfo {
    pub code: &'static str,
    pub facility: Option<FacilityId>,
    /// Section tag of the underlying recommendation, when there is one.
    pub section: Option<&'static str>,
    pub summary: &'static str,
    /// Longer rationale shown by `m2mod explain`.
    pub detail: &'static str,
}

/// Every diagnostic code the tool can emit, with its rationale.
pub const CODES: &[CodeInfo] = &[
    CodeInfo {
        code: "M2M-OCTAL",
        facility: Some(FacilityId::OctalLiterals),
        section: Some("2.1"),
        summary: "octal literal",
        detail: "Octal literals with B or C suffixes are disabled; the suffix letters double \
                 as hexadecimal digits, which misleads readers. Character codes belong in \
                 CHR(n); other values belong in decimal or hexadecimal literals. Fix mode \
                 rewrites NNNC to CHR(d) and NNNB to the equal decimal literal - the decimal \
                 target for B literals is this tool's choice, made so the result reads \
                 without context.",
    },
    CodeInfo {
        code: "M2M-OCTAL-RANGE",
        facility: Some(FacilityId::OctalLiterals),
        section: Some("2.1"),
        summary: "octal literal out of range",
        detail: "The octal literal's value does not fit any supported word size, so no \
                 rewrite is offered.",
    },
    CodeInfo {
        code: "M2M-SYNONYM",
        facility: Some(FacilityId::SynonymSymbols),
        section: Some("2.2"),
        summary: "synonym symbol",
        detail: "The synonym symbols <>, & and ~ are disabled; each concept gets exactly one \
                 spelling. Write # for inequality, AND and NOT for the boolean operators. \
                 Fix mode rewrites them, inserting spaces where a word would fuse with its \
                 neighbors.",
    },
    CodeInfo {
        code: "M2M-DIRECTIVE",
        facility: Some(FacilityId::NonCanonicalDirectives),
        section: Some("2.3"),
        summary: "non-canonical directive delimiters",
        detail: "Non-semantic compiler directives must open with (*$ and close with *). \
                 Legacy openers such as (*% and (*# are recognized and fix mode rewrites \
                 the opener; the payload is left alone.",
    },
    CodeInfo {
        code: "M2M-DIRECTIVE-SEMANTIC",
        facility: Some(FacilityId::SemanticDirectiveCandidate),
        section: Some("2.4"),
        summary: "semantic directive candidate",
        detail: "A %-prefixed line looks like a semantic compiler directive (conditional \
                 compilation and the like). Such directives cannot be ignored safely and \
                 this tool does not evaluate them; the region is reported and skipped.",
    },
    CodeInfo {
        code: "M2M-DIRECTIVE-UNKNOWN",
        facility: None,
        section: Some("2.3"),
        summary: "unrecognized directive key",
        detail: "A canonical (*$KEY=...*) directive used a key this tool does not know. \
                 Non-semantic directives are safely ignorable, so it is preserved and \
                 ignored.",
    },
    CodeInfo {
        code: "M2M-ARRAY-MIXED",
        facility: Some(FacilityId::MixedArrayForms),
        section: Some("3.1"),
        summary: "mixed multi-dimensional array forms",
        detail: "This compilation unit declares multi-dimensional arrays both in the \
                 abbreviated form (ARRAY [..],[..] OF T) and the long form (ARRAY [..] OF \
                 ARRAY [..] OF T). The minority form is flagged; on a tie the long form is. \
                 Pick one form per unit.",
    },
    CodeInfo {
        code: "M2M-LOCAL-MODULE",
        facility: Some(FacilityId::LocalModules),
        section: Some("3.2"),
        summary: "local module",
        detail: "Local modules are deprecated: anything worth a local module is worth a \
                 separate library module with its own definition part. Use the CLIENTS \
                 directive on the new library to keep it private to designated importers.",
    },
    CodeInfo {
        code: "M2M-UMINUS",
        facility: Some(FacilityId::AmbiguousUnaryMinus),
        section: Some("3.3"),
        summary: "ambiguous unary minus",
        detail: "A leading minus followed by more than a single factor reads two ways: \
                 mathematically as (-a) * b + c, grammatically as -(a * b + c). Unary minus \
                 is only permitted before a single factor; parenthesize to make intent \
                 explicit. No automatic rewrite is offered - only the author knows which \
                 reading was meant.",
    },
    CodeInfo {
        code: "M2M-CONV-DEPRECATED",
        facility: Some(FacilityId::DeprecatedConversion),
        section: Some("4.1"),
        summary: "deprecated conversion function",
        detail: "FLOAT() and TRUNC() are deprecated as conversion functions; VAL() covers \
                 all numeric conversions. Fix mode rewrites FLOAT(e) to VAL(REAL, e) and \
                 TRUNC(e) to VAL(CARDINAL, e).",
    },
    CodeInfo {
        code: "M2M-CONV-REMOVED",
        facility: Some(FacilityId::RemovedConversion),
        section: Some("4.1"),
        summary: "removed conversion function",
        detail: "The non-standard conversion functions INT(), CARD() and LFLOAT() are \
                 removed; there is no switch to re-enable them. Fix mode rewrites them to \
                 VAL(INTEGER, e), VAL(CARDINAL, e) and VAL(LONGREAL, e).",
    },
    CodeInfo {
        code: "M2M-CONV-ARITY",
        facility: None,
        section: Some("4.1"),
        summary: "conversion call with unexpected arity",
        detail: "A call to a conversion-function name did not pass exactly one argument. \
                 It is probably a user procedure shadowing the pervasive name, so no \
                 rewrite is planned.",
    },
    CodeInfo {
        code: "M2M-READONLY",
        facility: Some(FacilityId::WriteImportedVars),
        section: Some("5.1"),
        summary: "write to imported variable",
        detail: "Imported variables are read-only objects. Assigning to one, passing it to \
                 a VAR parameter, or mutating it with INC/DEC/INCL/EXCL violates the \
                 exporting module's interface; call a setter procedure exported by the \
                 owning module instead.",
    },
    CodeInfo {
        code: "M2M-CLIENTS",
        facility: Some(FacilityId::NonClientImport),
        section: Some("3.2"),
        summary: "import by non-designated client",
        detail: "The imported library declares its intended client modules with a CLIENTS \
                 directive, and this importer is not among them. The library's interface \
                 may change without notice.",
    },
    CodeInfo {
        code: "M2M-CLIENTS-IGNORED",
        facility: None,
        section: Some("3.2"),
        summary: "CLIENTS directive ignored",
        detail: "A CLIENTS directive is only recognized immediately after a definition \
                 module header; anywhere else it is preserved but has no effect.",
    },
    CodeInfo {
        code: "M2M-CAST",
        facility: Some(FacilityId::TypeTransfer),
        section: Some("5.3"),
        summary: "unsafe type transfer",
        detail: "TypeName(expr) reinterprets a value without conversion, bypassing type \
                 safety. Type transfers are disabled by default and need the \
                 type-transfers switch; prefer VAL() when a value conversion was meant.",
    },
    CodeInfo {
        code: "M2M-CAST-UNKNOWN",
        facility: None,
        section: Some("5.3"),
        summary: "possible type transfer, callee unresolved",
        detail: "The callee's definition module is missing, so the tool cannot tell a \
                 type transfer from a procedure call and does not guess.",
    },
    CodeInfo {
        code: "M2M-VARIANT",
        facility: Some(FacilityId::VariantRecord),
        section: Some("5.3"),
        summary: "variant record",
        detail: "Records with variant parts allow overlapping storage and bypass type \
                 safety. They are disabled by default and need the variant-records \
                 switch.",
    },
    CodeInfo {
        code: "M2M-SYSTEM",
        facility: None,
        section: Some("5.3"),
        summary: "SYSTEM import",
        detail: "The pseudo-module SYSTEM packages the unsafe facilities; importing it is \
                 the intended, visible way to opt in. Recorded for awareness only.",
    },
    CodeInfo {
        code: "M2M-FOREIGN-DISABLED",
        facility: Some(FacilityId::ForeignIdentifiers),
        section: Some("6.3"),
        summary: "foreign identifier with switch off",
        detail: "Identifiers containing $ or _ exist to interface with foreign APIs and \
                 are disabled by default. Enable the foreign-identifiers switch (or the \
                 language-extensions umbrella) in units that bind foreign APIs.",
    },
    CodeInfo {
        code: "M2M-FOREIGN-MALFORMED",
        facility: Some(FacilityId::ForeignIdentifiers),
        section: Some("6.3"),
        summary: "malformed foreign identifier",
        detail: "Foreign identifiers must avoid collisions with name-mangled symbols: no \
                 consecutive and no trailing dollar signs; no leading, consecutive or \
                 trailing lowlines. Always an error, even with the switch on.",
    },
    CodeInfo {
        code: "M2M-FOREIGN-IN-MODULE-ID",
        facility: Some(FacilityId::ForeignIdentifiers),
        section: Some("6.3"),
        summary: "foreign characters in module identifier",
        detail: "Dollar signs and lowlines are never permitted within module identifiers, \
                 regardless of switches.",
    },
    CodeInfo {
        code: "M2M-EXTENSION",
        facility: Some(FacilityId::LanguageExtension),
        section: Some("6.1"),
        summary: "language extension",
        detail: "Language extensions are disabled by default so sources stay portable. \
                 Enable the language-extensions switch to accept the extension; uses are \
                 then reported at info level only.",
    },
    CodeInfo {
        code: "M2M-FFI-MALFORMED",
        facility: Some(FacilityId::FfiPragmaViolation),
        section: Some("6.4"),
        summary: "malformed FFI directive",
        detail: "A foreign-interface directive must read (*$F=\"API\"*) or \
                 (*$FFI=\"API\"*): key, equals sign, and a non-empty quoted API name.",
    },
    CodeInfo {
        code: "M2M-FFI-POSITION",
        facility: Some(FacilityId::FfiPragmaViolation),
        section: Some("6.4"),
        summary: "FFI directive out of position",
        detail: "A foreign-interface directive is only meaningful immediately after the \
                 module header of a definition module.",
    },
    CodeInfo {
        code: "M2M-FFI-API",
        facility: None,
        section: Some("6.4"),
        summary: "unlisted foreign API name",
        detail: "The foreign API name is not one of the well-known ones (ASM, C, Fortran, \
                 Pascal). It is accepted and recorded verbatim.",
    },
    CodeInfo {
        code: "M2M-EXPORT-LIST",
        facility: Some(FacilityId::LegacyExportList),
        section: Some("7.2"),
        summary: "legacy export list",
        detail: "Export lists in definition modules predate the third-edition language \
                 revision; a definition module exports all its contents, so the list is \
                 duplication. Fix mode deletes it.",
    },
    CodeInfo {
        code: "M2M-SUFFIX",
        facility: Some(FacilityId::FilenameSuffix),
        section: Some("7.1"),
        summary: "non-standard filename suffix",
        detail: "Only the suffixes def (definition modules) and mod (implementation and \
                 program modules) are recognized. There is no switch to accept others; \
                 rename the file.",
    },
    CodeInfo {
        code: "M2M-COMMENT-UNTERMINATED",
        facility: None,
        section: None,
        summary: "unterminated comment",
        detail: "A (* comment was still open at end of input. Comments nest; every (* \
                 needs its own *).",
    },
    CodeInfo {
        code: "M2M-STRING-UNTERMINATED",
        facility: None,
        section: None,
        summary: "unterminated string",
        detail: "A string literal was not closed before the end of its line.",
    },
    CodeInfo {
        code: "M2M-LIT-MALFORMED",
        facility: None,
        section: None,
        summary: "malformed numeric literal",
        detail: "The characters form no valid decimal, hexadecimal (digits then H, first \
                 character a decimal digit), octal (0-7 then B or C), or real literal.",
    },
    CodeInfo {
        code: "M2M-CHAR",
        facility: None,
        section: None,
        summary: "illegal character",
        detail: "The character cannot start any token. Bytes outside 7-bit ASCII are only \
                 accepted inside comments and string literals.",
    },
    CodeInfo {
        code: "M2M-SYNTAX",
        facility: None,
        section: None,
        summary: "syntax error",
        detail: "The token stream does not match the grammar at this point. The parser \
                 resynchronizes at the next statement or declaration boundary.",
    },
    CodeInfo {
        code: "M2M-END-MISMATCH",
        facility: None,
        section: None,
        summary: "module name mismatch at END",
        detail: "The identifier after the final END must repeat the module name from the \
                 header.",
    },
    CodeInfo {
        code: "M2M-UNRESOLVED-IMPORT",
        facility: None,
        section: None,
        summary: "unresolved import",
        detail: "The named symbol is not exported by the module it is imported from.",
    },
    CodeInfo {
        code: "M2M-DEF-MISSING",
        facility: None,
        section: None,
        summary: "definition module not found",
        detail: "No definition module was found for an imported module, so cross-module \
                 checks involving it are degraded. Use --path to point at its directory, \
                 or --strict-imports to make this an error.",
    },
    CodeInfo {
        code: "M2M-ENCODING",
        facility: None,
        section: None,
        summary: "unsupported encoding",
        detail: "Input files must be valid UTF-8 (7-bit ASCII outside comments and \
                 strings).",
    },
    CodeInfo {
        code: "M2M-USAGE",
        facility: None,
        section: None,
        summary: "usage error",
        detail: "The command line or configuration file is invalid.",
    },
    CodeInfo {
        code: "M2M-IO",
        facility: None,
        section: None,
        summary: "input/output failure",
        detail: "A file could not be read or written.",
    },
];

fn registry_entry(code: &str) -> Option<&'static CodeInfo> {
    CODES.iter().find(|c| c.code == code)
}

/// Looks up the registry entry for `code`.
pub fn code_info(code: &str) -> Option<&'static CodeInfo> {
    registry_entry(code)
}

/// Deterministic order: file, then start offset, then code.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (a.file.as_str(), a.span.start, a.code).cmp(&(b.file.as_str(), b.span.start, b.code))
    });
}

fn severity_color(severity: Severity) -> &'static str {
    match severity {
        Severity::Error => "\x1b[31m",
        Severity::DeprecationWarning => "\x1b[35m",
        Severity::Warning => "\x1b[33m",
        Severity::Info => "\x1b[36m",
    }
}

/// Renders one line per diagnostic:
/// `file:line:col: severity[code]: message`.
///
/// Input order does not matter; output is sorted and stable.
pub fn render_text(diags: &[Diagnostic], color: bool) -> String {
    let mut sorted = diags.to_vec();
    sort_diagnostics(&mut sorted);
    let mut out = String::new();
    for d in &sorted {
        if color {
            out.push_str(&format!(
                "{}:{}:{}: {}{}\x1b[0m[{}]: {}\n",
                d.file,
                d.span.line,
                d.span.col,
                severity_color(d.severity),
                d.severity,
                d.code,
                d.message
            ));
        } else {
            out.push_str(&format!(
                "{}:{}:{}: {}[{}]: {}\n",
                d.file, d.span.line, d.span.col, d.severity, d.code, d.message
            ));
        }
    }
    out
}

/// One structured record per diagnostic; the line-delimited JSON shape
/// of the `--format=json-lines` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub code: String,
    pub severity: Severity,
    pub file: String,
    pub line: u32,
    pub col: u32,
    #[serde(rename = "endLine")]
    pub end_line: u32,
    #[serde(rename = "endCol")]
    pub end_col: u32,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facility: Option<FacilityId>,
    #[serde(rename = "paperRef", skip_serializing_if = "Option::is_none")]
    pub paper_ref: Option<String>,
}

impl From<&Diagnostic> for DiagnosticRecord {
    fn from(d: &Diagnostic) -> Self {
        DiagnosticRecord {
            code: d.code.to_string(),
            severity: d.severity,
            file: d.file.clone(),
            line: d.span.line,
            col: d.span.col,
            end_line: d.span.end_line,
            end_col: d.span.end_col,
            message: d.message.clone(),
            facility: d.facility,
            paper_ref: d.explanation_ref.map(str::to_string),
        }
    }
}

/// Renders diagnostics as line-delimited JSON records, sorted like
/// `render_text`.
pub fn render_structured(diags: &[Diagnostic]) -> String {
    let mut sorted = diags.to_vec();
    sort_diagnostics(&mut sorted);
    let mut out = String::new();
    for d in &sorted {
        let record = DiagnosticRecord::from(d);
        out.push_str(&serde_json::to_string(&record).expect("diagnostic record serializes"));
        out.push('\n');
    }
    out
}

/// Parses `render_structured` output back into records.
pub fn read_structured(text: &str) -> Result<Vec<DiagnosticRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// Exit status for a run that completed.
///
/// 0 when nothing blocked the build; 1 on any error; 2 under `--strict`
/// when warnings or deprecation warnings remain. Deprecation warnings
/// alone do not fail the build: the switch was enabled deliberately.
/// Exit 3 (internal error) is issued by the driver, never from
/// diagnostics. In fix mode, pass the diagnostics that remain after
/// edits were applied, so fixed errors no longer count.
pub fn exit_code(diags: &[Diagnostic], strict: bool) -> i32 {
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return 1;
    }
    if strict
        && diags
            .iter()
            .any(|d| matches!(d.severity, Severity::Warning | Severity::DeprecationWarning))
    {
        return 2;
    }
    0
}

/// Writes rendered output, mapping broken pipes to success.
pub fn write_output(out: &mut dyn Write, text: &str) -> io::Result<()> {
    match out.write_all(text.as_bytes()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::Span;

    fn diag(code: &'static str, severity: Severity, file: &str, start: usize) -> Diagnostic {
        Diagnostic::new(
            code,
            severity,
            Span::new(start, start + 1, 1, start as u32 + 1, 1, start as u32 + 2),
            "test message",
        )
        .with_file(file)
    }

    #[test]
    fn empty_renders_empty() {
        assert_eq!(render_text(&[], false), "");
        assert_eq!(render_structured(&[]), "");
    }

    #[test]
    fn same_offset_sorts_by_code() {
        let a = diag("M2M-SYNONYM", Severity::Error, "A.mod", 3);
        let b = diag("M2M-OCTAL", Severity::Error, "A.mod", 3);
        let text = render_text(&[a, b], false);
        let first = text.lines().next().unwrap();
        assert!(first.contains("M2M-OCTAL"), "{text}");
    }

    #[test]
    fn text_line_format() {
        let d = Diagnostic::new(
            "M2M-SYNONYM",
            Severity::DeprecationWarning,
            Span::new(20, 22, 3, 5, 3, 7),
            "synonym symbol '<>'; write '#'",
        )
        .with_file("Foo.mod");
        let text = render_text(&[d], false);
        assert_eq!(text, "Foo.mod:3:5: deprecation[M2M-SYNONYM]: synonym symbol '<>'; write '#'\n");
    }

    #[test]
    fn structured_round_trips() {
        let diags = vec![
            diag("M2M-OCTAL", Severity::Error, "A.mod", 0),
            diag("M2M-ARRAY-MIXED", Severity::Warning, "B.mod", 9),
        ];
        let text = render_structured(&diags);
        let records = read_structured(&text).unwrap();
        assert_eq!(records.len(), 2);
        let again: Vec<DiagnosticRecord> = {
            let mut sorted = diags.clone();
            sort_diagnostics(&mut sorted);
            sorted.iter().map(DiagnosticRecord::from).collect()
        };
        assert_eq!(records, again);
        assert!(text.contains("\"paperRef\":\"2.1\""));
        assert!(text.contains("\"facility\":\"octal-literals\""));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&[], false), 0);
        assert_eq!(exit_code(&[diag("M2M-OCTAL", Severity::Error, "a", 0)], false), 1);
        let warn = diag("M2M-ARRAY-MIXED", Severity::Warning, "a", 0);
        assert_eq!(exit_code(&[warn.clone()], false), 0);
        assert_eq!(exit_code(&[warn], true), 2);
        let dep = diag("M2M-SYNONYM", Severity::DeprecationWarning, "a", 0);
        assert_eq!(exit_code(&[dep.clone()], false), 0);
        assert_eq!(exit_code(&[dep], true), 2);
    }

    #[test]
    fn every_code_is_unique_and_facility_diags_have_sections() {
        let mut seen = std::collections::HashSet::new();
        for info in CODES {
            assert!(seen.insert(info.code), "duplicate code {}", info.code);
            if info.facility.is_some() {
                assert!(info.section.is_some(), "{} needs a section tag", info.code);
            }
        }
    }
}
