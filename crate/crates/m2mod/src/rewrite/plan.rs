//! Edit planning over a parsed unit: conversion-call rewrites, legacy
//! export-list removal, and the per-file aggregate plan.

use crate::lexis::{IntegerBase, TokenKind};
use crate::policy::FacilityId;
use crate::rewrite::convert::{convert_octal_literal, directive_edit, synonym_edit};
use crate::rewrite::Edit;
use crate::source::span_of_range;
use crate::syntax::visit::{walk_unit, AstVisitor, CallSite};
use crate::syntax::CompilationUnit;

/// Rewrite targets for the conversion functions: the VAL target type
/// per callee name.
const CONVERSION_REWRITES: [(&str, &str); 5] = [
    ("FLOAT", "REAL"),
    ("TRUNC", "CARDINAL"),
    ("INT", "INTEGER"),
    ("CARD", "CARDINAL"),
    ("LFLOAT", "LONGREAL"),
];

struct ConversionPlanner {
    edits: Vec<Edit>,
}

impl AstVisitor for ConversionPlanner {
    fn call_site(&mut self, site: &CallSite<'_>) {
        if !site.callee.is_plain() {
            return;
        }
        let Some(target) = CONVERSION_REWRITES
            .iter()
            .find(|(name, _)| *name == site.callee.base.name)
            .map(|(_, ty)| *ty)
        else {
            return;
        };
        // Exactly one argument; anything else is probably a shadowing
        // user procedure and is reported, not rewritten.
        let (Some(args), Some(lparen)) = (site.args, site.lparen_span) else {
            return;
        };
        if args.len() != 1 {
            return;
        }
        let span = site.callee.span.cover(lparen);
        let facility = if matches!(site.callee.base.name.as_str(), "FLOAT" | "TRUNC") {
            FacilityId::DeprecatedConversion
        } else {
            FacilityId::RemovedConversion
        };
        self.edits.push(Edit::new(
            span,
            format!("VAL({target}, "),
            facility,
            format!("rewrite {}(..) to VAL({target}, ..)", site.callee.base.name),
        ));
    }
}

/// Edits replacing every `FLOAT`/`TRUNC`/`INT`/`CARD`/`LFLOAT` call
/// with the equivalent `VAL` invocation. Only the callee and opening
/// parenthesis are touched, so nested conversions rewrite in one pass.
pub fn rewrite_conversions(unit: &CompilationUnit) -> Vec<Edit> {
    let mut planner = ConversionPlanner { edits: Vec::new() };
    walk_unit(unit, &mut planner);
    planner.edits
}

/// Edit deleting a legacy export list, taking whole lines with it when
/// they become blank.
pub fn strip_export_list(unit: &CompilationUnit) -> Option<Edit> {
    let export = unit.export_list.as_ref()?;
    let source = &unit.source;
    let start = export.span.start;
    let end = export.span.end;
    let line_start = source[..start].rfind('\n').map(|i| i + 1).unwrap_or(0);
    let prefix_blank = source[line_start..start].chars().all(char::is_whitespace);
    let tail = &source[end..];
    let newline_at = tail.find('\n');
    let suffix_blank = match newline_at {
        Some(i) => tail[..i].chars().all(char::is_whitespace),
        None => tail.chars().all(char::is_whitespace),
    };
    let (cut_start, cut_end) = if prefix_blank && suffix_blank {
        let cut_end = match newline_at {
            Some(i) => end + i + 1,
            None => source.len(),
        };
        (line_start, cut_end)
    } else {
        let mut cut_end = end;
        while source[cut_end..].starts_with(' ') || source[cut_end..].starts_with('\t') {
            cut_end += 1;
        }
        (start, cut_end)
    };
    Some(Edit::new(
        span_of_range(source, cut_start, cut_end),
        "",
        FacilityId::LegacyExportList,
        "remove legacy export list",
    ))
}

/// The full fix plan for one unit: octal literals, synonym symbols,
/// directive delimiters, conversion calls, and the legacy export list.
/// Edits contained inside a larger planned edit are dropped (deleted
/// text needs no inner rewrites).
pub fn plan_edits(unit: &CompilationUnit) -> Vec<Edit> {
    let mut edits = Vec::new();
    for (i, token) in unit.tokens.iter().enumerate() {
        for trivia in &token.leading_trivia {
            if let Some(edit) = directive_edit(trivia) {
                edits.push(edit);
            }
        }
        match token.kind {
            TokenKind::IntegerLiteral(IntegerBase::OctalB) | TokenKind::CharCodeLiteral => {
                if let Ok(edit) = convert_octal_literal(token) {
                    edits.push(edit);
                }
            }
            TokenKind::Synonym(_) => {
                if let Some(edit) = synonym_edit(&unit.tokens, i) {
                    edits.push(edit);
                }
            }
            _ => {}
        }
    }
    edits.extend(rewrite_conversions(unit));
    if let Some(edit) = strip_export_list(unit) {
        edits.push(edit);
    }
    edits.sort_by_key(|e| (e.span.start, std::cmp::Reverse(e.span.end)));
    drop_contained(edits)
}

fn drop_contained(edits: Vec<Edit>) -> Vec<Edit> {
    let mut out: Vec<Edit> = Vec::with_capacity(edits.len());
    for edit in edits {
        if let Some(last) = out.last() {
            if edit.span.start >= last.span.start && edit.span.end <= last.span.end {
                continue;
            }
        }
        out.push(edit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexis::tokenize;
    use crate::policy::default_config;
    use crate::rewrite::apply_edits;
    use crate::syntax::parse_compilation_unit;

    fn unit_of(src: &str) -> CompilationUnit {
        let config = default_config();
        let (tokens, _) = tokenize(src, &config);
        let (unit, _) = parse_compilation_unit(tokens, &config);
        unit
    }

    fn fix(src: &str) -> String {
        let unit = unit_of(src);
        apply_edits(&unit.source, &plan_edits(&unit)).unwrap()
    }

    #[test]
    fn conversion_rewrites() {
        let src = "MODULE M; VAR n, r : REAL;\nBEGIN\nr := FLOAT(n); n := TRUNC(x + y); r := LFLOAT(x)\nEND M.";
        let fixed = fix(src);
        assert!(fixed.contains("r := VAL(REAL, n)"), "{fixed}");
        assert!(fixed.contains("n := VAL(CARDINAL, x + y)"), "{fixed}");
        assert!(fixed.contains("r := VAL(LONGREAL, x)"), "{fixed}");
    }

    #[test]
    fn nested_conversions_rewrite_in_one_pass() {
        let fixed = fix("MODULE M; BEGIN r := FLOAT(TRUNC(r)) END M.");
        assert!(fixed.contains("r := VAL(REAL, VAL(CARDINAL, r))"), "{fixed}");
    }

    #[test]
    fn shadow_suspect_arity_is_not_rewritten() {
        let fixed = fix("MODULE M; BEGIN x := FLOAT(a, b); y := CARD() END M.");
        assert!(fixed.contains("FLOAT(a, b)"));
        assert!(fixed.contains("CARD()"));
    }

    #[test]
    fn qualified_names_are_not_conversions() {
        let fixed = fix("MODULE M; BEGIN x := MathLib.FLOAT(a) END M.");
        assert!(fixed.contains("MathLib.FLOAT(a)"));
    }

    #[test]
    fn strip_export_list_same_line() {
        let fixed = fix("DEFINITION MODULE M; EXPORT QUALIFIED a, b; VAR a, b : CARDINAL;\nEND M.");
        assert!(fixed.starts_with("DEFINITION MODULE M; VAR"), "{fixed}");
    }

    #[test]
    fn strip_export_list_own_line() {
        let src = "DEFINITION MODULE M;\nEXPORT QUALIFIED a, b;\nVAR a, b : CARDINAL;\nEND M.\n";
        let fixed = fix(src);
        assert_eq!(fixed, "DEFINITION MODULE M;\nVAR a, b : CARDINAL;\nEND M.\n");
    }

    #[test]
    fn strip_export_list_two_lines() {
        let src = "DEFINITION MODULE M;\nEXPORT QUALIFIED a,\n  b;\nVAR a, b : CARDINAL;\nEND M.\n";
        let fixed = fix(src);
        assert_eq!(fixed, "DEFINITION MODULE M;\nVAR a, b : CARDINAL;\nEND M.\n");
    }

    #[test]
    fn definition_without_export_plans_nothing() {
        let unit = unit_of("DEFINITION MODULE M;\nVAR a : CARDINAL;\nEND M.\n");
        assert!(strip_export_list(&unit).is_none());
    }

    #[test]
    fn octal_synonym_directive_edits_compose() {
        let src = "MODULE M; (*%T+*)\nBEGIN\nIF x<>y & ~z THEN i := 377B; c := 15C END\nEND M.\n";
        let fixed = fix(src);
        assert!(fixed.contains("(*$T+*)"), "{fixed}");
        assert!(fixed.contains("x#y AND NOT z"), "{fixed}");
        assert!(fixed.contains("i := 255"), "{fixed}");
        assert!(fixed.contains("c := CHR(13)"), "{fixed}");
    }

    #[test]
    fn fix_is_idempotent_on_mixed_input() {
        let src = "MODULE M; (*%T+*)\nBEGIN\nIF x<>y & ~z THEN i := 377B; r := FLOAT(TRUNC(r)) END\nEND M.\n";
        let once = fix(src);
        let unit = unit_of(&once);
        assert!(plan_edits(&unit).is_empty(), "second pass not empty: {once}");
    }
}
