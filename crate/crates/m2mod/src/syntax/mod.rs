//! Parser producing a full-fidelity AST for definition, implementation,
//! and program modules, with the restricted unary-minus grammar.

pub mod ast;
mod parser;
mod pragma;
pub mod visit;

pub use ast::*;
pub use parser::{parse_compilation_unit, parse_expression};
pub use pragma::{
    directive_kv, directive_payload, parse_clients_pragma, parse_ffi_pragma, split_key,
    FfiPragmaError, KNOWN_FOREIGN_APIS,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::Diagnostic;
    use crate::lexis::tokenize;
    use crate::policy::{default_config, DialectConfig, Severity};

    fn parse(src: &str) -> (CompilationUnit, Vec<Diagnostic>) {
        parse_with(src, &default_config())
    }

    fn parse_with(src: &str, config: &DialectConfig) -> (CompilationUnit, Vec<Diagnostic>) {
        let (tokens, lex_diags) = tokenize(src, config);
        let (unit, mut diags) = parse_compilation_unit(tokens, config);
        diags.extend(lex_diags);
        (unit, diags)
    }

    fn expr(src: &str, config: &DialectConfig) -> (Expression, Vec<Diagnostic>) {
        let (tokens, _) = tokenize(src, config);
        parse_expression(&tokens, config)
    }

    #[test]
    fn definition_module_with_var_and_heading() {
        let src = "DEFINITION MODULE Foo; VAR bar : Bar; PROCEDURE SetBar ( value : Bar ); END Foo.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(unit.unit_kind, UnitKind::Definition);
        assert_eq!(unit.module_name.name, "Foo");
        let vars: Vec<_> = unit
            .block
            .declarations
            .iter()
            .filter_map(|d| match d {
                Declaration::Var(v) => Some(v),
                _ => None,
            })
            .collect();
        assert_eq!(vars.len(), 1);
        assert_eq!(vars[0][0].names[0].name, "bar");
        let procs: Vec<_> = unit
            .block
            .declarations
            .iter()
            .filter_map(|d| match d {
                Declaration::Procedure(p) => Some(p),
                _ => None,
            })
            .collect();
        assert_eq!(procs.len(), 1);
        assert_eq!(procs[0].heading.name.name, "SetBar");
        assert!(procs[0].block.is_none());
        assert_eq!(procs[0].heading.params.len(), 1);
        assert!(!procs[0].heading.params[0].is_var);
    }

    #[test]
    fn minimal_program_module() {
        let (unit, diags) = parse("MODULE M; BEGIN END M.");
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(unit.unit_kind, UnitKind::Program);
        assert!(unit.block.body.as_ref().unwrap().statements.is_empty());
        assert_eq!(unit.end_name.as_ref().unwrap().name, "M");
    }

    #[test]
    fn clients_pragma_after_header() {
        let src = "DEFINITION MODULE PrivateLib; (*$CLIENTS=FooLib, BarLib, BazLib*)\nPROCEDURE P;\nEND PrivateLib.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let pragma = unit.clients_pragma.expect("clients pragma");
        assert_eq!(pragma.client_module_names, vec!["FooLib", "BarLib", "BazLib"]);
    }

    #[test]
    fn ffi_pragma_after_header() {
        let src = "DEFINITION MODULE UnixIO; (*$FFI=\"C\"*)\nPROCEDURE Open;\nEND UnixIO.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let pragma = unit.ffi_pragma.expect("ffi pragma");
        assert_eq!(pragma.key, FfiKey::Ffi);
        assert_eq!(pragma.foreign_api, "C");
    }

    #[test]
    fn ffi_pragma_malformed_and_unknown_api() {
        let src = "DEFINITION MODULE A; (*$FFI=C*)\nEND A.";
        let (unit, diags) = parse(src);
        assert!(unit.ffi_pragma.is_none());
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-FFI-MALFORMED").count(), 1);

        let src = "DEFINITION MODULE B; (*$FFI=\"Zig\"*)\nEND B.";
        let (unit, diags) = parse(src);
        assert_eq!(unit.ffi_pragma.unwrap().foreign_api, "Zig");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-FFI-API").count(), 1);
    }

    #[test]
    fn ffi_pragma_out_of_position() {
        let src = "MODULE M;\nVAR x : CARDINAL; (*$FFI=\"C\"*)\nBEGIN END M.";
        let (unit, diags) = parse(src);
        assert!(unit.ffi_pragma.is_none());
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-FFI-POSITION").count(), 1);
    }

    #[test]
    fn unknown_directive_key_is_info() {
        let src = "MODULE M; (*$COPYRIGHT=ACME*)\nBEGIN END M.";
        let (_, diags) = parse(src);
        let notes: Vec<_> = diags.iter().filter(|d| d.code == "M2M-DIRECTIVE-UNKNOWN").collect();
        assert_eq!(notes.len(), 1);
        assert_eq!(notes[0].severity, Severity::Info);
        // Plain switch directives stay silent.
        let (_, diags) = parse("MODULE M; (*$T-*) (*$F+*)\nBEGIN END M.");
        assert!(diags.iter().all(|d| d.code != "M2M-DIRECTIVE-UNKNOWN"));
    }

    #[test]
    fn unary_minus_over_multiple_factors_is_flagged() {
        let (_, diags) = expr("- a * b + c", &default_config());
        let uminus: Vec<_> = diags.iter().filter(|d| d.code == "M2M-UMINUS").collect();
        assert_eq!(uminus.len(), 1);
        assert_eq!(uminus[0].severity, Severity::Error);
        assert!(uminus[0].message.contains("(-a) * b + c"), "{}", uminus[0].message);
        assert!(uminus[0].message.contains("-(a * b + c)"), "{}", uminus[0].message);
    }

    #[test]
    fn unary_minus_single_factor_is_clean() {
        for src in ["-a", "-(a * b + c)", "- a"] {
            let (_, diags) = expr(src, &default_config());
            assert!(diags.iter().all(|d| d.code != "M2M-UMINUS"), "{src}");
        }
    }

    #[test]
    fn parenthesized_negation_then_operations_is_clean() {
        let (_, diags) = expr("(-a) * b + c", &default_config());
        assert!(diags.iter().all(|d| d.code != "M2M-UMINUS"));
    }

    #[test]
    fn permissive_switch_downgrades_uminus() {
        let config = DialectConfig { permissive_unary_minus: true, ..default_config() };
        let (_, diags) = expr("- a * b + c", &config);
        let uminus: Vec<_> = diags.iter().filter(|d| d.code == "M2M-UMINUS").collect();
        assert_eq!(uminus.len(), 1);
        assert_eq!(uminus[0].severity, Severity::Warning);
    }

    #[test]
    fn grammar_equivalence_without_unary_minus() {
        let default = default_config();
        let permissive = DialectConfig { permissive_unary_minus: true, ..default_config() };
        for src in ["a + b * c", "(x < y) OR odd", "a * (b + c) - d DIV e MOD f"] {
            let (lhs, d1) = expr(src, &default);
            let (rhs, d2) = expr(src, &permissive);
            assert_eq!(lhs, rhs, "{src}");
            assert!(d1.is_empty() && d2.is_empty());
        }
    }

    #[test]
    fn end_name_mismatch_is_diagnosed_but_node_built() {
        let (unit, diags) = parse("MODULE M; BEGIN END N.");
        assert_eq!(diags.iter().filter(|d| d.code == "M2M-END-MISMATCH").count(), 1);
        assert_eq!(unit.module_name.name, "M");
        assert_eq!(unit.end_name.unwrap().name, "N");
    }

    #[test]
    fn abbreviated_and_long_array_forms() {
        let src = "MODULE M;\nTYPE A = ARRAY [0 .. 4], [0 .. 3] OF REAL;\nTYPE B = ARRAY [0 .. 4] OF ARRAY [0 .. 3] OF REAL;\nTYPE C = ARRAY [0 .. 4] OF REAL;\nBEGIN END M.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let arrays: Vec<&ArrayTypeNode> = unit
            .block
            .declarations
            .iter()
            .filter_map(|d| match d {
                Declaration::Type(t) => Some(t),
                _ => None,
            })
            .flatten()
            .filter_map(|t| match t.ty.as_ref() {
                Some(TypeNode::Array(a)) => Some(a),
                _ => None,
            })
            .collect();
        assert_eq!(arrays.len(), 3);
        assert_eq!(arrays[0].form(), Some(ArrayForm::Abbreviated));
        assert_eq!(arrays[1].form(), Some(ArrayForm::Long));
        assert_eq!(arrays[2].form(), None);
    }

    #[test]
    fn variant_record_marked() {
        let src = "MODULE M;\nTYPE R = RECORD x : REAL; CASE tag : BOOLEAN OF TRUE : y : CARDINAL | FALSE : z : CHAR END END;\nBEGIN END M.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let record = unit
            .block
            .declarations
            .iter()
            .find_map(|d| match d {
                Declaration::Type(t) => t.iter().find_map(|td| match td.ty.as_ref() {
                    Some(TypeNode::Record(r)) => Some(r),
                    _ => None,
                }),
                _ => None,
            })
            .expect("record type");
        assert!(record.has_variants());
        let variant = record.variant_parts().next().unwrap();
        assert_eq!(variant.tag_field.as_ref().unwrap().name, "tag");
        assert_eq!(variant.cases.len(), 2);
    }

    #[test]
    fn local_modules_nest() {
        let src = "MODULE Outer;\nMODULE Inner;\nMODULE Innermost;\nEND Innermost;\nEND Inner;\nBEGIN END Outer.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let Declaration::Module(inner) = &unit.block.declarations[0] else {
            panic!("expected local module");
        };
        assert_eq!(inner.name.name, "Inner");
        let Declaration::Module(innermost) = &inner.block.declarations[0] else {
            panic!("expected nested local module");
        };
        assert_eq!(innermost.name.name, "Innermost");
    }

    #[test]
    fn legacy_export_list_captured() {
        let src = "DEFINITION MODULE M;\nEXPORT QUALIFIED a, b;\nVAR a, b : CARDINAL;\nEND M.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let export = unit.export_list.expect("export list");
        assert!(export.qualified);
        assert_eq!(export.names.len(), 2);
        let text = &unit.source[export.span.start..export.span.end];
        assert_eq!(text, "EXPORT QUALIFIED a, b;");
    }

    #[test]
    fn syntax_errors_recover_and_unit_survives() {
        let src = "MODULE M;\nVAR x : ;\nBEGIN\nx := ;\ny 1;\nEND M.";
        let (unit, diags) = parse(src);
        assert!(diags.iter().any(|d| d.code == "M2M-SYNTAX"));
        assert_eq!(unit.module_name.name, "M");
        assert_eq!(unit.end_name.unwrap().name, "M");
    }

    #[test]
    fn source_is_reassembled_exactly() {
        let src = "MODULE M; (* keep me *)\r\nVAR x : CARDINAL;\r\nBEGIN x := 1 END M.\r\n";
        let (unit, _) = parse(src);
        assert_eq!(unit.source, src);
    }

    #[test]
    fn statements_parse() {
        let src = r#"MODULE M;
VAR i, n : CARDINAL; s : BITSET; done : BOOLEAN;
PROCEDURE P ( VAR x : CARDINAL );
BEGIN
  x := x + 1
END P;
BEGIN
  i := 0;
  WHILE i < n DO INC ( i ) END;
  REPEAT DEC ( n ) UNTIL n = 0;
  LOOP EXIT END;
  FOR i := 0 TO 9 BY 2 DO P ( i ) END;
  IF i > 3 THEN i := 1 ELSIF i = 2 THEN i := 2 ELSE i := 3 END;
  CASE i OF 0 : i := 1 | 1, 2 : i := 2 | 3 .. 5 : i := 3 ELSE i := 4 END;
  s := BITSET { 0, 2 .. 4 };
  done := ( i = 1 ) OR NOT ( i IN s )
END M.
"#;
        let (unit, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let body = unit.block.body.unwrap();
        assert_eq!(body.statements.len(), 9);
    }

    #[test]
    fn foreign_module_identifier_rejected_when_extension_on() {
        let config = DialectConfig { foreign_identifiers: true, ..default_config() };
        let (_, diags) = parse_with("MODULE sys$m;\nBEGIN END sys$m.", &config);
        assert!(diags.iter().any(|d| d.code == "M2M-FOREIGN-IN-MODULE-ID"));
        // With the switch off the gate already reported it; no stacking.
        let (_, diags) = parse("MODULE sys$m;\nBEGIN END sys$m.");
        assert!(diags.iter().all(|d| d.code != "M2M-FOREIGN-IN-MODULE-ID"));
        assert!(diags.iter().any(|d| d.code == "M2M-FOREIGN-DISABLED"));
    }

    /// Canonical multi-dimensional shape: flatten nested arrays into a
    /// list of index-range texts plus the scalar element text.
    fn canonical_array_shape(src_unit: &CompilationUnit, a: &ArrayTypeNode) -> (Vec<String>, String) {
        let mut ranges = Vec::new();
        let mut node = a;
        loop {
            for r in &node.index_ranges {
                let s = r.span();
                ranges.push(
                    src_unit.source[s.start..s.end]
                        .split_whitespace()
                        .collect::<Vec<_>>()
                        .join(" "),
                );
            }
            match node.element_type.as_ref() {
                TypeNode::Array(inner) => node = inner,
                other => {
                    let s = other.span();
                    return (ranges, src_unit.source[s.start..s.end].to_string());
                }
            }
        }
    }

    #[test]
    fn abbreviated_and_long_forms_normalize_identically() {
        let src = "MODULE M;\nTYPE A = ARRAY [0 .. C], [0 .. R] OF REAL;\nTYPE B = ARRAY [0 .. C] OF ARRAY [0 .. R] OF REAL;\nBEGIN END M.";
        let (unit, diags) = parse(src);
        assert!(diags.is_empty());
        let arrays: Vec<&ArrayTypeNode> = unit
            .block
            .declarations
            .iter()
            .filter_map(|d| match d {
                Declaration::Type(t) => Some(t),
                _ => None,
            })
            .flatten()
            .filter_map(|t| match t.ty.as_ref() {
                Some(TypeNode::Array(a)) => Some(a),
                _ => None,
            })
            .collect();
        assert_eq!(arrays.len(), 2);
        assert_eq!(
            canonical_array_shape(&unit, arrays[0]),
            canonical_array_shape(&unit, arrays[1])
        );
    }
}
