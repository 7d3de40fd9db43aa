//! Key-value directive payloads: FFI and CLIENTS markers.
//!
//! Only the `KEY=value` shape is treated as a key-value directive;
//! classic switch toggles like `(*$T-*)` (including the single-letter
//! `F` toggle) pass through untouched.

use crate::lexis::{Trivia, TriviaKind};
use crate::source::Span;
use crate::syntax::ast::{ClientsPragma, FfiKey, FfiPragma};

/// Interior of a canonical directive: the text between `(*$` and `*)`.
pub fn directive_payload(text: &str) -> Option<&str> {
    text.strip_prefix("(*$")?.strip_suffix("*)")
}

/// Splits a payload into its leading alphabetic key and the rest.
pub fn split_key(payload: &str) -> (&str, &str) {
    let end = payload.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(payload.len());
    payload.split_at(end)
}

/// `KEY=value` form of a canonical directive payload, tolerating
/// spaces around the equals sign.
pub fn directive_kv(payload: &str) -> Option<(&str, &str)> {
    let (key, rest) = split_key(payload);
    if key.is_empty() {
        return None;
    }
    let rest = rest.trim_start();
    let value = rest.strip_prefix('=')?;
    Some((key, value.trim()))
}

/// Why an FFI directive did not parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FfiPragmaError {
    MissingEquals,
    MissingQuotes,
    EmptyApiName,
}

impl FfiPragmaError {
    pub fn describe(&self) -> &'static str {
        match self {
            FfiPragmaError::MissingEquals => "missing '=' after the key",
            FfiPragmaError::MissingQuotes => "API name must be a quoted string",
            FfiPragmaError::EmptyApiName => "API name must not be empty",
        }
    }
}

/// Foreign API names listed by the proposed syntax; others are
/// accepted and recorded verbatim.
pub const KNOWN_FOREIGN_APIS: [&str; 4] = ["ASM", "C", "Fortran", "Pascal"];

/// Parses an FFI directive `(*$F="API"*)` / `(*$FFI="API"*)` from
/// non-semantic directive trivia.
///
/// The caller has established that the key is `F` or `FFI`; position
/// checks are the parser's job.
pub fn parse_ffi_pragma(trivia: &Trivia) -> Result<FfiPragma, FfiPragmaError> {
    debug_assert_eq!(trivia.kind, TriviaKind::NonSemanticDirective);
    let payload = directive_payload(&trivia.text).unwrap_or("");
    let (key_text, rest) = split_key(payload);
    let key = match key_text {
        "F" => FfiKey::F,
        "FFI" => FfiKey::Ffi,
        other => unreachable!("not an FFI key: {other}"),
    };
    let rest = rest.trim_start();
    let Some(value) = rest.strip_prefix('=') else {
        return Err(FfiPragmaError::MissingEquals);
    };
    let value = value.trim();
    let Some(inner) = value.strip_prefix('"').and_then(|v| v.strip_suffix('"')) else {
        return Err(FfiPragmaError::MissingQuotes);
    };
    if inner.is_empty() {
        return Err(FfiPragmaError::EmptyApiName);
    }
    Ok(FfiPragma { key, foreign_api: inner.to_string(), span: trivia.span })
}

/// Parses `(*$CLIENTS=Name, Name, ...*)`. Returns a reason string when
/// the directive must be ignored.
pub fn parse_clients_pragma(payload_value: &str, span: Span) -> Result<ClientsPragma, String> {
    let mut names = Vec::new();
    for raw in payload_value.split(',') {
        let name = raw.trim();
        if name.is_empty() {
            return Err("empty client module name".to_string());
        }
        let mut chars = name.chars();
        let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
        if !head_ok || !name.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(format!("'{name}' is not a module identifier"));
        }
        names.push(name.to_string());
    }
    if names.is_empty() {
        return Err("empty client list".to_string());
    }
    Ok(ClientsPragma { client_module_names: names, span })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn directive(text: &str) -> Trivia {
        Trivia {
            kind: TriviaKind::NonSemanticDirective,
            text: text.to_string(),
            span: Span::new(0, text.len(), 1, 1, 1, text.len() as u32 + 1),
        }
    }

    #[test]
    fn ffi_multi_letter_key() {
        let p = parse_ffi_pragma(&directive("(*$FFI=\"C\"*)")).unwrap();
        assert_eq!(p.key, FfiKey::Ffi);
        assert_eq!(p.foreign_api, "C");
    }

    #[test]
    fn ffi_single_letter_key() {
        let p = parse_ffi_pragma(&directive("(*$F=\"Pascal\"*)")).unwrap();
        assert_eq!(p.key, FfiKey::F);
        assert_eq!(p.foreign_api, "Pascal");
    }

    #[test]
    fn ffi_unquoted_api_is_malformed() {
        assert_eq!(
            parse_ffi_pragma(&directive("(*$FFI=C*)")),
            Err(FfiPragmaError::MissingQuotes)
        );
    }

    #[test]
    fn ffi_missing_equals_and_empty_name() {
        assert_eq!(
            parse_ffi_pragma(&directive("(*$FFI*)")),
            Err(FfiPragmaError::MissingEquals)
        );
        assert_eq!(
            parse_ffi_pragma(&directive("(*$FFI=\"\"*)")),
            Err(FfiPragmaError::EmptyApiName)
        );
    }

    #[test]
    fn clients_list_with_spaces() {
        let p = parse_clients_pragma("FooLib, BarLib, BazLib", Span::default()).unwrap();
        assert_eq!(p.client_module_names, vec!["FooLib", "BarLib", "BazLib"]);
    }

    #[test]
    fn clients_rejects_bad_names() {
        assert!(parse_clients_pragma("", Span::default()).is_err());
        assert!(parse_clients_pragma("Foo,,Bar", Span::default()).is_err());
        assert!(parse_clients_pragma("1Bad", Span::default()).is_err());
    }

    #[test]
    fn kv_split() {
        assert_eq!(directive_kv("CLIENTS=A, B"), Some(("CLIENTS", "A, B")));
        assert_eq!(directive_kv("FFI = \"C\""), Some(("FFI", "\"C\"")));
        assert_eq!(directive_kv("T-"), None);
        assert_eq!(directive_kv("F+"), None);
    }
}
