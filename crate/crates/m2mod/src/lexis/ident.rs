//! Identifier classification.
//!
//! Plain identifiers contain only letters and digits and start with a
//! letter. Identifiers containing `$` or `_` are foreign identifiers,
//! legal only when the corresponding switch is enabled, only outside
//! module identifiers, and only when they satisfy the structural rules:
//! no consecutive and no trailing dollar signs; no leading, consecutive
//! or trailing lowlines.

use crate::policy::DialectConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentifierClass {
    Plain,
    Foreign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentContext {
    ModuleIdentifier,
    OrdinaryIdentifier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForeignViolation {
    ConsecutiveDollar,
    TrailingDollar,
    LeadingLowline,
    ConsecutiveLowline,
    TrailingLowline,
}

impl ForeignViolation {
    pub fn describe(&self) -> &'static str {
        match self {
            ForeignViolation::ConsecutiveDollar => "consecutive dollar signs",
            ForeignViolation::TrailingDollar => "trailing dollar sign",
            ForeignViolation::LeadingLowline => "leading lowline",
            ForeignViolation::ConsecutiveLowline => "consecutive lowlines",
            ForeignViolation::TrailingLowline => "trailing lowline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifyError {
    /// `$`/`_` present but foreign identifiers are switched off.
    ForeignDisabled,
    /// A structural rule is violated; carries the first violation in
    /// left-to-right scan order.
    Malformed(ForeignViolation),
    /// Foreign characters are never permitted in module identifiers.
    InModuleIdentifier,
}

/// Classifies `text` as a plain or foreign identifier.
///
/// `text` must be non-empty and start with a letter or `_` (the lexer
/// guarantees this). The gate is checked first, then structure, then
/// context, so a disabled malformed identifier reports the gate.
pub fn classify_identifier(
    text: &str,
    config: &DialectConfig,
    context: IdentContext,
) -> Result<IdentifierClass, ClassifyError> {
    debug_assert!(!text.is_empty());
    if !text.contains(['$', '_']) {
        return Ok(IdentifierClass::Plain);
    }
    if !config.foreign_identifiers_enabled() {
        return Err(ClassifyError::ForeignDisabled);
    }
    if let Some(violation) = structural_violation(text) {
        return Err(ClassifyError::Malformed(violation));
    }
    if context == IdentContext::ModuleIdentifier {
        return Err(ClassifyError::InModuleIdentifier);
    }
    Ok(IdentifierClass::Foreign)
}

/// First structural rule violated by `text`, scanning left to right.
pub fn structural_violation(text: &str) -> Option<ForeignViolation> {
    let bytes = text.as_bytes();
    if bytes.first() == Some(&b'_') {
        return Some(ForeignViolation::LeadingLowline);
    }
    for pair in bytes.windows(2) {
        match pair {
            [b'$', b'$'] => return Some(ForeignViolation::ConsecutiveDollar),
            [b'_', b'_'] => return Some(ForeignViolation::ConsecutiveLowline),
            _ => {}
        }
    }
    match bytes.last() {
        Some(b'$') => Some(ForeignViolation::TrailingDollar),
        Some(b'_') => Some(ForeignViolation::TrailingLowline),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::default_config;

    fn on() -> DialectConfig {
        DialectConfig { foreign_identifiers: true, ..default_config() }
    }

    #[test]
    fn vms_style_identifier_is_foreign() {
        assert_eq!(
            classify_identifier("sys$open", &on(), IdentContext::OrdinaryIdentifier),
            Ok(IdentifierClass::Foreign)
        );
    }

    #[test]
    fn plain_stays_plain_with_switch_off() {
        assert_eq!(
            classify_identifier("Cols", &default_config(), IdentContext::OrdinaryIdentifier),
            Ok(IdentifierClass::Plain)
        );
    }

    #[test]
    fn each_structural_rule_is_named() {
        let cases = [
            ("a$$b", ForeignViolation::ConsecutiveDollar),
            ("a$", ForeignViolation::TrailingDollar),
            ("_x", ForeignViolation::LeadingLowline),
            ("a__b", ForeignViolation::ConsecutiveLowline),
            ("x_", ForeignViolation::TrailingLowline),
        ];
        for (text, rule) in cases {
            assert_eq!(
                classify_identifier(text, &on(), IdentContext::OrdinaryIdentifier),
                Err(ClassifyError::Malformed(rule)),
                "{text}"
            );
        }
    }

    #[test]
    fn gate_checked_before_structure() {
        assert_eq!(
            classify_identifier("a$$b", &default_config(), IdentContext::OrdinaryIdentifier),
            Err(ClassifyError::ForeignDisabled)
        );
    }

    #[test]
    fn module_identifier_context_rejected() {
        assert_eq!(
            classify_identifier("sys$lib", &on(), IdentContext::ModuleIdentifier),
            Err(ClassifyError::InModuleIdentifier)
        );
    }
}
