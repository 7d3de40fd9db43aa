//! m2mod: a lint and modernization toolchain for classic Modula-2.
//!
//! The crate tokenizes, parses, and cross-checks `.def`/`.mod` sources
//! against a catalog of offending facilities (octal literals, synonym
//! symbols, local modules, unsafe casts, and the rest), reports each
//! use with a stable diagnostic code, and mechanically rewrites the
//! facilities that have a prescribed transformation.
//!
//! Library layout:
//!
//! - [`lexis`] — trivia-preserving tokenizer.
//! - [`syntax`] — recursive-descent parser and full-fidelity AST.
//! - [`analysis`] — cross-module binding and the multi-token checks.
//! - [`policy`] — the facility registry: switches, severities,
//!   mitigations.
//! - [`rewrite`] — span-based edits: planning and application.
//! - [`diagnostics`] — rendering, ordering, exit codes.
//! - [`driver`] — input discovery and the lint/fix/explain pipelines
//!   behind the `m2mod` binary.
//!
//! The `examples/` directory holds one runnable example per major
//! capability; start with `lint_basics`.

pub mod analysis;
pub mod diagnostics;
pub mod driver;
pub mod lexis;
pub mod policy;
pub mod rewrite;
pub mod source;
pub mod syntax;

pub use diagnostics::{exit_code, render_structured, render_text, Diagnostic};
pub use policy::{default_config, resolve_config, severity_for, DialectConfig, FacilityId, Severity};
pub use source::Span;
