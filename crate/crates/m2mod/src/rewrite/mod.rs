//! The transformation engine: plans span-based edits that replace
//! offending facilities with equivalent, compliant source, and applies
//! them.

mod convert;
mod edit;
mod plan;

pub use convert::{
    convert_octal_literal, convert_synonyms, directive_edit, normalize_directives, synonym_edit,
    OctalError,
};
pub use edit::{apply_edits, Edit, OverlapError};
pub use plan::{plan_edits, rewrite_conversions, strip_export_list};
