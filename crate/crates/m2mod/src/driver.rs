//! The driver behind the `m2mod` binary: input discovery with suffix
//! enforcement, the lint / fix / explain pipelines, and config-file
//! resolution.

use crate::analysis::analyze_units;
use crate::diagnostics::{self, exit_code, render_structured, render_text, Diagnostic};
use crate::lexis::tokenize;
use crate::policy::{
    mitigation_for, severity_for, switch_name_for, DialectConfig, Severity,
};
use crate::rewrite::{apply_edits, plan_edits};
use crate::source::Span;
use crate::syntax::{parse_compilation_unit, CompilationUnit, UnitKind};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Lint,
    Fix,
    Explain { code: Option<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    JsonLines,
}

/// Everything one invocation needs. The config is immutable from here
/// on.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub mode: Mode,
    /// Accepted inputs; every path ends in `.def` or `.mod`.
    pub inputs: Vec<PathBuf>,
    /// Rejections and I/O failures from input discovery; they are
    /// reported with the run's output and count toward its exit status.
    pub preflight: Vec<Diagnostic>,
    pub config: DialectConfig,
    /// Directories searched for `<Module>.def` when resolving imports.
    pub search_path: Vec<PathBuf>,
    pub format: OutputFormat,
    pub strict: bool,
    pub strict_imports: bool,
    /// Fix mode: print a unified diff instead of writing files.
    pub diff: bool,
    pub color: bool,
}

impl RunPlan {
    pub fn new(mode: Mode, inputs: Vec<PathBuf>, config: DialectConfig) -> Self {
        RunPlan {
            mode,
            inputs,
            preflight: Vec::new(),
            config,
            search_path: Vec::new(),
            format: OutputFormat::Text,
            strict: false,
            strict_imports: false,
            diff: false,
            color: false,
        }
    }
}

/// Expands paths into accepted input files.
///
/// Only the suffixes `def` and `mod` are recognized, with no switch to
/// accept others: an explicitly named file with another suffix is
/// rejected with M2M-SUFFIX, while foreign files inside scanned
/// directories are silently skipped. Directories scan non-recursively
/// unless `recursive`.
pub fn discover_inputs(paths: &[PathBuf], recursive: bool) -> (Vec<PathBuf>, Vec<Diagnostic>) {
    let mut accepted = Vec::new();
    let mut seen = BTreeSet::new();
    let mut diagnostics = Vec::new();
    let mut push = |path: PathBuf, out: &mut Vec<PathBuf>| {
        if seen.insert(path.clone()) {
            out.push(path);
        }
    };
    for path in paths {
        if path.is_dir() {
            scan_dir(path, recursive, &mut |file| push(file, &mut accepted));
        } else if path.is_file() {
            if has_source_suffix(path) {
                push(path.clone(), &mut accepted);
            } else {
                diagnostics.push(
                    Diagnostic::new(
                        "M2M-SUFFIX",
                        Severity::Error,
                        Span::default(),
                        format!(
                            "'{}' does not use a recognized suffix; only 'def' and 'mod' are accepted",
                            path.display()
                        ),
                    )
                    .with_file(&path.display().to_string()),
                );
            }
        } else {
            diagnostics.push(
                Diagnostic::new(
                    "M2M-IO",
                    Severity::Error,
                    Span::default(),
                    format!("'{}' does not exist", path.display()),
                )
                .with_file(&path.display().to_string()),
            );
        }
    }
    (accepted, diagnostics)
}

fn has_source_suffix(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("def") | Some("mod")
    )
}

fn scan_dir(dir: &Path, recursive: bool, accept: &mut impl FnMut(PathBuf)) {
    let Ok(entries) = fs::read_dir(dir) else { return };
    let mut paths: Vec<PathBuf> = entries.flatten().map(|e| e.path()).collect();
    paths.sort();
    for path in paths {
        if path.is_dir() {
            if recursive {
                scan_dir(&path, true, accept);
            }
        } else if has_source_suffix(&path) {
            accept(path);
        }
    }
}

struct LoadedFile {
    path: PathBuf,
    text: String,
}

/// Tokenize + parse + cross-module analysis over in-memory files.
/// Returns the parsed units (inputs only) and all diagnostics.
fn lint_loaded(
    files: &[LoadedFile],
    plan: &RunPlan,
) -> (Vec<CompilationUnit>, Vec<Diagnostic>) {
    let config = plan.config;
    let mut results: Vec<(CompilationUnit, Vec<Diagnostic>)> = files
        .par_iter()
        .map(|file| {
            let name = file.path.display().to_string();
            let (tokens, lex_diags) = tokenize(&file.text, &config);
            let (mut unit, parse_diags) = parse_compilation_unit(tokens, &config);
            unit.source_file = file.path.clone();
            let diags = lex_diags
                .into_iter()
                .chain(parse_diags)
                .map(|d| d.with_file(&name))
                .collect();
            (unit, diags)
        })
        .collect();

    let mut diagnostics: Vec<Diagnostic> = Vec::new();
    let mut units: Vec<CompilationUnit> = Vec::new();
    for (unit, diags) in results.drain(..) {
        diagnostics.extend(diags);
        units.push(unit);
    }

    // Pull in definition modules from the search path for imports that
    // no input satisfies; they provide bindings but are not linted.
    let context_units = load_context_units(&units, plan);
    let input_files: BTreeSet<String> =
        files.iter().map(|f| f.path.display().to_string()).collect();

    let mut all_units = units;
    let input_count = all_units.len();
    all_units.extend(context_units);
    let (_table, analysis_diags) = analyze_units(&all_units, &config, plan.strict_imports);
    diagnostics.extend(
        analysis_diags
            .into_iter()
            .filter(|d| input_files.contains(&d.file)),
    );
    all_units.truncate(input_count);
    diagnostics::sort_diagnostics(&mut diagnostics);
    (all_units, diagnostics)
}

/// Modules imported anywhere in `units` that lack a definition unit in
/// the set, resolved as `<Name>.def` against the search path
/// (case-sensitive exact match), transitively.
fn load_context_units(units: &[CompilationUnit], plan: &RunPlan) -> Vec<CompilationUnit> {
    let mut have: BTreeSet<String> = units
        .iter()
        .filter(|u| u.unit_kind == UnitKind::Definition)
        .map(|u| u.module_name.name.clone())
        .collect();
    have.insert("SYSTEM".to_string());
    let mut context = Vec::new();
    let mut queue: Vec<String> = units.iter().flat_map(imported_modules).collect();
    while let Some(module) = queue.pop() {
        if have.contains(&module) || module.is_empty() {
            continue;
        }
        have.insert(module.clone());
        for dir in &plan.search_path {
            let candidate = dir.join(format!("{module}.def"));
            let Ok(bytes) = fs::read(&candidate) else { continue };
            let Ok(text) = String::from_utf8(bytes) else { continue };
            let (tokens, _) = tokenize(&text, &plan.config);
            let (mut unit, _) = parse_compilation_unit(tokens, &plan.config);
            unit.source_file = candidate;
            queue.extend(imported_modules(&unit));
            context.push(unit);
            break;
        }
    }
    context
}

fn imported_modules(unit: &CompilationUnit) -> Vec<String> {
    let mut modules = Vec::new();
    for clause in &unit.imports {
        match &clause.from_module {
            Some(from) => modules.push(from.name.clone()),
            None => modules.extend(clause.names.iter().map(|n| n.name.clone())),
        }
    }
    modules
}

fn read_files(paths: &[PathBuf]) -> (Vec<LoadedFile>, Vec<Diagnostic>) {
    let mut files = Vec::new();
    let mut diagnostics = Vec::new();
    for path in paths {
        let name = path.display().to_string();
        match fs::read(path) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => files.push(LoadedFile { path: path.clone(), text }),
                Err(_) => diagnostics.push(
                    Diagnostic::new(
                        "M2M-ENCODING",
                        Severity::Error,
                        Span::default(),
                        format!("'{name}' is not valid UTF-8 text"),
                    )
                    .with_file(&name),
                ),
            },
            Err(err) => diagnostics.push(
                Diagnostic::new(
                    "M2M-IO",
                    Severity::Error,
                    Span::default(),
                    format!("cannot read '{name}': {err}"),
                )
                .with_file(&name),
            ),
        }
    }
    (files, diagnostics)
}

fn render(diags: &[Diagnostic], plan: &RunPlan, out: &mut dyn Write) -> std::io::Result<()> {
    let text = match plan.format {
        OutputFormat::Text => render_text(diags, plan.color),
        OutputFormat::JsonLines => render_structured(diags),
    };
    diagnostics::write_output(out, &text)
}

fn finish(diags: &[Diagnostic], plan: &RunPlan) -> i32 {
    if diags.iter().any(|d| d.code == "M2M-IO") {
        return 3;
    }
    exit_code(diags, plan.strict)
}

/// Executes the plan, writing all regular output to `out`. Returns the
/// process exit status.
pub fn run(plan: &RunPlan, out: &mut dyn Write) -> i32 {
    match &plan.mode {
        Mode::Explain { code } => run_explain(code.as_deref(), out),
        Mode::Lint => run_lint(plan, out),
        Mode::Fix => run_fix(plan, out),
    }
}

fn run_lint(plan: &RunPlan, out: &mut dyn Write) -> i32 {
    let (files, mut diagnostics) = read_files(&plan.inputs);
    diagnostics.extend(plan.preflight.iter().cloned());
    let (_units, lint_diags) = lint_loaded(&files, plan);
    diagnostics.extend(lint_diags);
    diagnostics::sort_diagnostics(&mut diagnostics);
    if render(&diagnostics, plan, out).is_err() {
        return 3;
    }
    finish(&diagnostics, plan)
}

fn run_fix(plan: &RunPlan, out: &mut dyn Write) -> i32 {
    let (files, mut io_diags) = read_files(&plan.inputs);
    io_diags.extend(plan.preflight.iter().cloned());
    let (units, _prefix_diags) = lint_loaded(&files, plan);

    let mut fixed_files: Vec<LoadedFile> = Vec::new();
    let mut internal_error = false;
    for unit in &units {
        let name = unit.source_file.display().to_string();
        let edits = plan_edits(unit);
        if edits.is_empty() {
            fixed_files.push(LoadedFile {
                path: unit.source_file.clone(),
                text: unit.source.clone(),
            });
            continue;
        }
        match apply_edits(&unit.source, &edits) {
            Ok(new_text) => {
                if plan.diff {
                    let diff = similar::TextDiff::from_lines(unit.source.as_str(), new_text.as_str());
                    let header_a = format!("a/{name}");
                    let header_b = format!("b/{name}");
                    let rendered = diff
                        .unified_diff()
                        .context_radius(3)
                        .header(&header_a, &header_b)
                        .to_string();
                    if diagnostics::write_output(out, &rendered).is_err() {
                        return 3;
                    }
                } else if let Err(err) = write_atomically(&unit.source_file, &new_text) {
                    io_diags.push(
                        Diagnostic::new(
                            "M2M-IO",
                            Severity::Error,
                            Span::default(),
                            format!("cannot write '{name}': {err}"),
                        )
                        .with_file(&name),
                    );
                    continue;
                }
                fixed_files.push(LoadedFile { path: unit.source_file.clone(), text: new_text });
            }
            Err(err) => {
                // Planner bug: leave the file untouched.
                let _ = diagnostics::write_output(
                    out,
                    &format!("m2mod: internal error: {err} in '{name}'; file left unchanged\n"),
                );
                internal_error = true;
                fixed_files.push(LoadedFile {
                    path: unit.source_file.clone(),
                    text: unit.source.clone(),
                });
            }
        }
    }

    // Report what fixing could not address.
    let (_units, remaining) = lint_loaded(&fixed_files, plan);
    let mut diagnostics = io_diags;
    diagnostics.extend(remaining);
    diagnostics::sort_diagnostics(&mut diagnostics);
    if render(&diagnostics, plan, out).is_err() {
        return 3;
    }
    if internal_error {
        return 3;
    }
    finish(&diagnostics, plan)
}

fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("output");
    let tmp = path.with_file_name(format!(".{file_name}.m2mod-tmp"));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn run_explain(code: Option<&str>, out: &mut dyn Write) -> i32 {
    match code {
        None => {
            let mut text = String::new();
            for info in diagnostics::CODES {
                text.push_str(&format!("{:<26} {}\n", info.code, info.summary));
            }
            text.push_str("\nUse 'm2mod explain CODE' for the full rationale.\n");
            if diagnostics::write_output(out, &text).is_err() {
                return 3;
            }
            0
        }
        Some(code) => {
            let wanted = code.to_uppercase();
            let Some(info) = diagnostics::CODES.iter().find(|c| c.code == wanted) else {
                let _ = diagnostics::write_output(
                    out,
                    &format!(
                        ":1:1: error[M2M-USAGE]: unknown diagnostic code '{code}'; run 'm2mod explain' for the list\n"
                    ),
                );
                return 1;
            };
            let mut text = format!("{} — {}\n", info.code, info.summary);
            if let Some(facility) = info.facility {
                let mitigation = mitigation_for(facility);
                text.push_str(&format!("facility:   {facility}\n"));
                text.push_str(&format!(
                    "mitigation: {}{}\n",
                    mitigation.kind,
                    if mitigation.transformation { " + transformation (fix mode rewrites it)" } else { "" }
                ));
                match switch_name_for(facility) {
                    Some(switch) => text.push_str(&format!(
                        "switch:     {switch} (default off; currently {})\n",
                        if severity_for(facility, &DialectConfig::default()) == Severity::Error {
                            "error when used"
                        } else {
                            "reported when used"
                        }
                    )),
                    None => text.push_str("switch:     none\n"),
                }
            }
            if let Some(section) = info.section {
                text.push_str(&format!("see:        recommendations section {section}\n"));
            }
            text.push('\n');
            text.push_str(info.detail);
            text.push('\n');
            if diagnostics::write_output(out, &text).is_err() {
                return 3;
            }
            0
        }
    }
}

/// Loads the config file: `$M2MOD_CONFIG` when set (must exist), else
/// `m2mod.conf` in the working directory when present.
pub fn load_config_file() -> Result<Option<String>, String> {
    match std::env::var_os("M2MOD_CONFIG") {
        Some(path) => {
            let path = PathBuf::from(path);
            match fs::read_to_string(&path) {
                Ok(text) => Ok(Some(text)),
                Err(err) => Err(format!(
                    "cannot read config file '{}' from M2MOD_CONFIG: {err}",
                    path.display()
                )),
            }
        }
        None => match fs::read_to_string("m2mod.conf") {
            Ok(text) => Ok(Some(text)),
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(err) => Err(format!("cannot read config file 'm2mod.conf': {err}")),
        },
    }
}

/// Lints a single in-memory unit: the full pipeline minus file I/O.
pub fn lint_single(
    name: &str,
    text: &str,
    config: &DialectConfig,
) -> (CompilationUnit, Vec<Diagnostic>) {
    let (tokens, lex_diags) = tokenize(text, config);
    let (mut unit, parse_diags) = parse_compilation_unit(tokens, config);
    unit.source_file = PathBuf::from(name);
    let units = vec![unit];
    let (_table, analysis_diags) = analyze_units(&units, config, false);
    let mut diagnostics: Vec<Diagnostic> = lex_diags
        .into_iter()
        .chain(parse_diags)
        .map(|d| d.with_file(name))
        .chain(analysis_diags)
        .collect();
    diagnostics::sort_diagnostics(&mut diagnostics);
    let unit = units.into_iter().next().expect("one unit");
    (unit, diagnostics)
}
