//! Thin command-line front end over the library driver.

use clap::{Parser, Subcommand, ValueEnum};
use m2mod::driver::{self, Mode, OutputFormat, RunPlan};
use m2mod::policy::resolve_config;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "m2mod",
    about = "Lint and modernize classic Modula-2 sources",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Enable a facility switch (repeatable); see `m2mod explain`
    #[arg(long = "enable", value_name = "NAME")]
    enable: Vec<String>,

    /// Disable a facility switch (repeatable); wins over --enable
    #[arg(long = "disable", value_name = "NAME")]
    disable: Vec<String>,

    /// Directory searched for <Module>.def when resolving imports (repeatable)
    #[arg(long = "path", value_name = "DIR")]
    path: Vec<PathBuf>,

    /// Output format
    #[arg(long = "format", value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Exit 2 when warnings or deprecation warnings remain
    #[arg(long)]
    strict: bool,

    /// Treat a missing definition module as an error instead of a note
    #[arg(long = "strict-imports")]
    strict_imports: bool,

    /// Scan directories recursively
    #[arg(long)]
    recursive: bool,

    /// Colorize text output
    #[arg(long)]
    color: bool,

    /// Files or directories (.def / .mod)
    #[arg(value_name = "FILES", required = true)]
    files: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Report every use of an offending facility
    Lint {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rewrite what has a mechanical transformation, then report the rest
    Fix {
        #[command(flatten)]
        common: CommonArgs,

        /// Print a unified diff instead of writing files in place
        #[arg(long)]
        diff: bool,
    },
    /// Show the rationale behind a diagnostic code (or list all codes)
    Explain {
        /// Diagnostic code, e.g. M2M-UMINUS
        code: Option<String>,
    },
}

fn build_plan(common: CommonArgs, mode: Mode, diff: bool) -> Result<RunPlan, String> {
    let config_file = driver::load_config_file()?;
    let mut switches: Vec<(String, bool)> = Vec::new();
    switches.extend(common.enable.iter().map(|n| (n.clone(), true)));
    switches.extend(common.disable.iter().map(|n| (n.clone(), false)));
    let config =
        resolve_config(&switches, config_file.as_deref()).map_err(|e| e.message)?;
    let (inputs, discovery_diags) = driver::discover_inputs(&common.files, common.recursive);
    let mut plan = RunPlan::new(mode, inputs, config);
    plan.preflight = discovery_diags;
    plan.search_path = common.path;
    plan.format = match common.format {
        Format::Text => OutputFormat::Text,
        Format::JsonLines => OutputFormat::JsonLines,
    };
    plan.strict = common.strict;
    plan.strict_imports = common.strict_imports;
    plan.diff = diff;
    plan.color = common.color;
    Ok(plan)
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    #[value(name = "json-lines")]
    JsonLines,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = match cli.command {
        Command::Explain { code } => {
            driver::run(&RunPlan::new(Mode::Explain { code }, Vec::new(), Default::default()), &mut stdout)
        }
        Command::Lint { common } => match build_plan(common, Mode::Lint, false) {
            Ok(plan) => driver::run(&plan, &mut stdout),
            Err(message) => usage_error(message),
        },
        Command::Fix { common, diff } => match build_plan(common, Mode::Fix, diff) {
            Ok(plan) => driver::run(&plan, &mut stdout),
            Err(message) => usage_error(message),
        },
    };
    ExitCode::from(code.clamp(0, 255) as u8)
}

fn usage_error(message: String) -> i32 {
    eprintln!("m2mod: error[M2M-USAGE]: {message}");
    1
}
