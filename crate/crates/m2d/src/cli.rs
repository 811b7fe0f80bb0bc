//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use m2d_core::dialog::{build_dialog, DialogError, Resources};
use m2d_core::personality::preset;
use m2d_core::Story;

use crate::config::{check_markers, load_params};
use crate::report::{render_table, RunReport};
use crate::resources::load_default_resources;
use crate::story::{canonical_json, parse_story, ParseMode};
use crate::trace::{trace_json, transcript};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "m2d", version, about = "Turn monolog stories into two-speaker dialogs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a story with one config and print the transcript.
    Generate {
        #[arg(long)]
        story: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the transcript here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Ignore unknown keys in the story file.
        #[arg(long)]
        lax: bool,
    },
    /// Run several presets on one story and tabulate feature counts.
    Compare {
        #[arg(long)]
        story: PathBuf,
        /// Comma-separated preset names, at least two.
        #[arg(long, value_delimiter = ',', required = true)]
        presets: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the reports as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        lax: bool,
    },
    /// Check every sentence of a story and list the problems.
    Validate {
        #[arg(long)]
        story: PathBuf,
        #[arg(long)]
        lax: bool,
    },
}

/// A failed command: exit code plus message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn io_fail(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_IO,
        message: message.into(),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_fail(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| io_fail(format!("cannot write {}: {e}", path.display())))
}

fn mode(lax: bool) -> ParseMode {
    if lax {
        ParseMode::Lax
    } else {
        ParseMode::Strict
    }
}

fn load_story(path: &Path, lax: bool, err: &mut dyn Write) -> Result<Story, Failure> {
    let text = read_file(path)?;
    let parsed = parse_story(&text, mode(lax)).map_err(|e| io_fail(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {}: {w}", path.display());
    }
    Ok(parsed.story)
}

fn resources() -> Result<Resources, Failure> {
    load_default_resources().map_err(|e| io_fail(e.to_string()))
}

fn dialog_failure(e: DialogError) -> Failure {
    let mut message = e.to_string();
    if let DialogError::Invalid(diags) = &e {
        for (i, d) in diags {
            message.push_str(&format!("\nsentence {i}: {d}"));
        }
    }
    Failure {
        code: EXIT_INVALID,
        message,
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    story: &Path,
    config: &Path,
    trace: Option<&Path>,
    seed: Option<u64>,
    out_path: Option<&Path>,
    lax: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let story = load_story(story, lax, err)?;
    let cfg_text = read_file(config)?;
    let cfg = load_params(&cfg_text).map_err(|e| io_fail(format!("{}: {e}", config.display())))?;
    for w in &cfg.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let res = resources()?;
    check_markers(&cfg.params, &res).map_err(|e| io_fail(format!("{}: {e}", config.display())))?;
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let dialog = build_dialog(&story, &cfg.params, seed, &res).map_err(dialog_failure)?;
    let text = transcript(&dialog);
    match out_path {
        Some(p) => write_file(p, &text)?,
        None => out.write_all(text.as_bytes()).map_err(|e| io_fail(e.to_string()))?,
    }
    if let Some(p) = trace {
        write_file(p, &trace_json(&dialog))?;
    }
    Ok(())
}

fn compare(
    story: &Path,
    presets: &[String],
    seed: u64,
    json: Option<&Path>,
    lax: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    if presets.len() < 2 {
        return Err(Failure {
            code: EXIT_IO,
            message: "usage: compare needs at least two presets, e.g. --presets est,chatty".into(),
        });
    }
    let params: Vec<_> = presets
        .iter()
        .map(|p| preset(p.trim()).map_err(|e| io_fail(e.to_string())))
        .collect::<Result<_, _>>()?;
    let story = load_story(story, lax, err)?;
    let res = resources()?;
    let mut reports = Vec::with_capacity(params.len());
    for p in &params {
        let d = build_dialog(&story, p, seed, &res).map_err(dialog_failure)?;
        reports.push(RunReport::from_dialog(&d));
    }
    out.write_all(render_table(&reports).as_bytes())
        .map_err(|e| io_fail(e.to_string()))?;
    if let Some(p) = json {
        write_file(p, &canonical_json(&reports))?;
    }
    Ok(())
}

fn validate(story: &Path, lax: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let story = load_story(story, lax, err)?;
    let diags = story.validate();
    for (i, d) in &diags {
        let _ = writeln!(out, "sentence {i}: {d}");
    }
    let _ = writeln!(out, "{} diagnostics", diags.len());
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_INVALID,
            message: String::new(),
        })
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Generate {
            story,
            config,
            trace,
            seed,
            out: out_path,
            lax,
        } => generate(story, config, trace.as_deref(), *seed, out_path.as_deref(), *lax, out, err),
        Command::Compare {
            story,
            presets,
            seed,
            json,
            lax,
        } => compare(story, presets, *seed, json.as_deref(), *lax, out, err),
        Command::Validate { story, lax } => validate(story, *lax, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}
