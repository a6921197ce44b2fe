use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hkbfs_cli::{exit, run, Command, Format, RunConfig};
use hkbfs_core::ground::DEFAULT_MAX_GROUND_RULES;

/// Well-founded reasoning over hybrid MKNF knowledge bases.
#[derive(Parser, Debug)]
#[command(name = "hkbfs", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Knowledge base file.
    #[arg(long, global = true)]
    kb: Option<PathBuf>,
    /// Depth bound k on function-symbol nesting.
    #[arg(long, global = true, default_value_t = RunConfig::DEFAULT_DEPTH)]
    depth: usize,
    /// Ground atom to query.
    #[arg(long, global = true)]
    atom: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Abort grounding beyond this many rules.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUND_RULES)]
    max_ground_rules: u64,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Truth value of --atom in the iterated fixpoint.
    Query,
    /// True, false and undefined atoms.
    Partition,
    /// Every inner and outer step of the iterated fixpoint.
    Trace,
    /// Both semantics side by side (function-free input only).
    Compare,
    /// Check the alternating fixpoint against the stable-partition oracle.
    CheckCoherence,
    /// Parse and report diagnostics.
    Validate,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum OutputFormat {
    Text,
    Structured,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(kb) = cli.kb else {
        eprintln!("error: --kb <path> is required");
        return ExitCode::from(exit::USAGE);
    };
    let command = match cli.command {
        Cmd::Query => Command::Query,
        Cmd::Partition => Command::Partition,
        Cmd::Trace => Command::Trace,
        Cmd::Compare => Command::Compare,
        Cmd::CheckCoherence => Command::CheckCoherence,
        Cmd::Validate => Command::Validate,
    };
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Structured => Format::Structured,
    };
    let config = RunConfig { kb, depth: cli.depth, command, atom: cli.atom, format, max_ground_rules: cli.max_ground_rules };
    let outcome = run(&config);
    // Broken pipes are not worth a panic.
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.status)
}
