use clap::{Parser, Subcommand, ValueEnum};

use origami_core::commands::{
    cmd_cut, cmd_homology, cmd_invariants, cmd_ring4d, cmd_validate, OutputFormat,
};
use origami_core::invariants::BettiMode;

/// Exact invariants of toric origami templates.
///
/// PATH arguments accept a file path, a file under ORIGAMI_FIXTURE_DIR,
/// or a built-in fixture name (t_square, t_fold2, t_ring4, t_chain4,
/// t_cube2, t_prismring, t_fig1).
#[derive(Parser)]
#[command(name = "origami", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Closed,
    Inductive,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Check every template axiom; exit 0 iff all pass.
    Validate { path: String },
    /// f/h/h'/h'' vectors, Betti numbers, Euler data, rank bookkeeping.
    Invariants {
        path: String,
        /// Which Betti computation(s) to run.
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Allow templates with non-acyclic proper faces; prints the
        /// partial constraints instead of full Betti numbers.
        #[arg(long)]
        relaxed: bool,
    },
    /// Homology of the dual poset's order complex vs the expected profile.
    Homology { path: String },
    /// Remove a fold edge and write the resulting template.
    Cut {
        path: String,
        /// Edge id to remove.
        #[arg(long)]
        edge: usize,
        /// Where to write the cut template.
        #[arg(long)]
        out: Option<String>,
        /// Permit cutting a bridge (the result is disconnected).
        #[arg(long)]
        allow_bridge: bool,
    },
    /// Degree-2/degree-4 ring presentation (n = 2 only).
    Ring4d { path: String },
}

fn main() {
    let cli = Cli::parse();
    let format = match cli.format {
        Format::Text => OutputFormat::Text,
        Format::Json => OutputFormat::Json,
    };
    let output = match cli.command {
        Command::Validate { path } => cmd_validate(&path, format),
        Command::Invariants {
            path,
            mode,
            relaxed,
        } => {
            let mode = match mode {
                Mode::Closed => BettiMode::Closed,
                Mode::Inductive => BettiMode::Inductive,
                Mode::Both => BettiMode::Both,
            };
            cmd_invariants(&path, mode, relaxed, format)
        }
        Command::Homology { path } => cmd_homology(&path, format),
        Command::Cut {
            path,
            edge,
            out,
            allow_bridge,
        } => cmd_cut(&path, edge, out.as_deref(), allow_bridge, format),
        Command::Ring4d { path } => cmd_ring4d(&path, format),
    };
    print!("{}", output.text);
    std::process::exit(output.exit_code);
}
