//! `webendo`: construct web-preserving selfmaps of P², verify them, and
//! draw their webs.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or I/O error.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use webendo::families::{FamilyTag, Orientation};
use webendo::render::Viewport;

#[derive(Parser)]
#[command(name = "webendo", version, about = "Selfmaps of the projective plane preserving algebraic webs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and write its map file.
    Construct(ConstructArgs),
    /// Run verification checks on a map file and write a JSON report.
    Verify(VerifyArgs),
    /// Compute the dual curve of a web and check the Plücker-type formula.
    Dual(DualArgs),
    /// Draw real leaves of a web as SVG.
    Render(RenderArgs),
    /// Merge JSON reports into a summary table.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct ConstructArgs {
    #[arg(long, value_parser = parse::family)]
    pub family: FamilyTag,
    #[arg(long)]
    pub degree: u32,
    /// Lift on P¹ as affine coefficients, low to high: "NUM" or "NUM;DEN",
    /// e.g. "-2,0,1" for t² − 2. For conic-line, the scalar c.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Two-lines: coefficients of p(x), low to high.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Two-lines: coefficients of q(y), low to high.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Smooth cubic: lattice parameter τ as "RE,IM".
    #[arg(long, value_parser = parse::tau, allow_hyphen_values = true)]
    pub tau: Option<[f64; 2]>,
    /// Smooth cubic: multiplier m with m² = degree.
    #[arg(long, allow_hyphen_values = true)]
    pub mult: Option<i64>,
    /// Smooth cubic: index of the flex translation, 0..=8.
    #[arg(long)]
    pub flex: Option<usize>,
    #[arg(long, value_parser = parse::orientation, allow_hyphen_values = true)]
    pub orientation: Option<Orientation>,
    /// Seed for the smooth-cubic interpolation samples.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub map: PathBuf,
    /// "auto" (the map's family), a family name, or a curve file.
    #[arg(long, default_value = "auto")]
    pub web: String,
    /// Comma-separated check names; default is every applicable check.
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Iterates allowed for critical orbits to close.
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    #[arg(long, value_parser = parse::tau, allow_hyphen_values = true)]
    pub tau: Option<[f64; 2]>,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Args)]
pub struct DualArgs {
    #[arg(long, value_parser = parse::family)]
    pub family: FamilyTag,
    #[arg(long, value_parser = parse::tau, allow_hyphen_values = true)]
    pub tau: Option<[f64; 2]>,
    /// Held-out parameters for the numeric fit.
    #[arg(long, default_value_t = 50)]
    pub held_out: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct RenderArgs {
    #[arg(long, value_parser = parse::family)]
    pub family: FamilyTag,
    /// Number of leaves.
    #[arg(long, default_value_t = 60)]
    pub lines: usize,
    /// "X0,Y0,X1,Y1" in screen coordinates; defaults depend on the family.
    #[arg(long, allow_hyphen_values = true)]
    pub viewport: Option<Viewport>,
    #[arg(long, value_parser = parse::tau, allow_hyphen_values = true)]
    pub tau: Option<[f64; 2]>,
    /// Draw in the chart z = 1 instead of the family's default view.
    #[arg(long)]
    pub affine: bool,
    #[arg(long)]
    pub stroke: Option<String>,
    #[arg(long)]
    pub stroke_width: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Report files written by `verify`.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Merged JSON output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => commands::construct(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Dual(a) => commands::dual(&a),
        Command::Render(a) => commands::render(&a),
        Command::Report(a) => commands::report(&a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
