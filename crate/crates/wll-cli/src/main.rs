//! `wll`: classification of canonical elements and nilpotent normalized
//! potentials for Willmore two-spheres, the finite-uniton construction
//! pipeline, and surface-side verification.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.

mod classify;
mod dpw_cmd;
mod golden;
mod potential_cmd;
mod surface_cmd;
mod util;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "wll", version, about = "Willmore two-sphere classification and construction toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate canonical torus elements and their nilpotent data.
    Classify(classify::ClassifyArgs),
    /// Validate, rank and classify normalized potential files.
    Potential(potential_cmd::PotentialArgs),
    /// Run the construction pipeline or the closed-form oracle comparison.
    Dpw(dpw_cmd::DpwArgs),
    /// Verify geometric predicates of a surface (closed form or sampled).
    Surface(surface_cmd::SurfaceArgs),
    /// Run the golden regression suite.
    Golden(golden::GoldenArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Classify(args) => classify::run(args),
        Command::Potential(args) => potential_cmd::run(args),
        Command::Dpw(args) => dpw_cmd::run(args),
        Command::Surface(args) => surface_cmd::run(args),
        Command::Golden(args) => golden::run(args),
    };
    std::process::exit(match code {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    });
}
