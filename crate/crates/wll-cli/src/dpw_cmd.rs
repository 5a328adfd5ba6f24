//! `wll dpw`: run the construction pipeline, or compare against the
//! closed-form oracle.

use crate::util::{parse_grid, parse_lambdas, write_artifact, CliError};
use clap::{Args, Subcommand};
use wll_core::potential::{example_potential, potential_from_json};
use wll_dpw::pipeline::run_pipeline;
use wll_dpw::verify_example;

#[derive(Args)]
pub struct DpwArgs {
    #[command(subcommand)]
    pub cmd: DpwCmd,
}

#[derive(Subcommand)]
pub enum DpwCmd {
    /// Integrate, split and project a potential over a grid; write CSV.
    Run {
        /// Potential file, or "builtin:example".
        #[arg(long)]
        potential: String,
        /// Grid spec RESxRES:RADIUS, e.g. 20x20:1.5.
        #[arg(long, default_value = "20x20:1.5")]
        grid: String,
        /// Use the full square grid instead of the disk |z| <= radius.
        #[arg(long)]
        square: bool,
        /// Unit-circle samples, e.g. "1,i,exp:1.0472".
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Output CSV path.
        #[arg(long)]
        out: String,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the explicit S^6 example and report the max deviation.
    VerifyExample {
        #[arg(long, default_value = "20x20:1.5")]
        grid: String,
        /// Use the full square grid instead of the disk.
        #[arg(long)]
        square: bool,
        /// Default samples 1, i, e^{i pi/3}.
        #[arg(long, default_value = "1,i,exp:1.0471975511965976")]
        lambda: String,
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

pub fn run(args: DpwArgs) -> Result<bool, CliError> {
    match args.cmd {
        DpwCmd::Run {
            potential,
            grid,
            square,
            lambda,
            out,
            json,
        } => {
            let pot = if potential == "builtin:example" {
                example_potential()
            } else {
                let text = std::fs::read_to_string(&potential)
                    .map_err(|e| format!("cannot read {potential}: {e}"))?;
                potential_from_json(&serde_json::from_str(&text)?)?
            };
            let grid = parse_grid(&grid, !square)?;
            let lambdas = parse_lambdas(&lambda)?;
            let run = run_pipeline(&pot, &grid, &lambdas)?;
            // CSV: re(z), im(z), lambda index, coordinates, residuals
            let dim = 2 * pot.m - 1;
            let mut csv = String::from("re_z,im_z,lambda_index");
            for k in 0..dim {
                csv += &format!(",x{k}");
            }
            csv += ",reality,group,twist,lightlike,adapt,newton_iters\n";
            for s in &run.samples {
                csv += &format!("{},{},{}", s.z.0, s.z.1, s.lambda_index);
                for v in &s.point {
                    csv += &format!(",{v:.17e}");
                }
                let d = &s.diagnostics;
                csv += &format!(
                    ",{:.3e},{:.3e},{:.3e},{:.3e},{:.3e},{}\n",
                    d.reality, d.group, d.twist, d.lightlike, d.adapt, d.newton_iters
                );
            }
            write_artifact(&out, &csv)?;
            if !run.quarantined.is_empty() {
                let qpath = format!("{out}.quarantine.json");
                write_artifact(&qpath, &serde_json::to_string_pretty(&run.quarantined)?)?;
                eprintln!(
                    "{} point(s) quarantined; reasons in {qpath}",
                    run.quarantined.len()
                );
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&run.summary)?);
            } else {
                println!(
                    "wrote {} samples to {out} ({} ok, {} quarantined)",
                    run.samples.len(),
                    run.summary.points_ok,
                    run.summary.points_quarantined
                );
            }
            Ok(run.summary.points_ok > 0)
        }
        DpwCmd::VerifyExample {
            grid,
            square,
            lambda,
            out,
            json,
        } => {
            let grid = parse_grid(&grid, !square)?;
            let lambdas = parse_lambdas(&lambda)?;
            let rep = verify_example(&grid, &lambdas)?;
            let pass = rep.overall_max_deviation < 1e-8;
            if json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!(
                    "max deviation vs closed form after conjugation fit: {:.3e} (tolerance 1e-8)",
                    rep.overall_max_deviation
                );
                println!(
                    "per lambda: {:?}",
                    rep.max_deviation
                        .iter()
                        .map(|d| format!("{d:.3e}"))
                        .collect::<Vec<_>>()
                );
                println!(
                    "gram spectrum distance between lambda families: {:.3e}",
                    rep.gram_spectrum_distance
                );
                println!(
                    "points ok {}, quarantined {}, elapsed {:.2}s: {}",
                    rep.summary.points_ok,
                    rep.summary.points_quarantined,
                    rep.elapsed_seconds,
                    if pass { "PASS" } else { "FAIL" }
                );
            }
            if let Some(path) = out {
                write_artifact(&path, &serde_json::to_string_pretty(&rep)?)?;
            }
            Ok(pass)
        }
    }
}
