//! `wll potential`: validate / rank / classify normalized potential files.

use crate::util::{CliError};
use clap::{Args, Subcommand};
use serde_json::json;
use wll_core::potential::{
    detect_pair_kind, generic_rank, is_s_willmore, potential_from_json, NormalizedPotential,
    PairKind,
};

#[derive(Args)]
pub struct PotentialArgs {
    #[command(subcommand)]
    pub cmd: PotentialCmd,
}

#[derive(Subcommand)]
pub enum PotentialCmd {
    /// Check the isotropy conditions exactly; exit 1 on violation.
    Validate { file: String, #[arg(long)] json: bool },
    /// Rank of B1 over the rational-function field; S-Willmore iff 1.
    Rank { file: String, #[arg(long)] json: bool },
    /// Type tag, per-pair kinds, rank, poles.
    Classify { file: String, #[arg(long)] json: bool },
}

fn load_value(file: &str) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {file}: {e}"))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("{file}: not JSON: {e}"))?)
}

fn load(file: &str) -> Result<NormalizedPotential, CliError> {
    Ok(potential_from_json(&load_value(file)?)?)
}

pub fn run(args: PotentialArgs) -> Result<bool, CliError> {
    match args.cmd {
        PotentialCmd::Validate { file, json } => {
            // file and format problems are usage errors (exit 2); only a
            // violated isotropy condition is a validation failure (exit 1)
            let value = load_value(&file)?;
            match potential_from_json(&value) {
                Ok(p) => {
                    if json {
                        println!(
                            "{}",
                            json!({"valid": true, "m": p.m, "type": p.type_tag, "case": p.case_label})
                        );
                    } else {
                        println!(
                            "valid: m = {}, type {}, {} pole(s)",
                            p.m,
                            p.type_tag.map_or("untyped".into(), |t| t.to_string()),
                            p.poles.len()
                        );
                    }
                    Ok(true)
                }
                Err(e @ wll_core::CoreError::Isotropy { .. })
                | Err(e @ wll_core::CoreError::Degenerate(_)) => {
                    if json {
                        println!("{}", json!({"valid": false, "error": e.to_string()}));
                    } else {
                        println!("invalid: {e}");
                    }
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        PotentialCmd::Rank { file, json } => {
            let p = load(&file)?;
            let rank = generic_rank(&p);
            let sw = is_s_willmore(&p);
            if json {
                println!("{}", json!({"rank": rank, "s_willmore": sw}));
            } else {
                println!("rank(B1) = {rank} over the function field; S-Willmore: {sw}");
            }
            Ok(true)
        }
        PotentialCmd::Classify { file, json } => {
            let p = load(&file)?;
            let mut kinds = Vec::new();
            for k in 0..(p.m - 2) {
                let pair = p.b1.block(0, 2 * k, 4, 2);
                kinds.push(match detect_pair_kind(&pair) {
                    Some(PairKind::I) => "i",
                    Some(PairKind::II) => "ii",
                    None => "nonstandard",
                });
            }
            let rank = generic_rank(&p);
            if json {
                println!(
                    "{}",
                    json!({
                        "m": p.m,
                        "type": p.type_tag,
                        "case": p.case_label,
                        "pair_kinds": kinds,
                        "rank": rank,
                        "s_willmore": rank == 1,
                        "poles": p.poles.iter().map(|c| (c.re, c.im)).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!(
                    "m = {}, type {}, pairs [{}], rank {}, S-Willmore {}",
                    p.m,
                    p.type_tag.map_or("untyped".into(), |t| t.to_string()),
                    kinds.join(", "),
                    rank,
                    rank == 1
                );
                if !p.poles.is_empty() {
                    println!("poles: {:?}", p.poles);
                }
            }
            Ok(true)
        }
    }
}
