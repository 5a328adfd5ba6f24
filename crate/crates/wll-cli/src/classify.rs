//! `wll classify`: the canonical-element table for a given block count.

use crate::util::{write_artifact, CliError};
use clap::Args;
use serde_json::json;
use wll_core::canonical::{enumerate_canonical, exp_pi_check, nilpotent_basis};

#[derive(Args)]
pub struct ClassifyArgs {
    /// Block count m (the sphere is S^{2m-2}).
    #[arg(long)]
    pub m: usize,
    /// Output format.
    #[arg(long, default_value = "table")]
    pub format: String,
    /// Optional output file (stdout otherwise).
    #[arg(long)]
    pub out: Option<String>,
}

pub fn run(args: ClassifyArgs) -> Result<bool, CliError> {
    let list = enumerate_canonical(args.m)?;
    let mut rows = Vec::new();
    for e in &list {
        let nb = nilpotent_basis(e)?;
        let grades: Vec<(i64, usize)> = nb
            .grading
            .parts
            .iter()
            .map(|(&g, b)| (g, b.len()))
            .collect();
        rows.push((e.clone(), nb.odd_part_basis.len(), grades));
    }
    let output = match args.format.as_str() {
        "json" => {
            let items: Vec<_> = rows
                .iter()
                .map(|(e, odd_dim, grades)| {
                    json!({
                        "coefficients": e.coeffs,
                        "family": e.family.to_string(),
                        "height": e.height,
                        "odd_part_dimension": odd_dim,
                        "grade_dimensions": grades
                            .iter()
                            .map(|(g, d)| json!({"grade": g, "dim": d}))
                            .collect::<Vec<_>>(),
                        "exp_pi_matches": exp_pi_check(e),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "m": args.m,
                "count": list.len(),
                "elements": items,
            }))? + "\n"
        }
        "table" => {
            let mut s = format!(
                "canonical elements for m = {} ({} = (m-1)^2 expected)\n",
                args.m,
                (args.m - 1) * (args.m - 1)
            );
            s += &format!(
                "{:<18} {:<12} {:>6} {:>8}   grade dims\n",
                "coefficients", "family", "r(xi)", "odd dim"
            );
            for (e, odd_dim, grades) in &rows {
                let gd: Vec<String> = grades
                    .iter()
                    .filter(|(g, _)| *g >= 0)
                    .map(|(g, d)| format!("{g}:{d}"))
                    .collect();
                s += &format!(
                    "{:<18} {:<12} {:>6} {:>8}   {}\n",
                    format!("{:?}", e.coeffs),
                    e.family.to_string(),
                    e.height,
                    odd_dim,
                    gd.join(" ")
                );
            }
            s
        }
        other => return Err(format!("unknown format {other:?} (use table or json)").into()),
    };
    match &args.out {
        Some(path) => write_artifact(path, &output)?,
        None => print!("{output}"),
    }
    Ok(true)
}
