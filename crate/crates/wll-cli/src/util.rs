//! Shared argument parsing helpers.

use num_complex::Complex64;
use wll_dpw::GridSpec;

pub type CliError = Box<dyn std::error::Error>;

/// Grid specification "RESxRES:RADIUS", e.g. "20x20:1.5".
pub fn parse_grid(spec: &str, disk: bool) -> Result<GridSpec, CliError> {
    let (res_part, radius_part) = spec
        .split_once(':')
        .ok_or_else(|| format!("grid spec must look like 20x20:1.5, got {spec:?}"))?;
    let (ra, rb) = res_part
        .split_once('x')
        .ok_or_else(|| format!("grid resolution must look like 20x20, got {res_part:?}"))?;
    let res_a: usize = ra.parse()?;
    let res_b: usize = rb.parse()?;
    if res_a != res_b {
        return Err(format!("only square grids are supported, got {res_part}").into());
    }
    if res_a < 2 {
        return Err("grid resolution must be at least 2".into());
    }
    let radius: f64 = radius_part.parse()?;
    if radius <= 0.0 {
        return Err("grid radius must be positive".into());
    }
    Ok(GridSpec {
        res: res_a,
        radius,
        disk,
    })
}

/// Comma-separated unit-circle samples: "1", "i", "-1", "-i", "a+bi",
/// or "exp:THETA" for e^{i THETA}.
pub fn parse_lambdas(spec: &str) -> Result<Vec<Complex64>, CliError> {
    let mut out = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        let l = match tok {
            "1" => Complex64::new(1.0, 0.0),
            "-1" => Complex64::new(-1.0, 0.0),
            "i" => Complex64::new(0.0, 1.0),
            "-i" => Complex64::new(0.0, -1.0),
            _ => {
                if let Some(theta) = tok.strip_prefix("exp:") {
                    Complex64::from_polar(1.0, theta.parse::<f64>()?)
                } else {
                    parse_complex(tok)?
                }
            }
        };
        if (l.norm() - 1.0).abs() > 1e-9 {
            return Err(format!("lambda sample {tok:?} is not on the unit circle").into());
        }
        out.push(l);
    }
    if out.is_empty() {
        return Err("no lambda samples given".into());
    }
    Ok(out)
}

fn parse_complex(tok: &str) -> Result<Complex64, CliError> {
    // forms: "a", "a+bi", "a-bi"
    if let Some(rest) = tok.strip_suffix('i') {
        let split = rest
            .rfind(['+', '-'])
            .filter(|&p| p > 0)
            .ok_or_else(|| format!("cannot parse complex number {tok:?}"))?;
        let re: f64 = rest[..split].parse()?;
        let im_str = &rest[split..];
        let im: f64 = if im_str == "+" {
            1.0
        } else if im_str == "-" {
            -1.0
        } else {
            im_str.parse()?
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(tok.parse()?, 0.0))
    }
}

/// Worker cap from the WLL_THREADS environment variable (default 1).
pub fn thread_cap() -> usize {
    std::env::var("WLL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

pub fn write_artifact(path: &str, content: &str) -> Result<(), CliError> {
    if let Some(dir) = std::path::Path::new(path).parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, content)?;
    Ok(())
}
