use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Invalid configuration or a refused size; mapped to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

pub fn config_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(ConfigError(msg.into()).into())
}

#[derive(Parser, Debug)]
#[command(name = "bcdaha", version, about = "Exact BC_n dAHA/dDAHA constructions and relation checks")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Dunkl operator suites on a monomial window.
    VerifyDunkl(VerifyDunklArgs),
    /// Build F_{n,p,mu}(M) on a catalog module or the gl_2 tensor-field module.
    BuildDaha(BuildDahaArgs),
    /// Build the dDAHA representation on twisted functions.
    BuildDdaha(BuildDdahaArgs),
    /// Print theta*(sum g(X_m)) in trace form.
    Theta(ThetaArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON artifact here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// key=value file; explicit flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Perturb one generator, e.g. `y1+1`, `yt2-1/2`, `y1+X1`.
    #[arg(long = "inject-fault")]
    pub inject_fault: Option<String>,
    /// Omit wall time so that reruns are byte-identical.
    #[arg(long)]
    pub deterministic: bool,
    /// Largest rank n accepted.
    #[arg(long = "max-n", default_value_t = 8)]
    pub max_n: usize,
    /// Largest number of domain vectors accepted.
    #[arg(long = "max-domain", default_value_t = 20_000)]
    pub max_domain: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyDunklArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Unset parameters become symbols instead of seeded random rationals.
    #[arg(long)]
    pub symbolic: bool,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub k1: Option<String>,
    #[arg(long)]
    pub k2: Option<String>,
    #[arg(long)]
    pub k3: Option<String>,
    /// Exponent radius of the monomial domain.
    #[arg(long, default_value_t = 2)]
    pub window: i64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BuildDahaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Catalog kind (V, V*, sym2, ext2, VxV, tensor(..), trivial) or `tensorfield`.
    #[arg(long = "M")]
    pub module: String,
    #[arg(long)]
    pub mu: Option<String>,
    /// Tensor-field weight; only used with `--M tensorfield`.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BuildDdahaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Total degree d of the function window.
    #[arg(long, default_value_t = 2)]
    pub window: usize,
    /// lambda + mu; defaults to n/2, or to lambda + mu when both are given.
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    /// Accepted for symmetry with the other commands; lambda always stays symbolic.
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ThetaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Even Laurent polynomial in Z, e.g. "Z+1/Z".
    #[arg(long)]
    pub g: String,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
}

/// Splice `--config` entries in as flags right after the subcommand, so that
/// later explicit flags override them.
pub fn expand_args(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            match it.next() {
                Some(p) => path = Some(p),
                None => bail!(ConfigError("--config needs a path".into())),
            }
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading config {path}"))
        .map_err(|e| ConfigError(format!("{e:#}")))?;
    let spliced = config_flags(&text)?;
    let at = rest.iter().skip(1).position(|a| !a.starts_with('-')).map_or(rest.len(), |k| k + 2);
    rest.splice(at..at, spliced);
    Ok(rest)
}

fn config_flags(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return config_error(format!("config line {}: expected key=value", k + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            "true" if matches!(key, "symbolic" | "deterministic") => out.push(flag),
            "false" if matches!(key, "symbolic" | "deterministic") => {}
            _ => {
                out.push(flag);
                out.push(value.to_string());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines_become_flags() {
        let f = config_flags("n = 2\n# comment\nsymbolic=true\ninject_fault=y1+1\n").unwrap();
        assert_eq!(f, ["--n", "2", "--symbolic", "--inject-fault", "y1+1"]);
        assert!(config_flags("n").is_err());
    }

    #[test]
    fn explicit_flags_win_over_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "n=3\nwindow=1\n").unwrap();
        let argv: Vec<String> = ["bcdaha", "verify-dunkl", "--config", path.to_str().unwrap(), "--n", "2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let cli = Cli::try_parse_from(expand_args(argv).unwrap()).unwrap();
        let Command::VerifyDunkl(a) = cli.command else { panic!() };
        assert_eq!(a.common.n, 2);
        assert_eq!(a.window, 1);
    }
}
