//! `qtransport`: build networks, run the exact relation checkers and export
//! transport matrices and their level series.
//!
//! Exit codes: 0 all checks pass, 1 a check fails, 2 file, parse or usage
//! error, 3 truncation error.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qtransport", version, about = "Exact checks for quantum transport matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one checker, or the whole suite with `all`.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Write a transport matrix, its levels or its reflection series.
    Export {
        #[arg(value_enum)]
        what: ExportKind,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Rmatrix,
    Rtt,
    Blocks,
    Affine,
    Loop,
    Subalgebra,
    Groupoid,
    Auxiliary,
    Reflection,
    ReflectionAffine,
    DiscReflection,
    Appendix,
    Frp,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportKind {
    Transport,
    Levels,
    Reflection,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuilderKind {
    Triangle,
    Composite,
    Hat,
    Ladder,
    Bottleneck,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Network file (JSON).
    #[arg(long, conflicts_with = "builder")]
    pub input: Option<PathBuf>,
    /// Built-in network family.
    #[arg(long, value_enum)]
    pub builder: Option<BuilderKind>,
    /// Size of the triangle network.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Hat matrix size, and row bound of the f table.
    #[arg(long)]
    pub r: Option<usize>,
    /// Column bound of the f table; level p of a single `affine` check.
    #[arg(long)]
    pub p: Option<usize>,
    /// R-matrix size (1..=4 when omitted); level k of a single `affine` check.
    #[arg(long)]
    pub k: Option<usize>,
    /// Block split `n1,m,n2` of the transport matrix.
    #[arg(long, value_parser = parse_triple)]
    pub split: Option<(usize, usize, usize)>,
    /// Sizes `n1,m2,m1,n2` of the composite builder.
    #[arg(long, value_parser = parse_quad)]
    pub parts: Option<(usize, usize, usize, usize)>,
    /// Largest k in the summed level relations.
    #[arg(long, default_value_t = 3)]
    pub kmax: i64,
    /// Largest p in the summed level relations.
    #[arg(long)]
    pub pmax: Option<i64>,
    /// Truncation order of level series.
    #[arg(long)]
    pub order: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Machine-readable JSON output.
    #[arg(long)]
    pub json: bool,
    /// Use the groupoid-mode generators and assert the groupoid condition.
    #[arg(long)]
    pub groupoid: bool,
    /// Report zero timings so that output is byte-stable.
    #[arg(long)]
    pub no_timing: bool,
}

fn parse_list(s: &str, len: usize) -> Result<Vec<usize>, String> {
    let v: Result<Vec<usize>, _> = s.split(',').map(|x| x.trim().parse::<usize>()).collect();
    match v {
        Ok(v) if v.len() == len => Ok(v),
        _ => Err(format!("expected {len} comma-separated non-negative integers")),
    }
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let v = parse_list(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

fn parse_quad(s: &str) -> Result<(usize, usize, usize, usize), String> {
    let v = parse_list(s, 4)?;
    Ok((v[0], v[1], v[2], v[3]))
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<qtransport::Error>() {
            return match e {
                qtransport::Error::Truncation { .. } | qtransport::Error::TruncationRequired => 3,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { which, opts } => commands::check(which, &opts),
        Command::Export { what, opts } => commands::export(what, &opts),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsers_check_arity() {
        assert_eq!(parse_triple("2, 1,3"), Ok((2, 1, 3)));
        assert!(parse_triple("1,2").is_err());
        assert!(parse_quad("1,1,2,-1").is_err());
        assert_eq!(parse_quad("1,1,2,1"), Ok((1, 1, 2, 1)));
    }

    #[test]
    fn truncation_maps_to_three() {
        let e = anyhow::Error::new(qtransport::Error::Truncation { level: 4, truncation: 2 });
        assert_eq!(exit_code_for(&e.context("while checking")), 3);
        assert_eq!(exit_code_for(&anyhow::anyhow!("bad file")), 2);
    }
}
