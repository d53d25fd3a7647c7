//! Command-line front end.

mod cache;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::census::{census, Cocharacter};
use crate::error::{Error, Result};
use crate::identities::{
    catalog, compare, default_cases, parse_character_file, run_all, run_case_with, IdentityCase, ParamValue,
    Report, SeriesValue, Status,
};
use crate::specdsl::{evaluate_with, parse};

pub use cache::{CacheKey, CensusCache, CACHE_VERSION};

pub const EXIT_EQUAL: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fixedloci", version, about = "Census of torus-fixed points and q-series identity checks")]
struct Cli {
    /// JSON-lines census cache; defaults to $MODULI_CACHE, else memory only.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Omit runtime_ms from reports.
    #[arg(long, global = true)]
    no_runtime: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Format {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cell-dimension multisets, h0 and Poincaré coefficients per size n.
    Census {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long, allow_hyphen_values = true)]
        beta: i64,
        /// Comma-separated weights w_1,..,w_r.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "ow")]
        weights: Option<Vec<i64>>,
        /// Shorthand for the weights (1,..,1,0,..,0) with m ones.
        #[arg(long)]
        ow: Option<usize>,
        #[arg(long)]
        max_n: u32,
        #[command(flatten)]
        format: Format,
    },
    /// Expands an expression.
    #[command(alias = "eval")]
    Series {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        t_order: Option<usize>,
        #[command(flatten)]
        format: Format,
    },
    /// Checks one catalog identity.
    Verify {
        #[arg(long)]
        identity: String,
        /// Comma-separated k=v pairs; vectors in brackets, e.g. w=[0,1].
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        char_file: Option<PathBuf>,
    },
    /// Checks every catalog case that needs no imported data.
    VerifyAll {
        #[arg(long)]
        order: usize,
    },
    /// Prints the identity catalog.
    ListIdentities {
        #[arg(long)]
        json: bool,
    },
    /// Compares two expressions coefficient by coefficient.
    Compare {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        t_order: Option<usize>,
    },
}

/// Splits `k=v,k=[a,b]` at top-level commas.
pub fn parse_params(text: &str) -> Result<BTreeMap<String, ParamValue>> {
    let mut out = BTreeMap::new();
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    for part in parts.into_iter().map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("parameter {part:?} is not k=v")))?;
        let v = v.trim();
        let bad = || Error::Parameter(format!("bad value for {k}: {v:?}"));
        let value = if let Some(inner) = v.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let items: std::result::Result<Vec<i64>, _> =
                inner.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect();
            ParamValue::Vector(items.map_err(|_| bad())?)
        } else {
            ParamValue::Int(v.parse().map_err(|_| bad())?)
        };
        if out.insert(k.trim().to_string(), value).is_some() {
            return Err(Error::Parameter(format!("parameter {k} given twice")));
        }
    }
    Ok(out)
}

fn exit_code(statuses: impl IntoIterator<Item = Status>) -> i32 {
    let mut code = EXIT_EQUAL;
    for s in statuses {
        code = match (code, s) {
            (_, Status::Refused) | (EXIT_REFUSED, _) => EXIT_REFUSED,
            (_, Status::Mismatch) => EXIT_MISMATCH,
            (c, Status::Equal) => c,
        };
    }
    code
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Refused(_) => EXIT_REFUSED,
        _ => EXIT_USAGE,
    }
}

fn report_json(report: Report, no_runtime: bool) -> String {
    let report = if no_runtime { report.without_runtime() } else { report };
    serde_json::to_string(&report).expect("report serializes")
}

fn render_series(value: &SeriesValue, json: bool) -> String {
    if json {
        serde_json::to_string(&value.to_json()).expect("series serializes")
    } else {
        value.to_csv().trim_end().to_string()
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let cache_path = cli.cache.clone().or_else(|| std::env::var_os("MODULI_CACHE").map(PathBuf::from));
    let store = match &cache_path {
        Some(p) => CensusCache::open(p),
        None => CensusCache::in_memory(),
    };
    let mut emit = |s: String| writeln!(out, "{s}").map_err(|e| Error::Io(e.to_string()));
    match cli.command {
        Command::Census { r, alpha, beta, weights, ow, max_n, format } => {
            let c = match (weights, ow) {
                (Some(w), None) => Cocharacter::new(alpha, beta, w)?,
                (None, Some(m)) => {
                    if m > r {
                        return Err(Error::Parameter(format!("--ow {m} exceeds r={r}")));
                    }
                    let w = (0..r).map(|i| i64::from(i < m)).collect();
                    Cocharacter::new(alpha, beta, w)?
                }
                _ => return Err(Error::Parameter("give exactly one of --weights and --ow".into())),
            };
            if c.rank() != r {
                return Err(Error::Parameter(format!("r={r} but {} weights were given", c.rank())));
            }
            let table = census(&c, max_n, &store)?;
            if format.csv {
                emit(table.to_csv().trim_end().to_string())?;
            } else {
                emit(serde_json::to_string_pretty(&table).expect("census serializes"))?;
            }
            Ok(EXIT_EQUAL)
        }
        Command::Series { expr, order, t_order, format } => {
            let value = evaluate_with(&parse(&expr)?, order, t_order, &store)?;
            emit(render_series(&value, format.json && !format.csv))?;
            Ok(EXIT_EQUAL)
        }
        Command::Verify { identity, params, order, char_file } => {
            let mut case = IdentityCase::new(&identity, parse_params(&params)?, order)?;
            if let Some(path) = char_file {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
                case = case.with_character(parse_character_file(&text)?);
            }
            let report = run_case_with(&case, &store)?;
            let code = exit_code([report.status]);
            emit(report_json(report, cli.no_runtime))?;
            Ok(code)
        }
        Command::VerifyAll { order } => {
            let cases = default_cases(order);
            let mut statuses = Vec::new();
            for report in run_all(&cases, &store) {
                let report = report?;
                statuses.push(report.status);
                emit(report_json(report, cli.no_runtime))?;
            }
            Ok(exit_code(statuses))
        }
        Command::ListIdentities { json } => {
            let cat = catalog();
            if json {
                emit(serde_json::to_string_pretty(&cat).expect("catalog serializes"))?;
            } else {
                for s in cat {
                    let params: Vec<&str> = s.params.iter().map(|p| p.name).collect();
                    emit(format!("{}({})\t{}\t[{}]", s.name, params.join(","), s.summary, s.anchor))?;
                }
            }
            Ok(EXIT_EQUAL)
        }
        Command::Compare { lhs, rhs, order, t_order } => {
            let l = evaluate_with(&parse(&lhs)?, order, t_order, &store)?;
            let r = evaluate_with(&parse(&rhs)?, order, t_order, &store)?;
            let report = compare(&l, &r, &format!("{lhs} = {rhs}"))?;
            let code = exit_code([report.status]);
            emit(report_json(report, true))?;
            Ok(code)
        }
    }
}

/// Parses `args`, runs the command writing to `out`, and returns the exit
/// status: 0 equal, 1 mismatch, 2 usage or parameter error, 3 refusal.
pub fn main_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_EQUAL };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}
