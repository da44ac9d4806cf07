//! Thin front end over the library: load a graph and a deletion script,
//! run one of the modes, write a JSON-lines report, and exit nonzero when
//! any asserted invariant failed. The library examples cover the same
//! entry points programmatically.

use clap::Parser;
use decmatch::cli::{self, Family, InstanceSpec, OracleMode, RunConfig, RunMode};
use decmatch::rational::Rat;
use num::BigInt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(name = "decmatch", about = "Decremental weighted matching harness")]
struct Args {
    /// frac_solve | m_or_e | engine | orchestrate | verify | gen
    #[arg(long)]
    mode: String,
    /// Graph file (`n m W` header, then `u v w` lines). In gen mode this
    /// is the output path.
    #[arg(long)]
    graph: PathBuf,
    /// Deletion script, one edge id per line. In gen mode this is the
    /// output path for the generated deletion order.
    #[arg(long)]
    deletions: Option<PathBuf>,
    /// JSON-lines report output path.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "1/5")]
    epsilon: String,
    #[arg(long, default_value = "8")]
    alpha: String,
    #[arg(long, default_value = "8")]
    rho: String,
    #[arg(long, default_value_t = 16)]
    lambda: usize,
    #[arg(long, default_value = "1/8")]
    theta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Uniform capacity for frac_solve / m_or_e (e.g. "1/4").
    #[arg(long)]
    kappa: Option<String>,
    /// off | guarded (oracle checks only when n <= 16)
    #[arg(long, default_value = "guarded")]
    oracle: String,
    /// Dump per-iteration solver trace records into the report.
    #[arg(long, default_value_t = false)]
    trace: bool,
    /// gen mode: instance family.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    max_weight: u64,
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    let parts: Vec<&str> = s.split('/').collect();
    let bad = |_| format!("bad rational `{s}`");
    match parts.as_slice() {
        [p] => Ok(Rat::from_integer(BigInt::from_str(p).map_err(bad)?)),
        [p, q] => Ok(Rat::new(
            BigInt::from_str(p).map_err(bad)?,
            BigInt::from_str(q).map_err(bad)?,
        )),
        _ => Err(format!("bad rational `{s}`")),
    }
}

fn main() {
    let args = Args::parse();
    match run(args) {
        Ok(ok) => std::process::exit(if ok { 0 } else { 1 }),
        Err(msg) => {
            eprintln!("decmatch: {msg}");
            std::process::exit(2);
        }
    }
}

fn run(args: Args) -> Result<bool, String> {
    if args.mode == "gen" {
        let family = Family::parse(
            args.family
                .as_deref()
                .ok_or("gen mode requires --family")?,
        )
        .map_err(|e| e.to_string())?;
        let spec = InstanceSpec {
            family,
            n: args.n,
            m: args.m,
            w_max: args.max_weight,
        };
        let (graph, dels) = cli::gen_instance(&spec, args.seed).map_err(|e| e.to_string())?;
        std::fs::write(&args.graph, graph).map_err(|e| e.to_string())?;
        if let Some(d) = &args.deletions {
            std::fs::write(d, dels).map_err(|e| e.to_string())?;
        }
        return Ok(true);
    }
    let config = RunConfig {
        mode: RunMode::parse(&args.mode).map_err(|e| e.to_string())?,
        graph_path: args.graph,
        deletions_path: args.deletions,
        report_path: args.report.clone(),
        eps: parse_rat(&args.epsilon)?,
        alpha: parse_rat(&args.alpha)?,
        rho: parse_rat(&args.rho)?,
        lambda: args.lambda,
        theta: parse_rat(&args.theta)?,
        seed: args.seed,
        kappa: args.kappa.as_deref().map(parse_rat).transpose()?,
        oracle: match args.oracle.as_str() {
            "off" => OracleMode::Off,
            "guarded" => OracleMode::Guarded,
            other => return Err(format!("unknown oracle mode `{other}`")),
        },
        trace: args.trace,
    };
    let report = cli::run(&config).map_err(|e| e.to_string())?;
    if args.report.is_none() {
        print!("{}", report.to_jsonl());
    }
    Ok(report.summary.ok)
}
