//! `scd` command-line interface.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 engine failure (partial
//! output is still written), 64 usage error. `verify` exits 3 when the
//! decomposition is invalid.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use scd_core::engine::EngineConfig;
use scd_core::io::{
    bench_threads, generate, parse_edge_list, run_bench, run_decomposition, write_edge_list, BenchPlan,
    DecompositionJson, GraphModel,
};
use scd_core::ratio::Ratio;
use scd_core::verification::verify_decomposition;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_ENGINE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "scd", version, about = "Short cycle decomposition of multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a graph into short cycles plus leftover edges.
    Decompose(DecomposeArgs),
    /// Check a decomposition against its graph.
    Verify(VerifyArgs),
    /// Write a random graph as an edge list.
    Gen(GenArgs),
    /// Time decompositions over generated graphs and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Exact rational `p/q`.
    #[arg(long)]
    beta: Option<Ratio>,
    /// TOML file with engine settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print a one-line summary to stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    decomposition: PathBuf,
    #[arg(long = "k-hat")]
    k_hat: usize,
    #[arg(long = "l-max")]
    l_max: usize,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    /// Edge count (gnm).
    #[arg(long)]
    m: Option<usize>,
    /// Degree (d_regular) or pair multiplicity (parallel_gadgets).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    models: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    c: Vec<u32>,
    /// Seeds per (model, size, c) cell.
    #[arg(long)]
    seeds: u64,
    #[arg(long = "base-seed", default_value_t = 0)]
    base_seed: u64,
    /// Edges per vertex of the generated graphs.
    #[arg(long = "edge-ratio", default_value_t = 10)]
    edge_ratio: usize,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_IO,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn load_graph(path: &Path) -> Result<scd_core::MultiGraph, CliError> {
    parse_edge_list(&read(path)?).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Engine settings from an optional TOML file, then flag overrides.
fn engine_config(args: &DecomposeArgs) -> Result<EngineConfig, CliError> {
    let mut cfg = match &args.config {
        Some(p) => {
            let text = String::from_utf8(read(p)?).map_err(|_| CliError::Parse {
                path: p.display().to_string(),
                message: "not UTF-8".into(),
            })?;
            toml::from_str(&text).map_err(|e| CliError::Parse {
                path: p.display().to_string(),
                message: e.to_string(),
            })?
        }
        None => EngineConfig::default(),
    };
    if let Some(c) = args.c {
        cfg.c = c;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(beta) = args.beta {
        cfg.beta = beta;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<i32, CliError> {
    let cfg = engine_config(args)?;
    let g = load_graph(&args.input)?;
    let (json, err) = run_decomposition(&g, &cfg);
    let text = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
    write_out(args.output.as_deref(), &text)?;
    if args.stats {
        eprintln!(
            "n={} m={} cycles={} leftover={} max_len={} wall_ms={}",
            json.n,
            json.m,
            json.cycles.len(),
            json.leftover.len(),
            json.stats.max_cycle_length,
            json.stats.wall_ms
        );
    }
    match err {
        Some(e) => {
            eprintln!("scd: engine failure: {e}");
            Ok(EXIT_ENGINE)
        }
        None => Ok(EXIT_OK),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let raw = read(&args.decomposition)?;
    let json: DecompositionJson = serde_json::from_slice(&raw).map_err(|e| CliError::Parse {
        path: args.decomposition.display().to_string(),
        message: e.to_string(),
    })?;
    let d = json.to_decomposition();
    let report = match verify_decomposition(&g, &d, args.k_hat, args.l_max) {
        Ok(r) => r,
        Err(e) => {
            println!("{{\"valid\": false, \"error\": {:?}}}", e.to_string());
            return Ok(EXIT_INVALID);
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    write_out(None, &text)?;
    Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
}

fn cmd_gen(args: &GenArgs) -> Result<i32, CliError> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("model {} needs --{flag}", args.model)))
    };
    let model = match args.model.as_str() {
        "gnm" => GraphModel::Gnm {
            n: args.n,
            m: need(args.m, "m")?,
        },
        "d_regular" => GraphModel::DRegular {
            n: args.n,
            d: need(args.d, "d")?,
        },
        "torus" => GraphModel::Torus { n: args.n },
        "parallel_gadgets" => GraphModel::ParallelGadgets {
            n: args.n,
            d: need(args.d, "d")?,
        },
        other => return Err(CliError::Usage(format!("unknown model {other:?}"))),
    };
    let g = generate(&model, args.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    write_out(args.output.as_deref(), &write_edge_list(&g))?;
    Ok(EXIT_OK)
}

fn cmd_bench(args: &BenchArgs) -> Result<i32, CliError> {
    for m in &args.models {
        GraphModel::from_name(m, 4, 1).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let plan = BenchPlan {
        models: args.models.clone(),
        sizes: args.sizes.clone(),
        cs: args.c.clone(),
        seeds: args.seeds,
        base_seed: args.base_seed,
        edge_ratio: args.edge_ratio,
    };
    let rows = run_bench(&plan, bench_threads()).map_err(|e| CliError::Usage(e.to_string()))?;
    let io_err = |source: std::io::Error| CliError::Io {
        path: args.output.display().to_string(),
        source,
    };
    let mut w = csv::Writer::from_path(&args.output).map_err(|e| io_err(e.into()))?;
    for row in &rows {
        w.serialize(row).map_err(|e| io_err(e.into()))?;
    }
    w.flush().map_err(io_err)?;
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("scd: {e}");
            e.exit_code()
        }
    }
}
