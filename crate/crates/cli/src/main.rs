// SPDX-License-Identifier: Apache-2.0

//! `polychain` command-line front end.
//!
//! Exit codes: 0 success or pass, 1 negative result, 2 usage or parse
//! error, 3 internal failure.

mod commands;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "polychain",
    version,
    about = "Integral polyhedral chains modulo p"
)]
pub struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Run every argument vector listed in this JSON file, in order.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ChainInput {
    /// Chain document (JSON).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Name of the chain inside the document; needed when it holds several.
    #[arg(long)]
    pub chain: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    #[value(name = "random-1chain")]
    RandomOneChain,
    RandomGrid,
    ParallelBundle,
    PathGraph,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select representative: coefficients reduced into (−p/2, p/2].
    Select {
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// p-mass of a chain.
    Pmass {
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        input: ChainInput,
    },
    /// Congruence mod p of the chains in two documents on the same complex.
    Equiv {
        #[arg(long)]
        p: i64,
        a: PathBuf,
        b: PathBuf,
        /// Chain name used in both documents.
        #[arg(long)]
        chain: Option<String>,
    },
    /// Boundary-mass repair with a certificate.
    Repair {
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        input: ChainInput,
        /// Repaired chain document; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Re-derive every repair postcondition from input, output and certificate.
    Verify {
        #[arg(long)]
        p: i64,
        input: PathBuf,
        output: PathBuf,
        cert: PathBuf,
    },
    /// Exact flat norm (mod p with --p) of a small chain.
    Flatnorm {
        #[arg(long)]
        p: Option<i64>,
        /// Coefficient bound B for S, R and Q.
        #[arg(long)]
        bound: Option<i64>,
        #[command(flatten)]
        input: ChainInput,
        /// Lift the size guardrails.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// M(∂ select) ≤ (p−1)·Mᵖ(∂T) on a cube grid.
    GridCheck {
        #[arg(long)]
        p: i64,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        theta: PathBuf,
    },
    /// Seeded sweep of the grid inequality.
    GridRandom {
        #[arg(long)]
        p: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        range: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Cone over a 0-chain: C = Σθᵢ[xᵢ → apex].
    Cone {
        /// Apex coordinates, e.g. `0,1/2`.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        apex: Vec<String>,
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether the coefficients of a 0-chain sum to 0 mod p.
    Zerosum {
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        input: ChainInput,
    },
    /// Reproducible fixtures.
    Gen {
        #[arg(long)]
        kind: GenKind,
        #[arg(long)]
        seed: u64,
        /// Edge count for parallel-bundle and path-graph.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 50)]
        range: i64,
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
        #[arg(long, default_value_t = 20)]
        max_edges: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of one command: exit code, JSON report, human summary.
pub struct Outcome {
    pub code: u8,
    pub report: Value,
    pub text: String,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<polychain::Error> for CliError {
    fn from(e: polychain::Error) -> Self {
        match e {
            polychain::Error::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn run_one(command: Command) -> (u8, Value, String) {
    match commands::dispatch(command) {
        Ok(o) => (o.code, o.report, o.text),
        Err(e) => (
            e.code(),
            json!({ "error": e.message(), "exit_code": e.code() }),
            format!("error: {}", e.message()),
        ),
    }
}

fn run_manifest(path: &PathBuf, json_out: bool) -> u8 {
    let parsed = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))
        .and_then(|text| {
            serde_json::from_str::<Vec<Vec<String>>>(&text)
                .map_err(|e| format!("{}: {e}", path.display()))
        });
    let runs = match parsed {
        Ok(runs) => runs,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut worst = 0;
    let mut reports = Vec::new();
    for args in runs {
        let argv = std::iter::once("polychain".to_string()).chain(args.iter().cloned());
        let (code, report, text) = match Cli::try_parse_from(argv) {
            Ok(Cli {
                command: Some(command),
                manifest: None,
                ..
            }) => run_one(command),
            Ok(_) => (
                2,
                json!({ "error": "manifest entries must name a subcommand" }),
                "error: no subcommand".into(),
            ),
            Err(e) => (2, json!({ "error": e.to_string() }), e.to_string()),
        };
        worst = worst.max(code);
        if json_out {
            reports.push(json!({ "args": args, "exit_code": code, "report": report }));
        } else {
            println!("$ {}\n{}\n[exit {code}]", args.join(" "), text.trim_end());
        }
    }
    if json_out {
        print!("{}", polychain::io::to_json(&reports));
    }
    worst
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match (cli.manifest, cli.command) {
        (Some(_), Some(_)) => {
            eprintln!("error: --manifest cannot be combined with a subcommand");
            2
        }
        (Some(path), None) => run_manifest(&path, cli.json),
        (None, Some(command)) => {
            let (code, report, text) = run_one(command);
            if cli.json {
                print!("{}", polychain::io::to_json(&report));
            } else if code >= 2 {
                eprintln!("{text}");
            } else {
                println!("{}", text.trim_end());
            }
            code
        }
        (None, None) => {
            eprintln!("error: a subcommand or --manifest is required (see --help)");
            2
        }
    };
    ExitCode::from(code)
}
