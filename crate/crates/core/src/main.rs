//! Command line driver: analyze a single type, batch a rank catalogue,
//! list types, or print supersingular primes.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use k3ss::dynkin::{self, DynkinType};
use k3ss::overlat::Budget;
use k3ss::pipeline::{self, AnalyzeOptions, ReportStatus};

#[derive(Parser)]
#[command(name = "k3ss", version, about = "Supersingular K3 primes of rank-20 Dynkin types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one Dynkin type (e.g. "D7+A11+2A1")
    Analyze {
        r#type: String,
        /// Also list the supersingular primes up to this bound
        #[arg(long)]
        primes_up_to: Option<u64>,
        /// Emit the JSON report
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Emit the text report (default)
        #[arg(long)]
        text: bool,
        /// Search node budget
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Search timeout in seconds (0 disables)
        #[arg(long, default_value_t = 60)]
        timeout: u64,
        /// Allow ranks other than 20
        #[arg(long)]
        any_rank: bool,
    },
    /// Analyze every type of a rank and summarize
    Batch {
        #[arg(long)]
        rank: u32,
        /// Write one JSON report per line to this file
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Write a CSV summary to this file
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 60)]
        timeout: u64,
    },
    /// List the Dynkin types of a rank
    ListTypes {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        count_only: bool,
    },
    /// Print the supersingular primes of a type up to a bound
    Primes {
        r#type: String,
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 60)]
        timeout: u64,
        #[arg(long)]
        any_rank: bool,
    },
}

fn make_budget(nodes: u64, timeout: u64) -> Budget {
    Budget {
        max_nodes: nodes,
        max_seconds: if timeout == 0 { None } else { Some(timeout) },
    }
}

fn parse_type(s: &str) -> Result<DynkinType, String> {
    s.parse::<DynkinType>().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Analyze {
            r#type,
            primes_up_to,
            json,
            text: _,
            budget,
            timeout,
            any_rank,
        } => {
            let ty = parse_type(&r#type)?;
            let options = AnalyzeOptions {
                budget: make_budget(budget, timeout),
                primes_up_to,
                allow_any_rank: any_rank,
            };
            let report = pipeline::analyze(&ty, &options).map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&pipeline::report_to_json(&report))
                        .expect("report serializes")
                );
            } else {
                print!("{}", pipeline::report_to_text(&report));
            }
            Ok(0)
        }
        Command::Batch {
            rank,
            out,
            csv,
            jobs,
            budget,
            timeout,
        } => {
            if let Some(k) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global()
                    .map_err(|e| e.to_string())?;
            }
            let options = AnalyzeOptions {
                budget: make_budget(budget, timeout),
                primes_up_to: None,
                allow_any_rank: rank != 20,
            };
            let result = pipeline::batch(rank, &options);
            if let Some(path) = out {
                let mut f = std::fs::File::create(&path)
                    .map_err(|e| format!("cannot write {}: {}", path.display(), e))?;
                for r in result.reports.iter().flatten() {
                    writeln!(f, "{}", pipeline::report_to_json(r)).map_err(|e| e.to_string())?;
                }
            }
            if let Some(path) = csv {
                let mut f = std::fs::File::create(&path)
                    .map_err(|e| format!("cannot write {}: {}", path.display(), e))?;
                writeln!(f, "{}", pipeline::CSV_HEADER).map_err(|e| e.to_string())?;
                for r in result.reports.iter().flatten() {
                    writeln!(f, "{}", pipeline::report_to_csv_row(r)).map_err(|e| e.to_string())?;
                }
            }
            let s = &result.summary;
            println!("total types:            {}", s.total);
            println!("non-square disc:        {}", s.non_square_disc);
            println!("completed:              {}", s.completed);
            println!("truncated:              {}", s.truncated);
            println!("non-empty (completed):  {}", s.non_empty_completed);
            for r in &result.reports {
                if let Err(e) = r {
                    println!("error: {}", e);
                }
            }
            Ok(if s.truncated > 0 { 3 } else { 0 })
        }
        Command::ListTypes { rank, count_only } => {
            let types = dynkin::enumerate_types(rank);
            if count_only {
                println!("{}", types.len());
            } else {
                for t in &types {
                    println!("{}", t);
                }
            }
            Ok(0)
        }
        Command::Primes {
            r#type,
            max,
            budget,
            timeout,
            any_rank,
        } => {
            let ty = parse_type(&r#type)?;
            let options = AnalyzeOptions {
                budget: make_budget(budget, timeout),
                primes_up_to: Some(max),
                allow_any_rank: any_rank,
            };
            let report = pipeline::analyze(&ty, &options).map_err(|e| e.to_string())?;
            for p in report.primes.as_deref().unwrap_or(&[]) {
                println!("{}", p);
            }
            if report.status == ReportStatus::Truncated {
                eprintln!("warning: search truncated; the list is a lower bound");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            // usage-level problems (bad type string, bad paths) exit 1;
            // anything else would have panicked and exited 101 -> treat as 2
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}
