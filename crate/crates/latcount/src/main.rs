use clap::{Parser, Subcommand, ValueEnum};
use latcount::counter::{count, Instance};
use latcount::error::Error;
use latcount::io::{parse_instance, report_to_json, ParsedInstance};
use latcount::matching::{
    adjacency_matrix, count_b_matchings, count_perfect_matchings,
    count_perfect_matchings_uniform, Hypergraph,
};
use latcount::oracle::{count_bruteforce, count_dp, enumerate_matchings_bruteforce, OracleConfig};
use latcount::partite::{count_partite, find_stable_set, verify_stable_set};
use latcount::report::CountReport;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "latcount",
    about = "Exact counting of integer points in Ax = y, x >= 0, and of hypergraph (b-)matchings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Instance file (JSON); standard input when omitted. The bench
    /// subcommand takes a directory instead.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Also run the DP and brute-force oracles (when within caps) and fail
    /// on any mismatch.
    #[arg(long, global = true)]
    check: bool,
    /// Worker count for the outer sweep; defaults to LATCOUNT_THREADS or 1.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Emit the scaled f̄ coefficients and the reduction steps.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Plain N^n sweep.
    Count {
        /// Switch to the stable-set path when a stable set of size >= 2 is
        /// found and N >= 2.
        #[arg(long)]
        auto: bool,
    },
    /// Stable-set factorized sweep.
    Partite {
        /// Comma-separated 1-based row indices forming the stable set.
        #[arg(long, value_name = "ROWS")]
        stable_set: Option<String>,
        /// Find a stable set greedily (default when no set is given).
        #[arg(long)]
        auto: bool,
    },
    /// Perfect matchings of a hypergraph.
    Match {
        /// Use the binomial closed form for an l-uniform hypergraph.
        #[arg(long, value_name = "L")]
        uniform: Option<usize>,
    },
    /// Perfect b-matchings of a hypergraph with demands.
    Bmatch,
    /// Reference oracles.
    Oracle {
        #[arg(long, conflicts_with = "brute")]
        dp: bool,
        #[arg(long)]
        brute: bool,
    },
    /// Run every instance in a directory and print a timing table.
    Bench,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::StructuralViolation(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn threads_from(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| {
            std::env::var("LATCOUNT_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1)
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
            Ok(text)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    if matches!(cli.command, Command::Bench) {
        return bench(cli);
    }
    let threads = threads_from(cli);
    let parsed = parse_instance(&read_input(&cli.input)?)?;
    let report = match &cli.command {
        Command::Count { auto } => {
            let inst = matrix_of(&parsed)?;
            if *auto {
                let sset = find_stable_set(&inst);
                if sset.size() >= 2 && inst.modulus() >= 2 {
                    count_partite(&inst, &sset, threads)?
                } else {
                    count(&inst, threads)?
                }
            } else {
                count(&inst, threads)?
            }
        }
        Command::Partite { stable_set, auto } => {
            let inst = matrix_of(&parsed)?;
            let sset = if let Some(spec) = stable_set {
                let rows = parse_index_list(spec, inst.n())?;
                verify_stable_set(&inst, &rows)?
            } else if !auto {
                match hint_of(&parsed) {
                    Some(rows) => verify_stable_set(&inst, rows)?,
                    None => find_stable_set(&inst),
                }
            } else {
                find_stable_set(&inst)
            };
            if sset.size() == 0 {
                count(&inst, threads)?
            } else {
                count_partite(&inst, &sset, threads)?
            }
        }
        Command::Match { uniform } => {
            let h = hypergraph_of(&parsed)?;
            match uniform {
                Some(l) => count_perfect_matchings_uniform(h, *l, threads)?,
                None => count_perfect_matchings(h, threads)?,
            }
        }
        Command::Bmatch => count_b_matchings(hypergraph_of(&parsed)?, threads)?,
        Command::Oracle { dp, brute } => {
            let cfg = OracleConfig::default();
            match (&parsed, dp, brute) {
                (_, false, false) => {
                    return Err(Error::InvalidArgument(
                        "oracle needs --dp or --brute".into(),
                    ))
                }
                (ParsedInstance::Hyper { hypergraph, .. }, false, true) => {
                    enumerate_matchings_bruteforce(hypergraph, &cfg)?
                }
                _ => {
                    let inst = matrix_of(&parsed)?;
                    if *dp {
                        count_dp(&inst, &cfg)?
                    } else {
                        count_bruteforce(&inst, &cfg)?
                    }
                }
            }
        }
        Command::Bench => unreachable!(),
    };
    if cli.check {
        if let Some(mismatch) = cross_check(&parsed, &report)? {
            eprintln!("check mismatch: {mismatch}");
            emit(cli, threads, &report);
            return Ok(ExitCode::from(3));
        }
    }
    emit(cli, threads, &report);
    Ok(ExitCode::SUCCESS)
}

fn matrix_of(parsed: &ParsedInstance) -> Result<Instance, Error> {
    match parsed {
        ParsedInstance::Matrix { instance, .. } => Ok(instance.clone()),
        ParsedInstance::Hyper { hypergraph, .. } => adjacency_matrix(hypergraph),
    }
}

fn hint_of(parsed: &ParsedInstance) -> Option<&[usize]> {
    match parsed {
        ParsedInstance::Matrix { stable_set, .. } => stable_set.as_deref(),
        ParsedInstance::Hyper { stable_set, .. } => stable_set.as_deref(),
    }
}

fn hypergraph_of(parsed: &ParsedInstance) -> Result<&Hypergraph, Error> {
    match parsed {
        ParsedInstance::Hyper { hypergraph, .. } => Ok(hypergraph),
        ParsedInstance::Matrix { .. } => Err(Error::InvalidArgument(
            "this subcommand needs a hypergraph instance (\"n\"/\"edges\")".into(),
        )),
    }
}

fn parse_index_list(spec: &str, n: usize) -> Result<Vec<usize>, Error> {
    spec.split(',')
        .map(|part| {
            let v: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad row index {part:?}")))?;
            if v == 0 || v > n {
                return Err(Error::Parse(format!("row index {v} out of range 1..={n}")));
            }
            Ok(v - 1)
        })
        .collect()
}

/// Runs the available oracles; returns a description of the first mismatch.
fn cross_check(
    parsed: &ParsedInstance,
    report: &CountReport,
) -> Result<Option<String>, Error> {
    let cfg = OracleConfig::default();
    let mut results: Vec<(&str, latcount::Int)> = Vec::new();
    match parsed {
        ParsedInstance::Hyper { hypergraph, .. } if hypergraph.demands().is_none() => {
            match enumerate_matchings_bruteforce(hypergraph, &cfg) {
                Ok(r) => results.push(("matching brute force", r.count)),
                Err(Error::ResourceLimit { .. }) => {
                    eprintln!("check: matching brute force skipped (over cap)")
                }
                Err(e) => return Err(e),
            }
        }
        _ => {
            let inst = matrix_of(parsed)?;
            match count_dp(&inst, &cfg) {
                Ok(r) => results.push(("dp oracle", r.count)),
                Err(Error::ResourceLimit { .. }) => eprintln!("check: dp oracle skipped (over cap)"),
                Err(e) => return Err(e),
            }
            match count_bruteforce(&inst, &cfg) {
                Ok(r) => results.push(("brute-force oracle", r.count)),
                Err(Error::ResourceLimit { .. }) => {
                    eprintln!("check: brute-force oracle skipped (over cap)")
                }
                Err(e) => return Err(e),
            }
        }
    }
    for (name, value) in results {
        if value != report.count {
            return Ok(Some(format!(
                "{name} found {value}, main algorithm found {}",
                report.count
            )));
        }
    }
    Ok(None)
}

fn emit(cli: &Cli, threads: usize, report: &CountReport) {
    match cli.format {
        Format::Json => {
            println!("{}", report_to_json(report, threads, cli.trace));
        }
        Format::Text => {
            println!("{}", report.count);
            if cli.trace {
                if let Some(coeffs) = &report.scaled_coeffs {
                    let rendered: Vec<String> =
                        coeffs.iter().map(|c| c.to_string()).collect();
                    eprintln!("scaled coefficients: [{}]", rendered.join(", "));
                    for step in &report.trace {
                        eprintln!(
                            "reduction: subtract {} at multiples of {}",
                            step.subtracted, step.index
                        );
                    }
                }
            }
        }
    }
}

fn bench(cli: &Cli) -> Result<ExitCode, Error> {
    let dir = cli
        .input
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("bench needs --input DIR".into()))?;
    let threads = threads_from(cli);
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    println!("{:<32} {:>16} {:>10} {:>12}", "instance", "count", "method", "ms");
    for path in files {
        let report = bench_one(&path, threads)?;
        println!(
            "{:<32} {:>16} {:>10} {:>12.3}",
            path.file_name().unwrap_or_default().to_string_lossy(),
            report.count,
            report.method.as_str(),
            report.elapsed.as_secs_f64() * 1e3
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn bench_one(path: &Path, threads: usize) -> Result<CountReport, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    match parse_instance(&text)? {
        ParsedInstance::Matrix { instance, .. } => count(&instance, threads),
        ParsedInstance::Hyper { hypergraph, .. } => {
            if hypergraph.demands().is_some() {
                count_b_matchings(&hypergraph, threads)
            } else {
                count_perfect_matchings(&hypergraph, threads)
            }
        }
    }
}
