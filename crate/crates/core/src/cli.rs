//! Command-line front end. Data goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 verification or invariant failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construct::{build_and_verify, mo_group_bound, AlgebraParams, BoundReport, FamilyKind, FamilyReport};
use crate::decoder::{simulate_with, write_csv, SimConfig, SimSummary};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{qr_verify_trials, QrTrial};
use crate::matcore::{CMatrix, DEFAULT_TOL};
use crate::mograph::search::{oracle_sweep, OracleCase, EXHAUSTIVE_LIMIT};
use crate::mograph::{analyze, conflict_graph, optimal_partition, ComplexityReport, GroupPartition};
use crate::stbc::{builtin, load_code, CodeBasis, Constellation, BUILTIN_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fastdec", version, about = "Fast-decodability analysis for linear space-time block codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conflict graph, optimal partition and bound checks for a code.
    Analyze {
        #[command(flatten)]
        code: CodeArgs,
        /// Tolerance for the mutual orthogonality test.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// The basis comes from a division algebra.
        #[arg(long)]
        division: bool,
    },
    /// Checks the block structure of R over seeded channels.
    QrVerify {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Allowed off-block magnitude relative to the Frobenius norm of T.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Builds and verifies an explicit matrix family.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Upper bounds on the number of groups for n x n codes.
    Bounds {
        #[arg(long)]
        n: u64,
        /// Index of the algebra; its degree is n.
        #[arg(long)]
        ind: Option<u64>,
        #[arg(long)]
        division: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Monte Carlo comparison of the fast and brute-force decoders.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Noise variance N0.
        #[arg(long)]
        n0: f64,
        #[arg(long)]
        seed: u64,
        /// Size q of the PAM constellation {-(q-1), ..., q-1}.
        #[arg(long, default_value_t = 4)]
        constellation: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write per-trial rows here.
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Also write the JSON summary here.
        #[arg(long)]
        out_summary: Option<PathBuf>,
        /// Run trials on a single thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Compares branch-and-bound against exhaustive enumeration on random graphs.
    Oracle {
        #[arg(long, default_value_t = 500)]
        graphs: usize,
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CodeArgs {
    /// Built-in code: alamouti or silver.
    #[arg(long)]
    builtin: Option<String>,
    /// Code basis JSON file.
    #[arg(long)]
    basis: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PartitionArgs {
    /// Partition JSON file (1-based indices).
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Use the optimal partition.
    #[arg(long)]
    auto: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    U,
    Anticommute,
    Mo,
    Hre,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    code: Option<&'a str>,
    n: usize,
    l: usize,
    conflict_edges: Vec<[usize; 2]>,
    report: &'a ComplexityReport,
}

#[derive(Serialize)]
struct QrOutput<'a> {
    code: Option<&'a str>,
    partition: &'a GroupPartition,
    tol: f64,
    pass: bool,
    trials: Vec<QrTrial>,
}

#[derive(Serialize)]
struct ConstructOutput {
    family: String,
    parameter: usize,
    report: FamilyReport,
    members: Vec<CMatrix>,
}

#[derive(Serialize)]
struct OracleOutput {
    graphs: usize,
    max_vertices: usize,
    seed: u64,
    agreements: usize,
    disagreements: Vec<OracleCase>,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Malformed(_) | Error::Io(_) | Error::InvalidParameter(_) | Error::SearchTooLarge { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

/// Parses `args` (program name first) and runs the chosen subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn load_basis(args: &CodeArgs) -> Result<CodeBasis> {
    match (&args.builtin, &args.basis) {
        (Some(name), _) => builtin(name).ok_or_else(|| {
            Error::InvalidParameter(format!("unknown built-in code {name:?}; choose one of {}", BUILTIN_NAMES.join(", ")))
        }),
        (None, Some(path)) => load_code(path),
        (None, None) => Err(Error::InvalidParameter("a code is required".into())),
    }
}

fn load_partition(args: &PartitionArgs, basis: &CodeBasis) -> Result<GroupPartition> {
    match &args.partition {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let p: GroupPartition = serde_json::from_str(&text)?;
            p.check_covers(basis.dim())?;
            Ok(p)
        }
        None => {
            let report = optimal_partition(&conflict_graph(basis, DEFAULT_TOL));
            report
                .partition
                .ok_or_else(|| Error::Verification("the code is not fast decodable, so no partition exists".into()))
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes)?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Analyze { code, tol, division } => {
            let basis = load_basis(&code)?;
            let report = analyze(&basis, tol, division);
            let edges = conflict_graph(&basis, tol).edges().into_iter().map(|(a, b)| [a + 1, b + 1]).collect();
            emit_json(out, &AnalyzeOutput { code: basis.name(), n: basis.n(), l: basis.l(), conflict_edges: edges, report: &report })?;
            for check in report.bound_checks.iter().filter(|c| !c.pass) {
                eprintln!("bound check {} failed: {} {} {}", check.name, check.lhs, check.relation, check.rhs);
            }
            Ok(report.all_checks_pass())
        }
        Command::QrVerify { code, partition, seed, trials, tol } => {
            let basis = load_basis(&code)?;
            let partition = load_partition(&partition, &basis)?;
            partition.check_against(&conflict_graph(&basis, DEFAULT_TOL))?;
            let results = qr_verify_trials(&basis, &partition, seed, trials, tol, Execution::default())?;
            let pass = results.iter().all(|t| t.pass);
            emit_json(out, &QrOutput { code: basis.name(), partition: &partition, tol, pass, trials: results })?;
            Ok(pass)
        }
        Command::Construct { family, ell, t } => {
            let (kind, name, param) = match family {
                Family::U => (FamilyKind::U, "u", ell),
                Family::Anticommute => (FamilyKind::Anticommute, "anticommute", ell),
                Family::Mo => (FamilyKind::Mo, "mo", ell),
                Family::Hre => (FamilyKind::Hre, "hre", t.or(ell)),
            };
            let param = param.ok_or_else(|| {
                Failure::Usage(format!("family {name} needs --{}", if kind == FamilyKind::Hre { "t" } else { "ell" }))
            })?;
            if param > 10 {
                return Err(Failure::Usage(format!("parameter {param} is too large; matrices would exceed 2048x2048")));
            }
            let (fam, report) = build_and_verify(kind, param)?;
            let pass = report.pass();
            emit_json(out, &ConstructOutput { family: name.into(), parameter: param, report, members: fam.members() })?;
            Ok(pass)
        }
        Command::Bounds { n, ind, division, format } => {
            let params = match (ind, division) {
                (_, true) => Some(AlgebraParams::new(n, n, true)?),
                (Some(i), false) => Some(AlgebraParams::new(n, i, false)?),
                (None, false) => None,
            };
            let report = mo_group_bound(n, params.as_ref())?;
            match format {
                Format::Json => emit_json(out, &report)?,
                Format::Table => write_bounds_table(out, n, division).map_err(Failure::from)?,
                Format::Csv => return Err(Failure::Usage("bounds supports --format json or table".into())),
            }
            Ok(true)
        }
        Command::Simulate {
            code,
            partition,
            trials,
            n0,
            seed,
            constellation,
            format,
            out_csv,
            out_summary,
            sequential,
        } => {
            let basis = load_basis(&code)?;
            let partition = load_partition(&partition, &basis)?;
            let config = SimConfig::new(trials, n0, seed, Constellation::pam(constellation).map_err(usage)?)?;
            let exec = if sequential { Execution::Sequential } else { Execution::default() };
            let started = Instant::now();
            let sim = simulate_with(&basis, &partition, &config, exec)?;
            eprintln!("simulated {trials} trials in {:.3} s", started.elapsed().as_secs_f64());
            let summary_json = summary_bytes(&sim.summary)?;
            let mut csv_bytes = Vec::new();
            write_csv(&sim.records, &mut csv_bytes)?;
            if let Some(path) = &out_csv {
                write_file(path, &csv_bytes)?;
            }
            if let Some(path) = &out_summary {
                write_file(path, &summary_json)?;
            }
            match format {
                Format::Json => out.write_all(&summary_json).map_err(Error::from)?,
                Format::Csv => out.write_all(&csv_bytes).map_err(Error::from)?,
                Format::Table => return Err(Failure::Usage("simulate supports --format json or csv".into())),
            }
            if sim.summary.agreement_rate < 1.0 {
                eprintln!("fast and brute-force decoders disagreed");
            }
            Ok(sim.summary.agreement_rate == 1.0)
        }
        Command::Oracle { graphs, max_vertices, seed } => {
            if !(2..=EXHAUSTIVE_LIMIT).contains(&max_vertices) {
                return Err(Failure::Usage(format!("--max-vertices must lie in 2..={EXHAUSTIVE_LIMIT}")));
            }
            let cases = oracle_sweep(graphs, max_vertices, seed, Execution::default());
            let agreements = cases.iter().filter(|c| c.agree).count();
            let disagreements: Vec<OracleCase> = cases.into_iter().filter(|c| !c.agree).collect();
            let pass = disagreements.is_empty();
            emit_json(out, &OracleOutput { graphs, max_vertices, seed, agreements, disagreements })?;
            Ok(pass)
        }
    }
}

fn usage(e: Error) -> Error {
    Error::InvalidParameter(e.to_string())
}

fn summary_bytes(summary: &SimSummary) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(summary)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn write_bounds_table(out: &mut dyn Write, max_n: u64, division: bool) -> Result<()> {
    writeln!(out, "{:>4} {:>4} {:>6} {:>5} {:>6} {:>5} {:>5} {:>4}", "n", "nu2", "r_even", "r_odd", "g_even", "g_odd", "g_max", "hre")?;
    for n in 1..=max_n {
        let params = division.then(|| AlgebraParams::division(n));
        let BoundReport { nu2_n, r_even, r_odd, g_even, g_odd, g_max, hre, .. } = mo_group_bound(n, params.as_ref())?;
        writeln!(out, "{n:>4} {nu2_n:>4} {r_even:>6} {r_odd:>5} {g_even:>6} {g_odd:>5} {g_max:>5} {hre:>4}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (std::result::Result<bool, String>, String) {
        let cli = Cli::try_parse_from(std::iter::once("fastdec").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let res = execute(cli.command, &mut buf).map_err(|f| match f {
            Failure::Usage(m) => format!("usage: {m}"),
            Failure::Check(m) => format!("check: {m}"),
        });
        (res, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn analyze_silver() {
        let (res, out) = run_capture(&["analyze", "--builtin", "silver"]);
        assert_eq!(res, Ok(true));
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["report"]["exponent"], 5);
        assert!(v["report"]["g_group"].is_null());
    }

    #[test]
    fn bounds_division() {
        let (res, out) = run_capture(&["bounds", "--n", "4", "--division"]);
        assert_eq!(res, Ok(true));
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["g_max"], 4);
        let (_, table) = run_capture(&["bounds", "--n", "8", "--format", "table"]);
        assert_eq!(table.lines().count(), 9);
    }

    #[test]
    fn construct_and_usage_errors() {
        let (res, out) = run_capture(&["construct", "--family", "anticommute", "--ell", "2"]);
        assert_eq!(res, Ok(true));
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["members"].as_array().unwrap().len(), 7);
        let (res, _) = run_capture(&["construct", "--family", "mo"]);
        assert!(res.unwrap_err().starts_with("usage"));
        let (res, _) = run_capture(&["analyze", "--builtin", "golden"]);
        assert!(res.unwrap_err().starts_with("usage"));
    }

    #[test]
    fn parse_errors_exit_two() {
        assert_eq!(run(["fastdec", "simulate", "--builtin", "silver", "--auto", "--n0", "0"]), EXIT_USAGE);
        assert_eq!(run(["fastdec", "frobnicate"]), EXIT_USAGE);
    }
}
