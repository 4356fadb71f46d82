//! The `rcperm` command line: thin dispatch over the library with stable
//! text/JSON/CSV output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 size-guard violation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::partition::{constructive_cover, partition_number, PartitionCover, PartitionError};
use crate::perm::{PermError, Permutation};
use crate::scoring::{
    total_switches_brute, total_switches_brute_unguarded, total_switches_fast, ScoreError,
    ScoreReport,
};
use crate::search::{enumerate_rc, SearchConfig, SearchError, SearchMode};
use crate::verify::{build_table, run_suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "rcperm",
    version,
    about = "Roller coaster permutations: switch scoring, extremal-set enumeration, monotone partitions, verification"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for enumeration; 0 means all cores.
    #[arg(long, global = true, env = "RC_THREADS", default_value_t = 0)]
    threads: usize,
    /// Directory for cached enumeration results.
    #[arg(long, global = true, env = "RC_CACHE_DIR", default_value = ".rc-cache")]
    cache_dir: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score a permutation's total switches over all subsequences.
    Score(ScoreArgs),
    /// Enumerate RC(n), the maximizers of the total-switches objective.
    Enumerate(EnumerateArgs),
    /// Partition a permutation into monotone pieces.
    Partition(PartitionArgs),
    /// Check the structure theorems, known lists, and table; exit 1 on any failure.
    Verify(VerifyArgs),
    /// Print the n,p_max,bound table as CSV.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct ScoreArgs {
    /// Permutation in compact (2143) or delimited (2,1,4,3) form.
    #[arg(long)]
    perm: String,
    #[arg(long, value_enum, default_value_t = ScoreMethodArg::Fast)]
    method: ScoreMethodArg,
    /// Bypass the brute-force size guard.
    #[arg(long)]
    force: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ScoreMethodArg {
    Fast,
    Brute,
    Both,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// Length of the permutations to search (n ≥ 3).
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bypass the exhaustive-mode size guard.
    #[arg(long)]
    force: bool,
    /// Do not read or write the enumeration cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    /// Exhaustive for n ≤ 9, filtered beyond.
    Auto,
    Exhaustive,
    Filtered,
}

impl ModeArg {
    fn resolve(self, n: u32) -> SearchMode {
        match self {
            ModeArg::Auto => {
                if n <= 9 {
                    SearchMode::Exhaustive
                } else {
                    SearchMode::Filtered
                }
            }
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Filtered => SearchMode::Filtered,
        }
    }
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long)]
    perm: String,
    #[arg(long, value_enum, default_value_t = PartitionMethodArg::Exact)]
    method: PartitionMethodArg,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum PartitionMethodArg {
    Exact,
    Constructive,
    Both,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Verify all n from 3 up to this value.
    #[arg(long = "n-max")]
    n_max: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Emit rows for all n from 3 up to this value.
    #[arg(long = "n-max")]
    n_max: u32,
}

/// A failure with its process exit code.
#[derive(Debug)]
struct CliFailure {
    code: i32,
    message: String,
}

impl CliFailure {
    fn failure(message: impl Into<String>) -> Self {
        CliFailure {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<PermError> for CliFailure {
    fn from(e: PermError) -> Self {
        CliFailure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<ScoreError> for CliFailure {
    fn from(e: ScoreError) -> Self {
        CliFailure {
            code: EXIT_GUARD,
            message: e.to_string(),
        }
    }
}

impl From<SearchError> for CliFailure {
    fn from(e: SearchError) -> Self {
        let code = match e {
            SearchError::InvalidN(_) => EXIT_USAGE,
            SearchError::GuardExceeded { .. } => EXIT_GUARD,
            SearchError::ThreadPool(_) | SearchError::Spill(_) => EXIT_FAILURE,
        };
        CliFailure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PartitionError> for CliFailure {
    fn from(e: PartitionError) -> Self {
        let code = match e {
            PartitionError::OracleGuard { .. } => EXIT_GUARD,
            PartitionError::ConstructionFailure(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        CliFailure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(e: std::io::Error) -> Self {
        CliFailure::failure(e.to_string())
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliFailure> {
    match &cli.command {
        Command::Score(args) => cmd_score(cli, args),
        Command::Enumerate(args) => cmd_enumerate(cli, args),
        Command::Partition(args) => cmd_partition(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Table(args) => cmd_table(cli, args),
    }
}

fn render_score_text(report: &ScoreReport) -> String {
    format!(
        "perm: {}\ntotal_switches: {}\nown_switches: {}\nmethod: {}\n",
        report.perm,
        report.total_switches,
        report.own_switches,
        match report.method {
            crate::scoring::Method::Brute => "brute",
            crate::scoring::Method::Fast => "fast",
        }
    )
}

fn render_scores(format: Format, reports: &[ScoreReport]) -> String {
    match format {
        Format::Text => reports.iter().map(render_score_text).collect(),
        Format::Json => {
            if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0]).expect("serializable")
            } else {
                serde_json::to_string_pretty(reports).expect("serializable")
            }
        }
        Format::Csv => {
            let mut out = String::from("perm,total_switches,own_switches,method\n");
            for r in reports {
                let method = match r.method {
                    crate::scoring::Method::Brute => "brute",
                    crate::scoring::Method::Fast => "fast",
                };
                let _ = writeln!(
                    out,
                    "\"{}\",{},{},{}",
                    r.perm, r.total_switches, r.own_switches, method
                );
            }
            out
        }
    }
}

fn cmd_score(cli: &Cli, args: &ScoreArgs) -> Result<i32, CliFailure> {
    let p: Permutation = args.perm.parse()?;
    let reports = match args.method {
        ScoreMethodArg::Fast => vec![total_switches_fast(&p)?],
        ScoreMethodArg::Brute => vec![if args.force {
            total_switches_brute_unguarded(&p)
        } else {
            total_switches_brute(&p)?
        }],
        ScoreMethodArg::Both => {
            let fast = total_switches_fast(&p)?;
            let brute = if args.force {
                total_switches_brute_unguarded(&p)
            } else {
                total_switches_brute(&p)?
            };
            vec![fast, brute]
        }
    };
    print!("{}", render_scores(cli.format, &reports));
    if args.method == ScoreMethodArg::Both {
        let matches = reports[0].total_switches == reports[1].total_switches;
        if cli.format == Format::Text {
            println!("match: {matches}");
        }
        if !matches {
            return Err(CliFailure::failure(format!(
                "fast ({}) and brute ({}) totals disagree",
                reports[0].total_switches, reports[1].total_switches
            )));
        }
    }
    Ok(EXIT_OK)
}

fn search_config(cli: &Cli, n: u32, mode: SearchMode, force: bool, cache: bool) -> SearchConfig {
    let mut cfg = SearchConfig::new(n, mode);
    cfg.threads = cli.threads;
    cfg.cache_dir = cache.then(|| cli.cache_dir.clone());
    cfg.override_guard = force;
    cfg.progress = n >= 13;
    cfg
}

fn render_rc_set(format: Format, rc: &crate::search::RcSet) -> String {
    match format {
        Format::Text => {
            let mut out = format!(
                "n: {}\nmode: {}\nt_max: {}\ncount: {}\n",
                rc.n,
                rc.mode,
                rc.t_max,
                rc.len()
            );
            for p in &rc.perms {
                let _ = writeln!(out, "{p}");
            }
            out
        }
        Format::Json => rc.to_json(),
        Format::Csv => {
            let mut out = String::from("n,t_max,perm\n");
            for p in &rc.perms {
                let _ = writeln!(out, "{},{},\"{p}\"", rc.n, rc.t_max);
            }
            out
        }
    }
}

fn cmd_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<i32, CliFailure> {
    let mode = args.mode.resolve(args.n);
    let cfg = search_config(cli, args.n, mode, args.force, !args.no_cache);
    let rc = enumerate_rc(&cfg)?;
    let rendered = render_rc_set(cli.format, &rc);
    match &args.out {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(EXIT_OK)
}

fn render_cover_text(label: &str, cover: &PartitionCover) -> String {
    let mut out = format!(
        "perm: {}\nmethod: {label}\nk: {}\n",
        cover.perm,
        cover.piece_count()
    );
    for (i, piece) in cover.pieces.iter().enumerate() {
        let values = cover
            .perm
            .subsequence(&piece.positions)
            .expect("cover positions are valid");
        let _ = writeln!(
            out,
            "piece {}: positions={:?} values={:?} direction={}",
            i + 1,
            piece.positions.positions(),
            values,
            piece.direction
        );
    }
    out
}

fn render_covers(format: Format, covers: &[(&str, PartitionCover)]) -> String {
    match format {
        Format::Text => covers
            .iter()
            .map(|(label, c)| render_cover_text(label, c))
            .collect(),
        Format::Json => {
            if covers.len() == 1 {
                serde_json::to_string_pretty(&covers[0].1).expect("serializable")
            } else {
                let list: Vec<&PartitionCover> = covers.iter().map(|(_, c)| c).collect();
                serde_json::to_string_pretty(&list).expect("serializable")
            }
        }
        Format::Csv => {
            let mut out = String::from("source,k,piece,direction,positions,values\n");
            for (label, cover) in covers {
                for (i, piece) in cover.pieces.iter().enumerate() {
                    let values = cover.perm.subsequence(&piece.positions).expect("valid");
                    let positions: Vec<String> = piece
                        .positions
                        .positions()
                        .iter()
                        .map(|p| p.to_string())
                        .collect();
                    let values: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "{label},{},{},{},\"{}\",\"{}\"",
                        cover.piece_count(),
                        i + 1,
                        piece.direction,
                        positions.join(","),
                        values.join(","),
                    );
                }
            }
            out
        }
    }
}

fn cmd_partition(cli: &Cli, args: &PartitionArgs) -> Result<i32, CliFailure> {
    let p: Permutation = args.perm.parse()?;
    let mut covers: Vec<(&str, PartitionCover)> = Vec::new();
    if matches!(
        args.method,
        PartitionMethodArg::Exact | PartitionMethodArg::Both
    ) {
        let (_, cover) = partition_number(&p);
        covers.push(("exact", cover));
    }
    if matches!(
        args.method,
        PartitionMethodArg::Constructive | PartitionMethodArg::Both
    ) {
        covers.push(("constructive", constructive_cover(&p)?));
    }
    print!("{}", render_covers(cli.format, &covers));
    Ok(EXIT_OK)
}

fn computed_sets(
    cli: &Cli,
    n_max: u32,
    mode: ModeArg,
) -> Result<BTreeMap<u32, crate::search::RcSet>, CliFailure> {
    let mut sets = BTreeMap::new();
    for n in 3..=n_max {
        let cfg = search_config(cli, n, mode.resolve(n), false, true);
        sets.insert(n, enumerate_rc(&cfg)?);
    }
    Ok(sets)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<i32, CliFailure> {
    let sets = if args.n_max < 3 {
        BTreeMap::new()
    } else {
        computed_sets(cli, args.n_max, args.mode)?
    };
    let report = run_suite(&sets);
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        ),
        _ => print!("{}", report.render_text()),
    }
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn cmd_table(cli: &Cli, args: &TableArgs) -> Result<i32, CliFailure> {
    let rows = if args.n_max < 3 {
        Vec::new()
    } else {
        build_table(&computed_sets(cli, args.n_max, ModeArg::Auto)?)
    };
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&rows).expect("serializable")
        ),
        _ => {
            println!("n,p_max,bound");
            for row in &rows {
                println!("{row}");
            }
        }
    }
    Ok(EXIT_OK)
}
