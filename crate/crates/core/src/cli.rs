//! The `search-schemes` command line.
//!
//! Exit codes: 0 success, 1 data error (bad input file, infeasible problem,
//! uncovered patterns in `validate`), 2 usage error, 3 optimization stopped
//! by a budget before optimality was proven.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::index::{Alphabet, BidirectionalIndex, DEFAULT_SA_RATE};
use crate::optimizer::{build_mip, export_lp, solve_exact, MipOptions, ProblemSpec, ProofStatus, SolveOptions};
use crate::partition::Partition;
use crate::scheme::{
    builtin, builtin_names, bundled_optimal, is_feasible, parse_scheme, serialize_scheme, SearchScheme,
};
use crate::search::{reverse_complement, search_strata, Distance, PreparedScheme, SearchResult};
use crate::seqio;
use crate::trie::count_edges_per_search;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    /// Budget exhausted; the best scheme found (if any) was still written.
    #[error("{0}")]
    Budget(String),
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Io(_) => 1,
            CliError::Budget(_) => 3,
        }
    }
}

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "search-schemes",
    version,
    about = "Search schemes over a bidirectional FM-index"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Index a FASTA file.
    BuildIndex(BuildIndexArgs),
    /// Search reads with a scheme and write matches as TSV.
    Search(SearchArgs),
    /// Print the trie edge count of each search and the total.
    Eval(EvalArgs),
    /// Check a scheme's searches and its coverage of mismatch patterns.
    Validate(ValidateArgs),
    /// Find an optimal scheme.
    Optimize(OptimizeArgs),
    /// Write the integer program for an optimal-scheme problem in LP format.
    GenMip(GenMipArgs),
    /// Compare schemes on a read set; one CSV row per scheme.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct BuildIndexArgs {
    /// FASTA input; records are concatenated with separators.
    fasta: PathBuf,
    #[arg(short = 'o', long)]
    output: PathBuf,
    /// Suffix array sampling rate.
    #[arg(long, default_value_t = DEFAULT_SA_RATE)]
    sa_rate: usize,
    #[command(flatten)]
    alphabet: AlphabetArgs,
}

#[derive(Debug, Args)]
struct AlphabetArgs {
    /// Symbols in code order (case-insensitive).
    #[arg(long, default_value = "ACGT")]
    alphabet: String,
    /// Byte for the never-matching wildcard class.
    #[arg(long, default_value = "N")]
    wildcard: char,
    /// Map any byte outside the alphabet to the wildcard instead of failing.
    #[arg(long)]
    unknown_as_wildcard: bool,
}

impl AlphabetArgs {
    fn build(&self) -> Result<Alphabet, CliError> {
        if !self.wildcard.is_ascii() {
            return Err(CliError::Usage("--wildcard must be an ASCII character".into()));
        }
        Alphabet::new(self.alphabet.as_bytes(), Some(self.wildcard as u8)).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistanceArg {
    Hamming,
    Edit,
}

impl From<DistanceArg> for Distance {
    fn from(d: DistanceArg) -> Self {
        match d {
            DistanceArg::Hamming => Distance::Hamming,
            DistanceArg::Edit => Distance::Edit,
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    index: PathBuf,
    /// FASTA or FASTQ reads.
    #[arg(long)]
    reads: PathBuf,
    /// Scheme file, `builtin:NAME` or `backtracking:K[:P]`.
    #[arg(long)]
    scheme: String,
    /// Maximum number of errors.
    #[arg(short = 'K')]
    max_errors: u32,
    #[arg(long, value_enum, default_value_t = DistanceArg::Hamming)]
    distance: DistanceArg,
    /// Report everything within `s` errors of the best match only.
    #[arg(long, value_name = "S")]
    strata: Option<u32>,
    /// Also search the reverse complement (strand `-`).
    #[arg(long)]
    rc: bool,
    /// TSV output (default: stdout).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Per-read extension step CSV, including wall-clock time.
    #[arg(long, value_name = "CSV")]
    stats: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Map read bytes outside the alphabet to the wildcard instead of failing.
    #[arg(long)]
    unknown_as_wildcard: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Scheme file, `builtin:NAME` or `backtracking:K[:P]`; repeatable.
    #[arg(long, required = true)]
    scheme: Vec<String>,
    /// Read length (default: the scheme file's `R`).
    #[arg(short = 'R')]
    read_len: Option<usize>,
    #[arg(long, default_value_t = 4)]
    sigma: u32,
    /// CSV rows `scheme_id,search_idx,edges`; the last row per scheme has `search_idx = total`.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    scheme: String,
    /// Read length for piece-length-aware coverage (default: the file's `R`,
    /// else pieces long enough to hold `K` errors each).
    #[arg(short = 'R')]
    read_len: Option<usize>,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    #[arg(short = 'K')]
    max_errors: u32,
    #[arg(short = 'P')]
    pieces: usize,
    #[arg(short = 'R')]
    read_len: usize,
    #[arg(long, default_value_t = 4)]
    sigma: u32,
    /// Maximum number of searches.
    #[arg(short = 'S', long)]
    max_searches: usize,
}

impl ProblemArgs {
    fn spec(&self) -> Result<ProblemSpec, CliError> {
        ProblemSpec::new(
            self.max_errors,
            self.read_len,
            self.pieces,
            self.max_searches,
            self.sigma,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Solve at this read length (default K*P) and re-price at -R.
    #[arg(long = "solve-at-r", value_name = "R", num_args = 0..=1, default_missing_value = "0")]
    solve_at_r: Option<usize>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long)]
    no_dominance: bool,
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long)]
    no_warm_start: bool,
    /// Stop after the heuristic start.
    #[arg(long)]
    heuristic_only: bool,
    /// Scheme JSON output (default: stdout).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Also print timings and the incumbent history.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Args)]
struct GenMipArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(short = 'o', long)]
    output: PathBuf,
    /// Leave out the symmetry-breaking rows.
    #[arg(long)]
    no_symmetry: bool,
    /// Leave out the read-end strengthening rows.
    #[arg(long)]
    no_strengthen: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    reads: PathBuf,
    /// Schemes to compare; repeatable (default: the bundled optimal scheme
    /// for K with P = K+1, and backtracking).
    #[arg(long)]
    scheme: Vec<String>,
    #[arg(short = 'K')]
    max_errors: u32,
    #[arg(long, value_enum, default_value_t = DistanceArg::Hamming)]
    distance: DistanceArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Add an `elapsed_ms` column.
    #[arg(long)]
    timing: bool,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long)]
    unknown_as_wildcard: bool,
}

/// Runs the command line with the process's stdout and stderr and returns the exit code.
pub fn run(argv: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with(
    argv: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::BuildIndex(a) => build_index(a, out),
        Command::Search(a) => search(a, out, err),
        Command::Eval(a) => eval(a, out),
        Command::Validate(a) => validate(a, out),
        Command::Optimize(a) => optimize(a, out, err),
        Command::GenMip(a) => gen_mip(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Resolves `builtin:NAME`, `backtracking:K[:P]` or a scheme file path.
fn load_scheme(spec: &str) -> Result<(String, SearchScheme), CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin(name).map(|s| (name.to_string(), s)).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown builtin scheme `{name}` (available: {})",
                builtin_names().collect::<Vec<_>>().join(", ")
            ))
        });
    }
    if let Some(rest) = spec.strip_prefix("backtracking:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad backtracking spec `{spec}`")))
        };
        let (k, p) = match parts.as_slice() {
            [k] => (parse(k)?, 1),
            [k, p] => (parse(k)?, parse(p)?),
            _ => return Err(CliError::Usage(format!("bad backtracking spec `{spec}`"))),
        };
        if p == 0 {
            return Err(CliError::Usage("backtracking needs at least one piece".into()));
        }
        return Ok((
            format!("backtracking_k{k}_p{p}"),
            SearchScheme::backtracking(k as u32, p),
        ));
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{spec}: {e}")))?;
    let scheme = parse_scheme(&text).map_err(|e| CliError::Data(format!("{spec}: {e}")))?;
    let id = path
        .file_stem()
        .map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((id, scheme))
}

fn open_output(path: Option<&Path>, out: &mut dyn Write, body: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Data(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(body)?),
    }
}

fn build_index(a: BuildIndexArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let alphabet = a.alphabet.build()?;
    if a.sa_rate == 0 {
        return Err(CliError::Usage("--sa-rate must be at least 1".into()));
    }
    let records = seqio::read_path(&a.fasta).map_err(|e| CliError::Data(format!("{}: {e}", a.fasta.display())))?;
    let fill = a.alphabet.wildcard as u8;
    let records = records.into_iter().map(|r| {
        let seq = if a.alphabet.unknown_as_wildcard {
            r.seq
                .iter()
                .map(|&b| if alphabet.encode_byte(b).is_some() { b } else { fill })
                .collect()
        } else {
            r.seq
        };
        (r.id, seq)
    });
    let records: Vec<(String, Vec<u8>)> = records.collect();
    let ix = BidirectionalIndex::from_records(records, alphabet, a.sa_rate).map_err(data)?;
    ix.save(&a.output)
        .map_err(|e| CliError::Data(format!("{}: {e}", a.output.display())))?;
    writeln!(
        out,
        "indexed {} records, {} symbols (sigma = {}, sa rate = {}) into {}",
        ix.records().len(),
        ix.text_len(),
        ix.sigma(),
        ix.sa_rate(),
        a.output.display()
    )?;
    Ok(())
}

fn encode_reads(
    ix: &BidirectionalIndex,
    path: &Path,
    unknown_as_wildcard: bool,
) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let alphabet = ix.alphabet();
    seqio::read_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        .into_iter()
        .map(|r| {
            let codes = if unknown_as_wildcard {
                r.seq
                    .iter()
                    .map(|&b| alphabet.encode_byte(b).unwrap_or(alphabet.wildcard_code()))
                    .collect()
            } else {
                alphabet
                    .encode(&r.seq)
                    .map_err(|e| CliError::Data(format!("read {}: {e}", r.id)))?
            };
            Ok((r.id, codes))
        })
        .collect()
}

/// Applies `f` to `0..n`, on `threads` workers when more than one; keeps order.
fn map_ordered<T: Send>(threads: usize, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>, CliError> {
    if threads <= 1 {
        return Ok((0..n).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(data)?;
    Ok(pool.install(|| (0..n).into_par_iter().map(f).collect()))
}

/// Scheme used for strata levels other than the requested one.
fn stratum_scheme(k: u32) -> SearchScheme {
    if k == 0 {
        return SearchScheme::backtracking(0, 1);
    }
    bundled_optimal(k, k as usize + 1).unwrap_or_else(|| SearchScheme::backtracking(k, 1))
}

struct ReadHits {
    strand: char,
    result: SearchResult,
    elapsed: Duration,
}

fn search(a: SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if a.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let (_, scheme) = load_scheme(&a.scheme)?;
    if a.max_errors > scheme.max_errors {
        return Err(CliError::Usage(format!(
            "-K {} exceeds the scheme's K = {}",
            a.max_errors, scheme.max_errors
        )));
    }
    if let Some(s) = a.strata {
        if s > a.max_errors {
            return Err(CliError::Usage(format!("--strata {s} exceeds -K {}", a.max_errors)));
        }
    }
    let ix = BidirectionalIndex::load(&a.index).map_err(|e| CliError::Data(format!("{}: {e}", a.index.display())))?;
    let reads = encode_reads(&ix, &a.reads, a.unknown_as_wildcard)?;
    let distance: Distance = a.distance.into();

    let mut prepared: BTreeMap<usize, PreparedScheme> = BTreeMap::new();
    let mut strata_schemes: BTreeMap<u32, SearchScheme> = BTreeMap::new();
    if a.strata.is_some() {
        strata_schemes = (0..a.max_errors).map(|k| (k, stratum_scheme(k))).collect();
        strata_schemes.insert(a.max_errors, scheme.clone());
    }
    for (id, r) in &reads {
        if let std::collections::btree_map::Entry::Vacant(e) = prepared.entry(r.len()) {
            let p = PreparedScheme::new(&scheme, r.len(), a.max_errors)
                .map_err(|e| CliError::Data(format!("read {id}: {e}")))?;
            if !p.is_feasible() {
                writeln!(
                    err,
                    "warning: the scheme does not cover every mismatch pattern for reads of length {}; matches may be missing",
                    r.len()
                )?;
            }
            e.insert(p);
        }
    }

    let run_read = |read: &[u8]| -> SearchResult {
        match a.strata {
            Some(s) => search_strata(&ix, read, &strata_schemes, a.max_errors, s, distance)
                .expect("schemes prepared for every level"),
            None => prepared[&read.len()].run(&ix, read, distance),
        }
    };
    let results = map_ordered(a.threads, reads.len(), |i| {
        let read = &reads[i].1;
        let mut hits = Vec::with_capacity(2);
        let t = Instant::now();
        let result = run_read(read);
        hits.push(ReadHits {
            strand: '+',
            result,
            elapsed: t.elapsed(),
        });
        if a.rc {
            let t = Instant::now();
            let result = run_read(&reverse_complement(&ix, read));
            hits.push(ReadHits {
                strand: '-',
                result,
                elapsed: t.elapsed(),
            });
        }
        hits
    })?;

    let mut tsv = String::from("read_id\trecord\tposition\tstrand\terrors\tsearch_idx\n");
    for ((id, _), hits) in reads.iter().zip(&results) {
        for h in hits {
            for o in &h.result.occurrences {
                tsv.push_str(&format!(
                    "{id}\t{}\t{}\t{}\t{}\t{}\n",
                    ix.records()[o.record].name,
                    o.position,
                    h.strand,
                    o.errors,
                    o.search_idx
                ));
            }
        }
    }
    open_output(a.output.as_deref(), out, tsv.as_bytes())?;

    if let Some(path) = &a.stats {
        let mut csv = String::from("read_id,strand,extension_steps,reported,elapsed_ns\n");
        for ((id, _), hits) in reads.iter().zip(&results) {
            for h in hits {
                csv.push_str(&format!(
                    "{id},{},{},{},{}\n",
                    h.strand,
                    h.result.stats.extension_steps,
                    h.result.stats.reported,
                    h.elapsed.as_nanos()
                ));
            }
        }
        fs::write(path, csv).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn read_len_for(scheme: &SearchScheme, flag: Option<usize>, id: &str) -> Result<usize, CliError> {
    flag.or(scheme.read_len)
        .ok_or_else(|| CliError::Usage(format!("{id}: no read length; pass -R or add \"R\" to the scheme file")))
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.sigma < 2 {
        return Err(CliError::Usage("--sigma must be at least 2".into()));
    }
    if a.csv {
        writeln!(out, "scheme_id,search_idx,edges")?;
    }
    for spec in &a.scheme {
        let (id, scheme) = load_scheme(spec)?;
        let r = read_len_for(&scheme, a.read_len, &id)?;
        let partition = Partition::even(r, scheme.num_pieces).map_err(|e| CliError::Data(format!("{id}: {e}")))?;
        let counts =
            count_edges_per_search(&scheme, &partition, a.sigma).map_err(|e| CliError::Data(format!("{id}: {e}")))?;
        let total: num_bigint::BigUint = counts.iter().flatten().sum();
        if a.csv {
            for (i, c) in counts.iter().enumerate() {
                writeln!(
                    out,
                    "{id},{i},{}",
                    c.as_ref().map_or_else(|| "0".to_string(), ToString::to_string)
                )?;
            }
            writeln!(out, "{id},total,{total}")?;
        } else {
            if a.scheme.len() > 1 {
                writeln!(out, "{id} (R = {r}, sigma = {})", a.sigma)?;
            }
            for (i, (s, c)) in scheme.searches.iter().zip(&counts).enumerate() {
                match c {
                    Some(c) => writeln!(out, "search {i} {s}: {c}")?,
                    None => writeln!(out, "search {i} {s}: 0 (empty)")?,
                }
            }
            writeln!(out, "total: {total}")?;
        }
    }
    Ok(())
}

fn validate(a: ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (id, scheme) = load_scheme(&a.scheme)?;
    let lengths = match a.read_len.or(scheme.read_len) {
        Some(r) => Partition::even(r, scheme.num_pieces)
            .map_err(|e| CliError::Data(format!("{id}: {e}")))?
            .lengths()
            .to_vec(),
        None => vec![scheme.max_errors.max(1) as usize; scheme.num_pieces],
    };
    let mut ok = true;
    for (i, s) in scheme.searches.iter().enumerate() {
        let report = crate::scheme::validate_search(s, scheme.num_pieces, scheme.max_errors).map_err(data)?;
        ok &= report.is_ok();
        writeln!(out, "search {i} {s}: {report}")?;
    }
    let report = is_feasible(&scheme.strip_empty_searches(), &lengths);
    writeln!(out, "patterns: {}", report.multiplicity.len())?;
    writeln!(out, "feasible: {}", if report.feasible { "yes" } else { "no" })?;
    if !report.feasible {
        let list: Vec<String> = report.uncovered.iter().map(ToString::to_string).collect();
        writeln!(out, "uncovered: {}", list.join(" "))?;
    }
    let redundant: Vec<String> = report.redundant().map(|(q, n)| format!("{q}x{n}")).collect();
    if !redundant.is_empty() {
        writeln!(out, "covered more than once: {}", redundant.join(" "))?;
    }
    if !ok {
        return Err(CliError::Data(format!("{id}: invalid searches")));
    }
    if !report.feasible {
        return Err(CliError::Data(format!(
            "{id}: {} mismatch patterns are not covered",
            report.uncovered.len()
        )));
    }
    Ok(())
}

fn optimize(a: OptimizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = a.problem.spec()?;
    let solve_r = match a.solve_at_r {
        None => spec.read_len,
        Some(0) => (spec.max_errors as usize * spec.pieces).max(spec.pieces),
        Some(r) => r,
    };
    let solve_spec = ProblemSpec::new(spec.max_errors, solve_r, spec.pieces, spec.max_searches, spec.sigma)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let time_limit = match a.time_limit {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            return Err(CliError::Usage(
                "--time-limit must be a positive number of seconds".into(),
            ))
        }
        t => t.map(Duration::from_secs_f64),
    };
    let options = SolveOptions {
        time_limit,
        node_limit: a.node_limit,
        dominance: !a.no_dominance,
        mirror_symmetry: !a.no_symmetry,
        warm_start: !a.no_warm_start,
        heuristic_only: a.heuristic_only,
    };
    let result = solve_exact(&solve_spec, &options).map_err(data)?;
    writeln!(err, "proof_status: {}", result.status)?;
    if a.stats {
        writeln!(
            err,
            "candidates: {} ({} kept)",
            result.stats.candidates, result.stats.kept
        )?;
        writeln!(err, "nodes: {}", result.stats.nodes)?;
        writeln!(err, "elapsed_s: {:.6}", result.stats.elapsed.as_secs_f64())?;
        for inc in &result.stats.history {
            writeln!(
                err,
                "incumbent: {} at node {} after {:.6}s",
                inc.objective,
                inc.nodes,
                inc.elapsed.as_secs_f64()
            )?;
        }
    }
    let Some(scheme) = result.scheme else {
        return match result.status {
            ProofStatus::BudgetExhausted => {
                Err(CliError::Budget("budget exhausted before any scheme was found".into()))
            }
            _ => Err(CliError::Data(format!(
                "no feasible scheme with at most {} searches",
                spec.max_searches
            ))),
        };
    };
    let scheme = scheme.with_read_len(spec.read_len);
    let partition = spec.partition().map_err(data)?;
    if solve_r != spec.read_len {
        writeln!(
            err,
            "objective_at_solve_r: {} (R = {solve_r})",
            result.objective.as_ref().map(ToString::to_string).unwrap_or_default()
        )?;
        if !is_feasible(&scheme, partition.lengths()).feasible {
            return Err(CliError::Data(format!(
                "the scheme found at R = {solve_r} does not cover every pattern at R = {}",
                spec.read_len
            )));
        }
    }
    let objective = crate::trie::count_edges_scheme(&scheme, &partition, spec.sigma).map_err(data)?;
    writeln!(err, "objective: {objective}")?;
    open_output(a.output.as_deref(), out, serialize_scheme(&scheme).as_bytes())?;
    match result.status {
        ProofStatus::BudgetExhausted => Err(CliError::Budget(
            "budget exhausted; the scheme written is the best found, not proven optimal".into(),
        )),
        _ => Ok(()),
    }
}

fn gen_mip(a: GenMipArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = a.problem.spec()?;
    let options = MipOptions {
        symmetry: !a.no_symmetry,
        strengthen: !a.no_strengthen,
        ..Default::default()
    };
    let model = build_mip(&spec, &options).map_err(data)?;
    fs::write(&a.output, export_lp(&model)).map_err(|e| CliError::Data(format!("{}: {e}", a.output.display())))?;
    writeln!(
        out,
        "{}: {} variables ({} binary, {} general integer), {} rows",
        a.output.display(),
        model.variables.len(),
        model.num_binaries(),
        model.num_integers(),
        model.rows.len()
    )?;
    Ok(())
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let k = a.max_errors;
    let specs = if a.scheme.is_empty() {
        let mut v = Vec::new();
        if bundled_optimal(k, k as usize + 1).is_some() {
            v.push(format!("builtin:opt_k{k}_p{}", k + 1));
        }
        v.push(format!("backtracking:{k}"));
        v
    } else {
        a.scheme.clone()
    };
    let schemes = specs.iter().map(|s| load_scheme(s)).collect::<Result<Vec<_>, _>>()?;
    let ix = BidirectionalIndex::load(&a.index).map_err(|e| CliError::Data(format!("{}: {e}", a.index.display())))?;
    let reads = encode_reads(&ix, &a.reads, a.unknown_as_wildcard)?;
    let distance: Distance = a.distance.into();

    let mut csv = String::from("scheme_id,searches,reads,extension_steps,occurrences,incomplete_reads");
    csv.push_str(if a.timing { ",elapsed_ms\n" } else { "\n" });
    for (id, scheme) in &schemes {
        if k > scheme.max_errors {
            return Err(CliError::Usage(format!(
                "{id}: -K {k} exceeds the scheme's K = {}",
                scheme.max_errors
            )));
        }
        let mut prepared = BTreeMap::new();
        for (rid, r) in &reads {
            if let std::collections::btree_map::Entry::Vacant(e) = prepared.entry(r.len()) {
                let p = PreparedScheme::new(scheme, r.len(), k)
                    .map_err(|e| CliError::Data(format!("{id}, read {rid}: {e}")))?;
                e.insert(p);
            }
        }
        let t = Instant::now();
        let results = map_ordered(a.threads, reads.len(), |i| {
            prepared[&reads[i].1.len()].run(&ix, &reads[i].1, distance)
        })?;
        let elapsed = t.elapsed();
        let steps: u64 = results.iter().map(|r| r.stats.extension_steps).sum();
        let occ: usize = results.iter().map(|r| r.occurrences.len()).sum();
        let incomplete = results.iter().filter(|r| r.incomplete).count();
        csv.push_str(&format!(
            "{id},{},{},{steps},{occ},{incomplete}",
            scheme.searches.len(),
            reads.len()
        ));
        if a.timing {
            csv.push_str(&format!(",{:.3}", elapsed.as_secs_f64() * 1e3));
        }
        csv.push('\n');
    }
    open_output(a.output.as_deref(), out, csv.as_bytes())
}
