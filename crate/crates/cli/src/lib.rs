//! Command-line front end: argument parsing, run headers, and record output.
//!
//! Exit codes: 0 ok or statement holds, 1 statement violated, 2 usage or
//! parse error, 3 I/O error, 4 incomplete run (time budget exhausted or
//! stopped early on purpose).

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use absq_core::checkpoint::{max_distinct_checkpointed, CheckpointRun};
use absq_core::search::default_sigma;
use absq_core::{
    check_lemma1, count_distinct_fast, falsify_proof_steps, max_distinct, verify_conjecture,
    ConjectureReport, CountResult, LemmaCheckResult, MaxSearchResult, ProofStepCounterexample,
    SearchError, SearchOptions, Word,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;

pub const WORKERS_ENV: &str = "ABSQ_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Jsonl,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "absq", version, about = "Distinct abelian-square factors: counting and exhaustive search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true, env = WORKERS_ENV, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Jsonl)]
    pub format: OutputFormat,

    /// Witnesses kept per search result
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub witness_cap: u32,

    /// Prefix length used to split searches into tasks [default: min(n, 7)]
    #[arg(long, global = true)]
    pub split_depth: Option<usize>,

    /// Omit the volatile header line (timestamp, worker count)
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Also write JSONL records to this file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct LengthArgs {
    /// Single length to check
    #[arg(long, conflicts_with = "n_max", required_unless_present = "n_max")]
    pub n: Option<usize>,

    /// Check every length from 1 up to this bound
    #[arg(long)]
    pub n_max: Option<usize>,
}

impl LengthArgs {
    fn range(&self) -> (usize, usize) {
        match (self.n, self.n_max) {
            (Some(n), _) => (n, n),
            (None, Some(m)) => (1, m),
            (None, None) => unreachable!("clap enforces one of --n / --n-max"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count distinct abelian-square factors of words (one per line)
    Count {
        /// Input files; standard input when none are given
        files: Vec<PathBuf>,
        /// Alphabet size [default: 1 + largest letter]
        #[arg(long)]
        sigma: Option<usize>,
    },
    /// Maximal distinct count over canonical words of one length
    Max {
        #[arg(long)]
        n: usize,
        #[arg(long, alias = "sigma")]
        sigma_max: Option<usize>,
        /// Only words whose last symbol is covered
        #[arg(long)]
        constrained: bool,
        /// Append-only checkpoint file, resumed if present
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many pending tasks (requires --checkpoint)
        #[arg(long, requires = "checkpoint")]
        stop_after: Option<usize>,
    },
    /// Compare binary and general-alphabet maxima
    Verify {
        #[command(flatten)]
        lengths: LengthArgs,
        #[arg(long, alias = "sigma")]
        sigma_max: Option<usize>,
    },
    /// Check the covered-last-symbol statement exhaustively
    Lemma {
        #[command(flatten)]
        lengths: LengthArgs,
        #[arg(long, alias = "sigma")]
        sigma_max: Option<usize>,
    },
    /// Test the single-symbol extension steps on every canonical word
    Falsify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, alias = "sigma")]
        sigma_max: Option<usize>,
    },
    /// Table of binary and general maxima for n = 1..=n_max
    Sequence {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, alias = "sigma")]
        sigma_max: Option<usize>,
        /// Wall-clock budget in seconds; the table is cut short when exceeded
        #[arg(long)]
        time_budget: Option<f64>,
    },
}

/// Deterministic part of the run header: every parameter and default in effect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunHeader {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constrained: Option<bool>,
    pub witness_cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_depth: Option<usize>,
}

/// Header values that legitimately differ between otherwise identical runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolatileHeader {
    pub timestamp_unix: u64,
    pub workers: usize,
}

/// A JSONL header line, distinguished from data records by its single key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeaderLine {
    Volatile(VolatileHeader),
    Header(RunHeader),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Search(SearchError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Search(e) => match e {
                SearchError::Options(_) | SearchError::CheckpointMismatch { .. } | SearchError::Word(_) => EXIT_USAGE,
                _ => EXIT_IO,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Search(e) => write!(f, "{e}"),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        CliError::Search(e)
    }
}

fn io_err(context: &str) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{context}: {e}"))
}

/// Something that can be written as a JSONL record, a CSV row, or a text line.
trait Record: Serialize {
    fn csv_header(&self) -> Vec<String>;
    fn csv_row(&self) -> Vec<String>;
    fn text(&self) -> String;
}

impl Record for CountResult {
    fn csv_header(&self) -> Vec<String> {
        ["word", "sigma", "k", "coverage"].map(String::from).to_vec()
    }
    fn csv_row(&self) -> Vec<String> {
        vec![self.word.to_string(), self.word.sigma().to_string(), self.k.to_string(), self.coverage.to_string()]
    }
    fn text(&self) -> String {
        format!("{:<16} k={:<4} coverage={}", quoted(&self.word), self.k, self.coverage)
    }
}

impl Record for MaxSearchResult {
    fn csv_header(&self) -> Vec<String> {
        ["n", "sigma", "constrained", "max_k", "witnesses", "enumerated"].map(String::from).to_vec()
    }
    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.sigma.to_string(),
            self.constrained.to_string(),
            self.max_k.to_string(),
            join_words(&self.witnesses),
            self.enumerated.to_string(),
        ]
    }
    fn text(&self) -> String {
        format!(
            "n={} sigma={}{} max_k={} enumerated={} witnesses: {}",
            self.n,
            self.sigma,
            if self.constrained { " (last symbol covered)" } else { "" },
            self.max_k,
            self.enumerated,
            join_words(&self.witnesses)
        )
    }
}

impl Record for ConjectureReport {
    fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["n".to_string(), "B".to_string()];
        h.extend(self.a_values.keys().filter(|&&s| s > 2).map(|s| format!("A{s}")));
        h.extend(["holds", "witness_general", "witness_binary"].map(String::from));
        h
    }
    fn csv_row(&self) -> Vec<String> {
        let mut r = vec![self.n.to_string(), self.b.to_string()];
        r.extend(self.a_values.iter().filter(|(&s, _)| s > 2).map(|(_, a)| a.to_string()));
        r.extend([self.holds.to_string(), self.witness_general.to_string(), self.witness_binary.to_string()]);
        r
    }
    fn text(&self) -> String {
        let a: Vec<String> = self.a_values.iter().map(|(s, a)| format!("A(n,{s})={a}")).collect();
        format!(
            "n={:<3} B={:<3} {} {} general={} binary={}",
            self.n,
            self.b,
            a.join(" "),
            if self.holds { "holds" } else { "VIOLATED" },
            quoted(&self.witness_general),
            quoted(&self.witness_binary)
        )
    }
}

impl Record for LemmaCheckResult {
    fn csv_header(&self) -> Vec<String> {
        ["n", "sigma", "L_binary", "violators", "holds"].map(String::from).to_vec()
    }
    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.sigma.to_string(),
            self.l_binary.to_string(),
            join_words(&self.violators),
            self.holds.to_string(),
        ]
    }
    fn text(&self) -> String {
        format!(
            "n={:<3} sigma={} L_binary={:<3} {} violators: {}",
            self.n,
            self.sigma,
            self.l_binary,
            if self.holds { "holds" } else { "VIOLATED" },
            if self.violators.is_empty() { "none".to_string() } else { join_words(&self.violators) }
        )
    }
}

impl Record for ProofStepCounterexample {
    fn csv_header(&self) -> Vec<String> {
        ["claim_id", "w", "x", "k_w", "k_wx", "details"].map(String::from).to_vec()
    }
    fn csv_row(&self) -> Vec<String> {
        vec![
            self.claim_id.to_string(),
            self.w.to_string(),
            self.x.to_string(),
            self.k_w.to_string(),
            self.k_wx.to_string(),
            self.details.clone(),
        ]
    }
    fn text(&self) -> String {
        format!("{:<24} w={:<12} {}", self.claim_id.as_str(), self.w.to_string(), self.details)
    }
}

/// One row of the extremal sequence table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: usize,
    /// sigma -> A(n, sigma) for sigma >= 3.
    #[serde(rename = "A_values")]
    pub a_values: std::collections::BTreeMap<usize, usize>,
    pub binary_witness: Word,
}

impl Record for SequenceRow {
    fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["n".to_string(), "B".to_string()];
        h.extend(self.a_values.keys().map(|s| format!("A{s}")));
        h.push("binary_witness".into());
        h
    }
    fn csv_row(&self) -> Vec<String> {
        let mut r = vec![self.n.to_string(), self.b.to_string()];
        r.extend(self.a_values.values().map(|a| a.to_string()));
        r.push(self.binary_witness.to_string());
        r
    }
    fn text(&self) -> String {
        let a: Vec<String> = self.a_values.iter().map(|(s, a)| format!("A(n,{s})={a:<3}")).collect();
        format!("n={:<3} B={:<3} {} witness={}", self.n, self.b, a.join(" "), quoted(&self.binary_witness))
    }
}

fn quoted(w: &Word) -> String {
    if w.is_empty() {
        "\"\"".into()
    } else {
        w.to_string()
    }
}

fn join_words(words: &[Word]) -> String {
    words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes headers and records to standard output in the chosen format, and
/// mirrors them as JSONL into the `--out` file when one is given.
struct Emitter<'a> {
    out: &'a mut dyn Write,
    format: OutputFormat,
    mirror: Option<BufWriter<File>>,
    csv_started: bool,
}

impl<'a> Emitter<'a> {
    fn new(out: &'a mut dyn Write, common: &CommonArgs) -> Result<Self, CliError> {
        let mirror = match &common.out {
            Some(path) => {
                let file = File::create(path).map_err(io_err(&path.display().to_string()))?;
                Some(BufWriter::new(file))
            }
            None => None,
        };
        Ok(Emitter { out, format: common.format, mirror, csv_started: false })
    }

    fn stdout_err(e: io::Error) -> CliError {
        CliError::Io(format!("writing output: {e}"))
    }

    fn mirror_line(&mut self, line: &str) -> Result<(), CliError> {
        if let Some(m) = self.mirror.as_mut() {
            writeln!(m, "{line}").map_err(io_err("writing --out file"))?;
        }
        Ok(())
    }

    fn headers(&mut self, header: &RunHeader, volatile: Option<VolatileHeader>) -> Result<(), CliError> {
        let mut lines = Vec::new();
        if let Some(v) = volatile {
            lines.push(HeaderLine::Volatile(v));
        }
        lines.push(HeaderLine::Header(header.clone()));
        for line in lines {
            let json = serde_json::to_string(&line).expect("header serializes");
            self.mirror_line(&json)?;
            match self.format {
                OutputFormat::Jsonl => writeln!(self.out, "{json}"),
                OutputFormat::Csv | OutputFormat::Text => writeln!(self.out, "# {}", comment_form(&line)),
            }
            .map_err(Self::stdout_err)?;
        }
        Ok(())
    }

    fn record<R: Record>(&mut self, record: &R) -> Result<(), CliError> {
        let json = serde_json::to_string(record).expect("record serializes");
        self.mirror_line(&json)?;
        match self.format {
            OutputFormat::Jsonl => writeln!(self.out, "{json}").map_err(Self::stdout_err),
            OutputFormat::Text => writeln!(self.out, "{}", record.text()).map_err(Self::stdout_err),
            OutputFormat::Csv => {
                if !self.csv_started {
                    self.csv_started = true;
                    self.csv_line(record.csv_header())?;
                }
                self.csv_line(record.csv_row())
            }
        }
    }

    fn csv_line(&mut self, fields: Vec<String>) -> Result<(), CliError> {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer.write_record(&fields).expect("in-memory csv");
        let bytes = writer.into_inner().expect("in-memory csv");
        self.out.write_all(&bytes).map_err(Self::stdout_err)
    }

    fn note(&mut self, text: &str) -> Result<(), CliError> {
        match self.format {
            OutputFormat::Jsonl => {
                let json = serde_json::json!({ "note": text }).to_string();
                self.mirror_line(&json)?;
                writeln!(self.out, "{json}")
            }
            _ => writeln!(self.out, "# {text}"),
        }
        .map_err(Self::stdout_err)
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.out.flush().map_err(Self::stdout_err)?;
        if let Some(mut m) = self.mirror.take() {
            m.flush().map_err(io_err("writing --out file"))?;
        }
        Ok(())
    }
}

fn comment_form(line: &HeaderLine) -> String {
    let (tag, value) = match line {
        HeaderLine::Volatile(v) => ("volatile", serde_json::to_value(v)),
        HeaderLine::Header(h) => ("header", serde_json::to_value(h)),
    };
    let fields: Vec<String> = value
        .expect("header serializes")
        .as_object()
        .expect("header is an object")
        .iter()
        .map(|(k, v)| format!("{k}={}", v.as_str().map(String::from).unwrap_or_else(|| v.to_string())))
        .collect();
    format!("{tag}: {}", fields.join(" "))
}

fn resolved_workers(common: &CommonArgs) -> usize {
    common
        .workers
        .map(|w| w as usize)
        .unwrap_or_else(|| SearchOptions::default().workers)
}

fn search_options(common: &CommonArgs) -> SearchOptions {
    SearchOptions {
        workers: resolved_workers(common),
        witness_cap: common.witness_cap as usize,
        split_depth: common.split_depth,
    }
}

fn volatile_header(common: &CommonArgs) -> Option<VolatileHeader> {
    (!common.no_timestamp).then(|| VolatileHeader {
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        workers: resolved_workers(common),
    })
}

fn harness_sigma(requested: Option<usize>, n: usize) -> Result<usize, CliError> {
    let sigma = requested.unwrap_or_else(|| default_sigma(n).max(2));
    if sigma < 2 {
        return Err(CliError::Usage(format!("--sigma-max must be at least 2, got {sigma}")));
    }
    Ok(sigma)
}

fn header_for(command: &str, common: &CommonArgs) -> RunHeader {
    RunHeader {
        command: command.to_string(),
        n_min: None,
        n_max: None,
        sigma_max: None,
        constrained: None,
        witness_cap: common.witness_cap as usize,
        split_depth: common.split_depth,
    }
}

/// Parses one input line into a word, naming the line on failure.
pub fn parse_word_line(line: &str, line_number: usize, sigma: Option<usize>) -> Result<Word, CliError> {
    let trimmed = line.trim_end_matches(['\r', '\n']);
    let word = Word::from_letters(trimmed)
        .map_err(|e| CliError::Usage(format!("line {line_number}: {e}")))?;
    match sigma {
        Some(s) => word
            .with_sigma(s)
            .map_err(|e| CliError::Usage(format!("line {line_number}: {e}"))),
        None => Ok(word),
    }
}

fn cmd_count(
    files: &[PathBuf],
    sigma: Option<usize>,
    stdin: &mut dyn BufRead,
    emit: &mut Emitter<'_>,
) -> Result<i32, CliError> {
    let mut lines: Vec<String> = Vec::new();
    if files.is_empty() {
        for line in stdin.lines() {
            lines.push(line.map_err(io_err("reading standard input"))?);
        }
    } else {
        for path in files {
            let name = path.display().to_string();
            let file = File::open(path).map_err(io_err(&name))?;
            for line in BufReader::new(file).lines() {
                lines.push(line.map_err(io_err(&name))?);
            }
        }
    }
    // Validate everything first so that a bad line produces no partial output.
    let words = lines
        .iter()
        .enumerate()
        .map(|(i, l)| parse_word_line(l, i + 1, sigma))
        .collect::<Result<Vec<_>, _>>()?;
    for word in &words {
        emit.record(&count_distinct_fast(word))?;
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command line. Diagnostics go to `err`.
pub fn run(cli: &Cli, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, stdin, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "absq: {e}");
            e.exit_code()
        }
    }
}

/// Parses arguments and runs; clap usage errors map to exit code 2.
pub fn run_from_args<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdin, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            code
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, CliError> {
    let common = &cli.common;
    let options = search_options(common);
    let volatile = volatile_header(common);
    let mut emit = Emitter::new(out, common)?;
    let code = match &cli.command {
        Command::Count { files, sigma } => {
            let mut header = header_for("count", common);
            header.sigma_max = *sigma;
            header.split_depth = None;
            emit.headers(&header, volatile)?;
            cmd_count(files, *sigma, stdin, &mut emit)?
        }
        Command::Max { n, sigma_max, constrained, checkpoint, stop_after } => {
            let sigma = sigma_max.unwrap_or_else(|| default_sigma(*n));
            let mut header = header_for("max", common);
            header.n_min = Some(*n);
            header.n_max = Some(*n);
            header.sigma_max = Some(sigma);
            header.constrained = Some(*constrained);
            header.split_depth = Some(options.depth_for(*n));
            emit.headers(&header, volatile)?;
            match checkpoint {
                Some(path) => {
                    match max_distinct_checkpointed(*n, sigma, *constrained, &options, path, *stop_after)? {
                        CheckpointRun::Complete(r) => {
                            emit.record(&r)?;
                            EXIT_OK
                        }
                        CheckpointRun::Interrupted { completed, remaining } => {
                            emit.note(&format!(
                                "INCOMPLETE: stopped with {completed} tasks recorded and {remaining} remaining in {}",
                                path.display()
                            ))?;
                            EXIT_INCOMPLETE
                        }
                    }
                }
                None => {
                    emit.record(&max_distinct(*n, sigma, *constrained, &options)?)?;
                    EXIT_OK
                }
            }
        }
        Command::Verify { lengths, sigma_max } => {
            let (lo, hi) = lengths.range();
            let sigma = harness_sigma(*sigma_max, hi)?;
            let mut header = header_for("verify", common);
            header.n_min = Some(lo);
            header.n_max = Some(hi);
            header.sigma_max = Some(sigma);
            header.split_depth = Some(options.depth_for(hi));
            emit.headers(&header, volatile)?;
            let mut code = EXIT_OK;
            for n in lo..=hi {
                let report = verify_conjecture(n, sigma, &options)?;
                if !report.holds {
                    code = EXIT_VIOLATED;
                }
                emit.record(&report)?;
            }
            code
        }
        Command::Lemma { lengths, sigma_max } => {
            let (lo, hi) = lengths.range();
            if lo == 0 {
                return Err(CliError::Usage("lemma needs n >= 1".into()));
            }
            let sigma = harness_sigma(*sigma_max, hi)?;
            let mut header = header_for("lemma", common);
            header.n_min = Some(lo);
            header.n_max = Some(hi);
            header.sigma_max = Some(sigma);
            header.split_depth = Some(options.depth_for(hi));
            emit.headers(&header, volatile)?;
            let mut code = EXIT_OK;
            for n in lo..=hi {
                let result = check_lemma1(n, sigma, &options)?;
                if !result.holds {
                    code = EXIT_VIOLATED;
                }
                emit.record(&result)?;
            }
            code
        }
        Command::Falsify { n_max, sigma_max } => {
            let n_max = *n_max as usize;
            let sigma = harness_sigma(*sigma_max, n_max)?;
            let mut header = header_for("falsify", common);
            header.n_min = Some(1);
            header.n_max = Some(n_max);
            header.sigma_max = Some(sigma);
            header.split_depth = None;
            emit.headers(&header, volatile)?;
            for c in falsify_proof_steps(n_max, sigma, &options)? {
                emit.record(&c)?;
            }
            EXIT_OK
        }
        Command::Sequence { n_max, sigma_max, time_budget } => {
            let n_max = *n_max as usize;
            let sigma = harness_sigma(*sigma_max, n_max)?;
            let budget = match time_budget {
                Some(s) if !s.is_finite() || *s < 0.0 => {
                    return Err(CliError::Usage(format!("--time-budget must be a non-negative number, got {s}")))
                }
                Some(s) => Some(Duration::from_secs_f64(*s)),
                None => None,
            };
            let mut header = header_for("sequence", common);
            header.n_min = Some(1);
            header.n_max = Some(n_max);
            header.sigma_max = Some(sigma);
            header.split_depth = Some(options.depth_for(n_max));
            emit.headers(&header, volatile)?;
            cmd_sequence(n_max, sigma, &options, budget, &mut emit)?
        }
    };
    emit.finish()?;
    Ok(code)
}

fn cmd_sequence(
    n_max: usize,
    sigma: usize,
    options: &SearchOptions,
    budget: Option<Duration>,
    emit: &mut Emitter<'_>,
) -> Result<i32, CliError> {
    let started = Instant::now();
    let mut previous_b = 0;
    for n in 1..=n_max {
        if let Some(limit) = budget {
            if started.elapsed() > limit {
                emit.note(&format!(
                    "TRUNCATED: time budget of {:.3}s exceeded; rows for n >= {n} were not computed",
                    limit.as_secs_f64()
                ))?;
                return Ok(EXIT_INCOMPLETE);
            }
        }
        let binary = max_distinct(n, 2, false, options)?;
        let mut a_values = std::collections::BTreeMap::new();
        for s in 3..=sigma {
            a_values.insert(s, max_distinct(n, s, false, options)?.max_k);
        }
        debug_assert!(binary.max_k >= previous_b);
        previous_b = binary.max_k;
        emit.record(&SequenceRow {
            n,
            b: binary.max_k,
            a_values,
            binary_witness: binary.best_witness().cloned().expect("unconstrained search has a witness"),
        })?;
    }
    Ok(EXIT_OK)
}
