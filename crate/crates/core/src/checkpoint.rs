//! Append-only checkpoints for long searches.
//!
//! The file starts with one header line holding the search parameters,
//! followed by one JSON record per completed task:
//!
//! ```text
//! {"format":"absq-checkpoint","version":1,"n":10,"sigma":2,"constrained":false,"split_depth":7,"witness_cap":8}
//! {"prefix":"aaaaaaa","result":{"n":10,"sigma":2,...}}
//! ```
//!
//! Records are written as tasks finish, so their order depends on the
//! schedule; the merged result does not.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::search::{
    merge, partition_space, run_task, MaxSearchResult, SearchError, SearchOptions, SearchTask,
};
use crate::word::Word;

const FORMAT: &str = "absq-checkpoint";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub sigma: usize,
    pub constrained: bool,
    pub split_depth: usize,
    pub witness_cap: usize,
}

impl CheckpointHeader {
    pub fn new(n: usize, sigma: usize, constrained: bool, options: &SearchOptions) -> Self {
        CheckpointHeader {
            format: FORMAT.to_string(),
            version: VERSION,
            n,
            sigma,
            constrained,
            split_depth: options.depth_for(n),
            witness_cap: options.witness_cap,
        }
    }

    fn describe_difference(&self, other: &CheckpointHeader) -> Option<String> {
        let mine = (self.n, self.sigma, self.constrained, self.split_depth, self.witness_cap);
        let theirs = (other.n, other.sigma, other.constrained, other.split_depth, other.witness_cap);
        (mine != theirs).then(|| {
            format!(
                "file has (n={}, sigma={}, constrained={}, split_depth={}, witness_cap={}), \
                 run wants (n={}, sigma={}, constrained={}, split_depth={}, witness_cap={})",
                other.n,
                other.sigma,
                other.constrained,
                other.split_depth,
                other.witness_cap,
                self.n,
                self.sigma,
                self.constrained,
                self.split_depth,
                self.witness_cap
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub prefix: Word,
    pub result: MaxSearchResult,
}

/// Outcome of a checkpointed run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckpointRun {
    Complete(MaxSearchResult),
    /// Stopped early; `remaining` tasks are still outstanding.
    Interrupted { completed: usize, remaining: usize },
}

/// Reads and validates every completed task in a checkpoint.
///
/// A missing or empty file is an empty checkpoint.
pub fn read_checkpoint(
    path: &Path,
    expected: &CheckpointHeader,
) -> Result<BTreeMap<Word, MaxSearchResult>, SearchError> {
    let display = path.display().to_string();
    let corrupt = |line: usize, reason: String| SearchError::CorruptCheckpoint {
        path: display.clone(),
        reason: format!("line {line}: {reason}"),
    };
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(source) => return Err(SearchError::Io { path: display, source }),
    };
    let mut lines = BufReader::new(file).lines().enumerate();
    let header_line = match lines.next() {
        None => return Ok(BTreeMap::new()),
        Some((_, line)) => line.map_err(|source| SearchError::Io { path: display.clone(), source })?,
    };
    let header: CheckpointHeader =
        serde_json::from_str(&header_line).map_err(|e| corrupt(1, format!("bad header: {e}")))?;
    if header.format != FORMAT || header.version != VERSION {
        return Err(corrupt(
            1,
            format!("unknown format {:?} version {}", header.format, header.version),
        ));
    }
    if let Some(reason) = expected.describe_difference(&header) {
        return Err(SearchError::CheckpointMismatch { path: display, reason });
    }

    let valid: BTreeSet<Word> = partition_space(header.n, header.sigma, header.split_depth, header.constrained)?
        .into_iter()
        .map(|t| t.prefix)
        .collect();
    let mut done = BTreeMap::new();
    for (index, line) in lines {
        let number = index + 1;
        let line = line.map_err(|source| SearchError::Io { path: display.clone(), source })?;
        let record: TaskRecord =
            serde_json::from_str(&line).map_err(|e| corrupt(number, format!("unreadable record: {e}")))?;
        if !valid.contains(&record.prefix) {
            return Err(corrupt(number, format!("prefix {:?} is not a task of this search", record.prefix.to_string())));
        }
        let r = &record.result;
        if (r.n, r.sigma, r.constrained) != (header.n, header.sigma, header.constrained) {
            return Err(corrupt(number, "record parameters disagree with header".into()));
        }
        if r.witnesses.len() > header.witness_cap
            || r.witnesses.iter().any(|w| w.len() != header.n || !w.symbols().starts_with(record.prefix.symbols()))
        {
            return Err(corrupt(number, "witnesses do not belong to this task".into()));
        }
        if done.insert(record.prefix.clone(), record.result).is_some() {
            return Err(corrupt(number, format!("task {:?} recorded twice", record.prefix.to_string())));
        }
    }
    Ok(done)
}

fn open_for_append(path: &Path, header: &CheckpointHeader, fresh: bool) -> Result<File, SearchError> {
    let io = |source| SearchError::Io { path: path.display().to_string(), source };
    let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    if fresh {
        let line = serde_json::to_string(header).expect("header serializes");
        writeln!(file, "{line}").map_err(io)?;
        file.flush().map_err(io)?;
    }
    Ok(file)
}

/// Runs `max_distinct` while recording each finished task in `path`, skipping
/// tasks already recorded there. With `task_limit`, at most that many pending
/// tasks (in prefix order) are run before returning
/// [`CheckpointRun::Interrupted`].
pub fn max_distinct_checkpointed(
    n: usize,
    sigma: usize,
    constrained: bool,
    options: &SearchOptions,
    path: &Path,
    task_limit: Option<usize>,
) -> Result<CheckpointRun, SearchError> {
    options.validate()?;
    let header = CheckpointHeader::new(n, sigma, constrained, options);
    let done = read_checkpoint(path, &header)?;
    let has_header = std::fs::metadata(path).map(|m| m.len() > 0).unwrap_or(false);
    let file = Mutex::new(open_for_append(path, &header, !has_header)?);

    let tasks = partition_space(n, sigma, header.split_depth, constrained)?;
    let pending: Vec<&SearchTask> = tasks.iter().filter(|t| !done.contains_key(&t.prefix)).collect();
    let take = task_limit.unwrap_or(pending.len()).min(pending.len());
    let batch = &pending[..take];

    let pool = options.pool()?;
    let fresh: Vec<MaxSearchResult> = pool.install(|| {
        batch
            .par_iter()
            .map(|task| {
                let result = run_task(task, options.witness_cap);
                let record = TaskRecord { prefix: task.prefix.clone(), result };
                let line = serde_json::to_string(&record).expect("record serializes");
                let mut f = file.lock().expect("checkpoint writer poisoned");
                writeln!(f, "{line}")
                    .and_then(|_| f.flush())
                    .map(|_| record.result)
                    .map_err(|source| SearchError::Io { path: path.display().to_string(), source })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    if take < pending.len() {
        return Ok(CheckpointRun::Interrupted {
            completed: done.len() + fresh.len(),
            remaining: pending.len() - take,
        });
    }
    let all: Vec<MaxSearchResult> = done.into_values().chain(fresh).collect();
    merge(&all, options.witness_cap).map(CheckpointRun::Complete)
}
