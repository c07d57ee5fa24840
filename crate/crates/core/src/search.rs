//! Exhaustive search for the largest number of distinct abelian-square
//! factors among words of a given length.
//!
//! The canonical word space is split into [`SearchTask`]s by prefix. Each task
//! is a depth-first extension that maintains the prefix Parikh table and the
//! running distinct count as symbols are pushed and popped. When the symbol
//! at position `d - 1` is appended, the new distinct factors are exactly the
//! abelian-square suffixes that do not occur earlier in the word; since a
//! suffix that occurs earlier has all its own suffixes occurring earlier too,
//! these are the square suffixes longer than the longest repeated suffix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{enumerate_canonical, is_canonical, PrefixParikhTable, Word, WordError};

pub const DEFAULT_WITNESS_CAP: usize = 8;
pub const DEFAULT_SIGMA_CAP: usize = 4;

/// Default alphabet cap for words of length `n`: `min(n, 4)`, at least 1.
pub fn default_sigma(n: usize) -> usize {
    n.clamp(1, DEFAULT_SIGMA_CAP)
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("cannot merge results with different parameters: {0}")]
    Mismatch(String),
    #[error("nothing to merge")]
    EmptyMerge,
    #[error("invalid search options: {0}")]
    Options(String),
    #[error("corrupt checkpoint {path}: {reason}")]
    CorruptCheckpoint { path: String, reason: String },
    #[error("checkpoint {path} was written for different parameters: {reason}")]
    CheckpointMismatch { path: String, reason: String },
    #[error("checkpoint i/o on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Extremal count over one slice of the search space.
///
/// `witnesses` is empty only when no word qualified (possible under the
/// last-symbol-covered constraint); `max_k` is then 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSearchResult {
    pub n: usize,
    pub sigma: usize,
    pub constrained: bool,
    pub max_k: usize,
    pub witnesses: Vec<Word>,
    pub enumerated: u64,
}

impl MaxSearchResult {
    fn empty(n: usize, sigma: usize, constrained: bool) -> Self {
        MaxSearchResult {
            n,
            sigma,
            constrained,
            max_k: 0,
            witnesses: Vec::new(),
            enumerated: 0,
        }
    }

    pub fn best_witness(&self) -> Option<&Word> {
        self.witnesses.first()
    }

    fn same_parameters(&self, other: &MaxSearchResult) -> bool {
        (self.n, self.sigma, self.constrained) == (other.n, other.sigma, other.constrained)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SearchTask {
    pub prefix: Word,
    pub n: usize,
    pub sigma: usize,
    pub constrained: bool,
}

impl SearchTask {
    pub fn new(prefix: Word, n: usize, sigma: usize, constrained: bool) -> Result<Self, SearchError> {
        if prefix.len() > n {
            return Err(SearchError::Options(format!(
                "prefix {prefix} longer than n = {n}"
            )));
        }
        if !is_canonical(prefix.symbols()) || prefix.distinct_symbols() > sigma {
            return Err(SearchError::Options(format!(
                "prefix {prefix} is not a canonical word over {sigma} symbols"
            )));
        }
        Ok(SearchTask { prefix, n, sigma, constrained })
    }
}

/// Canonical prefixes of length `depth`; their extension sets partition the
/// canonical words of length `n`.
pub fn partition_space(
    n: usize,
    sigma: usize,
    depth: usize,
    constrained: bool,
) -> Result<Vec<SearchTask>, SearchError> {
    if depth > n {
        return Err(SearchError::Options(format!("split depth {depth} exceeds n = {n}")));
    }
    if sigma == 0 {
        return Err(SearchError::Options("alphabet cap must be at least 1".into()));
    }
    Ok(enumerate_canonical(depth, sigma)
        .map(|prefix| SearchTask {
            prefix: prefix.tight(),
            n,
            sigma,
            constrained,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub workers: usize,
    pub witness_cap: usize,
    /// Prefix length used to split the space; `None` picks `min(n, 7)`.
    pub split_depth: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: std::thread::available_parallelism().map_or(1, |p| p.get()),
            witness_cap: DEFAULT_WITNESS_CAP,
            split_depth: None,
        }
    }
}

impl SearchOptions {
    pub fn with_workers(workers: usize) -> Self {
        SearchOptions { workers, ..Default::default() }
    }

    pub fn depth_for(&self, n: usize) -> usize {
        self.split_depth.unwrap_or(7).min(n)
    }

    pub(crate) fn validate(&self) -> Result<(), SearchError> {
        if self.workers == 0 {
            return Err(SearchError::Options("workers must be at least 1".into()));
        }
        if self.witness_cap == 0 {
            return Err(SearchError::Options("witness cap must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool, SearchError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| SearchError::Options(format!("cannot start worker pool: {e}")))
    }
}

/// Combines partial results. Witnesses are merged lexicographically and cut
/// at `witness_cap`.
pub fn merge(results: &[MaxSearchResult], witness_cap: usize) -> Result<MaxSearchResult, SearchError> {
    let first = results.first().ok_or(SearchError::EmptyMerge)?;
    if let Some(bad) = results.iter().find(|r| !r.same_parameters(first)) {
        return Err(SearchError::Mismatch(format!(
            "(n={}, sigma={}, constrained={}) vs (n={}, sigma={}, constrained={})",
            first.n, first.sigma, first.constrained, bad.n, bad.sigma, bad.constrained
        )));
    }
    let mut out = MaxSearchResult::empty(first.n, first.sigma, first.constrained);
    out.enumerated = results.iter().map(|r| r.enumerated).sum();
    let best = results
        .iter()
        .filter(|r| !r.witnesses.is_empty())
        .map(|r| r.max_k)
        .max();
    if let Some(best) = best {
        out.max_k = best;
        let mut witnesses: Vec<Word> = results
            .iter()
            .filter(|r| r.max_k == best)
            .flat_map(|r| r.witnesses.iter().cloned())
            .collect();
        witnesses.sort();
        witnesses.dedup();
        witnesses.truncate(witness_cap);
        out.witnesses = witnesses;
    }
    Ok(out)
}

/// What a visitor sees at each leaf of the depth-first walk.
pub(crate) struct Leaf<'a> {
    pub symbols: &'a [u8],
    pub k: usize,
    pub covered: bool,
}

/// Incremental distinct-count state for a growing word.
pub(crate) struct Walker {
    sigma: usize,
    symbols: Vec<u8>,
    table: PrefixParikhTable,
    counts: Vec<usize>,
    covered: Vec<bool>,
    scratch: Vec<u8>,
    z: Vec<usize>,
}

impl Walker {
    pub fn new(sigma: usize) -> Self {
        Walker {
            sigma,
            symbols: Vec::new(),
            table: PrefixParikhTable::new(&Word::empty(sigma).expect("valid alphabet")),
            counts: vec![0],
            covered: vec![false],
            scratch: Vec::new(),
            z: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        *self.counts.last().unwrap()
    }

    pub fn covered(&self) -> bool {
        *self.covered.last().unwrap()
    }

    /// Length of the longest suffix that also ends at an earlier position,
    /// via the Z-array of the reversed word.
    fn longest_repeated_suffix(&mut self) -> usize {
        let n = self.symbols.len();
        self.scratch.clear();
        self.scratch.extend(self.symbols.iter().rev());
        let s = &self.scratch;
        self.z.clear();
        self.z.resize(n, 0);
        let z = &mut self.z;
        let (mut left, mut right, mut best) = (0usize, 0usize, 0usize);
        for i in 1..n {
            let mut len = if i < right { z[i - left].min(right - i) } else { 0 };
            while i + len < n && s[len] == s[i + len] {
                len += 1;
            }
            z[i] = len;
            if i + len > right {
                left = i;
                right = i + len;
            }
            best = best.max(len);
        }
        best
    }

    pub fn push(&mut self, symbol: u8) {
        debug_assert!((symbol as usize) < self.sigma);
        self.symbols.push(symbol);
        self.table.push(symbol);
        let d = self.symbols.len();
        let repeated = self.longest_repeated_suffix();
        let mut fresh = 0;
        let mut covered = false;
        for half in 1..=d / 2 {
            if self.table.is_square_at(d - 2 * half, half) {
                covered = true;
                if 2 * half > repeated {
                    fresh += 1;
                }
            }
        }
        let k = self.k() + fresh;
        self.counts.push(k);
        self.covered.push(covered);
    }

    pub fn pop(&mut self) {
        self.symbols.pop();
        self.table.pop();
        self.counts.pop();
        self.covered.pop();
    }

    /// Visits every canonical word of length `n` extending `prefix`, in
    /// lexicographic order. Returns the number of leaves.
    pub fn walk<F: FnMut(Leaf<'_>)>(&mut self, prefix: &[u8], n: usize, mut visit: F) -> u64 {
        for &s in prefix {
            self.push(s);
        }
        let used = prefix.iter().map(|&s| s + 1).max().unwrap_or(0);
        let leaves = self.extend(n, used, &mut visit);
        for _ in prefix {
            self.pop();
        }
        leaves
    }

    fn extend<F: FnMut(Leaf<'_>)>(&mut self, n: usize, used: u8, visit: &mut F) -> u64 {
        if self.symbols.len() == n {
            visit(Leaf {
                symbols: &self.symbols,
                k: self.k(),
                covered: self.covered(),
            });
            return 1;
        }
        let top = used.min(self.sigma as u8 - 1);
        let mut leaves = 0;
        for s in 0..=top {
            self.push(s);
            leaves += self.extend(n, used.max(s + 1), visit);
            self.pop();
        }
        leaves
    }
}

pub fn run_task(task: &SearchTask, witness_cap: usize) -> MaxSearchResult {
    let mut result = MaxSearchResult::empty(task.n, task.sigma, task.constrained);
    let mut best: Option<usize> = None;
    let mut walker = Walker::new(task.sigma);
    result.enumerated = walker.walk(task.prefix.symbols(), task.n, |leaf| {
        if task.constrained && !leaf.covered {
            return;
        }
        match best {
            Some(b) if leaf.k < b => {}
            Some(b) if leaf.k == b => {
                if result.witnesses.len() < witness_cap {
                    result.witnesses.push(Word::from_symbols(leaf.symbols.to_vec()).unwrap());
                }
            }
            _ => {
                best = Some(leaf.k);
                result.witnesses.clear();
                result.witnesses.push(Word::from_symbols(leaf.symbols.to_vec()).unwrap());
            }
        }
    });
    result.max_k = best.unwrap_or(0);
    result
}

pub(crate) fn run_tasks(
    tasks: &[SearchTask],
    options: &SearchOptions,
) -> Result<Vec<MaxSearchResult>, SearchError> {
    options.validate()?;
    let pool = options.pool()?;
    Ok(pool.install(|| {
        tasks
            .par_iter()
            .map(|t| run_task(t, options.witness_cap))
            .collect()
    }))
}

/// `max_k` over all canonical words of length `n` on at most `sigma`
/// symbols, optionally restricted to words whose last symbol is covered.
pub fn max_distinct(
    n: usize,
    sigma: usize,
    constrained: bool,
    options: &SearchOptions,
) -> Result<MaxSearchResult, SearchError> {
    let tasks = partition_space(n, sigma, options.depth_for(n), constrained)?;
    let partial = run_tasks(&tasks, options)?;
    merge(&partial, options.witness_cap)
}

/// Sequential, single-task walk used where threading is unwanted.
pub fn max_distinct_serial(n: usize, sigma: usize, constrained: bool, witness_cap: usize) -> MaxSearchResult {
    let task = SearchTask {
        prefix: Word::empty(1).unwrap(),
        n,
        sigma: sigma.max(1),
        constrained,
    };
    run_task(&task, witness_cap)
}

/// Visits every canonical word of length `n` over at most `sigma` symbols in
/// parallel, collecting whatever `select` returns, in lexicographic order.
pub(crate) fn collect_canonical<T, F>(
    n: usize,
    sigma: usize,
    options: &SearchOptions,
    select: F,
) -> Result<Vec<T>, SearchError>
where
    T: Send,
    F: Fn(Leaf<'_>) -> Option<T> + Sync,
{
    options.validate()?;
    let tasks = partition_space(n, sigma, options.depth_for(n), false)?;
    let pool = options.pool()?;
    let chunks: Vec<Vec<T>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| {
                let mut out = Vec::new();
                let mut walker = Walker::new(sigma);
                walker.walk(task.prefix.symbols(), n, |leaf| {
                    if let Some(item) = select(leaf) {
                        out.push(item);
                    }
                });
                out
            })
            .collect()
    });
    Ok(chunks.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_distinct_fast, last_symbol_covered};

    fn w(s: &str) -> Word {
        Word::from_letters(s).unwrap()
    }

    fn opts(workers: usize) -> SearchOptions {
        SearchOptions::with_workers(workers)
    }

    #[test]
    fn walker_matches_fast_counter() {
        for sigma in 1..=3 {
            let mut walker = Walker::new(sigma);
            let mut seen = 0;
            walker.walk(&[], 8, |leaf| {
                let word = Word::new(leaf.symbols.to_vec(), sigma).unwrap();
                assert_eq!(leaf.k, count_distinct_fast(&word).k, "{word}");
                assert_eq!(leaf.covered, last_symbol_covered(&word).unwrap(), "{word}");
                seen += 1;
            });
            assert_eq!(seen, enumerate_canonical(8, sigma).count());
        }
    }

    #[test]
    fn max_examples() {
        let r = max_distinct(2, 2, false, &opts(1)).unwrap();
        assert_eq!((r.max_k, r.witnesses[0].to_string()), (1, "aa".into()));

        let r = max_distinct(4, 2, false, &opts(2)).unwrap();
        assert_eq!(r.max_k, 2);
        assert!(r.witnesses.contains(&w("aaaa")));
        assert_eq!(r.enumerated, 8);

        let r = max_distinct(1, 3, false, &opts(1)).unwrap();
        assert_eq!((r.max_k, r.witnesses.clone()), (0, vec![w("a")]));

        let r = max_distinct(0, 2, false, &opts(1)).unwrap();
        assert_eq!((r.max_k, r.enumerated, r.witnesses[0].len()), (0, 1, 0));
    }

    #[test]
    fn constrained_with_no_qualifying_words() {
        let r = max_distinct(1, 2, true, &opts(1)).unwrap();
        assert_eq!((r.max_k, r.witnesses.len(), r.enumerated), (0, 0, 1));
    }

    #[test]
    fn witnesses_are_lexicographic_and_capped() {
        let options = SearchOptions { witness_cap: 3, ..opts(4) };
        let r = max_distinct(9, 3, false, &options).unwrap();
        let serial = max_distinct_serial(9, 3, false, 3);
        assert_eq!(r, serial);
        assert!(r.witnesses.len() <= 3);
        assert!(r.witnesses.windows(2).all(|p| p[0] < p[1]));
        for witness in &r.witnesses {
            assert_eq!(count_distinct_fast(witness).k, r.max_k);
        }
    }

    #[test]
    fn partition_examples() {
        let prefixes = |n, s, d| -> Vec<String> {
            partition_space(n, s, d, false)
                .unwrap()
                .into_iter()
                .map(|t| t.prefix.to_string())
                .collect()
        };
        assert_eq!(prefixes(3, 2, 1), vec!["a"]);
        assert_eq!(prefixes(3, 2, 2), vec!["aa", "ab"]);
        assert_eq!(prefixes(4, 3, 2), vec!["aa", "ab"]);
        assert_eq!(prefixes(4, 3, 0), vec![""]);
        assert!(partition_space(2, 2, 3, false).is_err());
    }

    #[test]
    fn partition_depth_does_not_change_result() {
        let base = max_distinct(8, 3, false, &SearchOptions { split_depth: Some(0), ..opts(1) }).unwrap();
        for depth in 1..=8 {
            let options = SearchOptions { split_depth: Some(depth), ..opts(3) };
            assert_eq!(max_distinct(8, 3, false, &options).unwrap(), base);
        }
    }

    #[test]
    fn merge_examples() {
        let r1 = MaxSearchResult {
            n: 3,
            sigma: 2,
            constrained: false,
            max_k: 1,
            witnesses: vec![w("aab")],
            enumerated: 2,
        };
        let r2 = MaxSearchResult {
            max_k: 2,
            witnesses: vec![w("aaa")],
            ..r1.clone()
        };
        assert_eq!(merge(std::slice::from_ref(&r1), 8).unwrap(), r1);
        let merged = merge(&[r1.clone(), r2.clone()], 8).unwrap();
        assert_eq!((merged.max_k, merged.witnesses.clone(), merged.enumerated), (2, vec![w("aaa")], 4));

        let other = MaxSearchResult { sigma: 3, ..r1.clone() };
        assert!(matches!(merge(&[r1, other], 8), Err(SearchError::Mismatch(_))));
        assert!(matches!(merge(&[], 8), Err(SearchError::EmptyMerge)));
    }

    #[test]
    fn merge_ignores_empty_constrained_parts() {
        let none = MaxSearchResult {
            n: 3,
            sigma: 2,
            constrained: true,
            max_k: 0,
            witnesses: vec![],
            enumerated: 2,
        };
        let some = MaxSearchResult {
            max_k: 0,
            witnesses: vec![w("aab")],
            ..none.clone()
        };
        let merged = merge(&[none.clone(), some], 8).unwrap();
        assert_eq!(merged.witnesses, vec![w("aab")]);
        assert_eq!(merge(&[none.clone(), none], 8).unwrap().witnesses.len(), 0);
    }

    #[test]
    fn bad_options_are_rejected() {
        let zero_workers = SearchOptions { workers: 0, ..Default::default() };
        assert!(max_distinct(3, 2, false, &zero_workers).is_err());
        let zero_cap = SearchOptions { witness_cap: 0, ..Default::default() };
        assert!(max_distinct(3, 2, false, &zero_cap).is_err());
    }

    #[test]
    fn task_constructor_checks_prefix() {
        assert!(SearchTask::new(w("ab"), 3, 2, false).is_ok());
        assert!(SearchTask::new(w("ba"), 3, 2, false).is_err());
        assert!(SearchTask::new(w("abc"), 3, 2, false).is_err());
        assert!(SearchTask::new(w("aaaa"), 3, 2, false).is_err());
    }

    #[test]
    fn json_record_shape() {
        let r = max_distinct(4, 2, false, &opts(1)).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"n":4,"sigma":2,"constrained":false,"max_k":2,"witnesses":["aaaa""#));
        assert_eq!(serde_json::from_str::<MaxSearchResult>(&json).unwrap(), r);
    }
}
