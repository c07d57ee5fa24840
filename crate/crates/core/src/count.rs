//! Counting distinct abelian-square factors.
//!
//! Two counters share one contract. [`count_distinct_oracle`] materializes
//! every even-length window and deduplicates by full string comparison.
//! [`count_distinct_fast`] scans candidates through a prefix Parikh table and
//! deduplicates through polynomial fingerprints, confirming every fingerprint
//! match by comparing the underlying symbols.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::word::{is_abelian_square, prefix_table, FactorRef, Word, WordError};

/// Positions of a word covered by at least one abelian-square occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CoverageMask(Vec<bool>);

impl CoverageMask {
    pub fn new(n: usize) -> Self {
        CoverageMask(vec![false; n])
    }

    pub fn mark(&mut self, factor: FactorRef) {
        self.0[factor.start..factor.end()].iter_mut().for_each(|b| *b = true);
    }

    pub fn is_set(&self, position: usize) -> bool {
        self.0.get(position).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// Rendered left to right, position 0 first.
impl fmt::Display for CoverageMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for CoverageMask {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid coverage bit {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(CoverageMask)
    }
}

impl Serialize for CoverageMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CoverageMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Position-independent identity of a factor: the leftmost occurrence of the
/// same string. Two keys are equal iff the factor strings are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistinctFactorKey {
    pub first_start: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountRecord", into = "CountRecord")]
pub struct CountResult {
    pub word: Word,
    pub k: usize,
    /// Every abelian-square occurrence, ordered by `(start, length)`.
    pub occurrences: Vec<FactorRef>,
    pub coverage: CoverageMask,
}

impl CountResult {
    pub fn last_symbol_covered(&self) -> bool {
        !self.word.is_empty() && self.coverage.is_set(self.word.len() - 1)
    }

    /// The distinct abelian-square factor strings, sorted.
    pub fn distinct_factors(&self) -> BTreeSet<Vec<u8>> {
        self.occurrences
            .iter()
            .map(|&f| self.word.factor(f).expect("occurrence in range").to_vec())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CountRecord {
    word: String,
    sigma: usize,
    k: usize,
    occurrences: Vec<FactorRef>,
    coverage: CoverageMask,
}

impl From<CountResult> for CountRecord {
    fn from(r: CountResult) -> Self {
        CountRecord {
            word: r.word.to_string(),
            sigma: r.word.sigma(),
            k: r.k,
            occurrences: r.occurrences,
            coverage: r.coverage,
        }
    }
}

impl TryFrom<CountRecord> for CountResult {
    type Error = WordError;

    fn try_from(r: CountRecord) -> Result<Self, Self::Error> {
        let word = Word::from_letters(&r.word)?.with_sigma(r.sigma)?;
        for &f in &r.occurrences {
            word.check(f)?;
        }
        if r.coverage.len() != word.len() {
            return Err(WordError::OutOfRange {
                start: 0,
                length: r.coverage.len(),
                n: word.len(),
            });
        }
        Ok(CountResult {
            word,
            k: r.k,
            occurrences: r.occurrences,
            coverage: r.coverage,
        })
    }
}

fn coverage_of(n: usize, occurrences: &[FactorRef]) -> CoverageMask {
    let mut mask = CoverageMask::new(n);
    for &f in occurrences {
        mask.mark(f);
    }
    mask
}

/// Reference counter: every even window is recounted from scratch and the
/// abelian-square strings are deduplicated in an ordered set.
pub fn count_distinct_oracle(word: &Word) -> CountResult {
    let n = word.len();
    let mut occurrences = Vec::new();
    let mut distinct: BTreeSet<Vec<u8>> = BTreeSet::new();
    for start in 0..n {
        for length in (2..=n - start).step_by(2) {
            let f = FactorRef::new(start, length);
            if is_abelian_square(word, f).expect("even in-range window") {
                occurrences.push(f);
                distinct.insert(word.symbols()[start..start + length].to_vec());
            }
        }
    }
    let coverage = coverage_of(n, &occurrences);
    CountResult {
        word: word.clone(),
        k: distinct.len(),
        occurrences,
        coverage,
    }
}

// Mersenne prime 2^61 - 1 keeps products in u128 exact.
const MODULUS: u64 = (1 << 61) - 1;
const BASE: u64 = 0x1f3d_5b79_a1c3_e5f7 % MODULUS;

fn mul_mod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

/// Prefix fingerprints of a symbol sequence, giving O(1) window hashes.
struct Fingerprints {
    prefix: Vec<u64>,
    powers: Vec<u64>,
}

impl Fingerprints {
    fn new(symbols: &[u8]) -> Self {
        let mut prefix = Vec::with_capacity(symbols.len() + 1);
        let mut powers = Vec::with_capacity(symbols.len() + 1);
        prefix.push(0);
        powers.push(1);
        for &s in symbols {
            let h = *prefix.last().unwrap();
            prefix.push(add_mod(mul_mod(h, BASE), s as u64 + 1));
            powers.push(mul_mod(*powers.last().unwrap(), BASE));
        }
        Fingerprints { prefix, powers }
    }

    fn window(&self, f: FactorRef) -> u64 {
        let scaled = mul_mod(self.prefix[f.start], self.powers[f.length]);
        sub_mod(self.prefix[f.end()], scaled)
    }
}

/// Maps occurrences to [`DistinctFactorKey`]s. Fingerprints only select
/// candidate keys; equality is always confirmed on the symbols themselves.
pub struct FactorKeyIndex<'w> {
    symbols: &'w [u8],
    fingerprints: Fingerprints,
    buckets: HashMap<(u64, usize), Vec<usize>>,
    distinct: usize,
}

impl<'w> FactorKeyIndex<'w> {
    pub fn new(symbols: &'w [u8]) -> Self {
        FactorKeyIndex {
            symbols,
            fingerprints: Fingerprints::new(symbols),
            buckets: HashMap::new(),
            distinct: 0,
        }
    }

    /// Returns the key of `f` and whether it had not been seen before.
    /// Occurrences must be inserted left to right for `first_start` to be the
    /// leftmost occurrence.
    pub fn insert(&mut self, f: FactorRef) -> (DistinctFactorKey, bool) {
        let text = &self.symbols[f.start..f.end()];
        let bucket = self
            .buckets
            .entry((self.fingerprints.window(f), f.length))
            .or_default();
        for &start in bucket.iter() {
            if &self.symbols[start..start + f.length] == text {
                return (DistinctFactorKey { first_start: start, length: f.length }, false);
            }
        }
        bucket.push(f.start);
        self.distinct += 1;
        (DistinctFactorKey { first_start: f.start, length: f.length }, true)
    }

    pub fn distinct(&self) -> usize {
        self.distinct
    }
}

/// Candidate scan over the prefix Parikh table, O(n^2 * sigma) tests.
pub fn count_distinct_fast(word: &Word) -> CountResult {
    let n = word.len();
    let table = prefix_table(word);
    let mut index = FactorKeyIndex::new(word.symbols());
    let mut occurrences = Vec::new();
    for start in 0..n {
        for half in 1..=(n - start) / 2 {
            if table.is_square_at(start, half) {
                let f = FactorRef::new(start, 2 * half);
                occurrences.push(f);
                index.insert(f);
            }
        }
    }
    let coverage = coverage_of(n, &occurrences);
    CountResult {
        word: word.clone(),
        k: index.distinct(),
        occurrences,
        coverage,
    }
}

pub fn distinct_count(word: &Word) -> usize {
    count_distinct_fast(word).k
}

pub fn coverage_mask(word: &Word) -> CoverageMask {
    count_distinct_fast(word).coverage
}

/// Whether an abelian-square occurrence contains the last position. Since
/// occurrences are contiguous this is the same as one ending at `n`.
pub fn last_symbol_covered(word: &Word) -> Result<bool, WordError> {
    if word.is_empty() {
        return Err(WordError::EmptyWord);
    }
    Ok(ends_with_square(word.symbols(), word.sigma()))
}

pub(crate) fn ends_with_square(symbols: &[u8], sigma: usize) -> bool {
    let n = symbols.len();
    let mut diff = [0i32; crate::word::MAX_SIGMA];
    // Grow the suffix two symbols at a time while tracking (left - right)
    // counts of its halves.
    let mut length = 0;
    while length + 2 <= n {
        let half = length / 2;
        // The new suffix of length L+2 has halves shifted by one: the symbol
        // at the old midpoint moves from the left half to the right half.
        let mid_old = n - half - 1;
        diff[symbols[mid_old] as usize] -= 2;
        diff[symbols[n - length - 1] as usize] += 1;
        diff[symbols[n - length - 2] as usize] += 1;
        length += 2;
        if diff[..sigma].iter().all(|&d| d == 0) {
            return true;
        }
    }
    false
}
