//! Words over small dense alphabets, Parikh vectors, and canonical
//! (restricted-growth) representatives of symbol-renaming classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest alphabet that the letter I/O format can express.
pub const MAX_SIGMA: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("symbol {symbol} is outside the alphabet of size {sigma}")]
    SymbolOutOfAlphabet { symbol: u8, sigma: usize },
    #[error("alphabet size {0} is not supported (allowed 1..={MAX_SIGMA})")]
    BadAlphabet(usize),
    #[error("invalid symbol {ch:?} at column {column}")]
    InvalidLetter { ch: char, column: usize },
    #[error("factor ({start}, {length}) exceeds word length {n}")]
    OutOfRange { start: usize, length: usize, n: usize },
    #[error("factor of length {0} is not an abelian-square candidate (need even length >= 2)")]
    NotCandidate(usize),
    #[error("the empty word has no last symbol")]
    EmptyWord,
}

/// A symbol id, dense in `0..sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn letter(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn from_letter(ch: char) -> Option<Symbol> {
        if ch.is_ascii_lowercase() {
            Some(Symbol(ch as u8 - b'a'))
        } else {
            None
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.letter())
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Symbol::from_letter), chars.next()) {
            (Some(sym), None) => Ok(sym),
            _ => Err(serde::de::Error::custom(format!("invalid symbol {s:?}"))),
        }
    }
}

/// A finite word together with the size of the alphabet it is drawn from.
///
/// Symbols are stored as raw bytes; every byte is below `sigma`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    symbols: Vec<u8>,
    sigma: usize,
}

impl Word {
    pub fn new(symbols: Vec<u8>, sigma: usize) -> Result<Self, WordError> {
        if sigma == 0 || sigma > MAX_SIGMA {
            return Err(WordError::BadAlphabet(sigma));
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s as usize >= sigma) {
            return Err(WordError::SymbolOutOfAlphabet { symbol, sigma });
        }
        Ok(Word { symbols, sigma })
    }

    /// Builds a word whose alphabet is `1 + max symbol` (or 1 when empty).
    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self, WordError> {
        let sigma = symbols.iter().map(|&s| s as usize + 1).max().unwrap_or(1);
        Word::new(symbols, sigma)
    }

    /// Parses letters `a..z`; the alphabet is inferred.
    pub fn from_letters(text: &str) -> Result<Self, WordError> {
        let symbols = text
            .chars()
            .enumerate()
            .map(|(column, ch)| {
                Symbol::from_letter(ch)
                    .map(|s| s.0)
                    .ok_or(WordError::InvalidLetter { ch, column: column + 1 })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::from_symbols(symbols)
    }

    pub fn empty(sigma: usize) -> Result<Self, WordError> {
        Word::new(Vec::new(), sigma)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> Symbol {
        Symbol(self.symbols[index])
    }

    pub fn last(&self) -> Option<Symbol> {
        self.symbols.last().map(|&s| Symbol(s))
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    /// Same symbols, alphabet shrunk to `1 + max symbol`.
    pub fn tight(&self) -> Word {
        Word::from_symbols(self.symbols.clone()).expect("symbols already validated")
    }

    pub fn with_sigma(&self, sigma: usize) -> Result<Word, WordError> {
        Word::new(self.symbols.clone(), sigma)
    }

    /// Appends one symbol, growing the alphabet if needed.
    pub fn appended(&self, symbol: Symbol) -> Result<Word, WordError> {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol.0);
        Word::new(symbols, self.sigma.max(symbol.0 as usize + 1))
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word { symbols, sigma: self.sigma }
    }

    /// Applies `perm` (a bijection on `0..sigma`) to every symbol.
    pub fn renamed(&self, perm: &[u8]) -> Result<Word, WordError> {
        if perm.len() != self.sigma {
            return Err(WordError::BadAlphabet(perm.len()));
        }
        let symbols = self.symbols.iter().map(|&s| perm[s as usize]).collect();
        Word::new(symbols, self.sigma)
    }

    pub fn whole(&self) -> FactorRef {
        FactorRef { start: 0, length: self.len() }
    }

    pub fn check(&self, factor: FactorRef) -> Result<(), WordError> {
        match factor.start.checked_add(factor.length) {
            Some(end) if end <= self.len() => Ok(()),
            _ => Err(WordError::OutOfRange {
                start: factor.start,
                length: factor.length,
                n: self.len(),
            }),
        }
    }

    pub fn factor(&self, factor: FactorRef) -> Result<&[u8], WordError> {
        self.check(factor)?;
        Ok(&self.symbols[factor.start..factor.end()])
    }

    /// Number of distinct symbols that actually occur.
    pub fn distinct_symbols(&self) -> usize {
        let mut seen = [false; MAX_SIGMA];
        self.symbols.iter().for_each(|&s| seen[s as usize] = true);
        seen.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{}", Symbol(s).letter())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::from_letters(s)
    }
}

/// Serialized as its letter string; the alphabet is inferred on the way back.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::from_letters(&s).map_err(serde::de::Error::custom)
    }
}

/// A window `[start, start + length)` of some word. The context words on either
/// side are the prefix before `start` and the suffix after `end()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct FactorRef {
    pub start: usize,
    pub length: usize,
}

impl FactorRef {
    pub fn new(start: usize, length: usize) -> Self {
        FactorRef { start, length }
    }

    pub fn end(&self) -> usize {
        self.start + self.length
    }

    pub fn contains(&self, position: usize) -> bool {
        self.start <= position && position < self.end()
    }
}

impl From<(usize, usize)> for FactorRef {
    fn from((start, length): (usize, usize)) -> Self {
        FactorRef { start, length }
    }
}

impl From<FactorRef> for (usize, usize) {
    fn from(f: FactorRef) -> Self {
        (f.start, f.length)
    }
}

/// Per-symbol occurrence counts of a window.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParikhVector(pub Vec<u32>);

impl ParikhVector {
    pub fn zero(sigma: usize) -> Self {
        ParikhVector(vec![0; sigma])
    }

    pub fn of(symbols: &[u8], sigma: usize) -> Self {
        let mut counts = vec![0; sigma];
        for &s in symbols {
            counts[s as usize] += 1;
        }
        ParikhVector(counts)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }
}

/// Cumulative Parikh vectors of every prefix, stored row-major in one buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixParikhTable {
    sigma: usize,
    rows: Vec<u32>,
}

impl PrefixParikhTable {
    pub fn new(word: &Word) -> Self {
        let sigma = word.sigma();
        let mut table = PrefixParikhTable {
            sigma,
            rows: Vec::with_capacity((word.len() + 1) * sigma),
        };
        table.rows.resize(sigma, 0);
        for &s in word.symbols() {
            table.push(s);
        }
        table
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Number of symbols covered, i.e. rows minus one.
    pub fn len(&self) -> usize {
        self.rows.len() / self.sigma - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i * self.sigma..(i + 1) * self.sigma]
    }

    pub fn rows(&self) -> impl Iterator<Item = ParikhVector> + '_ {
        self.rows.chunks_exact(self.sigma).map(|r| ParikhVector(r.to_vec()))
    }

    pub(crate) fn push(&mut self, symbol: u8) {
        let base = self.rows.len() - self.sigma;
        self.rows.extend_from_within(base..);
        let last = self.rows.len() - self.sigma;
        self.rows[last + symbol as usize] += 1;
    }

    pub(crate) fn pop(&mut self) {
        debug_assert!(!self.is_empty());
        self.rows.truncate(self.rows.len() - self.sigma);
    }

    pub fn parikh(&self, factor: FactorRef) -> Result<ParikhVector, WordError> {
        if factor.end() > self.len() {
            return Err(WordError::OutOfRange {
                start: factor.start,
                length: factor.length,
                n: self.len(),
            });
        }
        let (lo, hi) = (self.row(factor.start), self.row(factor.end()));
        Ok(ParikhVector(hi.iter().zip(lo).map(|(h, l)| h - l).collect()))
    }

    /// Whether the window of length `2 * half` at `start` is an abelian square.
    /// Both halves agree exactly when `2 * row[mid] == row[start] + row[end]`.
    #[inline]
    pub fn is_square_at(&self, start: usize, half: usize) -> bool {
        let sigma = self.sigma;
        let a = &self.rows[start * sigma..(start + 1) * sigma];
        let m = &self.rows[(start + half) * sigma..(start + half + 1) * sigma];
        let b = &self.rows[(start + 2 * half) * sigma..(start + 2 * half + 1) * sigma];
        a.iter().zip(m).zip(b).all(|((a, m), b)| 2 * m == a + b)
    }
}

/// Symbol counts of a window, recounted directly from the word.
pub fn parikh(word: &Word, factor: FactorRef) -> Result<ParikhVector, WordError> {
    Ok(ParikhVector::of(word.factor(factor)?, word.sigma()))
}

pub fn prefix_table(word: &Word) -> PrefixParikhTable {
    PrefixParikhTable::new(word)
}

/// Abelian-square test for one window; the window must have even length
/// of at least 2.
pub fn is_abelian_square(word: &Word, factor: FactorRef) -> Result<bool, WordError> {
    word.check(factor)?;
    if factor.length < 2 || !factor.length.is_multiple_of(2) {
        return Err(WordError::NotCandidate(factor.length));
    }
    let half = factor.length / 2;
    let first = parikh(word, FactorRef::new(factor.start, half))?;
    let second = parikh(word, FactorRef::new(factor.start + half, half))?;
    Ok(first == second)
}

/// Relabels symbols so that first occurrences appear as `0, 1, 2, ...`.
///
/// The alphabet of the result is the alphabet of the input.
pub fn canonical_form(word: &Word) -> Word {
    let mut map = [u8::MAX; MAX_SIGMA];
    let mut next = 0u8;
    let symbols = word
        .symbols()
        .iter()
        .map(|&s| {
            let slot = &mut map[s as usize];
            if *slot == u8::MAX {
                *slot = next;
                next += 1;
            }
            *slot
        })
        .collect();
    Word::new(symbols, word.sigma()).expect("relabelling never grows the alphabet")
}

pub fn is_canonical(symbols: &[u8]) -> bool {
    let mut bound = 0u8;
    for &s in symbols {
        if s > bound {
            return false;
        }
        if s == bound {
            bound += 1;
        }
    }
    true
}

/// Restricted-growth strings of a fixed length in lexicographic order.
///
/// Each yielded word has alphabet `sigma_max` (capped at the letter range).
#[derive(Debug, Clone)]
pub struct CanonicalWords {
    current: Vec<u8>,
    // running[i] = number of distinct symbols in current[..=i]
    running: Vec<u8>,
    sigma: u8,
    done: bool,
}

impl CanonicalWords {
    fn new(n: usize, sigma_max: usize) -> Self {
        let sigma = sigma_max.clamp(1, MAX_SIGMA) as u8;
        CanonicalWords {
            current: vec![0; n],
            running: vec![1; n],
            sigma,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.current.len();
        for i in (1..n).rev() {
            let used = self.running[i - 1];
            let limit = used.min(self.sigma - 1);
            if self.current[i] < limit {
                self.current[i] += 1;
                self.running[i] = used.max(self.current[i] + 1);
                for j in i + 1..n {
                    self.current[j] = 0;
                    self.running[j] = self.running[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for CanonicalWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let word = Word::new(self.current.clone(), self.sigma as usize).ok();
        self.done = !self.advance();
        word
    }
}

/// One representative per renaming class of words of length `n` using at
/// most `sigma_max` distinct symbols, in lexicographic order.
pub fn enumerate_canonical(n: usize, sigma_max: usize) -> CanonicalWords {
    CanonicalWords::new(n, sigma_max)
}
