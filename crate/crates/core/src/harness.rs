//! Executable checks for the binary-maximality statement, its covered-last-
//! symbol variant, and the single-symbol extension steps used to argue them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::count::{count_distinct_fast, CountResult};
use crate::search::{collect_canonical, max_distinct, MaxSearchResult, SearchError, SearchOptions};
use crate::word::{enumerate_canonical, Symbol, Word};

/// Comparison of binary and general-alphabet maxima at one length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub sigma_max: usize,
    /// sigma -> max distinct count over words on at most sigma symbols.
    #[serde(rename = "A_values")]
    pub a_values: BTreeMap<usize, usize>,
    #[serde(rename = "B")]
    pub b: usize,
    pub holds: bool,
    pub witness_general: Word,
    pub witness_binary: Word,
}

pub fn verify_conjecture(
    n: usize,
    sigma_max: usize,
    options: &SearchOptions,
) -> Result<ConjectureReport, SearchError> {
    if sigma_max < 2 {
        return Err(SearchError::Options(format!("sigma_max must be at least 2, got {sigma_max}")));
    }
    let mut a_values = BTreeMap::new();
    let mut results = Vec::new();
    for sigma in 2..=sigma_max {
        let r = max_distinct(n, sigma, false, options)?;
        a_values.insert(sigma, r.max_k);
        results.push(r);
    }
    let binary = &results[0];
    let general = results.last().unwrap();
    Ok(ConjectureReport {
        n,
        sigma_max,
        b: binary.max_k,
        holds: binary.max_k >= general.max_k,
        witness_general: general.best_witness().cloned().expect("unconstrained search has a witness"),
        witness_binary: binary.best_witness().cloned().expect("unconstrained search has a witness"),
        a_values,
    })
}

/// Covered-last-symbol words over `sigma` symbols that beat every covered
/// binary word of the same length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheckResult {
    pub n: usize,
    pub sigma: usize,
    #[serde(rename = "L_binary")]
    pub l_binary: usize,
    pub violators: Vec<Word>,
    pub holds: bool,
}

pub fn check_lemma1(n: usize, sigma: usize, options: &SearchOptions) -> Result<LemmaCheckResult, SearchError> {
    if n == 0 {
        return Err(SearchError::Options("n must be at least 1".into()));
    }
    if sigma < 2 {
        return Err(SearchError::Options(format!("sigma must be at least 2, got {sigma}")));
    }
    let binary = max_distinct(n, 2, true, options)?;
    // With no covered binary word every covered word is a violator.
    let l_binary = binary.max_k;
    let no_binary = binary.witnesses.is_empty();
    let violators = collect_canonical(n, sigma, options, |leaf| {
        (leaf.covered && (no_binary || leaf.k > l_binary))
            .then(|| Word::from_symbols(leaf.symbols.to_vec()).unwrap())
    })?;
    Ok(LemmaCheckResult {
        n,
        sigma,
        l_binary,
        holds: violators.is_empty(),
        violators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    /// Uncovered last symbol: appending it again gains at least one factor.
    #[serde(rename = "conjecture-step-kplus1")]
    ConjectureStepKPlus1,
    /// Covered last symbol: appending it again keeps the count unchanged.
    #[serde(rename = "lemma-step-k-equality")]
    LemmaStepKEquality,
    /// Appending the last symbol again never loses a factor.
    #[serde(rename = "lemma-step-k-lowerbound")]
    LemmaStepKLowerbound,
    /// After appending the last symbol again, the last symbol is covered.
    #[serde(rename = "lemma-step-coverage")]
    LemmaStepCoverage,
}

impl ClaimId {
    pub const ALL: [ClaimId; 4] = [
        ClaimId::ConjectureStepKPlus1,
        ClaimId::LemmaStepKEquality,
        ClaimId::LemmaStepKLowerbound,
        ClaimId::LemmaStepCoverage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::ConjectureStepKPlus1 => "conjecture-step-kplus1",
            ClaimId::LemmaStepKEquality => "lemma-step-k-equality",
            ClaimId::LemmaStepKLowerbound => "lemma-step-k-lowerbound",
            ClaimId::LemmaStepCoverage => "lemma-step-coverage",
        }
    }

    /// Claims that follow from the counting definitions; a violation means
    /// the counter is wrong.
    pub fn is_theorem(self) -> bool {
        matches!(self, ClaimId::LemmaStepKLowerbound | ClaimId::LemmaStepCoverage)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStepCounterexample {
    pub claim_id: ClaimId,
    pub w: Word,
    pub x: Symbol,
    pub k_w: usize,
    pub k_wx: usize,
    pub details: String,
}

fn check_extension(w: &Word) -> Vec<ProofStepCounterexample> {
    let x = w.last().expect("nonempty word");
    let wx = w.appended(x).expect("same alphabet");
    let before: CountResult = count_distinct_fast(w);
    let after = count_distinct_fast(&wx);
    let (k_w, k_wx) = (before.k, after.k);
    let covered_w = before.last_symbol_covered();
    let covered_wx = after.last_symbol_covered();
    let mut out = Vec::new();
    let mut emit = |claim_id, details: String| {
        out.push(ProofStepCounterexample {
            claim_id,
            w: w.clone(),
            x,
            k_w,
            k_wx,
            details,
        })
    };
    if !covered_w && k_wx < k_w + 1 {
        emit(
            ClaimId::ConjectureStepKPlus1,
            format!("last symbol of {w} is uncovered but k({wx}) = {k_wx} < k({w}) + 1 = {}", k_w + 1),
        );
    }
    if covered_w && k_wx != k_w {
        emit(
            ClaimId::LemmaStepKEquality,
            format!("last symbol of {w} is covered but k({wx}) = {k_wx} != k({w}) = {k_w}"),
        );
    }
    if k_wx < k_w {
        emit(ClaimId::LemmaStepKLowerbound, format!("k({wx}) = {k_wx} < k({w}) = {k_w}"));
    }
    if !covered_wx {
        emit(ClaimId::LemmaStepCoverage, format!("last symbol of {wx} is not covered"));
    }
    out
}

/// Tests the four extension claims on every canonical word of length
/// `1..=n_max` over at most `sigma` symbols. Results are ordered by word
/// length, then word, then claim.
pub fn falsify_proof_steps(
    n_max: usize,
    sigma: usize,
    options: &SearchOptions,
) -> Result<Vec<ProofStepCounterexample>, SearchError> {
    if n_max == 0 {
        return Err(SearchError::Options("n_max must be at least 1".into()));
    }
    let pool = options.pool()?;
    let words: Vec<Word> = (1..=n_max)
        .flat_map(|n| enumerate_canonical(n, sigma).map(|w| w.tight()))
        .collect();
    let found: Vec<Vec<ProofStepCounterexample>> =
        pool.install(|| words.par_iter().map(check_extension).collect());
    Ok(found.into_iter().flatten().collect())
}

/// Lexicographically least binary words reaching a distinct count, with
/// optional lookups into precomputed binary maxima.
#[derive(Debug, Default, Clone)]
pub struct BinaryImageFinder {
    maxima: HashMap<(usize, bool), usize>,
}

impl BinaryImageFinder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a binary search result so impossible requests fail fast.
    pub fn with_table(mut self, results: impl IntoIterator<Item = MaxSearchResult>) -> Self {
        for r in results.into_iter().filter(|r| r.sigma == 2) {
            let best = if r.witnesses.is_empty() { None } else { Some(r.max_k) };
            if let Some(best) = best {
                self.maxima.insert((r.n, r.constrained), best);
            }
        }
        self
    }

    pub fn find(&self, n: usize, k: usize, require_covered: bool) -> Option<Word> {
        if let Some(&best) = self.maxima.get(&(n, require_covered)) {
            if best < k {
                return None;
            }
        }
        // A word starting with `b` has a smaller mirror starting with `a`, so
        // canonical binary words suffice.
        enumerate_canonical(n, 2).map(|w| w.tight()).find(|w| {
            let r = count_distinct_fast(w);
            r.k >= k && (!require_covered || r.last_symbol_covered())
        })
    }
}

pub fn binary_image_exists(n: usize, k: usize, require_covered: bool) -> Option<Word> {
    BinaryImageFinder::new().find(n, k, require_covered)
}
