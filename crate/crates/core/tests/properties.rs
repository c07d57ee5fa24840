use std::collections::BTreeSet;

use absq_core::search::{self, max_distinct_serial};
use absq_core::*;
use proptest::prelude::*;

fn all_words(n: usize, sigma: usize) -> impl Iterator<Item = Word> {
    let total = sigma.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut symbols = vec![0u8; n];
        for slot in symbols.iter_mut().rev() {
            *slot = (code % sigma) as u8;
            code /= sigma;
        }
        Word::new(symbols, sigma).unwrap()
    })
}

fn normalized(mut r: CountResult) -> CountResult {
    r.occurrences.sort();
    r
}

fn word_strategy(max_len: usize, max_sigma: usize) -> impl Strategy<Value = Word> {
    (1..=max_sigma).prop_flat_map(move |sigma| {
        prop::collection::vec(0..sigma as u8, 0..=max_len)
            .prop_map(move |symbols| Word::new(symbols, sigma).unwrap())
    })
}

#[test]
fn enumeration_covers_every_renaming_class_once() {
    for sigma in 1..=3 {
        for n in 0..=8 {
            let listed: Vec<Word> = enumerate_canonical(n, sigma).collect();
            let unique: BTreeSet<&Word> = listed.iter().collect();
            assert_eq!(unique.len(), listed.len(), "duplicates at n={n} sigma={sigma}");
            assert!(listed.windows(2).all(|p| p[0] < p[1]), "order at n={n} sigma={sigma}");
            for w in &listed {
                assert_eq!(&canonical_form(w), w);
            }
            let classes: BTreeSet<Word> = all_words(n, sigma).map(|w| canonical_form(&w)).collect();
            assert_eq!(classes, unique.into_iter().cloned().collect(), "n={n} sigma={sigma}");
        }
    }
}

#[test]
fn partition_visits_each_canonical_word_once() {
    for sigma in 1..=3 {
        for n in 0..=9 {
            for depth in [0, n / 2, n] {
                let mut visited = Vec::new();
                for task in partition_space(n, sigma, depth, false).unwrap() {
                    let extensions = enumerate_canonical(n, sigma)
                        .filter(|w| w.symbols().starts_with(task.prefix.symbols()));
                    visited.extend(extensions);
                }
                let expected: Vec<Word> = enumerate_canonical(n, sigma).collect();
                assert_eq!(visited, expected, "n={n} sigma={sigma} depth={depth}");
            }
        }
    }
}

#[test]
fn max_distinct_is_monotone() {
    let options = SearchOptions::with_workers(4);
    let mut previous_n: Vec<usize> = vec![0; 5];
    for n in 0..=9 {
        let mut previous_sigma = 0;
        #[allow(clippy::needless_range_loop)]
        for sigma in 1..=4 {
            let r = max_distinct(n, sigma, false, &options).unwrap();
            assert!(r.max_k >= previous_sigma, "sigma monotonicity at n={n}");
            assert!(r.max_k >= previous_n[sigma], "n monotonicity at n={n} sigma={sigma}");
            assert!(4 * r.max_k <= n * n + 2 * n);
            for witness in &r.witnesses {
                assert_eq!(count_distinct_oracle(witness).k, r.max_k);
                assert!(witness.distinct_symbols() <= sigma && witness.len() == n);
            }
            previous_sigma = r.max_k;
            previous_n[sigma] = r.max_k;
        }
    }
}

#[test]
fn binary_search_paths_agree() {
    for n in 0..=12 {
        let parallel = max_distinct(n, 2, false, &SearchOptions::with_workers(3)).unwrap();
        assert_eq!(parallel, max_distinct_serial(n, 2, false, 8));
        let brute = (0..1u32 << n)
            .map(|code| {
                let symbols = (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect();
                count_distinct_oracle(&Word::new(symbols, 2).unwrap()).k
            })
            .max()
            .unwrap();
        assert_eq!(parallel.max_k, brute, "n={n}");
    }
}

#[test]
fn conjecture_verdict_matches_double_loop() {
    let options = SearchOptions::with_workers(2);
    for sigma in 2..=3 {
        for n in 0..=7 {
            let report = verify_conjecture(n, sigma, &options).unwrap();
            let binary: Vec<usize> = all_words(n, 2).map(|w| count_distinct_oracle(&w).k).collect();
            let direct = all_words(n, sigma).all(|w| {
                let k = count_distinct_oracle(&w).k;
                binary.iter().any(|&b| b >= k)
            });
            assert_eq!(report.holds, direct, "n={n} sigma={sigma}");
        }
    }
}

#[test]
fn lemma_with_binary_alphabet_always_holds() {
    let options = SearchOptions::with_workers(2);
    for n in 1..=10 {
        assert!(check_lemma1(n, 2, &options).unwrap().holds, "n={n}");
    }
}

proptest! {
    #[test]
    fn table_parikh_matches_recount(word in word_strategy(24, 5), a in 0usize..25, b in 0usize..25) {
        let table = prefix_table(&word);
        let (lo, hi) = (a.min(b).min(word.len()), a.max(b).min(word.len()));
        let f = FactorRef::new(lo, hi - lo);
        prop_assert_eq!(table.parikh(f).unwrap(), parikh(&word, f).unwrap());
        prop_assert_eq!(table.row(word.len()).iter().sum::<u32>() as usize, word.len());
    }

    #[test]
    fn canonical_form_is_idempotent(word in word_strategy(20, 5)) {
        let once = canonical_form(&word);
        prop_assert_eq!(canonical_form(&once), once.clone());
        prop_assert_eq!(count_distinct_fast(&once).k, count_distinct_fast(&word).k);
    }

    #[test]
    fn abelian_square_ignores_renaming_and_reversal(word in word_strategy(16, 4), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        prop_assume!(word.len() >= 2);
        let half = 1 + b.index(word.len() / 2);
        let start = a.index(word.len() - 2 * half + 1);
        let f = FactorRef::new(start, 2 * half);
        let expected = is_abelian_square(&word, f).unwrap();
        let sigma = word.sigma();
        let perm: Vec<u8> = (0..sigma as u8).rev().collect();
        prop_assert_eq!(is_abelian_square(&word.renamed(&perm).unwrap(), f).unwrap(), expected);
        let mirrored = FactorRef::new(word.len() - f.end(), f.length);
        prop_assert_eq!(is_abelian_square(&word.reversed(), mirrored).unwrap(), expected);
    }

    #[test]
    fn fast_counter_matches_oracle(word in word_strategy(30, 5)) {
        prop_assert_eq!(normalized(count_distinct_fast(&word)), normalized(count_distinct_oracle(&word)));
    }

    #[test]
    fn count_result_invariants(word in word_strategy(30, 4)) {
        let r = count_distinct_fast(&word);
        let n = word.len();
        prop_assert!(r.k <= r.occurrences.len());
        prop_assert!(4 * r.k <= n * n + 2 * n);
        prop_assert_eq!(r.k, r.distinct_factors().len());
        for &f in &r.occurrences {
            prop_assert!(is_abelian_square(&word, f).unwrap());
            prop_assert!((f.start..f.end()).all(|p| r.coverage.is_set(p)));
        }
        for p in 0..n {
            prop_assert_eq!(r.coverage.is_set(p), r.occurrences.iter().any(|f| f.contains(p)));
        }
    }

    #[test]
    fn count_record_round_trips(word in word_strategy(20, 4)) {
        let r = count_distinct_fast(&word);
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<CountResult>(&json).unwrap(), r);
    }
}

#[test]
fn max_distinct_is_identical_across_worker_counts() {
    for (n, sigma, constrained) in [(10, 2, false), (9, 3, true), (8, 4, false)] {
        let runs: Vec<MaxSearchResult> = [1, 2, 8]
            .iter()
            .map(|&w| max_distinct(n, sigma, constrained, &SearchOptions::with_workers(w)).unwrap())
            .collect();
        assert!(runs.iter().all(|r| r == &runs[0]), "n={n} sigma={sigma}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn merge_ignores_grouping_and_order(
        depth in 0usize..=8,
        groups in prop::collection::vec(0usize..3, 64),
        order in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let tasks = partition_space(8, 3, depth, false).unwrap();
        let parts: Vec<MaxSearchResult> = tasks.iter().map(|t| search::run_task(t, 8)).collect();
        let full = merge(&parts, 8).unwrap();
        prop_assert_eq!(&full, &max_distinct_serial(8, 3, false, 8));

        let mut buckets: Vec<Vec<MaxSearchResult>> = vec![Vec::new(); 3];
        for (i, part) in parts.into_iter().enumerate() {
            buckets[groups[i % groups.len()]].push(part);
        }
        let partials: Vec<MaxSearchResult> = order
            .iter()
            .filter(|&&g| !buckets[g].is_empty())
            .map(|&g| merge(&buckets[g], 8).unwrap())
            .collect();
        prop_assert_eq!(merge(&partials, 8).unwrap(), full);
    }
}
