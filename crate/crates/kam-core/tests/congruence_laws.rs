//! Congruence closure against the brute-force least-congruence oracle, and
//! the quotient constructions.

mod support;

use std::sync::Arc;

use kam_core::{
    catalog, congruence_closure, free_module, module_iso_search, quotient_module,
    regular_bimodule, KleeneModule, TraceEvent,
};
use proptest::prelude::*;
use support::*;

fn small_modules() -> Vec<Arc<KleeneModule>> {
    let limits = limits();
    catalog::module_catalog(&limits)
        .unwrap()
        .into_iter()
        .filter(|m| m.size() <= 4)
        .collect()
}

#[test]
fn closure_matches_partition_oracle_on_all_single_pairs() {
    let limits = limits();
    for m in small_modules() {
        for x in 0..m.size() {
            for y in 0..m.size() {
                let pairs = [(x, y)];
                let cong = congruence_closure(&m, &pairs, &limits).unwrap();
                let oracle = brute_least_congruence(&m, &pairs);
                let got: Vec<usize> = cong.class_of.iter().map(|&c| c as usize).collect();
                assert_eq!(got, oracle, "{} with pair ({x},{y})", m.name);
            }
        }
    }
}

#[test]
fn closure_matches_partition_oracle_on_pair_sets() {
    let limits = limits();
    for m in small_modules() {
        let n = m.size();
        if n < 2 {
            continue;
        }
        let pair_sets: Vec<Vec<(usize, usize)>> = vec![
            vec![(0, n - 1), (n / 2, 0)],
            vec![(n - 1, n / 2)],
            (0..n - 1).map(|i| (i, i + 1)).collect(),
        ];
        for pairs in pair_sets {
            let cong = congruence_closure(&m, &pairs, &limits).unwrap();
            let oracle = brute_least_congruence(&m, &pairs);
            let got: Vec<usize> = cong.class_of.iter().map(|&c| c as usize).collect();
            assert_eq!(got, oracle, "{} with pairs {pairs:?}", m.name);
        }
    }
}

#[test]
fn empty_quotient_is_isomorphic_to_the_module() {
    let limits = limits();
    let k = bool2();
    let m = free_module(&k, 2, true, true, &limits).unwrap();
    let (q, cong) = quotient_module(&m, &[], &limits).unwrap();
    assert_eq!(cong.class_count(), m.size());
    assert!(module_iso_search(&q, &m, &limits).unwrap().is_some());
}

#[test]
fn identifying_everything_gives_the_trivial_module() {
    let limits = limits();
    let k = bool2();
    let m = regular_bimodule(&k, &limits).unwrap();
    let (q, _) = quotient_module(&m, &[(0, 1)], &limits).unwrap();
    assert_eq!(q.size(), 1);
    assert!(q.check_module_axioms().unwrap().passed());
}

#[test]
fn quotient_of_free_rank_two_by_identified_basis_is_free_rank_one() {
    let limits = limits();
    let k = bool2();
    let m = free_module(&k, 2, true, true, &limits).unwrap();
    let basis = m.left_free.as_ref().unwrap().basis.clone();
    let (q, _) = quotient_module(&m, &[(basis[0], basis[1])], &limits).unwrap();
    let rank1 = free_module(&k, 1, true, true, &limits).unwrap();
    assert!(module_iso_search(&q, &rank1, &limits).unwrap().is_some());
}

#[test]
fn collapsing_top_to_zero_collapses_all_of_bool2() {
    // With 1 = 0, every y <= 1 is squeezed: y = y + 1 ~ y + 0 = y collapses
    // through add-compatibility to a single class.
    let limits = limits();
    let k = bool2();
    let m = regular_bimodule(&k, &limits).unwrap();
    let cong = congruence_closure(&m, &[(1, 0)], &limits).unwrap();
    assert_eq!(cong.class_count(), 1);
    let oracle = brute_least_congruence(&m, &[(1, 0)]);
    assert!(oracle.iter().all(|&c| c == oracle[0]));
}

#[test]
fn trace_records_generators_and_repairs() {
    let limits = limits();
    let k = bool2();
    let m = regular_bimodule(&k, &limits).unwrap();
    let cong = congruence_closure(&m, &[(0, 1)], &limits).unwrap();
    assert!(matches!(
        cong.trace.first(),
        Some(TraceEvent::Generator { left: 0, right: 1 })
    ));
    assert_eq!(cong.repairs, 0);
    assert_eq!(cong.generators, vec![(0, 1)]);
}

#[test]
fn representatives_are_class_minima() {
    let limits = limits();
    let k = bool2();
    let m = free_module(&k, 2, true, true, &limits).unwrap();
    let cong = congruence_closure(&m, &[(1, 2)], &limits).unwrap();
    let reps = cong.representatives();
    for x in 0..m.size() {
        let rep = reps[x] as usize;
        assert!(cong.same_class(x, rep));
        assert!(rep <= x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent_and_quotient_lawful(
        module_pick in 0usize..8,
        raw_pairs in proptest::collection::vec((0usize..4, 0usize..4), 0..3),
    ) {
        let limits = limits();
        let all = catalog::module_catalog(&limits).unwrap();
        let m = &all[module_pick % all.len()];
        let pairs: Vec<(usize, usize)> = raw_pairs
            .into_iter()
            .map(|(x, y)| (x % m.size(), y % m.size()))
            .collect();
        let first = congruence_closure(m, &pairs, &limits).unwrap();
        // Re-closing with pairs drawn from the found classes changes nothing.
        let seed: Vec<(usize, usize)> = (0..m.size())
            .map(|x| (x, first.class_top[first.class_of[x] as usize] as usize))
            .collect();
        let second = congruence_closure(m, &seed, &limits).unwrap();
        prop_assert_eq!(&first.class_of, &second.class_of);

        let (q, _) = quotient_module(m, &pairs, &limits).unwrap();
        prop_assert!(q.check_module_axioms().unwrap().passed());
    }
}
