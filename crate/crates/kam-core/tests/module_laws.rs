//! Law suite for the module constructions: the catalog passes the axioms,
//! corrupted fixtures fail naming their counterexamples, freeness and dual
//! bases behave, and the iso search agrees with a brute-force scan.

mod support;

use std::sync::Arc;

use kam_core::{
    algebra_over_subalgebra, catalog, dual_module, free_module, hom_module, module_iso_search,
    regular_bimodule, submodule_generated, KleeneAlgebra, KleeneModule, Side,
};
use support::*;

#[test]
fn catalog_modules_pass_axioms() {
    let limits = limits();
    for m in catalog::module_catalog(&limits).unwrap() {
        let report = m.check_module_axioms().unwrap();
        assert!(report.passed(), "{}: {report}", m.name);
    }
}

#[test]
fn corrupted_action_fails_quasi_identity_naming_the_pair() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    let m = regular_bimodule(&rel2, &limits).unwrap();
    // r = {(0,1)} acting on m = {(1,1)}: honestly r.m = {(0,1)}, not below m.
    // Forcing r.m = 0 makes the premise r.m <= m hold while
    // r^*.m = {(0,1),(1,1)} stays above m, so the quasi-identity fails there.
    let r = 0b0010;
    let target = 0b1000;
    let bad = m.with_corrupted_left_action(r, target, rel2.zero());
    let report = bad.check_module_axioms().unwrap();
    assert!(!report.passed());
    let law = report.find("left_quasi_identity").unwrap();
    assert!(!law.pass);
    assert_eq!(law.counterexample.as_deref(), Some(&[r, target][..]));
}

#[test]
fn rel2_is_a_module_over_its_diagonal_subalgebra() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    let (diag, emb) = catalog::diagonal_subalgebra(&rel2).unwrap();
    assert_eq!(diag.size(), 4);
    assert!(diag.check_kleene_axioms(&limits).unwrap().passed());
    let m = algebra_over_subalgebra(&rel2, &diag, &emb, &limits).unwrap();
    let left = m.left_reduct().unwrap();
    assert!(left.check_module_axioms().unwrap().passed());
}

#[test]
fn two_element_subalgebra_bimodule() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    let (sub, emb) = catalog::two_element_subalgebra(&rel2).unwrap();
    assert_eq!(sub.size(), 2);
    let m = algebra_over_subalgebra(&rel2, &sub, &emb, &limits).unwrap();
    assert!(m.check_module_axioms().unwrap().passed());
}

#[test]
fn left_ideal_of_rel2_is_proper_and_matches_fixpoint_oracle() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    // Generator: the relation supported on row 0 only (row 1 has empty image).
    let gen = 0b0011;
    let ideal = submodule_generated(&rel2, &[gen], Side::Left, &limits).unwrap();
    assert!(ideal.size() < rel2.size(), "ideal should be proper");
    assert!(ideal.check_module_axioms().unwrap().passed());
    // Oracle: close {gen} under zero, binary joins, and left multiplication.
    let mut members = vec![rel2.zero(), gen];
    loop {
        let mut fresh = Vec::new();
        for &x in &members {
            for a in 0..rel2.size() {
                let ax = rel2.mul(a, x);
                if !members.contains(&ax) && !fresh.contains(&ax) {
                    fresh.push(ax);
                }
            }
            for &y in &members {
                let s = rel2.add(x, y);
                if !members.contains(&s) && !fresh.contains(&s) {
                    fresh.push(s);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        members.extend(fresh);
    }
    members.sort_unstable();
    members.dedup();
    assert_eq!(ideal.size(), members.len());
}

#[test]
fn hom_set_cardinalities_match_freeness_counts() {
    let limits = limits();
    let k = bool2();
    let regular_left = regular_bimodule(&k, &limits).unwrap().left_reduct().unwrap();
    let free2_left = free_module(&k, 2, true, false, &limits).unwrap();
    for rank in [1usize, 2] {
        let source = free_module(&k, rank, true, false, &limits).unwrap();
        for target in [&regular_left, &free2_left] {
            let (homs, maps) = hom_module(&source, target, &limits).unwrap();
            let expect = target.size().pow(rank as u32);
            assert_eq!(homs.size(), expect, "Hom({},{})", source.name, target.name);
            assert_eq!(maps.len(), expect);
            assert!(homs.check_module_axioms().unwrap().passed());
        }
    }
}

#[test]
fn hom_enumeration_matches_brute_force() {
    let limits = limits();
    let k = bool2();
    let reg = regular_bimodule(&k, &limits).unwrap();
    let free2 = free_module(&k, 2, true, true, &limits).unwrap();
    for (s, t) in [(&reg, &free2), (&free2, &reg), (&reg, &reg)] {
        let (_, maps) = hom_module(s, t, &limits).unwrap();
        let mut got: Vec<Vec<usize>> = maps
            .iter()
            .map(|h| h.map.iter().map(|&v| v as usize).collect())
            .collect();
        got.sort();
        let mut expect = brute_homs(s, t);
        expect.sort();
        assert_eq!(got, expect, "Hom({},{})", s.name, t.name);
    }
}

#[test]
fn universal_property_of_free_modules() {
    // Every function from the basis into P extends to exactly one
    // homomorphism; enumerated for rank 2 into the regular module.
    let limits = limits();
    let k = bool2();
    let free2 = free_module(&k, 2, true, false, &limits).unwrap();
    let p = regular_bimodule(&k, &limits).unwrap().left_reduct().unwrap();
    let homs = brute_homs(&free2, &p);
    let basis = free2.left_free.as_ref().unwrap().basis.clone();
    let mut seen = Vec::new();
    for h in &homs {
        let restriction: Vec<usize> = basis.iter().map(|&e| h[e]).collect();
        assert!(!seen.contains(&restriction), "two homs share a restriction");
        seen.push(restriction);
    }
    assert_eq!(seen.len(), p.size().pow(2), "every function extends");
}

#[test]
fn hom_module_structure_is_pointwise() {
    let limits = limits();
    let k = bool2();
    let m = free_module(&k, 2, true, true, &limits).unwrap();
    let (homs, maps) = hom_module(&m, &m, &limits).unwrap();
    for x in 0..homs.size() {
        for y in 0..homs.size() {
            let s = homs.add(x, y);
            for e in 0..m.size() {
                assert_eq!(
                    maps[s].apply(e),
                    m.add(maps[x].apply(e), maps[y].apply(e)),
                    "(phi+psi)(m) = phi(m)+psi(m)"
                );
            }
        }
        for a in 0..k.size() {
            let ax = homs.act_left(a, x);
            for e in 0..m.size() {
                assert_eq!(
                    maps[ax].apply(e),
                    m.act_left(a, maps[x].apply(e)),
                    "(a.phi)(m) = a.phi(m)"
                );
            }
        }
    }
}

#[test]
fn dual_of_left_regular_is_right_regular() {
    let limits = limits();
    let k = bool2();
    let left_reg = regular_bimodule(&k, &limits).unwrap().left_reduct().unwrap();
    let (dual, _) = dual_module(&left_reg, Side::Left, &limits).unwrap();
    let right_reg = regular_bimodule(&k, &limits).unwrap().right_reduct().unwrap();
    assert!(module_iso_search(&dual, &right_reg, &limits).unwrap().is_some());
}

#[test]
fn double_dual_of_free_modules_is_identity_up_to_iso() {
    let limits = limits();
    let k = bool2();
    for rank in [1usize, 2] {
        let m = free_module(&k, rank, true, false, &limits).unwrap();
        let (dual, _) = dual_module(&m, Side::Left, &limits).unwrap();
        let (double, _) = dual_module(&dual, Side::Right, &limits).unwrap();
        assert_eq!(double.size(), m.size());
        assert!(
            module_iso_search(&double, &m, &limits).unwrap().is_some(),
            "double dual of rank {rank}"
        );
    }
}

#[test]
fn iso_search_agrees_with_brute_scan_on_small_carriers() {
    let limits = limits();
    let k = bool2();
    let mut small: Vec<Arc<KleeneModule>> = Vec::new();
    for m in catalog::module_catalog(&limits).unwrap() {
        if m.size() <= 4 {
            small.push(m);
        }
    }
    let quotient = kam_core::quotient_module(
        &free_module(&k, 2, true, true, &limits).unwrap(),
        &[(1, 2)],
        &limits,
    )
    .unwrap()
    .0;
    small.push(quotient);
    for a in &small {
        for b in &small {
            if !a.same_signature(b) {
                continue;
            }
            let found = module_iso_search(a, b, &limits).unwrap().is_some();
            let brute = brute_iso_exists(a, b);
            assert_eq!(found, brute, "{} vs {}", a.name, b.name);
        }
    }
}

#[test]
fn constructions_respect_a_nonzero_zero_index() {
    // The two-element algebra with its carrier indices swapped: zero sits at
    // index 1. Digit-encoded constructions must not assume index 0 is zero.
    let limits = limits();
    let swapped = KleeneAlgebra::from_tables(
        "bool2-swapped",
        2,
        1,
        0,
        vec![0, 0, 0, 1],
        vec![0, 1, 1, 1],
        vec![0, 0],
    )
    .unwrap();
    assert!(swapped.check_kleene_axioms(&limits).unwrap().passed());
    let f2 = free_module(&swapped, 2, true, true, &limits).unwrap();
    assert!(f2.check_module_axioms().unwrap().passed());
    let mn = KleeneAlgebra::matrix(&swapped, 2, &limits).unwrap();
    let p = kam_core::column_bimodule(&swapped, &mn, 2, &limits).unwrap();
    let q = kam_core::row_bimodule(&swapped, &mn, 2, &limits).unwrap();
    assert!(p.check_module_axioms().unwrap().passed());
    assert!(q.check_module_axioms().unwrap().passed());
    let out = kam_core::matrix_morita_witness(&swapped, 2, &limits).unwrap();
    assert!(out.report.passed(), "{}", out.report);
}

#[test]
fn iso_search_certificate_is_a_verified_isomorphism() {
    let limits = limits();
    let k = bool2();
    let m = free_module(&k, 2, true, true, &limits).unwrap();
    let iso = module_iso_search(&m, &m, &limits).unwrap().unwrap();
    assert!(iso.is_bijective());
    assert!(iso.check().passed());
    let inv = iso.inverse().unwrap();
    assert!(inv.check().passed());
}
