//! Axiom suite for the built-in algebras, with independent oracles for star
//! and the natural order.

mod support;

use kam_core::{
    algebra_iso_search, catalog, Element, KleeneAlgebra, Limits, MatrixElement,
};
use proptest::prelude::*;
use support::*;

#[test]
fn builtin_algebras_pass_axioms() {
    let limits = limits();
    for spec in ["bool2", "rel(1)", "rel(2)", "mat(bool2,2)"] {
        let alg = catalog::builtin_algebra(spec, &limits).unwrap();
        let report = alg.check_kleene_axioms(&limits).unwrap();
        assert!(report.passed(), "{spec}: {report}");
    }
}

#[test]
fn induction_laws_enumerate_all_triples() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    let report = rel2.check_kleene_axioms(&limits).unwrap();
    let law = report.find("star_induction_left").unwrap();
    assert!(law.pass);
    assert_eq!(law.checked, 16 * 16 * 16);
}

#[test]
fn corrupted_star_fails_unrolling_at_zero() {
    // bool2 with 0^* forced to 0: 1 + 0*0^* reduces to 1 <= 0, which fails.
    let limits = limits();
    let bad = KleeneAlgebra::from_tables(
        "bool2!star",
        2,
        0,
        1,
        vec![0, 1, 1, 1],
        vec![0, 0, 0, 1],
        vec![0, 1],
    )
    .unwrap();
    let report = bad.check_kleene_axioms(&limits).unwrap();
    assert!(!report.passed());
    let law = report.find("star_unroll_left").unwrap();
    assert!(!law.pass);
    assert_eq!(law.counterexample.as_deref(), Some(&[0usize][..]));
}

#[test]
fn malformed_tables_error_instead_of_failing_laws() {
    let short_add = KleeneAlgebra::from_tables("bad", 2, 0, 1, vec![0, 1, 1], vec![0; 4], vec![1; 2]);
    assert!(short_add.is_err());
    let out_of_range =
        KleeneAlgebra::from_tables("bad", 2, 0, 1, vec![0, 1, 1, 7], vec![0; 4], vec![1; 2]);
    assert!(out_of_range.is_err());
}

#[test]
fn rel2_star_matches_reachability_oracle_on_all_elements() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    for x in 0..rel2.size() {
        let expect = rel_closure_oracle(2, x);
        assert_eq!(rel2.star(x), expect, "star of {}", rel2.render_element(x));
        assert_eq!(rel2.star_saturate(x), expect);
    }
}

#[test]
fn star_of_single_edge_in_rel2() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    // {(0,1)} is bit 1; its closure is {(0,0),(1,1),(0,1)}.
    assert_eq!(rel2.star(0b0010), 0b1011);
}

#[test]
fn natural_order_is_subset_order_on_rel2() {
    let limits = limits();
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    for a in 0..rel2.size() {
        for b in 0..rel2.size() {
            assert_eq!(rel2.le(a, b), a & b == a, "le({a},{b})");
        }
    }
}

#[test]
fn natural_order_on_bool2() {
    let k = bool2();
    let zero = Element::new(&k, 0).unwrap();
    let one = Element::new(&k, 1).unwrap();
    assert!(zero.le(&one).unwrap());
    assert!(!one.le(&zero).unwrap());
}

#[test]
fn star_saturate_is_least_prefixpoint() {
    // a^* is the unique least x with 1 + a*x <= x; enumerate all x.
    let limits = limits();
    for spec in ["bool2", "rel(2)", "mat(bool2,2)"] {
        let alg = catalog::builtin_algebra(spec, &limits).unwrap();
        for a in 0..alg.size() {
            let s = alg.star_saturate(a);
            let solutions: Vec<usize> = (0..alg.size())
                .filter(|&x| alg.le(alg.add(alg.one(), alg.mul(a, x)), x))
                .collect();
            assert!(solutions.contains(&s));
            for x in solutions {
                assert!(alg.le(s, x), "{spec}: star({a}) not least at {x}");
            }
        }
    }
}

#[test]
fn matrix_star_matches_block_formula_in_m2() {
    let limits = limits();
    let k = bool2();
    for entries in 0..16usize {
        let m = MatrixElement::new(&k, 2, (0..4).map(|i| entries >> i & 1).collect()).unwrap();
        let fast = m.star_saturate();
        let oracle = block_star_2x2(&k, &[m.entries[0], m.entries[1], m.entries[2], m.entries[3]]);
        assert_eq!(fast.entries, oracle.to_vec(), "entries {entries:04b}");
    }
    // The single-edge case: star of E_01 is I + E_01.
    let e01 = MatrixElement::unit(&k, 2, 0, 1);
    let expect = MatrixElement::identity(&k, 2).add(&e01);
    assert_eq!(e01.star_saturate(), expect);
    let _ = limits;
}

#[test]
fn rel1_is_isomorphic_to_bool2() {
    let limits = limits();
    let rel1 = KleeneAlgebra::rel(1, &limits).unwrap();
    assert_eq!(rel1.size(), 2);
    assert!(algebra_iso_search(&rel1, &bool2(), &limits).unwrap().is_some());
}

#[test]
fn scalar_matrices_embed_bool2_in_m2() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let h = catalog::scalar_embedding(&k, &m2).unwrap();
    assert!(h.check().passed());
    // Scalar-diagonal matrices form a subalgebra isomorphic to the base;
    // in particular star commutes with the embedding, which h.check covers.
    let (sub, _emb) = m2
        .subalgebra("scalars", &[h.apply(0), h.apply(1)])
        .unwrap();
    assert!(algebra_iso_search(&sub, &k, &limits).unwrap().is_some());
}

#[test]
fn algebra_hom_checks() {
    let limits = limits();
    let k = bool2();
    let id = kam_core::AlgebraHom::identity(&k);
    assert!(id.check().passed());
    // Swapping 0 and 1 preserves nothing that matters: h(0) != 0.
    let swap = kam_core::AlgebraHom::new(&k, &k, vec![1, 0]).unwrap();
    let report = swap.check();
    assert!(!report.passed());
    assert!(!report.find("hom_zero").unwrap().pass);
    // bool2 -> M2(bool2) by 0 -> zero matrix, 1 -> identity.
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let h = catalog::scalar_embedding(&k, &m2).unwrap();
    assert!(h.check().passed());
}

#[test]
fn size_guard_on_rel() {
    let limits = Limits::default().with_max_carrier(1000);
    assert!(KleeneAlgebra::rel(2, &limits).is_ok());
    assert!(KleeneAlgebra::rel(4, &limits).is_err());
}

#[test]
fn lazy_rel4_supports_ops_within_carrier_bound() {
    let limits = limits();
    let rel4 = KleeneAlgebra::rel(4, &limits).unwrap();
    assert_eq!(rel4.size(), 65_536);
    assert!(!rel4.is_table_backed());
    let edge = 1usize << 1; // {(0,1)}
    let closure = rel4.star(edge);
    assert_eq!(closure, rel_closure_oracle(4, edge));
}

proptest! {
    #[test]
    fn rel3_star_saturate_matches_oracle(x in 0usize..512) {
        let limits = limits();
        let rel3 = KleeneAlgebra::rel(3, &limits).unwrap();
        prop_assert_eq!(rel3.star_saturate(x), rel_closure_oracle(3, x));
        prop_assert_eq!(rel3.star(x), rel_closure_oracle(3, x));
    }

    #[test]
    fn rel3_add_is_join_for_subset_order(a in 0usize..512, b in 0usize..512, c in 0usize..512) {
        let limits = limits();
        let rel3 = KleeneAlgebra::rel(3, &limits).unwrap();
        let j = rel3.add(a, b);
        prop_assert!(rel3.le(a, j));
        prop_assert!(rel3.le(b, j));
        // Least upper bound: anything above a and b is above the join.
        if rel3.le(a, c) && rel3.le(b, c) {
            prop_assert!(rel3.le(j, c));
        }
        // Antisymmetry and transitivity spot checks.
        if rel3.le(a, b) && rel3.le(b, a) {
            prop_assert_eq!(a, b);
        }
        if rel3.le(a, b) && rel3.le(b, c) {
            prop_assert!(rel3.le(a, c));
        }
        prop_assert!(rel3.le(rel3.zero(), a));
    }
}
