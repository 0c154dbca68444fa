//! Morita machinery: fullness, corners, homomorphism modules, the matrix
//! witness with its collapsing chain, the lift through full idempotents, and
//! the induced equivalence of module categories.

mod support;

use kam_core::{
    algebra_iso_search, catalog, check_category_equivalence, check_composition_law,
    column_bimodule, corner_algebra, free_module, full_idempotent_scan, homomorphism_module,
    is_full_idempotent, lift_semiring_morita, matrix_morita_witness, module_iso_search,
    regular_bimodule, row_bimodule, AlgebraHom, Idempotent, KleeneAlgebra, MatrixElement,
};
use support::*;

fn unit_index(k: &std::sync::Arc<KleeneAlgebra>, m2: &KleeneAlgebra, i: usize, j: usize) -> usize {
    MatrixElement::unit(k, 2, i, j).index_in(m2).unwrap()
}

#[test]
fn fullness_of_the_standard_idempotents() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let one = Idempotent::new(&m2, m2.one()).unwrap();
    assert!(is_full_idempotent(&one).full);
    let zero = Idempotent::new(&m2, m2.zero()).unwrap();
    assert!(!is_full_idempotent(&zero).full);
    let e11 = Idempotent::new(&m2, unit_index(&k, &m2, 0, 0)).unwrap();
    let cert = is_full_idempotent(&e11);
    assert!(cert.full, "E11 generates everything: E_ij = E_i1 E11 E_1j");
    // The certificate really decomposes 1.
    let decomp = cert.one_decomposition.unwrap();
    let mut acc = m2.zero();
    for (x, y) in decomp {
        acc = m2.add(acc, m2.mul(m2.mul(x, e11.index), y));
    }
    assert_eq!(acc, m2.one());
}

#[test]
fn fullness_is_monotone_along_the_natural_order() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let idempotents: Vec<(usize, bool)> = full_idempotent_scan(&m2);
    for &(e, e_full) in &idempotents {
        for &(f, f_full) in &idempotents {
            if m2.le(e, f) && e_full {
                assert!(f_full, "e <= f, e full, but f not full");
            }
        }
    }
}

#[test]
fn corner_at_e11_is_bool2() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let e = Idempotent::new(&m2, unit_index(&k, &m2, 0, 0)).unwrap();
    let (corner, embedding) = corner_algebra(&e, &limits).unwrap();
    assert_eq!(corner.size(), 2);
    assert_eq!(embedding.len(), 2);
    assert!(corner.check_kleene_axioms(&limits).unwrap().passed());
    assert!(algebra_iso_search(&corner, &k, &limits).unwrap().is_some());
}

#[test]
fn corner_endpoints_for_every_catalog_algebra() {
    let limits = limits();
    for spec in ["bool2", "rel(2)", "mat(bool2,2)"] {
        let alg = catalog::builtin_algebra(spec, &limits).unwrap();
        let at_one = corner_algebra(&Idempotent::new(&alg, alg.one()).unwrap(), &limits).unwrap();
        assert_eq!(at_one.0.size(), alg.size(), "{spec}: corner at 1");
        let at_zero = corner_algebra(&Idempotent::new(&alg, alg.zero()).unwrap(), &limits).unwrap();
        assert_eq!(at_zero.0.size(), 1, "{spec}: corner at 0");
    }
}

#[test]
fn homomorphism_module_examples() {
    let limits = limits();
    let k = bool2();
    // Identity: the regular bimodule.
    let e_id = homomorphism_module(&AlgebraHom::identity(&k), &limits).unwrap();
    let reg = regular_bimodule(&k, &limits).unwrap();
    assert!(module_iso_search(&e_id, &reg, &limits).unwrap().is_some());
    // bool2 -> rel(2) sending 1 to the diagonal.
    let rel2 = KleeneAlgebra::rel(2, &limits).unwrap();
    let h = catalog::bool2_embedding(&rel2).unwrap();
    assert!(h.check().passed());
    let e_h = homomorphism_module(&h, &limits).unwrap();
    assert_eq!(e_h.size(), 16);
    assert!(e_h.check_module_axioms().unwrap().passed());
    // bool2 -> M2(bool2) by the scalar embedding.
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let scalar = catalog::scalar_embedding(&k, &m2).unwrap();
    let e_s = homomorphism_module(&scalar, &limits).unwrap();
    assert_eq!(e_s.size(), 16);
    assert!(e_s.check_module_axioms().unwrap().passed());
}

#[test]
fn composition_law_for_the_three_example_pairs() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let id_k = AlgebraHom::identity(&k);
    let id_m2 = AlgebraHom::identity(&m2);
    let scalar = catalog::scalar_embedding(&k, &m2).unwrap();

    for (f, g, tag) in [
        (&id_k, &id_k, "id;id"),
        (&id_k, &scalar, "id;scalar"),
        (&scalar, &id_m2, "scalar;id"),
    ] {
        let out = check_composition_law(f, g, &limits).unwrap();
        assert!(out.report.passed(), "{tag}: {}", out.report);
    }
}

#[test]
fn matrix_witness_n2_has_sixteen_element_tensor() {
    let limits = limits();
    let k = bool2();
    let out = matrix_morita_witness(&k, 2, &limits).unwrap();
    assert!(out.report.passed(), "{}", out.report);
    assert_eq!(out.witness.t_pq.module.size(), 16);
    assert_eq!(out.witness.t_qp.module.size(), 2);
    // The witness modules satisfy the module laws.
    assert!(out.witness.p.check_module_axioms().unwrap().passed());
    assert!(out.witness.q.check_module_axioms().unwrap().passed());
    assert!(out
        .witness
        .t_pq
        .module
        .check_module_axioms()
        .unwrap()
        .passed());
    assert!(out
        .witness
        .t_qp
        .module
        .check_module_axioms()
        .unwrap()
        .passed());
}

#[test]
fn matrix_witness_n3_reproduces_the_collapsing_chain() {
    let limits = limits();
    let k = bool2();
    let out = matrix_morita_witness(&k, 3, &limits).unwrap();
    assert!(out.report.passed(), "{}", out.report);
    assert_eq!(out.witness.t_pq.module.size(), 512);
    assert_eq!(out.chain.len(), 5);
    let first = out.chain.first().unwrap();
    let last = out.chain.last().unwrap();
    assert!(first.rendered.contains("(1 0 0)"));
    assert!(last.rendered.contains("(1 1 1)"));
    for step in &out.chain {
        assert_eq!(step.class, first.class, "chain stays in one class");
    }
}

#[test]
fn every_full_idempotent_of_m2_lifts() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let scan = full_idempotent_scan(&m2);
    let e11 = unit_index(&k, &m2, 0, 0);
    assert!(scan.iter().any(|&(e, full)| e == m2.one() && full));
    assert!(scan.iter().any(|&(e, full)| e == e11 && full));
    assert!(scan.iter().any(|&(e, full)| e == m2.zero() && !full));
    for &(e, full) in &scan {
        if !full {
            assert!(lift_semiring_morita(&k, 2, e, &limits).is_err());
            continue;
        }
        let out = lift_semiring_morita(&k, 2, e, &limits).unwrap();
        assert!(out.report.passed(), "e = {}: {}", m2.render_element(e), out.report);
    }
}

#[test]
fn lift_at_e11_has_bool2_corner() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let e11 = unit_index(&k, &m2, 0, 0);
    let out = lift_semiring_morita(&k, 2, e11, &limits).unwrap();
    assert!(out.report.passed(), "{}", out.report);
    assert_eq!(out.corner.size(), 2);
    assert!(algebra_iso_search(&out.corner, &k, &limits).unwrap().is_some());
    assert_eq!(out.witness.t_pq.module.size(), 2);
    assert_eq!(out.witness.t_qp.module.size(), 2);
}

#[test]
fn lift_at_identity_matches_the_matrix_witness() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let out = lift_semiring_morita(&k, 2, m2.one(), &limits).unwrap();
    assert!(out.report.passed(), "{}", out.report);
    assert_eq!(out.corner.size(), m2.size());
    let matrix = matrix_morita_witness(&k, 2, &limits).unwrap();
    assert_eq!(
        out.witness.t_qp.module.size(),
        matrix.witness.t_qp.module.size()
    );
}

#[test]
fn diagonal_pair_idempotent_in_m3_lifts_to_m2_corner() {
    let limits = limits();
    let k = bool2();
    let m3 = KleeneAlgebra::matrix(&k, 3, &limits).unwrap();
    let e = MatrixElement::unit(&k, 3, 0, 0)
        .add(&MatrixElement::unit(&k, 3, 1, 1))
        .index_in(&m3)
        .unwrap();
    let idem = Idempotent::new(&m3, e).unwrap();
    assert!(is_full_idempotent(&idem).full);
    let out = lift_semiring_morita(&k, 3, e, &limits).unwrap();
    assert!(out.report.passed(), "{}", out.report);
    assert_eq!(out.corner.size(), 16);
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    assert!(algebra_iso_search(&out.corner, &m2, &limits).unwrap().is_some());
}

#[test]
fn single_unit_idempotent_in_m3_lifts_to_bool2_corner() {
    let limits = limits();
    let k = bool2();
    let m3 = KleeneAlgebra::matrix(&k, 3, &limits).unwrap();
    let e = MatrixElement::unit(&k, 3, 0, 0).index_in(&m3).unwrap();
    let out = lift_semiring_morita(&k, 3, e, &limits).unwrap();
    assert!(out.report.passed(), "{}", out.report);
    assert_eq!(out.corner.size(), 2);
    assert!(algebra_iso_search(&out.corner, &k, &limits).unwrap().is_some());
}

#[test]
fn witness_isos_compose_to_identities() {
    let limits = limits();
    let k = bool2();
    for out in [
        matrix_morita_witness(&k, 1, &limits).unwrap().witness,
        matrix_morita_witness(&k, 2, &limits).unwrap().witness,
    ] {
        let report = out.verify();
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn category_equivalence_through_the_n2_witness() {
    let limits = limits();
    let k = bool2();
    let out = matrix_morita_witness(&k, 2, &limits).unwrap();
    let m2 = &out.matrix_algebra;
    let samples_k = vec![
        regular_bimodule(&k, &limits).unwrap().left_reduct().unwrap(),
        free_module(&k, 2, true, false, &limits).unwrap(),
    ];
    let samples_s = vec![regular_bimodule(m2, &limits)
        .unwrap()
        .left_reduct()
        .unwrap()];
    let report =
        check_category_equivalence(&out.witness, &samples_k, &samples_s, &limits).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn column_and_row_bimodules_pass_axioms_up_to_n3() {
    let limits = limits();
    let k = bool2();
    for n in [1usize, 2, 3] {
        let mn = KleeneAlgebra::matrix(&k, n, &limits).unwrap();
        let p = column_bimodule(&k, &mn, n, &limits).unwrap();
        let q = row_bimodule(&k, &mn, n, &limits).unwrap();
        assert!(p.check_module_axioms().unwrap().passed(), "columns n={n}");
        assert!(q.check_module_axioms().unwrap().passed(), "rows n={n}");
    }
}

#[test]
fn row_bimodule_agrees_with_the_generic_right_dual() {
    let limits = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
    let p = column_bimodule(&k, &m2, 2, &limits).unwrap();
    let (dual, _) = kam_core::dual_module(&p, kam_core::Side::Right, &limits).unwrap();
    let q = row_bimodule(&k, &m2, 2, &limits).unwrap();
    assert_eq!(dual.size(), q.size());
    assert!(module_iso_search(&dual, &q, &limits).unwrap().is_some());
}
