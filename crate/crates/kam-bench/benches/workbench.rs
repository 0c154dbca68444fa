use criterion::{black_box, criterion_group, criterion_main, Criterion};

use kam_bench::{bool2, free2, limits, rel3};
use kam_core::{
    column_bimodule, congruence_closure, matrix_morita_witness, module_iso_search,
    row_bimodule, tensor_product, KleeneAlgebra, TensorPath,
};

fn star_saturation(c: &mut Criterion) {
    let alg = rel3();
    c.bench_function("star_saturate_rel3_all", |b| {
        b.iter(|| {
            let mut acc = 0usize;
            for x in 0..alg.size() {
                acc ^= alg.star_saturate(black_box(x));
            }
            acc
        })
    });
}

fn axiom_check(c: &mut Criterion) {
    let lim = limits();
    let m2 = KleeneAlgebra::matrix(&bool2(), 2, &lim).unwrap();
    c.bench_function("axioms_m2_bool2", |b| {
        b.iter(|| m2.check_kleene_axioms(black_box(&lim)).unwrap().passed())
    });
}

fn congruence(c: &mut Criterion) {
    let lim = limits();
    let m = free2();
    c.bench_function("congruence_closure_free2", |b| {
        b.iter(|| congruence_closure(&m, black_box(&[(1, 2)]), &lim).unwrap().class_count())
    });
}

fn tensor_paths(c: &mut Criterion) {
    let lim = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &lim).unwrap();
    let p = column_bimodule(&k, &m2, 2, &lim).unwrap();
    let q = row_bimodule(&k, &m2, 2, &lim).unwrap();
    c.bench_function("tensor_fast_k2", |b| {
        b.iter(|| {
            tensor_product(&p, &q, TensorPath::FreeFastPath, &lim)
                .unwrap()
                .module
                .size()
        })
    });
    c.bench_function("tensor_exhaustive_k2", |b| {
        b.iter(|| {
            tensor_product(&p, &q, TensorPath::Exhaustive, &lim)
                .unwrap()
                .module
                .size()
        })
    });
}

fn iso_search(c: &mut Criterion) {
    let lim = limits();
    let k = bool2();
    let m2 = KleeneAlgebra::matrix(&k, 2, &lim).unwrap();
    let p = column_bimodule(&k, &m2, 2, &lim).unwrap();
    let q = row_bimodule(&k, &m2, 2, &lim).unwrap();
    let fast = tensor_product(&p, &q, TensorPath::FreeFastPath, &lim).unwrap();
    let slow = tensor_product(&p, &q, TensorPath::Exhaustive, &lim).unwrap();
    c.bench_function("iso_search_tensor_16", |b| {
        b.iter(|| {
            module_iso_search(&fast.module, &slow.module, &lim)
                .unwrap()
                .is_some()
        })
    });
}

fn morita(c: &mut Criterion) {
    let lim = limits();
    let k = bool2();
    c.bench_function("matrix_morita_witness_n2", |b| {
        b.iter(|| matrix_morita_witness(&k, 2, &lim).unwrap().report.passed())
    });
}

criterion_group!(
    benches,
    star_saturation,
    axiom_check,
    congruence,
    tensor_paths,
    iso_search,
    morita
);
criterion_main!(benches);
