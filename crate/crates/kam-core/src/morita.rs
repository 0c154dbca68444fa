//! Morita equivalence machinery: full idempotents, corner algebras,
//! homomorphism modules, the matrix equivalence with explicit witnesses, and
//! the lift of a semiring-level equivalence through a full idempotent.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{decode_digits, encode_digits, AlgebraHom, KleeneAlgebra};
use crate::error::{KamError, Result};
use crate::hom::ModuleHom;
use crate::iso::module_iso_search;
use crate::law::{LawCheck, LawReport};
use crate::limits::Limits;
use crate::matrix::MatrixElement;
use crate::module::{regular_bimodule, ActionSide, FreeStructure, KleeneModule};
use crate::tensor::{tensor_product, tensor_with_left_module, TensorPath, TensorProduct};

/// A multiplicative idempotent e with e*e = e.
#[derive(Clone)]
pub struct Idempotent {
    pub algebra: Arc<KleeneAlgebra>,
    pub index: usize,
}

impl Idempotent {
    pub fn new(algebra: &Arc<KleeneAlgebra>, index: usize) -> Result<Self> {
        if index >= algebra.size() {
            return Err(KamError::Malformed {
                what: "idempotent",
                detail: format!("index {index} out of range"),
            });
        }
        if algebra.mul(index, index) != index {
            return Err(KamError::NotIdempotent { index });
        }
        Ok(Idempotent {
            algebra: Arc::clone(algebra),
            index,
        })
    }
}

/// Result of the fullness computation: the additive closure of {x e y} and,
/// when the closure reaches 1, one explicit decomposition
/// 1 = sum_k x_k e y_k used later to build witness maps.
pub struct FullnessCertificate {
    pub full: bool,
    pub closure_size: usize,
    pub one_decomposition: Option<Vec<(usize, usize)>>,
}

/// Decides ReR = R by closing {x e y} under addition.
pub fn is_full_idempotent(e: &Idempotent) -> FullnessCertificate {
    let alg = &e.algebra;
    let n = alg.size();
    // provenance[v] = decomposition of v as a sum of x e y products.
    let mut provenance: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for x in 0..n {
        let xe = alg.mul(x, e.index);
        for y in 0..n {
            let v = alg.mul(xe, y);
            provenance.entry(v).or_insert_with(|| vec![(x, y)]);
        }
    }
    let mut members: Vec<usize> = provenance.keys().copied().collect();
    members.sort_unstable();
    let mut frontier = members.clone();
    while let Some(v) = frontier.pop() {
        let snapshot = members.clone();
        for w in snapshot {
            let s = alg.add(v, w);
            if !provenance.contains_key(&s) {
                let mut d = provenance[&v].clone();
                d.extend(provenance[&w].iter().copied());
                provenance.insert(s, d);
                members.push(s);
                frontier.push(s);
            }
        }
    }
    let full = members.len() == n;
    FullnessCertificate {
        full,
        closure_size: members.len(),
        one_decomposition: provenance.get(&alg.one()).cloned(),
    }
}

/// All idempotents of the algebra, flagged by fullness.
pub fn full_idempotent_scan(algebra: &Arc<KleeneAlgebra>) -> Vec<(usize, bool)> {
    (0..algebra.size())
        .filter(|&x| algebra.mul(x, x) == x)
        .map(|x| {
            let e = Idempotent {
                algebra: Arc::clone(algebra),
                index: x,
            };
            (x, is_full_idempotent(&e).full)
        })
        .collect()
}

/// The corner algebra e M e with unit e and star x -> e x^* e. The star
/// recipe is not a theorem at this generality, so the result is axiom-checked
/// and construction fails loudly naming the broken law.
pub fn corner_algebra(
    e: &Idempotent,
    limits: &Limits,
) -> Result<(Arc<KleeneAlgebra>, Vec<usize>)> {
    let alg = &e.algebra;
    let mut carrier: Vec<usize> = (0..alg.size())
        .map(|x| alg.mul(alg.mul(e.index, x), e.index))
        .collect();
    carrier.sort_unstable();
    carrier.dedup();
    let pos = |x: usize| -> usize {
        carrier
            .binary_search(&x)
            .expect("corner carrier is closed under its operations")
    };
    let k = carrier.len();
    let mut add = Vec::with_capacity(k * k);
    let mut mul = Vec::with_capacity(k * k);
    for &x in &carrier {
        for &y in &carrier {
            add.push(pos(alg.add(x, y)) as u32);
            mul.push(pos(alg.mul(x, y)) as u32);
        }
    }
    let star: Vec<u32> = carrier
        .iter()
        .map(|&x| pos(alg.mul(alg.mul(e.index, alg.star(x)), e.index)) as u32)
        .collect();
    let corner = KleeneAlgebra::from_tables(
        format!("corner({},{})", alg.name(), alg.render_element(e.index)),
        k,
        pos(alg.zero()),
        pos(e.index),
        add,
        mul,
        star,
    )?;
    let report = corner.check_kleene_axioms(limits)?;
    if let Some(bad) = report.failures().next() {
        return Err(KamError::CornerStar {
            law: bad.law.clone(),
            detail: bad.detail.clone().unwrap_or_default(),
        });
    }
    Ok((corner, carrier))
}

/// The homomorphism module E_h: the additive reduct of B as an (A, B)-
/// bimodule, with a acting by h(a) on the left and B by multiplication on
/// the right. Free of rank one on the right by construction.
pub fn homomorphism_module(h: &AlgebraHom, limits: &Limits) -> Result<Arc<KleeneModule>> {
    let a = &h.source;
    let b = &h.target;
    let n = b.size();
    let mut add = Vec::with_capacity(n * n);
    let mut right = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            add.push(b.add(x, y) as u32);
            right.push(b.mul(x, y) as u32);
        }
    }
    let mut left = Vec::with_capacity(a.size() * n);
    for ai in 0..a.size() {
        let ha = h.apply(ai);
        for x in 0..n {
            left.push(b.mul(ha, x) as u32);
        }
    }
    let module = KleeneModule::from_tables(
        format!("E[{}->{}]", a.name(), b.name()),
        n,
        b.zero(),
        add,
        Some(ActionSide {
            algebra: Arc::clone(a),
            table: left,
        }),
        Some(ActionSide {
            algebra: Arc::clone(b),
            table: right,
        }),
        limits,
    )?;
    let module = {
        let mut inner = (*module).clone();
        inner.right_free = Some(FreeStructure {
            basis: vec![b.one()],
            coords: (0..n as u32).collect(),
        });
        Arc::new(inner)
    };
    let axioms = module.check_module_axioms()?;
    if !axioms.passed() {
        return Err(KamError::ConstructionFailed {
            detail: format!("homomorphism module fails laws: {axioms}"),
        });
    }
    Ok(module)
}

/// Outcome of checking E_(g.f) ~ E_f (x) E_g with the canonical mutually
/// inverse maps c -> 1 (x) c and b (x) c -> bc.
pub struct CompositionLawReport {
    pub report: LawReport,
    pub tensor_size: usize,
}

pub fn check_composition_law(
    f: &AlgebraHom,
    g: &AlgebraHom,
    limits: &Limits,
) -> Result<CompositionLawReport> {
    if !f.target.same_as(&g.source) {
        return Err(KamError::Incompatible {
            detail: "homomorphisms are not composable".to_string(),
        });
    }
    let gf = g.compose_after(f)?;
    let e_f = homomorphism_module(f, limits)?;
    let e_g = homomorphism_module(g, limits)?;
    let e_gf = homomorphism_module(&gf, limits)?;
    let t = tensor_product(&e_f, &e_g, TensorPath::Auto, limits)?;
    let c_alg = &g.target;

    let mut report = LawReport::new(format!(
        "composition_law({},{})",
        e_f.name, e_g.name
    ));
    // phi(c) = 1 (x) c.
    let phi = ModuleHom {
        source: Arc::clone(&e_gf),
        target: Arc::clone(&t.module),
        map: (0..e_gf.size())
            .map(|c| t.pure_tensor(f.target.one(), c) as u32)
            .collect(),
    };
    // psi(b (x) c) = bc, i.e. g(b) * c in C, summed over a decomposition.
    let psi = ModuleHom {
        source: Arc::clone(&t.module),
        target: Arc::clone(&e_gf),
        map: (0..t.module.size())
            .map(|ti| {
                let mut acc = c_alg.zero();
                for &(b, c) in t.decompose(ti) {
                    acc = c_alg.add(acc, c_alg.mul(g.apply(b as usize), c as usize));
                }
                acc as u32
            })
            .collect(),
    };
    let phi_check = phi.check();
    report.push(LawCheck {
        law: "phi_is_hom".to_string(),
        statement: "c -> 1 (x) c is a bimodule homomorphism".to_string(),
        pass: phi_check.passed(),
        counterexample: None,
        detail: (!phi_check.passed()).then(|| phi_check.to_string()),
        checked: e_gf.size() as u64,
    });
    let psi_check = psi.check();
    report.push(LawCheck {
        law: "psi_is_hom".to_string(),
        statement: "b (x) c -> bc is a bimodule homomorphism".to_string(),
        pass: psi_check.passed(),
        counterexample: None,
        detail: (!psi_check.passed()).then(|| psi_check.to_string()),
        checked: t.module.size() as u64,
    });
    let psi_phi = (0..e_gf.size()).find(|&c| psi.apply(phi.apply(c)) != c);
    report.push(match psi_phi {
        None => LawCheck::pass("psi_phi_identity", "psi . phi = id", e_gf.size() as u64),
        Some(c) => LawCheck::fail(
            "psi_phi_identity",
            "psi . phi = id",
            e_gf.size() as u64,
            vec![c],
            String::new(),
        ),
    });
    let phi_psi = (0..t.module.size()).find(|&x| phi.apply(psi.apply(x)) != x);
    report.push(match phi_psi {
        None => LawCheck::pass("phi_psi_identity", "phi . psi = id", t.module.size() as u64),
        Some(x) => LawCheck::fail(
            "phi_psi_identity",
            "phi . psi = id",
            t.module.size() as u64,
            vec![x],
            String::new(),
        ),
    });
    Ok(CompositionLawReport {
        report,
        tensor_size: t.module.size(),
    })
}

// Vector helpers over a base algebra; vectors are digit-encoded indices.

fn vec_digits(k: &KleeneAlgebra, n: usize, v: usize) -> Vec<usize> {
    decode_digits(v, k.size(), n)
}

fn mat_vec(k: &KleeneAlgebra, n: usize, m: &[usize], v: &[usize]) -> Vec<usize> {
    (0..n)
        .map(|r| {
            let mut acc = k.zero();
            for c in 0..n {
                acc = k.add(acc, k.mul(m[r * n + c], v[c]));
            }
            acc
        })
        .collect()
}

fn vec_mat(k: &KleeneAlgebra, n: usize, w: &[usize], m: &[usize]) -> Vec<usize> {
    (0..n)
        .map(|c| {
            let mut acc = k.zero();
            for r in 0..n {
                acc = k.add(acc, k.mul(w[r], m[r * n + c]));
            }
            acc
        })
        .collect()
}

fn dot(k: &KleeneAlgebra, w: &[usize], v: &[usize]) -> usize {
    let mut acc = k.zero();
    for (a, b) in w.iter().zip(v) {
        acc = k.add(acc, k.mul(*a, *b));
    }
    acc
}

fn outer(k: &KleeneAlgebra, n: usize, v: &[usize], w: &[usize]) -> Vec<usize> {
    let mut out = vec![k.zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            out[r * n + c] = k.mul(v[r], w[c]);
        }
    }
    out
}

fn render_row(k: &KleeneAlgebra, v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| k.render_element(x)).collect();
    format!("({})", parts.join(" "))
}

/// K^n as an (M_n(K), K)-bimodule of column vectors, free on the right over
/// K with the standard basis.
pub fn column_bimodule(
    k: &Arc<KleeneAlgebra>,
    mn: &Arc<KleeneAlgebra>,
    n: usize,
    limits: &Limits,
) -> Result<Arc<KleeneModule>> {
    let size = k.size().pow(n as u32);
    let mut add = Vec::with_capacity(size * size);
    for x in 0..size {
        let dx = vec_digits(k, n, x);
        for y in 0..size {
            let dy = vec_digits(k, n, y);
            let s: Vec<usize> = dx.iter().zip(&dy).map(|(&u, &v)| k.add(u, v)).collect();
            add.push(encode_digits(&s, k.size()) as u32);
        }
    }
    let mut left = Vec::with_capacity(mn.size() * size);
    for mi in 0..mn.size() {
        let mat = decode_digits(mi, k.size(), n * n);
        for x in 0..size {
            let dx = vec_digits(k, n, x);
            left.push(encode_digits(&mat_vec(k, n, &mat, &dx), k.size()) as u32);
        }
    }
    let mut right = Vec::with_capacity(size * k.size());
    for x in 0..size {
        let dx = vec_digits(k, n, x);
        for a in 0..k.size() {
            let img: Vec<usize> = dx.iter().map(|&v| k.mul(v, a)).collect();
            right.push(encode_digits(&img, k.size()) as u32);
        }
    }
    let zero_index = encode_digits(&vec![k.zero(); n], k.size());
    let m = KleeneModule::from_tables(
        format!("{}^{n}[col]", k.name()),
        size,
        zero_index,
        add,
        Some(ActionSide {
            algebra: Arc::clone(mn),
            table: left,
        }),
        Some(ActionSide {
            algebra: Arc::clone(k),
            table: right,
        }),
        limits,
    )?;
    let basis: Vec<usize> = (0..n)
        .map(|i| {
            let mut d = vec![k.zero(); n];
            d[i] = k.one();
            encode_digits(&d, k.size())
        })
        .collect();
    let mut coords = Vec::with_capacity(size * n);
    for x in 0..size {
        for d in vec_digits(k, n, x) {
            coords.push(d as u32);
        }
    }
    let mut inner = (*m).clone();
    inner.right_free = Some(FreeStructure { basis, coords });
    Ok(Arc::new(inner))
}

/// The dual of K^n as a (K, M_n(K))-bimodule of row vectors, free on the
/// left over K with the dual basis.
pub fn row_bimodule(
    k: &Arc<KleeneAlgebra>,
    mn: &Arc<KleeneAlgebra>,
    n: usize,
    limits: &Limits,
) -> Result<Arc<KleeneModule>> {
    let size = k.size().pow(n as u32);
    let mut add = Vec::with_capacity(size * size);
    for x in 0..size {
        let dx = vec_digits(k, n, x);
        for y in 0..size {
            let dy = vec_digits(k, n, y);
            let s: Vec<usize> = dx.iter().zip(&dy).map(|(&u, &v)| k.add(u, v)).collect();
            add.push(encode_digits(&s, k.size()) as u32);
        }
    }
    let mut left = Vec::with_capacity(k.size() * size);
    for a in 0..k.size() {
        for x in 0..size {
            let dx = vec_digits(k, n, x);
            let img: Vec<usize> = dx.iter().map(|&v| k.mul(a, v)).collect();
            left.push(encode_digits(&img, k.size()) as u32);
        }
    }
    let mut right = Vec::with_capacity(size * mn.size());
    for x in 0..size {
        let dx = vec_digits(k, n, x);
        for mi in 0..mn.size() {
            let mat = decode_digits(mi, k.size(), n * n);
            right.push(encode_digits(&vec_mat(k, n, &dx, &mat), k.size()) as u32);
        }
    }
    let zero_index = encode_digits(&vec![k.zero(); n], k.size());
    let m = KleeneModule::from_tables(
        format!("{}^{n}°[row]", k.name()),
        size,
        zero_index,
        add,
        Some(ActionSide {
            algebra: Arc::clone(k),
            table: left,
        }),
        Some(ActionSide {
            algebra: Arc::clone(mn),
            table: right,
        }),
        limits,
    )?;
    let basis: Vec<usize> = (0..n)
        .map(|i| {
            let mut d = vec![k.zero(); n];
            d[i] = k.one();
            encode_digits(&d, k.size())
        })
        .collect();
    let mut coords = Vec::with_capacity(size * n);
    for x in 0..size {
        for d in vec_digits(k, n, x) {
            coords.push(d as u32);
        }
    }
    let mut inner = (*m).clone();
    inner.left_free = Some(FreeStructure { basis, coords });
    Ok(Arc::new(inner))
}

/// A certified Morita equivalence between K and S: bimodules p (an (S, K)-
/// bimodule) and q (a (K, S)-bimodule) whose tensor products are isomorphic
/// to the regular bimodules, with all four maps explicit.
pub struct MoritaWitness {
    pub k: Arc<KleeneAlgebra>,
    pub s: Arc<KleeneAlgebra>,
    pub p: Arc<KleeneModule>,
    pub q: Arc<KleeneModule>,
    pub t_pq: TensorProduct,
    pub t_qp: TensorProduct,
    pub s_regular: Arc<KleeneModule>,
    pub k_regular: Arc<KleeneModule>,
    /// u : p (x) q -> S regular, with inverse.
    pub u: ModuleHom,
    pub u_inv: ModuleHom,
    /// v : q (x) p -> K regular, with inverse.
    pub v: ModuleHom,
    pub v_inv: ModuleHom,
}

impl MoritaWitness {
    /// Verifies that u and v are bimodule isomorphisms and that the stored
    /// inverses compose to identities elementwise.
    pub fn verify(&self) -> LawReport {
        let mut report = LawReport::new(format!(
            "morita_witness({},{})",
            self.k.name(),
            self.s.name()
        ));
        for (name, fwd, inv) in [
            ("u", &self.u, &self.u_inv),
            ("v", &self.v, &self.v_inv),
        ] {
            let fwd_check = fwd.check();
            report.push(LawCheck {
                law: format!("{name}_is_hom"),
                statement: format!("{name} is a bimodule homomorphism"),
                pass: fwd_check.passed(),
                counterexample: None,
                detail: (!fwd_check.passed()).then(|| fwd_check.to_string()),
                checked: fwd.map.len() as u64,
            });
            let inv_check = inv.check();
            report.push(LawCheck {
                law: format!("{name}_inv_is_hom"),
                statement: format!("{name} inverse is a bimodule homomorphism"),
                pass: inv_check.passed(),
                counterexample: None,
                detail: (!inv_check.passed()).then(|| inv_check.to_string()),
                checked: inv.map.len() as u64,
            });
            let n = fwd.map.len();
            let round = (0..n).find(|&x| inv.apply(fwd.apply(x)) != x);
            report.push(match round {
                None => LawCheck::pass(
                    &format!("{name}_roundtrip"),
                    "inverse composes to the identity on both sides",
                    n as u64,
                ),
                Some(x) => LawCheck::fail(
                    &format!("{name}_roundtrip"),
                    "inverse composes to the identity on both sides",
                    n as u64,
                    vec![x],
                    String::new(),
                ),
            });
            let m = inv.map.len();
            let round2 = (0..m).find(|&x| fwd.apply(inv.apply(x)) != x);
            report.push(match round2 {
                None => LawCheck::pass(
                    &format!("{name}_roundtrip_rev"),
                    "forward composes to the identity on both sides",
                    m as u64,
                ),
                Some(x) => LawCheck::fail(
                    &format!("{name}_roundtrip_rev"),
                    "forward composes to the identity on both sides",
                    m as u64,
                    vec![x],
                    String::new(),
                ),
            });
        }
        report
    }
}

/// One step of the balance-move chain in q (x) p.
pub struct ChainStep {
    pub rendered: String,
    pub justification: String,
    pub class: usize,
}

pub struct MatrixMoritaOutcome {
    pub witness: MoritaWitness,
    pub report: LawReport,
    pub chain: Vec<ChainStep>,
    pub matrix_algebra: Arc<KleeneAlgebra>,
}

/// Builds and verifies the equivalence between K and the n x n matrix
/// algebra over K, witnessed by the column and row vector bimodules.
pub fn matrix_morita_witness(
    k: &Arc<KleeneAlgebra>,
    n: usize,
    limits: &Limits,
) -> Result<MatrixMoritaOutcome> {
    let mn = KleeneAlgebra::matrix(k, n, limits)?;
    let p = column_bimodule(k, &mn, n, limits)?;
    let q = row_bimodule(k, &mn, n, limits)?;
    let t_pq = tensor_product(&p, &q, TensorPath::Auto, limits)?;
    let t_qp = tensor_product(&q, &p, TensorPath::Auto, limits)?;
    let s_regular = regular_bimodule(&mn, limits)?;
    let k_regular = regular_bimodule(k, limits)?;
    let mut report = LawReport::new(format!("matrix_morita({},{n})", k.name()));

    // u : p (x) q -> M_n by summing outer products over a decomposition.
    let u = ModuleHom {
        source: Arc::clone(&t_pq.module),
        target: Arc::clone(&s_regular),
        map: (0..t_pq.module.size())
            .map(|t| {
                let mut acc = mn.zero();
                for &(v, w) in t_pq.decompose(t) {
                    let dv = vec_digits(k, n, v as usize);
                    let dw = vec_digits(k, n, w as usize);
                    let m = encode_digits(&outer(k, n, &dv, &dw), k.size());
                    acc = mn.add(acc, m);
                }
                acc as u32
            })
            .collect(),
    };
    // Its inverse sends a matrix sum_ij X_ij E_ij to sum_ij e_i X_ij (x) e_j°.
    let basis = p.right_free.as_ref().expect("column module is free").basis.clone();
    let dual_basis = q.left_free.as_ref().expect("row module is free").basis.clone();
    let u_inv = ModuleHom {
        source: Arc::clone(&s_regular),
        target: Arc::clone(&t_pq.module),
        map: (0..mn.size())
            .map(|x| {
                let entries = decode_digits(x, k.size(), n * n);
                let mut acc = t_pq.module.zero();
                for i in 0..n {
                    for j in 0..n {
                        let scaled = p.act_right(basis[i], entries[i * n + j]);
                        acc = t_pq
                            .module
                            .add(acc, t_pq.pure_tensor(scaled, dual_basis[j]));
                    }
                }
                acc as u32
            })
            .collect(),
    };

    // v : q (x) p -> K by summing dot products; its inverse is
    // a -> a.(e_1° (x) e_1).
    let v = ModuleHom {
        source: Arc::clone(&t_qp.module),
        target: Arc::clone(&k_regular),
        map: (0..t_qp.module.size())
            .map(|t| {
                let mut acc = k.zero();
                for &(w, vcol) in t_qp.decompose(t) {
                    let dw = vec_digits(k, n, w as usize);
                    let dv = vec_digits(k, n, vcol as usize);
                    acc = k.add(acc, dot(k, &dw, &dv));
                }
                acc as u32
            })
            .collect(),
    };
    let unit_class = t_qp.pure_tensor(dual_basis[0], basis[0]);
    let v_inv = ModuleHom {
        source: Arc::clone(&k_regular),
        target: Arc::clone(&t_qp.module),
        map: (0..k.size())
            .map(|a| t_qp.module.act_left(a, unit_class) as u32)
            .collect(),
    };

    report.push(if t_pq.module.size() == mn.size() {
        LawCheck::pass(
            "tensor_pq_size",
            "|K^n (x) K^n°| = |M_n(K)|",
            t_pq.module.size() as u64,
        )
    } else {
        LawCheck::fail(
            "tensor_pq_size",
            "|K^n (x) K^n°| = |M_n(K)|",
            t_pq.module.size() as u64,
            vec![t_pq.module.size(), mn.size()],
            String::new(),
        )
    });
    // phi(e_i (x) e_j°) = E_ij.
    let mut bad_unit = None;
    'units: for i in 0..n {
        for j in 0..n {
            let t = t_pq.pure_tensor(basis[i], dual_basis[j]);
            let expect = MatrixElement::unit(k, n, i, j).entries;
            if u.apply(t) != encode_digits(&expect, k.size()) {
                bad_unit = Some(vec![i, j]);
                break 'units;
            }
        }
    }
    report.push(match bad_unit {
        None => LawCheck::pass(
            "phi_on_generators",
            "phi(e_i (x) e_j°) = E_ij",
            (n * n) as u64,
        ),
        Some(w) => LawCheck::fail(
            "phi_on_generators",
            "phi(e_i (x) e_j°) = E_ij",
            (n * n) as u64,
            w,
            String::new(),
        ),
    });
    // alpha(e_i° (x) e_j) = delta_ij.
    let mut bad_alpha = None;
    'alpha: for i in 0..n {
        for j in 0..n {
            let t = t_qp.pure_tensor(dual_basis[i], basis[j]);
            let expect = if i == j { k.one() } else { k.zero() };
            if v.apply(t) != expect {
                bad_alpha = Some(vec![i, j]);
                break 'alpha;
            }
        }
    }
    report.push(match bad_alpha {
        None => LawCheck::pass(
            "alpha_on_generators",
            "alpha(e_i° (x) e_j) = [i = j]",
            (n * n) as u64,
        ),
        Some(w) => LawCheck::fail(
            "alpha_on_generators",
            "alpha(e_i° (x) e_j) = [i = j]",
            (n * n) as u64,
            w,
            String::new(),
        ),
    });

    // The four matrix identities behind the collapsing chain.
    let ones = MatrixElement::all_ones(k, n);
    let sum_cols: Vec<usize> = vec![k.one(); n];
    let mut bullet_fail = None;
    for i in 0..n {
        let ei_row: Vec<usize> = (0..n)
            .map(|c| if c == i { k.one() } else { k.zero() })
            .collect();
        let patched = MatrixElement::row_patched(k, n, i);
        if vec_mat(k, n, &ei_row, &patched.entries) != ei_row {
            bullet_fail = Some((1, i));
            break;
        }
        if mat_vec(k, n, &patched.entries, &ei_row) != sum_cols {
            bullet_fail = Some((2, i));
            break;
        }
        if mat_vec(k, n, &ones.entries, &sum_cols) != sum_cols {
            bullet_fail = Some((3, i));
            break;
        }
        if vec_mat(k, n, &ei_row, &ones.entries) != sum_cols {
            bullet_fail = Some((4, i));
            break;
        }
    }
    report.push(match bullet_fail {
        None => LawCheck::pass(
            "collapse_identities",
            "e_i°.A_i = e_i°; A_i.e_i = sum e; 1\u{0304}.sum e = sum e; e_i°.1\u{0304} = sum e°",
            (4 * n) as u64,
        ),
        Some((which, i)) => LawCheck::fail(
            "collapse_identities",
            "matrix identities for the collapsing chain",
            (4 * n) as u64,
            vec![which, i],
            format!("identity {which} fails at i = {i}"),
        ),
    });

    // All diagonal pure tensors collapse to e_1° (x) e_1.
    let diag_bad = (0..n).find(|&i| t_qp.pure_tensor(dual_basis[i], basis[i]) != unit_class);
    report.push(match diag_bad {
        None => LawCheck::pass(
            "diagonal_collapse",
            "e_i° (x) e_i = e_1° (x) e_1 for every i",
            n as u64,
        ),
        Some(i) => LawCheck::fail(
            "diagonal_collapse",
            "e_i° (x) e_i = e_1° (x) e_1 for every i",
            n as u64,
            vec![i],
            String::new(),
        ),
    });

    // The balance-move chain, rendered step by step.
    let mut chain = Vec::new();
    {
        let e1_row: Vec<usize> = (0..n)
            .map(|c| if c == 0 { k.one() } else { k.zero() })
            .collect();
        let e1_enc = encode_digits(&e1_row, k.size());
        let patched = MatrixElement::row_patched(k, n, 0);
        let c0 = t_qp.pure_tensor(e1_enc, e1_enc);
        chain.push(ChainStep {
            rendered: format!(
                "{}° (x) {}",
                render_row(k, &e1_row),
                render_row(k, &e1_row)
            ),
            justification: "start".to_string(),
            class: c0,
        });
        let row_after = vec_mat(k, n, &e1_row, &patched.entries);
        chain.push(ChainStep {
            rendered: format!(
                "{}°.A_1 (x) {}   [A_1 = {}]",
                render_row(k, &e1_row),
                render_row(k, &e1_row),
                patched.render()
            ),
            justification: "e_1°.A_1 = e_1°".to_string(),
            class: t_qp.pure_tensor(encode_digits(&row_after, k.size()), e1_enc),
        });
        let col_after = mat_vec(k, n, &patched.entries, &e1_row);
        let col_enc = encode_digits(&col_after, k.size());
        chain.push(ChainStep {
            rendered: format!(
                "{}° (x) A_1.{} = {}° (x) {}",
                render_row(k, &e1_row),
                render_row(k, &e1_row),
                render_row(k, &e1_row),
                render_row(k, &col_after)
            ),
            justification: "balance across the tensor".to_string(),
            class: t_qp.pure_tensor(e1_enc, col_enc),
        });
        let col_again = mat_vec(k, n, &ones.entries, &col_after);
        chain.push(ChainStep {
            rendered: format!(
                "{}° (x) 1\u{0304}.{}",
                render_row(k, &e1_row),
                render_row(k, &col_after)
            ),
            justification: "1\u{0304}.sum e = sum e".to_string(),
            class: t_qp.pure_tensor(e1_enc, encode_digits(&col_again, k.size())),
        });
        let row_final = vec_mat(k, n, &e1_row, &ones.entries);
        chain.push(ChainStep {
            rendered: format!(
                "{}°.1\u{0304} (x) {} = {}° (x) {}",
                render_row(k, &e1_row),
                render_row(k, &col_after),
                render_row(k, &row_final),
                render_row(k, &col_after)
            ),
            justification: "balance across the tensor".to_string(),
            class: t_qp.pure_tensor(encode_digits(&row_final, k.size()), col_enc),
        });
        let same = chain.iter().all(|s| s.class == c0);
        report.push(if same {
            LawCheck::pass(
                "chain_constant",
                "every step of the collapsing chain is the same tensor element",
                chain.len() as u64,
            )
        } else {
            LawCheck::fail(
                "chain_constant",
                "every step of the collapsing chain is the same tensor element",
                chain.len() as u64,
                chain.iter().map(|s| s.class).collect(),
                String::new(),
            )
        });
    }

    let witness = MoritaWitness {
        k: Arc::clone(k),
        s: Arc::clone(&mn),
        p,
        q,
        t_pq,
        t_qp,
        s_regular,
        k_regular,
        u,
        u_inv,
        v,
        v_inv,
    };
    let wreport = witness.verify();
    for check in wreport.checks {
        report.push(check);
    }
    Ok(MatrixMoritaOutcome {
        witness,
        report,
        chain,
        matrix_algebra: mn,
    })
}

/// The image sub-bimodule e.K^n of column vectors, as an (S, K)-bimodule
/// over the corner algebra S = e M_n e.
fn image_column_module(
    k: &Arc<KleeneAlgebra>,
    n: usize,
    e_mat: &[usize],
    corner: &Arc<KleeneAlgebra>,
    corner_embedding: &[usize],
    limits: &Limits,
) -> Result<Arc<KleeneModule>> {
    let full = k.size().pow(n as u32);
    let mut carrier: Vec<usize> = (0..full)
        .map(|v| {
            let dv = vec_digits(k, n, v);
            encode_digits(&mat_vec(k, n, e_mat, &dv), k.size())
        })
        .collect();
    carrier.sort_unstable();
    carrier.dedup();
    let pos = |x: usize| carrier.binary_search(&x).expect("closed image");
    let m = carrier.len();
    let mut add = Vec::with_capacity(m * m);
    for &x in &carrier {
        let dx = vec_digits(k, n, x);
        for &y in &carrier {
            let dy = vec_digits(k, n, y);
            let s: Vec<usize> = dx.iter().zip(&dy).map(|(&u, &v)| k.add(u, v)).collect();
            add.push(pos(encode_digits(&s, k.size())) as u32);
        }
    }
    let mut left = Vec::with_capacity(corner.size() * m);
    for &s_mat in corner_embedding {
        let sm = decode_digits(s_mat, k.size(), n * n);
        for &x in &carrier {
            let dx = vec_digits(k, n, x);
            left.push(pos(encode_digits(&mat_vec(k, n, &sm, &dx), k.size())) as u32);
        }
    }
    let mut right = Vec::with_capacity(m * k.size());
    for &x in &carrier {
        let dx = vec_digits(k, n, x);
        for a in 0..k.size() {
            let img: Vec<usize> = dx.iter().map(|&v| k.mul(v, a)).collect();
            right.push(pos(encode_digits(&img, k.size())) as u32);
        }
    }
    KleeneModule::from_tables(
        format!("e.{}^{n}", k.name()),
        m,
        pos(encode_digits(&vec![k.zero(); n], k.size())),
        add,
        Some(ActionSide {
            algebra: Arc::clone(corner),
            table: left,
        }),
        Some(ActionSide {
            algebra: Arc::clone(k),
            table: right,
        }),
        limits,
    )
}

/// The image sub-bimodule K^n°.e of row vectors, as a (K, S)-bimodule.
fn image_row_module(
    k: &Arc<KleeneAlgebra>,
    n: usize,
    e_mat: &[usize],
    corner: &Arc<KleeneAlgebra>,
    corner_embedding: &[usize],
    limits: &Limits,
) -> Result<Arc<KleeneModule>> {
    let full = k.size().pow(n as u32);
    let mut carrier: Vec<usize> = (0..full)
        .map(|w| {
            let dw = vec_digits(k, n, w);
            encode_digits(&vec_mat(k, n, &dw, e_mat), k.size())
        })
        .collect();
    carrier.sort_unstable();
    carrier.dedup();
    let pos = |x: usize| carrier.binary_search(&x).expect("closed image");
    let m = carrier.len();
    let mut add = Vec::with_capacity(m * m);
    for &x in &carrier {
        let dx = vec_digits(k, n, x);
        for &y in &carrier {
            let dy = vec_digits(k, n, y);
            let s: Vec<usize> = dx.iter().zip(&dy).map(|(&u, &v)| k.add(u, v)).collect();
            add.push(pos(encode_digits(&s, k.size())) as u32);
        }
    }
    let mut left = Vec::with_capacity(k.size() * m);
    for a in 0..k.size() {
        for &x in &carrier {
            let dx = vec_digits(k, n, x);
            let img: Vec<usize> = dx.iter().map(|&v| k.mul(a, v)).collect();
            left.push(pos(encode_digits(&img, k.size())) as u32);
        }
    }
    let mut right = Vec::with_capacity(m * corner.size());
    for &x in &carrier {
        let dx = vec_digits(k, n, x);
        for &s_mat in corner_embedding {
            let sm = decode_digits(s_mat, k.size(), n * n);
            right.push(pos(encode_digits(&vec_mat(k, n, &dx, &sm), k.size())) as u32);
        }
    }
    KleeneModule::from_tables(
        format!("{}^{n}°.e", k.name()),
        m,
        pos(encode_digits(&vec![k.zero(); n], k.size())),
        add,
        Some(ActionSide {
            algebra: Arc::clone(k),
            table: left,
        }),
        Some(ActionSide {
            algebra: Arc::clone(corner),
            table: right,
        }),
        limits,
    )
}

pub struct LiftOutcome {
    pub witness: MoritaWitness,
    pub report: LawReport,
    pub corner: Arc<KleeneAlgebra>,
    pub corner_embedding: Vec<usize>,
    pub matrix_algebra: Arc<KleeneAlgebra>,
}

/// Lifts the semiring-level equivalence through a full idempotent e of
/// M_n(K): the corner S = e M_n e is Morita-equivalent to K, witnessed by
/// e.K^n and K^n°.e. Verification is per instance; a failed isomorphism is
/// reported, not silenced.
pub fn lift_semiring_morita(
    k: &Arc<KleeneAlgebra>,
    n: usize,
    e_index: usize,
    limits: &Limits,
) -> Result<LiftOutcome> {
    let mn = KleeneAlgebra::matrix(k, n, limits)?;
    let e = Idempotent::new(&mn, e_index)?;
    let cert = is_full_idempotent(&e);
    if !cert.full {
        return Err(KamError::NotFull { index: e_index });
    }
    let one_decomp = cert
        .one_decomposition
        .ok_or_else(|| KamError::ConstructionFailed {
            detail: "fullness certificate lacks a decomposition of 1".to_string(),
        })?;
    let (corner, corner_embedding) = corner_algebra(&e, limits)?;
    let e_mat = decode_digits(e_index, k.size(), n * n);

    let p = image_column_module(k, n, &e_mat, &corner, &corner_embedding, limits)?;
    let q = image_row_module(k, n, &e_mat, &corner, &corner_embedding, limits)?;
    let t_pq = tensor_product(&p, &q, TensorPath::Auto, limits)?;
    let t_qp = tensor_product(&q, &p, TensorPath::Auto, limits)?;
    let s_regular = regular_bimodule(&corner, limits)?;
    let k_regular = regular_bimodule(k, limits)?;
    let mut report = LawReport::new(format!(
        "lift_morita({}, n={n}, e={})",
        k.name(),
        mn.render_element(e_index)
    ));

    // The sorted encoded carriers behind the image modules.
    let p_carrier: Vec<usize> = {
        let mut items: Vec<usize> = (0..k.size().pow(n as u32))
            .map(|v| {
                let dv = vec_digits(k, n, v);
                encode_digits(&mat_vec(k, n, &e_mat, &dv), k.size())
            })
            .collect();
        items.sort_unstable();
        items.dedup();
        items
    };
    let q_carrier: Vec<usize> = {
        let mut items: Vec<usize> = (0..k.size().pow(n as u32))
            .map(|w| {
                let dw = vec_digits(k, n, w);
                encode_digits(&vec_mat(k, n, &dw, &e_mat), k.size())
            })
            .collect();
        items.sort_unstable();
        items.dedup();
        items
    };
    let p_vec = |pi: usize| -> Vec<usize> { vec_digits(k, n, p_carrier[pi]) };
    let q_vec = |qi: usize| -> Vec<usize> { vec_digits(k, n, q_carrier[qi]) };
    let corner_pos = |mat_index: usize| -> Option<usize> {
        corner_embedding.binary_search(&mat_index).ok()
    };

    // u : p (x) q -> S, summing (e v)(w e) = e v w e over decompositions.
    let u = ModuleHom {
        source: Arc::clone(&t_pq.module),
        target: Arc::clone(&s_regular),
        map: (0..t_pq.module.size())
            .map(|t| {
                let mut acc = corner.zero();
                for &(pi, qi) in t_pq.decompose(t) {
                    let v = p_vec(pi as usize);
                    let w = q_vec(qi as usize);
                    let m = encode_digits(&outer(k, n, &v, &w), k.size());
                    let ci = corner_pos(m).expect("outer product lands in the corner");
                    acc = corner.add(acc, ci);
                }
                acc as u32
            })
            .collect(),
    };
    let u_ok = u.is_bijective() && u.check().passed();
    report.push(if u_ok {
        LawCheck::pass(
            "corner_tensor_iso",
            "e.K^n (x) K^n°.e ~ corner as (S,S)-bimodules",
            t_pq.module.size() as u64,
        )
    } else {
        LawCheck::fail(
            "corner_tensor_iso",
            "e.K^n (x) K^n°.e ~ corner as (S,S)-bimodules",
            t_pq.module.size() as u64,
            vec![t_pq.module.size(), corner.size()],
            "canonical map is not an isomorphism".to_string(),
        )
    });
    let u_inv = u.inverse().unwrap_or_else(|| ModuleHom::zero(&s_regular, &t_pq.module));

    // v : q (x) p -> K by row-column contraction.
    let v = ModuleHom {
        source: Arc::clone(&t_qp.module),
        target: Arc::clone(&k_regular),
        map: (0..t_qp.module.size())
            .map(|t| {
                let mut acc = k.zero();
                for &(qi, pi) in t_qp.decompose(t) {
                    let w = q_vec(qi as usize);
                    let v = p_vec(pi as usize);
                    acc = k.add(acc, dot(k, &w, &v));
                }
                acc as u32
            })
            .collect(),
    };
    // Inverse built from the decomposition 1 = sum_k X_k e Y_k: the unit
    // preimage is sum_k (e_1° X_k e) (x) (e Y_k e_1).
    let p_index = |vec: &[usize]| -> usize {
        let enc = encode_digits(vec, k.size());
        p_carrier.binary_search(&enc).expect("vector lies in e.K^n")
    };
    let q_index = |vec: &[usize]| -> usize {
        let enc = encode_digits(vec, k.size());
        q_carrier.binary_search(&enc).expect("vector lies in K^n°.e")
    };
    let e1_row: Vec<usize> = (0..n)
        .map(|c| if c == 0 { k.one() } else { k.zero() })
        .collect();
    let mut unit_preimage = t_qp.module.zero();
    for &(x_k, y_k) in &one_decomp {
        let xm = decode_digits(x_k, k.size(), n * n);
        let ym = decode_digits(y_k, k.size(), n * n);
        let row = vec_mat(k, n, &vec_mat(k, n, &e1_row, &xm), &e_mat);
        let col = mat_vec(k, n, &e_mat, &mat_vec(k, n, &ym, &e1_row));
        let t = t_qp.pure_tensor(q_index(&row), p_index(&col));
        unit_preimage = t_qp.module.add(unit_preimage, t);
    }
    let v_inv = ModuleHom {
        source: Arc::clone(&k_regular),
        target: Arc::clone(&t_qp.module),
        map: (0..k.size())
            .map(|a| t_qp.module.act_left(a, unit_preimage) as u32)
            .collect(),
    };
    let v_ok = v.is_bijective()
        && v.check().passed()
        && (0..k.size()).all(|a| v.apply(v_inv.apply(a)) == a)
        && (0..t_qp.module.size()).all(|t| v_inv.apply(v.apply(t)) == t);
    report.push(if v_ok {
        LawCheck::pass(
            "base_tensor_iso",
            "K^n°.e (x) e.K^n ~ K as (K,K)-bimodules",
            t_qp.module.size() as u64,
        )
    } else {
        LawCheck::fail(
            "base_tensor_iso",
            "K^n°.e (x) e.K^n ~ K as (K,K)-bimodules",
            t_qp.module.size() as u64,
            vec![t_qp.module.size(), k.size()],
            "canonical map is not an isomorphism".to_string(),
        )
    });

    let witness = MoritaWitness {
        k: Arc::clone(k),
        s: Arc::clone(&corner),
        p,
        q,
        t_pq,
        t_qp,
        s_regular,
        k_regular,
        u,
        u_inv,
        v,
        v_inv,
    };
    let wreport = witness.verify();
    for check in wreport.checks {
        report.push(check);
    }
    Ok(LiftOutcome {
        witness,
        report,
        corner,
        corner_embedding,
        matrix_algebra: mn,
    })
}

/// Verifies that the witness induces the round-trip equivalences on sample
/// left modules: q (x) (p (x) L) ~ L over K and p (x) (q (x) X) ~ X over S.
pub fn check_category_equivalence(
    witness: &MoritaWitness,
    samples_over_k: &[Arc<KleeneModule>],
    samples_over_s: &[Arc<KleeneModule>],
    limits: &Limits,
) -> Result<LawReport> {
    let mut report = LawReport::new(format!(
        "category_equivalence({},{})",
        witness.k.name(),
        witness.s.name()
    ));
    for sample in samples_over_k {
        let forward = tensor_with_left_module(&witness.p, sample, limits)?;
        let back = tensor_with_left_module(&witness.q, &forward.module, limits)?;
        let lhs = back.module.left_reduct()?;
        let rhs = if sample.right_algebra().is_some() {
            sample.left_reduct()?
        } else {
            Arc::clone(sample)
        };
        let iso = module_iso_search(&lhs, &rhs, limits)?;
        report.push(match iso {
            Some(_) => LawCheck::pass(
                &format!("roundtrip_k[{}]", sample.name),
                "q (x) (p (x) L) ~ L",
                lhs.size() as u64,
            ),
            None => LawCheck::fail(
                &format!("roundtrip_k[{}]", sample.name),
                "q (x) (p (x) L) ~ L",
                lhs.size() as u64,
                vec![lhs.size(), rhs.size()],
                "no isomorphism found".to_string(),
            ),
        });
    }
    for sample in samples_over_s {
        let forward = tensor_with_left_module(&witness.q, sample, limits)?;
        let back = tensor_with_left_module(&witness.p, &forward.module, limits)?;
        let lhs = back.module.left_reduct()?;
        let rhs = if sample.right_algebra().is_some() {
            sample.left_reduct()?
        } else {
            Arc::clone(sample)
        };
        let iso = module_iso_search(&lhs, &rhs, limits)?;
        report.push(match iso {
            Some(_) => LawCheck::pass(
                &format!("roundtrip_s[{}]", sample.name),
                "p (x) (q (x) X) ~ X",
                lhs.size() as u64,
            ),
            None => LawCheck::fail(
                &format!("roundtrip_s[{}]", sample.name),
                "p (x) (q (x) X) ~ X",
                lhs.size() as u64,
                vec![lhs.size(), rhs.size()],
                "no isomorphism found".to_string(),
            ),
        });
    }
    Ok(report)
}
