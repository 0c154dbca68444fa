//! The tensor-hom adjunction at desk scale: inner homs, currying in both
//! directions, naturality squares, and the monoid laws (associativity and
//! identity) of the tensor product.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{KamError, Result};
use crate::hom::{enumerate_homs, ModuleHom};
use crate::iso::module_iso_search;
use crate::law::{LawCheck, LawReport};
use crate::limits::Limits;
use crate::module::{ActionSide, KleeneModule};
use crate::tensor::{tensor_product, TensorPath, TensorProduct};

/// Hom(N, P) for N a (B, C)- and P an (A, C)-bimodule: the right-C-linear
/// maps N -> P carrying a left A-action pointwise and a right B-action by
/// precomposition with the left action of N.
pub struct InnerHom {
    pub n: Arc<KleeneModule>,
    pub p: Arc<KleeneModule>,
    pub module: Arc<KleeneModule>,
    pub maps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl InnerHom {
    pub fn eval(&self, phi: usize, n: usize) -> usize {
        self.maps[phi][n] as usize
    }

    pub fn index_of(&self, map: &[u32]) -> Option<usize> {
        self.index.get(map).copied()
    }
}

pub fn inner_hom(
    n: &Arc<KleeneModule>,
    p: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<InnerHom> {
    let nc = n.right_algebra().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} has no right action", n.name),
    })?;
    let pc = p.right_algebra().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} has no right action", p.name),
    })?;
    if !nc.same_as(pc) {
        return Err(KamError::Incompatible {
            detail: "inner hom needs matching right algebras".to_string(),
        });
    }
    let maps = enumerate_homs(&n.right_reduct()?, &p.right_reduct()?, limits)?;
    let index: HashMap<Vec<u32>, usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let size = maps.len();
    let nn = n.size();

    let lookup = |img: Vec<u32>| -> Result<u32> {
        index
            .get(&img)
            .map(|&i| i as u32)
            .ok_or_else(|| KamError::HomNotClosed {
                detail: "inner hom carrier not closed under an action".to_string(),
            })
    };

    let mut add = Vec::with_capacity(size * size);
    for x in &maps {
        for y in &maps {
            let sum: Vec<u32> = (0..nn)
                .map(|m| p.add(x[m] as usize, y[m] as usize) as u32)
                .collect();
            add.push(lookup(sum)?);
        }
    }
    let zero = *index
        .get(&vec![p.zero() as u32; nn])
        .ok_or_else(|| KamError::HomNotClosed {
            detail: "zero map missing from inner hom".to_string(),
        })?;

    // Left action of A: (a.phi)(x) = a.phi(x), pointwise in P.
    let left = match p.left_algebra() {
        Some(alg) => {
            let mut t = Vec::with_capacity(alg.size() * size);
            for a in 0..alg.size() {
                for phi in &maps {
                    let img: Vec<u32> = phi
                        .iter()
                        .map(|&v| p.act_left(a, v as usize) as u32)
                        .collect();
                    t.push(lookup(img)?);
                }
            }
            Some(ActionSide {
                algebra: Arc::clone(alg),
                table: t,
            })
        }
        None => None,
    };
    // Right action of B: (phi.b)(x) = phi(b.x), through the left action of N.
    let right = match n.left_algebra() {
        Some(alg) => {
            let k = alg.size();
            let mut t = vec![0u32; size * k];
            for (pi, phi) in maps.iter().enumerate() {
                for b in 0..k {
                    let img: Vec<u32> = (0..nn).map(|x| phi[n.act_left(b, x)]).collect();
                    t[pi * k + b] = lookup(img)?;
                }
            }
            Some(ActionSide {
                algebra: Arc::clone(alg),
                table: t,
            })
        }
        None => None,
    };
    let module = KleeneModule::from_tables(
        format!("Hom({},{})", n.name, p.name),
        size,
        zero,
        add,
        left,
        right,
        limits,
    )?;
    Ok(InnerHom {
        n: Arc::clone(n),
        p: Arc::clone(p),
        module,
        maps,
        index,
    })
}

/// curry(phi)(m)(n) = phi(m (x) n).
pub fn curry(t: &TensorProduct, phi: &ModuleHom, inner: &InnerHom) -> Result<ModuleHom> {
    let m = &t.left_input;
    let n = &t.right_input;
    let map: Result<Vec<u32>> = (0..m.size())
        .map(|mi| {
            let section: Vec<u32> = (0..n.size())
                .map(|nj| phi.apply(t.pure_tensor(mi, nj)) as u32)
                .collect();
            inner
                .index_of(&section)
                .map(|i| i as u32)
                .ok_or_else(|| KamError::ConstructionFailed {
                    detail: "curried section is not in the inner hom".to_string(),
                })
        })
        .collect();
    Ok(ModuleHom {
        source: Arc::clone(m),
        target: Arc::clone(&inner.module),
        map: map?,
    })
}

/// uncurry(psi)(m (x) n) = psi(m)(n), extended by additivity over a
/// pure-tensor decomposition.
pub fn uncurry(t: &TensorProduct, psi: &ModuleHom, inner: &InnerHom) -> ModuleHom {
    let p = &inner.p;
    let map: Vec<u32> = (0..t.module.size())
        .map(|ti| {
            let mut acc = p.zero();
            for &(mi, nj) in t.decompose(ti) {
                acc = p.add(acc, inner.eval(psi.apply(mi as usize), nj as usize));
            }
            acc as u32
        })
        .collect();
    ModuleHom {
        source: Arc::clone(&t.module),
        target: Arc::clone(p),
        map,
    }
}

/// Verifies that currying is a bijection Hom(M (x) N, P) <-> Hom(M, Hom(N, P))
/// and that both naturality squares commute for every supplied pair of
/// endomorphisms (alpha of M, beta of P).
pub struct AdjunctionReport {
    pub report: LawReport,
    pub outer_homs: usize,
    pub curried_homs: usize,
}

pub fn check_adjunction(
    m: &Arc<KleeneModule>,
    n: &Arc<KleeneModule>,
    p: &Arc<KleeneModule>,
    alphas: &[ModuleHom],
    betas: &[ModuleHom],
    limits: &Limits,
) -> Result<AdjunctionReport> {
    let t = tensor_product(m, n, TensorPath::Auto, limits)?;
    let inner = inner_hom(n, p, limits)?;
    let outer = enumerate_homs(&t.module, p, limits)?;
    let inner_side = enumerate_homs(m, &inner.module, limits)?;
    let mut report = LawReport::new(format!("adjunction({},{},{})", m.name, n.name, p.name));

    report.push(if outer.len() == inner_side.len() {
        LawCheck::pass(
            "hom_count",
            "|Hom(M(x)N,P)| = |Hom(M,Hom(N,P))|",
            (outer.len() + inner_side.len()) as u64,
        )
    } else {
        LawCheck::fail(
            "hom_count",
            "|Hom(M(x)N,P)| = |Hom(M,Hom(N,P))|",
            (outer.len() + inner_side.len()) as u64,
            vec![outer.len(), inner_side.len()],
            format!("{} vs {}", outer.len(), inner_side.len()),
        )
    });

    // Round trips in both directions.
    let mut bad_round = None;
    let mut images = Vec::new();
    for (i, phi_map) in outer.iter().enumerate() {
        let phi = ModuleHom::new(&t.module, p, phi_map.clone())?;
        let psi = curry(&t, &phi, &inner)?;
        let back = uncurry(&t, &psi, &inner);
        if back.map != phi.map {
            bad_round = Some(i);
            break;
        }
        images.push(psi.map);
    }
    report.push(match bad_round {
        None => LawCheck::pass(
            "uncurry_curry",
            "uncurry(curry(phi)) = phi",
            outer.len() as u64,
        ),
        Some(i) => LawCheck::fail(
            "uncurry_curry",
            "uncurry(curry(phi)) = phi",
            outer.len() as u64,
            vec![i],
            format!("hom #{i}"),
        ),
    });
    images.sort();
    images.dedup();
    let mut sorted_inner = inner_side.clone();
    sorted_inner.sort();
    report.push(if images == sorted_inner {
        LawCheck::pass(
            "curry_bijective",
            "curry is a bijection onto Hom(M,Hom(N,P))",
            inner_side.len() as u64,
        )
    } else {
        LawCheck::fail(
            "curry_bijective",
            "curry is a bijection onto Hom(M,Hom(N,P))",
            inner_side.len() as u64,
            vec![images.len(), sorted_inner.len()],
            "image of curry differs from Hom(M,Hom(N,P))".to_string(),
        )
    });
    let mut bad_round2 = None;
    for (i, psi_map) in inner_side.iter().enumerate() {
        let psi = ModuleHom::new(m, &inner.module, psi_map.clone())?;
        let phi = uncurry(&t, &psi, &inner);
        let again = curry(&t, &phi, &inner)?;
        if again.map != psi.map {
            bad_round2 = Some(i);
            break;
        }
    }
    report.push(match bad_round2 {
        None => LawCheck::pass(
            "curry_uncurry",
            "curry(uncurry(psi)) = psi",
            inner_side.len() as u64,
        ),
        Some(i) => LawCheck::fail(
            "curry_uncurry",
            "curry(uncurry(psi)) = psi",
            inner_side.len() as u64,
            vec![i],
            format!("hom #{i}"),
        ),
    });

    // Naturality squares for endomorphism samples.
    let mut square1_bad = None;
    let mut square2_bad = None;
    let mut checked1 = 0u64;
    let mut checked2 = 0u64;
    for (ai, alpha) in alphas.iter().enumerate() {
        let alpha_tensor_id = t.map_left(alpha, &t);
        for (bi, beta) in betas.iter().enumerate() {
            // Square 1: curry(beta . phi . (alpha (x) id)) =
            //           Hom(alpha, Hom(N, beta))(curry(phi)).
            for phi_map in &outer {
                checked1 += 1;
                let phi = ModuleHom::new(&t.module, p, phi_map.clone())?;
                let transported = ModuleHom {
                    source: Arc::clone(&t.module),
                    target: Arc::clone(p),
                    map: alpha_tensor_id
                        .map
                        .iter()
                        .map(|&x| beta.apply(phi.apply(x as usize)) as u32)
                        .collect(),
                };
                let lhs = curry(&t, &transported, &inner)?;
                let psi = curry(&t, &phi, &inner)?;
                let rhs: Result<Vec<u32>> = (0..m.size())
                    .map(|mi| {
                        let idx = psi.apply(alpha.apply(mi));
                        let pushed: Vec<u32> = inner.maps[idx]
                            .iter()
                            .map(|&v| beta.apply(v as usize) as u32)
                            .collect();
                        inner
                            .index_of(&pushed)
                            .map(|i| i as u32)
                            .ok_or_else(|| KamError::ConstructionFailed {
                                detail: "Hom(N,beta) left the inner hom".to_string(),
                            })
                    })
                    .collect();
                if lhs.map != rhs? {
                    square1_bad = Some(vec![ai, bi]);
                    break;
                }
            }
            // Square 2: uncurry(Hom(alpha, Hom(N, beta))(psi)) =
            //           beta . uncurry(psi) . (alpha (x) id).
            for psi_map in &inner_side {
                checked2 += 1;
                let psi = ModuleHom::new(m, &inner.module, psi_map.clone())?;
                let pushed: Result<Vec<u32>> = (0..m.size())
                    .map(|mi| {
                        let idx = psi.apply(alpha.apply(mi));
                        let section: Vec<u32> = inner.maps[idx]
                            .iter()
                            .map(|&v| beta.apply(v as usize) as u32)
                            .collect();
                        inner
                            .index_of(&section)
                            .map(|i| i as u32)
                            .ok_or_else(|| KamError::ConstructionFailed {
                                detail: "Hom(N,beta) left the inner hom".to_string(),
                            })
                    })
                    .collect();
                let lhs = uncurry(
                    &t,
                    &ModuleHom::new(m, &inner.module, pushed?)?,
                    &inner,
                );
                let plain = uncurry(&t, &psi, &inner);
                let rhs: Vec<u32> = alpha_tensor_id
                    .map
                    .iter()
                    .map(|&x| beta.apply(plain.apply(x as usize)) as u32)
                    .collect();
                if lhs.map != rhs {
                    square2_bad = Some(vec![ai, bi]);
                    break;
                }
            }
        }
    }
    report.push(match square1_bad {
        None => LawCheck::pass("naturality_curry", "curry is natural in M and P", checked1),
        Some(w) => LawCheck::fail(
            "naturality_curry",
            "curry is natural in M and P",
            checked1,
            w,
            "square 1 fails".to_string(),
        ),
    });
    report.push(match square2_bad {
        None => LawCheck::pass(
            "naturality_uncurry",
            "uncurry is natural in M and P",
            checked2,
        ),
        Some(w) => LawCheck::fail(
            "naturality_uncurry",
            "uncurry is natural in M and P",
            checked2,
            w,
            "square 2 fails".to_string(),
        ),
    });

    Ok(AdjunctionReport {
        report,
        outer_homs: outer.len(),
        curried_homs: inner_side.len(),
    })
}

/// Outcome of the category laws: associativity and the two identity laws.
pub struct MonoidLawReport {
    pub report: LawReport,
    pub associativity_iso: Option<ModuleHom>,
    pub identity_left_iso: Option<ModuleHom>,
    pub identity_right_iso: Option<ModuleHom>,
}

/// Verifies (M (x) N) (x) P ~ M (x) (N (x) P) by isomorphism search and the
/// identity laws A (x) M ~ M ~ M (x) B via the canonical maps m -> 1 (x) m
/// and m -> m (x) 1.
pub fn check_monoid_laws(
    m: &Arc<KleeneModule>,
    n: &Arc<KleeneModule>,
    p: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<MonoidLawReport> {
    let mut report = LawReport::new(format!("monoid_laws({},{},{})", m.name, n.name, p.name));

    let t_mn = tensor_product(m, n, TensorPath::Auto, limits)?;
    let left_assoc = tensor_product(&t_mn.module, p, TensorPath::Auto, limits)?;
    let t_np = tensor_product(n, p, TensorPath::Auto, limits)?;
    let right_assoc = tensor_product(m, &t_np.module, TensorPath::Auto, limits)?;
    let assoc_iso = module_iso_search(&left_assoc.module, &right_assoc.module, limits)?;
    report.push(match &assoc_iso {
        Some(_) => LawCheck::pass(
            "tensor_assoc",
            "(M(x)N)(x)P ~ M(x)(N(x)P)",
            (left_assoc.module.size() + right_assoc.module.size()) as u64,
        ),
        None => LawCheck::fail(
            "tensor_assoc",
            "(M(x)N)(x)P ~ M(x)(N(x)P)",
            (left_assoc.module.size() + right_assoc.module.size()) as u64,
            vec![left_assoc.module.size(), right_assoc.module.size()],
            "no isomorphism found".to_string(),
        ),
    });

    let a = m.left_algebra().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} has no left algebra", m.name),
    })?;
    let a_reg = crate::module::regular_bimodule(a, limits)?;
    let t_am = tensor_product(&a_reg, m, TensorPath::Auto, limits)?;
    let unit_left = ModuleHom {
        source: Arc::clone(m),
        target: Arc::clone(&t_am.module),
        map: (0..m.size())
            .map(|x| t_am.pure_tensor(a.one(), x) as u32)
            .collect(),
    };
    let left_ok = unit_left.is_bijective() && unit_left.check().passed();
    report.push(if left_ok {
        LawCheck::pass(
            "tensor_unit_left",
            "m -> 1 (x) m is an isomorphism A (x) M ~ M",
            m.size() as u64,
        )
    } else {
        LawCheck::fail(
            "tensor_unit_left",
            "m -> 1 (x) m is an isomorphism A (x) M ~ M",
            m.size() as u64,
            vec![t_am.module.size(), m.size()],
            "canonical map is not an isomorphism".to_string(),
        )
    });

    let b = m.right_algebra().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} has no right algebra", m.name),
    })?;
    let b_reg = crate::module::regular_bimodule(b, limits)?;
    let t_mb = tensor_product(m, &b_reg, TensorPath::Auto, limits)?;
    let unit_right = ModuleHom {
        source: Arc::clone(m),
        target: Arc::clone(&t_mb.module),
        map: (0..m.size())
            .map(|x| t_mb.pure_tensor(x, b.one()) as u32)
            .collect(),
    };
    let right_ok = unit_right.is_bijective() && unit_right.check().passed();
    report.push(if right_ok {
        LawCheck::pass(
            "tensor_unit_right",
            "m -> m (x) 1 is an isomorphism M (x) B ~ M",
            m.size() as u64,
        )
    } else {
        LawCheck::fail(
            "tensor_unit_right",
            "m -> m (x) 1 is an isomorphism M (x) B ~ M",
            m.size() as u64,
            vec![t_mb.module.size(), m.size()],
            "canonical map is not an isomorphism".to_string(),
        )
    });

    Ok(MonoidLawReport {
        report,
        associativity_iso: assoc_iso,
        identity_left_iso: left_ok.then_some(unit_left),
        identity_right_iso: right_ok.then_some(unit_right),
    })
}

/// Runs both tensor paths and certifies the results isomorphic.
pub fn path_agreement(
    m: &Arc<KleeneModule>,
    n: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<(TensorProduct, TensorProduct, ModuleHom)> {
    let fast = tensor_product(m, n, TensorPath::FreeFastPath, limits)?;
    let slow = tensor_product(m, n, TensorPath::Exhaustive, limits)?;
    let iso = module_iso_search(&fast.module, &slow.module, limits)?.ok_or_else(|| {
        KamError::ConstructionFailed {
            detail: format!(
                "fast and exhaustive tensor paths disagree for {} (x) {}",
                m.name, n.name
            ),
        }
    })?;
    Ok((fast, slow, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::KleeneAlgebra;
    use crate::module::regular_bimodule;

    #[test]
    fn adjunction_on_regular_bimodules() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let reg = regular_bimodule(&k, &limits).unwrap();
        let endos: Vec<ModuleHom> = enumerate_homs(&reg, &reg, &limits)
            .unwrap()
            .into_iter()
            .map(|map| ModuleHom::new(&reg, &reg, map).unwrap())
            .collect();
        let out = check_adjunction(&reg, &reg, &reg, &endos, &endos, &limits).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        assert_eq!(out.outer_homs, out.curried_homs);
    }

    #[test]
    fn monoid_laws_on_regular() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let reg = regular_bimodule(&k, &limits).unwrap();
        let out = check_monoid_laws(&reg, &reg, &reg, &limits).unwrap();
        assert!(out.report.passed(), "{}", out.report);
    }
}
