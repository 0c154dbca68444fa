//! Named builders for the structures exercised throughout the tests and the
//! command-line tool.

use std::sync::Arc;

use crate::algebra::{AlgebraHom, KleeneAlgebra};
use crate::error::{KamError, Result};
use crate::limits::Limits;
use crate::module::{
    algebra_over_subalgebra, free_module, regular_bimodule, KleeneModule,
};

/// Parses a builtin algebra spec: `bool2`, `rel(n)`, or `mat(<spec>,n)`.
pub fn builtin_algebra(spec: &str, limits: &Limits) -> Result<Arc<KleeneAlgebra>> {
    let spec = spec.trim();
    if spec == "bool2" {
        return Ok(KleeneAlgebra::bool2());
    }
    if let Some(rest) = spec.strip_prefix("rel(").and_then(|s| s.strip_suffix(')')) {
        let n: usize = rest.trim().parse().map_err(|_| KamError::Malformed {
            what: "algebra spec",
            detail: format!("bad point count in {spec}"),
        })?;
        return KleeneAlgebra::rel(n, limits);
    }
    if let Some(rest) = spec.strip_prefix("mat(").and_then(|s| s.strip_suffix(')')) {
        let (base, dim) = rest.rsplit_once(',').ok_or_else(|| KamError::Malformed {
            what: "algebra spec",
            detail: format!("expected mat(<spec>,n) in {spec}"),
        })?;
        let dim: usize = dim.trim().parse().map_err(|_| KamError::Malformed {
            what: "algebra spec",
            detail: format!("bad dimension in {spec}"),
        })?;
        let base = builtin_algebra(base, limits)?;
        return KleeneAlgebra::matrix(&base, dim, limits);
    }
    Err(KamError::Malformed {
        what: "algebra spec",
        detail: format!("unknown builtin {spec}"),
    })
}

/// The two-element subalgebra {0, 1} of any algebra.
pub fn two_element_subalgebra(
    k: &Arc<KleeneAlgebra>,
) -> Result<(Arc<KleeneAlgebra>, Vec<usize>)> {
    k.subalgebra(format!("{}[01]", k.name()), &[k.zero(), k.one()])
}

/// The diagonal relations inside rel(n): all subsets of the identity.
pub fn diagonal_subalgebra(
    rel: &Arc<KleeneAlgebra>,
) -> Result<(Arc<KleeneAlgebra>, Vec<usize>)> {
    let points = rel.rel_points().ok_or_else(|| KamError::Incompatible {
        detail: "not a relation algebra".to_string(),
    })?;
    let mut subset = Vec::new();
    for mask in 0..1usize << points {
        let mut element = 0usize;
        for p in 0..points {
            if mask >> p & 1 == 1 {
                element |= 1 << (p * points + p);
            }
        }
        subset.push(element);
    }
    rel.subalgebra(format!("{}[diag]", rel.name()), &subset)
}

/// The scalar embedding K -> M_n(K), a |-> a on the diagonal.
pub fn scalar_embedding(
    k: &Arc<KleeneAlgebra>,
    mn: &Arc<KleeneAlgebra>,
) -> Result<AlgebraHom> {
    let (base, dim) = mn.matrix_structure().ok_or_else(|| KamError::Incompatible {
        detail: "target is not a matrix algebra".to_string(),
    })?;
    if !base.same_as(k) {
        return Err(KamError::Incompatible {
            detail: "matrix algebra is over a different base".to_string(),
        });
    }
    let map = (0..k.size())
        .map(|a| {
            let mut entries = vec![k.zero(); dim * dim];
            for d in 0..dim {
                entries[d * dim + d] = a;
            }
            crate::algebra::encode_digits(&entries, k.size()) as u32
        })
        .collect();
    AlgebraHom::new(k, mn, map)
}

/// The embedding of bool2 into any algebra: 0 -> 0, 1 -> 1.
pub fn bool2_embedding(target: &Arc<KleeneAlgebra>) -> Result<AlgebraHom> {
    let two = KleeneAlgebra::bool2();
    AlgebraHom::new(&two, target, vec![target.zero() as u32, target.one() as u32])
}

/// Every module the workbench constructors produce over the small built-in
/// algebras; the law suite quantifies over this list.
pub fn module_catalog(limits: &Limits) -> Result<Vec<Arc<KleeneModule>>> {
    let two = KleeneAlgebra::bool2();
    let rel2 = KleeneAlgebra::rel(2, limits)?;
    let mut out: Vec<Arc<KleeneModule>> = Vec::new();

    out.push(regular_bimodule(&two, limits)?);
    out.push(regular_bimodule(&rel2, limits)?);
    let (sub01, emb01) = two_element_subalgebra(&rel2)?;
    out.push(algebra_over_subalgebra(&rel2, &sub01, &emb01, limits)?);
    let (diag, diag_emb) = diagonal_subalgebra(&rel2)?;
    out.push(algebra_over_subalgebra(&rel2, &diag, &diag_emb, limits)?);
    for rank in 0..=2 {
        out.push(free_module(&two, rank, true, true, limits)?);
    }
    out.push(free_module(&two, 2, true, false, limits)?);
    out.push(free_module(&two, 2, false, true, limits)?);
    Ok(out)
}
