//! Module homomorphisms: enumeration of hom sets, homomorphism modules with
//! pointwise structure, and duals.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::KleeneAlgebra;
use crate::error::{KamError, Result};
use crate::law::{LawCheck, LawReport};
use crate::limits::Limits;
use crate::module::{ActionSide, FreeStructure, KleeneModule, Side};

/// A map between module carriers; `check` reports which structure it
/// actually preserves.
#[derive(Clone)]
pub struct ModuleHom {
    pub source: Arc<KleeneModule>,
    pub target: Arc<KleeneModule>,
    pub map: Vec<u32>,
}

impl ModuleHom {
    pub fn new(
        source: &Arc<KleeneModule>,
        target: &Arc<KleeneModule>,
        map: Vec<u32>,
    ) -> Result<Self> {
        if map.len() != source.size() {
            return Err(KamError::Malformed {
                what: "module_hom",
                detail: format!("map has {} entries, expected {}", map.len(), source.size()),
            });
        }
        if let Some(bad) = map.iter().find(|&&v| v as usize >= target.size()) {
            return Err(KamError::Malformed {
                what: "module_hom",
                detail: format!("map entry {bad} out of range"),
            });
        }
        Ok(ModuleHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map,
        })
    }

    pub fn identity(module: &Arc<KleeneModule>) -> Self {
        ModuleHom {
            source: Arc::clone(module),
            target: Arc::clone(module),
            map: (0..module.size() as u32).collect(),
        }
    }

    pub fn zero(source: &Arc<KleeneModule>, target: &Arc<KleeneModule>) -> Self {
        ModuleHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map: vec![target.zero() as u32; source.size()],
        }
    }

    pub fn apply(&self, m: usize) -> usize {
        self.map[m] as usize
    }

    pub fn compose_after(&self, first: &ModuleHom) -> ModuleHom {
        ModuleHom {
            source: Arc::clone(&first.source),
            target: Arc::clone(&self.target),
            map: first.map.iter().map(|&v| self.map[v as usize]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.size() != self.target.size() {
            return false;
        }
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            if seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<ModuleHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0u32; self.target.size()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Some(ModuleHom {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            map: inv,
        })
    }

    /// Checks preservation of zero, add, and every action present in both
    /// source and target over the same algebra.
    pub fn check(&self) -> LawReport {
        let mut report = LawReport::new(format!(
            "hom {} -> {}",
            self.source.name, self.target.name
        ));
        let s = &self.source;
        let t = &self.target;
        let h = |m: usize| self.map[m] as usize;
        let n = s.size();

        report.push(if h(s.zero()) == t.zero() {
            LawCheck::pass("hom_zero", "h(0) = 0", 1)
        } else {
            LawCheck::fail("hom_zero", "h(0) = 0", 1, vec![s.zero()], String::new())
        });
        let bad = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| h(s.add(x, y)) != t.add(h(x), h(y)));
        report.push(match bad {
            None => LawCheck::pass("hom_add", "h(x+y) = h(x)+h(y)", (n * n) as u64),
            Some((x, y)) => LawCheck::fail(
                "hom_add",
                "h(x+y) = h(x)+h(y)",
                (n * n) as u64,
                vec![x, y],
                String::new(),
            ),
        });
        if let (Some(sa), Some(ta)) = (s.left_algebra(), t.left_algebra()) {
            if sa.same_as(ta) {
                let k = sa.size();
                let bad = (0..k)
                    .flat_map(|a| (0..n).map(move |m| (a, m)))
                    .find(|&(a, m)| h(s.act_left(a, m)) != t.act_left(a, h(m)));
                report.push(match bad {
                    None => LawCheck::pass("hom_left", "h(a.m) = a.h(m)", (k * n) as u64),
                    Some((a, m)) => LawCheck::fail(
                        "hom_left",
                        "h(a.m) = a.h(m)",
                        (k * n) as u64,
                        vec![a, m],
                        String::new(),
                    ),
                });
            }
        }
        if let (Some(sa), Some(ta)) = (s.right_algebra(), t.right_algebra()) {
            if sa.same_as(ta) {
                let k = sa.size();
                let bad = (0..n)
                    .flat_map(|m| (0..k).map(move |c| (m, c)))
                    .find(|&(m, c)| h(s.act_right(m, c)) != t.act_right(h(m), c));
                report.push(match bad {
                    None => LawCheck::pass("hom_right", "h(m.c) = h(m).c", (k * n) as u64),
                    Some((m, c)) => LawCheck::fail(
                        "hom_right",
                        "h(m.c) = h(m).c",
                        (k * n) as u64,
                        vec![m, c],
                        String::new(),
                    ),
                });
            }
        }
        report
    }
}

fn is_hom(source: &KleeneModule, target: &KleeneModule, map: &[u32]) -> bool {
    let h = |m: usize| map[m] as usize;
    let n = source.size();
    if h(source.zero()) != target.zero() {
        return false;
    }
    if let (Some(sa), Some(_)) = (source.left_algebra(), target.left_algebra()) {
        for a in 0..sa.size() {
            for m in 0..n {
                if h(source.act_left(a, m)) != target.act_left(a, h(m)) {
                    return false;
                }
            }
        }
    }
    if let (Some(sa), Some(_)) = (source.right_algebra(), target.right_algebra()) {
        for m in 0..n {
            for c in 0..sa.size() {
                if h(source.act_right(m, c)) != target.act_right(h(m), c) {
                    return false;
                }
            }
        }
    }
    for x in 0..n {
        for y in x..n {
            if h(source.add(x, y)) != target.add(h(x), h(y)) {
                return false;
            }
        }
    }
    true
}

/// Enumerates every homomorphism from `source` to `target` (same signature).
///
/// A homomorphism is determined by its values on the add-irreducible
/// elements, or on a basis when the source is free, so the search assigns
/// images to those generators and verifies the join extension in full.
/// Returns canonical (lexicographically sorted) map tables.
pub fn enumerate_homs(
    source: &Arc<KleeneModule>,
    target: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<Vec<Vec<u32>>> {
    if !source.same_signature(target) {
        return Err(KamError::Incompatible {
            detail: format!(
                "{} and {} have different signatures",
                source.name, target.name
            ),
        });
    }
    let n = source.size();
    let tn = target.size();

    // Generator set: a free basis when available, otherwise the irreducibles.
    enum Gen<'a> {
        FreeLeft(&'a FreeStructure),
        FreeRight(&'a FreeStructure),
        Irr(Vec<usize>),
    }
    let gen = if source.left_algebra().is_some() && source.left_free.is_some() {
        Gen::FreeLeft(source.left_free.as_ref().unwrap())
    } else if source.right_algebra().is_some() && source.right_free.is_some() {
        Gen::FreeRight(source.right_free.as_ref().unwrap())
    } else {
        Gen::Irr(source.irreducibles())
    };
    let rank = match &gen {
        Gen::FreeLeft(f) | Gen::FreeRight(f) => f.rank(),
        Gen::Irr(v) => v.len(),
    };
    let candidates = (tn as u128).saturating_pow(rank as u32);
    if candidates > limits.hom_bound as u128 {
        return Err(KamError::EnumerationGuard {
            what: "hom set",
            count: candidates,
            bound: limits.hom_bound,
        });
    }

    // Irreducibles below each element (as generator slots), for the join
    // extension.
    let irr_slots_below: Option<Vec<Vec<usize>>> = match &gen {
        Gen::Irr(irr) => Some(
            (0..n)
                .map(|x| {
                    irr.iter()
                        .enumerate()
                        .filter(|&(_, &e)| source.le(e, x))
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect(),
        ),
        _ => None,
    };

    let mut out = Vec::new();
    let mut images = vec![0usize; rank];
    loop {
        let map: Vec<u32> = match &gen {
            Gen::FreeLeft(f) => (0..n)
                .map(|x| {
                    let mut acc = target.zero();
                    for i in 0..rank {
                        acc = target.add(acc, target.act_left(f.coord(x, i), images[i]));
                    }
                    acc as u32
                })
                .collect(),
            Gen::FreeRight(f) => (0..n)
                .map(|x| {
                    let mut acc = target.zero();
                    for i in 0..rank {
                        acc = target.add(acc, target.act_right(images[i], f.coord(x, i)));
                    }
                    acc as u32
                })
                .collect(),
            Gen::Irr(_) => {
                let below = irr_slots_below.as_ref().unwrap();
                (0..n)
                    .map(|x| {
                        let mut acc = target.zero();
                        for &slot in &below[x] {
                            acc = target.add(acc, images[slot]);
                        }
                        acc as u32
                    })
                    .collect()
            }
        };
        if is_hom(source, target, &map) {
            out.push(map);
        }
        // Advance the odometer over target elements.
        let mut i = 0;
        loop {
            if i == rank {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            images[i] += 1;
            if images[i] < tn {
                break;
            }
            images[i] = 0;
            i += 1;
        }
    }
}

fn action_table_left(
    carrier: &[Vec<u32>],
    index: &HashMap<Vec<u32>, usize>,
    algebra: &Arc<KleeneAlgebra>,
    value: impl Fn(usize, &Vec<u32>) -> Option<Vec<u32>>,
) -> Result<Vec<u32>> {
    let mut table = Vec::with_capacity(algebra.size() * carrier.len());
    for a in 0..algebra.size() {
        for phi in carrier {
            let img = value(a, phi).ok_or_else(|| KamError::HomNotClosed {
                detail: format!("scalar {a} applied to a hom leaves the hom set"),
            })?;
            let idx = index.get(&img).ok_or_else(|| KamError::HomNotClosed {
                detail: format!("scalar {a} applied to a hom leaves the hom set"),
            })?;
            table.push(*idx as u32);
        }
    }
    Ok(table)
}

/// The homomorphism module Hom(M, N) with pointwise addition and pointwise
/// actions inherited from N. Construction fails if a pointwise action does
/// not stay inside the hom set.
pub fn hom_module(
    source: &Arc<KleeneModule>,
    target: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<(Arc<KleeneModule>, Vec<ModuleHom>)> {
    let maps = enumerate_homs(source, target, limits)?;
    let carrier = maps;
    let index: HashMap<Vec<u32>, usize> = carrier
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let size = carrier.len();
    let n = source.size();

    let mut add = Vec::with_capacity(size * size);
    for x in &carrier {
        for y in &carrier {
            let sum: Vec<u32> = (0..n)
                .map(|m| target.add(x[m] as usize, y[m] as usize) as u32)
                .collect();
            let idx = index.get(&sum).ok_or_else(|| KamError::HomNotClosed {
                detail: "pointwise sum of homs is not a hom".to_string(),
            })?;
            add.push(*idx as u32);
        }
    }
    let zero_map = vec![target.zero() as u32; n];
    let zero = *index.get(&zero_map).ok_or_else(|| KamError::HomNotClosed {
        detail: "zero map missing from hom set".to_string(),
    })?;

    let left = match target.left_algebra() {
        Some(alg) => {
            let t = action_table_left(&carrier, &index, alg, |a, phi| {
                Some(
                    phi.iter()
                        .map(|&v| target.act_left(a, v as usize) as u32)
                        .collect(),
                )
            })?;
            Some(ActionSide {
                algebra: Arc::clone(alg),
                table: t,
            })
        }
        None => None,
    };
    let right = match target.right_algebra() {
        Some(alg) => {
            // Right tables are indexed phi * |C| + c.
            let by_scalar = action_table_left(&carrier, &index, alg, |c, phi| {
                Some(
                    phi.iter()
                        .map(|&v| target.act_right(v as usize, c) as u32)
                        .collect(),
                )
            })?;
            let k = alg.size();
            let mut t = vec![0u32; size * k];
            for c in 0..k {
                for m in 0..size {
                    t[m * k + c] = by_scalar[c * size + m];
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
        format!("Hom({},{})", source.name, target.name),
        size,
        zero,
        add,
        left,
        right,
        limits,
    )?;
    let homs = carrier
        .iter()
        .map(|m| ModuleHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map: m.clone(),
        })
        .collect();
    Ok((module, homs))
}

/// Shorthand for Hom(M, M).
pub fn end_module(
    module: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<(Arc<KleeneModule>, Vec<ModuleHom>)> {
    hom_module(module, module, limits)
}

/// The dual of a module: linear maps into the base algebra of the chosen
/// side, with sides swapped on the result. Dualizing the left side of an
/// (A, B)-bimodule yields a (B, A)-bimodule of left-linear maps into A;
/// dualizing the right side yields a (B, A)-bimodule of right-linear maps
/// into B acting through the leftover structure.
pub fn dual_module(
    module: &Arc<KleeneModule>,
    side: Side,
    limits: &Limits,
) -> Result<(Arc<KleeneModule>, Vec<ModuleHom>)> {
    let algebra = match side {
        Side::Left => module.left_algebra(),
        Side::Right => module.right_algebra(),
    }
    .ok_or_else(|| KamError::Incompatible {
        detail: format!("{} has no {side:?} action to dualize", module.name),
    })?
    .clone();

    let regular = crate::module::regular_bimodule(&algebra, limits)?;
    let (reduct, reg_reduct) = match side {
        Side::Left => (module.left_reduct()?, regular.left_reduct()?),
        Side::Right => (module.right_reduct()?, regular.right_reduct()?),
    };
    let maps = enumerate_homs(&reduct, &reg_reduct, limits)?;
    let index: HashMap<Vec<u32>, usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let size = maps.len();
    let n = module.size();

    let mut add = Vec::with_capacity(size * size);
    for x in &maps {
        for y in &maps {
            let sum: Vec<u32> = (0..n)
                .map(|m| algebra.add(x[m] as usize, y[m] as usize) as u32)
                .collect();
            let idx = index.get(&sum).ok_or_else(|| KamError::ConstructionFailed {
                detail: "dual carrier not closed under pointwise sum".to_string(),
            })?;
            add.push(*idx as u32);
        }
    }
    let zero = *index
        .get(&vec![algebra.zero() as u32; n])
        .ok_or_else(|| KamError::ConstructionFailed {
            detail: "zero functional missing from dual".to_string(),
        })?;

    let lookup = |img: Vec<u32>| -> Result<u32> {
        index
            .get(&img)
            .map(|&i| i as u32)
            .ok_or_else(|| KamError::ConstructionFailed {
                detail: "dual carrier not closed under an action".to_string(),
            })
    };

    // Post-composition with multiplication in the dualized algebra.
    let post_side = |on_left: bool| -> Result<Vec<u32>> {
        let k = algebra.size();
        let mut t = Vec::with_capacity(k * size);
        for a in 0..k {
            for phi in &maps {
                let img: Vec<u32> = phi
                    .iter()
                    .map(|&v| {
                        if on_left {
                            algebra.mul(a, v as usize) as u32
                        } else {
                            algebra.mul(v as usize, a) as u32
                        }
                    })
                    .collect();
                t.push(lookup(img)?);
            }
        }
        Ok(t)
    };
    // Pre-composition with the module action on the non-dualized side.
    let pre_side = |other: &Arc<KleeneAlgebra>, via_left: bool| -> Result<Vec<u32>> {
        let k = other.size();
        let mut t = Vec::with_capacity(k * size);
        for a in 0..k {
            for phi in &maps {
                let img: Vec<u32> = (0..n)
                    .map(|m| {
                        let pre = if via_left {
                            module.act_left(a, m)
                        } else {
                            module.act_right(m, a)
                        };
                        phi[pre]
                    })
                    .collect();
                t.push(lookup(img)?);
            }
        }
        Ok(t)
    };

    let transpose = |t: Vec<u32>, k: usize| -> Vec<u32> {
        let mut out = vec![0u32; t.len()];
        for a in 0..k {
            for m in 0..size {
                out[m * k + a] = t[a * size + m];
            }
        }
        out
    };

    let (left_side, right_side, dual_free) = match side {
        Side::Left => {
            // Right action by post-multiplication; left action precomposes
            // the right action of the original bimodule when present.
            let right = ActionSide {
                algebra: Arc::clone(&algebra),
                table: transpose(post_side(false)?, algebra.size()),
            };
            let left = match module.right_algebra() {
                Some(other) => Some(ActionSide {
                    algebra: Arc::clone(other),
                    table: pre_side(other, false)?,
                }),
                None => None,
            };
            // Dual basis when the source is free on the dualized side.
            let free = module.left_free.as_ref().map(|f| {
                let basis: Vec<usize> = (0..f.rank())
                    .map(|i| {
                        let coord_map: Vec<u32> =
                            (0..n).map(|x| f.coords[x * f.rank() + i]).collect();
                        index[&coord_map]
                    })
                    .collect();
                let mut coords = Vec::with_capacity(size * f.rank());
                for phi in &maps {
                    for i in 0..f.rank() {
                        coords.push(phi[f.basis[i]]);
                    }
                }
                FreeStructure { basis, coords }
            });
            (left, Some(right), free)
        }
        Side::Right => {
            let left = ActionSide {
                algebra: Arc::clone(&algebra),
                table: post_side(true)?,
            };
            let right = match module.left_algebra() {
                Some(other) => Some(ActionSide {
                    algebra: Arc::clone(other),
                    table: transpose(pre_side(other, true)?, other.size()),
                }),
                None => None,
            };
            let free = module.right_free.as_ref().map(|f| {
                let basis: Vec<usize> = (0..f.rank())
                    .map(|i| {
                        let coord_map: Vec<u32> =
                            (0..n).map(|x| f.coords[x * f.rank() + i]).collect();
                        index[&coord_map]
                    })
                    .collect();
                let mut coords = Vec::with_capacity(size * f.rank());
                for phi in &maps {
                    for i in 0..f.rank() {
                        coords.push(phi[f.basis[i]]);
                    }
                }
                FreeStructure { basis, coords }
            });
            (Some(left), right, free)
        }
    };

    let module_out = KleeneModule::from_tables(
        format!("{}°", module.name),
        size,
        zero,
        add,
        left_side,
        right_side,
        limits,
    )?;
    // The dual of a free side is free on the dual basis, on the swapped side.
    let module_out = {
        let mut inner = (*module_out).clone();
        match side {
            Side::Left => inner.right_free = dual_free,
            Side::Right => inner.left_free = dual_free,
        }
        Arc::new(inner)
    };
    let homs = maps
        .iter()
        .map(|m| ModuleHom {
            source: Arc::clone(module),
            target: Arc::clone(&regular),
            map: m.clone(),
        })
        .collect();
    Ok((module_out, homs))
}
