//! Module congruences generated by element pairs, computed as a semilattice
//! closure, plus quotient modules.
//!
//! The carrier of a finite Kleene module is a join-semilattice, and every
//! class of a join-compatible congruence is convex with a top element. The
//! closure therefore computes a saturation map x -> top of the class of x:
//! each generating pair (p, q) contributes the inflation rules
//! "x >= p implies x := x + q" and "x >= q implies x := x + p", and the
//! kernel of the resulting saturation is automatically compatible with
//! addition. Compatibility with the scalar actions is obtained by closing
//! the generating pairs under the action orbit (a.p.c, a.q.c) first: the
//! image of a rule instance under an action is again a rule instance, so the
//! kernel is action-compatible as well. The result is the least congruence
//! containing the generators, which the brute-force partition oracle in the
//! test suite confirms on small carriers.

use std::sync::Arc;

use crate::error::{KamError, Result};
use crate::limits::Limits;
use crate::module::{ActionSide, KleeneModule, Side};

#[derive(Debug, Clone)]
pub enum TraceEvent {
    /// A user-supplied generating pair.
    Generator { left: usize, right: usize },
    /// A merge forced by the star quasi-identity: the class of `top` absorbed
    /// `scalar^* . top`.
    Repair { side: Side, scalar: usize, top: usize },
}

/// A congruence of a module: the least one containing `generators` whose
/// quotient satisfies the module laws including the star quasi-identity.
#[derive(Clone)]
pub struct Congruence {
    pub module: Arc<KleeneModule>,
    /// element -> class index; classes are numbered by their least element.
    pub class_of: Vec<u32>,
    /// class -> top element (the join of the class).
    pub class_top: Vec<u32>,
    /// class -> least element, the canonical representative.
    pub class_rep: Vec<u32>,
    pub generators: Vec<(usize, usize)>,
    pub trace: Vec<TraceEvent>,
    /// Number of quasi-identity repair merges that were required.
    pub repairs: usize,
}

impl Congruence {
    pub fn class_count(&self) -> usize {
        self.class_top.len()
    }

    /// element -> representative element, as a flat partition table.
    pub fn representatives(&self) -> Vec<u32> {
        self.class_of
            .iter()
            .map(|&c| self.class_rep[c as usize])
            .collect()
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }
}

struct Saturator {
    /// (trigger, addend): if trigger <= x then x absorbs addend.
    rules: Vec<(usize, usize)>,
}

impl Saturator {
    fn saturate(&self, module: &KleeneModule, mut x: usize) -> usize {
        loop {
            let mut changed = false;
            for &(trigger, addend) in &self.rules {
                if module.add(x, trigger) == x {
                    let bigger = module.add(x, addend);
                    if bigger != x {
                        x = bigger;
                        changed = true;
                    }
                }
            }
            if !changed {
                return x;
            }
        }
    }
}

fn orbit_pairs(module: &KleeneModule, p: usize, q: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    match (module.left_algebra().cloned(), module.right_algebra().cloned()) {
        (Some(a), Some(c)) => {
            for ai in 0..a.size() {
                let pa = module.act_left(ai, p);
                let qa = module.act_left(ai, q);
                for ci in 0..c.size() {
                    out.push((module.act_right(pa, ci), module.act_right(qa, ci)));
                }
            }
        }
        (Some(a), None) => {
            for ai in 0..a.size() {
                out.push((module.act_left(ai, p), module.act_left(ai, q)));
            }
        }
        (None, Some(c)) => {
            for ci in 0..c.size() {
                out.push((module.act_right(p, ci), module.act_right(q, ci)));
            }
        }
        (None, None) => out.push((p, q)),
    }
    out
}

fn rules_from_pairs(module: &KleeneModule, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut rules = Vec::new();
    for &(p, q) in pairs {
        for (u, v) in orbit_pairs(module, p, q) {
            if u == v {
                continue;
            }
            let w = module.add(u, v);
            rules.push((u, w));
            rules.push((v, w));
        }
    }
    rules.sort_unstable();
    rules.dedup();
    rules.retain(|&(t, a)| module.add(t, a) != t || t != a);
    rules
}

/// Computes the least law-abiding congruence containing `pairs`.
pub fn congruence_closure(
    module: &Arc<KleeneModule>,
    pairs: &[(usize, usize)],
    limits: &Limits,
) -> Result<Congruence> {
    let n = module.size();
    if n > limits.max_table_carrier {
        return Err(KamError::SizeGuard {
            what: "congruence carrier",
            size: n,
            bound: limits.max_table_carrier,
        });
    }
    for &(p, q) in pairs {
        if p >= n || q >= n {
            return Err(KamError::Malformed {
                what: "congruence",
                detail: format!("pair ({p},{q}) out of range"),
            });
        }
    }

    let mut trace: Vec<TraceEvent> = pairs
        .iter()
        .map(|&(left, right)| TraceEvent::Generator { left, right })
        .collect();
    let mut all_pairs: Vec<(usize, usize)> = pairs.to_vec();
    let mut repairs = 0usize;

    loop {
        let sat = Saturator {
            rules: rules_from_pairs(module, &all_pairs),
        };
        let tops: Vec<usize> = (0..n).map(|x| sat.saturate(module, x)).collect();

        // Quasi-identity repair: while some class violates
        // a.[m] <= [m] => a^*.[m] <= [m], merge [a^*.m + m] into [m].
        let le_classes = |x: usize, y: usize| -> bool {
            // [x] <= [y] iff [x+y] = [y], evaluated through tops.
            tops[module.add(x, y)] == tops[y]
        };
        let mut violation: Option<(Side, usize, usize)> = None;
        'scan: for &top in &tops {
            if tops[top] != top {
                continue;
            }
            if let Some(alg) = module.left_algebra() {
                for a in 0..alg.size() {
                    if le_classes(module.act_left(a, top), top)
                        && !le_classes(module.act_left(alg.star(a), top), top)
                    {
                        violation = Some((Side::Left, a, top));
                        break 'scan;
                    }
                }
            }
            if let Some(alg) = module.right_algebra() {
                for c in 0..alg.size() {
                    if le_classes(module.act_right(top, c), top)
                        && !le_classes(module.act_right(top, alg.star(c)), top)
                    {
                        violation = Some((Side::Right, c, top));
                        break 'scan;
                    }
                }
            }
        }

        match violation {
            Some((side, scalar, top)) => {
                let alg = match side {
                    Side::Left => module.left_algebra().unwrap(),
                    Side::Right => module.right_algebra().unwrap(),
                };
                let starred = match side {
                    Side::Left => module.act_left(alg.star(scalar), top),
                    Side::Right => module.act_right(top, alg.star(scalar)),
                };
                all_pairs.push((top, module.add(top, starred)));
                trace.push(TraceEvent::Repair { side, scalar, top });
                repairs += 1;
            }
            None => {
                // Stable: build the class structure, numbered by least element.
                let mut class_of = vec![u32::MAX; n];
                let mut class_top = Vec::new();
                let mut class_rep = Vec::new();
                for x in 0..n {
                    if class_of[x] != u32::MAX {
                        continue;
                    }
                    let c = class_top.len() as u32;
                    class_top.push(tops[x] as u32);
                    class_rep.push(x as u32);
                    for y in x..n {
                        if tops[y] == tops[x] {
                            class_of[y] = c;
                        }
                    }
                }
                return Ok(Congruence {
                    module: Arc::clone(module),
                    class_of,
                    class_top,
                    class_rep,
                    generators: pairs.to_vec(),
                    trace,
                    repairs,
                });
            }
        }
    }
}

/// Quotients a module by the least law-abiding congruence containing `pairs`.
pub fn quotient_module(
    module: &Arc<KleeneModule>,
    pairs: &[(usize, usize)],
    limits: &Limits,
) -> Result<(Arc<KleeneModule>, Congruence)> {
    let cong = congruence_closure(module, pairs, limits)?;
    let q = cong.class_count();
    let top = |c: usize| cong.class_top[c] as usize;
    let cls = |x: usize| cong.class_of[x] as usize;

    let mut add = Vec::with_capacity(q * q);
    for i in 0..q {
        for j in 0..q {
            add.push(cls(module.add(top(i), top(j))) as u32);
        }
    }
    let left = module.left_algebra().map(|alg| {
        let k = alg.size();
        let mut t = Vec::with_capacity(k * q);
        for a in 0..k {
            for i in 0..q {
                t.push(cls(module.act_left(a, top(i))) as u32);
            }
        }
        ActionSide {
            algebra: Arc::clone(alg),
            table: t,
        }
    });
    let right = module.right_algebra().map(|alg| {
        let k = alg.size();
        let mut t = Vec::with_capacity(q * k);
        for i in 0..q {
            for c in 0..k {
                t.push(cls(module.act_right(top(i), c)) as u32);
            }
        }
        ActionSide {
            algebra: Arc::clone(alg),
            table: t,
        }
    });
    let quotient = KleeneModule::from_tables(
        format!("{}/~", module.name),
        q,
        cls(module.zero()),
        add,
        left,
        right,
        limits,
    )?;
    Ok((quotient, cong))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::KleeneAlgebra;
    use crate::module::{free_module, regular_bimodule};

    #[test]
    fn empty_pairs_give_identity_partition() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = regular_bimodule(&k, &limits).unwrap();
        let cong = congruence_closure(&m, &[], &limits).unwrap();
        assert_eq!(cong.class_count(), m.size());
        assert_eq!(cong.repairs, 0);
    }

    #[test]
    fn collapsing_top_with_zero_collapses_everything() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = regular_bimodule(&k, &limits).unwrap();
        let cong = congruence_closure(&m, &[(1, 0)], &limits).unwrap();
        assert_eq!(cong.class_count(), 1);
    }

    #[test]
    fn quotient_of_rank_two_by_identified_basis() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = free_module(&k, 2, true, true, &limits).unwrap();
        let basis = m.left_free.as_ref().unwrap().basis.clone();
        let (q, cong) = quotient_module(&m, &[(basis[0], basis[1])], &limits).unwrap();
        assert_eq!(q.size(), 2);
        assert!(cong.same_class(basis[0], basis[1]));
        assert!(q.check_module_axioms().unwrap().passed());
    }

    #[test]
    fn closure_is_idempotent() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = free_module(&k, 2, true, true, &limits).unwrap();
        let first = congruence_closure(&m, &[(1, 2)], &limits).unwrap();
        // Re-close using one pair from every class: same partition.
        let seed: Vec<(usize, usize)> = (0..m.size())
            .map(|x| (x, first.class_top[first.class_of[x] as usize] as usize))
            .collect();
        let second = congruence_closure(&m, &seed, &limits).unwrap();
        assert_eq!(first.class_of, second.class_of);
    }
}
