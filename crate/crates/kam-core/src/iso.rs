//! Isomorphism search for modules and algebras: invariant (color) refinement
//! to prune, then backtracking over add-irreducible generators. Exhaustive,
//! so a `None` verdict is a proof of non-isomorphism at these sizes.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::KleeneAlgebra;
use crate::error::{KamError, Result};
use crate::hom::ModuleHom;
use crate::limits::Limits;
use crate::module::KleeneModule;

fn fnv(acc: u64, value: u64) -> u64 {
    (acc ^ value).wrapping_mul(0x0000_0100_0000_01b3)
}

/// Canonicalizes raw color keys to small ids, sorted for determinism.
fn canonical(keys: &[u64]) -> Vec<u32> {
    let mut sorted: Vec<u64> = keys.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let index: BTreeMap<u64, u32> = sorted
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i as u32))
        .collect();
    keys.iter().map(|k| index[k]).collect()
}

trait Structure {
    fn size(&self) -> usize;
    fn initial_key(&self, x: usize) -> u64;
    fn refine_key(&self, x: usize, colors: &[u32]) -> u64;
    fn join(&self, x: usize, y: usize) -> usize;
    fn bottom(&self) -> usize;
    fn verify(&self, other: &Self, map: &[u32]) -> bool;
}

struct ModuleView<'a>(&'a KleeneModule);

impl Structure for ModuleView<'_> {
    fn size(&self) -> usize {
        self.0.size()
    }

    fn initial_key(&self, x: usize) -> u64 {
        let m = self.0;
        let mut below = 0u64;
        let mut above = 0u64;
        for y in 0..m.size() {
            if m.le(y, x) {
                below += 1;
            }
            if m.le(x, y) {
                above += 1;
            }
        }
        let mut h = fnv(0xcbf2_9ce4_8422_2325, (x == m.zero()) as u64);
        h = fnv(h, below);
        h = fnv(h, above);
        h
    }

    fn refine_key(&self, x: usize, colors: &[u32]) -> u64 {
        let m = self.0;
        let mut h = fnv(0x517c_c1b7_2722_0a95, colors[x] as u64);
        if let Some(alg) = m.left_algebra() {
            for a in 0..alg.size() {
                h = fnv(h, colors[m.act_left(a, x)] as u64);
            }
        }
        if let Some(alg) = m.right_algebra() {
            for c in 0..alg.size() {
                h = fnv(h, colors[m.act_right(x, c)] as u64);
            }
        }
        let mut sums: Vec<u64> = (0..m.size())
            .map(|y| ((colors[y] as u64) << 32) | colors[m.add(x, y)] as u64)
            .collect();
        sums.sort_unstable();
        for s in sums {
            h = fnv(h, s);
        }
        h
    }

    fn join(&self, x: usize, y: usize) -> usize {
        self.0.add(x, y)
    }

    fn bottom(&self) -> usize {
        self.0.zero()
    }

    fn verify(&self, other: &Self, map: &[u32]) -> bool {
        let (m, n) = (self.0, other.0);
        let h = |x: usize| map[x] as usize;
        if h(m.zero()) != n.zero() {
            return false;
        }
        for x in 0..m.size() {
            for y in x..m.size() {
                if h(m.add(x, y)) != n.add(h(x), h(y)) {
                    return false;
                }
            }
        }
        if let Some(alg) = m.left_algebra() {
            for a in 0..alg.size() {
                for x in 0..m.size() {
                    if h(m.act_left(a, x)) != n.act_left(a, h(x)) {
                        return false;
                    }
                }
            }
        }
        if let Some(alg) = m.right_algebra() {
            for x in 0..m.size() {
                for c in 0..alg.size() {
                    if h(m.act_right(x, c)) != n.act_right(h(x), c) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

struct AlgebraView<'a>(&'a KleeneAlgebra);

impl Structure for AlgebraView<'_> {
    fn size(&self) -> usize {
        self.0.size()
    }

    fn initial_key(&self, x: usize) -> u64 {
        let a = self.0;
        let mut below = 0u64;
        for y in 0..a.size() {
            if a.le(y, x) {
                below += 1;
            }
        }
        let mut h = fnv(0xcbf2_9ce4_8422_2325, (x == a.zero()) as u64);
        h = fnv(h, (x == a.one()) as u64 + 2);
        h = fnv(h, below);
        h
    }

    fn refine_key(&self, x: usize, colors: &[u32]) -> u64 {
        let a = self.0;
        let mut h = fnv(0x517c_c1b7_2722_0a95, colors[x] as u64);
        h = fnv(h, colors[a.star(x)] as u64);
        let mut pairs: Vec<u64> = (0..a.size())
            .map(|y| {
                let mut p = fnv(0x9e37_79b9, colors[y] as u64);
                p = fnv(p, colors[a.add(x, y)] as u64);
                p = fnv(p, colors[a.mul(x, y)] as u64);
                p = fnv(p, colors[a.mul(y, x)] as u64);
                p
            })
            .collect();
        pairs.sort_unstable();
        for p in pairs {
            h = fnv(h, p);
        }
        h
    }

    fn join(&self, x: usize, y: usize) -> usize {
        self.0.add(x, y)
    }

    fn bottom(&self) -> usize {
        self.0.zero()
    }

    fn verify(&self, other: &Self, map: &[u32]) -> bool {
        let (a, b) = (self.0, other.0);
        let h = |x: usize| map[x] as usize;
        if h(a.zero()) != b.zero() || h(a.one()) != b.one() {
            return false;
        }
        for x in 0..a.size() {
            if h(a.star(x)) != b.star(h(x)) {
                return false;
            }
            for y in 0..a.size() {
                if h(a.add(x, y)) != b.add(h(x), h(y)) {
                    return false;
                }
                if h(a.mul(x, y)) != b.mul(h(x), h(y)) {
                    return false;
                }
            }
        }
        true
    }
}

fn add_irreducibles<S: Structure>(s: &S) -> Vec<usize> {
    let n = s.size();
    let mut reducible = vec![false; n];
    reducible[s.bottom()] = true;
    for y in 0..n {
        for z in 0..n {
            let x = s.join(y, z);
            if x != y && x != z {
                reducible[x] = true;
            }
        }
    }
    (0..n).filter(|&x| !reducible[x]).collect()
}

/// Joint color refinement: both structures are refined with the same keys so
/// color ids are comparable across them.
fn joint_colors<S: Structure>(a: &S, b: &S, rounds: usize) -> (Vec<u32>, Vec<u32>) {
    let na = a.size();
    let mut keys: Vec<u64> = (0..na).map(|x| a.initial_key(x)).collect();
    keys.extend((0..b.size()).map(|x| b.initial_key(x)));
    let mut colors = canonical(&keys);
    for _ in 0..rounds {
        let ca = &colors[..na];
        let cb = &colors[na..];
        let mut keys: Vec<u64> = (0..na).map(|x| a.refine_key(x, ca)).collect();
        keys.extend((0..b.size()).map(|x| b.refine_key(x, cb)));
        let next = canonical(&keys);
        if next == colors {
            break;
        }
        colors = next;
    }
    let cb = colors.split_off(na);
    (colors, cb)
}

fn search<S: Structure>(a: &S, b: &S, limits: &Limits) -> Result<Option<Vec<u32>>> {
    let n = a.size();
    if n != b.size() {
        return Ok(None);
    }
    let (ca, cb) = joint_colors(a, b, 8);
    let mut hist_a: BTreeMap<u32, usize> = BTreeMap::new();
    let mut hist_b: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &ca {
        *hist_a.entry(c).or_default() += 1;
    }
    for &c in &cb {
        *hist_b.entry(c).or_default() += 1;
    }
    if hist_a != hist_b {
        return Ok(None);
    }

    let mut gens = add_irreducibles(a);
    let irr_b = add_irreducibles(b);
    // Most constrained first: fewest same-colored candidates.
    gens.sort_by_key(|&e| {
        (
            irr_b.iter().filter(|&&f| cb[f] == ca[e]).count(),
            e,
        )
    });
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&e| irr_b.iter().copied().filter(|&f| cb[f] == ca[e]).collect())
        .collect();

    // Irreducibles below each element, for the join extension at the leaves.
    let below: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            gens.iter()
                .copied()
                .filter(|&e| a.join(e, x) == x)
                .collect()
        })
        .collect();

    let mut assign: Vec<usize> = Vec::with_capacity(gens.len());
    let mut used = vec![false; n];
    let mut budget = limits.iso_budget;

    fn backtrack<S: Structure>(
        a: &S,
        b: &S,
        gens: &[usize],
        candidates: &[Vec<usize>],
        below: &[Vec<usize>],
        assign: &mut Vec<usize>,
        used: &mut [bool],
        budget: &mut u64,
    ) -> Result<Option<Vec<u32>>> {
        if *budget == 0 {
            return Err(KamError::EnumerationGuard {
                what: "isomorphism search",
                count: 0,
                bound: 0,
            });
        }
        *budget -= 1;
        let depth = assign.len();
        if depth == gens.len() {
            // Extend over joins of irreducibles and verify in full.
            let n = a.size();
            let mut map = vec![0u32; n];
            let slot: BTreeMap<usize, usize> =
                gens.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            for x in 0..n {
                let mut acc = b.bottom();
                for &e in &below[x] {
                    acc = b.join(acc, assign[slot[&e]]);
                }
                map[x] = acc as u32;
            }
            let mut seen = vec![false; n];
            let bijective = map.iter().all(|&v| {
                let v = v as usize;
                !std::mem::replace(&mut seen[v], true)
            });
            if bijective && a.verify(b, &map) {
                return Ok(Some(map));
            }
            return Ok(None);
        }
        for &f in &candidates[depth] {
            if used[f] {
                continue;
            }
            // Order consistency against everything assigned so far.
            let e = gens[depth];
            let ok = (0..depth).all(|i| {
                let (e2, f2) = (gens[i], assign[i]);
                (a.join(e, e2) == e2) == (b.join(f, f2) == f2)
                    && (a.join(e2, e) == e) == (b.join(f2, f) == f)
            });
            if !ok {
                continue;
            }
            used[f] = true;
            assign.push(f);
            if let Some(found) = backtrack(a, b, gens, candidates, below, assign, used, budget)? {
                return Ok(Some(found));
            }
            assign.pop();
            used[f] = false;
        }
        Ok(None)
    }

    backtrack(a, b, &gens, &candidates, &below, &mut assign, &mut used, &mut budget)
}

/// Searches for a module isomorphism; `None` means none exists.
pub fn module_iso_search(
    m: &Arc<KleeneModule>,
    n: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<Option<ModuleHom>> {
    if !m.same_signature(n) {
        return Err(KamError::Incompatible {
            detail: format!("{} and {} have different signatures", m.name, n.name),
        });
    }
    let map = search(&ModuleView(m), &ModuleView(n), limits)?;
    Ok(map.map(|map| ModuleHom {
        source: Arc::clone(m),
        target: Arc::clone(n),
        map,
    }))
}

/// Searches for a Kleene algebra isomorphism; `None` means none exists.
pub fn algebra_iso_search(
    a: &Arc<KleeneAlgebra>,
    b: &Arc<KleeneAlgebra>,
    limits: &Limits,
) -> Result<Option<Vec<u32>>> {
    search(&AlgebraView(a), &AlgebraView(b), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{free_module, regular_bimodule};

    #[test]
    fn module_is_isomorphic_to_itself() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = regular_bimodule(&k, &limits).unwrap();
        let iso = module_iso_search(&m, &m, &limits).unwrap().unwrap();
        assert!(iso.is_bijective());
        assert!(iso.check().passed());
    }

    #[test]
    fn free_rank_one_is_regular_as_left_module() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let f1 = free_module(&k, 1, true, false, &limits).unwrap();
        let reg = regular_bimodule(&k, &limits).unwrap().left_reduct().unwrap();
        let iso = module_iso_search(&f1, &reg, &limits).unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn different_cardinalities_are_not_isomorphic() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let f1 = free_module(&k, 1, true, false, &limits).unwrap();
        let f2 = free_module(&k, 2, true, false, &limits).unwrap();
        assert!(module_iso_search(&f1, &f2, &limits).unwrap().is_none());
    }

    #[test]
    fn rel1_is_isomorphic_to_bool2() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let r1 = KleeneAlgebra::rel(1, &limits).unwrap();
        let iso = algebra_iso_search(&k, &r1, &limits).unwrap();
        assert!(iso.is_some());
    }
}
