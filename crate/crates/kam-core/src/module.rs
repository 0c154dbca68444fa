//! Finite Kleene modules: idempotent commutative monoids with left and/or
//! right scalar actions of finite Kleene algebras, all given by tables.

use std::sync::Arc;

use crate::algebra::KleeneAlgebra;
use crate::error::{KamError, Result};
use crate::law::{LawCheck, LawReport};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One scalar action: `table[a * size + m]` for left, `table[m * |C| + c]`
/// for right.
#[derive(Clone)]
pub struct ActionSide {
    pub algebra: Arc<KleeneAlgebra>,
    pub table: Vec<u32>,
}

/// Basis data witnessing that the module is free on one side: every element
/// has the unique decomposition `x = sum_i coords[x][i] . basis[i]` (left)
/// or `x = sum_i basis[i] . coords[x][i]` (right).
#[derive(Clone)]
pub struct FreeStructure {
    pub basis: Vec<usize>,
    /// size x basis.len(), row-major; entries are scalar indices.
    pub coords: Vec<u32>,
}

impl FreeStructure {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn coord(&self, element: usize, i: usize) -> usize {
        self.coords[element * self.basis.len() + i] as usize
    }
}

/// A finite Kleene module with explicit tables.
#[derive(Clone)]
pub struct KleeneModule {
    pub name: String,
    size: usize,
    zero: usize,
    add: Vec<u32>,
    left: Option<ActionSide>,
    right: Option<ActionSide>,
    pub left_free: Option<FreeStructure>,
    pub right_free: Option<FreeStructure>,
}

impl KleeneModule {
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        name: impl Into<String>,
        size: usize,
        zero: usize,
        add: Vec<u32>,
        left: Option<ActionSide>,
        right: Option<ActionSide>,
        limits: &Limits,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        if size == 0 {
            return Err(KamError::Malformed {
                what: "module",
                detail: format!("{name}: carrier must be nonempty"),
            });
        }
        if size > limits.max_table_carrier {
            return Err(KamError::SizeGuard {
                what: "module",
                size,
                bound: limits.max_table_carrier,
            });
        }
        if zero >= size {
            return Err(KamError::Malformed {
                what: "module",
                detail: format!("{name}: zero out of range"),
            });
        }
        if add.len() != size * size {
            return Err(KamError::Malformed {
                what: "module",
                detail: format!(
                    "{name}: add table has {} entries, expected {}",
                    add.len(),
                    size * size
                ),
            });
        }
        if let Some(bad) = add.iter().find(|&&v| v as usize >= size) {
            return Err(KamError::Malformed {
                what: "module",
                detail: format!("{name}: add entry {bad} out of range"),
            });
        }
        if left.is_none() && right.is_none() {
            return Err(KamError::Malformed {
                what: "module",
                detail: format!("{name}: module needs at least one action"),
            });
        }
        if let Some(l) = &left {
            if l.table.len() != l.algebra.size() * size {
                return Err(KamError::Malformed {
                    what: "module",
                    detail: format!("{name}: left action table has wrong shape"),
                });
            }
            if let Some(bad) = l.table.iter().find(|&&v| v as usize >= size) {
                return Err(KamError::Malformed {
                    what: "module",
                    detail: format!("{name}: left action entry {bad} out of range"),
                });
            }
        }
        if let Some(r) = &right {
            if r.table.len() != r.algebra.size() * size {
                return Err(KamError::Malformed {
                    what: "module",
                    detail: format!("{name}: right action table has wrong shape"),
                });
            }
            if let Some(bad) = r.table.iter().find(|&&v| v as usize >= size) {
                return Err(KamError::Malformed {
                    what: "module",
                    detail: format!("{name}: right action entry {bad} out of range"),
                });
            }
        }
        Ok(Arc::new(KleeneModule {
            name,
            size,
            zero,
            add,
            left,
            right,
            left_free: None,
            right_free: None,
        }))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y] as usize
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.add(x, y) == y
    }

    pub fn left_algebra(&self) -> Option<&Arc<KleeneAlgebra>> {
        self.left.as_ref().map(|s| &s.algebra)
    }

    pub fn right_algebra(&self) -> Option<&Arc<KleeneAlgebra>> {
        self.right.as_ref().map(|s| &s.algebra)
    }

    pub fn act_left(&self, a: usize, m: usize) -> usize {
        let side = self.left.as_ref().expect("module has no left action");
        side.table[a * self.size + m] as usize
    }

    pub fn act_right(&self, m: usize, c: usize) -> usize {
        let side = self.right.as_ref().expect("module has no right action");
        let width = side.algebra.size();
        side.table[m * width + c] as usize
    }

    pub fn is_bimodule(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }

    /// Signature equality: same sides over the same algebras.
    pub fn same_signature(&self, other: &KleeneModule) -> bool {
        let side_eq = |a: &Option<ActionSide>, b: &Option<ActionSide>| match (a, b) {
            (None, None) => true,
            (Some(x), Some(y)) => x.algebra.same_as(&y.algebra),
            _ => false,
        };
        side_eq(&self.left, &other.left) && side_eq(&self.right, &other.right)
    }

    /// Sum of a list of elements (zero for the empty list).
    pub fn sum(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items
            .into_iter()
            .fold(self.zero, |acc, x| self.add(acc, x))
    }

    /// Elements that are not the join of two strictly smaller elements.
    /// Every element is the join of the irreducibles below it.
    pub fn irreducibles(&self) -> Vec<usize> {
        let mut reducible = vec![false; self.size];
        reducible[self.zero] = true;
        for y in 0..self.size {
            for z in 0..self.size {
                let x = self.add(y, z);
                if y != x && z != x {
                    reducible[x] = true;
                }
            }
        }
        (0..self.size).filter(|&x| !reducible[x]).collect()
    }

    pub fn left_reduct(self: &Arc<Self>) -> Result<Arc<KleeneModule>> {
        if self.left.is_none() {
            return Err(KamError::Incompatible {
                detail: format!("{} has no left action", self.name),
            });
        }
        let mut m = (**self).clone();
        m.name = format!("{}|left", self.name);
        m.right = None;
        m.right_free = None;
        Ok(Arc::new(m))
    }

    pub fn right_reduct(self: &Arc<Self>) -> Result<Arc<KleeneModule>> {
        if self.right.is_none() {
            return Err(KamError::Incompatible {
                detail: format!("{} has no right action", self.name),
            });
        }
        let mut m = (**self).clone();
        m.name = format!("{}|right", self.name);
        m.left = None;
        m.left_free = None;
        Ok(Arc::new(m))
    }

    /// Adds the trivial right action of the two-element algebra (m.0 = zero,
    /// m.1 = m), turning a left module into a bimodule without changing its
    /// homomorphisms.
    pub fn with_trivial_right(self: &Arc<Self>, two: &Arc<KleeneAlgebra>) -> Result<Arc<KleeneModule>> {
        if self.right.is_some() {
            return Err(KamError::Incompatible {
                detail: format!("{} already has a right action", self.name),
            });
        }
        let mut table = Vec::with_capacity(self.size * 2);
        for m in 0..self.size {
            table.push(self.zero as u32);
            table.push(m as u32);
        }
        let mut m = (**self).clone();
        m.name = format!("{}ᵗ", self.name);
        m.right = Some(ActionSide {
            algebra: Arc::clone(two),
            table,
        });
        Ok(Arc::new(m))
    }

    /// Mirror of `with_trivial_right`.
    pub fn with_trivial_left(self: &Arc<Self>, two: &Arc<KleeneAlgebra>) -> Result<Arc<KleeneModule>> {
        if self.left.is_some() {
            return Err(KamError::Incompatible {
                detail: format!("{} already has a left action", self.name),
            });
        }
        let mut table = vec![0u32; 2 * self.size];
        for m in 0..self.size {
            table[m] = self.zero as u32;
            table[self.size + m] = m as u32;
        }
        let mut out = (**self).clone();
        out.name = format!("ᵗ{}", self.name);
        out.left = Some(ActionSide {
            algebra: Arc::clone(two),
            table,
        });
        Ok(Arc::new(out))
    }

    pub fn rename(self: &Arc<Self>, name: impl Into<String>) -> Arc<KleeneModule> {
        let mut m = (**self).clone();
        m.name = name.into();
        Arc::new(m)
    }

    /// Replaces one left-action entry; test fixtures use this to produce
    /// law-violating modules.
    pub fn with_corrupted_left_action(
        self: &Arc<Self>,
        a: usize,
        m: usize,
        value: usize,
    ) -> Arc<KleeneModule> {
        let mut out = (**self).clone();
        let side = out.left.as_mut().expect("module has a left action");
        side.table[a * out.size + m] = value as u32;
        out.left_free = None;
        out.name = format!("{}!corrupt", out.name);
        Arc::new(out)
    }

    /// Checks every module law by enumeration. Referenced algebras are assumed
    /// to satisfy their own axioms; table shape problems surface as errors,
    /// law violations as failed checks with counterexamples.
    pub fn check_module_axioms(&self) -> Result<LawReport> {
        let n = self.size;
        let mut report = LawReport::new(self.name.clone());

        let triples = (n as u64).pow(3);
        let mut w = None;
        'assoc: for x in 0..n {
            for y in 0..n {
                let xy = self.add(x, y);
                for z in 0..n {
                    if self.add(xy, z) != self.add(x, self.add(y, z)) {
                        w = Some(vec![x, y, z]);
                        break 'assoc;
                    }
                }
            }
        }
        report.push(match w {
            None => LawCheck::pass("add_assoc", "(x+y)+z = x+(y+z)", triples),
            Some(w) => LawCheck::fail("add_assoc", "(x+y)+z = x+(y+z)", triples, w, String::new()),
        });
        report.push(
            match (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .find(|&(x, y)| self.add(x, y) != self.add(y, x))
            {
                None => LawCheck::pass("add_comm", "x+y = y+x", (n * n) as u64),
                Some((x, y)) => {
                    LawCheck::fail("add_comm", "x+y = y+x", (n * n) as u64, vec![x, y], String::new())
                }
            },
        );
        report.push(match (0..n).find(|&x| self.add(x, x) != x) {
            None => LawCheck::pass("add_idem", "x+x = x", n as u64),
            Some(x) => LawCheck::fail("add_idem", "x+x = x", n as u64, vec![x], String::new()),
        });
        report.push(match (0..n).find(|&x| self.add(x, self.zero) != x) {
            None => LawCheck::pass("add_zero", "x+0 = x", n as u64),
            Some(x) => LawCheck::fail("add_zero", "x+0 = x", n as u64, vec![x], String::new()),
        });

        if let Some(side) = &self.left {
            self.check_action(&mut report, side, Side::Left);
        }
        if let Some(side) = &self.right {
            self.check_action(&mut report, side, Side::Right);
        }
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            let (lk, rk) = (l.algebra.size(), r.algebra.size());
            let (lt, rt) = (&l.table, &r.table);
            let count = (lk * n * rk) as u64;
            let mut w = None;
            'compat: for a in 0..lk {
                for m in 0..n {
                    let am = lt[a * n + m] as usize;
                    for c in 0..rk {
                        let mc = rt[m * rk + c] as usize;
                        if rt[am * rk + c] != lt[a * n + mc] {
                            w = Some(vec![a, m, c]);
                            break 'compat;
                        }
                    }
                }
            }
            report.push(match w {
                None => LawCheck::pass("bimodule_compat", "(a.m).c = a.(m.c)", count),
                Some(w) => {
                    LawCheck::fail("bimodule_compat", "(a.m).c = a.(m.c)", count, w, String::new())
                }
            });
        }
        Ok(report)
    }

    fn check_action(&self, report: &mut LawReport, side: &ActionSide, which: Side) {
        let n = self.size;
        let k = side.algebra.size();
        let alg = &side.algebra;
        let table = &side.table;
        let tag = match which {
            Side::Left => "left",
            Side::Right => "right",
        };
        // act(a, m) is a.m on the left and m.a on the right; direct table
        // indexing keeps the full enumerations cheap.
        let act = move |a: usize, m: usize| -> usize {
            match which {
                Side::Left => table[a * n + m] as usize,
                Side::Right => table[m * k + a] as usize,
            }
        };
        let mul = |a: usize, b: usize| -> usize {
            // On the right, (m.a).b = m.(a*b); on the left, a.(b.m) = (a*b).m.
            match which {
                Side::Left => alg.mul(a, b),
                Side::Right => alg.mul(b, a),
            }
        };

        let count_kk = (k * k * n) as u64;
        let mut w = None;
        'sd: for a in 0..k {
            for b in 0..k {
                let ab = alg.add(a, b);
                for m in 0..n {
                    if act(ab, m) != self.add(act(a, m), act(b, m)) {
                        w = Some(vec![a, b, m]);
                        break 'sd;
                    }
                }
            }
        }
        report.push(match w {
            None => LawCheck::pass(
                &format!("{tag}_act_scalar_add"),
                "(a+b).m = a.m + b.m",
                count_kk,
            ),
            Some(w) => LawCheck::fail(
                &format!("{tag}_act_scalar_add"),
                "(a+b).m = a.m + b.m",
                count_kk,
                w,
                String::new(),
            ),
        });

        let count_kn2 = (k * n * n) as u64;
        let mut w = None;
        'md: for a in 0..k {
            for m in 0..n {
                let am = act(a, m);
                for m2 in 0..n {
                    if act(a, self.add(m, m2)) != self.add(am, act(a, m2)) {
                        w = Some(vec![a, m, m2]);
                        break 'md;
                    }
                }
            }
        }
        report.push(match w {
            None => LawCheck::pass(
                &format!("{tag}_act_module_add"),
                "a.(m+m') = a.m + a.m'",
                count_kn2,
            ),
            Some(w) => LawCheck::fail(
                &format!("{tag}_act_module_add"),
                "a.(m+m') = a.m + a.m'",
                count_kn2,
                w,
                String::new(),
            ),
        });

        let mut w = None;
        'assoc: for a in 0..k {
            for b in 0..k {
                let ab = mul(a, b);
                for m in 0..n {
                    if act(ab, m) != act(a, act(b, m)) {
                        w = Some(vec![a, b, m]);
                        break 'assoc;
                    }
                }
            }
        }
        report.push(match w {
            None => LawCheck::pass(&format!("{tag}_act_assoc"), "(ab).m = a.(b.m)", count_kk),
            Some(w) => LawCheck::fail(
                &format!("{tag}_act_assoc"),
                "(ab).m = a.(b.m)",
                count_kk,
                w,
                String::new(),
            ),
        });

        report.push(match (0..n).find(|&m| act(alg.one(), m) != m) {
            None => LawCheck::pass(&format!("{tag}_act_one"), "1.m = m", n as u64),
            Some(m) => LawCheck::fail(
                &format!("{tag}_act_one"),
                "1.m = m",
                n as u64,
                vec![m],
                String::new(),
            ),
        });
        report.push(match (0..n).find(|&m| act(alg.zero(), m) != self.zero) {
            None => LawCheck::pass(&format!("{tag}_act_zero_scalar"), "0.m = 0", n as u64),
            Some(m) => LawCheck::fail(
                &format!("{tag}_act_zero_scalar"),
                "0.m = 0",
                n as u64,
                vec![m],
                String::new(),
            ),
        });
        report.push(match (0..k).find(|&a| act(a, self.zero) != self.zero) {
            None => LawCheck::pass(&format!("{tag}_act_zero_module"), "a.0 = 0", k as u64),
            Some(a) => LawCheck::fail(
                &format!("{tag}_act_zero_module"),
                "a.0 = 0",
                k as u64,
                vec![a],
                String::new(),
            ),
        });

        // The defining quasi-identity: a.m <= m implies a^*.m <= m.
        let count = (k * n) as u64;
        let mut w = None;
        'quasi: for a in 0..k {
            let astar = alg.star(a);
            for m in 0..n {
                if self.le(act(a, m), m) && !self.le(act(astar, m), m) {
                    w = Some(vec![a, m]);
                    break 'quasi;
                }
            }
        }
        report.push(match w {
            None => LawCheck::pass(
                &format!("{tag}_quasi_identity"),
                "a.m <= m implies a^*.m <= m",
                count,
            ),
            Some(w) => {
                let detail = format!(
                    "a = {}, m = element {}",
                    alg.render_element(w[0]),
                    w[1]
                );
                LawCheck::fail(
                    &format!("{tag}_quasi_identity"),
                    "a.m <= m implies a^*.m <= m",
                    count,
                    w,
                    detail,
                )
            }
        });
    }
}

fn attach_free(m: Arc<KleeneModule>, left: Option<FreeStructure>, right: Option<FreeStructure>) -> Arc<KleeneModule> {
    let mut inner = (*m).clone();
    inner.left_free = left;
    inner.right_free = right;
    Arc::new(inner)
}

/// The regular (K, K)-bimodule: K acting on itself by multiplication.
pub fn regular_bimodule(k: &Arc<KleeneAlgebra>, limits: &Limits) -> Result<Arc<KleeneModule>> {
    let n = k.size();
    let mut add = Vec::with_capacity(n * n);
    let mut left = Vec::with_capacity(n * n);
    let mut right = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            add.push(k.add(i, j) as u32);
            left.push(k.mul(i, j) as u32);
            right.push(k.mul(i, j) as u32);
        }
    }
    let m = KleeneModule::from_tables(
        format!("{}[reg]", k.name()),
        n,
        k.zero(),
        add,
        Some(ActionSide {
            algebra: Arc::clone(k),
            table: left,
        }),
        Some(ActionSide {
            algebra: Arc::clone(k),
            table: right,
        }),
        limits,
    )?;
    let free = FreeStructure {
        basis: vec![k.one()],
        coords: (0..n as u32).collect(),
    };
    Ok(attach_free(m, Some(free.clone()), Some(free)))
}

/// K as an (A, A)-bimodule over a subalgebra A, with the action given by
/// multiplication in K through the embedding.
pub fn algebra_over_subalgebra(
    k: &Arc<KleeneAlgebra>,
    sub: &Arc<KleeneAlgebra>,
    embedding: &[usize],
    limits: &Limits,
) -> Result<Arc<KleeneModule>> {
    if embedding.len() != sub.size() {
        return Err(KamError::Malformed {
            what: "module",
            detail: "embedding length mismatch".to_string(),
        });
    }
    let n = k.size();
    let s = sub.size();
    let mut add = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            add.push(k.add(i, j) as u32);
        }
    }
    let mut left = Vec::with_capacity(s * n);
    for a in 0..s {
        for m in 0..n {
            left.push(k.mul(embedding[a], m) as u32);
        }
    }
    let mut right = Vec::with_capacity(n * s);
    for m in 0..n {
        for a in 0..s {
            right.push(k.mul(m, embedding[a]) as u32);
        }
    }
    KleeneModule::from_tables(
        format!("{}[over {}]", k.name(), sub.name()),
        n,
        k.zero(),
        add,
        Some(ActionSide {
            algebra: Arc::clone(sub),
            table: left,
        }),
        Some(ActionSide {
            algebra: Arc::clone(sub),
            table: right,
        }),
        limits,
    )
}

/// The function module K^rank with pointwise operations; free on the
/// characteristic functions of singletons, on whichever sides are requested.
pub fn free_module(
    k: &Arc<KleeneAlgebra>,
    rank: usize,
    left: bool,
    right: bool,
    limits: &Limits,
) -> Result<Arc<KleeneModule>> {
    let kn = k.size();
    let mut size = 1usize;
    for _ in 0..rank {
        size = size
            .checked_mul(kn)
            .filter(|&s| s <= limits.max_table_carrier)
            .ok_or(KamError::SizeGuard {
                what: "free module",
                size: usize::MAX,
                bound: limits.max_table_carrier,
            })?;
    }
    let digits = |x: usize| crate::algebra::decode_digits(x, kn, rank);
    let pack = |d: &[usize]| crate::algebra::encode_digits(d, kn);

    let mut add = Vec::with_capacity(size * size);
    for x in 0..size {
        let dx = digits(x);
        for y in 0..size {
            let dy = digits(y);
            let sum: Vec<usize> = dx.iter().zip(&dy).map(|(&u, &v)| k.add(u, v)).collect();
            add.push(pack(&sum) as u32);
        }
    }
    let act = |scale_left: bool| -> Vec<u32> {
        let mut t = Vec::with_capacity(kn * size);
        for a in 0..kn {
            for x in 0..size {
                let dx = digits(x);
                let img: Vec<usize> = dx
                    .iter()
                    .map(|&v| if scale_left { k.mul(a, v) } else { k.mul(v, a) })
                    .collect();
                t.push(pack(&img) as u32);
            }
        }
        t
    };
    let left_side = left.then(|| ActionSide {
        algebra: Arc::clone(k),
        table: act(true),
    });
    let right_side = right.then(|| {
        // Right tables are indexed m * |C| + c.
        let by_scalar = act(false);
        let mut t = vec![0u32; kn * size];
        for a in 0..kn {
            for x in 0..size {
                t[x * kn + a] = by_scalar[a * size + x];
            }
        }
        ActionSide {
            algebra: Arc::clone(k),
            table: t,
        }
    });
    let side_tag = match (left, right) {
        (true, true) => "bi",
        (true, false) => "left",
        (false, true) => "right",
        (false, false) => {
            return Err(KamError::Malformed {
                what: "module",
                detail: "free module needs at least one side".to_string(),
            })
        }
    };
    let zero_index = pack(&vec![k.zero(); rank]);
    let m = KleeneModule::from_tables(
        format!("{}^{rank}[{side_tag}]", k.name()),
        size,
        zero_index,
        add,
        left_side,
        right_side,
        limits,
    )?;
    let basis: Vec<usize> = (0..rank)
        .map(|i| {
            let mut d = vec![k.zero(); rank];
            d[i] = k.one();
            pack(&d)
        })
        .collect();
    let mut coords = Vec::with_capacity(size * rank);
    for x in 0..size {
        for d in digits(x) {
            coords.push(d as u32);
        }
    }
    let free = FreeStructure { basis, coords };
    Ok(attach_free(
        m,
        left.then(|| free.clone()),
        right.then_some(free),
    ))
}

/// The least submodule of the regular module containing `gens`: closure of
/// the generators under zero, addition and the chosen-side multiplication.
pub fn submodule_generated(
    k: &Arc<KleeneAlgebra>,
    gens: &[usize],
    side: Side,
    limits: &Limits,
) -> Result<Arc<KleeneModule>> {
    if gens.is_empty() {
        return Err(KamError::Malformed {
            what: "module",
            detail: "generator set must be nonempty".to_string(),
        });
    }
    if gens.iter().any(|&g| g >= k.size()) {
        return Err(KamError::Malformed {
            what: "module",
            detail: "generator out of range".to_string(),
        });
    }
    let mut seen = vec![false; k.size()];
    let mut carrier = vec![k.zero()];
    seen[k.zero()] = true;
    let mut queue: Vec<usize> = gens.to_vec();
    while let Some(x) = queue.pop() {
        if seen[x] {
            continue;
        }
        seen[x] = true;
        carrier.push(x);
        for a in 0..k.size() {
            let ax = match side {
                Side::Left => k.mul(a, x),
                Side::Right => k.mul(x, a),
            };
            if !seen[ax] {
                queue.push(ax);
            }
        }
        let snapshot: Vec<usize> = carrier.clone();
        for y in snapshot {
            let s = k.add(x, y);
            if !seen[s] {
                queue.push(s);
            }
        }
    }
    // Fixpoint: re-close sums until stable (new sums can enable new ones).
    loop {
        let mut fresh = Vec::new();
        for i in 0..carrier.len() {
            for j in 0..carrier.len() {
                let s = k.add(carrier[i], carrier[j]);
                if !seen[s] {
                    seen[s] = true;
                    fresh.push(s);
                }
                for a in 0..k.size() {
                    let prod = match side {
                        Side::Left => k.mul(a, carrier[i]),
                        Side::Right => k.mul(carrier[i], a),
                    };
                    if !seen[prod] {
                        seen[prod] = true;
                        fresh.push(prod);
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        carrier.extend(fresh);
    }
    carrier.sort_unstable();
    carrier.dedup();
    let pos = |x: usize| carrier.binary_search(&x).expect("carrier is closed");
    let n = carrier.len();
    let mut add = Vec::with_capacity(n * n);
    for &x in &carrier {
        for &y in &carrier {
            add.push(pos(k.add(x, y)) as u32);
        }
    }
    let action = match side {
        Side::Left => {
            let mut t = Vec::with_capacity(k.size() * n);
            for a in 0..k.size() {
                for &x in &carrier {
                    t.push(pos(k.mul(a, x)) as u32);
                }
            }
            ActionSide {
                algebra: Arc::clone(k),
                table: t,
            }
        }
        Side::Right => {
            let mut t = Vec::with_capacity(n * k.size());
            for &x in &carrier {
                for a in 0..k.size() {
                    t.push(pos(k.mul(x, a)) as u32);
                }
            }
            ActionSide {
                algebra: Arc::clone(k),
                table: t,
            }
        }
    };
    let (l, r) = match side {
        Side::Left => (Some(action), None),
        Side::Right => (None, Some(action)),
    };
    KleeneModule::from_tables(
        format!("{}[ideal]", k.name()),
        n,
        pos(k.zero()),
        add,
        l,
        r,
        limits,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_bimodule_passes_axioms() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = regular_bimodule(&k, &limits).unwrap();
        let report = m.check_module_axioms().unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn free_module_basis_and_size() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = free_module(&k, 2, true, true, &limits).unwrap();
        assert_eq!(m.size(), 4);
        let free = m.left_free.as_ref().unwrap();
        assert_eq!(free.basis.len(), 2);
        // Basis vectors join to the top element.
        let top = m.add(free.basis[0], free.basis[1]);
        assert_eq!(top, 3);
        assert!(m.check_module_axioms().unwrap().passed());
    }

    #[test]
    fn empty_rank_free_module_is_trivial() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = free_module(&k, 0, true, false, &limits).unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.check_module_axioms().unwrap().passed());
    }

    #[test]
    fn ideal_generated_by_one_is_everything() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = submodule_generated(&k, &[k.one()], Side::Left, &limits).unwrap();
        assert_eq!(m.size(), k.size());
    }

    #[test]
    fn zero_ideal_is_trivial() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = submodule_generated(&k, &[k.zero()], Side::Left, &limits).unwrap();
        assert_eq!(m.size(), 1);
    }

    #[test]
    fn irreducibles_of_free_rank_two() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m = free_module(&k, 2, true, true, &limits).unwrap();
        let irr = m.irreducibles();
        assert_eq!(irr, vec![1, 2]);
    }
}
