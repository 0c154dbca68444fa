//! Tensor products of Kleene bimodules.
//!
//! Every element of M (x)_B N is a finite sum of pure tensors, because scalar
//! factors absorb into the components: a.(m (x) n) = (a.m) (x) n. The
//! element-pair path therefore works with *sets of pairs* (m, n) as sums of
//! pure tensors. The congruence generated by the bilinearity and balance
//! relations becomes a label-set saturation:
//!
//!   - (m, n) absorbs (m', n) for every m' <= m, and mirrored in n
//!     (splitting a sum in either component);
//!   - labels (m1, n) and (m2, n) produce (m1+m2, n), and mirrored
//!     (joining a sum in either component);
//!   - (m.b, n) and (m, b.n) absorb each other (balance over the middle);
//!   - (0, 0) is absorbed by every sum, identifying 0 (x) 0 with the empty
//!     sum so the zero laws hold in the quotient.
//!
//! These rule schemas are closed under the outer actions, so the kernel of
//! the saturation is a module congruence; quotient classes are discovered by
//! generation from the pure tensors instead of materializing the free module
//! over all pairs. When both factors are free over the middle algebra, the
//! quotient is instead built directly on coefficient matrices over the bases
//! (the fast path); the two paths are checked isomorphic in the test suite.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::KleeneAlgebra;
use crate::error::{KamError, Result};
use crate::hom::ModuleHom;
use crate::limits::Limits;
use crate::module::{ActionSide, FreeStructure, KleeneModule, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exhaustive,
    FreeFastPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorPath {
    Auto,
    Exhaustive,
    FreeFastPath,
}

/// A computed tensor product with its pure-tensor map.
pub struct TensorProduct {
    pub left_input: Arc<KleeneModule>,
    pub right_input: Arc<KleeneModule>,
    pub module: Arc<KleeneModule>,
    /// pure[m * |N| + n] = index of m (x) n in the module.
    pub pure: Vec<u32>,
    pub provenance: Provenance,
    /// Each element as a sum of pure tensors (m, n).
    decomp: Vec<Vec<(u32, u32)>>,
    /// Number of quasi-identity repairs during closure (exhaustive path).
    pub repairs: usize,
}

impl TensorProduct {
    pub fn pure_tensor(&self, m: usize, n: usize) -> usize {
        self.pure[m * self.right_input.size() + n] as usize
    }

    /// A decomposition of element t as a sum of pure tensors.
    pub fn decompose(&self, t: usize) -> &[(u32, u32)] {
        &self.decomp[t]
    }

    /// The induced map alpha (x) id from `self` to `target`, where `alpha`
    /// maps self's left input to target's left input. The caller should
    /// verify the result with `ModuleHom::check`; well-definedness of the
    /// induced map is exactly that check passing.
    pub fn map_left(&self, alpha: &ModuleHom, target: &TensorProduct) -> ModuleHom {
        let map = (0..self.module.size())
            .map(|t| {
                let mut acc = target.module.zero();
                for &(m, n) in self.decompose(t) {
                    let img = target.pure_tensor(alpha.apply(m as usize), n as usize);
                    acc = target.module.add(acc, img);
                }
                acc as u32
            })
            .collect();
        ModuleHom {
            source: Arc::clone(&self.module),
            target: Arc::clone(&target.module),
            map,
        }
    }

    /// The induced map id (x) beta, mirroring `map_left`.
    pub fn map_right(&self, beta: &ModuleHom, target: &TensorProduct) -> ModuleHom {
        let map = (0..self.module.size())
            .map(|t| {
                let mut acc = target.module.zero();
                for &(m, n) in self.decompose(t) {
                    let img = target.pure_tensor(m as usize, beta.apply(n as usize));
                    acc = target.module.add(acc, img);
                }
                acc as u32
            })
            .collect();
        ModuleHom {
            source: Arc::clone(&self.module),
            target: Arc::clone(&target.module),
            map,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Mask(Vec<u64>);

impl Mask {
    fn empty(words: usize) -> Self {
        Mask(vec![0; words])
    }

    fn set(&mut self, bit: usize) {
        self.0[bit / 64] |= 1 << (bit % 64);
    }

    fn get(&self, bit: usize) -> bool {
        self.0[bit / 64] >> (bit % 64) & 1 == 1
    }

    fn contains(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn union(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter_map(move |b| {
                if word >> b & 1 == 1 {
                    Some(w * 64 + b)
                } else {
                    None
                }
            })
        })
    }
}

struct PairEngine {
    m: Arc<KleeneModule>,
    n: Arc<KleeneModule>,
    n_size: usize,
    words: usize,
    /// Per-label inflation consequences (splits and balance swaps).
    unary: Vec<Mask>,
    zero_label: usize,
    /// Set-triggered rules added by quasi-identity repair.
    extra: Vec<(Mask, Mask)>,
    row_words: usize,
    col_words: usize,
}

impl PairEngine {
    fn new(m: &Arc<KleeneModule>, n: &Arc<KleeneModule>, limits: &Limits) -> Result<Self> {
        let labels = m.size() * n.size();
        if labels > limits.max_tensor_labels {
            return Err(KamError::SizeGuard {
                what: "tensor label set",
                size: labels,
                bound: limits.max_tensor_labels,
            });
        }
        let words = labels.div_ceil(64);
        let n_size = n.size();
        let label = |mi: usize, nj: usize| mi * n_size + nj;
        let mut unary = vec![Mask::empty(words); labels];

        // Splits: (m, n) dominates (m', n) for m' <= m, and mirrored.
        for mi in 0..m.size() {
            for mi2 in 0..m.size() {
                if m.le(mi2, mi) && mi2 != mi {
                    for nj in 0..n_size {
                        unary[label(mi, nj)].set(label(mi2, nj));
                    }
                }
            }
        }
        for nj in 0..n_size {
            for nj2 in 0..n_size {
                if n.le(nj2, nj) && nj2 != nj {
                    for mi in 0..m.size() {
                        unary[label(mi, nj)].set(label(mi, nj2));
                    }
                }
            }
        }
        // Balance: (m.b, n) <-> (m, b.n) over the middle algebra.
        let middle = m.right_algebra().expect("checked by caller").clone();
        for mi in 0..m.size() {
            for b in 0..middle.size() {
                let mb = m.act_right(mi, b);
                for nj in 0..n_size {
                    unary[label(mb, nj)].set(label(mi, n.act_left(b, nj)));
                }
            }
        }
        for b in 0..middle.size() {
            for nj in 0..n_size {
                let bn = n.act_left(b, nj);
                for mi in 0..m.size() {
                    unary[label(mi, bn)].set(label(m.act_right(mi, b), nj));
                }
            }
        }
        Ok(PairEngine {
            m: Arc::clone(m),
            n: Arc::clone(n),
            n_size,
            words,
            unary,
            zero_label: label(m.zero(), n.zero()),
            extra: Vec::new(),
            row_words: n_size.div_ceil(64),
            col_words: m.size().div_ceil(64),
        })
    }

    fn saturate(&self, mask: Mask) -> Mask {
        let seeds: Vec<usize> = mask.bits().collect();
        self.saturate_seeded(mask, seeds)
    }

    /// Saturates `mask`, assuming every rule interaction not involving a
    /// seed bit is already closed. Seeding with all bits gives a full
    /// saturation; seeding a union of two saturated masks with the bits of
    /// one side is sound because popped bits are joined against everything
    /// present and newly set bits are pushed.
    fn saturate_seeded(&self, mut mask: Mask, mut stack: Vec<usize>) -> Mask {
        if !mask.get(self.zero_label) {
            mask.set(self.zero_label);
            stack.push(self.zero_label);
        }
        // Row masks (per m, bits over N) and column masks (per n, bits
        // over M) for allocation-free join scans.
        let m_size = self.m.size();
        let mut rows = vec![0u64; m_size * self.row_words];
        let mut cols = vec![0u64; self.n_size * self.col_words];
        for l in mask.bits() {
            let (mi, nj) = (l / self.n_size, l % self.n_size);
            rows[mi * self.row_words + nj / 64] |= 1 << (nj % 64);
            cols[nj * self.col_words + mi / 64] |= 1 << (mi % 64);
        }
        loop {
            while let Some(l) = stack.pop() {
                let (mi, nj) = (l / self.n_size, l % self.n_size);
                let push = |j: usize, mask: &mut Mask, stack: &mut Vec<usize>,
                                rows: &mut [u64], cols: &mut [u64]| {
                    if !mask.get(j) {
                        mask.set(j);
                        stack.push(j);
                        let (mj, njj) = (j / self.n_size, j % self.n_size);
                        rows[mj * self.row_words + njj / 64] |= 1 << (njj % 64);
                        cols[njj * self.col_words + mj / 64] |= 1 << (mj % 64);
                    }
                };
                // Unary consequences of this label.
                for w in 0..self.words {
                    let mut fresh = self.unary[l].0[w] & !mask.0[w];
                    while fresh != 0 {
                        let b = w * 64 + fresh.trailing_zeros() as usize;
                        push(b, &mut mask, &mut stack, &mut rows, &mut cols);
                        fresh &= fresh - 1;
                    }
                }
                // Joins with labels sharing the column (same n).
                for w in 0..self.col_words {
                    let mut bits = cols[nj * self.col_words + w];
                    while bits != 0 {
                        let mi2 = w * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let j = self.m.add(mi, mi2) * self.n_size + nj;
                        push(j, &mut mask, &mut stack, &mut rows, &mut cols);
                    }
                }
                // Joins with labels sharing the row (same m).
                for w in 0..self.row_words {
                    let mut bits = rows[mi * self.row_words + w];
                    while bits != 0 {
                        let nj2 = w * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let j = mi * self.n_size + self.n.add(nj, nj2);
                        push(j, &mut mask, &mut stack, &mut rows, &mut cols);
                    }
                }
            }
            let mut fired = false;
            for (trigger, addend) in &self.extra {
                if mask.contains(trigger) && !mask.contains(addend) {
                    for w in 0..self.words {
                        let mut fresh = addend.0[w] & !mask.0[w];
                        while fresh != 0 {
                            let b = w * 64 + fresh.trailing_zeros() as usize;
                            mask.set(b);
                            stack.push(b);
                            let (mj, njj) = (b / self.n_size, b % self.n_size);
                            rows[mj * self.row_words + njj / 64] |= 1 << (njj % 64);
                            cols[njj * self.col_words + mj / 64] |= 1 << (mj % 64);
                            fresh &= fresh - 1;
                        }
                    }
                    fired = true;
                }
            }
            if !fired {
                return mask;
            }
        }
    }

    fn singleton(&self, mi: usize, nj: usize) -> Mask {
        let mut mask = Mask::empty(self.words);
        mask.set(mi * self.n_size + nj);
        mask
    }

    /// Pointwise image of a mask under the outer actions.
    fn act_mask(&self, mask: &Mask, left: Option<usize>, right: Option<usize>) -> Mask {
        let mut out = Mask::empty(self.words);
        for l in mask.bits() {
            let (mut mi, mut nj) = (l / self.n_size, l % self.n_size);
            if let Some(a) = left {
                mi = self.m.act_left(a, mi);
            }
            if let Some(c) = right {
                nj = self.n.act_right(nj, c);
            }
            out.set(mi * self.n_size + nj);
        }
        out
    }
}

fn exhaustive_tensor(
    m: &Arc<KleeneModule>,
    n: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<TensorProduct> {
    let outer_left = m
        .left_algebra()
        .ok_or_else(|| KamError::Incompatible {
            detail: format!("{} has no left action", m.name),
        })?
        .clone();
    let outer_right = n
        .right_algebra()
        .ok_or_else(|| KamError::Incompatible {
            detail: format!("{} has no right action", n.name),
        })?
        .clone();
    let mut engine = PairEngine::new(m, n, limits)?;
    let mut repairs = 0usize;

    loop {
        // Discover the classes generated by the pure tensors under addition.
        // Every element is a sum of pure tensors, so union closure alone
        // reaches every class; the actions cannot produce new ones.
        let mut classes: Vec<Mask> = Vec::new();
        let mut index: HashMap<Mask, u32> = HashMap::new();
        let intern = |mask: Mask,
                      classes: &mut Vec<Mask>,
                      index: &mut HashMap<Mask, u32>|
         -> Result<u32> {
            if let Some(&i) = index.get(&mask) {
                return Ok(i);
            }
            if classes.len() >= limits.max_table_carrier {
                return Err(KamError::SizeGuard {
                    what: "tensor carrier",
                    size: classes.len() + 1,
                    bound: limits.max_table_carrier,
                });
            }
            let i = classes.len() as u32;
            classes.push(mask.clone());
            index.insert(mask, i);
            Ok(i)
        };

        let zero_class =
            intern(engine.saturate(Mask::empty(engine.words)), &mut classes, &mut index)?;
        let mut pure = vec![0u32; m.size() * n.size()];
        for mi in 0..m.size() {
            for nj in 0..n.size() {
                let sat = engine.saturate(engine.singleton(mi, nj));
                pure[mi * n.size() + nj] = intern(sat, &mut classes, &mut index)?;
            }
        }
        // Lower-triangular table of pairwise joins, filled as classes appear.
        let mut tri: Vec<Vec<u32>> = Vec::new();
        let mut processed = 0usize;
        while processed < classes.len() {
            let x = processed;
            processed += 1;
            let mut row = Vec::with_capacity(x + 1);
            for y in 0..=x {
                let u = classes[x].union(&classes[y]);
                let id = if let Some(&i) = index.get(&u) {
                    i
                } else {
                    // Seed with the bits of the side contributing fewer
                    // labels; the other side is internally saturated.
                    let seeds: Vec<usize> = if classes[x].count() <= classes[y].count() {
                        classes[x].bits().collect()
                    } else {
                        classes[y].bits().collect()
                    };
                    let sat = engine.saturate_seeded(u, seeds);
                    intern(sat, &mut classes, &mut index)?
                };
                row.push(id);
            }
            tri.push(row);
        }
        let q = classes.len();
        let add_of = |x: usize, y: usize| -> u32 {
            if y <= x {
                tri[x][y]
            } else {
                tri[y][x]
            }
        };

        // Action tables by folding pure classes through the add table:
        // a.[sum of pures] = sum over the top's labels of [a-mapped pures].
        let fold_action = |left: Option<usize>, right: Option<usize>, x: usize| -> u32 {
            let mut acc = zero_class;
            for l in classes[x].bits() {
                let (mut mi, mut nj) = (l / engine.n_size, l % engine.n_size);
                if let Some(a) = left {
                    mi = m.act_left(a, mi);
                }
                if let Some(c) = right {
                    nj = n.act_right(nj, c);
                }
                acc = add_of(acc as usize, pure[mi * n.size() + nj] as usize);
            }
            acc
        };
        let mut left_table = Vec::with_capacity(outer_left.size() * q);
        for a in 0..outer_left.size() {
            for x in 0..q {
                left_table.push(fold_action(Some(a), None, x));
            }
        }
        let mut right_table = Vec::with_capacity(q * outer_right.size());
        for x in 0..q {
            for c in 0..outer_right.size() {
                right_table.push(fold_action(None, Some(c), x));
            }
        }

        // Quasi-identity scan on the quotient tables; a violation coarsens
        // the congruence by merging [a^*.t + t] into [t].
        let le = |u: u32, v: u32| add_of(u as usize, v as usize) == v;
        let mut violation: Option<(Side, usize, usize)> = None;
        'scan: for x in 0..q {
            for a in 0..outer_left.size() {
                let ax = left_table[a * q + x];
                if le(ax, x as u32) {
                    let sx = left_table[outer_left.star(a) * q + x];
                    if !le(sx, x as u32) {
                        violation = Some((Side::Left, a, x));
                        break 'scan;
                    }
                }
            }
            for c in 0..outer_right.size() {
                let xc = right_table[x * outer_right.size() + c];
                if le(xc, x as u32) {
                    let sx = right_table[x * outer_right.size() + outer_right.star(c)];
                    if !le(sx, x as u32) {
                        violation = Some((Side::Right, c, x));
                        break 'scan;
                    }
                }
            }
        }
        if let Some((side, scalar, ci)) = violation {
            let top = classes[ci].clone();
            let starred = match side {
                Side::Left => engine.act_mask(&top, Some(outer_left.star(scalar)), None),
                Side::Right => engine.act_mask(&top, None, Some(outer_right.star(scalar))),
            };
            let merged = top.union(&starred);
            let mut new_rules = Vec::new();
            for a in 0..outer_left.size() {
                for c in 0..outer_right.size() {
                    let t = engine.act_mask(&top, Some(a), Some(c));
                    let add = engine.act_mask(&merged, Some(a), Some(c));
                    new_rules.push((t, add));
                }
            }
            engine.extra.extend(new_rules);
            repairs += 1;
            continue;
        }

        // Stable: assemble the quotient module.
        let mut add = Vec::with_capacity(q * q);
        for x in 0..q {
            for y in 0..q {
                add.push(add_of(x, y));
            }
        }
        let module = KleeneModule::from_tables(
            format!("({}(x){})", m.name, n.name),
            q,
            zero_class as usize,
            add,
            Some(ActionSide {
                algebra: Arc::clone(&outer_left),
                table: left_table,
            }),
            Some(ActionSide {
                algebra: Arc::clone(&outer_right),
                table: right_table,
            }),
            limits,
        )?;
        let decomp: Vec<Vec<(u32, u32)>> = classes
            .iter()
            .map(|mask| {
                mask.bits()
                    .map(|l| ((l / engine.n_size) as u32, (l % engine.n_size) as u32))
                    .collect()
            })
            .collect();
        return Ok(TensorProduct {
            left_input: Arc::clone(m),
            right_input: Arc::clone(n),
            module,
            pure,
            provenance: Provenance::Exhaustive,
            decomp,
            repairs,
        });
    }
}

fn fast_tensor(
    m: &Arc<KleeneModule>,
    n: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<TensorProduct> {
    let outer_left = m
        .left_algebra()
        .ok_or_else(|| KamError::Incompatible {
            detail: format!("{} has no left action", m.name),
        })?
        .clone();
    let outer_right = n
        .right_algebra()
        .ok_or_else(|| KamError::Incompatible {
            detail: format!("{} has no right action", n.name),
        })?
        .clone();
    let middle = m.right_algebra().expect("checked by caller").clone();
    let mf = m.right_free.as_ref().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} is not right-free over the middle algebra", m.name),
    })?;
    let nf = n.left_free.as_ref().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} is not left-free over the middle algebra", n.name),
    })?;
    let (ri, rj) = (mf.rank(), nf.rank());
    let digits = ri * rj;
    let b = middle.size();
    let mut size = 1usize;
    for _ in 0..digits {
        size = size
            .checked_mul(b)
            .filter(|&s| s <= limits.max_table_carrier)
            .ok_or(KamError::SizeGuard {
                what: "tensor carrier",
                size: usize::MAX,
                bound: limits.max_table_carrier,
            })?;
    }
    let decode = |x: usize| crate::algebra::decode_digits(x, b, digits);
    let encode = |d: &[usize]| crate::algebra::encode_digits(d, b);
    // Digit (i, j) sits at position i * rj + j.
    let zero_digits = vec![middle.zero(); digits];
    let zero = encode(&zero_digits);

    let mut add = Vec::with_capacity(size * size);
    for x in 0..size {
        let dx = decode(x);
        for y in 0..size {
            let dy = decode(y);
            let sum: Vec<usize> = dx.iter().zip(&dy).map(|(&u, &v)| middle.add(u, v)).collect();
            add.push(encode(&sum) as u32);
        }
    }

    // Coordinates of the outer actions on the bases.
    // lambda[a][i][k]: a . e_i = sum_k e_k . lambda, in m's right coordinates.
    let lambda: Vec<Vec<Vec<usize>>> = (0..outer_left.size())
        .map(|a| {
            (0..ri)
                .map(|i| {
                    let img = m.act_left(a, mf.basis[i]);
                    (0..ri).map(|k| mf.coord(img, k)).collect()
                })
                .collect()
        })
        .collect();
    // rho[c][j][l]: f_j . c = sum_l rho . f_l, in n's left coordinates.
    let rho: Vec<Vec<Vec<usize>>> = (0..outer_right.size())
        .map(|c| {
            (0..rj)
                .map(|j| {
                    let img = n.act_right(nf.basis[j], c);
                    (0..rj).map(|l| nf.coord(img, l)).collect()
                })
                .collect()
        })
        .collect();

    let mut left_table = Vec::with_capacity(outer_left.size() * size);
    for a in 0..outer_left.size() {
        for x in 0..size {
            let dx = decode(x);
            let mut out = vec![middle.zero(); digits];
            for k in 0..ri {
                for j in 0..rj {
                    let mut acc = middle.zero();
                    for i in 0..ri {
                        acc = middle.add(acc, middle.mul(lambda[a][i][k], dx[i * rj + j]));
                    }
                    out[k * rj + j] = acc;
                }
            }
            left_table.push(encode(&out) as u32);
        }
    }
    let mut right_table = Vec::with_capacity(size * outer_right.size());
    for x in 0..size {
        let dx = decode(x);
        for c in 0..outer_right.size() {
            let mut out = vec![middle.zero(); digits];
            for i in 0..ri {
                for l in 0..rj {
                    let mut acc = middle.zero();
                    for j in 0..rj {
                        acc = middle.add(acc, middle.mul(dx[i * rj + j], rho[c][j][l]));
                    }
                    out[i * rj + l] = acc;
                }
            }
            right_table.push(encode(&out) as u32);
        }
    }

    let module = KleeneModule::from_tables(
        format!("({}(x){})", m.name, n.name),
        size,
        zero,
        add,
        Some(ActionSide {
            algebra: Arc::clone(&outer_left),
            table: left_table,
        }),
        Some(ActionSide {
            algebra: Arc::clone(&outer_right),
            table: right_table,
        }),
        limits,
    )?;

    // Tag freeness when the result is itself the function bimodule over a
    // single algebra; verified by checking the basis decomposition.
    let module = {
        let all_same = outer_left.same_as(&middle) && middle.same_as(&outer_right);
        if all_same {
            let basis: Vec<usize> = (0..digits)
                .map(|d| {
                    let mut v = vec![middle.zero(); digits];
                    v[d] = middle.one();
                    encode(&v)
                })
                .collect();
            let mut coords = Vec::with_capacity(size * digits);
            for x in 0..size {
                for d in decode(x) {
                    coords.push(d as u32);
                }
            }
            let free = FreeStructure { basis, coords };
            let left_ok = (0..size).all(|x| {
                let mut acc = module.zero();
                for (d, &e) in free.basis.iter().enumerate() {
                    acc = module.add(acc, module.act_left(free.coord(x, d), e));
                }
                acc == x
            });
            let right_ok = (0..size).all(|x| {
                let mut acc = module.zero();
                for (d, &e) in free.basis.iter().enumerate() {
                    acc = module.add(acc, module.act_right(e, free.coord(x, d)));
                }
                acc == x
            });
            let mut inner = (*module).clone();
            if left_ok {
                inner.left_free = Some(free.clone());
            }
            if right_ok {
                inner.right_free = Some(free);
            }
            Arc::new(inner)
        } else {
            module
        }
    };

    let mut pure = vec![0u32; m.size() * n.size()];
    for mi in 0..m.size() {
        for nj in 0..n.size() {
            let mut d = vec![middle.zero(); digits];
            for i in 0..ri {
                for j in 0..rj {
                    d[i * rj + j] = middle.mul(mf.coord(mi, i), nf.coord(nj, j));
                }
            }
            pure[mi * n.size() + nj] = encode(&d) as u32;
        }
    }
    let decomp: Vec<Vec<(u32, u32)>> = (0..size)
        .map(|x| {
            let dx = decode(x);
            let mut parts = Vec::new();
            for i in 0..ri {
                for j in 0..rj {
                    let coeff = dx[i * rj + j];
                    if coeff != middle.zero() {
                        let mpart = m.act_right(mf.basis[i], coeff);
                        parts.push((mpart as u32, nf.basis[j] as u32));
                    }
                }
            }
            parts
        })
        .collect();
    Ok(TensorProduct {
        left_input: Arc::clone(m),
        right_input: Arc::clone(n),
        module,
        pure,
        provenance: Provenance::FreeFastPath,
        decomp,
        repairs: 0,
    })
}

/// Computes M (x)_B N for bimodules with a shared middle algebra.
pub fn tensor_product(
    m: &Arc<KleeneModule>,
    n: &Arc<KleeneModule>,
    path: TensorPath,
    limits: &Limits,
) -> Result<TensorProduct> {
    let mid_m = m.right_algebra().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} has no right action over a middle algebra", m.name),
    })?;
    let mid_n = n.left_algebra().ok_or_else(|| KamError::Incompatible {
        detail: format!("{} has no left action over a middle algebra", n.name),
    })?;
    if !mid_m.same_as(mid_n) {
        return Err(KamError::Incompatible {
            detail: format!(
                "middle algebras differ: {} vs {}",
                mid_m.name(),
                mid_n.name()
            ),
        });
    }
    match path {
        TensorPath::Exhaustive => exhaustive_tensor(m, n, limits),
        TensorPath::FreeFastPath => fast_tensor(m, n, limits),
        TensorPath::Auto => {
            if m.right_free.is_some() && n.left_free.is_some() {
                fast_tensor(m, n, limits)
            } else {
                exhaustive_tensor(m, n, limits)
            }
        }
    }
}

/// Tensors a bimodule with a left module by giving the left module the
/// trivial right action of the two-element algebra. The returned product is
/// an (A, 2)-bimodule; its left reduct is the left-module result.
pub fn tensor_with_left_module(
    m: &Arc<KleeneModule>,
    p: &Arc<KleeneModule>,
    limits: &Limits,
) -> Result<TensorProduct> {
    let two = KleeneAlgebra::bool2();
    let p2 = if p.right_algebra().is_some() {
        Arc::clone(p)
    } else {
        p.with_trivial_right(&two)?
    };
    tensor_product(m, &p2, TensorPath::Auto, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::regular_bimodule;

    #[test]
    fn regular_tensor_regular_is_regular() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let reg = regular_bimodule(&k, &limits).unwrap();
        let t = tensor_product(&reg, &reg, TensorPath::Exhaustive, &limits).unwrap();
        assert_eq!(t.module.size(), 2);
        assert!(t.module.check_module_axioms().unwrap().passed());
        // m -> 1 (x) m is the isomorphism.
        assert_eq!(t.pure_tensor(k.one(), k.zero()), t.module.zero());
        assert_ne!(t.pure_tensor(k.one(), k.one()), t.module.zero());
        assert_eq!(t.repairs, 0);
    }

    #[test]
    fn zero_annihilates_pure_tensors() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let reg = regular_bimodule(&k, &limits).unwrap();
        let t = tensor_product(&reg, &reg, TensorPath::Exhaustive, &limits).unwrap();
        for x in 0..reg.size() {
            assert_eq!(t.pure_tensor(k.zero(), x), t.module.zero());
            assert_eq!(t.pure_tensor(x, k.zero()), t.module.zero());
        }
    }

    #[test]
    fn fast_path_matches_exhaustive_on_regular() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let reg = regular_bimodule(&k, &limits).unwrap();
        let fast = tensor_product(&reg, &reg, TensorPath::FreeFastPath, &limits).unwrap();
        let slow = tensor_product(&reg, &reg, TensorPath::Exhaustive, &limits).unwrap();
        assert_eq!(fast.module.size(), slow.module.size());
        let iso = crate::iso::module_iso_search(&fast.module, &slow.module, &limits)
            .unwrap()
            .expect("paths agree");
        assert!(iso.check().passed());
    }
}
