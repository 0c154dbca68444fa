//! Finite Kleene algebras with table-backed and lazy structural carriers.
//!
//! Elements are indices into the carrier. Table-backed algebras store full
//! operation tables; relation and matrix algebras beyond the table bound
//! compute operations from the index encoding instead.

use std::fmt;
use std::sync::Arc;

use crate::error::{KamError, Result};
use crate::law::{LawCheck, LawReport};
use crate::limits::Limits;

#[derive(Debug)]
enum Backend {
    Tables {
        add: Vec<u32>,
        mul: Vec<u32>,
        star: Vec<u32>,
    },
    /// Binary relations on `points` elements; an element is a bitmask with
    /// bit `r * points + c` set iff the pair (r, c) is in the relation.
    Rel { points: usize },
    /// dim x dim matrices over `base`; an element is a mixed-radix number
    /// with n*n digits in row-major order.
    Matrix { base: Arc<KleeneAlgebra>, dim: usize },
}

/// Structural description preserved across materialization.
#[derive(Debug, Clone)]
enum Shape {
    Opaque,
    Rel { points: usize },
    Matrix { base: Arc<KleeneAlgebra>, dim: usize },
}

/// A finite Kleene algebra. Cheap to share via `Arc`; all operations are pure.
#[derive(Debug)]
pub struct KleeneAlgebra {
    name: String,
    size: usize,
    zero: usize,
    one: usize,
    backend: Backend,
    shape: Shape,
    id: u64,
}

fn fnv(acc: u64, value: u64) -> u64 {
    (acc ^ value).wrapping_mul(0x0000_0100_0000_01b3)
}

const FNV_SEED: u64 = 0xcbf2_9ce4_8422_2325;

impl KleeneAlgebra {
    /// Builds an algebra from explicit tables, validating only dimensions and
    /// index ranges. Axiom compliance is checked separately.
    pub fn from_tables(
        name: impl Into<String>,
        size: usize,
        zero: usize,
        one: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        star: Vec<u32>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        if size == 0 {
            return Err(KamError::Malformed {
                what: "kleene_algebra",
                detail: format!("{name}: carrier must be nonempty"),
            });
        }
        for (label, table, expect) in [
            ("add", &add, size * size),
            ("mul", &mul, size * size),
            ("star", &star, size),
        ] {
            if table.len() != expect {
                return Err(KamError::Malformed {
                    what: "kleene_algebra",
                    detail: format!(
                        "{name}: {label} table has {} entries, expected {expect}",
                        table.len()
                    ),
                });
            }
            if let Some(bad) = table.iter().find(|&&v| v as usize >= size) {
                return Err(KamError::Malformed {
                    what: "kleene_algebra",
                    detail: format!("{name}: {label} table entry {bad} out of range"),
                });
            }
        }
        if zero >= size || one >= size {
            return Err(KamError::Malformed {
                what: "kleene_algebra",
                detail: format!("{name}: zero or one out of range"),
            });
        }
        let mut h = FNV_SEED;
        h = fnv(h, size as u64);
        h = fnv(h, zero as u64);
        h = fnv(h, one as u64);
        for t in [&add, &mul, &star] {
            for &v in t {
                h = fnv(h, v as u64);
            }
        }
        Ok(Arc::new(KleeneAlgebra {
            name,
            size,
            zero,
            one,
            backend: Backend::Tables { add, mul, star },
            shape: Shape::Opaque,
            id: h,
        }))
    }

    /// The two-element algebra with add = max, mul = min and star constantly 1.
    pub fn bool2() -> Arc<Self> {
        KleeneAlgebra::from_tables(
            "bool2",
            2,
            0,
            1,
            vec![0, 1, 1, 1],
            vec![0, 0, 0, 1],
            vec![1, 1],
        )
        .expect("bool2 tables are well-formed")
    }

    /// Binary relations on an n-element set under union, relational
    /// composition and reflexive-transitive closure.
    pub fn rel(points: usize, limits: &Limits) -> Result<Arc<Self>> {
        if points == 0 {
            return Err(KamError::Malformed {
                what: "kleene_algebra",
                detail: "rel(n) requires n >= 1".to_string(),
            });
        }
        let bits = points * points;
        if bits >= usize::BITS as usize {
            return Err(KamError::SizeGuard {
                what: "rel(n)",
                size: usize::MAX,
                bound: limits.max_carrier,
            });
        }
        let size = 1usize << bits;
        if size > limits.max_carrier {
            return Err(KamError::SizeGuard {
                what: "rel(n)",
                size,
                bound: limits.max_carrier,
            });
        }
        let mut one = 0usize;
        for p in 0..points {
            one |= 1 << (p * points + p);
        }
        let mut h = FNV_SEED;
        h = fnv(h, 0x72656c);
        h = fnv(h, points as u64);
        let lazy = KleeneAlgebra {
            name: format!("rel({points})"),
            size,
            zero: 0,
            one,
            backend: Backend::Rel { points },
            shape: Shape::Rel { points },
            id: h,
        };
        if size <= limits.max_table_carrier {
            lazy.materialize()
        } else {
            Ok(Arc::new(lazy))
        }
    }

    /// The algebra of dim x dim matrices over `base`, with star computed by
    /// saturation. Small carriers get explicit tables; larger ones stay lazy.
    pub fn matrix(base: &Arc<KleeneAlgebra>, dim: usize, limits: &Limits) -> Result<Arc<Self>> {
        if dim == 0 {
            return Err(KamError::Malformed {
                what: "kleene_algebra",
                detail: "matrix algebra requires dim >= 1".to_string(),
            });
        }
        let mut size = 1usize;
        for _ in 0..dim * dim {
            size = size
                .checked_mul(base.size)
                .filter(|&s| s <= limits.max_carrier)
                .ok_or(KamError::SizeGuard {
                    what: "matrix algebra",
                    size: usize::MAX,
                    bound: limits.max_carrier,
                })?;
        }
        let mut one_entries = vec![base.zero; dim * dim];
        for d in 0..dim {
            one_entries[d * dim + d] = base.one;
        }
        let mut h = FNV_SEED;
        h = fnv(h, 0x6d6174);
        h = fnv(h, base.id);
        h = fnv(h, dim as u64);
        let lazy = KleeneAlgebra {
            name: format!("mat({},{dim})", base.name),
            size,
            zero: encode_digits(&vec![base.zero; dim * dim], base.size),
            one: encode_digits(&one_entries, base.size),
            backend: Backend::Matrix {
                base: Arc::clone(base),
                dim,
            },
            shape: Shape::Matrix {
                base: Arc::clone(base),
                dim,
            },
            id: h,
        };
        if size <= limits.max_table_carrier {
            lazy.materialize()
        } else {
            Ok(Arc::new(lazy))
        }
    }

    /// Recomputes every operation into explicit tables. The structural
    /// fingerprint is kept, so the result counts as the same algebra.
    pub fn materialize(&self) -> Result<Arc<Self>> {
        let n = self.size;
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                add.push(self.add(i, j) as u32);
                mul.push(self.mul(i, j) as u32);
            }
        }
        let star = (0..n).map(|i| self.star(i) as u32).collect();
        Ok(Arc::new(KleeneAlgebra {
            name: self.name.clone(),
            size: n,
            zero: self.zero,
            one: self.one,
            backend: Backend::Tables { add, mul, star },
            shape: self.shape.clone(),
            id: self.id,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    /// Structural fingerprint; two algebras with equal fingerprints are
    /// treated as the same algebra by every compatibility check.
    pub fn structural_id(&self) -> u64 {
        self.id
    }

    pub fn same_as(&self, other: &KleeneAlgebra) -> bool {
        self.id == other.id && self.size == other.size
    }

    pub fn is_table_backed(&self) -> bool {
        matches!(self.backend, Backend::Tables { .. })
    }

    fn tables(&self) -> Option<(&[u32], &[u32], &[u32])> {
        match &self.backend {
            Backend::Tables { add, mul, star } => Some((add, mul, star)),
            _ => None,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.backend {
            Backend::Tables { add, .. } => add[a * self.size + b] as usize,
            Backend::Rel { .. } => a | b,
            Backend::Matrix { base, dim } => {
                let x = decode_digits(a, base.size, dim * dim);
                let y = decode_digits(b, base.size, dim * dim);
                let sum: Vec<usize> = x
                    .iter()
                    .zip(&y)
                    .map(|(&u, &v)| base.add(u, v))
                    .collect();
                encode_digits(&sum, base.size)
            }
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.backend {
            Backend::Tables { mul, .. } => mul[a * self.size + b] as usize,
            Backend::Rel { points } => rel_compose(a, b, *points),
            Backend::Matrix { base, dim } => {
                let x = decode_digits(a, base.size, dim * dim);
                let y = decode_digits(b, base.size, dim * dim);
                encode_digits(&mat_mul(&x, &y, base, *dim), base.size)
            }
        }
    }

    pub fn star(&self, a: usize) -> usize {
        match &self.backend {
            Backend::Tables { star, .. } => star[a] as usize,
            Backend::Rel { points } => rel_star(a, *points),
            Backend::Matrix { .. } => self.star_saturate(a),
        }
    }

    /// The natural order: a <= b iff a + b = b.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.add(a, b) == b
    }

    /// Stabilizes the chain s0 = 1, s(k+1) = s(k) + a * s(k). In a finite
    /// idempotent-addition algebra the chain stabilizes at the least solution
    /// of 1 + a*x <= x, which is a*. Independent of any stored star table.
    pub fn star_saturate(&self, a: usize) -> usize {
        let mut s = self.one;
        loop {
            let next = self.add(s, self.mul(a, s));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// Extracts the subalgebra on `subset`, which must contain 0 and 1 and be
    /// closed under add, mul and star. Returns the reindexed algebra together
    /// with the embedding from new indices to indices of `self`.
    pub fn subalgebra(
        self: &Arc<Self>,
        name: impl Into<String>,
        subset: &[usize],
    ) -> Result<(Arc<KleeneAlgebra>, Vec<usize>)> {
        let mut carrier: Vec<usize> = subset.to_vec();
        carrier.sort_unstable();
        carrier.dedup();
        if carrier.iter().any(|&x| x >= self.size) {
            return Err(KamError::NotSubalgebra {
                detail: "subset contains out-of-range indices".to_string(),
            });
        }
        let pos = |x: usize| carrier.binary_search(&x).ok();
        for need in [self.zero, self.one] {
            if pos(need).is_none() {
                return Err(KamError::NotSubalgebra {
                    detail: format!("element {need} (zero or one) missing"),
                });
            }
        }
        let k = carrier.len();
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        let mut star = Vec::with_capacity(k);
        for &x in &carrier {
            for &y in &carrier {
                for (label, v) in [("add", self.add(x, y)), ("mul", self.mul(x, y))] {
                    match pos(v) {
                        Some(p) => {
                            if label == "add" {
                                add.push(p as u32)
                            } else {
                                mul.push(p as u32)
                            }
                        }
                        None => {
                            return Err(KamError::NotSubalgebra {
                                detail: format!("{label}({x},{y}) = {v} escapes the subset"),
                            })
                        }
                    }
                }
            }
            match pos(self.star(x)) {
                Some(p) => star.push(p as u32),
                None => {
                    return Err(KamError::NotSubalgebra {
                        detail: format!("star({x}) escapes the subset"),
                    })
                }
            }
        }
        let alg = KleeneAlgebra::from_tables(
            name,
            k,
            pos(self.zero).unwrap(),
            pos(self.one).unwrap(),
            add,
            mul,
            star,
        )?;
        Ok((alg, carrier))
    }

    /// Full axiom check by enumeration: idempotent-semiring laws, the two
    /// star unrolling inequalities and the two star induction quasi-identities
    /// over all (a, b, x) triples.
    pub fn check_kleene_axioms(&self, limits: &Limits) -> Result<LawReport> {
        let n = self.size;
        let triples = (n as u64).pow(3);
        if triples > limits.max_induction_triples {
            return Err(KamError::EnumerationGuard {
                what: "kleene axiom triples",
                count: triples as u128,
                bound: limits.max_induction_triples,
            });
        }
        let mut report = LawReport::new(self.name.clone());
        let rd = |i: usize| self.render_element(i);

        // Lazy carriers stay on the generic path; table-backed ones use
        // direct indexing for the cubic enumerations.
        let direct = self.tables();
        let add = |a: usize, b: usize| -> usize {
            match direct {
                Some((t, _, _)) => t[a * n + b] as usize,
                None => self.add(a, b),
            }
        };
        let mul = |a: usize, b: usize| -> usize {
            match direct {
                Some((_, t, _)) => t[a * n + b] as usize,
                None => self.mul(a, b),
            }
        };
        let star = |a: usize| -> usize {
            match direct {
                Some((_, _, t)) => t[a] as usize,
                None => self.star(a),
            }
        };
        let le = |a: usize, b: usize| -> bool { add(a, b) == b };

        let pairs = (n as u64).pow(2);
        macro_rules! law {
            ($id:expr, $stmt:expr, $count:expr, $body:expr) => {{
                let witness: Option<Vec<usize>> = $body;
                match witness {
                    None => report.push(LawCheck::pass($id, $stmt, $count)),
                    Some(w) => {
                        let detail = w.iter().map(|&i| rd(i)).collect::<Vec<_>>().join(", ");
                        report.push(LawCheck::fail($id, $stmt, $count, w, detail));
                    }
                }
            }};
        }

        law!("add_assoc", "(a+b)+c = a+(b+c)", triples, {
            let mut w = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    let ab = add(a, b);
                    for c in 0..n {
                        if add(ab, c) != add(a, add(b, c)) {
                            w = Some(vec![a, b, c]);
                            break 'outer;
                        }
                    }
                }
            }
            w
        });
        law!("add_comm", "a+b = b+a", pairs, {
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .find(|&(a, b)| add(a, b) != add(b, a))
                .map(|(a, b)| vec![a, b])
        });
        law!("add_idem", "a+a = a", n as u64, {
            (0..n).find(|&a| add(a, a) != a).map(|a| vec![a])
        });
        law!("add_zero", "a+0 = a", n as u64, {
            (0..n)
                .find(|&a| add(a, self.zero) != a)
                .map(|a| vec![a])
        });
        law!("mul_assoc", "(a*b)*c = a*(b*c)", triples, {
            let mut w = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    let ab = mul(a, b);
                    for c in 0..n {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            w = Some(vec![a, b, c]);
                            break 'outer;
                        }
                    }
                }
            }
            w
        });
        law!("mul_one", "1*a = a and a*1 = a", n as u64, {
            (0..n)
                .find(|&a| mul(self.one, a) != a || mul(a, self.one) != a)
                .map(|a| vec![a])
        });
        law!("mul_zero", "0*a = 0 and a*0 = 0", n as u64, {
            (0..n)
                .find(|&a| mul(self.zero, a) != self.zero || mul(a, self.zero) != self.zero)
                .map(|a| vec![a])
        });
        law!("dist_left", "a*(b+c) = a*b + a*c", triples, {
            let mut w = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    let ab = mul(a, b);
                    for c in 0..n {
                        if mul(a, add(b, c)) != add(ab, mul(a, c)) {
                            w = Some(vec![a, b, c]);
                            break 'outer;
                        }
                    }
                }
            }
            w
        });
        law!("dist_right", "(a+b)*c = a*c + b*c", triples, {
            let mut w = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    let ab = add(a, b);
                    for c in 0..n {
                        if mul(ab, c) != add(mul(a, c), mul(b, c)) {
                            w = Some(vec![a, b, c]);
                            break 'outer;
                        }
                    }
                }
            }
            w
        });
        law!("star_unroll_left", "1 + a*a^* <= a^*", n as u64, {
            (0..n)
                .find(|&a| {
                    let s = star(a);
                    !le(add(self.one, mul(a, s)), s)
                })
                .map(|a| vec![a])
        });
        law!("star_unroll_right", "1 + a^**a <= a^*", n as u64, {
            (0..n)
                .find(|&a| {
                    let s = star(a);
                    !le(add(self.one, mul(s, a)), s)
                })
                .map(|a| vec![a])
        });
        law!(
            "star_induction_left",
            "b + a*x <= x implies a^**b <= x",
            triples,
            {
                let mut w = None;
                'outer: for a in 0..n {
                    let s = star(a);
                    for b in 0..n {
                        let sb = mul(s, b);
                        for x in 0..n {
                            if le(add(b, mul(a, x)), x) && !le(sb, x) {
                                w = Some(vec![a, b, x]);
                                break 'outer;
                            }
                        }
                    }
                }
                w
            }
        );
        law!(
            "star_induction_right",
            "b + x*a <= x implies b*a^* <= x",
            triples,
            {
                let mut w = None;
                'outer: for a in 0..n {
                    let s = star(a);
                    for b in 0..n {
                        let bs = mul(b, s);
                        for x in 0..n {
                            if le(add(b, mul(x, a)), x) && !le(bs, x) {
                                w = Some(vec![a, b, x]);
                                break 'outer;
                            }
                        }
                    }
                }
                w
            }
        );
        Ok(report)
    }

    /// Renders an element in a structure-appropriate notation.
    pub fn render_element(&self, i: usize) -> String {
        match &self.shape {
            Shape::Opaque => i.to_string(),
            Shape::Rel { points } => {
                let mut pairs = Vec::new();
                for r in 0..*points {
                    for c in 0..*points {
                        if i >> (r * points + c) & 1 == 1 {
                            pairs.push(format!("({r},{c})"));
                        }
                    }
                }
                format!("{{{}}}", pairs.join(","))
            }
            Shape::Matrix { base, dim } => {
                let entries = decode_digits(i, base.size, dim * dim);
                let rows: Vec<String> = (0..*dim)
                    .map(|r| {
                        let row: Vec<String> = (0..*dim)
                            .map(|c| base.render_element(entries[r * dim + c]))
                            .collect();
                        format!("[{}]", row.join(" "))
                    })
                    .collect();
                format!("[{}]", rows.join(" "))
            }
        }
    }

    /// For matrix algebras, the base algebra and dimension.
    pub fn matrix_structure(&self) -> Option<(&Arc<KleeneAlgebra>, usize)> {
        match &self.shape {
            Shape::Matrix { base, dim } => Some((base, *dim)),
            _ => None,
        }
    }

    /// For relation algebras, the number of points.
    pub fn rel_points(&self) -> Option<usize> {
        match &self.shape {
            Shape::Rel { points } => Some(*points),
            _ => None,
        }
    }
}

pub(crate) fn encode_digits(digits: &[usize], radix: usize) -> usize {
    let mut v = 0usize;
    for &d in digits.iter().rev() {
        v = v * radix + d;
    }
    v
}

pub(crate) fn decode_digits(mut value: usize, radix: usize, count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(value % radix);
        value /= radix;
    }
    out
}

pub(crate) fn mat_mul(x: &[usize], y: &[usize], base: &KleeneAlgebra, dim: usize) -> Vec<usize> {
    let mut out = vec![base.zero(); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let mut acc = base.zero();
            for k in 0..dim {
                acc = base.add(acc, base.mul(x[r * dim + k], y[k * dim + c]));
            }
            out[r * dim + c] = acc;
        }
    }
    out
}

fn rel_compose(a: usize, b: usize, points: usize) -> usize {
    let row_mask = (1usize << points) - 1;
    let mut out = 0usize;
    for r in 0..points {
        let a_row = a >> (r * points) & row_mask;
        let mut out_row = 0usize;
        for y in 0..points {
            if a_row >> y & 1 == 1 {
                out_row |= b >> (y * points) & row_mask;
            }
        }
        out |= out_row << (r * points);
    }
    out
}

fn rel_star(a: usize, points: usize) -> usize {
    let row_mask = (1usize << points) - 1;
    let mut rows: Vec<usize> = (0..points).map(|r| a >> (r * points) & row_mask).collect();
    for r in 0..points {
        rows[r] |= 1 << r;
    }
    // Warshall: close under composition through each intermediate point.
    for k in 0..points {
        for r in 0..points {
            if rows[r] >> k & 1 == 1 {
                rows[r] |= rows[k];
            }
        }
    }
    let mut out = 0usize;
    for (r, row) in rows.iter().enumerate() {
        out |= row << (r * points);
    }
    out
}

/// An element paired with its algebra; the user-facing wrapper around indices.
#[derive(Clone)]
pub struct Element {
    pub algebra: Arc<KleeneAlgebra>,
    pub index: usize,
}

impl Element {
    pub fn new(algebra: &Arc<KleeneAlgebra>, index: usize) -> Result<Self> {
        if index >= algebra.size() {
            return Err(KamError::Malformed {
                what: "element",
                detail: format!("index {index} out of range for {}", algebra.name()),
            });
        }
        Ok(Element {
            algebra: Arc::clone(algebra),
            index,
        })
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.algebra.same_as(&other.algebra) {
            Ok(())
        } else {
            Err(KamError::CrossAlgebra)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            index: self.algebra.add(self.index, other.index),
        })
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            index: self.algebra.mul(self.index, other.index),
        })
    }

    pub fn star(&self) -> Element {
        Element {
            algebra: Arc::clone(&self.algebra),
            index: self.algebra.star(self.index),
        }
    }

    /// The natural order a <= b iff a + b = b. Cross-algebra comparison is an
    /// error, not false.
    pub fn le(&self, other: &Element) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.algebra.le(self.index, other.index))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}#{} = {}",
            self.algebra.name(),
            self.index,
            self.algebra.render_element(self.index)
        )
    }
}

/// A homomorphism between Kleene algebras, given by its value table.
#[derive(Clone)]
pub struct AlgebraHom {
    pub source: Arc<KleeneAlgebra>,
    pub target: Arc<KleeneAlgebra>,
    pub map: Vec<u32>,
}

impl AlgebraHom {
    pub fn new(
        source: &Arc<KleeneAlgebra>,
        target: &Arc<KleeneAlgebra>,
        map: Vec<u32>,
    ) -> Result<Self> {
        if map.len() != source.size() {
            return Err(KamError::Malformed {
                what: "algebra_hom",
                detail: format!(
                    "map has {} entries, expected {}",
                    map.len(),
                    source.size()
                ),
            });
        }
        if let Some(bad) = map.iter().find(|&&v| v as usize >= target.size()) {
            return Err(KamError::Malformed {
                what: "algebra_hom",
                detail: format!("map entry {bad} out of range"),
            });
        }
        Ok(AlgebraHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map,
        })
    }

    pub fn identity(algebra: &Arc<KleeneAlgebra>) -> Self {
        AlgebraHom {
            source: Arc::clone(algebra),
            target: Arc::clone(algebra),
            map: (0..algebra.size() as u32).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    /// g.compose(f) is the map a -> g(f(a)); requires f.target = g.source.
    pub fn compose_after(&self, f: &AlgebraHom) -> Result<AlgebraHom> {
        if !f.target.same_as(&self.source) {
            return Err(KamError::Incompatible {
                detail: "homomorphisms are not composable".to_string(),
            });
        }
        Ok(AlgebraHom {
            source: Arc::clone(&f.source),
            target: Arc::clone(&self.target),
            map: f.map.iter().map(|&v| self.map[v as usize]).collect(),
        })
    }

    /// Checks preservation of zero, one, add, mul and star by enumeration.
    pub fn check(&self) -> LawReport {
        let mut report = LawReport::new(format!(
            "hom {} -> {}",
            self.source.name(),
            self.target.name()
        ));
        let s = &self.source;
        let t = &self.target;
        let h = |i: usize| self.map[i] as usize;
        let n = s.size();

        report.push(if h(s.zero()) == t.zero() {
            LawCheck::pass("hom_zero", "h(0) = 0", 1)
        } else {
            LawCheck::fail("hom_zero", "h(0) = 0", 1, vec![s.zero()], String::new())
        });
        report.push(if h(s.one()) == t.one() {
            LawCheck::pass("hom_one", "h(1) = 1", 1)
        } else {
            LawCheck::fail("hom_one", "h(1) = 1", 1, vec![s.one()], String::new())
        });
        let pairs = (n * n) as u64;
        let add_bad = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| h(s.add(a, b)) != t.add(h(a), h(b)));
        report.push(match add_bad {
            None => LawCheck::pass("hom_add", "h(a+b) = h(a)+h(b)", pairs),
            Some((a, b)) => LawCheck::fail("hom_add", "h(a+b) = h(a)+h(b)", pairs, vec![a, b], String::new()),
        });
        let mul_bad = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| h(s.mul(a, b)) != t.mul(h(a), h(b)));
        report.push(match mul_bad {
            None => LawCheck::pass("hom_mul", "h(a*b) = h(a)*h(b)", pairs),
            Some((a, b)) => LawCheck::fail("hom_mul", "h(a*b) = h(a)*h(b)", pairs, vec![a, b], String::new()),
        });
        let star_bad = (0..n).find(|&a| h(s.star(a)) != t.star(h(a)));
        report.push(match star_bad {
            None => LawCheck::pass("hom_star", "h(a^*) = h(a)^*", n as u64),
            Some(a) => LawCheck::fail("hom_star", "h(a^*) = h(a)^*", n as u64, vec![a], String::new()),
        });
        report
    }
}
