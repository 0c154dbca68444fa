//! Matrix elements over a finite Kleene algebra, plus the standard matrices
//! used by the Morita constructions (unit matrices, all-ones, row patches).

use std::sync::Arc;

use crate::algebra::{decode_digits, encode_digits, mat_mul, KleeneAlgebra};
use crate::error::{KamError, Result};

/// An n x n matrix with entries in `base`, stored row-major.
#[derive(Clone)]
pub struct MatrixElement {
    pub base: Arc<KleeneAlgebra>,
    pub dim: usize,
    pub entries: Vec<usize>,
}

impl PartialEq for MatrixElement {
    fn eq(&self, other: &Self) -> bool {
        self.base.same_as(&other.base) && self.dim == other.dim && self.entries == other.entries
    }
}

impl Eq for MatrixElement {}

impl std::fmt::Debug for MatrixElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl MatrixElement {
    pub fn new(base: &Arc<KleeneAlgebra>, dim: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(KamError::Malformed {
                what: "matrix",
                detail: format!("{} entries, expected {}", entries.len(), dim * dim),
            });
        }
        if entries.iter().any(|&e| e >= base.size()) {
            return Err(KamError::Malformed {
                what: "matrix",
                detail: "entry out of range".to_string(),
            });
        }
        Ok(MatrixElement {
            base: Arc::clone(base),
            dim,
            entries,
        })
    }

    pub fn zero(base: &Arc<KleeneAlgebra>, dim: usize) -> Self {
        MatrixElement {
            base: Arc::clone(base),
            dim,
            entries: vec![base.zero(); dim * dim],
        }
    }

    pub fn identity(base: &Arc<KleeneAlgebra>, dim: usize) -> Self {
        let mut m = Self::zero(base, dim);
        for d in 0..dim {
            m.entries[d * dim + d] = base.one();
        }
        m
    }

    /// The matrix that is 1 at (i, j) and 0 elsewhere.
    pub fn unit(base: &Arc<KleeneAlgebra>, dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(base, dim);
        m.entries[i * dim + j] = base.one();
        m
    }

    /// The matrix with every entry 1.
    pub fn all_ones(base: &Arc<KleeneAlgebra>, dim: usize) -> Self {
        MatrixElement {
            base: Arc::clone(base),
            dim,
            entries: vec![base.one(); dim * dim],
        }
    }

    /// The all-ones matrix with row i replaced by the i-th standard unit row.
    pub fn row_patched(base: &Arc<KleeneAlgebra>, dim: usize, i: usize) -> Self {
        let mut m = Self::all_ones(base, dim);
        for c in 0..dim {
            m.entries[i * dim + c] = if c == i { base.one() } else { base.zero() };
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> usize {
        self.entries[r * self.dim + c]
    }

    pub fn add(&self, other: &MatrixElement) -> MatrixElement {
        MatrixElement {
            base: Arc::clone(&self.base),
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| self.base.add(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MatrixElement) -> MatrixElement {
        MatrixElement {
            base: Arc::clone(&self.base),
            dim: self.dim,
            entries: mat_mul(&self.entries, &other.entries, &self.base, self.dim),
        }
    }

    /// Matrix star by chain saturation, entirely in terms of base operations.
    pub fn star_saturate(&self) -> MatrixElement {
        let mut s = Self::identity(&self.base, self.dim);
        loop {
            let next = s.add(&self.mul(&s));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// Index of this matrix in the matrix algebra over the same base.
    pub fn index_in(&self, algebra: &KleeneAlgebra) -> Result<usize> {
        match algebra.matrix_structure() {
            Some((base, dim)) if base.same_as(&self.base) && dim == self.dim => {
                Ok(encode_digits(&self.entries, self.base.size()))
            }
            _ => Err(KamError::Incompatible {
                detail: "matrix does not belong to this algebra".to_string(),
            }),
        }
    }

    /// Decodes an index of a matrix algebra into its matrix.
    pub fn from_index(algebra: &KleeneAlgebra, index: usize) -> Result<Self> {
        match algebra.matrix_structure() {
            Some((base, dim)) => Ok(MatrixElement {
                base: Arc::clone(base),
                dim,
                entries: decode_digits(index, base.size(), dim * dim),
            }),
            None => Err(KamError::Incompatible {
                detail: "algebra is not matrix-backed".to_string(),
            }),
        }
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = (0..self.dim)
            .map(|r| {
                let row: Vec<String> = (0..self.dim)
                    .map(|c| self.base.render_element(self.get(r, c)))
                    .collect();
                format!("({})", row.join(" "))
            })
            .collect();
        rows.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    #[test]
    fn unit_matrices_multiply() {
        let k = KleeneAlgebra::bool2();
        let e01 = MatrixElement::unit(&k, 2, 0, 1);
        let e10 = MatrixElement::unit(&k, 2, 1, 0);
        let prod = e01.mul(&e10);
        assert_eq!(prod, MatrixElement::unit(&k, 2, 0, 0));
    }

    #[test]
    fn star_of_nilpotent_in_m2() {
        let k = KleeneAlgebra::bool2();
        let e01 = MatrixElement::unit(&k, 2, 0, 1);
        let star = e01.star_saturate();
        let expect = MatrixElement::identity(&k, 2).add(&e01);
        assert_eq!(star, expect);
    }

    #[test]
    fn index_roundtrip() {
        let limits = Limits::default();
        let k = KleeneAlgebra::bool2();
        let m2 = KleeneAlgebra::matrix(&k, 2, &limits).unwrap();
        for i in 0..m2.size() {
            let m = MatrixElement::from_index(&m2, i).unwrap();
            assert_eq!(m.index_in(&m2).unwrap(), i);
        }
    }
}
