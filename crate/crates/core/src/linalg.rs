//! Exact rational sparse matrices and kernels.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

pub type Q = Ratio<i64>;

/// Sparse vector keyed by basis index; zero entries are never stored.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn vec_add_scaled(acc: &mut SparseVec, v: &SparseVec, c: Q) {
    for (&i, &x) in v {
        let e = acc.entry(i).or_insert_with(Q::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(&i);
        }
    }
}

/// Exact sparse matrix with `rows x cols` shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.add_entry(i, i, Q::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.entries.get(&(r, c)).copied().unwrap_or_else(Q::zero)
    }

    pub fn add_entry(&mut self, r: usize, c: usize, x: Q) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        if x.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Q)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column(&self, c: usize) -> SparseVec {
        self.entries
            .iter()
            .filter(|((_, cc), _)| *cc == c)
            .map(|(&(r, _), &x)| (r, x))
            .collect()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&(r, c), &x) in &self.entries {
            if let Some(&y) = v.get(&c) {
                let e = out.entry(r).or_insert_with(Q::zero);
                *e += x * y;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut by_row: Vec<Vec<(usize, Q)>> = vec![Vec::new(); other.rows];
        for (&(r, c), &x) in &other.entries {
            by_row[r].push((c, x));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for (&(r, k), &x) in &self.entries {
            for &(c, y) in &by_row[k] {
                out.add_entry(r, c, x * y);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Matrix, c: Q) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        for (&(r, cc), &x) in &other.entries {
            self.add_entry(r, cc, x * c);
        }
    }

    pub fn scaled(&self, c: Q) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(other, -Q::one());
        out
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Q {
        self.entries
            .iter()
            .filter(|((r, c), _)| r == c)
            .fold(Q::zero(), |acc, (_, &x)| acc + x)
    }

    /// `Some(c)` if the matrix is `c · I`.
    pub fn as_scalar(&self) -> Option<Q> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0);
        (*self == Matrix::identity(self.rows).scaled(c)).then_some(c)
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut d = vec![vec![Q::zero(); self.cols]; self.rows];
        for (&(r, c), &x) in &self.entries {
            d[r][c] = x;
        }
        d
    }

    /// Dense rows as `"num/den"` strings, for debugging dumps.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump {
            rows: usize,
            cols: usize,
            data: Vec<Vec<String>>,
        }
        let data = self
            .to_dense()
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.to_string()).collect())
            .collect();
        serde_json::to_value(Dump {
            rows: self.rows,
            cols: self.cols,
            data,
        })
        .expect("matrix dump serializes")
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[row].clone();
                for (x, &t) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= f * t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut d = m.to_dense();
    rref(&mut d, m.cols).len()
}

/// Basis of the kernel, one vector per free column.
pub fn nullspace(m: &Matrix) -> Vec<SparseVec> {
    let mut d = m.to_dense();
    let pivots = rref(&mut d, m.cols);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = SparseVec::new();
            v.insert(f, Q::one());
            for (r, &pc) in pivots.iter().enumerate() {
                let x = -d[r][f];
                if !x.is_zero() {
                    v.insert(pc, x);
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(d: &[&[i64]]) -> Matrix {
        let mut m = Matrix::zeros(d.len(), d[0].len());
        for (r, row) in d.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                m.add_entry(r, c, q(x));
            }
        }
        m
    }

    #[test]
    fn product_and_commutator() {
        let a = from_dense(&[&[0, 1], &[0, 0]]);
        let b = from_dense(&[&[0, 0], &[1, 0]]);
        assert_eq!(a.mul(&b), from_dense(&[&[1, 0], &[0, 0]]));
        assert_eq!(a.commutator(&b), from_dense(&[&[1, 0], &[0, -1]]));
        assert_eq!(a.commutator(&b).trace(), q(0));
        assert_eq!(Matrix::identity(3).scaled(q(5)).as_scalar(), Some(q(5)));
        assert_eq!(a.as_scalar(), None);
    }

    #[test]
    fn kernel() {
        let m = from_dense(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let ker = nullspace(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).is_empty());
        }
        assert_eq!(nullspace(&Matrix::identity(4)).len(), 0);
        assert_eq!(nullspace(&Matrix::zeros(0, 3)).len(), 3);
    }

    #[test]
    fn zero_entries_are_dropped() {
        let mut m = Matrix::zeros(2, 2);
        m.add_entry(0, 1, q(3));
        m.add_entry(0, 1, q(-3));
        assert!(m.is_zero());
    }
}
