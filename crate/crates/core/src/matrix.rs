//! Dense square matrices over a signed exact scalar.
//!
//! The abelianization of an automorphism lands in `GL_r(Z)`; everything here is
//! exact. Rows act on the right: row `i` is the image of the `i`-th basis
//! vector.

use std::fmt;
use std::ops::Mul;

use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: PrimInt + Signed> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Sum of absolute values of all entries.
    pub fn norm1(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc + x.abs())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Determinant by fraction-free (Bareiss) elimination. `None` on overflow.
    pub fn determinant(&self) -> Option<T> {
        bareiss_det(self.n, self.data.clone())
    }

    /// True iff the determinant is `±1`.
    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Some(d) if d.abs() == T::one())
    }

    /// Exact inverse of a unimodular matrix via the adjugate.
    pub fn inverse_unimodular(&self) -> Option<Self> {
        let n = self.n;
        let det = self.determinant()?;
        if det.abs() != T::one() {
            return None;
        }
        if n == 1 {
            return Some(Matrix {
                n,
                data: vec![det],
            });
        }
        let mut inv = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut minor = Vec::with_capacity((n - 1) * (n - 1));
                for r in (0..n).filter(|&r| r != i) {
                    for c in (0..n).filter(|&c| c != j) {
                        minor.push(self[(r, c)]);
                    }
                }
                let cof = bareiss_det(n - 1, minor)?;
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                // adjugate is the transpose of the cofactor matrix; det = ±1
                inv[(j, i)] = cof * det;
            }
        }
        Some(inv)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a.checked_mul(&rhs[(k, j)])?;
                    out[(i, j)] = out[(i, j)].checked_add(&prod)?;
                }
            }
        }
        Some(out)
    }
}

fn bareiss_det<T: PrimInt + Signed>(n: usize, mut a: Vec<T>) -> Option<T> {
    if n == 0 {
        return Some(T::one());
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let pivot = (k + 1..n).find(|&r| !a[r * n + k].is_zero());
            match pivot {
                Some(r) => {
                    for c in 0..n {
                        a.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return Some(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i * n + j].checked_mul(&a[k * n + k])?;
                let rhs = a[i * n + k].checked_mul(&a[k * n + j])?;
                a[i * n + j] = lhs.checked_sub(&rhs)? / prev;
            }
        }
        prev = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: PrimInt + Signed> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on overflow; use [`Matrix::checked_mul`] when entries may be large.
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix product overflow")
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.data.chunks(self.n.max(1)).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
