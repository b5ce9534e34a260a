//! Small dense square matrices with exact entries.
//!
//! Everything the Mobius machinery needs: multiplication, identity tests, and
//! inversion of upper *unitriangular* matrices by back-substitution, which
//! stays in the same ring (no division).

use num::traits::{One, Zero};
use std::fmt;
use std::ops::{AddAssign, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct SquareMat<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Clone + Zero> SquareMat<T> {
    pub fn zero(dim: usize) -> SquareMat<T> {
        SquareMat {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> SquareMat<T> {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "ragged rows");
        SquareMat {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.dim)
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> SquareMat<U> {
        SquareMat {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl<T> SquareMat<T>
where
    T: Clone + Zero + One + AddAssign + PartialEq,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn identity(dim: usize) -> SquareMat<T> {
        let mut m = SquareMat::zero(dim);
        for i in 0..dim {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        let one = T::one();
        let zero = T::zero();
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| *self.get(i, j) == if i == j { one.clone() } else { zero.clone() })
        })
    }

    pub fn mul_mat(&self, other: &SquareMat<T>) -> SquareMat<T> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = SquareMat::zero(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(i, k);
                if *a == T::zero() {
                    continue;
                }
                for j in 0..self.dim {
                    let mut t = a * other.get(k, j);
                    std::mem::swap(&mut t, &mut out.entries[i * self.dim + j]);
                    out.entries[i * self.dim + j] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        self.rows()
            .map(|row| {
                let mut acc = T::zero();
                for (a, x) in row.iter().zip(v) {
                    acc += a * x;
                }
                acc
            })
            .collect()
    }
}

impl<T> SquareMat<T>
where
    T: Clone + Zero + One + AddAssign + PartialEq + Sub<Output = T> + Neg<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Invert an upper unitriangular matrix (ones on the diagonal, zeros
    /// below). The inverse has entries in the same ring.
    pub fn unitriangular_inverse(&self) -> SquareMat<T> {
        let n = self.dim;
        for i in 0..n {
            assert!(*self.get(i, i) == T::one(), "diagonal entry is not one");
            for j in 0..i {
                assert!(*self.get(i, j) == T::zero(), "entry below the diagonal");
            }
        }
        let mut inv: SquareMat<T> = SquareMat::identity(n);
        // inv[i][j] = -sum_{i <= k < j} inv[i][k] * self[k][j]
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = T::zero();
                for k in i..j {
                    acc += &inv.entries[i * n + k] * self.get(k, j);
                }
                inv.set(i, j, -acc);
            }
        }
        inv
    }

    /// Nilpotent power sum `sum_k (-1)^k N^k` where `N = self - I`; equals the
    /// unitriangular inverse and is used as an independent cross-check.
    pub fn alternating_eta_sum(&self) -> SquareMat<T> {
        let n = self.dim;
        let mut eta = self.clone();
        for i in 0..n {
            let e = eta.get(i, i).clone() - T::one();
            eta.set(i, i, e);
        }
        let mut acc: SquareMat<T> = SquareMat::identity(n);
        let mut power: SquareMat<T> = SquareMat::identity(n);
        let mut negate = true;
        for _ in 1..=n {
            power = power.mul_mat(&eta);
            if power.entries.iter().all(|e| *e == T::zero()) {
                break;
            }
            for (a, p) in acc.entries.iter_mut().zip(&power.entries) {
                let term = if negate { -p.clone() } else { p.clone() };
                *a += term;
            }
            negate = !negate;
        }
        acc
    }
}

impl<T: fmt::Display> fmt::Debug for SquareMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.dim) {
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e:>6}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
