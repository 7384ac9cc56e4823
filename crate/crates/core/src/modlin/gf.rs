//! Dense matrices and row spaces over a prime field GF(p).
//!
//! Vectors are rows; a matrix acts on the right, `v -> v M`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[inline]
pub fn inv_mod(a: u32, p: u32) -> u32 {
    // p prime: a^(p-2)
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

pub fn vec_add(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

pub fn vec_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
}

pub fn vec_scale(a: &[u32], c: u32, p: u32) -> Vec<u32> {
    a.iter().map(|x| (*x as u64 * c as u64 % p as u64) as u32).collect()
}

pub fn is_zero(a: &[u32]) -> bool {
    a.iter().all(|&x| x == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GfMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl GfMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        GfMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Action("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|&x| x >= p) {
            return Err(Error::Action(format!("matrix entry out of range for p = {p}")));
        }
        Ok(GfMatrix {
            p,
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!(self.cols, other.rows);
        let p = self.p as u64;
        let mut out = GfMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GfMatrix) -> GfMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn sub(&self, other: &GfMatrix) -> GfMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + self.p - b) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u32) -> GfMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = (*a as u64 * c as u64 % self.p as u64) as u32;
        }
        out
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut out = GfMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u32))
    }

    /// `v M` for a row vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.rows);
        let p = self.p as u64;
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += a as u64 * self.get(i, j) as u64;
            }
        }
        out.into_iter().map(|x| (x % p) as u32).collect()
    }

    pub fn rank(&self) -> usize {
        RowSpace::from_vectors(self.p, self.cols, self.to_rows().iter()).dim()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<GfMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let p = self.p;
        let mut aug: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| (i == j) as u32));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| aug[r][col] != 0)?;
            aug.swap(col, piv);
            let inv = inv_mod(aug[col][col], p);
            aug[col] = vec_scale(&aug[col], inv, p);
            for r in 0..n {
                if r != col && aug[r][col] != 0 {
                    let f = aug[r][col];
                    let sub = vec_scale(&aug[col], f, p);
                    aug[r] = vec_sub(&aug[r], &sub, p);
                }
            }
        }
        let rows: Vec<Vec<u32>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        GfMatrix::from_rows(p, &rows).ok()
    }

    /// Basis of `{ x : self * x^T = 0 }`, i.e. solutions of the linear
    /// system whose equations are the rows.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let n = self.cols;
        let mut rows = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let inv = inv_mod(rows[r][col], p);
            rows[r] = vec_scale(&rows[r], inv, p);
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let f = rows[i][col];
                    let sub = vec_scale(&rows[r], f, p);
                    rows[i] = vec_sub(&rows[i], &sub, p);
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u32; n];
                x[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    x[pc] = (p - rows[i][f]) % p;
                }
                x
            })
            .collect()
    }
}

/// A subspace of GF(p)^n kept in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpace {
    pub p: u32,
    pub ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(p: u32, ambient: usize) -> Self {
        RowSpace {
            p,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(
        p: u32,
        ambient: usize,
        vs: impl IntoIterator<Item = &'a Vec<u32>>,
    ) -> Self {
        let mut s = Self::new(p, ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if v[pc] != 0 {
                let sub = vec_scale(row, v[pc], self.p);
                v = vec_sub(&v, &sub, self.p);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        let r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let r = vec_scale(&r, inv_mod(r[pc], self.p), self.p);
        for row in self.rows.iter_mut() {
            if row[pc] != 0 {
                let sub = vec_scale(&r, row[pc], self.p);
                *row = vec_sub(row, &sub, self.p);
            }
        }
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }

    pub fn extend_from(&mut self, other: &RowSpace) {
        for v in &other.rows {
            self.insert(v);
        }
    }
}
