//! Dense exact linear algebra over [`CycloNumber`].
//!
//! Row reduction always pivots on the leftmost nonzero column and takes the
//! first row carrying it, so every echelon form produced here is
//! deterministic. Tall systems are reduced a row at a time through
//! [`Echelon`], which never stores more rows than the rank.

use std::fmt;

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

pub type Vector = Vec<CycloNumber>;

pub fn zero_vector(n: usize) -> Vector {
    vec![CycloNumber::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = CycloNumber::one();
    v
}

pub fn is_zero_vector(v: &[CycloNumber]) -> bool {
    v.iter().all(CycloNumber::is_zero)
}

/// An incrementally maintained reduced row echelon basis.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    width: usize,
    /// (pivot column, row), sorted by pivot; each row is 1 at its pivot and
    /// 0 at every other row's pivot.
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, r)| r)
    }

    /// Reduces `v` against the current rows.
    pub fn reduce(&self, v: &[CycloNumber]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycloNumber]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[CycloNumber]) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("pivot is nonzero");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    /// Basis of `{x : row · x = 0 for every row}`, in canonical echelon form.
    pub fn null_space(&self) -> Subspace {
        let pivots = self.pivots();
        let mut out = Vec::new();
        for f in (0..self.width).filter(|c| !pivots.contains(c)) {
            let mut v = unit_vector(self.width, f);
            for (p, row) in &self.rows {
                if !row[f].is_zero() {
                    v[*p] = -&row[f];
                }
            }
            out.push(v);
        }
        Subspace::span(self.width, out)
    }
}

/// A subspace of `k^n` stored by its canonical (reduced echelon) basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn span<I, V>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[CycloNumber]>,
    {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.insert(v.as_ref());
        }
        Self::from_echelon(e)
    }

    pub fn from_echelon(e: Echelon) -> Self {
        let pivots = e.pivots();
        Subspace {
            ambient: e.width,
            basis: e.rows.into_iter().map(|(_, r)| r).collect(),
            pivots,
        }
    }

    fn echelon(&self) -> Echelon {
        Echelon {
            width: self.ambient,
            rows: self
                .pivots
                .iter()
                .copied()
                .zip(self.basis.iter().cloned())
                .collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[CycloNumber]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let e = self.echelon();
        other.basis.iter().all(|v| e.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut e = self.echelon();
        for v in &other.basis {
            e.insert(v);
        }
        Self::from_echelon(e)
    }

    /// Dimension of the intersection, from `dim(U ∩ W) = dim U + dim W − dim(U + W)`.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[CycloNumber]) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = zero_vector(self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in rebuilt.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient", &self.ambient)
            .field("basis", &self.basis)
            .finish()
    }
}

/// A dense matrix; `get(r, c)` is row `r`, column `c`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycloNumber>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![CycloNumber::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, CycloNumber::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: Vec<Vector>) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycloNumber {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycloNumber) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[CycloNumber] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CycloNumber]) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn row_echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.cols);
        for r in 0..self.rows {
            e.insert(self.row(r));
            if e.rank() == self.cols {
                break;
            }
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().rank()
    }

    pub fn kernel(&self) -> Subspace {
        self.row_echelon().null_space()
    }

    pub fn trace(&self) -> CycloNumber {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut e = Echelon::new(2 * n);
        for r in 0..n {
            let mut row = self.row(r).to_vec();
            row.extend(unit_vector(n, r));
            e.insert(&row);
        }
        if e.pivots() != (0..n).collect::<Vec<_>>() {
            return None;
        }
        let rows = e.rows().map(|row| row[n..].to_vec()).collect();
        Matrix::from_rows(rows).ok()
    }

    /// Some solution of `self · x = b`.
    pub fn solve(&self, b: &[CycloNumber]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut e = Echelon::new(self.cols + 1);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.push(b[r].clone());
            e.insert(&row);
        }
        let mut x = zero_vector(self.cols);
        for (p, row) in &e.rows {
            if *p == self.cols {
                return None;
            }
            x[*p] = row[self.cols].clone();
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vectors()).finish()
    }
}
