//! Dense exact linear algebra over a [`ScalarDomain`]: row reduction, kernels,
//! inverses and subspaces kept in reduced row echelon form.

use std::fmt;

use crate::scalars::{Scalar, ScalarDomain};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(domain: &ScalarDomain, n: usize) -> Vector {
    vec![domain.zero(); n]
}

pub fn unit_vector(domain: &ScalarDomain, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(domain, n);
    v[i] = domain.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `v += c * w`
pub fn add_scaled(v: &mut [Scalar], c: &Scalar, w: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in v.iter_mut().zip(w) {
        if !b.is_zero() {
            *a += c * b;
        }
    }
}

pub fn scale(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn add(v: &[Scalar], w: &[Scalar]) -> Vector {
    v.iter().zip(w).map(|(a, b)| a + b).collect()
}

pub fn sub(v: &[Scalar], w: &[Scalar]) -> Vector {
    v.iter().zip(w).map(|(a, b)| a - b).collect()
}

pub fn dot(v: &[Scalar], w: &[Scalar]) -> Scalar {
    let mut acc = v[0].domain().zero();
    for (a, b) in v.iter().zip(w) {
        if !a.is_zero() && !b.is_zero() {
            acc += a * b;
        }
    }
    acc
}

/// In-place reduction to reduced row echelon form. Zero rows are dropped and
/// the pivot column of each remaining row is returned.
pub fn rref(rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        let pivot_row: Vector = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -&row[c];
                add_scaled(row, &f, &pivot_row);
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows of length `ncols`.
pub fn kernel(domain: &ScalarDomain, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = zero_vector(domain, ncols);
        v[free] = domain.one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        basis.push(v);
    }
    basis
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    domain: ScalarDomain,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(domain: &ScalarDomain, rows: usize, cols: usize) -> Self {
        Matrix {
            domain: domain.clone(),
            rows,
            cols,
            data: vec![domain.zero(); rows * cols],
        }
    }

    pub fn identity(domain: &ScalarDomain, n: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        for i in 0..n {
            m.set(i, i, domain.one());
        }
        m
    }

    pub fn from_rows(domain: &ScalarDomain, rows: Vec<Vector>) -> Self {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), nrows * cols, "ragged rows");
        Matrix {
            domain: domain.clone(),
            rows: nrows,
            cols,
            data,
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(domain: &ScalarDomain, nrows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(domain, nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.domain, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = zero_vector(&self.domain, self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(&self.domain, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            domain: self.domain.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            domain: self.domain.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            domain: self.domain.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| c * a).collect(),
        }
    }

    /// `self * other - sign * other * self`
    pub fn bracket(&self, other: &Matrix, sign: i64) -> Matrix {
        let ab = self.mul(other);
        let ba = other.mul(self);
        if sign == 1 {
            ab.sub(&ba)
        } else {
            ab.add(&ba)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows();
        rref(&mut rows).len()
    }

    /// Right kernel.
    pub fn kernel(&self) -> Vec<Vector> {
        kernel(&self.domain, &self.rows(), self.cols)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend(unit_vector(&self.domain, n, i));
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(
            &self.domain,
            aug.into_iter().map(|r| r[n..].to_vec()).collect(),
        ))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.rows();
        let mut det = self.domain.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return self.domain.zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            let inv = m[c][c].inv().expect("pivot is nonzero");
            let pivot_row = m[c].clone();
            for row in m.iter_mut().skip(c + 1) {
                if !row[c].is_zero() {
                    let f = -(&row[c] * &inv);
                    add_scaled(row, &f, &pivot_row);
                }
            }
        }
        det
    }

    /// Entries mapped through `f` into another domain.
    pub fn map_entries(
        &self,
        domain: &ScalarDomain,
        mut f: impl FnMut(&Scalar) -> Scalar,
    ) -> Matrix {
        Matrix {
            domain: domain.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.domain, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subspace of `domain^ambient`, stored as a reduced row echelon basis so that
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    domain: ScalarDomain,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(domain: &ScalarDomain, ambient: usize) -> Self {
        Subspace {
            domain: domain.clone(),
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(domain: &ScalarDomain, ambient: usize) -> Self {
        Self::span(
            domain,
            ambient,
            (0..ambient).map(|i| unit_vector(domain, ambient, i)),
        )
    }

    pub fn span(
        domain: &ScalarDomain,
        ambient: usize,
        vectors: impl IntoIterator<Item = Vector>,
    ) -> Self {
        let mut rows: Vec<Vector> = vectors.into_iter().collect();
        for v in &rows {
            assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
        }
        let pivots = rref(&mut rows);
        Subspace {
            domain: domain.clone(),
            ambient,
            basis: rows,
            pivots,
        }
    }

    /// Span of the coordinate vectors with the given indices.
    pub fn coordinate(domain: &ScalarDomain, ambient: usize, indices: &[usize]) -> Self {
        Self::span(
            domain,
            ambient,
            indices.iter().map(|&i| unit_vector(domain, ambient, i)),
        )
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the echelon basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -&r[p];
                add_scaled(&mut r, &f, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = zero_vector(&self.domain, self.ambient);
        for (c, row) in coords.iter().zip(&self.basis) {
            add_scaled(&mut rebuilt, c, row);
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        r = r.iter().map(|x| x * &inv).collect();
        for row in &mut self.basis {
            if !row[p].is_zero() {
                let f = -&row[p];
                add_scaled(row, &f, &r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(v);
        }
        s
    }

    /// `{f : f . x = 0 for all x}` under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        let k = kernel(&self.domain, &self.basis, self.ambient);
        Subspace::span(&self.domain, self.ambient, k)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Image under a linear map.
    pub fn image(&self, map: &Matrix) -> Subspace {
        Subspace::span(
            &self.domain,
            map.nrows(),
            self.basis.iter().map(|v| map.apply(v)),
        )
    }
}

/// Coordinates with respect to an arbitrary (not necessarily echelon) basis.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    domain: ScalarDomain,
    size: usize,
    echelon: Vec<Vector>,
    transform: Vec<Vector>,
    pivots: Vec<usize>,
}

impl BasisSolver {
    /// `None` when the vectors are dependent.
    pub fn new(domain: &ScalarDomain, basis: &[Vector]) -> Option<Self> {
        let m = basis.len();
        let ambient = basis.first().map_or(0, Vec::len);
        let mut aug: Vec<Vector> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut r = b.clone();
                r.extend(unit_vector(domain, m, i));
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < m || pivots.iter().any(|&p| p >= ambient) {
            return None;
        }
        let echelon = aug.iter().map(|r| r[..ambient].to_vec()).collect();
        let transform = aug.iter().map(|r| r[ambient..].to_vec()).collect();
        Some(BasisSolver {
            domain: domain.clone(),
            size: m,
            echelon,
            transform,
            pivots,
        })
    }

    /// Coefficients `c` with `v = sum c_i basis_i`, if `v` lies in the span.
    pub fn solve(&self, v: &[Scalar]) -> Option<Vector> {
        let mut residual = v.to_vec();
        let mut coords = zero_vector(&self.domain, self.size);
        for ((row, t), &p) in self.echelon.iter().zip(&self.transform).zip(&self.pivots) {
            let e = residual[p].clone();
            if e.is_zero() {
                continue;
            }
            add_scaled(&mut residual, &-&e, row);
            add_scaled(&mut coords, &e, t);
        }
        is_zero_vector(&residual).then_some(coords)
    }
}
