//! Dense exact linear algebra over ℚ(i).

use num_integer::Integer;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, Rat};

/// Row-major dense matrix of Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussRat::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<GaussRat>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_cols(cols: &[Vec<GaussRat>]) -> Self {
        Matrix::from_rows(cols).transpose()
    }

    pub fn diagonal(d: &[GaussRat]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussRat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<GaussRat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[GaussRat] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussRat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRat::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
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

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a * b;
                    out.data[i * other.cols + j] += &p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                let mut s = GaussRat::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &GaussRat) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Rank by forward elimination over ℚ(i). Rows start integral and
    /// primitive; reduced entries stay ratios of minors, so sizes grow
    /// polynomially.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<GaussRat>> =
            self.to_rows().into_iter().map(integral_primitive).filter(|r| !is_zero_vec(r)).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            if rows.is_empty() {
                break;
            }
            // Prefer the sparsest row with a nonzero entry in this column.
            let Some(p) = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[c].is_zero())
                .min_by_key(|(_, r)| r.iter().filter(|x| !x.is_zero()).count())
                .map(|(i, _)| i)
            else {
                continue;
            };
            let pivot = rows.swap_remove(p);
            rank += 1;
            let inv = pivot[c].inv().expect("nonzero pivot");
            let mut next = Vec::with_capacity(rows.len());
            for mut r in rows.drain(..) {
                if !r[c].is_zero() {
                    let f = &r[c] * &inv;
                    for (x, y) in r.iter_mut().zip(&pivot).skip(c) {
                        if !y.is_zero() {
                            *x -= &(&f * y);
                        }
                    }
                }
                if !is_zero_vec(&r) {
                    next.push(r);
                }
            }
            rows = next;
        }
        rank
    }

    /// Reduced row echelon form by Gauss–Jordan; returns the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rv = m.get(r, j).clone();
                    if rv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * &rv);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<GaussRat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussRat::zero(); self.cols];
                v[f] = GaussRat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, GaussRat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Flattened entries, used when matrices are treated as vectors.
    pub fn flatten(&self) -> Vec<GaussRat> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<GaussRat>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }
}

fn is_zero_vec(v: &[GaussRat]) -> bool {
    v.iter().all(GaussRat::is_zero)
}

/// Scale a row to Gaussian-integer entries with unit content.
fn integral_primitive(v: Vec<GaussRat>) -> Vec<GaussRat> {
    let mut l = Rat::one();
    for x in &v {
        for part in [&x.re, &x.im] {
            if !part.is_integer() {
                l = Rat::from_bigint(l.numer().lcm(&part.denom()));
            }
        }
    }
    let scaled = if l.is_one() { v } else { v.iter().map(|x| x.scale(&l)).collect() };
    strip_content(scaled)
}

/// Divide an integral row by the gcd of all real and imaginary parts.
fn strip_content(v: Vec<GaussRat>) -> Vec<GaussRat> {
    let mut g = Rat::zero();
    for x in &v {
        g = g.int_gcd(&x.re);
        g = g.int_gcd(&x.im);
        if g.is_one() {
            return v;
        }
    }
    if g.is_zero() {
        return v;
    }
    let inv = g.inv().expect("nonzero content");
    v.iter().map(|x| x.scale(&inv)).collect()
}

/// Rank of a list of vectors.
pub fn rank_of_vectors(vs: &[Vec<GaussRat>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs).rank()
}

/// Left inverse on a set of independent columns of a sample matrix `X`
/// (`n × m`, rank `n`): solves `L X = Y` as `L = Y_sub · X_sub⁻¹`.
#[derive(Clone, Debug)]
pub struct ColumnSolver {
    cols: Vec<usize>,
    inv: Matrix,
}

impl ColumnSolver {
    pub fn new(x: &Matrix) -> Result<Self> {
        let n = x.rows();
        let (_, pivots) = x.rref();
        if pivots.len() < n {
            return Err(Error::SpanDeficiency { rank: pivots.len(), dim: n });
        }
        let cols = pivots;
        let sub = Matrix::from_cols(&cols.iter().map(|&c| x.column(c)).collect::<Vec<_>>());
        let inv = sub.inverse()?;
        Ok(ColumnSolver { cols, inv })
    }

    /// Columns of `X` used by the solve.
    pub fn columns(&self) -> &[usize] {
        &self.cols
    }

    /// `L` with `L x_c = y_c` on the chosen columns; `ys[c]` is the image of sample `c`.
    pub fn solve(&self, ys: &[Vec<GaussRat>]) -> Matrix {
        let y_sub = Matrix::from_cols(&self.cols.iter().map(|&c| ys[c].clone()).collect::<Vec<_>>());
        y_sub.mul(&self.inv)
    }
}

/// Incrementally built echelon basis of a subspace, with sparse rows.
#[derive(Clone, Debug, Default)]
pub struct SpanBuilder {
    len: usize,
    /// (pivot, sparse row normalized to 1 at the pivot), sorted by pivot.
    rows: Vec<(usize, Vec<(usize, GaussRat)>)>,
}

impl SpanBuilder {
    pub fn new(len: usize) -> Self {
        SpanBuilder { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(v.len(), self.len, "vector length");
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v[*p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, x) in row {
                let d = &c * x;
                v[*j] -= &d;
            }
        }
        v
    }

    /// Insert `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &[GaussRat]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero leading entry");
        let row: Vec<(usize, GaussRat)> = r
            .iter()
            .enumerate()
            .skip(p)
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x * &inv))
            .collect();
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, row));
        true
    }

    pub fn contains(&self, v: &[GaussRat]) -> bool {
        is_zero_vec(&self.reduce(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            &rows.iter().map(|r| r.iter().map(|&x| GaussRat::from_int(x)).collect()).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).rank(), 3);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
    }

    #[test]
    fn rank_over_gaussian_rationals() {
        let i = GaussRat::i();
        let half = GaussRat::frac(1, 2);
        // Second row is i/2 times the first.
        let a = Matrix::from_rows(&[vec![GaussRat::one(), i.clone()], vec![&i * &half, -half.clone()]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a.rref().1.len(), 1);
    }

    #[test]
    fn nullspace_and_inverse() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(GaussRat::is_zero));
        let b = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(b.mul(&b.inverse().unwrap()), Matrix::identity(2));
        assert!(a.inverse().is_err());
    }

    #[test]
    fn column_solver_recovers_map() {
        let l = m(&[&[1, 2], &[0, 3]]);
        let x = m(&[&[1, 0, 2], &[1, 1, 5]]);
        let ys: Vec<_> = (0..3).map(|c| l.mul_vec(&x.column(c))).collect();
        let s = ColumnSolver::new(&x).unwrap();
        assert_eq!(s.solve(&ys), l);
        assert!(matches!(ColumnSolver::new(&m(&[&[1, 2], &[2, 4]])), Err(Error::SpanDeficiency { .. })));
    }

    #[test]
    fn span_builder_tracks_dimension() {
        let v = |xs: &[i64]| xs.iter().map(|&x| GaussRat::from_int(x)).collect::<Vec<_>>();
        let mut s = SpanBuilder::new(3);
        assert!(s.insert(&v(&[0, 1, 1])));
        assert!(s.insert(&v(&[1, 1, 0])));
        assert!(!s.insert(&v(&[1, 2, 1])));
        assert!(s.contains(&v(&[2, 3, 1])));
        assert!(!s.contains(&v(&[0, 0, 1])));
        assert_eq!(s.dim(), 2);
    }
}
