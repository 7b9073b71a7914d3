//! Exact integer linear algebra.
//!
//! Everything here works on arbitrary-precision integers. The normal forms
//! are computed with plain elementary row/column operations, picking the
//! smallest-magnitude pivot at each step; this is deterministic and keeps
//! the transforms reasonably small for the matrix sizes this crate sees.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;
/// Exact rational number.
pub type Rat = BigRational;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Builds a matrix from row-major data.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Int>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of anything convertible to [`Int`].
    ///
    /// `cols` is only consulted when `rows` is empty.
    pub fn from_rows<T: Clone + Into<Int>>(rows: &[Vec<T>], cols: usize) -> Self {
        let cols = rows.first().map_or(cols, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Int>], rows: usize) -> Self {
        let rows = columns.first().map_or(rows, Vec::len);
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// True if every off-diagonal entry is zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += k * row[src]`
    fn add_row_multiple(&mut self, target: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            if !v.is_zero() {
                self.data[target * self.cols + j] += v;
            }
        }
    }

    /// `col[target] += k * col[src]`
    fn add_col_multiple(&mut self, target: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            if !v.is_zero() {
                self.data[i * self.cols + target] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Determinant by Bareiss fraction-free elimination. Panics on non-square input.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Int::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = Int::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Rank over the rationals, by fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut prev = Int::one();
        for c in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            for i in rank + 1..a.rows {
                for j in c + 1..a.cols {
                    let v = &a[(i, j)] * &a[(rank, c)] - &a[(i, c)] * &a[(rank, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, c)] = Int::zero();
            }
            prev = a[(rank, c)].clone();
            rank += 1;
        }
        rank
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Gcd of all entries; zero for an all-zero (or empty) vector.
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides out the content. Zero vectors are returned unchanged.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn to_int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Smith normal form data: `left * m * right` is diagonal with `diag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Diagonal entries, `min(rows, cols)` of them: invariant factors, then zeros.
    pub diag: Vec<Int>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// The diagonal matrix `left * m * right` of the original shape.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Invariant factors strictly greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diag.iter().filter(|x| **x > Int::one()).cloned().collect()
    }
}

/// Position of the smallest nonzero entry of `a` in the block `[t.., t..]`.
fn smallest_in_block(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let n = rows.min(cols);
    let mut rank = 0;

    for t in 0..n {
        let Some((pi, pj)) = smallest_in_block(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            // Bring the smallest nonzero entry of row t / column t to the pivot.
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
            } else if best.1 != t {
                a.swap_cols(t, best.1);
                right.swap_cols(t, best.1);
            }

            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column are clear; enforce divisibility of the rest.
            let p = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p))
            });
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &Int::one());
                    left.add_row_multiple(t, i, &Int::one());
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        rank += 1;
    }

    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    SnfResult {
        diag,
        left,
        right,
        rank,
    }
}

/// Column-style Hermite normal form `h = m * u` with `u` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, column)` of each pivot, in increasing order.
    pub pivots: Vec<(usize, usize)>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Lower-triangular column echelon form of the column lattice of `m`.
///
/// Pivots are positive and every entry to the left of a pivot lies in
/// `[0, pivot)`, which makes `h` unique for the lattice spanned by the
/// columns of `m`.
pub fn hermite_normal_form(m: &IntMatrix) -> HermiteForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivots = Vec::new();
    let mut k = 0;

    for i in 0..rows {
        if k == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in k..cols {
                if !h[(i, j)].is_zero() && best.is_none_or(|b| h[(i, j)].abs() < h[(i, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(k, b);
            u.swap_cols(k, b);
            let mut clear = true;
            for j in k + 1..cols {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, j)] / &h[(i, k)]);
                h.add_col_multiple(j, k, &q);
                u.add_col_multiple(j, k, &q);
                clear &= h[(i, j)].is_zero();
            }
            if clear {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        let p = h[(i, k)].clone();
        for j in 0..k {
            let q = -h[(i, j)].div_floor(&p);
            h.add_col_multiple(j, k, &q);
            u.add_col_multiple(j, k, &q);
        }
        pivots.push((i, k));
        k += 1;
    }
    HermiteForm { h, u, pivots }
}

/// Lattice basis of `{x in Z^cols : m x = 0}`, canonicalized by HNF.
///
/// The basis is saturated: it spans the full kernel lattice, not a
/// finite-index sublattice.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<Int>> {
    let hf = hermite_normal_form(m);
    let r = hf.rank();
    let kernel: Vec<Vec<Int>> = (r..m.cols()).map(|j| hf.u.column(j)).collect();
    if kernel.is_empty() {
        return kernel;
    }
    canonical_lattice_basis(&kernel, m.cols())
}

/// HNF-canonical basis of the lattice spanned by `vectors` (zero vectors dropped).
pub fn canonical_lattice_basis(vectors: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    let hf = hermite_normal_form(&IntMatrix::from_columns(vectors, dim));
    (0..hf.rank()).map(|j| hf.h.column(j)).collect()
}

/// Some integer solution of `m x = b`, or `None` when there is none.
pub fn solve_integer_linear(m: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(m.rows(), b.len(), "right-hand side has wrong length");
    let hf = hermite_normal_form(m);
    let mut y = vec![Int::zero(); m.cols()];
    let mut next_pivot = hf.pivots.iter().peekable();
    let mut solved_cols = 0;
    for (i, bi) in b.iter().enumerate() {
        let mut s = bi.clone();
        for (j, yj) in y.iter().enumerate().take(solved_cols) {
            s -= &hf.h[(i, j)] * yj;
        }
        match next_pivot.peek() {
            Some(&&(pi, pj)) if pi == i => {
                let (q, r) = s.div_rem(&hf.h[(i, pj)]);
                if !r.is_zero() {
                    return None;
                }
                y[pj] = q;
                solved_cols = pj + 1;
                next_pivot.next();
            }
            _ => {
                if !s.is_zero() {
                    return None;
                }
            }
        }
    }
    let x = hf.u.mul_vec(&y);
    debug_assert_eq!(m.mul_vec(&x), b);
    Some(x)
}

/// Rational solution of a square nonsingular system, via Cramer-free elimination.
pub fn solve_rational(m: &IntMatrix, b: &[Int]) -> Option<Vec<Rat>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = m.row(i).iter().cloned().map(Rat::from_integer).collect();
            row.push(Rat::from_integer(b[i].clone()));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let v = &f * &a[c][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(&v, 0)
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        to_int_vec(v)
    }

    fn check_snf(m: &IntMatrix, snf: &SnfResult) {
        assert_eq!(snf.left.mul(m).mul(&snf.right), snf.diagonal_matrix());
        assert!(snf.left.determinant().abs().is_one());
        assert!(snf.right.determinant().abs().is_one());
        for w in snf.diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken: {:?}", snf.diag);
            } else {
                assert!(w[1].is_zero());
            }
        }
        assert!(snf.diag.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn snf_of_printed_q2_matrix() {
        let m = mat(&[
            &[1, 0, 2, 0, 0, 0],
            &[1, 0, 0, 2, 0, 0],
            &[1, 0, 0, 0, 2, 0],
            &[1, 0, 0, 0, 0, 2],
            &[0, 1, 2, 0, 0, 0],
            &[0, 1, 0, 2, 0, 0],
            &[0, 1, 0, 0, 2, 0],
            &[0, 1, 0, 0, 0, 2],
        ]);
        let snf = smith_normal_form(&m);
        check_snf(&m, &snf);
        assert_eq!(snf.diag, ints(&[1, 1, 2, 2, 2, 0]));
        assert_eq!(snf.rank, 5);
    }

    #[test]
    fn snf_small_cases() {
        let id = IntMatrix::identity(4);
        assert_eq!(smith_normal_form(&id).diag, ints(&[1, 1, 1, 1]));
        let d = mat(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&d);
        check_snf(&d, &snf);
        assert_eq!(snf.diag, ints(&[1, 6]));
        let empty = IntMatrix::zeros(0, 3);
        let snf = smith_normal_form(&empty);
        assert!(snf.diag.is_empty());
        assert_eq!(snf.rank, 0);
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        let hf = hermite_normal_form(&id);
        assert_eq!(hf.h, id);
        assert_eq!(hf.u, id);

        let row = mat(&[&[2, 4, 6]]);
        let hf = hermite_normal_form(&row);
        assert_eq!(hf.h, mat(&[&[2, 0, 0]]));
        assert_eq!(row.mul(&hf.u), hf.h);

        let m = mat(&[&[1, 2], &[3, 4]]);
        let hf = hermite_normal_form(&m);
        assert_eq!(m.mul(&hf.u), hf.h);
        assert!(hf.h[(0, 1)].is_zero());
        assert_eq!(hf.h.determinant().abs(), Int::from(2));
        assert_eq!(hf.h, mat(&[&[1, 0], &[1, 2]]));
    }

    #[test]
    fn kernel_examples() {
        let k = integer_kernel_basis(&mat(&[&[1, 1, 1]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot(&v[..], &ints(&[1, 1, 1])).is_zero());
        }
        // (1,-1,0) and (0,1,-1) span the same lattice
        let basis = IntMatrix::from_columns(&k, 3);
        assert!(solve_integer_linear(&basis, &ints(&[1, -1, 0])).is_some());
        assert!(solve_integer_linear(&basis, &ints(&[0, 1, -1])).is_some());

        // unit square, vertex order (0,0),(1,0),(0,1),(1,1), plus the ones row
        let sq = mat(&[&[0, 1, 0, 1], &[0, 0, 1, 1], &[1, 1, 1, 1]]);
        let k = integer_kernel_basis(&sq);
        assert_eq!(k.len(), 1);
        assert_eq!(primitive(&k[0]).iter().map(|x| x.abs()).collect::<Vec<_>>(), ints(&[1, 1, 1, 1]));
        assert!(k[0] == ints(&[1, -1, -1, 1]) || k[0] == ints(&[-1, 1, 1, -1]));

        // triangle: affinely independent, trivial kernel
        let tri = mat(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert!(integer_kernel_basis(&tri).is_empty());
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of (2 2) is spanned by (1,-1), not (2,-2)
        let k = integer_kernel_basis(&mat(&[&[2, 2]]));
        assert_eq!(k.len(), 1);
        assert_eq!(content(&k[0]), Int::one());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_integer_linear(&mat(&[&[2]]), &ints(&[3])), None);
        let id = IntMatrix::identity(3);
        assert_eq!(solve_integer_linear(&id, &ints(&[4, -1, 7])), Some(ints(&[4, -1, 7])));
        // the facet system of P_{1,1,1} in homogeneous coordinates (x1,x2,x3,x0)
        let facets = mat(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[1, -1, -1, 1],
            &[-1, 1, -1, 1],
            &[-1, -1, 1, 1],
        ]);
        let y = solve_integer_linear(&facets, &ints(&[1; 6])).unwrap();
        assert_eq!(y, ints(&[1, 1, 1, 2]));
        // inconsistent system
        let m = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve_integer_linear(&m, &ints(&[1, 2])), None);
    }

    #[test]
    fn determinant_and_rank() {
        let m = mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        assert_eq!(m.determinant(), Int::from(2 + (1 - 3)));
        assert_eq!(m.rank(), 2);
        assert_eq!(IntMatrix::identity(5).rank(), 5);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
    }

    /// Exact rational Gaussian elimination, independent of the HNF machinery.
    fn rational_membership(basis: &[Vec<Int>], x: &[Int]) -> Option<Vec<Rat>> {
        let n = x.len();
        let k = basis.len();
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r: Vec<Rat> = basis.iter().map(|b| Rat::from_integer(b[i].clone())).collect();
                r.push(Rat::from_integer(x[i].clone()));
                r
            })
            .collect();
        let mut row = 0;
        let mut pivcols = vec![];
        for c in 0..k {
            let Some(p) = (row..n).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(row, p);
            let piv = a[row][c].clone();
            for v in a[row].iter_mut() {
                *v /= &piv;
            }
            for i in 0..n {
                if i != row && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..=k {
                        let t = &f * &a[row][j];
                        a[i][j] -= t;
                    }
                }
            }
            pivcols.push(c);
            row += 1;
        }
        if (row..n).any(|i| !a[i][k].is_zero()) {
            return None;
        }
        let mut sol = vec![Rat::zero(); k];
        for (r, &c) in pivcols.iter().enumerate() {
            sol[c] = a[r][k].clone();
        }
        Some(sol)
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c)
                .prop_map(move |v| IntMatrix::from_vec(r, c, to_int_vec(&v)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn snf_reconstructs(m in small_matrix()) {
            let snf = smith_normal_form(&m);
            check_snf(&m, &snf);
            prop_assert_eq!(snf.rank, m.rank());
        }

        #[test]
        fn hnf_idempotent(m in small_matrix()) {
            let hf = hermite_normal_form(&m);
            prop_assert_eq!(m.mul(&hf.u), hf.h.clone());
            prop_assert!(hf.u.determinant().abs().is_one());
            prop_assert_eq!(hermite_normal_form(&hf.h).h, hf.h);
        }

        #[test]
        fn kernel_contains_small_solutions(m in small_matrix()) {
            let basis = integer_kernel_basis(&m);
            for v in &basis {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(basis.len(), m.cols() - m.rank());
            // brute force every kernel vector with entries in [-3, 3] (capped at 4 columns)
            if m.cols() <= 4 {
                let n = m.cols();
                let total = 7usize.pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let x: Vec<Int> = (0..n).map(|_| { let d = (c % 7) as i64 - 3; c /= 7; Int::from(d) }).collect();
                    if !m.mul_vec(&x).iter().all(Zero::is_zero) {
                        continue;
                    }
                    let coeffs = rational_membership(&basis, &x);
                    prop_assert!(coeffs.is_some());
                    prop_assert!(coeffs.unwrap().iter().all(|q| q.is_integer()));
                }
            }
        }

        #[test]
        fn solve_agrees_with_substitution(m in small_matrix(), seed in proptest::collection::vec(-3i64..=3, 6)) {
            let x0: Vec<Int> = to_int_vec(&seed[..m.cols()]);
            let b = m.mul_vec(&x0);
            let x = solve_integer_linear(&m, &b);
            prop_assert!(x.is_some());
            prop_assert_eq!(m.mul_vec(&x.unwrap()), b);
        }
    }
}
