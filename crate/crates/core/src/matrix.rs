//! Dense integer matrices, mod-2 matrices, and integer column echelon forms
//! (kernels, spans, exact solves).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// True when every entry is divisible by `m` (`m = 0` means exactly zero).
    pub fn is_zero_mod(&self, m: u64) -> bool {
        if m == 0 {
            return self.is_zero();
        }
        let m = BigInt::from(m);
        self.data.iter().all(|x| x.is_multiple_of(&m))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in IntMatrix::mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn to_f2(&self) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j).is_odd() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Determinant by fraction-free elimination (square matrices only).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

/// Matrix over the field with two elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x & 1 == 1);
            }
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
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

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: bool) {
        self.data[i * self.cols + j] = x;
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        let k = i * self.cols + j;
        self.data[k] = !self.data[k];
    }

    pub fn col(&self, j: usize) -> Vec<bool> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| !x)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in F2Matrix::mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for j in 0..other.cols {
                        if other.get(k, j) {
                            out.flip(i, j);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).filter(|&j| x[j] && self.get(i, j)).count() % 2 == 1)
            .collect()
    }

    /// Row-reduced copy together with the pivot columns.
    fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            let Some(p) = (r..a.rows).find(|&i| a.get(i, c)) else {
                continue;
            };
            for j in 0..a.cols {
                let (x, y) = (a.get(r, j), a.get(p, j));
                a.set(r, j, y);
                a.set(p, j, x);
            }
            for i in 0..a.rows {
                if i != r && a.get(i, c) {
                    for j in 0..a.cols {
                        if a.get(r, j) {
                            a.flip(i, j);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == a.rows {
                break;
            }
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<bool>> {
        let (a, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![false; self.cols];
                v[f] = true;
                for (r, &p) in pivots.iter().enumerate() {
                    if a.get(r, f) {
                        v[p] = true;
                    }
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn column_space(&self) -> Vec<Vec<bool>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    /// Whether `v` lies in the column space.
    pub fn in_column_space(&self, v: &[bool]) -> bool {
        let mut aug = self.clone();
        aug = aug.hstack_col(v);
        aug.rank() == self.rank()
    }

    fn hstack_col(&self, v: &[bool]) -> F2Matrix {
        assert_eq!(v.len(), self.rows);
        let mut out = F2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            out.set(i, self.cols, v[i]);
        }
        out
    }
}

/// Why a linear system `A x = b` has no integer solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveFailure {
    /// The pivot at `row` does not divide the residual there.
    Indivisible { row: usize, pivot: BigInt, residual: BigInt },
    /// A row without a pivot has a nonzero residual (no rational solution).
    Inconsistent { row: usize, residual: BigInt },
}

/// Integer column echelon form `A·V = H` computed by unimodular column
/// operations. Each leading column of `H` has a positive pivot whose row is
/// strictly increasing; the remaining columns are zero, so the matching
/// columns of `V` span the kernel.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    nrows: usize,
    ncols: usize,
    h: Vec<Vec<BigInt>>,
    v: Option<Vec<Vec<BigInt>>>,
    pivot_rows: Vec<usize>,
}

impl ColumnEchelon {
    pub fn of_matrix(a: &IntMatrix, track: bool) -> Self {
        Self::from_columns(a.rows(), a.columns(), track)
    }

    pub fn from_columns(nrows: usize, cols: Vec<Vec<BigInt>>, track: bool) -> Self {
        let ncols = cols.len();
        let mut h = cols;
        let mut v = track.then(|| {
            (0..ncols)
                .map(|j| {
                    let mut c = vec![BigInt::zero(); ncols];
                    c[j] = BigInt::one();
                    c
                })
                .collect::<Vec<_>>()
        });
        let mut pivot_rows = Vec::new();
        let mut pc = 0;
        for r in 0..nrows {
            if pc == ncols {
                break;
            }
            loop {
                let best = (pc..ncols)
                    .filter(|&c| !h[c][r].is_zero())
                    .min_by(|&a, &b| h[a][r].magnitude().cmp(h[b][r].magnitude()).then(a.cmp(&b)));
                let Some(best) = best else { break };
                h.swap(pc, best);
                if let Some(v) = v.as_mut() {
                    v.swap(pc, best);
                }
                let mut cleared = true;
                for c in pc + 1..ncols {
                    if h[c][r].is_zero() {
                        continue;
                    }
                    let q = h[c][r].div_floor(&h[pc][r]);
                    let (lo, hi) = h.split_at_mut(c);
                    axpy(&mut hi[0][r..], &q, &lo[pc][r..]);
                    if let Some(v) = v.as_mut() {
                        let (lo, hi) = v.split_at_mut(c);
                        axpy(&mut hi[0], &q, &lo[pc]);
                    }
                    if !h[c][r].is_zero() {
                        cleared = false;
                    }
                }
                if cleared {
                    if h[pc][r].is_negative() {
                        for x in h[pc][r..].iter_mut() {
                            *x = -&*x;
                        }
                        if let Some(v) = v.as_mut() {
                            for x in v[pc].iter_mut() {
                                *x = -&*x;
                            }
                        }
                    }
                    pivot_rows.push(r);
                    pc += 1;
                    break;
                }
            }
        }
        ColumnEchelon {
            nrows,
            ncols,
            h,
            v,
            pivot_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// ℤ-basis of the column span (the nonzero echelon columns).
    pub fn span_basis(&self) -> Vec<Vec<BigInt>> {
        self.h[..self.rank()].to_vec()
    }

    /// ℤ-basis of `{x : A x = 0}`; requires tracking.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let v = self.v.as_ref().expect("kernel needs tracked transforms");
        v[self.rank()..].to_vec()
    }

    /// Echelon coordinates `z` with `H z = b`, or the failing row.
    pub fn solve_echelon(&self, b: &[BigInt]) -> Result<Vec<BigInt>, SolveFailure> {
        assert_eq!(b.len(), self.nrows);
        let k = self.rank();
        let mut z = vec![BigInt::zero(); k];
        let mut next = 0;
        for r in 0..self.nrows {
            let upto = if next < k && self.pivot_rows[next] == r { next + 1 } else { next };
            let mut s = b[r].clone();
            for (c, zc) in z.iter().enumerate().take(next) {
                if !zc.is_zero() && !self.h[c][r].is_zero() {
                    s -= &self.h[c][r] * zc;
                }
            }
            if upto > next {
                let p = &self.h[next][r];
                let (q, rem) = s.div_rem(p);
                if !rem.is_zero() {
                    return Err(SolveFailure::Indivisible {
                        row: r,
                        pivot: p.clone(),
                        residual: s,
                    });
                }
                z[next] = q;
                next = upto;
            } else if !s.is_zero() {
                return Err(SolveFailure::Inconsistent { row: r, residual: s });
            }
        }
        Ok(z)
    }

    /// Some integer `x` with `A x = b`; requires tracking.
    pub fn solve(&self, b: &[BigInt]) -> Result<Vec<BigInt>, SolveFailure> {
        let z = self.solve_echelon(b)?;
        let v = self.v.as_ref().expect("solve needs tracked transforms");
        let mut x = vec![BigInt::zero(); self.ncols];
        for (c, zc) in z.iter().enumerate() {
            if zc.is_zero() {
                continue;
            }
            for (xi, vi) in x.iter_mut().zip(&v[c]) {
                if !vi.is_zero() {
                    *xi += vi * zc;
                }
            }
        }
        Ok(x)
    }

    /// A rational row vector `y` with `yᵀA` integral and `yᵀb ∉ ℤ`, built
    /// from the failure of [`ColumnEchelon::solve_echelon`]. `None` when the
    /// system is solvable.
    pub fn dual_certificate(&self, b: &[BigInt]) -> Option<Vec<BigRational>> {
        let failure = self.solve_echelon(b).err()?;
        let row = match &failure {
            SolveFailure::Indivisible { row, .. } | SolveFailure::Inconsistent { row, .. } => *row,
        };
        let used = self.pivot_rows.iter().take_while(|&&p| p < row).count();
        let rat = |x: &BigInt| BigRational::from_integer(x.clone());
        // Lower-triangular block T[i][j] = h[j][p_i].
        let t = |i: usize, j: usize| rat(&self.h[j][self.pivot_rows[i]]);
        let mut y = vec![BigRational::zero(); self.nrows];
        match failure {
            SolveFailure::Indivisible { .. } => {
                // yᵀT = e_c with c the failing pivot index
                let c = used;
                let mut coef = vec![BigRational::zero(); c + 1];
                coef[c] = BigRational::one() / t(c, c);
                for i in (0..c).rev() {
                    let s: BigRational = (i + 1..=c).map(|l| &coef[l] * t(l, i)).sum();
                    coef[i] = -s / t(i, i);
                }
                for (i, cf) in coef.into_iter().enumerate() {
                    y[self.pivot_rows[i]] = cf;
                }
            }
            SolveFailure::Inconsistent { residual, .. } => {
                // y'ᵀT = (row entries of H), y = (e_row - y') / (2·residual)
                let mut coef = vec![BigRational::zero(); used];
                for i in (0..used).rev() {
                    let s: BigRational = (i + 1..used).map(|l| &coef[l] * t(l, i)).sum();
                    coef[i] = (rat(&self.h[i][row]) - s) / t(i, i);
                }
                let scale = BigRational::from_integer(BigInt::from(2) * residual);
                y[row] = BigRational::one() / &scale;
                for (i, cf) in coef.into_iter().enumerate() {
                    y[self.pivot_rows[i]] = -cf / &scale;
                }
            }
        }
        Some(y)
    }
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// Kernel of `A` (columns form a ℤ-basis).
pub fn kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    ColumnEchelon::of_matrix(a, true).kernel_basis()
}

/// ℤ-basis of the lattice spanned by `gens` in `ℤ^dim`.
pub fn span_basis(dim: usize, gens: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    ColumnEchelon::from_columns(dim, gens, false).span_basis()
}

/// Whether `x` lies in the ℤ-span of `gens`.
pub fn lattice_contains(dim: usize, gens: &[Vec<BigInt>], x: &[BigInt]) -> bool {
    ColumnEchelon::from_columns(dim, gens.to_vec(), false)
        .solve_echelon(x)
        .is_ok()
}
