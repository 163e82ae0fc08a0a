//! Smith normal form with unimodular transforms, smallest-pivot strategy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// `U·M·V = diag(d₁, d₂, …)` with `d₁ | d₂ | …`, nonnegative entries and
/// zeros last. `diag` has length `min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    u_inv: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    rows: usize,
    cols: usize,
}

fn ident(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q·row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        let (src, dst) = pair(&mut self.a, t, i);
        sub_mul(dst, src, q);
        if let Some(u) = self.u.as_mut() {
            let (src, dst) = pair(u, t, i);
            sub_mul(dst, src, q);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            // inverse operation on columns: col_t += q·col_i
            for row in ui.iter_mut() {
                if !row[i].is_zero() {
                    let add = &row[i] * q;
                    row[t] += add;
                }
            }
        }
    }

    /// col_j -= q·col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        for row in self.a.iter_mut() {
            if !row[t].is_zero() {
                let s = &row[t] * q;
                row[j] -= s;
            }
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                if !row[t].is_zero() {
                    let s = &row[t] * q;
                    row[j] -= s;
                }
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for row in ui.iter_mut() {
                row[t] = -&row[t];
            }
        }
    }

    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].magnitude() <= x.magnitude() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) -> Vec<BigInt> {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.smallest(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_floor(&self.a[t][t]);
                        self.row_sub(i, t, &q);
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_floor(&self.a[t][t]);
                        self.col_sub(j, t, &q);
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if !clean {
                    // move the smallest remainder in row/column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.magnitude() < self.a[best.0][best.1].magnitude() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.magnitude() < self.a[best.0][best.1].magnitude() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                // divisibility: pull a non-multiple into row t
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p))
                });
                match bad {
                    Some(i) => {
                        // row_t += row_i
                        self.row_sub(t, i, &-BigInt::one());
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
        (0..n).map(|i| self.a[i][i].clone()).collect()
    }
}

fn pair<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = v.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn sub_mul(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= s * q;
        }
    }
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows.len(), cols);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        a: to_rows(m),
        u: Some(ident(r)),
        u_inv: Some(ident(r)),
        v: Some(ident(c)),
        rows: r,
        cols: c,
    };
    let diag = w.run();
    SnfResult {
        diag,
        u: from_rows(w.u.take().unwrap(), r),
        u_inv: from_rows(w.u_inv.take().unwrap(), r),
        v: from_rows(w.v.take().unwrap(), c),
    }
}

/// Diagonal only, skipping transform bookkeeping.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut w = Work {
        a: to_rows(m),
        u: None,
        u_inv: None,
        v: None,
        rows: m.rows(),
        cols: m.cols(),
    };
    w.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        let d = s.u.mul(m).mul(&s.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(d.get(i, j), &expect);
            }
        }
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        for w in s.diag.windows(2) {
            assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        s
    }

    #[test]
    fn diagonal_input_passes_through() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]);
        let s = check(&m);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn rank_one_example() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![4, 8]]);
        assert_eq!(check(&m).diag, vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zeros(2, 3);
        let s = check(&m);
        assert!(s.diag.iter().all(Zero::is_zero));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn needs_divisibility_fix() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&m).diag, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(invariant_factors(&m), vec![BigInt::from(1), BigInt::from(6)]);
    }
}
