//! Exact integer linear algebra: Smith and Hermite normal forms with
//! transformation matrices, integer kernels and linear solving.
//!
//! Everything works over arbitrary-precision integers; there is no
//! fixed-width fast path. All operations are pure and deterministic:
//! pivot selection always takes the first smallest nonzero entry in a
//! row-major scan, so repeated runs on the same input produce the same
//! transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {}x{}={} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Convenience constructor from machine-integer rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(dim: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length mismatch");
            for i in 0..dim {
                m.set(i, j, col[i].clone());
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zero(self.rows, self.cols + other.cols);
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

    /// Submatrix of the listed rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zero(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Submatrix of the listed columns, in order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zero(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rank over the rationals (= number of nonzero Smith invariants).
    pub fn rank(&self) -> usize {
        snf(self).rank
    }

    /// Inverse of a unimodular matrix. Errors if `self` is not square
    /// with determinant +-1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            match solve(self, &e)? {
                Some(x) => cols.push(x),
                None => return Err(Error::Dimension("matrix is not unimodular".into())),
            }
        }
        Ok(IntMatrix::from_cols(n, &cols))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Smith normal form `u * input * v = d` with unimodular `u`, `v`.
///
/// The diagonal of `d` is nonnegative and satisfies the divisibility
/// chain d1 | d2 | ... | d_rank, followed by zeros.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

/// Position of the first entry of smallest nonzero absolute value in the
/// submatrix starting at (t, t), scanning row-major.
fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs: Option<BigInt> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best_abs {
                Some(b) if *b <= a => {}
                _ => {
                    best_abs = Some(a);
                    best = Some((i, j));
                }
            }
        }
    }
    best
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let steps = m.rows().min(m.cols());

    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = smallest_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear row and column t; euclidean steps shrink entries until the
        // pivot divides everything it faces.
        let mut dirty = true;
        while dirty {
            dirty = false;
            let pivot = d.get(t, t).clone();
            for i in (t + 1)..d.rows() {
                let e = d.get(i, t);
                if e.is_zero() {
                    continue;
                }
                let q = -e.div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            let pivot = d.get(t, t).clone();
            for j in (t + 1)..d.cols() {
                let e = d.get(t, j);
                if e.is_zero() {
                    continue;
                }
                let q = -e.div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Entries shrank; re-seat the pivot on the smallest one.
                let (pi, pj) = smallest_pivot(&d, t).expect("pivot vanished");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column are clear. Enforce divisibility against the
            // remaining submatrix.
            let pivot = d.get(t, t).clone();
            'outer: for i in (t + 1)..d.rows() {
                for j in (t + 1)..d.cols() {
                    if !d.get(i, j).mod_floor(&pivot).is_zero() {
                        d.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                        dirty = true;
                        break 'outer;
                    }
                }
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let rank = (0..steps).take_while(|&i| !d.get(i, i).is_zero()).count();
    SnfResult { d, u, v, rank }
}

/// Column-style Hermite normal form: returns `(h, transform)` with
/// `h = m * transform`, `transform` unimodular, and `h` in column echelon
/// form (pivot rows strictly increasing by column, pivots positive,
/// entries left of a pivot reduced into `[0, pivot)`, zero columns last).
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut t = IntMatrix::identity(m.cols());
    let mut cur = 0;

    for row in 0..m.rows() {
        if cur >= h.cols() {
            break;
        }
        loop {
            // Smallest nonzero entry in this row among active columns.
            let mut best: Option<usize> = None;
            let mut best_abs: Option<BigInt> = None;
            for j in cur..h.cols() {
                let e = h.get(row, j);
                if e.is_zero() {
                    continue;
                }
                let a = e.abs();
                match &best_abs {
                    Some(b) if *b <= a => {}
                    _ => {
                        best_abs = Some(a);
                        best = Some(j);
                    }
                }
            }
            let Some(jmin) = best else {
                break;
            };
            h.swap_cols(cur, jmin);
            t.swap_cols(cur, jmin);
            let pivot = h.get(row, cur).clone();
            let mut remaining = false;
            for j in (cur + 1)..h.cols() {
                let e = h.get(row, j);
                if e.is_zero() {
                    continue;
                }
                let q = -e.div_floor(&pivot);
                h.add_col_multiple(j, cur, &q);
                t.add_col_multiple(j, cur, &q);
                if !h.get(row, j).is_zero() {
                    remaining = true;
                }
            }
            if !remaining {
                if h.get(row, cur).is_negative() {
                    h.negate_col(cur);
                    t.negate_col(cur);
                }
                // Reduce earlier pivot columns in this row into [0, pivot).
                let pivot = h.get(row, cur).clone();
                for j in 0..cur {
                    let e = h.get(row, j);
                    if e.is_zero() {
                        continue;
                    }
                    let q = -e.div_floor(&pivot);
                    h.add_col_multiple(j, cur, &q);
                    t.add_col_multiple(j, cur, &q);
                }
                cur += 1;
                break;
            }
        }
    }
    (h, t)
}

/// Solve `m * x = b` over the integers.
///
/// Returns `Ok(None)` when `b` is not in the column lattice of `m`. The
/// solution choice is deterministic: back-substitution through the column
/// Hermite form with free coordinates set to zero.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "solve: target length {} does not match {} rows",
            b.len(),
            m.rows()
        )));
    }
    let (h, t) = hnf(m);
    // Pivot structure of the echelon form.
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prev_row: isize = -1;
    for j in 0..h.cols() {
        let mut pr: Option<usize> = None;
        for i in 0..h.rows() {
            if !h.get(i, j).is_zero() {
                pr = Some(i);
                break;
            }
        }
        match pr {
            Some(r) => {
                debug_assert!(r as isize > prev_row, "echelon form violated");
                prev_row = r as isize;
                pivots.push((r, j));
            }
            None => break, // zero columns are last
        }
    }

    let mut y = vec![BigInt::zero(); h.cols()];
    let mut residual: Vec<BigInt> = b.to_vec();
    for &(r, c) in &pivots {
        let need = residual[r].clone();
        let pivot = h.get(r, c);
        let (q, rem) = need.div_rem(pivot);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[c] = q;
        if !y[c].is_zero() {
            for i in 0..h.rows() {
                let v = &residual[i] - h.get(i, c) * &y[c];
                residual[i] = v;
            }
        }
    }
    if residual.iter().any(|e| !e.is_zero()) {
        return Ok(None);
    }
    Ok(Some(t.mul_vec(&y)))
}

/// Basis of the integer kernel of `m`, as matrix columns.
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    let (h, t) = hnf(m);
    let zero_cols: Vec<usize> = (0..h.cols()).filter(|&j| h.col(j).iter().all(|e| e.is_zero())).collect();
    t.select_cols(&zero_cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let r = snf(m);
        assert_eq!(&r.u.mul(m).mul(&r.v), &r.d, "u*m*v != d");
        // Unimodularity via SNF of the transforms themselves would recurse;
        // a determinant check is enough at these sizes.
        assert!(det(&r.u).abs().is_one());
        assert!(det(&r.v).abs().is_one());
        for i in 0..r.rank.saturating_sub(1) {
            assert!(r.d.get(i + 1, i + 1).mod_floor(r.d.get(i, i)).is_zero(), "divisibility chain");
        }
        r
    }

    fn det(m: &IntMatrix) -> BigInt {
        // Fraction-free Gaussian elimination (Bareiss).
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        let mut a = m.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !a.get(i, k).is_zero());
                match swap {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    #[test]
    fn snf_identity() {
        let r = check_snf(&IntMatrix::identity(2));
        assert_eq!(r.d, IntMatrix::identity(2));
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn snf_diagonal_example() {
        let r = check_snf(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(r.d, IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn snf_gcd_of_minors() {
        // d1 = gcd of entries = 2, d1*d2 = gcd of 2x2 minors = |16-24| = 8.
        let r = check_snf(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(r.d, IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn snf_empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let m = IntMatrix::zero(r, c);
            let res = snf(&m);
            assert_eq!(res.rank, 0);
            assert_eq!(res.d.rows(), r);
            assert_eq!(res.d.cols(), c);
        }
    }

    #[test]
    fn hnf_contract() {
        let m = IntMatrix::from_rows(&[vec![2, -3]]);
        let (h, t) = hnf(&m);
        assert_eq!(h, IntMatrix::from_rows(&[vec![1, 0]]));
        assert_eq!(m.mul(&t), h);

        let id = IntMatrix::identity(3);
        let (h, t) = hnf(&id);
        assert_eq!(h, id);
        assert_eq!(t, id);

        let z = IntMatrix::zero(2, 2);
        let (h, t) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(t, IntMatrix::identity(2));
    }

    #[test]
    fn solve_cases() {
        let id = IntMatrix::identity(3);
        let b: Vec<BigInt> = vec![5.into(), (-7).into(), 0.into()];
        assert_eq!(solve(&id, &b).unwrap().unwrap(), b);

        let m = IntMatrix::from_rows(&[vec![2, -3]]);
        let x = solve(&m, &[BigInt::one()]).unwrap().unwrap();
        assert_eq!(&x[0] * 2 - &x[1] * 3, BigInt::one());

        let m = IntMatrix::from_rows(&[vec![2]]);
        assert!(solve(&m, &[BigInt::one()]).unwrap().is_none());

        let m = IntMatrix::from_rows(&[vec![2, -3]]);
        assert!(matches!(solve(&m, &[BigInt::one(), BigInt::one()]), Err(Error::Dimension(_))));
    }

    #[test]
    fn kernel_basis() {
        let m = IntMatrix::from_rows(&[vec![1, 1, 2]]);
        let k = kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }
}
