//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! kernels, cokernel invariants and saturated orthogonal complements.
//!
//! All entries are arbitrary-precision integers; intermediate values in a
//! Smith reduction can exceed any fixed width even for small inputs.

use num::{BigInt, Integer, One, Signed, Zero};
use std::fmt;

/// Dense rectangular matrix over the integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
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

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_bigint_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        let data = rows.iter().flatten().cloned().collect();
        IntMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<i64>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        assert!(cols.iter().all(|v| v.len() == r), "ragged columns");
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, BigInt::from(*x));
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

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
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

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i)).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// row[target] += c * row[src]
    fn add_row_multiple(&mut self, target: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(target, j) + c * self.get(src, j);
            self.set(target, j, v);
        }
    }

    /// col[target] += c * col[src]
    fn add_col_multiple(&mut self, target: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, target) + c * self.get(i, src);
            self.set(i, target, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith reduction: `u * a * v = s` with `u`, `v` unimodular and
/// `s` diagonal with a nonnegative divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form. Pivots are chosen as the smallest nonzero entry in
/// absolute value, ties broken in row-major order, so the transforms are
/// reproducible across runs.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let n = a.rows().min(a.cols());

    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = select_pivot(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        // Clear row and column t; a reduction step can reintroduce nonzero
        // entries in the other direction, so loop until both are clean.
        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..s.rows() {
                if !s.get(i, t).is_zero() {
                    let q = s.get(i, t).div_floor(s.get(t, t));
                    s.add_row_multiple(i, t, &-q.clone());
                    u.add_row_multiple(i, t, &-q);
                    if !s.get(i, t).is_zero() {
                        // remainder became the new smaller pivot
                        s.swap_rows(t, i);
                        u.swap_rows(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..s.cols() {
                if !s.get(t, j).is_zero() {
                    let q = s.get(t, j).div_floor(s.get(t, t));
                    s.add_col_multiple(j, t, &-q.clone());
                    v.add_col_multiple(j, t, &-q);
                    if !s.get(t, j).is_zero() {
                        s.swap_cols(t, j);
                        v.swap_cols(t, j);
                        clean = false;
                    }
                }
            }
        }
        t += 1;
    }

    // Enforce the divisibility chain d_1 | d_2 | ...
    loop {
        let mut dirty = false;
        for i in 0..n.saturating_sub(1) {
            let a_i = s.get(i, i).clone();
            let b = s.get(i + 1, i + 1).clone();
            if a_i.is_zero() && b.is_zero() {
                continue;
            }
            if a_i.is_zero() || (!b.is_zero() && !(&b % &a_i).is_zero()) {
                // Fold the next factor into column i and re-reduce the block.
                s.add_col_multiple(i, i + 1, &BigInt::one());
                v.add_col_multiple(i, i + 1, &BigInt::one());
                reduce_block(&mut s, &mut u, &mut v, i);
                dirty = true;
            }
        }
        if !dirty {
            break;
        }
    }

    for i in 0..n {
        if s.get(i, i).is_negative() {
            s.negate_row(i);
            u.negate_row(i);
        }
    }

    SmithDecomposition { u, s, v }
}

fn select_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs = BigInt::zero();
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.is_none() || a < best_abs {
                best = Some((i, j));
                best_abs = a;
            }
        }
    }
    best
}

/// Re-runs two-sided elimination starting at diagonal position `t`, used by
/// the divisibility fix-up.
fn reduce_block(s: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, t: usize) {
    let n = s.rows().min(s.cols());
    let mut k = t;
    while k < n {
        let Some((pi, pj)) = select_pivot(s, k) else {
            break;
        };
        s.swap_rows(k, pi);
        u.swap_rows(k, pi);
        s.swap_cols(k, pj);
        v.swap_cols(k, pj);
        if s.get(k, k).is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
        let mut clean = false;
        while !clean {
            clean = true;
            for i in k + 1..s.rows() {
                if !s.get(i, k).is_zero() {
                    let q = s.get(i, k).div_floor(s.get(k, k));
                    s.add_row_multiple(i, k, &-q.clone());
                    u.add_row_multiple(i, k, &-q);
                    if !s.get(i, k).is_zero() {
                        s.swap_rows(k, i);
                        u.swap_rows(k, i);
                        clean = false;
                    }
                }
            }
            for j in k + 1..s.cols() {
                if !s.get(k, j).is_zero() {
                    let q = s.get(k, j).div_floor(s.get(k, k));
                    s.add_col_multiple(j, k, &-q.clone());
                    v.add_col_multiple(j, k, &-q);
                    if !s.get(k, j).is_zero() {
                        s.swap_cols(k, j);
                        v.swap_cols(k, j);
                        clean = false;
                    }
                }
            }
        }
        k += 1;
    }
}

/// Canonical row Hermite form of the span of the given rows. Pivots are
/// positive, entries above a pivot are reduced into `[0, pivot)`, zero rows
/// are dropped.
pub fn hermite_basis(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| !r.iter().all(|x| x.is_zero())).collect();
    assert!(m.iter().all(|r| r.len() == cols), "ragged rows");
    let mut r = 0;
    for c in 0..cols {
        // gcd-reduce column c among rows r..
        loop {
            let mut min_idx = None;
            let mut min_abs = BigInt::zero();
            for (i, row) in m.iter().enumerate().skip(r) {
                if row[c].is_zero() {
                    continue;
                }
                let a = row[c].abs();
                if min_idx.is_none() || a < min_abs {
                    min_idx = Some(i);
                    min_abs = a;
                }
            }
            let Some(p) = min_idx else { break };
            m.swap(r, p);
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    for j in 0..cols {
                        let v = &m[i][j] - &q * &m[r][j];
                        m[i][j] = v;
                    }
                    if !m[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let v = &m[i][j] - &q * &m[r][j];
                        m[i][j] = v;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// A sublattice of `Z^ambient`, stored as a canonical Hermite basis with
/// rows sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Sublattice {
    pub fn from_rows(ambient: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ambient), "vector length mismatch");
        let mut basis = hermite_basis(rows);
        basis.sort();
        Sublattice { ambient, basis }
    }

    pub fn from_i64_rows(ambient: usize, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(ambient, rows)
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice { ambient, basis: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ambient];
                v[i] = BigInt::one();
                v
            })
            .collect();
        Self::from_rows(ambient, rows)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Integer membership test against the Hermite basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut w: Vec<BigInt> = v.to_vec();
        // Basis rows are Hermite-reduced: each has a pivot column where all
        // later rows vanish, so forward substitution decides membership.
        let mut rows: Vec<&Vec<BigInt>> = self.basis.iter().collect();
        rows.sort_by_key(|r| r.iter().position(|x| !x.is_zero()).unwrap_or(self.ambient));
        for row in rows {
            let Some(c) = row.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            if w[c].is_zero() {
                continue;
            }
            let (q, rem) = w[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return false;
            }
            for j in 0..self.ambient {
                let x = &w[j] - &q * &row[j];
                w[j] = x;
            }
        }
        w.iter().all(|x| x.is_zero())
    }
}

/// Primitive basis of the integer kernel `{x : a x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> Sublattice {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    // a = u^-1 s v^-1, so a x = 0 iff the first `rank` coordinates of v^-1 x
    // vanish; the kernel is spanned by the trailing columns of v.
    let rows: Vec<Vec<BigInt>> = (rank..a.cols())
        .map(|j| (0..a.cols()).map(|i| snf.v.get(i, j).clone()).collect())
        .collect();
    Sublattice::from_rows(a.cols(), rows)
}

/// Presentation of the cokernel `Z^rows / im(a)` as a sum of finite cyclic
/// groups and a free part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelInvariants {
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

pub fn cokernel_invariants(a: &IntMatrix) -> CokernelInvariants {
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    let torsion = factors.iter().filter(|f| !f.is_one()).cloned().collect();
    CokernelInvariants {
        torsion,
        free_rank: a.rows() - factors.len(),
    }
}

/// Saturated lattice of vectors pairing to zero with everything in `l`.
pub fn orthogonal_complement(l: &Sublattice) -> Sublattice {
    if l.rank() == 0 {
        return Sublattice::full(l.ambient_rank());
    }
    let m = IntMatrix::from_bigint_rows(l.basis());
    kernel_basis(&m)
}

/// Solves `a x = b` over the integers, if possible.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "dimension mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let n = a.rows().min(a.cols());
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let s_i = if i < n { snf.s.get(i, i).clone() } else { BigInt::zero() };
        if s_i.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = ci.div_rem(&s_i);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

pub mod ratmat {
    //! Small dense rational matrices for elimination-style subroutines.

    use num::{BigInt, BigRational, One, Zero};

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct RatMatrix {
        pub rows: usize,
        pub cols: usize,
        pub data: Vec<BigRational>,
    }

    impl RatMatrix {
        pub fn zeros(rows: usize, cols: usize) -> Self {
            RatMatrix {
                rows,
                cols,
                data: vec![BigRational::zero(); rows * cols],
            }
        }

        pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
            let r = rows.len();
            let c = rows.first().map_or(0, |v| v.len());
            assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
            let data = rows
                .iter()
                .flatten()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            RatMatrix { rows: r, cols: c, data }
        }

        pub fn from_rational_rows(rows: Vec<Vec<BigRational>>) -> Self {
            let r = rows.len();
            let c = rows.first().map_or(0, |v| v.len());
            assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
            let data = rows.into_iter().flatten().collect();
            RatMatrix { rows: r, cols: c, data }
        }

        pub fn get(&self, i: usize, j: usize) -> &BigRational {
            &self.data[i * self.cols + j]
        }

        pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
            self.data[i * self.cols + j] = v;
        }

        pub fn row(&self, i: usize) -> Vec<BigRational> {
            (0..self.cols).map(|j| self.get(i, j).clone()).collect()
        }

        /// Reduced row echelon form visiting candidate pivot columns in the
        /// given order. Returns the pivot (row, column) pairs.
        pub fn rref_with_column_order(&mut self, order: &[usize]) -> Vec<(usize, usize)> {
            let mut pivots = Vec::new();
            let mut r = 0;
            for &c in order {
                if r >= self.rows {
                    break;
                }
                let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                    continue;
                };
                for j in 0..self.cols {
                    let tmp = self.get(r, j).clone();
                    self.set(r, j, self.get(p, j).clone());
                    self.set(p, j, tmp);
                }
                let inv = self.get(r, c).clone();
                for j in 0..self.cols {
                    let v = self.get(r, j) / &inv;
                    self.set(r, j, v);
                }
                for i in 0..self.rows {
                    if i == r || self.get(i, c).is_zero() {
                        continue;
                    }
                    let f = self.get(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
                pivots.push((r, c));
                r += 1;
            }
            pivots
        }

        pub fn rref(&mut self) -> Vec<(usize, usize)> {
            let order: Vec<usize> = (0..self.cols).collect();
            self.rref_with_column_order(&order)
        }

        pub fn rank(&self) -> usize {
            let mut m = self.clone();
            m.rref().len()
        }

        /// Solves `self * x = b` over the rationals; `None` if inconsistent.
        /// When the solution is not unique the free coordinates are zero.
        pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
            assert_eq!(b.len(), self.rows, "dimension mismatch");
            let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
            for i in 0..self.rows {
                for j in 0..self.cols {
                    aug.set(i, j, self.get(i, j).clone());
                }
                aug.set(i, self.cols, b[i].clone());
            }
            let order: Vec<usize> = (0..self.cols).collect();
            let pivots = aug.rref_with_column_order(&order);
            // Inconsistent iff a pivot appears in the augmented column, i.e.
            // some row is zero on the left with nonzero right-hand side.
            for i in 0..self.rows {
                let lhs_zero = (0..self.cols).all(|j| aug.get(i, j).is_zero());
                if lhs_zero && !aug.get(i, self.cols).is_zero() {
                    return None;
                }
            }
            let mut x = vec![BigRational::zero(); self.cols];
            for &(r, c) in &pivots {
                x[c] = aug.get(r, self.cols).clone();
            }
            Some(x)
        }

        /// Basis of the right kernel.
        pub fn kernel(&self) -> Vec<Vec<BigRational>> {
            let mut m = self.clone();
            let pivots = m.rref();
            let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
            let mut basis = Vec::new();
            for free in 0..self.cols {
                if pivot_cols.contains(&free) {
                    continue;
                }
                let mut v = vec![BigRational::zero(); self.cols];
                v[free] = BigRational::one();
                for &(r, c) in &pivots {
                    v[c] = -m.get(r, free).clone();
                }
                basis.push(v);
            }
            basis
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;
    use proptest::prelude::*;

    fn factors_i64(d: &SmithDecomposition) -> Vec<i64> {
        d.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(2);
        let d = smith_normal_form(&a);
        assert_eq!(d.s, IntMatrix::identity(2));
        assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
    }

    #[test]
    fn snf_diag_2_3_gives_1_6() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let d = smith_normal_form(&a);
        assert_eq!(factors_i64(&d), vec![1, 6]);
        assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
    }

    #[test]
    fn snf_all_ones_row() {
        for n in 2..=4 {
            let a = IntMatrix::from_rows(&[vec![1; n + 1]]);
            let d = smith_normal_form(&a);
            assert_eq!(factors_i64(&d), vec![1]);
            assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
        }
    }

    /// Column matrix of the projective-family ray map: epsilon_i for i <= n,
    /// then -(1,...,1).
    fn projective_ray_map(n: usize) -> IntMatrix {
        let mut cols: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        cols.push(vec![-1; n]);
        IntMatrix::from_cols(&cols)
    }

    #[test]
    fn kernel_of_projective_ray_map_is_all_ones() {
        for n in 2..=4 {
            let a = projective_ray_map(n);
            let k = kernel_basis(&a);
            assert_eq!(k.rank(), 1);
            let ones: Vec<BigInt> = vec![BigInt::one(); n + 1];
            assert_eq!(k.basis()[0], ones);
        }
    }

    #[test]
    fn kernel_of_invertible_matrix_is_empty() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(kernel_basis(&a).rank(), 0);
    }

    #[test]
    fn kernel_of_split_sign_ray_map() {
        // Rays -e_1..-e_r, e_{r+1}..e_n, -(1,..,1): relation has +1 on the
        // first r slots and -1 on the rest. Cross-checked below by scanning
        // the defining equation over a small box.
        for (n, r) in [(3usize, 2usize), (4, 2), (4, 3)] {
            let mut cols: Vec<Vec<i64>> = Vec::new();
            for i in 0..n {
                let mut v = vec![0i64; n];
                v[i] = if i < r { -1 } else { 1 };
                cols.push(v);
            }
            cols.push(vec![-1; n]);
            let a = IntMatrix::from_cols(&cols);
            let k = kernel_basis(&a);
            assert_eq!(k.rank(), 1);
            let mut expected = vec![BigInt::one(); n + 1];
            for e in expected.iter_mut().take(n + 1).skip(r) {
                *e = -BigInt::one();
            }
            assert_eq!(k.basis()[0], expected);

            // brute-force oracle: every small solution lies in the span
            let d = n + 1;
            let mut counter = vec![-2i64; d];
            loop {
                let v: Vec<BigInt> = counter.iter().map(|&x| BigInt::from(x)).collect();
                if a.mul_vec(&v).iter().all(|x| x.is_zero()) {
                    assert!(k.contains(&v));
                }
                let mut idx = 0;
                loop {
                    if idx == d {
                        break;
                    }
                    counter[idx] += 1;
                    if counter[idx] <= 2 {
                        break;
                    }
                    counter[idx] = -2;
                    idx += 1;
                }
                if idx == d {
                    break;
                }
            }
        }
    }

    #[test]
    fn cokernel_of_projective_character_map() {
        for n in 2..=4 {
            // character map M -> Z^{n+1}, mu -> (<mu, k_i>)_i: rows are rays
            let a = projective_ray_map(n).transpose();
            let c = cokernel_invariants(&a);
            assert!(c.torsion.is_empty());
            assert_eq!(c.free_rank, 1);
        }
    }

    #[test]
    fn cokernel_of_zero_map() {
        let a = IntMatrix::zeros(1, 1);
        let c = cokernel_invariants(&a);
        assert!(c.torsion.is_empty());
        assert_eq!(c.free_rank, 1);
    }

    #[test]
    fn complement_of_all_ones_is_sum_zero() {
        for n in 2..=4 {
            let l = Sublattice::from_i64_rows(n + 1, &[vec![1; n + 1]]);
            let c = orthogonal_complement(&l);
            assert_eq!(c.rank(), n);
            for b in c.basis() {
                let s: BigInt = b.iter().sum();
                assert!(s.is_zero());
            }
            // saturation: every small sum-zero vector is an integer combination
            let v: Vec<BigInt> = (0..n + 1)
                .map(|i| if i == 0 { BigInt::from(3) } else if i == 1 { BigInt::from(-3) } else { BigInt::zero() })
                .collect();
            assert!(c.contains(&v));
        }
    }

    #[test]
    fn complement_of_full_lattice_is_zero() {
        let l = Sublattice::full(3);
        assert_eq!(orthogonal_complement(&l).rank(), 0);
    }

    #[test]
    fn complement_of_split_sign_kernel() {
        let l = Sublattice::from_i64_rows(4, &[vec![1, 1, -1, -1]]);
        let c = orthogonal_complement(&l);
        assert_eq!(c.rank(), 3);
        // enumerate small vectors and compare with the pairing condition
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                for x in -1..=1i64 {
                    for y in -1..=1i64 {
                        let v: Vec<BigInt> =
                            [a, b, x, y].iter().map(|&t| BigInt::from(t)).collect();
                        let pair = a + b - x - y;
                        assert_eq!(c.contains(&v), pair == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn integer_solve_roundtrip() {
        let a = IntMatrix::from_rows(&[vec![2, 0, 1], vec![0, 3, 1]]);
        let b: Vec<BigInt> = vec![BigInt::from(3), BigInt::from(4)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let b2: Vec<BigInt> = vec![BigInt::from(1), BigInt::from(1)];
        let x2 = solve(&a, &b2).unwrap();
        assert_eq!(a.mul_vec(&x2), b2);
    }

    #[test]
    fn ratmat_rref_right_to_left_picks_last_pivots() {
        let mut m = ratmat::RatMatrix::from_i64_rows(&[vec![1, 1, 1]]);
        let order = [2usize, 1, 0];
        let pivots = m.rref_with_column_order(&order);
        assert_eq!(pivots, vec![(0, 2)]);
    }

    proptest! {
        #[test]
        fn snf_decomposition_is_exact(rows in 1usize..4, cols in 1usize..4,
                                      seed in proptest::collection::vec(-9i64..=9, 16)) {
            let entries: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[(i * cols + j) % seed.len()]).collect())
                .collect();
            let a = IntMatrix::from_rows(&entries);
            let d = smith_normal_form(&a);
            prop_assert_eq!(d.u.mul(&a).mul(&d.v), d.s.clone());
            prop_assert_eq!(d.u.det().abs(), BigInt::one());
            prop_assert_eq!(d.v.det().abs(), BigInt::one());
            let f = d.invariant_factors();
            for w in f.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            // off-diagonal entries vanish
            for i in 0..rows {
                for j in 0..cols {
                    if i != j {
                        prop_assert!(d.s.get(i, j).is_zero());
                    }
                }
            }
        }

        #[test]
        fn complement_is_involutive(vsel in proptest::collection::vec(-3i64..=3, 8)) {
            let rows = vec![vsel[0..4].to_vec(), vsel[4..8].to_vec()];
            let l = Sublattice::from_i64_rows(4, &rows);
            let c = orthogonal_complement(&l);
            let cc = orthogonal_complement(&c);
            // the double complement is the saturation of l
            prop_assert_eq!(cc.rank() + c.rank(), 4);
            for b in l.basis() {
                prop_assert!(cc.contains(b));
            }
            // complements are saturated, so on them the involution is exact
            prop_assert_eq!(orthogonal_complement(&cc), c.clone());
        }

        #[test]
        fn kernel_vectors_are_in_the_kernel(vsel in proptest::collection::vec(-5i64..=5, 12)) {
            let entries: Vec<Vec<i64>> = (0..3).map(|i| vsel[4 * i..4 * i + 4].to_vec()).collect();
            let a = IntMatrix::from_rows(&entries);
            let k = kernel_basis(&a);
            for b in k.basis() {
                prop_assert!(a.mul_vec(b).iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(k.rank() + smith_normal_form(&a).rank(), 4);
        }
    }
}
