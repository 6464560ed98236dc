//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here is arbitrary precision: `IntMatrix` holds `BigInt`
//! entries, `RatMatrix` holds exact rationals. No floating point is used
//! anywhere, which is what makes the discriminant-form computations
//! downstream trustworthy. The workhorses are Smith normal form (with
//! unimodular transforms), Hermite normal form, discriminant groups of
//! nondegenerate Gram matrices, and exhaustive short-vector enumeration
//! in positive-definite lattices via exact Fincke-Pohst bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        assert!(r > 0);
        let c = rows[0].len();
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let mut found = None;
                for i in k + 1..n {
                    if !a[i * n + k].is_zero() {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = &num / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        sign * a[(n - 1) * n + (n - 1)].clone()
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense matrix of exact rationals, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert!(self.rows == self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::DegenerateLattice)?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(pivot, j)].clone();
                    a[(pivot, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                    let tmp = inv[(pivot, j)].clone();
                    inv[(pivot, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = tmp;
                }
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= p.clone();
                inv[(col, j)] /= p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let t = &f * &a[(col, j)];
                    a[(r, j)] -= t;
                    let t = &f * &inv[(col, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a Smith normal form computation: `u * m * v = d` with
/// `u`, `v` unimodular and `d` diagonal with a divisibility chain.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form by row/column reduction with smallest-pivot
/// selection to keep intermediate entries small.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // Smallest nonzero entry in the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if a[(i, j)].abs() < a[(bi, bj)].abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => {
                    return finish_snf(a, u, v, t);
                }
            };
            swap_rows(&mut a, &mut u, t, pi);
            swap_cols(&mut a, &mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[(i, t)], &a[(t, t)]);
                if !q.is_zero() {
                    row_axpy(&mut a, &mut u, i, t, &-q);
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[(t, j)], &a[(t, t)]);
                if !q.is_zero() {
                    col_axpy(&mut a, &mut v, j, t, &-q);
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block, or fold in a bad row.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut a, &mut u, t, i, &one);
                }
                None => break,
            }
        }
    }
    finish_snf(a, u, v, n)
}

fn finish_snf(mut a: IntMatrix, mut u: IntMatrix, v: IntMatrix, rank: usize) -> SmithNormalForm {
    for t in 0..rank {
        if a[(t, t)].is_negative() {
            for j in 0..a.cols() {
                let x = -a[(t, j)].clone();
                a[(t, j)] = x;
            }
            for j in 0..u.cols() {
                let x = -u[(t, j)].clone();
                u[(t, j)] = x;
            }
        }
    }
    SmithNormalForm { d: a, u, v }
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..a.cols() {
        let t = a[(r1, j)].clone();
        a[(r1, j)] = a[(r2, j)].clone();
        a[(r2, j)] = t;
    }
    for j in 0..u.cols() {
        let t = u[(r1, j)].clone();
        u[(r1, j)] = u[(r2, j)].clone();
        u[(r2, j)] = t;
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for i in 0..a.rows() {
        let t = a[(i, c1)].clone();
        a[(i, c1)] = a[(i, c2)].clone();
        a[(i, c2)] = t;
    }
    for i in 0..v.rows() {
        let t = v[(i, c1)].clone();
        v[(i, c1)] = v[(i, c2)].clone();
        v[(i, c2)] = t;
    }
}

/// row[i] += q * row[t], mirrored on u.
fn row_axpy(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..a.cols() {
        let add = q * &a[(t, j)];
        a[(i, j)] += add;
    }
    for j in 0..u.cols() {
        let add = q * &u[(t, j)];
        u[(i, j)] += add;
    }
}

/// col[j] += q * col[t], mirrored on v.
fn col_axpy(a: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..a.rows() {
        let add = q * &a[(i, t)];
        a[(i, j)] += add;
    }
    for i in 0..v.rows() {
        let add = q * &v[(i, t)];
        v[(i, j)] += add;
    }
}

/// Rounded division: the quotient nearest to a/b.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if a.is_negative() != b.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Row-style Hermite normal form. Returns the nonzero rows of the
/// canonical upper-echelon basis of the row lattice of `m`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| m[(i, j)].clone()).collect())
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for (i, row) in a.iter().enumerate().skip(pivot_row) {
                if row[col].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if row[col].abs() < a[b][col].abs() {
                            best = Some(i);
                        }
                    }
                }
            }
            let b = match best {
                Some(b) => b,
                None => break,
            };
            a.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[i][col], &a[pivot_row][col]);
                for j in 0..cols {
                    let sub = &q * &a[pivot_row][j];
                    a[i][j] -= sub;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for j in 0..cols {
                let x = -a[pivot_row][j].clone();
                a[pivot_row][j] = x;
            }
        }
        for i in 0..pivot_row {
            let q = a[i][col].div_floor(&a[pivot_row][col]);
            if !q.is_zero() {
                for j in 0..cols {
                    let sub = &q * &a[pivot_row][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    let kept = pivot_row.max(1);
    let mut out = IntMatrix::zeros(kept, cols);
    for i in 0..pivot_row {
        for j in 0..cols {
            out[(i, j)] = a[i][j].clone();
        }
    }
    out
}

/// Discriminant group of a nondegenerate symmetric Gram matrix: the
/// nontrivial invariant factors of the dual quotient, plus generators
/// expressed as rational combinations of the lattice basis (rows of the
/// returned matrix).
pub fn discriminant_group(g: &IntMatrix) -> Result<(Vec<BigInt>, RatMatrix)> {
    assert!(g.is_symmetric(), "Gram matrix must be symmetric");
    if g.det().is_zero() {
        return Err(Error::DegenerateLattice);
    }
    let n = g.rows();
    let snf = smith_normal_form(g);
    let g_inv = g.to_rational().inverse()?;
    let u_inv = snf.u.to_rational().inverse()?;
    // generator i = G^{-1} * (column i of U^{-1}), one per invariant factor > 1
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    for i in 0..n {
        let d = snf.d[(i, i)].clone();
        if d <= BigInt::one() {
            continue;
        }
        let mut col = RatMatrix::zeros(n, 1);
        for r in 0..n {
            col[(r, 0)] = u_inv[(r, i)].clone();
        }
        let gen = g_inv.mul(&col);
        let row: Vec<BigRational> = (0..n).map(|r| gen[(r, 0)].clone()).collect();
        orders.push(d);
        gens.push(row);
    }
    let k = gens.len().max(1);
    let mut gm = RatMatrix::zeros(k, n);
    for (i, row) in gens.iter().enumerate() {
        for j in 0..n {
            gm[(i, j)] = row[j].clone();
        }
    }
    Ok((orders, gm))
}

// The enumeration below runs on Ratio<i128>: exact rational arithmetic
// without heap allocation. The Gram matrices in scope (root lattices of
// rank <= 22, tiny entries) keep every intermediate far below the i128
// range; conversions assert that.
type Rat128 = Ratio<i128>;

fn to_rat128(x: &BigRational) -> Rat128 {
    Ratio::new(
        x.numer().to_i128().expect("numerator fits i128"),
        x.denom().to_i128().expect("denominator fits i128"),
    )
}

fn rat128_to_big(x: &Rat128) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Integer square root by Newton iteration, no floating point.
fn isqrt_i128(n: i128) -> i128 {
    assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let shift = (128 - n.leading_zeros()).div_ceil(2);
    let mut x: i128 = 1 << shift;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    x
}

/// Unit-lower-triangular LDL^T decomposition of a positive definite
/// matrix; errors out if a pivot fails to be positive.
fn ldlt(g: &RatMatrix) -> Result<(Vec<Vec<Rat128>>, Vec<Rat128>)> {
    let n = g.rows();
    let zero = Rat128::new(0, 1);
    let mut l = vec![vec![zero; n]; n];
    let mut d = vec![zero; n];
    for (i, row) in l.iter_mut().enumerate() {
        row[i] = Rat128::new(1, 1);
    }
    for j in 0..n {
        let mut dj = to_rat128(&g[(j, j)]);
        for k in 0..j {
            dj -= l[j][k] * l[j][k] * d[k];
        }
        if dj <= zero {
            return Err(Error::NotPositiveDefinite);
        }
        d[j] = dj;
        for i in j + 1..n {
            let mut x = to_rat128(&g[(i, j)]);
            for k in 0..j {
                x -= l[i][k] * l[j][k] * d[k];
            }
            l[i][j] = x / d[j];
        }
    }
    Ok((l, d))
}

/// Largest integer x with (x + c)^2 <= bound; None if bound < 0.
fn floor_shifted_sqrt(c: Rat128, bound: Rat128) -> Option<i128> {
    let zero = Rat128::new(0, 1);
    if bound < zero {
        return None;
    }
    let num = bound.numer() * bound.denom() * c.denom() * c.denom();
    let root = isqrt_i128(num);
    let denom = bound.denom() * c.denom();
    let approx = (root - c.numer() * bound.denom()).div_euclid(denom);
    let fits = |x: i128| {
        let z = Rat128::from_integer(x) + c;
        z * z <= bound
    };
    let mut x = approx;
    while fits(x + 1) {
        x += 1;
    }
    while !fits(x) {
        x -= 1;
    }
    Some(x)
}

/// Smallest integer x with (x + c)^2 <= bound.
fn ceil_shifted_sqrt(c: Rat128, bound: Rat128) -> Option<i128> {
    floor_shifted_sqrt(-c, bound).map(|x| -x)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    i: usize,
    n: usize,
    l: &[Vec<Rat128>],
    d: &[Rat128],
    offset: &[Rat128],
    bound: Rat128,
    used: Rat128,
    z: &mut Vec<Rat128>,
    v: &mut Vec<i128>,
    out: &mut Vec<(Vec<BigInt>, BigRational)>,
) {
    let mut carry = Rat128::new(0, 1);
    for j in i + 1..n {
        if !l[j][i].numer().is_zero() {
            carry += l[j][i] * z[j];
        }
    }
    // y_i = v_i + offset_i + carry; need d_i * y_i^2 <= bound - used
    let cap = (bound - used) / d[i];
    let c = offset[i] + carry;
    let hi = match floor_shifted_sqrt(c, cap) {
        Some(h) => h,
        None => return,
    };
    let lo = match ceil_shifted_sqrt(c, cap) {
        Some(l) => l,
        None => return,
    };
    for x in lo..=hi {
        let y = Rat128::from_integer(x) + c;
        let new_used = used + y * y * d[i];
        v[i] = x;
        z[i] = Rat128::from_integer(x) + offset[i];
        if i == 0 {
            out.push((
                v.iter().map(|&t| BigInt::from(t)).collect(),
                rat128_to_big(&new_used),
            ));
        } else {
            enumerate_rec(i - 1, n, l, d, offset, bound, new_used, z, v, out);
        }
    }
}

/// Enumerate all integer vectors v with (v + offset)^T G (v + offset) <= bound.
/// Fincke-Pohst recursion with exact rational interval bounds; exhaustive.
fn enumerate_with_offset(
    g: &RatMatrix,
    offset: &[BigRational],
    bound: &BigRational,
) -> Result<Vec<(Vec<BigInt>, BigRational)>> {
    let n = g.rows();
    assert_eq!(offset.len(), n);
    let (l, d) = ldlt(g)?;
    let off128: Vec<Rat128> = offset.iter().map(to_rat128).collect();
    let mut out = Vec::new();
    let mut z = vec![Rat128::new(0, 1); n];
    let mut v = vec![0i128; n];
    enumerate_rec(
        n - 1,
        n,
        &l,
        &d,
        &off128,
        to_rat128(bound),
        Rat128::new(0, 1),
        &mut z,
        &mut v,
        &mut out,
    );
    Ok(out)
}

/// All nonzero integer vectors v with v^T G v <= bound (both signs listed).
pub fn short_vectors(g: &IntMatrix, bound: &BigRational) -> Result<Vec<Vec<BigInt>>> {
    let gr = g.to_rational();
    let zero_off = vec![BigRational::zero(); g.rows()];
    let all = enumerate_with_offset(&gr, &zero_off, bound)?;
    Ok(all
        .into_iter()
        .filter(|(v, _)| v.iter().any(|x| !x.is_zero()))
        .map(|(v, _)| v)
        .collect())
}

/// Minimum of (v + offset)^T G (v + offset) over integer v, provided the
/// minimum is <= cap; `None` means every coset vector exceeds the cap.
pub fn coset_min_norm_bruteforce(
    g: &IntMatrix,
    offset: &[BigRational],
    cap: &BigRational,
) -> Result<Option<BigRational>> {
    let gr = g.to_rational();
    let all = enumerate_with_offset(&gr, offset, cap)?;
    Ok(all.into_iter().map(|(_, norm)| norm).min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cartan_a(l: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(l, l);
        for i in 0..l {
            m[(i, i)] = BigInt::from(2);
            if i + 1 < l {
                m[(i, i + 1)] = BigInt::from(-1);
                m[(i + 1, i)] = BigInt::from(-1);
            }
        }
        m
    }

    fn cartan_d(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(2);
        }
        for i in 0..n - 3 {
            m[(i, i + 1)] = BigInt::from(-1);
            m[(i + 1, i)] = BigInt::from(-1);
        }
        m[(n - 3, n - 2)] = BigInt::from(-1);
        m[(n - 2, n - 3)] = BigInt::from(-1);
        m[(n - 3, n - 1)] = BigInt::from(-1);
        m[(n - 1, n - 3)] = BigInt::from(-1);
        m
    }

    #[test]
    fn snf_already_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_t_plus_gram() {
        let m = IntMatrix::from_rows(&[vec![4, 4], vec![4, -8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d[(0, 0)], BigInt::from(4));
        assert_eq!(snf.d[(1, 1)], BigInt::from(12));
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.det().abs(), BigInt::one());
        assert_eq!(snf.v.det().abs(), BigInt::one());
    }

    #[test]
    fn snf_s_plus_gram() {
        let m = IntMatrix::from_rows(&[vec![2, 6], vec![6, -6]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d[(0, 0)], BigInt::from(2));
        assert_eq!(snf.d[(1, 1)], BigInt::from(24));
    }

    #[test]
    fn disc_group_rank_one() {
        let g = IntMatrix::from_rows(&[vec![-2]]);
        let (orders, gens) = discriminant_group(&g).unwrap();
        assert_eq!(orders, vec![BigInt::from(2)]);
        assert_eq!(gens[(0, 0)].clone().abs(), rat(1, 2));
    }

    #[test]
    fn disc_group_t_plus() {
        let g = IntMatrix::from_rows(&[vec![4, 4], vec![4, -8]]);
        let (orders, gens) = discriminant_group(&g).unwrap();
        assert_eq!(orders, vec![BigInt::from(4), BigInt::from(12)]);
        // each generator times its order lands in the integer lattice
        for (i, ord) in orders.iter().enumerate() {
            for j in 0..2 {
                let scaled = gens[(i, j)].clone() * BigRational::from_integer(ord.clone());
                assert!(scaled.is_integer());
            }
        }
    }

    #[test]
    fn disc_group_a2() {
        let mut g = cartan_a(2);
        for i in 0..2 {
            for j in 0..2 {
                let x = -g[(i, j)].clone();
                g[(i, j)] = x;
            }
        }
        let (orders, _) = discriminant_group(&g).unwrap();
        assert_eq!(orders, vec![BigInt::from(3)]);
    }

    #[test]
    fn disc_group_singular_rejected() {
        let g = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(discriminant_group(&g), Err(Error::DegenerateLattice));
    }

    #[test]
    fn short_vectors_a1() {
        let g = IntMatrix::from_rows(&[vec![2]]);
        let vs = short_vectors(&g, &rat(2, 1)).unwrap();
        assert_eq!(vs.len(), 2);
    }

    #[test]
    fn short_vectors_a2_roots() {
        let g = cartan_a(2);
        let vs = short_vectors(&g, &rat(2, 1)).unwrap();
        assert_eq!(vs.len(), 6);
    }

    #[test]
    fn short_vectors_d4_roots() {
        let g = cartan_d(4);
        let vs = short_vectors(&g, &rat(2, 1)).unwrap();
        assert_eq!(vs.len(), 24);
    }

    #[test]
    fn short_vectors_rejects_indefinite() {
        let g = IntMatrix::from_rows(&[vec![2, 0], vec![0, -2]]);
        assert!(short_vectors(&g, &rat(2, 1)).is_err());
    }

    #[test]
    fn coset_min_zero_offset() {
        let g = cartan_a(2);
        let off = vec![rat(0, 1), rat(0, 1)];
        let m = coset_min_norm_bruteforce(&g, &off, &rat(4, 1)).unwrap();
        assert_eq!(m, Some(rat(0, 1)));
    }

    #[test]
    fn coset_min_a11_glue_three() {
        // glue class 3 of A_11 has minimal norm 3*9/12 = 9/4
        let g = cartan_a(11);
        let ginv = g.to_rational().inverse().unwrap();
        let off: Vec<BigRational> = (0..11)
            .map(|i| ginv[(i, 0)].clone() * BigRational::from_integer(BigInt::from(3)))
            .collect();
        let m = coset_min_norm_bruteforce(&g, &off, &rat(6, 1)).unwrap();
        assert_eq!(m, Some(rat(9, 4)));
    }

    #[test]
    fn coset_min_d7_vector_class() {
        let g = cartan_d(7);
        let ginv = g.to_rational().inverse().unwrap();
        let off: Vec<BigRational> = (0..7).map(|i| ginv[(i, 0)].clone()).collect();
        let m = coset_min_norm_bruteforce(&g, &off, &rat(6, 1)).unwrap();
        assert_eq!(m, Some(rat(1, 1)));
    }

    #[test]
    fn hnf_basic() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![1, 1], vec![0, 2]]);
        let h = hermite_normal_form(&m);
        assert_eq!(h.rows(), 2);
        assert_eq!(h[(0, 0)], BigInt::one());
        assert_eq!(h[(0, 1)], BigInt::one());
        assert_eq!(h[(1, 0)], BigInt::zero());
        assert_eq!(h[(1, 1)], BigInt::from(2));
    }

    /// Naive box-enumeration oracle for short vectors on small ranks.
    fn box_oracle(g: &IntMatrix, bound: i64, radius: i64) -> usize {
        fn walk(
            g: &IntMatrix,
            v: &mut Vec<i64>,
            i: usize,
            radius: i64,
            bound: i64,
            count: &mut usize,
        ) {
            if i == v.len() {
                if v.iter().all(|&x| x == 0) {
                    return;
                }
                let mut norm = BigInt::zero();
                for a in 0..v.len() {
                    for b in 0..v.len() {
                        norm += &g[(a, b)] * BigInt::from(v[a]) * BigInt::from(v[b]);
                    }
                }
                if norm <= BigInt::from(bound) {
                    *count += 1;
                }
                return;
            }
            for x in -radius..=radius {
                v[i] = x;
                walk(g, v, i + 1, radius, bound, count);
            }
        }
        let n = g.rows();
        let mut count = 0usize;
        let mut v = vec![0i64; n];
        walk(g, &mut v, 0, radius, bound, &mut count);
        count
    }

    #[test]
    fn short_vectors_matches_box_oracle() {
        for n in 2..=4 {
            let g = cartan_a(n);
            let vs = short_vectors(&g, &rat(4, 1)).unwrap();
            assert_eq!(vs.len(), box_oracle(&g, 4, 4), "A_{}", n);
            for v in &vs {
                let neg: Vec<BigInt> = v.iter().map(|x| -x.clone()).collect();
                assert!(vs.contains(&neg));
            }
        }
    }

    proptest! {
        #[test]
        fn snf_properties(entries in proptest::collection::vec(-9i64..=9, 9)) {
            let m = IntMatrix::from_rows(&[
                entries[0..3].to_vec(),
                entries[3..6].to_vec(),
                entries[6..9].to_vec(),
            ]);
            let snf = smith_normal_form(&m);
            prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
            prop_assert_eq!(snf.u.det().abs(), BigInt::one());
            prop_assert_eq!(snf.v.det().abs(), BigInt::one());
            let mut prev: Option<BigInt> = None;
            let mut seen_zero = false;
            for i in 0..3 {
                let d = snf.d[(i, i)].clone();
                prop_assert!(!d.is_negative());
                if d.is_zero() {
                    seen_zero = true;
                } else {
                    prop_assert!(!seen_zero, "nonzero after zero on diagonal");
                    if let Some(p) = prev {
                        prop_assert!((&d % &p).is_zero(), "no divisibility chain");
                    }
                    prev = Some(d);
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        prop_assert!(snf.d[(i, j)].is_zero());
                    }
                }
            }
            let mut prod = BigInt::one();
            for i in 0..3 {
                if !snf.d[(i,i)].is_zero() {
                    prod *= snf.d[(i, i)].clone();
                }
            }
            if !m.det().is_zero() {
                prop_assert_eq!(prod, m.det().abs());
            }
        }
    }
}
