//! Finite quadratic forms on finite abelian groups.
//!
//! A form is a map q: D -> Q/2Z on a finite abelian group D whose
//! associated pairing b(x, y) = (q(x+y) - q(x) - q(y))/2 is a symmetric
//! bilinear form with values in Q/Z. We present D by a list of cyclic
//! factor orders (not necessarily a divisor chain, so that e.g. the
//! Z/4 x Z/12 x Z/2 x Z/2 basis of a root-lattice discriminant group keeps
//! its natural coordinates), q by its values on the generators, and b by
//! the generator pairing matrix.
//!
//! Supported operations: evaluation, scaling by units, orthogonal sums,
//! p-primary decomposition, length, isotropic vectors, orthogonal
//! complements and quotients by isotropic subgroups, and exact
//! isomorphism testing with a witness.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{hermite_normal_form, smith_normal_form, IntMatrix};

/// Reduce a rational into [0, m).
fn reduce_mod(x: &BigRational, m: u64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let q = (x / &m).floor();
    x - q * m
}

/// A finite quadratic form (D, q) with a fixed generating decomposition
/// D = prod Z/orders[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    /// q(g_i), canonical representative in [0, 2)
    q: Vec<BigRational>,
    /// b(g_i, g_j), canonical representative in [0, 1), row major k x k
    b: Vec<BigRational>,
}

impl FiniteQuadraticForm {
    /// Trivial form on the trivial group.
    pub fn trivial() -> Self {
        FiniteQuadraticForm {
            orders: Vec::new(),
            q: Vec::new(),
            b: Vec::new(),
        }
    }

    /// Build a form from generator orders, q-values and the b-matrix.
    /// Validates the compatibility conditions between q, b and the orders.
    pub fn new(orders: Vec<u64>, q: Vec<BigRational>, b: Vec<Vec<BigRational>>) -> Result<Self> {
        let k = orders.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("orders/q/b size mismatch".into()));
        }
        if orders.iter().any(|&o| o < 2) {
            return Err(Error::Dimension("cyclic orders must be >= 2".into()));
        }
        let mut qc = Vec::with_capacity(k);
        let mut bc = vec![BigRational::zero(); k * k];
        for i in 0..k {
            qc.push(reduce_mod(&q[i], 2));
            for j in 0..k {
                if b[i][j] != b[j][i] {
                    return Err(Error::Dimension("b must be symmetric".into()));
                }
                bc[i * k + j] = reduce_mod(&b[i][j], 1);
            }
        }
        let f = FiniteQuadraticForm {
            orders,
            q: qc,
            b: bc,
        };
        f.validate()?;
        Ok(f)
    }

    /// Diagonal form: cyclic factors with the given q-values, pairwise
    /// orthogonal generators.
    pub fn from_diag(orders: Vec<u64>, q: Vec<BigRational>) -> Result<Self> {
        let k = orders.len();
        let mut b = vec![vec![BigRational::zero(); k]; k];
        for i in 0..k {
            // b(g, g) = q(g) mod 1
            b[i][i] = reduce_mod(&q[i], 1);
        }
        Self::new(orders, q, b)
    }

    fn validate(&self) -> Result<()> {
        let k = self.orders.len();
        for i in 0..k {
            let o = BigInt::from(self.orders[i]);
            // q(o_i g_i) = o_i^2 q_i must vanish in Q/2Z
            let v = &self.q[i] * BigRational::from_integer(&o * &o);
            if !reduce_mod(&v, 2).is_zero() {
                return Err(Error::Dimension(format!(
                    "q incompatible with order {}",
                    self.orders[i]
                )));
            }
            // q mod 1 agrees with b on the diagonal
            if reduce_mod(&self.q[i], 1) != self.b[i * k + i] {
                return Err(Error::Dimension("q(g) mod 1 != b(g,g)".into()));
            }
            for j in 0..k {
                let v = &self.b[i * k + j] * BigRational::from_integer(o.clone());
                if !reduce_mod(&v, 1).is_zero() {
                    return Err(Error::Dimension("b incompatible with orders".into()));
                }
            }
        }
        Ok(())
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn q_values(&self) -> &[BigRational] {
        &self.q
    }

    pub fn b_entry(&self, i: usize, j: usize) -> &BigRational {
        &self.b[i * self.orders.len() + j]
    }

    /// q(x) in [0, 2).
    pub fn eval_q(&self, x: &[u64]) -> BigRational {
        assert_eq!(x.len(), self.orders.len());
        let k = self.orders.len();
        let mut acc = BigRational::zero();
        for i in 0..k {
            let xi = BigInt::from(x[i] % self.orders[i]);
            if xi.is_zero() {
                continue;
            }
            acc += &self.q[i] * BigRational::from_integer(&xi * &xi);
            for j in i + 1..k {
                let xj = BigInt::from(x[j] % self.orders[j]);
                if xj.is_zero() {
                    continue;
                }
                acc += &self.b[i * k + j] * BigRational::from_integer(BigInt::from(2) * &xi * &xj);
            }
        }
        reduce_mod(&acc, 2)
    }

    /// b(x, y) in [0, 1).
    pub fn eval_b(&self, x: &[u64], y: &[u64]) -> BigRational {
        assert_eq!(x.len(), self.orders.len());
        assert_eq!(y.len(), self.orders.len());
        let k = self.orders.len();
        let mut acc = BigRational::zero();
        for i in 0..k {
            let xi = BigInt::from(x[i] % self.orders[i]);
            if xi.is_zero() {
                continue;
            }
            for j in 0..k {
                let yj = BigInt::from(y[j] % self.orders[j]);
                if yj.is_zero() {
                    continue;
                }
                acc += &self.b[i * k + j] * BigRational::from_integer(&xi * &yj);
            }
        }
        reduce_mod(&acc, 1)
    }

    /// Same group, q and b multiplied by m. Requires gcd(m, |D|) = 1.
    pub fn scale(&self, m: i64) -> Result<FiniteQuadraticForm> {
        let order = self.group_order();
        if order > 0 && BigInt::from(m).gcd(&BigInt::from(order)) != BigInt::one() {
            return Err(Error::DegenerateScaling(m));
        }
        let k = self.orders.len();
        let mr = BigRational::from_integer(BigInt::from(m));
        let q = self.q.iter().map(|v| reduce_mod(&(v * &mr), 2)).collect();
        let mut b = vec![BigRational::zero(); k * k];
        for i in 0..k * k {
            b[i] = reduce_mod(&(&self.b[i] * &mr), 1);
        }
        Ok(FiniteQuadraticForm {
            orders: self.orders.clone(),
            q,
            b,
        })
    }

    /// Orthogonal sum of two forms.
    pub fn direct_sum(&self, other: &FiniteQuadraticForm) -> FiniteQuadraticForm {
        let k1 = self.orders.len();
        let k2 = other.orders.len();
        let k = k1 + k2;
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        let mut q = self.q.clone();
        q.extend_from_slice(&other.q);
        let mut b = vec![BigRational::zero(); k * k];
        for i in 0..k1 {
            for j in 0..k1 {
                b[i * k + j] = self.b[i * k1 + j].clone();
            }
        }
        for i in 0..k2 {
            for j in 0..k2 {
                b[(k1 + i) * k + (k1 + j)] = other.b[i * k2 + j].clone();
            }
        }
        FiniteQuadraticForm { orders, q, b }
    }

    /// The p-primary part as a standalone form.
    pub fn primary_part(&self, p: u64) -> FiniteQuadraticForm {
        let mut orders = Vec::new();
        let mut idx = Vec::new();
        let mut mult = Vec::new();
        for (i, &o) in self.orders.iter().enumerate() {
            let mut pv = 1u64;
            let mut rest = o;
            while rest % p == 0 {
                pv *= p;
                rest /= p;
            }
            if pv > 1 {
                // (o/pv) * g_i generates the p-part of the i-th factor
                orders.push(pv);
                idx.push(i);
                mult.push(o / pv);
            }
        }
        let k = orders.len();
        let mut q = Vec::with_capacity(k);
        let mut b = vec![BigRational::zero(); k * k];
        let kk = self.orders.len();
        for a in 0..k {
            let m = BigInt::from(mult[a]);
            q.push(reduce_mod(
                &(&self.q[idx[a]] * BigRational::from_integer(&m * &m)),
                2,
            ));
            for c in 0..k {
                let m2 = BigInt::from(mult[c]);
                b[a * k + c] = reduce_mod(
                    &(&self.b[idx[a] * kk + idx[c]] * BigRational::from_integer(&m * &m2)),
                    1,
                );
            }
        }
        FiniteQuadraticForm { orders, q, b }
    }

    /// All (p, p-part) pairs over the primes dividing the group order.
    pub fn primary_decomposition(&self) -> Vec<(u64, FiniteQuadraticForm)> {
        let mut primes = Vec::new();
        let mut n = self.group_order();
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                primes.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        primes.sort_unstable();
        primes
            .into_iter()
            .map(|p| (p, self.primary_part(p)))
            .collect()
    }

    /// Minimal number of generators: the maximal p-rank over all primes.
    pub fn length(&self) -> usize {
        let mut per_prime: BTreeMap<u64, usize> = BTreeMap::new();
        for &o in &self.orders {
            let mut n = o;
            let mut p = 2u64;
            while p * p <= n {
                if n % p == 0 {
                    *per_prime.entry(p).or_insert(0) += 1;
                    while n % p == 0 {
                        n /= p;
                    }
                }
                p += 1;
            }
            if n > 1 {
                *per_prime.entry(n).or_insert(0) += 1;
            }
        }
        per_prime.values().copied().max().unwrap_or(0)
    }

    /// Iterate over all group elements in mixed-radix order.
    pub fn elements(&self) -> ElementIter {
        ElementIter {
            orders: self.orders.clone(),
            current: vec![0; self.orders.len()],
            done: false,
        }
    }

    pub fn order_of(&self, x: &[u64]) -> u64 {
        let mut ord = 1u64;
        for (i, &o) in self.orders.iter().enumerate() {
            let xi = x[i] % o;
            let g = xi.gcd(&o);
            ord = ord.lcm(&(o / g));
        }
        ord
    }

    /// All x with q(x) = 0 in Q/2Z, including 0.
    pub fn isotropic_vectors(&self) -> Vec<Vec<u64>> {
        self.elements().filter(|x| self.eval_q(x).is_zero()).collect()
    }

    /// Invariant factors d_1 | d_2 | ... of the underlying group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        if self.orders.is_empty() {
            return Vec::new();
        }
        let k = self.orders.len();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = BigInt::from(self.orders[i]);
        }
        let snf = smith_normal_form(&m);
        let mut out = Vec::new();
        for i in 0..k {
            let d = snf.d[(i, i)].to_u64().expect("invariant factor fits u64");
            if d > 1 {
                out.push(d);
            }
        }
        out
    }

    /// A minimal generating set realizing the invariant factors, as
    /// coordinate vectors. Returned in the same order as
    /// `invariant_factors`.
    pub fn canonical_generators(&self) -> Vec<(u64, Vec<u64>)> {
        if self.orders.is_empty() {
            return Vec::new();
        }
        let k = self.orders.len();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = BigInt::from(self.orders[i]);
        }
        let snf = smith_normal_form(&m);
        let v_inv = snf
            .v
            .to_rational()
            .inverse()
            .expect("unimodular is invertible");
        let mut out = Vec::new();
        for i in 0..k {
            let d = snf.d[(i, i)].to_u64().expect("fits u64");
            if d <= 1 {
                continue;
            }
            let mut coords = vec![0u64; k];
            for j in 0..k {
                let e = v_inv[(i, j)].to_integer();
                let o = BigInt::from(self.orders[j]);
                let r = e.mod_floor(&o).to_u64().unwrap();
                coords[j] = r;
            }
            out.push((d, coords));
        }
        out
    }

    /// The subgroup {x : b(x, y) = 0 for all y in H}.
    pub fn orthogonal_complement(&self, h: &Subgroup) -> Subgroup {
        let k = self.orders.len();
        if k == 0 {
            return Subgroup::from_generators(self, &[]);
        }
        let hgens = h.basis_rows();
        // common denominator of all b-values against the h generators
        let mut t = BigInt::one();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for hg in &hgens {
            let mut row = Vec::with_capacity(k);
            for i in 0..k {
                let mut e = vec![0u64; k];
                e[i] = 1;
                let v = self.eval_b(&e, hg);
                t = t.lcm(v.denom());
                row.push(v);
            }
            rows.push(row);
        }
        let j = rows.len().max(1);
        let mut n = IntMatrix::zeros(j, k);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                n[(r, c)] = (v * BigRational::from_integer(t.clone())).to_integer();
            }
        }
        // kernel of x -> N x mod t
        let snf = smith_normal_form(&n);
        let mut diag = Vec::new();
        for i in 0..k {
            let d = if i < j.min(k) {
                snf.d[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            let ti = if d.is_zero() {
                BigInt::one()
            } else {
                &t / d.gcd(&t)
            };
            diag.push(ti);
        }
        // columns of V * diag(t_i) generate the kernel lattice
        let mut gens = Vec::new();
        for i in 0..k {
            let mut g = vec![0u64; k];
            for r in 0..k {
                let e = &snf.v[(r, i)] * &diag[i];
                let o = BigInt::from(self.orders[r]);
                g[r] = e.mod_floor(&o).to_u64().unwrap();
            }
            gens.push(g);
        }
        Subgroup::from_generators(self, &gens)
    }

    /// Whether q vanishes identically on the subgroup.
    pub fn is_isotropic(&self, h: &Subgroup) -> bool {
        let gens = h.basis_rows();
        for (i, g) in gens.iter().enumerate() {
            if !self.eval_q(g).is_zero() {
                return false;
            }
            for g2 in gens.iter().skip(i + 1) {
                if !self.eval_b(g, g2).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The induced form on H-perp / H for an isotropic subgroup H.
    pub fn quotient_form(&self, h: &Subgroup) -> Result<FiniteQuadraticForm> {
        if !self.is_isotropic(h) {
            return Err(Error::NotIsotropic);
        }
        let k = self.orders.len();
        if k == 0 {
            return Ok(self.clone());
        }
        let hperp = self.orthogonal_complement(h);
        let b_m = hperp.preimage_hnf();
        let b_n = h.preimage_hnf();
        // X = B_N * B_M^{-1}, integral because H is contained in H-perp
        let bm_inv = b_m.to_rational().inverse()?;
        let x_rat = b_n.to_rational().mul(&bm_inv);
        let mut x = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let v = &x_rat[(i, j)];
                assert!(v.is_integer(), "H not contained in H-perp");
                x[(i, j)] = v.to_integer();
            }
        }
        let snf = smith_normal_form(&x);
        let v_inv = snf.v.to_rational().inverse()?;
        let mut orders = Vec::new();
        let mut gens: Vec<Vec<u64>> = Vec::new();
        for i in 0..k {
            let d = snf.d[(i, i)].to_u64().expect("quotient order fits u64");
            if d <= 1 {
                continue;
            }
            // generator = (row i of V^{-1}) * B_M, reduced mod the ambient orders
            let mut g = vec![0u64; k];
            for c in 0..k {
                let mut acc = BigRational::zero();
                for r in 0..k {
                    acc += &v_inv[(i, r)] * BigRational::from_integer(b_m[(r, c)].clone());
                }
                assert!(acc.is_integer());
                let o = BigInt::from(self.orders[c]);
                g[c] = acc.to_integer().mod_floor(&o).to_u64().unwrap();
            }
            orders.push(d);
            gens.push(g);
        }
        let kq = orders.len();
        let mut q = Vec::with_capacity(kq);
        let mut b = vec![vec![BigRational::zero(); kq]; kq];
        for i in 0..kq {
            q.push(self.eval_q(&gens[i]));
            for j in 0..kq {
                b[i][j] = self.eval_b(&gens[i], &gens[j]);
            }
        }
        FiniteQuadraticForm::new(orders, q, b)
    }
}

/// Mixed-radix iterator over group elements.
pub struct ElementIter {
    orders: Vec<u64>,
    current: Vec<u64>,
    done: bool,
}

impl Iterator for ElementIter {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = 0;
        loop {
            if i == self.orders.len() {
                self.done = true;
                break;
            }
            self.current[i] += 1;
            if self.current[i] < self.orders[i] {
                break;
            }
            self.current[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// A subgroup of the group underlying a form, stored as the Hermite
/// normal form of its preimage lattice in Z^k (which contains
/// diag(orders) Z^k). That representation is canonical, so equality and
/// hashing of subgroups are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    /// k x k upper-echelon basis of the preimage lattice, row major
    hnf: Vec<Vec<u64>>,
    orders: Vec<u64>,
}

impl Subgroup {
    pub fn from_generators(form: &FiniteQuadraticForm, gens: &[Vec<u64>]) -> Subgroup {
        let k = form.orders.len();
        if k == 0 {
            return Subgroup {
                hnf: Vec::new(),
                orders: Vec::new(),
            };
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for g in gens {
            assert_eq!(g.len(), k);
            rows.push(g.iter().map(|&x| x as i64).collect());
        }
        for i in 0..k {
            let mut r = vec![0i64; k];
            r[i] = form.orders[i] as i64;
            rows.push(r);
        }
        let m = IntMatrix::from_rows(&rows);
        let h = hermite_normal_form(&m);
        assert_eq!(h.rows(), k, "preimage lattice must have full rank");
        let mut hnf = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                hnf[i][j] = h[(i, j)].to_u64().expect("HNF entry fits u64");
            }
        }
        Subgroup {
            hnf,
            orders: form.orders.clone(),
        }
    }

    pub fn zero(form: &FiniteQuadraticForm) -> Subgroup {
        Subgroup::from_generators(form, &[])
    }

    /// Rows of the canonical basis, reduced into the group.
    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        let k = self.orders.len();
        let mut out = Vec::new();
        for row in &self.hnf {
            let reduced: Vec<u64> = (0..k).map(|j| row[j] % self.orders[j]).collect();
            if reduced.iter().any(|&x| x != 0) {
                out.push(reduced);
            }
        }
        out
    }

    /// The preimage lattice basis as an integer matrix.
    pub fn preimage_hnf(&self) -> IntMatrix {
        let k = self.orders.len();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = BigInt::from(self.hnf[i][j]);
            }
        }
        m
    }

    pub fn order(&self) -> u64 {
        let mut full: u128 = 1;
        for &o in &self.orders {
            full *= o as u128;
        }
        let mut idx: u128 = 1;
        for i in 0..self.hnf.len() {
            idx *= self.hnf[i][i] as u128;
        }
        (full / idx) as u64
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        // solve against the upper-triangular basis, first coordinate down
        let k = self.orders.len();
        let mut v: Vec<i128> = (0..k).map(|i| (x[i] % self.orders[i]) as i128).collect();
        for i in 0..k {
            let piv = self.hnf[i][i] as i128;
            if v[i] % piv != 0 {
                return false;
            }
            let c = v[i] / piv;
            if c != 0 {
                for j in i..k {
                    v[j] -= c * self.hnf[i][j] as i128;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// All elements, by closure over the basis rows.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let k = self.orders.len();
        let zero = vec![0u64; k];
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut queue: VecDeque<Vec<u64>> = VecDeque::new();
        seen.insert(zero.clone());
        queue.push_back(zero);
        let gens = self.basis_rows();
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y: Vec<u64> = (0..k)
                    .map(|i| (x[i] + g[i]) % self.orders[i])
                    .collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Vec<u64>> = seen.into_iter().collect();
        out.sort();
        out
    }
}

/// Exact isomorphism test with witness: images of `f1.canonical_generators()`
/// in the coordinates of `f2`. Fingerprints of the primary parts prune
/// non-isomorphic pairs before the backtracking search runs.
pub fn is_isomorphic(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
) -> Result<Option<Vec<Vec<u64>>>> {
    const BUDGET: u64 = 20_000_000;
    if f1.invariant_factors() != f2.invariant_factors() {
        return Ok(None);
    }
    if f1.orders.is_empty() {
        return Ok(Some(Vec::new()));
    }
    // fingerprint per primary part: multiset of (element order, q-value)
    let parts1 = f1.primary_decomposition();
    let parts2 = f2.primary_decomposition();
    for ((p1, a), (p2, b)) in parts1.iter().zip(parts2.iter()) {
        if p1 != p2 {
            return Ok(None);
        }
        if fingerprint(a) != fingerprint(b) {
            return Ok(None);
        }
    }

    let gens = f1.canonical_generators();
    // candidate images bucketed by (order, q)
    let mut buckets: BTreeMap<(u64, BigRational), Vec<Vec<u64>>> = BTreeMap::new();
    for x in f2.elements() {
        let o = f2.order_of(&x);
        let qv = f2.eval_q(&x);
        buckets.entry((o, qv)).or_default().push(x);
    }
    let mut chosen: Vec<Vec<u64>> = Vec::new();
    let mut nodes = 0u64;
    if search(f1, f2, &gens, 0, &buckets, &mut chosen, &mut nodes)? {
        return Ok(Some(chosen));
    }
    return Ok(None);

    fn search(
        f1: &FiniteQuadraticForm,
        f2: &FiniteQuadraticForm,
        gens: &[(u64, Vec<u64>)],
        i: usize,
        buckets: &BTreeMap<(u64, BigRational), Vec<Vec<u64>>>,
        chosen: &mut Vec<Vec<u64>>,
        nodes: &mut u64,
    ) -> Result<bool> {
        if i == gens.len() {
            // orders multiply to |D|, so matching orders + independence
            // means the images generate; verify subgroup order
            let sub = Subgroup::from_generators(f2, chosen);
            return Ok(sub.order() == f2.group_order());
        }
        let (ord, ref g) = gens[i];
        let qv = f1.eval_q(g);
        let empty = Vec::new();
        let cands = buckets.get(&(ord, qv)).unwrap_or(&empty);
        for cand in cands {
            *nodes += 1;
            if *nodes > BUDGET {
                return Err(Error::Undecided);
            }
            // pairings with previously chosen images must match
            let mut ok = true;
            for (j, prev) in chosen.iter().enumerate() {
                if f2.eval_b(cand, prev) != f1.eval_b(g, &gens[j].1) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            chosen.push(cand.clone());
            if search(f1, f2, gens, i + 1, buckets, chosen, nodes)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

fn fingerprint(f: &FiniteQuadraticForm) -> BTreeMap<(u64, BigRational), usize> {
    let mut m = BTreeMap::new();
    for x in f.elements() {
        let key = (f.order_of(&x), f.eval_q(&x));
        *m.entry(key).or_insert(0) += 1;
    }
    m
}

/// Check a claimed isomorphism witness on every group element.
pub fn verify_isomorphism(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
    witness: &[Vec<u64>],
) -> bool {
    let gens = f1.canonical_generators();
    if gens.len() != witness.len() {
        return false;
    }
    let k2 = f2.num_generators();
    // map an arbitrary element through the witness: express x in terms of
    // the canonical generators by brute force over their spans
    let radices: Vec<u64> = gens.iter().map(|(d, _)| *d).collect();
    let mut coeffs = vec![0u64; radices.len()];
    loop {
        // x = sum coeffs[i] * gen_i in f1; y = sum coeffs[i] * witness_i in f2
        let k1 = f1.num_generators();
        let mut x = vec![0u64; k1];
        let mut y = vec![0u64; k2];
        for (i, &c) in coeffs.iter().enumerate() {
            for (j, xv) in x.iter_mut().enumerate() {
                *xv = (*xv + c * gens[i].1[j]) % f1.orders[j];
            }
            for (j, yv) in y.iter_mut().enumerate() {
                *yv = (*yv + c * witness[i][j]) % f2.orders[j];
            }
        }
        if f1.eval_q(&x) != f2.eval_q(&y) {
            return false;
        }
        // increment
        let mut i = 0;
        loop {
            if i == radices.len() {
                return true;
            }
            coeffs[i] += 1;
            if coeffs[i] < radices[i] {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}
