//! Residue-class invariants of primes and the sets S(L~, T').
//!
//! For an odd prime p coprime to disc(R), whether the p-scaled
//! discriminant form of a rank-2 lattice T' matches the negated quotient
//! form of an overlattice depends only on the tuple
//! tau(p) = (p mod 8, Legendre symbols (p/l)) over the prime divisors l
//! of disc(R). So each comparison is settled by testing one
//! representative prime per tau class, and the answer set converts into
//! explicit residue classes modulo b_R.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::binlat::BinaryEvenLattice;
use crate::dynkin::DynkinType;
use crate::error::{Error, Result};
use crate::fqf::{self, FiniteQuadraticForm};

/// One component per prime divisor of disc(R), in increasing prime
/// order: the residue mod 8 for l = 2, the Legendre symbol for odd l.
pub type TauClass = Vec<i64>;

/// A subset of the full product T(R) of tau components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauClassSet {
    /// sorted prime divisors of disc(R) indexing the components
    pub primes: Vec<u64>,
    pub classes: BTreeSet<TauClass>,
}

impl TauClassSet {
    pub fn empty(primes: Vec<u64>) -> Self {
        TauClassSet {
            primes,
            classes: BTreeSet::new(),
        }
    }

    pub fn full_size(&self) -> u64 {
        self.primes
            .iter()
            .map(|&l| if l == 2 { 4u64 } else { 2u64 })
            .product()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Whether the set is a product of per-prime component sets.
    pub fn is_product(&self) -> bool {
        if self.classes.is_empty() {
            return true;
        }
        let projections = self.projections();
        let product_size: usize = projections.iter().map(|s| s.len().max(1)).product();
        product_size == self.classes.len()
    }

    /// Per-component projections.
    pub fn projections(&self) -> Vec<BTreeSet<i64>> {
        let mut out = vec![BTreeSet::new(); self.primes.len()];
        for c in &self.classes {
            for (i, &v) in c.iter().enumerate() {
                out[i].insert(v);
            }
        }
        out
    }
}

/// Deterministic primality by trial division; the primes here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Sorted prime divisors of n.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Legendre symbol (a/l) for an odd prime l, by the Euler criterion.
pub fn legendre(a: i64, l: u64) -> i64 {
    debug_assert!(l > 2 && is_prime(l));
    let a = a.rem_euclid(l as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = a % l;
    let mut exp = (l - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % l;
        }
        base = base * base % l;
        exp >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// tau invariant of p with respect to the prime divisors of disc(R).
pub fn tau(p: u64, ty: &DynkinType) -> Result<TauClass> {
    tau_for_divisors(p, &prime_divisors(ty.disc()))
}

pub fn tau_for_divisors(p: u64, divisors: &[u64]) -> Result<TauClass> {
    if p == 2 || !is_prime(p) || divisors.contains(&p) {
        return Err(Error::Parse(format!(
            "tau needs an odd prime coprime to the discriminant, got {}",
            p
        )));
    }
    Ok(divisors
        .iter()
        .map(|&l| {
            if l == 2 {
                (p % 8) as i64
            } else {
                legendre(p as i64, l)
            }
        })
        .collect())
}

/// Every class in the full product T(R).
pub fn all_classes(divisors: &[u64]) -> Vec<TauClass> {
    let mut out: Vec<TauClass> = vec![Vec::new()];
    for &l in divisors {
        let choices: Vec<i64> = if l == 2 { vec![1, 3, 5, 7] } else { vec![1, -1] };
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for base in &out {
            for &c in &choices {
                let mut v = base.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The smallest odd prime not dividing disc(R) in each tau class.
/// Dirichlet guarantees the map is total; the cap keeps failure explicit.
pub fn representative_primes(ty: &DynkinType) -> Result<BTreeMap<TauClass, u64>> {
    let disc = ty.disc();
    debug_assert!(disc > 1);
    let divisors = prime_divisors(disc);
    let targets = all_classes(&divisors);
    let (b_r, _) = modulus(ty);
    let cap = 50 * b_r * b_r;
    let mut found: BTreeMap<TauClass, u64> = BTreeMap::new();
    let mut p = 3u64;
    while found.len() < targets.len() {
        if p > cap {
            return Err(Error::PrimeSearchCap { cap, modulus: b_r });
        }
        if is_prime(p) && disc % p != 0 {
            let t = tau_for_divisors(p, &divisors)?;
            found.entry(t).or_insert(p);
        }
        p += 2;
    }
    Ok(found)
}

/// (b_R, a_R): a_R is the product of the odd prime divisors of disc(R);
/// b_R = 8 a_R when disc(R) is even, a_R otherwise.
pub fn modulus(ty: &DynkinType) -> (u64, u64) {
    let disc = ty.disc();
    let a_r: u64 = prime_divisors(disc).iter().filter(|&&l| l != 2).product();
    let b_r = if disc % 2 == 0 { 8 * a_r } else { a_r };
    (b_r, a_r)
}

/// The set S(L~, T') of tau classes where (D_{T'}, p q_{T'}) matches the
/// target (D_{L~}, -q_{L~}), computed via one representative prime per
/// class. A group mismatch short-circuits to the empty set.
pub fn compute_s(
    target: &FiniteQuadraticForm,
    t_prime: &BinaryEvenLattice,
    ty: &DynkinType,
) -> Result<TauClassSet> {
    let divisors = prime_divisors(ty.disc());
    let tp_form = t_prime.disc_form();
    let mut out = TauClassSet::empty(divisors.clone());
    if tp_form.invariant_factors() != target.invariant_factors() {
        return Ok(out);
    }
    let reps = representative_primes(ty)?;
    for (class, &p) in &reps {
        let scaled = tp_form.scale(p as i64)?;
        if fqf::is_isomorphic(&scaled, target)?.is_some() {
            out.classes.insert(class.clone());
        }
    }
    // the verdict only depends on the components at primes dividing the
    // target order, so each result must factor as a product set and be
    // full at the other primes
    if !out.is_empty() {
        if !out.is_product() {
            return Err(Error::Parse(
                "internal invariant violated: S(L~,T') is not a product set".into(),
            ));
        }
        let d = target.group_order();
        for (i, &l) in divisors.iter().enumerate() {
            if d % l != 0 {
                let proj = &out.projections()[i];
                let full = if l == 2 { 4 } else { 2 };
                if proj.len() != full {
                    return Err(Error::Parse(format!(
                        "internal invariant violated: component at {} not full",
                        l
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Union of tau-class sets over the same T(R).
pub fn union_s(parts: &[TauClassSet]) -> TauClassSet {
    let mut iter = parts.iter();
    let first = iter.next().expect("at least one part");
    let mut out = first.clone();
    for p in iter {
        assert_eq!(p.primes, out.primes, "parts over different T(R)");
        out.classes.extend(p.classes.iter().cloned());
    }
    out
}

/// Convert a tau-class set into residue classes: b_R and the units
/// u mod b_R whose induced class lies in the set.
pub fn sigma_r(s: &TauClassSet, ty: &DynkinType) -> (u64, Vec<u64>) {
    let (b_r, _) = modulus(ty);
    let mut sigma = Vec::new();
    for u in 1..b_r.max(2) {
        if gcd(u, b_r) != 1 {
            continue;
        }
        let class: TauClass = s
            .primes
            .iter()
            .map(|&l| {
                if l == 2 {
                    (u % 8) as i64
                } else {
                    // Legendre component of a unit residue: whether u mod l
                    // is a nonzero square mod l
                    legendre(u as i64, l)
                }
            })
            .collect();
        if s.classes.contains(&class) {
            sigma.push(u);
        }
    }
    (b_r, sigma)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// |S| / |T(R)| as an exact rational.
pub fn density(s: &TauClassSet) -> BigRational {
    BigRational::new(
        BigInt::from(s.classes.len() as u64),
        BigInt::from(s.full_size()),
    )
}

/// Membership test for an odd prime p coprime to disc(R).
pub fn is_ss_prime(p: u64, sigma: &[u64], b_r: u64) -> bool {
    sigma.contains(&(p % b_r))
}

/// All supersingular primes up to n, by a sieve filtered through Sigma_R.
pub fn primes_up_to(sigma: &[u64], b_r: u64, n: u64) -> Vec<u64> {
    let sigma_set: BTreeSet<u64> = sigma.iter().copied().collect();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut sieve = vec![true; (n + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2u64;
    while i * i <= n {
        if sieve[i as usize] {
            let mut j = i * i;
            while j <= n {
                sieve[j as usize] = false;
                j += i;
            }
        }
        i += 1;
    }
    for p in 3..=n {
        if p % 2 == 1 && sieve[p as usize] && sigma_set.contains(&(p % b_r)) {
            out.push(p);
        }
    }
    out
}
