//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.
//!
//! The oracles here are deliberately independent of the library paths
//! they check: overlattices are rebuilt from explicit rational bases and
//! their roots recounted by short-vector enumeration; binary form classes
//! are recomputed by a union-find closure over elementary GL_2 moves.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use k3ss::binlat::{self, BinaryForm};
use k3ss::dynkin::{self, DynkinType};
use k3ss::exactlin::{self, IntMatrix};
use k3ss::fqf::{self, FiniteQuadraticForm, Subgroup};
use k3ss::overlat::{self, Budget};
use k3ss::pipeline::{self, AnalyzeOptions, ReportStatus};
use k3ss::primeclass::{self, TauClassSet};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ty(s: &str) -> DynkinType {
    s.parse().unwrap()
}

/// xorshift64 so the "random" samples are reproducible
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

// ---------------------------------------------------------------------
// criterion 1: catalogue counts
// ---------------------------------------------------------------------

#[test]
fn criterion_1_catalogue_counts() {
    let all = dynkin::enumerate_types(20);
    assert_eq!(all.len(), 3058, "rank-20 catalogue size");
    let non_square = all
        .iter()
        .filter(|t| !dynkin::is_perfect_square(t.disc()))
        .count();
    assert_eq!(non_square, 2437, "non-square discriminant count");
    // the CLI agrees
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_k3ss"))
        .args(["list-types", "--rank", "20", "--count-only"])
        .output()
        .expect("binary runs");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3058");
    println!("criterion 1 (catalogue counts 3058 / 2437): PASS");
}

// ---------------------------------------------------------------------
// criterion 2: the worked example, end to end, exact
// ---------------------------------------------------------------------

#[test]
fn criterion_2_worked_example_end_to_end() {
    let t = ty("D7+A11+2A1");
    let f = t.disc_form();

    // discriminant form in the natural basis
    assert_eq!(f.orders(), &[4, 12, 2, 2]);
    let expected = FiniteQuadraticForm::from_diag(
        vec![4, 12, 2, 2],
        vec![rat(-7, 4), rat(-11, 12), rat(-1, 2), rat(-1, 2)],
    )
    .unwrap();
    assert_eq!(f, expected);

    // exactly eight isotropic vectors, the listed ones
    let iso = f.isotropic_vectors();
    assert_eq!(iso.len(), 8);
    let v: Vec<Vec<u64>> = vec![
        vec![0, 0, 0, 0],
        vec![0, 6, 1, 1],
        vec![1, 3, 0, 0],
        vec![1, 9, 0, 0],
        vec![2, 0, 1, 1],
        vec![2, 6, 0, 0],
        vec![3, 3, 0, 0],
        vec![3, 9, 0, 0],
    ];
    for x in &v {
        assert!(iso.contains(x), "missing isotropic vector {:?}", x);
    }

    // totally isotropic subgroups avoiding v_4 are exactly H_0..H_4
    let all_iso_subgroups = isotropic_subgroups(&f);
    let v4 = vec![2u64, 0, 1, 1];
    let avoiding: Vec<&Subgroup> = all_iso_subgroups
        .iter()
        .filter(|h| !h.elements().contains(&v4))
        .collect();
    assert_eq!(avoiding.len(), 5, "H_0 .. H_4");
    let h1 = Subgroup::from_generators(&f, &[vec![0, 6, 1, 1]]);
    let h3 = Subgroup::from_generators(&f, &[vec![1, 3, 0, 0]]);
    let h4 = Subgroup::from_generators(&f, &[vec![1, 9, 0, 0]]);
    for h in [&h1, &h3, &h4] {
        assert!(avoiding.iter().any(|g| g == &h));
    }

    // the length filter keeps the H_1 class (d = 48) and H_3 = H_4 (d = 12)
    let out = overlat::enumerate_admissible(&t, Budget::default()).unwrap();
    assert_eq!(out.status, overlat::SearchStatus::Complete);
    let ds: Vec<u64> = out.quotients.iter().map(|q| q.d).collect();
    assert_eq!(ds, vec![48, 12]);

    // binary classes at the two discriminants
    assert_eq!(binlat::enumerate_classes(48).unwrap().len(), 4);
    assert_eq!(binlat::enumerate_classes(12).unwrap().len(), 2);

    // S_+- carry Z/2 x Z/8 x Z/3 and are rejected by the group pre-check
    let s_plus = binlat::form_to_lattice(BinaryForm::new(1, 6, -3)).unwrap();
    assert_eq!(s_plus.disc_form().invariant_factors(), vec![2, 24]);
    let target_h1 = out.quotients[0].neg_quotient.clone();
    assert_ne!(
        s_plus.disc_form().invariant_factors(),
        target_h1.invariant_factors()
    );

    // disc forms of T_+- are diag[1/4, 5/4] + [2/3] and its negation
    let t_plus = binlat::form_to_lattice(BinaryForm::new(2, 4, -4)).unwrap();
    let t_minus = binlat::form_to_lattice(BinaryForm::new(-2, 4, 4)).unwrap();
    let tp_expected =
        FiniteQuadraticForm::from_diag(vec![4, 4, 3], vec![rat(1, 4), rat(5, 4), rat(2, 3)])
            .unwrap();
    assert!(fqf::is_isomorphic(&t_plus.disc_form(), &tp_expected)
        .unwrap()
        .is_some());
    assert!(fqf::is_isomorphic(
        &t_minus.disc_form(),
        &tp_expected.scale(-1).unwrap()
    )
    .unwrap()
    .is_some());

    // the four K-conditions, verbatim as tau-class sets
    let target_h3 = out.quotients[1].neg_quotient.clone();
    let u_plus = binlat::form_to_lattice(BinaryForm::new(1, 2, -2)).unwrap();
    let u_minus = binlat::form_to_lattice(BinaryForm::new(-1, 2, 2)).unwrap();
    let set = |raw: &[[i64; 2]]| -> TauClassSet {
        TauClassSet {
            primes: vec![2, 3],
            classes: raw.iter().map(|c| c.to_vec()).collect(),
        }
    };
    let k_h1_tp = primeclass::compute_s(&target_h1, &t_plus, &t).unwrap();
    assert_eq!(k_h1_tp, set(&[[3, 1], [7, 1]]), "p mod 8 in 3,7 and (p/3)=1");
    let k_h1_tm = primeclass::compute_s(&target_h1, &t_minus, &t).unwrap();
    assert_eq!(k_h1_tm, set(&[[1, -1], [5, -1]]));
    let k_h3_up = primeclass::compute_s(&target_h3, &u_plus, &t).unwrap();
    assert_eq!(k_h3_up, set(&[[1, -1], [5, -1]]));
    let k_h3_um = primeclass::compute_s(&target_h3, &u_minus, &t).unwrap();
    assert_eq!(k_h3_um, set(&[[3, 1], [7, 1]]));
    // the equalities that make the density work out
    assert_eq!(k_h1_tp, k_h3_um);
    assert_eq!(k_h1_tm, k_h3_up);

    // full pipeline: density 1/2, Sigma_R of size 4 inside (Z/24)^x
    let started = std::time::Instant::now();
    let report = pipeline::analyze(&t, &AnalyzeOptions::default()).unwrap();
    assert_eq!(report.s_r.len(), 4);
    assert_eq!(report.density, rat(1, 2));
    assert_eq!(report.b_r, 24);
    assert_eq!(report.sigma_r.len(), 4);
    assert!(
        started.elapsed().as_secs() < 10,
        "worked example analyzes in under 10 s"
    );
    println!("criterion 2 (worked example end-to-end): PASS");
}

/// All totally isotropic subgroups by closure over isotropic vectors.
fn isotropic_subgroups(f: &FiniteQuadraticForm) -> Vec<Subgroup> {
    let iso = f.isotropic_vectors();
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<Subgroup> = VecDeque::new();
    let zero = Subgroup::zero(f);
    seen.insert(zero.elements());
    queue.push_back(zero.clone());
    out.push(zero);
    while let Some(h) = queue.pop_front() {
        let els = h.elements();
        for v in &iso {
            if els.contains(v) {
                continue;
            }
            let mut gens = h.basis_rows();
            gens.push(v.clone());
            let h2 = Subgroup::from_generators(f, &gens);
            // totally isotropic?
            if !f.is_isotropic(&h2) {
                continue;
            }
            if h2.elements().iter().any(|e| !f.eval_q(e).is_zero()) {
                continue;
            }
            let key = h2.elements();
            if seen.insert(key) {
                queue.push_back(h2.clone());
                out.push(h2);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------
// criterion 3: overlattice oracle agreement on every type of rank <= 8
// ---------------------------------------------------------------------

/// Quotient classes from first principles: explicit overlattice bases,
/// short-vector root counts, discriminant groups of the new Gram.
fn oracle_quotient_classes(t: &DynkinType) -> Vec<(u64, FiniteQuadraticForm)> {
    let gram = t.gram();
    let n = gram.rows();
    let (orders, gens) = exactlin::discriminant_group(&gram).unwrap();
    let derived = binlat::form_from_gram(&gram, &orders, &gens);
    let subgroups = isotropic_subgroups(&derived);
    let mut classes: Vec<(u64, FiniteQuadraticForm)> = Vec::new();
    for h in &subgroups {
        // overlattice basis: lattice basis plus lifts of subgroup elements
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for i in 0..n {
            let mut r = vec![BigRational::zero(); n];
            r[i] = BigRational::one();
            rows.push(r);
        }
        for el in h.elements() {
            let mut r = vec![BigRational::zero(); n];
            for (gi, &coeff) in el.iter().enumerate() {
                if coeff == 0 {
                    continue;
                }
                for (j, slot) in r.iter_mut().enumerate() {
                    *slot +=
                        gens[(gi, j)].clone() * BigRational::from_integer(BigInt::from(coeff));
                }
            }
            rows.push(r);
        }
        // common denominator, integer HNF, rational basis back
        let mut den = BigInt::one();
        for r in &rows {
            for x in r {
                den = num_integer::lcm(den.clone(), x.denom().clone());
            }
        }
        let mut int_rows = IntMatrix::zeros(rows.len(), n);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                let v = x * BigRational::from_integer(den.clone());
                assert!(v.is_integer());
                int_rows[(i, j)] = v.to_integer();
            }
        }
        let hnf = exactlin::hermite_normal_form(&int_rows);
        assert_eq!(hnf.rows(), n, "overlattice basis has full rank");
        // Gram of the overlattice: (H/den) G (H/den)^T
        let mut new_gram = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for a in 0..n {
                    for b in 0..n {
                        acc += BigRational::from_integer(
                            hnf[(i, a)].clone() * gram[(a, b)].clone() * hnf[(j, b)].clone(),
                        );
                    }
                }
                acc /= BigRational::from_integer(den.clone() * den.clone());
                assert!(acc.is_integer(), "overlattice pairing must be integral");
                new_gram[(i, j)] = acc.to_integer();
            }
        }
        for i in 0..n {
            assert!(
                (&new_gram[(i, i)] % BigInt::from(2)).is_zero(),
                "overlattice must stay even"
            );
        }
        // root preservation by explicit short-vector count
        let mut pos = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                pos[(i, j)] = -new_gram[(i, j)].clone();
            }
        }
        let roots = exactlin::short_vectors(&pos, &rat(2, 1)).unwrap().len() as u64;
        if roots != t.root_count() {
            continue;
        }
        // quotient data from the overlattice Gram
        let quotient = match exactlin::discriminant_group(&new_gram) {
            Ok((o, g)) => binlat::form_from_gram(&new_gram, &o, &g),
            Err(_) => continue,
        };
        if quotient.length() > 2 {
            continue;
        }
        let d = quotient.group_order();
        let neg = quotient.scale(-1).unwrap();
        if !classes
            .iter()
            .any(|(d0, f0)| *d0 == d && fqf::is_isomorphic(f0, &neg).unwrap().is_some())
        {
            classes.push((d, neg));
        }
    }
    classes
}

#[test]
fn criterion_3_overlattice_oracle_rank_le_8() {
    let mut checked = 0;
    for rank in 1..=8u32 {
        for t in dynkin::enumerate_types(rank) {
            if dynkin::is_perfect_square(t.disc()) {
                // the search refuses square discriminants by contract;
                // compare against the oracle only on its own turf
                continue;
            }
            let ours = overlat::enumerate_admissible(&t, Budget::default()).unwrap();
            assert_eq!(ours.status, overlat::SearchStatus::Complete, "{}", t);
            let oracle = oracle_quotient_classes(&t);
            assert_eq!(
                ours.quotients.len(),
                oracle.len(),
                "class count differs for {}",
                t
            );
            for q in &ours.quotients {
                let hit = oracle.iter().any(|(d, f)| {
                    *d == q.d && fqf::is_isomorphic(f, &q.neg_quotient).unwrap().is_some()
                });
                assert!(hit, "class d={} of {} missing from oracle", q.d, t);
            }
            checked += 1;
        }
    }
    assert!(checked >= 64, "at least 64 types checked, got {}", checked);
    println!(
        "criterion 3 (overlattice oracle, {} types of rank <= 8): PASS",
        checked
    );
}

// ---------------------------------------------------------------------
// criterion 4: binary class oracle for every non-square d <= 200
// ---------------------------------------------------------------------

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// All forms of discriminant d with |a|, |c| <= bound.
fn forms_in_box(d: i64, bound: i64) -> Vec<BinaryForm> {
    let mut out = Vec::new();
    let bmax = ((d + 4 * bound * bound) as f64).sqrt() as i64 + 1;
    let parity = d.rem_euclid(2);
    let mut b = -bmax + ((-bmax).rem_euclid(2) ^ parity.rem_euclid(2)) % 2;
    // fix parity: b = d mod 2
    while (b - d).rem_euclid(2) != 0 {
        b += 1;
    }
    while b <= bmax {
        let n = (b * b - d) / 4;
        if n != 0 {
            let m = n.abs();
            let mut a = 1;
            while a <= bound {
                if m % a == 0 {
                    let c0 = n / a;
                    if c0.abs() <= bound {
                        out.push(BinaryForm::new(a, b, c0));
                        out.push(BinaryForm::new(-a, b, -c0));
                    }
                }
                a += 1;
            }
        }
        b += 2;
    }
    out.sort();
    out.dedup();
    out
}

/// Brute-force GL2 classification of forms with |a|, |c| <= d by closure
/// under elementary transformations inside a universe twice as large.
fn oracle_binary_classes(d: i64) -> Vec<Vec<BinaryForm>> {
    let universe = forms_in_box(d, 2 * d);
    let index: BTreeMap<BinaryForm, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, f)| (*f, i))
        .collect();
    let mut uf = UnionFind::new(universe.len());
    for (i, f) in universe.iter().enumerate() {
        // S: (a,b,c) -> (c,-b,a); det +1
        let s = BinaryForm::new(f.c, -f.b, f.a);
        if let Some(&j) = index.get(&s) {
            uf.union(i, j);
        }
        // T: x -> x + y shear and its inverse; det +1
        let tp = BinaryForm::new(f.a, f.b + 2 * f.a, f.a + f.b + f.c);
        if let Some(&j) = index.get(&tp) {
            uf.union(i, j);
        }
        let tm = BinaryForm::new(f.a, f.b - 2 * f.a, f.a - f.b + f.c);
        if let Some(&j) = index.get(&tm) {
            uf.union(i, j);
        }
        // J: improper reflection
        if let Some(&j) = index.get(&f.mirror()) {
            uf.union(i, j);
        }
    }
    let mut comps: BTreeMap<usize, Vec<BinaryForm>> = BTreeMap::new();
    for (i, f) in universe.iter().enumerate() {
        if f.a.abs() <= d && f.c.abs() <= d {
            comps.entry(uf.find(i)).or_default().push(*f);
        }
    }
    comps.into_values().collect()
}

/// Class id assignment under the implementation: reduce into a cycle and
/// match that cycle to an enumerated representative.
fn implementation_class_of(f: BinaryForm, reps: &[binlat::BinaryEvenLattice]) -> Option<usize> {
    let red = binlat::reduce(f).unwrap();
    for (i, rep) in reps.iter().enumerate() {
        let mut cyc = binlat::cycle(rep.form).unwrap();
        let mirror = binlat::reduce(rep.form.mirror()).unwrap();
        if !cyc.contains(&mirror) {
            cyc.extend(binlat::cycle(mirror).unwrap());
        }
        if cyc.contains(&red) {
            return Some(i);
        }
    }
    None
}

#[test]
fn criterion_4_binary_form_oracle_d_le_200() {
    let mut checked = 0;
    for d in 5..=200i64 {
        let r = (d as f64).sqrt() as i64;
        if (r - 1..=r + 1).any(|x| x * x == d) {
            continue;
        }
        if d.rem_euclid(4) > 1 {
            // no integral forms; the implementation must agree
            assert!(binlat::enumerate_classes(d as u64).unwrap().is_empty());
            continue;
        }
        let reps = binlat::enumerate_classes(d as u64).unwrap();
        let oracle = oracle_binary_classes(d);
        assert_eq!(
            reps.len(),
            oracle.len(),
            "class count differs at d = {}",
            d
        );
        // membership agreement: forms in the same oracle component map to
        // the same representative, different components to different ones
        let mut seen_rep: HashSet<usize> = HashSet::new();
        for comp in &oracle {
            let ids: HashSet<usize> = comp
                .iter()
                .map(|f| implementation_class_of(*f, &reps).expect("every form classifies"))
                .collect();
            assert_eq!(ids.len(), 1, "oracle component split at d = {}", d);
            let id = *ids.iter().next().unwrap();
            assert!(seen_rep.insert(id), "two components merged at d = {}", d);
        }
        checked += 1;
    }
    assert!(checked >= 80, "checked {} discriminants", checked);
    println!(
        "criterion 4 (binary form oracle, {} discriminants <= 200): PASS",
        checked
    );
}

// ---------------------------------------------------------------------
// criterion 5: the p-scaling identity for rank-2 lattices
// ---------------------------------------------------------------------

#[test]
fn criterion_5_p_scaling_identity() {
    let mut rng = Rng(0x5eed_1234_5678_9abc);
    let mut done = 0;
    while done < 100 {
        let a = rng.range(-8, 8);
        let b = rng.range(-8, 8);
        let c = rng.range(-8, 8);
        if a == 0 || c == 0 {
            continue;
        }
        let f = BinaryForm::new(a, b, c);
        let disc = f.discriminant();
        if disc <= 0 {
            continue;
        }
        let r = (disc as f64).sqrt() as i64;
        if (r - 1..=r + 1).any(|x| x * x == disc) {
            continue;
        }
        let t_prime = binlat::form_to_lattice(f).unwrap();
        let p = *[3i64, 5, 7, 11, 13, 17][(rng.next() % 6) as usize];
        if disc % p == 0 {
            continue;
        }
        // T = p * Gram(T'), then the prime-to-p part of q_T
        let gp = t_prime.gram_matrix().scale(&BigInt::from(p));
        let (orders, gens) = exactlin::discriminant_group(&gp).unwrap();
        let q_t = binlat::form_from_gram(&gp, &orders, &gens);
        let mut p_prime_part = FiniteQuadraticForm::trivial();
        for (l, part) in q_t.primary_decomposition() {
            if l != p as u64 {
                p_prime_part = p_prime_part.direct_sum(&part);
            }
        }
        let scaled = t_prime.disc_form().scale(p).unwrap();
        let w = fqf::is_isomorphic(&p_prime_part, &scaled).unwrap();
        assert!(
            w.is_some(),
            "identity fails for {:?} at p = {}",
            f,
            p
        );
        done += 1;
    }
    println!("criterion 5 (p-scaling identity, 100 pairs): PASS");
}

// ---------------------------------------------------------------------
// criterion 6: verdicts constant on tau classes
// ---------------------------------------------------------------------

#[test]
fn criterion_6_tau_class_consistency() {
    // worked-example targets first
    let t = ty("D7+A11+2A1");
    let out = overlat::enumerate_admissible(&t, Budget::default()).unwrap();
    let mut pairs: Vec<(FiniteQuadraticForm, FiniteQuadraticForm)> = Vec::new();
    for q in &out.quotients {
        for l in binlat::enumerate_classes(q.d).unwrap() {
            pairs.push((l.disc_form(), q.neg_quotient.clone()));
        }
    }
    // plus random same-discriminant pairs
    let mut rng = Rng(0xfeed_beef_0bad_cafe);
    let mut added = 0;
    while added < 10 {
        let a = rng.range(-6, 6);
        let b = rng.range(-6, 6);
        let c = rng.range(-6, 6);
        if a == 0 || c == 0 {
            continue;
        }
        let f = BinaryForm::new(a, b, c);
        let disc = f.discriminant();
        if disc <= 3 {
            continue;
        }
        let r = (disc as f64).sqrt() as i64;
        if (r - 1..=r + 1).any(|x| x * x == disc) {
            continue;
        }
        let l1 = binlat::form_to_lattice(f).unwrap();
        let classes = binlat::enumerate_classes(disc as u64).unwrap();
        if classes.is_empty() {
            continue;
        }
        let l2 = classes[(rng.next() as usize) % classes.len()];
        pairs.push((l1.disc_form(), l2.disc_form()));
        added += 1;
    }
    for (f1, f2) in &pairs {
        let d = f1.group_order();
        let divisors = primeclass::prime_divisors(d);
        // two distinct primes per class
        let mut per_class: BTreeMap<Vec<i64>, Vec<u64>> = BTreeMap::new();
        let mut p = 3u64;
        while per_class.values().filter(|v| v.len() >= 2).count()
            < per_class.len().max(1)
            || per_class.is_empty()
            || p < 100
        {
            if primeclass::is_prime(p) && d % p != 0 {
                let class = primeclass::tau_for_divisors(p, &divisors).unwrap();
                let entry = per_class.entry(class).or_default();
                if entry.len() < 2 {
                    entry.push(p);
                }
            }
            p += 2;
            if p > 5000 {
                break;
            }
        }
        for (class, primes) in &per_class {
            if primes.len() < 2 {
                continue;
            }
            let v1 = fqf::is_isomorphic(&f1.scale(primes[0] as i64).unwrap(), f2)
                .unwrap()
                .is_some();
            let v2 = fqf::is_isomorphic(&f1.scale(primes[1] as i64).unwrap(), f2)
                .unwrap()
                .is_some();
            assert_eq!(
                v1, v2,
                "verdict differs within class {:?} (p = {} vs {})",
                class, primes[0], primes[1]
            );
        }
    }
    println!(
        "criterion 6 (tau-class consistency, {} pairs): PASS",
        pairs.len()
    );
}

// ---------------------------------------------------------------------
// criterion 7: glue tables against the brute-force coset minimum
// ---------------------------------------------------------------------

#[test]
fn criterion_7_glue_tables_rank_le_8() {
    let mut names: Vec<String> = (1..=8).map(|l| format!("A{}", l)).collect();
    names.extend((4..=8).map(|m| format!("D{}", m)));
    names.extend(["E6".into(), "E7".into(), "E8".into()]);
    let cap = rat(6, 1);
    for name in &names {
        let t = ty(name);
        let g = t.gram();
        let n = g.rows();
        let mut pos = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                pos[(i, j)] = -g[(i, j)].clone();
            }
        }
        let orders = t.glue_orders();
        let mut coords = vec![0u64; orders.len()];
        'outer: loop {
            let lift = t.glue_vector_lift(&coords);
            let min = exactlin::coset_min_norm_bruteforce(&pos, &lift, &cap)
                .unwrap()
                .expect("coset minima of root lattices stay below 6");
            assert_eq!(
                min,
                t.glue_min_norm(&coords),
                "{} at {:?}",
                name,
                coords
            );
            let mut i = 0;
            loop {
                if i == orders.len() {
                    break 'outer;
                }
                coords[i] += 1;
                if coords[i] < orders[i] {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }
    println!(
        "criterion 7 (glue tables, {} irreducible lattices): PASS",
        names.len()
    );
}

// ---------------------------------------------------------------------
// criterion 8: density is 0 or 1/2 on completed rank-20 types
// ---------------------------------------------------------------------

#[test]
fn criterion_8_density_zero_or_half() {
    let all = dynkin::enumerate_types(20);
    let non_square: Vec<&DynkinType> = all
        .iter()
        .filter(|t| !dynkin::is_perfect_square(t.disc()))
        .collect();
    // stride sample across the catalogue
    let sample: Vec<&DynkinType> = non_square.iter().step_by(19).copied().collect();
    assert!(sample.len() >= 110);
    let options = AnalyzeOptions::default();
    let mut completed = 0;
    let half = rat(1, 2);
    let zero = rat(0, 1);
    for t in &sample {
        let report = pipeline::analyze(t, &options).unwrap();
        if report.status == ReportStatus::Complete {
            completed += 1;
            assert!(
                report.density == half || report.density == zero,
                "density {} for {}",
                report.density_string(),
                t
            );
        }
    }
    assert!(
        completed >= 100,
        "need at least 100 completed samples, got {}",
        completed
    );
    println!(
        "criterion 8 (density in {{0, 1/2}} on {} completed rank-20 types): PASS",
        completed
    );
}

// ---------------------------------------------------------------------
// criterion 9: full catalogue count (extended run, not gating)
// ---------------------------------------------------------------------

/// The full catalogue sweep: all 2437 non-square types with a generous
/// budget must yield exactly 483 types with non-empty prime sets. Takes
/// a long while; run explicitly with
/// `cargo test --release --test acceptance criterion_9 -- --ignored --nocapture`.
#[test]
#[ignore = "extended full-catalogue run"]
fn criterion_9_full_catalogue_non_empty_count() {
    let options = AnalyzeOptions {
        budget: Budget {
            max_nodes: u64::MAX,
            max_seconds: None,
        },
        ..Default::default()
    };
    let result = pipeline::batch(20, &options);
    assert_eq!(result.summary.total, 3058);
    assert_eq!(result.summary.non_square_disc, 2437);
    assert_eq!(result.summary.truncated, 0, "nothing may truncate");
    assert_eq!(result.summary.completed, 2437);
    assert_eq!(result.summary.non_empty_completed, 483);
    println!("criterion 9 (full catalogue, 483 non-empty): PASS");
}
