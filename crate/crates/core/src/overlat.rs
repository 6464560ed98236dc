//! Root-preserving even overlattices of L(R), up to symmetry.
//!
//! Even overlattices of L(R) correspond to totally isotropic subgroups H
//! of the discriminant form. The overlattice keeps the same roots exactly
//! when no nonzero element of H has coset minimum 2, and only overlattices
//! whose discriminant group needs at most two generators can sit inside a
//! p-elementary lattice of signature (1, 21) next to a rank-2 complement.
//! The search below enumerates those subgroups by closure, one
//! representative per orbit of the automorphisms from
//! `DynkinType::aut_generators`, and returns the distinct isomorphism
//! classes of (D_{L~}, -q_{L~}) together with d = |D_{L~}|.
//!
//! The canonical-form machinery treats a subgroup as a matrix whose rows
//! are the nonzero elements and whose columns are the components; the
//! minimal image over column permutations (within blocks of identical
//! components) and local component symmetries is computed by a beam
//! search over ordered row partitions. When a pathological tie explosion
//! would blow the beam, we fall back to exact-identity deduplication,
//! which costs time but never correctness.

use std::collections::{HashSet, VecDeque};
use std::time::Instant;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::dynkin::{Component, DynkinType, LocalAction};
use crate::error::{Error, Result};
use crate::fqf::{self, FiniteQuadraticForm, Subgroup};

/// One admissible overlattice class.
#[derive(Debug, Clone)]
pub struct AdmissibleQuotient {
    /// generators of a representative isotropic subgroup, glue coordinates
    pub subgroup_generators: Vec<Vec<u64>>,
    pub subgroup_order: u64,
    /// (D_{L~}, q_{L~})
    pub quotient: FiniteQuadraticForm,
    /// (D_{L~}, -q_{L~}), the matching target for rank-2 complements
    pub neg_quotient: FiniteQuadraticForm,
    /// |D_{L~}| = disc(L~) as a positive integer
    pub d: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Complete,
    Truncated,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub quotients: Vec<AdmissibleQuotient>,
    pub status: SearchStatus,
    pub nodes_used: u64,
}

/// Node and wall-clock caps for the subgroup search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_seconds: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 10_000_000,
            max_seconds: Some(60),
        }
    }
}

/// True iff adjoining H to L(R) creates no new roots: no nonzero element
/// of H has coset minimum 2.
pub fn root_preserving(ty: &DynkinType, h: &Subgroup) -> bool {
    let two = num_rational::BigRational::from_integer(2.into());
    for el in h.elements() {
        if el.iter().all(|&x| x == 0) {
            continue;
        }
        if ty.glue_min_norm(&el) == two {
            return false;
        }
    }
    true
}

/// Minimal order |H| must reach before length(H-perp / H) <= 2 is
/// possible, from the per-prime ranks of the discriminant group.
pub fn quotient_order_bound(ty: &DynkinType) -> u64 {
    let orders = ty.glue_orders();
    let mut bound = 1u64;
    for p in crate::primeclass::prime_divisors(ty.disc()) {
        let r = orders.iter().filter(|&&o| o % p == 0).count() as u64;
        if r > 2 {
            let k = (r - 2).div_ceil(2);
            bound *= p.pow(k as u32);
        }
    }
    bound
}

// ---------------------------------------------------------------------
// fast scaled-integer tables for the search hot path
// ---------------------------------------------------------------------

struct TypeTables {
    orders: Vec<u64>,
    strides: Vec<u64>,
    spans: Vec<(usize, usize)>,
    den: i64,
    /// per component, indexed by local encoding: q * den (mod 2 den)
    q_tab: Vec<Vec<i64>>,
    /// per component: coset minimum * den
    min_tab: Vec<Vec<i64>>,
    /// per component: b * den (mod den), index i * loc + j
    b_tab: Vec<Vec<i64>>,
    loc_size: Vec<usize>,
}

impl TypeTables {
    fn build(ty: &DynkinType) -> TypeTables {
        let orders = ty.glue_orders();
        let spans = ty.component_spans();
        let comps = ty.components().to_vec();
        let mut den: i64 = 4;
        for &o in &orders {
            den = den.lcm(&(o as i64));
        }
        let mut strides = vec![0u64; orders.len()];
        let mut acc = 1u64;
        for (i, &o) in orders.iter().enumerate() {
            strides[i] = acc;
            acc *= o;
        }
        let mut q_tab = Vec::new();
        let mut min_tab = Vec::new();
        let mut b_tab = Vec::new();
        let mut loc_size = Vec::new();
        let f = ty.disc_form();
        for (ci, comp) in comps.iter().enumerate() {
            let (start, len) = spans[ci];
            let locals = comp.glue_orders();
            let size: usize = locals.iter().map(|&o| o as usize).product::<usize>().max(1);
            loc_size.push(size);
            let mut qt = vec![0i64; size];
            let mut mt = vec![0i64; size];
            let mut bt = vec![0i64; size * size];
            for e in 0..size {
                let local = decode_local(e, &locals);
                let mut x = vec![0u64; orders.len()];
                x[start..start + len].copy_from_slice(&local);
                let qv = f.eval_q(&x) * num_rational::BigRational::from_integer(den.into());
                assert!(qv.is_integer());
                qt[e] = qv.to_integer().to_i64().unwrap().rem_euclid(2 * den);
                let mv = comp.coset_min_norm(&local)
                    * num_rational::BigRational::from_integer(den.into());
                assert!(mv.is_integer());
                mt[e] = mv.to_integer().to_i64().unwrap();
                for e2 in 0..size {
                    let local2 = decode_local(e2, &locals);
                    let mut y = vec![0u64; orders.len()];
                    y[start..start + len].copy_from_slice(&local2);
                    let bv =
                        f.eval_b(&x, &y) * num_rational::BigRational::from_integer(den.into());
                    assert!(bv.is_integer());
                    bt[e * size + e2] = bv.to_integer().to_i64().unwrap().rem_euclid(den);
                }
            }
            q_tab.push(qt);
            min_tab.push(mt);
            b_tab.push(bt);
        }
        TypeTables {
            orders,
            strides,
            spans,
            den,
            q_tab,
            min_tab,
            b_tab,
            loc_size,
        }
    }

    fn group_order(&self) -> u64 {
        self.orders.iter().product()
    }

    fn index_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.strides)
            .map(|(&xi, &s)| xi * s)
            .sum::<u64>()
    }

    fn encodings(&self, x: &[u64]) -> Vec<u8> {
        self.spans
            .iter()
            .map(|&(start, len)| match len {
                0 => 0u8,
                1 => x[start] as u8,
                2 => (2 * x[start] + x[start + 1]) as u8,
                _ => unreachable!(),
            })
            .collect()
    }

    fn q_scaled(&self, enc: &[u8]) -> i64 {
        let mut acc = 0i64;
        for (c, &e) in enc.iter().enumerate() {
            acc += self.q_tab[c][e as usize];
        }
        acc % (2 * self.den)
    }

    fn min_scaled(&self, enc: &[u8]) -> i64 {
        enc.iter()
            .enumerate()
            .map(|(c, &e)| self.min_tab[c][e as usize])
            .sum()
    }

    fn b_scaled(&self, enc1: &[u8], enc2: &[u8]) -> i64 {
        let mut acc = 0i64;
        for c in 0..enc1.len() {
            let size = self.loc_size[c];
            acc += self.b_tab[c][enc1[c] as usize * size + enc2[c] as usize];
        }
        acc % self.den
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &o)| (a + b) % o)
            .collect()
    }
}

fn decode_local(mut e: usize, locals: &[u64]) -> Vec<u64> {
    // encoding conventions match TypeTables::encodings
    match locals.len() {
        0 => Vec::new(),
        1 => vec![e as u64],
        2 => {
            let c = e % 2;
            e /= 2;
            vec![e as u64, c as u64]
        }
        _ => unreachable!(),
    }
}

/// One admissible vector: isotropic, coset minimum >= 4.
#[derive(Clone)]
struct WElem {
    coords: Vec<u64>,
    enc: Vec<u8>,
    idx: u64,
}

// ---------------------------------------------------------------------
// canonical forms of subgroups under the induced automorphism group
// ---------------------------------------------------------------------

struct CanonCtx {
    /// runs of identical components: (start, len)
    blocks: Vec<(usize, usize)>,
    /// local symmetries per component, as permutation tables on encodings
    local_maps: Vec<Vec<LocalMapTab>>,
    beam_cap: usize,
}

#[derive(Clone)]
struct LocalMapTab {
    perm: Vec<u8>,
}

fn local_map_tables(comp: &Component) -> Vec<LocalMapTab> {
    let locals = comp.glue_orders();
    let size: usize = locals.iter().map(|&o| o as usize).product::<usize>().max(1);
    let actions: Vec<LocalAction> = match *comp {
        Component::A(1) => vec![LocalAction::Identity],
        Component::A(_) => vec![LocalAction::Identity, LocalAction::Negate],
        Component::D(m) if m % 2 == 1 => vec![LocalAction::Identity, LocalAction::Negate],
        Component::D(_) => vec![LocalAction::Identity, LocalAction::SwapPair],
        Component::E(6) => vec![LocalAction::Identity, LocalAction::Negate],
        _ => vec![LocalAction::Identity],
    };
    actions
        .into_iter()
        .map(|a| {
            let mut perm = vec![0u8; size];
            for (e, slot) in perm.iter_mut().enumerate() {
                let local = decode_local(e, &locals);
                let mut out = vec![0u64; locals.len()];
                a.apply(&locals, &local, &mut out);
                let enc = match locals.len() {
                    0 => 0usize,
                    1 => out[0] as usize,
                    2 => (2 * out[0] + out[1]) as usize,
                    _ => unreachable!(),
                };
                *slot = enc as u8;
            }
            LocalMapTab { perm }
        })
        .collect()
}

impl CanonCtx {
    fn build(ty: &DynkinType) -> CanonCtx {
        let comps = ty.components();
        let mut blocks = Vec::new();
        let mut i = 0;
        while i < comps.len() {
            let mut j = i + 1;
            while j < comps.len() && comps[j] == comps[i] {
                j += 1;
            }
            blocks.push((i, j - i));
            i = j;
        }
        let local_maps = comps.iter().map(local_map_tables).collect();
        CanonCtx {
            blocks,
            local_maps,
            beam_cap: 4000,
        }
    }

    /// Minimal image of the matrix (rows = subgroup elements encoded per
    /// component) under within-block column permutations and local maps.
    /// Returns None when the beam overflows.
    fn canonical_key(&self, rows: &[Vec<u8>]) -> Option<Vec<u8>> {
        if rows.is_empty() {
            return Some(Vec::new());
        }
        #[derive(Clone, PartialEq, Eq, Hash)]
        struct State {
            used: u64,
            /// ordered partition of row indices into tie groups
            partition: Vec<Vec<u32>>,
        }
        let nrows = rows.len();
        let mut key: Vec<u8> = Vec::new();
        let mut states = vec![State {
            used: 0,
            partition: vec![(0..nrows as u32).collect()],
        }];
        for &(bstart, blen) in &self.blocks {
            for _slot in 0..blen {
                let mut best: Option<Vec<u8>> = None;
                let mut next: Vec<State> = Vec::new();
                for st in &states {
                    for col in bstart..bstart + blen {
                        if st.used >> col & 1 == 1 {
                            continue;
                        }
                        for map in &self.local_maps[col] {
                            // comparison vector: per tie group, sorted values
                            let mut cmp: Vec<u8> = Vec::with_capacity(nrows);
                            let mut newpart: Vec<Vec<u32>> = Vec::new();
                            for group in &st.partition {
                                let mut vals: Vec<(u8, u32)> = group
                                    .iter()
                                    .map(|&r| (map.perm[rows[r as usize][col] as usize], r))
                                    .collect();
                                vals.sort_unstable();
                                let mut gi = 0;
                                while gi < vals.len() {
                                    let v = vals[gi].0;
                                    let mut sub = Vec::new();
                                    while gi < vals.len() && vals[gi].0 == v {
                                        cmp.push(v);
                                        sub.push(vals[gi].1);
                                        gi += 1;
                                    }
                                    newpart.push(sub);
                                }
                            }
                            match &best {
                                Some(b) if *b < cmp => continue,
                                Some(b) if *b == cmp => {}
                                _ => {
                                    best = Some(cmp);
                                    next.clear();
                                }
                            }
                            let mut ns = st.clone();
                            ns.used |= 1 << col;
                            ns.partition = newpart;
                            next.push(ns);
                        }
                    }
                }
                let bestv = best?;
                key.extend_from_slice(&bestv);
                let mut dedup: HashSet<(u64, Vec<Vec<u32>>)> = HashSet::new();
                states = next
                    .into_iter()
                    .filter(|s| dedup.insert((s.used, s.partition.clone())))
                    .collect();
                if states.len() > self.beam_cap {
                    return None;
                }
            }
        }
        Some(key)
    }
}

// ---------------------------------------------------------------------
// p-rank computations over the glue coordinates
// ---------------------------------------------------------------------

/// p-rank (minimal generator count of the p-part) of the subgroup
/// generated by the given vectors. Stops early once `target` is reached.
fn p_rank_of_span(orders: &[u64], vectors: &[&[u64]], p: u64, target: usize) -> usize {
    let cols: Vec<usize> = (0..orders.len()).filter(|&i| orders[i] % p == 0).collect();
    if cols.is_empty() || target == 0 {
        return 0;
    }
    let mut a_max = 0u32;
    let mut col_val = Vec::with_capacity(cols.len());
    for &c in &cols {
        let mut o = orders[c];
        let mut a = 0;
        while o % p == 0 {
            o /= p;
            a += 1;
        }
        col_val.push(a);
        a_max = a_max.max(a);
    }
    let pa: u64 = p.pow(a_max);
    // embed each column Z/p^{a_c} into Z/p^{a_max} by scaling
    let scale: Vec<u64> = col_val.iter().map(|&a| p.pow(a_max - a)).collect();
    let mut pivots: Vec<Vec<u64>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    let val_of = |x: u64| -> u32 {
        let mut v = 0;
        let mut y = x;
        while y % p == 0 {
            y /= p;
            v += 1;
        }
        v
    };
    for v in vectors {
        let mut row: Vec<u64> = cols
            .iter()
            .zip(&scale)
            .map(|(&c, &s)| v[c] % orders[c] * s % pa)
            .collect();
        loop {
            let mut bestpos: Option<(usize, u32)> = None;
            for (j, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let val = val_of(x);
                match bestpos {
                    None => bestpos = Some((j, val)),
                    Some((_, bv)) if val < bv => bestpos = Some((j, val)),
                    _ => {}
                }
            }
            let (j, val) = match bestpos {
                Some(b) => b,
                None => break,
            };
            if let Some(pi) = pivot_cols.iter().position(|&pc| pc == j) {
                let pv = val_of(pivots[pi][j]);
                if pv <= val {
                    let unit = pivots[pi][j] / p.pow(pv);
                    let inv = mod_inverse(unit % pa, pa);
                    let factor = row[j] / p.pow(pv) % pa * inv % pa;
                    for (x, &pvx) in row.iter_mut().zip(&pivots[pi]) {
                        *x = (*x + pa - factor * pvx % pa) % pa;
                    }
                    continue;
                }
                std::mem::swap(&mut pivots[pi], &mut row);
                continue;
            }
            pivots.push(row.clone());
            pivot_cols.push(j);
            rank += 1;
            if rank >= target {
                return rank;
            }
            break;
        }
    }
    rank
}

/// Inverse of a unit modulo m by the extended Euclid algorithm.
fn mod_inverse(x: u64, m: u64) -> u64 {
    let mut t = 0i128;
    let mut new_t = 1i128;
    let mut r = m as i128;
    let mut new_r = (x % m) as i128;
    while new_r != 0 {
        let q = r / new_r;
        t -= q * new_t;
        std::mem::swap(&mut t, &mut new_t);
        r -= q * new_r;
        std::mem::swap(&mut r, &mut new_r);
    }
    debug_assert_eq!(r, 1, "not a unit");
    t.rem_euclid(m as i128) as u64
}

// ---------------------------------------------------------------------
// the search
// ---------------------------------------------------------------------

struct SearchState<'a> {
    tables: &'a TypeTables,
    form: &'a FiniteQuadraticForm,
    w_bitset: Vec<u64>,
    required_rank: Vec<(u64, usize)>,
    nodes: u64,
    budget: Budget,
    started: Instant,
    truncated: bool,
    seen: HashSet<SeenKey>,
    found: Vec<AdmissibleQuotient>,
}

#[derive(PartialEq, Eq, Hash)]
enum SeenKey {
    Canon(Vec<u8>),
    Exact(Vec<u64>),
}

impl SearchState<'_> {
    fn bit(&self, idx: u64) -> bool {
        self.w_bitset[(idx >> 6) as usize] >> (idx & 63) & 1 == 1
    }

    fn over_budget(&mut self) -> bool {
        if self.truncated {
            return true;
        }
        if self.nodes > self.budget.max_nodes {
            self.truncated = true;
            return true;
        }
        if self.nodes % 4096 == 0 {
            if let Some(secs) = self.budget.max_seconds {
                if self.started.elapsed().as_secs() >= secs {
                    self.truncated = true;
                    return true;
                }
            }
        }
        false
    }

    /// Record H if its quotient needs at most two generators.
    fn record(&mut self, basis: &[Vec<u64>], order: u64) {
        // cheap necessary condition first
        let basis_refs: Vec<&[u64]> = basis.iter().map(|v| v.as_slice()).collect();
        for &(p, need) in &self.required_rank {
            if p_rank_of_span(&self.tables.orders, &basis_refs, p, need) < need {
                return;
            }
        }
        let h = Subgroup::from_generators(self.form, basis);
        debug_assert_eq!(h.order(), order);
        let q = self
            .form
            .quotient_form(&h)
            .expect("search subgroups are isotropic");
        if q.length() > 2 {
            return;
        }
        let d = q.group_order();
        debug_assert_eq!(d * order * order, self.tables.group_order());
        let neg = q.scale(-1).expect("negation is always allowed");
        for existing in &self.found {
            if existing.d == d {
                if let Ok(Some(_)) = fqf::is_isomorphic(&existing.neg_quotient, &neg) {
                    return;
                }
            }
        }
        self.found.push(AdmissibleQuotient {
            subgroup_generators: basis.to_vec(),
            subgroup_order: order,
            quotient: q,
            neg_quotient: neg,
            d,
        });
    }
}

/// Enumerate the admissible quotient classes of R within a budget.
pub fn enumerate_admissible(ty: &DynkinType, budget: Budget) -> Result<SearchOutcome> {
    let disc = ty.disc();
    if crate::dynkin::is_perfect_square(disc) {
        return Err(Error::SquareDiscriminant(disc));
    }
    let tables = TypeTables::build(ty);
    let canon = CanonCtx::build(ty);
    let form = ty.disc_form();
    let total = tables.group_order();

    // admissible vectors: isotropic with coset minimum >= 4
    let mut w: Vec<WElem> = Vec::new();
    let mut w_bitset = vec![0u64; (total as usize >> 6) + 1];
    {
        let orders = &tables.orders;
        let mut x = vec![0u64; orders.len()];
        loop {
            if x.iter().any(|&v| v != 0) {
                let enc = tables.encodings(&x);
                if tables.q_scaled(&enc) == 0 && tables.min_scaled(&enc) >= 4 * tables.den {
                    let idx = tables.index_of(&x);
                    w_bitset[(idx >> 6) as usize] |= 1 << (idx & 63);
                    w.push(WElem {
                        coords: x.clone(),
                        enc,
                        idx,
                    });
                }
            }
            let mut i = 0;
            loop {
                if i == orders.len() {
                    break;
                }
                x[i] += 1;
                if x[i] < orders[i] {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if x.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    w.sort_by(|a, b| a.coords.cmp(&b.coords));

    let required_rank: Vec<(u64, usize)> = crate::primeclass::prime_divisors(disc)
        .into_iter()
        .filter_map(|p| {
            let r = tables.orders.iter().filter(|&&o| o % p == 0).count();
            if r > 2 {
                Some((p, (r - 2).div_ceil(2)))
            } else {
                None
            }
        })
        .collect();

    let mut st = SearchState {
        tables: &tables,
        form: &form,
        w_bitset,
        required_rank,
        nodes: 0,
        budget,
        started: Instant::now(),
        truncated: false,
        seen: HashSet::new(),
        found: Vec::new(),
    };

    st.record(&[], 1);

    // hopeless-type early exit: even the full span of W cannot reach the
    // required rank at some prime
    let mut hopeless = false;
    for &(p, need) in &st.required_rank.clone() {
        let refs: Vec<&[u64]> = w.iter().map(|e| e.coords.as_slice()).collect();
        if p_rank_of_span(&st.tables.orders, &refs, p, need) < need {
            hopeless = true;
            break;
        }
    }

    // queue of (sorted element indices without 0, basis, candidate list)
    type Node = (Vec<u64>, Vec<Vec<u64>>, Vec<usize>);
    let mut queue: VecDeque<Node> = VecDeque::new();
    if !hopeless {
        queue.push_back((Vec::new(), Vec::new(), (0..w.len()).collect()));
    }

    while let Some((els, basis, cands)) = queue.pop_front() {
        if st.over_budget() {
            break;
        }
        // local dedupe of extensions generated by different w
        let mut local_seen: HashSet<Vec<u64>> = HashSet::new();
        for &wi in &cands {
            st.nodes += 1;
            if st.over_budget() {
                break;
            }
            let welem = &w[wi];
            if els.binary_search(&welem.idx).is_ok() {
                continue;
            }
            // closure of <H, w>
            let ord_w = form.order_of(&welem.coords);
            let mut new_els: Vec<u64> = Vec::with_capacity(els.len() * ord_w as usize);
            let mut ok = true;
            let mut h_elements: Vec<Vec<u64>> = vec![vec![0u64; tables.orders.len()]];
            for &e in &els {
                h_elements.push(coords_from_index(e, &tables));
            }
            for h_el in &h_elements {
                let mut cur = h_el.clone();
                for _k in 1..=ord_w {
                    cur = tables.add(&cur, &welem.coords);
                    if cur.iter().all(|&v| v == 0) {
                        continue;
                    }
                    let idx = tables.index_of(&cur);
                    if !st.bit(idx) {
                        ok = false;
                        break;
                    }
                    new_els.push(idx);
                }
                if !ok {
                    break;
                }
            }
            if !ok {
                continue;
            }
            let mut all: Vec<u64> = els.clone();
            all.extend(new_els);
            all.sort_unstable();
            all.dedup();
            if all.len() == els.len() {
                continue; // w was already absorbed
            }
            if !local_seen.insert(all.clone()) {
                continue;
            }
            // canonical orbit key
            let rows: Vec<Vec<u8>> = all
                .iter()
                .map(|&e| tables.encodings(&coords_from_index(e, &tables)))
                .collect();
            let key = match canon.canonical_key(&rows) {
                Some(k) => SeenKey::Canon(k),
                None => SeenKey::Exact(all.clone()),
            };
            if !st.seen.insert(key) {
                continue;
            }
            let mut new_basis = basis.clone();
            new_basis.push(welem.coords.clone());
            let new_order = (all.len() + 1) as u64;
            st.record(&new_basis, new_order);
            // filtered candidates: orthogonal to the new generator, not absorbed
            let mut new_cands: Vec<usize> = Vec::new();
            for &cj in &cands {
                let c = &w[cj];
                if all.binary_search(&c.idx).is_ok() {
                    continue;
                }
                if tables.b_scaled(&c.enc, &welem.enc) == 0 {
                    new_cands.push(cj);
                }
            }
            // subtree viability: achievable p-ranks from H plus remaining candidates
            let mut viable = true;
            for &(p, need) in &st.required_rank {
                let mut refs: Vec<&[u64]> = new_basis.iter().map(|v| v.as_slice()).collect();
                refs.extend(new_cands.iter().map(|&cj| w[cj].coords.as_slice()));
                if p_rank_of_span(&tables.orders, &refs, p, need) < need {
                    viable = false;
                    break;
                }
            }
            if viable {
                queue.push_back((all, new_basis, new_cands));
            }
        }
    }

    let status = if st.truncated {
        SearchStatus::Truncated
    } else {
        SearchStatus::Complete
    };
    let mut quotients = st.found;
    quotients.sort_by(|a, b| {
        b.d.cmp(&a.d)
            .then_with(|| a.subgroup_generators.cmp(&b.subgroup_generators))
    });
    Ok(SearchOutcome {
        quotients,
        status,
        nodes_used: st.nodes,
    })
}

fn coords_from_index(mut idx: u64, tables: &TypeTables) -> Vec<u64> {
    let mut out = vec![0u64; tables.orders.len()];
    for (i, &o) in tables.orders.iter().enumerate() {
        out[i] = idx % o;
        idx /= o;
    }
    out
}
