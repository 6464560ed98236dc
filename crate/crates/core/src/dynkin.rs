//! Dynkin types and the arithmetic of their root lattices.
//!
//! A Dynkin type is a formal sum of A_l (l >= 1), D_m (m >= 4) and
//! E_6/E_7/E_8 symbols. `L(R)` is the negative-definite lattice whose Gram
//! matrix is (-1) times the Cartan matrix. This module knows the classical
//! data attached to each component: discriminant group with fixed
//! generators, discriminant form values, minimal norms of the dual cosets
//! (glue vectors), and the automorphisms of the discriminant form induced
//! by lattice isometries. It also enumerates all types of a given rank.
//!
//! Glue coordinates: one residue per cyclic factor, components in
//! canonical order. A_l contributes Z/(l+1); D_m contributes Z/4 for odd
//! m and (Z/2)^2 (the two spinor classes) for even m; E_6 gives Z/3,
//! E_7 gives Z/2 and E_8 nothing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;
use crate::fqf::FiniteQuadraticForm;

/// One irreducible component of a Dynkin type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    A(u32),
    D(u32),
    E(u32),
}

impl Component {
    pub fn rank(&self) -> u32 {
        match *self {
            Component::A(l) => l,
            Component::D(m) => m,
            Component::E(n) => n,
        }
    }

    /// Order of the component's discriminant group.
    pub fn disc(&self) -> u64 {
        match *self {
            Component::A(l) => (l + 1) as u64,
            Component::D(_) => 4,
            Component::E(6) => 3,
            Component::E(7) => 2,
            Component::E(8) => 1,
            Component::E(_) => unreachable!(),
        }
    }

    pub fn root_count(&self) -> u64 {
        match *self {
            Component::A(l) => (l as u64) * (l as u64 + 1),
            Component::D(m) => 2 * (m as u64) * (m as u64 - 1),
            Component::E(6) => 72,
            Component::E(7) => 126,
            Component::E(8) => 240,
            Component::E(_) => unreachable!(),
        }
    }

    /// Cyclic factor orders contributed to the discriminant group.
    pub fn glue_orders(&self) -> Vec<u64> {
        match *self {
            Component::A(l) => vec![(l + 1) as u64],
            Component::D(m) if m % 2 == 1 => vec![4],
            Component::D(_) => vec![2, 2],
            Component::E(6) => vec![3],
            Component::E(7) => vec![2],
            Component::E(8) => vec![],
            Component::E(_) => unreachable!(),
        }
    }

    /// Sort key for the canonical order: E family first, then D, then A,
    /// parameters descending inside a family.
    fn sort_key(&self) -> (u8, i64) {
        match *self {
            Component::E(n) => (0, -(n as i64)),
            Component::D(m) => (1, -(m as i64)),
            Component::A(l) => (2, -(l as i64)),
        }
    }

    /// Positive-definite Cartan matrix. D_m uses a path 0..m-3 with the
    /// fork nodes m-2, m-1 attached to m-3; E_n uses the Bourbaki
    /// numbering (branch node 2 attached to node 4).
    pub fn cartan(&self) -> IntMatrix {
        match *self {
            Component::A(l) => path_graph_cartan(l as usize),
            Component::D(m) => {
                let n = m as usize;
                let mut g = path_graph_cartan(n);
                // remove the path edge (n-2, n-1), attach both fork nodes to n-3
                g[(n - 2, n - 1)] = BigInt::zero();
                g[(n - 1, n - 2)] = BigInt::zero();
                g[(n - 3, n - 1)] = BigInt::from(-1);
                g[(n - 1, n - 3)] = BigInt::from(-1);
                g
            }
            Component::E(n) => {
                let n = n as usize;
                let mut g = IntMatrix::identity(n).scale(&BigInt::from(2));
                let mut edge = |a: usize, b: usize| {
                    g[(a - 1, b - 1)] = BigInt::from(-1);
                    g[(b - 1, a - 1)] = BigInt::from(-1);
                };
                edge(1, 3);
                edge(3, 4);
                edge(4, 5);
                edge(2, 4);
                if n >= 6 {
                    edge(5, 6);
                }
                if n >= 7 {
                    edge(6, 7);
                }
                if n >= 8 {
                    edge(7, 8);
                }
                g
            }
        }
    }

    /// q-values of the standard generators (negative-definite convention),
    /// as rationals taken mod 2 downstream.
    fn gen_q(&self) -> Vec<BigRational> {
        match *self {
            Component::A(l) => vec![brat(-(l as i64), l as i64 + 1)],
            Component::D(m) if m % 2 == 1 => vec![brat(-(m as i64), 4)],
            Component::D(m) => vec![brat(-(m as i64), 4), brat(-(m as i64), 4)],
            Component::E(6) => vec![brat(-4, 3)],
            Component::E(7) => vec![brat(-3, 2)],
            Component::E(8) => vec![],
            Component::E(_) => unreachable!(),
        }
    }

    /// b-values between the standard generators (mod 1).
    fn gen_b(&self) -> Vec<Vec<BigRational>> {
        match *self {
            Component::A(l) => vec![vec![brat(-(l as i64), l as i64 + 1)]],
            Component::D(m) if m % 2 == 1 => vec![vec![brat(-(m as i64), 4)]],
            Component::D(m) => {
                let m = m as i64;
                // the two spinor classes s, c with v = s + c the vector class:
                // 2 b(s,c) = q(v) - q(s) - q(c) = -1 + m/2
                vec![
                    vec![brat(-m, 4), brat(m - 2, 4)],
                    vec![brat(m - 2, 4), brat(-m, 4)],
                ]
            }
            Component::E(6) => vec![vec![brat(-4, 3)]],
            Component::E(7) => vec![vec![brat(-3, 2)]],
            Component::E(8) => vec![],
            Component::E(_) => unreachable!(),
        }
    }

    /// Minimal norm (positive-definite convention) of the dual coset with
    /// the given local residues.
    pub fn coset_min_norm(&self, local: &[u64]) -> BigRational {
        match *self {
            Component::A(l) => {
                let n = l as u64 + 1;
                let j = local[0] % n;
                brat((j * (n - j)) as i64, n as i64)
            }
            Component::D(m) if m % 2 == 1 => match local[0] % 4 {
                0 => BigRational::zero(),
                2 => brat(1, 1),
                _ => brat(m as i64, 4),
            },
            Component::D(m) => match (local[0] % 2, local[1] % 2) {
                (0, 0) => BigRational::zero(),
                (1, 1) => brat(1, 1),
                _ => brat(m as i64, 4),
            },
            Component::E(6) => {
                if local[0] % 3 == 0 {
                    BigRational::zero()
                } else {
                    brat(4, 3)
                }
            }
            Component::E(7) => {
                if local[0] % 2 == 0 {
                    BigRational::zero()
                } else {
                    brat(3, 2)
                }
            }
            Component::E(8) => BigRational::zero(),
            Component::E(_) => unreachable!(),
        }
    }

    /// Columns of Cartan^{-1} realizing the standard generators, so that
    /// glue elements lift to explicit rational vectors in the root basis.
    fn weight_columns(&self) -> Vec<usize> {
        match *self {
            Component::A(_) => vec![0],
            Component::D(m) if m % 2 == 1 => vec![m as usize - 1],
            Component::D(m) => vec![m as usize - 2, m as usize - 1],
            Component::E(6) => vec![0],
            Component::E(7) => vec![6],
            Component::E(8) => vec![],
            Component::E(_) => unreachable!(),
        }
    }
}

fn path_graph_cartan(n: usize) -> IntMatrix {
    let mut g = IntMatrix::identity(n).scale(&BigInt::from(2));
    for i in 0..n.saturating_sub(1) {
        g[(i, i + 1)] = BigInt::from(-1);
        g[(i + 1, i)] = BigInt::from(-1);
    }
    g
}

fn brat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of the glue group, one residue per cyclic factor in the
/// canonical coordinate layout of the type.
pub type GlueElement = Vec<u64>;

/// A Dynkin type: components stored in canonical order (E descending,
/// then D descending, then A descending), repeats explicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinType {
    components: Vec<Component>,
}

impl DynkinType {
    pub fn new(mut components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parse("empty Dynkin type".into()));
        }
        for c in &components {
            match *c {
                Component::A(l) if l >= 1 => {}
                Component::D(m) if m >= 4 => {}
                Component::E(n) if (6..=8).contains(&n) => {}
                _ => return Err(Error::Parse(format!("component {:?} out of range", c))),
            }
        }
        components.sort_by_key(|c| c.sort_key());
        Ok(DynkinType { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rank(&self) -> u32 {
        self.components.iter().map(|c| c.rank()).sum()
    }

    /// Order of the discriminant group of L(R), as a positive integer.
    pub fn disc(&self) -> u64 {
        self.components.iter().map(|c| c.disc()).product()
    }

    pub fn root_count(&self) -> u64 {
        self.components.iter().map(|c| c.root_count()).sum()
    }

    /// Gram matrix of L(R): block diagonal, (-1) times the Cartan blocks.
    pub fn gram(&self) -> IntMatrix {
        let n = self.rank() as usize;
        let mut g = IntMatrix::zeros(n, n);
        let mut off = 0;
        for comp in &self.components {
            let c = comp.cartan();
            let r = c.rows();
            for i in 0..r {
                for j in 0..r {
                    g[(off + i, off + j)] = -c[(i, j)].clone();
                }
            }
            off += r;
        }
        g
    }

    /// Cyclic factor orders of the glue group, canonical layout.
    pub fn glue_orders(&self) -> Vec<u64> {
        self.components
            .iter()
            .flat_map(|c| c.glue_orders())
            .collect()
    }

    /// Coordinate span (start, len) of each component in the glue layout.
    /// E_8 components get zero-length spans.
    pub fn component_spans(&self) -> Vec<(usize, usize)> {
        let mut spans = Vec::with_capacity(self.components.len());
        let mut off = 0;
        for c in &self.components {
            let len = c.glue_orders().len();
            spans.push((off, len));
            off += len;
        }
        spans
    }

    /// The discriminant form of L(R) on the standard generators.
    pub fn disc_form(&self) -> FiniteQuadraticForm {
        let orders = self.glue_orders();
        let k = orders.len();
        let mut q = Vec::with_capacity(k);
        let mut b = vec![vec![BigRational::zero(); k]; k];
        let mut off = 0;
        for comp in &self.components {
            let cq = comp.gen_q();
            let cb = comp.gen_b();
            let len = cq.len();
            for i in 0..len {
                q.push(cq[i].clone());
                for j in 0..len {
                    b[off + i][off + j] = cb[i][j].clone();
                }
            }
            off += len;
        }
        FiniteQuadraticForm::new(orders, q, b).expect("component tables are consistent")
    }

    /// Minimal norm (positive-definite convention) over the dual coset of
    /// a glue element: the sum of the per-component coset minima.
    pub fn glue_min_norm(&self, g: &[u64]) -> BigRational {
        let spans = self.component_spans();
        let mut acc = BigRational::zero();
        for (comp, &(start, len)) in self.components.iter().zip(&spans) {
            acc += comp.coset_min_norm(&g[start..start + len]);
        }
        acc
    }

    /// Lift a glue element to a rational vector in the root basis of
    /// `gram()`. Any representative of the coset works for brute-force
    /// minimization; this one uses the standard fundamental weights.
    pub fn glue_vector_lift(&self, g: &[u64]) -> Vec<BigRational> {
        let spans = self.component_spans();
        let n = self.rank() as usize;
        let mut out = vec![BigRational::zero(); n];
        let mut row_off = 0;
        for (comp, &(start, len)) in self.components.iter().zip(&spans) {
            let r = comp.rank() as usize;
            if len > 0 {
                let inv = comp
                    .cartan()
                    .to_rational()
                    .inverse()
                    .expect("Cartan matrices are nondegenerate");
                for (slot, &col) in comp.weight_columns().iter().enumerate() {
                    let mult = g[start + slot];
                    if mult == 0 {
                        continue;
                    }
                    for i in 0..r {
                        out[row_off + i] +=
                            inv[(i, col)].clone() * BigRational::from_integer(BigInt::from(mult));
                    }
                }
            }
            row_off += r;
        }
        out
    }

    /// Generators of the subgroup of O(q) induced by lattice isometries:
    /// per-component negations (or the spinor swap for even D), plus
    /// transpositions of identical components. Returns the identity map
    /// alone when nothing acts.
    pub fn aut_generators(&self) -> Vec<DiscAutomorphism> {
        let n = self.components.len();
        let ident = DiscAutomorphism {
            comp_perm: (0..n).collect(),
            local: vec![LocalAction::Identity; n],
        };
        let mut gens = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let action = match *comp {
                Component::A(l) if l >= 2 => Some(LocalAction::Negate),
                Component::D(m) if m % 2 == 1 => Some(LocalAction::Negate),
                Component::D(_) => Some(LocalAction::SwapPair),
                Component::E(6) => Some(LocalAction::Negate),
                _ => None,
            };
            if let Some(a) = action {
                let mut g = ident.clone();
                g.local[i] = a;
                gens.push(g);
            }
        }
        for i in 0..n.saturating_sub(1) {
            if self.components[i] == self.components[i + 1] {
                let mut g = ident.clone();
                g.comp_perm.swap(i, i + 1);
                gens.push(g);
            }
        }
        if gens.is_empty() {
            gens.push(ident);
        }
        gens
    }

    /// Identity automorphism (useful as a starting point for orbits).
    pub fn identity_aut(&self) -> DiscAutomorphism {
        let n = self.components.len();
        DiscAutomorphism {
            comp_perm: (0..n).collect(),
            local: vec![LocalAction::Identity; n],
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut mult = 1;
            while i + mult < self.components.len() && self.components[i + mult] == c {
                mult += 1;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if mult > 1 {
                write!(f, "{}", mult)?;
            }
            match c {
                Component::A(l) => write!(f, "A{}", l)?,
                Component::D(m) => write!(f, "D{}", m)?,
                Component::E(n) => write!(f, "E{}", n)?,
            }
            i += mult;
        }
        Ok(())
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<DynkinType> {
        let mut components = Vec::new();
        for raw in s.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{}'", s)));
            }
            let bytes = term.as_bytes();
            let mut i = 0;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mult: u32 = if i == 0 {
                1
            } else {
                term[..i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad multiplicity in '{}'", term)))?
            };
            if mult == 0 {
                return Err(Error::Parse(format!("zero multiplicity in '{}'", term)));
            }
            if i >= bytes.len() {
                return Err(Error::Parse(format!("missing family letter in '{}'", term)));
            }
            let family = bytes[i] as char;
            i += 1;
            let param: u32 = term[i..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad index in '{}'", term)))?;
            let comp = match family {
                'A' | 'a' => Component::A(param),
                'D' | 'd' => Component::D(param),
                'E' | 'e' => Component::E(param),
                _ => return Err(Error::Parse(format!("unknown family '{}'", family))),
            };
            for _ in 0..mult {
                components.push(comp);
            }
        }
        DynkinType::new(components)
    }
}

/// A discriminant-group automorphism induced by a lattice isometry:
/// a permutation of identical components combined with per-component
/// local actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscAutomorphism {
    /// destination component index for each source component
    pub comp_perm: Vec<usize>,
    /// local action applied to each source component
    pub local: Vec<LocalAction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalAction {
    Identity,
    Negate,
    SwapPair,
}

impl LocalAction {
    pub fn apply(&self, orders: &[u64], local: &[u64], out: &mut [u64]) {
        match self {
            LocalAction::Identity => out.copy_from_slice(local),
            LocalAction::Negate => {
                for (i, &x) in local.iter().enumerate() {
                    out[i] = (orders[i] - x % orders[i]) % orders[i];
                }
            }
            LocalAction::SwapPair => {
                debug_assert_eq!(local.len(), 2);
                out[0] = local[1];
                out[1] = local[0];
            }
        }
    }
}

impl DiscAutomorphism {
    /// Apply to a glue element of the given type.
    pub fn apply(&self, ty: &DynkinType, x: &[u64]) -> Vec<u64> {
        let spans = ty.component_spans();
        let orders = ty.glue_orders();
        let mut out = vec![0u64; x.len()];
        let mut tmp = [0u64; 2];
        for (i, &(start, len)) in spans.iter().enumerate() {
            if len == 0 {
                continue;
            }
            let (dst_start, dst_len) = spans[self.comp_perm[i]];
            debug_assert_eq!(len, dst_len);
            self.local[i].apply(
                &orders[start..start + len],
                &x[start..start + len],
                &mut tmp[..len],
            );
            out[dst_start..dst_start + len].copy_from_slice(&tmp[..len]);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.comp_perm.iter().enumerate().all(|(i, &j)| i == j)
            && self.local.iter().all(|a| *a == LocalAction::Identity)
    }
}

/// All Dynkin types of the given rank, canonical and duplicate free.
pub fn enumerate_types(rank: u32) -> Vec<DynkinType> {
    // symbols in canonical precedence order so the recursion emits each
    // multiset exactly once, already sorted
    let mut symbols = vec![Component::E(8), Component::E(7), Component::E(6)];
    for m in (4..=rank).rev() {
        symbols.push(Component::D(m));
    }
    for l in (1..=rank).rev() {
        symbols.push(Component::A(l));
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        symbols: &[Component],
        idx: usize,
        remaining: u32,
        stack: &mut Vec<Component>,
        out: &mut Vec<DynkinType>,
    ) {
        if remaining == 0 {
            out.push(DynkinType {
                components: stack.clone(),
            });
            return;
        }
        if idx >= symbols.len() {
            return;
        }
        let r = symbols[idx].rank();
        let max_mult = remaining / r;
        for mult in (0..=max_mult).rev() {
            let len_before = stack.len();
            for _ in 0..mult {
                stack.push(symbols[idx]);
            }
            rec(symbols, idx + 1, remaining - mult * r, stack, out);
            stack.truncate(len_before);
        }
    }
    rec(&symbols, 0, rank, &mut stack, &mut out);
    out
}

/// True if n is a perfect square.
pub fn is_perfect_square(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let r = (n as f64).sqrt() as u64;
    for c in r.saturating_sub(2)..=r + 2 {
        if c * c == n {
            return true;
        }
    }
    false
}
