//! Even indefinite rank-2 lattices via Gauss reduction of binary forms.
//!
//! An even lattice with Gram matrix [[2a, b], [b, 2c]] of determinant
//! -d < 0 corresponds to the integer binary quadratic form (a, b, c) of
//! discriminant d = b^2 - 4ac > 0. For non-square d the reduced forms
//! fall into finitely many cycles under the classical neighbor step, one
//! cycle per proper (SL_2) equivalence class; lattice isometry also allows
//! determinant -1, so proper classes merge in pairs unless a class is
//! improperly equivalent to itself.

use num_integer::Roots;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactlin::{discriminant_group, IntMatrix, RatMatrix};
use crate::fqf::FiniteQuadraticForm;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Integer binary quadratic form a x^2 + b xy + c y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The mirror form (a, -b, c), improperly equivalent to self.
    pub fn mirror(&self) -> Self {
        BinaryForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    /// Reduced in the indefinite sense: 0 < b < sqrt(d) and
    /// sqrt(d) - b < 2|a| < sqrt(d) + b.
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d <= 0 {
            return false;
        }
        if self.b <= 0 || self.b * self.b >= d {
            return false;
        }
        let two_a = 2 * self.a.abs();
        let upper = self.b + two_a;
        if d >= upper * upper {
            return false;
        }
        let lower = two_a - self.b;
        if lower > 0 && lower * lower >= d {
            return false;
        }
        true
    }
}

/// An even rank-2 lattice of signature (1,1) given by its Gram matrix
/// [[2a, b], [b, 2c]] with 4ac - b^2 = -d, d positive and non-square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryEvenLattice {
    pub form: BinaryForm,
}

impl BinaryEvenLattice {
    pub fn gram(&self) -> [[i64; 2]; 2] {
        [
            [2 * self.form.a, self.form.b],
            [self.form.b, 2 * self.form.c],
        ]
    }

    pub fn gram_matrix(&self) -> IntMatrix {
        let g = self.gram();
        IntMatrix::from_rows(&[vec![g[0][0], g[0][1]], vec![g[1][0], g[1][1]]])
    }

    pub fn det(&self) -> i64 {
        -self.form.discriminant()
    }

    /// Discriminant form of the lattice, from the dual-basis Gram matrix.
    pub fn disc_form(&self) -> FiniteQuadraticForm {
        let g = self.gram_matrix();
        let (orders, gens) = discriminant_group(&g).expect("nondegenerate by construction");
        form_from_gram(&g, &orders, &gens)
    }
}

/// Build the finite quadratic form carried by the discriminant group of
/// an even Gram matrix, from explicit dual generators.
pub fn form_from_gram(g: &IntMatrix, orders: &[BigInt], gens: &RatMatrix) -> FiniteQuadraticForm {
    let k = orders.len();
    if k == 0 || (k == 1 && orders[0] <= BigInt::from(1)) {
        return FiniteQuadraticForm::trivial();
    }
    let n = g.rows();
    let pair = |x: &[BigRational], y: &[BigRational]| {
        let mut acc = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                acc += &x[i] * &y[j] * BigRational::from_integer(g[(i, j)].clone());
            }
        }
        acc
    };
    let mut q = Vec::with_capacity(k);
    let mut b = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        q.push(pair(gens.row(i), gens.row(i)));
        for j in 0..k {
            b[i][j] = pair(gens.row(i), gens.row(j));
        }
    }
    let orders_u64: Vec<u64> = orders
        .iter()
        .map(|o| o.to_u64().expect("group order fits u64"))
        .collect();
    FiniteQuadraticForm::new(orders_u64, q, b).expect("dual Gram data is consistent")
}

/// Convert an even Gram matrix [[2a, b],[b, 2c]] into the form (a, b, c).
pub fn lattice_to_form(gram: [[i64; 2]; 2]) -> Result<BinaryForm> {
    if gram[0][1] != gram[1][0] || gram[0][0] % 2 != 0 || gram[1][1] % 2 != 0 {
        return Err(Error::NotBinaryEven);
    }
    let f = BinaryForm::new(gram[0][0] / 2, gram[0][1], gram[1][1] / 2);
    check_disc(f.discriminant())?;
    Ok(f)
}

/// Convert a form of positive non-square discriminant into the lattice.
pub fn form_to_lattice(f: BinaryForm) -> Result<BinaryEvenLattice> {
    check_disc(f.discriminant())?;
    Ok(BinaryEvenLattice { form: f })
}

fn check_disc(d: i64) -> Result<()> {
    if d <= 0 {
        return Err(Error::BadFormDiscriminant(d));
    }
    let r = (d as u64).sqrt();
    if r * r == d as u64 {
        return Err(Error::BadFormDiscriminant(d));
    }
    Ok(())
}

fn isqrt_floor(d: i64) -> i64 {
    (d as u64).sqrt() as i64
}

/// One step of the classical reduction/neighboring operator:
/// (a, b, c) -> (c, b', c') with b' = -b mod 2|c| chosen in the window
/// (sqrt(d) - 2|c|, sqrt(d)], and c' fixed by the discriminant.
pub fn rho_step(f: BinaryForm) -> BinaryForm {
    let d = f.discriminant();
    debug_assert!(d > 0);
    let s = isqrt_floor(d);
    let two_c = 2 * f.c.abs();
    debug_assert!(two_c > 0, "c = 0 impossible for non-square d");
    let r = (-f.b).rem_euclid(two_c);
    let bp = r + ((s - r).div_euclid(two_c)) * two_c;
    let cp = (bp * bp - d) / (4 * f.c);
    BinaryForm::new(f.c, bp, cp)
}

/// Reduce an indefinite form of positive non-square discriminant.
pub fn reduce(f: BinaryForm) -> Result<BinaryForm> {
    check_disc(f.discriminant())?;
    let mut g = f;
    for _ in 0..10_000 {
        if g.is_reduced() {
            return Ok(g);
        }
        g = rho_step(g);
    }
    unreachable!("indefinite reduction terminates");
}

/// The full cycle of reduced forms properly equivalent to f.
pub fn cycle(f: BinaryForm) -> Result<Vec<BinaryForm>> {
    let start = reduce(f)?;
    let mut out = vec![start];
    let mut g = rho_step(start);
    while g != start {
        out.push(g);
        g = rho_step(g);
        assert!(out.len() <= 100_000, "cycle failed to close");
    }
    Ok(out)
}

/// All reduced forms of discriminant d.
fn reduced_forms(d: i64) -> Vec<BinaryForm> {
    let s = isqrt_floor(d);
    let mut out = Vec::new();
    if d.rem_euclid(4) != 0 && d.rem_euclid(4) != 1 {
        return out; // b^2 = d mod 4 unsolvable, no integral forms
    }
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (b * b - d) / 4; // = a*c < 0
        let m = -n;
        let mut a = 1;
        while a * a <= m {
            if m % a == 0 {
                for &(aa, cc) in &[(a, -(m / a)), (m / a, -a)] {
                    for &(x, y) in &[(aa, cc), (-aa, -cc)] {
                        let f = BinaryForm::new(x, b, y);
                        if f.is_reduced() && !out.contains(&f) {
                            out.push(f);
                        }
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    out
}

/// One representative even lattice per isometry class of determinant -d.
/// Proper cycles merge in pairs under the mirror map unless the mirror
/// lands back in the same cycle.
pub fn enumerate_classes(d: u64) -> Result<Vec<BinaryEvenLattice>> {
    let d = i64::try_from(d).map_err(|_| Error::BadFormDiscriminant(-1))?;
    check_disc(d)?;
    let all = reduced_forms(d);
    let mut unassigned: Vec<BinaryForm> = all.clone();
    let mut classes: Vec<Vec<BinaryForm>> = Vec::new();
    while let Some(&seed) = unassigned.first() {
        let mut cyc = cycle(seed)?;
        let mirror = reduce(seed.mirror())?;
        if !cyc.contains(&mirror) {
            cyc.extend(cycle(mirror)?);
        }
        unassigned.retain(|f| !cyc.contains(f));
        classes.push(cyc);
    }
    let mut reps: Vec<BinaryForm> = classes
        .into_iter()
        .map(|mut c| {
            c.sort();
            c[0]
        })
        .collect();
    reps.sort();
    reps.into_iter().map(form_to_lattice).collect()
}
