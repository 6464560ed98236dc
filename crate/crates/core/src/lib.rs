//! Arithmetic of rank-20 root lattices and their supersingular K3 primes.
//!
//! For a Dynkin type `R` of rank 20 whose discriminant is not a perfect
//! square, the odd primes `p` (not dividing `disc(R)`) in whose
//! characteristic a normal K3 surface with rational double points of type
//! `R` exists form a union of residue classes modulo `b_R`. This crate
//! computes those classes exactly:
//!
//! 1. enumerate the even overlattices of the root lattice `L(R)` that
//!    keep the same roots (isotropic subgroups of the discriminant form),
//! 2. keep the ones whose discriminant group needs at most 2 generators,
//! 3. classify even indefinite rank-2 lattices of the matching
//!    discriminant by Gauss reduction of binary forms, and compare the
//!    p-scaled discriminant forms against the negated quotient forms.
//!
//! Modules:
//! - [`exactlin`]: exact integer/rational matrices, SNF/HNF, discriminant
//!   groups, short-vector enumeration (also the brute-force oracle).
//! - [`dynkin`]: Dynkin types, Gram/discriminant data, standard
//!   discriminant forms, glue-vector norm tables, type enumeration.
//! - [`fqf`]: finite quadratic forms - evaluation, scaling, primary
//!   decomposition, isotropic subgroups, quotients, isomorphism testing.
//! - [`overlat`]: root-preserving overlattice (isotropic subgroup) search.
//! - [`binlat`]: even indefinite rank-2 lattices via Gauss cycles.
//! - [`primeclass`]: tau classes, representative primes, residue sets.
//! - [`pipeline`]: per-type analysis, catalogue batch runs, reports.

pub mod binlat;
pub mod dynkin;
pub mod error;
pub mod exactlin;
pub mod fqf;
pub mod overlat;
pub mod pipeline;
pub mod primeclass;

pub use error::{Error, Result};
