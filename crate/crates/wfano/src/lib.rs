//! Exact-arithmetic classification toolkit for quasi-smooth terminal weighted
//! hypersurface Fano threefolds.
//!
//! The library enumerates the deformation families, analyses singularities and
//! terminality, decides cylindricity (A²-cylinders and A³ containment), and
//! computes automorphism groups (connected dimension and structure plus the
//! finite component group) of the rational families with infinite automorphisms.
//!
//! Modules:
//! - [`exactalg`]: rational-coefficient quasi-homogeneous polynomials and a parser
//! - [`intlattice`]: Smith normal form and finite abelian invariants
//! - [`wps`]: weighted projective space geometry and Reid–Tai terminality
//! - [`quasismooth`]: quasi-smoothness of general and specific members
//! - [`famenum`]: family enumeration and the embedded reference dataset
//! - [`autgroup`]: automorphism groups of the classified normal forms
//! - [`cylinders`]: cylinder constructions and A³ decisions
//! - [`report`]: JSON report assembly used by the CLI

pub mod autgroup;
pub mod cylinders;
pub mod exactalg;
pub mod famenum;
pub mod intlattice;
pub mod quasismooth;
pub mod report;
pub mod wps;

/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub(crate) fn rat_int(n: i64) -> Rat {
    Rat::from(Int::from(n))
}
