//! Exact rational arithmetic on quasi-homogeneous multivariate polynomials.
//!
//! A [`QPoly`] is a sparse polynomial over `Q` in a fixed table of weighted
//! variables. All arithmetic is exact; terms are kept in a canonical order so
//! that serialization is byte-deterministic and `parse ∘ serialize` is the
//! identity on canonical forms.

mod elim;
mod parse;
mod poly;

pub use elim::{bi_gcd, bi_resultant, is_squarefree_bi, UPoly};
pub use parse::{parse_poly, ParseError};
pub use poly::{binary_gcd, is_squarefree_binary, monomials_of_degree, Monomial, QPoly, VarTable, WeightedDegree};
