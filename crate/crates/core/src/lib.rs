//! Hilbert functions of homogeneous ideals over GF(p), lex-plus-powers
//! ideals, and randomized checks of the Eisenbud–Green–Harris inequalities
//! for ideals containing a regular sequence.

pub mod error;
pub mod field;
pub mod form;
pub mod harness;
pub mod linalg;
pub mod lpp;
pub mod monomial;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use field::{PrimeField, Scalar};
pub use form::Form;
pub use linalg::{
    colon_piece, hilbert_function, ideal_piece, span, subspace_dims, ArtinQuotient, GradedBasis,
    InverseSystem, OSequence, SubspaceDims,
};
pub use monomial::{lex_cmp, monomials_of_degree, Monomial};
pub use ring::RingContext;
pub use lpp::{
    lex_segment, lpp_defect, lpp_match_full, lpp_piece_dim, macaulay_bound, DegreeVector,
    LppIdeal, MatchFailure, MatchOutcome,
};
