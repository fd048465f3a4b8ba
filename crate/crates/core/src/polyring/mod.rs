//! Explicit polynomial backend: reflection action, BGG operators,
//! coinvariant quotients, Schubert classes and graded algebras.

pub mod bgg;
pub mod coinvariant;
pub mod graded;
pub mod invariants;
pub mod poly;

pub use bgg::{act, bgg_apply, divided_difference, group_elements, linear_form, reflect_poly, GroupElement};
pub use coinvariant::{
    chevalley_multiply, is_minimal_rep, parabolic_coinvariants, weyl_elements, ChevalleyTerm, CoinvariantPresentation,
    GradedQuotient, SchubertDualBasis,
};
pub use graded::{GradedAlgebraPresentation, LefschetzAlgebra};
pub use invariants::{fundamental_invariants, is_invariant, reynolds};
pub use poly::{monomials, Monomial, Polynomial};
