//! Exact Newton–Okounkov bodies of line bundles with respect to admissible
//! flags, for projective spaces, plane curve flags and toric varieties.
//!
//! The computation path is exact rational arithmetic throughout: sections
//! are enumerated level by level, a flag valuation is triangularized over a
//! basis of each level, and the normalized values are hulled exactly.

pub mod config;
pub mod error;
pub mod flags;
pub mod linalg;
pub mod models;
pub mod okounkov;
pub mod poly;
pub mod polytope;

pub use error::{Error, Result};
pub use flags::{flag_vertex_sections, validate_flag, CheckStatus, FlagSpec, FlagValidationReport};
pub use linalg::{gauss_solve, in_convex_hull, rank, HullMembership, QMatrix, QVector, Rational};
pub use models::{basis_of_level, hilbert_dim, restriction_degree, restriction_matrix, Model, Section, SectionBasis};
pub use okounkov::{
    body_approx, decompose, enumerate_semigroup, lemma_witness, predicted_body, scaling_check, valuation,
    valuation_axiom_check, valuation_image, verify_theorem, volume_vs_hilbert, FlagValuation, SemigroupSample,
};
pub use poly::{exact_divide, max_power_dividing, multiply, order_at_base_point, pullback, CurveParam, MultiPoly};
pub use polytope::{contains, convex_hull, equals, scale, volume, VPolytope};
