//! Exact arithmetic: rationals, integer matrices, Smith normal form,
//! negative continued fractions, rational solves and signatures.

mod cf;
mod linalg;
mod matrix;
mod rational;
mod snf;

pub use cf::{admissible, bracket, negcf, negcf_display, stabilization_increments};
pub use linalg::{
    rank, rescale, signature_congruence, signature_generalized, solve_rational,
    solve_rational_matrix, to_rational, RatMatrix, SignatureTriple,
};
pub use matrix::IntMatrix;
pub use rational::{q, ParseRationalError, Rational};
pub use snf::{snf, SnfResult};
