//! Arbitrary-precision arithmetic with explicit precision contexts, and
//! algebraic numbers pinned to a complex embedding.

mod algebraic;
mod complex;
mod context;
pub mod linalg;
pub mod poly;

pub use algebraic::{alg_eval, alg_field_basis, AlgebraicInput, AlgebraicJson, AlgebraicNumber, IntRepr, NumRepr};
pub use complex::{agm, fmt_float, parse_float, pi, BigComplex, DecimalComplex};
pub use context::PrecisionContext;
