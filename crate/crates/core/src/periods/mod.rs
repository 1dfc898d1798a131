//! Period evaluation: incomplete integrals of the three kinds, logarithms,
//! the σ-identity, genus-0 integrals and full period matrices.

mod chain;
mod elliptic;
mod form;
mod genus0;
mod matrix;
pub mod oracle;

pub use chain::{Chain, Leg};
pub use elliptic::{
    exact_boundary_sum, form_period, incomplete_first, incomplete_second, incomplete_third, log_period,
    reduce_two_pi_i, second_between, sigma_period, third_between, SigmaPeriod, INFINITY,
};
pub use form::{DifferentialForm, FormKind, RationalFunction, ThirdKindTerm};
pub use genus0::{
    decompose, genus0_period, integrand, DeclaredRoot, Decomposition, Genus0Integral, Genus0Period, PrincipalPart,
};
pub use matrix::{period_matrix, verify, BlockTag, PathData, PeriodMatrix, PeriodMatrixReport, Verdict, Verification};
