//! Weierstrass kernel: lattices from invariants, ℘, ℘′, ζ, σ, the
//! third-kind factor, quasi-periods and the elliptic exponential/logarithm.

mod exp_log;
mod functions;
mod lattice;

pub use exp_log::{elliptic_exp, elliptic_log, Coord, EllipticPoint};
pub use functions::{f_factor, lambda_qp, quasi_periods, sigma_w, wp, wp_prime, zeta_w, QuasiPeriods};
pub use lattice::{eisenstein_invariants, Lattice};
