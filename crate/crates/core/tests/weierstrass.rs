mod common;

use periodlab::arith::{BigComplex, PrecisionContext};
use periodlab::elliptic::Lattice;
use proptest::prelude::*;
use rug::Float;

const BITS: u32 = 256;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(BITS).unwrap()
}

fn lattice(r: f64, phi: f64, tx: f64, ty: f64) -> Lattice {
    let w1 = BigComplex::from_f64(BITS, r * phi.cos(), r * phi.sin());
    let w2 = &BigComplex::from_f64(BITS, tx, ty) * &w1;
    Lattice::from_periods(&w1, &w2, &ctx()).unwrap()
}

fn at(lat: &Lattice, a: f64, b: f64) -> BigComplex {
    let p = lat.omega1.prec();
    &lat.omega1.scale(&Float::with_val(p, a)) + &lat.omega2.scale(&Float::with_val(p, b))
}

fn lattice_params() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.5f64..2.0, 0.0f64..std::f64::consts::TAU, -0.5f64..0.5, 0.6f64..2.5)
}

fn half(z: &BigComplex) -> BigComplex {
    z.scale(&Float::with_val(z.prec(), 0.5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn legendre_relation((r, phi, tx, ty) in lattice_params()) {
        let lat = lattice(r, phi, tx, ty);
        prop_assert!(lat.quasi_periods().legendre_residual(&lat).abs() < ctx().tol());
    }

    #[test]
    fn wp_solves_its_equation((r, phi, tx, ty) in lattice_params(), a in 0.05f64..0.95, b in 0.05f64..0.95) {
        let lat = lattice(r, phi, tx, ty);
        prop_assert!(common::ode_residual(&lat, &at(&lat, a, b)) < ctx().tol());
    }

    #[test]
    fn zeta_shifts_by_eta((r, phi, tx, ty) in lattice_params(), a in 0.05f64..0.95, b in 0.05f64..0.95) {
        let lat = lattice(r, phi, tx, ty);
        let z = at(&lat, a, b);
        let qp = lat.quasi_periods();
        for (w, eta) in [(&lat.omega1, &qp.eta1), (&lat.omega2, &qp.eta2)] {
            let lhs = lat.zeta(&(&z + w)).unwrap();
            let rhs = &lat.zeta(&z).unwrap() + eta;
            prop_assert!(lhs.dist(&rhs) < ctx().tol());
        }
    }

    #[test]
    fn sigma_shifts((r, phi, tx, ty) in lattice_params(), a in 0.05f64..0.95, b in 0.05f64..0.95) {
        // σ(z + ωᵢ) = −e^{ηᵢ(z + ωᵢ/2)} σ(z)
        let lat = lattice(r, phi, tx, ty);
        let z = at(&lat, a, b);
        let qp = lat.quasi_periods();
        for (w, eta) in [(&lat.omega1, &qp.eta1), (&lat.omega2, &qp.eta2)] {
            let lhs = lat.sigma(&(&z + w)).unwrap();
            let rhs = -&(&(eta * &(&z + &half(w))).exp() * &lat.sigma(&z).unwrap());
            prop_assert!(lhs.dist(&rhs) < Float::with_val(BITS, ctx().tol() * rhs.abs().max(&Float::with_val(BITS, 1))));
        }
    }

    #[test]
    fn f_factor_shifts(
        (r, phi, tx, ty) in lattice_params(),
        a in 0.05f64..0.95, b in 0.05f64..0.95,
        c in 0.1f64..0.9, d in 0.1f64..0.9,
        m in -2i64..=2, n in -2i64..=2,
    ) {
        // F(z + ω; u) = e^{λ(u, ω)} F(z; u)
        let lat = lattice(r, phi, tx, ty);
        let (z, u) = (at(&lat, a, b), at(&lat, c, d));
        prop_assume!((&z - &u).abs() > 0.01);
        let w = lat.point(m, n);
        let lhs = lat.f_factor(&(&z + &w), &u).unwrap();
        let rhs = &lat.lambda(&u, m, n).unwrap().exp() * &lat.f_factor(&z, &u).unwrap();
        prop_assert!(lhs.dist(&rhs) < Float::with_val(BITS, ctx().tol() * rhs.abs().max(&Float::with_val(BITS, 1))));
    }
}
