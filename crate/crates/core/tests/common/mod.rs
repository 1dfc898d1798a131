#![allow(dead_code)]

use std::path::PathBuf;

use periodlab::arith::{BigComplex, PrecisionContext};
use periodlab::elliptic::Lattice;
use periodlab::motive::MotiveSpec;
use periodlab::periods::PathData;
use rand::Rng;
use rug::integer::Order;
use rug::{Float, Integer};
use serde::Deserialize;
use serde_json::Value;

pub fn fixture(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap()
}

#[derive(Deserialize)]
struct MotiveInput {
    motive: MotiveSpec,
    #[serde(default)]
    paths: PathData,
}

pub fn motive_fixture(name: &str) -> (MotiveSpec, PathData) {
    let m: MotiveInput = serde_json::from_value(fixture(name)["input"].clone()).unwrap();
    (m.motive, m.paths)
}

pub const MATRIX_FIXTURES: [&str; 12] = [
    "example_noncm.json",
    "example_cm.json",
    "rank2_noncm.json",
    "saturated_noncm_11.json",
    "saturated_noncm_12.json",
    "saturated_noncm_13.json",
    "saturated_noncm_21.json",
    "saturated_noncm_22.json",
    "saturated_noncm_23.json",
    "saturated_noncm_31.json",
    "saturated_noncm_32.json",
    "saturated_noncm_33.json",
];

pub fn tol(bits: u32) -> Float {
    PrecisionContext::new(bits).unwrap().tol()
}

/// A uniform real in `[0, 1)` with `bits` random bits.
pub fn random_unit<R: Rng>(rng: &mut R, bits: u32) -> Float {
    let limbs: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.gen()).collect();
    let n = Integer::from_digits(&limbs, Order::Lsf);
    Float::with_val(bits, n) >> (64 * limbs.len() as u32)
}

pub fn random_complex<R: Rng>(rng: &mut R, bits: u32) -> BigComplex {
    let half = Float::with_val(bits, 0.5);
    BigComplex::new(
        Float::with_val(bits, random_unit(rng, bits) - &half),
        Float::with_val(bits, random_unit(rng, bits) - &half),
    )
}

/// `ω₁ = r e^{iφ}`, `ω₂ = τω₁` with `τ` in a box inside the upper half-plane.
pub fn random_lattice<R: Rng>(rng: &mut R, ctx: &PrecisionContext) -> Lattice {
    let r: f64 = rng.gen_range(0.5..2.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let tau = BigComplex::from_f64(ctx.bits, rng.gen_range(-0.5..0.5), rng.gen_range(0.6..2.5));
    let w1 = BigComplex::from_f64(ctx.bits, r * phi.cos(), r * phi.sin());
    let w2 = &tau * &w1;
    Lattice::from_periods(&w1, &w2, ctx).unwrap()
}

/// `aω₁ + bω₂` with `a, b` away from the cell edges.
pub fn random_point<R: Rng>(rng: &mut R, lat: &Lattice) -> BigComplex {
    let p = lat.omega1.prec();
    let a = Float::with_val(p, rng.gen_range(0.05..0.95));
    let b = Float::with_val(p, rng.gen_range(0.05..0.95));
    &lat.omega1.scale(&a) + &lat.omega2.scale(&b)
}

/// A point with `|u| ≤ 0.35|ω₁|`, so short paths around it miss the other lattice points.
pub fn random_small_point<R: Rng>(rng: &mut R, lat: &Lattice) -> BigComplex {
    let p = lat.omega1.prec();
    let r: f64 = rng.gen_range(0.15..0.35);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    &lat.omega1 * &BigComplex::from_f64(p, r * t.cos(), r * t.sin())
}

/// `|℘′² − (4℘³ − g₂℘ − g₃)|` relative to the size of the terms.
pub fn ode_residual(lat: &Lattice, z: &BigComplex) -> Float {
    let (p, dp) = lat.wp_pair(z).unwrap();
    let cube = p.powi(3).scale_i64(4);
    let rhs = &(&cube - &(&lat.g2 * &p)) - &lat.g3;
    let lhs = dp.square();
    let scale = [lhs.abs(), cube.abs(), Float::with_val(64, 1)].into_iter().max_by(|a, b| a.total_cmp(b)).unwrap();
    Float::with_val(p.prec(), lhs.dist(&rhs) / scale)
}
