use rug::Float;
use serde::Serialize;

use super::chain::{Chain, Leg};
use super::form::{DifferentialForm, FormKind, RationalFunction};
use crate::arith::{pi, AlgebraicNumber, BigComplex, PrecisionContext};
use crate::elliptic::{EllipticPoint, Lattice};
use crate::error::{Error, Result};

/// Label under which windings around the point at infinity are recorded.
pub const INFINITY: &str = "infinity";

/// `z − 2πik` with imaginary part in `(−π, π]`.
pub fn reduce_two_pi_i(z: &BigComplex) -> BigComplex {
    let p = pi(z.prec());
    let two_pi = Float::with_val(z.prec(), &p * 2u32);
    let k = Float::with_val(z.prec(), &z.im / &two_pi).round();
    let mut im = Float::with_val(z.prec(), &z.im - Float::with_val(z.prec(), &k * &two_pi));
    if im <= -p.clone() {
        im += &two_pi;
    }
    BigComplex::new(z.re.clone(), im)
}

fn weighted(coeff: i64, z: BigComplex) -> BigComplex {
    z.scale_i64(coeff)
}

/// `Σ a_i ω(γ_i)`: each leg contributes the difference of its lifts.
pub fn incomplete_first(chain: &Chain, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    let mut acc = BigComplex::zero(lat.omega1.prec());
    for leg in &chain.legs {
        let (v, v2) = leg.lifts(lat)?;
        acc = &acc + &weighted(leg.coeff, &v2 - &v);
    }
    Ok(acc)
}

/// `∫ ℘(z)dz` between two lifts.
pub fn second_between(v: &BigComplex, v2: &BigComplex, lat: &Lattice) -> Result<BigComplex> {
    Ok(&lat.zeta(v)? - &lat.zeta(v2)?)
}

/// `Σ a_i η(γ_i)` with `η = x·dx/y`.
pub fn incomplete_second(chain: &Chain, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    let mut acc = BigComplex::zero(lat.omega1.prec());
    for leg in &chain.legs {
        if leg.start.is_infinity() || leg.end.is_infinity() {
            return Err(Error::PoleHit("η has a double pole at infinity".into()));
        }
        let (v, v2) = leg.lifts(lat)?;
        acc = &acc + &weighted(leg.coeff, second_between(&v, &v2, lat)?);
    }
    Ok(acc)
}

fn near_lattice(z: &BigComplex, lat: &Lattice) -> Result<bool> {
    let (z0, _, _) = lat.reduce(z)?;
    Ok(lat.near_pole(&z0))
}

/// `log F(v2,u)/F(v,u)` reduced to the principal strip.
pub fn third_between(v: &BigComplex, v2: &BigComplex, u: &BigComplex, lat: &Lattice) -> Result<BigComplex> {
    for z in [v, v2] {
        if near_lattice(z, lat)? || near_lattice(&(z - u), lat)? {
            return Err(Error::PoleHit("chain endpoint at a pole of ξ_P".into()));
        }
    }
    let d = &lat.log_f_factor(v2, u)? - &lat.log_f_factor(v, u)?;
    Ok(reduce_two_pi_i(&d))
}

/// `Σ a_i (log F(v_i+w_i,u)/F(v_i,u) + 2πiν_i)` plus `2πi` times the net
/// residue picked up by the windings: `+1` around `P`, `−1` around infinity.
///
/// `nu` may be empty (all zero) or hold one entry per leg.
pub fn incomplete_third(
    chain: &Chain,
    p: &EllipticPoint,
    label: &str,
    nu: &[i64],
    lat: &Lattice,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    if !nu.is_empty() && nu.len() != chain.legs.len() {
        return Err(Error::ShapeMismatch(format!("{} branch integers for {} legs", nu.len(), chain.legs.len())));
    }
    let u = lat.log_point(p)?;
    let two_pi_i = BigComplex::two_pi_i(lat.omega1.prec());
    let mut acc = BigComplex::zero(lat.omega1.prec());
    for (i, leg) in chain.legs.iter().enumerate() {
        let (v, v2) = leg.lifts(lat)?;
        let turns = nu.get(i).copied().unwrap_or(0) + winding(leg, label) - winding(leg, INFINITY);
        let val = &third_between(&v, &v2, &u, lat)? + &two_pi_i.scale_i64(turns);
        acc = &acc + &weighted(leg.coeff, val);
    }
    Ok(acc)
}

fn winding(leg: &Leg, label: &str) -> i64 {
    leg.windings.get(label).copied().unwrap_or(0)
}

/// The pieces of the σ-identity at `u`.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaPeriod {
    /// `uζ(u) − 2 log σ(u)`.
    pub value: BigComplex,
    /// `log(℘(u) − ℘(u/2))`, algebraic when `℘(u)` is.
    pub correction: BigComplex,
    /// `ξ_P` over the lifted path `u/2 → −u/2`, principal branch.
    pub third_kind: BigComplex,
    /// `value + third_kind − correction`, reduced modulo `2πi`.
    pub residual: BigComplex,
}

pub fn sigma_period(u: &BigComplex, lat: &Lattice, ctx: &PrecisionContext) -> Result<SigmaPeriod> {
    lat.check_ctx(ctx)?;
    if near_lattice(u, lat)? {
        return Err(Error::PoleHit("u lies on the lattice".into()));
    }
    let value = &(u * &lat.zeta(u)?) - &lat.log_sigma(u)?.scale_i64(2);
    let half = u.scale(&Float::with_val(u.prec(), 0.5));
    let correction = (&lat.wp(u)? - &lat.wp(&half)?).ln()?;
    let third_kind = third_between(&half, &-&half, u, lat)?;
    let residual = reduce_two_pi_i(&(&(&value + &third_kind) - &correction));
    Ok(SigmaPeriod { value, correction, third_kind, residual })
}

/// `∫₁^α dz/z` along a path winding `branch_shift` extra times around 0.
pub fn log_period(alpha: &AlgebraicNumber, branch_shift: i64, ctx: &PrecisionContext) -> Result<BigComplex> {
    if alpha.as_rational().is_some_and(|q| q == 0) {
        return Err(Error::ZeroArgument);
    }
    let a = alpha.eval(ctx)?;
    if ctx.is_zero(&a.abs()) {
        return Err(Error::ZeroArgument);
    }
    Ok(&a.ln()? + &BigComplex::two_pi_i(ctx.bits).scale_i64(branch_shift))
}

fn exact_at(f: &RationalFunction, p: &EllipticPoint, lat: &Lattice) -> Result<BigComplex> {
    match p.xy(lat.omega1.prec())? {
        None => f.at_infinity(lat.omega1.prec()),
        Some((x, _)) => f.eval(&x, lat.omega1.prec(), &lat.ctx().tol()),
    }
}

/// `Σ a_i (f(γ_i(1)) − f(γ_i(0)))`.
pub fn exact_boundary_sum(f: &RationalFunction, chain: &Chain, lat: &Lattice) -> Result<BigComplex> {
    let mut acc = BigComplex::zero(lat.omega1.prec());
    for leg in &chain.legs {
        let d = &exact_at(f, &leg.end, lat)? - &exact_at(f, &leg.start, lat)?;
        acc = &acc + &weighted(leg.coeff, d);
    }
    Ok(acc)
}

/// The period `∫_σ ϑ` of a form in the `ω, η, ξ_P, df` decomposition.
pub fn form_period(
    form: &DifferentialForm,
    chain: &Chain,
    lat: &Lattice,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    form.validate()?;
    let bits = lat.omega1.prec();
    let mut acc = BigComplex::zero(bits);
    if form.kind() == FormKind::Zero && form.exact_part.is_none() {
        return Ok(acc);
    }
    if !super::form::is_zero(&form.a) {
        acc = &acc + &(&form.a.eval_bits(bits)? * &incomplete_first(chain, lat, ctx)?);
    }
    if !super::form::is_zero(&form.b) {
        acc = &acc + &(&form.b.eval_bits(bits)? * &incomplete_second(chain, lat, ctx)?);
    }
    for t in form.thirds.iter().filter(|t| !super::form::is_zero(&t.coeff)) {
        let v = incomplete_third(chain, &t.point, &t.label, &[], lat, ctx)?;
        acc = &acc + &(&t.coeff.eval_bits(bits)? * &v);
    }
    if let Some(f) = &form.exact_part {
        acc = &acc + &exact_boundary_sum(f, chain, lat)?;
    }
    Ok(acc)
}
