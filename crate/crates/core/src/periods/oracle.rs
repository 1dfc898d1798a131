//! Quadrature of the pulled-back forms along polylines in `ℂ`.
//!
//! Independent of the closed forms, and much slower.

use rug::Float;

use crate::arith::BigComplex;
use crate::elliptic::Lattice;
use crate::error::Result;
use crate::quad::integrate_segment;

fn polyline<F>(path: &[BigComplex], eps: &Float, mut f: F) -> Result<BigComplex>
where
    F: FnMut(&BigComplex) -> Result<BigComplex>,
{
    let prec = path[0].prec();
    let mut acc = BigComplex::zero(prec);
    for w in path.windows(2) {
        acc = &acc + &integrate_segment(&mut f, &w[0], &w[1], eps, prec)?;
    }
    Ok(acc)
}

/// `∫ dz` along the polyline.
pub fn first_kind(path: &[BigComplex], eps: &Float) -> Result<BigComplex> {
    polyline(path, eps, |z| Ok(BigComplex::one(z.prec())))
}

/// `∫ ℘(z) dz` along the polyline.
pub fn second_kind(path: &[BigComplex], lat: &Lattice, eps: &Float) -> Result<BigComplex> {
    polyline(path, eps, |z| lat.wp(z))
}

/// `∫ (ζ(z−u) − ζ(z) + ζ(u)) dz` along the polyline.
pub fn third_kind(path: &[BigComplex], u: &BigComplex, lat: &Lattice, eps: &Float) -> Result<BigComplex> {
    let zu = lat.zeta(u)?;
    polyline(path, eps, |z| Ok(&(&lat.zeta(&(z - u))? - &lat.zeta(z)?) + &zu))
}

/// `∫ f(x) dx` along the segment `a → b`.
pub fn segment<F>(f: F, a: &BigComplex, b: &BigComplex, eps: &Float) -> Result<BigComplex>
where
    F: FnMut(&BigComplex) -> Result<BigComplex>,
{
    integrate_segment(f, a, b, eps, a.prec())
}
