//! Adaptive Gauss–Legendre quadrature at arbitrary precision.
//!
//! Slow and independent of the closed forms: used to cross-check them.

use rug::Float;

use crate::arith::{pi, BigComplex};
use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
    prec: u32,
}

/// `(P_n(x), P_n′(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(prec, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(prec, &p0 * (k - 1) as u32);
        let p2 = Float::with_val(prec, a - b) / k as u32;
        p0 = std::mem::replace(&mut p1, p2);
    }
    let x2m1 = Float::with_val(prec, x * x) - 1u32;
    let num = Float::with_val(prec, x * &p1) - &p0;
    let dp = Float::with_val(prec, num * n as u32) / x2m1;
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize, prec: u32) -> Self {
        let wp = prec + 32;
        let p = pi(wp);
        let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 1..=n {
            let guess = Float::with_val(wp, &p * (4 * i - 1) as u32) / (4 * n + 2) as u32;
            let mut x = guess.cos();
            for _ in 0..100 {
                let (pn, dp) = legendre(n, &x, wp);
                let dx = Float::with_val(wp, &pn / &dp);
                x -= &dx;
                if dx.abs() < tol {
                    break;
                }
            }
            let (_, dp) = legendre(n, &x, wp);
            let one_m = Float::with_val(wp, 1u32) - Float::with_val(wp, &x * &x);
            let w = Float::with_val(wp, 2u32) / (one_m * Float::with_val(wp, &dp * &dp));
            nodes.push(Float::with_val(prec, x));
            weights.push(Float::with_val(prec, w));
        }
        GaussLegendre { nodes, weights, prec }
    }

    /// One panel `∫_a^b f(t) dt`.
    pub fn panel<F>(&self, f: &mut F, a: &Float, b: &Float) -> Result<BigComplex>
    where
        F: FnMut(&Float) -> Result<BigComplex>,
    {
        let prec = self.prec;
        let half = Float::with_val(prec, b - a) / 2u32;
        let mid = Float::with_val(prec, a + b) / 2u32;
        let mut acc = BigComplex::zero(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
            acc = &acc + &f(&t)?.scale(w);
        }
        Ok(acc.scale(&half))
    }
}

/// `∫_a^b f(t) dt` to absolute accuracy about `eps`.
pub fn integrate<F>(mut f: F, a: &Float, b: &Float, eps: &Float, prec: u32) -> Result<BigComplex>
where
    F: FnMut(&Float) -> Result<BigComplex>,
{
    let rule = GaussLegendre::new(30, prec);
    let whole = rule.panel(&mut f, a, b)?;
    let len = Float::with_val(prec, b - a).abs();
    adapt(&rule, &mut f, a, b, whole, eps, &len, 0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(
    rule: &GaussLegendre,
    f: &mut F,
    a: &Float,
    b: &Float,
    whole: BigComplex,
    eps: &Float,
    total: &Float,
    depth: u32,
) -> Result<BigComplex>
where
    F: FnMut(&Float) -> Result<BigComplex>,
{
    let prec = rule.prec;
    let m = Float::with_val(prec, a + b) / 2u32;
    let left = rule.panel(f, a, &m)?;
    let right = rule.panel(f, &m, b)?;
    let sum = &left + &right;
    let local = Float::with_val(prec, eps * Float::with_val(prec, b - a).abs()) / total;
    if sum.dist(&whole) <= local {
        return Ok(sum);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NoConvergence("adaptive quadrature exceeded its depth".into()));
    }
    let l = adapt(rule, f, a, &m, left, eps, total, depth + 1)?;
    let r = adapt(rule, f, &m, b, right, eps, total, depth + 1)?;
    Ok(&l + &r)
}

/// `∫ f(z) dz` along the straight segment from `za` to `zb`.
pub fn integrate_segment<F>(mut f: F, za: &BigComplex, zb: &BigComplex, eps: &Float, prec: u32) -> Result<BigComplex>
where
    F: FnMut(&BigComplex) -> Result<BigComplex>,
{
    let d = zb - za;
    let g = |t: &Float| -> Result<BigComplex> {
        let z = za + &d.scale(t);
        Ok(&f(&z)? * &d)
    };
    integrate(g, &Float::with_val(prec, 0), &Float::with_val(prec, 1), eps, prec)
}

#[cfg(test)]
mod tests {
    use rug::ops::Pow;

    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let rule = GaussLegendre::new(5, 128);
        let mut f = |t: &Float| Ok(BigComplex::from_real(&Float::with_val(128, t.clone().pow(8u32))));
        let v = rule.panel(&mut f, &Float::with_val(128, -1), &Float::with_val(128, 1)).unwrap();
        let exact = Float::with_val(128, 2u32) / 9u32;
        assert!(Float::with_val(128, &v.re - &exact).abs() < 1e-35);
    }

    #[test]
    fn adaptive_log_two() {
        let prec = 256;
        let eps = Float::with_val(prec, Float::i_exp(1, -220));
        let v = integrate(
            |t| Ok(BigComplex::from_real(&(Float::with_val(prec, 1u32) / t))),
            &Float::with_val(prec, 1),
            &Float::with_val(prec, 2),
            &eps,
            prec,
        )
        .unwrap();
        let ln2 = Float::with_val(prec, 2u32).ln();
        assert!(Float::with_val(prec, &v.re - &ln2).abs() < Float::with_val(prec, Float::i_exp(1, -210)));
    }

    #[test]
    fn contour_segment() {
        // ∫ z dz from 0 to 1+i = i
        let prec = 128;
        let eps = Float::with_val(prec, Float::i_exp(1, -100));
        let v = integrate_segment(
            |z| Ok(z.clone()),
            &BigComplex::zero(prec),
            &BigComplex::from_f64(prec, 1.0, 1.0),
            &eps,
            prec,
        )
        .unwrap();
        assert!(v.dist(&BigComplex::i(prec)) < 1e-30);
    }
}
