//! `F(1/2, 1/2, 1; λ)` against the Legendre integral
//! `I(λ) = ∫₀¹ du / √(u(1−u)(1−λu))`.

use rug::Float;
use serde::Serialize;

use crate::arith::{agm, fmt_float, pi, AlgebraicNumber, BigComplex, DecimalComplex, PrecisionContext};
use crate::error::{Error, Result};
use crate::quad::integrate;

/// Which sign of `I = ±πF` matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Clone, Debug)]
pub struct HyperReport {
    pub lambda: BigComplex,
    pub f_value: BigComplex,
    pub i_value: BigComplex,
    pub pi_f: BigComplex,
    /// `|I − sign·πF|`
    pub residual: Float,
    pub sign: Sign,
    /// Finite-difference residual of the hypergeometric equation at `F`.
    pub ode_residual: Float,
    pub precision_bits: u32,
    pub tolerance_exp: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperReportOut {
    pub lambda: DecimalComplex,
    #[serde(rename = "F_value")]
    pub f_value: DecimalComplex,
    #[serde(rename = "I_value")]
    pub i_value: DecimalComplex,
    pub pi_f: DecimalComplex,
    pub residual: String,
    pub sign_resolved: Sign,
    pub ode_residual: String,
    pub precision_bits: u32,
    pub tolerance_exp: u32,
    pub within_tolerance: bool,
}

impl HyperReport {
    pub fn within_tolerance(&self) -> bool {
        self.residual < Float::with_val(self.precision_bits, Float::i_exp(1, -(self.tolerance_exp as i32)))
    }

    pub fn to_report(&self, digits: usize) -> HyperReportOut {
        let sci = |x: &Float| fmt_float(x, 6);
        HyperReportOut {
            lambda: DecimalComplex::new(&self.lambda, digits),
            f_value: DecimalComplex::new(&self.f_value, digits),
            i_value: DecimalComplex::new(&self.i_value, digits),
            pi_f: DecimalComplex::new(&self.pi_f, digits),
            residual: sci(&self.residual),
            sign_resolved: self.sign,
            ode_residual: sci(&self.ode_residual),
            precision_bits: self.precision_bits,
            tolerance_exp: self.tolerance_exp,
            within_tolerance: self.within_tolerance(),
        }
    }
}

fn series_radius(prec: u32) -> Float {
    Float::with_val(prec, 1u32) - Float::with_val(prec, Float::i_exp(1, -8))
}

/// `Σ ((1/2)_n / n!)² λⁿ`, summed until the geometric tail bound drops below `2^-bits`.
pub fn hyper_f(lambda: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    series_at(lambda, ctx.bits)
}

fn series_at(lambda: &BigComplex, bits: u32) -> Result<BigComplex> {
    let wp = bits + 32;
    let lam = lambda.with_prec(wp);
    let r = lam.abs();
    if r >= series_radius(wp) {
        return Err(Error::OutOfSeriesDomain);
    }
    let eps = Float::with_val(wp, Float::i_exp(1, -(bits as i32 + 8)));
    // the term ratio is below |λ|, so the tail after `term` is at most |term|·|λ|/(1−|λ|)
    let tail_factor = Float::with_val(wp, &r / Float::with_val(wp, 1u32 - &r));
    let mut term = BigComplex::one(wp);
    let mut sum = BigComplex::one(wp);
    let mut n: u64 = 0;
    loop {
        let num = Float::with_val(wp, 2 * n + 1).square();
        let den = Float::with_val(wp, 2 * n + 2).square();
        term = (&term * &lam).scale(&(num / den));
        sum = &sum + &term;
        n += 1;
        if Float::with_val(wp, term.abs() * &tail_factor) < eps && term.abs() < eps {
            break;
        }
    }
    Ok(sum.with_prec(bits))
}

/// `I(λ) = π / AGM(1, √(1−λ))` with the principal root.
pub fn legendre_i(lambda: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let wp = ctx.bits + 32;
    let lam = lambda.with_prec(wp);
    if lam.im.is_zero() && lam.re >= 1 {
        return Err(Error::PoleOnPath(format!("lambda = {} lies on [1, inf)", lam.re.to_f64())));
    }
    let k = (&BigComplex::one(wp) - &lam).sqrt();
    let m = agm(&BigComplex::one(wp), &k);
    Ok((&BigComplex::from_real(&pi(wp)) / &m).with_prec(ctx.bits))
}

/// `I(λ) = ∫₀^{π/2} 2 dθ / √(1 − λ sin²θ)` by adaptive Gauss–Legendre, after `u = sin²θ`.
pub fn legendre_quadrature(lambda: &BigComplex, eps: &Float, prec: u32) -> Result<BigComplex> {
    let lam = lambda.with_prec(prec);
    let one = BigComplex::one(prec);
    let f = |t: &Float| -> Result<BigComplex> {
        let s = Float::with_val(prec, t.sin_ref());
        let v = &one - &lam.scale(&s.square());
        Ok(v.sqrt().recip().scale_i64(2))
    };
    integrate(f, &Float::new(prec), &Float::with_val(prec, pi(prec) / 2u32), eps, prec)
}

/// `|λ(λ−1)F″ + (2λ−1)F′ + F/4|` with central differences at extra precision.
pub fn ode_residual(lambda: &BigComplex, ctx: &PrecisionContext) -> Result<Float> {
    let wp = 3 * ctx.bits + 64;
    let lam = lambda.with_prec(wp);
    let h = BigComplex::from_real(&Float::with_val(wp, Float::i_exp(1, -(ctx.bits as i32))));
    let f0 = series_at(&lam, wp)?;
    let fp = series_at(&(&lam + &h), wp)?;
    let fm = series_at(&(&lam - &h), wp)?;
    let d1 = &(&fp - &fm) / &h.scale_i64(2);
    let d2 = &(&(&fp + &fm) - &f0.scale_i64(2)) / &h.square();
    let one = BigComplex::one(wp);
    let a = &lam * &(&lam - &one);
    let b = &lam.scale_i64(2) - &one;
    let quarter = f0.scale(&Float::with_val(wp, 0.25));
    let r = &(&(&a * &d2) + &(&b * &d1)) + &quarter;
    Ok(Float::with_val(ctx.bits, r.abs()))
}

/// Compares `I(λ)` with `±πF(λ)`, picking the sign that matches.
pub fn euler_check(lambda: &AlgebraicNumber, ctx: &PrecisionContext) -> Result<HyperReport> {
    if let Some(q) = lambda.as_rational() {
        if q == 0 || q == 1 {
            return Err(Error::Domain(format!("lambda = {q} is excluded")));
        }
    }
    let lam = lambda.eval(ctx)?;
    let f = hyper_f(&lam, ctx)?;
    let i = legendre_i(&lam, ctx)?;
    let pi_f = f.scale(&pi(ctx.bits));
    let plus = i.dist(&pi_f);
    let minus = (&i + &pi_f).abs();
    let (sign, residual) = if plus <= minus { (Sign::Plus, plus) } else { (Sign::Minus, minus) };
    Ok(HyperReport {
        ode_residual: ode_residual(&lam, ctx)?,
        lambda: lam,
        f_value: f,
        i_value: i,
        pi_f,
        residual,
        sign,
        precision_bits: ctx.bits,
        tolerance_exp: ctx.tol_exp(),
    })
}
