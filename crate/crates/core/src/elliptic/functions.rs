use rug::Float;
use serde::Serialize;

use super::lattice::Lattice;
use crate::arith::{pi, BigComplex, PrecisionContext};
use crate::error::{Error, Result};

/// Quasi-periods `ηᵢ = 2ζ(ωᵢ/2)`.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiPeriods {
    pub eta1: BigComplex,
    pub eta2: BigComplex,
}

impl QuasiPeriods {
    /// `η₁ω₂ − η₂ω₁ − 2πi`.
    pub fn legendre_residual(&self, lat: &Lattice) -> BigComplex {
        let lhs = &(&self.eta1 * &lat.omega2) - &(&self.eta2 * &lat.omega1);
        &lhs - &BigComplex::two_pi_i(lat.wp)
    }
}

fn pole(z: &BigComplex) -> Error {
    let (re, im) = z.to_c64();
    Error::PoleHit(format!("{re}{im:+}i lies on the lattice"))
}

impl Lattice {
    /// `℘(z)` and `℘′(z)` together.
    pub fn wp_pair(&self, z: &BigComplex) -> Result<(BigComplex, BigComplex)> {
        let (z0, _, _) = self.reduce(z)?;
        if self.near_pole(&z0) {
            return Err(pole(z));
        }
        let t = self.theta(&z0);
        let l = &t[1] / &t[0];
        let l1 = &(&t[2] / &t[0]) - &l.square();
        let l2 = &(&(&t[3] / &t[0]) - &(&(&t[2] * &t[1]) / &t[0].square()).scale_i64(3)) + &l.powi(3).scale_i64(2);
        let k = BigComplex::from_real(&pi(self.wp)) / &self.omega1;
        let wp = -&(&(&self.eta1 / &self.omega1) + &(&k.square() * &l1));
        let wpp = -&(&k.powi(3) * &l2);
        Ok((wp, wpp))
    }

    pub fn wp(&self, z: &BigComplex) -> Result<BigComplex> {
        Ok(self.wp_pair(z)?.0)
    }

    pub fn wp_prime(&self, z: &BigComplex) -> Result<BigComplex> {
        Ok(self.wp_pair(z)?.1)
    }

    pub fn zeta(&self, z: &BigComplex) -> Result<BigComplex> {
        let (z0, m, n) = self.reduce(z)?;
        if self.near_pole(&z0) {
            return Err(pole(z));
        }
        Ok(&self.zeta_centered(&z0) + &self.eta_of(m, n))
    }

    /// `log σ(z)` on some branch; exact modulo `2πi`, never overflows.
    pub fn log_sigma(&self, z: &BigComplex) -> Result<BigComplex> {
        let (z0, m, n) = self.reduce(z)?;
        if self.near_pole(&z0) {
            return Err(Error::ZeroArgument);
        }
        let p = pi(self.wp);
        let t = self.theta(&z0);
        let base = (&self.omega1 / &BigComplex::from_real(&p)).ln()?;
        let gauss = &(&self.eta1 * &z0.square()) / &self.omega1.scale_i64(2);
        let th = (&t[0] / &self.theta_p0).ln()?;
        let mut out = &(&base + &gauss) + &th;
        if m != 0 || n != 0 {
            let w = self.point(m, n);
            let half = w.scale(&Float::with_val(self.wp, 0.5));
            out = &out + &(&self.eta_of(m, n) * &(&z0 + &half));
            if m % 2 != 0 || n % 2 != 0 {
                out = &out + &BigComplex::from_real(&p).mul_i();
            }
        }
        Ok(out)
    }

    pub fn sigma(&self, z: &BigComplex) -> Result<BigComplex> {
        let (z0, _, _) = self.reduce(z)?;
        if self.near_pole(&z0) {
            return Ok(BigComplex::zero(self.wp));
        }
        Ok(self.log_sigma(z)?.exp())
    }

    pub fn quasi_periods(&self) -> QuasiPeriods {
        QuasiPeriods { eta1: self.eta1.clone(), eta2: self.eta2.clone() }
    }

    /// `λ(u, mω₁ + nω₂) = ζ(u)(mω₁+nω₂) − (mη₁+nη₂)u`.
    pub fn lambda(&self, u: &BigComplex, m: i64, n: i64) -> Result<BigComplex> {
        if m == 0 && n == 0 {
            return Ok(BigComplex::zero(self.wp));
        }
        let z = self.zeta(u)?;
        Ok(&(&z * &self.point(m, n)) - &(&self.eta_of(m, n) * u))
    }

    /// `log F(z; u)` on some branch, where `F = σ(z−u)/(σ(z)σ(u))·e^{ζ(u)z}`.
    pub fn log_f_factor(&self, z: &BigComplex, u: &BigComplex) -> Result<BigComplex> {
        let zu = z - u;
        let num = self.log_sigma(&zu).map_err(|_| pole(&zu))?;
        let den = &self.log_sigma(z).map_err(|_| pole(z))? + &self.log_sigma(u).map_err(|_| pole(u))?;
        Ok(&(&num - &den) + &(&self.zeta(u)? * z))
    }

    pub fn f_factor(&self, z: &BigComplex, u: &BigComplex) -> Result<BigComplex> {
        Ok(self.log_f_factor(z, u)?.exp())
    }
}

pub fn wp(z: &BigComplex, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    lat.wp(z)
}

pub fn wp_prime(z: &BigComplex, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    lat.wp_prime(z)
}

pub fn zeta_w(z: &BigComplex, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    lat.zeta(z)
}

pub fn sigma_w(z: &BigComplex, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    lat.sigma(z)
}

pub fn quasi_periods(lat: &Lattice, ctx: &PrecisionContext) -> Result<QuasiPeriods> {
    lat.check_ctx(ctx)?;
    Ok(lat.quasi_periods())
}

pub fn lambda_qp(u: &BigComplex, w: (i64, i64), lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    lat.lambda(u, w.0, w.1)
}

pub fn f_factor(z: &BigComplex, u: &BigComplex, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    lat.f_factor(z, u)
}
