use rug::{Float, Integer};

use crate::arith::{agm, pi, poly, AlgebraicNumber, BigComplex, PrecisionContext};
use crate::error::{Error, Result};

/// Extra bits carried internally beyond the caller's context.
pub(crate) const WORK_EXTRA: u32 = 32;

/// A period lattice `Zω₁ + Zω₂` with its Weierstrass invariants.
///
/// The basis is reduced (`|Re τ| ≤ 1/2`, `|τ| ≥ 1`, `Im τ > 0`) and
/// normalised so that `ω₁` lies in the right half-plane.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub omega1: BigComplex,
    pub omega2: BigComplex,
    pub tau: BigComplex,
    pub g2: BigComplex,
    pub g3: BigComplex,
    pub g2_alg: Option<AlgebraicNumber>,
    pub g3_alg: Option<AlgebraicNumber>,
    /// Roots of `4x³ − g₂x − g₃`, ascending by (Re, Im).
    pub roots: [BigComplex; 3],
    pub(crate) ctx: PrecisionContext,
    pub(crate) wp: u32,
    pub(crate) q: BigComplex,
    pub(crate) eta1: BigComplex,
    pub(crate) eta2: BigComplex,
    pub(crate) theta_p0: BigComplex,
}

/// Theta series `θ₁` (without its `q^{1/4}` factor) and three derivatives in `v`.
pub(crate) fn theta_derivs(v: &BigComplex, q: &BigComplex, wp: u32) -> [BigComplex; 4] {
    let w = v.mul_i().exp();
    let wi = w.recip();
    let w2 = w.square();
    let wi2 = wi.square();
    let q2 = q.square();
    let mut pos = w;
    let mut neg = wi;
    let mut qn = BigComplex::one(wp);
    let mut qstep = q2.clone();
    let mut t: [BigComplex; 4] = std::array::from_fn(|_| BigComplex::zero(wp));
    let half = Float::with_val(wp, 0.5);
    let stop = -(wp as i32) - 8;
    for n in 0u64.. {
        let k = 2 * n + 1;
        let kf = Float::with_val(wp, k);
        let s = (&pos - &neg).scale(&half).mul_i();
        let s = -s;
        let c = (&pos + &neg).scale(&half);
        let mut a = &qn * &s;
        let mut b = &qn * &c;
        if n % 2 == 1 {
            a = -a;
            b = -b;
        }
        let bk = b.scale(&kf);
        let ak2 = a.scale(&Float::with_val(wp, &kf * &kf));
        let bk3 = bk.scale(&Float::with_val(wp, &kf * &kf));
        let mag = [&a, &bk3].iter().filter_map(|x| x.mag_exp()).max();
        t[0] = &t[0] + &a;
        t[1] = &t[1] + &bk;
        t[2] = &t[2] - &ak2;
        t[3] = &t[3] - &bk3;
        if n > 0 && mag.is_none_or(|e| e < stop) {
            break;
        }
        pos = &pos * &w2;
        neg = &neg * &wi2;
        qn = &qn * &qstep;
        qstep = &qstep * &q2;
    }
    t.map(|x| x.scale_i64(2))
}

/// `θ₁′(0)` and `θ₁‴(0)` in the same normalisation as [`theta_derivs`].
fn theta_at_zero(q: &BigComplex, wp: u32) -> (BigComplex, BigComplex) {
    let q2 = q.square();
    let mut qn = BigComplex::one(wp);
    let mut qstep = q2.clone();
    let mut d1 = BigComplex::zero(wp);
    let mut d3 = BigComplex::zero(wp);
    let stop = -(wp as i32) - 8;
    for n in 0i64.. {
        let k = 2 * n + 1;
        let sgn = if n % 2 == 0 { 1 } else { -1 };
        let a = qn.scale_i64(sgn * k);
        let b = a.scale_i64(k * k);
        d1 = &d1 + &a;
        d3 = &d3 - &b;
        if n > 0 && b.mag_exp().is_none_or(|e| e < stop) {
            break;
        }
        qn = &qn * &qstep;
        qstep = &qstep * &q2;
    }
    (d1.scale_i64(2), d3.scale_i64(2))
}

/// `g₂, g₃` of `Zω₁ + Zω₂` from Eisenstein series in `q = e^{2πiτ}`.
pub fn eisenstein_invariants(omega1: &BigComplex, omega2: &BigComplex, wp: u32) -> (BigComplex, BigComplex) {
    let tau = omega2 / omega1;
    let p = pi(wp);
    let q = BigComplex::from_real(&Float::with_val(wp, &p * 2u32)).mul_i();
    let q = (&q * &tau).exp();
    let mut qn = BigComplex::one(wp);
    let mut s3 = BigComplex::zero(wp);
    let mut s5 = BigComplex::zero(wp);
    let one = BigComplex::one(wp);
    let stop = -(wp as i32) - 8;
    for n in 1i64.. {
        qn = &qn * &q;
        let r = &qn / &(&one - &qn);
        let t3 = r.scale_i64(n * n * n);
        let t5 = t3.scale_i64(n * n);
        s3 = &s3 + &t3;
        s5 = &s5 + &t5;
        if t5.mag_exp().is_none_or(|e| e < stop) {
            break;
        }
    }
    let e4 = &one + &s3.scale_i64(240);
    let e6 = &one - &s5.scale_i64(504);
    let p2 = Float::with_val(wp, &p * &p);
    let p4 = Float::with_val(wp, &p2 * &p2);
    let p6 = Float::with_val(wp, &p4 * &p2);
    let w4 = omega1.powi(4);
    let w6 = omega1.powi(6);
    let g2 = (&e4 / &w4).scale(&Float::with_val(wp, &p4 * 4u32)).scale(&Float::with_val(wp, 3).recip());
    let g3 = (&e6 / &w6).scale(&Float::with_val(wp, &p6 * 8u32)).scale(&Float::with_val(wp, 27).recip());
    (g2, g3)
}

pub(crate) fn round_i64(x: &Float) -> Result<i64> {
    x.to_integer()
        .as_ref()
        .and_then(Integer::to_i64)
        .ok_or_else(|| Error::InvariantViolation(format!("coordinate {} cannot be reduced", x.to_f64())))
}

/// Reduced, oriented and normalised basis of the lattice spanned by `w1, w2`.
fn reduce_basis(w1: &BigComplex, w2: &BigComplex, tol: &Float) -> Result<(BigComplex, BigComplex)> {
    let mut w1 = w1.clone();
    let mut w2 = w2.clone();
    if (&w2 / &w1).im.is_sign_negative() {
        w2 = -w2;
    }
    let one_minus = Float::with_val(w1.prec(), 1 - Float::with_val(w1.prec(), tol));
    let half = Float::with_val(w1.prec(), 0.5);
    for _ in 0..10_000 {
        let tau = &w2 / &w1;
        let mut n = round_i64(&tau.re)?;
        let re = Float::with_val(w1.prec(), &tau.re - n);
        if re <= Float::with_val(w1.prec(), tol - half.clone()) {
            n -= 1;
        }
        w2 = &w2 - &w1.scale_i64(n);
        let tau = &w2 / &w1;
        if tau.norm_sqr() < one_minus {
            let t = w1;
            w1 = w2;
            w2 = -t;
        } else {
            let flat = Float::with_val(w1.prec(), w1.re.abs_ref()) < Float::with_val(w1.prec(), tol * w1.abs());
            let negative = if flat { w1.im.is_sign_negative() } else { w1.re.is_sign_negative() };
            if negative {
                w1 = -w1;
                w2 = -w2;
            }
            return Ok((w1, w2));
        }
    }
    Err(Error::NoConvergence("lattice basis reduction".into()))
}

fn sort_roots(mut r: Vec<BigComplex>) -> [BigComplex; 3] {
    r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    [r[0].clone(), r[1].clone(), r[2].clone()]
}

fn relative_ok(a: &BigComplex, b: &BigComplex, tol: &Float) -> bool {
    let scale = Float::with_val(a.prec(), 1).max(&b.abs());
    a.dist(b) <= Float::with_val(a.prec(), tol * scale)
}

impl Lattice {
    fn assemble(
        w1: BigComplex,
        w2: BigComplex,
        g2: BigComplex,
        g3: BigComplex,
        roots: [BigComplex; 3],
        ctx: PrecisionContext,
    ) -> Result<Self> {
        let wp = ctx.bits + WORK_EXTRA;
        let tau = &w2 / &w1;
        let p = pi(wp);
        let q = tau.scale(&p).mul_i().exp();
        let (d1, d3) = theta_at_zero(&q, wp);
        let p2 = Float::with_val(wp, &p * &p);
        let eta1 = -(&d3 / &(&d1 * &w1.scale_i64(3))).scale(&p2);
        let mut lat = Lattice {
            omega1: w1,
            omega2: w2,
            tau,
            g2,
            g3,
            g2_alg: None,
            g3_alg: None,
            roots,
            ctx,
            wp,
            q,
            eta1,
            eta2: BigComplex::zero(wp),
            theta_p0: d1,
        };
        let half = lat.omega2.scale(&Float::with_val(wp, 0.5));
        lat.eta2 = lat.zeta_centered(&half).scale_i64(2);
        Ok(lat)
    }

    /// Lattice with the given invariants; fails on a (near-)singular cubic.
    pub fn from_invariants(g2: &BigComplex, g3: &BigComplex, ctx: &PrecisionContext) -> Result<Self> {
        let wp = ctx.bits + WORK_EXTRA;
        let g2 = g2.with_prec(wp);
        let g3 = g3.with_prec(wp);
        let tol = ctx.tol();
        let disc = &g2.powi(3) - &g3.square().scale_i64(27);
        let scale = Float::with_val(wp, 1).max(&g2.powi(3).abs()).max(&g3.square().scale_i64(27).abs());
        if disc.abs() < Float::with_val(wp, &tol * &scale) {
            return Err(Error::DegenerateLattice);
        }
        let cubic = [-&g3, -&g2, BigComplex::zero(wp), BigComplex::from_i64(wp, 4)];
        let r = poly::roots(&cubic, wp)?;
        let p = pi(wp);
        let mut cands = vec![];
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let a = (&r[k] - &r[i]).sqrt();
            let b = (&r[k] - &r[j]).sqrt();
            for bb in [b.clone(), -b] {
                let m = agm(&a, &bb);
                if !m.is_exact_zero() {
                    cands.push(BigComplex::from_real(&p) / m);
                }
            }
        }
        let indep = Float::with_val(wp, Float::i_exp(1, -(ctx.bits as i32) / 2));
        for x in 0..cands.len() {
            for y in x + 1..cands.len() {
                let ratio = &cands[y] / &cands[x];
                if ratio.im.clone().abs() < indep {
                    continue;
                }
                let (w1, w2) = reduce_basis(&cands[x], &cands[y], &tol)?;
                let (c2, c3) = eisenstein_invariants(&w1, &w2, wp);
                if relative_ok(&c2, &g2, &tol) && relative_ok(&c3, &g3, &tol) {
                    return Lattice::assemble(w1, w2, g2, g3, sort_roots(r), *ctx);
                }
            }
        }
        Err(Error::NoConvergence("no candidate period pair reproduces the invariants".into()))
    }

    /// Lattice with algebraic invariants, kept alongside their numeric values.
    pub fn from_algebraic(g2: &AlgebraicNumber, g3: &AlgebraicNumber, ctx: &PrecisionContext) -> Result<Self> {
        let wp = ctx.bits + WORK_EXTRA;
        let mut lat = Lattice::from_invariants(&g2.eval_bits(wp)?, &g3.eval_bits(wp)?, ctx)?;
        lat.g2_alg = Some(g2.clone());
        lat.g3_alg = Some(g3.clone());
        Ok(lat)
    }

    /// Lattice spanned by two R-independent periods.
    pub fn from_periods(w1: &BigComplex, w2: &BigComplex, ctx: &PrecisionContext) -> Result<Self> {
        let wp = ctx.bits + WORK_EXTRA;
        let ratio = w2 / w1;
        if ratio.im.clone().abs() < ctx.tol() {
            return Err(Error::DegenerateLattice);
        }
        let (w1, w2) = reduce_basis(&w1.with_prec(wp), &w2.with_prec(wp), &ctx.tol())?;
        let (g2, g3) = eisenstein_invariants(&w1, &w2, wp);
        let cubic = [-&g3, -&g2, BigComplex::zero(wp), BigComplex::from_i64(wp, 4)];
        let r = poly::roots(&cubic, wp)?;
        Lattice::assemble(w1, w2, g2, g3, sort_roots(r), *ctx)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub(crate) fn check_ctx(&self, ctx: &PrecisionContext) -> Result<()> {
        if ctx.bits > self.ctx.bits {
            return Err(Error::InvalidContext(format!(
                "lattice built at {} bits, {} requested",
                self.ctx.bits, ctx.bits
            )));
        }
        Ok(())
    }

    /// `mω₁ + nω₂`.
    pub fn point(&self, m: i64, n: i64) -> BigComplex {
        &self.omega1.scale_i64(m) + &self.omega2.scale_i64(n)
    }

    /// `mη₁ + nη₂`.
    pub fn eta_of(&self, m: i64, n: i64) -> BigComplex {
        &self.eta1.scale_i64(m) + &self.eta2.scale_i64(n)
    }

    /// Real coordinates `(a, b)` with `z = aω₁ + bω₂`.
    pub fn coords(&self, z: &BigComplex) -> (Float, Float) {
        let t = &z.with_prec(self.wp) / &self.omega1;
        let b = Float::with_val(self.wp, &t.im / &self.tau.im);
        let a = Float::with_val(self.wp, &t.re - Float::with_val(self.wp, &b * &self.tau.re));
        (a, b)
    }

    /// `z = z₀ + mω₁ + nω₂` with `z₀` in the centred cell.
    pub fn reduce(&self, z: &BigComplex) -> Result<(BigComplex, i64, i64)> {
        let (a, b) = self.coords(z);
        let m = round_i64(&a)?;
        let n = round_i64(&b)?;
        Ok((&z.with_prec(self.wp) - &self.point(m, n), m, n))
    }

    /// Is `z₀` (already reduced) within tolerance of a lattice point?
    pub(crate) fn near_pole(&self, z0: &BigComplex) -> bool {
        let tol = Float::with_val(self.wp, self.ctx.tol() * self.omega1.abs());
        (-1..=1).any(|m| (-1..=1).any(|n| z0.dist(&self.point(m, n)) < tol))
    }

    pub(crate) fn theta(&self, z0: &BigComplex) -> [BigComplex; 4] {
        let v = (z0 / &self.omega1).scale(&pi(self.wp));
        theta_derivs(&v, &self.q, self.wp)
    }

    /// `ζ(z₀)` by the theta formula, with no argument reduction.
    pub(crate) fn zeta_centered(&self, z0: &BigComplex) -> BigComplex {
        let t = self.theta(z0);
        let l = &t[1] / &t[0];
        let k = BigComplex::from_real(&pi(self.wp)) / &self.omega1;
        &(&(&self.eta1 * z0) / &self.omega1) + &(&k * &l)
    }

    /// Does `(g₂, g₃)` recomputed from the basis match the stored invariants?
    pub fn invariants_round_trip(&self) -> bool {
        let (c2, c3) = eisenstein_invariants(&self.omega1, &self.omega2, self.wp);
        let tol = self.ctx.tol();
        relative_ok(&c2, &self.g2, &tol) && relative_ok(&c3, &self.g3, &tol)
    }

    pub fn discriminant(&self) -> BigComplex {
        &self.g2.powi(3) - &self.g3.square().scale_i64(27)
    }

    /// `4x³ − g₂x − g₃`.
    pub fn cubic(&self, x: &BigComplex) -> BigComplex {
        let x = x.with_prec(self.wp);
        &(&x.powi(3).scale_i64(4) - &(&self.g2 * &x)) - &self.g3
    }
}
