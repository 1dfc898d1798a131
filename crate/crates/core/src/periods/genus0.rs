use rug::Float;
use serde::{Deserialize, Serialize};

use super::form::{eval_coeffs, horner};
use crate::arith::{AlgebraicNumber, BigComplex, PrecisionContext};
use crate::error::{Error, Result};

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclaredRoot {
    pub value: AlgebraicNumber,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

/// `∫_a^b P(x)/Q(x) dx` along the straight segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Genus0Integral {
    pub numer: Vec<AlgebraicNumber>,
    pub denom: Vec<AlgebraicNumber>,
    pub roots: Vec<DeclaredRoot>,
    pub a: AlgebraicNumber,
    pub b: AlgebraicNumber,
}

/// Principal part `Σ_j c_j (x−α)^{−j}` at one root; `coeffs[0]` is the residue.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipalPart {
    pub root: BigComplex,
    pub multiplicity: u32,
    pub coeffs: Vec<BigComplex>,
}

impl PrincipalPart {
    pub fn residue(&self) -> &BigComplex {
        &self.coeffs[0]
    }
}

/// `P/Q = S + Σ_k Σ_j c_kj (x−α_k)^{−j}` with `S` a polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub polynomial: Vec<BigComplex>,
    pub parts: Vec<PrincipalPart>,
}

impl Decomposition {
    /// The rational antiderivative `F` of the non-logarithmic part.
    pub fn exact_antiderivative(&self, x: &BigComplex) -> BigComplex {
        let prec = x.prec();
        let mut acc = BigComplex::zero(prec);
        let mut xp = x.clone();
        for (k, c) in self.polynomial.iter().enumerate() {
            acc = &acc + &(&(c * &xp) / &BigComplex::from_i64(prec, k as i64 + 1));
            xp = &xp * x;
        }
        for part in &self.parts {
            let d = x - &part.root;
            for (j, c) in part.coeffs.iter().enumerate().skip(1) {
                let e = 1 - (j as i64 + 1);
                acc = &acc + &(&(c * &d.powi(e)) / &BigComplex::from_i64(prec, e));
            }
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Genus0Period {
    pub value: BigComplex,
    /// `F(b) − F(a)`, algebraic.
    pub exact_part: BigComplex,
    /// `Σ r_k log((b−α_k)/(a−α_k))`.
    pub log_part: BigComplex,
    pub decomposition: Decomposition,
}

fn trim(mut p: Vec<BigComplex>, tol: &Float) -> Vec<BigComplex> {
    while p.last().is_some_and(|c| c.abs() <= *tol) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigComplex], b: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    let mut out = vec![BigComplex::zero(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn divmod(n: &[BigComplex], d: &[BigComplex], prec: u32) -> (Vec<BigComplex>, Vec<BigComplex>) {
    let mut r = n.to_vec();
    let dl = d.len() - 1;
    if r.len() <= dl {
        return (vec![], r);
    }
    let mut q = vec![BigComplex::zero(prec); r.len() - dl];
    for k in (0..q.len()).rev() {
        let c = &r[k + dl] / &d[dl];
        for (i, di) in d.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&c * di);
        }
        q[k] = c;
    }
    r.truncate(dl);
    (q, r)
}

/// Taylor coefficients of `p(α + t)` up to `t^{len−1}`.
fn taylor_at(p: &[BigComplex], alpha: &BigComplex, len: usize) -> Vec<BigComplex> {
    let prec = alpha.prec();
    let mut c = p.to_vec();
    let mut out = vec![];
    for _ in 0..len {
        // synthetic division by (x − α): remainder is the next coefficient
        let mut acc = BigComplex::zero(prec);
        let mut q = vec![BigComplex::zero(prec); c.len().saturating_sub(1)];
        for k in (0..c.len()).rev() {
            acc = &(&acc * alpha) + &c[k];
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        out.push(if c.is_empty() { BigComplex::zero(prec) } else { acc });
        c = q;
    }
    out
}

fn series_div(num: &[BigComplex], den: &[BigComplex]) -> Vec<BigComplex> {
    let mut out: Vec<BigComplex> = vec![];
    for k in 0..num.len() {
        let mut s = num[k].clone();
        for j in 1..=k {
            s = &s - &(&den[j] * &out[k - j]);
        }
        out.push(&s / &den[0]);
    }
    out
}

/// Distance from `z` to the segment `[a, b]`.
fn segment_distance(z: &BigComplex, a: &BigComplex, b: &BigComplex) -> Float {
    let d = b - a;
    let len2 = d.norm_sqr();
    let prec = z.prec();
    if len2.is_zero() {
        return z.dist(a);
    }
    let w = z - a;
    let t = Float::with_val(prec, &w.re * &d.re) + Float::with_val(prec, &w.im * &d.im);
    let t = (t / len2).clamp(&Float::with_val(prec, 0), &Float::with_val(prec, 1));
    z.dist(&(a + &d.scale(&t)))
}

/// Partial fractions of `numer/denom`, checked against the declared roots.
pub fn decompose(
    numer: &[AlgebraicNumber],
    denom: &[AlgebraicNumber],
    roots: &[DeclaredRoot],
    ctx: &PrecisionContext,
) -> Result<Decomposition> {
    let wp = ctx.bits + 32;
    let tol = ctx.tol();
    let n = trim(eval_coeffs(numer, wp)?, &Float::with_val(wp, 0));
    let d = trim(eval_coeffs(denom, wp)?, &Float::with_val(wp, 0));
    if d.is_empty() {
        return Err(Error::Domain("zero denominator".into()));
    }
    let lead = d.last().expect("nonempty").clone();
    let alphas: Vec<BigComplex> = roots.iter().map(|r| r.value.eval_bits(wp)).collect::<Result<_>>()?;
    let mut expanded = vec![lead.clone()];
    for (alpha, r) in alphas.iter().zip(roots) {
        if r.multiplicity == 0 {
            return Err(Error::RootMismatch("multiplicity 0".into()));
        }
        for _ in 0..r.multiplicity {
            expanded = poly_mul(&expanded, &[-alpha, BigComplex::one(wp)], wp);
        }
    }
    let scale = d.iter().map(|c| c.abs()).fold(Float::with_val(wp, 1), |m, x| m.max(&x));
    let bad = expanded.len() != d.len()
        || expanded.iter().zip(&d).any(|(x, y)| x.dist(y) > Float::with_val(wp, &tol * &scale));
    if bad {
        return Err(Error::RootMismatch(format!("{} declared roots for degree {}", expanded.len() - 1, d.len() - 1)));
    }
    for (i, x) in alphas.iter().enumerate() {
        if alphas[..i].iter().any(|y| x.dist(y) <= tol) {
            return Err(Error::RootMismatch("repeated root; use its multiplicity".into()));
        }
    }
    let (polynomial, rem) = if n.is_empty() { (vec![], vec![]) } else { divmod(&n, &d, wp) };
    let mut parts = vec![];
    for (k, (alpha, r)) in alphas.iter().zip(roots).enumerate() {
        let m = r.multiplicity as usize;
        let mut den = vec![lead.clone()];
        for (l, (beta, s)) in alphas.iter().zip(roots).enumerate() {
            if l != k {
                for _ in 0..s.multiplicity {
                    den = poly_mul(&den, &[-beta, BigComplex::one(wp)], wp);
                }
            }
        }
        let g = series_div(&taylor_at(&rem, alpha, m), &taylor_at(&den, alpha, m));
        // g_i is the coefficient of (x−α)^{i−m}
        let coeffs = (1..=m).map(|j| g[m - j].clone()).collect();
        parts.push(PrincipalPart { root: alpha.clone(), multiplicity: r.multiplicity, coeffs });
    }
    Ok(Decomposition { polynomial, parts })
}

pub fn genus0_period(job: &Genus0Integral, ctx: &PrecisionContext) -> Result<Genus0Period> {
    let wp = ctx.bits + 32;
    let decomposition = decompose(&job.numer, &job.denom, &job.roots, ctx)?;
    let a = job.a.eval_bits(wp)?;
    let b = job.b.eval_bits(wp)?;
    let tol = ctx.tol();
    for p in &decomposition.parts {
        if segment_distance(&p.root, &a, &b) <= tol {
            return Err(Error::PoleOnPath("a declared root lies on the segment".into()));
        }
    }
    let exact_part = &decomposition.exact_antiderivative(&b) - &decomposition.exact_antiderivative(&a);
    let mut log_part = BigComplex::zero(wp);
    for p in &decomposition.parts {
        let ratio = &(&b - &p.root) / &(&a - &p.root);
        log_part = &log_part + &(p.residue() * &ratio.ln()?);
    }
    Ok(Genus0Period { value: &exact_part + &log_part, exact_part, log_part, decomposition })
}

/// `P(x)/Q(x)` evaluated directly, for the quadrature oracle.
pub fn integrand(job: &Genus0Integral, x: &BigComplex) -> Result<BigComplex> {
    let prec = x.prec();
    Ok(&horner(&eval_coeffs(&job.numer, prec)?, x) / &horner(&eval_coeffs(&job.denom, prec)?, x))
}
