//! Integer relations among high-precision complex numbers, over ℚ or over
//! a declared number field, and ℚ-rank estimation by repeated search.

mod lll;

use rug::float::Round;
use rug::{Float, Integer};
use serde::Serialize;

use crate::arith::{fmt_float, AlgebraicNumber, BigComplex, PrecisionContext};
use crate::error::{Error, Result};

pub use lll::{lll, Reduced};

/// A relation `Σ_{j,k} c_{jk}·b_k·v_j ≈ 0`.
///
/// `coefficients[j·d + k]` multiplies `b_k·v_j` where `b_k` is the `k`-th
/// entry of `field_basis_used` and `d` its length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCertificate {
    pub coefficients: Vec<i64>,
    pub field_basis_used: Vec<AlgebraicNumber>,
    /// `|Σ c·w| / max|w|` as a decimal string.
    pub residual: String,
    pub height: u64,
}

impl RelationCertificate {
    /// Coefficients grouped per input value, `d` per value.
    pub fn per_value(&self) -> Vec<&[i64]> {
        self.coefficients.chunks(self.field_basis_used.len()).collect()
    }

    /// Recomputes the normalized residual at `ctx.bits`.
    pub fn residual_at(&self, values: &[BigComplex], ctx: &PrecisionContext) -> Result<Float> {
        let w = expand(values, &self.field_basis_used, ctx)?;
        let scale = max_abs(&w, ctx.bits);
        Ok(normalized_residual(&self.coefficients, &w, &scale, ctx.bits))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankEstimate {
    pub rank: usize,
    pub certificates: Vec<RelationCertificate>,
    /// No relation among the survivors has height below this.
    pub negative_bound: u64,
    pub precision_used: u32,
    /// Input indices that survived projection.
    pub survivors: Vec<usize>,
}

/// Outcome of one lattice search.
#[derive(Clone, Debug)]
pub struct Search {
    pub relation: Option<RelationCertificate>,
    /// Every relation has height at least this (saturating).
    pub negative_bound: u64,
}

fn basis_of(field: Option<&AlgebraicNumber>) -> Vec<AlgebraicNumber> {
    field.map_or_else(|| vec![AlgebraicNumber::from_i64(1)], AlgebraicNumber::field_basis)
}

fn expand(values: &[BigComplex], basis: &[AlgebraicNumber], ctx: &PrecisionContext) -> Result<Vec<BigComplex>> {
    let b: Vec<BigComplex> = basis.iter().map(|x| x.eval(ctx)).collect::<Result<_>>()?;
    Ok(values.iter().flat_map(|v| b.iter().map(move |bk| &v.with_prec(ctx.bits) * bk)).collect())
}

fn max_abs(w: &[BigComplex], bits: u32) -> Float {
    w.iter().map(BigComplex::abs).fold(Float::new(bits), |m, a| if a > m { a } else { m })
}

fn normalized_residual(c: &[i64], w: &[BigComplex], scale: &Float, bits: u32) -> Float {
    let mut acc = BigComplex::zero(bits);
    for (ci, wi) in c.iter().zip(w) {
        acc = &acc + &wi.scale_i64(*ci);
    }
    if scale.is_zero() {
        return acc.abs();
    }
    Float::with_val(bits, acc.abs() / scale)
}

fn to_int(x: &Float) -> Integer {
    x.to_integer_round(Round::Nearest).map(|(i, _)| i).unwrap_or_default()
}

fn check_height(n: usize, height: u64, ctx: &PrecisionContext) -> Result<()> {
    let lhs = (height as f64).powi(2) * n as f64;
    if lhs.log2() >= ctx.bits as f64 / 2.0 {
        return Err(Error::PrecisionInsufficient(format!(
            "height {height} with {n} values needs more than {} bits",
            ctx.bits
        )));
    }
    Ok(())
}

/// One LLL search over the basis-expanded values; never errors on a miss.
pub fn search(
    values: &[BigComplex],
    field: Option<&AlgebraicNumber>,
    height: u64,
    ctx: &PrecisionContext,
) -> Result<Search> {
    if values.is_empty() {
        return Err(Error::ShapeMismatch("relation search needs at least one value".into()));
    }
    let basis = basis_of(field);
    let w = expand(values, &basis, ctx)?;
    let n = w.len();
    check_height(n, height.max(1), ctx)?;
    let bits = ctx.bits;
    let scale = max_abs(&w, bits);
    let tol = ctx.tol();
    if scale <= tol {
        let mut c = vec![0; n];
        c[0] = 1;
        let cert = RelationCertificate { coefficients: c, field_basis_used: basis, residual: "0".into(), height: 1 };
        return Ok(Search { relation: Some(cert), negative_bound: 1 });
    }
    let mult = Float::with_val(bits, Float::i_exp(1, ctx.tol_exp() as i32)) / &scale;
    let rows = w
        .iter()
        .enumerate()
        .map(|(i, wi)| {
            let mut r: Vec<Integer> = (0..n).map(|j| Integer::from((i == j) as u32)).collect();
            r.push(to_int(&Float::with_val(bits, &wi.re * &mult)));
            r.push(to_int(&Float::with_val(bits, &wi.im * &mult)));
            r
        })
        .collect();
    let red = lll(rows);
    let mut best: Option<(u64, Vec<i64>, Float)> = None;
    for row in &red.rows {
        let c = &row[..n];
        let h = c.iter().map(|x| x.clone().abs()).max().unwrap_or_default();
        if h == 0 || h > height {
            continue;
        }
        let h = h.to_u64().expect("bounded by height");
        let ci: Vec<i64> = c.iter().map(|x| x.to_i64().expect("bounded by height")).collect();
        let res = normalized_residual(&ci, &w, &scale, bits);
        if res < tol && best.as_ref().is_none_or(|(bh, _, _)| h < *bh) {
            best = Some((h, ci, res));
        }
    }
    // a relation of height h gives a lattice vector of norm at most h·√(n + n²/2)
    let min_gs = red.gs_norms_sqr().into_iter().min().expect("nonempty basis");
    let min_gs = Float::with_val(64, min_gs).sqrt();
    let growth = ((n + n * n / 2) as f64).sqrt();
    let nb = Float::with_val(64, min_gs / growth).floor();
    let negative_bound = nb.to_integer().and_then(|i| i.to_u64()).unwrap_or(u64::MAX).max(1);
    let relation = best.map(|(h, c, res)| RelationCertificate {
        coefficients: c,
        field_basis_used: basis,
        residual: fmt_float(&res, 6),
        height: h,
    });
    Ok(Search { relation, negative_bound })
}

/// `find_relation`: a certified relation of height at most `height`, or
/// `None` when none exists at this precision.
///
/// Fails with `PrecisionInsufficient` when nothing is found but the lattice
/// cannot exclude relations up to `height`.
pub fn find_relation(
    values: &[BigComplex],
    field: Option<&AlgebraicNumber>,
    height: u64,
    ctx: &PrecisionContext,
) -> Result<Option<RelationCertificate>> {
    let s = search(values, field, height, ctx)?;
    if s.relation.is_none() && s.negative_bound < height {
        return Err(Error::PrecisionInsufficient(format!(
            "only heights below {} are excluded at {} bits",
            s.negative_bound, ctx.bits
        )));
    }
    Ok(s.relation)
}

/// `estimate_rank`: repeatedly finds a relation and drops one value it
/// involves, until no relation of height at most `height` remains.
pub fn estimate_rank(
    values: &[BigComplex],
    field: Option<&AlgebraicNumber>,
    height: u64,
    ctx: &PrecisionContext,
) -> Result<RankEstimate> {
    let mut survivors: Vec<usize> = (0..values.len()).collect();
    let mut certificates = vec![];
    loop {
        if survivors.is_empty() {
            return Ok(RankEstimate {
                rank: 0,
                certificates,
                negative_bound: u64::MAX,
                precision_used: ctx.bits,
                survivors,
            });
        }
        let current: Vec<BigComplex> = survivors.iter().map(|&i| values[i].clone()).collect();
        let s = search(&current, field, height, ctx)?;
        match s.relation {
            Some(cert) => {
                let drop =
                    cert.per_value().iter().rposition(|c| c.iter().any(|&x| x != 0)).expect("certificate is nonzero");
                survivors.remove(drop);
                certificates.push(cert);
            }
            None if s.negative_bound < height => {
                return Err(Error::PrecisionInsufficient(format!(
                    "only heights below {} are excluded at {} bits",
                    s.negative_bound, ctx.bits
                )));
            }
            None => {
                return Ok(RankEstimate {
                    rank: survivors.len(),
                    certificates,
                    negative_bound: s.negative_bound,
                    precision_used: ctx.bits,
                    survivors,
                });
            }
        }
    }
}
