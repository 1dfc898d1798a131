use rug::{Integer, Rational};

use crate::arith::linalg;
use crate::arith::{BigComplex, PrecisionContext};
use crate::error::{Error, Result};
use crate::motive::{AuditMode, BakerPart};
use crate::relations::estimate_rank;

const AUDIT_HEIGHT: u64 = 1_000_000;

/// Splits `n` into a set of pairwise coprime factors `> 1`.
fn refine(base: &mut Vec<Integer>, n: Integer) {
    let mut todo = vec![n];
    while let Some(x) = todo.pop() {
        if x <= 1 {
            continue;
        }
        match base.iter().position(|b| Integer::from(b.gcd_ref(&x)) > 1) {
            None => base.push(x),
            Some(i) => {
                let b = base.swap_remove(i);
                let g = Integer::from(b.gcd_ref(&x));
                if b == x {
                    base.push(b);
                    continue;
                }
                todo.push(Integer::from(&b / &g));
                todo.push(Integer::from(&x / &g));
                todo.push(g);
            }
        }
    }
}

fn valuation(mut n: Integer, p: &Integer) -> i64 {
    let mut v = 0;
    while n.is_divisible(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Rank of the subgroup of `ℚ*` generated by `gens`, modulo torsion.
pub fn multiplicative_rank(gens: &[Rational]) -> usize {
    let mut base = vec![];
    for g in gens {
        let (n, d) = g.clone().into_numer_denom();
        refine(&mut base, n.abs());
        refine(&mut base, d);
    }
    let rows: Vec<Vec<Rational>> = gens
        .iter()
        .map(|g| {
            base.iter()
                .map(|p| Rational::from(valuation(g.numer().clone().abs(), p) - valuation(g.denom().clone(), p)))
                .collect()
        })
        .collect();
    linalg::rank(&rows)
}

/// `baker_rank`: the rank of `Σ_χ χ(L) ⊂ ℚ̄*` for the Baker part.
///
/// Uses the declared rank, else the exact rank of rational generators;
/// `None` when neither is available. Numeric audits compare the declared
/// rank with relation detection on `{2πi, log g_1, …}`.
pub fn baker_rank(part: &BakerPart, ctx: &PrecisionContext) -> Result<Option<u64>> {
    if part.is_zero() {
        return Ok(Some(0));
    }
    let Some(decl) = &part.baker else { return Ok(None) };
    let rationals: Option<Vec<Rational>> = decl.generators.iter().map(|g| g.as_rational()).collect();
    let exact = rationals.filter(|r| !r.is_empty()).map(|r| multiplicative_rank(&r) as u64);
    let declared = decl.rank.map(u64::from);
    if let (Some(d), Some(e)) = (declared, exact) {
        if d != e {
            return Err(Error::AuditFailed(format!("declared rank {d} but the generators have rank {e}")));
        }
    }
    if decl.audit == AuditMode::Numeric && !decl.generators.is_empty() {
        let mut values = vec![BigComplex::two_pi_i(ctx.bits)];
        for g in &decl.generators {
            values.push(g.eval(ctx)?.ln()?);
        }
        let numeric = estimate_rank(&values, None, AUDIT_HEIGHT, ctx)?.rank as u64 - 1;
        if let Some(d) = declared.filter(|&d| d > numeric) {
            return Err(Error::AuditFailed(format!("declared rank {d} but a relation leaves numeric rank {numeric}")));
        }
    }
    Ok(declared.or(exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::AlgebraicNumber;
    use crate::motive::BakerDecl;

    fn q(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| Rational::from((n, d))).collect()
    }

    #[test]
    fn rational_ranks() {
        assert_eq!(multiplicative_rank(&q(&[(2, 1), (3, 1)])), 2);
        assert_eq!(multiplicative_rank(&q(&[(2, 1), (4, 1)])), 1);
        assert_eq!(multiplicative_rank(&q(&[(-1, 1)])), 0);
        assert_eq!(multiplicative_rank(&q(&[(12, 1), (18, 1), (3, 2)])), 2);
        assert_eq!(multiplicative_rank(&q(&[(6, 35), (10, 21), (15, 14)])), 3);
    }

    fn part(gens: &[i64], rank: Option<u32>, audit: AuditMode) -> BakerPart {
        BakerPart {
            lattice_rank: gens.len(),
            torus_rank: 1,
            lattice_kernel_rank: gens.len(),
            torus_kernel_rank: 1,
            baker: Some(BakerDecl {
                generators: gens.iter().map(|&g| AlgebraicNumber::from_i64(g)).collect(),
                rank,
                audit,
            }),
        }
    }

    #[test]
    fn declared_ranks_are_audited() {
        let ctx = PrecisionContext::default();
        assert_eq!(baker_rank(&part(&[2, 3], None, AuditMode::None), &ctx).unwrap(), Some(2));
        assert_eq!(baker_rank(&part(&[2, 3], Some(2), AuditMode::Numeric), &ctx).unwrap(), Some(2));
        assert!(matches!(baker_rank(&part(&[2, 4], Some(2), AuditMode::None), &ctx), Err(Error::AuditFailed(_))));
        assert_eq!(baker_rank(&part(&[-1], None, AuditMode::Numeric), &ctx).unwrap(), Some(0));
    }

    #[test]
    fn numeric_audit_on_irrational_generators() {
        // √2 and 2 are multiplicatively dependent
        let sqrt2: AlgebraicNumber =
            serde_json::from_str(r#"{"minpoly": [-2, 0, 1], "approx": {"re": "1.41", "im": "0"}}"#).unwrap();
        let mut p = part(&[2], Some(2), AuditMode::Numeric);
        p.baker.as_mut().unwrap().generators.push(sqrt2);
        let ctx = PrecisionContext::default();
        assert!(matches!(baker_rank(&p, &ctx), Err(Error::AuditFailed(_))));
        p.baker.as_mut().unwrap().rank = Some(1);
        assert_eq!(baker_rank(&p, &ctx).unwrap(), Some(1));
    }
}
