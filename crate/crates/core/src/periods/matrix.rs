use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::chain::{Chain, Leg};
use super::elliptic::{incomplete_first, incomplete_second, incomplete_third, reduce_two_pi_i};
use crate::arith::{AlgebraicNumber, BigComplex, DecimalComplex, PrecisionContext};
use crate::dimension::{DimValue, DimensionReport};
use crate::elliptic::{EllipticPoint, Lattice};
use crate::error::{Error, Result};
use crate::motive::{BlockInfo, NormalizedMotive};
use crate::relations::{estimate_rank, RankEstimate};

/// Which summand of the period space an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockTag {
    #[serde(rename = "Ta")]
    Tate,
    #[serde(rename = "3")]
    Third,
    #[serde(rename = "inc3")]
    IncThird,
    #[serde(rename = "ab")]
    Abelian,
    #[serde(rename = "inc2")]
    IncSecond,
    #[serde(rename = "alg")]
    Algebraic,
    #[serde(rename = "zero")]
    Zero,
}

/// Path data beyond the motive itself.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathData {
    /// Base point of the closed loops `σ_k`, `ε₁`, `ε₂`; one per elliptic copy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<EllipticPoint>,
    /// `β_jk`: algebraic torus coordinates of the lift of `l_j`, paired with `χ_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift_constants: Option<Vec<Vec<AlgebraicNumber>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub entries: Vec<Vec<BigComplex>>,
    pub tags: Vec<Vec<BlockTag>>,
    pub precision_bits: u32,
}

/// One elliptic copy with its lattice and the logarithms of `L` and `X(T)`.
struct Copy {
    name: String,
    lat: Lattice,
    base: EllipticPoint,
    lattice_u: Vec<BigComplex>,
    torus_u: Vec<BigComplex>,
}

fn block_lattice(b: &BlockInfo, ctx: &PrecisionContext) -> Result<Lattice> {
    if b.decl.genus != 1 {
        return Err(Error::Domain(format!("block '{}' is not elliptic", b.decl.id)));
    }
    let c = b.decl.curve.as_ref().ok_or_else(|| Error::Domain(format!("block '{}' declares no curve", b.decl.id)))?;
    Lattice::from_algebraic(&c.g2, &c.g3, ctx)
}

/// Integer coordinates of `θω₁`, `θω₂`, or `FieldMismatch` if `θΛ ⊄ Λ`.
fn check_multiplication(theta: &BigComplex, lat: &Lattice) -> Result<()> {
    for w in [&lat.omega1, &lat.omega2] {
        let (a, b) = lat.coords(&(theta * w));
        let off = |x: &Float| Float::with_val(x.prec(), x - x.clone().round()).abs();
        if off(&a) > lat.ctx().tol() || off(&b) > lat.ctx().tol() {
            return Err(Error::FieldMismatch("θ does not act on the period lattice".into()));
        }
    }
    Ok(())
}

fn coordinates(
    b: &BlockInfo,
    row: &[Rational],
    copy: usize,
    basis_u: &[BigComplex],
    powers: &[BigComplex],
) -> BigComplex {
    let prec = powers[0].prec();
    let d = b.field.degree;
    let slice = &b.copy_rows(row)[copy];
    let mut acc = BigComplex::zero(prec);
    for (k, u) in basis_u.iter().enumerate() {
        for (j, p) in powers.iter().enumerate() {
            let q = &slice[k * d + j];
            if *q != 0 {
                let c = &BigComplex::from_rational(prec, q) * p;
                acc = &acc + &(&c * u);
            }
        }
    }
    acc
}

fn generic_base(lat: &Lattice, avoid: &[BigComplex]) -> Result<EllipticPoint> {
    let prec = lat.omega1.prec();
    let tries = [(0.4142, 0.2718), (0.1732, 0.6180), (0.7023, 0.5772), (0.3137, 0.8660)];
    for (a, b) in tries {
        let v = &lat.omega1.scale(&Float::with_val(prec, a)) + &lat.omega2.scale(&Float::with_val(prec, b));
        let clear = avoid.iter().all(|u| {
            let (d, _, _) = lat.reduce(&(&v - u)).expect("finite");
            d.abs() > Float::with_val(prec, lat.omega1.abs() * 0.01)
        });
        if clear {
            return lat.exp_point(&v);
        }
    }
    Err(Error::PoleHit("no base point away from the third-kind poles".into()))
}

fn copies(m: &NormalizedMotive, paths: &PathData, ctx: &PrecisionContext) -> Result<Vec<Copy>> {
    let mut out = vec![];
    for b in &m.blocks {
        let lat = block_lattice(b, ctx)?;
        let n = b.decl.basis_size as usize;
        if b.decl.basis_points.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "block '{}' needs {n} basis points for numeric periods",
                b.decl.id
            )));
        }
        let basis_u = b.decl.basis_points.iter().map(|p| lat.log_point(p)).collect::<Result<Vec<_>>>()?;
        let prec = lat.omega1.prec();
        let mut powers = vec![BigComplex::one(prec)];
        if let Some(theta) = &b.field.theta {
            let t = theta.eval_bits(prec)?;
            check_multiplication(&t, &lat)?;
            for _ in 1..b.field.degree {
                let next = powers.last().expect("nonempty") * &t;
                powers.push(next);
            }
        }
        for c in 0..b.copies() {
            let lattice_u = m.lattice_images.iter().map(|row| coordinates(b, row, c, &basis_u, &powers)).collect();
            let torus_u: Vec<BigComplex> =
                m.torus_images.iter().map(|row| coordinates(b, row, c, &basis_u, &powers)).collect();
            let base = match &paths.base_point {
                Some(p) => p.clone(),
                None => generic_base(&lat, &torus_u)?,
            };
            let name = if b.copies() == 1 { b.decl.id.clone() } else { format!("{}.{}", b.decl.id, c + 1) };
            out.push(Copy { name, lat: lat.clone(), base, lattice_u, torus_u });
        }
    }
    Ok(out)
}

fn on_lattice(z: &BigComplex, lat: &Lattice) -> Result<bool> {
    let (z0, _, _) = lat.reduce(z)?;
    Ok(z0.abs() <= lat.ctx().tol() || lat.near_pole(&z0))
}

/// `∫ η` from `e_∞` to `exp(v)` after removing the pole with `d(y/(2(x−c)))`.
fn regularised_eta(v: &BigComplex, lat: &Lattice) -> Result<BigComplex> {
    if on_lattice(v, lat)? {
        return Ok(BigComplex::zero(v.prec()));
    }
    let (x, y) = lat.wp_pair(v)?;
    let c =
        if x.abs() <= Float::with_val(x.prec(), 0.5) { BigComplex::one(x.prec()) } else { BigComplex::zero(x.prec()) };
    let corr = &y / &(&x - &c).scale_i64(2);
    Ok(-&(&lat.zeta(v)? + &corr))
}

fn point_label(k: usize) -> String {
    format!("P{}", k + 1)
}

impl PeriodMatrix {
    pub fn entry(&self, row: &str, col: &str) -> Option<(&BigComplex, BlockTag)> {
        let i = self.rows.iter().position(|r| r == row)?;
        let j = self.columns.iter().position(|c| c == col)?;
        Some((&self.entries[i][j], self.tags[i][j]))
    }

    /// Decimal strings at `digits` significant digits.
    pub fn to_report(&self, digits: usize) -> PeriodMatrixReport {
        let entries =
            self.entries.iter().map(|row| row.iter().map(|z| DecimalComplex::new(z, digits)).collect()).collect();
        PeriodMatrixReport {
            rows: self.rows.clone(),
            columns: self.columns.clone(),
            entries,
            tags: self.tags.clone(),
            precision_bits: self.precision_bits,
        }
    }

    /// Entries of the non-zero blocks with duplicates and exact zeros removed.
    pub fn predicted_entries(&self, tol: &Float) -> Vec<BigComplex> {
        let mut out: Vec<BigComplex> = vec![];
        for (row, tags) in self.entries.iter().zip(&self.tags) {
            for (z, tag) in row.iter().zip(tags) {
                if *tag == BlockTag::Zero || z.abs() <= *tol {
                    continue;
                }
                if out.iter().any(|w| w.dist(z) <= *tol || (w + z).abs() <= *tol) {
                    continue;
                }
                out.push(z.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodMatrixReport {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub entries: Vec<Vec<DecimalComplex>>,
    pub tags: Vec<Vec<BlockTag>>,
    pub precision_bits: u32,
}

/// The full period matrix of an elliptic 1-motive.
///
/// Rows `u_j, ω, η, ξ_k` against columns `σ_k, ε₁, ε₂, γ_j`, one `ω, η` pair
/// and `ε₁, ε₂` pair per elliptic copy. Entries of the `ξ` rows are defined
/// modulo `2πi`.
pub fn period_matrix(m: &NormalizedMotive, paths: &PathData, ctx: &PrecisionContext) -> Result<PeriodMatrix> {
    let (r, t) = (m.lattice_rank(), m.torus_rank());
    let copies = copies(m, paths, ctx)?;
    let prec = copies.first().map_or(ctx.bits + 32, |c| c.lat.omega1.prec());
    let betas = match &paths.lift_constants {
        None => vec![vec![BigComplex::one(prec); t]; r],
        Some(rows) => {
            if rows.len() != r || rows.iter().any(|x| x.len() != t) {
                return Err(Error::ShapeMismatch(format!("lift_constants must be {r}×{t}")));
            }
            rows.iter().map(|x| x.iter().map(|b| b.eval_bits(prec)).collect()).collect::<Result<_>>()?
        }
    };

    let mut rows: Vec<String> = (1..=r).map(|j| format!("u{j}")).collect();
    let mut columns: Vec<String> = (1..=t).map(|k| format!("sigma{k}")).collect();
    for c in &copies {
        rows.push(format!("omega[{}]", c.name));
        rows.push(format!("eta[{}]", c.name));
        columns.push(format!("eps1[{}]", c.name));
        columns.push(format!("eps2[{}]", c.name));
    }
    rows.extend((1..=t).map(|k| format!("xi{k}")));
    columns.extend((1..=r).map(|j| format!("gamma{j}")));

    let (nr, nc) = (rows.len(), columns.len());
    let mut entries = vec![vec![BigComplex::zero(prec); nc]; nr];
    let mut tags = vec![vec![BlockTag::Zero; nc]; nr];
    let n_copies = copies.len();
    let eps_col = |c: usize, i: usize| t + 2 * c + i;
    let gamma_col = |j: usize| t + 2 * n_copies + j;
    let xi_row = |k: usize| r + 2 * n_copies + k;

    for j in 0..r {
        entries[j][gamma_col(j)] = BigComplex::one(prec);
        for jj in 0..r {
            tags[j][gamma_col(jj)] = BlockTag::Algebraic;
        }
    }

    for (ci, c) in copies.iter().enumerate() {
        let (w_row, e_row) = (r + 2 * ci, r + 2 * ci + 1);
        for cj in 0..n_copies {
            for i in 0..2 {
                tags[w_row][eps_col(cj, i)] = BlockTag::Abelian;
                tags[e_row][eps_col(cj, i)] = BlockTag::Abelian;
            }
        }
        for (i, shift) in [(1, 0), (0, 1)].into_iter().enumerate() {
            let eps = Chain::new(vec![Leg::closed(c.base.clone(), shift)]);
            entries[w_row][eps_col(ci, i)] = incomplete_first(&eps, &c.lat, ctx)?;
            entries[e_row][eps_col(ci, i)] = incomplete_second(&eps, &c.lat, ctx)?;
            for k in 0..t {
                if on_lattice(&c.torus_u[k], &c.lat)? {
                    continue;
                }
                let p = c.lat.exp_point(&c.torus_u[k])?;
                let v = incomplete_third(&eps, &p, &point_label(k), &[], &c.lat, ctx)?;
                entries[xi_row(k)][eps_col(ci, i)] = v;
            }
        }
        for j in 0..r {
            tags[w_row][gamma_col(j)] = BlockTag::IncSecond;
            tags[e_row][gamma_col(j)] = BlockTag::IncSecond;
            entries[w_row][gamma_col(j)] = c.lattice_u[j].clone();
            entries[e_row][gamma_col(j)] = regularised_eta(&c.lattice_u[j], &c.lat)?;
        }
    }

    for k in 0..t {
        for ci in 0..n_copies {
            for i in 0..2 {
                tags[xi_row(k)][eps_col(ci, i)] = BlockTag::Third;
            }
        }
        for l in 0..t {
            tags[xi_row(k)][l] = BlockTag::Tate;
            // a loop around the fibre over P_l, on the first copy where χ_l lives
            let Some(c) = copies.iter().find(|c| !on_lattice(&c.torus_u[l], &c.lat).unwrap_or(true)) else {
                entries[xi_row(k)][l] = BigComplex::two_pi_i(prec).scale_i64((k == l) as i64);
                continue;
            };
            let loop_l = Chain::new(vec![Leg::residue_loop(c.base.clone(), &point_label(l), 1)]);
            let mut v = BigComplex::zero(prec);
            if !on_lattice(&c.torus_u[k], &c.lat)? {
                let p = c.lat.exp_point(&c.torus_u[k])?;
                v = incomplete_third(&loop_l, &p, &point_label(k), &[], &c.lat, ctx)?;
            }
            entries[xi_row(k)][l] = v;
        }
        for j in 0..r {
            tags[xi_row(k)][gamma_col(j)] = BlockTag::IncThird;
            let mut acc = betas[j][k].ln()?;
            for c in &copies {
                let (v, u) = (&c.lattice_u[j], &c.torus_u[k]);
                if on_lattice(v, &c.lat)? || on_lattice(u, &c.lat)? {
                    continue;
                }
                if on_lattice(&(v - u), &c.lat)? {
                    return Err(Error::PoleHit(format!("γ{} ends on the pole of ξ{}", j + 1, k + 1)));
                }
                acc = &acc + &c.lat.log_f_factor(v, u)?;
            }
            entries[xi_row(k)][gamma_col(j)] = reduce_two_pi_i(&acc);
        }
    }

    Ok(PeriodMatrix { rows, columns, entries, tags, precision_bits: ctx.bits })
}

/// How the numeric rank compares with the predicted dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    AbovePrediction,
    BelowPrediction,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub predicted: DimValue,
    pub rank: RankEstimate,
    pub values: usize,
    pub verdict: Verdict,
}

/// Runs relation detection on the predicted entries of `pm` and compares the
/// rank with `δ(M)`. Relations are sought over the CM field when the motive
/// has a single CM block, else over `ℚ`.
pub fn verify(
    m: &NormalizedMotive,
    pm: &PeriodMatrix,
    report: &DimensionReport,
    height: u64,
    ctx: &PrecisionContext,
) -> Result<Verification> {
    let mut values = pm.predicted_entries(&ctx.tol());
    let one = BigComplex::one(ctx.bits + 32);
    if !values.iter().any(|v| v.dist(&one) <= ctx.tol()) {
        values.insert(0, one);
    }
    let field = match m.blocks.as_slice() {
        [b] if b.field.is_imaginary_quadratic() => b.field.theta.as_ref(),
        _ => None,
    };
    let rank = estimate_rank(&values, field, height, ctx)?;
    let predicted = report.delta_total.value;
    let r = rank.rank as u64;
    let verdict = if predicted.contains(r) {
        Verdict::Consistent
    } else if r > predicted.hi() {
        Verdict::AbovePrediction
    } else {
        Verdict::BelowPrediction
    };
    Ok(Verification { predicted, rank, values: values.len(), verdict })
}
