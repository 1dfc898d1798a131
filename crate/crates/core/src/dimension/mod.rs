//! The dimension `δ(M)` of the period space of a 1-motive, component by
//! component, with an exact `δ_inc3` in cataloged cases and a bound otherwise.

mod baker;

use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::arith::PrecisionContext;
use crate::error::Result;
use crate::motive::{BakerPart, NormalizedMotive, SaturationStatus};

pub use baker::{baker_rank, multiplicative_rank};

/// An exact count or a closed integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimValue {
    Exact(u64),
    Interval(u64, u64),
}

impl DimValue {
    pub fn new(lo: u64, hi: u64) -> Self {
        if lo == hi {
            DimValue::Exact(lo)
        } else {
            DimValue::Interval(lo, hi)
        }
    }

    pub fn lo(self) -> u64 {
        match self {
            DimValue::Exact(v) | DimValue::Interval(v, _) => v,
        }
    }

    pub fn hi(self) -> u64 {
        match self {
            DimValue::Exact(v) | DimValue::Interval(_, v) => v,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            DimValue::Exact(v) => Some(v),
            DimValue::Interval(..) => None,
        }
    }

    pub fn contains(self, v: u64) -> bool {
        self.lo() <= v && v <= self.hi()
    }
}

impl Add for DimValue {
    type Output = DimValue;
    fn add(self, o: DimValue) -> DimValue {
        DimValue::new(self.lo() + o.lo(), self.hi() + o.hi())
    }
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::Exact(v) => write!(f, "{v}"),
            DimValue::Interval(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

impl Serialize for DimValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DimValue::Exact(v) => s.serialize_u64(*v),
            DimValue::Interval(lo, hi) => [lo, hi].serialize(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    BoundViaSaturation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub value: DimValue,
    pub provenance: Provenance,
}

impl Component {
    fn exact(v: u64) -> Self {
        Component { value: DimValue::Exact(v), provenance: Provenance::Exact }
    }

    fn bound(lo: u64, hi: u64) -> Self {
        let value = DimValue::new(lo, hi);
        let provenance = if lo == hi { Provenance::Exact } else { Provenance::BoundViaSaturation };
        Component { value, provenance }
    }
}

/// Which cataloged case fixed `δ_inc3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inc3Case {
    /// `L = 0` or `T = 0`.
    SemiAbelianOrSecondKind,
    /// `A = 0`: the multiplicative rank of the structure values.
    Baker,
    Saturated,
    /// `L` has no `End(A)`-relations, so `R_inc3 = 0`.
    EndFreeLattice,
    /// Reduced CM elliptic motive with `r = t = 2`.
    CmRankTwo,
    /// Baker part plus a saturated reduced part.
    BakerTimesSaturated,
    SaturationBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub id: String,
    pub genus: u32,
    pub endo_dim: u32,
    pub multiplicity: u32,
    pub rank_l: usize,
    pub rank_t: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionReport {
    pub delta_ta: Component,
    pub delta_ab: Component,
    pub delta_alg: Component,
    pub delta_3: Component,
    pub delta_inc2: Component,
    pub delta_inc3: Component,
    pub delta_total: Component,
    pub inc3_case: Inc3Case,
    pub reduced: bool,
    pub saturation: SaturationStatus,
    pub blocks: Vec<BlockReport>,
    /// Assumptions the numbers rest on.
    pub assumptions: Vec<String>,
}

/// `rank_L`: `dim_E(B)` of `Hom(A,B)·L`.
pub fn rank_l(m: &NormalizedMotive, block: &str) -> Option<usize> {
    m.block(block).map(|b| m.rank_l(b))
}

/// `rank_T`: `dim_E(B)` of `Hom(A^∨,B^∨)·X(T)`.
pub fn rank_t(m: &NormalizedMotive, block: &str) -> Option<usize> {
    m.block(block).map(|b| m.rank_t(b))
}

fn baker_component(part: &BakerPart, ctx: &PrecisionContext) -> Result<DimValue> {
    Ok(match baker_rank(part, ctx)? {
        Some(r) => DimValue::Exact(r),
        None => DimValue::new(0, part.pairing_bound() as u64),
    })
}

/// Exact `δ_inc3` for a reduced motive when a cataloged case applies.
fn inc3_reduced(m: &NormalizedMotive) -> Option<(DimValue, Inc3Case)> {
    let (r, t) = (m.lattice_rank(), m.torus_rank());
    let status = m.saturation_status();
    if status == SaturationStatus::Saturated {
        let v = m.blocks.iter().map(|b| b.field.degree * m.rank_l(b) * m.rank_t(b)).sum::<usize>();
        return Some((DimValue::Exact(v as u64), Inc3Case::Saturated));
    }
    if !m.blocks.is_empty() && m.blocks.iter().all(|b| m.rank_l(b) == r * b.copies()) {
        return Some((DimValue::Exact((r * t) as u64), Inc3Case::EndFreeLattice));
    }
    let cm_elliptic = match m.blocks.as_slice() {
        [b] => b.decl.genus == 1 && b.field.degree == 2 && b.copies() == 1,
        _ => false,
    };
    if cm_elliptic && r == 2 && t == 2 {
        let v = match status {
            SaturationStatus::Saturated => DimValue::Exact(2),
            SaturationStatus::NotSaturated => DimValue::Exact(4),
            SaturationStatus::Unknown => DimValue::Interval(2, 4),
        };
        return Some((v, Inc3Case::CmRankTwo));
    }
    None
}

/// `δ_inc3` of the saturation product `M₀ × M₁` of a reduced motive.
fn inc3_saturation_bound(m: &NormalizedMotive) -> u64 {
    let s = m.saturation_ranks();
    let m1: usize = m.blocks.iter().map(|b| b.field.degree * m.rank_l(b) * m.rank_t(b)).sum();
    (s.kernel_bound * s.torus_sat_dim + m1) as u64
}

/// `δ_inc3` with the case that decided it.
pub fn delta_inc3(m: &NormalizedMotive, ctx: &PrecisionContext) -> Result<(Component, Inc3Case)> {
    let (r, t) = (m.lattice_rank() as u64, m.torus_rank() as u64);
    if r == 0 || t == 0 {
        return Ok((Component::exact(0), Inc3Case::SemiAbelianOrSecondKind));
    }
    if m.is_baker_type() {
        let v = baker_component(&m.baker_part(), ctx)?;
        return Ok((Component::bound(v.lo(), v.hi()), Inc3Case::Baker));
    }
    let (bk, red) = if m.is_reduced() {
        (DimValue::Exact(0), m.clone())
    } else {
        let (part, red) = m.reduce()?;
        (baker_component(&part, ctx)?, red)
    };
    if let Some((v, case)) = inc3_reduced(&red) {
        let case = if m.is_reduced() {
            case
        } else if bk.exact().is_some() && case == Inc3Case::Saturated {
            Inc3Case::BakerTimesSaturated
        } else {
            Inc3Case::SaturationBound
        };
        if case != Inc3Case::SaturationBound {
            let total = bk + v;
            return Ok((Component::bound(total.lo(), total.hi()), case));
        }
    }
    let red_hi = if red.lattice_rank() == 0 || red.torus_rank() == 0 { 0 } else { inc3_saturation_bound(&red) };
    let hi = (bk.hi() + red_hi).min(r * t);
    Ok((Component::bound(0, hi), Inc3Case::SaturationBound))
}

/// The full report `δ = δ(T) + Σ4g²/e + δ(L) + Σ2g·(rk_T + rk_L) + δ_inc3`.
pub fn dimension_report(m: &NormalizedMotive) -> Result<DimensionReport> {
    dimension_report_with(m, &PrecisionContext::default())
}

/// As [`dimension_report`], with the precision used by numeric Baker audits.
pub fn dimension_report_with(m: &NormalizedMotive, ctx: &PrecisionContext) -> Result<DimensionReport> {
    let blocks: Vec<BlockReport> = m
        .blocks
        .iter()
        .map(|b| BlockReport {
            id: b.decl.id.clone(),
            genus: b.decl.genus,
            endo_dim: b.decl.endo_dim,
            multiplicity: b.decl.multiplicity,
            rank_l: m.rank_l(b),
            rank_t: m.rank_t(b),
        })
        .collect();
    let delta_ta = Component::exact((m.torus_rank() > 0) as u64);
    let delta_alg = Component::exact((m.lattice_rank() > 0) as u64);
    let delta_ab = Component::exact(blocks.iter().map(|b| 4 * (b.genus as u64).pow(2) / b.endo_dim as u64).sum());
    let delta_3 = Component::exact(blocks.iter().map(|b| 2 * b.genus as u64 * b.rank_t as u64).sum());
    let delta_inc2 = Component::exact(blocks.iter().map(|b| 2 * b.genus as u64 * b.rank_l as u64).sum());
    let (delta_inc3, inc3_case) = delta_inc3(m, ctx)?;
    let parts = [delta_ta, delta_ab, delta_alg, delta_3, delta_inc2, delta_inc3];
    let total = parts.iter().fold(DimValue::Exact(0), |acc, c| acc + c.value);
    let mut assumptions = vec![];
    if !m.blocks.is_empty() {
        assumptions.push("isogeny decomposition of A into the declared blocks".to_string());
        assumptions.push("independence of the declared point-module bases".to_string());
    }
    if m.spec.baker.as_ref().is_some_and(|b| b.rank.is_some()) {
        assumptions.push("declared multiplicative rank of the Baker part".to_string());
    }
    if m.spec.lifts.is_some() {
        assumptions.push("declared End(A)-behaviour of the lifts of L".to_string());
    }
    Ok(DimensionReport {
        delta_ta,
        delta_ab,
        delta_alg,
        delta_3,
        delta_inc2,
        delta_inc3,
        delta_total: Component::bound(total.lo(), total.hi()),
        inc3_case,
        reduced: m.is_reduced(),
        saturation: m.saturation_status(),
        blocks,
        assumptions,
    })
}
