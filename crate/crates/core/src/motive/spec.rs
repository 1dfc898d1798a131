use std::collections::BTreeMap;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::arith::{AlgebraicNumber, NumRepr};
use crate::elliptic::EllipticPoint;
use crate::error::Result;

fn one() -> u32 {
    1
}

/// Weierstrass invariants of an elliptic block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDecl {
    pub g2: AlgebraicNumber,
    pub g3: AlgebraicNumber,
}

/// One isotypical factor `B^n` of the abelian part, with its point module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianBlockDecl {
    pub id: String,
    pub genus: u32,
    pub endo_dim: u32,
    /// Generator θ of `E(B)`; may be omitted when `E(B) = ℚ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endo_field: Option<AlgebraicNumber>,
    #[serde(default = "one")]
    pub multiplicity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveDecl>,
    /// Rank over `E(B)` of the declared point module.
    #[serde(default = "one")]
    pub basis_size: u32,
    /// Concrete points for the module basis, needed only for numeric periods.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis_points: Vec<EllipticPoint>,
}

/// An element of `E(B)`: a bare rational or power-basis coefficients in θ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldElem {
    Scalar(NumRepr),
    Coeffs(Vec<NumRepr>),
}

impl FieldElem {
    /// Coefficients padded to `degree`, or `None` if there are too many.
    pub fn coeffs(&self, degree: usize) -> Result<Option<Vec<Rational>>> {
        let mut out = vec![Rational::new(); degree.max(1)];
        match self {
            FieldElem::Scalar(x) => out[0] = x.to_rational()?,
            FieldElem::Coeffs(v) => {
                if v.len() > degree.max(1) {
                    return Ok(None);
                }
                for (o, x) in out.iter_mut().zip(v) {
                    *o = x.to_rational()?;
                }
            }
        }
        Ok(Some(out))
    }

    pub fn from_coeffs(c: &[Rational]) -> Self {
        if c.iter().skip(1).all(|x| *x == 0) {
            FieldElem::Scalar(NumRepr::Str(c.first().cloned().unwrap_or_default().to_string()))
        } else {
            FieldElem::Coeffs(c.iter().map(|x| NumRepr::Str(x.to_string())).collect())
        }
    }
}

/// Image of one basis element: per block id, a `multiplicity × basis_size`
/// matrix of `E(B)` elements. Missing blocks are zero.
pub type BlockCoords = BTreeMap<String, Vec<Vec<FieldElem>>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    #[default]
    None,
    Numeric,
}

/// Multiplicative data of the Baker part: the values `χ(l)` in `ℚ̄*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BakerDecl {
    #[serde(default)]
    pub generators: Vec<AlgebraicNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    #[serde(default)]
    pub audit: AuditMode,
}

/// Declared behaviour of the lifts of `L` into `G(ℚ̄)` under `E(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftDecl {
    pub endo_stable: bool,
}

/// Action of θ on `L_ℚ` and `X(T)_ℚ`: row `j` holds the coordinates of `θ·b_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoAction {
    #[serde(default)]
    pub lattice: Vec<Vec<NumRepr>>,
    #[serde(default)]
    pub torus: Vec<Vec<NumRepr>>,
}

/// A 1-motive `[L → G]` described by its structure maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotiveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub blocks: Vec<AbelianBlockDecl>,
    pub torus_rank: u32,
    pub lattice_rank: u32,
    #[serde(default)]
    pub torus_map: Vec<BlockCoords>,
    #[serde(default)]
    pub lattice_map: Vec<BlockCoords>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baker: Option<BakerDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<LiftDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endo_action: Option<EndoAction>,
}
