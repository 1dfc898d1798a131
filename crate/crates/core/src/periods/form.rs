use serde::{Deserialize, Serialize};

use crate::arith::{AlgebraicNumber, BigComplex};
use crate::elliptic::EllipticPoint;
use crate::error::{Error, Result};

fn zero() -> AlgebraicNumber {
    AlgebraicNumber::from_i64(0)
}

fn one_poly() -> Vec<AlgebraicNumber> {
    vec![AlgebraicNumber::from_i64(1)]
}

pub(crate) fn is_zero(a: &AlgebraicNumber) -> bool {
    a.as_rational().is_some_and(|q| q == 0)
}

/// Coefficients, lowest degree first, evaluated at `bits`.
pub(crate) fn eval_coeffs(c: &[AlgebraicNumber], bits: u32) -> Result<Vec<BigComplex>> {
    c.iter().map(|a| a.eval_bits(bits)).collect()
}

pub(crate) fn horner(c: &[BigComplex], x: &BigComplex) -> BigComplex {
    c.iter().rev().fold(BigComplex::zero(x.prec()), |acc, a| &(&acc * x) + a)
}

fn degree(c: &[AlgebraicNumber]) -> Option<usize> {
    c.iter().rposition(|a| !is_zero(a))
}

/// `f = numer(x)/denom(x)` with `ℚ̄` coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalFunction {
    pub numer: Vec<AlgebraicNumber>,
    #[serde(default = "one_poly")]
    pub denom: Vec<AlgebraicNumber>,
}

impl RationalFunction {
    pub fn is_constant(&self) -> bool {
        degree(&self.numer).unwrap_or(0) == 0 && degree(&self.denom).unwrap_or(0) == 0
    }

    pub fn is_zero(&self) -> bool {
        degree(&self.numer).is_none()
    }

    pub fn eval(&self, x: &BigComplex, bits: u32, tol: &rug::Float) -> Result<BigComplex> {
        let d = horner(&eval_coeffs(&self.denom, bits)?, x);
        if d.abs() < *tol {
            return Err(Error::PoleHit("exact part has a pole at a chain endpoint".into()));
        }
        Ok(&horner(&eval_coeffs(&self.numer, bits)?, x) / &d)
    }

    /// Value at the point at infinity of the curve, i.e. `x → ∞`.
    pub fn at_infinity(&self, bits: u32) -> Result<BigComplex> {
        let (Some(n), Some(d)) = (degree(&self.numer), degree(&self.denom)) else {
            return if self.is_zero() {
                Ok(BigComplex::zero(bits))
            } else {
                Err(Error::Domain("exact part has a zero denominator".into()))
            };
        };
        match n.cmp(&d) {
            std::cmp::Ordering::Less => Ok(BigComplex::zero(bits)),
            std::cmp::Ordering::Equal => Ok(&self.numer[n].eval_bits(bits)? / &self.denom[d].eval_bits(bits)?),
            std::cmp::Ordering::Greater => Err(Error::PoleHit("exact part has a pole at infinity".into())),
        }
    }
}

/// `c·ξ_P` with the pole `P` named by `label` for winding data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThirdKindTerm {
    pub coeff: AlgebraicNumber,
    pub point: EllipticPoint,
    pub label: String,
}

/// `ϑ = a·ω + b·η + Σ c_i·ξ_{P_i} + df` on `y² = 4x³ − g₂x − g₃`, with
/// `ω = dx/y`, `η = x·dx/y` and `ξ_P = ½(y + y_P)/(x − x_P)·dx/y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialForm {
    #[serde(default = "zero")]
    pub a: AlgebraicNumber,
    #[serde(default = "zero")]
    pub b: AlgebraicNumber,
    #[serde(default)]
    pub thirds: Vec<ThirdKindTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_part: Option<RationalFunction>,
}

/// Kind of the non-exact part of a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Zero,
    FirstKind,
    Exact,
    SecondKind,
    ThirdKind,
}

impl DifferentialForm {
    pub fn first_kind(a: AlgebraicNumber) -> Self {
        DifferentialForm { a, b: zero(), thirds: vec![], exact_part: None }
    }

    pub fn exact(f: RationalFunction) -> Self {
        DifferentialForm { a: zero(), b: zero(), thirds: vec![], exact_part: Some(f) }
    }

    pub fn kind(&self) -> FormKind {
        if self.thirds.iter().any(|t| !is_zero(&t.coeff)) {
            FormKind::ThirdKind
        } else if !is_zero(&self.b) {
            FormKind::SecondKind
        } else if !is_zero(&self.a) {
            FormKind::FirstKind
        } else if self.exact_part.as_ref().is_some_and(|f| !f.is_constant()) {
            FormKind::Exact
        } else {
            FormKind::Zero
        }
    }

    /// Checks the invariants on the third-kind terms.
    pub fn validate(&self) -> Result<()> {
        for (i, t) in self.thirds.iter().enumerate() {
            if t.point.is_infinity() {
                return Err(Error::UnsupportedForm("ξ_P needs an affine point P".into()));
            }
            if t.label == "infinity" {
                return Err(Error::UnsupportedForm("the label 'infinity' is reserved".into()));
            }
            if self.thirds[..i].iter().any(|s| s.point == t.point || s.label == t.label) {
                return Err(Error::UnsupportedForm(format!("duplicate third-kind pole '{}'", t.label)));
            }
        }
        Ok(())
    }

    /// Residues as `(label, value)`: `−Σc_i` at infinity and `c_i` at `P_i`.
    pub fn residues(&self, bits: u32) -> Result<Vec<(String, BigComplex)>> {
        let mut total = BigComplex::zero(bits);
        let mut out = vec![];
        for t in &self.thirds {
            let c = t.coeff.eval_bits(bits)?;
            total = &total + &c;
            out.push((t.label.clone(), c));
        }
        out.insert(0, ("infinity".to_string(), -total));
        Ok(out)
    }
}
