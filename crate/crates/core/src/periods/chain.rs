use std::collections::BTreeMap;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::arith::BigComplex;
use crate::elliptic::{EllipticPoint, Lattice};
use crate::error::Result;

fn one() -> i64 {
    1
}

fn is_origin(s: &(i64, i64)) -> bool {
    *s == (0, 0)
}

/// One path `γ_i` with multiplicity `a_i`, given as homotopy data.
///
/// Its lift to `ℂ` runs from `log(start)` to `log(end) + mω₁ + nω₂`, with
/// both logarithms taken in the fundamental cell. `windings` counts extra
/// positive loops around named poles: `"infinity"` or a form's point label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Leg {
    #[serde(default = "one")]
    pub coeff: i64,
    pub start: EllipticPoint,
    pub end: EllipticPoint,
    #[serde(default, skip_serializing_if = "is_origin")]
    pub shift: (i64, i64),
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub windings: BTreeMap<String, i64>,
}

impl Leg {
    pub fn new(coeff: i64, start: EllipticPoint, end: EllipticPoint, shift: (i64, i64)) -> Self {
        Leg { coeff, start, end, shift, windings: BTreeMap::new() }
    }

    /// A loop at `base` in the class of `mω₁ + nω₂`.
    pub fn closed(base: EllipticPoint, shift: (i64, i64)) -> Self {
        Leg::new(1, base.clone(), base, shift)
    }

    /// A small loop at `base` winding once around the pole labelled `label`.
    pub fn residue_loop(base: EllipticPoint, label: &str, times: i64) -> Self {
        let mut leg = Leg::closed(base, (0, 0));
        leg.windings.insert(label.to_string(), times);
        leg
    }

    /// The leg whose lift runs from `v` to `v2`.
    pub fn from_lifts(coeff: i64, v: &BigComplex, v2: &BigComplex, lat: &Lattice) -> Result<Self> {
        let start = lat.exp_point(v)?;
        let end = lat.exp_point(v2)?;
        let u = log_or_zero(&start, lat)?;
        let u2 = log_or_zero(&end, lat)?;
        let gap = &(v2 - v) - &(&u2 - &u);
        let (a, b) = lat.coords(&gap);
        let round = |x: Float| x.round().to_f64() as i64;
        Ok(Leg::new(coeff, start, end, (round(a), round(b))))
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    /// `(v, v + w)`: the lifted endpoints.
    pub fn lifts(&self, lat: &Lattice) -> Result<(BigComplex, BigComplex)> {
        let v = log_or_zero(&self.start, lat)?;
        let v2 = &log_or_zero(&self.end, lat)? + &lat.point(self.shift.0, self.shift.1);
        Ok((v, v2))
    }
}

pub(crate) fn log_or_zero(p: &EllipticPoint, lat: &Lattice) -> Result<BigComplex> {
    if p.is_infinity() {
        Ok(BigComplex::zero(lat.omega1.prec()))
    } else {
        lat.log_point(p)
    }
}

fn bump<'a>(divisor: &mut Vec<(&'a EllipticPoint, i64)>, p: &'a EllipticPoint, c: i64) {
    match divisor.iter_mut().find(|(q, _)| *q == p) {
        Some(e) => e.1 += c,
        None => divisor.push((p, c)),
    }
}

/// A formal `ℤ`-linear combination `σ = Σ a_i γ_i`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chain {
    pub legs: Vec<Leg>,
}

impl Chain {
    pub fn new(legs: Vec<Leg>) -> Self {
        Chain { legs }
    }

    /// Does `σ` vanish as a chain: zero boundary divisor, zero total shift
    /// and no net winding around any pole?
    pub fn is_trivial(&self) -> bool {
        let mut divisor: Vec<(&EllipticPoint, i64)> = vec![];
        let mut shift = (0, 0);
        let mut windings: BTreeMap<&str, i64> = BTreeMap::new();
        for leg in &self.legs {
            bump(&mut divisor, &leg.end, leg.coeff);
            bump(&mut divisor, &leg.start, -leg.coeff);
            shift.0 += leg.coeff * leg.shift.0;
            shift.1 += leg.coeff * leg.shift.1;
            for (k, n) in &leg.windings {
                *windings.entry(k).or_default() += leg.coeff * n;
            }
        }
        divisor.iter().all(|(_, c)| *c == 0) && shift == (0, 0) && windings.values().all(|&n| n == 0)
    }

    /// Net winding `Σ a_i n_i(label)` around one pole.
    pub fn winding(&self, label: &str) -> i64 {
        self.legs.iter().map(|l| l.coeff * l.windings.get(label).copied().unwrap_or(0)).sum()
    }
}
