use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::complex::{fmt_float, BigComplex};
use super::context::PrecisionContext;
use super::poly::{self, QPoly};
use crate::error::{Error, Result};

const SEED_BITS: u32 = 160;

/// An element of ℚ̄ pinned to one complex embedding.
///
/// The value is `root / denominator` where `root` is the zero of `minpoly`
/// nearest to `approx`. Construction checks that `approx` isolates that root:
/// it must lie closer than half the distance to every other root.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraicInput", into = "AlgebraicInput")]
pub struct AlgebraicNumber {
    minpoly: Vec<Integer>,
    approx: BigComplex,
    denominator: Integer,
    seed: BigComplex,
    iso_radius: Float,
}

impl AlgebraicNumber {
    pub fn new(minpoly: Vec<Integer>, approx: BigComplex, denominator: Integer) -> Result<Self> {
        let mut mp = minpoly;
        while mp.last().is_some_and(|c| *c == 0) {
            mp.pop();
        }
        if mp.len() < 2 {
            return Err(Error::InvalidAlgebraic("minimal polynomial must have degree ≥ 1".into()));
        }
        if denominator <= 0 {
            return Err(Error::InvalidAlgebraic("denominator must be positive".into()));
        }
        poly::primitive_in_place(&mut mp);
        let q = poly::q_from_int(&mp);
        if poly::q_deg(&poly::q_gcd(&q, &poly::q_derivative(&q))) != Some(0) {
            return Err(Error::InvalidAlgebraic("minimal polynomial is not squarefree".into()));
        }
        if mp.len() > 2 && !poly::rational_roots(&mp).is_empty() {
            return Err(Error::InvalidAlgebraic("minimal polynomial has a rational root".into()));
        }
        if !approx.is_finite() {
            return Err(Error::InvalidAlgebraic("approximation is not finite".into()));
        }
        let coeffs: Vec<BigComplex> =
            mp.iter().map(|c| BigComplex::from_rational(SEED_BITS, &Rational::from(c))).collect();
        let approx_s = approx.with_prec(SEED_BITS);
        let (seed, iso_radius) = if mp.len() == 2 {
            let r = Rational::from((-mp[0].clone(), mp[1].clone()));
            (BigComplex::from_rational(SEED_BITS, &r), Float::with_val(SEED_BITS, rug::float::Special::Infinity))
        } else {
            let roots = poly::roots(&coeffs, SEED_BITS)?;
            let (k, _) = roots
                .iter()
                .enumerate()
                .map(|(k, r)| (k, r.dist(&approx_s)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("degree ≥ 2 has roots");
            let sep = roots
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, r)| r.dist(&roots[k]))
                .min_by(|a, b| a.partial_cmp(b).unwrap())
                .unwrap();
            let half = sep / 2u32;
            if roots[k].dist(&approx_s) >= half {
                return Err(Error::InvalidAlgebraic("approximation does not isolate a unique root".into()));
            }
            (roots[k].clone(), half)
        };
        Ok(AlgebraicNumber { minpoly: mp, approx: approx_s, denominator, seed, iso_radius })
    }

    pub fn rational(q: &Rational) -> Self {
        let mp = vec![Integer::from(-q.numer()), Integer::from(q.denom())];
        AlgebraicNumber::new(mp, BigComplex::from_rational(SEED_BITS, q), Integer::from(1))
            .expect("a rational number is always a valid algebraic number")
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(&Rational::from(n))
    }

    pub fn minpoly(&self) -> &[Integer] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn denominator(&self) -> &Integer {
        &self.denominator
    }

    pub fn approx(&self) -> &BigComplex {
        &self.approx
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.degree() == 1)
            .then(|| Rational::from((-self.minpoly[0].clone(), self.minpoly[1].clone() * &self.denominator)))
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// The pinned root at `bits` of precision, before division by the denominator.
    fn root(&self, bits: u32) -> Result<BigComplex> {
        if self.is_rational() {
            let r = Rational::from((-self.minpoly[0].clone(), self.minpoly[1].clone()));
            return Ok(BigComplex::from_rational(bits, &r));
        }
        let mut prec = SEED_BITS;
        let mut z = self.seed.clone();
        let target = bits + 16;
        loop {
            prec = (prec * 2).min(target);
            z = z.with_prec(prec);
            let coeffs: Vec<BigComplex> =
                self.minpoly.iter().map(|c| BigComplex::from_rational(prec, &Rational::from(c))).collect();
            for _ in 0..3 {
                let (p, dp) = poly::eval_d(&coeffs, &z);
                if p.is_exact_zero() {
                    break;
                }
                z = &z - &(&p / &dp);
                if z.dist(&self.approx.with_prec(prec)) >= self.iso_radius {
                    return Err(Error::RootDrift);
                }
            }
            if prec == target {
                break;
            }
        }
        Ok(z.with_prec(bits))
    }

    /// `alg_eval`: the pinned value refined to `ctx.bits`.
    pub fn eval(&self, ctx: &PrecisionContext) -> Result<BigComplex> {
        self.eval_bits(ctx.bits)
    }

    pub fn eval_bits(&self, bits: u32) -> Result<BigComplex> {
        let r = self.root(bits + 8)?;
        let d = Float::with_val(bits + 8, &self.denominator);
        let v = BigComplex::new(Float::with_val(bits + 8, &r.re / &d), Float::with_val(bits + 8, &r.im / &d));
        Ok(v.with_prec(bits))
    }

    /// `alg_field_basis`: powers 1, θ, …, θ^{d−1} of this primitive element.
    pub fn field_basis(&self) -> Vec<AlgebraicNumber> {
        let d = self.degree();
        let q: QPoly = poly::q_from_int(&self.minpoly);
        let comp = poly::companion(&q);
        let mut power: Vec<Vec<Rational>> =
            (0..d).map(|i| (0..d).map(|j| Rational::from((i == j) as i32)).collect()).collect();
        let mut out = vec![AlgebraicNumber::from_i64(1)];
        let mut z = BigComplex::one(SEED_BITS);
        for k in 1..d {
            power = poly::mat_mul(&power, &comp);
            z = &z * &self.seed;
            let mp = poly::q_to_primitive(&poly::q_squarefree(&poly::charpoly(&power)));
            let den = self.denominator.clone().pow(k as u32);
            out.push(AlgebraicNumber::new(mp, z.clone(), den).expect("powers of an isolated root stay isolated"));
        }
        out
    }
}

/// `alg_eval` as a free function.
pub fn alg_eval(a: &AlgebraicNumber, ctx: &PrecisionContext) -> Result<BigComplex> {
    a.eval(ctx)
}

/// `alg_field_basis` as a free function.
pub fn alg_field_basis(field: &AlgebraicNumber) -> Vec<AlgebraicNumber> {
    field.field_basis()
}

impl std::fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mp: Vec<String> = self.minpoly.iter().map(|c| c.to_string()).collect();
        write!(f, "Alg[{}; {:?}", mp.join(","), self.approx)?;
        if self.denominator != 1 {
            write!(f, " / {}", self.denominator)?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRepr {
    Int(i64),
    Str(String),
}

impl IntRepr {
    pub fn to_integer(&self) -> Result<Integer> {
        match self {
            IntRepr::Int(n) => Ok(Integer::from(*n)),
            IntRepr::Str(s) => s.trim().parse().map_err(|_| Error::InvalidAlgebraic(format!("bad integer '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumRepr {
    Num(f64),
    Str(String),
}

impl NumRepr {
    /// Exact rational value of an integer, `"p/q"` or integral JSON number.
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            NumRepr::Num(x) if x.fract() == 0.0 && x.abs() < 2f64.powi(53) => Ok(Rational::from(*x as i64)),
            NumRepr::Num(x) => {
                Err(Error::InvalidAlgebraic(format!("{x} is not an exact rational; quote it as \"p/q\"")))
            }
            NumRepr::Str(s) => s.trim().parse().map_err(|_| Error::InvalidAlgebraic(format!("bad rational '{s}'"))),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            NumRepr::Num(x) => format!("{x:e}"),
            NumRepr::Str(s) => s.clone(),
        }
    }
}

#[derive(Clone, Serialize, Deserialize)]
pub struct ApproxJson {
    pub re: NumRepr,
    #[serde(default = "zero_repr")]
    pub im: NumRepr,
}

fn zero_repr() -> NumRepr {
    NumRepr::Str("0".into())
}

#[derive(Clone, Serialize, Deserialize)]
pub struct AlgebraicJson {
    pub minpoly: Vec<IntRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<IntRepr>,
}

/// Either the full description or a bare rational literal.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraicInput {
    Full(AlgebraicJson),
    Literal(NumRepr),
}

impl TryFrom<AlgebraicInput> for AlgebraicNumber {
    type Error = Error;
    fn try_from(j: AlgebraicInput) -> Result<Self> {
        match j {
            AlgebraicInput::Full(j) => j.try_into(),
            AlgebraicInput::Literal(n) => Ok(AlgebraicNumber::rational(&n.to_rational()?)),
        }
    }
}

impl From<AlgebraicNumber> for AlgebraicInput {
    fn from(a: AlgebraicNumber) -> Self {
        match a.as_rational() {
            Some(q) => AlgebraicInput::Literal(NumRepr::Str(q.to_string())),
            None => AlgebraicInput::Full(a.into()),
        }
    }
}

impl TryFrom<AlgebraicJson> for AlgebraicNumber {
    type Error = Error;
    fn try_from(j: AlgebraicJson) -> Result<Self> {
        let mp = j.minpoly.iter().map(IntRepr::to_integer).collect::<Result<Vec<_>>>()?;
        let approx = match &j.approx {
            Some(a) => BigComplex::parse(&a.re.to_text(), &a.im.to_text(), SEED_BITS)
                .map_err(|e| Error::InvalidAlgebraic(e.to_string()))?,
            None if mp.len() == 2 && mp[1] != 0 => {
                BigComplex::from_rational(SEED_BITS, &Rational::from((-mp[0].clone(), mp[1].clone())))
            }
            None => return Err(Error::InvalidAlgebraic("approx is required above degree 1".into())),
        };
        let den = match &j.denominator {
            Some(d) => d.to_integer()?,
            None => Integer::from(1),
        };
        AlgebraicNumber::new(mp, approx, den)
    }
}

impl From<AlgebraicNumber> for AlgebraicJson {
    fn from(a: AlgebraicNumber) -> Self {
        let (re, im) = (fmt_float(&a.approx.re, 30), fmt_float(&a.approx.im, 30));
        AlgebraicJson {
            minpoly: a.minpoly.iter().map(|c| IntRepr::Str(c.to_string())).collect(),
            approx: Some(ApproxJson { re: NumRepr::Str(re), im: NumRepr::Str(im) }),
            denominator: (a.denominator != 1).then(|| IntRepr::Str(a.denominator.to_string())),
        }
    }
}
