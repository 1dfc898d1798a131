use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Complex number with arbitrary-precision real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `x` rounded to `digits` significant decimal digits.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest);
    normalize_decimal(&s)
}

// rug prints mantissa and exponent as "d.ddde-5"; keep that shape but trim
// trailing zeros so equal values print identically
fn normalize_decimal(s: &str) -> String {
    let (mant, exp) = match s.find(['e', '@']) {
        Some(pos) => (&s[..pos], Some(&s[pos + 1..])),
        None => (s, None),
    };
    let mant = if mant.contains('.') {
        let t = mant.trim_end_matches('0');
        t.trim_end_matches('.')
    } else {
        mant
    };
    match exp {
        Some(e) if e != "0" && e != "+0" => format!("{mant}e{}", e.trim_start_matches('+')),
        _ => mant.to_string(),
    }
}

pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| Error::Domain(format!("bad rational '{s}'")))?;
        let d: Integer = d.trim().parse().map_err(|_| Error::Domain(format!("bad rational '{s}'")))?;
        if d == 0 {
            return Err(Error::Domain(format!("zero denominator in '{s}'")));
        }
        return Ok(Float::with_val(prec, Rational::from((n, d))));
    }
    let parsed = Float::parse(t).map_err(|e| Error::Domain(format!("bad decimal '{s}': {e}")))?;
    let f = Float::with_val(prec, parsed);
    if !f.is_finite() {
        return Err(Error::Domain(format!("non-finite value '{s}'")));
    }
    Ok(f)
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        BigComplex { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(prec, 1)
    }

    pub fn i(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::with_val(prec, 1) }
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        BigComplex { re: Float::with_val(prec, n), im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_real(x: &Float) -> Self {
        BigComplex { re: x.clone(), im: Float::new(x.prec()) }
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        BigComplex { re: Float::with_val(prec, q), im: Float::new(prec) }
    }

    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self> {
        Ok(BigComplex { re: parse_float(re, prec)?, im: parse_float(im, prec)? })
    }

    pub fn two_pi_i(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: pi(prec) * 2u32 }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Binary exponent of the larger part; `None` for zero.
    pub fn mag_exp(&self) -> Option<i32> {
        match (self.re.get_exp(), self.im.get_exp()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i32::MIN).max(b.unwrap_or(i32::MIN))),
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec().max(k.prec());
        BigComplex { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        BigComplex { re: self.re.clone() * k, im: self.im.clone() * k }
    }

    pub fn mul_i(&self) -> Self {
        BigComplex { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex { re: Float::with_val(n.prec(), &self.re / &n), im: -Float::with_val(n.prec(), &self.im / &n) }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.prec());
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex { re: Float::with_val(p, &r * &c), im: Float::with_val(p, &r * &s) }
    }

    /// Principal logarithm, imaginary part in (-pi, pi].
    pub fn ln(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(BigComplex { re: self.abs().ln(), im: self.arg() })
    }

    /// Principal square root (non-negative real part).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_exact_zero() {
            return BigComplex::zero(p);
        }
        let r = self.abs();
        if !self.re.is_sign_negative() {
            let s = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let t = Float::with_val(p, &self.im / &s) / 2u32;
            BigComplex { re: s, im: t }
        } else {
            let t = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            let s = Float::with_val(p, self.im.clone().abs() / &t) / 2u32;
            let t = if self.im.is_sign_negative() { -t } else { t };
            BigComplex { re: s, im: t }
        }
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        BigComplex { re: Float::with_val(p, &s * &ch), im: Float::with_val(p, &c * &sh) }
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        BigComplex { re: Float::with_val(p, &c * &ch), im: -Float::with_val(p, &s * &sh) }
    }

    pub fn dist(&self, other: &BigComplex) -> Float {
        (self - other).abs()
    }

    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (fmt_float(&self.re, digits), fmt_float(&self.im, digits))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_decimal(20);
        write!(f, "({r} + {i}i)")
    }
}

/// Serialised as `{"re": ..., "im": ...}` decimal strings at full precision.
impl serde::Serialize for BigComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2) as usize;
        let (re, im) = self.to_decimal(digits.max(1));
        let mut st = s.serialize_struct("BigComplex", 2)?;
        st.serialize_field("re", &re)?;
        st.serialize_field("im", &im)?;
        st.end()
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        BigComplex { re, im }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        // Smith's scaling avoids overflow when |o| is extreme
        let p = self.prec().max(o.prec());
        if o.re.clone().abs() >= o.im.clone().abs() {
            let r = Float::with_val(p, &o.im / &o.re);
            let d = Float::with_val(p, &o.re + Float::with_val(p, &r * &o.im));
            let re = Float::with_val(p, &self.re + Float::with_val(p, &self.im * &r)) / &d;
            let im = Float::with_val(p, &self.im - Float::with_val(p, &self.re * &r)) / &d;
            BigComplex { re, im }
        } else {
            let r = Float::with_val(p, &o.re / &o.im);
            let d = Float::with_val(p, &o.im + Float::with_val(p, &r * &o.re));
            let re = Float::with_val(p, Float::with_val(p, &self.re * &r) + &self.im) / &d;
            let im = Float::with_val(p, Float::with_val(p, &self.im * &r) - &self.re) / &d;
            BigComplex { re, im }
        }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Arithmetic-geometric mean with the optimal sign choice at every step.
pub fn agm(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let p = a.prec().max(b.prec());
    let mut a = a.with_prec(p + 16);
    let mut b = b.with_prec(p + 16);
    let eps = Float::with_val(p + 16, Float::i_exp(1, -(p as i32 + 8)));
    for _ in 0..(4 * p as usize + 64) {
        let an = (&a + &b).scale(&Float::with_val(8, 0.5));
        let mut bn = (&a * &b).sqrt();
        if (&an - &bn).abs() > (&an + &bn).abs() {
            bn = -bn;
        }
        let done = (&an - &bn).abs() <= Float::with_val(p + 16, &eps * an.abs());
        a = an;
        b = bn;
        if done {
            break;
        }
    }
    (&a + &b).scale(&Float::with_val(8, 0.5)).with_prec(p)
}

/// A complex number as correctly rounded decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DecimalComplex {
    pub re: String,
    pub im: String,
}

impl DecimalComplex {
    pub fn new(z: &BigComplex, digits: usize) -> Self {
        let (re, im) = z.to_decimal(digits);
        DecimalComplex { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(128, re, im)
    }

    fn close(a: &BigComplex, b: &BigComplex, e: i32) -> bool {
        a.dist(b) < Float::with_val(128, Float::i_exp(1, -e))
    }

    #[test]
    fn field_operations() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        let q = &a / &b;
        assert!(close(&(&q * &b), &a, 120));
        assert!(close(&(&a - &a), &BigComplex::zero(128), 127));
        assert!(close(&a.powi(3), &(&(&a * &a) * &a), 120));
        assert!(close(&a.powi(-2), &(&a * &a).recip(), 120));
    }

    #[test]
    fn exp_log_roundtrip_and_branch() {
        let z = c(0.3, 2.9);
        assert!(close(&z.exp().ln().unwrap(), &z, 120));
        let m1 = c(-1.0, 0.0);
        let l = m1.ln().unwrap();
        assert!(close(&l, &BigComplex::new(Float::new(128), pi(128)), 120));
        assert_eq!(BigComplex::zero(64).ln(), Err(Error::ZeroArgument));
    }

    #[test]
    fn sqrt_is_principal() {
        for (re, im) in [(4.0, 0.0), (-4.0, 0.0), (-4.0, -0.0), (0.0, 2.0), (-3.0, -4.0)] {
            let z = c(re, im);
            let s = z.sqrt();
            assert!(close(&s.square(), &z, 118));
            assert!(!s.re.is_sign_negative());
        }
        assert_eq!(c(-4.0, 0.0).sqrt().to_c64(), (0.0, 2.0));
    }

    #[test]
    fn trig_identity() {
        let z = c(0.7, -1.3);
        let s = z.sin();
        let co = z.cos();
        assert!(close(&(&s.square() + &co.square()), &BigComplex::one(128), 118));
    }

    #[test]
    fn agm_matches_lemniscate_constant() {
        // 1/AGM(1, sqrt 2) is Gauss's constant 0.8346268416740731862814...
        let two = BigComplex::from_i64(128, 2).sqrt();
        let g = agm(&BigComplex::one(128), &two).recip();
        let expected = parse_float("0.83462684167407318628142973279904680899399", 128).unwrap();
        assert!(Float::with_val(128, &g.re - &expected).abs() < Float::with_val(64, 1e-36));
    }

    #[test]
    fn decimal_formatting_is_stable() {
        let x = parse_float("2.5", 64).unwrap();
        assert_eq!(fmt_float(&x, 10), "2.5");
        let y = parse_float("-0.000125", 64).unwrap();
        assert_eq!(fmt_float(&y, 3), "-1.25e-4");
        assert_eq!(fmt_float(&Float::new(64), 5), "0");
        let third = parse_float("1/3", 64).unwrap();
        assert_eq!(fmt_float(&third, 5), "3.3333e-1");
    }
}
