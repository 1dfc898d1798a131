use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::lattice::{round_i64, Lattice};
use crate::arith::{pi, AlgebraicNumber, BigComplex, PrecisionContext};
use crate::error::{Error, Result};

/// A coordinate known exactly or only numerically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Exact(AlgebraicNumber),
    Approx { re: String, im: String },
}

impl Coord {
    pub fn numeric(c: &BigComplex, digits: usize) -> Self {
        let (re, im) = c.to_decimal(digits);
        Coord::Approx { re, im }
    }

    pub fn eval(&self, bits: u32) -> Result<BigComplex> {
        match self {
            Coord::Exact(a) => a.eval_bits(bits),
            Coord::Approx { re, im } => BigComplex::parse(re, im, bits),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Coord::Exact(a) => a.as_rational(),
            Coord::Approx { .. } => None,
        }
    }
}

/// A point of `y² = 4x³ − g₂x − g₃`, or the origin at infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum EllipticPoint {
    Affine {
        x: Coord,
        y: Coord,
    },
    #[serde(with = "infinity_marker")]
    Infinity,
}

mod infinity_marker {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("infinity")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "infinity" {
            Ok(())
        } else {
            Err(D::Error::custom(format!("expected \"infinity\", got {s:?}")))
        }
    }
}

impl EllipticPoint {
    pub fn rational(x: i64, y: i64) -> Self {
        EllipticPoint::Affine {
            x: Coord::Exact(AlgebraicNumber::from_i64(x)),
            y: Coord::Exact(AlgebraicNumber::from_i64(y)),
        }
    }

    pub fn from_numeric(x: &BigComplex, y: &BigComplex, digits: usize) -> Self {
        EllipticPoint::Affine { x: Coord::numeric(x, digits), y: Coord::numeric(y, digits) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EllipticPoint::Infinity)
    }

    /// Numeric affine coordinates; `None` at infinity.
    pub fn xy(&self, bits: u32) -> Result<Option<(BigComplex, BigComplex)>> {
        match self {
            EllipticPoint::Infinity => Ok(None),
            EllipticPoint::Affine { x, y } => Ok(Some((x.eval(bits)?, y.eval(bits)?))),
        }
    }

    /// Curve membership: exact when everything is rational, numeric otherwise.
    pub fn check_on_curve(&self, lat: &Lattice) -> Result<()> {
        let EllipticPoint::Affine { x, y } = self else { return Ok(()) };
        let exact = (x.as_rational(), y.as_rational(), lat.g2_alg.as_ref(), lat.g3_alg.as_ref());
        if let (Some(x), Some(y), Some(g2), Some(g3)) = exact {
            if let (Some(g2), Some(g3)) = (g2.as_rational(), g3.as_rational()) {
                let rhs = (4 * x.clone() * &x * &x) - g2 * &x - g3;
                let lhs = Rational::from(&y * &y);
                return if lhs == rhs { Ok(()) } else { Err(not_on_curve(self)) };
            }
        }
        let (x, y) = self.xy(lat.wp)?.expect("affine");
        let r = &y.square() - &lat.cubic(&x);
        let scale = Float::with_val(lat.wp, 1).max(&x.abs().square()).max(&y.abs()).max(&x.abs());
        let scale = Float::with_val(lat.wp, &scale * &scale.clone().sqrt());
        if r.abs() > Float::with_val(lat.wp, lat.ctx.tol() * scale) {
            return Err(not_on_curve(self));
        }
        Ok(())
    }
}

fn not_on_curve(p: &EllipticPoint) -> Error {
    Error::NotOnCurve(serde_json::to_string(p).unwrap_or_default())
}

/// Carlson's symmetric integral `R_F` by duplication, principal branches.
fn carlson_rf(x: &BigComplex, y: &BigComplex, z: &BigComplex, wp: u32) -> Result<BigComplex> {
    let (mut x, mut y, mut z) = (x.clone(), y.clone(), z.clone());
    let quarter = Float::with_val(wp, 0.25);
    let third = Float::with_val(wp, 3).recip();
    let target = -((wp / 6) as i32) - 2;
    for _ in 0..wp {
        let a = (&(&x + &y) + &z).scale(&third);
        let dev = [&x, &y, &z].iter().filter_map(|v| (&a - *v).mag_exp()).max();
        let rel = match (dev, a.mag_exp()) {
            (None, _) => i32::MIN,
            (Some(d), Some(m)) => d - m,
            (Some(_), None) => 0,
        };
        if rel < target {
            let xx = &(&a - &x) / &a;
            let yy = &(&a - &y) / &a;
            let zz = -&(&xx + &yy);
            let e2 = &(&xx * &yy) - &zz.square();
            let e3 = &(&xx * &yy) * &zz;
            let one = BigComplex::one(wp);
            let series = &(&(&(&one - &e2.scale(&Float::with_val(wp, 10).recip()))
                + &e3.scale(&Float::with_val(wp, 14).recip()))
                + &e2.square().scale(&Float::with_val(wp, 24).recip()))
                - &(&e2 * &e3).scale(&Float::with_val(wp, Float::with_val(wp, 3) / 44u32));
            return Ok(&series / &a.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = &(&(&sx * &sy) + &(&sx * &sz)) + &(&sy * &sz);
        x = (&x + &lam).scale(&quarter);
        y = (&y + &lam).scale(&quarter);
        z = (&z + &lam).scale(&quarter);
    }
    Err(Error::NoConvergence("Carlson R_F duplication".into()))
}

/// Angular distance of `a` from the negative real axis, as a cosine-like score.
fn cut_score(a: &BigComplex) -> f64 {
    let (re, im) = a.to_c64();
    if re == 0.0 && im == 0.0 {
        return 2.0;
    }
    1.0 + re / re.hypot(im)
}

impl Lattice {
    pub fn exp_point(&self, u: &BigComplex) -> Result<EllipticPoint> {
        let (z0, _, _) = self.reduce(u)?;
        if self.near_pole(&z0) {
            return Ok(EllipticPoint::Infinity);
        }
        let (x, y) = self.wp_pair(u)?;
        Ok(EllipticPoint::from_numeric(&x, &y, self.wp as usize / 3 + 10))
    }

    /// Representative of `z` in the half-open cell `[0,1)ω₁ + [0,1)ω₂`.
    ///
    /// Coordinates within `√tol` below an integer snap up, since logarithms
    /// of 2-torsion points only carry half the working precision.
    pub fn to_cell(&self, z: &BigComplex) -> Result<BigComplex> {
        let (a, b) = self.coords(z);
        let tol = Float::with_val(self.wp, Float::i_exp(1, -(self.ctx.tol_exp() as i32) / 2));
        let m = round_i64(&Float::with_val(self.wp, &a + &tol).floor())?;
        let n = round_i64(&Float::with_val(self.wp, &b + &tol).floor())?;
        Ok(&z.with_prec(self.wp) - &self.point(m, n))
    }

    /// `u` in the fundamental cell with `(℘(u), ℘′(u)) = (x, y)`.
    pub fn log_xy(&self, x: &BigComplex, y: &BigComplex) -> Result<BigComplex> {
        let wp = self.wp;
        let x = x.with_prec(wp);
        let args: Vec<BigComplex> = self.roots.iter().map(|e| &x - e).collect();
        let worst = args.iter().map(cut_score).fold(f64::INFINITY, f64::min);
        let u = if worst > 1e-6 {
            carlson_rf(&args[0], &args[1], &args[2], wp)?
        } else {
            let p = pi(wp).to_f64();
            let best = (1..8)
                .flat_map(|k| [k as f64 * p / 8.0, -(k as f64) * p / 8.0])
                .max_by(|s, t| {
                    let score = |phi: f64| {
                        let d = BigComplex::from_f64(64, phi.cos(), phi.sin());
                        args.iter().map(|a| cut_score(&(&a.with_prec(64) / &d))).fold(f64::INFINITY, f64::min)
                    };
                    score(*s).total_cmp(&score(*t))
                })
                .expect("nonempty");
            let phi = Float::with_val(wp, best);
            let d = BigComplex::new(phi.clone().cos(), phi.clone().sin());
            let rot: Vec<BigComplex> = args.iter().map(|a| a / &d).collect();
            let half = Float::with_val(wp, -0.5);
            let dm = BigComplex::new(Float::with_val(wp, &phi * &half).cos(), Float::with_val(wp, &phi * &half).sin());
            &dm * &carlson_rf(&rot[0], &rot[1], &rot[2], wp)?
        };
        let (px, py) = self.wp_pair(&u)?;
        let u = if py.dist(y) > (&py + y).abs() { -u } else { u };
        let scale = Float::with_val(wp, 1).max(&x.abs()).max(&y.abs());
        if px.dist(&x) > Float::with_val(wp, self.ctx.tol() * scale) {
            return Err(Error::NoConvergence("elliptic logarithm failed to invert ℘".into()));
        }
        self.to_cell(&u)
    }

    pub fn log_point(&self, p: &EllipticPoint) -> Result<BigComplex> {
        let Some((x, y)) = p.xy(self.wp)? else {
            return Err(Error::PoleHit("logarithm of the point at infinity".into()));
        };
        p.check_on_curve(self)?;
        self.log_xy(&x, &y)
    }
}

pub fn elliptic_exp(u: &BigComplex, lat: &Lattice, ctx: &PrecisionContext) -> Result<EllipticPoint> {
    lat.check_ctx(ctx)?;
    lat.exp_point(u)
}

pub fn elliptic_log(p: &EllipticPoint, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    lat.check_ctx(ctx)?;
    lat.log_point(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(g2: i64, g3: i64) -> Lattice {
        let c = PrecisionContext::new(160).unwrap();
        Lattice::from_algebraic(&AlgebraicNumber::from_i64(g2), &AlgebraicNumber::from_i64(g3), &c).unwrap()
    }

    fn mod_lattice_zero(l: &Lattice, z: &BigComplex) -> bool {
        let (z0, _, _) = l.reduce(z).unwrap();
        z0.abs() < l.ctx.tol() * 16
    }

    #[test]
    fn log_of_rational_points_round_trips() {
        let l = setup(4, -4);
        for (x, y) in [(0, 2), (1, -2), (-1, 2), (3, 10), (5, -22)] {
            let p = EllipticPoint::rational(x, y);
            let u = l.log_point(&p).unwrap();
            let (a, b) = l.coords(&u);
            assert!(a >= -1e-30 && a < 1 && b >= -1e-30 && b < 1);
            let (px, py) = l.wp_pair(&u).unwrap();
            assert!(px.dist(&BigComplex::from_i64(64, x)) < 1e-35);
            assert!(py.dist(&BigComplex::from_i64(64, y)) < 1e-35);
        }
    }

    #[test]
    fn log_of_two_torsion_is_a_half_period() {
        let l = setup(4, 0);
        let u = l.log_point(&EllipticPoint::rational(1, 0)).unwrap();
        let half = l.omega1.scale(&Float::with_val(64, 0.5));
        assert!(mod_lattice_zero(&l, &(&u - &half)));
        for e in &l.roots {
            let u = l.log_xy(e, &BigComplex::zero(192)).unwrap();
            assert!(mod_lattice_zero(&l, &u.scale_i64(2)));
        }
    }

    #[test]
    fn exp_log_round_trip_on_complex_points() {
        let l = setup(100, 0);
        for (re, im) in [(0.3, 0.2), (1.1, -0.7), (-0.4, 0.05)] {
            let u = BigComplex::from_f64(192, re, im);
            let p = l.exp_point(&u).unwrap();
            let v = l.log_point(&p).unwrap();
            assert!(mod_lattice_zero(&l, &(&u - &v)));
        }
        let u = l.log_point(&EllipticPoint::rational(-4, 12)).unwrap();
        assert!(l.wp(&u).unwrap().dist(&BigComplex::from_i64(64, -4)) < 1e-35);
    }

    #[test]
    fn errors_for_bad_points() {
        let l = setup(4, -4);
        assert!(matches!(l.log_point(&EllipticPoint::Infinity), Err(Error::PoleHit(_))));
        assert!(matches!(l.log_point(&EllipticPoint::rational(0, 3)), Err(Error::NotOnCurve(_))));
        assert!(l.exp_point(&l.omega2).unwrap().is_infinity());
    }

    #[test]
    fn point_json_shapes() {
        let p: EllipticPoint = serde_json::from_str(r#"{"x":{"minpoly":[-1,1]},"y":{"re":"2","im":"0"}}"#).unwrap();
        assert!(!p.is_infinity());
        let q: EllipticPoint = serde_json::from_str(r#"{"x":1,"y":"-2/1"}"#).unwrap();
        assert_eq!(q.xy(64).unwrap().unwrap().1, BigComplex::from_i64(64, -2));
        let inf: EllipticPoint = serde_json::from_str(r#""infinity""#).unwrap();
        assert!(inf.is_infinity());
        assert_eq!(serde_json::to_string(&inf).unwrap(), r#""infinity""#);
    }
}
