//! Polynomial utilities: complex root finding and exact arithmetic over ℚ.
//!
//! Coefficient vectors are in ascending degree order everywhere.

use rug::{Float, Integer, Rational};

use super::complex::BigComplex;
use crate::error::{Error, Result};

pub fn eval(coeffs: &[BigComplex], z: &BigComplex) -> BigComplex {
    let mut acc = BigComplex::zero(z.prec());
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + c;
    }
    acc
}

/// Value and first derivative by Horner's scheme.
pub fn eval_d(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let mut p = BigComplex::zero(z.prec());
    let mut dp = BigComplex::zero(z.prec());
    for c in coeffs.iter().rev() {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + c;
    }
    (p, dp)
}

/// All complex roots by Aberth–Ehrlich iteration.
///
/// The polynomial should be squarefree; multiple roots converge only linearly
/// and are reported with correspondingly reduced accuracy.
pub fn roots(coeffs: &[BigComplex], prec: u32) -> Result<Vec<BigComplex>> {
    let mut c: Vec<BigComplex> = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|x| x.is_exact_zero()) {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return Ok(vec![]);
    }
    let wp = prec + 32;
    let c: Vec<BigComplex> = c.iter().map(|x| x.with_prec(wp)).collect();
    let lead = c[d].abs();
    // Cauchy bound on the root moduli
    let mut bound = Float::with_val(wp, 0);
    for x in &c[..d] {
        let r = Float::with_val(wp, x.abs() / &lead);
        if r > bound {
            bound = r;
        }
    }
    let radius = Float::with_val(wp, &bound + 1u32) / 2u32;
    let mut z: Vec<BigComplex> = (0..d)
        .map(|k| {
            let ang = Float::with_val(wp, super::complex::pi(wp) * (2 * k as u32 + 1)) / (d as u32) + 0.4f64;
            let (s, co) = ang.sin_cos(Float::new(wp));
            BigComplex::new(Float::with_val(wp, &co * &radius), Float::with_val(wp, &s * &radius))
        })
        .collect();
    let eps = Float::with_val(wp, Float::i_exp(1, -(prec as i32 + 8)));
    for _ in 0..(40 * d + 4 * prec as usize) {
        let mut worst = Float::with_val(wp, 0);
        for k in 0..d {
            let (p, dp) = eval_d(&c, &z[k]);
            if p.is_exact_zero() {
                continue;
            }
            let ratio = &p / &dp;
            let mut s = BigComplex::zero(wp);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    s = &s + &(&z[k] - zj).recip();
                }
            }
            let denom = &BigComplex::one(wp) - &(&ratio * &s);
            let step = &ratio / &denom;
            let rel = Float::with_val(wp, step.abs() / Float::with_val(wp, z[k].abs() + 1u32));
            if rel > worst {
                worst = rel;
            }
            z[k] = &z[k] - &step;
        }
        if !worst.is_finite() {
            return Err(Error::NoConvergence("polynomial roots".into()));
        }
        if worst < eps {
            return Ok(z.into_iter().map(|x| x.with_prec(prec)).collect());
        }
    }
    Err(Error::NoConvergence("polynomial roots".into()))
}

pub type QPoly = Vec<Rational>;

pub fn q_trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| *c == 0) {
        p.pop();
    }
}

pub fn q_from_int(p: &[Integer]) -> QPoly {
    let mut q: QPoly = p.iter().map(|c| Rational::from(c.clone())).collect();
    q_trim(&mut q);
    q
}

pub fn q_deg(p: &QPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn q_derivative(p: &QPoly) -> QPoly {
    let mut d: QPoly = p.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * Integer::from(i))).collect();
    q_trim(&mut d);
    d
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub fn q_divmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = q_deg(b).expect("division by the zero polynomial");
    let mut r = a.clone();
    q_trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Rational::new(); r.len() - db];
    let lb = b[db].clone();
    while let Some(dr) = q_deg(&r) {
        if dr < db {
            break;
        }
        let f = Rational::from(&r[dr] / &lb);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= Rational::from(&f * bc);
        }
        q[shift] = f;
        r.pop();
        q_trim(&mut r);
    }
    q_trim(&mut q);
    (q, r)
}

/// Monic greatest common divisor.
pub fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    q_trim(&mut x);
    q_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = q_divmod(&x, &y);
        x = y;
        y = r;
    }
    q_monic(&x)
}

pub fn q_monic(p: &QPoly) -> QPoly {
    match p.last() {
        None => vec![],
        Some(l) => {
            let l = l.clone();
            p.iter().map(|c| Rational::from(c / &l)).collect()
        }
    }
}

pub fn q_squarefree(p: &QPoly) -> QPoly {
    let g = q_gcd(p, &q_derivative(p));
    q_monic(&q_divmod(p, &g).0)
}

/// Scale to integer coefficients with content 1 and positive leading coefficient.
pub fn q_to_primitive(p: &QPoly) -> Vec<Integer> {
    let mut den = Integer::from(1);
    for c in p {
        den.lcm_mut(c.denom());
    }
    let mut ints: Vec<Integer> = p.iter().map(|c| c.numer() * (&den / Integer::from(c.denom()))).collect();
    primitive_in_place(&mut ints);
    ints
}

pub fn primitive_in_place(p: &mut [Integer]) {
    let mut g = Integer::new();
    for c in p.iter() {
        g.gcd_mut(c);
    }
    if g == 0 {
        return;
    }
    if p.last().is_some_and(|l| *l < 0) {
        g = -g;
    }
    for c in p.iter_mut() {
        *c /= &g;
    }
}

/// Characteristic polynomial det(xI − m) by Faddeev–LeVerrier, exact over ℚ.
pub fn charpoly(m: &[Vec<Rational>]) -> QPoly {
    let n = m.len();
    let mut coeffs = vec![Rational::new(); n + 1];
    coeffs[n] = Rational::from(1);
    let mut mk: Vec<Vec<Rational>> = vec![vec![Rational::new(); n]; n];
    for k in 1..=n {
        // M_k = A (M_{k-1} + c_{n-k+1} I)
        let mut t = mk.clone();
        for (i, row) in t.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = mat_mul(m, &t);
        let mut tr = Rational::new();
        for (i, row) in mk.iter().enumerate() {
            tr += &row[i];
        }
        coeffs[n - k] = -tr / Integer::from(k);
    }
    coeffs
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Rational::new(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += Rational::from(&a[i][k] * &bk[j]);
            }
        }
    }
    out
}

/// Companion matrix of the monic version of `p` (multiplication by x on ℚ[x]/p).
pub fn companion(p: &QPoly) -> Vec<Vec<Rational>> {
    let mp = q_monic(p);
    let d = mp.len() - 1;
    let mut c = vec![vec![Rational::new(); d]; d];
    // column j is the image of x^j, so x^j -> x^{j+1}
    for j in 0..d {
        if j + 1 < d {
            c[j + 1][j] = Rational::from(1);
        } else {
            for (i, row) in c.iter_mut().enumerate() {
                row[j] = -mp[i].clone();
            }
        }
    }
    c
}

/// Rational roots of an integer polynomial.
pub fn rational_roots(p: &[Integer]) -> Vec<Rational> {
    let mut p: Vec<Integer> = p.to_vec();
    while p.last().is_some_and(|c| *c == 0) {
        p.pop();
    }
    let mut out = vec![];
    let mut low = 0;
    while low < p.len() && p[low] == 0 {
        low += 1;
    }
    if low > 0 {
        out.push(Rational::new());
    }
    let p = &p[low..];
    if p.len() < 2 {
        return out;
    }
    let a0 = p[0].clone().abs();
    let an = p[p.len() - 1].clone().abs();
    let divs = |n: &Integer| -> Vec<Integer> {
        let mut v = vec![];
        let mut i = Integer::from(1);
        while Integer::from(&i * &i) <= *n {
            if n.is_divisible(&i) {
                v.push(i.clone());
                v.push(Integer::from(n / &i));
            }
            i += 1;
        }
        v
    };
    // trial division is only run on small end coefficients
    if a0.significant_bits() > 40 || an.significant_bits() > 40 {
        return out;
    }
    let qp = q_from_int(p);
    for num in divs(&a0) {
        for den in divs(&an) {
            for s in [1, -1] {
                let r = Rational::from((Integer::from(&num * s), den.clone()));
                let mut v = Rational::new();
                for c in qp.iter().rev() {
                    v = v * &r + c;
                }
                if v == 0 && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn qs(v: &[i64]) -> QPoly {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn roots_of_cubic() {
        // 4x^3 - 4x has roots -1, 0, 1
        let c: Vec<BigComplex> = [0, -4, 0, 4].iter().map(|&k| BigComplex::from_i64(128, k)).collect();
        let mut r: Vec<f64> = roots(&c, 128).unwrap().iter().map(|z| z.re.to_f64()).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] + 1.0).abs() < 1e-30 && r[1].abs() < 1e-30 && (r[2] - 1.0).abs() < 1e-30);
    }

    #[test]
    fn roots_residual_small() {
        let c: Vec<BigComplex> = [3, -2, 0, 5, 1, -7].iter().map(|&k| BigComplex::from_i64(200, k)).collect();
        for z in roots(&c, 200).unwrap() {
            assert!(eval(&c, &z).abs() < Float::with_val(64, 1e-50));
        }
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = qs(&[2, -3, 0, 1]);
        assert_eq!(q_squarefree(&p), qs(&[-2, 1, 1]));
        let g = q_gcd(&qs(&[-1, 0, 1]), &qs(&[1, 1]));
        assert_eq!(g, qs(&[1, 1]));
    }

    #[test]
    fn charpoly_of_companion_is_the_polynomial() {
        let p = qs(&[5, -3, 0, 2]);
        let cp = charpoly(&companion(&p));
        assert_eq!(cp, q_monic(&p));
    }

    #[test]
    fn primitive_scaling() {
        let p: QPoly = vec![Rational::from((1, 2)), Rational::from((-3, 4))];
        assert_eq!(q_to_primitive(&p), ints(&[-2, 3]));
    }

    #[test]
    fn rational_root_search() {
        let r = rational_roots(&ints(&[-2, 1, 1])); // (x+2)(x-1)
        assert!(r.contains(&Rational::from(1)) && r.contains(&Rational::from(-2)));
        assert!(rational_roots(&ints(&[-2, 0, 1])).is_empty());
        assert!(rational_roots(&ints(&[0, 0, 1])).contains(&Rational::new()));
    }
}
