//! Integral LLL (δ = 3/4) on row vectors, with exact Gram–Schmidt data.

use rug::{Integer, Rational};

/// A reduced basis together with the Gram–Schmidt denominators `d_i`.
pub struct Reduced {
    pub rows: Vec<Vec<Integer>>,
    /// `d[i] = ∏_{j<i} |b_j*|²`, with `d[0] = 1`.
    d: Vec<Integer>,
}

impl Reduced {
    /// `|b_i*|²` for every row.
    pub fn gs_norms_sqr(&self) -> Vec<Rational> {
        (1..self.d.len()).map(|i| Rational::from((self.d[i].clone(), self.d[i - 1].clone()))).collect()
    }
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| Integer::from(x * y)).sum()
}

fn round_div(a: &Integer, b: &Integer) -> Integer {
    let two_a = Integer::from(a * 2u32) + b;
    two_a.div_rem_floor(Integer::from(b * 2u32)).0
}

struct State {
    b: Vec<Vec<Integer>>,
    lam: Vec<Vec<Integer>>,
    d: Vec<Integer>,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        if Integer::from(&self.lam[k][l] * 2u32).abs() <= self.d[l + 1] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l + 1]);
        let bl = self.b[l].clone();
        for (x, y) in self.b[k].iter_mut().zip(&bl) {
            *x -= Integer::from(&q * y);
        }
        self.lam[k][l] -= Integer::from(&q * &self.d[l + 1]);
        for i in 0..l {
            let t = Integer::from(&q * &self.lam[l][i]);
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let big_b = (Integer::from(&self.d[k - 1] * &self.d[k + 1]) + Integer::from(&lam * &lam)) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] =
                (Integer::from(&self.d[k + 1] * &self.lam[i][k - 1]) - Integer::from(&lam * &t)) / &self.d[k];
            self.lam[i][k - 1] = (Integer::from(&big_b * &t) + Integer::from(&lam * &self.lam[i][k])) / &self.d[k + 1];
        }
        self.d[k] = big_b;
    }

    fn lovasz_fails(&self, k: usize) -> bool {
        let lhs = Integer::from(&self.d[k + 1] * &self.d[k - 1]) * 4u32;
        let rhs = Integer::from(self.d[k].square_ref()) * 3u32 - Integer::from(self.lam[k][k - 1].square_ref()) * 4u32;
        lhs < rhs
    }
}

/// LLL-reduces linearly independent integer rows.
///
/// Panics if the rows are dependent; callers build bases with an
/// identity block so this cannot happen.
pub fn lll(rows: Vec<Vec<Integer>>) -> Reduced {
    let n = rows.len();
    let mut s = State { lam: vec![vec![Integer::new(); n]; n], d: vec![Integer::from(1); n + 1], b: rows };
    if n == 0 {
        return Reduced { rows: s.b, d: s.d };
    }
    s.d[1] = dot(&s.b[0], &s.b[0]);
    let (mut k, mut kmax) = (1, 0);
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&s.b[k], &s.b[j]);
                for i in 0..j {
                    u = (Integer::from(&s.d[i + 1] * &u) - Integer::from(&s.lam[k][i] * &s.lam[j][i])) / &s.d[i];
                }
                if j < k {
                    s.lam[k][j] = u;
                } else {
                    assert!(u != 0, "lll: rows are linearly dependent");
                    s.d[k + 1] = u;
                }
            }
        }
        s.red(k, k - 1);
        if s.lovasz_fails(k) {
            s.swap(k, kmax);
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                s.red(k, l);
            }
            k += 1;
        }
    }
    Reduced { rows: s.b, d: s.d }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Integer>> {
        rows.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect()
    }

    #[test]
    fn reduces_textbook_basis() {
        let r = lll(ints(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]));
        assert_eq!(r.rows, ints(&[&[0, 1, 0], &[1, 0, 1], &[-1, 0, 2]]));
        let prod: Rational = r.gs_norms_sqr().into_iter().product();
        assert_eq!(prod, 9);
    }

    #[test]
    fn finds_short_vector_in_knapsack() {
        // 3·a + 5·b − 8·c = 0 hidden in a scaled column
        let big = 1i64 << 40;
        let r = lll(ints(&[&[1, 0, 0, 3 * big], &[0, 1, 0, 5 * big], &[0, 0, 1, -8 * big]]));
        let first = &r.rows[0];
        assert_eq!(first[3], 0);
        assert_eq!(dot(first, first), 3);
    }
}
